//! Periodic networks: a quotient graph embedded by one position per vertex
//! together with the lattice that generates the full network.

use crate::error::{Error, Result};
use crate::graph::{Incidence, QuotientEdge, QuotientGraph};
use crate::lattice::{Lattice, DEGENERACY_TOLERANCE};
use crate::linalg;
use crate::scalar::Scalar;

/// Two unit directions closer than this count as the same direction.
pub const IMMERSION_TOLERANCE: f64 = 1e-10;

/// Residual threshold for calling a vertex balanced.
pub const STEINER_TOLERANCE: f64 = 1e-9;

#[derive(Debug, Clone, PartialEq)]
pub struct PeriodicNetwork<T> {
    graph: QuotientGraph,
    positions: Vec<Vec<T>>,
    lattice: Lattice<T>,
}

#[derive(Debug, Clone, PartialEq)]
pub struct NetworkMetrics<T> {
    pub length: T,
    pub volume: T,
    /// `length^n / volume`
    pub ratio: T,
    pub per_vertex_balancing_residual: Vec<T>,
}

/// A lifted copy of one quotient edge.
#[derive(Debug, Clone, PartialEq)]
pub struct Segment<T> {
    pub edge: usize,
    pub cell: Vec<i64>,
    pub start: Vec<T>,
    pub end: Vec<T>,
}

/// Half-open box `[lower, upper)` of lattice cells.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CellRange {
    pub lower: Vec<i64>,
    pub upper: Vec<i64>,
}

impl CellRange {
    pub fn new(lower: Vec<i64>, upper: Vec<i64>) -> Result<Self> {
        if lower.len() != upper.len() {
            return Err(Error::DimensionMismatch("cell range bounds differ in length".into()));
        }
        Ok(CellRange { lower, upper })
    }

    /// `[0, counts_i)` along each axis.
    pub fn counts(counts: &[i64]) -> Self {
        CellRange {
            lower: vec![0; counts.len()],
            upper: counts.to_vec(),
        }
    }

    pub fn single(dimension: usize) -> Self {
        CellRange::counts(&vec![1; dimension])
    }

    pub fn is_empty(&self) -> bool {
        self.lower.is_empty() || self.lower.iter().zip(&self.upper).any(|(l, u)| u <= l)
    }

    /// Cells in lexicographic order, first axis slowest.
    pub fn cells(&self) -> Vec<Vec<i64>> {
        if self.is_empty() {
            return Vec::new();
        }
        let mut out = Vec::new();
        let mut cur = self.lower.clone();
        loop {
            out.push(cur.clone());
            let mut axis = cur.len();
            loop {
                if axis == 0 {
                    return out;
                }
                axis -= 1;
                cur[axis] += 1;
                if cur[axis] < self.upper[axis] {
                    break;
                }
                cur[axis] = self.lower[axis];
            }
        }
    }
}

/// Norm of the sum of the unit vectors along the given edge vectors.
pub fn star_balancing_residual<T: Scalar>(edge_vectors: &[Vec<T>]) -> Result<T> {
    let n = edge_vectors.first().map_or(0, Vec::len);
    let mut sum = vec![T::zero(); n];
    for (i, v) in edge_vectors.iter().enumerate() {
        let u = linalg::normalized(v).ok_or(Error::ZeroLengthEdge { edge: i })?;
        sum = linalg::add(&sum, &u);
    }
    Ok(linalg::norm(&sum))
}

impl<T: Scalar> PeriodicNetwork<T> {
    pub fn new(graph: QuotientGraph, positions: Vec<Vec<T>>, lattice: Lattice<T>) -> Result<Self> {
        let n = lattice.dimension();
        if graph.dimension() != n {
            return Err(Error::DimensionMismatch(format!(
                "graph shifts are {}-dimensional, lattice is {n}-dimensional",
                graph.dimension()
            )));
        }
        if positions.len() != graph.vertex_count() {
            return Err(Error::DimensionMismatch(format!(
                "{} positions for {} vertices",
                positions.len(),
                graph.vertex_count()
            )));
        }
        if positions.iter().any(|p| p.len() != n) {
            return Err(Error::DimensionMismatch("position of wrong dimension".into()));
        }
        if positions.iter().flatten().any(|x| !x.is_finite()) {
            return Err(Error::invalid("non-finite vertex position"));
        }
        if !graph.is_connected() {
            return Err(Error::Disconnected);
        }
        let net = PeriodicNetwork {
            graph,
            positions,
            lattice,
        };
        let scale = net
            .lattice
            .generators()
            .iter()
            .map(|g| linalg::norm(g))
            .fold(T::zero(), T::max);
        for i in 0..net.graph.edge_count() {
            if !(net.edge_length(i) > T::lit(DEGENERACY_TOLERANCE) * scale) {
                return Err(Error::ZeroLengthEdge { edge: i });
            }
        }
        net.check_immersion()?;
        Ok(net)
    }

    fn check_immersion(&self) -> Result<()> {
        let tol = T::lit(IMMERSION_TOLERANCE);
        for v in 0..self.graph.vertex_count() {
            let dirs = self.unit_directions(v);
            for (i, (a, ua)) in dirs.iter().enumerate() {
                for (b, ub) in &dirs[i + 1..] {
                    if linalg::norm(&linalg::sub(ua, ub)) < tol {
                        return Err(Error::NotImmersed {
                            vertex: v,
                            first: a.edge,
                            second: b.edge,
                        });
                    }
                }
            }
        }
        Ok(())
    }

    pub fn graph(&self) -> &QuotientGraph {
        &self.graph
    }

    pub fn positions(&self) -> &[Vec<T>] {
        &self.positions
    }

    pub fn lattice(&self) -> &Lattice<T> {
        &self.lattice
    }

    pub fn dimension(&self) -> usize {
        self.lattice.dimension()
    }

    pub fn into_parts(self) -> (QuotientGraph, Vec<Vec<T>>, Lattice<T>) {
        (self.graph, self.positions, self.lattice)
    }

    /// Position of the lift of `vertex` in `cell`.
    pub fn lifted_position(&self, vertex: usize, cell: &[i64]) -> Vec<T> {
        linalg::add(&self.positions[vertex], &self.lattice.translation(cell))
    }

    /// `positions[head] + Λ·shift − positions[tail]`
    pub fn edge_vector(&self, edge: usize) -> Vec<T> {
        let e = &self.graph.edges()[edge];
        linalg::sub(&self.lifted_position(e.head, &e.shift), &self.positions[e.tail])
    }

    pub fn edge_length(&self, edge: usize) -> T {
        linalg::norm(&self.edge_vector(edge))
    }

    pub fn edge_lengths(&self) -> Vec<T> {
        (0..self.graph.edge_count()).map(|i| self.edge_length(i)).collect()
    }

    /// Vector from `vertex` to the far end of the incidence.
    pub fn incidence_vector(&self, inc: &Incidence) -> Vec<T> {
        let v = self.edge_vector(inc.edge);
        if inc.outgoing {
            v
        } else {
            linalg::scale(&v, -T::one())
        }
    }

    /// Outgoing unit directions of all edges at `vertex`.
    pub fn unit_directions(&self, vertex: usize) -> Vec<(Incidence, Vec<T>)> {
        self.graph
            .incidences(vertex)
            .into_iter()
            .map(|inc| {
                let v = self.incidence_vector(&inc);
                let u = linalg::normalized(&v).unwrap_or(v);
                (inc, u)
            })
            .collect()
    }

    /// Total length of the quotient network.
    pub fn length(&self) -> T {
        self.edge_lengths().into_iter().fold(T::zero(), |a, b| a + b)
    }

    pub fn volume(&self) -> T {
        self.lattice.volume()
    }

    /// `L^n / V`.
    pub fn ratio(&self) -> Result<T> {
        let v = self.volume();
        if !(v > T::zero()) {
            return Err(Error::DegenerateLattice("zero volume".into()));
        }
        Ok(self.length().powi(self.dimension() as i32) / v)
    }

    /// Per vertex, the norm of the sum of outgoing unit edge directions.
    pub fn balancing_residual(&self) -> Vec<T> {
        (0..self.graph.vertex_count())
            .map(|v| {
                let vectors: Vec<Vec<T>> = self
                    .graph
                    .incidences(v)
                    .iter()
                    .map(|inc| self.incidence_vector(inc))
                    .collect();
                // Edge lengths are positive by construction.
                star_balancing_residual(&vectors).unwrap_or_else(|_| T::infinity())
            })
            .collect()
    }

    pub fn max_balancing_residual(&self) -> T {
        self.balancing_residual().into_iter().fold(T::zero(), T::max)
    }

    /// All vertices of degree 3 and balanced to `tolerance`.
    pub fn is_steiner(&self, tolerance: T) -> bool {
        self.graph.degrees().iter().all(|&d| d == 3) && self.max_balancing_residual() <= tolerance
    }

    pub fn metrics(&self) -> Result<NetworkMetrics<T>> {
        Ok(NetworkMetrics {
            length: self.length(),
            volume: self.volume(),
            ratio: self.ratio()?,
            per_vertex_balancing_residual: self.balancing_residual(),
        })
    }

    /// One segment per (cell, edge), cell-major.
    pub fn lift_tile(&self, range: &CellRange) -> Result<Vec<Segment<T>>> {
        if range.lower.len() != self.dimension() {
            return Err(Error::DimensionMismatch("cell range dimension".into()));
        }
        if range.is_empty() {
            return Err(Error::EmptyRange);
        }
        let mut out = Vec::new();
        for cell in range.cells() {
            for (i, e) in self.graph.edges().iter().enumerate() {
                let head_cell: Vec<i64> = cell.iter().zip(&e.shift).map(|(a, b)| a + b).collect();
                out.push(Segment {
                    edge: i,
                    start: self.lifted_position(e.tail, &cell),
                    end: self.lifted_position(e.head, &head_cell),
                    cell: cell.clone(),
                });
            }
        }
        Ok(out)
    }

    pub fn translated(&self, offset: &[T]) -> Result<Self> {
        PeriodicNetwork::new(
            self.graph.clone(),
            self.positions.iter().map(|p| linalg::add(p, offset)).collect(),
            self.lattice.clone(),
        )
    }

    /// Applies the linear map with the given rows to positions and generators.
    pub fn transformed(&self, rows: &[Vec<T>]) -> Result<Self> {
        let apply = |p: &Vec<T>| rows.iter().map(|r| linalg::dot(r, p)).collect::<Vec<T>>();
        PeriodicNetwork::new(
            self.graph.clone(),
            self.positions.iter().map(apply).collect(),
            self.lattice.transformed(rows)?,
        )
    }

    pub fn scaled(&self, c: T) -> Result<Self> {
        PeriodicNetwork::new(
            self.graph.clone(),
            self.positions.iter().map(|p| linalg::scale(p, c)).collect(),
            self.lattice.scaled(c)?,
        )
    }

    /// Replaces the degree-2 vertex `vertex` and its two edges by a single
    /// edge joining its neighbours.
    pub(crate) fn merge_degree_two(&self, vertex: usize) -> Result<Self> {
        let incs = self.graph.incidences(vertex);
        if incs.len() != 2 {
            return Err(Error::NotApplicable(format!("vertex {vertex} does not have degree 2")));
        }
        if incs[0].edge == incs[1].edge {
            return Err(Error::NotApplicable(format!("vertex {vertex} only carries a loop")));
        }
        let (u, cu) = incs[0].far_end(&self.graph);
        let (w, cw) = incs[1].far_end(&self.graph);
        let shift: Vec<i64> = cw.iter().zip(&cu).map(|(a, b)| a - b).collect();
        if u == w && shift.iter().all(|&s| s == 0) {
            return Err(Error::NotApplicable(format!(
                "merging at vertex {vertex} would create a zero-shift loop"
            )));
        }
        let label = match (
            &self.graph.edges()[incs[0].edge].label,
            &self.graph.edges()[incs[1].edge].label,
        ) {
            (Some(a), Some(b)) => Some(format!("{a}+{b}")),
            _ => None,
        };
        let mut edges: Vec<QuotientEdge> = self
            .graph
            .edges()
            .iter()
            .enumerate()
            .filter(|(i, _)| *i != incs[0].edge && *i != incs[1].edge)
            .map(|(_, e)| e.clone())
            .collect();
        edges.push(QuotientEdge {
            tail: u,
            head: w,
            shift,
            label,
        });
        remove_vertex(&self.graph, &self.positions, &self.lattice, vertex, edges)
    }

    /// Merges every degree-2 vertex whose two edges are opposite. Such
    /// vertices do not change the geometry of the network, so identity of
    /// networks is always understood modulo this normalization.
    pub fn canonicalized(&self) -> Self {
        let mut net = self.clone();
        'outer: loop {
            for v in 0..net.graph.vertex_count() {
                let dirs = net.unit_directions(v);
                if dirs.len() != 2 || dirs[0].0.edge == dirs[1].0.edge {
                    continue;
                }
                let opposite = linalg::norm(&linalg::add(&dirs[0].1, &dirs[1].1));
                if opposite < T::lit(STEINER_TOLERANCE) {
                    if let Ok(merged) = net.merge_degree_two(v) {
                        net = merged;
                        continue 'outer;
                    }
                }
            }
            return net;
        }
    }
}

/// Drops `vertex` (which must no longer be referenced by `edges`) and
/// renumbers the vertices above it.
pub(crate) fn remove_vertex<T: Scalar>(
    graph: &QuotientGraph,
    positions: &[Vec<T>],
    lattice: &Lattice<T>,
    vertex: usize,
    edges: Vec<QuotientEdge>,
) -> Result<PeriodicNetwork<T>> {
    if graph.vertex_count() == 1 {
        return Err(Error::SurgeryDegenerate("removing the last vertex".into()));
    }
    let renumber = |v: usize| if v > vertex { v - 1 } else { v };
    let edges = edges
        .into_iter()
        .map(|mut e| {
            debug_assert!(e.tail != vertex && e.head != vertex);
            e.tail = renumber(e.tail);
            e.head = renumber(e.head);
            e
        })
        .collect();
    let positions = positions
        .iter()
        .enumerate()
        .filter(|(i, _)| *i != vertex)
        .map(|(_, p)| p.clone())
        .collect();
    let graph = QuotientGraph::new(graph.vertex_count() - 1, graph.dimension(), edges)?;
    PeriodicNetwork::new(graph, positions, lattice.clone())
}

pub fn network_length<T: Scalar>(net: &PeriodicNetwork<T>) -> T {
    net.length()
}

pub fn balancing_residual<T: Scalar>(net: &PeriodicNetwork<T>) -> Vec<T> {
    net.balancing_residual()
}

pub fn lift_tile<T: Scalar>(net: &PeriodicNetwork<T>, range: &CellRange) -> Result<Vec<Segment<T>>> {
    net.lift_tile(range)
}
