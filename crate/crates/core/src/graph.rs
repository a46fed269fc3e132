//! Finite quotient multigraphs whose edges carry integer lattice shifts.
//!
//! An edge `(tail, head, shift)` joins the lift of `tail` in cell `0` to the
//! lift of `head` in cell `shift`. Reversing an edge negates its shift, so
//! the shifts summed around any closed walk give the lattice vector (in
//! generator coordinates) that the walk closes up to.

use std::collections::{BTreeMap, VecDeque};

use serde::Serialize;

use crate::error::{Error, Result};
use crate::linalg;

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct QuotientEdge {
    pub tail: usize,
    pub head: usize,
    pub shift: Vec<i64>,
    pub label: Option<String>,
}

impl QuotientEdge {
    pub fn new(tail: usize, head: usize, shift: Vec<i64>) -> Self {
        QuotientEdge {
            tail,
            head,
            shift,
            label: None,
        }
    }

    pub fn labelled(mut self, label: impl Into<String>) -> Self {
        self.label = Some(label.into());
        self
    }

    pub fn reversed(&self) -> Self {
        QuotientEdge {
            tail: self.head,
            head: self.tail,
            shift: self.shift.iter().map(|s| -s).collect(),
            label: self.label.clone(),
        }
    }

    pub fn is_loop(&self) -> bool {
        self.tail == self.head
    }
}

/// One end of an edge, seen from the vertex it is attached to. A loop
/// contributes two incidences to its vertex.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Incidence {
    pub edge: usize,
    /// `true` at the tail end: the far endpoint sits in cell `+shift`.
    /// `false` at the head end: the far endpoint sits in cell `-shift`.
    pub outgoing: bool,
}

impl Incidence {
    /// Quotient vertex at the other end and the cell it lives in, relative
    /// to the cell of the vertex this incidence is attached to.
    pub fn far_end(&self, graph: &QuotientGraph) -> (usize, Vec<i64>) {
        let e = &graph.edges()[self.edge];
        if self.outgoing {
            (e.head, e.shift.clone())
        } else {
            (e.tail, e.shift.iter().map(|s| -s).collect())
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct QuotientGraph {
    vertex_count: usize,
    dimension: usize,
    edges: Vec<QuotientEdge>,
}

impl QuotientGraph {
    /// Checks only structural well-formedness (ids in range, shift lengths).
    /// Connectivity and periodicity are reported by [`QuotientGraph::validate`].
    pub fn new(vertex_count: usize, dimension: usize, edges: Vec<QuotientEdge>) -> Result<Self> {
        if vertex_count == 0 {
            return Err(Error::invalid("quotient graph needs at least one vertex"));
        }
        for (i, e) in edges.iter().enumerate() {
            if e.tail >= vertex_count || e.head >= vertex_count {
                return Err(Error::invalid(format!(
                    "edge {i} references vertex outside 0..{vertex_count}"
                )));
            }
            if e.shift.len() != dimension {
                return Err(Error::DimensionMismatch(format!(
                    "edge {i} has a shift of length {} in dimension {dimension}",
                    e.shift.len()
                )));
            }
        }
        Ok(QuotientGraph {
            vertex_count,
            dimension,
            edges,
        })
    }

    pub fn vertex_count(&self) -> usize {
        self.vertex_count
    }

    pub fn edge_count(&self) -> usize {
        self.edges.len()
    }

    pub fn dimension(&self) -> usize {
        self.dimension
    }

    pub fn edges(&self) -> &[QuotientEdge] {
        &self.edges
    }

    pub fn incidences(&self, vertex: usize) -> Vec<Incidence> {
        let mut out = Vec::new();
        for (i, e) in self.edges.iter().enumerate() {
            if e.tail == vertex {
                out.push(Incidence {
                    edge: i,
                    outgoing: true,
                });
            }
            if e.head == vertex {
                out.push(Incidence {
                    edge: i,
                    outgoing: false,
                });
            }
        }
        out
    }

    pub fn degree(&self, vertex: usize) -> usize {
        self.edges
            .iter()
            .map(|e| usize::from(e.tail == vertex) + usize::from(e.head == vertex))
            .sum()
    }

    pub fn degrees(&self) -> Vec<usize> {
        let mut d = vec![0; self.vertex_count];
        for e in &self.edges {
            d[e.tail] += 1;
            d[e.head] += 1;
        }
        d
    }

    /// `1 - #vertices + #edges`.
    pub fn circuit_rank(&self) -> i64 {
        1 - self.vertex_count as i64 + self.edges.len() as i64
    }

    pub fn is_connected(&self) -> bool {
        self.spanning_cells().iter().all(Option::is_some)
    }

    pub fn loops(&self) -> Vec<usize> {
        (0..self.edges.len()).filter(|&i| self.edges[i].is_loop()).collect()
    }

    /// Vertex pairs joined by more than one (non-loop) edge.
    pub fn multi_edges(&self) -> Vec<MultiEdge> {
        let mut groups: BTreeMap<(usize, usize), Vec<usize>> = BTreeMap::new();
        for (i, e) in self.edges.iter().enumerate() {
            if !e.is_loop() {
                let key = (e.tail.min(e.head), e.tail.max(e.head));
                groups.entry(key).or_default().push(i);
            }
        }
        groups
            .into_iter()
            .filter(|(_, v)| v.len() > 1)
            .map(|(vertices, edges)| MultiEdge { vertices, edges })
            .collect()
    }

    /// Cell of every vertex along a BFS spanning forest rooted at the lowest
    /// vertex of each component; `None` for vertices outside the component
    /// of vertex 0.
    fn spanning_cells(&self) -> Vec<Option<Vec<i64>>> {
        let mut cells: Vec<Option<Vec<i64>>> = vec![None; self.vertex_count];
        cells[0] = Some(vec![0; self.dimension]);
        let mut queue = VecDeque::from([0usize]);
        while let Some(v) = queue.pop_front() {
            let base = cells[v].clone().unwrap();
            for inc in self.incidences(v) {
                let (w, shift) = inc.far_end(self);
                if cells[w].is_none() {
                    cells[w] = Some(base.iter().zip(&shift).map(|(a, b)| a + b).collect());
                    queue.push_back(w);
                }
            }
        }
        cells
    }

    /// Net lattice shift of the fundamental cycle closed by every non-tree
    /// edge of a BFS spanning tree. Only meaningful for connected graphs.
    pub fn cycle_shifts(&self) -> Vec<Vec<i64>> {
        let cells = self.spanning_cells();
        let mut tree_edge = vec![false; self.edges.len()];
        // Recover which edges the BFS used by re-running the same discovery order.
        let mut seen = vec![false; self.vertex_count];
        seen[0] = true;
        let mut queue = VecDeque::from([0usize]);
        while let Some(v) = queue.pop_front() {
            for inc in self.incidences(v) {
                let (w, _) = inc.far_end(self);
                if !seen[w] {
                    seen[w] = true;
                    tree_edge[inc.edge] = true;
                    queue.push_back(w);
                }
            }
        }
        self.edges
            .iter()
            .enumerate()
            .filter(|(i, _)| !tree_edge[*i])
            .filter_map(|(_, e)| {
                let ct = cells[e.tail].as_ref()?;
                let ch = cells[e.head].as_ref()?;
                Some((0..self.dimension).map(|k| ct[k] + e.shift[k] - ch[k]).collect())
            })
            .collect()
    }

    /// Rank of the sublattice of Z^n spanned by the cycle shifts.
    pub fn shift_rank(&self) -> usize {
        linalg::integer_rank(&self.cycle_shifts())
    }

    /// Structural diagnosis. Without `require_steiner_topology` a graph
    /// passes when it is connected with full shift rank; with it, it must
    /// additionally be loop-free and 3-regular.
    pub fn validate(&self, require_steiner_topology: bool) -> ValidationReport {
        let connected = self.is_connected();
        let shift_rank = self.shift_rank();
        let loops = self.loops();
        let multi_edges = self.multi_edges();
        let irregular_vertices: Vec<(usize, usize)> = self
            .degrees()
            .into_iter()
            .enumerate()
            .filter(|&(_, d)| d != 3)
            .collect();

        let mut failures = Vec::new();
        if !connected {
            failures.push("graph is not connected".to_string());
        }
        if shift_rank != self.dimension {
            failures.push(format!(
                "cycle shifts span rank {shift_rank}, expected {}",
                self.dimension
            ));
        }
        if require_steiner_topology {
            if !loops.is_empty() {
                failures.push(format!("loops at edges {loops:?}"));
            }
            if !irregular_vertices.is_empty() {
                failures.push(format!("vertices not of degree 3: {irregular_vertices:?}"));
            }
        }
        ValidationReport {
            connected,
            vertex_count: self.vertex_count,
            edge_count: self.edges.len(),
            circuit_rank: self.circuit_rank(),
            dimension: self.dimension,
            shift_rank,
            simple: loops.is_empty() && multi_edges.is_empty(),
            cubic: irregular_vertices.is_empty(),
            loops,
            multi_edges,
            irregular_vertices,
            steiner_topology_required: require_steiner_topology,
            passed: failures.is_empty(),
            failures,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct MultiEdge {
    pub vertices: (usize, usize),
    pub edges: Vec<usize>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct ValidationReport {
    pub connected: bool,
    pub vertex_count: usize,
    pub edge_count: usize,
    pub circuit_rank: i64,
    pub dimension: usize,
    pub shift_rank: usize,
    pub simple: bool,
    pub cubic: bool,
    pub loops: Vec<usize>,
    pub multi_edges: Vec<MultiEdge>,
    /// `(vertex, degree)` for every vertex whose degree is not 3.
    pub irregular_vertices: Vec<(usize, usize)>,
    pub steiner_topology_required: bool,
    pub passed: bool,
    pub failures: Vec<String>,
}

/// Free-function form of [`QuotientGraph::validate`].
pub fn validate_quotient(graph: &QuotientGraph, require_steiner_topology: bool) -> ValidationReport {
    graph.validate(require_steiner_topology)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn e(t: usize, h: usize, s: [i64; 3]) -> QuotientEdge {
        QuotientEdge::new(t, h, s.to_vec())
    }

    fn srs_k4() -> QuotientGraph {
        QuotientGraph::new(
            4,
            3,
            vec![
                e(0, 1, [0, 0, 0]),
                e(0, 2, [0, 0, 0]),
                e(0, 3, [0, 0, 0]),
                e(2, 3, [0, 1, 0]),
                e(3, 1, [0, 0, 1]),
                e(1, 2, [1, 0, 0]),
            ],
        )
        .unwrap()
    }

    fn ths_d1d2() -> QuotientGraph {
        QuotientGraph::new(
            4,
            3,
            vec![
                e(0, 1, [0, 0, 0]),
                e(1, 0, [1, 0, 0]),
                e(2, 3, [0, 0, 0]),
                e(2, 3, [0, 1, 0]),
                e(1, 2, [0, 0, 0]),
                e(3, 0, [0, 0, 1]),
            ],
        )
        .unwrap()
    }

    #[test]
    fn k4_with_srs_shifts_passes() {
        let r = srs_k4().validate(true);
        assert!(r.passed, "{r:?}");
        assert_eq!(r.shift_rank, 3);
        assert_eq!(r.circuit_rank, 3);
        assert!(r.simple && r.cubic);
    }

    #[test]
    fn d1d2_with_ths_shifts_passes_without_simplicity() {
        let r = ths_d1d2().validate(true);
        assert!(r.passed, "{r:?}");
        assert_eq!(r.shift_rank, 3);
        assert!(!r.simple);
        assert_eq!(r.multi_edges.len(), 2);
        assert_eq!(r.multi_edges[0].vertices, (0, 1));
        assert_eq!(r.multi_edges[1].vertices, (2, 3));
    }

    // The three connected cubic graphs with loops on four vertices.
    fn loop_graphs() -> Vec<QuotientGraph> {
        let a = vec![
            e(0, 0, [1, 0, 0]),
            e(1, 1, [0, 1, 0]),
            e(3, 2, [0, 0, 0]),
            e(3, 2, [0, 0, 1]),
            e(0, 3, [0, 0, 0]),
            e(1, 2, [0, 0, 0]),
        ];
        let b = vec![
            e(0, 0, [1, 0, 0]),
            e(1, 1, [0, 1, 0]),
            e(2, 2, [0, 0, 1]),
            e(0, 3, [0, 0, 0]),
            e(1, 3, [0, 0, 0]),
            e(2, 3, [0, 0, 0]),
        ];
        let c = vec![
            e(0, 0, [1, 0, 0]),
            e(0, 3, [0, 0, 0]),
            e(3, 2, [0, 0, 0]),
            e(3, 1, [0, 0, 0]),
            e(1, 2, [0, 1, 0]),
            e(1, 2, [0, 0, 1]),
        ];
        [a, b, c]
            .into_iter()
            .map(|edges| QuotientGraph::new(4, 3, edges).unwrap())
            .collect()
    }

    #[test]
    fn graphs_with_loops_fail_steiner_validation() {
        for g in loop_graphs() {
            let r = g.validate(true);
            assert!(r.cubic);
            assert_eq!(r.shift_rank, 3);
            assert!(!r.loops.is_empty());
            assert!(!r.passed);
            assert!(r.failures.iter().any(|f| f.contains("loops")));
            // Without the Steiner requirement they are valid periodic quotients.
            assert!(g.validate(false).passed);
        }
    }

    #[test]
    fn cubic_circuit_rank_identity() {
        for g in [srs_k4(), ths_d1d2()].into_iter().chain(loop_graphs()) {
            assert_eq!(g.circuit_rank(), 1 + g.vertex_count() as i64 / 2);
        }
    }

    #[test]
    fn low_shift_rank_and_disconnection_are_reported() {
        let g = QuotientGraph::new(
            2,
            2,
            vec![
                QuotientEdge::new(0, 1, vec![0, 0]),
                QuotientEdge::new(0, 1, vec![1, 0]),
                QuotientEdge::new(0, 1, vec![2, 0]),
            ],
        )
        .unwrap();
        let r = g.validate(false);
        assert_eq!(r.shift_rank, 1);
        assert!(!r.passed);

        let split = QuotientGraph::new(2, 1, vec![QuotientEdge::new(0, 0, vec![1])]).unwrap();
        let r = split.validate(false);
        assert!(!r.connected);
        assert!(!r.passed);
    }

    #[test]
    fn malformed_edges_are_rejected() {
        assert!(QuotientGraph::new(2, 2, vec![QuotientEdge::new(0, 2, vec![0, 0])]).is_err());
        assert!(QuotientGraph::new(2, 2, vec![QuotientEdge::new(0, 1, vec![0])]).is_err());
        assert!(QuotientGraph::new(0, 2, vec![]).is_err());
    }

    #[test]
    fn reversing_negates_shift() {
        let r = QuotientEdge::new(1, 2, vec![1, -3]).reversed();
        assert_eq!((r.tail, r.head, r.shift), (2, 1, vec![-1, 3]));
    }
}
