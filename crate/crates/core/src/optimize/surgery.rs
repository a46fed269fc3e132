//! Length-reducing modifications of a periodic network: leaf removal,
//! merging of degree-2 vertices, splitting of high-degree vertices, and the
//! length-preserving slide that collapses a doubly connected vertex pair.

use std::collections::BTreeSet;

use serde::Serialize;

use crate::error::{Error, Result};
use crate::graph::{QuotientEdge, QuotientGraph};
use crate::linalg;
use crate::network::{remove_vertex, PeriodicNetwork};
use crate::scalar::Scalar;

/// Directions whose sum has norm below this are treated as antiparallel.
pub const ANTIPARALLEL_TOLERANCE: f64 = 1e-9;

#[derive(Debug, Clone, PartialEq)]
pub struct SurgeryOutcome<T> {
    pub network: PeriodicNetwork<T>,
    pub length_before: T,
    pub length_after: T,
    /// Number of elementary moves performed.
    pub applied: usize,
    /// Moves that were considered and skipped, with the reason.
    pub skipped: Vec<SkippedMove>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct SkippedMove {
    /// Vertex index in the returned network.
    pub vertex: usize,
    pub reason: String,
}

impl<T: Scalar> SurgeryOutcome<T> {
    fn new(before: &PeriodicNetwork<T>, network: PeriodicNetwork<T>, applied: usize) -> Self {
        SurgeryOutcome {
            length_before: before.length(),
            length_after: network.length(),
            network,
            applied,
            skipped: Vec::new(),
        }
    }
}

fn degenerate(e: Error) -> Error {
    match e {
        Error::SurgeryDegenerate(_) => e,
        other => Error::SurgeryDegenerate(other.to_string()),
    }
}

/// Removes degree-1 vertices together with their edges until none remain.
pub fn surgery_remove_leaves<T: Scalar>(net: &PeriodicNetwork<T>) -> Result<SurgeryOutcome<T>> {
    let mut current = net.clone();
    let mut applied = 0;
    while let Some(v) = current.graph().degrees().iter().position(|&d| d == 1) {
        let leaf_edge = current.graph().incidences(v)[0].edge;
        let edges: Vec<QuotientEdge> = current
            .graph()
            .edges()
            .iter()
            .enumerate()
            .filter(|(i, _)| *i != leaf_edge)
            .map(|(_, e)| e.clone())
            .collect();
        if edges.is_empty() {
            return Err(Error::SurgeryDegenerate("removing leaves leaves no edges".into()));
        }
        current =
            remove_vertex(current.graph(), current.positions(), current.lattice(), v, edges).map_err(degenerate)?;
        applied += 1;
    }
    Ok(SurgeryOutcome::new(net, current, applied))
}

/// Replaces every degree-2 vertex and its two edges by one edge. Merges
/// that would create a zero-shift loop or an unembedded star are skipped
/// and reported.
pub fn surgery_merge_degree_two<T: Scalar>(net: &PeriodicNetwork<T>) -> Result<SurgeryOutcome<T>> {
    let mut current = net.clone();
    let mut applied = 0;
    let mut skip: BTreeSet<usize> = BTreeSet::new();
    let mut reasons: Vec<(usize, String)> = Vec::new();
    loop {
        let degrees = current.graph().degrees();
        let Some(v) = (0..degrees.len()).find(|v| degrees[*v] == 2 && !skip.contains(v)) else {
            break;
        };
        match current.merge_degree_two(v) {
            Ok(merged) => {
                current = merged;
                applied += 1;
                skip = skip.into_iter().map(|s| if s > v { s - 1 } else { s }).collect();
                for (s, _) in reasons.iter_mut() {
                    if *s > v {
                        *s -= 1;
                    }
                }
            }
            Err(e) => {
                skip.insert(v);
                reasons.push((v, e.to_string()));
            }
        }
    }
    let mut out = SurgeryOutcome::new(net, current, applied);
    out.skipped = reasons
        .into_iter()
        .map(|(vertex, reason)| SkippedMove { vertex, reason })
        .collect();
    Ok(out)
}

/// Splits one incident pair off `vertex` (degree at least 4) onto a new
/// degree-3 vertex. The pair is the one with the smallest angle, which is
/// below 120° whenever the degree is at least 4. Both edges are cut back to
/// the shorter length `r`, and the new vertex is the Fermat point of the
/// isosceles triangle formed by `vertex` and the two cut points; it lies on
/// the bisector at distance `r·sin(60° − θ/2)/sin 120°`.
pub fn surgery_split_high_degree<T: Scalar>(net: &PeriodicNetwork<T>, vertex: usize) -> Result<SurgeryOutcome<T>> {
    let graph = net.graph();
    if vertex >= graph.vertex_count() {
        return Err(Error::invalid(format!("vertex {vertex} out of range")));
    }
    let degree = graph.degree(vertex);
    if degree < 4 {
        return Err(Error::invalid(format!(
            "vertex {vertex} has degree {degree}; splitting needs degree at least 4"
        )));
    }
    let dirs = net.unit_directions(vertex);
    let limit = T::lit(2.0) * T::FRAC_PI_3();
    let slack = T::lit(1e-12);
    let mut best: Option<(T, usize, usize)> = None;
    for i in 0..dirs.len() {
        for j in i + 1..dirs.len() {
            if dirs[i].0.edge == dirs[j].0.edge {
                continue;
            }
            let theta = linalg::angle(&dirs[i].1, &dirs[j].1);
            if !(theta < limit - slack) {
                continue;
            }
            if best.is_none_or(|(b, _, _)| theta < b - slack) {
                best = Some((theta, i, j));
            }
        }
    }
    let (theta, i, j) =
        best.ok_or_else(|| Error::NumericalDegeneracy(format!("no incident pair under 120° at vertex {vertex}")))?;
    let (ia, ua) = &dirs[i];
    let (ib, ub) = &dirs[j];
    let la = linalg::norm(&net.incidence_vector(ia));
    let lb = linalg::norm(&net.incidence_vector(ib));
    let r = la.min(lb);
    let half = theta / T::lit(2.0);
    let distance = r * (T::FRAC_PI_3() - half).sin() / (limit).sin();
    let bisector = linalg::normalized(&linalg::add(ua, ub))
        .ok_or_else(|| Error::NumericalDegeneracy("antiparallel pair".into()))?;
    let steiner = linalg::axpy(&net.positions()[vertex], distance, &bisector);

    let new_vertex = graph.vertex_count();
    let removed = [ia.edge, ib.edge];
    let mut edges: Vec<QuotientEdge> = graph
        .edges()
        .iter()
        .enumerate()
        .filter(|(k, _)| !removed.contains(k))
        .map(|(_, e)| e.clone())
        .collect();
    edges.push(QuotientEdge::new(vertex, new_vertex, vec![0; net.dimension()]));
    for inc in [ia, ib] {
        let (far, cell) = inc.far_end(graph);
        edges.push(QuotientEdge {
            tail: new_vertex,
            head: far,
            shift: cell,
            label: graph.edges()[inc.edge].label.clone(),
        });
    }
    let mut positions = net.positions().to_vec();
    positions.push(steiner);
    let graph = QuotientGraph::new(new_vertex + 1, net.dimension(), edges)?;
    let split = PeriodicNetwork::new(graph, positions, net.lattice().clone())
        .map_err(|e| Error::NumericalDegeneracy(format!("split at vertex {vertex} failed: {e}")))?;
    Ok(SurgeryOutcome::new(net, split, 1))
}

/// Splits vertices of degree at least 4 until every degree is at most 3.
pub fn surgery_split_all_high_degree<T: Scalar>(net: &PeriodicNetwork<T>) -> Result<SurgeryOutcome<T>> {
    let mut current = net.clone();
    let mut applied = 0;
    while let Some(v) = current.graph().degrees().iter().position(|&d| d >= 4) {
        current = surgery_split_high_degree(&current, v)?.network;
        applied += 1;
    }
    Ok(SurgeryOutcome::new(net, current, applied))
}

struct DoublePair {
    double_edges: [usize; 2],
    outer_p: crate::graph::Incidence,
}

fn double_pair<T: Scalar>(net: &PeriodicNetwork<T>, p: usize, q: usize) -> Result<DoublePair> {
    let graph = net.graph();
    let n = graph.vertex_count();
    if p >= n || q >= n || p == q {
        return Err(Error::invalid(format!("({p}, {q}) is not a pair of distinct vertices")));
    }
    if graph.degree(p) != 3 || graph.degree(q) != 3 {
        return Err(Error::NotApplicable(format!(
            "vertices {p} and {q} are not both of degree 3"
        )));
    }
    let joining: Vec<usize> = graph
        .edges()
        .iter()
        .enumerate()
        .filter(|(_, e)| (e.tail == p && e.head == q) || (e.tail == q && e.head == p))
        .map(|(i, _)| i)
        .collect();
    if joining.len() != 2 {
        return Err(Error::NotApplicable(format!(
            "vertices {p} and {q} are joined by {} edges, not 2",
            joining.len()
        )));
    }
    let outer = |v: usize| {
        graph
            .incidences(v)
            .into_iter()
            .find(|inc| !joining.contains(&inc.edge))
            .expect("degree 3 with two joining edges")
    };
    let (op, oq) = (outer(p), outer(q));
    let (r, _) = op.far_end(graph);
    if r == p || r == q {
        return Err(Error::NotApplicable(format!(
            "outer edge of {p} does not leave the pair"
        )));
    }
    let up = linalg::normalized(&net.incidence_vector(&op));
    let uq = linalg::normalized(&net.incidence_vector(&oq));
    let (Some(up), Some(uq)) = (up, uq) else {
        return Err(Error::NotApplicable("zero-length outer edge".into()));
    };
    if linalg::norm(&linalg::add(&up, &uq)) >= T::lit(ANTIPARALLEL_TOLERANCE) {
        return Err(Error::NotApplicable(format!(
            "outer edges at {p} and {q} are not antiparallel"
        )));
    }
    Ok(DoublePair {
        double_edges: [joining[0], joining[1]],
        outer_p: op,
    })
}

/// Ordered pairs `(p, q)` to which [`surgery_slide_double_edge`] applies.
pub fn double_edge_slide_candidates<T: Scalar>(net: &PeriodicNetwork<T>) -> Vec<(usize, usize)> {
    let n = net.graph().vertex_count();
    let mut out = Vec::new();
    for p in 0..n {
        for q in 0..n {
            if p != q && double_pair(net, p, q).is_ok() {
                out.push((p, q));
            }
        }
    }
    out
}

/// Slides the doubly connected pair `(p, q)` rigidly along the outer edge of
/// `p` until `p` lands on its outer neighbour `r`. The double edges keep
/// their length, the outer edge of `p` disappears and the outer edge of `q`
/// grows by the same amount, so the total length is unchanged; `r` ends up
/// with degree one higher (4 for a cubic network).
pub fn surgery_slide_double_edge<T: Scalar>(
    net: &PeriodicNetwork<T>,
    pair: (usize, usize),
) -> Result<SurgeryOutcome<T>> {
    let (p, q) = pair;
    let info = double_pair(net, p, q)?;
    let graph = net.graph();
    let (r, cr) = info.outer_p.far_end(graph);
    let displacement = linalg::sub(&net.lifted_position(r, &cr), &net.positions()[p]);

    let mut edges = Vec::new();
    for (k, e) in graph.edges().iter().enumerate() {
        if k == info.outer_p.edge {
            continue;
        }
        let mut e = e.clone();
        if info.double_edges.contains(&k) {
            if e.tail == p {
                e.tail = r;
                e.shift = e.shift.iter().zip(&cr).map(|(s, c)| s - c).collect();
            } else {
                e.head = r;
                e.shift = e.shift.iter().zip(&cr).map(|(s, c)| s + c).collect();
            }
        }
        edges.push(e);
    }
    let mut positions = net.positions().to_vec();
    positions[q] = linalg::add(&positions[q], &displacement);
    let moved = remove_vertex(graph, &positions, net.lattice(), p, edges)
        .map_err(|e| Error::NotApplicable(format!("slide of ({p}, {q}) is not embedded: {e}")))?;
    Ok(SurgeryOutcome::new(net, moved, 1))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::lattice::Lattice;

    fn square_lattice() -> Lattice<f64> {
        Lattice::new(vec![vec![4.0, 0.0], vec![0.0, 4.0]]).unwrap()
    }

    #[test]
    fn bent_degree_two_vertex_merges_to_diagonal() {
        // A square cycle through 4 vertices; vertex 1 bends at 90°.
        let lattice = Lattice::new(vec![vec![2.0, 0.0], vec![0.0, 2.0]]).unwrap();
        let graph = QuotientGraph::new(
            2,
            2,
            vec![
                QuotientEdge::new(0, 1, vec![0, 0]),
                QuotientEdge::new(1, 0, vec![1, 0]),
                QuotientEdge::new(0, 0, vec![0, 1]),
            ],
        )
        .unwrap();
        let net = PeriodicNetwork::new(graph, vec![vec![0.0, 0.0], vec![1.0, 1.0]], lattice).unwrap();
        let out = surgery_merge_degree_two(&net).unwrap();
        assert_eq!(out.applied, 1);
        let drop = out.length_before - out.length_after;
        assert!((drop - (2.0 * 2f64.sqrt() - 2.0)).abs() < 1e-12);
    }

    #[test]
    fn degree_three_vertex_cannot_be_split() {
        let hex =
            crate::families::construct_hexagonal(&crate::families::HexParams::new(1.0, 1.0, 1.0).unwrap()).unwrap();
        assert!(matches!(
            surgery_split_high_degree(&hex, 0),
            Err(Error::InvalidParameter(_))
        ));
    }

    #[test]
    fn orthogonal_cross_splits_down_to_degree_three() {
        let lattice = square_lattice();
        let graph = QuotientGraph::new(
            1,
            2,
            vec![QuotientEdge::new(0, 0, vec![1, 0]), QuotientEdge::new(0, 0, vec![0, 1])],
        )
        .unwrap();
        let net = PeriodicNetwork::new(graph, vec![vec![0.0, 0.0]], lattice).unwrap();
        let out = surgery_split_all_high_degree(&net).unwrap();
        assert_eq!(out.applied, 1);
        assert!(out.length_after < out.length_before);
        assert!(out.network.graph().degrees().iter().all(|&d| d <= 3));
    }
}
