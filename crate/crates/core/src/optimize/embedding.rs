use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::graph::QuotientGraph;
use crate::lattice::Lattice;
use crate::linalg;
use crate::network::PeriodicNetwork;
use crate::scalar::Scalar;

use super::{derive_seed, MultiStartOutcome, OptimizationReport, SolverStatus};

/// Final smoothing parameter, relative to the lattice length scale `V^(1/n)`.
pub const DEFAULT_SMOOTHING: f64 = 1e-8;

const CONTINUATION_START: f64 = 1e-2;
const CONTINUATION_FACTOR: f64 = 1e-2;
const FLAT_EIGENVALUE_RATIO: f64 = 1e-6;

#[derive(Debug, Clone, PartialEq)]
pub struct EmbeddingProblem<T> {
    pub graph: QuotientGraph,
    pub lattice: Lattice<T>,
    pub initial_positions: Option<Vec<Vec<T>>>,
    pub smoothing: T,
    /// Stopping threshold on the largest vertex displacement per iteration,
    /// relative to the length scale.
    pub tolerance: T,
    pub max_iterations: usize,
    pub seed: u64,
}

impl<T: Scalar> EmbeddingProblem<T> {
    pub fn new(graph: QuotientGraph, lattice: Lattice<T>) -> Self {
        EmbeddingProblem {
            graph,
            lattice,
            initial_positions: None,
            smoothing: T::lit(DEFAULT_SMOOTHING),
            tolerance: T::lit(1e-13),
            max_iterations: 100_000,
            seed: 0,
        }
    }

    fn check(&self) -> Result<()> {
        let n = self.lattice.dimension();
        if self.graph.dimension() != n {
            return Err(Error::DimensionMismatch(format!(
                "graph shifts are {}-dimensional, lattice is {n}-dimensional",
                self.graph.dimension()
            )));
        }
        if !self.graph.is_connected() {
            return Err(Error::Disconnected);
        }
        let rank = self.graph.shift_rank();
        if rank != n {
            return Err(Error::invalid(format!("shift rank {rank} is below the dimension {n}")));
        }
        if !(self.smoothing > T::zero()) || !(self.tolerance > T::zero()) {
            return Err(Error::invalid("smoothing and tolerance must be positive"));
        }
        if self.max_iterations == 0 {
            return Err(Error::invalid("max_iterations must be positive"));
        }
        if let Some(p) = &self.initial_positions {
            if p.len() != self.graph.vertex_count() || p.iter().any(|v| v.len() != n) {
                return Err(Error::DimensionMismatch(
                    "initial positions do not match the graph".into(),
                ));
            }
        }
        Ok(())
    }

    /// `V^(1/n)`
    fn length_scale(&self) -> T {
        let n = T::from_usize_lossy(self.lattice.dimension());
        self.lattice.volume().powf(n.recip())
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct EmbeddingSummary<T> {
    pub positions: Vec<Vec<T>>,
    pub length: T,
    pub volume: T,
    pub ratio: T,
    pub max_balancing_residual: T,
    pub edge_lengths: Vec<T>,
    /// Smoothing parameter of the last continuation stage (absolute).
    pub final_smoothing: T,
    /// Near-zero eigenvalues of the length Hessian with vertex 0 pinned.
    pub flat_directions: usize,
}

struct Edge<T> {
    tail: usize,
    head: usize,
    offset: Vec<T>,
}

fn edge_data<T: Scalar>(graph: &QuotientGraph, lattice: &Lattice<T>) -> Vec<Edge<T>> {
    graph
        .edges()
        .iter()
        .filter(|e| !e.is_loop())
        .map(|e| Edge {
            tail: e.tail,
            head: e.head,
            offset: lattice.translation(&e.shift),
        })
        .collect()
}

fn edge_vector<T: Scalar>(p: &[Vec<T>], e: &Edge<T>) -> Vec<T> {
    let h = linalg::add(&p[e.head], &e.offset);
    linalg::sub(&h, &p[e.tail])
}

fn smoothed_length<T: Scalar>(p: &[Vec<T>], edges: &[Edge<T>], loops: T, eps: T) -> T {
    edges.iter().fold(loops, |acc, e| {
        let d = edge_vector(p, e);
        acc + (linalg::dot(&d, &d) + eps * eps).sqrt()
    })
}

/// One majorize-minimize step: solve the weighted Laplacian system with
/// weights `1/√(|d|²+ε²)` frozen at the current point.
fn reweighted_step<T: Scalar>(p: &[Vec<T>], edges: &[Edge<T>], eps: T) -> Option<Vec<Vec<T>>> {
    let nv = p.len();
    let n = p[0].len();
    if nv == 1 {
        return Some(p.to_vec());
    }
    let free = nv - 1;
    let mut a = vec![vec![T::zero(); free]; free];
    let mut b = vec![vec![T::zero(); n]; free];
    for e in edges {
        let d = edge_vector(p, e);
        let w = (linalg::dot(&d, &d) + eps * eps).sqrt().recip();
        let (t, h) = (e.tail, e.head);
        // Gradient of w|p_h − p_t + c|² is zero at the solution.
        if h > 0 {
            a[h - 1][h - 1] = a[h - 1][h - 1] + w;
            for k in 0..n {
                b[h - 1][k] = b[h - 1][k] - w * e.offset[k];
            }
        }
        if t > 0 {
            a[t - 1][t - 1] = a[t - 1][t - 1] + w;
            for k in 0..n {
                b[t - 1][k] = b[t - 1][k] + w * e.offset[k];
            }
        }
        if h > 0 && t > 0 {
            a[h - 1][t - 1] = a[h - 1][t - 1] - w;
            a[t - 1][h - 1] = a[t - 1][h - 1] - w;
        }
    }
    let x = linalg::solve(a, b)?;
    let mut out = Vec::with_capacity(nv);
    out.push(p[0].clone());
    out.extend(x);
    Some(out)
}

/// Hessian of the unsmoothed length with respect to the free vertices.
fn length_hessian<T: Scalar>(p: &[Vec<T>], edges: &[Edge<T>]) -> Vec<Vec<T>> {
    let n = p[0].len();
    let size = (p.len() - 1) * n;
    let mut hess = vec![vec![T::zero(); size]; size];
    for e in edges {
        let d = edge_vector(p, e);
        let l = linalg::norm(&d);
        let u = linalg::scale(&d, l.recip());
        let block = |i: usize, j: usize| {
            let delta = if i == j { T::one() } else { T::zero() };
            (delta - u[i] * u[j]) / l
        };
        let vertices = [(e.head, T::one()), (e.tail, -T::one())];
        for &(va, sa) in &vertices {
            for &(vb, sb) in &vertices {
                if va == 0 || vb == 0 {
                    continue;
                }
                for i in 0..n {
                    for j in 0..n {
                        let r = (va - 1) * n + i;
                        let c = (vb - 1) * n + j;
                        hess[r][c] = hess[r][c] + sa * sb * block(i, j);
                    }
                }
            }
        }
    }
    hess
}

fn random_positions<T: Scalar>(lattice: &Lattice<T>, count: usize, seed: u64) -> Vec<Vec<T>> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let n = lattice.dimension();
    let mut out = vec![vec![T::zero(); n]];
    for _ in 1..count {
        let mut p = vec![T::zero(); n];
        for g in lattice.generators() {
            let c = T::lit(rng.gen::<f64>());
            p = linalg::axpy(&p, c, g);
        }
        out.push(p);
    }
    out
}

/// Minimizes total length over vertex positions for a fixed quotient graph
/// and lattice. The smoothed objective `Σ √(|d_e|² + ε²)` is decreased by
/// reweighted least squares while `ε` runs from `10⁻²` down to the
/// requested smoothing (both relative to `V^(1/n)`), so the recorded trace
/// is non-increasing across the whole run.
pub fn minimize_embedding<T: Scalar>(problem: &EmbeddingProblem<T>) -> Result<OptimizationReport<T>> {
    problem.check()?;
    let scale = problem.length_scale();
    let edges = edge_data(&problem.graph, &problem.lattice);
    let loops = problem
        .graph
        .edges()
        .iter()
        .filter(|e| e.is_loop())
        .fold(T::zero(), |acc, e| {
            acc + linalg::norm(&problem.lattice.translation(&e.shift))
        });

    let mut p = match &problem.initial_positions {
        Some(init) => {
            let origin = init[0].clone();
            init.iter().map(|v| linalg::sub(v, &origin)).collect()
        }
        None => random_positions(&problem.lattice, problem.graph.vertex_count(), problem.seed),
    };

    let mut stages = Vec::new();
    let mut eps = T::lit(CONTINUATION_START);
    while eps > problem.smoothing {
        stages.push(eps * scale);
        eps = eps * T::lit(CONTINUATION_FACTOR);
    }
    stages.push(problem.smoothing * scale);

    let step_tol = problem.tolerance * scale;
    let mut trace = Vec::new();
    let mut iterations = 0;
    let mut stage_converged = false;
    let mut status = SolverStatus::NotConverged;
    let mut final_eps = stages[0];

    'stages: for &eps in &stages {
        final_eps = eps;
        stage_converged = false;
        let mut current = smoothed_length(&p, &edges, loops, eps);
        trace.push(current);
        while iterations < problem.max_iterations {
            iterations += 1;
            let next = reweighted_step(&p, &edges, eps)
                .ok_or_else(|| Error::NumericalDegeneracy("singular weighted Laplacian".into()))?;
            let value = smoothed_length(&next, &edges, loops, eps);
            let moved = p
                .iter()
                .zip(&next)
                .map(|(a, b)| linalg::norm(&linalg::sub(a, b)))
                .fold(T::zero(), T::max);
            // Rounding may push the value up by a few ulps at the fixpoint.
            if value > current {
                stage_converged = true;
                break;
            }
            p = next;
            current = value;
            trace.push(current);
            if moved < step_tol {
                stage_converged = true;
                break;
            }
        }
        let threshold = T::lit(1e-3) * eps;
        for (i, e) in edges.iter().enumerate() {
            if linalg::norm(&edge_vector(&p, e)) < threshold {
                let edge = original_edge_index(&problem.graph, i);
                status = SolverStatus::VertexCollision { edge };
                stage_converged = false;
                break 'stages;
            }
        }
        if !stage_converged {
            break;
        }
    }
    if stage_converged {
        status = SolverStatus::Converged;
    }

    let lengths: Vec<T> = edges.iter().map(|e| linalg::norm(&edge_vector(&p, e))).collect();
    let length = lengths.iter().fold(loops, |a, &b| a + b);
    if let Some(&last) = trace.last() {
        if length < last {
            trace.push(length);
        }
    }
    let residual = balancing_residual_away_from_collisions(&p, &edges, &lengths, final_eps);
    let flat_directions = if p.len() > 1 && lengths.iter().all(|&l| l > T::zero()) {
        let eig = linalg::symmetric_eigenvalues(&length_hessian(&p, &edges));
        let top = eig.iter().copied().fold(T::zero(), T::max);
        eig.iter().filter(|&&v| v < T::lit(FLAT_EIGENVALUE_RATIO) * top).count()
    } else {
        0
    };
    let volume = problem.lattice.volume();
    let ratio = length.powi(problem.lattice.dimension() as i32) / volume;
    let all_lengths: Vec<T> = problem
        .graph
        .edges()
        .iter()
        .enumerate()
        .map(|(i, e)| {
            if e.is_loop() {
                linalg::norm(&problem.lattice.translation(&e.shift))
            } else {
                lengths[compact_edge_index(&problem.graph, i)]
            }
        })
        .collect();
    let converged = status == SolverStatus::Converged;
    Ok(OptimizationReport {
        argpoint: p.iter().flatten().copied().collect(),
        objective: length,
        lagrange_residual: residual,
        iterations,
        converged,
        status,
        trace,
        start_index: 0,
        embedding: Some(EmbeddingSummary {
            positions: p,
            length,
            volume,
            ratio,
            max_balancing_residual: residual,
            edge_lengths: all_lengths,
            final_smoothing: final_eps,
            flat_directions,
        }),
    })
}

/// Runs [`minimize_embedding`] from `starts` random initial embeddings
/// (seeds derived from `problem.seed`) and keeps the shortest result.
pub fn minimize_embedding_multistart<T: Scalar>(
    problem: &EmbeddingProblem<T>,
    starts: usize,
) -> Result<MultiStartOutcome<T>> {
    if starts == 0 {
        return Err(Error::invalid("need at least one start"));
    }
    let runs: Result<Vec<OptimizationReport<T>>> = (0..starts)
        .into_par_iter()
        .map(|i| {
            let mut local = problem.clone();
            local.seed = derive_seed(problem.seed, i as u64);
            if i > 0 {
                local.initial_positions = None;
            }
            minimize_embedding(&local).map(|mut r| {
                r.start_index = i;
                r
            })
        })
        .collect();
    let runs = runs?;
    let any_converged = runs.iter().any(|r| r.converged);
    let best = runs
        .iter()
        .filter(|r| r.converged || !any_converged)
        .min_by(|a, b| {
            a.objective
                .partial_cmp(&b.objective)
                .unwrap()
                .then(a.start_index.cmp(&b.start_index))
        })
        .cloned()
        .expect("at least one run");
    Ok(MultiStartOutcome { best, runs })
}

fn original_edge_index(graph: &QuotientGraph, compact: usize) -> usize {
    graph
        .edges()
        .iter()
        .enumerate()
        .filter(|(_, e)| !e.is_loop())
        .nth(compact)
        .map(|(i, _)| i)
        .expect("compact index in range")
}

fn compact_edge_index(graph: &QuotientGraph, original: usize) -> usize {
    graph.edges()[..original].iter().filter(|e| !e.is_loop()).count()
}

fn balancing_residual_away_from_collisions<T: Scalar>(p: &[Vec<T>], edges: &[Edge<T>], lengths: &[T], eps: T) -> T {
    let n = p[0].len();
    let mut sums = vec![vec![T::zero(); n]; p.len()];
    let mut short = vec![false; p.len()];
    for (e, &l) in edges.iter().zip(lengths) {
        if !(l > T::lit(10.0) * eps) {
            short[e.tail] = true;
            short[e.head] = true;
            continue;
        }
        let u = linalg::scale(&edge_vector(p, e), l.recip());
        sums[e.tail] = linalg::add(&sums[e.tail], &u);
        sums[e.head] = linalg::sub(&sums[e.head], &u);
    }
    sums.iter()
        .zip(&short)
        .filter(|(_, s)| !**s)
        .map(|(v, _)| linalg::norm(v))
        .fold(T::zero(), T::max)
}

/// Rebuilds the network from the positions found by the solver.
pub fn embedded_network<T: Scalar>(
    problem: &EmbeddingProblem<T>,
    report: &OptimizationReport<T>,
) -> Result<PeriodicNetwork<T>> {
    let positions = match &report.embedding {
        Some(s) => s.positions.clone(),
        None => return Err(Error::invalid("report carries no embedding")),
    };
    PeriodicNetwork::new(problem.graph.clone(), positions, problem.lattice.clone())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::families::{construct_hexagonal, HexParams};

    #[test]
    fn hexagonal_optimum_from_random_start() {
        let reference = construct_hexagonal(&HexParams::new(1.0, 1.0, 1.0).unwrap()).unwrap();
        let mut problem = EmbeddingProblem::new(reference.graph().clone(), reference.lattice().clone());
        problem.seed = 5;
        let report = minimize_embedding(&problem).unwrap();
        assert!(report.converged, "{:?}", report.status);
        let s = report.embedding.unwrap();
        assert!((s.ratio - 2.0 * 3f64.sqrt()).abs() < 1e-8 * 2.0 * 3f64.sqrt());
        assert!(s.max_balancing_residual < 1e-6);
        for w in report.trace.windows(2) {
            assert!(w[1] <= w[0] + 1e-12);
        }
    }
}
