use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::families::{hex_area_formula, srs_volume_formula};
use crate::scalar::Scalar;
use crate::symmetric::{hex_gradient, srs_gradient, ths_reduced_gradient, ths_reduced_volume, LagrangeReport};

use super::{derive_seed, OptimizationReport, SolverStatus};

/// Volume polynomial maximized over `{x ≥ 0, Σx = 1}`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum SimplexFamily {
    /// `(√3/2) P₂(x₁, x₂, x₃)`
    Hex,
    /// ths volume at `α = π/2` in `(x₁, x₂, x₃, x₄, x₅ + x₆)`
    ThsReduced,
    /// srs volume in the six edge lengths
    Srs,
}

impl SimplexFamily {
    pub fn dimension(self) -> usize {
        match self {
            SimplexFamily::Hex => 3,
            SimplexFamily::ThsReduced => 5,
            SimplexFamily::Srs => 6,
        }
    }

    pub fn parse(name: &str) -> Option<Self> {
        match name {
            "hex" => Some(SimplexFamily::Hex),
            "ths" | "ths-reduced" => Some(SimplexFamily::ThsReduced),
            "srs" => Some(SimplexFamily::Srs),
            _ => None,
        }
    }

    pub fn objective<T: Scalar>(self, x: &[T]) -> T {
        match self {
            SimplexFamily::Hex => hex_area_formula(&[x[0], x[1], x[2]]),
            SimplexFamily::ThsReduced => ths_reduced_volume(&[x[0], x[1], x[2], x[3], x[4]]),
            SimplexFamily::Srs => srs_volume_formula(&[x[0], x[1], x[2], x[3], x[4], x[5]]),
        }
    }

    pub fn gradient<T: Scalar>(self, x: &[T]) -> Vec<T> {
        match self {
            SimplexFamily::Hex => hex_gradient(&[x[0], x[1], x[2]]).to_vec(),
            SimplexFamily::ThsReduced => ths_reduced_gradient(&[x[0], x[1], x[2], x[3], x[4]]).to_vec(),
            SimplexFamily::Srs => srs_gradient(&[x[0], x[1], x[2], x[3], x[4], x[5]]).to_vec(),
        }
    }

    /// Known maximizer under `L = 1`.
    pub fn optimum<T: Scalar>(self) -> (Vec<T>, T) {
        match self {
            SimplexFamily::Hex => (vec![T::lit(1.0 / 3.0); 3], T::sqrt3() / T::lit(6.0)),
            SimplexFamily::ThsReduced => {
                let a = T::lit(2.0 / 9.0);
                (vec![a, a, a, a, T::lit(1.0 / 9.0)], T::lit(4.0 / 81.0))
            }
            SimplexFamily::Srs => (vec![T::lit(1.0 / 6.0); 6], T::SQRT_2() / T::lit(27.0)),
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct SimplexProblem<T> {
    pub family: SimplexFamily,
    pub tolerance: T,
    pub max_iterations: usize,
    pub seed: u64,
}

impl<T: Scalar> SimplexProblem<T> {
    pub fn new(family: SimplexFamily) -> Self {
        SimplexProblem {
            family,
            tolerance: T::lit(1e-10),
            max_iterations: 20_000,
            seed: 0,
        }
    }

    pub fn dimension(&self) -> usize {
        self.family.dimension()
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct MultiStartOutcome<T> {
    pub best: OptimizationReport<T>,
    pub runs: Vec<OptimizationReport<T>>,
}

/// Euclidean projection onto `{x ≥ 0, Σx = 1}` by sorting.
pub fn project_to_simplex<T: Scalar>(v: &[T]) -> Vec<T> {
    let mut order: Vec<usize> = (0..v.len()).collect();
    // Descending by value, ties by index.
    order.sort_by(|&a, &b| v[b].partial_cmp(&v[a]).unwrap().then(a.cmp(&b)));
    let mut cumulative = T::zero();
    let mut theta = T::zero();
    for (j, &i) in order.iter().enumerate() {
        cumulative = cumulative + v[i];
        let t = (cumulative - T::one()) / T::from_usize_lossy(j + 1);
        if v[i] - t > T::zero() {
            theta = t;
        }
    }
    v.iter().map(|&x| (x - theta).max(T::zero())).collect()
}

fn random_simplex_point<T: Scalar>(dim: usize, seed: u64) -> Vec<T> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    // Flat Dirichlet: normalized exponentials.
    let e: Vec<f64> = (0..dim).map(|_| -(1.0 - rng.gen::<f64>()).ln()).collect();
    let s: f64 = e.iter().sum();
    e.into_iter().map(|v| T::lit(v / s)).collect()
}

/// Projected gradient ascent with Armijo backtracking from one start.
fn ascend<T: Scalar>(problem: &SimplexProblem<T>, start: Vec<T>, start_index: usize) -> OptimizationReport<T> {
    let family = problem.family;
    let mut x = project_to_simplex(&start);
    let mut f = family.objective(&x);
    let mut trace = vec![f];
    let mut step = T::one();
    let armijo = T::lit(1e-4);
    let min_step = T::lit(1e-30);
    let mut iterations = 0;
    let mut converged = false;

    let residual_at = |x: &[T]| -> T {
        if x.iter().all(|&v| v > T::zero()) {
            LagrangeReport::from_gradient(family.gradient(x)).residual
        } else {
            T::infinity()
        }
    };

    while iterations < problem.max_iterations {
        if residual_at(&x) < problem.tolerance {
            converged = true;
            break;
        }
        iterations += 1;
        let g = family.gradient(&x);
        let mut accepted = None;
        while step > min_step {
            let trial: Vec<T> = x.iter().zip(&g).map(|(&a, &b)| a + step * b).collect();
            let y = project_to_simplex(&trial);
            let fy = family.objective(&y);
            let ascent = g
                .iter()
                .zip(y.iter().zip(&x))
                .fold(T::zero(), |s, (&gi, (&yi, &xi))| s + gi * (yi - xi));
            if fy >= f + armijo * ascent && fy >= f {
                accepted = Some((y, fy));
                break;
            }
            step = step / T::lit(2.0);
        }
        match accepted {
            Some((y, fy)) => {
                let moved = y.iter().zip(&x).any(|(a, b)| a != b);
                let stalled = fy - f <= T::lit(4.0) * T::epsilon() * f.abs();
                x = y;
                f = fy;
                trace.push(f);
                step = step * T::lit(2.0);
                if !moved || stalled {
                    break;
                }
            }
            None => break,
        }
    }
    // Near the maximizer the objective is flat to rounding, so ascent stalls
    // before the gradient equalizes; Newton steps on the Lagrange system
    // finish the job.
    let mut polish = 0;
    while !converged && polish < 50 && iterations < problem.max_iterations {
        let current = residual_at(&x);
        if current < problem.tolerance {
            converged = true;
            break;
        }
        if !current.is_finite() {
            break;
        }
        let Some(y) = newton_step(family, &x) else {
            break;
        };
        if !(residual_at(&y) < current) {
            break;
        }
        polish += 1;
        iterations += 1;
        x = y;
        f = family.objective(&x);
        trace.push(f);
    }
    if !converged && residual_at(&x) < problem.tolerance {
        converged = true;
    }
    let lagrange_residual = residual_at(&x);
    OptimizationReport {
        argpoint: x,
        objective: f,
        lagrange_residual,
        iterations,
        converged,
        status: if converged {
            SolverStatus::Converged
        } else {
            SolverStatus::NotConverged
        },
        trace,
        start_index,
        embedding: None,
    }
}

/// Newton step for `∇f(x) = λ·1`, `Σx = 1`; the gradient is quadratic, so
/// central differences give its Jacobian up to rounding.
fn newton_step<T: Scalar>(family: SimplexFamily, x: &[T]) -> Option<Vec<T>> {
    let m = x.len();
    let h = T::lit(1e-3);
    let g = family.gradient(x);
    let mut kkt = vec![vec![T::zero(); m + 1]; m + 1];
    for j in 0..m {
        let mut plus = x.to_vec();
        let mut minus = x.to_vec();
        plus[j] = plus[j] + h;
        minus[j] = minus[j] - h;
        let gp = family.gradient(&plus);
        let gm = family.gradient(&minus);
        for i in 0..m {
            kkt[i][j] = (gp[i] - gm[i]) / (h + h);
        }
        kkt[j][m] = -T::one();
        kkt[m][j] = T::one();
    }
    let lambda = g.iter().fold(T::zero(), |a, &b| a + b) / T::from_usize_lossy(m);
    let mut rhs: Vec<Vec<T>> = g.iter().map(|&gi| vec![lambda - gi]).collect();
    let sum = x.iter().fold(T::zero(), |a, &b| a + b);
    rhs.push(vec![T::one() - sum]);
    let sol = crate::linalg::solve(kkt, rhs)?;
    let y: Vec<T> = x.iter().zip(&sol).map(|(&xi, d)| xi + d[0]).collect();
    if y.iter().all(|&v| v > T::zero()) {
        Some(y)
    } else {
        None
    }
}

/// Runs `starts` independent ascents from random simplex points and picks
/// the best converged run by (objective descending, start index).
/// Exhausting the iteration budget yields a `NotConverged` report, not an
/// error.
pub fn maximize_volume_on_simplex<T: Scalar>(
    problem: &SimplexProblem<T>,
    starts: usize,
) -> Result<MultiStartOutcome<T>> {
    if !(problem.tolerance > T::zero()) {
        return Err(Error::invalid("tolerance must be positive"));
    }
    if starts == 0 || problem.max_iterations == 0 {
        return Err(Error::invalid("need at least one start and one iteration"));
    }
    let dim = problem.dimension();
    let runs: Vec<OptimizationReport<T>> = (0..starts)
        .into_par_iter()
        .map(|i| {
            let x0 = random_simplex_point(dim, derive_seed(problem.seed, i as u64));
            ascend(problem, x0, i)
        })
        .collect();
    let best = select_best(&runs);
    Ok(MultiStartOutcome { best, runs })
}

fn select_best<T: Scalar>(runs: &[OptimizationReport<T>]) -> OptimizationReport<T> {
    let any_converged = runs.iter().any(|r| r.converged);
    runs.iter()
        .filter(|r| r.converged || !any_converged)
        .min_by(|a, b| {
            b.objective
                .partial_cmp(&a.objective)
                .unwrap()
                .then(a.start_index.cmp(&b.start_index))
        })
        .cloned()
        .expect("at least one run")
}
