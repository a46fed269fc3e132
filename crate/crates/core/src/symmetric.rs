//! Elementary symmetric polynomials, Maclaurin's inequality, and the
//! Lagrange conditions for maximizing the family volumes at fixed length.

use num_traits::Num;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::families::FamilyKind;
use crate::network::PeriodicNetwork;
use crate::scalar::Scalar;

/// Relative Maclaurin gap below which all entries are declared equal.
pub const MACLAURIN_EQUALITY_TOLERANCE: f64 = 1e-10;

/// `P_k(x)`, the sum over all k-subsets of products, by the prefix
/// recurrence `e_j ← e_j + x_i e_{j−1}`. Works for any commutative ring
/// type, so integer and rational inputs are evaluated exactly.
pub fn elementary_symmetric<T: Num + Copy>(k: usize, x: &[T]) -> Result<T> {
    if k > x.len() {
        return Err(Error::invalid(format!(
            "degree {k} exceeds the number of variables {}",
            x.len()
        )));
    }
    let mut e = vec![T::zero(); k + 1];
    e[0] = T::one();
    for (i, &xi) in x.iter().enumerate() {
        for j in (1..=k.min(i + 1)).rev() {
            e[j] = e[j] + xi * e[j - 1];
        }
    }
    Ok(e[k])
}

pub fn binomial(m: usize, k: usize) -> u128 {
    if k > m {
        return 0;
    }
    let k = k.min(m - k);
    (0..k).fold(1u128, |acc, i| acc * (m - i) as u128 / (i + 1) as u128)
}

/// `binom(m,k)·(mean x)^k − P_k(x)`, non-negative for `x ≥ 0`.
pub fn maclaurin_gap<T: Scalar>(k: usize, x: &[T]) -> Result<T> {
    let (bound, pk) = maclaurin_parts(k, x)?;
    Ok(bound - pk)
}

fn maclaurin_parts<T: Scalar>(k: usize, x: &[T]) -> Result<(T, T)> {
    if k < 2 {
        return Err(Error::invalid(format!("Maclaurin degree must be at least 2, got {k}")));
    }
    if let Some(v) = x.iter().find(|v| !(**v >= T::zero())) {
        return Err(Error::invalid(format!("negative entry {v}")));
    }
    let pk = elementary_symmetric(k, x)?;
    let m = x.len();
    let mean = x.iter().fold(T::zero(), |a, &b| a + b) / T::from_usize_lossy(m);
    let bound = T::from_u128(binomial(m, k)).expect("binomial fits scalar") * mean.powi(k as i32);
    Ok((bound, pk))
}

/// Whether `x` attains equality in Maclaurin's inequality, judged by the
/// gap relative to the bound.
pub fn maclaurin_equality<T: Scalar>(k: usize, x: &[T]) -> Result<bool> {
    let (bound, pk) = maclaurin_parts(k, x)?;
    Ok(bound - pk <= T::lit(MACLAURIN_EQUALITY_TOLERANCE) * bound)
}

/// Gradient of a volume function against the constant gradient of the
/// length; the point is critical under `L = const` iff the residual vanishes.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct LagrangeReport<T> {
    pub gradient: Vec<T>,
    /// Mean of the gradient components.
    pub multiplier_estimate: T,
    /// `max − min` of the gradient components.
    pub residual: T,
}

impl<T: Scalar> LagrangeReport<T> {
    pub fn from_gradient(gradient: Vec<T>) -> Self {
        let n = T::from_usize_lossy(gradient.len().max(1));
        let mean = gradient.iter().fold(T::zero(), |a, &b| a + b) / n;
        let max = gradient.iter().copied().fold(T::neg_infinity(), T::max);
        let min = gradient.iter().copied().fold(T::infinity(), T::min);
        LagrangeReport {
            gradient,
            multiplier_estimate: mean,
            residual: if max >= min { max - min } else { T::zero() },
        }
    }
}

fn check_positive<T: Scalar>(x: &[T]) -> Result<()> {
    match x.iter().find(|v| !(**v > T::zero())) {
        Some(v) => Err(Error::invalid(format!(
            "Lagrange analysis needs positive inputs, got {v}"
        ))),
        None => Ok(()),
    }
}

/// Gradient of the ths volume at `α = π/2` in the reduced variables
/// `(x₁, x₂, x₃, x₄, y = x₅ + x₆)`, without the positivity check.
pub fn ths_reduced_gradient<T: Scalar>(x: &[T; 5]) -> [T; 5] {
    let [x1, x2, x3, x4, y] = *x;
    let c = T::lit(0.75);
    [
        c * (x2 * x3 + x2 * x4 + x3 * x4 + x3 * y + x4 * y),
        c * (x1 * x3 + x1 * x4 + x3 * x4 + x3 * y + x4 * y),
        c * (x1 * x2 + x1 * x4 + x2 * x4 + x1 * y + x2 * y),
        c * (x1 * x2 + x1 * x3 + x2 * x3 + x1 * y + x2 * y),
        c * (x1 * x3 + x2 * x3 + x1 * x4 + x2 * x4),
    ]
}

/// The reduced ths volume `¾(P₃(x₁..x₄) + y(x₁+x₂)(x₃+x₄))` (α = π/2).
pub fn ths_reduced_volume<T: Scalar>(x: &[T; 5]) -> T {
    let [x1, x2, x3, x4, y] = *x;
    T::lit(0.75) * (x1 * x2 * x3 + x1 * x2 * x4 + x1 * x3 * x4 + x2 * x3 * x4 + y * (x1 + x2) * (x3 + x4))
}

pub fn ths_lagrange_residual<T: Scalar>(x: &[T; 5]) -> Result<LagrangeReport<T>> {
    check_positive(x)?;
    Ok(LagrangeReport::from_gradient(ths_reduced_gradient(x).to_vec()))
}

/// Gradient of the srs volume polynomial, without the positivity check.
pub fn srs_gradient<T: Scalar>(x: &[T; 6]) -> [T; 6] {
    let [x1, x2, x3, x4, x5, x6] = *x;
    let c = T::SQRT_2().recip();
    [
        c * (x2 * x4 + x3 * x4 + x2 * x5 + x3 * x5 + x4 * x5 + x2 * x6 + x3 * x6 + x4 * x6),
        c * (x1 * x4 + x3 * x4 + x1 * x5 + x3 * x5 + x4 * x5 + x1 * x6 + x3 * x6 + x5 * x6),
        c * (x1 * x4 + x2 * x4 + x1 * x5 + x2 * x5 + x1 * x6 + x2 * x6 + x4 * x6 + x5 * x6),
        c * (x1 * x2 + x1 * x3 + x2 * x3 + x1 * x5 + x2 * x5 + x1 * x6 + x3 * x6 + x5 * x6),
        c * (x1 * x2 + x1 * x3 + x2 * x3 + x1 * x4 + x2 * x4 + x2 * x6 + x3 * x6 + x4 * x6),
        c * (x1 * x2 + x1 * x3 + x2 * x3 + x1 * x4 + x3 * x4 + x2 * x5 + x3 * x5 + x4 * x5),
    ]
}

pub fn srs_lagrange_residual<T: Scalar>(x: &[T; 6]) -> Result<LagrangeReport<T>> {
    check_positive(x)?;
    Ok(LagrangeReport::from_gradient(srs_gradient(x).to_vec()))
}

/// Gradient of the hexagonal area `(√3/2)P₂(x)`.
pub fn hex_gradient<T: Scalar>(x: &[T; 3]) -> [T; 3] {
    let c = T::sqrt3() / T::lit(2.0);
    [c * (x[1] + x[2]), c * (x[0] + x[2]), c * (x[0] + x[1])]
}

/// Lagrange analysis of a network whose quotient is recognized as one of the
/// closed-form families, evaluated at its edge lengths rescaled to `L = 1`.
/// The gradient is listed in edge order; for ths the two single edges share
/// the component of `y = x₅ + x₆`, and α is taken to be π/2.
pub fn network_lagrange_report<T: Scalar>(net: &PeriodicNetwork<T>) -> Option<(FamilyKind, LagrangeReport<T>)> {
    let graph = net.graph();
    let kind = FamilyKind::recognize(graph)?;
    let total = net.length();
    let x: Vec<T> = net.edge_lengths().into_iter().map(|l| l / total).collect();
    let gradient = match kind {
        FamilyKind::Hexagonal => hex_gradient(&[x[0], x[1], x[2]]).to_vec(),
        FamilyKind::Srs => {
            // Label the edges at vertex 0 as x₁, x₂, x₃ towards v₁, v₂, v₃ and
            // the opposite edges as x₄ = v₂v₃, x₅ = v₃v₁, x₆ = v₁v₂. The
            // volume polynomial is invariant under relabelling by K₄
            // automorphisms, so any such choice gives the same residual.
            let incs = graph.incidences(0);
            let others: Vec<usize> = incs.iter().map(|i| i.far_end(graph).0).collect();
            let joins = |a: usize, b: usize| {
                graph
                    .edges()
                    .iter()
                    .position(|e| (e.tail == a && e.head == b) || (e.tail == b && e.head == a))
                    .expect("K4 has every pair")
            };
            let order = [
                incs[0].edge,
                incs[1].edge,
                incs[2].edge,
                joins(others[1], others[2]),
                joins(others[2], others[0]),
                joins(others[0], others[1]),
            ];
            let labelled: [T; 6] = order.map(|e| x[e]);
            let g = srs_gradient(&labelled);
            let mut out = vec![T::zero(); 6];
            for (k, &e) in order.iter().enumerate() {
                out[e] = g[k];
            }
            out
        }
        FamilyKind::Ths => {
            let multi = graph.multi_edges();
            let doubles: Vec<usize> = multi.iter().flat_map(|m| m.edges.iter().copied()).collect();
            let singles: Vec<usize> = (0..6).filter(|e| !doubles.contains(e)).collect();
            let y = x[singles[0]] + x[singles[1]];
            let reduced = [x[doubles[0]], x[doubles[1]], x[doubles[2]], x[doubles[3]], y];
            let g = ths_reduced_gradient(&reduced);
            let mut out = vec![T::zero(); 6];
            for (k, &e) in doubles.iter().enumerate() {
                out[e] = g[k];
            }
            for &e in &singles {
                out[e] = g[4];
            }
            out
        }
    };
    Some((kind, LagrangeReport::from_gradient(gradient)))
}

/// `L^n / V` of a network.
pub fn length_ratio<T: Scalar>(net: &PeriodicNetwork<T>) -> Result<T> {
    net.ratio()
}
