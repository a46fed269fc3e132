//! A one-parameter family of networks with the fixed lattice Λ₀, running
//! from an optimal ths network (`t = −1`) through a network with a degree-4
//! vertex (`t = 0`) to a Steiner network with quotient K₄ (`t = 1`), along
//! which the total length never increases.

use serde::Serialize;

use crate::error::{Error, Result};
use crate::families::ths::{ths_graph, ths_points};
use crate::graph::{QuotientEdge, QuotientGraph};
use crate::lattice::Lattice;
use crate::linalg;
use crate::network::PeriodicNetwork;
use crate::scalar::Scalar;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct HomotopyParams<T> {
    /// Length of the free ths edge `x₅` at `t = −1`, in `(0, ½)`.
    pub xi: T,
    pub t: T,
}

impl<T: Scalar> HomotopyParams<T> {
    pub fn new(xi: T, t: T) -> Result<Self> {
        check_xi(xi)?;
        if !(t >= -T::one() && t <= T::one()) {
            return Err(Error::invalid(format!("t = {t} must lie in [-1, 1]")));
        }
        Ok(HomotopyParams { xi, t })
    }
}

fn check_xi<T: Scalar>(xi: T) -> Result<()> {
    if !(xi > T::zero() && xi < T::lit(0.5)) {
        return Err(Error::invalid(format!("xi = {xi} must lie in (0, 1/2)")));
    }
    Ok(())
}

/// Generators `(0, √3, 0)`, `(0, 0, −√3)`, `(3/2, √3/2, √3/2)`.
pub fn homotopy_lattice<T: Scalar>() -> Lattice<T> {
    let s = T::sqrt3();
    let h = s / T::lit(2.0);
    Lattice::new(vec![
        vec![T::zero(), s, T::zero()],
        vec![T::zero(), T::zero(), -s],
        vec![T::lit(1.5), h, h],
    ])
    .expect("fixed nondegenerate lattice")
}

/// `(√3/2)(2 + √2 + √3)`
pub fn homotopy_final_length<T: Scalar>() -> T {
    T::sqrt3() / T::lit(2.0) * (T::lit(2.0) + T::SQRT_2() + T::sqrt3())
}

fn k4_graph() -> QuotientGraph {
    QuotientGraph::new(
        4,
        3,
        vec![
            QuotientEdge::new(0, 1, vec![0, 0, 0]),
            QuotientEdge::new(1, 2, vec![0, 0, 0]),
            QuotientEdge::new(2, 0, vec![1, 0, 0]),
            QuotientEdge::new(2, 3, vec![0, 0, 0]),
            QuotientEdge::new(1, 3, vec![0, 1, 0]),
            QuotientEdge::new(3, 0, vec![0, 0, 1]),
        ],
    )
    .expect("static K4 quotient")
}

/// Quotient vertices `p₀ … p₃` at `t = 0` (with `p₁ = p₂ = 0`).
fn start_points<T: Scalar>() -> [Vec<T>; 4] {
    let half = T::lit(0.5);
    let h = T::sqrt3() * half;
    [
        vec![-half, -h, T::zero()],
        vec![T::zero(); 3],
        vec![T::zero(); 3],
        vec![half, T::zero(), h],
    ]
}

/// Quotient vertices `p₀ … p₃` of the Steiner endpoint at `t = 1`.
fn end_points<T: Scalar>() -> [Vec<T>; 4] {
    let s2 = T::SQRT_2();
    let s3 = T::sqrt3();
    let half = T::lit(0.5);
    let a = (s3 - T::lit(2.0)) / T::lit(4.0);
    let b = s3 / T::lit(8.0) * (s2 - T::lit(2.0));
    [
        vec![-half, -s3 * half, T::zero()],
        vec![a, b, b],
        vec![a, -b, -b],
        vec![half * (s3 - T::one()), T::zero(), s3 * half],
    ]
}

fn k4_points<T: Scalar>(t: T) -> Vec<Vec<T>> {
    let start = start_points::<T>();
    let end = end_points::<T>();
    start.iter().zip(&end).map(|(a, b)| linalg::lerp(a, b, t)).collect()
}

/// Lengths of the six K₄ segments at `t ∈ [0, 1]`, in the edge order of the
/// K₄ chart. At `t = 0` the segment between `p₁` and `p₂` has length zero.
pub fn homotopy_k4_segment_lengths<T: Scalar>(t: T) -> Result<Vec<T>> {
    if !(t >= T::zero() && t <= T::one()) {
        return Err(Error::invalid(format!("t = {t} must lie in [0, 1] for the K4 chart")));
    }
    let lattice = homotopy_lattice::<T>();
    let p = k4_points(t);
    Ok(k4_graph()
        .edges()
        .iter()
        .map(|e| {
            linalg::norm(&linalg::sub(
                &linalg::add(&p[e.head], &lattice.translation(&e.shift)),
                &p[e.tail],
            ))
        })
        .collect())
}

/// The network `N_t`. For `t < 0` it is the ths network with
/// `x₁ = … = x₄ = 1`, `x₅ = |t|ξ`, `x₆ = ½ − |t|ξ`, `α = π/2`; at `t = 0` the
/// two vertices joined by the vanishing edge are merged into one degree-4
/// vertex; for `t > 0` the K₄ vertices interpolate linearly between the
/// `t = 0` configuration and the Steiner endpoint.
pub fn homotopy_network<T: Scalar>(p: &HomotopyParams<T>) -> Result<PeriodicNetwork<T>> {
    let p = HomotopyParams::new(p.xi, p.t)?;
    let lattice = homotopy_lattice::<T>();
    let zero = T::zero();
    if p.t < zero {
        let x5 = p.t.abs() * p.xi;
        let x = [T::one(), T::one(), T::one(), T::one(), x5, T::lit(0.5) - x5];
        // α = π/2 with its cosine and sine taken exactly.
        let [p0, p1, p2, p3, ..] = ths_points(&x, zero, T::one());
        PeriodicNetwork::new(ths_graph(), vec![p0, p1, p2, p3], lattice)
    } else if p.t == zero {
        let [p0, p12, _, p3] = start_points::<T>();
        let graph = QuotientGraph::new(
            3,
            3,
            vec![
                QuotientEdge::new(0, 1, vec![0, 0, 0]),
                QuotientEdge::new(1, 0, vec![1, 0, 0]),
                QuotientEdge::new(1, 2, vec![0, 0, 0]),
                QuotientEdge::new(1, 2, vec![0, 1, 0]),
                QuotientEdge::new(2, 0, vec![0, 0, 1]),
            ],
        )?;
        PeriodicNetwork::new(graph, vec![p0, p12, p3], lattice)
    } else {
        PeriodicNetwork::new(k4_graph(), k4_points(p.t), lattice)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct ProfilePoint<T> {
    pub t: T,
    pub length: T,
    pub volume: T,
}

/// Parameter values `t_k = (2k − (s−1))/(s−1)`, `k = 0 … s−1`; an odd
/// sample count puts `t = 0` on the grid exactly.
pub fn homotopy_parameter_grid<T: Scalar>(samples: usize) -> Result<Vec<T>> {
    if samples < 3 || samples.is_multiple_of(2) {
        return Err(Error::invalid(format!(
            "samples = {samples}; need an odd count of at least 3 so that -1, 0 and 1 are sampled"
        )));
    }
    let m = samples - 1;
    Ok((0..samples)
        .map(|k| T::from_i64_lossy(2 * k as i64 - m as i64) / T::from_usize_lossy(m))
        .collect())
}

pub fn homotopy_length_profile<T: Scalar>(xi: T, samples: usize) -> Result<Vec<ProfilePoint<T>>> {
    check_xi(xi)?;
    homotopy_parameter_grid::<T>(samples)?
        .into_iter()
        .map(|t| {
            let net = homotopy_network(&HomotopyParams { xi, t })?;
            Ok(ProfilePoint {
                t,
                length: net.length(),
                volume: net.volume(),
            })
        })
        .collect()
}
