use crate::error::Result;
use crate::graph::{QuotientEdge, QuotientGraph};
use crate::lattice::Lattice;
use crate::linalg;
use crate::network::PeriodicNetwork;
use crate::scalar::Scalar;

use super::check_lengths;

/// Edge lengths of a doubly periodic Steiner network over the dipole D₃.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct HexParams<T> {
    pub x: [T; 3],
}

impl<T: Scalar> HexParams<T> {
    pub fn new(x1: T, x2: T, x3: T) -> Result<Self> {
        check_lengths(&[x1, x2, x3])?;
        Ok(HexParams { x: [x1, x2, x3] })
    }

    pub fn length(&self) -> T {
        self.x[0] + self.x[1] + self.x[2]
    }
}

/// Builds the network with `p₀` at the origin and the three edges leaving
/// it at 0°, 120° and 240°. The quotient has two vertices, `p₀` and `p₁`;
/// `p₂` and `p₃` are lattice translates of `p₁`, and the lattice is spanned
/// by `g₁ = p₁ − p₃`, `g₂ = p₂ − p₃`.
pub fn construct_hexagonal<T: Scalar>(p: &HexParams<T>) -> Result<PeriodicNetwork<T>> {
    check_lengths(&p.x)?;
    let [x1, x2, x3] = p.x;
    let half = T::lit(0.5);
    let h = T::sqrt3() * half;
    let p0 = vec![T::zero(), T::zero()];
    let p1 = vec![x1, T::zero()];
    let p2 = vec![-half * x2, h * x2];
    let p3 = vec![-half * x3, -h * x3];
    let lattice = Lattice::new(vec![linalg::sub(&p1, &p3), linalg::sub(&p2, &p3)])?;
    // p2 = p1 - g1 + g2, p3 = p1 - g1
    let graph = QuotientGraph::new(
        2,
        2,
        vec![
            QuotientEdge::new(0, 1, vec![0, 0]).labelled("e1"),
            QuotientEdge::new(0, 1, vec![-1, 1]).labelled("e2"),
            QuotientEdge::new(0, 1, vec![-1, 0]).labelled("e3"),
        ],
    )?;
    PeriodicNetwork::new(graph, vec![p0, p1], lattice)
}

/// `(√3/2)(x₁x₂ + x₁x₃ + x₂x₃)`; non-negative inputs are admitted.
pub fn hex_area_formula<T: Scalar>(x: &[T; 3]) -> T {
    T::sqrt3() / T::lit(2.0) * (x[0] * x[1] + x[0] * x[2] + x[1] * x[2])
}
