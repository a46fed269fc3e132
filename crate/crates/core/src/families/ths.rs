use crate::error::{Error, Result};
use crate::graph::{QuotientEdge, QuotientGraph};
use crate::lattice::Lattice;
use crate::linalg;
use crate::network::PeriodicNetwork;
use crate::scalar::Scalar;

use super::check_lengths;

/// Parameters of a triply periodic Steiner network over D₁□D₂.
///
/// Edges `e₁, e₂` form the double edge between quotient vertices 0 and 1,
/// `e₃, e₄` the double edge between 2 and 3, and `e₅` (1–2), `e₆` (3–0) are
/// the single edges. `alpha` is the rotation about the x-axis carrying the
/// tangent plane at vertex 1 to the tangent plane at vertex 2. Replacing
/// `alpha` by `alpha ± π` only swaps the roles of `e₃` and `e₄`, so the
/// numbering is fixed by requiring `alpha ∈ (0, π)`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ThsParams<T> {
    pub x: [T; 6],
    pub alpha: T,
}

impl<T: Scalar> ThsParams<T> {
    pub fn new(x: [T; 6], alpha: T) -> Result<Self> {
        let p = ThsParams { x, alpha };
        p.check()?;
        Ok(p)
    }

    fn check(&self) -> Result<()> {
        check_lengths(&self.x)?;
        if !(self.alpha > T::zero() && self.alpha < T::PI()) {
            return Err(Error::invalid(format!(
                "alpha = {} must lie strictly inside (0, π)",
                self.alpha
            )));
        }
        Ok(())
    }

    pub fn length(&self) -> T {
        self.x.iter().fold(T::zero(), |a, &b| a + b)
    }
}

/// The seven vertices `p₀ … p₆` of the ths building block, given the
/// rotation angle through its cosine and sine.
pub(crate) fn ths_points<T: Scalar>(x: &[T; 6], cos: T, sin: T) -> [Vec<T>; 7] {
    let [x1, x2, x3, x4, x5, x6] = *x;
    let half = T::lit(0.5);
    let h = T::sqrt3() * half;
    let p0 = vec![-half * x1, -h * x1, T::zero()];
    let p1 = vec![T::zero(), T::zero(), T::zero()];
    let p2 = vec![x5, T::zero(), T::zero()];
    let p4 = vec![-half * x2, h * x2, T::zero()];
    let p3 = vec![half * x3 + x5, h * x3 * cos, h * x3 * sin];
    let p5 = vec![half * x4 + x5, -h * x4 * cos, -h * x4 * sin];
    let p6 = vec![p3[0] + x6, p3[1], p3[2]];
    [p0, p1, p2, p3, p4, p5, p6]
}

pub(crate) fn ths_graph() -> QuotientGraph {
    QuotientGraph::new(
        4,
        3,
        vec![
            QuotientEdge::new(0, 1, vec![0, 0, 0]).labelled("e1"),
            QuotientEdge::new(1, 0, vec![1, 0, 0]).labelled("e2"),
            QuotientEdge::new(2, 3, vec![0, 0, 0]).labelled("e3"),
            QuotientEdge::new(2, 3, vec![0, 1, 0]).labelled("e4"),
            QuotientEdge::new(1, 2, vec![0, 0, 0]).labelled("e5"),
            QuotientEdge::new(3, 0, vec![0, 0, 1]).labelled("e6"),
        ],
    )
    .expect("static ths quotient")
}

/// Builds the ths network with `p₁` at the origin, `p₂` on the x-axis and
/// `p₀, p₄` in the xy-plane. The lattice is spanned by `g₁ = p₄ − p₀`,
/// `g₂ = p₅ − p₃`, `g₃ = p₆ − p₀`, one generator per independent cycle.
pub fn construct_ths<T: Scalar>(p: &ThsParams<T>) -> Result<PeriodicNetwork<T>> {
    p.check()?;
    let [p0, p1, p2, p3, p4, p5, p6] = ths_points(&p.x, p.alpha.cos(), p.alpha.sin());
    let lattice = Lattice::new(vec![
        linalg::sub(&p4, &p0),
        linalg::sub(&p5, &p3),
        linalg::sub(&p6, &p0),
    ])?;
    PeriodicNetwork::new(ths_graph(), vec![p0, p1, p2, p3], lattice)
}

/// Closed-form generators `g₁, g₂, g₃` as linear functions of the lengths.
pub fn ths_generators<T: Scalar>(x: &[T; 6], alpha: T) -> [Vec<T>; 3] {
    let [x1, x2, x3, x4, x5, x6] = *x;
    let half = T::lit(0.5);
    let s3 = T::sqrt3();
    let two = T::lit(2.0);
    let (sin, cos) = alpha.sin_cos();
    [
        vec![half * (x1 - x2), half * s3 * (x1 + x2), T::zero()],
        vec![
            half * (x4 - x3),
            -half * s3 * (x3 + x4) * cos,
            -half * s3 * (x3 + x4) * sin,
        ],
        vec![
            half * (x1 + x3 + two * x5 + two * x6),
            half * s3 * (x1 + x3 * cos),
            half * x3 * s3 * sin,
        ],
    ]
}

/// `¾ sin α (x₁x₂x₃ + x₁x₂x₄ + x₁x₃x₄ + x₂x₃x₄ + (x₅+x₆)(x₁x₃ + x₂x₃ + x₁x₄ + x₂x₄))`
pub fn ths_volume_formula<T: Scalar>(x: &[T; 6], alpha: T) -> T {
    let [x1, x2, x3, x4, x5, x6] = *x;
    let cubic = x1 * x2 * x3 + x1 * x2 * x4 + x1 * x3 * x4 + x2 * x3 * x4;
    let mixed = (x5 + x6) * (x1 * x3 + x2 * x3 + x1 * x4 + x2 * x4);
    T::lit(0.75) * alpha.sin() * (cubic + mixed)
}
