use crate::error::Result;
use crate::graph::{QuotientEdge, QuotientGraph};
use crate::lattice::Lattice;
use crate::linalg;
use crate::network::PeriodicNetwork;
use crate::scalar::Scalar;

use super::check_lengths;

/// |cos β| for the dihedral angle between any two tangent planes of a K₄
/// Steiner network (the tetrahedral angle).
pub const SRS_COS_BETA: f64 = 1.0 / 3.0;

/// The two mirror-image networks with the same edge lengths.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum Chirality {
    #[default]
    Positive,
    Negative,
}

impl Chirality {
    pub fn from_sign(sign: i32) -> Option<Self> {
        match sign {
            1 => Some(Chirality::Positive),
            -1 => Some(Chirality::Negative),
            _ => None,
        }
    }

    pub fn sign(self) -> i32 {
        match self {
            Chirality::Positive => 1,
            Chirality::Negative => -1,
        }
    }

    /// `cos β = ±1/3`, the signed rotation between neighbouring tangent planes.
    pub fn cos_beta<T: Scalar>(self) -> T {
        T::lit(f64::from(self.sign()) * SRS_COS_BETA)
    }
}

/// Edge lengths of a K₄ Steiner network. Edges `eᵢ` and `eᵢ₊₃` never share
/// an endpoint: `e₁ = 0–1`, `e₂ = 0–2`, `e₃ = 0–3`, `e₄ = 2–3`, `e₅ = 3–1`,
/// `e₆ = 1–2`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SrsParams<T> {
    pub x: [T; 6],
    pub chirality: Chirality,
}

impl<T: Scalar> SrsParams<T> {
    pub fn new(x: [T; 6], chirality: Chirality) -> Result<Self> {
        check_lengths(&x)?;
        Ok(SrsParams { x, chirality })
    }

    pub fn length(&self) -> T {
        self.x.iter().fold(T::zero(), |a, &b| a + b)
    }
}

fn srs_points<T: Scalar>(x: &[T; 6], chirality: Chirality) -> [Vec<T>; 7] {
    let [x1, x2, x3, x4, x5, x6] = *x;
    let half = T::lit(0.5);
    let s3 = T::sqrt3();
    let h = s3 * half;
    // Out-of-plane component of the three edge directions leaving the
    // xy-plane; its sign selects the chirality.
    let down = -(T::lit(2.0) / T::lit(3.0)).sqrt() * T::lit(f64::from(chirality.sign()));
    let inv2s3 = (T::lit(2.0) * s3).recip();
    let p0 = vec![T::zero(); 3];
    let p1 = vec![x1, T::zero(), T::zero()];
    let p2 = vec![-half * x2, h * x2, T::zero()];
    let p3 = vec![-half * x3, -h * x3, T::zero()];
    let p4 = linalg::axpy(&p2, x4, &[T::zero(), s3.recip(), down]);
    let p5 = linalg::axpy(&p3, x5, &[-half, -inv2s3, down]);
    let p6 = linalg::axpy(&p1, x6, &[half, -inv2s3, down]);
    [p0, p1, p2, p3, p4, p5, p6]
}

pub(crate) fn srs_graph() -> QuotientGraph {
    QuotientGraph::new(
        4,
        3,
        vec![
            QuotientEdge::new(0, 1, vec![0, 0, 0]).labelled("e1"),
            QuotientEdge::new(0, 2, vec![0, 0, 0]).labelled("e2"),
            QuotientEdge::new(0, 3, vec![0, 0, 0]).labelled("e3"),
            QuotientEdge::new(2, 3, vec![0, 1, 0]).labelled("e4"),
            QuotientEdge::new(3, 1, vec![0, 0, 1]).labelled("e5"),
            QuotientEdge::new(1, 2, vec![1, 0, 0]).labelled("e6"),
        ],
    )
    .expect("static K4 quotient")
}

/// Builds the K₄ network with `p₀` at the origin, `p₁` on the x-axis and
/// `p₂, p₃` in the xy-plane; the lattice is spanned by `p₆ − p₂`,
/// `p₄ − p₃` and `p₅ − p₁`. Negative chirality is the mirror image in the
/// xy-plane.
pub fn construct_srs<T: Scalar>(p: &SrsParams<T>) -> Result<PeriodicNetwork<T>> {
    check_lengths(&p.x)?;
    let [p0, p1, p2, p3, p4, p5, p6] = srs_points(&p.x, p.chirality);
    let lattice = Lattice::new(vec![
        linalg::sub(&p6, &p2),
        linalg::sub(&p4, &p3),
        linalg::sub(&p5, &p1),
    ])?;
    PeriodicNetwork::new(srs_graph(), vec![p0, p1, p2, p3], lattice)
}

/// Closed-form generators as linear functions of the edge lengths.
pub fn srs_generators<T: Scalar>(x: &[T; 6], chirality: Chirality) -> [Vec<T>; 3] {
    let [x1, x2, x3, x4, x5, x6] = *x;
    let half = T::lit(0.5);
    let s3 = T::sqrt3();
    let h = s3 * half;
    let z = -(T::lit(2.0) / T::lit(3.0)).sqrt() * T::lit(f64::from(chirality.sign()));
    let inv2s3 = (T::lit(2.0) * s3).recip();
    [
        vec![x1 + half * x2 + half * x6, -h * x2 - inv2s3 * x6, z * x6],
        vec![-half * x2 + half * x3, h * x2 + h * x3 + x4 / s3, z * x4],
        vec![-x1 - half * x3 - half * x5, -h * x3 - inv2s3 * x5, z * x5],
    ]
}

/// The 16-term cubic: every product of three edge lengths except the four
/// triples of edges meeting at a common vertex, divided by √2.
pub fn srs_volume_formula<T: Scalar>(x: &[T; 6]) -> T {
    let [x1, x2, x3, x4, x5, x6] = *x;
    let sum = x1 * x2 * x4
        + x1 * x2 * x5
        + x1 * x2 * x6
        + x1 * x3 * x4
        + x1 * x3 * x5
        + x1 * x3 * x6
        + x1 * x4 * x5
        + x1 * x4 * x6
        + x2 * x3 * x4
        + x2 * x3 * x5
        + x2 * x3 * x6
        + x2 * x4 * x5
        + x2 * x5 * x6
        + x3 * x4 * x6
        + x3 * x5 * x6
        + x4 * x5 * x6;
    sum / T::SQRT_2()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::families::ths_volume_formula;

    fn unit() -> PeriodicNetwork<f64> {
        construct_srs(&SrsParams::new([1.0; 6], Chirality::Positive).unwrap()).unwrap()
    }

    #[test]
    fn equal_lengths_values() {
        let net = unit();
        assert!((net.length() - 6.0).abs() < 1e-15);
        assert!((net.volume() - 16.0 / 2f64.sqrt()).abs() < 1e-13);
        assert!((net.ratio().unwrap() - 27.0 / 2f64.sqrt()).abs() < 1e-12);
        assert!(net.max_balancing_residual() < 1e-15);
        assert!(net.graph().validate(true).passed);
        assert!(net.graph().validate(true).simple);
    }

    #[test]
    fn equal_lengths_lattice_is_body_centred_cubic() {
        let g = unit().lattice().gram();
        for i in 0..3 {
            for j in 0..3 {
                let expect = if i == j { 6.0 } else { -2.0 };
                assert!((g[i][j] - expect).abs() < 1e-13, "{g:?}");
            }
        }
        // Primitive BCC vectors (−1,1,1), (1,−1,1), (1,1,−1) have Gram
        // diagonal 3 and off-diagonal −1; ours is twice that.
        let bcc = [[-1.0, 1.0, 1.0], [1.0, -1.0, 1.0], [1.0, 1.0, -1.0]];
        for i in 0..3 {
            for j in 0..3 {
                assert!((g[i][j] - 2.0 * linalg::dot(&bcc[i], &bcc[j])).abs() < 1e-13);
            }
        }
    }

    #[test]
    fn primitive_cubic_example() {
        let x: [f64; 6] = [1.0, 1.0, 1.0, 3.0, 3.0, 3.0];
        let net = construct_srs(&SrsParams::new(x, Chirality::Positive).unwrap()).unwrap();
        let s2 = 2f64.sqrt();
        assert!((net.length() - 12.0).abs() < 1e-14);
        assert!((net.volume() - 108.0 / s2).abs() < 1e-12);
        assert!((net.ratio().unwrap() - 16.0 * s2).abs() < 1e-12);
        let g = net.lattice().gram();
        for i in 0..3 {
            for j in 0..3 {
                let expect = if i == j { 18.0 } else { 0.0 };
                assert!((g[i][j] - expect).abs() < 1e-12, "{g:?}");
            }
        }
        let s3 = 3f64.sqrt();
        let s6 = 6f64.sqrt();
        let expected = [[3.0, -s3, -s6], [0.0, 2.0 * s3, -s6], [-3.0, -s3, -s6]];
        for (a, b) in net.lattice().generators().iter().zip(expected) {
            assert!(linalg::norm(&linalg::sub(a, &b)) < 1e-14);
        }
    }

    #[test]
    fn volume_formula_values() {
        let s2 = 2f64.sqrt();
        assert!((srs_volume_formula(&[1.0; 6]) - 16.0 / s2).abs() < 1e-14);
        assert!((srs_volume_formula(&[1.0, 1.0, 1.0, 3.0, 3.0, 3.0]) - 108.0 / s2).abs() < 1e-13);
        assert_eq!(srs_volume_formula(&[0.0; 6]), 0.0);
    }

    #[test]
    fn boundary_face_matches_ths_formula() {
        // With x₆ = 0 the srs volume equals the ths volume at α = arccos(1/3)
        // with x₆ = 0, after exchanging x₃ and x₅.
        let alpha = SRS_COS_BETA.acos();
        let x = [0.3, 1.7, 0.9, 1.1, 0.45, 0.0];
        let swapped = [x[0], x[1], x[4], x[3], x[2], 0.0];
        let a = srs_volume_formula(&x);
        let b = ths_volume_formula(&swapped, alpha);
        assert!((a - b).abs() < 1e-14 * a, "{a} vs {b}");
        let ones = [1.0, 1.0, 1.0, 1.0, 1.0, 0.0];
        assert!((srs_volume_formula(&ones) - ths_volume_formula(&ones, alpha)).abs() < 1e-14);
    }

    #[test]
    fn closed_form_generators_match_positions() {
        let x = [0.3, 1.7, 0.9, 1.1, 0.45, 2.2];
        for c in [Chirality::Positive, Chirality::Negative] {
            let net = construct_srs(&SrsParams::new(x, c).unwrap()).unwrap();
            for (a, b) in net.lattice().generators().iter().zip(srs_generators(&x, c)) {
                assert!(linalg::norm(&linalg::sub(a, &b)) < 1e-14);
            }
        }
    }

    #[test]
    fn chirality_constants() {
        assert_eq!(Chirality::Positive.cos_beta::<f64>(), 1.0 / 3.0);
        assert_eq!(Chirality::Negative.cos_beta::<f64>(), -1.0 / 3.0);
        assert_eq!(Chirality::from_sign(-1), Some(Chirality::Negative));
        assert_eq!(Chirality::from_sign(0), None);
    }
}
