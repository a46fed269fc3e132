//! Closed-form Steiner families: hexagonal (quotient D₃), ths (quotient
//! D₁□D₂) and srs (quotient K₄), each parametrized by its edge lengths.

mod hex;
mod srs;
pub(crate) mod ths;

pub use hex::{construct_hexagonal, hex_area_formula, HexParams};
pub use srs::{construct_srs, srs_generators, srs_volume_formula, Chirality, SrsParams, SRS_COS_BETA};
pub use ths::{construct_ths, ths_generators, ths_volume_formula, ThsParams};

use crate::error::{Error, Result};
use crate::graph::QuotientGraph;
use crate::scalar::Scalar;

pub(crate) fn check_lengths<T: Scalar>(x: &[T]) -> Result<()> {
    for (i, &xi) in x.iter().enumerate() {
        if !(xi > T::zero()) || !xi.is_finite() {
            return Err(Error::invalid(format!(
                "edge length x{} = {xi} must be positive and finite",
                i + 1
            )));
        }
    }
    Ok(())
}

/// Which family a network's quotient graph belongs to, decided from the
/// combinatorics alone.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum FamilyKind {
    Hexagonal,
    Ths,
    Srs,
}

impl FamilyKind {
    /// Sharp lower bound on `L^n / V` for Steiner networks of this family.
    pub fn ratio_bound<T: Scalar>(self) -> T {
        match self {
            FamilyKind::Hexagonal => T::lit(2.0) * T::sqrt3(),
            FamilyKind::Ths => T::lit(81.0 / 4.0),
            FamilyKind::Srs => T::lit(27.0) / T::SQRT_2(),
        }
    }

    /// Recognizes the hexagonal quotient (two vertices joined by three edges
    /// in dimension 2), K₄ and D₁□D₂ (dimension 3, four vertices, cubic, no
    /// loops; K₄ is the simple one, D₁□D₂ has two disjoint double edges).
    pub fn recognize(graph: &QuotientGraph) -> Option<FamilyKind> {
        let loop_free = graph.loops().is_empty();
        let cubic = graph.degrees().iter().all(|&d| d == 3);
        match (graph.dimension(), graph.vertex_count(), graph.edge_count()) {
            (2, 2, 3) if loop_free => Some(FamilyKind::Hexagonal),
            (3, 4, 6) if loop_free && cubic => {
                let multi = graph.multi_edges();
                if multi.is_empty() {
                    return Some(FamilyKind::Srs);
                }
                let disjoint = multi.len() == 2 && multi.iter().all(|m| m.edges.len() == 2) && {
                    let (a, b) = (multi[0].vertices, multi[1].vertices);
                    a.0 != b.0 && a.0 != b.1 && a.1 != b.0 && a.1 != b.1
                };
                disjoint.then_some(FamilyKind::Ths)
            }
            _ => None,
        }
    }

    pub fn name(self) -> &'static str {
        match self {
            FamilyKind::Hexagonal => "hex",
            FamilyKind::Ths => "ths",
            FamilyKind::Srs => "srs",
        }
    }
}
