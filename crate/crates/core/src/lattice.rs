use crate::error::{Error, Result};
use crate::linalg;
use crate::scalar::Scalar;

/// Relative threshold below which generators count as linearly dependent.
pub const DEGENERACY_TOLERANCE: f64 = 1e-14;

/// A rank-n lattice in R^n given by an ordered basis.
#[derive(Debug, Clone, PartialEq)]
pub struct Lattice<T> {
    generators: Vec<Vec<T>>,
}

impl<T: Scalar> Lattice<T> {
    /// Builds a lattice, rejecting non-square or (numerically) dependent bases.
    pub fn new(generators: Vec<Vec<T>>) -> Result<Self> {
        let n = generators.len();
        if n == 0 {
            return Err(Error::DimensionMismatch("lattice needs at least one generator".into()));
        }
        if let Some(g) = generators.iter().find(|g| g.len() != n) {
            return Err(Error::DimensionMismatch(format!(
                "{n} generators but a generator has {} components",
                g.len()
            )));
        }
        if generators.iter().flatten().any(|x| !x.is_finite()) {
            return Err(Error::invalid("non-finite generator component"));
        }
        let det = linalg::determinant(&generators).abs();
        let scale = generators.iter().fold(T::one(), |acc, g| acc * linalg::norm(g));
        if !(det > T::lit(DEGENERACY_TOLERANCE) * scale) {
            return Err(Error::DegenerateLattice(format!(
                "|det| = {det} against generator scale {scale}"
            )));
        }
        Ok(Lattice { generators })
    }

    pub fn dimension(&self) -> usize {
        self.generators.len()
    }

    pub fn generators(&self) -> &[Vec<T>] {
        &self.generators
    }

    /// |det(g_1, ..., g_n)|, the volume of a fundamental domain.
    pub fn volume(&self) -> T {
        linalg::determinant(&self.generators).abs()
    }

    /// Signed determinant; distinguishes the two orientations of a basis.
    pub fn signed_volume(&self) -> T {
        linalg::determinant(&self.generators)
    }

    /// The lattice vector `Σ shift_i g_i`.
    pub fn translation(&self, shift: &[i64]) -> Vec<T> {
        let n = self.dimension();
        let mut out = vec![T::zero(); n];
        for (g, &k) in self.generators.iter().zip(shift) {
            if k == 0 {
                continue;
            }
            let k = T::from_i64_lossy(k);
            for (o, &gi) in out.iter_mut().zip(g) {
                *o = *o + k * gi;
            }
        }
        out
    }

    /// Gram matrix `G_ij = <g_i, g_j>`.
    pub fn gram(&self) -> Vec<Vec<T>> {
        self.generators
            .iter()
            .map(|a| self.generators.iter().map(|b| linalg::dot(a, b)).collect())
            .collect()
    }

    pub fn scaled(&self, c: T) -> Result<Self> {
        Lattice::new(self.generators.iter().map(|g| linalg::scale(g, c)).collect())
    }

    /// Applies a linear map (given by its rows) to every generator.
    pub fn transformed(&self, rows: &[Vec<T>]) -> Result<Self> {
        Lattice::new(
            self.generators
                .iter()
                .map(|g| rows.iter().map(|r| linalg::dot(r, g)).collect())
                .collect(),
        )
    }
}

/// Free-function form of [`Lattice::volume`].
pub fn lattice_volume<T: Scalar>(lattice: &Lattice<T>) -> T {
    lattice.volume()
}
