//! Conjugations on C^n.
//!
//! A conjugation is an antilinear, isometric involution `C`. In coordinates
//! it acts as `x |-> M conj(x)` where the matrix `M` is symmetric unitary,
//! equivalently unitary with `M conj(M) = I`. The two standard families are
//! the entrywise conjugation (identity matrix) and the flip about the second
//! diagonal (exchange matrix); `xi_theta` is the diagonal family
//! `e_k |-> e^{i xi} e^{-i k theta} e_k` that arises for Toeplitz operators.

use num_complex::Complex;
use rand::Rng;

use crate::error::{Error, Result};
use crate::matrix::Matrix;
use crate::scalar::{cis, RealScalar, C};
use crate::tolerance::ToleranceContext;

#[derive(Clone, Debug, PartialEq)]
pub enum ConjugationKind<R: RealScalar> {
    /// Entrywise conjugation, matrix `I`.
    Identity,
    /// Reversal about the second diagonal, the exchange matrix.
    Flip,
    /// Diagonal matrix `e^{i xi} e^{-i k theta}` for `k = 0..dim`.
    XiTheta { xi: R, theta: R },
    /// Arbitrary validated symmetric unitary matrix.
    Custom,
}

#[derive(Clone, Debug, PartialEq)]
pub struct Conjugation<R: RealScalar> {
    kind: ConjugationKind<R>,
    matrix: Matrix<R>,
}

/// Check that `m` is unitary and satisfies `M conj(M) = I`.
///
/// Symmetry `M^T = M` is implied by those two identities, so it is not a
/// separate requirement; it is still verified as a cross-check.
pub fn validate_conjugation<R: RealScalar>(
    m: &Matrix<R>,
    tol: &ToleranceContext<R>,
) -> Result<()> {
    if !m.is_square() {
        return Err(Error::InvalidConjugation("matrix is not square".into()));
    }
    let ur = m.unitarity_residual();
    if !tol.check(ur, R::one()) {
        return Err(Error::NotUnitary { residual: ur.to_f64().unwrap_or(f64::NAN) });
    }
    let n = m.dim();
    let inv = (&(m * &m.conj()) - &Matrix::identity(n)).frobenius_norm();
    if !tol.check(inv, R::one()) {
        return Err(Error::InvalidConjugation(format!(
            "M conj(M) != I, residual {:?}",
            inv.to_f64()
        )));
    }
    let sym = (m - &m.transpose()).frobenius_norm();
    if !tol.check(sym, R::one()) {
        return Err(Error::InvalidConjugation(format!(
            "matrix is not symmetric, residual {:?}",
            sym.to_f64()
        )));
    }
    Ok(())
}

impl<R: RealScalar> Conjugation<R> {
    pub fn identity(dim: usize) -> Self {
        Self { kind: ConjugationKind::Identity, matrix: Matrix::identity(dim) }
    }

    pub fn flip(dim: usize) -> Self {
        let mut m = Matrix::zeros(dim, dim);
        for i in 0..dim {
            m[(i, dim - 1 - i)] = Complex::new(R::one(), R::zero());
        }
        Self { kind: ConjugationKind::Flip, matrix: m }
    }

    pub fn xi_theta(dim: usize, xi: R, theta: R) -> Self {
        let mut m = Matrix::zeros(dim, dim);
        for k in 0..dim {
            m[(k, k)] = cis(xi) * cis(-theta * R::from_f64_lossy(k as f64));
        }
        Self { kind: ConjugationKind::XiTheta { xi, theta }, matrix: m }
    }

    pub fn custom(matrix: Matrix<R>, tol: &ToleranceContext<R>) -> Result<Self> {
        validate_conjugation(&matrix, tol)?;
        Ok(Self { kind: ConjugationKind::Custom, matrix })
    }

    /// Haar-style random conjugation `W W^T` with `W` Haar unitary.
    pub fn random<G: Rng>(dim: usize, rng: &mut G) -> Self {
        let w = crate::eigen::haar_unitary::<R, G>(dim, rng);
        let m = &w * &w.transpose();
        Self { kind: ConjugationKind::Custom, matrix: m }
    }

    pub fn kind(&self) -> &ConjugationKind<R> {
        &self.kind
    }

    pub fn dim(&self) -> usize {
        self.matrix.dim()
    }

    pub fn matrix(&self) -> &Matrix<R> {
        &self.matrix
    }

    /// `C x = M conj(x)`.
    pub fn apply(&self, x: &[C<R>]) -> Vec<C<R>> {
        self.matrix.apply_conj(x)
    }
}
