//! Dense complex matrices and the handful of vector helpers the operator
//! calculus needs.
//!
//! Matrices are stored row-major. The inner product is linear in the first
//! argument: `<x, y> = sum_i x_i * conj(y_i)`, so the matrix of the rank-one
//! operator `x |-> <x, g> h` is the outer product `h g^*`.

use num_complex::Complex;
use num_traits::Zero;

use crate::error::{Error, Result};
use crate::scalar::{RealScalar, C};
use crate::tolerance::ToleranceContext;

#[derive(Clone, Debug, PartialEq)]
pub struct Matrix<R: RealScalar> {
    rows: usize,
    cols: usize,
    data: Vec<C<R>>,
}

impl<R: RealScalar> Matrix<R> {
    pub fn new(rows: usize, cols: usize, data: Vec<C<R>>) -> Result<Self> {
        if data.len() != rows * cols {
            return Err(Error::ShapeMismatch(format!(
                "{} entries for a {}x{} matrix",
                data.len(),
                rows,
                cols
            )));
        }
        Ok(Self { rows, cols, data })
    }

    pub fn zeros(rows: usize, cols: usize) -> Self {
        Self { rows, cols, data: vec![C::<R>::zero(); rows * cols] }
    }

    pub fn identity(n: usize) -> Self {
        let mut m = Self::zeros(n, n);
        for i in 0..n {
            m[(i, i)] = Complex::new(R::one(), R::zero());
        }
        m
    }

    pub fn from_fn(rows: usize, cols: usize, mut f: impl FnMut(usize, usize) -> C<R>) -> Self {
        let mut data = Vec::with_capacity(rows * cols);
        for i in 0..rows {
            for j in 0..cols {
                data.push(f(i, j));
            }
        }
        Self { rows, cols, data }
    }

    pub fn from_rows(rows: &[Vec<C<R>>]) -> Result<Self> {
        let r = rows.len();
        if r == 0 {
            return Err(Error::ShapeMismatch("empty row list".into()));
        }
        let c = rows[0].len();
        if rows.iter().any(|row| row.len() != c) {
            return Err(Error::ShapeMismatch("ragged row lengths".into()));
        }
        let mut data = Vec::with_capacity(r * c);
        for row in rows {
            data.extend_from_slice(row);
        }
        Ok(Self { rows: r, cols: c, data })
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn is_square(&self) -> bool {
        self.rows == self.cols
    }

    /// Side length of a square matrix.
    pub fn dim(&self) -> usize {
        debug_assert!(self.is_square());
        self.rows
    }

    pub fn data(&self) -> &[C<R>] {
        &self.data
    }

    pub fn transpose(&self) -> Self {
        Self::from_fn(self.cols, self.rows, |i, j| self[(j, i)])
    }

    /// Entrywise complex conjugate.
    pub fn conj(&self) -> Self {
        Self {
            rows: self.rows,
            cols: self.cols,
            data: self.data.iter().map(|z| z.conj()).collect(),
        }
    }

    /// Conjugate transpose.
    pub fn adjoint(&self) -> Self {
        Self::from_fn(self.cols, self.rows, |i, j| self[(j, i)].conj())
    }

    pub fn scale(&self, c: C<R>) -> Self {
        Self {
            rows: self.rows,
            cols: self.cols,
            data: self.data.iter().map(|z| z * c).collect(),
        }
    }

    pub fn frobenius_norm(&self) -> R {
        let mut acc = R::zero();
        for z in &self.data {
            acc = acc + z.norm_sqr();
        }
        acc.sqrt()
    }

    /// `||A - B||_F <= abs_tol + rel_tol * max(1, ||A||_F, ||B||_F)`.
    pub fn approx_eq(&self, other: &Self, tol: &ToleranceContext<R>) -> bool {
        if self.rows != other.rows || self.cols != other.cols {
            return false;
        }
        let diff = (self - other).frobenius_norm();
        let scale = self.frobenius_norm().max(other.frobenius_norm());
        tol.check(diff, scale)
    }

    /// Residual of the unitarity identity `A^* A = I`.
    pub fn unitarity_residual(&self) -> R {
        debug_assert!(self.is_square());
        let n = self.dim();
        (&(&self.adjoint() * self) - &Matrix::identity(n)).frobenius_norm()
    }

    pub fn is_unitary(&self, tol: &ToleranceContext<R>) -> bool {
        self.is_square() && tol.check(self.unitarity_residual(), R::one())
    }

    pub fn hermitian_residual(&self) -> R {
        (self - &self.adjoint()).frobenius_norm()
    }

    pub fn is_hermitian(&self, tol: &ToleranceContext<R>) -> bool {
        self.is_square() && tol.check(self.hermitian_residual(), self.frobenius_norm())
    }

    /// Residual of `A A^* = A^* A`.
    pub fn normality_residual(&self) -> R {
        debug_assert!(self.is_square());
        let aa = self * &self.adjoint();
        let a_a = &self.adjoint() * self;
        (&aa - &a_a).frobenius_norm()
    }

    pub fn is_normal(&self, tol: &ToleranceContext<R>) -> bool {
        let scale = self.frobenius_norm();
        self.is_square() && tol.check(self.normality_residual(), scale * scale)
    }

    /// `A x` for a column vector `x`.
    pub fn apply(&self, x: &[C<R>]) -> Vec<C<R>> {
        assert_eq!(x.len(), self.cols, "vector length mismatch");
        let mut y = vec![C::<R>::zero(); self.rows];
        for i in 0..self.rows {
            let mut acc = C::<R>::zero();
            for j in 0..self.cols {
                acc = acc + self[(i, j)] * x[j];
            }
            y[i] = acc;
        }
        y
    }

    /// `A conj(x)`, the coordinate action of an antilinear operator with
    /// matrix `A`.
    pub fn apply_conj(&self, x: &[C<R>]) -> Vec<C<R>> {
        let xc: Vec<C<R>> = x.iter().map(|z| z.conj()).collect();
        self.apply(&xc)
    }

    pub fn column(&self, j: usize) -> Vec<C<R>> {
        (0..self.rows).map(|i| self[(i, j)]).collect()
    }

    pub fn set_column(&mut self, j: usize, col: &[C<R>]) {
        assert_eq!(col.len(), self.rows);
        for i in 0..self.rows {
            self[(i, j)] = col[i];
        }
    }

    /// New matrix built from the selected columns, in the given order.
    pub fn select_columns(&self, idx: &[usize]) -> Self {
        Self::from_fn(self.rows, idx.len(), |i, j| self[(i, idx[j])])
    }
}

impl<R: RealScalar> std::ops::Index<(usize, usize)> for Matrix<R> {
    type Output = C<R>;
    fn index(&self, (i, j): (usize, usize)) -> &C<R> {
        &self.data[i * self.cols + j]
    }
}

impl<R: RealScalar> std::ops::IndexMut<(usize, usize)> for Matrix<R> {
    fn index_mut(&mut self, (i, j): (usize, usize)) -> &mut C<R> {
        &mut self.data[i * self.cols + j]
    }
}

impl<R: RealScalar> std::ops::Add for &Matrix<R> {
    type Output = Matrix<R>;
    fn add(self, rhs: &Matrix<R>) -> Matrix<R> {
        assert_eq!((self.rows, self.cols), (rhs.rows, rhs.cols), "shape mismatch in add");
        Matrix {
            rows: self.rows,
            cols: self.cols,
            data: self.data.iter().zip(&rhs.data).map(|(a, b)| a + b).collect(),
        }
    }
}

impl<R: RealScalar> std::ops::Sub for &Matrix<R> {
    type Output = Matrix<R>;
    fn sub(self, rhs: &Matrix<R>) -> Matrix<R> {
        assert_eq!((self.rows, self.cols), (rhs.rows, rhs.cols), "shape mismatch in sub");
        Matrix {
            rows: self.rows,
            cols: self.cols,
            data: self.data.iter().zip(&rhs.data).map(|(a, b)| a - b).collect(),
        }
    }
}

impl<R: RealScalar> std::ops::Neg for &Matrix<R> {
    type Output = Matrix<R>;
    fn neg(self) -> Matrix<R> {
        Matrix {
            rows: self.rows,
            cols: self.cols,
            data: self.data.iter().map(|a| -a).collect(),
        }
    }
}

impl<R: RealScalar> std::ops::Mul for &Matrix<R> {
    type Output = Matrix<R>;
    fn mul(self, rhs: &Matrix<R>) -> Matrix<R> {
        assert_eq!(self.cols, rhs.rows, "shape mismatch in mul");
        let mut out = Matrix::zeros(self.rows, rhs.cols);
        for i in 0..self.rows {
            for k in 0..self.cols {
                let a = self[(i, k)];
                if a.is_zero() {
                    continue;
                }
                for j in 0..rhs.cols {
                    out[(i, j)] = out[(i, j)] + a * rhs[(k, j)];
                }
            }
        }
        out
    }
}

/// `<x, y> = sum_i x_i conj(y_i)`.
pub fn inner<R: RealScalar>(x: &[C<R>], y: &[C<R>]) -> C<R> {
    assert_eq!(x.len(), y.len());
    let mut acc = C::<R>::zero();
    for (a, b) in x.iter().zip(y) {
        acc = acc + a * b.conj();
    }
    acc
}

pub fn vnorm<R: RealScalar>(x: &[C<R>]) -> R {
    let mut acc = R::zero();
    for z in x {
        acc = acc + z.norm_sqr();
    }
    acc.sqrt()
}

pub fn vscale<R: RealScalar>(c: C<R>, x: &[C<R>]) -> Vec<C<R>> {
    x.iter().map(|z| z * c).collect()
}

pub fn vadd<R: RealScalar>(x: &[C<R>], y: &[C<R>]) -> Vec<C<R>> {
    x.iter().zip(y).map(|(a, b)| a + b).collect()
}

pub fn vsub<R: RealScalar>(x: &[C<R>], y: &[C<R>]) -> Vec<C<R>> {
    x.iter().zip(y).map(|(a, b)| a - b).collect()
}

/// Matrix of the rank-one operator `x |-> <x, g> h`.
pub fn outer<R: RealScalar>(h: &[C<R>], g: &[C<R>]) -> Matrix<R> {
    Matrix::from_fn(h.len(), g.len(), |i, j| h[i] * g[j].conj())
}

/// Orthonormal basis of the span of `vectors` via modified Gram-Schmidt with
/// one reorthogonalization pass. Vectors whose remainder falls below `drop_tol`
/// times their original norm are discarded.
pub fn orthonormalize<R: RealScalar>(vectors: &[Vec<C<R>>], drop_tol: R) -> Vec<Vec<C<R>>> {
    let mut basis: Vec<Vec<C<R>>> = Vec::new();
    for v in vectors {
        let original = vnorm(v);
        if original.is_zero() {
            continue;
        }
        let mut w = v.clone();
        for _ in 0..2 {
            for b in &basis {
                let c = inner(&w, b);
                w = vsub(&w, &vscale(c, b));
            }
        }
        let n = vnorm(&w);
        if n > drop_tol * original.max(R::one()) {
            let inv = Complex::new(R::one() / n, R::zero());
            basis.push(vscale(inv, &w));
        }
    }
    basis
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::scalar::im_unit;

    fn c(re: f64, im: f64) -> C<f64> {
        Complex::new(re, im)
    }

    #[test]
    fn new_rejects_wrong_length() {
        assert!(Matrix::<f64>::new(2, 2, vec![C::zero(); 3]).is_err());
    }

    #[test]
    fn adjoint_of_product_matches_reversed_product_exactly() {
        // (AB)^* and B^* A^* perform conjugations and sums in the same order,
        // so the two should agree entrywise to working precision.
        use rand::SeedableRng;
        let mut rng = rand_chacha::ChaCha20Rng::seed_from_u64(11);
        let a = crate::eigen::gaussian_matrix::<f64, _>(6, &mut rng);
        let b = crate::eigen::gaussian_matrix::<f64, _>(6, &mut rng);
        let lhs = (&a * &b).adjoint();
        let rhs = &b.adjoint() * &a.adjoint();
        for i in 0..6 {
            for j in 0..6 {
                assert!((lhs[(i, j)] - rhs[(i, j)]).norm() <= 1e-14);
            }
        }
    }

    #[test]
    fn approx_eq_with_tiny_perturbation() {
        let a = Matrix::<f64>::identity(3);
        let mut b = a.clone();
        b[(0, 0)] = b[(0, 0)] + c(1e-14, 0.0);
        assert!(a.approx_eq(&b, &ToleranceContext::default()));
        b[(0, 0)] = b[(0, 0)] + c(1e-6, 0.0);
        assert!(!a.approx_eq(&b, &ToleranceContext::default()));
    }

    #[test]
    fn frobenius_norm_basic() {
        let m = Matrix::from_rows(&[vec![c(3.0, 0.0), c(0.0, 4.0)]]).unwrap();
        assert!((m.frobenius_norm() - 5.0).abs() < 1e-15);
    }

    #[test]
    fn apply_conj_conjugates_argument() {
        let m = Matrix::<f64>::identity(2);
        let x = vec![c(1.0, 2.0), c(0.0, -1.0)];
        let y = m.apply_conj(&x);
        assert_eq!(y[0], c(1.0, -2.0));
        assert_eq!(y[1], c(0.0, 1.0));
    }

    #[test]
    fn outer_product_matches_inner_convention() {
        let h = vec![c(1.0, 0.0), c(0.0, 1.0)];
        let g = vec![c(0.0, 0.0), c(2.0, 0.0)];
        let m = outer(&h, &g);
        // (h (x) g) x = <x, g> h with x = e2
        let x = vec![c(0.0, 0.0), c(1.0, 0.0)];
        let y = m.apply(&x);
        let expected = vscale(inner(&x, &g), &h);
        assert_eq!(y, expected);
    }

    #[test]
    fn orthonormalize_drops_dependent_vectors() {
        let i = im_unit::<f64>();
        let v1 = vec![c(1.0, 0.0), c(0.0, 0.0)];
        let v2 = vec![i * 3.0, C::zero()];
        let v3 = vec![c(0.0, 0.0), c(5.0, 0.0)];
        let basis = orthonormalize(&[v1, v2, v3], 1e-8);
        assert_eq!(basis.len(), 2);
        assert!((vnorm(&basis[0]) - 1.0).abs() < 1e-14);
        assert!(inner(&basis[0], &basis[1]).norm() < 1e-14);
    }
}
