//! Dense eigensolvers and unitary factorizations for the numeric core.
//!
//! The Hermitian solver is a cyclic Jacobi iteration with complex rotations.
//! It is quadratically convergent once the off-diagonal mass is small and it
//! keeps the accumulated eigenvector matrix unitary to working precision,
//! which is what the congruence-based canonical form downstream depends on.
//!
//! Normal matrices are diagonalized by splitting `B = H1 + i H2` into the
//! commuting Hermitian pair `H1 = (B + B^*)/2`, `H2 = (B - B^*)/(2i)`,
//! diagonalizing `H1` and then re-diagonalizing the compression of `H2` to
//! each eigenspace of `H1`.

use num_complex::Complex;
use num_traits::Zero;
use rand::Rng;

use crate::error::{Error, Result};
use crate::matrix::Matrix;
use crate::scalar::{RealScalar, C};
use crate::tolerance::ToleranceContext;

/// Matrix with independent standard complex Gaussian entries
/// (real and imaginary parts are N(0, 1) via Box-Muller).
pub fn gaussian_matrix<R: RealScalar, G: Rng>(n: usize, rng: &mut G) -> Matrix<R> {
    let mut draw = || -> R {
        let u1: f64 = rng.gen_range(f64::MIN_POSITIVE..1.0);
        let u2: f64 = rng.gen();
        R::from_f64_lossy((-2.0 * u1.ln()).sqrt() * (2.0 * std::f64::consts::PI * u2).cos())
    };
    Matrix::from_fn(n, n, |_, _| Complex::new(draw(), draw()))
}

/// Householder QR factorization `A = Q R` with `Q` unitary and `R` upper
/// triangular. Works for any square complex matrix.
pub fn qr<R: RealScalar>(a: &Matrix<R>) -> (Matrix<R>, Matrix<R>) {
    assert!(a.is_square(), "qr expects a square matrix");
    let n = a.dim();
    let mut r = a.clone();
    // Householder vectors, one per eliminated column.
    let mut vs: Vec<Vec<C<R>>> = Vec::new();
    for k in 0..n.saturating_sub(1) {
        let mut x: Vec<C<R>> = (k..n).map(|i| r[(i, k)]).collect();
        let xnorm = crate::matrix::vnorm(&x);
        if xnorm.is_zero() {
            vs.push(Vec::new());
            continue;
        }
        let phase = if x[0].is_zero() {
            Complex::new(R::one(), R::zero())
        } else {
            x[0] / Complex::new(x[0].norm(), R::zero())
        };
        let alpha = -phase * Complex::new(xnorm, R::zero());
        x[0] = x[0] - alpha;
        let vnorm = crate::matrix::vnorm(&x);
        if vnorm <= R::epsilon() * xnorm {
            vs.push(Vec::new());
            continue;
        }
        let inv = Complex::new(R::one() / vnorm, R::zero());
        let v: Vec<C<R>> = x.iter().map(|z| z * inv).collect();
        // R[k.., k..] -= 2 v (v^* R[k.., k..])
        for j in k..n {
            let mut dot = C::<R>::zero();
            for i in k..n {
                dot = dot + v[i - k].conj() * r[(i, j)];
            }
            let two = Complex::new(R::from_f64_lossy(2.0), R::zero());
            for i in k..n {
                r[(i, j)] = r[(i, j)] - two * v[i - k] * dot;
            }
        }
        vs.push(v);
    }
    // Accumulate Q = H_0 H_1 ... H_{n-2} applied to the identity.
    let mut q = Matrix::<R>::identity(n);
    for (k, v) in vs.iter().enumerate().rev() {
        if v.is_empty() {
            continue;
        }
        for j in 0..n {
            let mut dot = C::<R>::zero();
            for i in k..n {
                dot = dot + v[i - k].conj() * q[(i, j)];
            }
            let two = Complex::new(R::from_f64_lossy(2.0), R::zero());
            for i in k..n {
                q[(i, j)] = q[(i, j)] - two * v[i - k] * dot;
            }
        }
    }
    (q, r)
}

/// Haar-distributed random unitary: QR of a complex Gaussian matrix with the
/// phases of `diag(R)` folded into `Q`.
pub fn haar_unitary<R: RealScalar, G: Rng>(n: usize, rng: &mut G) -> Matrix<R> {
    let g = gaussian_matrix::<R, G>(n, rng);
    let (q, r) = qr(&g);
    let mut u = q;
    for j in 0..n {
        let d = r[(j, j)];
        let phase = if d.is_zero() {
            Complex::new(R::one(), R::zero())
        } else {
            d / Complex::new(d.norm(), R::zero())
        };
        for i in 0..n {
            u[(i, j)] = u[(i, j)] * phase;
        }
    }
    u
}

/// Eigendecomposition of a Hermitian matrix, eigenvalues sorted descending.
#[derive(Clone, Debug)]
pub struct HermitianEig<R: RealScalar> {
    pub values: Vec<R>,
    /// Unitary matrix whose columns are the eigenvectors, aligned with `values`.
    pub vectors: Matrix<R>,
}

/// Cyclic Jacobi for complex Hermitian matrices.
///
/// Post: `A V = V diag(values)` and `V^* V = I`, both to a residual below
/// `max(1e-10, 100 n eps) * max(1, ||A||_F)`; exceeding that bound raises
/// `ConvergenceFailure`. Rejects visibly non-Hermitian input.
pub fn eig_hermitian<R: RealScalar>(a: &Matrix<R>) -> Result<HermitianEig<R>> {
    if !a.is_square() {
        return Err(Error::ShapeMismatch("eig_hermitian expects a square matrix".into()));
    }
    let n = a.dim();
    let scale = a.frobenius_norm().max(R::one());
    let herm_resid = a.hermitian_residual();
    if herm_resid > R::from_f64_lossy(1e-8) * scale {
        return Err(Error::NotHermitian { residual: herm_resid.to_f64().unwrap_or(f64::NAN) });
    }
    let mut h = a.clone();
    let mut v = Matrix::<R>::identity(n);
    if n > 1 {
        let stop = R::epsilon() * scale * R::from_f64_lossy(n as f64);
        let skip = R::epsilon() * scale * R::from_f64_lossy(1e-2);
        let max_sweeps = 100;
        let mut converged = false;
        for _ in 0..max_sweeps {
            let mut off = R::zero();
            for p in 0..n - 1 {
                for q in p + 1..n {
                    off = off + h[(p, q)].norm_sqr();
                }
            }
            if off.sqrt() <= stop {
                converged = true;
                break;
            }
            for p in 0..n - 1 {
                for q in p + 1..n {
                    let apq = h[(p, q)];
                    let m = apq.norm();
                    if m <= skip {
                        continue;
                    }
                    let app = h[(p, p)].re;
                    let aqq = h[(q, q)].re;
                    let phase = apq / Complex::new(m, R::zero());
                    let tau = (aqq - app) / (R::from_f64_lossy(2.0) * m);
                    let t = if tau.is_zero() {
                        R::one()
                    } else {
                        tau.signum() / (tau.abs() + (R::one() + tau * tau).sqrt())
                    };
                    let c = R::one() / (R::one() + t * t).sqrt();
                    let s = t * c;
                    let cs = Complex::new(c, R::zero());
                    let sp = phase * Complex::new(s, R::zero());
                    // Columns: H <- H G, V <- V G with
                    // G[p,p]=c, G[p,q]=s*phase, G[q,p]=-s*conj(phase), G[q,q]=c.
                    for i in 0..n {
                        let hip = h[(i, p)];
                        let hiq = h[(i, q)];
                        h[(i, p)] = hip * cs - hiq * sp.conj();
                        h[(i, q)] = hip * sp + hiq * cs;
                        let vip = v[(i, p)];
                        let viq = v[(i, q)];
                        v[(i, p)] = vip * cs - viq * sp.conj();
                        v[(i, q)] = vip * sp + viq * cs;
                    }
                    // Rows: H <- G^* H.
                    for j in 0..n {
                        let hpj = h[(p, j)];
                        let hqj = h[(q, j)];
                        h[(p, j)] = hpj * cs - hqj * sp;
                        h[(q, j)] = hpj * sp.conj() + hqj * cs;
                    }
                }
            }
        }
        if !converged {
            // One final check: the loop may have exited right at the boundary.
            let mut off = R::zero();
            for p in 0..n - 1 {
                for q in p + 1..n {
                    off = off + h[(p, q)].norm_sqr();
                }
            }
            if off.sqrt() > stop * R::from_f64_lossy(100.0) {
                return Err(Error::ConvergenceFailure(
                    "Jacobi sweeps did not reduce off-diagonal mass".into(),
                ));
            }
        }
    }
    let mut order: Vec<usize> = (0..n).collect();
    let lam: Vec<R> = (0..n).map(|i| h[(i, i)].re).collect();
    order.sort_by(|&i, &j| lam[j].partial_cmp(&lam[i]).unwrap_or(std::cmp::Ordering::Equal));
    let values: Vec<R> = order.iter().map(|&i| lam[i]).collect();
    let vectors = v.select_columns(&order);
    let out = HermitianEig { values, vectors };
    let resid = eig_residual_hermitian(a, &out);
    let bound = R::from_f64_lossy(1e-10)
        .max(R::epsilon() * R::from_f64_lossy(100.0 * n as f64))
        * scale;
    if resid > bound {
        return Err(Error::ConvergenceFailure(format!(
            "Hermitian eigensolver residual {:?} above bound",
            resid.to_f64()
        )));
    }
    Ok(out)
}

fn eig_residual_hermitian<R: RealScalar>(a: &Matrix<R>, e: &HermitianEig<R>) -> R {
    let n = a.dim();
    let mut d = Matrix::<R>::zeros(n, n);
    for i in 0..n {
        d[(i, i)] = Complex::new(e.values[i], R::zero());
    }
    let r1 = (&(a * &e.vectors) - &(&e.vectors * &d)).frobenius_norm();
    let r2 = e.vectors.unitarity_residual();
    r1.max(r2)
}

/// Eigendecomposition of a normal matrix, eigenvalues sorted descending by
/// real part, then imaginary part.
#[derive(Clone, Debug)]
pub struct NormalEig<R: RealScalar> {
    pub values: Vec<C<R>>,
    pub vectors: Matrix<R>,
}

/// Unitary diagonalization of a normal matrix via the commuting Hermitian
/// pair `(B + B^*)/2`, `(B - B^*)/(2i)`.
///
/// Pre: `||B B^* - B^* B|| <= tol` at scale `||B||^2`, else `NotNormal`.
/// Post: `B V = V diag(values)` with unitary `V`, to the same residual bound
/// as the Hermitian solver.
pub fn eig_normal<R: RealScalar>(
    b: &Matrix<R>,
    tol: &ToleranceContext<R>,
) -> Result<NormalEig<R>> {
    if !b.is_square() {
        return Err(Error::ShapeMismatch("eig_normal expects a square matrix".into()));
    }
    let n = b.dim();
    let scale = b.frobenius_norm().max(R::one());
    let nresid = b.normality_residual();
    if !tol.check(nresid, scale * scale) {
        return Err(Error::NotNormal { residual: nresid.to_f64().unwrap_or(f64::NAN) });
    }
    let half = Complex::new(R::from_f64_lossy(0.5), R::zero());
    let mhalf_i = Complex::new(R::zero(), -R::from_f64_lossy(0.5));
    let badj = b.adjoint();
    let h1 = (&(b + &badj)).scale(half);
    let h2 = (&(b - &badj)).scale(mhalf_i);
    let e1 = eig_hermitian(&h1)?;
    let cluster_tol = R::from_f64_lossy(1e-9) * scale;
    let mut vectors = e1.vectors.clone();
    let mut values = vec![C::<R>::zero(); n];
    let mut i = 0;
    while i < n {
        let mut j = i;
        while j + 1 < n && (e1.values[i] - e1.values[j + 1]).abs() <= cluster_tol {
            j += 1;
        }
        if j > i {
            let cols: Vec<usize> = (i..=j).collect();
            let vc = vectors.select_columns(&cols);
            let k = &(&vc.adjoint() * &h2) * &vc;
            let k = (&(&k + &k.adjoint())).scale(half);
            let e2 = eig_hermitian(&k)?;
            let refined = &vc * &e2.vectors;
            for (off, col) in (i..=j).enumerate() {
                vectors.set_column(col, &refined.column(off));
            }
        }
        i = j + 1;
    }
    // Rayleigh quotients on B give the complex eigenvalues directly.
    for k in 0..n {
        let v = vectors.column(k);
        let bv = b.apply(&v);
        values[k] = crate::matrix::inner(&bv, &v);
    }
    let mut order: Vec<usize> = (0..n).collect();
    order.sort_by(|&p, &q| {
        match values[q].re.partial_cmp(&values[p].re).unwrap_or(std::cmp::Ordering::Equal) {
            std::cmp::Ordering::Equal => {
                values[q].im.partial_cmp(&values[p].im).unwrap_or(std::cmp::Ordering::Equal)
            }
            other => other,
        }
    });
    let values: Vec<C<R>> = order.iter().map(|&k| values[k]).collect();
    let vectors = vectors.select_columns(&order);
    let out = NormalEig { values, vectors };
    let resid = eig_residual_normal(b, &out);
    let bound = R::from_f64_lossy(1e-10)
        .max(R::epsilon() * R::from_f64_lossy(100.0 * n as f64))
        * scale;
    if resid > bound {
        return Err(Error::ConvergenceFailure(format!(
            "normal eigensolver residual {:?} above bound",
            resid.to_f64()
        )));
    }
    Ok(out)
}

fn eig_residual_normal<R: RealScalar>(b: &Matrix<R>, e: &NormalEig<R>) -> R {
    let n = b.dim();
    let mut d = Matrix::<R>::zeros(n, n);
    for i in 0..n {
        d[(i, i)] = e.values[i];
    }
    let r1 = (&(b * &e.vectors) - &(&e.vectors * &d)).frobenius_norm();
    let r2 = e.vectors.unitarity_residual();
    r1.max(r2)
}

/// Unitary polar factor of a nearly-unitary matrix, recovered from the
/// Hermitian eigendecomposition of `K^* K`.
pub fn polar_unitary<R: RealScalar>(k: &Matrix<R>) -> Result<Matrix<R>> {
    let e = eig_hermitian(&(&k.adjoint() * k))?;
    let n = k.dim();
    let mut dinv = Matrix::<R>::zeros(n, n);
    for i in 0..n {
        let lam = e.values[i].max(R::epsilon());
        dinv[(i, i)] = Complex::new(R::one() / lam.sqrt(), R::zero());
    }
    Ok(k * &(&(&e.vectors * &dinv) * &e.vectors.adjoint()))
}
