//! Antilinear operators in coordinates and the mixed composition calculus.
//!
//! An antilinear operator `X` acts as `x |-> M_X conj(x)`. Compositions mix
//! kinds: with `T, S` linear and `X, Y` antilinear,
//!
//! * `M_{X T} = M_X conj(M_T)` (antilinear)
//! * `M_{T X} = M_T M_X` (antilinear)
//! * `M_{X Y} = M_X conj(M_Y)` (linear)
//! * `M_{T S} = M_T M_S` (linear)
//!
//! The antilinear adjoint `X^#`, defined by `<X x, y> = conj(<x, X^# y>)`,
//! has matrix `M_X^T`. An antilinear operator is antilinearly normal when
//! `X X^# = X^# X`; in coordinates this is exactly conjugate-normality of
//! `M_X`, that is `M M^* = conj(M^* M)`.

use crate::conjugation::Conjugation;
use crate::matrix::Matrix;
use crate::scalar::{RealScalar, C};
use crate::tolerance::ToleranceContext;

#[derive(Clone, Debug, PartialEq)]
pub struct LinearOp<R: RealScalar> {
    pub matrix: Matrix<R>,
}

#[derive(Clone, Debug, PartialEq)]
pub struct AntilinearOp<R: RealScalar> {
    pub matrix: Matrix<R>,
}

impl<R: RealScalar> LinearOp<R> {
    pub fn new(matrix: Matrix<R>) -> Self {
        Self { matrix }
    }

    pub fn apply(&self, x: &[C<R>]) -> Vec<C<R>> {
        self.matrix.apply(x)
    }

    pub fn adjoint(&self) -> Self {
        Self { matrix: self.matrix.adjoint() }
    }
}

impl<R: RealScalar> AntilinearOp<R> {
    pub fn new(matrix: Matrix<R>) -> Self {
        Self { matrix }
    }

    pub fn apply(&self, x: &[C<R>]) -> Vec<C<R>> {
        self.matrix.apply_conj(x)
    }

    /// Antilinear adjoint `X^#`; in coordinates the plain transpose.
    pub fn sharp(&self) -> Self {
        Self { matrix: self.matrix.transpose() }
    }
}

/// `X` after `T`: first apply the linear `T`, then the antilinear `X`.
pub fn compose_antilinear_linear<R: RealScalar>(
    x: &AntilinearOp<R>,
    t: &LinearOp<R>,
) -> AntilinearOp<R> {
    AntilinearOp::new(&x.matrix * &t.matrix.conj())
}

/// `T` after `X`.
pub fn compose_linear_antilinear<R: RealScalar>(
    t: &LinearOp<R>,
    x: &AntilinearOp<R>,
) -> AntilinearOp<R> {
    AntilinearOp::new(&t.matrix * &x.matrix)
}

/// `X` after `Y`: two antilinear maps compose to a linear one.
pub fn compose_antilinear_antilinear<R: RealScalar>(
    x: &AntilinearOp<R>,
    y: &AntilinearOp<R>,
) -> LinearOp<R> {
    LinearOp::new(&x.matrix * &y.matrix.conj())
}

pub fn compose_linear_linear<R: RealScalar>(t: &LinearOp<R>, s: &LinearOp<R>) -> LinearOp<R> {
    LinearOp::new(&t.matrix * &s.matrix)
}

/// Operator of either kind, for callers that dispatch dynamically.
#[derive(Clone, Debug, PartialEq)]
pub enum Operator<R: RealScalar> {
    Linear(LinearOp<R>),
    Antilinear(AntilinearOp<R>),
}

impl<R: RealScalar> Operator<R> {
    pub fn apply(&self, x: &[C<R>]) -> Vec<C<R>> {
        match self {
            Operator::Linear(t) => t.apply(x),
            Operator::Antilinear(t) => t.apply(x),
        }
    }

    /// `self` after `rhs`.
    pub fn compose(&self, rhs: &Operator<R>) -> Operator<R> {
        match (self, rhs) {
            (Operator::Linear(t), Operator::Linear(s)) => {
                Operator::Linear(compose_linear_linear(t, s))
            }
            (Operator::Linear(t), Operator::Antilinear(x)) => {
                Operator::Antilinear(compose_linear_antilinear(t, x))
            }
            (Operator::Antilinear(x), Operator::Linear(t)) => {
                Operator::Antilinear(compose_antilinear_linear(x, t))
            }
            (Operator::Antilinear(x), Operator::Antilinear(y)) => {
                Operator::Linear(compose_antilinear_antilinear(x, y))
            }
        }
    }

    pub fn matrix(&self) -> &Matrix<R> {
        match self {
            Operator::Linear(t) => &t.matrix,
            Operator::Antilinear(t) => &t.matrix,
        }
    }

    pub fn is_antilinear(&self) -> bool {
        matches!(self, Operator::Antilinear(_))
    }
}

/// A conjugation viewed as an antilinear operator.
pub fn conjugation_op<R: RealScalar>(c: &Conjugation<R>) -> AntilinearOp<R> {
    AntilinearOp::new(c.matrix().clone())
}

/// Residual of conjugate-normality `M M^* = conj(M^* M)`.
pub fn conjugate_normality_residual<R: RealScalar>(m: &Matrix<R>) -> R {
    let left = m * &m.adjoint();
    let right = (&m.adjoint() * m).conj();
    (&left - &right).frobenius_norm()
}

pub fn is_conjugate_normal<R: RealScalar>(m: &Matrix<R>, tol: &ToleranceContext<R>) -> bool {
    let scale = m.frobenius_norm();
    m.is_square() && tol.check(conjugate_normality_residual(m), scale * scale)
}

/// `X X^# = X^# X`, checked through the matrix criterion.
pub fn is_antilinearly_normal<R: RealScalar>(
    x: &AntilinearOp<R>,
    tol: &ToleranceContext<R>,
) -> bool {
    is_conjugate_normal(&x.matrix, tol)
}
