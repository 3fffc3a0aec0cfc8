//! Tolerance policy shared by every approximate comparison in the crate.
//!
//! A residual `r` measured against a problem scale `s` is accepted when
//! `r <= abs_tol + rel_tol * max(1, s)`. The `max(1, s)` guard keeps the
//! relative term meaningful for matrices of tiny norm.

use crate::scalar::RealScalar;

/// Absolute plus relative tolerance pair.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct ToleranceContext<R: RealScalar> {
    pub abs_tol: R,
    pub rel_tol: R,
}

impl<R: RealScalar> Default for ToleranceContext<R> {
    fn default() -> Self {
        Self {
            abs_tol: R::from_f64_lossy(1e-10),
            rel_tol: R::from_f64_lossy(1e-10),
        }
    }
}

impl<R: RealScalar> ToleranceContext<R> {
    pub fn new(abs_tol: R, rel_tol: R) -> Self {
        Self { abs_tol, rel_tol }
    }

    /// Uniform tolerance with equal absolute and relative parts.
    pub fn uniform(tol: R) -> Self {
        Self { abs_tol: tol, rel_tol: tol }
    }

    /// Acceptance threshold for a quantity living at scale `scale`.
    pub fn threshold(&self, scale: R) -> R {
        self.abs_tol + self.rel_tol * scale.max(R::one())
    }

    /// Does `residual` pass at problem scale `scale`?
    pub fn check(&self, residual: R, scale: R) -> bool {
        residual <= self.threshold(scale)
    }
}
