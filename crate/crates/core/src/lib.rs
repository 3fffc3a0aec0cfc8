//! Linear algebra of conjugations and C-normal operators on finite
//! dimensional complex spaces.
//!
//! A conjugation `C` is an antilinear isometric involution; an operator `N`
//! is C-normal when `N C` commutes with its antilinear adjoint. This crate
//! represents conjugations and antilinear operators by their matrices,
//! decides C-normality through a battery of equivalent conditions, reduces
//! conjugate-normal matrices to their canonical block form under unitary
//! congruence (and builds operators back from block data), and specializes
//! the classification to structured families: truncated Toeplitz-type
//! sections with a reflection symmetry of the symbol, and composition or
//! multiplication operators on discrete measure spaces.
//!
//! Everything is generic over the real scalar through [`RealScalar`];
//! `f64`-based aliases sit at the crate root.

pub mod antilinear;
pub mod canonical;
pub mod classify;
pub mod conjugation;
pub mod eigen;
pub mod error;
pub mod json;
pub mod matrix;
pub mod measure;
pub mod scalar;
pub mod toeplitz;
pub mod tolerance;

pub use antilinear::{
    compose_antilinear_antilinear, compose_antilinear_linear, compose_linear_antilinear,
    conjugate_normality_residual, is_antilinearly_normal, is_conjugate_normal, AntilinearOp,
    LinearOp, Operator,
};
pub use canonical::{
    c_normal_decompose, conjugate_normal_canonical, generate_c_normal, second_diagonal_form,
    CNormalDecomposition, CanonicalBlocks, CanonicalDecomposition, DecompositionVariant,
};
pub use classify::{
    classification_battery, is_c_normal, is_c_skew_symmetric, is_c_symmetric,
    left_right_normal_check, nonsymmetric_c_normal_pair, rank_one, rank_one_c_normal_form_check,
    transport_by_unitary, transport_variants, ClassificationReport, DerivedOperators,
    LeftRightNormal, CONDITION_KEYS,
};
pub use conjugation::{Conjugation, ConjugationKind};
pub use eigen::{eig_hermitian, eig_normal, haar_unitary, HermitianEig, NormalEig};
pub use error::{Error, Result};
pub use matrix::Matrix;
pub use measure::{
    classify_composition, classify_multiplication, composition_matrix, involution_conj,
    ladder_space, radon_nikodym, validate_involution, CompositionClassification, Density,
    DiscreteMeasureSpace, MultiplicationClassification, PointId, PointMap, SpaceKind, Weight,
};
pub use scalar::{RealScalar, C};
pub use toeplitz::{
    brown_halmos_delta, classify_symbol_symmetry, conjugated_section, eta_balance_residual,
    eta_reflection_residual, find_eta, geometric_c_normal_symbol, is_c_normal_toeplitz, phi_sim,
    symbol_symmetry_residuals, toeplitz_section, Symbol, ToeplitzReport, WindowedResidual,
};
pub use tolerance::ToleranceContext;

/// Matrix over `f64` scalars.
pub type Matrix64 = Matrix<f64>;
/// Complex number over `f64`.
pub type C64 = C<f64>;
/// Conjugation over `f64` scalars.
pub type Conjugation64 = Conjugation<f64>;
/// Tolerance context over `f64`.
pub type Tolerance64 = ToleranceContext<f64>;
