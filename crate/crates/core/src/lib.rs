//! Translation-invariant and weakly periodic Gibbs measures of the Ising
//! model on the Cayley tree `Γᵏ`.
//!
//! - [`tree`]: the tree as a free product of `k + 1` involutions, index-2
//!   subgroups `H_A`, balls and the coset field index.
//! - [`fields`]: the boundary-field operator `W`, its invariant sets and a
//!   multistart fixed-point solver.
//! - [`reduce`]: exact polynomial reduction for `|A| = k` on `I₃`, branch
//!   functions, critical couplings and solution counts.
//! - [`roots`]: Descartes bounds, Sturm counting and root isolation.
//! - [`measures`]: finite-volume measures by enumeration and the
//!   compatibility check.
//!
//! Numeric code is generic over [`Real`] (`f32`, `f64`); symbolic code works
//! over exact integers and rationals.

#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod error;
pub mod fields;
pub mod measures;
pub mod poly;
pub mod reduce;
pub mod roots;
pub mod scalar;
pub mod solver;
pub mod tree;

pub use error::{Error, Result};
pub use fields::{
    apply_w, fixed_points_w, h_to_z, mobius_f, recursion_f, system8_residual, ti_solutions,
    w_residual, z_to_h, FieldVector, FixedPointSearch, InvariantSet, ModelParams, Restriction,
    SearchConfig,
};
pub use measures::{
    compatibility_defect, finite_measure, hamiltonian, magnetization, Configuration, FiniteMeasure,
    RootRule,
};
pub use poly::Poly;
pub use reduce::{
    branch_eval, build_poly12, classify, critical_alpha, factor_u2_minus_1, v_cubic_root,
    xi_substitute, AlphaPoly, Branch, ClassificationReport, ClassifyConfig, CriticalOutcome,
    CriticalValue, Reduction,
};
pub use roots::{descartes_bound, positive_root_count, sturm_count, Interval, RootBracket};
pub use scalar::Real;
pub use tree::{
    coset, enumerate_ball, field_index, parent, successors, word_multiply, Ball, Coset, FieldIndex,
    SubgroupSpec, TreeWord,
};

/// Exact rationals for Sturm counting and exact evaluation.
pub type Rational = num_rational::BigRational;
pub type RationalPoly = Poly<Rational>;

pub type FieldVector64 = FieldVector<f64>;
pub type FieldVector32 = FieldVector<f32>;
pub type ModelParams64 = ModelParams<f64>;
pub type ModelParams32 = ModelParams<f32>;
pub type Report64 = ClassificationReport<f64>;
pub type FiniteMeasure64 = FiniteMeasure<f64>;
