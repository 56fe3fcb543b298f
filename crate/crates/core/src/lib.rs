//! Symbolic engine for twist-deformed doubly enlarged Newton-Hooke and
//! Galilei Hopf algebras.
//!
//! The crate builds the kinematical algebras NH+/NH-/Galilei as exact
//! structure-constant tables, realizes the generators as first-order
//! differential operators, constructs the fifteen Abelian r-matrices and
//! their exponential twist factors, and derives star products, deformed
//! space-time commutator tables, twisted coproducts and antipodes, together
//! with machine-checked verification suites (Jacobi, homomorphism, CYBE,
//! cocycle, star-Jacobi, contraction).

pub mod algebra;
pub mod contraction;
pub mod diffop;
pub mod document;
pub mod expr;
pub mod golden;
pub mod parse;
pub mod realization;
pub mod render;
pub mod rmatrix;
pub mod scalar;
pub mod twist;
pub mod uea;
pub mod verify;

pub use algebra::{AlgebraError, Generator, JacobiViolation, LieAlgebra, LinComb, Signature};
pub use contraction::{
    contract_algebra, contract_table, two_path_check, ContractionError, TwoPathReport,
};
pub use diffop::{DerivIdx, DiffOp};
pub use document::{catalog_document, table_document, TableDocument};
pub use expr::{normalize, Atom, Expr, ExprError, ExprTree, NumericBindings, Param};
pub use golden::{check_against_paper, golden_table, EntryCheck, GoldenCheck, GoldenStatus};
pub use parse::{
    parse_algebra_file, parse_expr, parse_expr_tree, parse_generator, parse_lincomb, ParseError,
};
pub use realization::{
    check_flow_consistency, realize, FiniteTransformation, HomViolation, Realization,
    RealizationError,
};
pub use rmatrix::{
    rmatrix_catalog, schouten_bracket, verify_cybe, BetaValues, RMatrix, RMatrixError, TwistParams,
};
pub use scalar::GaussianRational;
pub use twist::{
    catalog_table, classify, coproduct_coassociativity, spacetime_table, star_commutator,
    star_product, twisted_antipode, twisted_coproduct, verify_cocycle, verify_cocycle_r,
    verify_normalization, CocycleReport, CommutatorTable, NoncommClass, NoncommKind, SeriesResult,
    TwistContext, TwistError, DEFAULT_MAX_ORDER,
};
pub use uea::{PbwMonomial, Tensor2, Tensor3, UeaElement};
pub use verify::{run_suite, star_jacobi_check, CheckOutcome, Suite, SuiteReport};
