//! Exact engine for matrix-valued orthogonal polynomials and the algebras of
//! differential operators that act on them.
//!
//! Everything is computed in exact rational arithmetic (or rationals tagged
//! with a symbolic total-mass unit); every identity the crate claims is an
//! identity of polynomials or matrices over ℚ, never a numerical
//! approximation. The main layers:
//!
//! * [`scalar`], [`poly`], [`ratfunc`], [`mat`] — exact arithmetic: big
//!   rationals, dense polynomials, rational functions, matrices with
//!   fraction-free elimination.
//! * [`unit`] — rationals carrying a symbolic weight-mass unit, so moments of
//!   weights with non-rational total mass stay exact.
//! * [`diffop`] — matrix differential operators acting on the right of row
//!   polynomials, their composition, eigenvalue maps, and weight adjoints.
//! * [`weights`] — the weight catalog: classical scalar families, direct
//!   sums, constant conjugations, and an irreducible 2×2 interval weight.
//! * [`mops`] — monic orthogonal sequences from moments, recursion
//!   coefficients, inner products, and eigenfunction checks.
//! * [`structure`] — algebra-level structure: centers, direct-sum generator
//!   inventories, eigenvalue-side reconstruction, and two-weight link
//!   certificates.
//! * [`jacobi`] — the fully worked irreducible 2×2 example with its complete
//!   operator algebra and verification suites.
//! * [`report`] — deterministic pass/fail reports rendered as JSON or text.

pub mod diffop;
pub mod error;
pub mod jacobi;
pub mod mat;
pub mod poly;
pub mod mops;
pub mod ratfunc;
pub mod report;
pub mod ring;
pub mod scalar;
pub mod structure;
pub mod unit;
pub mod weights;

pub use diffop::{
    adjoint_pair, apply, compose, eig_at, eigenvalue_poly, formal_adjoint, is_degree_preserving,
    DegreeCertificate, EigMat, MatDiffOp,
};
pub use error::{Error, Result};
pub use jacobi::{
    adjoint_constant, build_bundle, central_quartic, decompose_in_module_basis,
    displayed_eigenvalues, orthogonal_family, verify_center, verify_factorization,
    verify_generators_and_relations, JacobiExampleBundle, JacobiParams, ModuleDecomposition,
    ModuleTerm, ZWord,
};
pub use mat::{solve_exact, Mat};
pub use mops::{
    check_eigenfunction, inner_product, inner_product_with_moments, is_symmetric, mat_degree,
    monic_mops, monic_mops_from_moments, recursion_coeffs, recursion_from_parts,
    recursion_residual, validate_moments, EigenReport, MopSequence, RecursionCoeffs,
};
pub use poly::Poly;
pub use ratfunc::RatFunc;
pub use report::{Check, Report, Status};
pub use ring::{Field, Ring};
pub use scalar::{parse_rat, rat, rat_int, Rat};
pub use structure::{
    center_check, centralizing_cofactor, classical_components, commutativity_probe,
    darboux_verify, directsum_center, directsum_generators, eig_commutator,
    operator_from_eigenvalue, rewrite_in_eigenvalue, DarbouxReport, DirectSumCenter,
    GeneratorSet,
};
pub use unit::{unit_ratio, UnitScalar, UnitTag};
pub use weights::{
    darboux_equivalent, matrix_jacobi_poly_part, t_eigenvalue, t_operator, ScalarFamily, Support,
    WeightForm, WeightSpec,
};
