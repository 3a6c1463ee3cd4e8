//! Error taxonomy shared across the whole engine.
//!
//! Every fallible operation returns one of these variants; none of them carries
//! floating-point state and all are cheap to construct. The `String` payloads
//! are human-readable context for reports and CLI diagnostics.

use thiserror::Error;

/// Engine-wide result alias.
pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Clone, Error, PartialEq, Eq)]
pub enum Error {
    /// A square matrix over a field had no inverse.
    #[error("singular matrix: {0}")]
    SingularMatrix(String),

    /// Two quantities measured against unrelated transcendental units were combined.
    #[error("incommensurable units: {0}")]
    IncommensurableUnits(String),

    /// Operand shapes do not line up.
    #[error("dimension mismatch: {0}")]
    DimensionMismatch(String),

    /// A formal adjoint exists only with non-polynomial coefficients.
    #[error("non-polynomial adjoint: {0}")]
    NonPolynomialAdjoint(String),

    /// An operator lies outside the ambient class where coefficient degrees are
    /// bounded by the derivative order, so its eigenvalue matrix is undefined.
    #[error("operator outside the bounded-degree class: {0}")]
    NotInBoundedDegreeClass(String),

    /// Scalar weight families that cannot be related were mixed.
    #[error("mixed weight families: {0}")]
    MixedFamilies(String),

    /// The requested construction is not available for this weight.
    #[error("unsupported weight: {0}")]
    UnsupportedWeight(String),

    /// The moment matrix of the bilinear form is singular at some size.
    #[error("singular Hankel system: {0}")]
    SingularHankel(String),

    /// A polynomial in the spectral variable has no representation in the
    /// requested eigenvalue subalgebra.
    #[error("not representable: {0}")]
    NotRepresentable(String),

    /// An eigenvalue matrix is identically singular where invertibility is required.
    #[error("singular eigenvalue matrix: {0}")]
    SingularEigenvalue(String),

    /// An operator admits no decomposition over the requested module basis.
    #[error("not decomposable: {0}")]
    NotDecomposable(String),

    /// Weight parameters violate the validity region of the construction.
    #[error("parameter constraint violated: {0}")]
    ParameterConstraintViolated(String),
}
