use thiserror::Error;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("{0} is not a prime")]
    NotPrime(u32),
    #[error("invalid field parameters: {0}")]
    InvalidField(String),
    #[error("an automorphism of order two requires an even extension degree, got e = {0}")]
    OddDegreeInvolution(u32),
    #[error("division by zero")]
    DivisionByZero,
    #[error("dimension mismatch: {0}")]
    DimensionMismatch(String),
    #[error("{0} is not contained in {1}")]
    NotContained(&'static str, &'static str),
    #[error("invalid flag: {0}")]
    InvalidFlag(String),
    #[error("invalid decomposition: {0}")]
    InvalidDecomposition(String),
    #[error("index {index} out of range for {len} summands")]
    IndexOutOfRange { index: usize, len: usize },
    #[error("gram matrix is not sigma-hermitian: entry ({row}, {col}) is not sigma of entry ({col}, {row})")]
    NotHermitian { row: usize, col: usize },
    #[error("vector lies outside the domain of the form")]
    OutsideDomain,
    #[error("subspace is degenerate with respect to the form")]
    Degenerate,
    #[error("form {index} has radical of dimension {found}, expected the flag member of dimension {expected}")]
    RadicalMismatch {
        index: usize,
        expected: usize,
        found: usize,
    },
    #[error("form {index} admits no non-isotropic vector")]
    NoNonIsotropic { index: usize },
    #[error("invalid family description: {0}")]
    InvalidSpec(String),
    #[error("subspace is not a member of the geometry")]
    NotMember,
    #[error("precondition violated: {0}")]
    Precondition(String),
    #[error("simplex is not in the complex")]
    SimplexNotInComplex,
    #[error("complex is not pure")]
    NotPure,
    #[error("no suitable point found: {0}")]
    NotFound(String),
    #[error("parse error: {0}")]
    Parse(String),
    #[error("bound violated: {0}")]
    BoundViolated(String),
}
