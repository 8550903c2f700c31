use thiserror::Error;

/// Errors raised by the algebra, module and classification routines.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("{0} is not a prime in [2, 2^31]")]
    NotPrime(u64),

    #[error("dimension mismatch: {0}")]
    DimensionMismatch(String),

    #[error("matrix is not square ({rows}x{cols})")]
    NotSquare { rows: usize, cols: usize },

    #[error("invalid quiver: {0}")]
    InvalidQuiver(String),

    #[error("relation is not admissible: {0}")]
    NotAdmissible(String),

    #[error("unknown vertex {0}")]
    UnknownVertex(String),

    #[error("representation violates {0}")]
    InvalidRepresentation(String),

    #[error("not a module map: {0}")]
    InvalidMap(String),

    #[error("modules live over different algebras")]
    AlgebraMismatch,

    #[error("enumeration of {what} needs {needed} candidates, cap is {cap}")]
    CapExceeded { what: String, needed: u128, cap: u128 },

    #[error("generator misses the indecomposable projective P{0}")]
    NotAGenerator(String),

    #[error("generator summands {0} and {1} are isomorphic")]
    DuplicateSummand(usize, usize),

    #[error("generator summand {0} is not indecomposable")]
    DecomposableSummand(usize),

    #[error("{0} is not in add of the generator")]
    NotInAddX(String),

    #[error("catalog is not flagged complete")]
    IncompleteCatalog,

    #[error("module missing from catalog: {0}")]
    CatalogEntryMissing(String),

    #[error("hypothesis failed: {0}")]
    HypothesisFailed(String),

    #[error("algebra is not F-admissible; witness: catalog subset {0:?}")]
    NotFAdmissible(Vec<usize>),

    #[error("module is not tau-rigid")]
    NotTauRigid,

    #[error("projective dimension exceeds bound {0}")]
    AboveBound(usize),

    #[error("invalid cocycle: {0}")]
    InvalidCocycle(String),

    #[error("subset enumeration over {0} catalog entries exceeds the bound {1}")]
    TooManySubsets(usize, usize),
}

pub type Result<T> = std::result::Result<T, Error>;
