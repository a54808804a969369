use thiserror::Error;

/// Errors raised while validating, parsing or transforming posets and polynomials.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("duplicate element identifier `{0}`")]
    DuplicateElement(String),
    #[error("identifier `{0}` is reserved or malformed")]
    BadIdentifier(String),
    #[error("element `{0}` has rank 0; only the implicit minimum has rank 0")]
    BadRank(String),
    #[error("cover ({upper}, {lower}) references an undeclared element")]
    DanglingReference { upper: String, lower: String },
    #[error("cover relations contain a cycle through `{0}`")]
    CycleDetected(String),
    #[error("cover ({upper}, {lower}) has rank gap {gap}, expected 1")]
    NonGradedCover {
        upper: String,
        lower: String,
        gap: i64,
    },
    #[error("element `{element}` declared rank {declared} but longest chain from the minimum has length {computed}")]
    RankMismatch {
        element: String,
        declared: usize,
        computed: usize,
    },
    #[error("declared poset rank {declared} differs from maximal element rank {actual}")]
    DeclaredRankMismatch { declared: usize, actual: usize },
    #[error("element `{0}` not found")]
    ElementNotFound(String),
    #[error("value {value} out of range {range}")]
    OutOfRange { value: i64, range: String },
    #[error("rank {0} exceeds the supported maximum of 20")]
    RankTooLarge(usize),
    #[error("integer overflow while {0}")]
    Overflow(&'static str),

    #[error("polynomial is not representable in the requested basis")]
    NotRepresentable,
    #[error("linear solve produced a non-integral solution")]
    NonIntegralSolution,
    #[error("expected degree {expected}, found {found}")]
    WrongDegree { expected: usize, found: usize },
    #[error("set {0:?} contains consecutive integers")]
    ConsecutiveIntegers(Vec<usize>),
    #[error("polynomial syntax error: {0}")]
    PolySyntax(String),

    #[error("kernel for element `{element}` has dimension {dim}, expected 1")]
    KernelDimensionNotOne { element: String, dim: usize },
    #[error("kernel generator for element `{0}` cannot be scaled to +-1 entries")]
    NonUnitEntries(String),
    #[error("field modulus {0} is not an odd prime below 2^31")]
    BadField(u64),

    #[error("subset is not an order ideal: `{0}` is missing an element below it")]
    NotAnOrderIdeal(String),
    #[error("no boundary cd-index supplied for element `{0}`")]
    MissingBoundaryIndex(String),
    #[error("negative quotient dimension {value} at rank set {set:?} of skeleton {skeleton}")]
    NegativeQuotientDim {
        skeleton: usize,
        set: Vec<usize>,
        value: i128,
    },
    #[error("restriction maps are not functorial between `{upper}` and `{lower}`")]
    NotFunctorial { upper: String, lower: String },
    #[error("restriction matrix for ({upper}, {lower}) has the wrong shape")]
    BadRestrictionShape { upper: String, lower: String },

    #[error("({upper}, {lower}) is not a cover relation")]
    NotACover { upper: String, lower: String },
    #[error("unzip requires tau to differ from the minimum")]
    TauIsBottom,
    #[error("bad parameter: {0}")]
    BadParameter(String),

    #[error("quotient is not Artinian: degree {degree} still has dimension {dim}")]
    NotArtinian { degree: usize, dim: usize },
    #[error("negative entry {0} in candidate f-vector")]
    NegativeEntry(i128),

    #[error("line {line}: {message}")]
    Parse { line: usize, message: String },
}

pub type Result<T> = std::result::Result<T, Error>;
