use thiserror::Error;

/// Errors raised by the algebraic layer. DSL parse failures live in
/// [`crate::dsl::ParseError`].
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("element label `{0}` appears more than once")]
    DuplicateElement(String),
    #[error("no assignment for domain element `{0}`")]
    MissingAssignment(String),
    #[error("domain element `{0}` is assigned more than once")]
    DuplicateAssignment(String),
    #[error("unknown element label `{0}`")]
    UnknownLabel(String),
    #[error("table entry {value} at position {position} is out of range for a codomain of size {cod_size}")]
    IndexOutOfRange {
        position: usize,
        value: usize,
        cod_size: usize,
    },
    #[error("table has length {found}, expected {expected}")]
    TableLength { expected: usize, found: usize },
    #[error("type mismatch: expected `{expected}`, found `{found}`")]
    TypeMismatch { expected: String, found: String },
    #[error("subset over `{found}` used where a subset of `{expected}` is required")]
    SubsetDomainMismatch { expected: String, found: String },
    #[error("no map `{cod}` -> `{dom}` exists: the domain is empty but the codomain is not")]
    NoInverseExists { dom: String, cod: String },
    #[error("search space of {size} candidates exceeds the bound {bound}; pass a limit")]
    SearchSpaceTooLarge { size: u128, bound: u128 },
    #[error("`{0}` is not an inner inverse")]
    NotAnInnerInverse(String),
    #[error("`{0}` is not a generalized inverse")]
    NotAGeneralizedInverse(String),
    #[error("star {0} has the wrong type for its position in the chain")]
    AlternationViolation(usize),
    #[error("a star chain needs at least one star")]
    EmptyChain,
    #[error("chains of orders {0} and {1} cannot be composed")]
    OrderMismatch(usize, usize),
    #[error("path broken at position {0}")]
    BrokenPath(usize),
    #[error("empty path")]
    EmptyPath,
    #[error("unknown edge `{0}`")]
    UnknownEdge(String),
    #[error("unknown object `{0}`")]
    UnknownObject(String),
    #[error("duplicate edge name `{0}`")]
    DuplicateEdge(String),
    #[error("three maps do not satisfy f.h.g.f = f")]
    NotRegularThreeCycle,
    #[error("edge map is incompatible: {0}")]
    IncompatibleEdgeMap(String),
    #[error("`{0}` is not idempotent")]
    NotIdempotent(String),
    #[error("classical mode requires identity obstructors")]
    ClassicalRequiresIdentity,
    #[error("carrier of size {size} exceeds the solver maximum {max}")]
    CarrierTooLarge { size: usize, max: usize },
    #[error("invalid argument: {0}")]
    InvalidArgument(String),
}

pub type Result<T> = std::result::Result<T, Error>;

pub(crate) fn mismatch(expected: &str, found: &str) -> Error {
    Error::TypeMismatch {
        expected: expected.to_owned(),
        found: found.to_owned(),
    }
}
