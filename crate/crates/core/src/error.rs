use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum Error {
    #[error("no leading term")]
    NoLeadingTerm,
    #[error("polynomial mentions more than one base variable")]
    NotUnivariate,
    #[error("ordering not admissible for basis computation")]
    OrderNotAdmissible,
    #[error("unknown monomial order `{0}`")]
    UnknownOrder(String),
    #[error("quotient is infinite-dimensional")]
    InfiniteQuotient,
    #[error("monomial is not in the reduced support set")]
    NotReducedSupport,
    #[error("monomial is not fair")]
    NotFair,
    #[error("zero element has no lowest-weight component")]
    ZeroElement,
    #[error("multiplicity must be at least 2, got {0}")]
    MultiplicityTooSmall(u32),
    #[error("exterior generator out of range: index {index}, order {order}")]
    GeneratorOutOfRange { index: u32, order: u32 },
    #[error("order bound h = {h} exceeds ambient bound H = {ambient}")]
    BoundOutOfRange { h: u32, ambient: u32 },
    #[error("{0}")]
    InvalidArgument(String),
}

pub type Result<T> = std::result::Result<T, Error>;
