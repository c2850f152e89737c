use thiserror::Error;

/// Errors raised by the library. Messages are stable and surfaced verbatim by the CLI.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("zero denominator")]
    ZeroDenominator,
    #[error("nonpositive input")]
    NonPositive,
    #[error("valuation of zero undefined")]
    ValuationOfZero,
    #[error("{0} is not prime")]
    NotPrime(u64),
    #[error("empty input")]
    Empty,
    #[error("integer too large for trial division: {0}")]
    TooLarge(String),
    #[error("parse error: {0}")]
    Parse(String),
    #[error("element {element} is not a valid element of {group}")]
    ElementMismatch { element: String, group: String },
    #[error("adjacency defined on distinct vertices")]
    SameVertex,
    #[error("identity lies in no maximal cyclic subgroup")]
    IdentityGenerator,
    #[error("component predicates are undefined on the identity")]
    IdentityComponent,
    #[error("operation {op} is not supported for group {group}")]
    Unsupported { op: &'static str, group: String },
    #[error("window spec {spec} does not match group {group}")]
    WindowMismatch { spec: String, group: String },
    #[error("window must contain the identity and be closed under negation")]
    WindowNotClosed,
    #[error("S-set defined for adjacent pairs")]
    NotAdjacent,
    #[error("identity has no neighborhood")]
    IsolatedVertex,
    #[error("brute force bound exceeded: {0} vertices")]
    BruteForceBound(usize),
    #[error("element outside domain group")]
    OutsideDomain,
    #[error("primes must be distinct")]
    SamePrime,
    #[error("map is not an isomorphism of the underlying graphs: {0}")]
    NotIsomorphism(String),
    #[error("vertex {0} is not in the graph")]
    UnknownVertex(String),
    #[error("graph is not directed")]
    Undirected,
}

pub type Result<T, E = Error> = std::result::Result<T, E>;
