use thiserror::Error;

/// Every failure mode of the library.
///
/// Witnesses are simplices or nerve tuples written with their vertex labels.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("malformed facet {facet:?}: {reason}")]
    MalformedFacet { facet: Vec<String>, reason: String },
    #[error("cover does not exhaust the base: {simplex:?} lies in no member")]
    IncompleteCover { simplex: Vec<String> },
    #[error("cover member {member} is not a subcomplex of the base: {reason}")]
    NotSubcomplex { member: String, reason: String },
    #[error("group axioms fail: {0}")]
    GroupAxiom(String),
    #[error("coefficient group {0} has no ring structure")]
    NoRingStructure(String),
    #[error("degree mismatch: expected {expected}, found {found}")]
    DegreeMismatch { expected: usize, found: usize },
    #[error("mismatch: {0}")]
    Mismatch(String),
    #[error("not closed: nonzero coboundary at {witness:?}")]
    NotClosed { witness: Vec<String> },
    #[error("malformed word: {0}")]
    MalformedWord(String),
    #[error("operation requires an abelian group")]
    RequiresAbelian,
    #[error("bad weight support: {0}")]
    BadSupport(String),
    #[error("product is not associative at {witness:?}")]
    NonAssociativeProduct { witness: Vec<String> },
    #[error("associator is not coherent at {witness:?}")]
    IncoherentAssociator { witness: Vec<String> },
    #[error("invalid Deligne triple: {0}")]
    InvalidTriple(String),
    #[error("invalid Deligne quadruple: {0}")]
    InvalidQuadruple(String),
    #[error("bad partition of unity: {0}")]
    BadPartition(String),
    #[error("cover is not good: {0}")]
    NotGood(String),
    #[error("invalid extension data: {0}")]
    InvalidExtension(String),
    #[error("parse error in {path} at {location}: {message}")]
    Parse {
        path: String,
        location: String,
        message: String,
    },
    #[error("invariant violated for {kind}: {witness}")]
    Invariant { kind: String, witness: String },
    #[error("usage: {0}")]
    Usage(String),
}

pub type Result<T> = std::result::Result<T, Error>;
