//! caplab: an exact workbench for finite convergence-approach spaces.
//!
//! A finite convergence-approach space assigns to every filter 𝓕 on a finite
//! carrier X a limit function λ(𝓕): X → [0,∞] subject to the meet axiom
//! λ(𝓕 ∧ 𝓖) = λ(𝓕) ∨ λ(𝓖).  On a finite carrier every filter is principal,
//! so the whole structure is determined by the matrix d(x, a) = λ({a}↑)(x)
//! and every limit value is an exact rational (or ∞).  Everything here is
//! computed with exact arithmetic: no floats, no tolerances.
//!
//! The crate decides structural properties (⊕-regularity, ⊕-diagonality,
//! strictness of subspaces), computes quantitative objects (hom-space limits,
//! contraction defaults, extension domains), and rebuilds the refutation
//! constructions that witness failures of those properties.

pub mod constructions;
pub mod corpus;
pub mod extension;
pub mod filters;
pub mod homspace;
pub mod io;
pub mod properties;
pub mod quantale;
pub(crate) mod scaled;
pub mod spaces;
pub mod suite;

pub use quantale::{Tensor, Weight};

/// Errors shared by every module in the crate.
#[derive(Debug, thiserror::Error)]
pub enum Error {
    #[error("carrier mismatch: {0}")]
    CarrierMismatch(String),
    #[error("a principal filter needs a nonempty core")]
    EmptyCore,
    #[error("empty carrier")]
    EmptyCarrier,
    #[error("invalid point name `{0}`")]
    BadPointName(String),
    #[error("duplicate point name `{0}`")]
    DuplicatePointName(String),
    #[error("unknown point `{0}`")]
    UnknownPoint(String),
    #[error("point index {index} out of range for carrier of size {len}")]
    PointOutOfRange { index: usize, len: usize },
    #[error("invalid weight literal `{text}`: {reason}")]
    WeightLiteral { text: String, reason: String },
    #[error("{path}:{line}: {msg}")]
    Parse {
        path: String,
        line: usize,
        msg: String,
    },
    #[error("function space too large: {size} elements exceed the cap of {cap}")]
    FunctionSpaceCap { size: u128, cap: usize },
    #[error("candidate enumeration too large: {size} maps exceed the cap of {cap}")]
    EnumerationCap { size: u128, cap: usize },
    #[error("precondition violated: {0}")]
    Precondition(String),
    #[error("construction check failed: {0}")]
    Construction(String),
    #[error("matrix entries too large or too fine for exact scaled arithmetic")]
    ScaleOverflow,
    #[error("io error: {0}")]
    Io(#[from] std::io::Error),
}

pub type Result<T> = std::result::Result<T, Error>;
