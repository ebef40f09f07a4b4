//! Workbench for pigeonhole-style CNF formulas over sparse bipartite graphs:
//! graph sampling and boundary-expansion certificates, formula encoders with
//! DIMACS I/O, a resolution engine (provers, checker, trace I/O), closure
//! computations, pseudo-width machinery with the filter-vector sampler and
//! proof transformation, exact-rational span validators for both the
//! functional and the perfect-matching setting, and an experiment harness.

pub mod closure;
pub mod experiment;
pub mod formula;
pub mod graph;
pub mod matchinglab;
pub mod numeric;
pub mod pseudowidth;
pub mod resolution;
pub mod rng;
pub mod spanlab;
pub mod subspace;

/// Exact rational scalar used everywhere a ratio or threshold appears.
pub type Rat = num::BigRational;

pub use num::bigint::BigUint;

#[derive(Debug, thiserror::Error)]
pub enum Error {
    #[error("invalid parameter: {0}")]
    Param(String),
    #[error("precondition failed: {0}")]
    Precondition(String),
    #[error("budget exceeded: needs about {required}, cap {cap}")]
    Budget { required: u128, cap: u128 },
    #[error("rule violation: {0}")]
    Rule(String),
    #[error("parse error at line {line}: {msg}")]
    Parse { line: usize, msg: String },
    #[error(transparent)]
    Io(#[from] std::io::Error),
}

pub type Result<T> = std::result::Result<T, Error>;

impl Error {
    pub fn param(msg: impl Into<String>) -> Self {
        Error::Param(msg.into())
    }
    pub fn precondition(msg: impl Into<String>) -> Self {
        Error::Precondition(msg.into())
    }
    pub fn rule(msg: impl Into<String>) -> Self {
        Error::Rule(msg.into())
    }
}
