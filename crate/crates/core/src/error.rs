use thiserror::Error;

use crate::correlators::SystemKind;
use crate::spin_ops::OperatorKind;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("invalid value for `{field}`: {reason}")]
    InvalidInvariant { field: &'static str, reason: String },

    #[error("configuration is not realizable by real 3-vectors: {0}")]
    NotRealizable(String),

    #[error("unsupported spin 2s = {0}; only s = 1/2 and s = 1 are implemented")]
    UnsupportedSpin(u32),

    #[error("measurement axis must be a unit vector, got |axis| = {0}")]
    NonUnitAxis(f64),

    #[error("invalid kinematics: {0}")]
    InvalidKinematics(String),

    #[error("four-momentum ({e}, |q| = {q}) is off the mass shell for m = {mass}")]
    OffShell { e: f64, q: f64, mass: f64 },

    #[error("bipartite coefficient matrix vanishes")]
    ZeroState,

    #[error("state norm vanishes")]
    ZeroNorm,

    #[error("state normalization vanishes at x = {x}")]
    DegenerateState { x: f64 },

    #[error("no closed form for {operator} on {system}; evaluate with the oracle instead")]
    Unsupported {
        system: SystemKind,
        operator: OperatorKind,
    },

    #[error("operator dimension {operator} does not match state dimension {state}")]
    DimensionMismatch { operator: usize, state: usize },
}
