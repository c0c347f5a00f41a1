//! Spin correlation functions of two-particle states in the center-of-mass
//! frame, with Newton-Wigner and center-of-mass spin operators.

pub mod analysis;
pub mod cli;
pub mod correlators;
pub mod crosscheck;
pub mod error;
pub mod geometry;
pub mod kinematics;
pub mod matrix_io;
pub mod oracle;
pub mod par;
pub mod sampling;
pub mod scenario;
pub mod spin_ops;
pub mod states;

pub use correlators::{closed_form, SystemKind};
pub use error::{Error, Result};
pub use geometry::{InvariantSet, PolProducts, RealizedFrame};
pub use spin_ops::OperatorKind;
