//! Exact computation over countably based spaces: fuel-bounded
//! semidecision, compact and overt sets, effective relatively compact
//! systems, metric-space algorithms and the hyperspace of located sets.

pub mod cli;
pub mod ercs;
pub mod error;
pub mod hyperspace;
pub mod kernel;
pub mod metric;
pub mod oracle;
pub mod rational;
pub mod sets;
pub mod spaces;

pub use error::{Error, Result};
pub use kernel::{Enumerator, Fuel, Outcome, PairingScheme, Semidecision};
pub use rational::Rational;
