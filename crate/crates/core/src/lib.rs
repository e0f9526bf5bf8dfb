//! Graded twisted Steinberg algebras over finite rings and the reconstruction
//! of their twists from algebraic pairs, on finite discrete instances.

pub mod cli;
pub mod error;
pub mod finring;
pub mod groupoid;
pub mod instance;
pub mod oracle;
pub mod pairs;
pub mod reconstruct;
pub mod par;
pub mod steinberg;
pub mod twist;

pub use error::{Axiom, AxiomViolation, Error, Result};
pub use par::Exec;

/// Enumeration limits and execution settings shared by the engines.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Config {
    /// Upper bound on the number of states any exhaustive search may visit.
    pub cap: u64,
    pub exec: Exec,
    /// Seed for the sampled checks.
    pub seed: u64,
}

impl Default for Config {
    fn default() -> Self {
        Self {
            cap: 1_000_000,
            exec: Exec::default(),
            seed: 0x5eed,
        }
    }
}
