//! Verification engines: a statevector simulator with mid-circuit
//! measurement and classical feedback, and a stabilizer tableau for Clifford
//! circuits.

mod engine;
mod state;
mod tableau;

use std::fmt;

use thiserror::Error;

use crate::circuit::Wire;

pub use engine::{
    enumerate_branches, enumerate_branches_with, run_statevector, run_statevector_with, Branch,
    OutcomePolicy, Run, SimConfig, Simulator,
};
pub use state::{same_state_up_to_global_phase, AmplitudeEntry, StateVector};
pub use tableau::{run_stabilizer, StabilizerRun, Tableau};

/// Environment variable that overrides the live-qubit cap.
pub const MAX_QUBITS_ENV: &str = "PARITY_FORGE_MAX_QUBITS";

#[derive(Debug, Error, Clone, PartialEq)]
pub enum SimError {
    #[error("{needed} live qubits exceed the cap of {cap}")]
    CapExceeded { needed: usize, cap: usize },
    #[error("forced branch for outcome {outcome:?} has probability {probability:e}")]
    ImpossibleBranch { outcome: String, probability: f64 },
    #[error("forced policy has {got} bits for {expected} measurements")]
    ForcedLength { expected: usize, got: usize },
    #[error("{count} measurements exceed the enumeration limit of {limit}")]
    TooManyMeasurements { count: usize, limit: usize },
    #[error("reset of {0} while it is entangled with other qubits")]
    IndeterminateReset(Wire),
    #[error("condition refers to unrecorded outcome {0:?}")]
    UnknownOutcome(String),
    #[error("wire {0} is entangled with the rest of the register")]
    NotSeparable(Wire),
    #[error("dimension mismatch: expected {expected}, got {got}")]
    DimensionMismatch { expected: usize, got: usize },
    #[error("wire mismatch: {0}")]
    WireMismatch(String),
    #[error("gate {0} is not supported by the stabilizer engine")]
    UnsupportedGate(&'static str),
    #[error("invalid state: {0}")]
    BadState(String),
    #[error("invalid {MAX_QUBITS_ENV} value {0:?}")]
    InvalidEnv(String),
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Pauli {
    X,
    Y,
    Z,
}

/// A signed product of single-wire Paulis.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PauliString {
    pub negative: bool,
    pub ops: Vec<(Wire, Pauli)>,
}

impl PauliString {
    pub fn new(ops: Vec<(Wire, Pauli)>) -> Self {
        Self {
            negative: false,
            ops,
        }
    }

    /// Product of Z over `wires`.
    pub fn z_product<'a, I: IntoIterator<Item = &'a Wire>>(wires: I) -> Self {
        Self::new(wires.into_iter().map(|w| (w.clone(), Pauli::Z)).collect())
    }
}

impl fmt::Display for PauliString {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(if self.negative { "-" } else { "+" })?;
        for (w, p) in &self.ops {
            write!(f, "{p:?}{w}")?;
        }
        Ok(())
    }
}
