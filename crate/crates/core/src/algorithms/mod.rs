//! Applications built on code deformations: parity QAOA, the strip QFT,
//! graph states and single-basis diagonal blocks.

mod diagonal;
mod graph;
mod problem;
mod qaoa;
mod qft;

use thiserror::Error;

use crate::circuit::CircuitError;
use crate::code::{CodeError, QubitLabel};
use crate::codec::CodecError;
use crate::sim::{Pauli, SimError};

pub use diagonal::{compile_diagonal_block, DiagonalTerm};
pub use graph::{build_graph_state, build_graph_state_on, direct_graph_state_circuit};
pub use problem::{GraphSpec, ProblemHamiltonian, QaoaParams, Term};
pub use qaoa::{
    build_qaoa_circuit, build_qaoa_circuit_with_readout, optimize_params, parity_qaoa_energy,
    qaoa_landscape, qaoa_layer_breakdown, reference_logical_qaoa, LandscapePoint, QaoaProgram,
    QaoaResult, REFERENCE_MAX_QUBITS,
};
pub use qft::{
    build_qft, dense_qft, logical_cp_decomposition, qft_block_code, qft_expected_depth, qft_stages,
    CpDecomposition, QftStage,
};

#[derive(Debug, Error)]
pub enum AlgorithmError {
    #[error("invalid problem: {0}")]
    InvalidProblem(String),
    #[error("invalid graph: {0}")]
    InvalidGraph(String),
    #[error("need p >= 1 equal-length angle lists, got {betas} betas and {gammas} gammas")]
    BadParams { betas: usize, gammas: usize },
    #[error("optimizer budget must be at least 1")]
    ZeroBudget,
    #[error("size {n} is below the minimum {min}")]
    BadSize { n: usize, min: usize },
    #[error("{n} logical qubits exceed the dense reference cap of {cap}")]
    TooLarge { n: usize, cap: usize },
    #[error("problem has n = {problem} but the code has n = {code}")]
    SizeMismatch { problem: usize, code: usize },
    #[error("code has no qubit {0}")]
    MissingQubit(QubitLabel),
    #[error("code labels do not span the logical space")]
    NoReadoutBasis,
    #[error("term of kind {got:?} in a {expected:?}-basis block")]
    MixedBasis { expected: Pauli, got: Pauli },
    #[error("optimizer: {0}")]
    Optimizer(String),
    #[error(transparent)]
    Code(#[from] CodeError),
    #[error(transparent)]
    Codec(#[from] CodecError),
    #[error(transparent)]
    Circuit(#[from] CircuitError),
    #[error(transparent)]
    Sim(#[from] SimError),
}
