pub mod algorithms;
pub mod circuit;
pub mod code;
pub mod codec;
pub mod gf2;
pub mod sim;
pub mod verify;

use thiserror::Error;

/// Any failure, prefixed with the module that raised it.
#[derive(Debug, Error)]
pub enum Error {
    #[error("code: {0}")]
    Code(#[from] code::CodeError),
    #[error("circuit: {0}")]
    Circuit(#[from] circuit::CircuitError),
    #[error("codec: {0}")]
    Codec(#[from] codec::CodecError),
    #[error("sim: {0}")]
    Sim(#[from] sim::SimError),
    #[error("algorithms: {0}")]
    Algorithms(#[from] algorithms::AlgorithmError),
}

#[cfg(doctest)]
mod book {
    #[doc = include_str!("../../../book/src/introduction.md")]
    mod introduction {}
    #[doc = include_str!("../../../book/src/parity-codes.md")]
    mod parity_codes {}
    #[doc = include_str!("../../../book/src/circuits.md")]
    mod circuits {}
    #[doc = include_str!("../../../book/src/deformations.md")]
    mod deformations {}
    #[doc = include_str!("../../../book/src/simulation.md")]
    mod simulation {}
    #[doc = include_str!("../../../book/src/algorithms.md")]
    mod algorithms {}
    #[doc = include_str!("../../../book/src/command-line.md")]
    mod command_line {}
}
