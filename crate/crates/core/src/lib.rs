//! Rulial multiway graphs of simple Turing machines.
//!
//! The library builds the directed graph obtained by applying *every*
//! possible s-state k-color Turing machine transition to every reachable
//! configuration ("extreme non-determinism"), and analyzes the result:
//! geodesic-ball growth sequences, layered foliations and slice graphs,
//! the finite "Turing machine group" on cyclic tapes together with its
//! Cayley graphs and cube-connected-cycle structure, causal graphs for
//! deterministic and multiway evolution, the subgraph reachable by
//! deterministic machines, and the analogous reach graph for the 256
//! elementary cellular automata.

pub mod ca;
pub mod causal;
pub mod detspace;
pub mod error;
pub mod export;
pub mod golden;
pub mod group;
pub mod iso;
pub mod machine;
pub mod multiway;

pub use error::Error;
pub use machine::{Config, DetRule, MachineSpec, MicroRule, Tape, TapeModel};
pub use multiway::{BuildOptions, GrowthMode, GrowthSequence, MultiwayGraph};

/// Convenience alias used throughout the crate.
pub type Result<T> = std::result::Result<T, Error>;
