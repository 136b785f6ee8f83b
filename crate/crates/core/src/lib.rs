//! LTL reactive synthesis: on-the-fly deterministic parity automata,
//! incremental parity-game solving by strategy iteration, and controller
//! extraction to Mealy machines and AIGER circuits.

pub mod arena;
pub mod automata;
pub mod cli;
pub mod cube;
pub mod engine;
pub mod explorer;
pub mod extract;
pub mod ltl;
pub mod solver;
pub mod verify;
