//! Query-complexity laboratory for inverting a permutation and unique
//! unordered search.
//!
//! The crate implements both oracle problems, every reduction between them
//! (classical and quantum), an exact statevector simulator for the quantum
//! side, and exact or Monte Carlo error measurement.

pub mod classical_engine;
pub mod measurement;
pub mod oracles;
pub mod quantum_engine;
pub mod random;
pub mod reductions;
