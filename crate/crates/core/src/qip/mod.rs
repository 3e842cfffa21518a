//! Gate-level algorithms on the density-matrix engine.

pub mod algorithms;
pub mod circuit;
pub mod twirl;

pub use algorithms::{
    deutsch_jozsa, deutsch_jozsa_circuit, grover, grover_circuit, singlet_bridge, AlgorithmResult, Answer,
};
pub use circuit::{run_circuit, Axis, DeutschFunction, Gate, GateCircuit, GateNoise, Oracle};
pub use twirl::{full_twirl, twirl_group, TwirlMode};
