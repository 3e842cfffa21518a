//! Density-matrix simulation of para-hydrogen NMR spin dynamics.
//!
//! - [`spin`]: product operators, spin systems and density matrices.
//! - [`dynamics`]: Hamiltonians, pulses, gradients, composite sequences and
//!   relaxation.
//! - [`phip`]: para-hydrogen preparation, signal vectors and enhancements.
//! - [`specproc`]: FIDs, spectra, J-processing, integration, filtration and
//!   one-shot tomography.
//! - [`entangle`]: entanglement measures and separability bounds.
//! - [`qip`]: gate circuits, Deutsch-Jozsa, Grover and the full twirl.
//!
//! Everything is generic over the scalar type; the aliases below fix it to
//! `f64` (or `f32` with the `32` suffix).

// `!(x > 0)` style checks are meant to reject NaN as well
#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod dynamics;
pub mod entangle;
pub mod error;
pub mod linalg;
pub mod phip;
pub mod qip;
pub mod scalar;
pub mod specproc;
pub mod spin;

pub use error::{Error, Result};
pub use scalar::Real;

/// Library version, recorded in run manifests.
pub const VERSION: &str = env!("CARGO_PKG_VERSION");

pub type DensityState = spin::DensityMatrix<f64>;
pub type DensityState32 = spin::DensityMatrix<f32>;
pub type System = spin::SpinSystem<f64>;
pub type System32 = spin::SpinSystem<f32>;
pub type Sequence = dynamics::PulseSequence<f64>;
pub type Sequence32 = dynamics::PulseSequence<f32>;
pub type Signal = phip::SignalVector<f64>;
pub type Signal32 = phip::SignalVector<f32>;
pub type Fid = specproc::Fid<f64>;
pub type Spectrum = specproc::Spectrum<f64>;
pub type Circuit = qip::GateCircuit<f64>;
