//! Coherent and incoherent evolution: Hamiltonians, pulses, gradients,
//! composite sequences and relaxation.

pub mod composite;
pub mod gradient;
pub mod hamiltonian;
pub mod relax;
pub mod sequence;

pub use composite::{jump_return, jump_return_delay, mlev16, mlev16_cycle_time, spin_echo};
pub use gradient::{crush, crush_sliced, timed_gradient, CrushMode};
pub use hamiltonian::{free_evolve, hamiltonian, pulse_propagator, rf_hamiltonian, split_hamiltonian};
pub use relax::{apply_kraus, decohere, kraus_channels};
pub use sequence::{MixingKind, PulseSequence, PulseTarget, SequenceElement};

use crate::scalar::Real;

/// Degrees to radians.
pub fn deg<T: Real>(x: f64) -> T {
    T::lit(x.to_radians())
}
