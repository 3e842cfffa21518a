//! Spin-1/2 operator algebra, density matrices and spin-system parameters.
//!
//! Basis ordering is Zeeman: qubit 0 is the most significant bit and bit 0
//! is |α⟩ (m = +1/2). Two-qubit order is |αα⟩, |αβ⟩, |βα⟩, |ββ⟩.

pub mod coherence;
pub mod expand;
pub mod operator;
pub mod state;
pub mod system;

pub use coherence::{coherence_decompose, coherence_filter, coherence_order};
pub use expand::{expand, BasisExpansion};
pub use operator::{Basis, Factor, OperatorLabel};
pub use state::{BellState, DensityMatrix};
pub use system::{CouplingMode, SpinSystem};

/// Hilbert-space dimension for `n` qubits.
pub fn dim(n_qubits: usize) -> usize {
    1usize << n_qubits
}

/// Value (0 = α, 1 = β) of `qubit` in basis index `idx`.
#[inline]
pub fn bit(n_qubits: usize, idx: usize, qubit: usize) -> usize {
    (idx >> (n_qubits - 1 - qubit)) & 1
}

/// Largest register the dense simulator accepts.
pub const MAX_QUBITS: usize = 10;
