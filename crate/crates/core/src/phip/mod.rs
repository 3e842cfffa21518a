//! Para-hydrogen statistics, PHIP initial states, the PASADENA/ALTADENA
//! experiment variants and their signal vectors.

pub mod experiment;
pub mod rotor;
pub mod signal;

pub use experiment::{enhancement, enhancement_numeric, run_phip, Averaging, Detection, PhipExperiment, PhipVariant};
pub use rotor::{para_fraction, RotorParams};
pub use signal::{signal, signal_vector, thermal_reference, SignalVector};

use crate::error::Result;
use crate::scalar::Real;
use crate::spin::DensityMatrix;

/// Hydrogen with singlet fraction `F`: `1/4 + (1-4F)/3 (ZQ_x + I_z S_z)`.
pub fn phip_state<T: Real>(singlet_fraction: T) -> Result<DensityMatrix<T>> {
    DensityMatrix::para_enriched(singlet_fraction)
}
