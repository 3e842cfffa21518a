//! Four-component signal vectors of a two-spin system.

use crate::dynamics::PulseSequence;
use crate::error::{invalid, Result};
use crate::linalg::{cr, trace_product, CMat};
use crate::scalar::Real;
use crate::spin::operator::{two, Factor};
use crate::spin::{CouplingMode, DensityMatrix, SpinSystem};
use nalgebra::{Complex, ComplexField};
use serde::{Deserialize, Serialize};

/// `Tr(ρ I⁺S_α), Tr(ρ I⁺S_β), Tr(ρ I_αS⁺), Tr(ρ I_βS⁺)`.
///
/// Serialized as four `[re, im]` pairs in that order.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
#[serde(from = "[[f64; 2]; 4]", into = "[[f64; 2]; 4]", bound = "")]
pub struct SignalVector<T: Real>(pub [Complex<T>; 4]);

impl<T: Real> SignalVector<T> {
    pub fn from_real(v: [f64; 4]) -> Self {
        Self(v.map(|x| Complex::new(T::lit(x), T::zero())))
    }

    pub fn zero() -> Self {
        Self([Complex::new(T::zero(), T::zero()); 4])
    }

    pub fn scale(&self, s: T) -> Self {
        Self(self.0.map(|z| z * cr(s)))
    }

    /// Largest entry modulus.
    pub fn max_abs(&self) -> T {
        self.0.iter().fold(T::zero(), |m, z| m.max(z.modulus()))
    }

    pub fn max_diff(&self, other: &Self) -> T {
        self.0
            .iter()
            .zip(other.0.iter())
            .fold(T::zero(), |m, (a, b)| m.max((a - b).modulus()))
    }
}

impl<T: Real> From<[[f64; 2]; 4]> for SignalVector<T> {
    fn from(v: [[f64; 2]; 4]) -> Self {
        Self(v.map(|[re, im]| Complex::new(T::lit(re), T::lit(im))))
    }
}

impl<T: Real> From<SignalVector<T>> for [[f64; 2]; 4] {
    fn from(s: SignalVector<T>) -> Self {
        s.0.map(|z| [z.re.as_f64(), z.im.as_f64()])
    }
}

fn detection_ops<T: Real>() -> [CMat<T>; 4] {
    [
        two::prod(Factor::Plus, Factor::Alpha),
        two::prod(Factor::Plus, Factor::Beta),
        two::prod(Factor::Alpha, Factor::Plus),
        two::prod(Factor::Beta, Factor::Plus),
    ]
}

/// Signal vector of a state as it stands (after any detection pulse).
pub fn signal_vector<T: Real>(rho: &DensityMatrix<T>) -> Result<SignalVector<T>> {
    if rho.n_qubits() != 2 {
        return Err(invalid("signal vector is defined for two spins"));
    }
    let ops = detection_ops::<T>();
    Ok(SignalVector(std::array::from_fn(|k| trace_product(rho.matrix(), &ops[k]))))
}

/// Applies the detection sequence and evaluates the signal vector.
pub fn signal<T: Real>(rho: &DensityMatrix<T>, detection: &PulseSequence<T>, sys: &SpinSystem<T>) -> Result<SignalVector<T>> {
    signal_vector(&detection.apply(rho, sys, CouplingMode::Weak)?)
}

/// Thermal reference `1/4 + (B/4)(I_z + S_z)` used for signal normalisation.
///
/// Its sign is chosen so a hard `90_y` pulse gives `B/8 {1,1,1,1}`; the
/// equilibrium constructor `DensityMatrix::thermal` uses the opposite sign.
pub fn thermal_reference<T: Real>(boltzmann: T) -> Result<DensityMatrix<T>> {
    if !(boltzmann > T::zero() && boltzmann < T::one()) {
        return Err(invalid(format!("Boltzmann factor {boltzmann} must lie in (0, 1)")));
    }
    DensityMatrix::from_deviation(&((two::iz::<T>() + two::sz::<T>()) * cr(boltzmann / T::lit(4.0))))
}
