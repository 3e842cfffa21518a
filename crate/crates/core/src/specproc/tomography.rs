//! One-shot tomography of filtered singlet/triplet mixtures from calibrated
//! peak integrals.

use super::integrate::Measured;
use crate::entangle::{eof_from_concurrence, st_closed_form_concurrence};
use crate::error::{invalid, Result};
use crate::scalar::Real;
use serde::{Deserialize, Serialize};

/// `F x / (1 − (1 − x)^F)`: correction for a reservoir depleted by a
/// fraction `x` on each of `F` flashes.
pub fn depletion_correction<T: Real>(x: T, flashes: T) -> Result<T> {
    if !(x >= T::zero() && x < T::one()) {
        return Err(invalid("per-flash fraction must lie in [0, 1)"));
    }
    if !(flashes >= T::one()) {
        return Err(invalid("flash count must be at least 1"));
    }
    if x == T::zero() {
        return Ok(T::one());
    }
    let remaining = (flashes * (-x).ln_1p()).exp_m1();
    Ok(flashes * x / -remaining)
}

/// Factors converting raw integrals to deviation coefficients.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
#[serde(bound = "")]
pub struct Calibration<T: Real> {
    /// Scans averaged in the thermal reference.
    pub scans: T,
    pub flashes: T,
    /// Fraction of the sample inside the active volume.
    pub active_fraction: T,
    /// Depletion correction factor, see [`depletion_correction`].
    pub depletion: T,
    /// Thermal reference integral.
    pub thermal_integral: Measured<T>,
    pub boltzmann: T,
}

impl<T: Real> Calibration<T> {
    pub fn validate(&self) -> Result<()> {
        let positive = [self.scans, self.flashes, self.active_fraction, self.depletion, self.thermal_integral.value, self.boltzmann];
        if positive.iter().any(|&v| !(v > T::zero())) {
            return Err(invalid("calibration values must be positive"));
        }
        if self.active_fraction > T::one() {
            return Err(invalid("active-volume fraction must not exceed 1"));
        }
        if !(self.thermal_integral.error >= T::zero()) {
            return Err(invalid("thermal integral error must be non-negative"));
        }
        Ok(())
    }

    /// Parameters of the 1,2-bis(diphenylphosphino)ethane hydrogenation run.
    pub fn dppe_run() -> Self {
        Self {
            scans: T::lit(3072.0),
            flashes: T::lit(1000.0),
            active_fraction: T::lit(12.5 / 34.0),
            depletion: T::lit(1.023),
            thermal_integral: Measured::new(T::lit(303.12), T::lit(4.44)),
            boltzmann: T::lit(2.0 / 30864.0),
        }
    }

    /// A unit calibration for integrals measured against an internally
    /// synthesized thermal reference.
    pub fn synthetic(thermal_integral: Measured<T>, boltzmann: T) -> Self {
        Self {
            scans: T::one(),
            flashes: T::one(),
            active_fraction: T::one(),
            depletion: T::one(),
            thermal_integral,
            boltzmann,
        }
    }

    /// `S F V_f / (T · depletion · 2/B)` with its propagated error.
    pub fn normalization(&self) -> Result<Measured<T>> {
        self.validate()?;
        let t = self.thermal_integral;
        let n = self.scans * self.flashes * self.active_fraction
            / (t.value * self.depletion * T::lit(2.0) / self.boltzmann);
        Ok(Measured::new(n, n * t.error / t.value))
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
#[serde(bound = "")]
pub struct TomographyResult<T: Real> {
    pub raw_i: Measured<T>,
    pub raw_s: Measured<T>,
    pub normalization: Measured<T>,
    /// `ZQ_x` coefficient.
    pub p: Measured<T>,
    /// `I_zS_z` coefficient.
    pub q: Measured<T>,
    /// Singlet fraction.
    pub a: Measured<T>,
    /// `T_0` fraction.
    pub b: Measured<T>,
    /// Fraction in each of `T_+1` and `T_-1`.
    pub c: Measured<T>,
    /// Werner polarization `(4a − 1)/3`.
    pub effective_purity: Measured<T>,
    pub concurrence: T,
    pub eof: T,
}

/// Fractions from deviation coefficients, exact.
pub fn fractions_from_pq<T: Real>(p: T, q: T) -> (T, T, T) {
    let four = T::lit(4.0);
    let two = T::lit(2.0);
    ((T::one() - two * p - q) / four, (T::one() + two * p - q) / four, (T::one() + q) / four)
}

/// Deviation coefficients from the singlet and `T_0` fractions.
pub fn pq_from_fractions<T: Real>(a: T, b: T) -> (T, T) {
    (b - a, T::one() - T::lit(2.0) * (a + b))
}

/// Inverts the antiphase integrals of the `I` and `S` multiplets.
///
/// `p = −N·S` and `q = −N·I`; errors are first order, including the
/// correlation both inherit from the normalization.
pub fn tomography<T: Real>(i_integral: Measured<T>, s_integral: Measured<T>, cal: &Calibration<T>) -> Result<TomographyResult<T>> {
    if !(i_integral.error >= T::zero() && s_integral.error >= T::zero()) {
        return Err(invalid("integral errors must be non-negative"));
    }
    let n = cal.normalization()?;
    let p = -n.value * s_integral.value;
    let q = -n.value * i_integral.value;
    let var_n = n.error * n.error;
    let var_p = (n.value * s_integral.error).powi(2) + s_integral.value.powi(2) * var_n;
    let var_q = (n.value * i_integral.error).powi(2) + i_integral.value.powi(2) * var_n;
    let cov = i_integral.value * s_integral.value * var_n;
    let (a, b, c) = fractions_from_pq(p, q);
    let four = T::lit(4.0);
    let sixteen = T::lit(16.0);
    let sd = |v: T| v.max(T::zero()).sqrt();
    let err_a = sd((four * var_p + var_q + four * cov) / sixteen);
    let err_b = sd((four * var_p + var_q - four * cov) / sixteen);
    let err_c = sd(var_q) / four;
    let eps = (four * a - T::one()) / T::lit(3.0);
    let concurrence = st_closed_form_concurrence(a, b, c).max(T::zero()).min(T::one());
    Ok(TomographyResult {
        raw_i: i_integral,
        raw_s: s_integral,
        normalization: n,
        p: Measured::new(p, sd(var_p)),
        q: Measured::new(q, sd(var_q)),
        a: Measured::new(a, err_a),
        b: Measured::new(b, err_b),
        c: Measured::new(c, err_c),
        effective_purity: Measured::new(eps, four * err_a / T::lit(3.0)),
        concurrence,
        eof: eof_from_concurrence(concurrence)?,
    })
}
