//! Rotational partition sums for para- and ortho-hydrogen.

use crate::error::{invalid, Result};
use crate::scalar::Real;
use serde::{Deserialize, Serialize};

/// Rotational temperature (K) and series truncation.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
#[serde(bound = "")]
pub struct RotorParams<T: Real> {
    pub theta_r: T,
    pub j_max: usize,
}

impl<T: Real> Default for RotorParams<T> {
    fn default() -> Self {
        Self { theta_r: T::lit(85.0), j_max: 10 }
    }
}

/// Equilibrium para fraction at temperature `temp_k`.
///
/// Even rotational levels belong to para, odd levels to ortho with a
/// threefold nuclear-spin degeneracy.
pub fn para_fraction<T: Real>(temp_k: T, rotor: &RotorParams<T>) -> Result<T> {
    if !(temp_k > T::zero()) || !temp_k.is_finite() {
        return Err(invalid(format!("temperature {temp_k} K must be positive")));
    }
    if !(rotor.theta_r > T::zero()) {
        return Err(invalid("rotational temperature must be positive"));
    }
    if rotor.j_max < 5 {
        return Err(invalid(format!("j_max = {} is below the minimum of 5", rotor.j_max)));
    }
    let (mut even, mut odd) = (T::zero(), T::zero());
    for j in 0..=rotor.j_max {
        let jj = T::from_count(j);
        let w = (T::lit(2.0) * jj + T::one()) * (-jj * (jj + T::one()) * rotor.theta_r / temp_k).exp();
        if j % 2 == 0 {
            even += w;
        } else {
            odd += w;
        }
    }
    Ok(even / (even + T::lit(3.0) * odd))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn limits() {
        let r = RotorParams::<f64>::default();
        assert!((para_fraction(1.0, &r).unwrap() - 1.0).abs() < 1e-12);
        let wide = RotorParams::<f64> { theta_r: 85.0, j_max: 2000 };
        assert!((para_fraction(1e6, &wide).unwrap() - 0.25).abs() < 1e-3);
        assert!(para_fraction(0.0, &r).is_err());
        assert!(para_fraction(-5.0, &r).is_err());
    }

    #[test]
    fn decreasing_in_temperature() {
        let r = RotorParams::<f64>::default();
        let mut prev = 1.0_f64;
        for t in (5..400).step_by(5) {
            let f = para_fraction(t as f64, &r).unwrap();
            assert!(f <= prev + 1e-15);
            prev = f;
        }
    }
}
