//! Pulsed-field-gradient models.

use super::hamiltonian::{free_evolve, hamiltonian};
use crate::error::{invalid, Result};
use crate::linalg::{cr, phase, CMat};
use crate::scalar::Real;
use crate::spin::coherence::twice_m;
use crate::spin::{coherence_filter, CouplingMode, DensityMatrix, SpinSystem};
use serde::{Deserialize, Serialize};

/// How a gradient removes coherences.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case", bound = "")]
pub enum CrushMode<T: Real> {
    /// Keeps zero-quantum coherences and populations.
    Homonuclear,
    /// Keeps populations only.
    Heteronuclear,
    /// Explicit average over sample slices with a linear phase profile.
    Sliced { n_slices: usize, phase_span: T },
}

/// Ideal or sliced coherence removal.
pub fn crush<T: Real>(rho: &DensityMatrix<T>, mode: &CrushMode<T>) -> Result<DensityMatrix<T>> {
    match mode {
        CrushMode::Homonuclear => Ok(DensityMatrix::from_trusted(coherence_filter(rho.matrix(), |p| p == 0))),
        CrushMode::Heteronuclear => {
            let d = rho.dim();
            let m = CMat::from_fn(d, d, |r, c| if r == c { rho.matrix()[(r, r)] } else { cr(T::zero()) });
            Ok(DensityMatrix::from_trusted(m))
        }
        CrushMode::Sliced { n_slices, phase_span } => crush_sliced(rho, *n_slices, *phase_span),
    }
}

/// Averages `U(z) ρ U(z)†` with `U(z) = exp(-i φ(z) Σ I_z)` over slices.
///
/// Slice phases sit at the midpoints of `n_slices` equal cells spanning
/// `[-phase_span/2, phase_span/2]`.
pub fn crush_sliced<T: Real>(rho: &DensityMatrix<T>, n_slices: usize, phase_span: T) -> Result<DensityMatrix<T>> {
    if n_slices < 2 {
        return Err(invalid("slice model needs at least two slices"));
    }
    if !phase_span.is_finite() {
        return Err(invalid("phase span must be finite"));
    }
    let n = rho.n_qubits();
    let d = rho.dim();
    let ns = T::from_count(n_slices);
    let half = T::lit(0.5);
    let mut acc = CMat::<T>::zeros(d, d);
    for k in 0..n_slices {
        let phi = phase_span * ((T::from_count(k) + half) / ns - half);
        let u = CMat::from_fn(d, d, |r, c| {
            if r == c {
                phase(-phi * T::lit(f64::from(twice_m(n, r)) / 2.0))
            } else {
                cr(T::zero())
            }
        });
        acc += &u * rho.matrix() * u.adjoint();
    }
    Ok(DensityMatrix::from_trusted(acc * cr(T::one() / ns)))
}

/// Free evolution for `t_g` under the system Hamiltonian, then an ideal crush.
pub fn timed_gradient<T: Real>(
    rho: &DensityMatrix<T>,
    sys: &SpinSystem<T>,
    coupling: CouplingMode,
    mode: &CrushMode<T>,
    t_g: T,
) -> Result<DensityMatrix<T>> {
    if !(t_g >= T::zero()) {
        return Err(invalid("gradient duration must be non-negative"));
    }
    let h = hamiltonian(sys, coupling);
    crush(&free_evolve(rho, &h, t_g)?, mode)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::linalg::max_abs_diff;
    use crate::spin::operator::two;

    fn dev(m: CMat<f64>) -> DensityMatrix<f64> {
        DensityMatrix::from_deviation(&(m * cr(0.05))).unwrap()
    }

    #[test]
    fn homonuclear_keeps_zq_and_populations() {
        let keep = two::zq_x::<f64>() + two::izsz::<f64>() + two::iz::<f64>();
        let rho = dev(keep.clone() + two::ix::<f64>() + two::dq_x::<f64>());
        let out = crush(&rho, &CrushMode::Homonuclear).unwrap();
        assert!(max_abs_diff(&out.deviation(), &(keep * cr(0.05))) < 1e-15);
    }

    #[test]
    fn heteronuclear_keeps_populations_only() {
        let rho = DensityMatrix::<f64>::singlet();
        let out = crush(&rho, &CrushMode::Heteronuclear).unwrap();
        let expect = dev(two::izsz::<f64>() * cr(-20.0));
        assert!(max_abs_diff(out.matrix(), expect.matrix()) < 1e-15);
    }

    #[test]
    fn sliced_converges_to_ideal() {
        let rho = dev(two::ix::<f64>() + two::dq_y::<f64>() + two::zq_x::<f64>() + two::sz::<f64>());
        let ideal = crush(&rho, &CrushMode::Homonuclear).unwrap();
        let sliced = crush_sliced(&rho, 512, 64.0 * std::f64::consts::PI).unwrap();
        assert!(sliced.max_diff(&ideal) < 1e-6);
    }

    #[test]
    fn coarse_slicing_partially_dephases() {
        let rho = dev(two::ix::<f64>());
        let out = crush_sliced(&rho, 2, std::f64::consts::PI).unwrap();
        let amp = out.deviation()[(0, 2)].re / rho.deviation()[(0, 2)].re;
        assert!((amp - std::f64::consts::FRAC_1_SQRT_2).abs() < 1e-14);
    }

    #[test]
    fn too_few_slices_rejected() {
        let rho = DensityMatrix::<f64>::singlet();
        assert!(crush_sliced(&rho, 1, 1.0).is_err());
    }
}
