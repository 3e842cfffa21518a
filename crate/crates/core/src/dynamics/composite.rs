//! Composite sequences: jump-and-return selective pulse, MLEV-16 mixing and
//! spin echoes.

use super::sequence::{mixing_cycles, PulseSequence, PulseTarget, SequenceElement};
use crate::error::{invalid, Result};
use crate::scalar::Real;
use crate::spin::SpinSystem;

/// Inter-pulse delay `1/(4δ)` for the jump-and-return selective pulse.
pub fn jump_return_delay<T: Real>(sys: &SpinSystem<T>) -> Result<T> {
    let delta = sys.delta_hz()?;
    if !(delta > T::zero()) {
        return Err(invalid("jump-and-return needs a non-zero shift difference"));
    }
    Ok(T::one() / (T::lit(4.0) * delta))
}

/// `90_45 · delay(1/(4δ)) · 90_-x`, a `90 I_y` pulse on the spin at `+δ/2`
/// for states that commute with collective z rotations.
///
/// The transmitter must sit midway between the two resonances. The scalar
/// coupling acts during the delay, so the match is exact only for `J = 0`.
pub fn jump_return<T: Real>(sys: &SpinSystem<T>) -> Result<PulseSequence<T>> {
    check_centred(sys)?;
    let td = jump_return_delay(sys)?;
    let ninety = T::FRAC_PI_2();
    Ok(PulseSequence::new()
        .pulse(ninety, T::FRAC_PI_4())
        .delay(td)
        .pulse(ninety, T::pi()))
}

/// State-independent form with the leading collective `45_z`.
pub fn jump_return_full<T: Real>(sys: &SpinSystem<T>) -> Result<PulseSequence<T>> {
    let n = sys.n_qubits();
    let head = PulseSequence::new().z_rotation(T::FRAC_PI_4(), vec![T::one(); n]);
    Ok(head.extend(&jump_return(sys)?))
}

pub(crate) fn check_centred<T: Real>(sys: &SpinSystem<T>) -> Result<()> {
    if sys.n_qubits() != 2 {
        return Err(invalid("jump-and-return is defined for two spins"));
    }
    let o = sys.offsets_hz();
    let tol = T::lit(1e-9) * (o[0].abs() + o[1].abs() + T::one());
    if (o[0] + o[1]).abs() > tol || o[0] <= o[1] {
        return Err(invalid("jump-and-return needs offsets +δ/2 and -δ/2 about the transmitter"));
    }
    Ok(())
}

/// Length of one MLEV-16 supercycle, `16 / ν_1`.
pub fn mlev16_cycle_time<T: Real>(nutation_hz: T) -> T {
    T::lit(16.0) / nutation_hz
}

/// Windowless MLEV-16 built from finite `90_x 180_y 90_x` composites.
///
/// `duration` is rounded to a whole number of supercycles (at least one).
pub fn mlev16<T: Real>(sys: &SpinSystem<T>, duration: T, nutation_hz: T) -> Result<PulseSequence<T>> {
    if !(nutation_hz > T::zero()) || !nutation_hz.is_finite() {
        return Err(invalid("nutation frequency must be positive"));
    }
    if !(duration > T::zero()) {
        return Err(invalid("mixing duration must be positive"));
    }
    let _ = sys.n_qubits();
    let cycles = mixing_cycles(duration, nutation_hz);
    // true marks R, false marks the phase-inverted R̄
    const PATTERN: [bool; 16] = [
        true, true, false, false, false, true, true, false, false, false, true, true, true, false, false, true,
    ];
    let half = T::FRAC_PI_2();
    let mut seq = PulseSequence::new();
    for _ in 0..cycles {
        for &r in &PATTERN {
            let shift = if r { T::zero() } else { T::pi() };
            for (flip, phase) in [(half, T::zero()), (T::pi(), half), (half, T::zero())] {
                seq = seq.push(SequenceElement::Pulse {
                    flip,
                    phase: phase + shift,
                    target: PulseTarget::All,
                    nutation_hz: Some(nutation_hz),
                });
            }
        }
    }
    Ok(seq)
}

/// `τ/2 · 180_x · τ/2`.
pub fn spin_echo<T: Real>(tau: T) -> PulseSequence<T> {
    let half = tau / T::lit(2.0);
    PulseSequence::new().delay(half).pulse(T::pi(), T::zero()).delay(half)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::dynamics::hamiltonian::pulse_propagator;
    use crate::linalg::{conjugate, cr, max_abs_diff};
    use crate::spin::operator::two;
    use crate::spin::{CouplingMode, DensityMatrix};
    use std::f64::consts::FRAC_PI_2;

    #[test]
    fn delay_for_dppe() {
        let td = jump_return_delay(&SpinSystem::<f64>::dppe()).unwrap();
        assert!((td - 508.13e-6).abs() < 0.01e-6);
    }

    #[test]
    fn jump_return_equals_selective_pulse_without_coupling() {
        let sys = SpinSystem::<f64>::two_spin(492.0, 0.0).unwrap();
        let seq = jump_return(&sys).unwrap();
        let sel = pulse_propagator::<f64>(2, FRAC_PI_2, FRAC_PI_2, &PulseTarget::Qubit(0)).unwrap();
        for (l, m) in [(0.3, -0.2), (-1.0, -1.0), (0.5, 0.0)] {
            let dev = (two::zq_x::<f64>() * cr(l) + two::izsz::<f64>() * cr(m)) * cr(0.1);
            let rho = DensityMatrix::from_deviation(&dev).unwrap();
            let a = seq.apply(&rho, &sys, CouplingMode::Weak).unwrap();
            let b = conjugate(&sel, rho.matrix());
            assert!(max_abs_diff(a.matrix(), &b) < 1e-10);
        }
    }

    #[test]
    fn full_form_is_state_independent() {
        let sys = SpinSystem::<f64>::two_spin(160.0, 0.0).unwrap();
        let u = jump_return_full(&sys).unwrap().propagator(&sys, CouplingMode::Weak).unwrap();
        let sel = pulse_propagator::<f64>(2, FRAC_PI_2, FRAC_PI_2, &PulseTarget::Qubit(0)).unwrap();
        for op in [two::iz::<f64>(), two::sz::<f64>(), two::ix::<f64>(), two::sy::<f64>()] {
            assert!(max_abs_diff(&conjugate(&u, &op), &conjugate(&sel, &op)) < 1e-10);
        }
    }

    #[test]
    fn jump_return_requires_centred_transmitter() {
        let j = nalgebra::DMatrix::from_row_slice(2, 2, &[0.0, 4.6, 4.6, 0.0]);
        let sys = SpinSystem::new(vec![300.0, -100.0], j, None, None, 1e-5).unwrap();
        assert!(jump_return(&sys).is_err());
    }

    #[test]
    fn mlev16_preserves_singlet_on_resonance() {
        let sys = SpinSystem::<f64>::two_spin(0.0, 4.6).unwrap();
        let s0 = DensityMatrix::<f64>::singlet();
        let seq = mlev16(&sys, 2.0 * mlev16_cycle_time(10e3), 10e3).unwrap();
        assert_eq!(seq.len(), 2 * 48);
        let out = seq.apply(&s0, &sys, CouplingMode::Weak).unwrap();
        assert!(out.max_diff(&s0) < 1e-12);
    }

    #[test]
    fn spin_echo_refocuses_shift() {
        let sys = SpinSystem::<f64>::two_spin(492.0, 0.0).unwrap();
        let rho = DensityMatrix::from_deviation(&(two::ix::<f64>() * cr(0.1))).unwrap();
        let out = spin_echo(1.7e-3).apply(&rho, &sys, CouplingMode::Weak).unwrap();
        assert!(max_abs_diff(&out.deviation(), &(two::ix::<f64>() * cr(0.1))) < 1e-12);
    }
}
