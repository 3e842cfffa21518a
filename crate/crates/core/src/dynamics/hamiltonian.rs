//! System and RF Hamiltonians (rad/s) and their propagators.

use super::sequence::PulseTarget;
use crate::error::{invalid, Result};
use crate::linalg::{cr, expm_hermitian, CMat};
use crate::scalar::Real;
use crate::spin::operator::{spin_op, Factor};
use crate::spin::{CouplingMode, DensityMatrix, SpinSystem};

/// `Σ 2π Ω_i I_iz + Σ_{i<j} π J_ij 2 I_i·I_j` (full or z-only product).
pub fn hamiltonian<T: Real>(sys: &SpinSystem<T>, mode: CouplingMode) -> CMat<T> {
    let n = sys.n_qubits();
    let d = crate::spin::dim(n);
    let two_pi = T::two_pi();
    let mut h = CMat::<T>::zeros(d, d);
    for (q, &off) in sys.offsets_hz().iter().enumerate() {
        h += spin_op::<T>(n, q, Factor::Z) * cr(two_pi * off);
    }
    let axes: &[Factor] = match mode {
        CouplingMode::Weak => &[Factor::Z],
        CouplingMode::Strong => &[Factor::X, Factor::Y, Factor::Z],
    };
    for i in 0..n {
        for j in (i + 1)..n {
            let jij = sys.coupling_hz(i, j);
            if jij == T::zero() {
                continue;
            }
            for &a in axes {
                let prod = spin_op::<T>(n, i, a) * spin_op::<T>(n, j, a);
                h += prod * cr(T::pi() * jij * T::lit(2.0));
            }
        }
    }
    h
}

/// Weak-coupling two-spin Hamiltonian split as `(H_c, H_nc)`.
///
/// `H_c = π(Ω_I + Ω_S)(I_z + S_z) + π J 2 I_z S_z` commutes with the singlet;
/// `H_nc = π(Ω_I - Ω_S)(I_z - S_z)` does not. The two parts commute.
pub fn split_hamiltonian<T: Real>(sys: &SpinSystem<T>) -> Result<(CMat<T>, CMat<T>)> {
    if sys.n_qubits() != 2 {
        return Err(invalid("Hamiltonian split is defined for two spins"));
    }
    let (oi, os) = (sys.offsets_hz()[0], sys.offsets_hz()[1]);
    let iz = spin_op::<T>(2, 0, Factor::Z);
    let sz = spin_op::<T>(2, 1, Factor::Z);
    let pi = T::pi();
    let hc = (&iz + &sz) * cr(pi * (oi + os)) + (&iz * &sz) * cr(pi * sys.coupling_hz(0, 1) * T::lit(2.0));
    let hnc = (iz - sz) * cr(pi * (oi - os));
    Ok((hc, hnc))
}

/// `Σ_targets (cos φ I_x + sin φ I_y)`, the generator of a pulse of phase `φ`.
pub fn pulse_generator<T: Real>(n: usize, phase: T, target: &PulseTarget) -> Result<CMat<T>> {
    let d = crate::spin::dim(n);
    let qubits: Vec<usize> = match target {
        PulseTarget::All => (0..n).collect(),
        PulseTarget::Qubit(q) if *q < n => vec![*q],
        PulseTarget::Qubit(q) => return Err(invalid(format!("pulse target {q} out of range"))),
    };
    let (c, s) = (phase.cos(), phase.sin());
    let mut g = CMat::<T>::zeros(d, d);
    for q in qubits {
        g += spin_op::<T>(n, q, Factor::X) * cr(c) + spin_op::<T>(n, q, Factor::Y) * cr(s);
    }
    Ok(g)
}

/// RF Hamiltonian `2π ν_1 Σ (cos φ I_x + sin φ I_y)`.
pub fn rf_hamiltonian<T: Real>(n: usize, nutation_hz: T, phase: T, target: &PulseTarget) -> Result<CMat<T>> {
    Ok(pulse_generator(n, phase, target)? * cr(T::two_pi() * nutation_hz))
}

/// Ideal pulse `exp(-i θ Σ (cos φ I_x + sin φ I_y))`.
pub fn pulse_propagator<T: Real>(n: usize, flip: T, phase: T, target: &PulseTarget) -> Result<CMat<T>> {
    expm_hermitian(&pulse_generator(n, phase, target)?, flip)
}

/// `exp(-i H t) ρ exp(i H t)`.
pub fn free_evolve<T: Real>(rho: &DensityMatrix<T>, h: &CMat<T>, t: T) -> Result<DensityMatrix<T>> {
    if h.nrows() != rho.dim() {
        return Err(invalid("Hamiltonian and state dimensions differ"));
    }
    Ok(rho.evolve(&expm_hermitian(h, t)?))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::linalg::{commutator, conjugate, max_abs_diff, unitarity_defect};
    use crate::spin::operator::two;

    #[test]
    fn y_pulse_takes_z_to_x() {
        let u = pulse_propagator::<f64>(2, std::f64::consts::FRAC_PI_2, std::f64::consts::FRAC_PI_2, &PulseTarget::All).unwrap();
        let out = conjugate(&u, &(two::iz::<f64>() + two::sz::<f64>()));
        assert!(max_abs_diff(&out, &(two::ix::<f64>() + two::sx::<f64>())) < 1e-14);
    }

    #[test]
    fn x_pulse_rotations() {
        let u = pulse_propagator::<f64>(2, std::f64::consts::FRAC_PI_2, 0.0, &PulseTarget::All).unwrap();
        assert!(max_abs_diff(&conjugate(&u, &two::iy::<f64>()), &two::iz::<f64>()) < 1e-14);
        assert!(max_abs_diff(&conjugate(&u, &two::iz::<f64>()), &(-two::iy::<f64>())) < 1e-14);
    }

    #[test]
    fn split_parts_commute_and_sum() {
        let sys = SpinSystem::<f64>::dppe();
        let (hc, hnc) = split_hamiltonian(&sys).unwrap();
        assert!(crate::linalg::max_abs(&commutator(&hc, &hnc)) < 1e-9);
        let h = hamiltonian(&sys, CouplingMode::Weak);
        assert!(max_abs_diff(&(hc + hnc), &h) < 1e-9);
    }

    #[test]
    fn singlet_commutes_with_strong_coupling_and_hard_pulses() {
        let sys = SpinSystem::<f64>::two_spin(0.0, 7.0).unwrap();
        let s0 = DensityMatrix::<f64>::singlet();
        let h = hamiltonian(&sys, CouplingMode::Strong);
        assert!(crate::linalg::max_abs(&commutator(&h, s0.matrix())) < 1e-12);
        let g = pulse_generator::<f64>(2, 0.3, &PulseTarget::All).unwrap();
        assert!(crate::linalg::max_abs(&commutator(&g, s0.matrix())) < 1e-15);
    }

    #[test]
    fn propagators_are_unitary() {
        let sys = SpinSystem::<f64>::dppe();
        let h = hamiltonian(&sys, CouplingMode::Strong);
        let u = expm_hermitian(&h, 0.0123).unwrap();
        assert!(unitarity_defect(&u) < 1e-12);
    }

    #[test]
    fn selective_pulse_leaves_other_spin() {
        let u = pulse_propagator::<f64>(2, std::f64::consts::FRAC_PI_2, std::f64::consts::FRAC_PI_2, &PulseTarget::Qubit(0)).unwrap();
        let out = conjugate(&u, &(two::iz::<f64>() + two::sz::<f64>()));
        assert!(max_abs_diff(&out, &(two::ix::<f64>() + two::sz::<f64>())) < 1e-14);
    }
}
