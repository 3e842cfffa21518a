//! Pulse-sequence elements and their application to a state.

use super::gradient::{crush, CrushMode};
use super::hamiltonian::{free_evolve, hamiltonian, pulse_generator, pulse_propagator};
use super::relax::decohere;
use crate::error::{invalid, Error, Result};
use crate::linalg::{cr, expm_hermitian, CMat};
use crate::scalar::Real;
use crate::spin::operator::{spin_op, Factor};
use crate::spin::{CouplingMode, DensityMatrix, SpinSystem};
use serde::{Deserialize, Serialize};

/// Spins addressed by a pulse.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum PulseTarget {
    #[default]
    All,
    /// Ideal spin-selective pulse.
    Qubit(usize),
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum MixingKind {
    Mlev16,
}

/// One step of a sequence. Angles in rad, durations in s, frequencies in Hz.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(tag = "type", rename_all = "snake_case", bound = "")]
pub enum SequenceElement<T: Real> {
    /// Rotation by `flip` about the transverse axis at angle `phase` from x.
    ///
    /// With `nutation_hz` set the pulse has finite length `flip / (2π ν_1)`
    /// and the system Hamiltonian acts during it.
    Pulse {
        flip: T,
        phase: T,
        #[serde(default)]
        target: PulseTarget,
        #[serde(default)]
        nutation_hz: Option<T>,
    },
    /// Free evolution under the system Hamiltonian.
    Delay { duration: T },
    /// Free evolution for `duration`, then coherence removal.
    GradientCrush {
        mode: CrushMode<T>,
        duration: T,
    },
    /// `exp(-i angle Σ s_q I_qz)` with per-qubit signs `s_q`.
    ZRotation { angle: T, signs: Vec<T> },
    /// Windowless mixing; `duration` is rounded to whole supercycles.
    MixingBlock {
        kind: MixingKind,
        duration: T,
        nutation_hz: T,
    },
    /// Relaxation over `duration` using the system T1 and T2.
    Decohere { duration: T },
}

/// Ordered list of sequence elements.
#[derive(Clone, Debug, Default, PartialEq, Serialize, Deserialize)]
#[serde(bound = "")]
pub struct PulseSequence<T: Real> {
    pub elements: Vec<SequenceElement<T>>,
}

impl<T: Real> PulseSequence<T> {
    pub fn new() -> Self {
        Self { elements: Vec::new() }
    }

    pub fn push(mut self, e: SequenceElement<T>) -> Self {
        self.elements.push(e);
        self
    }

    /// Hard pulse on all spins.
    pub fn pulse(self, flip: T, phase: T) -> Self {
        self.push(SequenceElement::Pulse { flip, phase, target: PulseTarget::All, nutation_hz: None })
    }

    /// Ideal selective pulse on one spin.
    pub fn pulse_on(self, qubit: usize, flip: T, phase: T) -> Self {
        self.push(SequenceElement::Pulse { flip, phase, target: PulseTarget::Qubit(qubit), nutation_hz: None })
    }

    pub fn delay(self, duration: T) -> Self {
        self.push(SequenceElement::Delay { duration })
    }

    pub fn crush(self, mode: CrushMode<T>, duration: T) -> Self {
        self.push(SequenceElement::GradientCrush { mode, duration })
    }

    pub fn z_rotation(self, angle: T, signs: Vec<T>) -> Self {
        self.push(SequenceElement::ZRotation { angle, signs })
    }

    pub fn decohere(self, duration: T) -> Self {
        self.push(SequenceElement::Decohere { duration })
    }

    pub fn extend(mut self, other: &PulseSequence<T>) -> Self {
        self.elements.extend(other.elements.iter().cloned());
        self
    }

    pub fn len(&self) -> usize {
        self.elements.len()
    }

    pub fn is_empty(&self) -> bool {
        self.elements.is_empty()
    }

    /// Copy with every flip angle scaled by `1 + flip_error`.
    pub fn perturbed(&self, flip_error: T) -> Self {
        let elements = self
            .elements
            .iter()
            .map(|e| match e {
                SequenceElement::Pulse { flip, phase, target, nutation_hz } => SequenceElement::Pulse {
                    flip: *flip * (T::one() + flip_error),
                    phase: *phase,
                    target: *target,
                    nutation_hz: *nutation_hz,
                },
                other => other.clone(),
            })
            .collect();
        Self { elements }
    }

    /// Total elapsed time in s.
    pub fn duration(&self) -> T {
        self.elements.iter().fold(T::zero(), |acc, e| {
            acc + match e {
                SequenceElement::Pulse { flip, nutation_hz: Some(nu), .. } => flip.abs() / (T::two_pi() * *nu),
                SequenceElement::Pulse { .. } | SequenceElement::ZRotation { .. } => T::zero(),
                SequenceElement::Delay { duration }
                | SequenceElement::GradientCrush { duration, .. }
                | SequenceElement::Decohere { duration } => *duration,
                SequenceElement::MixingBlock { duration, nutation_hz, .. } => {
                    T::from_count(mixing_cycles(*duration, *nutation_hz)) * super::composite::mlev16_cycle_time(*nutation_hz)
                }
            }
        })
    }

    /// Applies the sequence in time order.
    pub fn apply(&self, rho: &DensityMatrix<T>, sys: &SpinSystem<T>, mode: CouplingMode) -> Result<DensityMatrix<T>> {
        check_dims(rho, sys)?;
        let h = hamiltonian(sys, mode);
        let mut state = rho.clone();
        for e in &self.elements {
            state = match e {
                SequenceElement::GradientCrush { mode: cm, duration } => {
                    check_time(*duration)?;
                    crush(&free_evolve(&state, &h, *duration)?, cm)?
                }
                SequenceElement::Decohere { duration } => {
                    check_time(*duration)?;
                    decohere(&state, *duration, sys.t1(), sys.t2())?
                }
                unitary => state.evolve(&element_propagator(unitary, sys, &h)?),
            };
        }
        Ok(state)
    }

    /// Overall unitary; fails if the sequence contains non-unitary steps.
    pub fn propagator(&self, sys: &SpinSystem<T>, mode: CouplingMode) -> Result<CMat<T>> {
        self.propagator_with(sys, &hamiltonian(sys, mode))
    }
}

fn check_dims<T: Real>(rho: &DensityMatrix<T>, sys: &SpinSystem<T>) -> Result<()> {
    if rho.n_qubits() != sys.n_qubits() {
        return Err(invalid(format!(
            "state has {} qubits, system has {}",
            rho.n_qubits(),
            sys.n_qubits()
        )));
    }
    Ok(())
}

fn check_time<T: Real>(t: T) -> Result<()> {
    if !(t >= T::zero()) || !t.is_finite() {
        return Err(invalid(format!("duration {t} must be finite and non-negative")));
    }
    Ok(())
}

pub(crate) fn mixing_cycles<T: Real>(duration: T, nutation_hz: T) -> usize {
    let c = duration / super::composite::mlev16_cycle_time(nutation_hz);
    c.round().as_f64().max(1.0) as usize
}

fn element_propagator<T: Real>(e: &SequenceElement<T>, sys: &SpinSystem<T>, h: &CMat<T>) -> Result<CMat<T>> {
    let n = sys.n_qubits();
    match e {
        SequenceElement::Pulse { flip, phase, target, nutation_hz: None } => pulse_propagator(n, *flip, *phase, target),
        SequenceElement::Pulse { flip, phase, target, nutation_hz: Some(nu) } => {
            if !(*nu > T::zero()) {
                return Err(invalid("nutation frequency must be positive"));
            }
            let g = pulse_generator(n, *phase, target)?;
            let total = h + g * cr(T::two_pi() * *nu * flip.signum());
            expm_hermitian(&total, flip.abs() / (T::two_pi() * *nu))
        }
        SequenceElement::Delay { duration } => {
            check_time(*duration)?;
            expm_hermitian(h, *duration)
        }
        SequenceElement::ZRotation { angle, signs } => {
            if signs.len() != n {
                return Err(invalid(format!("z rotation needs {n} signs, got {}", signs.len())));
            }
            let d = crate::spin::dim(n);
            let g = signs
                .iter()
                .enumerate()
                .fold(CMat::<T>::zeros(d, d), |acc, (q, s)| acc + spin_op::<T>(n, q, Factor::Z) * cr(*s));
            expm_hermitian(&g, *angle)
        }
        SequenceElement::MixingBlock { kind: MixingKind::Mlev16, duration, nutation_hz } => {
            check_time(*duration)?;
            let cycle = super::composite::mlev16(sys, super::composite::mlev16_cycle_time(*nutation_hz), *nutation_hz)?;
            let uc = cycle.propagator_with(sys, h)?;
            let k = mixing_cycles(*duration, *nutation_hz);
            let d = crate::spin::dim(n);
            Ok((0..k).fold(CMat::identity(d, d), |acc, _| &uc * acc))
        }
        SequenceElement::GradientCrush { .. } | SequenceElement::Decohere { .. } => {
            Err(Error::Unsupported("sequence contains non-unitary elements".into()))
        }
    }
}

impl<T: Real> PulseSequence<T> {
    fn propagator_with(&self, sys: &SpinSystem<T>, h: &CMat<T>) -> Result<CMat<T>> {
        let d = crate::spin::dim(sys.n_qubits());
        let mut u = CMat::<T>::identity(d, d);
        for e in &self.elements {
            u = element_propagator(e, sys, h)? * u;
        }
        Ok(u)
    }
}
