//! PASADENA variants and ALTADENA: state before detection, default
//! detection pulses and closed-form enhancements.

use super::signal::{signal, thermal_reference, SignalVector};
use crate::dynamics::composite::{jump_return, mlev16, mlev16_cycle_time};
use crate::dynamics::{crush, hamiltonian, CrushMode, PulseSequence, PulseTarget};
use crate::error::{invalid, Result};
use crate::linalg::{conjugate, cr, expm_hermitian, CMat};
use crate::scalar::Real;
use crate::spin::{CouplingMode, DensityMatrix, SpinSystem};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

/// How creation instants are averaged for incoherent PASADENA.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
#[serde(tag = "method", rename_all = "snake_case")]
pub enum Averaging {
    /// Limit of complete zero-quantum dephasing.
    ClosedForm,
    /// Midpoint grid of creation instants.
    Grid { points: usize },
    /// Uniformly random creation instants from a seeded generator.
    MonteCarlo { samples: usize, seed: u64 },
}

impl Default for Averaging {
    fn default() -> Self {
        Averaging::Grid { points: 2048 }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case", bound = "")]
pub enum PhipVariant<T: Real> {
    /// Detection immediately after hydrogenation.
    Instantaneous,
    /// Free evolution for `tau` s before detection.
    Delayed { tau: T },
    /// Hydrogenation spread uniformly over `tau_h` s.
    Incoherent {
        tau_h: T,
        #[serde(default)]
        averaging: Averaging,
    },
    /// Hydrogenation spread over `tau_h` s under MLEV-16 mixing, with an
    /// optional decay toward the mixed state at rate `1/t1rho`.
    Isotropic {
        tau_h: T,
        nutation_hz: T,
        #[serde(default)]
        t1rho: Option<T>,
    },
    /// Adiabatic transfer to the Zeeman eigenbasis outside the magnet.
    Altadena,
}

/// Detection step applied before the signal is read.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case", bound = "")]
pub enum Detection<T: Real> {
    Pulse {
        flip: T,
        phase: T,
        #[serde(default)]
        target: PulseTarget,
    },
    /// Hard-pulse emulation of `90 I_y`.
    JumpReturn,
}

impl<T: Real> Detection<T> {
    pub fn hard(flip_deg: f64, phase_deg: f64) -> Self {
        Detection::Pulse {
            flip: T::lit(flip_deg.to_radians()),
            phase: T::lit(phase_deg.to_radians()),
            target: PulseTarget::All,
        }
    }

    /// Ideal `90 I_y` on the first spin.
    pub fn selective_90iy() -> Self {
        Detection::Pulse { flip: T::FRAC_PI_2(), phase: T::FRAC_PI_2(), target: PulseTarget::Qubit(0) }
    }

    pub fn sequence(&self, sys: &SpinSystem<T>) -> Result<PulseSequence<T>> {
        match self {
            Detection::Pulse { flip, phase, target } => Ok(PulseSequence::new().push(
                crate::dynamics::SequenceElement::Pulse { flip: *flip, phase: *phase, target: *target, nutation_hz: None },
            )),
            Detection::JumpReturn => jump_return(sys),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(bound = "")]
pub struct PhipExperiment<T: Real> {
    pub variant: PhipVariant<T>,
    pub detection: Detection<T>,
    pub singlet_fraction: T,
}

impl<T: Real> PhipExperiment<T> {
    /// Variant with its customary detection pulse.
    pub fn new(variant: PhipVariant<T>, singlet_fraction: T) -> Self {
        let detection = match &variant {
            PhipVariant::Altadena => Detection::hard(90.0, 90.0),
            PhipVariant::Instantaneous | PhipVariant::Isotropic { .. } => Detection::selective_90iy(),
            PhipVariant::Delayed { .. } => Detection::hard(90.0, 0.0),
            PhipVariant::Incoherent { .. } => Detection::hard(45.0, 90.0),
        };
        Self { variant, detection, singlet_fraction }
    }

    pub fn with_detection(mut self, detection: Detection<T>) -> Self {
        self.detection = detection;
        self
    }

    /// Runs the experiment and reads the signal vector.
    pub fn signal(&self, sys: &SpinSystem<T>) -> Result<SignalVector<T>> {
        let rho = run_phip(sys, self)?;
        signal(&rho, &self.detection.sequence(sys)?, sys)
    }
}

/// State just before detection.
pub fn run_phip<T: Real>(sys: &SpinSystem<T>, exp: &PhipExperiment<T>) -> Result<DensityMatrix<T>> {
    if sys.n_qubits() != 2 {
        return Err(invalid("PHIP experiments need a two-spin system"));
    }
    let rho_f = super::phip_state(exp.singlet_fraction)?;
    match &exp.variant {
        PhipVariant::Instantaneous => Ok(rho_f),
        PhipVariant::Delayed { tau } => {
            check_time(*tau)?;
            if *tau == T::zero() {
                return Ok(rho_f);
            }
            let h = hamiltonian(sys, CouplingMode::Weak);
            Ok(rho_f.evolve(&expm_hermitian(&h, *tau)?))
        }
        PhipVariant::Incoherent { tau_h, averaging } => incoherent(sys, &rho_f, *tau_h, averaging),
        PhipVariant::Isotropic { tau_h, nutation_hz, t1rho } => isotropic(sys, &rho_f, *tau_h, *nutation_hz, *t1rho),
        PhipVariant::Altadena => altadena(exp.singlet_fraction),
    }
}

fn check_time<T: Real>(t: T) -> Result<()> {
    if !(t >= T::zero()) || !t.is_finite() {
        return Err(invalid(format!("time {t} must be finite and non-negative")));
    }
    Ok(())
}

fn average_over<T: Real>(rho: &DensityMatrix<T>, h: &CMat<T>, ages: impl Iterator<Item = T>) -> Result<DensityMatrix<T>> {
    let d = rho.dim();
    let mut acc = CMat::<T>::zeros(d, d);
    let mut count = 0usize;
    for age in ages {
        acc += conjugate(&expm_hermitian(h, age)?, rho.matrix());
        count += 1;
    }
    if count == 0 {
        return Err(invalid("averaging needs at least one sample"));
    }
    Ok(DensityMatrix::from_trusted(acc * cr(T::one() / T::from_count(count))))
}

fn incoherent<T: Real>(sys: &SpinSystem<T>, rho_f: &DensityMatrix<T>, tau_h: T, averaging: &Averaging) -> Result<DensityMatrix<T>> {
    check_time(tau_h)?;
    let h = hamiltonian(sys, CouplingMode::Weak);
    match *averaging {
        Averaging::ClosedForm => crush(rho_f, &CrushMode::Heteronuclear),
        Averaging::Grid { points } => {
            let n = T::from_count(points);
            let half = T::lit(0.5);
            average_over(rho_f, &h, (0..points).map(|k| tau_h * (T::from_count(k) + half) / n))
        }
        Averaging::MonteCarlo { samples, seed } => {
            let mut rng = ChaCha8Rng::seed_from_u64(seed);
            let ages: Vec<T> = (0..samples).map(|_| tau_h * T::lit(rng.random::<f64>())).collect();
            average_over(rho_f, &h, ages.into_iter())
        }
    }
}

fn isotropic<T: Real>(
    sys: &SpinSystem<T>,
    rho_f: &DensityMatrix<T>,
    tau_h: T,
    nutation_hz: T,
    t1rho: Option<T>,
) -> Result<DensityMatrix<T>> {
    check_time(tau_h)?;
    let cycle = mlev16_cycle_time(nutation_hz);
    let uc = mlev16(sys, cycle, nutation_hz)?.propagator(sys, CouplingMode::Weak)?;
    let cycles = (tau_h / cycle).round().as_f64().max(1.0) as usize;
    let mixed = DensityMatrix::<T>::maximally_mixed(2)?;
    let d = rho_f.dim();
    let mut acc = CMat::<T>::zeros(d, d);
    let mut state = rho_f.matrix().clone();
    // molecules formed at the start of cycle j have mixed for cycles - j cycles
    for m in 1..=cycles {
        state = conjugate(&uc, &state);
        let keep = match t1rho {
            Some(t) if t > T::zero() => (-T::from_count(m) * cycle / t).exp(),
            Some(_) => return Err(invalid("T1rho must be positive")),
            None => T::one(),
        };
        acc += &state * cr(keep) + mixed.matrix() * cr(T::one() - keep);
    }
    Ok(DensityMatrix::from_trusted(acc * cr(T::one() / T::from_count(cycles))))
}

/// Singlet to |αβ⟩, T_0 to |βα⟩ and T_±1 to |αα⟩, |ββ⟩.
fn altadena<T: Real>(f: T) -> Result<DensityMatrix<T>> {
    if !(f >= T::zero() && f <= T::one()) {
        return Err(invalid("singlet fraction must lie in [0, 1]"));
    }
    let t = (T::one() - f) / T::lit(3.0);
    let diag = [t, f, t, t];
    let m = CMat::from_fn(4, 4, |r, c| if r == c { cr(diag[r]) } else { cr(T::zero()) });
    DensityMatrix::new(m)
}

/// Closed-form enhancement over the thermal signal for pure para-hydrogen.
pub fn enhancement<T: Real>(variant: &PhipVariant<T>, boltzmann: T, sys: &SpinSystem<T>) -> Result<T> {
    if !(boltzmann > T::zero()) {
        return Err(invalid("Boltzmann factor must be positive"));
    }
    let two_over_b = T::lit(2.0) / boltzmann;
    Ok(match variant {
        PhipVariant::Altadena | PhipVariant::Instantaneous | PhipVariant::Isotropic { .. } => two_over_b,
        PhipVariant::Incoherent { .. } => T::one() / boltzmann,
        PhipVariant::Delayed { tau } => two_over_b * (T::two_pi() * sys.delta_hz()? * *tau).sin().abs(),
    })
}

/// Enhancement measured from simulated signals: largest line of the PHIP
/// signal over the thermal-reference line `B/8`.
pub fn enhancement_numeric<T: Real>(exp: &PhipExperiment<T>, sys: &SpinSystem<T>) -> Result<T> {
    let sg = exp.signal(sys)?;
    let b = sys.boltzmann();
    let reference = signal(
        &thermal_reference(b)?,
        &PulseSequence::new().pulse(T::FRAC_PI_2(), T::FRAC_PI_2()),
        sys,
    )?;
    Ok(sg.max_abs() / reference.max_abs())
}
