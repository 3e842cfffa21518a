//! End-to-end chain from a prepared two-spin state to tomography:
//! filtration, selective detection, synthesis, transform, baseline,
//! J-matching, J-doubling, integration and inversion.

use super::baseline::{baseline_correct, BaselineRegions};
use super::filtration::partial_twirl;
use super::integrate::{integrate_peaks, Measured};
use super::jproc::{j_double, j_match, JEstimate, JGrid, Multiplet};
use super::spectrum::{line_frequencies, sigma_for_snr, synthesize_fid, transform, Fid, Spectrum};
use super::tomography::{tomography, Calibration, TomographyResult};
use crate::dynamics::{deg, jump_return, PulseSequence};
use crate::error::{invalid, Result};
use crate::phip::{signal, thermal_reference, SignalVector};
use crate::scalar::Real;
use crate::spin::{DensityMatrix, SpinSystem};
use nalgebra::Complex;
use serde::{Deserialize, Serialize};

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(bound = "", default, deny_unknown_fields)]
pub struct PipelineConfig<T: Real> {
    pub n_points: usize,
    pub sweep_hz: T,
    /// Line decay time; the system's `T2` when absent.
    pub line_t2: Option<T>,
    pub zero_fill: usize,
    pub baseline_order: usize,
    pub baseline: BaselineRegions<T>,
    pub j_grid: JGrid<T>,
    /// Full width of the band around the `I` multiplet used for J-matching.
    pub jmatch_band_hz: T,
    pub doublings: usize,
    /// Half-width of each integration window; half the final splitting when
    /// absent.
    pub window_hz: Option<T>,
    /// Peak-height signal-to-noise of the largest line; noiseless when absent.
    pub snr: Option<T>,
    pub seed: u64,
    /// Noise-only replicas used to propagate the measured noise level into
    /// the antiphase integrals; zero keeps the baseline block estimate.
    pub noise_trials: usize,
}

impl<T: Real> Default for PipelineConfig<T> {
    fn default() -> Self {
        Self {
            n_points: 8192,
            sweep_hz: T::lit(1000.0),
            line_t2: None,
            zero_fill: 2,
            baseline_order: 2,
            baseline: BaselineRegions::default(),
            j_grid: JGrid { min_hz: T::zero(), max_hz: T::lit(10.0), steps: 201 },
            jmatch_band_hz: T::lit(60.0),
            doublings: 4,
            window_hz: None,
            snr: None,
            seed: 0,
            noise_trials: 64,
        }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(bound = "")]
pub struct PipelineOutput<T: Real> {
    pub signal: SignalVector<T>,
    pub spectrum: Spectrum<T>,
    pub doubled: Spectrum<T>,
    pub j: JEstimate<T>,
    pub thermal_integral: Measured<T>,
    pub result: TomographyResult<T>,
}

/// Signal of a state after the partial twirl and a jump-and-return read
/// pulse on the `I` spin: ideally `¼{q, −q, −p, p}`.
pub fn filtered_signal<T: Real>(rho: &DensityMatrix<T>, sys: &SpinSystem<T>) -> Result<SignalVector<T>> {
    signal(&partial_twirl(rho, sys)?, &jump_return(sys)?, sys)
}

/// Antiphase integrals `(I, S)` of the two multiplets at splitting `split`:
/// `I = (−I⁺S_α + I⁺S_β)/2`, `S = (I_αS⁺ − I_βS⁺)/2`.
pub fn antiphase_integrals<T: Real>(
    spec: &Spectrum<T>,
    sys: &SpinSystem<T>,
    split: T,
    half_width: T,
) -> Result<(Measured<T>, Measured<T>)> {
    let lines = shifted_lines(sys, split)?;
    let windows: Vec<(T, T)> = lines.iter().map(|&f| (f - half_width, f + half_width)).collect();
    let ints = integrate_peaks(spec, &windows)?;
    let combine = |x: Measured<T>, y: Measured<T>, sx: T, sy: T| {
        let half = T::lit(0.5);
        Measured::new(half * (sx * x.value + sy * y.value), half * (x.error.hypot(y.error)))
    };
    let one = T::one();
    Ok((combine(ints[0], ints[1], -one, one), combine(ints[2], ints[3], one, -one)))
}

/// Noise level of an FID from its last quarter, where the lines have decayed.
pub fn tail_sigma<T: Real>(fid: &Fid<T>) -> T {
    let tail = &fid.samples()[fid.len() * 3 / 4..];
    let n = T::from_count(2 * tail.len());
    let mean_re = tail.iter().fold(T::zero(), |s, z| s + z.re) / T::from_count(tail.len());
    let mean_im = tail.iter().fold(T::zero(), |s, z| s + z.im) / T::from_count(tail.len());
    let ss = tail.iter().fold(T::zero(), |s, z| s + (z.re - mean_re).powi(2) + (z.im - mean_im).powi(2));
    (ss / (n - T::lit(2.0))).sqrt()
}

/// Standard deviations of the antiphase integrals under noise at the level
/// measured in `fid`, from noise-only replicas run through the same chain.
///
/// Doubling correlates the noise across lines and the baseline holds only a
/// few window-sized blocks, so block estimates scatter too much here.
fn propagated_errors<T: Real>(fid: &Fid<T>, sys: &SpinSystem<T>, cfg: &PipelineConfig<T>, j_hz: T, half_width: T) -> Result<(T, T)> {
    let sigma = tail_sigma(fid);
    let silent = Fid::new(vec![Complex::new(T::zero(), T::zero()); fid.len()], fid.dwell_s(), fid.start_s())?;
    let mut vals = Vec::with_capacity(cfg.noise_trials);
    for k in 0..cfg.noise_trials {
        // a stream disjoint from the one that made the data
        let seed = cfg.seed.wrapping_mul(0x9e37_79b9_7f4a_7c15).wrapping_add(k as u64 + 1) ^ 0x5eed;
        let noise = silent.clone().with_noise(sigma, seed)?;
        let spec = baseline_correct(&transform(&noise, cfg.zero_fill)?, cfg.baseline_order, &cfg.baseline)?;
        let doubled = j_double(&spec, j_hz, cfg.doublings)?;
        let (i, s) = antiphase_integrals(&doubled.spectrum, sys, doubled.splitting_hz, half_width)?;
        vals.push((i.value, s.value));
    }
    let sd = |f: fn(&(T, T)) -> T| {
        let n = T::from_count(vals.len());
        let mean = vals.iter().map(f).fold(T::zero(), |a, b| a + b) / n;
        (vals.iter().map(|v| (f(v) - mean).powi(2)).fold(T::zero(), |a, b| a + b) / (n - T::one())).sqrt()
    };
    Ok((sd(|v| v.0), sd(|v| v.1)))
}

/// In-phase integral of the `I` multiplet, averaged over its two lines.
fn inphase_integral<T: Real>(spec: &Spectrum<T>, sys: &SpinSystem<T>, half_width: T) -> Result<Measured<T>> {
    let lines = line_frequencies(sys)?;
    let ints = integrate_peaks(spec, &[(lines[1] - half_width, lines[0] + half_width)])?;
    Ok(ints[0].scale(T::lit(0.5)))
}

fn shifted_lines<T: Real>(sys: &SpinSystem<T>, split: T) -> Result<[T; 4]> {
    let (oi, os) = (sys.offsets_hz()[0], sys.offsets_hz()[1]);
    let h = split / T::lit(2.0);
    if sys.n_qubits() != 2 {
        return Err(invalid("two spins required"));
    }
    Ok([oi + h, oi - h, os + h, os - h])
}

/// Runs the processing chain on the signal of `rho`, with the thermal
/// reference processed alongside to calibrate the integrals.
pub fn run_pipeline<T: Real>(rho: &DensityMatrix<T>, sys: &SpinSystem<T>, cfg: &PipelineConfig<T>) -> Result<PipelineOutput<T>> {
    let sv = filtered_signal(rho, sys)?;
    run_pipeline_signal(&sv, sys, cfg)
}

/// As [`run_pipeline`] from an already computed signal vector.
pub fn run_pipeline_signal<T: Real>(sv: &SignalVector<T>, sys: &SpinSystem<T>, cfg: &PipelineConfig<T>) -> Result<PipelineOutput<T>> {
    let t2 = cfg
        .line_t2
        .or(sys.t2())
        .ok_or_else(|| invalid("a line T2 is needed, from the config or the spin system"))?;
    let dwell = T::one() / cfg.sweep_hz;
    let mut fid = synthesize_fid(sv, sys, cfg.n_points, cfg.sweep_hz, t2)?;
    if let Some(snr) = cfg.snr {
        let sigma = sigma_for_snr(sv.max_abs(), t2, dwell, cfg.n_points, snr)?;
        fid = fid.with_noise(sigma, cfg.seed)?;
    }
    let spectrum = baseline_correct(&transform(&fid, cfg.zero_fill)?, cfg.baseline_order, &cfg.baseline)?;

    let centre = sys.offsets_hz()[0];
    let half_band = cfg.jmatch_band_hz / T::lit(2.0);
    let j = j_match(&spectrum, &cfg.j_grid, Multiplet::Antiphase, Some((centre - half_band, centre + half_band)))?;
    if !(j.j_hz > T::zero()) {
        return Err(invalid("matched coupling is zero; no antiphase doublet to double"));
    }
    let doubled = j_double(&spectrum, j.j_hz, cfg.doublings)?;
    let half_width = cfg.window_hz.unwrap_or(doubled.splitting_hz / T::lit(2.0));
    let (mut raw_i, mut raw_s) = antiphase_integrals(&doubled.spectrum, sys, doubled.splitting_hz, half_width)?;
    if cfg.noise_trials > 1 {
        let (ei, es) = propagated_errors(&fid, sys, cfg, j.j_hz, half_width)?;
        raw_i.error = ei;
        raw_s.error = es;
    }
    let (raw_i, raw_s) = (raw_i.scale(doubled.integral_scale), raw_s.scale(doubled.integral_scale));

    let thermal_sv = signal(&thermal_reference(sys.boltzmann())?, &PulseSequence::new().pulse(deg(90.0), deg(90.0)), sys)?;
    let thermal_fid = synthesize_fid(&thermal_sv, sys, cfg.n_points, cfg.sweep_hz, t2)?;
    let thermal_spec = transform(&thermal_fid, cfg.zero_fill)?;
    // the reference is synthesized without noise, so its integral is exact
    let thermal_integral = Measured::exact(inphase_integral(&thermal_spec, sys, half_width)?.value);

    let cal = Calibration::synthetic(thermal_integral, sys.boltzmann());
    let result = tomography(raw_i, raw_s, &cal)?;
    Ok(PipelineOutput { signal: *sv, spectrum, doubled: doubled.spectrum, j, thermal_integral, result })
}
