//! J-matching and J-doubling of multiplets.
//!
//! Both act by modulating the time-domain signal with a trigonometric kernel
//! at a trial coupling, which splits every line into a pair separated by that
//! coupling.

use super::spectrum::{spectrum_to_time, time_to_spectrum, Spectrum};
use crate::error::{invalid, Error, Result};
use crate::scalar::Real;
use nalgebra::Complex;
use serde::{Deserialize, Serialize};

/// Multiplet phase the matching kernel is designed to cancel.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Multiplet {
    /// `2 cos(πJ't)`, cancelling the centre of an antiphase doublet.
    #[default]
    Antiphase,
    /// `2i sin(πJ't)`, cancelling the centre of an in-phase doublet.
    InPhase,
}

/// Uniform grid of trial couplings in Hz, both ends included.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
#[serde(bound = "")]
pub struct JGrid<T: Real> {
    pub min_hz: T,
    pub max_hz: T,
    pub steps: usize,
}

impl<T: Real> JGrid<T> {
    pub fn new(min_hz: T, max_hz: T, steps: usize) -> Result<Self> {
        if !(min_hz >= T::zero() && max_hz > min_hz) || steps < 3 {
            return Err(invalid("J grid needs 0 <= min < max and at least 3 points"));
        }
        Ok(Self { min_hz, max_hz, steps })
    }

    pub fn step(&self) -> T {
        (self.max_hz - self.min_hz) / T::from_count(self.steps - 1)
    }

    pub fn points(&self) -> Vec<T> {
        (0..self.steps).map(|k| self.min_hz + self.step() * T::from_count(k)).collect()
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(bound = "")]
pub struct JEstimate<T: Real> {
    pub j_hz: T,
    /// `J` divided by the Nyquist frequency of the examined band.
    pub j_nyquist: T,
    pub grid_step_hz: T,
    /// `(J', objective)` for every grid point.
    pub objective: Vec<(T, T)>,
}

fn modulate<T: Real>(spec: &Spectrum<T>, kernel: impl Fn(T) -> Complex<T>) -> Spectrum<T> {
    let dt = spec.dwell_s();
    let mut time = spectrum_to_time(spec);
    let t0 = spec.start_s();
    for (k, z) in time.iter_mut().enumerate() {
        *z *= kernel(t0 + T::from_count(k) * dt);
    }
    time_to_spectrum(time, dt, t0, spec.sweep_hz())
}

/// Spectrum after modulation by the matching kernel at trial coupling `j`.
pub fn j_modulate<T: Real>(spec: &Spectrum<T>, j_hz: T, kind: Multiplet) -> Spectrum<T> {
    let w = T::pi() * j_hz;
    let two = T::lit(2.0);
    match kind {
        Multiplet::Antiphase => modulate(spec, |t| Complex::new(two * (w * t).cos(), T::zero())),
        Multiplet::InPhase => modulate(spec, |t| Complex::new(T::zero(), two * (w * t).sin())),
    }
}

fn band_objective<T: Real>(spec: &Spectrum<T>, band: Option<(T, T)>) -> T {
    let df = spec.df();
    spec.values()
        .iter()
        .zip(spec.axis_hz())
        .filter(|(_, &f)| band.is_none_or(|(lo, hi)| f >= lo && f <= hi))
        .fold(T::zero(), |s, (z, _)| s + z.re.abs())
        * df
}

/// Grid search for the coupling minimising `Σ |Re S_J'| df` over `band`.
///
/// A minimum at the lower grid edge is accepted (it is how an uncoupled line
/// reports `J = 0`); one at the upper edge or a flat objective is an error.
pub fn j_match<T: Real>(
    spec: &Spectrum<T>,
    grid: &JGrid<T>,
    kind: Multiplet,
    band: Option<(T, T)>,
) -> Result<JEstimate<T>> {
    if let Some((lo, hi)) = band {
        if !(lo < hi) {
            return Err(invalid("band must have lo < hi"));
        }
    }
    let objective: Vec<(T, T)> =
        grid.points().into_iter().map(|j| (j, band_objective(&j_modulate(spec, j, kind), band))).collect();
    let (best, &(j_hz, min_val)) = objective
        .iter()
        .enumerate()
        .min_by(|a, b| a.1 .1.partial_cmp(&b.1 .1).unwrap_or(std::cmp::Ordering::Equal))
        .ok_or_else(|| invalid("empty grid"))?;
    let max_val = objective.iter().fold(T::zero(), |m, &(_, v)| m.max(v));
    if !(max_val - min_val > T::lit(1e-9) * max_val) {
        return Err(Error::FlatObjective);
    }
    if best == objective.len() - 1 {
        return Err(Error::Numeric(format!("objective still decreasing at the grid edge {j_hz} Hz")));
    }
    let width = band.map_or(spec.sweep_hz(), |(lo, hi)| hi - lo);
    Ok(JEstimate { j_hz, j_nyquist: j_hz / (width / T::lit(2.0)), grid_step_hz: grid.step(), objective })
}

/// A J-doubled spectrum and the factor restoring its integrals.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(bound = "")]
pub struct Doubled<T: Real> {
    pub spectrum: Spectrum<T>,
    /// `2^m`: multiply integrals of the doubled lines by this.
    pub integral_scale: T,
    /// Splitting of the outer lines after doubling, `2^m J`.
    pub splitting_hz: T,
}

/// `m` successive doublings of an antiphase splitting `j_hz`.
///
/// Stage `k` multiplies the time signal by `cos(π 2^k J t)`, moving each outer
/// line out by `2^(k-1) J` at half height while the inner copies cancel.
pub fn j_double<T: Real>(spec: &Spectrum<T>, j_hz: T, m: usize) -> Result<Doubled<T>> {
    if !(j_hz > T::zero()) {
        return Err(invalid("J must be positive"));
    }
    let mut out = spec.clone();
    let mut split = j_hz;
    for _ in 0..m {
        let w = T::pi() * split;
        out = modulate(&out, |t| Complex::new((w * t).cos(), T::zero()));
        split *= T::lit(2.0);
    }
    Ok(Doubled { spectrum: out, integral_scale: T::lit(2.0).powi(m as i32), splitting_hz: split })
}
