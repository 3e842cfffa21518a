//! Peak integration with noise-based error bars.

use super::spectrum::Spectrum;
use crate::error::{invalid, Result};
use crate::scalar::Real;
use serde::{Deserialize, Serialize};

/// A value with its one-sigma uncertainty.
#[derive(Clone, Copy, Debug, Default, PartialEq, Serialize, Deserialize)]
#[serde(bound = "")]
pub struct Measured<T: Real> {
    pub value: T,
    pub error: T,
}

impl<T: Real> Measured<T> {
    pub fn new(value: T, error: T) -> Self {
        Self { value, error }
    }

    pub fn exact(value: T) -> Self {
        Self { value, error: T::zero() }
    }

    pub fn scale(self, s: T) -> Self {
        Self { value: self.value * s, error: self.error * s.abs() }
    }
}

/// Integration windows of `±half_width_fwhm` linewidths around each line,
/// clipped halfway to the nearest neighbour. Returned in input order.
pub fn line_windows<T: Real>(freqs: &[T], fwhm_hz: T, half_width_fwhm: T) -> Result<Vec<(T, T)>> {
    if !(fwhm_hz > T::zero() && half_width_fwhm > T::zero()) {
        return Err(invalid("linewidth and window width must be positive"));
    }
    let reach = fwhm_hz * half_width_fwhm;
    Ok(freqs
        .iter()
        .enumerate()
        .map(|(i, &f)| {
            let mut lo = f - reach;
            let mut hi = f + reach;
            for (j, &g) in freqs.iter().enumerate() {
                if i == j {
                    continue;
                }
                let midpoint = (f + g) / T::lit(2.0);
                if g > f {
                    hi = hi.min(midpoint);
                } else if g < f {
                    lo = lo.max(midpoint);
                }
            }
            (lo, hi)
        })
        .collect())
}

/// Linewidth (FWHM, Hz) of a Lorentzian from a decay time.
pub fn lorentzian_fwhm<T: Real>(t2: T) -> T {
    T::one() / (T::pi() * t2)
}

fn window_points<T: Real>(spec: &Spectrum<T>, lo: T, hi: T) -> Result<Vec<usize>> {
    let axis = spec.axis_hz();
    if !(lo < hi) {
        return Err(invalid(format!("window ({lo}, {hi}) is empty")));
    }
    if lo < axis[0] || hi > axis[spec.len() - 1] {
        return Err(invalid(format!("window ({lo}, {hi}) lies outside the spectrum")));
    }
    let pts: Vec<usize> = (0..spec.len()).filter(|&k| axis[k] >= lo && axis[k] < hi).collect();
    if pts.is_empty() {
        return Err(invalid(format!("window ({lo}, {hi}) contains no points")));
    }
    Ok(pts)
}

/// Riemann sums of `Re S` over each window, with errors estimated from the
/// baseline outside all windows.
pub fn integrate_peaks<T: Real>(spec: &Spectrum<T>, windows: &[(T, T)]) -> Result<Vec<Measured<T>>> {
    integrate_peaks_with_noise(spec, windows, None)
}

/// As [`integrate_peaks`], with explicit noise regions.
///
/// The error of a window of `w` points is the spread of integrals over
/// contiguous blocks of `w` baseline points. With fewer than two such blocks
/// it falls back to `σ df √w` from the per-point standard deviation.
pub fn integrate_peaks_with_noise<T: Real>(
    spec: &Spectrum<T>,
    windows: &[(T, T)],
    noise_regions: Option<&[(T, T)]>,
) -> Result<Vec<Measured<T>>> {
    let pts: Vec<Vec<usize>> = windows.iter().map(|&(lo, hi)| window_points(spec, lo, hi)).collect::<Result<_>>()?;
    // windows that merely touch (up to rounding) share no grid point
    let mut spans: Vec<(usize, usize)> = pts.iter().map(|p| (p[0], p[p.len() - 1])).collect();
    spans.sort_unstable();
    if spans.windows(2).any(|w| w[1].0 <= w[0].1) {
        return Err(invalid("integration windows overlap"));
    }
    let axis = spec.axis_hz();
    let in_any = |k: usize, ws: &[(T, T)]| ws.iter().any(|&(lo, hi)| axis[k] >= lo && axis[k] < hi);
    let noise_idx: Vec<usize> = match noise_regions {
        Some(ws) => (0..spec.len()).filter(|&k| in_any(k, ws)).collect(),
        None => (0..spec.len()).filter(|&k| !in_any(k, windows)).collect(),
    };
    let runs = contiguous_runs(&noise_idx);
    let re = spec.real();
    let df = spec.df();
    Ok(pts
        .iter()
        .map(|p| {
            let value = p.iter().fold(T::zero(), |s, &k| s + re[k]) * df;
            Measured::new(value, block_error(&re, &runs, &noise_idx, p.len(), df))
        })
        .collect())
}

fn contiguous_runs(idx: &[usize]) -> Vec<&[usize]> {
    let mut out = Vec::new();
    let mut start = 0;
    for i in 1..=idx.len() {
        if i == idx.len() || idx[i] != idx[i - 1] + 1 {
            if i > start {
                out.push(&idx[start..i]);
            }
            start = i;
        }
    }
    out
}

fn sample_std<T: Real>(xs: &[T]) -> Option<T> {
    if xs.len() < 2 {
        return None;
    }
    let n = T::from_count(xs.len());
    let mean = xs.iter().fold(T::zero(), |s, &x| s + x) / n;
    let var = xs.iter().fold(T::zero(), |s, &x| s + (x - mean) * (x - mean)) / (n - T::one());
    Some(var.sqrt())
}

fn block_error<T: Real>(re: &[T], runs: &[&[usize]], all: &[usize], width: usize, df: T) -> T {
    let blocks: Vec<T> = runs
        .iter()
        .flat_map(|run| {
            // overlapping blocks: same expected spread, less scatter than disjoint ones
            let stride = (width / 4).max(1);
            (0..run.len().saturating_sub(width - 1))
                .step_by(stride)
                .map(move |i| run[i..i + width].iter().fold(T::zero(), |s, &k| s + re[k]) * df)
        })
        .collect();
    if let Some(s) = sample_std(&blocks) {
        return s;
    }
    let pts: Vec<T> = all.iter().map(|&k| re[k]).collect();
    sample_std(&pts).map_or(T::zero(), |s| s * df * T::from_count(width).sqrt())
}
