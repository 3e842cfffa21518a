//! Free induction decays, their synthesis from signal vectors, and the
//! Fourier transform to a frequency-domain spectrum.

use crate::error::{invalid, Error, Result};
use crate::phip::SignalVector;
use crate::scalar::Real;
use crate::spin::SpinSystem;
use nalgebra::{Complex, ComplexField};
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rand_distr::{Distribution, Normal};
use rustfft::FftPlanner;
use serde::{Deserialize, Serialize};
use std::io::{Read, Write};

/// Complex time-domain signal sampled at a uniform dwell time.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(bound = "")]
pub struct Fid<T: Real> {
    samples: Vec<Complex<T>>,
    dwell_s: T,
    #[serde(default)]
    start_s: T,
}

impl<T: Real> Fid<T> {
    pub fn new(samples: Vec<Complex<T>>, dwell_s: T, start_s: T) -> Result<Self> {
        if samples.len() < 2 {
            return Err(invalid("an FID needs at least two samples"));
        }
        if !(dwell_s > T::zero()) {
            return Err(invalid("dwell time must be positive"));
        }
        if !(start_s >= T::zero()) {
            return Err(invalid("acquisition start must be non-negative"));
        }
        Ok(Self { samples, dwell_s, start_s })
    }

    pub fn samples(&self) -> &[Complex<T>] {
        &self.samples
    }

    pub fn dwell_s(&self) -> T {
        self.dwell_s
    }

    pub fn start_s(&self) -> T {
        self.start_s
    }

    pub fn len(&self) -> usize {
        self.samples.len()
    }

    pub fn is_empty(&self) -> bool {
        self.samples.is_empty()
    }

    pub fn sweep_hz(&self) -> T {
        T::one() / self.dwell_s
    }

    pub fn time(&self, k: usize) -> T {
        self.start_s + T::from_count(k) * self.dwell_s
    }

    /// Adds circular complex Gaussian noise; `sigma` is the standard deviation
    /// of each real component.
    pub fn with_noise(mut self, sigma: T, seed: u64) -> Result<Self> {
        if !(sigma >= T::zero()) {
            return Err(invalid("noise level must be non-negative"));
        }
        let normal = Normal::new(0.0, sigma.as_f64()).map_err(|e| invalid(e.to_string()))?;
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        for z in &mut self.samples {
            let re = T::lit(normal.sample(&mut rng));
            let im = T::lit(normal.sample(&mut rng));
            *z += Complex::new(re, im);
        }
        Ok(self)
    }

    pub fn write_csv<W: Write>(&self, w: W) -> Result<()> {
        write_triples(w, "time_s", (0..self.len()).map(|k| self.time(k)), &self.samples)
    }

    pub fn read_csv<R: Read>(r: R) -> Result<Self> {
        let (axis, samples) = read_triples(r)?;
        let dwell = uniform_step(&axis)?;
        Self::new(samples, dwell, axis[0])
    }
}

/// Per-component noise level giving peak-height signal-to-noise `snr` for a
/// line of amplitude `amplitude` and decay `line_t2`, acquired over `n_points`.
pub fn sigma_for_snr<T: Real>(amplitude: T, line_t2: T, dwell_s: T, n_points: usize, snr: T) -> Result<T> {
    if !(snr > T::zero() && line_t2 > T::zero() && dwell_s > T::zero()) || n_points == 0 {
        return Err(invalid("SNR, T2, dwell and point count must be positive"));
    }
    Ok(amplitude.abs() * line_t2 / (dwell_s * T::from_count(n_points).sqrt() * snr))
}

/// Frequency-domain data on a uniform axis centred on the transmitter.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(bound = "")]
pub struct Spectrum<T: Real> {
    values: Vec<Complex<T>>,
    axis_hz: Vec<T>,
    sweep_hz: T,
    /// Dwell time and start offset of the FID this spectrum came from.
    dwell_s: T,
    start_s: T,
}

impl<T: Real> Spectrum<T> {
    pub fn values(&self) -> &[Complex<T>] {
        &self.values
    }

    pub fn axis_hz(&self) -> &[T] {
        &self.axis_hz
    }

    pub fn sweep_hz(&self) -> T {
        self.sweep_hz
    }

    pub fn len(&self) -> usize {
        self.values.len()
    }

    pub fn is_empty(&self) -> bool {
        self.values.is_empty()
    }

    /// Frequency spacing.
    pub fn df(&self) -> T {
        self.sweep_hz / T::from_count(self.len())
    }

    pub fn real(&self) -> Vec<T> {
        self.values.iter().map(|z| z.re).collect()
    }

    /// Index of the axis point nearest `f`, or `None` outside the axis.
    pub fn index_of(&self, f: T) -> Option<usize> {
        let half = self.df() / T::lit(2.0);
        if f < self.axis_hz[0] - half || f > self.axis_hz[self.len() - 1] + half {
            return None;
        }
        let k = ((f - self.axis_hz[0]) / self.df()).round();
        Some(k.to_usize().unwrap_or(0).min(self.len() - 1))
    }

    /// `Σ Re(S) df` over the whole axis.
    pub fn integral(&self) -> T {
        self.values.iter().fold(T::zero(), |s, z| s + z.re) * self.df()
    }

    /// `Σ |S|² df`.
    pub fn energy(&self) -> T {
        self.values.iter().fold(T::zero(), |s, z| s + z.modulus_squared()) * self.df()
    }

    pub(crate) fn with_values(&self, values: Vec<Complex<T>>) -> Self {
        debug_assert_eq!(values.len(), self.len());
        Self { values, ..self.clone() }
    }

    pub(crate) fn dwell_s(&self) -> T {
        self.dwell_s
    }

    pub(crate) fn start_s(&self) -> T {
        self.start_s
    }

    pub fn write_csv<W: Write>(&self, w: W) -> Result<()> {
        write_triples(w, "freq_hz", self.axis_hz.iter().copied(), &self.values)
    }

    /// Reads a spectrum written by [`Spectrum::write_csv`]; the FID start
    /// offset is taken as zero.
    pub fn read_csv<R: Read>(r: R) -> Result<Self> {
        let (axis, values) = read_triples(r)?;
        let df = uniform_step(&axis)?;
        let n = axis.len();
        let sweep_hz = df * T::from_count(n);
        Ok(Self { values, axis_hz: axis, sweep_hz, dwell_s: T::one() / sweep_hz, start_s: T::zero() })
    }
}

/// Frequencies of the four detected lines in signal-vector order:
/// `Ω_I + J/2, Ω_I − J/2, Ω_S + J/2, Ω_S − J/2`.
pub fn line_frequencies<T: Real>(sys: &SpinSystem<T>) -> Result<[T; 4]> {
    if sys.n_qubits() != 2 {
        return Err(invalid("line positions are defined for two spins"));
    }
    let (oi, os) = (sys.offsets_hz()[0], sys.offsets_hz()[1]);
    let hj = sys.coupling_hz(0, 1) / T::lit(2.0);
    Ok([oi + hj, oi - hj, os + hj, os - hj])
}

/// Sum of four damped complex exponentials with the signal-vector entries as
/// amplitudes.
pub fn synthesize_fid<T: Real>(
    sv: &SignalVector<T>,
    sys: &SpinSystem<T>,
    n_points: usize,
    sweep_hz: T,
    line_t2: T,
) -> Result<Fid<T>> {
    if n_points < 256 {
        return Err(invalid("synthesis needs at least 256 points"));
    }
    if !(line_t2 > T::zero() && sweep_hz > T::zero()) {
        return Err(invalid("sweep width and line T2 must be positive"));
    }
    let freqs = line_frequencies(sys)?;
    let nyquist = sweep_hz / T::lit(2.0);
    for &f in &freqs {
        if f.abs() >= nyquist {
            return Err(Error::Aliasing { freq_hz: f.as_f64(), nyquist_hz: nyquist.as_f64() });
        }
    }
    let dwell = T::one() / sweep_hz;
    let two_pi = T::two_pi();
    let samples = (0..n_points)
        .map(|k| {
            let t = T::from_count(k) * dwell;
            let decay = (-t / line_t2).exp();
            sv.0.iter().zip(freqs.iter()).fold(Complex::new(T::zero(), T::zero()), |acc, (a, &f)| {
                let (s, c) = (two_pi * f * t).sin_cos();
                acc + a * Complex::new(c * decay, s * decay)
            })
        })
        .collect();
    Fid::new(samples, dwell, T::zero())
}

/// Fourier transform with zero filling.
///
/// The first point is halved when acquisition starts at `t = 0` and the
/// result is scaled by `2·dwell`, so the real part of a line of amplitude `A`
/// integrates to `A`. A non-zero start offset is removed with a linear phase.
pub fn transform<T: Real>(fid: &Fid<T>, zero_fill: usize) -> Result<Spectrum<T>> {
    if zero_fill == 0 {
        return Err(invalid("zero-fill factor must be at least 1"));
    }
    let m = fid.len() * zero_fill;
    let mut buf = vec![Complex::new(T::zero(), T::zero()); m];
    buf[..fid.len()].copy_from_slice(fid.samples());
    if fid.start_s == T::zero() {
        buf[0] *= Complex::new(T::lit(0.5), T::zero());
    }
    let sweep_hz = fid.sweep_hz();
    Ok(time_to_spectrum(buf, fid.dwell_s, fid.start_s, sweep_hz))
}

pub(crate) fn frequency_axis<T: Real>(m: usize, dwell_s: T) -> Vec<T> {
    let span = T::from_count(m) * dwell_s;
    let half = (m / 2) as i64;
    (0..m as i64).map(|k| T::lit((k - half) as f64) / span).collect()
}

/// Forward transform of already-prepared time samples.
pub(crate) fn time_to_spectrum<T: Real>(mut buf: Vec<Complex<T>>, dwell_s: T, start_s: T, sweep_hz: T) -> Spectrum<T> {
    let m = buf.len();
    FftPlanner::new().plan_fft_forward(m).process(&mut buf);
    buf.rotate_right(m / 2);
    let axis_hz = frequency_axis(m, dwell_s);
    let scale = T::lit(2.0) * dwell_s;
    let two_pi = T::two_pi();
    for (z, &f) in buf.iter_mut().zip(axis_hz.iter()) {
        let (s, c) = (two_pi * f * start_s).sin_cos();
        *z *= Complex::new(c * scale, -s * scale);
    }
    Spectrum { values: buf, axis_hz, sweep_hz, dwell_s, start_s }
}

/// Inverse of [`time_to_spectrum`]: the time samples (first point still
/// halved) that produce `spec`.
pub(crate) fn spectrum_to_time<T: Real>(spec: &Spectrum<T>) -> Vec<Complex<T>> {
    let m = spec.len();
    let two_pi = T::two_pi();
    let scale = T::one() / (T::lit(2.0) * spec.dwell_s * T::from_count(m));
    let mut buf: Vec<Complex<T>> = spec
        .values
        .iter()
        .zip(spec.axis_hz.iter())
        .map(|(z, &f)| {
            let (s, c) = (two_pi * f * spec.start_s).sin_cos();
            z * Complex::new(c * scale, s * scale)
        })
        .collect();
    buf.rotate_left(m / 2);
    FftPlanner::new().plan_fft_inverse(m).process(&mut buf);
    buf
}

fn write_triples<T: Real, W: Write>(
    w: W,
    axis_name: &str,
    axis: impl Iterator<Item = T>,
    values: &[Complex<T>],
) -> Result<()> {
    let mut wr = csv::Writer::from_writer(w);
    wr.write_record([axis_name, "re", "im"])?;
    for (x, z) in axis.zip(values) {
        wr.write_record(&[x.as_f64().to_string(), z.re.as_f64().to_string(), z.im.as_f64().to_string()])?;
    }
    wr.flush()?;
    Ok(())
}

fn read_triples<T: Real, R: Read>(r: R) -> Result<(Vec<T>, Vec<Complex<T>>)> {
    let mut rd = csv::ReaderBuilder::new().comment(Some(b'#')).from_reader(r);
    let mut axis = Vec::new();
    let mut values = Vec::new();
    for rec in rd.deserialize::<(f64, f64, f64)>() {
        let (x, re, im) = rec?;
        axis.push(T::lit(x));
        values.push(Complex::new(T::lit(re), T::lit(im)));
    }
    if axis.len() < 2 {
        return Err(invalid("need at least two rows"));
    }
    Ok((axis, values))
}

fn uniform_step<T: Real>(axis: &[T]) -> Result<T> {
    let step = (axis[axis.len() - 1] - axis[0]) / T::from_count(axis.len() - 1);
    if !(step > T::zero()) {
        return Err(invalid("axis must be strictly increasing"));
    }
    let tol = step * T::lit(1e-6);
    if axis.windows(2).any(|w| ((w[1] - w[0]) - step).abs() > tol) {
        return Err(invalid("axis is not uniform"));
    }
    Ok(step)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn round_trip_through_time_domain() {
        let samples: Vec<Complex<f64>> = (0..16).map(|k| Complex::new(k as f64, -(k as f64) / 3.0)).collect();
        let fid = Fid::new(samples, 1e-3, 0.002).unwrap();
        let spec = transform(&fid, 2).unwrap();
        let back = spectrum_to_time(&spec);
        for (k, z) in back.iter().enumerate() {
            let want = if k < 16 { fid.samples()[k] } else { Complex::new(0.0, 0.0) };
            assert!((z - want).modulus() < 1e-12);
        }
    }

    #[test]
    fn axis_is_centred() {
        let ax = frequency_axis::<f64>(8, 0.125);
        assert_eq!(ax, vec![-4.0, -3.0, -2.0, -1.0, 0.0, 1.0, 2.0, 3.0]);
    }
}
