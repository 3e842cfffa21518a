use nalgebra::Complex;
use phipsim::phip::SignalVector;
use phipsim::spin::operator::two;
use phipsim::spin::{DensityMatrix, SpinSystem};
use phipsim::specproc::{
    baseline_correct, depletion_correction, filtered_signal, fractions_from_pq, integrate_peaks, j_double, j_match,
    line_frequencies, line_windows, partial_twirl, partial_twirl_half, pq_from_fractions, run_pipeline,
    run_pipeline_signal, sigma_for_snr, synthesize_fid, tail_sigma, tomography, transform, BaselineRegions, Calibration,
    Fid, JGrid, Measured, Multiplet, PipelineConfig, Spectrum,
};
use phipsim::Error;
use proptest::prelude::*;
use std::f64::consts::PI;

fn sv(v: [f64; 4]) -> SignalVector<f64> {
    SignalVector::from_real(v)
}

fn spectrum_of(v: [f64; 4], sys: &SpinSystem<f64>, t2: f64) -> Spectrum<f64> {
    transform(&synthesize_fid(&sv(v), sys, 8192, 1000.0, t2).unwrap(), 2).unwrap()
}

/// Area of an absorptive Lorentzian of unit integral within `±w` of its centre.
fn lorentz_window(t2: f64, w: f64) -> f64 {
    2.0 / PI * (2.0 * PI * t2 * w).atan()
}

#[test]
fn transform_preserves_total_integral() {
    let sys = SpinSystem::<f64>::dppe();
    for amp in [1.0, -0.3, 2.5e-5] {
        let spec = spectrum_of([amp, 0.0, 0.0, 0.0], &sys, 0.4);
        assert!((spec.integral() / amp - 1.0).abs() < 1e-10);
    }
}

#[test]
fn window_integrals_follow_lorentzian_area() {
    let sys = SpinSystem::<f64>::two_spin(300.0, 0.0).unwrap();
    let t2 = 0.5;
    let spec = spectrum_of([0.7, 0.0, 0.0, 0.0], &sys, t2);
    let f0 = line_frequencies(&sys).unwrap()[0];
    for w in [2.0, 10.0, 40.0] {
        let got = integrate_peaks(&spec, &[(f0 - w, f0 + w)]).unwrap()[0].value;
        let want = 0.7 * lorentz_window(t2, w);
        assert!((got - want).abs() < 5e-3 * 0.7, "w = {w}: {got} vs {want}");
    }
    let peak = spec.index_of(f0).unwrap();
    let top = (0..spec.len()).max_by(|&a, &b| spec.values()[a].re.total_cmp(&spec.values()[b].re)).unwrap();
    assert_eq!(peak, top);
}

#[test]
fn aliased_lines_are_rejected() {
    let sys = SpinSystem::<f64>::dppe();
    let err = synthesize_fid(&sv([1.0, 0.0, 0.0, 0.0]), &sys, 1024, 400.0, 0.5).unwrap_err();
    assert!(matches!(err, Error::Aliasing { .. }));
    assert!(synthesize_fid(&sv([1.0; 4]), &sys, 100, 1000.0, 0.5).is_err());
}

#[test]
fn noise_level_sets_peak_snr() {
    let (n, dwell, t2, amp, snr) = (8192usize, 1e-3, 0.3, 0.25, 50.0);
    let sigma = sigma_for_snr(amp, t2, dwell, n, snr).unwrap();
    let quiet = Fid::new(vec![Complex::new(0.0, 0.0); n], dwell, 0.0).unwrap();
    let noisy = quiet.clone().with_noise(sigma, 11).unwrap();
    assert_eq!(noisy, quiet.clone().with_noise(sigma, 11).unwrap());
    assert_ne!(noisy, quiet.with_noise(sigma, 12).unwrap());
    let spec = transform(&noisy, 1).unwrap();
    let re = spec.real();
    let sd = (re.iter().map(|x| x * x).sum::<f64>() / re.len() as f64).sqrt();
    // peak of a line of amplitude A is 2 A T2 on this scale
    let measured = 2.0 * amp * t2 / sd;
    assert!((measured / snr - 1.0).abs() < 0.05, "{measured}");
}

#[test]
fn tail_recovers_noise_level() {
    let sys = SpinSystem::<f64>::dppe();
    let fid = synthesize_fid(&sv([0.25, -0.25, 0.1, -0.1]), &sys, 8192, 1000.0, 0.58).unwrap();
    assert!(tail_sigma(&fid) < 1e-5);
    let noisy = fid.with_noise(0.03, 4).unwrap();
    // 4096 real samples: relative scatter about 1.1%
    assert!((tail_sigma(&noisy) / 0.03 - 1.0).abs() < 0.05);
}

fn csv_spectrum(f: impl Fn(f64) -> (f64, f64)) -> Spectrum<f64> {
    let mut text = String::from("freq_hz,re,im\n");
    for k in 0..2000 {
        let x = -500.0 + 0.5 * k as f64;
        let (re, im) = f(x);
        text += &format!("{x},{re},{im}\n");
    }
    Spectrum::read_csv(text.as_bytes()).unwrap()
}

#[test]
fn baseline_removes_quadratic_offset() {
    let line = |x: f64| 1.0 / (1.0 + ((x - 40.0) / 2.0).powi(2));
    let drift = |x: f64| 0.05 + 2e-4 * x - 3e-7 * x * x;
    let clean = csv_spectrum(|x| (line(x), 0.0));
    let raw = csv_spectrum(|x| (line(x) + drift(x), -drift(x)));
    let regions = BaselineRegions::Windows { windows: vec![(-500.0, -100.0), (200.0, 500.0)] };
    let out = baseline_correct(&raw, 2, &regions).unwrap();
    let err = out.values().iter().zip(clean.values()).map(|(a, b)| (a - b).norm()).fold(0.0, f64::max);
    // the fit only sees the Lorentzian tail, which is below 1e-3 there
    assert!(err < 2e-3, "{err}");
    let auto = baseline_correct(&raw, 2, &BaselineRegions::Auto { fraction: 0.5 }).unwrap();
    assert!(auto.values().iter().zip(clean.values()).map(|(a, b)| (a - b).norm()).fold(0.0, f64::max) < 0.02);
    assert!(baseline_correct(&raw, 2, &BaselineRegions::Windows { windows: vec![(0.0, 1.0)] }).is_err());
}

#[test]
fn windows_are_clipped_between_neighbours() {
    let w = line_windows(&[-10.0, -4.0, 4.0, 10.0], 1.0, 5.0).unwrap();
    assert_eq!(w, vec![(-15.0, -7.0), (-7.0, 0.0), (0.0, 7.0), (7.0, 15.0)]);
    let spec = csv_spectrum(|_| (0.0, 0.0));
    assert!(integrate_peaks(&spec, &w).is_ok(), "touching windows are allowed");
    assert!(integrate_peaks(&spec, &[(-10.0, 2.0), (1.0, 5.0)]).is_err());
    assert!(integrate_peaks(&spec, &[(-900.0, 0.0)]).is_err());
}

#[test]
fn csv_round_trips() {
    let sys = SpinSystem::<f64>::dpae();
    let fid = synthesize_fid(&sv([0.1, -0.1, 0.2, -0.2]), &sys, 512, 500.0, 0.3).unwrap();
    let mut buf = Vec::new();
    fid.write_csv(&mut buf).unwrap();
    let back = Fid::<f64>::read_csv(buf.as_slice()).unwrap();
    assert_eq!(back.len(), fid.len());
    assert!((back.dwell_s() - fid.dwell_s()).abs() < 1e-15);
    assert!(back.samples().iter().zip(fid.samples()).all(|(a, b)| (a - b).norm() < 1e-15));

    let spec = transform(&fid, 2).unwrap();
    let mut buf = Vec::new();
    spec.write_csv(&mut buf).unwrap();
    let back = Spectrum::<f64>::read_csv(buf.as_slice()).unwrap();
    assert!((back.df() - spec.df()).abs() < 1e-12);
    assert_eq!(back.values(), spec.values());
}

#[test]
fn j_matching_finds_antiphase_splitting() {
    let grid = JGrid::new(0.0, 10.0, 201).unwrap();
    for j in [2.3, 4.6, 7.1] {
        let sys = SpinSystem::<f64>::two_spin(492.0, j).unwrap();
        let spec = spectrum_of([0.25, -0.25, 0.0, 0.0], &sys, 0.58);
        let est = j_match(&spec, &grid, Multiplet::Antiphase, Some((216.0, 276.0))).unwrap();
        assert!((est.j_hz - j).abs() <= grid.step(), "{} vs {j}", est.j_hz);
        assert_eq!(est.objective.len(), 201);
    }
    let sys = SpinSystem::<f64>::two_spin(492.0, 4.6).unwrap();
    let flat = spectrum_of([0.0; 4], &sys, 0.58);
    assert!(matches!(j_match(&flat, &grid, Multiplet::Antiphase, None), Err(Error::FlatObjective)));
}

#[test]
fn j_doubling_moves_outer_lines() {
    let j = 4.6;
    let sys = SpinSystem::<f64>::two_spin(492.0, j).unwrap();
    let spec = spectrum_of([0.25, -0.25, 0.0, 0.0], &sys, 2.0);
    let d = j_double(&spec, j, 3).unwrap();
    assert!((d.splitting_hz - 8.0 * j).abs() < 1e-12);
    assert_eq!(d.integral_scale, 8.0);
    let centre = 246.0;
    let s = &d.spectrum;
    let at = |f: f64| s.values()[s.index_of(f).unwrap()].re;
    // outer lines keep the antiphase sign, the centre cancels
    assert!(at(centre + 4.0 * j) > 0.0 && at(centre - 4.0 * j) < 0.0);
    assert!(at(centre).abs() < 1e-3 * at(centre + 4.0 * j));
    let half = 2.0 * j;
    let outer = integrate_peaks(s, &[(centre + 4.0 * j - half, centre + 4.0 * j + half)]).unwrap()[0].value;
    let orig = integrate_peaks(&spec, &[(centre + j / 2.0 - j / 2.0, centre + j / 2.0 + j / 2.0)]).unwrap()[0].value;
    assert!((outer * d.integral_scale / orig - 1.0).abs() < 0.05, "{outer} {orig}");
}

#[test]
fn depletion_series() {
    for (x, flashes) in [(0.001, 1000.0), (1e-5, 1000.0), (0.01, 10.0), (0.3, 1.0)] {
        let direct: f64 = flashes * x / (1.0 - (1.0_f64 - x).powf(flashes));
        assert!((depletion_correction(x, flashes).unwrap() / direct - 1.0).abs() < 1e-9);
    }
    assert_eq!(depletion_correction(0.0, 50.0).unwrap(), 1.0);
    // small x: 1 + (F - 1) x / 2
    assert!((depletion_correction(1e-7_f64, 100.0).unwrap() - (1.0 + 99.0 * 0.5e-7)).abs() < 1e-10);
    assert!(depletion_correction(1.0, 5.0).is_err());
    assert!(depletion_correction(0.1, 0.5).is_err());
}

#[test]
fn tomography_inverts_calibrated_integrals() {
    let cal = Calibration::<f64>::synthetic(Measured::new(2.0, 0.02), 1e-4);
    // N = B / (2 T)
    let n = 1e-4_f64 / 4.0;
    let (p, q) = (-0.7_f64, -0.8_f64);
    let res = tomography(Measured::new(-q / n, 10.0), Measured::new(-p / n, 10.0), &cal).unwrap();
    assert!((res.normalization.value - n).abs() < 1e-18);
    assert!((res.p.value - p).abs() < 1e-12 && (res.q.value - q).abs() < 1e-12);
    let (a, b, c) = fractions_from_pq(p, q);
    assert!((res.a.value - a).abs() < 1e-12 && (res.b.value - b).abs() < 1e-12 && (res.c.value - c).abs() < 1e-12);
    // error of p from the integral and the 1% normalization error in quadrature
    let want = ((n * 10.0).powi(2) + (p * 0.01).powi(2)).sqrt();
    assert!((res.p.error / want - 1.0).abs() < 1e-9);
    assert!((res.effective_purity.value - (4.0 * a - 1.0) / 3.0).abs() < 1e-12);
    let bad = Calibration { active_fraction: 1.5, ..Calibration::dppe_run() };
    assert!(tomography(Measured::exact(1.0), Measured::exact(1.0), &bad).is_err());
}

#[test]
fn partial_twirl_maps_coefficients() {
    let sys = SpinSystem::<f64>::dppe();
    let coeff = |rho: &DensityMatrix<f64>, op: &nalgebra::DMatrix<Complex<f64>>| {
        rho.expectation(op).re / (op * op).trace().re
    };
    for (l, m) in [(-0.2, -0.2), (0.1, -0.3), (0.05, 0.2)] {
        let dev = two::zq_x::<f64>() * Complex::new(l, 0.0) + two::izsz::<f64>() * Complex::new(m, 0.0)
            + two::ix::<f64>() * Complex::new(0.1, 0.0);
        let rho = DensityMatrix::from_deviation(&dev).unwrap();
        let out = partial_twirl(&rho, &sys).unwrap();
        assert!((coeff(&out, &two::zq_x()) - (l + m) / 2.0).abs() < 1e-12);
        assert!((coeff(&out, &two::izsz()) - l).abs() < 1e-12);
        assert!(coeff(&out, &two::ix()).abs() < 1e-12);
    }
    let half = partial_twirl_half(&DensityMatrix::singlet(), &sys).unwrap();
    assert!(coeff(&half, &two::zq_x()).abs() < 1e-12);
    assert!(coeff(&half, &two::izsz()) > 0.0);
}

fn readout(a: f64, b: f64) -> [f64; 4] {
    let (p, q) = pq_from_fractions(a, b);
    [q / 4.0, -q / 4.0, -p / 4.0, p / 4.0]
}

#[test]
fn pipeline_recovers_fractions_without_noise() {
    let sys = SpinSystem::<f64>::dppe();
    let cfg = PipelineConfig::default();
    let (a, b) = (0.8, 0.1);
    let out = run_pipeline_signal(&sv(readout(a, b)), &sys, &cfg).unwrap();
    assert!((out.j.j_hz - 4.6).abs() <= cfg.j_grid.step());
    assert!((out.result.a.value - a).abs() < 2e-3, "{:?}", out.result.a);
    assert!((out.result.b.value - b).abs() < 2e-3, "{:?}", out.result.b);
    assert!((out.result.c.value - 0.05).abs() < 2e-3, "{:?}", out.result.c);
    assert_eq!(out.thermal_integral.error, 0.0);

    let rho = DensityMatrix::singlet();
    let full = run_pipeline(&rho, &sys, &cfg).unwrap();
    assert!(full.signal.max_diff(&filtered_signal(&rho, &sys).unwrap()) == 0.0);
}

#[test]
fn noisy_pipeline_is_seeded() {
    let sys = SpinSystem::<f64>::dppe();
    let cfg = |seed| PipelineConfig { snr: Some(200.0), seed, ..PipelineConfig::default() };
    let s = sv(readout(0.9, 0.05));
    let a = run_pipeline_signal(&s, &sys, &cfg(7)).unwrap().result;
    let b = run_pipeline_signal(&s, &sys, &cfg(7)).unwrap().result;
    let c = run_pipeline_signal(&s, &sys, &cfg(8)).unwrap().result;
    assert_eq!(a, b);
    assert_ne!(a.a.value, c.a.value);
    assert!(a.a.error > 0.0);
}

proptest! {
    #[test]
    fn pq_fraction_round_trip(p in -1.0..1.0_f64, q in -1.0..1.0_f64) {
        let (a, b, c) = fractions_from_pq(p, q);
        prop_assert!((a + b + 2.0 * c - 1.0).abs() < 1e-12);
        let (p2, q2) = pq_from_fractions(a, b);
        prop_assert!((p2 - p).abs() < 1e-12 && (q2 - q).abs() < 1e-12);
    }

    #[test]
    fn j_match_over_couplings(j in 2.0..8.0_f64) {
        let sys = SpinSystem::<f64>::two_spin(492.0, j).unwrap();
        let fid = synthesize_fid(&sv([0.25, -0.25, 0.1, -0.1]), &sys, 4096, 1000.0, 0.58).unwrap();
        let spec = transform(&fid, 2).unwrap();
        let grid = JGrid::new(0.0, 10.0, 101).unwrap();
        let est = j_match(&spec, &grid, Multiplet::Antiphase, Some((216.0, 276.0))).unwrap();
        prop_assert!((est.j_hz - j).abs() <= grid.step());
    }
}
