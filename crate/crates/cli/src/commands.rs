//! One function per subcommand. Each writes its files through [`Outputs`]
//! and returns a short report for the terminal.

use crate::config::{Algorithm, Config, TomographySource};
use crate::error::CliError;
use crate::output::{Cell, Outputs, Table};
use phipsim::entangle::{
    braunstein_bounds, crossover_boltzmann, crossover_qubits, report, sv_compression, warren_bound,
};
use phipsim::phip::{enhancement, enhancement_numeric, para_fraction, PhipExperiment, RotorParams, SignalVector};
use phipsim::qip::{deutsch_jozsa, full_twirl, grover, AlgorithmResult, Answer, GateNoise};
use phipsim::specproc::{
    line_frequencies, pq_from_fractions, run_pipeline, run_pipeline_signal, synthesize_fid, tomography, transform, Measured, Spectrum, TomographyResult,
};
use phipsim::System;
use serde_json::json;

const LINES: [&str; 4] = ["I+Sa", "I+Sb", "IaS+", "IbS+"];

fn line_t2(explicit: Option<f64>, sys: &System) -> Result<f64, CliError> {
    explicit
        .or(sys.t2())
        .ok_or_else(|| CliError::field("spectrum.line_t2_s", "needed when the system has no T2"))
}

fn signal_table(name: &str, sv: &SignalVector<f64>, sys: &System) -> Result<Table, CliError> {
    let freqs = line_frequencies(sys)?;
    let mut t = Table::new(name, &[("line", "1"), ("freq_hz", "Hz"), ("re", "1"), ("im", "1")]);
    for k in 0..4 {
        t.push(vec![LINES[k].into(), freqs[k].into(), sv.0[k].re.into(), sv.0[k].im.into()]);
    }
    Ok(t)
}

fn spectrum_table(name: &str, spec: &Spectrum<f64>) -> Table {
    let mut t = Table::new(name, &[("freq_hz", "Hz"), ("re", "1/Hz"), ("im", "1/Hz")]);
    for (f, z) in spec.axis_hz().iter().zip(spec.values()) {
        t.push(vec![(*f).into(), z.re.into(), z.im.into()]);
    }
    t
}

fn measured_row(t: &mut Table, name: &str, m: Measured<f64>) {
    t.push(vec![name.into(), m.value.into(), m.error.into()]);
}

pub fn phip(cfg: &Config, out: &mut Outputs) -> Result<String, CliError> {
    let sys = cfg.system.build()?;
    let variant = cfg.phip.variant.build();
    let mut exp = PhipExperiment::new(variant.clone(), cfg.phip.singlet_fraction);
    if let Some(d) = &cfg.phip.detection {
        exp = exp.with_detection(d.build());
    }
    let sv = exp.signal(&sys)?;
    let signal = signal_table("signal", &sv, &sys)?;
    out.table(&signal)?;
    let pairs: Vec<[f64; 2]> = sv.0.iter().map(|z| [z.re, z.im]).collect();
    out.json_with_provenance("signal_vector", &json!({ "order": LINES, "values": pairs }))?;

    let sc = &cfg.spectrum;
    let fid = synthesize_fid(&sv, &sys, sc.n_points, sc.sweep_hz, line_t2(sc.line_t2_s, &sys)?)?;
    let spec = transform(&fid, sc.zero_fill)?;
    out.table(&spectrum_table("spectrum", &spec))?;

    let mut enh = Table::new("enhancement", &[("quantity", "1"), ("value", "1")]);
    enh.push(vec!["boltzmann".into(), sys.boltzmann().into()]);
    enh.push(vec!["closed_form_pure".into(), enhancement(&variant, sys.boltzmann(), &sys)?.into()]);
    enh.push(vec!["simulated".into(), enhancement_numeric(&exp, &sys)?.into()]);
    out.table(&enh)?;
    Ok(format!("{}\n{}", signal.render(), enh.render()))
}

fn result_table(r: &TomographyResult<f64>) -> Table {
    let mut t = Table::new("tomography", &[("quantity", "1"), ("value", "1"), ("error", "1")]);
    measured_row(&mut t, "raw_i", r.raw_i);
    measured_row(&mut t, "raw_s", r.raw_s);
    measured_row(&mut t, "normalization", r.normalization);
    measured_row(&mut t, "p", r.p);
    measured_row(&mut t, "q", r.q);
    measured_row(&mut t, "a", r.a);
    measured_row(&mut t, "b", r.b);
    measured_row(&mut t, "c", r.c);
    measured_row(&mut t, "effective_purity", r.effective_purity);
    t.push(vec!["concurrence".into(), r.concurrence.into(), 0.0.into()]);
    t.push(vec!["eof".into(), r.eof.into(), 0.0.into()]);
    t
}

/// Ideal readout `¼{q, −q, −p, p}` of a filtered state.
fn readout_signal(a: f64, b: f64, c: f64) -> Result<SignalVector<f64>, CliError> {
    let path = "tomography.source";
    if [a, b, c].iter().any(|&x| !(0.0..=1.0).contains(&x)) {
        return Err(CliError::field(path, "fractions must lie in [0, 1]"));
    }
    if (a + b + 2.0 * c - 1.0).abs() > 1e-3 {
        return Err(CliError::field(path, format!("a + b + 2c = {} must equal 1", a + b + 2.0 * c)));
    }
    let (p, q) = pq_from_fractions(a, b);
    Ok(SignalVector::from_real([q / 4.0, -q / 4.0, -p / 4.0, p / 4.0]))
}

pub fn tomography_cmd(cfg: &Config, out: &mut Outputs) -> Result<String, CliError> {
    let result = match &cfg.tomography.source {
        TomographySource::Integrals { i, i_err, s, s_err } => {
            let cal = cfg.tomography.calibration.build();
            tomography(Measured::new(*i, *i_err), Measured::new(*s, *s_err), &cal)?
        }
        TomographySource::State { .. } | TomographySource::Fractions { .. } => {
            let sys = cfg.system.build()?;
            let run = match &cfg.tomography.source {
                TomographySource::State { state } => run_pipeline(&state.build()?, &sys, &cfg.processing)?,
                TomographySource::Fractions { a, b, c } => {
                    run_pipeline_signal(&readout_signal(*a, *b, *c)?, &sys, &cfg.processing)?
                }
                TomographySource::Integrals { .. } => unreachable!(),
            };
            out.table(&signal_table("filtered_signal", &run.signal, &sys)?)?;
            out.table(&spectrum_table("spectrum", &run.spectrum))?;
            out.table(&spectrum_table("doubled_spectrum", &run.doubled))?;
            let mut j = Table::new("j_estimate", &[("j_hz", "Hz"), ("j_nyquist", "1"), ("grid_step_hz", "Hz")]);
            j.push(vec![run.j.j_hz.into(), run.j.j_nyquist.into(), run.j.grid_step_hz.into()]);
            out.table(&j)?;
            let mut curve = Table::new("j_objective", &[("j_hz", "Hz"), ("objective", "1")]);
            for &(jj, obj) in &run.j.objective {
                curve.push(vec![jj.into(), obj.into()]);
            }
            out.table(&curve)?;
            run.result
        }
    };
    out.json_with_provenance("tomography_result", &result)?;
    let table = result_table(&result);
    out.table(&table)?;
    Ok(table.render())
}

pub fn bounds(cfg: &Config, out: &mut Outputs) -> Result<String, CliError> {
    let bc = &cfg.bounds;
    if bc.n_min == 0 || bc.n_min > bc.n_max {
        return Err(CliError::field("bounds", format!("need 1 <= n_min <= n_max, got {}..{}", bc.n_min, bc.n_max)));
    }
    let sv = sv_compression(1, bc.boltzmann)?;
    let mut t = Table::new(
        "bounds",
        &[
            ("n", "1"),
            ("eps_lower", "1"),
            ("eps_upper", "1"),
            ("warren", "1"),
            ("entanglement_possible", "1"),
            ("sv_pure_qubits", "qubits"),
        ],
    );
    for n in bc.n_min..=bc.n_max {
        let (lo, hi) = braunstein_bounds::<f64>(n)?;
        let w = warren_bound(n, bc.boltzmann)?;
        t.push(vec![n.into(), lo.into(), hi.into(), w.into(), (w >= lo).into(), (sv.k_exact * n as f64).into()]);
    }
    out.table(&t)?;

    let rotor = RotorParams { theta_r: bc.theta_r_k, ..RotorParams::default() };
    let mut para = Table::new("para_fraction", &[("temperature_k", "K"), ("para_percent", "%")]);
    for &temp in &bc.temperatures_k {
        para.push(vec![temp.into(), (100.0 * para_fraction(temp, &rotor)?).into()]);
    }
    out.table(&para)?;

    let cross = crossover_qubits(bc.boltzmann, bc.n_max)?;
    let mut summary = Table::new("crossover", &[("quantity", "1"), ("value", "1")]);
    summary.push(vec!["boltzmann".into(), bc.boltzmann.into()]);
    summary.push(vec![
        "crossover_n".into(),
        cross.map_or(Cell::Text("none".into()), |n| Cell::Int(n as i64)),
    ]);
    if let Some(n) = cross {
        summary.push(vec!["crossover_boltzmann_at_n".into(), crossover_boltzmann::<f64>(n)?.into()]);
    }
    summary.push(vec!["sv_qubits_per_pure".into(), sv.qubits_per_pure.into()]);
    out.table(&summary)?;
    Ok(format!("{}\n{}", para.render(), summary.render()))
}

fn answer_text(a: Answer) -> String {
    match a {
        Answer::Constant => "constant".into(),
        Answer::Balanced => "balanced".into(),
        Answer::Found(k) => format!("found_{k:02b}"),
    }
}

fn algo_row(algorithm: &str, case: String, expected: Answer, r: &AlgorithmResult<f64>) -> Vec<Cell> {
    let mut row = vec![
        algorithm.into(),
        case.into(),
        answer_text(expected).into(),
        answer_text(r.answer).into(),
        (r.answer == expected).into(),
        r.success_probability.into(),
    ];
    row.extend(r.populations.iter().map(|&p| Cell::from(p)));
    row.extend(r.readout.0.iter().map(|z| Cell::from(z.re)));
    row
}

pub fn algo(cfg: &Config, out: &mut Outputs) -> Result<String, CliError> {
    let ac = &cfg.algo;
    let rho0 = ac.state.build()?;
    let noise = match ac.single_qubit_gate_s {
        Some(t) => Some(GateNoise::from_system(&cfg.system.build()?, t)?),
        None => None,
    };
    let mut t = Table::new(
        "algo",
        &[
            ("algorithm", "1"),
            ("case", "1"),
            ("expected", "1"),
            ("answer", "1"),
            ("correct", "1"),
            ("success_probability", "1"),
            ("p00", "1"),
            ("p01", "1"),
            ("p10", "1"),
            ("p11", "1"),
            ("readout_i_plus_s_alpha", "1"),
            ("readout_i_plus_s_beta", "1"),
            ("readout_i_alpha_s_plus", "1"),
            ("readout_i_beta_s_plus", "1"),
        ],
    );
    match ac.algorithm {
        Algorithm::DeutschJozsa => {
            if ac.functions.is_empty() {
                return Err(CliError::field("algo.functions", "no oracle functions given"));
            }
            for &f in &ac.functions {
                let r = deutsch_jozsa(f, &rho0, noise.as_ref())?;
                let expected = if f.is_balanced() { Answer::Balanced } else { Answer::Constant };
                t.push(algo_row("deutsch_jozsa", f.to_string(), expected, &r));
            }
        }
        Algorithm::Grover => {
            if ac.targets.is_empty() {
                return Err(CliError::field("algo.targets", "no targets given"));
            }
            for &target in &ac.targets {
                let r = grover(target, &rho0, ac.iterations, noise.as_ref())?;
                t.push(algo_row("grover", format!("{target:02b}"), Answer::Found(target), &r));
            }
        }
    }
    out.table(&t)?;
    Ok(t.render())
}

pub fn twirl(cfg: &Config, out: &mut Outputs) -> Result<String, CliError> {
    let rho = cfg.twirl.state.build()?;
    let tw = full_twirl(&rho, cfg.twirl.mode)?;
    let (before, after) = (report(&rho)?, report(&tw)?);
    let mut t = Table::new("twirl", &[("quantity", "1"), ("before", "1"), ("after", "1")]);
    t.push(vec!["singlet_fraction".into(), rho.singlet_fraction()?.into(), tw.singlet_fraction()?.into()]);
    t.push(vec!["purity".into(), rho.purity().into(), tw.purity().into()]);
    t.push(vec!["concurrence".into(), before.concurrence.into(), after.concurrence.into()]);
    t.push(vec!["eof".into(), before.eof.into(), after.eof.into()]);
    out.table(&t)?;

    let mut m = Table::new("twirled_state", &[("row", "1"), ("col", "1"), ("re", "1"), ("im", "1")]);
    for r in 0..tw.dim() {
        for c in 0..tw.dim() {
            let z = tw.matrix()[(r, c)];
            m.push(vec![r.into(), c.into(), z.re.into(), z.im.into()]);
        }
    }
    out.table(&m)?;
    Ok(t.render())
}

pub fn entmetrics(cfg: &Config, out: &mut Outputs) -> Result<String, CliError> {
    let states = &cfg.entmetrics.states;
    if states.is_empty() {
        return Err(CliError::field("entmetrics.states", "no states given"));
    }
    let mut t = Table::new(
        "entmetrics",
        &[
            ("state", "1"),
            ("singlet_fraction", "1"),
            ("min_pt_eigenvalue", "1"),
            ("concurrence", "1"),
            ("eof", "ebits"),
            ("entangled", "1"),
        ],
    );
    for s in states {
        let rho = s.build()?;
        let r = report(&rho)?;
        t.push(vec![
            s.label().into(),
            rho.singlet_fraction()?.into(),
            r.min_pt_eigenvalue.into(),
            r.concurrence.into(),
            r.eof.into(),
            r.entangled.into(),
        ]);
    }
    out.table(&t)?;
    Ok(t.render())
}
