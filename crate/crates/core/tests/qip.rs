use nalgebra::Complex;
use phipsim::linalg::{cr, max_abs_diff, unitarity_defect, CMat};
use phipsim::qip::{
    deutsch_jozsa, full_twirl, grover, run_circuit, singlet_bridge, twirl_group, Answer, Axis, DeutschFunction, Gate,
    GateCircuit, GateNoise, Oracle, TwirlMode,
};
use phipsim::spin::{DensityMatrix, SpinSystem};
use proptest::prelude::*;

type C = Complex<f64>;

fn real(rows: &[[f64; 4]; 4]) -> CMat<f64> {
    CMat::from_fn(4, 4, |r, c| C::new(rows[r][c], 0.0))
}

fn state_from(v: &[f64]) -> DensityMatrix<f64> {
    let a = CMat::from_fn(4, 4, |r, c| C::new(v[4 * r + c], v[16 + 4 * r + c]));
    let m = &a * a.adjoint() + CMat::identity(4, 4) * cr(1e-3);
    let tr = m.trace();
    DensityMatrix::new(m / tr).unwrap()
}

#[test]
fn gates_match_textbook_matrices() {
    let cnot = real(&[[1.0, 0.0, 0.0, 0.0], [0.0, 1.0, 0.0, 0.0], [0.0, 0.0, 0.0, 1.0], [0.0, 0.0, 1.0, 0.0]]);
    assert_eq!(Gate::<f64>::Cnot { control: 0, target: 1 }.unitary(2).unwrap(), cnot);
    let rev = real(&[[1.0, 0.0, 0.0, 0.0], [0.0, 0.0, 0.0, 1.0], [0.0, 0.0, 1.0, 0.0], [0.0, 1.0, 0.0, 0.0]]);
    assert_eq!(Gate::<f64>::Cnot { control: 1, target: 0 }.unitary(2).unwrap(), rev);

    let h = std::f64::consts::FRAC_1_SQRT_2;
    let h_on_1 = real(&[[h, h, 0.0, 0.0], [h, -h, 0.0, 0.0], [0.0, 0.0, h, h], [0.0, 0.0, h, -h]]);
    assert!(max_abs_diff(&Gate::<f64>::Hadamard { qubit: 1 }.unitary(2).unwrap(), &h_on_1) < 1e-15);

    let theta = 0.77_f64;
    let (c, s) = ((theta / 2.0).cos(), (theta / 2.0).sin());
    let rx = CMat::from_row_slice(2, 2, &[C::new(c, 0.0), C::new(0.0, -s), C::new(0.0, -s), C::new(c, 0.0)]);
    let want = rx.kronecker(&CMat::identity(2, 2));
    let got = Gate::Rotation { qubit: 0, axis: Axis::X, angle: theta }.unitary(2).unwrap();
    assert!(max_abs_diff(&got, &want) < 1e-15);
    let rz = Gate::Rotation { qubit: 1, axis: Axis::Z, angle: theta }.unitary(2).unwrap();
    assert!((rz[(0, 0)] - C::from_polar(1.0, -theta / 2.0)).norm() < 1e-15);
    assert!((rz[(1, 1)] - C::from_polar(1.0, theta / 2.0)).norm() < 1e-15);

    assert!(Gate::<f64>::Cnot { control: 1, target: 1 }.unitary(2).is_err());
    assert!(Gate::<f64>::Not { qubit: 2 }.unitary(2).is_err());
    assert!(Gate::<f64>::Oracle { oracle: Oracle::Mark { target: 4 } }.unitary(2).is_err());
}

#[test]
fn deutsch_oracles_are_controlled_functions() {
    for f in DeutschFunction::ALL {
        let u = Gate::<f64>::Oracle { oracle: Oracle::Deutsch { function: f, input: 0, ancilla: 1 } }.unitary(2).unwrap();
        for x in 0..2 {
            for y in 0..2 {
                let out = 2 * x + (y ^ f.eval(x));
                assert_eq!(u[(out, 2 * x + y)], C::new(1.0, 0.0));
            }
        }
        assert_eq!(f.to_string().parse::<DeutschFunction>().unwrap(), f);
    }
    assert!("12".parse::<DeutschFunction>().is_err());
}

#[test]
fn bridge_sends_singlet_to_ground_state() {
    let out = run_circuit(&DensityMatrix::<f64>::singlet(), &singlet_bridge(), None).unwrap();
    assert!((out.populations()[0] - 1.0).abs() < 1e-14);
}

#[test]
fn deutsch_jozsa_on_werner_states() {
    for eps in [1.0, 0.916, 0.5, 0.1] {
        let rho = DensityMatrix::<f64>::werner(eps).unwrap();
        for f in DeutschFunction::ALL {
            let r = deutsch_jozsa(f, &rho, None).unwrap();
            let want = if f.is_balanced() { Answer::Balanced } else { Answer::Constant };
            assert_eq!(r.answer, want);
            // the polarized part answers correctly, the mixed part half the time
            assert!((r.success_probability - (1.0 + eps) / 2.0).abs() < 1e-12, "{f} at {eps}");
        }
    }
}

#[test]
fn grover_iterations_follow_rotation_angle() {
    let rho = DensityMatrix::<f64>::singlet();
    let theta = (0.5_f64).asin();
    for k in 0..4 {
        for target in 0..4 {
            let r = grover(target, &rho, k, None).unwrap();
            let want = ((2 * k + 1) as f64 * theta).sin().powi(2);
            assert!((r.success_probability - want).abs() < 1e-12, "k = {k}");
        }
    }
    let eps = 0.916_f64;
    let r = grover(2, &DensityMatrix::werner(eps).unwrap(), 1, None).unwrap();
    assert_eq!(r.answer, Answer::Found(2));
    assert!((r.success_probability - (eps + (1.0 - eps) / 4.0)).abs() < 1e-12);
    assert!(grover(4, &rho, 1, None).is_err());
}

#[test]
fn relaxation_during_gates_costs_fidelity() {
    let sys = SpinSystem::<f64>::dppe().with_relaxation(Some(1.7), Some(0.58)).unwrap();
    let noise = GateNoise::from_system(&sys, 20e-6).unwrap();
    assert!((noise.two_qubit_s - 1.0 / (2.0 * 4.6)).abs() < 1e-9);
    let rho = DensityMatrix::<f64>::singlet();
    let clean = grover(1, &rho, 1, None).unwrap();
    let noisy = grover(1, &rho, 1, Some(&noise)).unwrap();
    assert!(noisy.success_probability < clean.success_probability - 1e-3);
    assert!((noisy.final_state.trace().re - 1.0).abs() < 1e-12);
    assert_eq!(noisy.answer, Answer::Found(1));
    let uncoupled = SpinSystem::<f64>::two_spin(100.0, 0.0).unwrap();
    assert!(GateNoise::from_system(&uncoupled, 1e-5).is_err());
}

#[test]
fn twirl_group_fixes_singlet() {
    let group = twirl_group::<f64>();
    assert_eq!(group.len(), 12);
    let s = DensityMatrix::<f64>::singlet();
    for (i, u) in group.iter().enumerate() {
        assert!(unitarity_defect(u) < 1e-14);
        assert!(s.evolve(u).max_diff(&s) < 1e-14);
        for v in &group[..i] {
            // distinct up to a global phase
            let overlap = (v.adjoint() * u).trace().norm() / 4.0;
            assert!(overlap < 1.0 - 1e-9);
        }
    }
}

#[test]
fn sampled_twirl_converges() {
    let rho = DensityMatrix::<f64>::singlet_triplet(0.7, 0.3, 0.0).unwrap();
    let exact = full_twirl(&rho, TwirlMode::Deterministic).unwrap();
    let run = |samples, seed| full_twirl(&rho, TwirlMode::Sampled { samples, seed }).unwrap();
    assert_eq!(run(50, 1), run(50, 1));
    let err = |n| (0..8).map(|seed| run(n, seed).max_diff(&exact)).sum::<f64>() / 8.0;
    let (e10, e1000) = (err(10), err(1000));
    assert!(e1000 < e10 / 3.0, "{e10} {e1000}");
    assert!(e1000 < 0.02);
    assert!(full_twirl(&rho, TwirlMode::Sampled { samples: 0, seed: 0 }).is_err());
}

proptest! {
    #[test]
    fn twirl_output_is_werner(v in prop::collection::vec(-1.0..1.0_f64, 32)) {
        let rho = state_from(&v);
        let f = rho.singlet_fraction().unwrap();
        let out = full_twirl(&rho, TwirlMode::Deterministic).unwrap();
        let want = DensityMatrix::werner_extended((4.0 * f - 1.0) / 3.0).unwrap();
        prop_assert!(out.max_diff(&want) < 1e-12);
    }

    #[test]
    fn circuits_are_unitary(ops in prop::collection::vec((0usize..6, 0usize..2, -4.0..4.0_f64), 1..12)) {
        let mut c = GateCircuit::new();
        for (kind, q, a) in ops {
            c = c.push(match kind {
                0 => Gate::Rotation { qubit: q, axis: Axis::Y, angle: a },
                1 => Gate::Hadamard { qubit: q },
                2 => Gate::Phase { qubit: q, angle: a },
                3 => Gate::Not { qubit: q },
                4 => Gate::Cnot { control: q, target: 1 - q },
                _ => Gate::Oracle { oracle: Oracle::Mark { target: (a.abs() as usize) % 4 } },
            });
        }
        prop_assert!(unitarity_defect(&c.unitary(2).unwrap()) < 1e-12);
    }
}
