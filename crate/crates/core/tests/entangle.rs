use nalgebra::{Complex, DVector};
use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::ToPrimitive;
use phipsim::entangle::{
    bisect_threshold, braunstein_bounds, braunstein_exact, concurrence, concurrence_general, crossover_boltzmann,
    crossover_qubits, eof, eof_from_concurrence, partial_transpose, ppt, qubit_entropy, report,
    st_closed_form_concurrence, sv_compression, warren_bound,
};
use phipsim::linalg::CMat;
use phipsim::spin::DensityMatrix;
use proptest::prelude::*;

type C = Complex<f64>;

fn h2(x: f64) -> f64 {
    [x, 1.0 - x].iter().filter(|&&p| p > 0.0).map(|&p| -p * p.log2()).sum()
}

fn ket(v: &[f64]) -> DVector<C> {
    let k = DVector::from_iterator(4, (0..4).map(|i| C::new(v[i], v[4 + i])));
    let n = k.norm();
    k / C::new(n, 0.0)
}

fn mixed(v: &[f64], rank: usize) -> DensityMatrix<f64> {
    let a = CMat::from_fn(4, rank, |r, c| C::new(v[4 * c + r], v[16 + 4 * c + r]));
    let m = &a * a.adjoint();
    let tr = m.trace();
    DensityMatrix::new(m / tr).unwrap()
}

/// 2x2 unitary from Euler angles.
fn local(a: f64, b: f64, c: f64) -> CMat<f64> {
    let e = |x: f64| C::from_polar(1.0, x);
    CMat::from_row_slice(
        2,
        2,
        &[e(-(a + c) / 2.0) * b.cos(), -e(-(a - c) / 2.0) * b.sin(), e((a - c) / 2.0) * b.sin(), e((a + c) / 2.0) * b.cos()],
    )
}

#[test]
fn werner_family() {
    for eps in [0.0, 0.2, 1.0 / 3.0, 0.5, 0.916, 1.0] {
        let rho = DensityMatrix::<f64>::werner(eps).unwrap();
        let r = report(&rho).unwrap();
        let want_c = ((3.0 * eps - 1.0) / 2.0).max(0.0);
        assert!((r.concurrence - want_c).abs() < 1e-10, "eps = {eps}");
        assert!((r.min_pt_eigenvalue - (1.0 - 3.0 * eps) / 4.0).abs() < 1e-12);
        let x = (1.0 + (1.0 - want_c * want_c).sqrt()) / 2.0;
        assert!((r.eof - h2(x)).abs() < 1e-9);
    }
    // the threshold found by bisection is 1/3
    let t = bisect_threshold(0.0_f64, 1.0, 1e-10, |e| Ok(ppt(&DensityMatrix::werner(e)?)?.min_eigenvalue < 0.0)).unwrap();
    assert!((t - 1.0 / 3.0).abs() < 1e-9);
}

#[test]
fn product_and_classical_states_are_separable() {
    for idx in 0..4 {
        assert_eq!(concurrence(&DensityMatrix::<f64>::basis_state(2, idx).unwrap()).unwrap(), 0.0);
    }
    let r = report(&DensityMatrix::<f64>::maximally_mixed(2).unwrap()).unwrap();
    assert!(!r.entangled && r.min_pt_eigenvalue > 0.0);
    // the equal singlet/T0 mixture is classically correlated
    let rho = DensityMatrix::<f64>::singlet_triplet(0.5, 0.5, 0.0).unwrap();
    assert!(concurrence(&rho).unwrap() < 1e-12);
}

#[test]
fn singlet_triplet_closed_form() {
    for (a, b, c) in [(1.0, 0.0, 0.0), (0.925, 0.048, 0.0135), (0.6, 0.1, 0.15), (0.3, 0.3, 0.2)] {
        let rho = DensityMatrix::<f64>::singlet_triplet(a, b, c).unwrap();
        let want = ((a - b).abs() - 2.0 * c).max(0.0);
        assert!((concurrence(&rho).unwrap() - want).abs() < 1e-10);
        assert!((st_closed_form_concurrence(a, b, c) - want).abs() < 1e-15);
    }
}

#[test]
fn eof_limits() {
    assert_eq!(eof_from_concurrence(0.0).unwrap(), 0.0);
    assert!((eof_from_concurrence(1.0_f64).unwrap() - 1.0).abs() < 1e-15);
    assert!(eof_from_concurrence(1.5).is_err());
    assert!(eof_from_concurrence(-0.1).is_err());
}

#[test]
fn partial_transpose_swaps_first_qubit_indices() {
    let m = CMat::from_fn(4, 4, |r, c| C::new((4 * r + c) as f64, 0.0));
    let pt = partial_transpose(&m).unwrap();
    // ⟨i k|ρ^T1|j l⟩ = ⟨j k|ρ|i l⟩
    for (i, k, j, l) in [(0, 0, 1, 0), (0, 1, 1, 0), (1, 1, 0, 0), (0, 1, 0, 1)] {
        assert_eq!(pt[(2 * i + k, 2 * j + l)], m[(2 * j + k, 2 * i + l)]);
    }
    assert!(partial_transpose(&CMat::<f64>::identity(8, 8)).is_err());
}

#[test]
fn braunstein_bounds_exact_forms() {
    for n in 1..=40usize {
        let (l, u) = braunstein_exact(n).unwrap();
        let two = BigInt::from(2);
        let recip = BigRational::from_integer(BigInt::from(1)) / &l - BigRational::from_integer(BigInt::from(1));
        assert_eq!(recip, BigRational::from_integer(num_traits::pow(two.clone(), 2 * n - 1)));
        let (lf, uf) = braunstein_bounds::<f64>(n).unwrap();
        assert!((lf / l.to_f64().unwrap() - 1.0).abs() < 1e-14);
        assert!((uf - 1.0 / (1.0 + 2f64.powf(n as f64 / 2.0))).abs() < 1e-15);
        assert_eq!(u.is_some(), n % 2 == 0);
        assert!(lf < uf || n == 1);
    }
}

#[test]
fn pseudo_pure_crossover() {
    let b = 1e-5;
    let first = (1..=40).find(|&n| n as f64 * b / 2f64.powi(n as i32) >= 1.0 / (1.0 + 2f64.powi(2 * n as i32 - 1)));
    assert_eq!(crossover_qubits(b, 40).unwrap(), first);
    assert_eq!(first, Some(14));
    assert_eq!(crossover_qubits(b, 10).unwrap(), None);
    for n in [2, 7, 14] {
        let bc: f64 = crossover_boltzmann(n).unwrap();
        let (lo, _) = braunstein_bounds::<f64>(n).unwrap();
        assert!((warren_bound(n, bc).unwrap() / lo - 1.0).abs() < 1e-12);
    }
    assert!(warren_bound(0, b).is_err());
}

#[test]
fn compression_entropy() {
    for eps in [0.9, 0.5, 0.1, 1e-3, 6.4e-5] {
        let s = qubit_entropy(eps).unwrap();
        let direct = h2((1.0 + eps) / 2.0);
        // direct evaluation loses digits of 1 - S at small polarization
        assert!((s - direct).abs() < 1e-12, "{eps}");
        let c = sv_compression(20, eps).unwrap();
        assert!((c.k_exact - 20.0 * (1.0 - s)).abs() < 1e-9 * c.k_exact.max(1e-12) + 1e-15);
    }
    let c = sv_compression(1, 6.4e-5_f64).unwrap();
    assert!((c.k_exact / c.k_approx - 1.0).abs() < 1e-8);
    assert!((c.qubits_per_pure - 2.0 * 2f64.ln() / 6.4e-5f64.powi(2)).abs() / c.qubits_per_pure < 1e-8);
    assert!(qubit_entropy(1.2).is_err());
}

proptest! {
    #[test]
    fn pure_state_concurrence(v in prop::collection::vec(-1.0..1.0_f64, 8)) {
        prop_assume!(v.iter().map(|x| x * x).sum::<f64>() > 1e-3);
        let k = ket(&v);
        let want = 2.0 * (k[0] * k[3] - k[1] * k[2]).norm();
        let rho = DensityMatrix::pure(&k).unwrap();
        prop_assert!((concurrence(&rho).unwrap() - want).abs() < 1e-7);
        prop_assert!((concurrence_general(rho.matrix()).unwrap() - want).abs() < 1e-6);
        // pure-state EOF is the entropy of the reduced state
        let p = (k[0].norm_sqr() + k[1].norm_sqr()).clamp(0.0, 1.0);
        let rdm = CMat::from_row_slice(2, 2, &[
            C::new(p, 0.0), k[0] * k[2].conj() + k[1] * k[3].conj(),
            k[2] * k[0].conj() + k[3] * k[1].conj(), C::new(1.0 - p, 0.0),
        ]);
        let ev = rdm.symmetric_eigenvalues();
        let s: f64 = ev.iter().filter(|&&x| x > 1e-15).map(|&x| -x * x.log2()).sum();
        prop_assert!((eof(&rho).unwrap() - s).abs() < 1e-6);
    }

    #[test]
    fn ppt_agrees_with_concurrence(v in prop::collection::vec(-1.0..1.0_f64, 32), rank in 1usize..5) {
        let rho = mixed(&v, rank);
        let r = report(&rho).unwrap();
        // for two qubits PPT failure and positive concurrence coincide
        prop_assume!(r.min_pt_eigenvalue.abs() > 1e-6 && (r.concurrence > 1e-6 || r.concurrence == 0.0));
        prop_assert_eq!(r.min_pt_eigenvalue < 0.0, r.concurrence > 0.0);
    }

    #[test]
    fn concurrence_is_local_unitary_invariant(
        v in prop::collection::vec(-1.0..1.0_f64, 32),
        e in prop::collection::vec(-3.0..3.0_f64, 6),
    ) {
        let rho = mixed(&v, 3);
        let u = local(e[0], e[1], e[2]).kronecker(&local(e[3], e[4], e[5]));
        let c0 = concurrence(&rho).unwrap();
        let c1 = concurrence(&rho.evolve(&u)).unwrap();
        prop_assert!((c0 - c1).abs() < 1e-9);
    }
}
