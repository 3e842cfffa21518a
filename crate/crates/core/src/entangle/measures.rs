//! Partial transpose, concurrence and entanglement of formation.

use crate::error::{invalid, Error, Result};
use crate::linalg::{cl, cr, eigh, eigvalsh, kron_all, CMat};
use crate::scalar::Real;
use crate::spin::DensityMatrix;
use nalgebra::Schur;
use serde::{Deserialize, Serialize};

#[derive(Clone, Debug)]
pub struct PptResult<T: Real> {
    pub matrix: CMat<T>,
    /// Ascending.
    pub eigenvalues: Vec<T>,
    pub min_eigenvalue: T,
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
#[serde(bound = "")]
pub struct EntanglementReport<T: Real> {
    pub min_pt_eigenvalue: T,
    pub concurrence: T,
    pub eof: T,
    pub entangled: bool,
}

fn check_two_qubit(m: &CMat<impl Real>) -> Result<()> {
    if m.nrows() != 4 || m.ncols() != 4 {
        return Err(Error::Unsupported(format!(
            "two-qubit measures need a 4x4 matrix, got {}x{}",
            m.nrows(),
            m.ncols()
        )));
    }
    Ok(())
}

/// Partial transpose over the first qubit.
pub fn partial_transpose<T: Real>(m: &CMat<T>) -> Result<CMat<T>> {
    check_two_qubit(m)?;
    Ok(CMat::from_fn(4, 4, |r, c| {
        let (i, k) = (r >> 1, r & 1);
        let (j, l) = (c >> 1, c & 1);
        m[((j << 1) | k, (i << 1) | l)]
    }))
}

pub fn ppt<T: Real>(rho: &DensityMatrix<T>) -> Result<PptResult<T>> {
    let matrix = partial_transpose(rho.matrix())?;
    let eigenvalues = eigvalsh(&matrix);
    let min_eigenvalue = eigenvalues[0];
    Ok(PptResult { matrix, eigenvalues, min_eigenvalue })
}

fn sigma_yy<T: Real>() -> CMat<T> {
    let sy = CMat::from_fn(2, 2, |r, c| match (r, c) {
        (0, 1) => cl(0.0, -1.0),
        (1, 0) => cl(0.0, 1.0),
        _ => cl(0.0, 0.0),
    });
    kron_all(&[sy.clone(), sy])
}

/// Spin-flipped matrix `(σ_y⊗σ_y) ρ* (σ_y⊗σ_y)`.
pub fn spin_flip<T: Real>(m: &CMat<T>) -> Result<CMat<T>> {
    check_two_qubit(m)?;
    let yy = sigma_yy::<T>();
    Ok(&yy * m.map(|z| z.conj()) * &yy)
}

fn from_lambdas<T: Real>(mut lam: Vec<T>) -> T {
    lam.sort_by(|a, b| b.partial_cmp(a).unwrap_or(std::cmp::Ordering::Equal));
    (lam[0] - lam[1] - lam[2] - lam[3]).max(T::zero())
}

/// Wootters concurrence.
///
/// The `λ_i` are the singular values of `√ρ (σ_y⊗σ_y) √ρ*`, whose squares are
/// the eigenvalues of `√ρ ρ̃ √ρ`. Taking singular values avoids the square
/// root of round-off for rank-deficient states; eigenvalues of `ρ` below a
/// relative cutoff of `64 ε_mach` are treated as zero.
pub fn concurrence<T: Real>(rho: &DensityMatrix<T>) -> Result<T> {
    let m = rho.matrix();
    check_two_qubit(m)?;
    let (vals, vecs) = eigh(m);
    let cutoff = T::lit(64.0) * T::default_epsilon() * vals[3].abs();
    let roots = CMat::from_diagonal(&nalgebra::DVector::from_iterator(
        4,
        vals.iter().map(|&v| cr(if v > cutoff { v.sqrt() } else { T::zero() })),
    ));
    let sqrt_rho = &vecs * roots * vecs.adjoint();
    let k = &sqrt_rho * sigma_yy::<T>() * sqrt_rho.map(|z| z.conj());
    Ok(from_lambdas(k.singular_values().iter().copied().collect()))
}

/// Concurrence from the eigenvalues of the non-Hermitian `ρ ρ̃`, for
/// matrices that need not be positive.
pub fn concurrence_general<T: Real>(m: &CMat<T>) -> Result<T> {
    check_two_qubit(m)?;
    let prod = m * spin_flip(m)?;
    let schur = Schur::try_new(prod, T::default_epsilon(), 10_000)
        .ok_or_else(|| Error::Numeric("Schur decomposition did not converge".into()))?;
    let ev = schur
        .eigenvalues()
        .ok_or_else(|| Error::Numeric("eigenvalues unavailable".into()))?;
    let lam = ev.iter().map(|z| z.re.max(T::zero()).sqrt()).collect();
    Ok(from_lambdas(lam))
}

/// `-x lg x - (1-x) lg(1-x)` with `0 lg 0 = 0`.
pub fn binary_entropy<T: Real>(x: T) -> T {
    let term = |p: T| if p <= T::zero() { T::zero() } else { -p * p.log2() };
    term(x) + term(T::one() - x)
}

/// Entanglement of formation as a function of concurrence.
pub fn eof_from_concurrence<T: Real>(c: T) -> Result<T> {
    if !(c >= T::zero() && c <= T::one() + T::lit(1e-12)) {
        return Err(invalid(format!("concurrence {c} outside [0, 1]")));
    }
    let c = c.min(T::one());
    let x = (T::one() + (T::one() - c * c).max(T::zero()).sqrt()) / T::lit(2.0);
    Ok(binary_entropy(x))
}

pub fn eof<T: Real>(rho: &DensityMatrix<T>) -> Result<T> {
    eof_from_concurrence(concurrence(rho)?)
}

/// PPT spectrum, concurrence and entanglement of formation together.
pub fn report<T: Real>(rho: &DensityMatrix<T>) -> Result<EntanglementReport<T>> {
    let p = ppt(rho)?;
    let c = concurrence(rho)?;
    let tol = T::lit(1e-9);
    Ok(EntanglementReport {
        min_pt_eigenvalue: p.min_eigenvalue,
        concurrence: c,
        eof: eof_from_concurrence(c)?,
        entangled: c > tol,
    })
}

/// Concurrence of `a S_0 + b T_0 + c (T_1 + T_-1)`: `max(0, |a-b| - 2c)`.
pub fn st_closed_form_concurrence<T: Real>(a: T, b: T, c: T) -> T {
    ((a - b).abs() - c - c).max(T::zero())
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
#[serde(bound = "")]
pub struct StAnalysis<T: Real> {
    pub report: EntanglementReport<T>,
    pub closed_form_concurrence: T,
    /// `a > 1/2`, sufficient for entanglement whatever the triplet split.
    pub singlet_sufficient: bool,
}

pub fn st_mixture_analysis<T: Real>(a: T, b: T, c: T) -> Result<StAnalysis<T>> {
    let rho = DensityMatrix::singlet_triplet(a, b, c)?;
    Ok(StAnalysis {
        report: report(&rho)?,
        closed_form_concurrence: st_closed_form_concurrence(a, b, c),
        singlet_sufficient: a > T::lit(0.5),
    })
}

/// Smallest `x ∈ [lo, hi]` where a monotone predicate switches to true,
/// located to `tol` by bisection.
pub fn bisect_threshold<T: Real>(mut lo: T, mut hi: T, tol: T, pred: impl Fn(T) -> Result<bool>) -> Result<T> {
    if !(lo < hi) || !(tol > T::zero()) {
        return Err(invalid("bisection needs lo < hi and a positive tolerance"));
    }
    if pred(lo)? || !pred(hi)? {
        return Err(Error::Numeric("predicate does not change sign on the bracket".into()));
    }
    let two = T::lit(2.0);
    for _ in 0..200 {
        if hi - lo <= tol {
            break;
        }
        let mid = (lo + hi) / two;
        if pred(mid)? {
            hi = mid;
        } else {
            lo = mid;
        }
    }
    Ok((lo + hi) / two)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::spin::state::BellState;

    #[test]
    fn bell_states_are_maximally_entangled() {
        for b in BellState::ALL {
            let r = report(&DensityMatrix::<f64>::bell(b)).unwrap();
            assert!((r.concurrence - 1.0).abs() < 1e-12);
            assert!((r.eof - 1.0).abs() < 1e-12);
            assert!((r.min_pt_eigenvalue + 0.5).abs() < 1e-12);
        }
    }

    #[test]
    fn product_state_unentangled() {
        let r = report(&DensityMatrix::<f64>::basis_state(2, 0).unwrap()).unwrap();
        assert_eq!(r.concurrence, 0.0);
        assert!(!r.entangled);
        assert!(r.min_pt_eigenvalue >= -1e-15);
    }

    #[test]
    fn general_route_agrees() {
        let rho = DensityMatrix::<f64>::singlet_triplet(0.7, 0.1, 0.1).unwrap();
        let a = concurrence(&rho).unwrap();
        let b = concurrence_general(rho.matrix()).unwrap();
        assert!((a - b).abs() < 1e-9);
    }

    #[test]
    fn entropy_endpoints() {
        assert_eq!(binary_entropy(0.0_f64), 0.0);
        assert_eq!(binary_entropy(1.0_f64), 0.0);
        assert!((binary_entropy(0.5_f64) - 1.0).abs() < 1e-15);
    }

    #[test]
    fn rejects_wrong_dimension() {
        let r = DensityMatrix::<f64>::maximally_mixed(3).unwrap();
        assert!(matches!(ppt(&r), Err(Error::Unsupported(_))));
    }
}
