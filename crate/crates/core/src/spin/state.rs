//! Validated density matrices and standard state constructors.

use super::operator::{spin_op, Factor};
use super::{bit, dim, MAX_QUBITS};
use crate::error::{invalid, Error, Result};
use crate::linalg::{cr, eigvalsh, is_hermitian, max_abs_diff, trace_product, CMat};
use crate::scalar::Real;
use nalgebra::{Complex, DVector};
use serde::{Deserialize, Serialize};
use std::io::{Read, Write};

/// Hermitian, unit-trace, positive semidefinite operator on `n` qubits.
///
/// Serializes as `{"dim", "re", "im"}` with row-major nested arrays and is
/// revalidated on deserialization.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(try_from = "StateRecord", into = "StateRecord", bound = "")]
pub struct DensityMatrix<T: Real> {
    mat: CMat<T>,
    n_qubits: usize,
}

fn qubits_for_dim(d: usize) -> Option<usize> {
    if d >= 2 && d.is_power_of_two() {
        Some(d.trailing_zeros() as usize)
    } else {
        None
    }
}

impl<T: Real> DensityMatrix<T> {
    /// Validates hermiticity, unit trace and positivity.
    pub fn new(mat: CMat<T>) -> Result<Self> {
        let n_qubits = Self::check_shape(&mat)?;
        if !mat.iter().all(|z| z.re.is_finite() && z.im.is_finite()) {
            return Err(Error::InvalidState("non-finite entries".into()));
        }
        let tol = T::state_tol();
        if !is_hermitian(&mat, tol) {
            return Err(Error::InvalidState("matrix is not Hermitian".into()));
        }
        let tr = mat.trace();
        if (tr.re - T::one()).abs() > tol || tr.im.abs() > tol {
            return Err(Error::InvalidState(format!("trace is {} + {}i, expected 1", tr.re, tr.im)));
        }
        let lo = eigvalsh(&mat)[0];
        if lo < -T::psd_slack() {
            return Err(Error::InvalidState(format!("negative eigenvalue {lo}")));
        }
        Ok(Self { mat, n_qubits })
    }

    fn check_shape(mat: &CMat<T>) -> Result<usize> {
        if !mat.is_square() {
            return Err(Error::InvalidState("matrix is not square".into()));
        }
        let n = qubits_for_dim(mat.nrows())
            .ok_or_else(|| Error::InvalidState(format!("dimension {} is not 2^n", mat.nrows())))?;
        if n > MAX_QUBITS {
            return Err(Error::InvalidState(format!("{n} qubits exceeds limit {MAX_QUBITS}")));
        }
        Ok(n)
    }

    /// Wraps a matrix produced by a trace-preserving positive map.
    pub(crate) fn from_trusted(mat: CMat<T>) -> Self {
        let n_qubits = qubits_for_dim(mat.nrows()).expect("power-of-two dimension");
        debug_assert!(is_hermitian(&mat, T::lit(1e-3)));
        Self { mat, n_qubits }
    }

    /// Builds `1/N + deviation` and validates it.
    pub fn from_deviation(deviation: &CMat<T>) -> Result<Self> {
        let d = deviation.nrows();
        let mm = CMat::<T>::identity(d, d) * cr(T::one() / T::from_count(d));
        Self::new(mm + deviation)
    }

    pub fn maximally_mixed(n_qubits: usize) -> Result<Self> {
        check_n(n_qubits)?;
        let d = dim(n_qubits);
        Ok(Self::from_trusted(CMat::identity(d, d) * cr(T::one() / T::from_count(d))))
    }

    /// `|ψ⟩⟨ψ|` for a normalised ket.
    pub fn pure(ket: &DVector<Complex<T>>) -> Result<Self> {
        let norm = ket.norm();
        if (norm - T::one()).abs() > T::state_tol() {
            return Err(invalid(format!("ket norm {norm} is not 1")));
        }
        Self::new(ket * ket.adjoint())
    }

    /// Computational basis state `|idx⟩⟨idx|`.
    pub fn basis_state(n_qubits: usize, idx: usize) -> Result<Self> {
        check_n(n_qubits)?;
        let d = dim(n_qubits);
        if idx >= d {
            return Err(invalid(format!("basis index {idx} out of range for dimension {d}")));
        }
        Self::pure(&basis_ket(d, idx))
    }

    /// Singlet `S_0 = |ψ⁻⟩⟨ψ⁻|`.
    pub fn singlet() -> Self {
        Self::from_trusted(projector(&bell_ket(BellState::PsiMinus)))
    }

    /// Triplet state with magnetic quantum number `m ∈ {-1, 0, 1}`.
    pub fn triplet(m: i32) -> Result<Self> {
        let ket = match m {
            1 => basis_ket(4, 0),
            0 => bell_ket(BellState::PsiPlus),
            -1 => basis_ket(4, 3),
            _ => return Err(invalid(format!("triplet m must be -1, 0 or 1, got {m}"))),
        };
        Ok(Self::from_trusted(projector(&ket)))
    }

    /// High-temperature equilibrium state `(1 - B Σ I_z)/N`.
    pub fn thermal(n_qubits: usize, boltzmann: T) -> Result<Self> {
        check_n(n_qubits)?;
        if !(boltzmann > T::zero() && boltzmann < T::one()) {
            return Err(invalid(format!("Boltzmann factor {boltzmann} must lie in (0, 1)")));
        }
        let d = dim(n_qubits);
        let iz = super::operator::total::<T>(n_qubits, Factor::Z);
        let m = (CMat::identity(d, d) - iz * cr(boltzmann)) * cr(T::one() / T::from_count(d));
        Self::new(m)
    }

    /// Pseudo-pure state `(1-ε)/N + ε|ψ⟩⟨ψ|`.
    pub fn pseudopure(eps: T, ket: &DVector<Complex<T>>) -> Result<Self> {
        if !(eps >= T::zero() && eps <= T::one()) {
            return Err(invalid(format!("polarization {eps} must lie in [0, 1]")));
        }
        let d = ket.len();
        let n = qubits_for_dim(d).ok_or_else(|| invalid("ket dimension is not 2^n"))?;
        let pure = Self::pure(ket)?;
        let mm = Self::maximally_mixed(n)?;
        Ok(Self::from_trusted(
            mm.mat * cr(T::one() - eps) + pure.mat * cr(eps),
        ))
    }

    /// Werner state `(1-ε)/4 + ε S_0` for `ε ∈ [0, 1]`.
    pub fn werner(eps: T) -> Result<Self> {
        Self::pseudopure(eps, &bell_ket(BellState::PsiMinus))
    }

    /// Werner state over the full positive range `ε ∈ [-1/3, 1]`.
    pub fn werner_extended(eps: T) -> Result<Self> {
        let third = T::one() / T::lit(3.0);
        if !(eps >= -third - T::state_tol() && eps <= T::one()) {
            return Err(invalid(format!("Werner polarization {eps} outside [-1/3, 1]")));
        }
        let mm = Self::maximally_mixed(2)?;
        let s0 = Self::singlet();
        Self::new(mm.mat * cr(T::one() - eps) + s0.mat * cr(eps))
    }

    /// Bell-state projector.
    pub fn bell(which: BellState) -> Self {
        Self::from_trusted(projector(&bell_ket(which)))
    }

    /// Para-enriched hydrogen state `F S_0 + (1-F)/3 (T_1 + T_0 + T_-1)`.
    pub fn para_enriched(para_fraction: T) -> Result<Self> {
        if !(para_fraction >= T::zero() && para_fraction <= T::one()) {
            return Err(invalid(format!("para fraction {para_fraction} must lie in [0, 1]")));
        }
        let third = (T::one() - para_fraction) / T::lit(3.0);
        Self::singlet_triplet(para_fraction, third, third)
    }

    /// `a S_0 + b T_0 + c (T_1 + T_-1)` with `a + b + 2c = 1`.
    pub fn singlet_triplet(a: T, b: T, c: T) -> Result<Self> {
        let tol = T::state_tol().max(T::lit(1e-9));
        if (a + b + c + c - T::one()).abs() > tol {
            return Err(invalid(format!("fractions a={a} b={b} c={c} do not satisfy a+b+2c=1")));
        }
        if a < -tol || b < -tol || c < -tol {
            return Err(invalid(format!("fractions a={a} b={b} c={c} must be non-negative")));
        }
        let m = Self::singlet().mat * cr(a)
            + Self::triplet(0)?.mat * cr(b)
            + (Self::triplet(1)?.mat + Self::triplet(-1)?.mat) * cr(c);
        Ok(Self::from_trusted(m))
    }

    pub fn matrix(&self) -> &CMat<T> {
        &self.mat
    }

    pub fn into_matrix(self) -> CMat<T> {
        self.mat
    }

    pub fn n_qubits(&self) -> usize {
        self.n_qubits
    }

    pub fn dim(&self) -> usize {
        self.mat.nrows()
    }

    /// `ρ - 1/N`.
    pub fn deviation(&self) -> CMat<T> {
        let d = self.dim();
        &self.mat - CMat::identity(d, d) * cr(T::one() / T::from_count(d))
    }

    pub fn trace(&self) -> Complex<T> {
        self.mat.trace()
    }

    pub fn purity(&self) -> T {
        trace_product(&self.mat, &self.mat).re
    }

    pub fn eigenvalues(&self) -> Vec<T> {
        eigvalsh(&self.mat)
    }

    /// Expectation value `Tr(ρ A)`.
    pub fn expectation(&self, op: &CMat<T>) -> Complex<T> {
        trace_product(&self.mat, op)
    }

    /// Overlap `⟨ψ|ρ|ψ⟩` with a pure state.
    pub fn fidelity_pure(&self, ket: &DVector<Complex<T>>) -> T {
        (ket.adjoint() * &self.mat * ket)[(0, 0)].re
    }

    /// Population of the singlet, `⟨ψ⁻|ρ|ψ⁻⟩`.
    pub fn singlet_fraction(&self) -> Result<T> {
        if self.n_qubits != 2 {
            return Err(invalid("singlet fraction needs a two-qubit state"));
        }
        Ok(self.fidelity_pure(&bell_ket(BellState::PsiMinus)))
    }

    /// Diagonal populations.
    pub fn populations(&self) -> Vec<T> {
        (0..self.dim()).map(|i| self.mat[(i, i)].re).collect()
    }

    /// Probability that `qubit` is found in |β⟩ (logical 1).
    pub fn prob_one(&self, qubit: usize) -> T {
        let n = self.n_qubits;
        (0..self.dim())
            .filter(|&i| bit(n, i, qubit) == 1)
            .fold(T::zero(), |s, i| s + self.mat[(i, i)].re)
    }

    /// `U ρ U†`.
    pub fn evolve(&self, u: &CMat<T>) -> Self {
        Self::from_trusted(crate::linalg::conjugate(u, &self.mat))
    }

    pub fn max_diff(&self, other: &Self) -> T {
        max_abs_diff(&self.mat, &other.mat)
    }
}

#[derive(Serialize, Deserialize)]
struct StateRecord {
    dim: usize,
    re: Vec<Vec<f64>>,
    im: Vec<Vec<f64>>,
}

impl<T: Real> From<DensityMatrix<T>> for StateRecord {
    fn from(rho: DensityMatrix<T>) -> Self {
        let d = rho.dim();
        let part = |f: fn(&Complex<T>) -> T| (0..d).map(|r| (0..d).map(|c| f(&rho.mat[(r, c)]).as_f64()).collect()).collect();
        StateRecord { dim: d, re: part(|z| z.re), im: part(|z| z.im) }
    }
}

impl<T: Real> TryFrom<StateRecord> for DensityMatrix<T> {
    type Error = Error;

    fn try_from(rec: StateRecord) -> Result<Self> {
        let d = rec.dim;
        let rows_ok = |m: &Vec<Vec<f64>>| m.len() == d && m.iter().all(|r| r.len() == d);
        if !rows_ok(&rec.re) || !rows_ok(&rec.im) {
            return Err(Error::Serialization(format!("expected {d}x{d} re and im arrays")));
        }
        Self::new(CMat::from_fn(d, d, |r, c| Complex::new(T::lit(rec.re[r][c]), T::lit(rec.im[r][c]))))
    }
}

impl<T: Real> DensityMatrix<T> {
    /// Writes `row,col,re,im` records, one per element.
    pub fn write_csv<W: Write>(&self, w: W) -> Result<()> {
        let mut wr = csv::Writer::from_writer(w);
        wr.write_record(["row", "col", "re", "im"])?;
        for r in 0..self.dim() {
            for c in 0..self.dim() {
                let z = self.mat[(r, c)];
                wr.write_record(&[r.to_string(), c.to_string(), z.re.as_f64().to_string(), z.im.as_f64().to_string()])?;
            }
        }
        wr.flush()?;
        Ok(())
    }

    pub fn read_csv<R: Read>(r: R) -> Result<Self> {
        let mut rd = csv::ReaderBuilder::new().comment(Some(b'#')).from_reader(r);
        let rows: Vec<(usize, usize, f64, f64)> = rd.deserialize().collect::<std::result::Result<_, _>>()?;
        let d = (rows.len() as f64).sqrt().round() as usize;
        if d * d != rows.len() {
            return Err(Error::Serialization(format!("{} elements do not form a square matrix", rows.len())));
        }
        let mut m = CMat::zeros(d, d);
        for (r, c, re, im) in rows {
            if r >= d || c >= d {
                return Err(Error::Serialization(format!("index ({r}, {c}) outside {d}x{d}")));
            }
            m[(r, c)] = Complex::new(T::lit(re), T::lit(im));
        }
        Self::new(m)
    }
}

fn check_n(n: usize) -> Result<()> {
    if n == 0 || n > MAX_QUBITS {
        return Err(invalid(format!("qubit count must be 1..={MAX_QUBITS}, got {n}")));
    }
    Ok(())
}

/// The four Bell states.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum BellState {
    PhiPlus,
    PhiMinus,
    PsiPlus,
    PsiMinus,
}

impl BellState {
    pub const ALL: [BellState; 4] = [
        BellState::PsiMinus,
        BellState::PhiPlus,
        BellState::PhiMinus,
        BellState::PsiPlus,
    ];
}

pub fn basis_ket<T: Real>(d: usize, idx: usize) -> DVector<Complex<T>> {
    let mut v = DVector::zeros(d);
    v[idx] = cr(T::one());
    v
}

pub fn bell_ket<T: Real>(which: BellState) -> DVector<Complex<T>> {
    let h = T::FRAC_1_SQRT_2();
    let (i, j, sign) = match which {
        BellState::PhiPlus => (0, 3, T::one()),
        BellState::PhiMinus => (0, 3, -T::one()),
        BellState::PsiPlus => (1, 2, T::one()),
        BellState::PsiMinus => (1, 2, -T::one()),
    };
    let mut v = DVector::zeros(4);
    v[i] = cr(h);
    v[j] = cr(h * sign);
    v
}

pub fn projector<T: Real>(ket: &DVector<Complex<T>>) -> CMat<T> {
    ket * ket.adjoint()
}

/// `I_z` of one qubit inside an `n`-qubit register.
pub fn iz_of<T: Real>(n: usize, qubit: usize) -> CMat<T> {
    spin_op(n, qubit, Factor::Z)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::spin::operator::two;

    fn quarter() -> CMat<f64> {
        CMat::identity(4, 4) * cr(0.25)
    }

    #[test]
    fn singlet_product_operator_form() {
        let s0 = DensityMatrix::<f64>::singlet();
        let expect = quarter() - two::zq_x::<f64>() - two::izsz::<f64>();
        assert!(max_abs_diff(s0.matrix(), &expect) < 1e-15);
    }

    #[test]
    fn triplet_product_operator_forms() {
        let t0 = DensityMatrix::<f64>::triplet(0).unwrap();
        let expect = quarter() + two::zq_x::<f64>() - two::izsz::<f64>();
        assert!(max_abs_diff(t0.matrix(), &expect) < 1e-15);
        for (m, s) in [(1, 1.0), (-1, -1.0)] {
            let t = DensityMatrix::<f64>::triplet(m).unwrap();
            let e = quarter()
                + (two::iz::<f64>() * cr(s) + two::sz::<f64>() * cr(s) + two::izsz::<f64>() * cr(2.0)) * cr(0.5);
            assert!(max_abs_diff(t.matrix(), &e) < 1e-15);
        }
    }

    #[test]
    fn para_enriched_deviation() {
        for f in [0.25, 0.5, 0.9, 1.0] {
            let r = DensityMatrix::<f64>::para_enriched(f).unwrap();
            let e = quarter() + (two::zq_x::<f64>() + two::izsz::<f64>()) * cr((1.0 - 4.0 * f) / 3.0);
            assert!(max_abs_diff(r.matrix(), &e) < 1e-15);
        }
        let ortho = DensityMatrix::<f64>::para_enriched(0.0).unwrap();
        let e = quarter() + (two::zq_x::<f64>() + two::izsz::<f64>()) * cr(1.0 / 3.0);
        assert!(max_abs_diff(ortho.matrix(), &e) < 1e-15);
    }

    #[test]
    fn thermal_eigenvalues() {
        let b = 6.48e-5;
        let r = DensityMatrix::<f64>::thermal(2, b).unwrap();
        let ev = r.eigenvalues();
        let expect = [(1.0 - b) / 4.0, 0.25, 0.25, (1.0 + b) / 4.0];
        for (a, e) in ev.iter().zip(expect) {
            assert!((a - e).abs() < 1e-15);
        }
        assert!(DensityMatrix::<f64>::thermal(2, 0.0).is_err());
        assert!(DensityMatrix::<f64>::thermal(2, 1.0).is_err());
    }

    #[test]
    fn rejects_invalid_matrices() {
        let mut m = quarter();
        m[(0, 1)] = cr(0.1);
        assert!(DensityMatrix::new(m).is_err());
        let m = quarter() * cr(2.0);
        assert!(DensityMatrix::new(m).is_err());
        let mut m = quarter();
        m[(0, 0)] = cr(-0.25);
        m[(1, 1)] = cr(0.75);
        assert!(DensityMatrix::new(m).is_err());
        assert!(DensityMatrix::<f64>::new(CMat::identity(3, 3) * cr(1.0 / 3.0)).is_err());
    }

    #[test]
    fn werner_spectrum() {
        let w = DensityMatrix::<f64>::werner(0.5).unwrap();
        let ev = w.eigenvalues();
        assert!((ev[3] - (0.125 + 0.5)).abs() < 1e-14);
        assert!((w.singlet_fraction().unwrap() - 0.625).abs() < 1e-14);
    }

    #[test]
    fn f32_states_validate() {
        let s = DensityMatrix::<f32>::para_enriched(0.9).unwrap();
        assert!((s.trace().re - 1.0).abs() < 1e-6);
        assert!(DensityMatrix::<f32>::thermal(2, 6.48e-5).is_ok());
    }
}
