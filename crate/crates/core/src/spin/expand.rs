//! Expansion of operators in product-operator bases.

use super::operator::{Basis, OperatorLabel};
use crate::error::{invalid, Result};
use crate::linalg::{trace_product, CMat};
use crate::scalar::Real;
use nalgebra::{Complex, ComplexField};

/// Coefficients `c_L = Tr(L† A) / Tr(L† L)` over all `4^n` labels.
#[derive(Clone, Debug)]
pub struct BasisExpansion<T: Real> {
    pub basis: Basis,
    pub n_qubits: usize,
    pub terms: Vec<(OperatorLabel, Complex<T>)>,
}

/// Expands a `2^n x 2^n` operator in the chosen basis.
///
/// Every single-qubit basis here is Hilbert-Schmidt orthogonal, so the
/// coefficients reconstruct the operator exactly.
pub fn expand<T: Real>(op: &CMat<T>, basis: Basis) -> Result<BasisExpansion<T>> {
    let d = op.nrows();
    if !op.is_square() || d < 2 || !d.is_power_of_two() {
        return Err(invalid("expansion needs a square 2^n operator"));
    }
    let n = d.trailing_zeros() as usize;
    if n > super::MAX_QUBITS {
        return Err(invalid("register too large"));
    }
    let factors = basis.factors();
    let mut terms = Vec::with_capacity(1 << (2 * n));
    for code in 0..(1usize << (2 * n)) {
        let fs = (0..n).map(|q| factors[(code >> (2 * (n - 1 - q))) & 3]).collect();
        let label = OperatorLabel::new(fs)?;
        let l = label.matrix::<T>();
        let ld = l.adjoint();
        let num = trace_product(&ld, op);
        let den = trace_product(&ld, &l).re;
        terms.push((label, num / den));
    }
    Ok(BasisExpansion { basis, n_qubits: n, terms })
}

impl<T: Real> BasisExpansion<T> {
    pub fn coefficient(&self, label: &OperatorLabel) -> Option<Complex<T>> {
        self.terms.iter().find(|(l, _)| l == label).map(|(_, c)| *c)
    }

    /// Coefficient lookup by label string such as `"zz"`.
    pub fn get(&self, label: &str) -> Result<Complex<T>> {
        let l = OperatorLabel::parse(label)?;
        self.coefficient(&l)
            .ok_or_else(|| invalid(format!("label {label} not in {:?} basis", self.basis)))
    }

    /// Sum of `c_L L`.
    pub fn reconstruct(&self) -> CMat<T> {
        let d = 1usize << self.n_qubits;
        self.terms
            .iter()
            .fold(CMat::zeros(d, d), |acc, (l, c)| acc + l.matrix::<T>() * *c)
    }

    /// Terms whose coefficient modulus exceeds `tol`.
    pub fn significant(&self, tol: T) -> Vec<(OperatorLabel, Complex<T>)> {
        self.terms.iter().filter(|(_, c)| c.modulus() > tol).cloned().collect()
    }
}
