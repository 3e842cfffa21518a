//! Coherence-order bookkeeping for Zeeman-basis matrix elements.

use super::bit;
use crate::linalg::CMat;
use crate::scalar::Real;
use nalgebra::Complex;
use std::collections::BTreeMap;

/// Total magnetic quantum number of basis state `idx`, doubled.
pub fn twice_m(n: usize, idx: usize) -> i32 {
    (0..n).map(|q| if bit(n, idx, q) == 0 { 1 } else { -1 }).sum()
}

/// Coherence order `M_r - M_s` of element `(r, s)`.
pub fn coherence_order(n_qubits: usize, r: usize, s: usize) -> i32 {
    (twice_m(n_qubits, r) - twice_m(n_qubits, s)) / 2
}

/// Splits an operator into its coherence-order components.
pub fn coherence_decompose<T: Real>(op: &CMat<T>) -> BTreeMap<i32, CMat<T>> {
    let d = op.nrows();
    let n = d.trailing_zeros() as usize;
    let mut out: BTreeMap<i32, CMat<T>> = BTreeMap::new();
    for r in 0..d {
        for s in 0..d {
            let p = coherence_order(n, r, s);
            out.entry(p).or_insert_with(|| CMat::zeros(d, d))[(r, s)] = op[(r, s)];
        }
    }
    out
}

/// Zeroes every element whose coherence order fails `keep`.
pub fn coherence_filter<T: Real>(op: &CMat<T>, keep: impl Fn(i32) -> bool) -> CMat<T> {
    let d = op.nrows();
    let n = d.trailing_zeros() as usize;
    CMat::from_fn(d, d, |r, s| {
        if keep(coherence_order(n, r, s)) {
            op[(r, s)]
        } else {
            Complex::new(T::zero(), T::zero())
        }
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::linalg::max_abs_diff;
    use crate::spin::operator::two;

    #[test]
    fn ix_is_single_quantum() {
        let parts = coherence_decompose(&two::ix::<f64>());
        assert!(parts.keys().all(|p| p.abs() == 1 || parts[p].iter().all(|z| z.norm() == 0.0)));
        let plus = &parts[&1];
        assert!(plus[(0, 2)].re == 0.5 && plus[(2, 0)].re == 0.0);
    }

    #[test]
    fn zq_and_dq_orders() {
        let zq = coherence_filter(&two::zq_x::<f64>(), |p| p == 0);
        assert!(max_abs_diff(&zq, &two::zq_x()) < 1e-15);
        let dq = coherence_filter(&two::dq_x::<f64>(), |p| p.abs() == 2);
        assert!(max_abs_diff(&dq, &two::dq_x()) < 1e-15);
    }

    #[test]
    fn decomposition_sums_back() {
        let m = two::ix::<f64>() + two::dq_y::<f64>() + two::izsz::<f64>();
        let parts = coherence_decompose(&m);
        let sum = parts.values().fold(CMat::zeros(4, 4), |a, b| a + b);
        assert!(max_abs_diff(&sum, &m) < 1e-15);
    }
}
