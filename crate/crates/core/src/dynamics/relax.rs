//! Relaxation as a completely positive trace-preserving map.
//!
//! Each qubit dephases at `1/T2 - 1/T1` and the register depolarises toward
//! `1/N` at `1/T1`, so single-quantum coherences decay at `1/T2` overall.

use crate::error::{invalid, Result};
use crate::linalg::{cr, kron_all, CMat};
use crate::scalar::Real;
use crate::spin::operator::Factor;
use crate::spin::{bit, dim, DensityMatrix};

/// Rates `(dephasing, depolarising)` in 1/s.
fn rates<T: Real>(t1: Option<T>, t2: Option<T>) -> Result<(T, T)> {
    let inv = |t: Option<T>| t.map(|v| T::one() / v).unwrap_or(T::zero());
    let g1 = inv(t1);
    let g2 = inv(t2);
    if t2.is_some() && g2 < g1 {
        return Err(invalid("T2 must not exceed T1"));
    }
    let g_phi = if t2.is_some() { g2 - g1 } else { T::zero() };
    Ok((g_phi, g1))
}

/// Closed-form relaxation over `t` seconds; `None` means no relaxation.
pub fn decohere<T: Real>(rho: &DensityMatrix<T>, t: T, t1: Option<T>, t2: Option<T>) -> Result<DensityMatrix<T>> {
    if !(t >= T::zero()) {
        return Err(invalid("relaxation time must be non-negative"));
    }
    let (g_phi, g1) = rates(t1, t2)?;
    let lam = (-g_phi * t).exp();
    let q = (-g1 * t).exp();
    let n = rho.n_qubits();
    let d = rho.dim();
    let inv_d = T::one() / T::from_count(d);
    let m = CMat::from_fn(d, d, |r, c| {
        let flips = (0..n).filter(|&k| bit(n, r, k) != bit(n, c, k)).count() as i32;
        let x = rho.matrix()[(r, c)] * cr(lam.powi(flips) * q);
        if r == c {
            x + cr((T::one() - q) * inv_d)
        } else {
            x
        }
    });
    Ok(DensityMatrix::from_trusted(m))
}

/// Kraus operators for the same map, one list per channel in application
/// order: per-qubit dephasing channels, then register depolarisation.
pub fn kraus_channels<T: Real>(n_qubits: usize, t: T, t1: Option<T>, t2: Option<T>) -> Result<Vec<Vec<CMat<T>>>> {
    let (g_phi, g1) = rates(t1, t2)?;
    let lam = (-g_phi * t).exp();
    let q = (-g1 * t).exp();
    let two = T::lit(2.0);
    let sz = Factor::Z.matrix::<T>() * cr(two);
    let e = Factor::E.matrix::<T>();
    let mut channels = Vec::new();
    for k in 0..n_qubits {
        let z_on_k: Vec<CMat<T>> = (0..n_qubits).map(|j| if j == k { sz.clone() } else { e.clone() }).collect();
        let d = dim(n_qubits);
        channels.push(vec![
            CMat::identity(d, d) * cr(((T::one() + lam) / two).sqrt()),
            kron_all(&z_on_k) * cr(((T::one() - lam) / two).sqrt()),
        ]);
    }
    let d2 = T::from_count(dim(n_qubits) * dim(n_qubits));
    let paulis = [
        Factor::E.matrix::<T>(),
        Factor::X.matrix::<T>() * cr(two),
        Factor::Y.matrix::<T>() * cr(two),
        sz,
    ];
    let mut depol = Vec::new();
    for code in 0..(1usize << (2 * n_qubits)) {
        let fs: Vec<CMat<T>> = (0..n_qubits)
            .map(|j| paulis[(code >> (2 * (n_qubits - 1 - j))) & 3].clone())
            .collect();
        let w = if code == 0 { q + (T::one() - q) / d2 } else { (T::one() - q) / d2 };
        depol.push(kron_all(&fs) * cr(w.sqrt()));
    }
    channels.push(depol);
    Ok(channels)
}

/// `Σ K ρ K†` for one channel.
pub fn apply_kraus<T: Real>(rho: &DensityMatrix<T>, ops: &[CMat<T>]) -> Result<DensityMatrix<T>> {
    let d = rho.dim();
    if ops.iter().any(|k| k.nrows() != d || k.ncols() != d) {
        return Err(invalid("Kraus operator dimension mismatch"));
    }
    let m = ops.iter().fold(CMat::zeros(d, d), |acc, k| acc + k * rho.matrix() * k.adjoint());
    Ok(DensityMatrix::from_trusted(m))
}
