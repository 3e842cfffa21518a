//! Dense complex matrix helpers.

use crate::error::{Error, Result};
use crate::scalar::Real;
use nalgebra::{Complex, ComplexField, DMatrix, SymmetricEigen};

/// Dense complex matrix.
pub type CMat<T> = DMatrix<Complex<T>>;

#[inline]
pub fn cr<T: Real>(re: T) -> Complex<T> {
    Complex::new(re, T::zero())
}

#[inline]
pub fn cl<T: Real>(re: f64, im: f64) -> Complex<T> {
    Complex::new(T::lit(re), T::lit(im))
}

pub fn identity<T: Real>(dim: usize) -> CMat<T> {
    CMat::identity(dim, dim)
}

pub fn zeros<T: Real>(dim: usize) -> CMat<T> {
    CMat::zeros(dim, dim)
}

/// Builds a matrix from row-major `f64` real parts.
pub fn real_matrix<T: Real>(dim: usize, data: &[f64]) -> CMat<T> {
    CMat::from_fn(dim, dim, |r, c| cl(data[r * dim + c], 0.0))
}

/// Kronecker product of a sequence of factors, left factor most significant.
pub fn kron_all<T: Real>(factors: &[CMat<T>]) -> CMat<T> {
    let mut acc = CMat::<T>::identity(1, 1);
    for f in factors {
        acc = acc.kronecker(f);
    }
    acc
}

pub fn commutator<T: Real>(a: &CMat<T>, b: &CMat<T>) -> CMat<T> {
    a * b - b * a
}

/// Real part of the trace of `a * b` without forming the product.
pub fn trace_product<T: Real>(a: &CMat<T>, b: &CMat<T>) -> Complex<T> {
    let n = a.nrows();
    let mut acc = Complex::new(T::zero(), T::zero());
    for i in 0..n {
        for k in 0..n {
            acc += a[(i, k)] * b[(k, i)];
        }
    }
    acc
}

/// Largest elementwise modulus of `a - b`.
pub fn max_abs_diff<T: Real>(a: &CMat<T>, b: &CMat<T>) -> T {
    a.iter()
        .zip(b.iter())
        .map(|(x, y)| (x - y).modulus())
        .fold(T::zero(), |m, v| if v > m { v } else { m })
}

pub fn max_abs<T: Real>(a: &CMat<T>) -> T {
    a.iter()
        .map(|x| x.modulus())
        .fold(T::zero(), |m, v| if v > m { v } else { m })
}

pub fn is_hermitian<T: Real>(a: &CMat<T>, tol: T) -> bool {
    a.is_square() && max_abs_diff(a, &a.adjoint()) <= tol
}

pub fn is_diagonal<T: Real>(a: &CMat<T>) -> bool {
    for r in 0..a.nrows() {
        for c in 0..a.ncols() {
            if r != c && a[(r, c)].modulus() != T::zero() {
                return false;
            }
        }
    }
    true
}

/// Hermitian eigendecomposition; eigenvalues ascending with matching columns.
pub fn eigh<T: Real>(a: &CMat<T>) -> (Vec<T>, CMat<T>) {
    let sym = (a + a.adjoint()) * cr(T::lit(0.5));
    let eig = SymmetricEigen::new(sym);
    let n = a.nrows();
    let mut order: Vec<usize> = (0..n).collect();
    order.sort_by(|&i, &j| {
        eig.eigenvalues[i]
            .partial_cmp(&eig.eigenvalues[j])
            .unwrap_or(std::cmp::Ordering::Equal)
    });
    let vals = order.iter().map(|&i| eig.eigenvalues[i]).collect();
    let vecs = CMat::from_fn(n, n, |r, c| eig.eigenvectors[(r, order[c])]);
    (vals, vecs)
}

/// Hermitian eigenvalues in ascending order.
pub fn eigvalsh<T: Real>(a: &CMat<T>) -> Vec<T> {
    eigh(a).0
}

/// `exp(-i h t)` for Hermitian `h`; diagonal inputs take a direct path.
pub fn expm_hermitian<T: Real>(h: &CMat<T>, t: T) -> Result<CMat<T>> {
    if !h.iter().all(|z| z.re.is_finite() && z.im.is_finite()) || !t.is_finite() {
        return Err(Error::Numeric("non-finite generator".into()));
    }
    let n = h.nrows();
    if is_diagonal(h) {
        return Ok(CMat::from_fn(n, n, |r, c| {
            if r == c {
                phase(-h[(r, r)].re * t)
            } else {
                Complex::new(T::zero(), T::zero())
            }
        }));
    }
    let (vals, vecs) = eigh(h);
    let d = CMat::from_fn(n, n, |r, c| {
        if r == c {
            phase(-vals[r] * t)
        } else {
            Complex::new(T::zero(), T::zero())
        }
    });
    Ok(&vecs * d * vecs.adjoint())
}

/// `exp(i x)`.
#[inline]
pub fn phase<T: Real>(x: T) -> Complex<T> {
    Complex::new(x.cos(), x.sin())
}

/// Conjugation `u a u†`.
pub fn conjugate<T: Real>(u: &CMat<T>, a: &CMat<T>) -> CMat<T> {
    u * a * u.adjoint()
}

/// Applies a Hermitian function to the spectrum of a Hermitian matrix.
pub fn hermitian_map<T: Real>(a: &CMat<T>, f: impl Fn(T) -> T) -> CMat<T> {
    let (vals, vecs) = eigh(a);
    let n = a.nrows();
    let d = CMat::from_fn(n, n, |r, c| {
        if r == c {
            cr(f(vals[r]))
        } else {
            Complex::new(T::zero(), T::zero())
        }
    });
    &vecs * d * vecs.adjoint()
}

/// Unitarity defect `max |u u† - 1|`.
pub fn unitarity_defect<T: Real>(u: &CMat<T>) -> T {
    max_abs_diff(&(u * u.adjoint()), &identity(u.nrows()))
}
