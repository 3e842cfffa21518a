//! Separable-neighbourhood bounds, the high-temperature pseudo-pure bound
//! and algorithmic-cooling cost.

use super::measures::binary_entropy;
use crate::error::{invalid, Result};
use crate::scalar::Real;
use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Pow};
use serde::{Deserialize, Serialize};

/// Braunstein polarizations `(ε_l, ε_u)`: below `ε_l` every `n`-qubit
/// pseudo-pure state is separable; above `ε_u` some are entangled.
pub fn braunstein_bounds<T: Real>(n: usize) -> Result<(T, T)> {
    if n == 0 {
        return Err(invalid("qubit count must be at least 1"));
    }
    let two = T::lit(2.0);
    let lower = T::one() / (T::one() + two.powi(2 * n as i32 - 1));
    let upper = T::one() / (T::one() + two.powf(T::from_count(n) / two));
    Ok((lower, upper))
}

/// Exact rational bounds; `ε_u` is rational only for even `n`.
pub fn braunstein_exact(n: usize) -> Result<(BigRational, Option<BigRational>)> {
    if n == 0 {
        return Err(invalid("qubit count must be at least 1"));
    }
    let two = BigInt::from(2);
    let one = BigInt::one();
    let lower = BigRational::new(one.clone(), &one + Pow::pow(&two, (2 * n - 1) as u32));
    let upper = n.is_multiple_of(2).then(|| BigRational::new(one.clone(), &one + Pow::pow(&two, (n / 2) as u32)));
    Ok((lower, upper))
}

/// Largest pseudo-pure polarization from a thermal state, `n B / 2^n`.
pub fn warren_bound<T: Real>(n: usize, boltzmann: T) -> Result<T> {
    if n == 0 || !(boltzmann > T::zero()) {
        return Err(invalid("need n >= 1 and B > 0"));
    }
    Ok(T::from_count(n) * boltzmann / T::lit(2.0).powi(n as i32))
}

/// First `n ≤ n_max` at which the pseudo-pure bound reaches `ε_l`, i.e.
/// where thermal NMR can no longer be shown to stay separable.
pub fn crossover_qubits<T: Real>(boltzmann: T, n_max: usize) -> Result<Option<usize>> {
    for n in 1..=n_max {
        if warren_bound(n, boltzmann)? >= braunstein_bounds::<T>(n)?.0 {
            return Ok(Some(n));
        }
    }
    Ok(None)
}

/// Smallest `B` for which `n` qubits reach `ε_l`: `ε_l(n) 2^n / n`.
pub fn crossover_boltzmann<T: Real>(n: usize) -> Result<T> {
    let (lower, _) = braunstein_bounds::<T>(n)?;
    Ok(lower * T::lit(2.0).powi(n as i32) / T::from_count(n))
}

/// Entropy in bits of one qubit with polarization `ε`.
pub fn qubit_entropy<T: Real>(eps: T) -> Result<T> {
    check_eps(eps)?;
    Ok(T::one() - purity_deficit(eps))
}

fn check_eps<T: Real>(eps: T) -> Result<()> {
    if !(eps >= T::zero() && eps <= T::one()) {
        return Err(invalid(format!("polarization {eps} outside [0, 1]")));
    }
    Ok(())
}

/// `1 - S(ε)`, summed as `Σ ε^(2k) / (2k(2k-1) ln 2)` for small `ε` to avoid
/// cancellation.
fn purity_deficit<T: Real>(eps: T) -> T {
    if eps > T::lit(0.5) {
        let half = T::lit(0.5);
        return T::one() - binary_entropy(half + half * eps);
    }
    let e2 = eps * eps;
    let mut term = e2;
    let mut sum = T::zero();
    for k in 1..200 {
        let kk = T::from_count(2 * k);
        let add = term / (kk * (kk - T::one()));
        sum += add;
        if add <= sum * T::default_epsilon() {
            break;
        }
        term *= e2;
    }
    sum / T::LN_2()
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
#[serde(bound = "")]
pub struct SvCompression<T: Real> {
    pub entropy: T,
    /// `n (1 - S(ε))`
    pub k_exact: T,
    /// `n ε² / (2 ln 2)`
    pub k_approx: T,
    /// Raw qubits consumed per pure qubit, exact and small-`ε` forms.
    pub qubits_per_pure: T,
    pub qubits_per_pure_approx: T,
}

/// Pure qubits extractable from `n` qubits of polarization `ε`.
pub fn sv_compression<T: Real>(n: usize, eps: T) -> Result<SvCompression<T>> {
    check_eps(eps)?;
    let deficit = purity_deficit(eps);
    let nn = T::from_count(n);
    let approx = eps * eps / (T::lit(2.0) * T::LN_2());
    Ok(SvCompression {
        entropy: T::one() - deficit,
        k_exact: nn * deficit,
        k_approx: nn * approx,
        qubits_per_pure: T::one() / deficit,
        qubits_per_pure_approx: T::one() / approx,
    })
}

/// One row of a bounds table.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
#[serde(bound = "")]
pub struct BoundsRow<T: Real> {
    pub n: usize,
    pub eps_lower: T,
    pub eps_upper: T,
    pub warren: T,
}

impl<T: Real> BoundsRow<T> {
    pub fn compute(n: usize, boltzmann: T) -> Result<Self> {
        let (eps_lower, eps_upper) = braunstein_bounds(n)?;
        Ok(Self { n, eps_lower, eps_upper, warren: warren_bound(n, boltzmann)? })
    }
}
