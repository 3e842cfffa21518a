//! Single-spin factors and product-operator labels.

use crate::error::{invalid, Result};
use crate::linalg::{cl, kron_all, CMat};
use crate::scalar::Real;
use serde::{Deserialize, Serialize};
use std::fmt;

/// One per-qubit factor of a product operator.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub enum Factor {
    /// Identity on this qubit.
    E,
    X,
    Y,
    Z,
    /// Raising operator `I_x + i I_y`.
    Plus,
    /// Lowering operator `I_x - i I_y`.
    Minus,
    /// Projector onto |α⟩, `1/2 + I_z`.
    Alpha,
    /// Projector onto |β⟩, `1/2 - I_z`.
    Beta,
}

impl Factor {
    pub fn symbol(self) -> char {
        match self {
            Factor::E => 'E',
            Factor::X => 'x',
            Factor::Y => 'y',
            Factor::Z => 'z',
            Factor::Plus => '+',
            Factor::Minus => '-',
            Factor::Alpha => 'a',
            Factor::Beta => 'b',
        }
    }

    pub fn from_symbol(c: char) -> Option<Self> {
        Some(match c {
            'E' | 'e' | '1' => Factor::E,
            'x' | 'X' => Factor::X,
            'y' | 'Y' => Factor::Y,
            'z' | 'Z' => Factor::Z,
            '+' => Factor::Plus,
            '-' => Factor::Minus,
            'a' | 'A' => Factor::Alpha,
            'b' | 'B' => Factor::Beta,
            _ => return None,
        })
    }

    /// 2x2 matrix of the factor; `E` is the identity.
    pub fn matrix<T: Real>(self) -> CMat<T> {
        let h = 0.5;
        let d: [(f64, f64); 4] = match self {
            Factor::E => [(1.0, 0.0), (0.0, 0.0), (0.0, 0.0), (1.0, 0.0)],
            Factor::X => [(0.0, 0.0), (h, 0.0), (h, 0.0), (0.0, 0.0)],
            Factor::Y => [(0.0, 0.0), (0.0, -h), (0.0, h), (0.0, 0.0)],
            Factor::Z => [(h, 0.0), (0.0, 0.0), (0.0, 0.0), (-h, 0.0)],
            Factor::Plus => [(0.0, 0.0), (1.0, 0.0), (0.0, 0.0), (0.0, 0.0)],
            Factor::Minus => [(0.0, 0.0), (0.0, 0.0), (1.0, 0.0), (0.0, 0.0)],
            Factor::Alpha => [(1.0, 0.0), (0.0, 0.0), (0.0, 0.0), (0.0, 0.0)],
            Factor::Beta => [(0.0, 0.0), (0.0, 0.0), (0.0, 0.0), (1.0, 0.0)],
        };
        CMat::from_fn(2, 2, |r, c| {
            let (re, im) = d[r * 2 + c];
            cl(re, im)
        })
    }
}

/// Single-qubit operator basis used for expansions.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Basis {
    /// {E, x, y, z}
    Cartesian,
    /// {E, +, -, z}
    Spherical,
    /// {α, β, x, y}
    Polarization,
}

impl Basis {
    pub fn factors(self) -> [Factor; 4] {
        match self {
            Basis::Cartesian => [Factor::E, Factor::X, Factor::Y, Factor::Z],
            Basis::Spherical => [Factor::E, Factor::Plus, Factor::Minus, Factor::Z],
            Basis::Polarization => [Factor::Alpha, Factor::Beta, Factor::X, Factor::Y],
        }
    }
}

/// Product-operator label, one factor per qubit.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct OperatorLabel {
    factors: Vec<Factor>,
}

impl OperatorLabel {
    pub fn new(factors: Vec<Factor>) -> Result<Self> {
        if factors.is_empty() || factors.len() > super::MAX_QUBITS {
            return Err(invalid(format!(
                "operator label needs 1..={} factors, got {}",
                super::MAX_QUBITS,
                factors.len()
            )));
        }
        Ok(Self { factors })
    }

    /// Parses labels such as `"zE"`, `"xx"` or `"+a"`.
    pub fn parse(s: &str) -> Result<Self> {
        let factors = s
            .chars()
            .map(|c| Factor::from_symbol(c).ok_or_else(|| invalid(format!("unknown factor '{c}' in label '{s}'"))))
            .collect::<Result<Vec<_>>>()?;
        Self::new(factors)
    }

    /// Identity label on `n` qubits.
    pub fn identity(n: usize) -> Result<Self> {
        Self::new(vec![Factor::E; n])
    }

    /// Single non-identity factor `f` on `qubit`.
    pub fn single(n: usize, qubit: usize, f: Factor) -> Result<Self> {
        if qubit >= n {
            return Err(invalid(format!("qubit {qubit} out of range for {n} qubits")));
        }
        let mut v = vec![Factor::E; n];
        v[qubit] = f;
        Self::new(v)
    }

    pub fn factors(&self) -> &[Factor] {
        &self.factors
    }

    pub fn n_qubits(&self) -> usize {
        self.factors.len()
    }

    /// Number of non-identity factors.
    pub fn weight(&self) -> usize {
        self.factors.iter().filter(|f| **f != Factor::E).count()
    }

    /// Product-operator matrix: `2^(k-1)` times the tensor product.
    ///
    /// With `k = 0` this gives `1/2` times the identity.
    pub fn matrix<T: Real>(&self) -> CMat<T> {
        let k = self.weight() as i32;
        let scale = T::lit(2f64.powi(k - 1));
        self.tensor::<T>() * crate::linalg::cr(scale)
    }

    /// Bare tensor product of the factors.
    pub fn tensor<T: Real>(&self) -> CMat<T> {
        let mats: Vec<CMat<T>> = self.factors.iter().map(|f| f.matrix()).collect();
        kron_all(&mats)
    }
}

impl fmt::Display for OperatorLabel {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for x in &self.factors {
            write!(f, "{}", x.symbol())?;
        }
        Ok(())
    }
}

/// Embeds single-qubit factor `f` at `qubit` of an `n`-qubit register.
pub fn spin_op<T: Real>(n: usize, qubit: usize, f: Factor) -> CMat<T> {
    let mats: Vec<CMat<T>> = (0..n)
        .map(|q| if q == qubit { f.matrix() } else { Factor::E.matrix() })
        .collect();
    kron_all(&mats)
}

/// Sum of `f` over all qubits, e.g. total `I_z`.
pub fn total<T: Real>(n: usize, f: Factor) -> CMat<T> {
    let d = super::dim(n);
    (0..n).fold(CMat::zeros(d, d), |acc, q| acc + spin_op::<T>(n, q, f))
}

/// Named two-spin operators with the `I`, `S` labelling.
pub mod two {
    use super::*;

    fn pair<T: Real>(a: Factor, b: Factor) -> CMat<T> {
        a.matrix::<T>().kronecker(&b.matrix::<T>())
    }

    pub fn ix<T: Real>() -> CMat<T> {
        pair(Factor::X, Factor::E)
    }
    pub fn iy<T: Real>() -> CMat<T> {
        pair(Factor::Y, Factor::E)
    }
    pub fn iz<T: Real>() -> CMat<T> {
        pair(Factor::Z, Factor::E)
    }
    pub fn sx<T: Real>() -> CMat<T> {
        pair(Factor::E, Factor::X)
    }
    pub fn sy<T: Real>() -> CMat<T> {
        pair(Factor::E, Factor::Y)
    }
    pub fn sz<T: Real>() -> CMat<T> {
        pair(Factor::E, Factor::Z)
    }
    /// `I_a S_b` as a bare tensor product (no factor of 2).
    pub fn prod<T: Real>(a: Factor, b: Factor) -> CMat<T> {
        pair(a, b)
    }
    pub fn izsz<T: Real>() -> CMat<T> {
        pair(Factor::Z, Factor::Z)
    }
    /// `(2IxSx + 2IySy)/2`
    pub fn zq_x<T: Real>() -> CMat<T> {
        pair::<T>(Factor::X, Factor::X) + pair::<T>(Factor::Y, Factor::Y)
    }
    /// `(2IySx - 2IxSy)/2`
    pub fn zq_y<T: Real>() -> CMat<T> {
        pair::<T>(Factor::Y, Factor::X) - pair::<T>(Factor::X, Factor::Y)
    }
    /// `(2IxSx - 2IySy)/2`
    pub fn dq_x<T: Real>() -> CMat<T> {
        pair::<T>(Factor::X, Factor::X) - pair::<T>(Factor::Y, Factor::Y)
    }
    /// `(2IySx + 2IxSy)/2`
    pub fn dq_y<T: Real>() -> CMat<T> {
        pair::<T>(Factor::Y, Factor::X) + pair::<T>(Factor::X, Factor::Y)
    }
    /// `(I_z - S_z)/2`
    pub fn zq_z<T: Real>() -> CMat<T> {
        (iz::<T>() - sz::<T>()) * crate::linalg::cr(T::lit(0.5))
    }
}
