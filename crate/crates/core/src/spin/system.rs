//! Spin-system parameters: offsets, couplings, relaxation and polarization.

use super::MAX_QUBITS;
use crate::error::{invalid, Result};
use crate::scalar::Real;
use nalgebra::DMatrix;
use serde::{Deserialize, Serialize};

/// How scalar couplings enter the Hamiltonian.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum CouplingMode {
    /// `π J 2 I_z S_z`
    #[default]
    Weak,
    /// `π J 2 I·S`
    Strong,
}

/// Offsets and couplings in Hz, relaxation times in s.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(bound = "")]
pub struct SpinSystem<T: Real> {
    offsets_hz: Vec<T>,
    couplings_hz: DMatrix<T>,
    t1: Option<T>,
    t2: Option<T>,
    boltzmann: T,
}

impl<T: Real> SpinSystem<T> {
    /// Validates offsets, a symmetric zero-diagonal coupling matrix,
    /// `T2 <= T1` when both are given, and `B ∈ (0, 1)`.
    pub fn new(
        offsets_hz: Vec<T>,
        couplings_hz: DMatrix<T>,
        t1: Option<T>,
        t2: Option<T>,
        boltzmann: T,
    ) -> Result<Self> {
        let n = offsets_hz.len();
        if n == 0 || n > MAX_QUBITS {
            return Err(invalid(format!("qubit count must be 1..={MAX_QUBITS}, got {n}")));
        }
        if couplings_hz.nrows() != n || couplings_hz.ncols() != n {
            return Err(invalid(format!("coupling matrix must be {n}x{n}")));
        }
        if offsets_hz.iter().any(|o| !o.is_finite()) {
            return Err(invalid("offsets must be finite"));
        }
        for i in 0..n {
            if couplings_hz[(i, i)] != T::zero() {
                return Err(invalid("coupling matrix diagonal must be zero"));
            }
            for j in 0..n {
                let (a, b) = (couplings_hz[(i, j)], couplings_hz[(j, i)]);
                if !a.is_finite() || (a - b).abs() > T::state_tol() {
                    return Err(invalid("coupling matrix must be finite and symmetric"));
                }
            }
        }
        for (name, t) in [("T1", t1), ("T2", t2)] {
            if let Some(t) = t {
                if !(t > T::zero()) {
                    return Err(invalid(format!("{name} must be positive")));
                }
            }
        }
        if let (Some(a), Some(b)) = (t1, t2) {
            if b > a {
                return Err(invalid(format!("T2 = {b} s exceeds T1 = {a} s")));
            }
        }
        if !(boltzmann > T::zero() && boltzmann < T::one()) {
            return Err(invalid(format!("Boltzmann factor {boltzmann} must lie in (0, 1)")));
        }
        Ok(Self { offsets_hz, couplings_hz, t1, t2, boltzmann })
    }

    /// Two-spin system centred on the transmitter: `I` at `+δ/2`, `S` at `-δ/2`.
    pub fn two_spin(delta_hz: T, j_hz: T) -> Result<Self> {
        let half = delta_hz / T::lit(2.0);
        let j = DMatrix::from_row_slice(2, 2, &[T::zero(), j_hz, j_hz, T::zero()]);
        Self::new(vec![half, -half], j, None, None, T::lit(6.48e-5))
    }

    /// Hydrogenated DPPE: δ = 492 Hz, J = 4.6 Hz, T1 = 1.7 s, T2 = 0.58 s.
    pub fn dppe() -> Self {
        Self::two_spin(T::lit(492.0), T::lit(4.6))
            .and_then(|s| s.with_relaxation(Some(T::lit(1.7)), Some(T::lit(0.58))))
            .expect("preset is valid")
    }

    /// Hydrogenated DPAE: δ = 160 Hz, J = 4.8 Hz, T1 = 1.9 s, T2 = 0.67 s.
    pub fn dpae() -> Self {
        Self::two_spin(T::lit(160.0), T::lit(4.8))
            .and_then(|s| s.with_relaxation(Some(T::lit(1.9)), Some(T::lit(0.67))))
            .expect("preset is valid")
    }

    pub fn with_relaxation(self, t1: Option<T>, t2: Option<T>) -> Result<Self> {
        Self::new(self.offsets_hz, self.couplings_hz, t1, t2, self.boltzmann)
    }

    pub fn with_boltzmann(self, b: T) -> Result<Self> {
        Self::new(self.offsets_hz, self.couplings_hz, self.t1, self.t2, b)
    }

    pub fn n_qubits(&self) -> usize {
        self.offsets_hz.len()
    }

    pub fn offsets_hz(&self) -> &[T] {
        &self.offsets_hz
    }

    pub fn coupling_hz(&self, i: usize, j: usize) -> T {
        self.couplings_hz[(i, j)]
    }

    pub fn couplings_hz(&self) -> &DMatrix<T> {
        &self.couplings_hz
    }

    pub fn t1(&self) -> Option<T> {
        self.t1
    }

    pub fn t2(&self) -> Option<T> {
        self.t2
    }

    pub fn boltzmann(&self) -> T {
        self.boltzmann
    }

    /// Chemical shift difference `|Ω_0 - Ω_1|` of the first two spins in Hz.
    pub fn delta_hz(&self) -> Result<T> {
        if self.n_qubits() < 2 {
            return Err(invalid("shift difference needs at least two spins"));
        }
        Ok((self.offsets_hz[0] - self.offsets_hz[1]).abs())
    }

    /// Coupling between the first two spins in Hz.
    pub fn j_hz(&self) -> Result<T> {
        if self.n_qubits() < 2 {
            return Err(invalid("coupling needs at least two spins"));
        }
        Ok(self.couplings_hz[(0, 1)])
    }
}
