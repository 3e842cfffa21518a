//! Gate circuits executed on density matrices.

use crate::dynamics::decohere;
use crate::error::{invalid, Result};
use crate::linalg::{cl, cr, identity, CMat};
use crate::scalar::Real;
use crate::spin::{bit, dim, DensityMatrix, SpinSystem};
use serde::{Deserialize, Serialize};
use std::fmt;
use std::str::FromStr;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Axis {
    X,
    Y,
    Z,
}

/// One-bit functions for Deutsch's problem, named by `f(0) f(1)`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(try_from = "String", into = "String")]
pub enum DeutschFunction {
    Constant0,
    Identity,
    Not,
    Constant1,
}

impl DeutschFunction {
    pub const ALL: [DeutschFunction; 4] =
        [DeutschFunction::Constant0, DeutschFunction::Identity, DeutschFunction::Not, DeutschFunction::Constant1];

    pub fn eval(self, x: usize) -> usize {
        match self {
            DeutschFunction::Constant0 => 0,
            DeutschFunction::Constant1 => 1,
            DeutschFunction::Identity => x & 1,
            DeutschFunction::Not => 1 - (x & 1),
        }
    }

    pub fn is_balanced(self) -> bool {
        self.eval(0) != self.eval(1)
    }
}

impl fmt::Display for DeutschFunction {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}{}", self.eval(0), self.eval(1))
    }
}

impl FromStr for DeutschFunction {
    type Err = crate::error::Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "00" => Ok(DeutschFunction::Constant0),
            "01" => Ok(DeutschFunction::Identity),
            "10" => Ok(DeutschFunction::Not),
            "11" => Ok(DeutschFunction::Constant1),
            _ => Err(invalid(format!("unknown function '{s}', expected one of 00, 01, 10, 11"))),
        }
    }
}

impl TryFrom<String> for DeutschFunction {
    type Error = crate::error::Error;
    fn try_from(s: String) -> Result<Self> {
        s.parse()
    }
}

impl From<DeutschFunction> for String {
    fn from(f: DeutschFunction) -> String {
        f.to_string()
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum Oracle {
    /// `|x, y⟩ → |x, y ⊕ f(x)⟩` with `x` on `input` and `y` on `ancilla`.
    Deutsch { function: DeutschFunction, input: usize, ancilla: usize },
    /// Phase flip of one computational basis state.
    Mark { target: usize },
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(tag = "gate", rename_all = "snake_case", bound = "")]
pub enum Gate<T: Real> {
    Rotation { qubit: usize, axis: Axis, angle: T },
    Hadamard { qubit: usize },
    /// `diag(1, e^{iφ})`.
    Phase { qubit: usize, angle: T },
    /// Pauli X.
    Not { qubit: usize },
    Cnot { control: usize, target: usize },
    Oracle { oracle: Oracle },
}

impl<T: Real> Gate<T> {
    pub fn qubits(&self) -> Vec<usize> {
        match *self {
            Gate::Rotation { qubit, .. } | Gate::Hadamard { qubit } | Gate::Phase { qubit, .. } | Gate::Not { qubit } => {
                vec![qubit]
            }
            Gate::Cnot { control, target } => vec![control, target],
            Gate::Oracle { oracle: Oracle::Deutsch { input, ancilla, .. } } => vec![input, ancilla],
            Gate::Oracle { oracle: Oracle::Mark { .. } } => vec![],
        }
    }

    /// Whether the gate couples two qubits, for timing.
    pub fn is_two_qubit(&self) -> bool {
        matches!(self, Gate::Cnot { .. } | Gate::Oracle { .. })
    }

    /// Full-register unitary.
    pub fn unitary(&self, n: usize) -> Result<CMat<T>> {
        let d = dim(n);
        let qs = self.qubits();
        if qs.iter().any(|&q| q >= n) {
            return Err(invalid(format!("gate {self:?} addresses a qubit outside 0..{n}")));
        }
        if qs.len() == 2 && qs[0] == qs[1] {
            return Err(invalid("two-qubit gate needs distinct qubits"));
        }
        Ok(match *self {
            Gate::Rotation { qubit, axis, angle } => single(n, qubit, &rotation(axis, angle)),
            Gate::Hadamard { qubit } => {
                let h = T::FRAC_1_SQRT_2();
                single(n, qubit, &CMat::from_row_slice(2, 2, &[cr(h), cr(h), cr(h), cr(-h)]))
            }
            Gate::Phase { qubit, angle } => {
                let (s, c) = angle.sin_cos();
                single(n, qubit, &CMat::from_row_slice(2, 2, &[cr(T::one()), cr(T::zero()), cr(T::zero()), nalgebra::Complex::new(c, s)]))
            }
            Gate::Not { qubit } => single(n, qubit, &CMat::from_row_slice(2, 2, &[cl(0.0, 0.0), cl(1.0, 0.0), cl(1.0, 0.0), cl(0.0, 0.0)])),
            Gate::Cnot { control, target } => {
                permutation(d, |i| if bit(n, i, control) == 1 { i ^ mask(n, target) } else { i })
            }
            Gate::Oracle { oracle: Oracle::Deutsch { function, input, ancilla } } => {
                permutation(d, |i| if function.eval(bit(n, i, input)) == 1 { i ^ mask(n, ancilla) } else { i })
            }
            Gate::Oracle { oracle: Oracle::Mark { target } } => {
                if target >= d {
                    return Err(invalid(format!("marked state {target} outside 0..{d}")));
                }
                let mut u = identity(d);
                u[(target, target)] = cr(-T::one());
                u
            }
        })
    }
}

fn mask(n: usize, qubit: usize) -> usize {
    1 << (n - 1 - qubit)
}

fn permutation<T: Real>(d: usize, f: impl Fn(usize) -> usize) -> CMat<T> {
    let mut u = CMat::zeros(d, d);
    for i in 0..d {
        u[(f(i), i)] = cr(T::one());
    }
    u
}

/// `exp(-i θ σ/2)`.
fn rotation<T: Real>(axis: Axis, angle: T) -> CMat<T> {
    let (s, c) = (angle / T::lit(2.0)).sin_cos();
    let z = T::zero();
    let m = |a: (T, T), b: (T, T), cc: (T, T), d: (T, T)| {
        CMat::from_row_slice(
            2,
            2,
            &[
                nalgebra::Complex::new(a.0, a.1),
                nalgebra::Complex::new(b.0, b.1),
                nalgebra::Complex::new(cc.0, cc.1),
                nalgebra::Complex::new(d.0, d.1),
            ],
        )
    };
    match axis {
        Axis::X => m((c, z), (z, -s), (z, -s), (c, z)),
        Axis::Y => m((c, z), (-s, z), (s, z), (c, z)),
        Axis::Z => m((c, -s), (z, z), (z, z), (c, s)),
    }
}

fn single<T: Real>(n: usize, qubit: usize, g: &CMat<T>) -> CMat<T> {
    let d = dim(n);
    CMat::from_fn(d, d, |r, c| {
        let others_equal = (0..n).filter(|&k| k != qubit).all(|k| bit(n, r, k) == bit(n, c, k));
        if others_equal {
            g[(bit(n, r, qubit), bit(n, c, qubit))]
        } else {
            cr(T::zero())
        }
    })
}

/// Relaxation applied after every gate.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
#[serde(bound = "")]
pub struct GateNoise<T: Real> {
    pub single_qubit_s: T,
    pub two_qubit_s: T,
    pub t1: Option<T>,
    pub t2: Option<T>,
}

impl<T: Real> GateNoise<T> {
    /// Two-qubit gates last `1/(2J)`; relaxation times from the system.
    pub fn from_system(sys: &SpinSystem<T>, single_qubit_s: T) -> Result<Self> {
        let j = sys.j_hz()?;
        if !(j.abs() > T::zero()) {
            return Err(invalid("two-qubit gate time needs a non-zero coupling"));
        }
        Ok(Self { single_qubit_s, two_qubit_s: T::one() / (T::lit(2.0) * j.abs()), t1: sys.t1(), t2: sys.t2() })
    }
}

#[derive(Clone, Debug, Default, PartialEq, Serialize, Deserialize)]
#[serde(bound = "")]
pub struct GateCircuit<T: Real> {
    pub gates: Vec<Gate<T>>,
}

impl<T: Real> GateCircuit<T> {
    pub fn new() -> Self {
        Self { gates: Vec::new() }
    }

    pub fn push(mut self, g: Gate<T>) -> Self {
        self.gates.push(g);
        self
    }

    pub fn extend(mut self, other: &GateCircuit<T>) -> Self {
        self.gates.extend(other.gates.iter().cloned());
        self
    }

    pub fn unitary(&self, n: usize) -> Result<CMat<T>> {
        self.gates.iter().try_fold(identity(dim(n)), |acc, g| Ok(g.unitary(n)? * acc))
    }
}

/// Applies each gate in turn, relaxing between gates when `noise` is given.
pub fn run_circuit<T: Real>(
    rho0: &DensityMatrix<T>,
    circuit: &GateCircuit<T>,
    noise: Option<&GateNoise<T>>,
) -> Result<DensityMatrix<T>> {
    let n = rho0.n_qubits();
    circuit.gates.iter().try_fold(rho0.clone(), |rho, g| {
        let out = rho.evolve(&g.unitary(n)?);
        match noise {
            Some(nz) => {
                let t = if g.is_two_qubit() { nz.two_qubit_s } else { nz.single_qubit_s };
                decohere(&out, t, nz.t1, nz.t2)
            }
            None => Ok(out),
        }
    })
}
