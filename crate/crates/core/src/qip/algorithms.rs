//! Deutsch-Jozsa and Grover search on two qubits prepared from the singlet.

use super::circuit::{run_circuit, DeutschFunction, Gate, GateCircuit, GateNoise, Oracle};
use crate::dynamics::{deg, PulseSequence};
use crate::error::{invalid, Result};
use crate::phip::{signal, SignalVector};
use crate::scalar::Real;
use crate::spin::{DensityMatrix, SpinSystem};
use serde::{Deserialize, Serialize};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Answer {
    Constant,
    Balanced,
    Found(usize),
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(bound = "")]
pub struct AlgorithmResult<T: Real> {
    pub final_state: DensityMatrix<T>,
    pub populations: Vec<T>,
    /// Spectrum-style readout after a hard `90_y` pulse.
    pub readout: SignalVector<T>,
    pub answer: Answer,
    /// Probability that a single projective readout gives the right answer.
    pub success_probability: T,
}

/// Maps the singlet to `|00⟩`: `CNOT(0→1)`, `H(0)`, then `X` on both.
pub fn singlet_bridge<T: Real>() -> GateCircuit<T> {
    GateCircuit::new()
        .push(Gate::Cnot { control: 0, target: 1 })
        .push(Gate::Hadamard { qubit: 0 })
        .push(Gate::Not { qubit: 0 })
        .push(Gate::Not { qubit: 1 })
}

fn check_two<T: Real>(rho: &DensityMatrix<T>) -> Result<()> {
    if rho.n_qubits() != 2 {
        return Err(invalid("the algorithms run on two qubits"));
    }
    Ok(())
}

fn readout<T: Real>(rho: &DensityMatrix<T>) -> Result<SignalVector<T>> {
    let sys = SpinSystem::two_spin(T::lit(100.0), T::zero())?;
    signal(rho, &PulseSequence::new().pulse(deg(90.0), deg(90.0)), &sys)
}

/// Deutsch's algorithm: input qubit 0, ancilla qubit 1.
pub fn deutsch_jozsa_circuit<T: Real>(function: DeutschFunction) -> GateCircuit<T> {
    GateCircuit::new()
        .push(Gate::Not { qubit: 1 })
        .push(Gate::Hadamard { qubit: 0 })
        .push(Gate::Hadamard { qubit: 1 })
        .push(Gate::Oracle { oracle: Oracle::Deutsch { function, input: 0, ancilla: 1 } })
        .push(Gate::Hadamard { qubit: 0 })
}

/// Runs the bridge and Deutsch's algorithm on `rho0`; the function is
/// declared balanced when qubit 0 is more likely in `|1⟩`.
pub fn deutsch_jozsa<T: Real>(
    function: DeutschFunction,
    rho0: &DensityMatrix<T>,
    noise: Option<&GateNoise<T>>,
) -> Result<AlgorithmResult<T>> {
    check_two(rho0)?;
    let circuit = singlet_bridge().extend(&deutsch_jozsa_circuit(function));
    let final_state = run_circuit(rho0, &circuit, noise)?;
    let p1 = final_state.prob_one(0);
    let half = T::lit(0.5);
    let answer = if p1 > half { Answer::Balanced } else { Answer::Constant };
    let success_probability = if function.is_balanced() { p1 } else { T::one() - p1 };
    Ok(AlgorithmResult {
        populations: final_state.populations(),
        readout: readout(&final_state)?,
        final_state,
        answer,
        success_probability,
    })
}

/// Uniform superposition, then `iterations` rounds of oracle and diffusion.
pub fn grover_circuit<T: Real>(target: usize, iterations: usize) -> GateCircuit<T> {
    let hh = GateCircuit::new().push(Gate::Hadamard { qubit: 0 }).push(Gate::Hadamard { qubit: 1 });
    // 2|00⟩⟨00| − 1 equals −(phase flip of |00⟩) up to a global phase.
    let diffusion = hh.clone().push(Gate::Oracle { oracle: Oracle::Mark { target: 0 } }).extend(&hh);
    let mut c = hh.clone();
    for _ in 0..iterations {
        c = c.push(Gate::Oracle { oracle: Oracle::Mark { target } }).extend(&diffusion);
    }
    c
}

/// Grover search over four states starting from the bridged `rho0`.
pub fn grover<T: Real>(
    target: usize,
    rho0: &DensityMatrix<T>,
    iterations: usize,
    noise: Option<&GateNoise<T>>,
) -> Result<AlgorithmResult<T>> {
    check_two(rho0)?;
    if target > 3 {
        return Err(invalid(format!("target {target} outside 0..4")));
    }
    let circuit = singlet_bridge().extend(&grover_circuit(target, iterations));
    let final_state = run_circuit(rho0, &circuit, noise)?;
    let populations = final_state.populations();
    let found = (0..4)
        .max_by(|&a, &b| populations[a].partial_cmp(&populations[b]).unwrap_or(std::cmp::Ordering::Equal))
        .unwrap_or(0);
    Ok(AlgorithmResult {
        success_probability: populations[target],
        readout: readout(&final_state)?,
        populations,
        final_state,
        answer: Answer::Found(found),
    })
}
