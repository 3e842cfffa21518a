//! The full twirl: averaging over bilateral rotations that fix the singlet,
//! which maps any two-qubit state to the Werner state of equal singlet
//! fraction.

use crate::error::{invalid, Result};
use crate::linalg::{cl, cr, kron_all, CMat};
use crate::scalar::Real;
use crate::spin::DensityMatrix;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "mode", rename_all = "snake_case")]
pub enum TwirlMode {
    /// Exact average over the twelve group elements.
    #[default]
    Deterministic,
    /// Average of `samples` elements drawn uniformly with the given seed.
    Sampled { samples: usize, seed: u64 },
}

fn paulis<T: Real>() -> [CMat<T>; 4] {
    let z = cl(0.0, 0.0);
    let o = cl(1.0, 0.0);
    [
        CMat::from_row_slice(2, 2, &[o, z, z, o]),
        CMat::from_row_slice(2, 2, &[z, o, o, z]),
        CMat::from_row_slice(2, 2, &[z, cl(0.0, -1.0), cl(0.0, 1.0), z]),
        CMat::from_row_slice(2, 2, &[o, z, z, -o]),
    ]
}

/// Rotation by `2π/3` about `(1,1,1)/√3`, cycling `x → y → z`.
fn cycle<T: Real>() -> CMat<T> {
    let h = T::lit(0.5);
    let [_, x, y, z] = paulis::<T>();
    let gen = (x + y + z) * cl(0.0, -0.5);
    CMat::<T>::identity(2, 2) * cr(h) + gen
}

/// The twelve bilateral unitaries `U ⊗ U`: Paulis times powers of the cycle.
pub fn twirl_group<T: Real>() -> Vec<CMat<T>> {
    let c = cycle::<T>();
    let powers = [CMat::<T>::identity(2, 2), c.clone(), &c * &c];
    let mut out = Vec::with_capacity(12);
    for p in paulis::<T>() {
        for r in &powers {
            let u = &p * r;
            out.push(kron_all(&[u.clone(), u]));
        }
    }
    out
}

pub fn full_twirl<T: Real>(rho: &DensityMatrix<T>, mode: TwirlMode) -> Result<DensityMatrix<T>> {
    if rho.n_qubits() != 2 {
        return Err(invalid("the twirl acts on two qubits"));
    }
    let group = twirl_group::<T>();
    let chosen: Vec<&CMat<T>> = match mode {
        TwirlMode::Deterministic => group.iter().collect(),
        TwirlMode::Sampled { samples, seed } => {
            if samples == 0 {
                return Err(invalid("need at least one sample"));
            }
            let mut rng = ChaCha8Rng::seed_from_u64(seed);
            (0..samples).map(|_| &group[rng.random_range(0..group.len())]).collect()
        }
    };
    let mut acc = CMat::zeros(4, 4);
    for u in &chosen {
        acc += *u * rho.matrix() * u.adjoint();
    }
    DensityMatrix::new(acc * cr(T::one() / T::from_count(chosen.len())))
}
