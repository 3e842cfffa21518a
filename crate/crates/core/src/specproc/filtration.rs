//! Gradient / pulse / gradient filtration onto `span{1, ZQ_x, I_zS_z}`.

use crate::dynamics::composite::check_centred;
use crate::dynamics::{pulse_propagator, timed_gradient, CrushMode, PulseTarget};
use crate::error::{invalid, Result};
use crate::scalar::Real;
use crate::spin::{CouplingMode, DensityMatrix, SpinSystem};

/// `G[t_g] · 90_x · G[t_g]` with homonuclear crushers.
///
/// The zero-quantum coherence precesses at `δ` during each gradient, so `t_g`
/// sets which of its phases survive.
pub fn filtration<T: Real>(rho: &DensityMatrix<T>, sys: &SpinSystem<T>, t_g: T) -> Result<DensityMatrix<T>> {
    check_centred(sys)?;
    if rho.n_qubits() != 2 {
        return Err(invalid("filtration acts on two-spin states"));
    }
    let mode = CrushMode::Homonuclear;
    let coupling = CouplingMode::Weak;
    let first = timed_gradient(rho, sys, coupling, &mode, t_g)?;
    let pulse = pulse_propagator(2, T::FRAC_PI_2(), T::zero(), &PulseTarget::All)?;
    timed_gradient(&first.evolve(&pulse), sys, coupling, &mode, t_g)
}

/// Filtration with `t_g = 1/δ`: maps `l ZQ_x + m I_zS_z` to
/// `(l+m)/2 ZQ_x + l I_zS_z` and removes every other term.
pub fn partial_twirl<T: Real>(rho: &DensityMatrix<T>, sys: &SpinSystem<T>) -> Result<DensityMatrix<T>> {
    filtration(rho, sys, T::one() / sys.delta_hz()?)
}

/// Filtration with `t_g = 1/(2δ)`, which turns the singlet into the
/// incoherent `+I_zS_z` state.
pub fn partial_twirl_half<T: Real>(rho: &DensityMatrix<T>, sys: &SpinSystem<T>) -> Result<DensityMatrix<T>> {
    filtration(rho, sys, T::one() / (T::lit(2.0) * sys.delta_hz()?))
}
