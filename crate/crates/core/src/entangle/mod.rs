//! Entanglement tests and measures for two qubits, plus separability and
//! polarization bounds for `n`-qubit pseudo-pure states.

pub mod bounds;
pub mod measures;

pub use bounds::{
    braunstein_bounds, braunstein_exact, crossover_boltzmann, crossover_qubits, qubit_entropy, sv_compression,
    warren_bound, BoundsRow, SvCompression,
};
pub use measures::{
    binary_entropy, bisect_threshold, concurrence, concurrence_general, eof, eof_from_concurrence, partial_transpose,
    ppt, report, spin_flip, st_closed_form_concurrence, st_mixture_analysis, EntanglementReport, PptResult, StAnalysis,
};
