//! Spectra from signal vectors, spectral post-processing, and one-shot
//! tomography of filtered two-spin states.

pub mod baseline;
pub mod filtration;
pub mod integrate;
pub mod jproc;
pub mod pipeline;
pub mod spectrum;
pub mod tomography;

pub use baseline::{baseline_correct, BaselineRegions};
pub use filtration::{filtration, partial_twirl, partial_twirl_half};
pub use integrate::{integrate_peaks, integrate_peaks_with_noise, line_windows, lorentzian_fwhm, Measured};
pub use jproc::{j_double, j_match, j_modulate, Doubled, JEstimate, JGrid, Multiplet};
pub use pipeline::{
    antiphase_integrals, filtered_signal, run_pipeline, run_pipeline_signal, tail_sigma, PipelineConfig, PipelineOutput,
};
pub use spectrum::{line_frequencies, sigma_for_snr, synthesize_fid, transform, Fid, Spectrum};
pub use tomography::{depletion_correction, fractions_from_pq, pq_from_fractions, tomography, Calibration, TomographyResult};
