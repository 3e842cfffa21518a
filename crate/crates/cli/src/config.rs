//! Run configuration, read from TOML or JSON.

use crate::error::CliError;
use phipsim::phip::{Averaging, Detection, PhipVariant};
use phipsim::qip::{DeutschFunction, TwirlMode};
use phipsim::specproc::{Calibration, Measured, PipelineConfig};
use phipsim::spin::{DensityMatrix, SpinSystem};
use phipsim::{DensityState, System};
use serde::{Deserialize, Serialize};
use std::path::{Path, PathBuf};

const PLANCK: f64 = 6.626_070_15e-34;
const BOLTZMANN_K: f64 = 1.380_649e-23;

#[derive(Clone, Debug, Default, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct Config {
    pub system: SystemConfig,
    pub phip: PhipConfig,
    pub spectrum: SpectrumConfig,
    pub processing: PipelineConfig<f64>,
    pub tomography: TomographyConfig,
    pub bounds: BoundsConfig,
    pub algo: AlgoConfig,
    pub twirl: TwirlConfig,
    pub entmetrics: EntmetricsConfig,
}

impl Config {
    /// Reads `path`, choosing JSON for a `.json` extension and TOML otherwise.
    /// Field errors carry the dotted path of the offending key.
    pub fn load(path: &Path) -> Result<Self, CliError> {
        let text = std::fs::read_to_string(path).map_err(|source| CliError::Io { path: path.to_owned(), source })?;
        let is_json = path.extension().is_some_and(|e| e.eq_ignore_ascii_case("json"));
        if is_json {
            let de = &mut serde_json::Deserializer::from_str(&text);
            serde_path_to_error::deserialize(de).map_err(|e| CliError::field(e.path().to_string(), e.inner()))
        } else {
            let de = toml::Deserializer::parse(&text).map_err(|e| CliError::Config(e.to_string()))?;
            serde_path_to_error::deserialize(de).map_err(|e| CliError::field(e.path().to_string(), e.inner()))
        }
    }

    /// Replaces every seed in the configuration.
    pub fn apply_seed(&mut self, seed: u64) {
        self.processing.seed = seed;
        if let TwirlMode::Sampled { seed: s, .. } = &mut self.twirl.mode {
            *s = seed;
        }
        if let VariantConfig::Incoherent { averaging: Averaging::MonteCarlo { seed: s, .. }, .. } = &mut self.phip.variant {
            *s = seed;
        }
    }

    /// The seed recorded in outputs.
    pub fn seed(&self) -> u64 {
        self.processing.seed
    }
}

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Preset {
    #[default]
    Dppe,
    Dpae,
}

/// Two-spin system. Explicit fields override the preset; the Boltzmann
/// factor comes from `boltzmann`, or from `field_mhz` and `temperature_k`.
#[derive(Clone, Debug, Default, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct SystemConfig {
    pub preset: Preset,
    pub delta_hz: Option<f64>,
    pub j_hz: Option<f64>,
    pub t1_s: Option<f64>,
    pub t2_s: Option<f64>,
    pub boltzmann: Option<f64>,
    pub field_mhz: Option<f64>,
    pub temperature_k: Option<f64>,
}

impl SystemConfig {
    pub fn build(&self) -> Result<System, CliError> {
        let base = match self.preset {
            Preset::Dppe => SpinSystem::dppe(),
            Preset::Dpae => SpinSystem::dpae(),
        };
        let delta = self.delta_hz.map_or_else(|| base.delta_hz(), Ok)?;
        let j = self.j_hz.map_or_else(|| base.j_hz(), Ok)?;
        let boltzmann = match (self.boltzmann, self.field_mhz, self.temperature_k) {
            (Some(_), Some(_), _) | (Some(_), _, Some(_)) => {
                return Err(CliError::field("system", "give either boltzmann or field_mhz with temperature_k"))
            }
            (Some(b), None, None) => b,
            (None, Some(f), Some(t)) => {
                if !(f > 0.0 && t > 0.0) {
                    return Err(CliError::field("system", "field and temperature must be positive"));
                }
                PLANCK * f * 1e6 / (BOLTZMANN_K * t)
            }
            (None, None, None) => base.boltzmann(),
            _ => return Err(CliError::field("system", "field_mhz and temperature_k must be given together")),
        };
        let t1 = self.t1_s.or(base.t1());
        let t2 = self.t2_s.or(base.t2());
        Ok(SpinSystem::two_spin(delta, j)?.with_relaxation(t1, t2)?.with_boltzmann(boltzmann)?)
    }
}

/// PHIP variant with units in the key names.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case", deny_unknown_fields)]
pub enum VariantConfig {
    Instantaneous,
    Delayed {
        tau_s: f64,
    },
    Incoherent {
        tau_h_s: f64,
        #[serde(default)]
        averaging: Averaging,
    },
    Isotropic {
        tau_h_s: f64,
        nutation_hz: f64,
        #[serde(default)]
        t1rho_s: Option<f64>,
    },
    Altadena,
}

impl VariantConfig {
    pub fn build(&self) -> PhipVariant<f64> {
        match *self {
            VariantConfig::Instantaneous => PhipVariant::Instantaneous,
            VariantConfig::Delayed { tau_s } => PhipVariant::Delayed { tau: tau_s },
            VariantConfig::Incoherent { tau_h_s, averaging } => PhipVariant::Incoherent { tau_h: tau_h_s, averaging },
            VariantConfig::Isotropic { tau_h_s, nutation_hz, t1rho_s } => {
                PhipVariant::Isotropic { tau_h: tau_h_s, nutation_hz, t1rho: t1rho_s }
            }
            VariantConfig::Altadena => PhipVariant::Altadena,
        }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case", deny_unknown_fields)]
pub enum DetectionConfig {
    /// Hard pulse on both spins.
    Pulse { flip_deg: f64, phase_deg: f64 },
    /// Selective `90 I_y` by jump-and-return.
    JumpReturn,
}

impl DetectionConfig {
    pub fn build(&self) -> Detection<f64> {
        match *self {
            DetectionConfig::Pulse { flip_deg, phase_deg } => Detection::hard(flip_deg, phase_deg),
            DetectionConfig::JumpReturn => Detection::JumpReturn,
        }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct PhipConfig {
    pub variant: VariantConfig,
    /// Customary detection for the variant when absent.
    pub detection: Option<DetectionConfig>,
    pub singlet_fraction: f64,
}

impl Default for PhipConfig {
    fn default() -> Self {
        Self { variant: VariantConfig::Instantaneous, detection: None, singlet_fraction: 1.0 }
    }
}

/// Synthetic spectrum emitted by the `phip` command.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct SpectrumConfig {
    pub n_points: usize,
    pub sweep_hz: f64,
    /// The system's T2 when absent.
    pub line_t2_s: Option<f64>,
    pub zero_fill: usize,
}

impl Default for SpectrumConfig {
    fn default() -> Self {
        Self { n_points: 4096, sweep_hz: 1000.0, line_t2_s: None, zero_fill: 2 }
    }
}

/// A two-spin input state.
#[derive(Clone, Debug, Default, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case", deny_unknown_fields)]
pub enum StateConfig {
    #[default]
    Singlet,
    Werner { eps: f64 },
    SingletTriplet { a: f64, b: f64, c: f64 },
    ParaEnriched { para_fraction: f64 },
    /// `row,col,re,im` CSV as written by the `twirl` command.
    File { path: PathBuf },
}

impl StateConfig {
    pub fn build(&self) -> Result<DensityState, CliError> {
        Ok(match self {
            StateConfig::Singlet => DensityMatrix::singlet(),
            StateConfig::Werner { eps } => DensityMatrix::werner(*eps)?,
            StateConfig::SingletTriplet { a, b, c } => DensityMatrix::singlet_triplet(*a, *b, *c)?,
            StateConfig::ParaEnriched { para_fraction } => DensityMatrix::para_enriched(*para_fraction)?,
            StateConfig::File { path } => {
                let f = std::fs::File::open(path).map_err(|source| CliError::Io { path: path.clone(), source })?;
                let rho = DensityMatrix::read_csv(f)?;
                if rho.n_qubits() != 2 {
                    return Err(CliError::Config(format!("{} holds a {}-qubit state", path.display(), rho.n_qubits())));
                }
                rho
            }
        })
    }

    pub fn label(&self) -> String {
        match self {
            StateConfig::Singlet => "singlet".into(),
            StateConfig::Werner { eps } => format!("werner(eps={eps})"),
            StateConfig::SingletTriplet { a, b, c } => format!("st(a={a};b={b};c={c})"),
            StateConfig::ParaEnriched { para_fraction } => format!("para({para_fraction})"),
            StateConfig::File { path } => format!("file({})", path.display()),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case", deny_unknown_fields)]
pub enum TomographySource {
    /// Synthesize and process the spectrum of a state.
    State { state: StateConfig },
    /// Synthesize the readout of a filtered state with fractions `a`
    /// (singlet), `b` (T_0) and `c` (each of T_+1, T_-1).
    Fractions { a: f64, b: f64, c: f64 },
    /// Measured antiphase integrals.
    Integrals { i: f64, i_err: f64, s: f64, s_err: f64 },
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case", deny_unknown_fields)]
pub enum CalibrationConfig {
    /// The DPPE hydrogenation run.
    DppeRun,
    Explicit {
        scans: f64,
        flashes: f64,
        active_fraction: f64,
        depletion: f64,
        thermal_integral: f64,
        thermal_integral_err: f64,
        boltzmann: f64,
    },
}

impl CalibrationConfig {
    pub fn build(&self) -> Calibration<f64> {
        match *self {
            CalibrationConfig::DppeRun => Calibration::dppe_run(),
            CalibrationConfig::Explicit {
                scans,
                flashes,
                active_fraction,
                depletion,
                thermal_integral,
                thermal_integral_err,
                boltzmann,
            } => Calibration {
                scans,
                flashes,
                active_fraction,
                depletion,
                thermal_integral: Measured::new(thermal_integral, thermal_integral_err),
                boltzmann,
            },
        }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct TomographyConfig {
    pub source: TomographySource,
    /// Used with measured integrals only; synthetic runs calibrate against
    /// their own thermal reference.
    pub calibration: CalibrationConfig,
}

impl Default for TomographyConfig {
    fn default() -> Self {
        Self {
            source: TomographySource::State { state: StateConfig::SingletTriplet { a: 0.9371, b: 0.0448, c: 0.00905 } },
            calibration: CalibrationConfig::DppeRun,
        }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct BoundsConfig {
    pub n_min: usize,
    pub n_max: usize,
    pub boltzmann: f64,
    pub temperatures_k: Vec<f64>,
    pub theta_r_k: f64,
}

impl Default for BoundsConfig {
    fn default() -> Self {
        Self {
            n_min: 1,
            n_max: 20,
            boltzmann: 1e-5,
            temperatures_k: vec![300.0, 200.0, 150.0, 100.0, 80.0, 77.0, 60.0, 40.0, 20.0, 18.0],
            theta_r_k: 85.0,
        }
    }
}

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Algorithm {
    #[default]
    DeutschJozsa,
    Grover,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct AlgoConfig {
    pub algorithm: Algorithm,
    pub state: StateConfig,
    pub functions: Vec<DeutschFunction>,
    pub targets: Vec<usize>,
    pub iterations: usize,
    /// Single-qubit gate time; two-qubit gates take `1/(2J)` and the
    /// system's relaxation acts after each gate. Noiseless when absent.
    pub single_qubit_gate_s: Option<f64>,
}

impl Default for AlgoConfig {
    fn default() -> Self {
        Self {
            algorithm: Algorithm::DeutschJozsa,
            state: StateConfig::Singlet,
            functions: DeutschFunction::ALL.to_vec(),
            targets: vec![0, 1, 2, 3],
            iterations: 1,
            single_qubit_gate_s: None,
        }
    }
}

#[derive(Clone, Debug, Default, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct TwirlConfig {
    pub state: StateConfig,
    pub mode: TwirlMode,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct EntmetricsConfig {
    pub states: Vec<StateConfig>,
}

impl Default for EntmetricsConfig {
    fn default() -> Self {
        Self {
            states: vec![
                StateConfig::Singlet,
                StateConfig::SingletTriplet { a: 0.9371, b: 0.0448, c: 0.00905 },
                StateConfig::Werner { eps: 1.0 / 3.0 },
                StateConfig::Werner { eps: 0.916 },
            ],
        }
    }
}
