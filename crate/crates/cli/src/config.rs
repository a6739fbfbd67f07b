use std::f64::consts::PI;
use std::fmt;
use std::path::PathBuf;

use serde::Serialize;
use toffoli_core::sequences::{format::parse_sequence, toffoli_sequence, PulseSequence};
use toffoli_core::tomo::DEFAULT_SAMPLES;
use toffoli_core::{CompositeBasis, NoiseConfig, PhysicalParams};

use crate::CliError;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, clap::ValueEnum)]
#[serde(rename_all = "lowercase")]
pub enum OutputFormat {
    Json,
    Csv,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum SequenceSource {
    Builtin,
    File(PathBuf),
}

impl fmt::Display for SequenceSource {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            SequenceSource::Builtin => f.write_str("builtin:toffoli"),
            SequenceSource::File(p) => write!(f, "{}", p.display()),
        }
    }
}

impl Serialize for SequenceSource {
    fn serialize<S: serde::Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        s.collect_str(self)
    }
}

/// Everything a command's output depends on.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct RunConfig {
    pub physical: PhysicalParams,
    pub noise: NoiseConfig,
    pub n_max: usize,
    pub shots: u64,
    pub samples: usize,
    pub seed: u64,
    pub format: OutputFormat,
    pub sequence: SequenceSource,
}

impl Default for RunConfig {
    fn default() -> Self {
        Self {
            physical: PhysicalParams::default(),
            noise: NoiseConfig::ideal(),
            n_max: 4,
            shots: 100,
            samples: DEFAULT_SAMPLES,
            seed: 0,
            format: OutputFormat::Json,
            sequence: SequenceSource::Builtin,
        }
    }
}

impl RunConfig {
    /// Crosstalk ε = 0.07 and δ = 2π·100 rad/s on top of the defaults.
    pub fn noisy() -> Self {
        Self {
            noise: NoiseConfig::ideal().with_addressing(0.07).with_detuning_hz(100.0),
            ..Self::default()
        }
    }

    pub fn with_epsilon(mut self, eps: f64) -> Self {
        self.noise.addressing_ratio = eps;
        self
    }

    pub fn with_detuning_hz(mut self, hz: f64) -> Self {
        self.noise.detuning = 2.0 * PI * hz;
        self
    }

    pub fn with_format(mut self, format: OutputFormat) -> Self {
        self.format = format;
        self
    }

    pub fn validate(&self) -> Result<(), CliError> {
        self.physical.validate()?;
        self.noise.validate()?;
        CompositeBasis::three_ion(self.n_max)?;
        Ok(())
    }

    pub fn load_sequence(&self) -> Result<PulseSequence, CliError> {
        match &self.sequence {
            SequenceSource::Builtin => Ok(toffoli_sequence()),
            SequenceSource::File(path) => {
                let text = std::fs::read_to_string(path).map_err(|e| CliError::Io {
                    path: path.clone(),
                    source: e,
                })?;
                Ok(parse_sequence(&text)?)
            }
        }
    }

    pub fn basis(&self, seq: &PulseSequence) -> Result<CompositeBasis, CliError> {
        Ok(CompositeBasis::new(seq.num_ions, self.n_max)?)
    }
}
