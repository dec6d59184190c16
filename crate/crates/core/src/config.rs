//! Scenario configuration files.
//!
//! A scenario is a TOML document with up to five tables. Every table and
//! every key is optional; missing values fall back to the 79 GHz reference
//! radar, the canonical 128-chip code and an empty, noiseless scene.
//!
//! ```toml
//! [radar]
//! carrier_freq_hz = 79e9     # Hz
//! chip_duration_s = 10e-9    # s
//! n_fast = 128               # chips per code repetition
//! m_raw = 10240              # raw pulses per CPI
//! accumulation = 20          # pulses summed per slow-time sample
//!
//! [code]
//! degree = 7
//! taps = [7, 6]
//! seed = 127                 # LFSR register, bit k-1 = stage k
//!
//! [scene]
//! snr_db = 20.0              # per raw sample; omit for noiseless
//! rng_seed = 1
//! targets = [
//!   { range_m = 12.0, velocity_mps = 4.0, gamma = [1.0, 0.0] },
//! ]
//!
//! [metrics]
//! guard = 0
//! isl_scale = "20log10"      # or "10log10"
//! # doppler_bin = 17         # default: column of the global peak
//! # reference_snr_db = 50.0  # default: reference shares the scene's noise
//!
//! [corpus]
//! count_per_snr = 4
//! snr_db = [10.0, 20.0]
//! master_seed = 7
//! reference_snr_db = 50.0
//! ```

use std::path::Path;

use serde::{Deserialize, Serialize};

use crate::dataset::CorpusSpec;
use crate::error::{Error, Result};
use crate::metrics::{IslScale, MetricOptions};
use crate::scene::{RadarConfig, Scene};
use crate::sequences::{self, PnSequence};

/// LFSR parameters of the transmit code.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct CodeConfig {
    pub degree: u32,
    pub taps: Vec<u32>,
    pub seed: u32,
}

impl Default for CodeConfig {
    fn default() -> Self {
        CodeConfig {
            degree: sequences::CANONICAL_DEGREE,
            taps: sequences::CANONICAL_TAPS.to_vec(),
            seed: sequences::CANONICAL_SEED,
        }
    }
}

impl CodeConfig {
    pub fn build(&self) -> Result<PnSequence> {
        PnSequence::from_lfsr(self.degree, &self.taps, self.seed)
    }
}

/// `[metrics]` table.
#[derive(Debug, Clone, PartialEq, Default, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct MetricsConfig {
    pub guard: usize,
    pub doppler_bin: Option<usize>,
    pub isl_scale: IslScaleName,
    /// SNR of the high-resolution reference. `None` reuses the scene's own
    /// noise realization so that only quantization separates the two maps.
    pub reference_snr_db: Option<f64>,
}

impl MetricsConfig {
    pub fn options(&self) -> MetricOptions {
        MetricOptions {
            guard: self.guard,
            doppler_bin: self.doppler_bin,
            isl_scale: self.isl_scale.into(),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
pub enum IslScaleName {
    #[default]
    #[serde(rename = "20log10")]
    Amplitude,
    #[serde(rename = "10log10")]
    Power,
}

impl From<IslScaleName> for IslScale {
    fn from(name: IslScaleName) -> Self {
        match name {
            IslScaleName::Amplitude => IslScale::Amplitude,
            IslScaleName::Power => IslScale::Power,
        }
    }
}

/// A complete scenario file.
#[derive(Debug, Clone, PartialEq, Default, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct ScenarioConfig {
    pub radar: RadarConfig,
    pub code: CodeConfig,
    pub scene: Scene,
    pub metrics: MetricsConfig,
    pub corpus: Option<CorpusSpec>,
}

impl ScenarioConfig {
    pub fn from_toml_str(text: &str) -> std::result::Result<Self, String> {
        let cfg: ScenarioConfig = toml::from_str(text).map_err(|e| e.to_string())?;
        Ok(cfg)
    }

    pub fn from_path(path: impl AsRef<Path>) -> Result<Self> {
        let path = path.as_ref();
        let text = std::fs::read_to_string(path).map_err(|e| Error::io(path, e))?;
        let cfg = Self::from_toml_str(&text).map_err(|message| Error::Parse {
            path: path.to_path_buf(),
            message,
        })?;
        cfg.validate().map_err(|e| Error::Parse {
            path: path.to_path_buf(),
            message: e.to_string(),
        })?;
        Ok(cfg)
    }

    pub fn validate(&self) -> Result<()> {
        self.radar.validate()?;
        let code = self.code.build()?;
        if code.n_total() != self.radar.n_fast {
            return Err(Error::InvalidConfig(format!(
                "code of {} chips does not match n_fast = {}",
                code.n_total(),
                self.radar.n_fast
            )));
        }
        self.scene.validate(&self.radar)?;
        if let Some(corpus) = &self.corpus {
            corpus.validate(&self.radar)?;
        }
        Ok(())
    }
}
