//! Declarative run configuration, read from TOML.
//!
//! Every section and key is optional; missing values take the library
//! defaults. Unknown keys are rejected so typos do not pass silently.
//!
//! ```toml
//! [if]
//! chi = 3.0
//! boundary = "antisymmetric"
//! filter = { preset = "bump", alpha = 0.12, beta = 0.01 }
//!
//! [alif]
//! mask_multiplier = 7.2
//!
//! [instfreq]
//! method = "local"
//! eno_threshold = 2.0
//!
//! [input]
//! time_column = 0
//! value_column = 1
//! header_rows = 1
//! ```

use std::path::Path;

use serde::{Deserialize, Serialize};

use crate::alif::{AlifConfig, MaskSmoothing};
use crate::error::{Error, Result};
use crate::fpfilter::FilterSpec;
use crate::instfreq::{FreqMethod, DEFAULT_ENO_THRESHOLD};
use crate::io::TimeSeriesFormat;
use crate::iterfilt::IfConfig;
use crate::signal::BoundaryMode;

#[derive(Debug, Clone, Default, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct RunConfig {
    #[serde(rename = "if")]
    pub iterative: IfSection,
    pub alif: AlifSection,
    pub instfreq: InstfreqSection,
    pub input: InputSection,
    pub bench: BenchSection,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct IfSection {
    pub chi: f64,
    pub sd_threshold: f64,
    pub max_inner: usize,
    pub max_imfs: usize,
    pub boundary: BoundaryMode,
    pub filter: FilterSpec,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct AlifSection {
    pub mask_multiplier: f64,
    pub smoothing: MaskSmoothing,
    pub smoothing_chi: f64,
    pub min_clamp: f64,
    pub uniform_chi: Option<f64>,
    pub sd_threshold: f64,
    pub max_inner: usize,
    pub max_imfs: usize,
    pub boundary: BoundaryMode,
    pub filter: FilterSpec,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct InstfreqSection {
    pub method: FreqMethod,
    pub eno_threshold: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct InputSection {
    pub delimiter: char,
    pub time_column: Option<usize>,
    pub value_column: usize,
    pub header_rows: usize,
    pub dx: Option<f64>,
    /// Sample count for generated examples; each example has its own default.
    pub example_len: Option<usize>,
    pub seed: u64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct BenchSection {
    pub seed: u64,
    /// Random signals in the spectral-equivalence check.
    pub spectral_trials: usize,
}

impl Default for IfSection {
    fn default() -> Self {
        Self {
            chi: 3.0,
            sd_threshold: 1e-5,
            max_inner: 200,
            max_imfs: 32,
            boundary: BoundaryMode::Antisymmetric,
            filter: FilterSpec::IF_DEFAULT,
        }
    }
}

impl Default for AlifSection {
    fn default() -> Self {
        Self {
            mask_multiplier: 7.2,
            smoothing: MaskSmoothing::IfTrend,
            smoothing_chi: 3.2,
            min_clamp: 2.0,
            uniform_chi: None,
            sd_threshold: 1e-5,
            max_inner: 200,
            max_imfs: 32,
            boundary: BoundaryMode::Reflect,
            filter: FilterSpec::ALIF_DEFAULT,
        }
    }
}

impl Default for InstfreqSection {
    fn default() -> Self {
        Self {
            method: FreqMethod::Local,
            eno_threshold: DEFAULT_ENO_THRESHOLD,
        }
    }
}

impl Default for InputSection {
    fn default() -> Self {
        let fmt = TimeSeriesFormat::default();
        Self {
            delimiter: fmt.delimiter as char,
            time_column: fmt.time_column,
            value_column: fmt.value_column,
            header_rows: fmt.header_rows,
            dx: fmt.dx_override,
            example_len: None,
            seed: 7,
        }
    }
}

impl Default for BenchSection {
    fn default() -> Self {
        Self {
            seed: 7,
            spectral_trials: 20,
        }
    }
}

impl RunConfig {
    pub fn from_toml_str(text: &str) -> Result<Self> {
        toml::from_str(text).map_err(|e| Error::InvalidConfig(e.message().to_string()))
    }

    pub fn load(path: impl AsRef<Path>) -> Result<Self> {
        Self::from_toml_str(&std::fs::read_to_string(path)?)
    }

    pub fn to_toml_string(&self) -> String {
        toml::to_string(self).expect("run config serializes")
    }

    pub fn if_config(&self) -> Result<IfConfig> {
        let s = &self.iterative;
        let cfg = IfConfig {
            chi: s.chi,
            sd_threshold: s.sd_threshold,
            max_inner: s.max_inner,
            max_imfs: s.max_imfs,
            boundary: s.boundary,
            filter: s.filter.source()?,
        };
        cfg.validate()?;
        Ok(cfg)
    }

    pub fn alif_config(&self) -> Result<AlifConfig> {
        let s = &self.alif;
        let cfg = AlifConfig {
            mask_multiplier: s.mask_multiplier,
            smoothing: s.smoothing,
            smoothing_chi: s.smoothing_chi,
            min_clamp: s.min_clamp,
            uniform_chi: s.uniform_chi,
            sd_threshold: s.sd_threshold,
            max_inner: s.max_inner,
            max_imfs: s.max_imfs,
            boundary: s.boundary,
            filter: s.filter.source()?,
        };
        cfg.validate()?;
        Ok(cfg)
    }

    pub fn timeseries_format(&self) -> Result<TimeSeriesFormat> {
        let s = &self.input;
        if !s.delimiter.is_ascii() {
            return Err(Error::InvalidConfig(format!(
                "delimiter must be a single ASCII character, got '{}'",
                s.delimiter
            )));
        }
        Ok(TimeSeriesFormat {
            delimiter: s.delimiter as u8,
            time_column: s.time_column,
            value_column: s.value_column,
            header_rows: s.header_rows,
            dx_override: s.dx,
        })
    }
}
