//! Run configuration shared by the command-line tool and the harness.
//!
//! A JSON file may set any field; command-line flags override it. The file
//! is taken from `--config` or, failing that, from `RVMURAC_CONFIG`.

use std::collections::BTreeMap;
use std::path::{Path, PathBuf};

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::accel::{App, CycleModel};
use crate::bench::{DEFAULT_FREQ_MHZ, DEFAULT_MAX_CYCLES};
use crate::mem::{DEFAULT_IMEM_BYTES, KIB};
use crate::pipeline::PipelineConfig;

pub const CONFIG_ENV: &str = "RVMURAC_CONFIG";
pub const MIN_MEM_BYTES: usize = 4 * KIB;

#[derive(Debug, Error)]
pub enum ConfigError {
    #[error("cannot read config {path}: {source}")]
    Read { path: PathBuf, source: std::io::Error },
    #[error("invalid config {path}: {source}")]
    Parse { path: PathBuf, source: serde_json::Error },
    #[error("{field} must be a power of two of at least 4096 bytes, got {value}")]
    BadMemorySize { field: &'static str, value: usize },
    #[error("freq_mhz must be positive, got {0}")]
    BadFrequency(f64),
    #[error("cycle model for {0} must process at least one element per cycle")]
    BadCycleModel(App),
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct Config {
    pub imem_size_bytes: usize,
    /// `None` sizes DMEM to fit the benchmark (64 KiB minimum).
    pub dmem_size_bytes: Option<usize>,
    pub freq_mhz: f64,
    pub max_cycles: u64,
    /// Per-application accelerator timing overrides.
    pub cycle_models: BTreeMap<App, CycleModel>,
    /// Extra stall cycles charged when a session hands control back.
    pub handoff_cycles: u64,
    pub id_adder_forwarding: bool,
    pub trace: bool,
    pub report: Option<PathBuf>,
    pub csv: Option<PathBuf>,
}

impl Default for Config {
    fn default() -> Self {
        let p = PipelineConfig::default();
        Self {
            imem_size_bytes: DEFAULT_IMEM_BYTES,
            dmem_size_bytes: None,
            freq_mhz: DEFAULT_FREQ_MHZ,
            max_cycles: DEFAULT_MAX_CYCLES,
            cycle_models: BTreeMap::new(),
            handoff_cycles: p.handoff_cycles,
            id_adder_forwarding: p.id_adder_forwarding,
            trace: false,
            report: None,
            csv: None,
        }
    }
}

impl Config {
    pub fn load(path: &Path) -> Result<Self, ConfigError> {
        let text = std::fs::read_to_string(path).map_err(|source| ConfigError::Read { path: path.into(), source })?;
        let cfg: Config =
            serde_json::from_str(&text).map_err(|source| ConfigError::Parse { path: path.into(), source })?;
        cfg.validate()?;
        Ok(cfg)
    }

    /// Loads `explicit` if given, else the file named by `RVMURAC_CONFIG`,
    /// else the defaults.
    pub fn resolve(explicit: Option<&Path>) -> Result<Self, ConfigError> {
        match explicit {
            Some(p) => Self::load(p),
            None => match std::env::var_os(CONFIG_ENV) {
                Some(p) if !p.is_empty() => Self::load(Path::new(&p)),
                _ => Ok(Self::default()),
            },
        }
    }

    pub fn validate(&self) -> Result<(), ConfigError> {
        check_size("imem_size_bytes", self.imem_size_bytes)?;
        if let Some(d) = self.dmem_size_bytes {
            check_size("dmem_size_bytes", d)?;
        }
        if !(self.freq_mhz > 0.0 && self.freq_mhz.is_finite()) {
            return Err(ConfigError::BadFrequency(self.freq_mhz));
        }
        for (app, m) in &self.cycle_models {
            if m.elems_per_cycle == 0 {
                return Err(ConfigError::BadCycleModel(*app));
            }
        }
        Ok(())
    }

    pub fn pipeline(&self) -> PipelineConfig {
        PipelineConfig {
            id_adder_forwarding: self.id_adder_forwarding,
            handoff_cycles: self.handoff_cycles,
            trace: self.trace,
        }
    }

    pub fn cycle_model(&self, app: App) -> CycleModel {
        self.cycle_models.get(&app).copied().unwrap_or_else(|| CycleModel::default_for(app))
    }
}

fn check_size(field: &'static str, value: usize) -> Result<(), ConfigError> {
    if value >= MIN_MEM_BYTES && value.is_power_of_two() {
        Ok(())
    } else {
        Err(ConfigError::BadMemorySize { field, value })
    }
}
