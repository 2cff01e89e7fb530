//! Run configuration: module defaults, overridden by a TOML file (given by
//! `--config` or `ORLICZ_CONFIG`), overridden by flags.

use std::path::Path;

use serde::Deserialize;

use orlicz_core::LogGrid;

pub const CONFIG_ENV: &str = "ORLICZ_CONFIG";

#[derive(Debug, Clone, Copy, PartialEq, Eq, Deserialize, clap::ValueEnum)]
#[serde(rename_all = "lowercase")]
pub enum Format {
    Json,
    Csv,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct RunConfig {
    pub grid_min: f64,
    pub grid_max: f64,
    pub per_decade: usize,
    pub margin: f64,
    pub tol: f64,
    pub format: Format,
    pub seed: u64,
}

impl Default for RunConfig {
    fn default() -> Self {
        let g = LogGrid::DEFAULT;
        RunConfig { grid_min: g.min, grid_max: g.max, per_decade: g.per_decade, margin: 0.02, tol: 1e-9, format: Format::Json, seed: 0 }
    }
}

/// Every field optional; absent fields keep the defaults.
#[derive(Debug, Default, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ConfigFile {
    pub grid_min: Option<f64>,
    pub grid_max: Option<f64>,
    pub per_decade: Option<usize>,
    pub margin: Option<f64>,
    pub tol: Option<f64>,
    pub format: Option<Format>,
    pub seed: Option<u64>,
}

impl ConfigFile {
    pub fn load(path: &Path) -> Result<Self, String> {
        let text = std::fs::read_to_string(path).map_err(|e| format!("cannot read config {}: {e}", path.display()))?;
        toml::from_str(&text).map_err(|e| format!("bad config {}: {e}", path.display()))
    }
}

impl RunConfig {
    pub fn apply(&mut self, f: &ConfigFile) {
        macro_rules! take {
            ($($name:ident),*) => { $( if let Some(v) = f.$name { self.$name = v; } )* };
        }
        take!(grid_min, grid_max, per_decade, margin, tol, format, seed);
    }

    pub fn validate(&self) -> Result<(), String> {
        if !(self.grid_min > 0.0 && self.grid_min < 1.0 && self.grid_max > 1.0 && self.grid_max.is_finite()) {
            return Err(format!("need 0 < grid_min < 1 < grid_max, got [{}, {}]", self.grid_min, self.grid_max));
        }
        if !(8..=512).contains(&self.per_decade) {
            return Err(format!("per_decade = {} must lie in [8, 512]", self.per_decade));
        }
        if !(self.margin >= 0.0 && self.margin < 1.0) {
            return Err(format!("margin = {} must lie in [0, 1)", self.margin));
        }
        if !(self.tol > 0.0 && self.tol < 1.0) {
            return Err(format!("tol = {} must lie in (0, 1)", self.tol));
        }
        Ok(())
    }

    pub fn grid(&self) -> LogGrid {
        LogGrid::new(self.grid_min, self.grid_max, self.per_decade).expect("validated")
    }
}
