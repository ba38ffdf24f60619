//! `key = value` configuration files, merged under command-line flags.

use std::collections::BTreeMap;
use std::path::Path;

use isosusy::susy::IsotonicParams;
use isosusy::weber_spectra::{EigenSolveConfig, OscillatorParams};

use crate::CliError;

const KEYS: [&str; 7] = [
    "hbar",
    "omega",
    "a",
    "grid.n_points",
    "tol.root",
    "tol.series",
    "tol.scan_step",
];

#[derive(Clone, Debug, Default, PartialEq)]
pub struct FileConfig {
    values: BTreeMap<String, f64>,
}

impl FileConfig {
    pub fn parse(text: &str) -> Result<FileConfig, CliError> {
        let mut values = BTreeMap::new();
        for (i, raw) in text.lines().enumerate() {
            let line = raw.split('#').next().unwrap_or("").trim();
            if line.is_empty() {
                continue;
            }
            let (key, value) = line
                .split_once('=')
                .ok_or_else(|| CliError::Usage(format!("config line {}: expected `key = value`", i + 1)))?;
            let key = key.trim();
            if !KEYS.contains(&key) {
                return Err(CliError::Usage(format!("config line {}: unknown key {key:?}", i + 1)));
            }
            let value: f64 = value
                .trim()
                .parse()
                .map_err(|_| CliError::Usage(format!("config line {}: {key} is not a number", i + 1)))?;
            values.insert(key.to_string(), value);
        }
        Ok(FileConfig { values })
    }

    pub fn load(path: &Path) -> Result<FileConfig, CliError> {
        let text = std::fs::read_to_string(path)
            .map_err(|e| CliError::Usage(format!("cannot read config {}: {e}", path.display())))?;
        FileConfig::parse(&text)
    }

    pub fn get(&self, key: &str) -> Option<f64> {
        self.values.get(key).copied()
    }
}

/// Physical parameters and solver settings after merging flags over the file.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct RunConfig {
    pub hbar: f64,
    pub omega: f64,
    pub a: f64,
    pub n_points: usize,
    pub solver: EigenSolveConfig,
}

pub struct Overrides {
    pub hbar: Option<f64>,
    pub omega: Option<f64>,
    pub a: Option<f64>,
}

fn positive(name: &str, v: f64) -> Result<f64, CliError> {
    if v.is_finite() && v > 0.0 {
        Ok(v)
    } else {
        Err(CliError::Usage(format!("{name} must be positive, got {v}")))
    }
}

impl RunConfig {
    pub fn merge(file: &FileConfig, flags: &Overrides) -> Result<RunConfig, CliError> {
        let hbar = positive("hbar", flags.hbar.or(file.get("hbar")).unwrap_or(1.0))?;
        let omega = positive("omega", flags.omega.or(file.get("omega")).unwrap_or(1.0))?;
        let a = positive("a", flags.a.or(file.get("a")).unwrap_or(1.0))?;
        let n_points = file.get("grid.n_points").unwrap_or(401.0);
        if n_points < 2.0 || n_points.fract() != 0.0 {
            return Err(CliError::Usage(format!(
                "grid.n_points must be an integer >= 2, got {n_points}"
            )));
        }
        // output is printed to 15 digits, so roots are bisected to full precision
        let mut solver = EigenSolveConfig::default().polished();
        if let Some(t) = file.get("tol.root") {
            solver.root_tol = positive("tol.root", t)?;
        }
        if let Some(t) = file.get("tol.series") {
            solver.precision.series_tol = positive("tol.series", t)?;
        }
        if let Some(t) = file.get("tol.scan_step") {
            solver.scan_step = positive("tol.scan_step", t)?;
        }
        solver.validate().map_err(|e| CliError::Usage(e.to_string()))?;
        Ok(RunConfig {
            hbar,
            omega,
            a,
            n_points: n_points as usize,
            solver,
        })
    }

    pub fn oscillator(&self) -> OscillatorParams {
        OscillatorParams {
            hbar: self.hbar,
            omega: self.omega,
        }
    }

    pub fn isotonic(&self) -> Result<IsotonicParams, CliError> {
        IsotonicParams::new(self.hbar, self.a).map_err(|e| CliError::Usage(e.to_string()))
    }
}
