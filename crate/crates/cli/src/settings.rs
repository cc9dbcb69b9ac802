//! Layered settings: command-line flags over a key=value file over the
//! built-in NMR defaults.

use std::collections::BTreeMap;
use std::path::Path;

use anyhow::{Context, Result};
use otto_core::{EngineParams, Format, Grid, OttoError};

const KEYS: [&str; 11] = [
    "freq_c_khz",
    "omega_ratio",
    "energy_scale_pev",
    "beta_ratio",
    "r",
    "xi",
    "tau_ms",
    "format",
    "grid_r",
    "grid_xi",
    "grid_tau_ms",
];

fn invalid(field: &'static str, reason: String) -> anyhow::Error {
    OttoError::Validation { field, reason }.into()
}

/// Flat `key = value` lines; `#` starts a comment. Dashes in keys are
/// treated as underscores.
pub fn parse_config(text: &str) -> Result<BTreeMap<String, String>> {
    let mut out = BTreeMap::new();
    for (n, raw) in text.lines().enumerate() {
        let line = raw.split('#').next().unwrap_or("").trim();
        if line.is_empty() {
            continue;
        }
        let (k, v) = line
            .split_once('=')
            .ok_or_else(|| invalid("config", format!("line {}: expected key = value", n + 1)))?;
        let key = k.trim().replace('-', "_");
        if !KEYS.contains(&key.as_str()) {
            return Err(invalid(
                "config",
                format!("line {}: unknown key {key:?}", n + 1),
            ));
        }
        out.insert(key, v.trim().to_owned());
    }
    Ok(out)
}

pub fn read_config(path: &Path) -> Result<BTreeMap<String, String>> {
    let text = std::fs::read_to_string(path)
        .with_context(|| format!("reading config {}", path.display()))?;
    parse_config(&text)
}

/// Everything the subcommands share, after layering.
#[derive(Debug, Clone)]
pub struct Settings {
    pub freq_c_khz: f64,
    pub omega_ratio: f64,
    pub energy_scale_pev: f64,
    pub beta_ratio: f64,
    pub r: f64,
    pub xi: Option<f64>,
    pub tau_ms: Option<String>,
    pub format: Option<Format>,
    pub grid_r: Option<Grid>,
    pub grid_xi: Option<Grid>,
    pub grid_tau_ms: Option<Grid>,
}

impl Default for Settings {
    fn default() -> Self {
        Settings {
            freq_c_khz: 2.5,
            omega_ratio: 10.0,
            energy_scale_pev: 10.0,
            beta_ratio: 0.7,
            r: 1.0,
            xi: None,
            tau_ms: None,
            format: None,
            grid_r: None,
            grid_xi: None,
            grid_tau_ms: None,
        }
    }
}

fn number(key: &'static str, v: &str) -> Result<f64> {
    v.trim()
        .parse()
        .map_err(|_| invalid(key, format!("expected a number, got {v:?}")))
}

impl Settings {
    /// Apply one `key = value` pair, from either source.
    pub fn set(&mut self, key: &str, value: &str) -> Result<()> {
        match key {
            "freq_c_khz" => self.freq_c_khz = number("freq_c_khz", value)?,
            "omega_ratio" => self.omega_ratio = number("omega_ratio", value)?,
            "energy_scale_pev" => self.energy_scale_pev = number("energy_scale_pev", value)?,
            "beta_ratio" => self.beta_ratio = number("beta_ratio", value)?,
            "r" => self.r = number("r", value)?,
            "xi" => self.xi = Some(number("xi", value)?),
            "tau_ms" => self.tau_ms = Some(value.to_owned()),
            "format" => self.format = Some(value.parse()?),
            "grid_r" => self.grid_r = Some(value.parse()?),
            "grid_xi" => self.grid_xi = Some(value.parse()?),
            "grid_tau_ms" => self.grid_tau_ms = Some(value.parse()?),
            other => return Err(invalid("config", format!("unknown key {other:?}"))),
        }
        Ok(())
    }

    /// `axis=min:max:step` from a `--grid` flag.
    pub fn set_grid(&mut self, spec: &str) -> Result<()> {
        let (axis, range) = spec
            .split_once('=')
            .ok_or_else(|| invalid("grid", format!("expected axis=min:max:step, got {spec:?}")))?;
        match axis.trim() {
            "r" => self.set("grid_r", range),
            "xi" => self.set("grid_xi", range),
            "tau_ms" | "tau-ms" | "tau" => self.set("grid_tau_ms", range),
            other => Err(invalid(
                "grid",
                format!("unknown axis {other:?} (r, xi, tau_ms)"),
            )),
        }
    }

    pub fn params(&self) -> Result<EngineParams> {
        Ok(EngineParams::from_lab_units(
            self.freq_c_khz,
            self.omega_ratio,
            self.energy_scale_pev,
            self.beta_ratio,
            self.r,
        )?)
    }

    pub fn format(&self) -> Format {
        self.format.unwrap_or(Format::Csv)
    }
}
