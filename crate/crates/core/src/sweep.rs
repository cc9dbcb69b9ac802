//! Parameter sweeps and region maps that regenerate the figure data.
//!
//! Cells are evaluated in parallel but always collected in grid order, so
//! every table is a deterministic function of its inputs.

use std::fmt;
use std::str::FromStr;

use rayon::prelude::*;
use serde::Serialize;

use crate::drive::{xi_to_tau, DriveSchedule, TauSearch, XiOptions};
use crate::error::{OttoError, Result};
use crate::optimize::{
    opt_eff_ho_quasistatic, opt_eff_tls, opt_eff_tls_quasistatic, opt_ratio_high_t,
    reduced_work_high_t,
};
use crate::params::EngineParams;
use crate::table::{Table, Value};
use crate::thermo::{self, carnot_from_ratio};

/// Inclusive arithmetic grid `min, min + step, …, ≤ max`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct Grid {
    pub min: f64,
    pub max: f64,
    pub step: f64,
}

impl Grid {
    pub fn new(min: f64, max: f64, step: f64) -> Result<Self> {
        if !(min.is_finite() && max.is_finite() && step.is_finite()) {
            return Err(OttoError::validation(
                "grid",
                "bounds and step must be finite",
            ));
        }
        if step <= 0.0 {
            return Err(OttoError::validation(
                "grid",
                format!("step must be > 0, got {step}"),
            ));
        }
        if max < min {
            return Err(OttoError::validation(
                "grid",
                format!("empty range {min}:{max}"),
            ));
        }
        Ok(Grid { min, max, step })
    }

    pub fn single(v: f64) -> Result<Self> {
        Grid::new(v, v, 1.0)
    }

    pub fn len(&self) -> usize {
        ((self.max - self.min) / self.step * (1.0 + 1e-12) + 1e-9).floor() as usize + 1
    }

    pub fn is_empty(&self) -> bool {
        false
    }

    /// Points are computed as `min + k·step`, never by accumulation.
    pub fn values(&self) -> Vec<f64> {
        (0..self.len())
            .map(|k| self.min + k as f64 * self.step)
            .collect()
    }
}

impl FromStr for Grid {
    type Err = OttoError;

    /// `min:max:step`, or a single number.
    fn from_str(s: &str) -> Result<Self> {
        let parts: Vec<&str> = s.split(':').collect();
        let num = |t: &str| {
            t.trim()
                .parse::<f64>()
                .map_err(|_| OttoError::validation("grid", format!("bad number {t:?} in {s:?}")))
        };
        match parts.as_slice() {
            [v] => Grid::single(num(v)?),
            [a, b, c] => Grid::new(num(a)?, num(b)?, num(c)?),
            _ => Err(OttoError::validation(
                "grid",
                format!("expected min:max:step, got {s:?}"),
            )),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum RegionClass {
    NoWork,
    EngineBelowCarnot,
    EngineAboveCarnot,
}

impl RegionClass {
    pub fn as_str(&self) -> &'static str {
        match self {
            RegionClass::NoWork => "no_work",
            RegionClass::EngineBelowCarnot => "engine_below_carnot",
            RegionClass::EngineAboveCarnot => "engine_above_carnot",
        }
    }
}

impl fmt::Display for RegionClass {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct RegionCell {
    pub r: f64,
    pub xi: f64,
    pub classification: RegionClass,
    /// Absent exactly when the cell is `NoWork`.
    pub eta_opt: Option<f64>,
}

/// Classify one (r, ξ) point at the high-temperature maximum-work ratio.
///
/// No work when the optimal ratio leaves (0, 1) or the work at that ratio
/// is non-negative; otherwise the optimized efficiency is compared with
/// the Carnot value 1 − β_h/β_c.
pub fn region_cell(beta_ratio: f64, r: f64, xi: f64) -> Result<RegionCell> {
    if !(0.0..0.5).contains(&xi) {
        return Err(OttoError::validation(
            "xi",
            format!("region map needs xi in [0, 1/2), got {xi}"),
        ));
    }
    let no_work = RegionCell {
        r,
        xi,
        classification: RegionClass::NoWork,
        eta_opt: None,
    };
    let ratio = match opt_ratio_high_t(beta_ratio, r, xi) {
        Ok(v) => v,
        Err(OttoError::OutOfDomain { .. }) => return Ok(no_work),
        Err(e) => return Err(e),
    };
    if !(reduced_work_high_t(beta_ratio, r, xi, ratio) < 0.0) {
        return Ok(no_work);
    }
    let eta = opt_eff_tls(beta_ratio, r, xi)?;
    let classification = if eta > carnot_from_ratio(beta_ratio) {
        RegionClass::EngineAboveCarnot
    } else {
        RegionClass::EngineBelowCarnot
    };
    Ok(RegionCell {
        r,
        xi,
        classification,
        eta_opt: Some(eta),
    })
}

/// Cells ordered ξ-major: every r for the first ξ, then the next ξ.
pub fn region_map(beta_ratio: f64, r_grid: &[f64], xi_grid: &[f64]) -> Result<Vec<RegionCell>> {
    let points: Vec<(f64, f64)> = xi_grid
        .iter()
        .flat_map(|&xi| r_grid.iter().map(move |&r| (r, xi)))
        .collect();
    points
        .par_iter()
        .map(|&(r, xi)| region_cell(beta_ratio, r, xi))
        .collect()
}

pub fn region_table(beta_ratio: f64, cells: &[RegionCell]) -> Table {
    let mut t = Table::new(["r", "xi", "classification", "eta_opt", "eta_carnot"]);
    for c in cells {
        t.push(vec![
            c.r.into(),
            c.xi.into(),
            c.classification.as_str().into(),
            Value::opt(c.eta_opt),
            carnot_from_ratio(beta_ratio).into(),
        ]);
    }
    t
}

/// Smallest r in `[0, r_max]` at which the region map stops reporting
/// `NoWork` for this ξ, found by bisection. `None` if the whole range is
/// no-work; `Some(0.0)` if r = 0 already extracts.
pub fn extraction_threshold_r(beta_ratio: f64, xi: f64, r_max: f64) -> Result<Option<f64>> {
    let works = |r: f64| -> Result<bool> {
        Ok(region_cell(beta_ratio, r, xi)?.classification != RegionClass::NoWork)
    };
    if works(0.0)? {
        return Ok(Some(0.0));
    }
    if !works(r_max)? {
        return Ok(None);
    }
    let (mut lo, mut hi) = (0.0, r_max);
    for _ in 0..200 {
        let mid = 0.5 * (lo + hi);
        if works(mid)? {
            hi = mid;
        } else {
            lo = mid;
        }
        if hi - lo <= 1e-14 * hi.max(1.0) {
            break;
        }
    }
    Ok(Some(hi))
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub enum EfficiencyMode {
    /// High-temperature closed forms at the maximum-work ratio.
    OptimizedHighT { beta_ratio: f64 },
    /// Exact efficiency at fixed ω_c, ω_h, β_c, β_h; r is taken from the grid.
    FixedFrequenciesExact { params: EngineParams },
}

/// Optional per-cycle work rate −W/(2τ + t_thermal), with τ the stroke
/// duration that realizes each ξ on the drive schedule. Not part of the
/// engine model itself, which never assigns durations to strokes.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct WorkRateOptions {
    /// Duration attributed to the two bath contacts together (s).
    pub t_thermal: f64,
    pub search: TauSearch,
}

pub const WORK_RATE_COLUMN: &str = "work_rate_heuristic";

pub fn efficiency_sweep(
    mode: EfficiencyMode,
    r_grid: &[f64],
    xi_list: &[f64],
    work_rate: Option<&WorkRateOptions>,
) -> Result<Table> {
    let mut columns = vec!["r", "xi", "eta", "eta_carnot", "extracting"];
    let taus: Option<Vec<Option<f64>>> = match (mode, work_rate) {
        (EfficiencyMode::FixedFrequenciesExact { params }, Some(opts)) => {
            columns.push(WORK_RATE_COLUMN);
            Some(
                xi_list
                    .par_iter()
                    .map(|&xi| {
                        if xi > 0.0 && xi < 0.5 {
                            xi_to_tau(params.omega_c, params.omega_h, xi, &opts.search)
                                .map(|hit| Some(hit.tau))
                        } else {
                            Ok(None)
                        }
                    })
                    .collect::<Result<_>>()?,
            )
        }
        _ => None,
    };

    let points: Vec<(usize, f64, f64)> = xi_list
        .iter()
        .enumerate()
        .flat_map(|(i, &xi)| r_grid.iter().map(move |&r| (i, r, xi)))
        .collect();
    let rows: Vec<Vec<Value>> = points
        .par_iter()
        .map(|&(i, r, xi)| -> Result<Vec<Value>> {
            match mode {
                EfficiencyMode::OptimizedHighT { beta_ratio } => {
                    let cell = region_cell(beta_ratio, r, xi)?;
                    Ok(vec![
                        r.into(),
                        xi.into(),
                        Value::opt(cell.eta_opt),
                        carnot_from_ratio(beta_ratio).into(),
                        cell.eta_opt.is_some().into(),
                    ])
                }
                EfficiencyMode::FixedFrequenciesExact { params } => {
                    let p = params.with_r(r);
                    let t = thermo::evaluate(&p, xi)?;
                    let mut row = vec![
                        r.into(),
                        xi.into(),
                        Value::opt(t.eta),
                        thermo::carnot(&p).into(),
                        t.extracting.into(),
                    ];
                    if let (Some(taus), Some(opts)) = (&taus, work_rate) {
                        let rate = taus[i]
                            .filter(|_| t.extracting)
                            .map(|tau| -t.w_net / (2.0 * tau + opts.t_thermal));
                        row.push(Value::opt(rate));
                    }
                    Ok(row)
                }
            }
        })
        .collect::<Result<_>>()?;

    let mut table = Table::new(columns);
    for row in rows {
        table.push(row);
    }
    Ok(table)
}

/// Quasi-static optimized efficiencies of the two-level and
/// harmonic-oscillator engines side by side.
pub fn ho_comparison(beta_ratio: f64, r_grid: &[f64]) -> Result<Table> {
    let mut t = Table::new(["r", "eta_tls_qs", "eta_ho_qs", "eta_carnot"]);
    for &r in r_grid {
        let ho = match opt_eff_ho_quasistatic(beta_ratio, r) {
            Ok(v) => Some(v),
            Err(OttoError::OutOfDomain { .. }) => None,
            Err(e) => return Err(e),
        };
        t.push(vec![
            r.into(),
            opt_eff_tls_quasistatic(beta_ratio, r)?.into(),
            Value::opt(ho),
            carnot_from_ratio(beta_ratio).into(),
        ]);
    }
    Ok(t)
}

/// ξ(τ) over a grid of stroke durations (s). A cell that fails to converge
/// is reported with its last estimate and `converged = false`.
pub fn adiabaticity_sweep(
    omega_c: f64,
    omega_h: f64,
    tau_grid: &[f64],
    opts: &XiOptions,
) -> Result<Table> {
    if let Some(bad) = tau_grid.iter().find(|t| !(**t >= 0.0)) {
        return Err(OttoError::validation(
            "tau",
            format!("must be >= 0, got {bad}"),
        ));
    }
    let base = DriveSchedule::new(omega_c, omega_h, 0.0)?;
    let rows: Vec<Vec<Value>> = tau_grid
        .par_iter()
        .map(|&tau| -> Result<Vec<Value>> {
            let s = base.with_tau(tau)?;
            match s.adiabaticity_xi_with(opts) {
                Ok(rep) => Ok(vec![
                    tau.into(),
                    rep.xi.into(),
                    rep.propagator.steps_used.into(),
                    true.into(),
                ]),
                Err(OttoError::NonConvergence { steps, last, .. }) => {
                    Ok(vec![tau.into(), last.into(), steps.into(), false.into()])
                }
                Err(e) => Err(e),
            }
        })
        .collect::<Result<_>>()?;
    let mut t = Table::new(["tau_s", "xi", "steps_used", "converged"]);
    for row in rows {
        t.push(row);
    }
    Ok(t)
}
