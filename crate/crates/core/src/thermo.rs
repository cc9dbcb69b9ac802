//! Closed-form cycle thermodynamics as functions of the adiabaticity ξ.
//!
//! Sign convention: energy flowing into the working substance is positive,
//! so an engine has `q_hot > 0`, `q_cold < 0` and `w_net < 0`.
//!
//! The net work is taken as `−(q_hot + q_cold)`, which gives the finite-time
//! term `ħξ(ω_h tanh θ_c + ζ ω_c tanh θ_h)`. The same combination appears in
//! the denominator of ξ_max and is what the density-matrix cycle produces.

use serde::Serialize;

use crate::error::{OttoError, Result};
use crate::params::{EngineParams, HBAR_PEV_S};

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct CycleThermo {
    pub q_hot: f64,
    pub q_cold: f64,
    pub w_net: f64,
    /// Present only while the engine extracts work.
    pub eta: Option<f64>,
    pub xi_max: f64,
    pub extracting: bool,
    pub above_carnot: bool,
}

fn check_xi(xi: f64) -> Result<()> {
    if (0.0..=1.0).contains(&xi) {
        Ok(())
    } else {
        Err(OttoError::validation(
            "xi",
            format!("must lie in [0, 1], got {xi}"),
        ))
    }
}

pub fn heat_hot(p: &EngineParams, xi: f64) -> Result<f64> {
    check_xi(xi)?;
    let d = p.derive()?;
    let (tc, th) = (d.tanh_c(), d.tanh_h());
    Ok(0.5 * HBAR_PEV_S * p.omega_h * (tc - d.zeta * th) - HBAR_PEV_S * xi * p.omega_h * tc)
}

pub fn heat_cold(p: &EngineParams, xi: f64) -> Result<f64> {
    check_xi(xi)?;
    let d = p.derive()?;
    let (tc, th) = (d.tanh_c(), d.tanh_h());
    Ok(-0.5 * HBAR_PEV_S * p.omega_c * (tc - d.zeta * th)
        - HBAR_PEV_S * xi * d.zeta * p.omega_c * th)
}

/// Net work per cycle, `−(q_hot + q_cold)`.
pub fn work_net(p: &EngineParams, xi: f64) -> Result<f64> {
    Ok(-(heat_hot(p, xi)? + heat_cold(p, xi)?))
}

/// Largest ξ for which the cycle still extracts work. Non-positive when
/// ζ tanh θ_h ≥ tanh θ_c, i.e. when no ξ ≥ 0 works.
pub fn xi_max(p: &EngineParams) -> Result<f64> {
    let d = p.derive()?;
    let (tc, th) = (d.tanh_c(), d.tanh_h());
    Ok((p.omega_h - p.omega_c) * (tc - d.zeta * th)
        / (2.0 * (p.omega_h * tc + d.zeta * p.omega_c * th)))
}

/// η = 1 − (ω_c/ω_h)(1 + 2ξF)/(1 − 2ξG) inside the engine regime.
pub fn efficiency(p: &EngineParams, xi: f64) -> Result<f64> {
    check_xi(xi)?;
    let limit = xi_max(p)?;
    if !(xi < limit) {
        return Err(OttoError::OutOfRegime { xi, xi_max: limit });
    }
    let d = p.derive()?;
    let (tc, th) = (d.tanh_c(), d.tanh_h());
    let gap = tc - d.zeta * th;
    let f = d.zeta * th / gap;
    let g = tc / gap;
    Ok(1.0 - (p.omega_c / p.omega_h) * (1.0 + 2.0 * xi * f) / (1.0 - 2.0 * xi * g))
}

pub fn carnot(p: &EngineParams) -> f64 {
    carnot_from_ratio(p.beta_ratio())
}

/// 1 − β_h/β_c
pub fn carnot_from_ratio(beta_ratio: f64) -> f64 {
    1.0 - beta_ratio
}

pub fn evaluate(p: &EngineParams, xi: f64) -> Result<CycleThermo> {
    let q_hot = heat_hot(p, xi)?;
    let q_cold = heat_cold(p, xi)?;
    let w_net = -(q_hot + q_cold);
    let limit = xi_max(p)?;
    let extracting = xi < limit;
    let eta = if extracting {
        Some(efficiency(p, xi)?)
    } else {
        None
    };
    Ok(CycleThermo {
        q_hot,
        q_cold,
        w_net,
        eta,
        xi_max: limit,
        extracting,
        above_carnot: eta.is_some_and(|e| e > carnot(p)),
    })
}
