//! Maximum-work operating points and optimized efficiencies.
//!
//! "Maximum power" here means maximal extracted work per cycle with respect
//! to the frequency gap, holding ω_c fixed and varying ω_h. The closed
//! forms assume tanh θ ≈ θ; [`numeric_max_work`] uses the exact objective.

use serde::Serialize;

use crate::error::{OttoError, Result};
use crate::params::{zeta, EngineParams};
use crate::thermo;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum OptMode {
    ClosedFormHighT,
    NumericExact,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct OptResult {
    /// ω_c/ω_h at the optimum.
    pub ratio: f64,
    pub omega_h_star: f64,
    pub w_net_star: f64,
    pub eta_star: f64,
    pub mode: OptMode,
}

fn check_xi_half(xi: f64) -> Result<()> {
    if (0.0..0.5).contains(&xi) {
        Ok(())
    } else {
        Err(OttoError::domain(
            "xi",
            format!("must lie in [0, 1/2), got {xi}"),
        ))
    }
}

fn check_beta_ratio(beta_ratio: f64) -> Result<()> {
    if beta_ratio.is_finite() && beta_ratio > 0.0 {
        Ok(())
    } else {
        Err(OttoError::validation(
            "beta_ratio",
            format!("must be > 0, got {beta_ratio}"),
        ))
    }
}

/// ω_c/ω_h = 2x / [(1 − 2ξ)(1 + x)] with x = ζ·β_h/β_c.
pub fn opt_ratio_high_t(beta_ratio: f64, r: f64, xi: f64) -> Result<f64> {
    check_beta_ratio(beta_ratio)?;
    check_xi_half(xi)?;
    let x = zeta(r) * beta_ratio;
    let ratio = 2.0 * x / ((1.0 - 2.0 * xi) * (1.0 + x));
    if ratio >= 1.0 {
        return Err(OttoError::domain(
            "optimal frequency ratio",
            format!("omega_c/omega_h = {ratio} >= 1, no expansion stroke"),
        ));
    }
    Ok(ratio)
}

/// Optimized TLS efficiency at the high-temperature maximum-work ratio,
/// `1 − 2x·[2 − (1−2ξ)²(1+x)] / [(1−2ξ)²(1−x²)]`.
pub fn opt_eff_tls(beta_ratio: f64, r: f64, xi: f64) -> Result<f64> {
    opt_ratio_high_t(beta_ratio, r, xi)?;
    let x = zeta(r) * beta_ratio;
    let a = (1.0 - 2.0 * xi).powi(2);
    Ok(1.0 - 2.0 * x * ((2.0 - a * (1.0 + x)) / (a * (1.0 - x * x))))
}

/// Quasi-static optimized TLS efficiency, `1 − 2x/(1 + x)`.
pub fn opt_eff_tls_quasistatic(beta_ratio: f64, r: f64) -> Result<f64> {
    check_beta_ratio(beta_ratio)?;
    let x = zeta(r) * beta_ratio;
    Ok(1.0 - 2.0 * x / (1.0 + x))
}

/// Harmonic-oscillator baseline, `1 − √x`.
pub fn opt_eff_ho_quasistatic(beta_ratio: f64, r: f64) -> Result<f64> {
    check_beta_ratio(beta_ratio)?;
    let x = zeta(r) * beta_ratio;
    if x > 1.0 {
        return Err(OttoError::domain(
            "harmonic-oscillator efficiency",
            format!("zeta * beta_ratio = {x} > 1"),
        ));
    }
    Ok(1.0 - x.sqrt())
}

/// Net work per cycle in units of ħ²β_cω_h²/4 under tanh θ ≈ θ, at
/// frequency ratio ρ = ω_c/ω_h. Negative means extraction.
pub fn reduced_work_high_t(beta_ratio: f64, r: f64, xi: f64, ratio: f64) -> f64 {
    let x = zeta(r) * beta_ratio;
    -(1.0 - ratio) * (ratio - x) + 2.0 * xi * ratio * (1.0 + x)
}

/// Closed-form operating point for the given base parameters. The returned
/// work is evaluated with the exact objective at the predicted ω_h.
pub fn closed_form_high_t(p_base: &EngineParams, xi: f64) -> Result<OptResult> {
    let ratio = opt_ratio_high_t(p_base.beta_ratio(), p_base.r, xi)?;
    let omega_h_star = p_base.omega_c / ratio;
    let p = p_base.with_omega_h(omega_h_star);
    Ok(OptResult {
        ratio,
        omega_h_star,
        w_net_star: thermo::work_net(&p, xi)?,
        eta_star: opt_eff_tls(p_base.beta_ratio(), p_base.r, xi)?,
        mode: OptMode::ClosedFormHighT,
    })
}

/// Number of probe points laid over (ω_c, cap·ω_c].
pub const GRID_POINTS: usize = 1024;
const GOLDEN_REL_TOL: f64 = 1e-10;

/// Golden-section minimization on `[a, b]`. Ties go to the left point.
pub fn golden_section_min(
    f: impl Fn(f64) -> f64,
    mut a: f64,
    mut b: f64,
    rel_tol: f64,
    max_iter: usize,
) -> (f64, f64) {
    const INV_PHI: f64 = 0.618_033_988_749_894_9;
    let mut x1 = b - INV_PHI * (b - a);
    let mut x2 = a + INV_PHI * (b - a);
    let mut f1 = f(x1);
    let mut f2 = f(x2);
    for _ in 0..max_iter {
        if (b - a) <= rel_tol * 0.5 * (a.abs() + b.abs()) {
            break;
        }
        if f1 <= f2 {
            b = x2;
            x2 = x1;
            f2 = f1;
            x1 = b - INV_PHI * (b - a);
            f1 = f(x1);
        } else {
            a = x1;
            x1 = x2;
            f1 = f2;
            x2 = a + INV_PHI * (b - a);
            f2 = f(x2);
        }
    }
    if f1 <= f2 {
        (x1, f1)
    } else {
        (x2, f2)
    }
}

/// Maximize extracted work −W(ω_h) over ω_h ∈ (ω_c, cap·ω_c].
///
/// A uniform probe grid brackets the best point, golden-section search
/// refines it, and the refined point is only accepted if it beats every
/// probe. Returns `Ok(None)` when no probe extracts work.
pub fn numeric_max_work(
    p_base: &EngineParams,
    xi: f64,
    ratio_cap: f64,
) -> Result<Option<OptResult>> {
    check_xi_half(xi)?;
    if !(ratio_cap.is_finite() && ratio_cap > 1.0) {
        return Err(OttoError::validation(
            "ratio_cap",
            format!("must exceed 1, got {ratio_cap}"),
        ));
    }
    p_base.with_omega_h(p_base.omega_c * ratio_cap).validate()?;

    let wc = p_base.omega_c;
    let span = (ratio_cap - 1.0) * wc;
    let omega_at = |k: usize| wc + span * k as f64 / GRID_POINTS as f64;
    let work = |omega_h: f64| -> f64 {
        if omega_h <= wc {
            return 0.0;
        }
        thermo::work_net(&p_base.with_omega_h(omega_h), xi).unwrap_or(f64::INFINITY)
    };

    let (mut best_k, mut best_w) = (1, work(omega_at(1)));
    for k in 2..=GRID_POINTS {
        let w = work(omega_at(k));
        if w < best_w {
            best_k = k;
            best_w = w;
        }
    }
    if !(best_w < 0.0) {
        return Ok(None);
    }

    let lo = omega_at(best_k - 1);
    let hi = omega_at((best_k + 1).min(GRID_POINTS));
    let (mut omega_star, mut w_star) = golden_section_min(work, lo, hi, GOLDEN_REL_TOL, 500);
    if !(w_star <= best_w) {
        omega_star = omega_at(best_k);
        w_star = best_w;
    }
    let p_star = p_base.with_omega_h(omega_star);
    Ok(Some(OptResult {
        ratio: wc / omega_star,
        omega_h_star: omega_star,
        w_net_star: w_star,
        eta_star: thermo::efficiency(&p_star, xi)?,
        mode: OptMode::NumericExact,
    }))
}
