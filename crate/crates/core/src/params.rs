//! Engine parameters and the dimensionless quantities derived from them.
//!
//! Units: angular frequencies in rad/s, energies in peV, inverse
//! temperatures in 1/peV (Boltzmann's constant folded into β).

use std::f64::consts::PI;

use serde::{Deserialize, Serialize};

use crate::error::{OttoError, Result};

/// Reduced Planck constant in peV·s.
pub const HBAR_PEV_S: f64 = 6.582119569e-4;

/// Raw engine parameters.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct EngineParams {
    /// Cold-stroke angular frequency (rad/s).
    pub omega_c: f64,
    /// Hot-stroke angular frequency (rad/s).
    pub omega_h: f64,
    /// Inverse temperature of the cold reservoir (1/peV).
    pub beta_c: f64,
    /// Inverse temperature of the hot reservoir (1/peV).
    pub beta_h: f64,
    /// Reservoir squeezing parameter.
    pub r: f64,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct DerivedParams {
    pub theta_c: f64,
    pub theta_h: f64,
    pub zeta: f64,
    pub mu: f64,
    pub nu: f64,
}

impl DerivedParams {
    pub fn tanh_c(&self) -> f64 {
        self.theta_c.tanh()
    }

    pub fn tanh_h(&self) -> f64 {
        self.theta_h.tanh()
    }

    /// Polarization of the squeezed hot asymptotic state, ζ·tanh θ_h.
    pub fn hot_polarization(&self) -> f64 {
        self.zeta * self.tanh_h()
    }
}

/// ζ = 1/(μ² + ν²)² = sech²(2r).
pub fn zeta(r: f64) -> f64 {
    let c = (2.0 * r).cosh();
    1.0 / (c * c)
}

fn positive(field: &'static str, v: f64) -> Result<()> {
    if v.is_finite() && v > 0.0 {
        Ok(())
    } else {
        Err(OttoError::validation(
            field,
            format!("must be finite and > 0, got {v}"),
        ))
    }
}

impl EngineParams {
    pub fn new(omega_c: f64, omega_h: f64, beta_c: f64, beta_h: f64, r: f64) -> Result<Self> {
        let p = EngineParams {
            omega_c,
            omega_h,
            beta_c,
            beta_h,
            r,
        };
        p.validate()?;
        Ok(p)
    }

    /// Build from laboratory units: ordinary cold frequency in kHz, the
    /// frequency ratio ω_h/ω_c, the cold energy scale k_B·T_c in peV and
    /// the ratio β_h/β_c.
    pub fn from_lab_units(
        freq_c_khz: f64,
        ratio: f64,
        energy_scale_pev: f64,
        beta_ratio: f64,
        r: f64,
    ) -> Result<Self> {
        positive("freq_c_khz", freq_c_khz)?;
        positive("energy_scale_pev", energy_scale_pev)?;
        positive("beta_ratio", beta_ratio)?;
        if !(ratio.is_finite() && ratio > 1.0) {
            return Err(OttoError::validation(
                "omega_ratio",
                format!("must exceed 1 so that omega_h > omega_c, got {ratio}"),
            ));
        }
        let omega_c = 2.0 * PI * freq_c_khz * 1e3;
        let beta_c = 1.0 / energy_scale_pev;
        EngineParams::new(omega_c, ratio * omega_c, beta_c, beta_ratio * beta_c, r)
    }

    /// The NMR set: ω_c = 2π × 2.5 kHz, ω_h = 10 ω_c, β_c = 1/(10 peV),
    /// β_h = 0.7 β_c.
    pub fn nmr(r: f64) -> Self {
        EngineParams::from_lab_units(2.5, 10.0, 10.0, 0.7, r)
            .expect("built-in parameter set is valid")
    }

    pub fn validate(&self) -> Result<()> {
        positive("omega_c", self.omega_c)?;
        positive("omega_h", self.omega_h)?;
        if self.omega_h <= self.omega_c {
            return Err(OttoError::validation(
                "omega_h",
                format!(
                    "must exceed omega_c = {}, got {}",
                    self.omega_c, self.omega_h
                ),
            ));
        }
        positive("beta_c", self.beta_c)?;
        positive("beta_h", self.beta_h)?;
        if !(self.r.is_finite() && self.r >= 0.0) {
            return Err(OttoError::validation(
                "r",
                format!("squeezing must be finite and >= 0, got {}", self.r),
            ));
        }
        Ok(())
    }

    pub fn derive(&self) -> Result<DerivedParams> {
        self.validate()?;
        let mu = self.r.cosh();
        let nu = self.r.sinh();
        Ok(DerivedParams {
            theta_c: 0.5 * self.beta_c * HBAR_PEV_S * self.omega_c,
            theta_h: 0.5 * self.beta_h * HBAR_PEV_S * self.omega_h,
            zeta: zeta(self.r),
            mu,
            nu,
        })
    }

    pub fn beta_ratio(&self) -> f64 {
        self.beta_h / self.beta_c
    }

    pub fn with_r(self, r: f64) -> Self {
        EngineParams { r, ..self }
    }

    pub fn with_omega_h(self, omega_h: f64) -> Self {
        EngineParams { omega_h, ..self }
    }

    /// Non-fatal remarks about the record. The hot bath being no hotter
    /// than the cold one is allowed; extraction is decided by ξ_max.
    pub fn warnings(&self) -> Vec<String> {
        let mut out = Vec::new();
        if self.beta_h >= self.beta_c {
            out.push(format!(
                "beta_h ({}) >= beta_c ({}): hot reservoir is not hotter than the cold one",
                self.beta_h, self.beta_c
            ));
        }
        out
    }
}
