//! Expansion-stroke drive and its time-ordered propagator.
//!
//! The Hamiltonian rotates from ½ħω_c σ_x to ½ħω_h σ_y while its gap grows
//! linearly:
//!
//! ```text
//! H(t) = ½ħ [ω_c (1 − t/τ) + ω_h t/τ] [cos(πt/2τ) σ_x + sin(πt/2τ) σ_y]
//! ```
//!
//! `U = T exp(−(i/ħ) ∫₀^τ H(t) dt)` is built as an ordered product of exact
//! SU(2) exponentials of the midpoint generator, latest step on the left.
//! Every factor is unitary to rounding, so no renormalization is needed.

use std::f64::consts::FRAC_PI_2;

use serde::Serialize;

use crate::error::{OttoError, Result};
use crate::params::HBAR_PEV_S;
use crate::qmath::{pauli, su2_step, Axis, Ket2, Mat2};

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct DriveSchedule {
    pub omega_c: f64,
    pub omega_h: f64,
    /// Stroke duration in seconds.
    pub tau: f64,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Propagator {
    pub u: Mat2,
    pub steps_used: usize,
    /// Set once the step count has been certified by step doubling.
    pub converged: bool,
}

impl Propagator {
    pub fn identity() -> Self {
        Propagator {
            u: Mat2::identity(),
            steps_used: 0,
            converged: true,
        }
    }

    /// |⟨+y|U|−x⟩|²
    pub fn xi(&self) -> f64 {
        self.u
            .sandwich(&Ket2::plus_y(), &Ket2::minus_x())
            .norm_sqr()
    }

    /// |⟨−y|U|+x⟩|², equal to [`Propagator::xi`] for any unitary.
    pub fn xi_reverse(&self) -> f64 {
        self.u
            .sandwich(&Ket2::minus_y(), &Ket2::plus_x())
            .norm_sqr()
    }
}

/// Step-doubling controls for [`DriveSchedule::adiabaticity_xi`].
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct XiOptions {
    pub start_steps: usize,
    pub max_steps: usize,
    pub tol: f64,
}

impl Default for XiOptions {
    fn default() -> Self {
        XiOptions {
            start_steps: 1024,
            max_steps: 1 << 22,
            tol: 1e-10,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct XiReport {
    pub xi: f64,
    pub xi_reverse: f64,
    pub propagator: Propagator,
}

impl DriveSchedule {
    pub fn new(omega_c: f64, omega_h: f64, tau: f64) -> Result<Self> {
        if !(omega_c.is_finite() && omega_c > 0.0) {
            return Err(OttoError::validation(
                "omega_c",
                format!("must be > 0, got {omega_c}"),
            ));
        }
        if !(omega_h.is_finite() && omega_h > omega_c) {
            return Err(OttoError::validation(
                "omega_h",
                format!("must exceed omega_c = {omega_c}, got {omega_h}"),
            ));
        }
        if !(tau.is_finite() && tau >= 0.0) {
            return Err(OttoError::validation(
                "tau",
                format!("must be >= 0, got {tau}"),
            ));
        }
        Ok(DriveSchedule {
            omega_c,
            omega_h,
            tau,
        })
    }

    pub fn with_tau(self, tau: f64) -> Result<Self> {
        DriveSchedule::new(self.omega_c, self.omega_h, tau)
    }

    /// Instantaneous angular frequency and field angle at time `t`.
    #[inline]
    fn frame(&self, t: f64) -> (f64, f64) {
        let s = t / self.tau;
        let omega = self.omega_c * (1.0 - s) + self.omega_h * s;
        (omega, FRAC_PI_2 * s)
    }

    /// H(t) in peV.
    pub fn hamiltonian_at(&self, t: f64) -> Result<Mat2> {
        if self.tau <= 0.0 {
            return Err(OttoError::validation("tau", "H(t) needs tau > 0"));
        }
        if !(0.0..=self.tau).contains(&t) {
            return Err(OttoError::Range { t, tau: self.tau });
        }
        let (omega, phi) = self.frame(t);
        let dir = pauli(Axis::X).scale_re(phi.cos()) + pauli(Axis::Y).scale_re(phi.sin());
        Ok(dir.scale_re(0.5 * HBAR_PEV_S * omega))
    }

    /// Ordered product over `[t0, t1]` with `n_steps` midpoint factors.
    pub fn propagate_segment(&self, t0: f64, t1: f64, n_steps: usize) -> Result<Propagator> {
        if n_steps == 0 {
            return Err(OttoError::validation("n_steps", "must be >= 1"));
        }
        if !(self.tau > 0.0) {
            return Err(OttoError::validation("tau", "propagation needs tau > 0"));
        }
        if !(0.0 <= t0 && t0 <= t1 && t1 <= self.tau) {
            return Err(OttoError::Range {
                t: t1,
                tau: self.tau,
            });
        }
        let dt = (t1 - t0) / n_steps as f64;
        let mut u = Mat2::identity();
        for k in 0..n_steps {
            let (omega, phi) = self.frame(t0 + (k as f64 + 0.5) * dt);
            // H(t)·dt/ħ = a (cos φ σx + sin φ σy)
            let a = 0.5 * omega * dt;
            let (s, c) = phi.sin_cos();
            u = su2_step(a, c, s, 0.0).matmul(&u);
        }
        Ok(Propagator {
            u,
            steps_used: n_steps,
            converged: false,
        })
    }

    pub fn propagate(&self, n_steps: usize) -> Result<Propagator> {
        self.propagate_segment(0.0, self.tau, n_steps)
    }

    /// ξ = |⟨+y|U|−x⟩|², doubling the step count until successive
    /// estimates agree to `tol`.
    pub fn adiabaticity_xi_with(&self, opts: &XiOptions) -> Result<XiReport> {
        if self.tau == 0.0 {
            let p = Propagator::identity();
            return Ok(XiReport {
                xi: p.xi(),
                xi_reverse: p.xi_reverse(),
                propagator: p,
            });
        }
        let mut n = opts.start_steps.max(1);
        let mut prev = self.propagate(n)?;
        loop {
            if n >= opts.max_steps {
                let last = prev.xi();
                return Err(OttoError::NonConvergence {
                    steps: n,
                    previous: self.propagate(n / 2).map(|p| p.xi()).unwrap_or(f64::NAN),
                    last,
                });
            }
            n *= 2;
            let next = self.propagate(n)?;
            let (x_prev, x_next) = (prev.xi(), next.xi());
            if (x_next - x_prev).abs() < opts.tol {
                let propagator = Propagator {
                    converged: true,
                    ..next
                };
                let xi_reverse = propagator.xi_reverse();
                if (x_next - xi_reverse).abs() > 1e-10 {
                    return Err(OttoError::Internal(format!(
                        "two-sided transition probabilities disagree: {x_next} vs {xi_reverse}"
                    )));
                }
                return Ok(XiReport {
                    xi: x_next,
                    xi_reverse,
                    propagator,
                });
            }
            prev = next;
        }
    }

    pub fn adiabaticity_xi(&self) -> Result<XiReport> {
        self.adiabaticity_xi_with(&XiOptions::default())
    }
}

/// Grid controls for [`xi_to_tau`].
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct TauSearch {
    /// Coarse scan spacing (s).
    pub grid_step: f64,
    /// Give up beyond this duration (s).
    pub tau_cap: f64,
    /// Bisection stops once the bracket is narrower than this (s).
    pub refine_tol: f64,
    pub xi: XiOptions,
}

impl Default for TauSearch {
    fn default() -> Self {
        TauSearch {
            grid_step: 1e-4,
            tau_cap: 20e-3,
            refine_tol: 1e-8,
            xi: XiOptions::default(),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct TauLookup {
    /// First coarse grid point with ξ ≤ target.
    pub tau_grid: f64,
    /// Refined first crossing inside the last coarse interval.
    pub tau: f64,
    pub xi: f64,
}

/// Smallest stroke duration whose ξ drops to `xi_target`.
///
/// ξ(τ) oscillates as it decays, so the search scans the coarse grid from
/// τ = 0, stops at the first point at or below the target, and bisects the
/// preceding interval.
pub fn xi_to_tau(
    omega_c: f64,
    omega_h: f64,
    xi_target: f64,
    search: &TauSearch,
) -> Result<TauLookup> {
    if !(xi_target > 0.0 && xi_target < 0.5) {
        return Err(OttoError::validation(
            "xi_target",
            format!("must lie in (0, 1/2), got {xi_target}"),
        ));
    }
    if !(search.grid_step > 0.0 && search.tau_cap > 0.0 && search.refine_tol > 0.0) {
        return Err(OttoError::validation(
            "tau search",
            "grid step, cap and tolerance must be > 0",
        ));
    }
    let base = DriveSchedule::new(omega_c, omega_h, 0.0)?;
    let xi_at =
        |tau: f64| -> Result<f64> { Ok(base.with_tau(tau)?.adiabaticity_xi_with(&search.xi)?.xi) };

    let mut k = 1usize;
    loop {
        let tau = k as f64 * search.grid_step;
        if tau > search.tau_cap * (1.0 + 1e-12) {
            return Err(OttoError::NotFound(format!(
                "xi <= {xi_target} not reached for tau <= {} s",
                search.tau_cap
            )));
        }
        let xi = xi_at(tau)?;
        if xi <= xi_target {
            let (mut lo, mut hi, mut xi_hi) = ((k - 1) as f64 * search.grid_step, tau, xi);
            while hi - lo > search.refine_tol {
                let mid = 0.5 * (lo + hi);
                let x = xi_at(mid)?;
                if x <= xi_target {
                    hi = mid;
                    xi_hi = x;
                } else {
                    lo = mid;
                }
            }
            return Ok(TauLookup {
                tau_grid: tau,
                tau: hi,
                xi: xi_hi,
            });
        }
        k += 1;
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::params::EngineParams;
    use std::f64::consts::FRAC_1_SQRT_2;

    fn nmr(tau: f64) -> DriveSchedule {
        let p = EngineParams::nmr(0.0);
        DriveSchedule::new(p.omega_c, p.omega_h, tau).unwrap()
    }

    #[test]
    fn hamiltonian_boundaries() {
        let s = nmr(1e-3);
        let hc = pauli(Axis::X).scale_re(0.5 * HBAR_PEV_S * s.omega_c);
        let hh = pauli(Axis::Y).scale_re(0.5 * HBAR_PEV_S * s.omega_h);
        assert!(s.hamiltonian_at(0.0).unwrap().max_abs_diff(&hc) < 1e-15);
        assert!(s.hamiltonian_at(s.tau).unwrap().max_abs_diff(&hh) < 1e-14);
    }

    #[test]
    fn hamiltonian_midpoint() {
        let s = nmr(1e-3);
        let mid = s.hamiltonian_at(0.5 * s.tau).unwrap();
        let expect = (pauli(Axis::X) + pauli(Axis::Y))
            .scale_re(FRAC_1_SQRT_2 * 0.5 * HBAR_PEV_S * 0.5 * (s.omega_c + s.omega_h));
        assert!(mid.max_abs_diff(&expect) < 1e-14);
        assert!(mid.is_hermitian(1e-15));
        assert!(mid.trace().norm() < 1e-15);
    }

    #[test]
    fn hamiltonian_outside_window() {
        let s = nmr(1e-3);
        assert!(matches!(
            s.hamiltonian_at(-1e-9),
            Err(OttoError::Range { .. })
        ));
        assert!(matches!(
            s.hamiltonian_at(2e-3),
            Err(OttoError::Range { .. })
        ));
    }

    #[test]
    fn sudden_limit_is_identity() {
        for n in [1, 16, 1024] {
            let p = nmr(1e-12).propagate(n).unwrap();
            assert!(p.u.max_abs_diff(&Mat2::identity()) < 1e-6);
        }
    }

    #[test]
    fn midpoint_rule_is_second_order() {
        let s = nmr(2e-4);
        let errs: Vec<f64> = [64usize, 128, 256, 512]
            .windows(2)
            .map(|w| {
                let a = s.propagate(w[0]).unwrap().u;
                let b = s.propagate(w[1]).unwrap().u;
                a.max_abs_diff(&b)
            })
            .collect();
        for pair in errs.windows(2) {
            let ratio = pair[0] / pair[1];
            assert!((3.5..4.5).contains(&ratio), "ratio {ratio}, errs {errs:?}");
        }
    }

    #[test]
    fn long_products_stay_unitary() {
        let p = nmr(1e-3).propagate(1 << 20).unwrap();
        assert!(p.u.unitarity_defect() < 1e-12, "{}", p.u.unitarity_defect());
    }

    #[test]
    fn composition_over_halves() {
        let s = nmr(5e-4);
        let n = 4096;
        let full = s.propagate(2 * n).unwrap().u;
        let first = s.propagate_segment(0.0, 0.5 * s.tau, n).unwrap().u;
        let second = s.propagate_segment(0.5 * s.tau, s.tau, n).unwrap().u;
        assert!(full.max_abs_diff(&second.matmul(&first)) < 1e-9);
    }

    #[test]
    fn xi_at_zero_duration() {
        let r = nmr(0.0).adiabaticity_xi().unwrap();
        assert!((r.xi - 0.5).abs() < 1e-15);
        assert!(r.propagator.converged);
    }

    #[test]
    fn xi_is_phase_convention_free() {
        let p = nmr(3e-4).adiabaticity_xi().unwrap().propagator;
        let phase = crate::qmath::C64::from_polar(1.0, 0.937);
        let plus_y = Ket2::plus_y().scale(phase);
        let minus_x = Ket2::minus_x().scale(phase.conj());
        let xi = p.u.sandwich(&plus_y, &minus_x).norm_sqr();
        assert!((xi - p.xi()).abs() < 1e-14);
    }

    #[test]
    fn two_sided_definition_holds() {
        for tau in [5e-5, 2e-4, 6e-4] {
            let r = nmr(tau).adiabaticity_xi().unwrap();
            let adj = r.propagator.u.adjoint();
            let dagger_side = adj.sandwich(&Ket2::plus_x(), &Ket2::minus_y()).norm_sqr();
            assert!((r.xi - r.xi_reverse).abs() < 1e-10);
            assert!((r.xi - dagger_side).abs() < 1e-10);
            assert!((0.0..=1.0).contains(&r.xi));
        }
    }

    #[test]
    fn non_convergence_is_reported() {
        let opts = XiOptions {
            start_steps: 4,
            max_steps: 16,
            tol: 1e-14,
        };
        let err = nmr(1e-3).adiabaticity_xi_with(&opts).unwrap_err();
        assert!(matches!(err, OttoError::NonConvergence { steps: 16, .. }));
    }

    #[test]
    fn inverse_lookup_rejects_targets_outside_decay_branch() {
        let s = nmr(0.0);
        for bad in [0.6, 0.5, 0.0, -0.1] {
            let err = xi_to_tau(s.omega_c, s.omega_h, bad, &TauSearch::default()).unwrap_err();
            assert!(matches!(err, OttoError::Validation { .. }));
        }
    }

    #[test]
    fn inverse_lookup_near_half_is_short() {
        let s = nmr(0.0);
        let search = TauSearch {
            grid_step: 1e-6,
            ..TauSearch::default()
        };
        let hit = xi_to_tau(s.omega_c, s.omega_h, 0.49, &search).unwrap();
        assert!(hit.tau < 2e-5, "{hit:?}");
        assert!(hit.xi <= 0.49);
    }

    #[test]
    fn inverse_lookup_cap() {
        let s = nmr(0.0);
        let search = TauSearch {
            tau_cap: 2e-4,
            ..TauSearch::default()
        };
        let err = xi_to_tau(s.omega_c, s.omega_h, 1e-4, &search).unwrap_err();
        assert!(matches!(err, OttoError::NotFound(_)));
    }
}
