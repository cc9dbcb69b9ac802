//! Seeded cross-check of the closed forms against the density-matrix cycle.

use std::f64::consts::TAU;
use std::fmt;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::Serialize;

use crate::error::{OttoError, Result};
use crate::optimize::{opt_eff_ho_quasistatic, opt_eff_tls, opt_eff_tls_quasistatic};
use crate::oracle::{run_cycle, synthetic_unitary};
use crate::params::EngineParams;
use crate::thermo;

/// Adiabaticity values exercised for every draw.
pub const XI_PROBES: [f64; 4] = [0.0, 0.1, 0.25, 0.4];

/// Largest relative deviation accepted by [`VerifyReport::passed`].
pub const TOLERANCE: f64 = 1e-9;

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct VerifyReport {
    pub draws: usize,
    pub seed: u64,
    pub q_hot: f64,
    pub q_cold: f64,
    pub w_net: f64,
    pub eta: f64,
    /// Cycles that were engines and so contributed to `eta`.
    pub eta_cases: usize,
    pub closure: f64,
    pub phase: f64,
    /// Largest gap between the finite-time optimized efficiency at ξ = 0
    /// and its quasi-static form.
    pub reduction: f64,
    /// Draws where the two-level optimized efficiency fell below the
    /// harmonic-oscillator one.
    pub dominance_violations: usize,
}

impl VerifyReport {
    pub fn max_deviation(&self) -> f64 {
        [
            self.q_hot,
            self.q_cold,
            self.w_net,
            self.eta,
            self.closure,
            self.phase,
            self.reduction,
        ]
        .into_iter()
        .fold(0.0, f64::max)
    }

    pub fn passed(&self) -> bool {
        self.max_deviation() <= TOLERANCE && self.dominance_violations == 0
    }
}

impl fmt::Display for VerifyReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "verify draws={} seed={} q_hot={:.3e} q_cold={:.3e} w_net={:.3e} eta={:.3e} \
             eta_cases={} closure={:.3e} phase={:.3e} reduction={:.3e} dominance_violations={} \
             status={}",
            self.draws,
            self.seed,
            self.q_hot,
            self.q_cold,
            self.w_net,
            self.eta,
            self.eta_cases,
            self.closure,
            self.phase,
            self.reduction,
            self.dominance_violations,
            if self.passed() { "PASS" } else { "FAIL" }
        )
    }
}

#[derive(Debug, Clone, Copy)]
struct Draw {
    params: EngineParams,
    phase: f64,
    beta_ratio_cold_hot: f64,
}

fn sample(rng: &mut ChaCha8Rng) -> Result<Draw> {
    let freq_c_khz = rng.gen_range(0.1..50.0);
    let ratio = rng.gen_range(1.05..20.0);
    let energy_scale = rng.gen_range(1.0..100.0);
    let beta_ratio = rng.gen_range(0.05..1.5);
    let r = rng.gen_range(0.0..3.0);
    Ok(Draw {
        params: EngineParams::from_lab_units(freq_c_khz, ratio, energy_scale, beta_ratio, r)?,
        phase: rng.gen_range(0.0..TAU),
        beta_ratio_cold_hot: rng.gen_range(0.001..0.999),
    })
}

#[derive(Debug, Clone, Copy, Default)]
struct Deviations {
    q_hot: f64,
    q_cold: f64,
    w_net: f64,
    eta: f64,
    eta_cases: usize,
    closure: f64,
    phase: f64,
    reduction: f64,
    dominance_violations: usize,
}

/// NaN counts as an infinitely bad deviation.
fn worst(a: f64, b: f64) -> f64 {
    let clean = |v: f64| if v.is_nan() { f64::INFINITY } else { v };
    clean(a).max(clean(b))
}

impl Deviations {
    fn merge(self, o: Deviations) -> Deviations {
        Deviations {
            q_hot: worst(self.q_hot, o.q_hot),
            q_cold: worst(self.q_cold, o.q_cold),
            w_net: worst(self.w_net, o.w_net),
            eta: worst(self.eta, o.eta),
            eta_cases: self.eta_cases + o.eta_cases,
            closure: worst(self.closure, o.closure),
            phase: worst(self.phase, o.phase),
            reduction: worst(self.reduction, o.reduction),
            dominance_violations: self.dominance_violations + o.dominance_violations,
        }
    }
}

fn check_draw(d: &Draw) -> Result<Deviations> {
    let p = &d.params;
    let mut dev = Deviations::default();
    for xi in XI_PROBES {
        let ledger = run_cycle(p, &synthetic_unitary(xi, d.phase)?)?;
        let reference = run_cycle(p, &synthetic_unitary(xi, 0.0)?)?;
        let scale = ledger.scale();
        let closed = thermo::evaluate(p, xi)?;
        let rel = |a: f64, b: f64| (a - b).abs() / scale;
        dev.q_hot = worst(dev.q_hot, rel(ledger.q_hot, closed.q_hot));
        dev.q_cold = worst(dev.q_cold, rel(ledger.q_cold, closed.q_cold));
        dev.w_net = worst(dev.w_net, rel(ledger.w_net, closed.w_net));
        dev.closure = worst(dev.closure, ledger.closure().abs() / scale);
        let phase_gap = [
            rel(ledger.q_hot, reference.q_hot),
            rel(ledger.q_cold, reference.q_cold),
            rel(ledger.w_net, reference.w_net),
        ]
        .into_iter()
        .fold(0.0, worst);
        dev.phase = worst(dev.phase, phase_gap);
        if let Some(eta) = closed.eta {
            let from_ledger = -ledger.w_net / ledger.q_hot;
            dev.eta = worst(dev.eta, (from_ledger - eta).abs() / eta.abs().max(1.0));
            dev.eta_cases += 1;
        }
    }

    let (b, r) = (d.beta_ratio_cold_hot, p.r);
    let tls = opt_eff_tls_quasistatic(b, r)?;
    if tls < opt_eff_ho_quasistatic(b, r)? {
        dev.dominance_violations += 1;
    }
    match opt_eff_tls(b, r, 0.0) {
        Ok(v) => dev.reduction = (v - tls).abs(),
        Err(OttoError::OutOfDomain { .. }) => {}
        Err(e) => return Err(e),
    }
    Ok(dev)
}

/// Run `draws` seeded comparisons. Identical `(draws, seed)` always give
/// an identical report.
pub fn verify(draws: usize, seed: u64) -> Result<VerifyReport> {
    if draws == 0 {
        return Err(OttoError::validation("draws", "must be >= 1"));
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let samples: Vec<Draw> = (0..draws)
        .map(|_| sample(&mut rng))
        .collect::<Result<_>>()?;
    let per_draw: Vec<Deviations> = samples.par_iter().map(check_draw).collect::<Result<_>>()?;
    let total = per_draw
        .into_iter()
        .fold(Deviations::default(), Deviations::merge);
    Ok(VerifyReport {
        draws,
        seed,
        q_hot: total.q_hot,
        q_cold: total.q_cold,
        w_net: total.w_net,
        eta: total.eta,
        eta_cases: total.eta_cases,
        closure: total.closure,
        phase: total.phase,
        reduction: total.reduction,
        dominance_violations: total.dominance_violations,
    })
}
