//! Stroke-by-stroke density-matrix simulation of the Otto cycle.
//!
//! Thermal strokes replace the state with the bath's asymptotic state at
//! fixed Hamiltonian (heat only). Unitary strokes evolve the state with U
//! or U† while the Hamiltonian is switched (work only). Energies are
//! Tr(ρH) throughout; nothing here reuses the closed forms in `thermo`.

use serde::Serialize;

use crate::drive::Propagator;
use crate::error::{OttoError, Result};
use crate::params::EngineParams;
use crate::qmath::{Axis, Ket2, Mat2, C64};
use crate::states::{energy, gibbs, squeezed_asymptotic, Hamiltonian2, QubitState};

/// Energies and exchanges of one cycle, in peV.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct CycleLedger {
    #[serde(skip)]
    pub rho1: QubitState,
    #[serde(skip)]
    pub rho2: QubitState,
    #[serde(skip)]
    pub rho3: QubitState,
    #[serde(skip)]
    pub rho4: QubitState,
    /// Tr(ρ1 H_c) after the cold bath.
    pub e1c: f64,
    /// Tr(ρ2 H_h) after the expansion.
    pub e2h: f64,
    /// Tr(ρ3 H_h) after the hot bath.
    pub e3h: f64,
    /// Tr(ρ4 H_c) after the compression.
    pub e4c: f64,
    pub q_cold: f64,
    pub q_hot: f64,
    pub w_expansion: f64,
    pub w_compression: f64,
    pub w_net: f64,
    pub xi_effective: f64,
}

impl CycleLedger {
    /// Sum of all exchanges; zero for a closed cycle.
    pub fn closure(&self) -> f64 {
        self.q_hot + self.q_cold + self.w_expansion + self.w_compression
    }

    /// Largest absolute energy in the ledger, used as a relative scale.
    pub fn scale(&self) -> f64 {
        [
            self.e1c,
            self.e2h,
            self.e3h,
            self.e4c,
            self.q_cold,
            self.q_hot,
            self.w_expansion,
            self.w_compression,
            self.w_net,
        ]
        .iter()
        .fold(0.0, |m, v| m.max(v.abs()))
    }

    pub fn extracting(&self) -> bool {
        self.w_net < 0.0 && self.q_hot > 0.0
    }

    /// −W/Q_h while the cycle runs as an engine.
    pub fn efficiency(&self) -> Option<f64> {
        self.extracting().then(|| -self.w_net / self.q_hot)
    }
}

pub fn run_cycle(p: &EngineParams, u: &Propagator) -> Result<CycleLedger> {
    p.validate()?;
    let defect = u.u.unitarity_defect();
    if defect > 1e-10 {
        return Err(OttoError::validation(
            "propagator",
            format!("unitarity defect {defect:.3e} exceeds 1e-10"),
        ));
    }
    let h_cold = Hamiltonian2::new(Axis::X, p.omega_c);
    let h_hot = Hamiltonian2::new(Axis::Y, p.omega_h);

    // (i) cold bath
    let rho1 = gibbs(&h_cold, p.beta_c)?;
    // (ii) expansion
    let rho2 = rho1.evolve(&u.u)?;
    // (iii) squeezed hot bath
    let rho3 = squeezed_asymptotic(&h_hot, p.beta_h, p.r)?;
    // (iv) compression
    let rho4 = rho3.evolve(&u.u.adjoint())?;

    let e1c = energy(&rho1, &h_cold)?;
    let e2h = energy(&rho2, &h_hot)?;
    let e3h = energy(&rho3, &h_hot)?;
    let e4c = energy(&rho4, &h_cold)?;

    let q_hot = e3h - e2h;
    let q_cold = e1c - e4c;
    let w_expansion = e2h - e1c;
    let w_compression = e4c - e3h;
    let ledger = CycleLedger {
        rho1,
        rho2,
        rho3,
        rho4,
        e1c,
        e2h,
        e3h,
        e4c,
        q_cold,
        q_hot,
        w_expansion,
        w_compression,
        w_net: w_expansion + w_compression,
        xi_effective: u.xi(),
    };
    if ledger.closure().abs() > 1e-12 * ledger.scale().max(1.0) {
        return Err(OttoError::Internal(format!(
            "cycle does not close: residual {}",
            ledger.closure()
        )));
    }
    Ok(ledger)
}

/// A unitary with |⟨+y|U|−x⟩|² = `xi`.
///
/// Built as W·V₀, where V₀ maps |±x⟩ onto |±y⟩ and W mixes the σ_y
/// eigenkets with amplitude √ξ and relative phase `phase`. Different phases
/// give different coherences in ρ2 and ρ4 but the same ξ.
pub fn synthetic_unitary(xi: f64, phase: f64) -> Result<Propagator> {
    if !(0.0..=1.0).contains(&xi) {
        return Err(OttoError::validation(
            "xi",
            format!("must lie in [0, 1], got {xi}"),
        ));
    }
    let (minus_y, plus_y) = (Ket2::minus_y(), Ket2::plus_y());
    let v0 = Mat2::outer(&minus_y, &Ket2::minus_x()) + Mat2::outer(&plus_y, &Ket2::plus_x());
    let stay = C64::new((1.0 - xi).sqrt(), 0.0);
    let flip = C64::from_polar(xi.sqrt(), phase);
    let w = Mat2::outer(&minus_y, &minus_y).scale(stay)
        + Mat2::outer(&plus_y, &minus_y).scale(flip)
        - Mat2::outer(&minus_y, &plus_y).scale(flip.conj())
        + Mat2::outer(&plus_y, &plus_y).scale(stay);
    Ok(Propagator {
        u: w.matmul(&v0),
        steps_used: 0,
        converged: true,
    })
}
