//! Boundary states of the cycle and their energies.

use crate::error::{OttoError, Result};
use crate::params::{zeta, HBAR_PEV_S};
use crate::qmath::{pauli, Axis, Ket2, Mat2, C64, STRUCT_TOL};

/// Density matrix of a single qubit.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct QubitState {
    rho: Mat2,
}

impl QubitState {
    /// Wrap `rho` after checking unit trace, hermiticity and positivity.
    pub fn from_matrix(rho: Mat2) -> Result<Self> {
        let s = QubitState { rho };
        s.check()?;
        Ok(s)
    }

    pub fn maximally_mixed() -> Self {
        QubitState {
            rho: Mat2::identity().scale_re(0.5),
        }
    }

    pub fn pure(k: &Ket2) -> Result<Self> {
        QubitState::from_matrix(Mat2::outer(k, k))
    }

    /// Diagonal state `p_plus |+⟩⟨+| + (1 − p_plus) |−⟩⟨−|` in the σ_axis basis.
    pub fn diagonal_in(axis: Axis, p_plus: f64) -> Result<Self> {
        let plus = Ket2::eigen(axis, true);
        let minus = Ket2::eigen(axis, false);
        let rho = Mat2::outer(&plus, &plus).scale_re(p_plus)
            + Mat2::outer(&minus, &minus).scale_re(1.0 - p_plus);
        QubitState::from_matrix(rho)
    }

    pub fn rho(&self) -> &Mat2 {
        &self.rho
    }

    /// U ρ U†
    pub fn evolve(&self, u: &Mat2) -> Result<Self> {
        QubitState::from_matrix(u.matmul(&self.rho).matmul(&u.adjoint()))
    }

    /// ⟨k|ρ|k⟩
    pub fn population(&self, k: &Ket2) -> f64 {
        self.rho.sandwich(k, k).re
    }

    /// Eigenvalues of ρ in ascending order.
    pub fn eigenvalues(&self) -> [f64; 2] {
        let m = &self.rho.0;
        let (a, d) = (m[0][0].re, m[1][1].re);
        let half_tr = 0.5 * (a + d);
        let disc = (0.25 * (a - d) * (a - d) + m[0][1].norm_sqr()).sqrt();
        [half_tr - disc, half_tr + disc]
    }

    pub fn check(&self) -> Result<()> {
        if !self.rho.is_finite() {
            return Err(OttoError::Internal(
                "density matrix has non-finite entries".into(),
            ));
        }
        let tr = self.rho.trace();
        if (tr - C64::new(1.0, 0.0)).norm() > STRUCT_TOL {
            return Err(OttoError::Internal(format!(
                "trace(rho) = {tr}, expected 1"
            )));
        }
        if !self.rho.is_hermitian(STRUCT_TOL) {
            return Err(OttoError::Internal("rho is not Hermitian".into()));
        }
        let [lo, _] = self.eigenvalues();
        if lo < -STRUCT_TOL {
            return Err(OttoError::Internal(format!(
                "rho has negative eigenvalue {lo}"
            )));
        }
        Ok(())
    }
}

/// H = ½ħω·σ_axis, in peV.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Hamiltonian2 {
    h: Mat2,
    axis: Axis,
    omega: f64,
}

impl Hamiltonian2 {
    pub fn new(axis: Axis, omega: f64) -> Self {
        Hamiltonian2 {
            h: pauli(axis).scale_re(0.5 * HBAR_PEV_S * omega),
            axis,
            omega,
        }
    }

    pub fn matrix(&self) -> &Mat2 {
        &self.h
    }

    pub fn axis(&self) -> Axis {
        self.axis
    }

    pub fn omega(&self) -> f64 {
        self.omega
    }

    /// Half the level splitting, ½ħω.
    pub fn half_gap(&self) -> f64 {
        0.5 * HBAR_PEV_S * self.omega
    }

    /// Eigenket with energy −½ħω.
    pub fn ground(&self) -> Ket2 {
        Ket2::eigen(self.axis, false)
    }

    /// Eigenket with energy +½ħω.
    pub fn excited(&self) -> Ket2 {
        Ket2::eigen(self.axis, true)
    }

    /// θ = ½βħω
    pub fn theta(&self, beta: f64) -> f64 {
        beta * self.half_gap()
    }
}

/// State diagonal in the eigenbasis of `h` with polarization
/// p(ground) − p(excited) = `polarization`.
fn polarized(h: &Hamiltonian2, polarization: f64) -> Result<QubitState> {
    QubitState::diagonal_in(h.axis(), 0.5 * (1.0 - polarization))
}

/// Thermal state e^(−βH)/Tr e^(−βH).
///
/// In the eigenbasis the populations are (1 ± tanh θ)/2, the ground state
/// carrying the larger one.
pub fn gibbs(h: &Hamiltonian2, beta: f64) -> Result<QubitState> {
    if !(beta.is_finite() && beta > 0.0) {
        return Err(OttoError::validation(
            "beta",
            format!("must be > 0, got {beta}"),
        ));
    }
    polarized(h, h.theta(beta).tanh())
}

/// Asymptotic state reached in contact with the squeezed hot bath.
///
/// Diagonal in the eigenbasis of `h_hot` with polarization ζ·tanh θ_h,
/// i.e. populations (1 ± ζ tanh θ_h)/2. Reduces to [`gibbs`] at r = 0.
pub fn squeezed_asymptotic(h_hot: &Hamiltonian2, beta_h: f64, r: f64) -> Result<QubitState> {
    if !(beta_h.is_finite() && beta_h > 0.0) {
        return Err(OttoError::validation(
            "beta_h",
            format!("must be > 0, got {beta_h}"),
        ));
    }
    if !(r.is_finite() && r >= 0.0) {
        return Err(OttoError::validation("r", format!("must be >= 0, got {r}")));
    }
    polarized(h_hot, zeta(r) * h_hot.theta(beta_h).tanh())
}

/// ⟨E⟩ = Tr(ρH) in peV.
pub fn energy(s: &QubitState, h: &Hamiltonian2) -> Result<f64> {
    let e = s.rho().matmul(h.matrix()).trace();
    if e.im.abs() > 1e-9 * h.half_gap().max(1.0) {
        return Err(OttoError::Internal(format!(
            "energy has imaginary part {}",
            e.im
        )));
    }
    Ok(e.re)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::params::EngineParams;
    use proptest::prelude::*;

    fn nmr_hamiltonians() -> (EngineParams, Hamiltonian2, Hamiltonian2) {
        let p = EngineParams::nmr(1.0);
        (
            p,
            Hamiltonian2::new(Axis::X, p.omega_c),
            Hamiltonian2::new(Axis::Y, p.omega_h),
        )
    }

    #[test]
    fn zero_temperature_limit() {
        let (_, hc, _) = nmr_hamiltonians();
        let s = gibbs(&hc, 1e6).unwrap();
        assert!((s.population(&hc.ground()) - 1.0).abs() < 1e-9);
    }

    #[test]
    fn nmr_cold_gibbs_population() {
        let (p, hc, _) = nmr_hamiltonians();
        let s = gibbs(&hc, p.beta_c).unwrap();
        assert!((s.population(&Ket2::minus_x()) - 0.73768).abs() < 1e-4);
        assert!((s.population(&Ket2::minus_x()) - 0.737_674_568_276_432_2).abs() < 1e-12);
    }

    #[test]
    fn gibbs_energy_closed_form() {
        let (p, hc, _) = nmr_hamiltonians();
        let s = gibbs(&hc, p.beta_c).unwrap();
        let d = p.derive().unwrap();
        let expect = -hc.half_gap() * d.tanh_c();
        assert!((energy(&s, &hc).unwrap() - expect).abs() < 1e-13);
    }

    #[test]
    fn gibbs_matches_matrix_exponential() {
        // e^{-βH} for H = g σ_y is cosh(βg) I − sinh(βg) σ_y.
        let (p, _, hh) = nmr_hamiltonians();
        let bg = p.beta_h * hh.half_gap();
        let unnorm = Mat2::identity().scale_re(bg.cosh()) - pauli(Axis::Y).scale_re(bg.sinh());
        let rho = unnorm.scale_re(1.0 / unnorm.trace().re);
        let s = gibbs(&hh, p.beta_h).unwrap();
        assert!(s.rho().max_abs_diff(&rho) < 1e-14);
    }

    #[test]
    fn squeezed_reduces_to_gibbs_at_zero() {
        let (p, _, hh) = nmr_hamiltonians();
        let a = squeezed_asymptotic(&hh, p.beta_h, 0.0).unwrap();
        let b = gibbs(&hh, p.beta_h).unwrap();
        assert!(a.rho().max_abs_diff(b.rho()) < 1e-12);
    }

    #[test]
    fn heavy_squeezing_is_maximally_mixed() {
        let (p, _, hh) = nmr_hamiltonians();
        let s = squeezed_asymptotic(&hh, p.beta_h, 10.0).unwrap();
        assert!((s.population(&hh.ground()) - 0.5).abs() < 1e-8);
        assert!((s.population(&hh.excited()) - 0.5).abs() < 1e-8);
    }

    #[test]
    fn squeezed_energy_nmr_r1() {
        let (p, _, hh) = nmr_hamiltonians();
        let s = squeezed_asymptotic(&hh, p.beta_h, 1.0).unwrap();
        // −½ħω_h · sech²(2) · tanh θ_h, evaluated at 30 digits
        let expect = -3.647_104_654_058_187_7;
        assert!((energy(&s, &hh).unwrap() - expect).abs() < 1e-12);
        let rough = -hh.half_gap() * 0.070651 * 0.998562;
        assert!((energy(&s, &hh).unwrap() - rough).abs() < 1e-4);
    }

    #[test]
    fn energy_of_simple_states() {
        let (_, hc, hh) = nmr_hamiltonians();
        let mixed = QubitState::maximally_mixed();
        assert!(energy(&mixed, &hc).unwrap().abs() < 1e-15);
        assert!(energy(&mixed, &hh).unwrap().abs() < 1e-15);
        let up = QubitState::pure(&Ket2::plus_y()).unwrap();
        assert!((energy(&up, &hh).unwrap() - hh.half_gap()).abs() < 1e-12);
    }

    #[test]
    fn rejects_unphysical_matrices() {
        let not_unit_trace = Mat2::identity();
        assert!(QubitState::from_matrix(not_unit_trace).is_err());
        let negative = Mat2::new(
            C64::new(1.5, 0.0),
            C64::new(0.0, 0.0),
            C64::new(0.0, 0.0),
            C64::new(-0.5, 0.0),
        );
        assert!(QubitState::from_matrix(negative).is_err());
        let non_hermitian = Mat2::new(
            C64::new(0.5, 0.0),
            C64::new(0.1, 0.0),
            C64::new(0.2, 0.0),
            C64::new(0.5, 0.0),
        );
        assert!(QubitState::from_matrix(non_hermitian).is_err());
    }

    proptest! {
        #![proptest_config(ProptestConfig::with_cases(1000))]

        #[test]
        fn constructors_emit_physical_states(
            omega in 1e2f64..1e7, beta in 1e-3f64..1e3, r in 0.0f64..6.0
        ) {
            let hc = Hamiltonian2::new(Axis::X, omega);
            let hh = Hamiltonian2::new(Axis::Y, omega * 3.0);
            let g = gibbs(&hc, beta).unwrap();
            let s = squeezed_asymptotic(&hh, beta, r).unwrap();
            prop_assert!(g.check().is_ok());
            prop_assert!(s.check().is_ok());
            let pol = s.population(&hh.excited()) - s.population(&hh.ground());
            let expect = -zeta(r) * hh.theta(beta).tanh();
            prop_assert!((pol - expect).abs() < 1e-12);
        }
    }
}
