//! Fixed-size 2×2 complex linear algebra for a single qubit.
//!
//! Everything is represented in the σ_z eigenbasis. The σ_x and σ_y
//! eigenkets use fixed phases:
//!
//! ```text
//! |+x⟩ = (1, 1)/√2    |−x⟩ = (1, −1)/√2
//! |+y⟩ = (1, i)/√2    |−y⟩ = (1, −i)/√2
//! ```
//!
//! Probabilities and energies do not depend on these phases, but pinning
//! them keeps intermediate matrices reproducible.

use std::fmt;
use std::ops::{Add, Mul, Sub};

pub use num_complex::Complex64 as C64;

use crate::error::{OttoError, Result};

/// Tolerance for the hermitian/unitary predicates.
pub const STRUCT_TOL: f64 = 1e-12;

const FRAC_1_SQRT_2: f64 = std::f64::consts::FRAC_1_SQRT_2;
const ZERO: C64 = C64::new(0.0, 0.0);
const ONE: C64 = C64::new(1.0, 0.0);
const I: C64 = C64::new(0.0, 1.0);

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Axis {
    X,
    Y,
    Z,
}

impl fmt::Display for Axis {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Axis::X => f.write_str("x"),
            Axis::Y => f.write_str("y"),
            Axis::Z => f.write_str("z"),
        }
    }
}

/// Row-major 2×2 complex matrix.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Mat2(pub [[C64; 2]; 2]);

/// Two-component state vector.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Ket2(pub [C64; 2]);

impl Mat2 {
    pub const fn new(a: C64, b: C64, c: C64, d: C64) -> Self {
        Mat2([[a, b], [c, d]])
    }

    pub const fn identity() -> Self {
        Mat2::new(ONE, ZERO, ZERO, ONE)
    }

    pub const fn zero() -> Self {
        Mat2::new(ZERO, ZERO, ZERO, ZERO)
    }

    #[inline]
    pub fn get(&self, row: usize, col: usize) -> C64 {
        self.0[row][col]
    }

    pub fn adjoint(&self) -> Mat2 {
        let m = &self.0;
        Mat2::new(
            m[0][0].conj(),
            m[1][0].conj(),
            m[0][1].conj(),
            m[1][1].conj(),
        )
    }

    pub fn trace(&self) -> C64 {
        self.0[0][0] + self.0[1][1]
    }

    pub fn scale(&self, s: C64) -> Mat2 {
        let m = &self.0;
        Mat2::new(m[0][0] * s, m[0][1] * s, m[1][0] * s, m[1][1] * s)
    }

    pub fn scale_re(&self, s: f64) -> Mat2 {
        self.scale(C64::new(s, 0.0))
    }

    #[inline]
    pub fn matmul(&self, rhs: &Mat2) -> Mat2 {
        let a = &self.0;
        let b = &rhs.0;
        Mat2::new(
            a[0][0] * b[0][0] + a[0][1] * b[1][0],
            a[0][0] * b[0][1] + a[0][1] * b[1][1],
            a[1][0] * b[0][0] + a[1][1] * b[1][0],
            a[1][0] * b[0][1] + a[1][1] * b[1][1],
        )
    }

    pub fn apply(&self, v: &Ket2) -> Ket2 {
        let m = &self.0;
        Ket2([
            m[0][0] * v.0[0] + m[0][1] * v.0[1],
            m[1][0] * v.0[0] + m[1][1] * v.0[1],
        ])
    }

    /// ⟨u|M|v⟩
    pub fn sandwich(&self, u: &Ket2, v: &Ket2) -> C64 {
        inner(u, &self.apply(v))
    }

    /// Largest entrywise modulus.
    pub fn max_abs(&self) -> f64 {
        self.0
            .iter()
            .flatten()
            .map(|z| z.norm())
            .fold(0.0, f64::max)
    }

    /// Largest entrywise modulus of `self − other`.
    pub fn max_abs_diff(&self, other: &Mat2) -> f64 {
        (*self - *other).max_abs()
    }

    pub fn is_finite(&self) -> bool {
        self.0
            .iter()
            .flatten()
            .all(|z| z.re.is_finite() && z.im.is_finite())
    }

    pub fn is_hermitian(&self, tol: f64) -> bool {
        self.max_abs_diff(&self.adjoint()) <= tol
    }

    pub fn is_unitary(&self, tol: f64) -> bool {
        self.unitarity_defect() <= tol
    }

    /// max |(U†U − I)_ij|
    pub fn unitarity_defect(&self) -> f64 {
        self.adjoint().matmul(self).max_abs_diff(&Mat2::identity())
    }

    /// |u⟩⟨v|
    pub fn outer(u: &Ket2, v: &Ket2) -> Mat2 {
        Mat2::new(
            u.0[0] * v.0[0].conj(),
            u.0[0] * v.0[1].conj(),
            u.0[1] * v.0[0].conj(),
            u.0[1] * v.0[1].conj(),
        )
    }
}

impl Add for Mat2 {
    type Output = Mat2;
    fn add(self, rhs: Mat2) -> Mat2 {
        let (a, b) = (&self.0, &rhs.0);
        Mat2::new(
            a[0][0] + b[0][0],
            a[0][1] + b[0][1],
            a[1][0] + b[1][0],
            a[1][1] + b[1][1],
        )
    }
}

impl Sub for Mat2 {
    type Output = Mat2;
    fn sub(self, rhs: Mat2) -> Mat2 {
        self + rhs.scale_re(-1.0)
    }
}

impl Mul for Mat2 {
    type Output = Mat2;
    fn mul(self, rhs: Mat2) -> Mat2 {
        self.matmul(&rhs)
    }
}

impl Ket2 {
    pub const fn new(a: C64, b: C64) -> Self {
        Ket2([a, b])
    }

    pub fn plus_x() -> Self {
        Ket2::new(C64::new(FRAC_1_SQRT_2, 0.0), C64::new(FRAC_1_SQRT_2, 0.0))
    }

    pub fn minus_x() -> Self {
        Ket2::new(C64::new(FRAC_1_SQRT_2, 0.0), C64::new(-FRAC_1_SQRT_2, 0.0))
    }

    pub fn plus_y() -> Self {
        Ket2::new(C64::new(FRAC_1_SQRT_2, 0.0), C64::new(0.0, FRAC_1_SQRT_2))
    }

    pub fn minus_y() -> Self {
        Ket2::new(C64::new(FRAC_1_SQRT_2, 0.0), C64::new(0.0, -FRAC_1_SQRT_2))
    }

    pub fn up() -> Self {
        Ket2::new(ONE, ZERO)
    }

    pub fn down() -> Self {
        Ket2::new(ZERO, ONE)
    }

    /// Eigenket of σ_axis with eigenvalue +1 (`positive`) or −1.
    pub fn eigen(axis: Axis, positive: bool) -> Self {
        match (axis, positive) {
            (Axis::X, true) => Ket2::plus_x(),
            (Axis::X, false) => Ket2::minus_x(),
            (Axis::Y, true) => Ket2::plus_y(),
            (Axis::Y, false) => Ket2::minus_y(),
            (Axis::Z, true) => Ket2::up(),
            (Axis::Z, false) => Ket2::down(),
        }
    }

    pub fn norm(&self) -> f64 {
        inner(self, self).re.sqrt()
    }

    pub fn scale(&self, s: C64) -> Ket2 {
        Ket2::new(self.0[0] * s, self.0[1] * s)
    }
}

pub fn pauli(axis: Axis) -> Mat2 {
    match axis {
        Axis::X => Mat2::new(ZERO, ONE, ONE, ZERO),
        Axis::Y => Mat2::new(ZERO, -I, I, ZERO),
        Axis::Z => Mat2::new(ONE, ZERO, ZERO, -ONE),
    }
}

pub fn matmul(a: &Mat2, b: &Mat2) -> Mat2 {
    a.matmul(b)
}

pub fn adjoint(a: &Mat2) -> Mat2 {
    a.adjoint()
}

pub fn trace(a: &Mat2) -> C64 {
    a.trace()
}

pub fn apply(a: &Mat2, v: &Ket2) -> Ket2 {
    a.apply(v)
}

/// ⟨u|v⟩, antilinear in the first argument.
pub fn inner(u: &Ket2, v: &Ket2) -> C64 {
    u.0[0].conj() * v.0[0] + u.0[1].conj() * v.0[1]
}

/// exp(−i·a·(n̂·σ)) = cos(a)·I − i·sin(a)·(n̂·σ) for a unit vector n̂.
pub fn expm_su2(a: f64, nx: f64, ny: f64, nz: f64) -> Result<Mat2> {
    let norm = (nx * nx + ny * ny + nz * nz).sqrt();
    if !a.is_finite() || !norm.is_finite() {
        return Err(OttoError::validation("expm_su2", "non-finite argument"));
    }
    if (norm - 1.0).abs() > STRUCT_TOL {
        return Err(OttoError::validation(
            "expm_su2 direction",
            format!("|n| = {norm}, expected a unit vector"),
        ));
    }
    Ok(su2_step(a, nx, ny, nz))
}

/// Unchecked kernel behind [`expm_su2`]; the caller guarantees |n̂| = 1.
#[inline]
pub(crate) fn su2_step(a: f64, nx: f64, ny: f64, nz: f64) -> Mat2 {
    let (s, c) = a.sin_cos();
    // −i·s·(nx σx + ny σy + nz σz)
    Mat2::new(
        C64::new(c, -s * nz),
        C64::new(-s * ny, -s * nx),
        C64::new(s * ny, -s * nx),
        C64::new(c, s * nz),
    )
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;
    use std::f64::consts::{FRAC_PI_2, PI};

    /// Truncated Taylor series of exp(M), used only as an oracle.
    fn expm_series(m: &Mat2, terms: usize) -> Mat2 {
        let mut sum = Mat2::identity();
        let mut term = Mat2::identity();
        for k in 1..terms {
            term = term.matmul(m).scale_re(1.0 / k as f64);
            sum = sum + term;
        }
        sum
    }

    fn random_unitary(a: f64, b: f64, c: f64, phase: f64) -> Mat2 {
        let n = [b.cos() * c.sin(), b.sin() * c.sin(), c.cos()];
        su2_step(a, n[0], n[1], n[2]).scale(C64::from_polar(1.0, phase))
    }

    #[test]
    fn pauli_involution_and_trace() {
        for axis in [Axis::X, Axis::Y, Axis::Z] {
            let p = pauli(axis);
            assert!(p.matmul(&p).max_abs_diff(&Mat2::identity()) < 1e-15);
            assert!(p.trace().norm() < 1e-15);
            assert!(p.is_hermitian(STRUCT_TOL));
            assert!(p.is_unitary(STRUCT_TOL));
        }
    }

    #[test]
    fn pauli_eigenkets_match_conventions() {
        for axis in [Axis::X, Axis::Y, Axis::Z] {
            let p = pauli(axis);
            for (positive, value) in [(true, 1.0), (false, -1.0)] {
                let k = Ket2::eigen(axis, positive);
                let pk = p.apply(&k);
                let expect = k.scale(C64::new(value, 0.0));
                assert!((pk.0[0] - expect.0[0]).norm() < 1e-15);
                assert!((pk.0[1] - expect.0[1]).norm() < 1e-15);
                assert!((k.norm() - 1.0).abs() < 1e-12);
            }
        }
    }

    #[test]
    fn expm_zero_angle_is_identity() {
        let u = expm_su2(0.0, 0.0, 0.6, 0.8).unwrap();
        assert_eq!(u, Mat2::identity());
    }

    #[test]
    fn expm_quarter_turn_matches_series() {
        let u = expm_su2(FRAC_PI_2, 1.0, 0.0, 0.0).unwrap();
        let gen = pauli(Axis::X).scale(C64::new(0.0, -FRAC_PI_2));
        let oracle = expm_series(&gen, 40);
        assert!(u.max_abs_diff(&oracle) < 1e-13);
        let minus_i_sx = pauli(Axis::X).scale(-I);
        assert!(u.max_abs_diff(&minus_i_sx) < 1e-15);
    }

    #[test]
    fn expm_matches_series_off_axis() {
        let (a, n) = (1.7, [0.48, 0.6, 0.64]);
        let u = expm_su2(a, n[0], n[1], n[2]).unwrap();
        let gen = (pauli(Axis::X).scale_re(n[0])
            + pauli(Axis::Y).scale_re(n[1])
            + pauli(Axis::Z).scale_re(n[2]))
        .scale(C64::new(0.0, -a));
        assert!(u.max_abs_diff(&expm_series(&gen, 60)) < 1e-13);
    }

    #[test]
    fn expm_result_is_unitary() {
        let u = expm_su2(0.3, 0.6, 0.8, 0.0).unwrap();
        assert!(u.unitarity_defect() < 1e-14);
    }

    #[test]
    fn expm_rejects_non_unit_direction() {
        let err = expm_su2(0.3, 1.0, 1.0, 0.0).unwrap_err();
        assert!(matches!(err, OttoError::Validation { .. }));
    }

    #[test]
    fn identity_and_adjoint_identities() {
        let a = Mat2::new(
            C64::new(1.0, 2.0),
            C64::new(-0.5, 0.1),
            C64::new(3.0, -1.0),
            C64::new(0.25, 0.75),
        );
        assert_eq!(matmul(&Mat2::identity(), &a), a);
        assert_eq!(trace(&adjoint(&a)), trace(&a).conj());
    }

    #[test]
    fn cross_basis_overlap() {
        let z = inner(&Ket2::plus_y(), &Ket2::minus_x());
        assert!((z - C64::new(0.5, 0.5)).norm() < 1e-15);
        assert!((z.norm_sqr() - 0.5).abs() < 1e-15);
    }

    proptest! {
        #[test]
        fn expm_inverse_roundtrip(a in -10.0f64..10.0, b in 0.0..(2.0 * PI), c in 0.0..PI) {
            let n = [b.cos() * c.sin(), b.sin() * c.sin(), c.cos()];
            let u = expm_su2(a, n[0], n[1], n[2]).unwrap();
            let v = expm_su2(-a, n[0], n[1], n[2]).unwrap();
            prop_assert!(u.matmul(&v).max_abs_diff(&Mat2::identity()) < 1e-12);
        }

        #[test]
        fn transition_moduli_are_symmetric(
            a in -10.0f64..10.0, b in 0.0..(2.0 * PI), c in 0.0..PI, phase in 0.0..(2.0 * PI)
        ) {
            let u = random_unitary(a, b, c, phase);
            let fwd = u.sandwich(&Ket2::plus_y(), &Ket2::minus_x()).norm_sqr();
            let rev = u.sandwich(&Ket2::minus_y(), &Ket2::plus_x()).norm_sqr();
            prop_assert!((fwd - rev).abs() < 1e-12);
        }

        #[test]
        fn a_plus_adjoint_is_hermitian(v in proptest::array::uniform8(-5.0f64..5.0)) {
            let a = Mat2::new(
                C64::new(v[0], v[1]), C64::new(v[2], v[3]),
                C64::new(v[4], v[5]), C64::new(v[6], v[7]),
            );
            prop_assert!((a + a.adjoint()).is_hermitian(STRUCT_TOL));
        }
    }
}
