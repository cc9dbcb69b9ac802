//! Two-level quantum Otto engine driven between a cold thermal bath and a
//! squeezed hot thermal bath.
//!
//! The crate has two independent routes to the cycle thermodynamics:
//!
//! * [`thermo`] and [`optimize`] evaluate closed forms for heats, work,
//!   efficiency and the maximum-work operating point as functions of the
//!   adiabaticity parameter ξ.
//! * [`oracle`] runs the four strokes on an explicit 2×2 density matrix and
//!   books heat and work from Tr(ρH), with the expansion unitary either
//!   synthesized for a prescribed ξ or integrated from the drive in
//!   [`drive`].
//!
//! [`sweep`] and [`verify`] build figure tables and seeded cross-checks on
//! top of both.

#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod drive;
pub mod error;
pub mod optimize;
pub mod oracle;
pub mod params;
pub mod qmath;
pub mod states;
pub mod sweep;
pub mod table;
pub mod thermo;
pub mod verify;

pub use drive::{xi_to_tau, DriveSchedule, Propagator, TauLookup, TauSearch, XiOptions, XiReport};
pub use error::{OttoError, Result};
pub use optimize::{numeric_max_work, OptMode, OptResult};
pub use oracle::{run_cycle, synthetic_unitary, CycleLedger};
pub use params::{DerivedParams, EngineParams, HBAR_PEV_S};
pub use qmath::{Axis, Ket2, Mat2, C64};
pub use states::{Hamiltonian2, QubitState};
pub use sweep::{EfficiencyMode, Grid, RegionCell, RegionClass, WorkRateOptions};
pub use table::{Format, Table, Value};
pub use thermo::CycleThermo;
pub use verify::{verify, VerifyReport};
