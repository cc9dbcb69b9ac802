//! Shared fixtures for the criterion benchmarks.

use otto_core::drive::DriveSchedule;
use otto_core::params::EngineParams;

/// The NMR drive with a 1 ms stroke.
pub fn nmr_schedule() -> DriveSchedule {
    let p = EngineParams::nmr(1.0);
    DriveSchedule::new(p.omega_c, p.omega_h, 1e-3).expect("valid schedule")
}
