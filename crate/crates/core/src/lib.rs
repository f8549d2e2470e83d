//! Shortcut-to-adiabaticity control for coupled quadratic oscillators.
//!
//! Two coupled modes are decoupled by a symplectic map, each normal mode is
//! given its single-mode counterdiabatic term, and the result is mapped back
//! to lab operators. For the photonic dimer the Heisenberg evolution of the
//! decoupled modes is integrated directly and scored by residual energy.

// `!(x > 0.0)` is used on purpose so that NaN is rejected too.
#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod cd_control;
pub mod complex;
pub mod dynamics;
pub mod error;
pub mod normal_modes;
pub mod observables;
pub mod schedules;

pub use cd_control::{
    adiabaticity_parameter, mean_sta_energy, mf_cd_coefficients, pp_cd_coefficients,
    single_mode_cd, CdCoefficients, MfDriving, PpDriving, ThermalMode,
};
pub use complex::Complex;
pub use dynamics::{
    adiabatic_state, check_constraint, ex05_rhs, integrate, BogoliubovState, ControlMode,
    InitialState, Integrator, Trajectory,
};
pub use error::{Error, Result};
pub use normal_modes::{
    diagonalize_squeezed, mf_transform, pp_transform, DimerModes, DimerParams, MfParams,
    ModeFrequency, ModeIndex, PpParams, QuadraticForm, SymplecticMap,
};
pub use observables::{coefficient_traces, mode_cd_energy, residual_energy, EnergyBreakdown};
pub use schedules::{Schedule, ScheduleKind};
