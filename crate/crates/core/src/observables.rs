//! Energies of the evolved dimer and the lab-frame driving traces.

use crate::dynamics::{BogoliubovState, ControlMode};
use crate::error::Result;
use crate::normal_modes::{diagonalize_squeezed, DimerParams, ModeIndex};

/// Negative residual energies down to this size are treated as rounding.
pub const NEGATIVE_SLACK: f64 = 1e-9;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct EnergyBreakdown {
    pub e1: f64,
    pub e2: f64,
    pub eg1: f64,
    pub eg2: f64,
    pub e_r: f64,
}

impl EnergyBreakdown {
    /// `e_r` with rounding-level negatives mapped to zero, for display.
    pub fn reported_e_r(&self) -> f64 {
        clamp_rounding(self.e_r)
    }
}

pub fn clamp_rounding(e_r: f64) -> f64 {
    if (-NEGATIVE_SLACK..0.0).contains(&e_r) {
        0.0
    } else {
        e_r
    }
}

/// Expectation of `H_i` (plus its counterdiabatic term when `control`
/// drives this mode) in the evolved vacuum.
pub fn mode_cd_energy(
    s: &BogoliubovState,
    p: &DimerParams,
    t: f64,
    mode: ModeIndex,
    control: ControlMode,
) -> Result<f64> {
    let w0 = p.omega0();
    let modes = p.modes(t)?;
    let (g_sq, _) = modes.g_sq(mode);
    let (u, v) = s.mode(mode);
    let mut e = w0 * v.norm_sqr() - 0.25 * w0 * g_sq * (u + v).norm_sqr()
        + mode.j_sign() * 0.25 * w0 * modes.j;
    if control.drives(mode) {
        let varpi = p.squeezed_frequency(t, mode)?;
        // i(ϖ̇/4ϖ)(uv* − u*v) = −(ϖ̇/2ϖ) Im(uv*)
        e -= varpi.omega_dot / (2.0 * varpi.omega) * (u * v.conj()).im;
    } else {
        // still reject states past the instability
        p.squeezed_frequency(t, mode)?;
    }
    Ok(e)
}

pub fn residual_energy(
    s: &BogoliubovState,
    p: &DimerParams,
    t: f64,
    control: ControlMode,
) -> Result<EnergyBreakdown> {
    let modes = p.modes(t)?;
    let ground = |mode: ModeIndex| -> Result<f64> {
        let (g_sq, _) = modes.g_sq(mode);
        let j_term = mode.j_sign() * 0.25 * p.omega0() * modes.j;
        Ok(diagonalize_squeezed(p.omega0(), g_sq, j_term)?.ground_energy)
    };
    let e1 = mode_cd_energy(s, p, t, ModeIndex::First, control)?;
    let e2 = mode_cd_energy(s, p, t, ModeIndex::Second, control)?;
    let eg1 = ground(ModeIndex::First)?;
    let eg2 = ground(ModeIndex::Second)?;
    Ok(EnergyBreakdown {
        e1,
        e2,
        eg1,
        eg2,
        e_r: e1 + e2 - eg1 - eg2,
    })
}

/// `(t, F, G)` of the lab-frame driving for the dimer, where
/// `F = ϖ̇1/(8ϖ1) + ϖ̇2/(8ϖ2)` and `G = ϖ̇1/(4ϖ1) − ϖ̇2/(4ϖ2)`.
pub fn coefficient_traces(p: &DimerParams, grid: &[f64]) -> Result<Vec<(f64, f64, f64)>> {
    grid.iter()
        .map(|&t| {
            let a = p.squeezed_frequency(t, ModeIndex::First)?;
            let b = p.squeezed_frequency(t, ModeIndex::Second)?;
            let ra = a.omega_dot / a.omega;
            let rb = b.omega_dot / b.omega;
            Ok((t, (ra + rb) / 8.0, (ra - rb) / 4.0))
        })
        .collect()
}
