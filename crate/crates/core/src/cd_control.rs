//! Closed-form counterdiabatic driving coefficients.
//!
//! Driving Hamiltonians are stored as coefficients of fixed operator
//! monomials:
//!
//! * single mode: `c · (qp + pq)`
//! * position-position: `−F (q1p1 + p1q1 + q2p2 + p2q2) − G (q1p2 + q2p1)`
//! * magnetic field: `−M (q1p1 + p1q1 − q2p2 − p2q2) − N ((α/β) p1p2 − (β/α) q1q2)`

use crate::error::{Error, Result};
use crate::normal_modes::{MfParams, ModeFrequency, PpParams, QuadraticForm};

/// Coefficient `c = −ω̇/(4ω)` of `(qp + pq)` for a single oscillator.
pub fn single_mode_cd(omega: f64, omega_dot: f64) -> Result<f64> {
    if !(omega > 0.0) {
        return Err(Error::InvalidArgument(format!(
            "single-mode driving needs omega > 0, got {omega}"
        )));
    }
    Ok(-omega_dot / (4.0 * omega))
}

/// Local (`F`) and global (`G`) coefficients for position-position coupling.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PpDriving {
    pub f: f64,
    pub g: f64,
}

impl PpDriving {
    /// `F = ω̇1/(8ω1) + ω̇2/(8ω2)`, `G = ω̇1/(4ω1) − ω̇2/(4ω2)`.
    pub fn from_modes(modes: &[ModeFrequency; 2]) -> Self {
        let [a, b] = modes;
        let ra = a.omega_dot / a.omega;
        let rb = b.omega_dot / b.omega;
        PpDriving {
            f: (ra + rb) / 8.0,
            g: (ra - rb) / 4.0,
        }
    }

    /// The driving term as a lab-frame quadratic form.
    pub fn lab_form(&self) -> QuadraticForm {
        let mut k = [[0.0; 4]; 4];
        k[0][1] = -2.0 * self.f;
        k[1][0] = -2.0 * self.f;
        k[2][3] = -2.0 * self.f;
        k[3][2] = -2.0 * self.f;
        k[0][3] = -self.g;
        k[3][0] = -self.g;
        k[2][1] = -self.g;
        k[1][2] = -self.g;
        QuadraticForm::from_matrix(k)
    }
}

/// Coefficients `M`, `N` for the magnetic-field coupling.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct MfDriving {
    pub m: f64,
    pub n: f64,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub enum CdCoefficients {
    PositionPosition(PpDriving),
    MagneticField(MfDriving),
}

pub fn pp_cd_coefficients(p: &PpParams, t: f64) -> Result<PpDriving> {
    Ok(PpDriving::from_modes(&p.normal_frequencies(t)?))
}

/// `M = (Ω̇Ω − ω̇_B ω_B)/(4ω0²)`, `N = 2(Ω̇ ω_B − ω̇_B Ω)/ω0²`.
pub fn mf_cd_coefficients(p: &MfParams, t: f64) -> Result<MfDriving> {
    let f = p.frequencies(t)?;
    let w0_sq = f.omega0.omega * f.omega0.omega;
    if w0_sq == 0.0 {
        return Err(Error::Singular("M and N need omega0 != 0"));
    }
    let big = f.big_omega;
    let wb = f.omega_b;
    Ok(MfDriving {
        m: (big.omega_dot * big.omega - wb.omega_dot * wb.omega) / (4.0 * w0_sq),
        n: 2.0 * (big.omega_dot * wb.omega - wb.omega_dot * big.omega) / w0_sq,
    })
}

/// `Q* = 1/sqrt(1 − ω̇²/(4ω⁴))`, equal to 1 only for `ω̇ = 0`.
pub fn adiabaticity_parameter(omega: f64, omega_dot: f64) -> Result<f64> {
    if !(omega > 0.0) {
        return Err(Error::InvalidArgument(format!(
            "adiabaticity parameter needs omega > 0, got {omega}"
        )));
    }
    let w2 = omega * omega;
    let x = omega_dot * omega_dot / (4.0 * w2 * w2);
    if !(x < 1.0) {
        return Err(Error::AdiabaticityUndefined { omega, omega_dot });
    }
    Ok(1.0 / (1.0 - x).sqrt())
}

/// One normal mode's contribution to the mean control energy.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ThermalMode {
    /// Instantaneous frequency `ω_i(t)`.
    pub omega_t: f64,
    /// Initial frequency `ω_i(0)`.
    pub omega_0: f64,
    pub q_star: f64,
    /// Inverse temperature; `f64::INFINITY` for the ground state.
    pub beta: f64,
}

/// `Σ (ω_i(t)/ω_i(0)) (Q*_i − 1) (ω_i(0)/2) coth(β_i ω_i(0)/2)` with ħ = 1.
pub fn mean_sta_energy(modes: &[ThermalMode]) -> Result<f64> {
    let mut total = 0.0;
    for m in modes {
        if !(m.omega_t > 0.0 && m.omega_0 > 0.0) {
            return Err(Error::InvalidArgument(format!(
                "mean control energy needs positive frequencies, got {} and {}",
                m.omega_t, m.omega_0
            )));
        }
        if !(m.beta > 0.0) {
            return Err(Error::InvalidArgument(format!(
                "inverse temperature must be positive, got {}",
                m.beta
            )));
        }
        let x = 0.5 * m.beta * m.omega_0;
        let coth = if x > 20.0 { 1.0 } else { 1.0 / x.tanh() };
        let initial_energy = 0.5 * m.omega_0 * coth;
        total += (m.omega_t / m.omega_0) * (m.q_star - 1.0) * initial_energy;
    }
    Ok(total)
}
