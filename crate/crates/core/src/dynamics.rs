//! Heisenberg-picture evolution of the dimer's decoupled modes.
//!
//! The mode operators evolve as `c_H(t) = u1 c + v1* c†` and
//! `d_H(t) = u2 d + v2* d†`. Each pair obeys, with `a = ω0 (1 − g_i²/2)`,
//! `b = ω0 g_i²/2` and `k = ϖ̇_i / (2ϖ_i)`,
//!
//! ```text
//!  i du/dt = a u − b v − i k v
//! −i dv/dt = a v − b u + i k u
//! ```
//!
//! where the `k` terms come from the counterdiabatic generator
//! `i (ϖ̇/4ϖ)(c² − c†²)` and are switched by [`ControlMode`].

use std::fmt;
use std::ops::{Add, Mul};
use std::str::FromStr;

use crate::complex::Complex;
use crate::error::{Error, Result};
use crate::normal_modes::{diagonalize_squeezed, DimerParams, ModeIndex};

/// Default bound on `||u|² − |v|² − 1|` during integration.
pub const DRIFT_TOLERANCE: f64 = 1e-8;

#[derive(Debug, Clone, Copy, PartialEq, Default)]
pub struct BogoliubovState {
    pub u1: Complex,
    pub v1: Complex,
    pub u2: Complex,
    pub v2: Complex,
}

impl BogoliubovState {
    /// `(1, 0, 1, 0)`: the Heisenberg operators at the initial time.
    pub const IDENTITY: BogoliubovState = BogoliubovState {
        u1: Complex::ONE,
        v1: Complex::ZERO,
        u2: Complex::ONE,
        v2: Complex::ZERO,
    };

    pub fn mode(&self, mode: ModeIndex) -> (Complex, Complex) {
        match mode {
            ModeIndex::First => (self.u1, self.v1),
            ModeIndex::Second => (self.u2, self.v2),
        }
    }

    fn from_modes(first: (Complex, Complex), second: (Complex, Complex)) -> Self {
        BogoliubovState {
            u1: first.0,
            v1: first.1,
            u2: second.0,
            v2: second.1,
        }
    }
}

impl Add for BogoliubovState {
    type Output = BogoliubovState;
    fn add(self, o: BogoliubovState) -> BogoliubovState {
        BogoliubovState {
            u1: self.u1 + o.u1,
            v1: self.v1 + o.v1,
            u2: self.u2 + o.u2,
            v2: self.v2 + o.v2,
        }
    }
}

impl Mul<f64> for BogoliubovState {
    type Output = BogoliubovState;
    fn mul(self, k: f64) -> BogoliubovState {
        BogoliubovState {
            u1: self.u1 * k,
            v1: self.v1 * k,
            u2: self.u2 * k,
            v2: self.v2 * k,
        }
    }
}

/// `(|u1|² − |v1|² − 1, |u2|² − |v2|² − 1)`
pub fn check_constraint(s: &BogoliubovState) -> (f64, f64) {
    (
        s.u1.norm_sqr() - s.v1.norm_sqr() - 1.0,
        s.u2.norm_sqr() - s.v2.norm_sqr() - 1.0,
    )
}

/// Which decoupled modes receive counterdiabatic driving.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum ControlMode {
    Off,
    FirstModeOnly,
    Both,
}

impl ControlMode {
    pub const ALL: [ControlMode; 3] = [
        ControlMode::Off,
        ControlMode::FirstModeOnly,
        ControlMode::Both,
    ];

    pub fn drives(self, mode: ModeIndex) -> bool {
        match self {
            ControlMode::Off => false,
            ControlMode::FirstModeOnly => mode == ModeIndex::First,
            ControlMode::Both => true,
        }
    }

    pub fn as_str(self) -> &'static str {
        match self {
            ControlMode::Off => "none",
            ControlMode::FirstModeOnly => "mode1_only",
            ControlMode::Both => "both",
        }
    }
}

impl fmt::Display for ControlMode {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl FromStr for ControlMode {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "none" => Ok(ControlMode::Off),
            "mode1_only" => Ok(ControlMode::FirstModeOnly),
            "both" => Ok(ControlMode::Both),
            other => Err(Error::InvalidArgument(format!(
                "unknown control mode `{other}` (expected none, mode1_only or both)"
            ))),
        }
    }
}

/// State the system is prepared in at the start of the protocol.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Default)]
pub enum InitialState {
    /// Ground state of the decoupled Hamiltonians at `t0`.
    #[default]
    GroundState,
    /// The `c`/`d` vacuum, i.e. coefficients `(1, 0, 1, 0)`.
    Vacuum,
}

impl InitialState {
    pub fn as_str(self) -> &'static str {
        match self {
            InitialState::GroundState => "ground",
            InitialState::Vacuum => "vacuum",
        }
    }

    pub fn state(self, params: &DimerParams, t0: f64) -> Result<BogoliubovState> {
        match self {
            InitialState::GroundState => adiabatic_state(params, t0),
            InitialState::Vacuum => Ok(BogoliubovState::IDENTITY),
        }
    }
}

impl fmt::Display for InitialState {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl FromStr for InitialState {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "ground" => Ok(InitialState::GroundState),
            "vacuum" => Ok(InitialState::Vacuum),
            other => Err(Error::InvalidArgument(format!(
                "unknown initial state `{other}` (expected ground or vacuum)"
            ))),
        }
    }
}

/// Coefficients of the instantaneous ground state: the squeezed vacuum
/// `S[r_i]|0>` has `u = cosh r_i`, `v = sinh r_i`.
pub fn adiabatic_state(params: &DimerParams, t: f64) -> Result<BogoliubovState> {
    let modes = params.modes(t)?;
    let pair = |mode: ModeIndex| -> Result<(Complex, Complex)> {
        let (g_sq, _) = modes.g_sq(mode);
        let r = diagonalize_squeezed(params.omega0(), g_sq, 0.0)?.r;
        Ok((Complex::real(r.cosh()), Complex::real(r.sinh())))
    };
    Ok(BogoliubovState::from_modes(
        pair(ModeIndex::First)?,
        pair(ModeIndex::Second)?,
    ))
}

/// Time derivative of the Bogoliubov coefficients.
pub fn ex05_rhs(
    s: &BogoliubovState,
    t: f64,
    params: &DimerParams,
    control: ControlMode,
) -> Result<BogoliubovState> {
    rhs_with_gain(s, t, params, control, 1.0)
}

/// As [`ex05_rhs`], with the counterdiabatic terms multiplied by `cd_gain`.
pub fn rhs_with_gain(
    s: &BogoliubovState,
    t: f64,
    params: &DimerParams,
    control: ControlMode,
    cd_gain: f64,
) -> Result<BogoliubovState> {
    let w0 = params.omega0();
    let modes = params.modes(t)?;
    let pair = |mode: ModeIndex| -> Result<(Complex, Complex)> {
        let (g_sq, _) = modes.g_sq(mode);
        let varpi = params.squeezed_frequency(t, mode)?;
        let k = if control.drives(mode) {
            cd_gain * varpi.omega_dot / (2.0 * varpi.omega)
        } else {
            0.0
        };
        let a = w0 * (1.0 - 0.5 * g_sq);
        let b = w0 * 0.5 * g_sq;
        let (u, v) = s.mode(mode);
        let du = -(u * a - v * b).mul_i() - v * k;
        let dv = (v * a - u * b).mul_i() - u * k;
        Ok((du, dv))
    };
    Ok(BogoliubovState::from_modes(
        pair(ModeIndex::First)?,
        pair(ModeIndex::Second)?,
    ))
}

/// Time-indexed Bogoliubov coefficients of one run.
#[derive(Debug, Clone, PartialEq)]
pub struct Trajectory {
    pub times: Vec<f64>,
    pub states: Vec<BogoliubovState>,
    pub params: DimerParams,
    pub mode: ControlMode,
    /// Largest `||u_i|² − |v_i|² − 1|` seen at any step, not just at samples.
    pub max_drift: f64,
}

impl Trajectory {
    pub fn len(&self) -> usize {
        self.times.len()
    }

    pub fn is_empty(&self) -> bool {
        self.times.is_empty()
    }

    pub fn iter(&self) -> impl Iterator<Item = (f64, &BogoliubovState)> {
        self.times.iter().copied().zip(self.states.iter())
    }

    pub fn last(&self) -> Option<(f64, &BogoliubovState)> {
        self.times.last().copied().zip(self.states.last())
    }
}

/// Fixed-step classical Runge-Kutta integrator for the coefficient ODEs.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Integrator {
    pub dt: f64,
    /// Record every `stride`-th step (the final step is always recorded).
    pub stride: usize,
    pub initial: InitialState,
    pub cd_gain: f64,
    pub drift_tolerance: f64,
}

impl Integrator {
    pub fn new(dt: f64) -> Self {
        Integrator {
            dt,
            stride: 1,
            initial: InitialState::default(),
            cd_gain: 1.0,
            drift_tolerance: DRIFT_TOLERANCE,
        }
    }

    pub fn stride(mut self, stride: usize) -> Self {
        self.stride = stride;
        self
    }

    pub fn initial(mut self, initial: InitialState) -> Self {
        self.initial = initial;
        self
    }

    pub fn cd_gain(mut self, gain: f64) -> Self {
        self.cd_gain = gain;
        self
    }

    pub fn drift_tolerance(mut self, tol: f64) -> Self {
        self.drift_tolerance = tol;
        self
    }

    /// Number of steps used for `span`; `dt` is shrunk so that the steps
    /// tile the span exactly.
    pub fn steps_for(&self, span: f64) -> usize {
        ((span / self.dt) * (1.0 - 1e-12)).ceil().max(1.0) as usize
    }

    pub fn run(
        &self,
        params: &DimerParams,
        mode: ControlMode,
        t_span: (f64, f64),
    ) -> Result<Trajectory> {
        let (t0, t1) = t_span;
        if !(self.dt > 0.0 && self.dt.is_finite()) {
            return Err(Error::InvalidArgument(format!(
                "dt must be positive, got {}",
                self.dt
            )));
        }
        if !(t1 > t0) || !t0.is_finite() || !t1.is_finite() {
            return Err(Error::InvalidArgument(format!(
                "time span must be increasing, got ({t0}, {t1})"
            )));
        }
        if self.stride == 0 {
            return Err(Error::InvalidArgument(
                "output stride must be positive".into(),
            ));
        }
        let span = t1 - t0;
        let n = self.steps_for(span);
        let h = span / n as f64;
        let time = |k: usize| {
            if k == n {
                t1
            } else {
                t0 + span * (k as f64 / n as f64)
            }
        };
        let f = |s: &BogoliubovState, t: f64| rhs_with_gain(s, t, params, mode, self.cd_gain);

        let mut state = self.initial.state(params, t0)?;
        let (d1, d2) = check_constraint(&state);
        let mut max_drift = d1.abs().max(d2.abs());
        let capacity = n / self.stride + 2;
        let mut times = Vec::with_capacity(capacity);
        let mut states = Vec::with_capacity(capacity);
        times.push(t0);
        states.push(state);

        for k in 0..n {
            let t = time(k);
            let k1 = f(&state, t)?;
            let k2 = f(&(state + k1 * (0.5 * h)), t + 0.5 * h)?;
            let k3 = f(&(state + k2 * (0.5 * h)), t + 0.5 * h)?;
            let k4 = f(&(state + k3 * h), time(k + 1))?;
            state = state + (k1 + k2 * 2.0 + k3 * 2.0 + k4) * (h / 6.0);

            let t_next = time(k + 1);
            let (d1, d2) = check_constraint(&state);
            let drift = d1.abs().max(d2.abs());
            if !(drift <= self.drift_tolerance) {
                return Err(Error::Accuracy {
                    drift,
                    tolerance: self.drift_tolerance,
                    t: t_next,
                });
            }
            max_drift = max_drift.max(drift);
            if (k + 1) % self.stride == 0 || k + 1 == n {
                times.push(t_next);
                states.push(state);
            }
        }

        Ok(Trajectory {
            times,
            states,
            params: *params,
            mode,
            max_drift,
        })
    }
}

/// Integrates from the ground state with unit stride.
pub fn integrate(
    params: &DimerParams,
    mode: ControlMode,
    t_span: (f64, f64),
    dt: f64,
) -> Result<Trajectory> {
    Integrator::new(dt).run(params, mode, t_span)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::schedules::Schedule;

    fn fig1(tau_q: f64) -> DimerParams {
        DimerParams::new(
            1.0,
            Schedule::linear_ramp(0.0, 0.2, tau_q).unwrap(),
            Schedule::constant(0.01),
        )
        .unwrap()
    }

    #[test]
    fn constraint_of_simple_states() {
        assert_eq!(check_constraint(&BogoliubovState::IDENTITY), (0.0, 0.0));
        let r: f64 = 0.3;
        let s = BogoliubovState {
            u1: Complex::real(r.cosh()),
            v1: Complex::real(r.sinh()),
            ..BogoliubovState::IDENTITY
        };
        let (d1, d2) = check_constraint(&s);
        assert!(d1.abs() < 1e-15 && d2 == 0.0);
        let scaled = BogoliubovState {
            u1: Complex::real(1.001),
            ..BogoliubovState::IDENTITY
        };
        let (d1, _) = check_constraint(&scaled);
        assert!((d1 - 0.002_001).abs() < 1e-15);
    }

    #[test]
    fn free_rhs_is_phase_rotation() {
        let p = DimerParams::new(1.0, Schedule::constant(0.0), Schedule::constant(0.0)).unwrap();
        let d = ex05_rhs(&BogoliubovState::IDENTITY, 0.0, &p, ControlMode::Both).unwrap();
        assert_eq!(d.u1, Complex::new(0.0, -1.0));
        assert_eq!(d.v1, Complex::ZERO);
        assert_eq!(d.u2, Complex::new(0.0, -1.0));
    }

    #[test]
    fn off_mode_equals_zero_rate_driving() {
        let p = fig1(100.0);
        let s = BogoliubovState {
            u1: Complex::new(1.01, 0.2),
            v1: Complex::new(0.05, -0.1),
            u2: Complex::new(0.9, -0.3),
            v2: Complex::new(-0.02, 0.04),
        };
        let off = ex05_rhs(&s, 40.0, &p, ControlMode::Off).unwrap();
        let zero_gain = rhs_with_gain(&s, 40.0, &p, ControlMode::Both, 0.0).unwrap();
        assert_eq!(off, zero_gain);
        let first = ex05_rhs(&s, 40.0, &p, ControlMode::FirstModeOnly).unwrap();
        let both = ex05_rhs(&s, 40.0, &p, ControlMode::Both).unwrap();
        assert_eq!((first.u1, first.v1), (both.u1, both.v1));
        assert_eq!((first.u2, first.v2), (off.u2, off.v2));
    }

    #[test]
    fn rhs_by_direct_substitution() {
        // g1² = 0.03 at t = 1 with d(g1²)/dt chosen so that ϖ̇/(2ϖ) = 0.002
        let k = 0.002;
        let g_sq_dot = -4.0 * k * (1.0 - 0.03);
        let g = Schedule::constant(0.2);
        let j = Schedule::linear_ramp(0.01 + g_sq_dot, 0.01 - g_sq_dot, 2.0).unwrap();
        let p = DimerParams::new(1.0, g, j).unwrap();
        assert!((p.modes(1.0).unwrap().g1_sq - 0.03).abs() < 1e-15);
        let varpi = p.squeezed_frequency(1.0, ModeIndex::First).unwrap();
        assert!(
            (varpi.omega_dot / (2.0 * varpi.omega) - k).abs() < 1e-15,
            "{varpi:?}"
        );

        let d = ex05_rhs(&BogoliubovState::IDENTITY, 1.0, &p, ControlMode::Both).unwrap();
        // i du/dt = 0.985 u − 0.015 v − i k v, with v = 0
        assert!((d.u1 - Complex::new(0.0, -0.985)).abs() < 1e-15);
        // −i dv/dt = 0.985 v − 0.015 u + i k u
        assert!(
            (d.v1 - Complex::new(-k, -0.015)).abs() < 1e-15,
            "{:?}",
            d.v1
        );
    }

    #[test]
    fn free_evolution_is_a_pure_phase() {
        let p = DimerParams::new(1.3, Schedule::constant(0.0), Schedule::constant(0.0)).unwrap();
        let traj = Integrator::new(1e-3)
            .stride(500)
            .run(&p, ControlMode::Both, (0.0, 20.0))
            .unwrap();
        for (t, s) in traj.iter() {
            assert!((s.u1 - Complex::cis(-1.3 * t)).abs() < 1e-10, "t = {t}");
            assert_eq!(s.v1, Complex::ZERO);
        }
        assert_eq!(traj.times.first(), Some(&0.0));
        assert_eq!(traj.times.last(), Some(&20.0));
        assert_eq!(traj.len(), 41);
    }

    #[test]
    fn driven_evolution_tracks_squeezed_ground_state() {
        let p = fig1(100.0);
        let traj = integrate(&p, ControlMode::Both, (0.0, 100.0), 1e-2).unwrap();
        let (t, end) = traj.last().unwrap();
        let target = adiabatic_state(&p, t).unwrap();
        assert!((end.v1.abs() - target.v1.re).abs() < 1e-4);
        assert!((end.v2.abs() - target.v2.re).abs() < 1e-4);
        assert!((end.v1.abs() - 0.007_614_8).abs() < 1e-6);
    }

    #[test]
    fn integration_rejects_bad_arguments() {
        let p = fig1(10.0);
        assert!(integrate(&p, ControlMode::Off, (0.0, 10.0), 0.0).is_err());
        assert!(integrate(&p, ControlMode::Off, (5.0, 5.0), 0.1).is_err());
        assert!(matches!(
            integrate(&p, ControlMode::Off, (9.9, 10.5), 1e-3),
            Err(Error::Domain { .. })
        ));
        assert!(Integrator::new(0.1)
            .stride(0)
            .run(&p, ControlMode::Off, (0.0, 1.0))
            .is_err());
    }

    #[test]
    fn coarse_steps_trip_the_drift_monitor() {
        let p = fig1(100.0);
        let err = integrate(&p, ControlMode::Off, (0.0, 100.0), 0.1).unwrap_err();
        assert!(matches!(err, Error::Accuracy { .. }), "{err}");
    }

    #[test]
    fn vacuum_preparation_starts_at_identity() {
        let p = fig1(10.0);
        let traj = Integrator::new(1e-3)
            .initial(InitialState::Vacuum)
            .stride(1000)
            .run(&p, ControlMode::Off, (0.0, 10.0))
            .unwrap();
        assert_eq!(traj.states[0], BogoliubovState::IDENTITY);
        let ground = integrate(&p, ControlMode::Off, (0.0, 1e-3), 1e-3).unwrap();
        assert_eq!(ground.states[0], adiabatic_state(&p, 0.0).unwrap());
    }

    #[test]
    fn names_round_trip() {
        for m in ControlMode::ALL {
            assert_eq!(m.as_str().parse::<ControlMode>().unwrap(), m);
        }
        for i in [InitialState::GroundState, InitialState::Vacuum] {
            assert_eq!(i.as_str().parse::<InitialState>().unwrap(), i);
        }
        assert!("mode2_only".parse::<ControlMode>().is_err());
    }
}
