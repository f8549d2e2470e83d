//! Brute-force dimer runs and their comparison with the Bogoliubov route.

use sta_core::{
    residual_energy, ControlMode, DimerParams, Error, InitialState, Integrator, ModeIndex, Result,
};

use crate::evolve::{evolve_schrodinger, ground_state};
use crate::fock::{dimer_coefficients, number_state, QuadraticBasis, DEFAULT_N_MAX};

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct OracleConfig {
    pub n_max: usize,
    pub dt: f64,
    /// Number of equal intervals at whose ends observables are recorded.
    pub samples: usize,
    pub initial: InitialState,
    /// Multiplies the counterdiabatic term in the oracle's evolution only;
    /// energies are always scored with the physical term.
    pub cd_gain: f64,
}

impl Default for OracleConfig {
    fn default() -> Self {
        OracleConfig {
            n_max: DEFAULT_N_MAX,
            dt: 1e-2,
            samples: 20,
            initial: InitialState::GroundState,
            cd_gain: 1.0,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct OracleSample {
    pub t: f64,
    /// `<c†c>` and `<d†d>`
    pub occupation: [f64; 2],
    pub e_r: f64,
}

#[derive(Debug, Clone)]
pub struct OracleRun {
    pub samples: Vec<OracleSample>,
    pub max_norm_drift: f64,
}

fn steps_and_stride(span: f64, dt: f64, samples: usize) -> Result<(usize, usize)> {
    if samples == 0 {
        return Err(Error::InvalidArgument("need at least one sample".into()));
    }
    let n = ((span / dt) * (1.0 - 1e-12)).ceil().max(1.0) as usize;
    let n = n.div_ceil(samples) * samples;
    Ok((n, n / samples))
}

/// Evolves each decoupled mode as a wavefunction in a truncated number basis.
pub fn oracle_dimer_run(
    p: &DimerParams,
    control: ControlMode,
    t_span: (f64, f64),
    cfg: &OracleConfig,
) -> Result<OracleRun> {
    let span = t_span.1 - t_span.0;
    let (n, stride) = steps_and_stride(span, cfg.dt, cfg.samples)?;
    let basis = QuadraticBasis::new(cfg.n_max)?;
    let hamiltonian = |t: f64, mode, control, gain| -> Result<_> {
        let (a, b, k, g) = dimer_coefficients(p, t, mode, control, gain)?;
        Ok(basis.combine(a, b, k, g))
    };

    let mut per_mode = Vec::with_capacity(2);
    let mut max_norm_drift: f64 = 0.0;
    for mode in ModeIndex::BOTH {
        let psi0 = match cfg.initial {
            InitialState::GroundState => {
                ground_state(&hamiltonian(t_span.0, mode, ControlMode::Off, 0.0)?).1
            }
            InitialState::Vacuum => number_state(0, cfg.n_max),
        };
        let traj = evolve_schrodinger(
            |t| hamiltonian(t, mode, control, cfg.cd_gain),
            &psi0,
            t_span,
            span / n as f64,
            stride,
        )?;
        max_norm_drift = max_norm_drift.max(traj.max_norm_drift);
        let mut rows = Vec::with_capacity(traj.times.len());
        for (t, psi) in traj.times.iter().zip(&traj.states) {
            let energy = hamiltonian(*t, mode, control, 1.0)?.expectation(psi).re;
            let ground = ground_state(&hamiltonian(*t, mode, ControlMode::Off, 0.0)?).0;
            let occupation = basis.number.expectation(psi).re;
            rows.push((*t, occupation, energy - ground));
        }
        per_mode.push(rows);
    }

    let samples = per_mode[0]
        .iter()
        .zip(&per_mode[1])
        .map(|(a, b)| OracleSample {
            t: a.0,
            occupation: [a.1, b.1],
            e_r: a.2 + b.2,
        })
        .collect();
    Ok(OracleRun {
        samples,
        max_norm_drift,
    })
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct CrossCheck {
    /// Largest `| <c†c> − |v1|² |` and `| <d†d> − |v2|² |` over the samples.
    pub occupation_diff: [f64; 2],
    pub e_r_diff: f64,
    pub oracle_norm_drift: f64,
    pub bogoliubov_drift: f64,
}

impl CrossCheck {
    pub fn worst(&self) -> f64 {
        self.occupation_diff[0]
            .max(self.occupation_diff[1])
            .max(self.e_r_diff)
    }
}

/// Runs both routes on a shared sample grid and reports the discrepancies.
pub fn cross_validate(
    p: &DimerParams,
    control: ControlMode,
    t_span: (f64, f64),
    cfg: &OracleConfig,
    bogoliubov_dt: f64,
) -> Result<CrossCheck> {
    let engine = Integrator::new(bogoliubov_dt).initial(cfg.initial);
    cross_validate_engine(p, control, t_span, cfg, &engine)
}

/// As [`cross_validate`] with a caller-configured Bogoliubov integrator.
/// Only its step, preparation and driving gain are used; the output
/// stride is chosen to land on the oracle's sample grid.
pub fn cross_validate_engine(
    p: &DimerParams,
    control: ControlMode,
    t_span: (f64, f64),
    cfg: &OracleConfig,
    engine: &Integrator,
) -> Result<CrossCheck> {
    let oracle = oracle_dimer_run(p, control, t_span, cfg)?;
    let span = t_span.1 - t_span.0;
    let (n, stride) = steps_and_stride(span, engine.dt, cfg.samples)?;
    let traj = Integrator {
        dt: span / n as f64,
        stride,
        ..*engine
    }
    .run(p, control, t_span)?;
    if traj.len() != oracle.samples.len() {
        return Err(Error::InvalidArgument(format!(
            "sample grids differ: {} vs {}",
            traj.len(),
            oracle.samples.len()
        )));
    }
    let mut occupation_diff = [0.0f64; 2];
    let mut e_r_diff: f64 = 0.0;
    for ((t, s), o) in traj.iter().zip(&oracle.samples) {
        debug_assert!((t - o.t).abs() <= 1e-9 * span);
        occupation_diff[0] = occupation_diff[0].max((o.occupation[0] - s.v1.norm_sqr()).abs());
        occupation_diff[1] = occupation_diff[1].max((o.occupation[1] - s.v2.norm_sqr()).abs());
        let e = residual_energy(s, p, t, control)?.e_r;
        e_r_diff = e_r_diff.max((o.e_r - e).abs());
    }
    Ok(CrossCheck {
        occupation_diff,
        e_r_diff,
        oracle_norm_drift: oracle.max_norm_drift,
        bogoliubov_drift: traj.max_drift,
    })
}
