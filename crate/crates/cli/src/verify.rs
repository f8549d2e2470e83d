//! Brute-force cross-checks of the Bogoliubov engine, printed as a table.

use std::fmt::Write as _;

use sta_core::{diagonalize_squeezed, ControlMode, DimerParams, Integrator, ModeIndex, Schedule};
use sta_oracle::{
    appendix_identity_check, cross_validate_engine, dimer_hamiltonian, ground_state,
    oracle_dimer_run, squeeze_matrix, OracleConfig, QuadraticBasis, DEFAULT_N_MAX,
};

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct VerifyOptions {
    pub n_max: usize,
    /// Runs the Bogoliubov engine with the counterdiabatic sign flipped.
    pub perturb_cd_sign: bool,
}

impl Default for VerifyOptions {
    fn default() -> Self {
        VerifyOptions {
            n_max: DEFAULT_N_MAX,
            perturb_cd_sign: false,
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct CheckResult {
    pub name: String,
    pub measured: f64,
    pub tolerance: f64,
}

impl CheckResult {
    fn new(name: impl Into<String>, measured: f64, tolerance: f64) -> Self {
        CheckResult {
            name: name.into(),
            measured,
            tolerance,
        }
    }

    fn failed(name: impl Into<String>, err: impl std::fmt::Display) -> Self {
        CheckResult {
            name: format!("{} ({err})", name.into()),
            measured: f64::NAN,
            tolerance: 0.0,
        }
    }

    pub fn passed(&self) -> bool {
        self.measured <= self.tolerance
    }
}

pub fn fig1_params() -> DimerParams {
    DimerParams::new(
        1.0,
        Schedule::linear_ramp(0.0, 0.2, 100.0).expect("valid ramp"),
        Schedule::constant(0.01),
    )
    .expect("valid protocol")
}

fn fast_params() -> DimerParams {
    DimerParams::new(
        1.0,
        Schedule::linear_ramp(0.0, 0.2, 1.0).expect("valid ramp"),
        Schedule::constant(0.01),
    )
    .expect("valid protocol")
}

fn fast_cfg(n_max: usize) -> OracleConfig {
    OracleConfig {
        n_max,
        dt: 1e-3,
        ..OracleConfig::default()
    }
}

const FIG1_SPAN: (f64, f64) = (0.0, 100.0);

/// Deterministic points in `[0, 1)²` (additive recurrence).
fn plane_points() -> impl Iterator<Item = (f64, f64)> {
    const A: f64 = 0.754_877_666_246_692_7;
    const B: f64 = 0.569_840_290_998_053_3;
    (1..).map(|k| ((k as f64 * A).fract(), (k as f64 * B).fract()))
}

fn hermiticity(n_max: usize) -> sta_core::Result<f64> {
    let p = fig1_params();
    let mut worst: f64 = 0.0;
    for t in [0.0, 25.0, 50.0, 75.0, 100.0] {
        for mode in ModeIndex::BOTH {
            for control in ControlMode::ALL {
                let h = dimer_hamiltonian(&p, t, mode, control, n_max)?;
                worst = worst.max(h.hermiticity_defect());
            }
        }
    }
    Ok(worst)
}

fn ground_closure(n_max: usize) -> sta_core::Result<f64> {
    let mut worst: f64 = 0.0;
    let mut checked = 0;
    for (x, y) in plane_points() {
        if checked == 20 {
            break;
        }
        let (g, j) = (0.7 * x, 0.6 * y - 0.3);
        let Ok(p) = DimerParams::new(1.0, Schedule::constant(g), Schedule::constant(j)) else {
            continue;
        };
        let modes = p.modes(0.0)?;
        if modes.g1_sq.abs() > 0.6 || modes.g2_sq.abs() > 0.6 {
            continue;
        }
        for mode in ModeIndex::BOTH {
            let h = dimer_hamiltonian(&p, 0.0, mode, ControlMode::Off, n_max)?;
            let (g_sq, _) = modes.g_sq(mode);
            let closed = diagonalize_squeezed(1.0, g_sq, mode.j_sign() * 0.25 * j)?.ground_energy;
            worst = worst.max((ground_state(&h).0 - closed).abs());
        }
        checked += 1;
    }
    Ok(worst)
}

fn squeezed_population(n_max: usize) -> sta_core::Result<f64> {
    let r = diagonalize_squeezed(1.0, 0.03, 0.0)?.r;
    let s = squeeze_matrix(r, n_max)?;
    let basis = QuadraticBasis::new(n_max)?;
    let vac = s.apply(&sta_oracle::fock::number_state(0, n_max));
    Ok((basis.number.expectation(&vac).re - r.sinh().powi(2)).abs())
}

fn truncation_delta(n_max: usize, reference: usize) -> sta_core::Result<f64> {
    let p = fig1_params();
    let base = OracleConfig {
        n_max,
        samples: 4,
        ..OracleConfig::default()
    };
    let other = OracleConfig {
        n_max: reference,
        ..base
    };
    let mut worst: f64 = 0.0;
    for control in [ControlMode::Off, ControlMode::Both] {
        let a = oracle_dimer_run(&p, control, FIG1_SPAN, &base)?;
        let b = oracle_dimer_run(&p, control, FIG1_SPAN, &other)?;
        for (x, y) in a.samples.iter().zip(&b.samples) {
            worst = worst
                .max((x.e_r - y.e_r).abs())
                .max((x.occupation[0] - y.occupation[0]).abs())
                .max((x.occupation[1] - y.occupation[1]).abs());
        }
    }
    Ok(worst)
}

fn record(out: &mut Vec<CheckResult>, name: String, tolerance: f64, value: sta_core::Result<f64>) {
    out.push(match value {
        Ok(v) => CheckResult::new(name, v, tolerance),
        Err(e) => CheckResult::failed(name, e),
    });
}

pub fn run_checks(opts: &VerifyOptions) -> Vec<CheckResult> {
    let n = opts.n_max;
    let mut out = Vec::new();
    record(
        &mut out,
        format!("hermiticity (n_max={n})"),
        1e-14,
        hermiticity(n),
    );
    for g_sq in [0.01, 0.03, 0.05] {
        for size in [20, n] {
            record(
                &mut out,
                format!("appendix identity g^2={g_sq} (n_max={size})"),
                1e-12,
                appendix_identity_check(g_sq, size),
            );
        }
    }
    record(
        &mut out,
        format!("ground energy closure (n_max={n})"),
        1e-8,
        ground_closure(n),
    );
    record(
        &mut out,
        format!("squeezed vacuum population (n_max={n})"),
        1e-10,
        squeezed_population(n),
    );

    let p = fig1_params();
    let cfg = OracleConfig {
        n_max: n,
        ..OracleConfig::default()
    };
    let gain = if opts.perturb_cd_sign { -1.0 } else { 1.0 };
    let engine = Integrator::new(1e-3).cd_gain(gain);
    for control in ControlMode::ALL {
        record(
            &mut out,
            format!("oracle equivalence {control} (n_max={n})"),
            1e-5,
            cross_validate_engine(&p, control, FIG1_SPAN, &cfg, &engine).map(|c| c.worst()),
        );
    }

    // At tau_q = 1 the nonadiabatic energy is ~1e-4, so a wrong driving
    // term cannot hide below the equivalence tolerance.
    let fast = fast_params();
    for control in ControlMode::ALL {
        record(
            &mut out,
            format!("oracle equivalence {control}, tau_q=1 (n_max={n})"),
            1e-5,
            cross_validate_engine(&fast, control, (0.0, 1.0), &fast_cfg(n), &engine)
                .map(|c| c.worst()),
        );
    }

    let reference = if n == DEFAULT_N_MAX {
        2 * n
    } else {
        DEFAULT_N_MAX
    };
    record(
        &mut out,
        format!("truncation n_max={n} vs {reference}"),
        1e-8,
        truncation_delta(n, reference),
    );
    out
}

pub fn render_table(results: &[CheckResult]) -> String {
    let width = results.iter().map(|r| r.name.len()).max().unwrap_or(0);
    let mut out = String::new();
    for r in results {
        let status = if r.passed() { "PASS" } else { "FAIL" };
        let _ = writeln!(
            out,
            "[{status}] {:<width$}  measured {:>10.3e}  tolerance {:.0e}",
            r.name, r.measured, r.tolerance
        );
    }
    let failed = results.iter().filter(|r| !r.passed()).count();
    let _ = writeln!(out, "{} checks, {} failed", results.len(), failed);
    out
}
