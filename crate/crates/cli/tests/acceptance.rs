//! One line per acceptance criterion; exits nonzero if any fails.

use std::process::ExitCode;
use std::time::{Duration, Instant};

use rand::rngs::StdRng;
use rand::{Rng, SeedableRng};
use sta_cli::{parse_config, run_dimer, Model};
use sta_core::{
    adiabaticity_parameter, coefficient_traces, diagonalize_squeezed, mean_sta_energy,
    mf_cd_coefficients, mf_transform, pp_cd_coefficients, pp_transform, residual_energy,
    ControlMode, DimerParams, Integrator, MfParams, ModeIndex, PpParams, QuadraticForm, Schedule,
    ThermalMode,
};
use sta_oracle::{
    appendix_identity_check, cross_validate, dimer_hamiltonian, ground_state, OracleConfig,
};

struct Outcome {
    pass: bool,
    detail: String,
}

fn outcome(pass: bool, detail: String) -> Outcome {
    Outcome { pass, detail }
}

fn fig1(tau: f64) -> DimerParams {
    DimerParams::new(
        1.0,
        Schedule::linear_ramp(0.0, 0.2, tau).unwrap(),
        Schedule::constant(0.01),
    )
    .unwrap()
}

fn ac1_and_ac2() -> (Outcome, Outcome) {
    let cfg = parse_config(include_str!("../../../configs/fig1.cfg")).unwrap();
    let Model::Dimer(p) = cfg.model else {
        unreachable!("fig1.cfg is a dimer scenario")
    };
    let start = Instant::now();
    let results = run_dimer(&p, &cfg, cfg.stride).unwrap();
    let elapsed = start.elapsed();

    let series = |mode| -> Vec<f64> {
        results
            .run(mode)
            .unwrap()
            .energies
            .iter()
            .map(|e| e.e_r)
            .collect()
    };
    let (none, first, both) = (
        series(ControlMode::Off),
        series(ControlMode::FirstModeOnly),
        series(ControlMode::Both),
    );
    let violations = (0..none.len())
        .filter(|&k| !(both[k] <= first[k] && first[k] <= none[k]))
        .count();
    let max = |v: &[f64]| v.iter().copied().fold(f64::NEG_INFINITY, f64::max);
    let (max_none, max_both) = (max(&none), max(&both));
    let ac1 = outcome(
        violations == 0 && max_both <= 0.1 * max_none && elapsed <= Duration::from_secs(10),
        format!(
            "{} output times, {violations} ordering violations; max E_r both {max_both:.3e} vs none {max_none:.3e}; {elapsed:.2?} (limit 10 s)",
            none.len()
        ),
    );

    let drift = results
        .runs
        .iter()
        .map(|r| r.trajectory.max_drift)
        .fold(0.0, f64::max);
    let halving = |steps: f64| {
        Integrator::new(100.0 / steps)
            .stride(1_000_000)
            .run(&p, ControlMode::Off, (0.0, 100.0))
            .unwrap()
            .max_drift
    };
    let (coarse, fine) = (halving(5_000.0), halving(10_000.0));
    let ratio = coarse / fine;
    let ac2 = outcome(
        drift <= 1e-8 && ratio >= 8.0,
        format!(
            "max drift {drift:.2e} (limit 1e-8); dt tau/5000 -> tau/10000 drift {coarse:.2e} -> {fine:.2e}, ratio {ratio:.1} (need >= 8)"
        ),
    );
    (ac1, ac2)
}

fn ac3() -> Outcome {
    let p = fig1(100.0);
    let start = Instant::now();
    let mut worst: f64 = 0.0;
    let mut parts = Vec::new();
    for control in ControlMode::ALL {
        let c = cross_validate(&p, control, (0.0, 100.0), &OracleConfig::default(), 1e-3).unwrap();
        worst = worst.max(c.worst());
        parts.push(format!("{control} {:.1e}", c.worst()));
    }
    let elapsed = start.elapsed();
    outcome(
        worst <= 1e-5 && elapsed <= Duration::from_secs(60),
        format!(
            "n_max 40, max |diff| over |v1|^2, |v2|^2, E_r: {} (limit 1e-5); {elapsed:.2?} (limit 60 s)",
            parts.join(", ")
        ),
    )
}

fn rel(a: f64, b: f64) -> f64 {
    if b == 0.0 {
        a.abs()
    } else {
        ((a - b) / b).abs()
    }
}

fn ac4() -> Outcome {
    let grid = |tau: f64| (0..=200).map(move |k| tau * k as f64 / 200.0);

    // γ ≡ 0
    let p = PpParams::new(
        1.0,
        Schedule::linear_ramp(1.0, 2.0, 10.0).unwrap(),
        Schedule::constant(0.0),
    )
    .unwrap();
    let mut first: f64 = 0.0;
    for t in grid(10.0) {
        let d = pp_cd_coefficients(&p, t).unwrap();
        let w = 1.0 + t / 10.0;
        first = first.max((d.f - 0.1 / (4.0 * w)).abs()).max(d.g.abs());
    }

    // constant γ, ramped ω
    let (m, gamma) = (1.3, 0.3);
    let p = PpParams::new(
        m,
        Schedule::linear_ramp(1.0, 1.5, 10.0).unwrap(),
        Schedule::constant(gamma),
    )
    .unwrap();
    let mut second: f64 = 0.0;
    for t in grid(10.0) {
        let d = pp_cd_coefficients(&p, t).unwrap();
        let (w, wd) = (1.0 + 0.05 * t, 0.05);
        let den = w.powi(4) - gamma * gamma / (m * m);
        second = second
            .max(rel(d.f, w.powi(3) * wd / (4.0 * den)))
            .max(rel(d.g, -w * wd * gamma / (2.0 * m * den)));
    }

    // constant ω, ramped γ
    let (m, w) = (0.8, 1.2);
    let p = PpParams::new(
        m,
        Schedule::constant(w),
        Schedule::linear_ramp(0.0, 0.5, 10.0).unwrap(),
    )
    .unwrap();
    let mut third: f64 = 0.0;
    for t in grid(10.0) {
        let d = pp_cd_coefficients(&p, t).unwrap();
        let (g, gd) = (0.05 * t, 0.05);
        let den = m * m * w.powi(4) - g * g;
        third = third
            .max(rel(d.f, -g * gd / (8.0 * den)))
            .max(rel(d.g, m * w * w * gd / (4.0 * den)));
    }

    // ω_B ≡ 0
    let p = MfParams::new(
        1.0,
        Schedule::linear_ramp(1.0, 2.0, 10.0).unwrap(),
        Schedule::constant(0.0),
    )
    .unwrap();
    let mut field: f64 = 0.0;
    for t in grid(10.0) {
        let d = mf_cd_coefficients(&p, t).unwrap();
        let w0 = 1.0 + t / 10.0;
        field = field.max((d.m - 0.1 / (4.0 * w0)).abs()).max(d.n.abs());
    }

    outcome(
        first <= 1e-12 && second <= 1e-12 && third <= 1e-12 && field <= 1e-12,
        format!(
            "gamma=0 abs {first:.1e}; const gamma rel {second:.1e}; const omega rel {third:.1e}; omega_B=0 abs {field:.1e} (limits 1e-12)"
        ),
    )
}

fn ac5() -> Outcome {
    let mut worst: f64 = 0.0;
    for g_sq in [0.01, 0.03, 0.05] {
        for n in [20, 40] {
            worst = worst.max(appendix_identity_check(g_sq, n).unwrap());
        }
    }
    outcome(
        worst <= 1e-12,
        format!("max interior deviation {worst:.2e} over 6 cases (limit 1e-12)"),
    )
}

fn ac6() -> Outcome {
    let mut rng = StdRng::seed_from_u64(6);
    let mut worst: f64 = 0.0;
    let mut cases = 0;
    while cases < 20 {
        let g: f64 = rng.random_range(0.0..0.7);
        let j: f64 = rng.random_range(-0.3..0.3);
        let Ok(p) = DimerParams::new(1.0, Schedule::constant(g), Schedule::constant(j)) else {
            continue;
        };
        let modes = p.modes(0.0).unwrap();
        if modes.g1_sq.abs() > 0.6 || modes.g2_sq.abs() > 0.6 {
            continue;
        }
        for mode in ModeIndex::BOTH {
            let h = dimer_hamiltonian(&p, 0.0, mode, ControlMode::Off, 40).unwrap();
            let (g_sq, _) = modes.g_sq(mode);
            let closed = diagonalize_squeezed(1.0, g_sq, mode.j_sign() * 0.25 * j)
                .unwrap()
                .ground_energy;
            worst = worst.max((ground_state(&h).0 - closed).abs());
        }
        cases += 1;
    }
    outcome(
        worst <= 1e-8,
        format!("{cases} random (g, J), max |lambda_min - E_G| {worst:.2e} (limit 1e-8)"),
    )
}

fn ac7() -> Outcome {
    let mut defect: f64 = 0.0;
    let mut form: f64 = 0.0;
    for (m, gamma) in [(1.0, 0.0), (1.0, 0.4), (1.7, -0.6), (0.5, 0.1)] {
        let p = PpParams::new(
            m,
            Schedule::linear_ramp(1.0, 1.4, 5.0).unwrap(),
            Schedule::constant(gamma),
        )
        .unwrap();
        let s = pp_transform();
        defect = defect.max(s.symplectic_defect());
        for t in [0.0, 2.5, 5.0] {
            let [a, b] = p.normal_frequencies(t).unwrap();
            let normal = p.quadratic_form(t).unwrap().pull_back(&s);
            form = form.max(normal.max_abs_diff(&QuadraticForm::uncoupled(m, a.omega, b.omega)));
        }
    }
    for (m, wb) in [(1.0, 0.0), (1.0, 0.5), (2.0, -0.3), (0.7, 0.9)] {
        let p = MfParams::new(
            m,
            Schedule::linear_ramp(1.0, 1.5, 5.0).unwrap(),
            Schedule::constant(wb),
        )
        .unwrap();
        for t in [0.0, 2.5, 5.0] {
            let s = mf_transform(&p, t).unwrap();
            defect = defect.max(s.symplectic_defect());
            let [plus, minus] = p.normal_frequencies(t).unwrap();
            let normal = p.quadratic_form(t).unwrap().pull_back(&s);
            form = form.max(normal.max_abs_diff(&QuadraticForm::uncoupled(
                m,
                plus.omega,
                minus.omega,
            )));
        }
    }
    outcome(
        defect <= 1e-12 && form <= 1e-12,
        format!("max |S W S^T - W| {defect:.1e}; max deviation from uncoupled normal form {form:.1e} (limits 1e-12)"),
    )
}

fn ac8() -> Outcome {
    let mut finals = Vec::new();
    for tau in [10.0, 100.0, 1000.0] {
        let p = fig1(tau);
        let traj = Integrator::new(tau / 1e5)
            .stride(usize::MAX)
            .run(&p, ControlMode::Off, (0.0, tau))
            .unwrap();
        let (t, s) = traj.last().unwrap();
        finals.push(residual_energy(s, &p, t, ControlMode::Off).unwrap().e_r);
    }
    let monotone = finals[0] > finals[1] && finals[1] > finals[2];

    let fractions: Vec<f64> = (1..=10).map(|k| k as f64 / 10.0).collect();
    let scaled = |tau: f64| -> Vec<(f64, f64)> {
        let grid: Vec<f64> = fractions.iter().map(|s| s * tau).collect();
        coefficient_traces(&fig1(tau), &grid)
            .unwrap()
            .into_iter()
            .map(|(_, f, g)| (f * tau, g * tau))
            .collect()
    };
    let reference = scaled(100.0);
    let mut spread: f64 = 0.0;
    for tau in [10.0, 1000.0] {
        for ((f, g), (fr, gr)) in scaled(tau).into_iter().zip(&reference) {
            spread = spread.max(rel(f, *fr)).max(rel(g, *gr));
        }
    }
    outcome(
        monotone && spread <= 1e-9,
        format!(
            "final E_r at tau 10/100/1000: {:.3e} > {:.3e} > {:.3e}; tau*F, tau*G spread at fixed t/tau {spread:.1e} (limit 1e-9)",
            finals[0], finals[1], finals[2]
        ),
    )
}

fn ac9() -> Outcome {
    let unit = [0.1, 1.0, 3.7, 250.0]
        .iter()
        .all(|&w| adiabaticity_parameter(w, 0.0).unwrap() == 1.0);
    let mut rng = StdRng::seed_from_u64(9);
    let mut below = 0;
    for _ in 0..10_000 {
        let w: f64 = rng.random_range(0.05..5.0);
        let limit = 2.0 * w * w;
        let wd: f64 = rng.random_range(-limit..limit) * 0.999;
        if adiabaticity_parameter(w, wd).unwrap() < 1.0 {
            below += 1;
        }
    }
    let modes = [
        ThermalMode {
            omega_t: 1.3,
            omega_0: 1.0,
            q_star: 1.0,
            beta: 2.0,
        },
        ThermalMode {
            omega_t: 0.7,
            omega_0: 0.9,
            q_star: 1.0,
            beta: f64::INFINITY,
        },
    ];
    let energy = mean_sta_energy(&modes).unwrap();
    outcome(
        unit && below == 0 && energy == 0.0,
        format!("Q*(w, 0) == 1: {unit}; Q* < 1 in {below} of 10000 samples; mean energy with Q* = 1: {energy:e}"),
    )
}

fn main() -> ExitCode {
    let (ac1, ac2) = ac1_and_ac2();
    let rows = [
        ("AC1 reference-ramp ordering and 10x suppression", ac1),
        ("AC2 Bogoliubov constraint and 4th-order drift", ac2),
        ("AC3 Fock-space oracle equivalence", ac3()),
        ("AC4 limit reductions of the driving coefficients", ac4()),
        ("AC5 squeezed-mode driving identity", ac5()),
        ("AC6 ground-energy closure", ac6()),
        ("AC7 symplecticity and normal forms", ac7()),
        ("AC8 adiabatic trend and 1/tau scaling", ac8()),
        ("AC9 adiabaticity parameter contract", ac9()),
    ];
    let mut failed = 0;
    for (name, o) in &rows {
        let tag = if o.pass { "PASS" } else { "FAIL" };
        if !o.pass {
            failed += 1;
        }
        println!("[{tag}] {name}: {}", o.detail);
    }
    println!("{} criteria, {failed} failed", rows.len());
    if failed == 0 {
        ExitCode::SUCCESS
    } else {
        ExitCode::FAILURE
    }
}
