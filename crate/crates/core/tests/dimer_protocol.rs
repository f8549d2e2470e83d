use sta_core::{
    residual_energy, ControlMode, DimerParams, InitialState, Integrator, Schedule, Trajectory,
};

fn protocol(tau: f64) -> DimerParams {
    DimerParams::new(
        1.0,
        Schedule::linear_ramp(0.0, 0.2, tau).unwrap(),
        Schedule::constant(0.01),
    )
    .unwrap()
}

fn run(tau: f64, mode: ControlMode, steps: usize, stride: usize) -> Trajectory {
    Integrator::new(tau / steps as f64)
        .stride(stride)
        .run(&protocol(tau), mode, (0.0, tau))
        .unwrap()
}

fn residuals(traj: &Trajectory) -> Vec<f64> {
    traj.iter()
        .map(|(t, s)| residual_energy(s, &traj.params, t, traj.mode).unwrap().e_r)
        .collect()
}

#[test]
fn more_control_means_less_residual_energy() {
    let [none, first, both] = ControlMode::ALL.map(|m| residuals(&run(100.0, m, 100_000, 1000)));
    for k in 0..none.len() {
        assert!(both[k] <= first[k] + 1e-12, "sample {k}");
        assert!(first[k] <= none[k] + 1e-12, "sample {k}");
    }
    assert!(*both.last().unwrap() * 10.0 < *none.last().unwrap());
}

#[test]
fn drift_shrinks_with_step() {
    let coarse = run(100.0, ControlMode::Off, 5_000, 5_000).max_drift;
    let fine = run(100.0, ControlMode::Off, 10_000, 10_000).max_drift;
    assert!(fine < coarse / 8.0, "{coarse} -> {fine}");
}

#[test]
fn slower_ramps_are_more_adiabatic() {
    let last = |tau: f64| {
        let n = (tau * 100.0) as usize;
        *residuals(&run(tau, ControlMode::Off, n, n)).last().unwrap()
    };
    let (fast, medium, slow) = (last(10.0), last(100.0), last(1000.0));
    assert!(fast > medium && medium > slow, "{fast} {medium} {slow}");
}

#[test]
fn vacuum_start_carries_initial_mismatch() {
    let p = protocol(100.0);
    let traj = Integrator::new(1e-2)
        .initial(InitialState::Vacuum)
        .stride(10_000)
        .run(&p, ControlMode::Both, (0.0, 100.0))
        .unwrap();
    let e0 = residuals(&traj)[0];
    assert!((e0 - 1.25e-5).abs() < 1e-8);
}
