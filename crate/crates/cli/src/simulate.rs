//! Scenario execution and CSV emission.

use std::fmt::Write as _;
use std::fs;
use std::path::{Path, PathBuf};

use anyhow::{Context, Result};
use sta_core::{
    adiabaticity_parameter, coefficient_traces, mf_cd_coefficients, pp_cd_coefficients,
    residual_energy, ControlMode, DimerParams, EnergyBreakdown, Integrator, ModeFrequency,
    Trajectory,
};

use crate::config::{Model, ScenarioConfig};

/// Overrides supplied on the command line.
#[derive(Debug, Clone, Default)]
pub struct RunOptions {
    pub output_dir: Option<PathBuf>,
    pub stride: Option<usize>,
}

impl RunOptions {
    fn stride(&self, cfg: &ScenarioConfig) -> usize {
        self.stride.unwrap_or(cfg.stride)
    }

    fn output_path(&self, cfg: &ScenarioConfig) -> PathBuf {
        match &self.output_dir {
            Some(dir) if cfg.output.is_relative() => dir.join(&cfg.output),
            _ => cfg.output.clone(),
        }
    }
}

#[derive(Debug, Clone)]
pub struct ModeRun {
    pub mode: ControlMode,
    pub trajectory: Trajectory,
    pub energies: Vec<EnergyBreakdown>,
}

#[derive(Debug, Clone)]
pub struct DimerResults {
    pub times: Vec<f64>,
    pub runs: Vec<ModeRun>,
    /// `(t, F, G)` on the same grid as the trajectories.
    pub traces: Vec<(f64, f64, f64)>,
}

impl DimerResults {
    pub fn run(&self, mode: ControlMode) -> Option<&ModeRun> {
        self.runs.iter().find(|r| r.mode == mode)
    }
}

fn run_mode(
    p: &DimerParams,
    cfg: &ScenarioConfig,
    stride: usize,
    mode: ControlMode,
) -> Result<ModeRun> {
    let trajectory = Integrator::new(cfg.dt)
        .stride(stride)
        .initial(cfg.initial)
        .run(p, mode, (0.0, cfg.tau_q))
        .with_context(|| format!("integrating control mode {mode}"))?;
    let energies = trajectory
        .iter()
        .map(|(t, s)| residual_energy(s, p, t, mode))
        .collect::<sta_core::Result<Vec<_>>>()
        .with_context(|| format!("residual energy for control mode {mode}"))?;
    Ok(ModeRun {
        mode,
        trajectory,
        energies,
    })
}

/// Integrates every requested control mode, one thread per mode.
pub fn run_dimer(p: &DimerParams, cfg: &ScenarioConfig, stride: usize) -> Result<DimerResults> {
    let outcomes: Vec<Result<ModeRun>> = std::thread::scope(|scope| {
        let handles: Vec<_> = cfg
            .modes
            .iter()
            .map(|&mode| scope.spawn(move || run_mode(p, cfg, stride, mode)))
            .collect();
        handles
            .into_iter()
            .map(|h| h.join().expect("integration thread panicked"))
            .collect()
    });
    let runs = outcomes.into_iter().collect::<Result<Vec<_>>>()?;
    let times = runs[0].trajectory.times.clone();
    let traces = coefficient_traces(p, &times).context("driving coefficient traces")?;
    Ok(DimerResults {
        times,
        runs,
        traces,
    })
}

/// Output time grid shared by the integrator and the coefficient traces.
pub fn sample_times(tau_q: f64, dt: f64, stride: usize) -> Vec<f64> {
    let n = Integrator::new(dt).steps_for(tau_q);
    let mut times: Vec<f64> = (0..=n)
        .filter(|k| k % stride == 0 || *k == n)
        .map(|k| {
            if k == n {
                tau_q
            } else {
                tau_q * (k as f64 / n as f64)
            }
        })
        .collect();
    times.dedup();
    times
}

fn num(x: f64) -> String {
    format!("{x:e}")
}

#[derive(Debug, Clone, PartialEq)]
pub struct OutputFile {
    pub path: PathBuf,
    pub contents: String,
}

fn sibling(base: &Path, suffix: &str) -> PathBuf {
    let stem = base
        .file_stem()
        .map(|s| s.to_string_lossy().into_owned())
        .unwrap_or_else(|| "out".into());
    base.with_file_name(format!("{stem}_{suffix}.csv"))
}

/// Combined, per-mode energy and per-mode trajectory CSVs.
pub fn dimer_outputs(results: &DimerResults, base: &Path) -> Vec<OutputFile> {
    let mut files = Vec::new();

    let mut combined = String::from("t,e_r_none,e_r_mode1,e_r_both,F,G\n");
    for (k, &t) in results.times.iter().enumerate() {
        let column = |mode| {
            results
                .run(mode)
                .map(|r| num(r.energies[k].e_r))
                .unwrap_or_default()
        };
        let (_, f, g) = results.traces[k];
        let _ = writeln!(
            combined,
            "{},{},{},{},{},{}",
            num(t),
            column(ControlMode::Off),
            column(ControlMode::FirstModeOnly),
            column(ControlMode::Both),
            num(f),
            num(g)
        );
    }
    files.push(OutputFile {
        path: base.to_path_buf(),
        contents: combined,
    });

    for run in &results.runs {
        let mut energy = String::from("t,e1,e2,eg1,eg2,e_r\n");
        for (t, e) in run.trajectory.times.iter().zip(&run.energies) {
            let _ = writeln!(
                energy,
                "{},{},{},{},{},{}",
                num(*t),
                num(e.e1),
                num(e.e2),
                num(e.eg1),
                num(e.eg2),
                num(e.e_r)
            );
        }
        files.push(OutputFile {
            path: sibling(base, run.mode.as_str()),
            contents: energy,
        });

        let mut traj = String::from(
            "t,re_u1,im_u1,re_v1,im_v1,re_u2,im_u2,re_v2,im_v2,constraint1,constraint2\n",
        );
        for (t, s) in run.trajectory.iter() {
            let (c1, c2) = sta_core::check_constraint(s);
            let cells = [
                t, s.u1.re, s.u1.im, s.v1.re, s.v1.im, s.u2.re, s.u2.im, s.v2.re, s.v2.im, c1, c2,
            ];
            let row: Vec<String> = cells.iter().map(|&x| num(x)).collect();
            let _ = writeln!(traj, "{}", row.join(","));
        }
        files.push(OutputFile {
            path: sibling(base, &format!("{}_trajectory", run.mode.as_str())),
            contents: traj,
        });
    }
    files
}

fn q_star(w: &ModeFrequency) -> sta_core::Result<f64> {
    adiabaticity_parameter(w.omega, w.omega_dot)
}

/// Driving coefficients and adiabaticity parameters on the output grid.
pub fn coefficient_csv(cfg: &ScenarioConfig, stride: usize) -> Result<String> {
    let times = sample_times(cfg.tau_q, cfg.dt, stride);
    let mut out = String::new();
    match &cfg.model {
        Model::Dimer(p) => {
            out.push_str("t,F,G\n");
            for (t, f, g) in coefficient_traces(p, &times)? {
                let _ = writeln!(out, "{},{},{}", num(t), num(f), num(g));
            }
        }
        Model::Pp(p) => {
            out.push_str("t,F,G,qstar1,qstar2\n");
            for t in times {
                let d = pp_cd_coefficients(p, t)?;
                let [a, b] = p.normal_frequencies(t)?;
                let _ = writeln!(
                    out,
                    "{},{},{},{},{}",
                    num(t),
                    num(d.f),
                    num(d.g),
                    num(q_star(&a).with_context(|| format!("Q* of mode 1 at t = {t}"))?),
                    num(q_star(&b).with_context(|| format!("Q* of mode 2 at t = {t}"))?)
                );
            }
        }
        Model::Mf(p) => {
            out.push_str("t,M,N,qstar_plus,qstar_minus\n");
            for t in times {
                let d = mf_cd_coefficients(p, t)?;
                let [plus, minus] = p.normal_frequencies(t)?;
                let _ = writeln!(
                    out,
                    "{},{},{},{},{}",
                    num(t),
                    num(d.m),
                    num(d.n),
                    num(q_star(&plus).with_context(|| format!("Q* of the + mode at t = {t}"))?),
                    num(q_star(&minus).with_context(|| format!("Q* of the - mode at t = {t}"))?)
                );
            }
        }
    }
    Ok(out)
}

/// Writes every file or none: on failure, files already written are removed.
pub fn write_outputs(files: &[OutputFile]) -> Result<Vec<PathBuf>> {
    let mut written = Vec::new();
    for f in files {
        let result = (|| -> Result<()> {
            if let Some(dir) = f.path.parent().filter(|d| !d.as_os_str().is_empty()) {
                fs::create_dir_all(dir).with_context(|| format!("creating {}", dir.display()))?;
            }
            fs::write(&f.path, &f.contents).with_context(|| format!("writing {}", f.path.display()))
        })();
        if let Err(e) = result {
            for p in &written {
                let _ = fs::remove_file(p);
            }
            let _ = fs::remove_file(&f.path);
            return Err(e);
        }
        written.push(f.path.clone());
    }
    Ok(written)
}

/// What `simulate` produced, for reporting.
#[derive(Debug, Clone)]
pub struct SimulationReport {
    pub files: Vec<PathBuf>,
    pub results: Option<DimerResults>,
}

pub fn simulate(cfg: &ScenarioConfig, opts: &RunOptions) -> Result<SimulationReport> {
    let stride = opts.stride(cfg);
    let base = opts.output_path(cfg);
    match &cfg.model {
        Model::Dimer(p) => {
            let results = run_dimer(p, cfg, stride)?;
            let files = write_outputs(&dimer_outputs(&results, &base))?;
            Ok(SimulationReport {
                files,
                results: Some(results),
            })
        }
        _ => Ok(SimulationReport {
            files: coefficients(cfg, opts)?,
            results: None,
        }),
    }
}

pub fn coefficients(cfg: &ScenarioConfig, opts: &RunOptions) -> Result<Vec<PathBuf>> {
    let contents = coefficient_csv(cfg, opts.stride(cfg))?;
    let path = opts.output_path(cfg);
    let path = match cfg.model {
        Model::Dimer(_) => sibling(&path, "coefficients"),
        _ => path,
    };
    write_outputs(&[OutputFile { path, contents }])
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn grid_includes_both_ends() {
        assert_eq!(sample_times(1.0, 0.25, 3), vec![0.0, 0.75, 1.0]);
        assert_eq!(sample_times(1.0, 0.25, 2), vec![0.0, 0.5, 1.0]);
        assert_eq!(sample_times(2.0, 1e-3, 1000), vec![0.0, 1.0, 2.0]);
    }

    #[test]
    fn sibling_names() {
        assert_eq!(
            sibling(Path::new("out/fig1.csv"), "both"),
            PathBuf::from("out/fig1_both.csv")
        );
    }

    #[test]
    fn numbers_round_trip() {
        for x in [0.0, 1e-3, 2.220446049250313e-16, -0.1, 100.0, 1.0 / 3.0] {
            assert_eq!(num(x).parse::<f64>().unwrap(), x);
        }
    }

    #[test]
    fn failed_write_leaves_nothing() {
        let tmp = tempfile::tempdir().unwrap();
        let dir = tmp.path();
        let blocker = dir.join("blocker");
        fs::write(&blocker, "").unwrap();
        let files = [
            OutputFile {
                path: dir.join("a.csv"),
                contents: "x\n".into(),
            },
            OutputFile {
                path: blocker.join("b.csv"),
                contents: "y\n".into(),
            },
        ];
        assert!(write_outputs(&files).is_err());
        assert!(!dir.join("a.csv").exists());
    }
}
