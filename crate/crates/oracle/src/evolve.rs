//! Dense exponentials and Schrödinger-picture stepping.

use nalgebra::SymmetricEigen;
use num_complex::Complex64;
use sta_core::{Error, Result};

use crate::fock::{CMatrix, CVector, FockOperator};

/// Default bound on `| ||ψ|| − 1 |` during evolution.
pub const NORM_TOLERANCE: f64 = 1e-8;

fn norm1(m: &CMatrix) -> f64 {
    m.column_iter()
        .map(|c| c.iter().map(|z| z.norm()).sum::<f64>())
        .fold(0.0, f64::max)
}

/// Matrix exponential by scaling and squaring with a Taylor core.
pub fn expm(m: &CMatrix) -> CMatrix {
    let n = m.nrows();
    let norm = norm1(m);
    let squarings = if norm > 0.5 {
        (norm / 0.5).log2().ceil() as u32
    } else {
        0
    };
    let scaled = m * Complex64::new(0.5f64.powi(squarings as i32), 0.0);
    let mut result = CMatrix::identity(n, n);
    let mut term = CMatrix::identity(n, n);
    for k in 1..=30 {
        term = &term * &scaled * Complex64::new(1.0 / k as f64, 0.0);
        result += &term;
        if norm1(&term) < 1e-18 * norm1(&result) {
            break;
        }
    }
    for _ in 0..squarings {
        result = &result * &result;
    }
    result
}

/// `exp(−i H dt) ψ` without forming the exponential.
pub fn expm_action(h: &CMatrix, dt: f64, psi: &CVector) -> CVector {
    let scale = norm1(h) * dt.abs();
    let substeps = scale.ceil().max(1.0) as usize;
    let h_step = Complex64::new(0.0, -dt / substeps as f64);
    let mut out = psi.clone();
    for _ in 0..substeps {
        let mut term = out.clone();
        let mut acc = out.clone();
        for k in 1..=40 {
            term = (h * &term) * (h_step / k as f64);
            acc += &term;
            if term.norm() < 1e-17 * acc.norm() {
                break;
            }
        }
        out = acc;
    }
    out
}

/// Lowest eigenvalue and a normalised eigenvector of a Hermitian operator.
pub fn ground_state(h: &FockOperator) -> (f64, CVector) {
    let eig = SymmetricEigen::new(h.matrix.clone());
    let (k, &lowest) = eig
        .eigenvalues
        .iter()
        .enumerate()
        .min_by(|a, b| a.1.total_cmp(b.1))
        .expect("non-empty operator");
    let v = eig.eigenvectors.column(k).into_owned();
    let n = v.norm();
    (lowest, v / Complex64::new(n, 0.0))
}

#[derive(Debug, Clone)]
pub struct SchrodingerTrajectory {
    pub times: Vec<f64>,
    pub states: Vec<CVector>,
    pub max_norm_drift: f64,
}

/// Midpoint-exponential stepping `ψ ← exp(−i H(t + dt/2) dt) ψ`.
///
/// Records every `stride`-th step and always the last one.
pub fn evolve_schrodinger<F>(
    mut h_of_t: F,
    psi0: &CVector,
    t_span: (f64, f64),
    dt: f64,
    stride: usize,
) -> Result<SchrodingerTrajectory>
where
    F: FnMut(f64) -> Result<FockOperator>,
{
    let (t0, t1) = t_span;
    if !(dt > 0.0) || !(t1 > t0) || stride == 0 {
        return Err(Error::InvalidArgument(format!(
            "bad evolution request: span ({t0}, {t1}), dt {dt}, stride {stride}"
        )));
    }
    let norm0 = psi0.norm();
    if (norm0 - 1.0).abs() > NORM_TOLERANCE {
        return Err(Error::InvalidArgument(format!(
            "initial state is not normalised (norm {norm0})"
        )));
    }
    let span = t1 - t0;
    let n = ((span / dt) * (1.0 - 1e-12)).ceil().max(1.0) as usize;
    let h = span / n as f64;
    let mut psi = psi0.clone();
    let mut times = vec![t0];
    let mut states = vec![psi.clone()];
    let mut max_norm_drift = (norm0 - 1.0).abs();
    for k in 0..n {
        let t_mid = t0 + span * ((k as f64 + 0.5) / n as f64);
        let op = h_of_t(t_mid)?;
        psi = expm_action(&op.matrix, h, &psi);
        let t_next = if k + 1 == n {
            t1
        } else {
            t0 + span * ((k + 1) as f64 / n as f64)
        };
        let drift = (psi.norm() - 1.0).abs();
        if drift > NORM_TOLERANCE {
            return Err(Error::Accuracy {
                drift,
                tolerance: NORM_TOLERANCE,
                t: t_next,
            });
        }
        max_norm_drift = max_norm_drift.max(drift);
        if (k + 1) % stride == 0 || k + 1 == n {
            times.push(t_next);
            states.push(psi.clone());
        }
    }
    Ok(SchrodingerTrajectory {
        times,
        states,
        max_norm_drift,
    })
}
