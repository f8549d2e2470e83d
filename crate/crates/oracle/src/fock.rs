//! Truncated number-basis matrices for a single bosonic mode.

use nalgebra::{DMatrix, DVector};
use num_complex::Complex64;
use sta_core::{ControlMode, DimerParams, Error, ModeIndex, Result};

use crate::evolve::expm;

pub type CMatrix = DMatrix<Complex64>;
pub type CVector = DVector<Complex64>;

pub const DEFAULT_N_MAX: usize = 40;

/// Rows and columns this close to the cutoff are ignored by identity checks.
pub const BOUNDARY: usize = 2;

const ZERO: Complex64 = Complex64::new(0.0, 0.0);

#[derive(Debug, Clone, PartialEq)]
pub struct FockOperator {
    pub n_max: usize,
    pub matrix: CMatrix,
}

impl FockOperator {
    pub fn from_matrix(matrix: CMatrix) -> Self {
        assert!(matrix.is_square(), "Fock operators are square");
        FockOperator {
            n_max: matrix.nrows(),
            matrix,
        }
    }

    pub fn zeros(n_max: usize) -> Self {
        Self::from_matrix(CMatrix::zeros(n_max, n_max))
    }

    pub fn identity(n_max: usize) -> Self {
        Self::from_matrix(CMatrix::identity(n_max, n_max))
    }

    pub fn adjoint(&self) -> Self {
        Self::from_matrix(self.matrix.adjoint())
    }

    pub fn hermiticity_defect(&self) -> f64 {
        max_abs(&(&self.matrix - self.matrix.adjoint()))
    }

    /// Largest entry of `self − other` over rows and columns `< limit`.
    pub fn block_diff(&self, other: &FockOperator, limit: usize) -> f64 {
        let d = &self.matrix - &other.matrix;
        let k = limit.min(self.n_max);
        max_abs(&d.view((0, 0), (k, k)).into_owned())
    }

    /// As [`block_diff`](Self::block_diff) on the interior `n_max − 2` block.
    pub fn interior_diff(&self, other: &FockOperator) -> f64 {
        self.block_diff(other, self.n_max.saturating_sub(BOUNDARY))
    }

    pub fn expectation(&self, psi: &CVector) -> Complex64 {
        psi.dotc(&(&self.matrix * psi))
    }

    pub fn apply(&self, psi: &CVector) -> CVector {
        &self.matrix * psi
    }
}

impl std::ops::Mul for &FockOperator {
    type Output = FockOperator;
    fn mul(self, o: &FockOperator) -> FockOperator {
        FockOperator::from_matrix(&self.matrix * &o.matrix)
    }
}

impl std::ops::Add for &FockOperator {
    type Output = FockOperator;
    fn add(self, o: &FockOperator) -> FockOperator {
        FockOperator::from_matrix(&self.matrix + &o.matrix)
    }
}

impl std::ops::Sub for &FockOperator {
    type Output = FockOperator;
    fn sub(self, o: &FockOperator) -> FockOperator {
        FockOperator::from_matrix(&self.matrix - &o.matrix)
    }
}

impl std::ops::Mul<Complex64> for &FockOperator {
    type Output = FockOperator;
    fn mul(self, k: Complex64) -> FockOperator {
        FockOperator::from_matrix(&self.matrix * k)
    }
}

impl std::ops::Mul<f64> for &FockOperator {
    type Output = FockOperator;
    fn mul(self, k: f64) -> FockOperator {
        self * Complex64::new(k, 0.0)
    }
}

pub fn max_abs(m: &CMatrix) -> f64 {
    m.iter().fold(0.0f64, |acc, z| acc.max(z.norm()))
}

/// `|n>` in a space of dimension `n_max`.
pub fn number_state(n: usize, n_max: usize) -> CVector {
    let mut v = CVector::zeros(n_max);
    v[n] = Complex64::new(1.0, 0.0);
    v
}

/// Annihilation and creation matrices, `a|n> = sqrt(n)|n−1>`.
pub fn build_mode_ops(n_max: usize) -> Result<(FockOperator, FockOperator)> {
    if n_max < 2 {
        return Err(Error::InvalidArgument(format!(
            "Fock truncation must be at least 2, got {n_max}"
        )));
    }
    let a = CMatrix::from_fn(n_max, n_max, |i, j| {
        if j == i + 1 {
            Complex64::new((j as f64).sqrt(), 0.0)
        } else {
            ZERO
        }
    });
    let a = FockOperator::from_matrix(a);
    let a_dag = a.adjoint();
    Ok((a, a_dag))
}

/// The quadratic building blocks of a single-mode Hamiltonian, entered
/// entry by entry rather than by multiplying truncated ladder matrices.
#[derive(Debug, Clone)]
pub struct QuadraticBasis {
    pub n_max: usize,
    /// `c†c`
    pub number: FockOperator,
    /// `c² + c†²`
    pub squeeze: FockOperator,
    /// `i (c² − c†²)`
    pub drive: FockOperator,
}

impl QuadraticBasis {
    pub fn new(n_max: usize) -> Result<Self> {
        if n_max < 2 {
            return Err(Error::InvalidArgument(format!(
                "Fock truncation must be at least 2, got {n_max}"
            )));
        }
        // <n|c²|n+2> = sqrt((n+1)(n+2))
        let lower = |i: usize, j: usize| {
            if j == i + 2 {
                (((i + 1) * (i + 2)) as f64).sqrt()
            } else {
                0.0
            }
        };
        let number = CMatrix::from_fn(n_max, n_max, |i, j| {
            if i == j {
                Complex64::new(i as f64, 0.0)
            } else {
                ZERO
            }
        });
        let squeeze = CMatrix::from_fn(n_max, n_max, |i, j| {
            Complex64::new(lower(i, j) + lower(j, i), 0.0)
        });
        let drive = CMatrix::from_fn(n_max, n_max, |i, j| {
            Complex64::new(0.0, lower(i, j) - lower(j, i))
        });
        Ok(QuadraticBasis {
            n_max,
            number: FockOperator::from_matrix(number),
            squeeze: FockOperator::from_matrix(squeeze),
            drive: FockOperator::from_matrix(drive),
        })
    }

    /// `α c†c + β (c² + c†²) + κ i(c² − c†²) + γ`
    pub fn combine(&self, alpha: f64, beta: f64, kappa: f64, gamma: f64) -> FockOperator {
        let mut m = &self.number.matrix * Complex64::new(alpha, 0.0);
        m += &self.squeeze.matrix * Complex64::new(beta, 0.0);
        m += &self.drive.matrix * Complex64::new(kappa, 0.0);
        for i in 0..self.n_max {
            m[(i, i)] += gamma;
        }
        FockOperator::from_matrix(m)
    }
}

/// Coefficients `(α, β, κ, γ)` of the decoupled mode Hamiltonian in the
/// expanded form `ω_i c†c ∓ (ω0 g_i²/4)(c² + c†²) − ω0 g²/4`, with the
/// counterdiabatic term `i (ϖ̇/4ϖ)(c² − c†²)` scaled by `cd_gain` when the
/// mode is driven.
pub fn dimer_coefficients(
    p: &DimerParams,
    t: f64,
    mode: ModeIndex,
    control: ControlMode,
    cd_gain: f64,
) -> Result<(f64, f64, f64, f64)> {
    let w0 = p.omega0();
    let modes = p.modes(t)?;
    let g = p.g().eval(t)?.value;
    let (omega, g_sq) = match mode {
        ModeIndex::First => (modes.omega1, modes.g1_sq),
        ModeIndex::Second => (modes.omega2, modes.g2_sq),
    };
    let varpi = p.squeezed_frequency(t, mode)?;
    let kappa = if control.drives(mode) {
        cd_gain * varpi.omega_dot / (4.0 * varpi.omega)
    } else {
        0.0
    };
    Ok((omega, -0.25 * w0 * g_sq, kappa, -0.25 * w0 * g * g))
}

pub fn dimer_hamiltonian(
    p: &DimerParams,
    t: f64,
    mode: ModeIndex,
    control: ControlMode,
    n_max: usize,
) -> Result<FockOperator> {
    if n_max < 8 {
        return Err(Error::InvalidArgument(format!(
            "oracle Hamiltonians need n_max >= 8, got {n_max}"
        )));
    }
    let (alpha, beta, kappa, gamma) = dimer_coefficients(p, t, mode, control, 1.0)?;
    Ok(QuadraticBasis::new(n_max)?.combine(alpha, beta, kappa, gamma))
}

/// `S[r] = exp[(r/2)(c†² − c²)]` by dense exponentiation.
pub fn squeeze_matrix(r: f64, n_max: usize) -> Result<FockOperator> {
    let (a, a_dag) = build_mode_ops(n_max)?;
    let generator = &(&(&a_dag * &a_dag) - &(&a * &a)) * (0.5 * r);
    let s = FockOperator::from_matrix(expm(&generator.matrix));
    let defect = (&s.adjoint() * &s).interior_diff(&FockOperator::identity(n_max));
    if defect > 1e-10 {
        return Err(Error::Accuracy {
            drift: defect,
            tolerance: 1e-10,
            t: r,
        });
    }
    Ok(s)
}

/// Largest interior entry of `(b² − b†²) − (a² − a†²)` for the squeezed
/// mode `b = ½[(a† + a) a_t^{1/4} − (a† − a) a_t^{−1/4}]`, `a_t = 1 − g²`.
pub fn appendix_identity_check(g_sq: f64, n_max: usize) -> Result<f64> {
    if !(0.0..1.0).contains(&g_sq) {
        return Err(Error::InvertedOscillator { g_sq });
    }
    if n_max < 8 {
        return Err(Error::InvalidArgument(format!(
            "identity check needs n_max >= 8, got {n_max}"
        )));
    }
    let (a, a_dag) = build_mode_ops(n_max)?;
    let s = (1.0 - g_sq).powf(0.25);
    let x = &a_dag + &a;
    let y = &a_dag - &a;
    let b = &(&(&x * s) - &(&y * (1.0 / s))) * 0.5;
    let b_dag = b.adjoint();
    let lhs = &(&b * &b) - &(&b_dag * &b_dag);
    let rhs = &(&a * &a) - &(&a_dag * &a_dag);
    Ok(lhs.block_diff(&rhs, n_max - BOUNDARY))
}
