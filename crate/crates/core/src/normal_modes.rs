//! Canonical transformations that decouple the two-mode Hamiltonians.
//!
//! Quadratures are ordered `(q1, p1, q2, p2)`. A quadratic Hamiltonian is
//! represented by its symmetric matrix `K` with `H = ½ rᵀ K r`. Every
//! [`SymplecticMap`] returned here maps normal-mode quadratures to lab
//! quadratures, `r = S R`, so `Sᵀ K S` is the Hamiltonian matrix in normal
//! coordinates.

use crate::error::{Error, Result};
use crate::schedules::{common_horizon, Schedule};

pub type Mat4 = [[f64; 4]; 4];

/// Number of sample points used to validate parameter invariants.
pub const VALIDATION_GRID: usize = 1000;

/// Canonical symplectic form for `(q1, p1, q2, p2)`.
pub const SYMPLECTIC_FORM: Mat4 = [
    [0.0, 1.0, 0.0, 0.0],
    [-1.0, 0.0, 0.0, 0.0],
    [0.0, 0.0, 0.0, 1.0],
    [0.0, 0.0, -1.0, 0.0],
];

pub fn mat_mul(a: &Mat4, b: &Mat4) -> Mat4 {
    let mut out = [[0.0; 4]; 4];
    for (i, row) in out.iter_mut().enumerate() {
        for (j, entry) in row.iter_mut().enumerate() {
            *entry = (0..4).map(|k| a[i][k] * b[k][j]).sum();
        }
    }
    out
}

pub fn transpose(a: &Mat4) -> Mat4 {
    let mut out = [[0.0; 4]; 4];
    for (i, row) in a.iter().enumerate() {
        for (j, &v) in row.iter().enumerate() {
            out[j][i] = v;
        }
    }
    out
}

fn max_abs_diff(a: &Mat4, b: &Mat4) -> f64 {
    a.iter()
        .flatten()
        .zip(b.iter().flatten())
        .map(|(x, y)| (x - y).abs())
        .fold(0.0, f64::max)
}

/// Linear canonical transformation `r_lab = S · r_normal`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SymplecticMap {
    matrix: Mat4,
}

impl SymplecticMap {
    pub fn from_matrix(matrix: Mat4) -> Self {
        SymplecticMap { matrix }
    }

    pub fn matrix(&self) -> &Mat4 {
        &self.matrix
    }

    pub fn apply(&self, r: [f64; 4]) -> [f64; 4] {
        let mut out = [0.0; 4];
        for (i, o) in out.iter_mut().enumerate() {
            *o = (0..4).map(|k| self.matrix[i][k] * r[k]).sum();
        }
        out
    }

    /// `max |S Ω Sᵀ − Ω|`, zero for an exactly canonical map.
    pub fn symplectic_defect(&self) -> f64 {
        let lhs = mat_mul(
            &mat_mul(&self.matrix, &SYMPLECTIC_FORM),
            &transpose(&self.matrix),
        );
        max_abs_diff(&lhs, &SYMPLECTIC_FORM)
    }

    /// Inverse of a symplectic matrix, `−Ω Sᵀ Ω`. Only meaningful when the
    /// map is symplectic.
    pub fn inverse(&self) -> SymplecticMap {
        let mut m = mat_mul(
            &mat_mul(&SYMPLECTIC_FORM, &transpose(&self.matrix)),
            &SYMPLECTIC_FORM,
        );
        m.iter_mut().flatten().for_each(|x| *x = -*x);
        SymplecticMap { matrix: m }
    }

    /// Whether the map never mixes mode 1 with mode 2.
    pub fn is_mode_local(&self, tol: f64) -> bool {
        (0..4).all(|i| (0..4).all(|j| (i / 2 == j / 2) || self.matrix[i][j].abs() <= tol))
    }
}

/// Symmetric matrix `K` of a quadratic Hamiltonian `½ rᵀ K r`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct QuadraticForm {
    matrix: Mat4,
}

impl QuadraticForm {
    pub fn from_matrix(matrix: Mat4) -> Self {
        QuadraticForm { matrix }
    }

    /// Two uncoupled oscillators `P²/2m + m ω² Q²/2`.
    pub fn uncoupled(m: f64, omega_a: f64, omega_b: f64) -> Self {
        let mut k = [[0.0; 4]; 4];
        k[0][0] = m * omega_a * omega_a;
        k[1][1] = 1.0 / m;
        k[2][2] = m * omega_b * omega_b;
        k[3][3] = 1.0 / m;
        QuadraticForm { matrix: k }
    }

    /// Counterdiabatic terms `Σ c_i (Q_i P_i + P_i Q_i)` of two uncoupled modes.
    pub fn squeezing_generators(c_a: f64, c_b: f64) -> Self {
        let mut k = [[0.0; 4]; 4];
        k[0][1] = 2.0 * c_a;
        k[1][0] = 2.0 * c_a;
        k[2][3] = 2.0 * c_b;
        k[3][2] = 2.0 * c_b;
        QuadraticForm { matrix: k }
    }

    pub fn matrix(&self) -> &Mat4 {
        &self.matrix
    }

    /// Form in the coordinates `R` of `r = S R`: `Sᵀ K S`.
    pub fn pull_back(&self, map: &SymplecticMap) -> QuadraticForm {
        let s = map.matrix();
        QuadraticForm {
            matrix: mat_mul(&mat_mul(&transpose(s), &self.matrix), s),
        }
    }

    /// Form in lab coordinates of a form given in the normal coordinates of
    /// `map`: `S⁻ᵀ K S⁻¹`.
    pub fn push_forward(&self, map: &SymplecticMap) -> QuadraticForm {
        self.pull_back(&map.inverse())
    }

    /// Largest entry coupling mode 1 to mode 2.
    pub fn cross_block_max(&self) -> f64 {
        let mut worst = 0.0f64;
        for i in 0..2 {
            for j in 2..4 {
                worst = worst
                    .max(self.matrix[i][j].abs())
                    .max(self.matrix[j][i].abs());
            }
        }
        worst
    }

    pub fn max_abs_diff(&self, other: &QuadraticForm) -> f64 {
        max_abs_diff(&self.matrix, &other.matrix)
    }
}

/// A normal-mode frequency and its time derivative.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ModeFrequency {
    pub omega: f64,
    pub omega_dot: f64,
}

fn grid(horizon: Option<f64>) -> Vec<f64> {
    match horizon {
        Some(tau) => (0..VALIDATION_GRID)
            .map(|k| tau * k as f64 / (VALIDATION_GRID - 1) as f64)
            .collect(),
        None => vec![0.0],
    }
}

fn check_positive_mass(m: f64) -> Result<()> {
    if m.is_finite() && m > 0.0 {
        Ok(())
    } else {
        Err(Error::InvalidArgument(format!(
            "mass must be positive, got {m}"
        )))
    }
}

// ---------------------------------------------------------------------------
// Position-position coupling

/// `Σ (p_i²/2m + m ω² q_i²/2) + γ q1 q2`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PpParams {
    m: f64,
    omega: Schedule,
    gamma: Schedule,
}

impl PpParams {
    /// Validates `ω² ± γ/m > 0` over the protocol.
    pub fn new(m: f64, omega: Schedule, gamma: Schedule) -> Result<Self> {
        check_positive_mass(m)?;
        let p = PpParams { m, omega, gamma };
        for t in grid(p.horizon()) {
            p.normal_frequencies(t).map_err(|e| match e {
                Error::ImaginaryFrequency { what, value, t } => Error::Constraint {
                    inequality: format!("{what} > 0"),
                    t,
                    value,
                },
                other => other,
            })?;
        }
        Ok(p)
    }

    pub fn m(&self) -> f64 {
        self.m
    }

    pub fn omega(&self) -> &Schedule {
        &self.omega
    }

    pub fn gamma(&self) -> &Schedule {
        &self.gamma
    }

    pub fn horizon(&self) -> Option<f64> {
        common_horizon([&self.omega, &self.gamma])
    }

    /// `ω1,2 = sqrt(ω² ± γ/m)` with their chain-rule derivatives.
    pub fn normal_frequencies(&self, t: f64) -> Result<[ModeFrequency; 2]> {
        let w = self.omega.eval(t)?;
        let g = self.gamma.eval(t)?;
        let base = w.value * w.value;
        let base_dot = w.value * w.derivative;
        let shift = g.value / self.m;
        let shift_dot = g.derivative / (2.0 * self.m);
        let mode = |sq: f64, rate: f64, what: &'static str| {
            if sq > 0.0 {
                let omega = sq.sqrt();
                Ok(ModeFrequency {
                    omega,
                    omega_dot: rate / omega,
                })
            } else {
                Err(Error::ImaginaryFrequency { what, value: sq, t })
            }
        };
        Ok([
            mode(base + shift, base_dot + shift_dot, "omega^2 + gamma/m")?,
            mode(base - shift, base_dot - shift_dot, "omega^2 - gamma/m")?,
        ])
    }

    pub fn quadratic_form(&self, t: f64) -> Result<QuadraticForm> {
        let w = self.omega.eval(t)?.value;
        let g = self.gamma.eval(t)?.value;
        let mut k = [[0.0; 4]; 4];
        k[0][0] = self.m * w * w;
        k[2][2] = self.m * w * w;
        k[1][1] = 1.0 / self.m;
        k[3][3] = 1.0 / self.m;
        k[0][2] = g;
        k[2][0] = g;
        Ok(QuadraticForm::from_matrix(k))
    }
}

/// `q1 = (Q1+Q2)/√2`, `q2 = (Q1−Q2)/√2`, and the same for momenta.
pub fn pp_transform() -> SymplecticMap {
    let h = std::f64::consts::FRAC_1_SQRT_2;
    SymplecticMap::from_matrix([
        [h, 0.0, h, 0.0],
        [0.0, h, 0.0, h],
        [h, 0.0, -h, 0.0],
        [0.0, h, 0.0, -h],
    ])
}

// ---------------------------------------------------------------------------
// Magnetic-field coupling

/// `Σ (p_i²/2m + m Ω² q_i²/2) + ω_B (q2 p1 − q1 p2)` with `Ω² = ω0² + ω_B²`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct MfParams {
    m: f64,
    omega0: Schedule,
    omega_b: Schedule,
}

/// Derived magnetic-field quantities at one instant.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct MfFrequencies {
    /// `ω+ = Ω − ω_B`
    pub plus: ModeFrequency,
    /// `ω− = Ω + ω_B`
    pub minus: ModeFrequency,
    /// `Ω = sqrt(ω0² + ω_B²)`
    pub big_omega: ModeFrequency,
    pub omega0: ModeFrequency,
    pub omega_b: ModeFrequency,
}

impl MfParams {
    pub fn new(m: f64, omega0: Schedule, omega_b: Schedule) -> Result<Self> {
        check_positive_mass(m)?;
        let p = MfParams { m, omega0, omega_b };
        for t in grid(p.horizon()) {
            p.frequencies(t).map_err(|e| match e {
                Error::ImaginaryFrequency { what, value, t } => Error::Constraint {
                    inequality: format!("{what} > 0"),
                    t,
                    value,
                },
                other => other,
            })?;
        }
        Ok(p)
    }

    pub fn m(&self) -> f64 {
        self.m
    }

    pub fn omega0(&self) -> &Schedule {
        &self.omega0
    }

    pub fn omega_b(&self) -> &Schedule {
        &self.omega_b
    }

    pub fn horizon(&self) -> Option<f64> {
        common_horizon([&self.omega0, &self.omega_b])
    }

    pub fn frequencies(&self, t: f64) -> Result<MfFrequencies> {
        let w0 = self.omega0.eval(t)?;
        let wb = self.omega_b.eval(t)?;
        let big = w0.value.hypot(wb.value);
        let big_dot = if big > 0.0 {
            (w0.value * w0.derivative + wb.value * wb.derivative) / big
        } else {
            0.0
        };
        let plus = big - wb.value;
        let minus = big + wb.value;
        if plus <= 0.0 {
            return Err(Error::ImaginaryFrequency {
                what: "Omega - omega_B",
                value: plus,
                t,
            });
        }
        if minus <= 0.0 {
            return Err(Error::ImaginaryFrequency {
                what: "Omega + omega_B",
                value: minus,
                t,
            });
        }
        Ok(MfFrequencies {
            plus: ModeFrequency {
                omega: plus,
                omega_dot: big_dot - wb.derivative,
            },
            minus: ModeFrequency {
                omega: minus,
                omega_dot: big_dot + wb.derivative,
            },
            big_omega: ModeFrequency {
                omega: big,
                omega_dot: big_dot,
            },
            omega0: ModeFrequency {
                omega: w0.value,
                omega_dot: w0.derivative,
            },
            omega_b: ModeFrequency {
                omega: wb.value,
                omega_dot: wb.derivative,
            },
        })
    }

    /// `(ω+, ω−)` with derivatives.
    pub fn normal_frequencies(&self, t: f64) -> Result<[ModeFrequency; 2]> {
        let f = self.frequencies(t)?;
        Ok([f.plus, f.minus])
    }

    pub fn quadratic_form(&self, t: f64) -> Result<QuadraticForm> {
        let f = self.frequencies(t)?;
        let big = f.big_omega.omega;
        let wb = f.omega_b.omega;
        let mut k = [[0.0; 4]; 4];
        k[0][0] = self.m * big * big;
        k[2][2] = self.m * big * big;
        k[1][1] = 1.0 / self.m;
        k[3][3] = 1.0 / self.m;
        // ω_B q2 p1
        k[2][1] = wb;
        k[1][2] = wb;
        // −ω_B q1 p2
        k[0][3] = -wb;
        k[3][0] = -wb;
        Ok(QuadraticForm::from_matrix(k))
    }

    /// `α = 1/sqrt(2m)` and `β = sqrt(m/2) Ω`.
    pub fn alpha_beta(&self, t: f64) -> Result<(f64, f64)> {
        let big = self.frequencies(t)?.big_omega.omega;
        Ok(((2.0 * self.m).sqrt().recip(), (self.m / 2.0).sqrt() * big))
    }
}

/// Lab-to-normal rows `(Q+, P+, Q−, P−)`:
///
/// ```text
/// Q+ = δ+ (β q1 + α p2)      P+ = ε+ (α p1 − β q2)
/// Q− = δ− (β q1 − α p2)      P− = ε− (α p1 + β q2)
/// ```
///
/// with `δ± = 1/sqrt(m ω± Ω)` and `ε± = sqrt(m ω± / Ω)`. The α weight on
/// `p1` in `P+` is what makes the rows canonical. The returned map is the
/// inverse (normal to lab), matching the convention of this module.
pub fn mf_transform(p: &MfParams, t: f64) -> Result<SymplecticMap> {
    let f = p.frequencies(t)?;
    let m = p.m();
    let big = f.big_omega.omega;
    let (alpha, beta) = p.alpha_beta(t)?;
    let delta = |w: f64| (m * w * big).sqrt().recip();
    let eps = |w: f64| (m * w / big).sqrt();
    let (dp, dm) = (delta(f.plus.omega), delta(f.minus.omega));
    let (ep, em) = (eps(f.plus.omega), eps(f.minus.omega));
    let lab_to_normal = SymplecticMap::from_matrix([
        [dp * beta, 0.0, 0.0, dp * alpha],
        [0.0, ep * alpha, -ep * beta, 0.0],
        [dm * beta, 0.0, 0.0, -dm * alpha],
        [0.0, em * alpha, em * beta, 0.0],
    ]);
    Ok(lab_to_normal.inverse())
}

// ---------------------------------------------------------------------------
// Rabi-dimer example

/// Two Rabi models projected on their lowest spin states, coupled through
/// the cavity modes: local softening `g(t)` and coupling `J(t)`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct DimerParams {
    omega0: f64,
    g: Schedule,
    j: Schedule,
}

/// Decoupled-mode quantities of the dimer at one instant.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct DimerModes {
    /// `ω0 (1 + (J − g²)/2)`
    pub omega1: f64,
    /// `ω0 (1 − (J + g²)/2)`
    pub omega2: f64,
    /// `g² − J`, negative whenever `g² < J`.
    pub g1_sq: f64,
    /// `g² + J`
    pub g2_sq: f64,
    pub g1_sq_dot: f64,
    pub g2_sq_dot: f64,
    /// `J`, needed for the `∓ω0 J/4` offsets.
    pub j: f64,
}

impl DimerModes {
    pub fn g_sq(&self, mode: ModeIndex) -> (f64, f64) {
        match mode {
            ModeIndex::First => (self.g1_sq, self.g1_sq_dot),
            ModeIndex::Second => (self.g2_sq, self.g2_sq_dot),
        }
    }
}

/// Which decoupled mode (`c` or `d`) an operation refers to.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum ModeIndex {
    First,
    Second,
}

impl ModeIndex {
    pub const BOTH: [ModeIndex; 2] = [ModeIndex::First, ModeIndex::Second];

    /// Sign of the `±ω0 J/4` offset carried by this mode.
    pub fn j_sign(self) -> f64 {
        match self {
            ModeIndex::First => -1.0,
            ModeIndex::Second => 1.0,
        }
    }
}

impl DimerParams {
    /// Validates `ω0 > 0` and `g² ± J < 1` over the protocol.
    pub fn new(omega0: f64, g: Schedule, j: Schedule) -> Result<Self> {
        if !(omega0.is_finite() && omega0 > 0.0) {
            return Err(Error::InvalidArgument(format!(
                "omega0 must be positive, got {omega0}"
            )));
        }
        let p = DimerParams { omega0, g, j };
        for t in grid(p.horizon()) {
            let modes = p.modes(t)?;
            if modes.g1_sq >= 1.0 {
                return Err(Error::Constraint {
                    inequality: "g^2 - J < 1".into(),
                    t,
                    value: modes.g1_sq,
                });
            }
            if modes.g2_sq >= 1.0 {
                return Err(Error::Constraint {
                    inequality: "g^2 + J < 1".into(),
                    t,
                    value: modes.g2_sq,
                });
            }
        }
        Ok(p)
    }

    pub fn omega0(&self) -> f64 {
        self.omega0
    }

    pub fn g(&self) -> &Schedule {
        &self.g
    }

    pub fn j(&self) -> &Schedule {
        &self.j
    }

    pub fn horizon(&self) -> Option<f64> {
        common_horizon([&self.g, &self.j])
    }

    pub fn modes(&self, t: f64) -> Result<DimerModes> {
        let g = self.g.eval(t)?;
        let j = self.j.eval(t)?;
        let g_sq = g.value * g.value;
        let g_sq_dot = 2.0 * g.value * g.derivative;
        Ok(DimerModes {
            omega1: self.omega0 * (1.0 + 0.5 * (j.value - g_sq)),
            omega2: self.omega0 * (1.0 - 0.5 * (j.value + g_sq)),
            g1_sq: g_sq - j.value,
            g2_sq: g_sq + j.value,
            g1_sq_dot: g_sq_dot - j.derivative,
            g2_sq_dot: g_sq_dot + j.derivative,
            j: j.value,
        })
    }

    /// Squeezed-mode frequency `ϖ = ω0 sqrt(1 − g_i²)` and its derivative
    /// `−ω0² (d g_i²/dt) / (2ϖ)`.
    pub fn squeezed_frequency(&self, t: f64, mode: ModeIndex) -> Result<ModeFrequency> {
        let (g_sq, g_sq_dot) = self.modes(t)?.g_sq(mode);
        let sq = 1.0 - g_sq;
        if sq <= 0.0 {
            return Err(Error::ImaginaryFrequency {
                what: "1 - g_i^2",
                value: sq,
                t,
            });
        }
        let varpi = self.omega0 * sq.sqrt();
        Ok(ModeFrequency {
            omega: varpi,
            omega_dot: -self.omega0 * self.omega0 * g_sq_dot / (2.0 * varpi),
        })
    }
}

/// Result of removing the `(c² + c†²)` term by a single-mode squeeze.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Squeezing {
    /// Squeeze parameter `r = −¼ ln(1 − g²)` of `exp[(r/2)(c†² − c²)]`.
    pub r: f64,
    /// Diagonalised frequency `ω0 sqrt(1 − g²)`.
    pub varpi: f64,
    /// Ground energy `ω0 (sqrt(1 − g²) − 1)/2 + j_term`.
    pub ground_energy: f64,
}

/// Diagonalises `ω0 c†c − (ω0 g²/4)(c† + c)² + j_term`.
///
/// The caller supplies `j_term = ∓ω0 J/4` for the first and second mode.
pub fn diagonalize_squeezed(omega0: f64, g_sq: f64, j_term: f64) -> Result<Squeezing> {
    if !(g_sq < 1.0) {
        return Err(Error::InvertedOscillator { g_sq });
    }
    let root = (1.0 - g_sq).sqrt();
    Ok(Squeezing {
        r: -0.25 * (-g_sq).ln_1p(),
        varpi: omega0 * root,
        ground_energy: 0.5 * omega0 * (root - 1.0) + j_term,
    })
}
