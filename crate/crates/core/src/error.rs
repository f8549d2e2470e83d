use std::fmt;

/// Errors raised by the model, control and dynamics layers.
#[derive(Debug, Clone, PartialEq)]
pub enum Error {
    /// A schedule was evaluated outside `[0, tau_q]`.
    Domain { t: f64, lo: f64, hi: f64 },
    /// A constructor or operation received an argument outside its domain.
    InvalidArgument(String),
    /// A squared frequency is not positive, so the mode is not a bound oscillator.
    ImaginaryFrequency {
        what: &'static str,
        value: f64,
        t: f64,
    },
    /// A parameter invariant does not hold at time `t`.
    Constraint {
        inequality: String,
        t: f64,
        value: f64,
    },
    /// The closed-form adiabaticity parameter has no real value.
    AdiabaticityUndefined { omega: f64, omega_dot: f64 },
    /// A closed-form coefficient has a vanishing denominator.
    Singular(&'static str),
    /// The squeezing diagonalisation needs `g_sq < 1`.
    InvertedOscillator { g_sq: f64 },
    /// The Bogoliubov constraint drifted beyond tolerance during integration.
    Accuracy { drift: f64, tolerance: f64, t: f64 },
}

pub type Result<T> = std::result::Result<T, Error>;

impl fmt::Display for Error {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Error::Domain { t, lo, hi } => {
                write!(f, "time {t} is outside the schedule domain [{lo}, {hi}]")
            }
            Error::InvalidArgument(msg) => write!(f, "invalid argument: {msg}"),
            Error::ImaginaryFrequency { what, value, t } => write!(
                f,
                "imaginary frequency: {what} = {value:e} is not positive at t = {t}"
            ),
            Error::Constraint {
                inequality,
                t,
                value,
            } => write!(
                f,
                "parameter constraint `{inequality}` violated at t = {t} (value {value:e})"
            ),
            Error::AdiabaticityUndefined { omega, omega_dot } => write!(
                f,
                "adiabaticity parameter undefined: omega_dot^2 >= 4 omega^4 \
                 (omega = {omega}, omega_dot = {omega_dot})"
            ),
            Error::Singular(what) => write!(f, "singular coefficient: {what}"),
            Error::InvertedOscillator { g_sq } => write!(
                f,
                "squeezing diagonalisation failed: g^2 = {g_sq} >= 1 (inverted oscillator)"
            ),
            Error::Accuracy {
                drift,
                tolerance,
                t,
            } => write!(
                f,
                "Bogoliubov constraint drift {drift:e} exceeds {tolerance:e} at t = {t}; \
                 use a smaller dt"
            ),
        }
    }
}

impl std::error::Error for Error {}
