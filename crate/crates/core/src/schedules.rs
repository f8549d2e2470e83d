//! Time-dependent control protocols.
//!
//! A [`Schedule`] is a pure function of time returning the protocol value
//! together with its exact time derivative. Ramps are defined on
//! `[0, tau_q]`; constants on the whole real line.

use std::fmt;
use std::str::FromStr;

use crate::error::{Error, Result};

/// Relative slack on the ramp domain that absorbs rounding in `k * dt`.
const DOMAIN_SLACK: f64 = 1e-12;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum ScheduleKind {
    Constant,
    LinearRamp,
    /// Cubic `3s^2 - 2s^3` in `s = t / tau_q`; zero slope at both ends.
    SmoothRamp,
}

impl ScheduleKind {
    pub fn as_str(self) -> &'static str {
        match self {
            ScheduleKind::Constant => "constant",
            ScheduleKind::LinearRamp => "linear-ramp",
            ScheduleKind::SmoothRamp => "smooth-ramp",
        }
    }
}

impl fmt::Display for ScheduleKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl FromStr for ScheduleKind {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "constant" => Ok(ScheduleKind::Constant),
            "linear-ramp" => Ok(ScheduleKind::LinearRamp),
            "smooth-ramp" => Ok(ScheduleKind::SmoothRamp),
            other => Err(Error::InvalidArgument(format!(
                "unknown schedule kind `{other}` (expected constant, linear-ramp or smooth-ramp)"
            ))),
        }
    }
}

/// Value of a schedule and its time derivative at one instant.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Sample {
    pub value: f64,
    pub derivative: f64,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Schedule {
    kind: ScheduleKind,
    value0: f64,
    value_f: f64,
    tau_q: Option<f64>,
}

impl Schedule {
    pub fn constant(value: f64) -> Self {
        Schedule {
            kind: ScheduleKind::Constant,
            value0: value,
            value_f: value,
            tau_q: None,
        }
    }

    pub fn linear_ramp(value0: f64, value_f: f64, tau_q: f64) -> Result<Self> {
        Self::ramp(ScheduleKind::LinearRamp, value0, value_f, tau_q)
    }

    pub fn smooth_ramp(value0: f64, value_f: f64, tau_q: f64) -> Result<Self> {
        Self::ramp(ScheduleKind::SmoothRamp, value0, value_f, tau_q)
    }

    /// Builds a schedule of any kind. `tau_q` is required for ramps and
    /// optional for constants, where it is recorded but has no effect on the
    /// value.
    pub fn new(kind: ScheduleKind, value0: f64, value_f: f64, tau_q: Option<f64>) -> Result<Self> {
        match kind {
            ScheduleKind::Constant => {
                if !value0.is_finite() {
                    return Err(Error::InvalidArgument(format!(
                        "constant schedule value must be finite, got {value0}"
                    )));
                }
                if let Some(tau) = tau_q {
                    check_tau(tau)?;
                }
                Ok(Schedule {
                    kind,
                    value0,
                    value_f: value0,
                    tau_q,
                })
            }
            _ => {
                let tau = tau_q.ok_or_else(|| {
                    Error::InvalidArgument(format!("{kind} schedule needs tau_q"))
                })?;
                Self::ramp(kind, value0, value_f, tau)
            }
        }
    }

    fn ramp(kind: ScheduleKind, value0: f64, value_f: f64, tau_q: f64) -> Result<Self> {
        check_tau(tau_q)?;
        if !value0.is_finite() || !value_f.is_finite() {
            return Err(Error::InvalidArgument(format!(
                "ramp end points must be finite, got {value0} -> {value_f}"
            )));
        }
        Ok(Schedule {
            kind,
            value0,
            value_f,
            tau_q: Some(tau_q),
        })
    }

    pub fn kind(&self) -> ScheduleKind {
        self.kind
    }

    pub fn value0(&self) -> f64 {
        self.value0
    }

    pub fn value_f(&self) -> f64 {
        self.value_f
    }

    pub fn tau_q(&self) -> Option<f64> {
        self.tau_q
    }

    /// Whether the schedule can be evaluated at `t`.
    pub fn contains(&self, t: f64) -> bool {
        self.clamp(t).is_ok()
    }

    fn clamp(&self, t: f64) -> Result<f64> {
        if !t.is_finite() {
            return Err(Error::Domain {
                t,
                lo: 0.0,
                hi: self.tau_q.unwrap_or(f64::INFINITY),
            });
        }
        match (self.kind, self.tau_q) {
            (ScheduleKind::Constant, _) => Ok(t),
            (_, Some(tau)) => {
                let slack = DOMAIN_SLACK * tau;
                if t < -slack || t > tau + slack {
                    Err(Error::Domain {
                        t,
                        lo: 0.0,
                        hi: tau,
                    })
                } else {
                    Ok(t.clamp(0.0, tau))
                }
            }
            (_, None) => unreachable!("ramps always carry tau_q"),
        }
    }

    pub fn eval(&self, t: f64) -> Result<Sample> {
        let t = self.clamp(t)?;
        let span = self.value_f - self.value0;
        let sample = match self.kind {
            ScheduleKind::Constant => Sample {
                value: self.value0,
                derivative: 0.0,
            },
            ScheduleKind::LinearRamp => {
                let tau = self.tau_q.unwrap_or(1.0);
                Sample {
                    value: self.value0 + span * (t / tau),
                    derivative: span / tau,
                }
            }
            ScheduleKind::SmoothRamp => {
                let tau = self.tau_q.unwrap_or(1.0);
                let s = t / tau;
                Sample {
                    value: self.value0 + span * s * s * (3.0 - 2.0 * s),
                    derivative: span * 6.0 * s * (1.0 - s) / tau,
                }
            }
        };
        Ok(sample)
    }
}

fn check_tau(tau: f64) -> Result<()> {
    if tau.is_finite() && tau > 0.0 {
        Ok(())
    } else {
        Err(Error::InvalidArgument(format!(
            "tau_q must be positive and finite, got {tau}"
        )))
    }
}

/// Longest ramp duration among `schedules`, if any of them is a ramp.
pub fn common_horizon<'a>(schedules: impl IntoIterator<Item = &'a Schedule>) -> Option<f64> {
    schedules
        .into_iter()
        .filter(|s| s.kind() != ScheduleKind::Constant)
        .filter_map(|s| s.tau_q())
        .fold(None, |acc: Option<f64>, tau| {
            Some(acc.map_or(tau, |a| a.max(tau)))
        })
}
