//! Scenario files.
//!
//! The format is line oriented:
//!
//! ```text
//! # comment
//! [model]
//! family = dimer
//! omega0 = 1
//!
//! [schedule.g]
//! kind = linear-ramp
//! value0 = 0
//! value_f = 0.2
//! tau_q = 100
//!
//! [schedule.J]
//! kind = constant
//! value0 = 0.01
//!
//! [run]
//! stride = 1000
//! modes = none, mode1_only, both
//! output = fig1.csv
//! ```
//!
//! Blank lines and lines starting with `#` or `;` are ignored. Every key is
//! `name = value` inside a section; keys and sections may not repeat.
//!
//! | section | keys |
//! |---|---|
//! | `model` | `family` (`dimer`, `pp`, `mf`); `omega0` for dimer; `m` for pp and mf (default 1) |
//! | `schedule.<name>` | `kind`, `value0`, `value_f` (ramps), `tau_q` (ramps) |
//! | `run` | `dt`, `stride`, `modes`, `output`, `initial`, `tau_q` |
//!
//! Schedules per family: dimer `g`, `J`; pp `omega`, `gamma`; mf `omega0`,
//! `omega_b`. All ramps must share one `tau_q`, which fixes the protocol
//! length; `run.tau_q` is needed only when every schedule is constant.
//! `dt` defaults to `tau_q / 1e5` and may not exceed `tau_q / 1000`.

use std::collections::BTreeMap;
use std::fmt::{self, Write as _};
use std::path::PathBuf;

use sta_core::{
    ControlMode, DimerParams, InitialState, MfParams, PpParams, Schedule, ScheduleKind,
};

/// Steps per protocol length used when `run.dt` is absent.
pub const DEFAULT_STEPS: f64 = 1e5;
/// Coarsest allowed step, as a fraction of the protocol length.
pub const MIN_STEPS: f64 = 1e3;

#[derive(Debug)]
pub enum ConfigError {
    /// The text is not a sequence of sections and `key = value` lines.
    Syntax { line: usize, message: String },
    /// A field is missing, unknown or unparsable.
    Field { path: String, message: String },
    /// The parameters violate a physical or numerical constraint.
    Invalid {
        path: String,
        source: sta_core::Error,
    },
}

impl fmt::Display for ConfigError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            ConfigError::Syntax { line, message } => write!(f, "line {line}: {message}"),
            ConfigError::Field { path, message } => write!(f, "{path}: {message}"),
            ConfigError::Invalid { path, source } => write!(f, "{path}: {source}"),
        }
    }
}

impl std::error::Error for ConfigError {
    fn source(&self) -> Option<&(dyn std::error::Error + 'static)> {
        match self {
            ConfigError::Invalid { source, .. } => Some(source),
            _ => None,
        }
    }
}

fn field(path: impl Into<String>, message: impl Into<String>) -> ConfigError {
    ConfigError::Field {
        path: path.into(),
        message: message.into(),
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Family {
    Dimer,
    Pp,
    Mf,
}

impl Family {
    pub fn as_str(self) -> &'static str {
        match self {
            Family::Dimer => "dimer",
            Family::Pp => "pp",
            Family::Mf => "mf",
        }
    }

    pub fn schedule_names(self) -> [&'static str; 2] {
        match self {
            Family::Dimer => ["g", "J"],
            Family::Pp => ["omega", "gamma"],
            Family::Mf => ["omega0", "omega_b"],
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub enum Model {
    Dimer(DimerParams),
    Pp(PpParams),
    Mf(MfParams),
}

impl Model {
    pub fn family(&self) -> Family {
        match self {
            Model::Dimer(_) => Family::Dimer,
            Model::Pp(_) => Family::Pp,
            Model::Mf(_) => Family::Mf,
        }
    }

    pub fn schedules(&self) -> [&Schedule; 2] {
        match self {
            Model::Dimer(p) => [p.g(), p.j()],
            Model::Pp(p) => [p.omega(), p.gamma()],
            Model::Mf(p) => [p.omega0(), p.omega_b()],
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct ScenarioConfig {
    pub model: Model,
    pub tau_q: f64,
    pub dt: f64,
    pub stride: usize,
    pub modes: Vec<ControlMode>,
    pub output: PathBuf,
    pub initial: InitialState,
}

type Section = BTreeMap<String, (usize, String)>;

fn split_sections(text: &str) -> Result<BTreeMap<String, Section>, ConfigError> {
    let mut sections: BTreeMap<String, Section> = BTreeMap::new();
    let mut current: Option<String> = None;
    for (idx, raw) in text.lines().enumerate() {
        let line_no = idx + 1;
        let line = raw.trim();
        if line.is_empty() || line.starts_with('#') || line.starts_with(';') {
            continue;
        }
        if let Some(rest) = line.strip_prefix('[') {
            let name = rest.strip_suffix(']').ok_or_else(|| ConfigError::Syntax {
                line: line_no,
                message: format!("unterminated section header `{line}`"),
            })?;
            let name = name.trim();
            if name.is_empty() {
                return Err(ConfigError::Syntax {
                    line: line_no,
                    message: "empty section name".into(),
                });
            }
            if sections.contains_key(name) {
                return Err(ConfigError::Syntax {
                    line: line_no,
                    message: format!("section [{name}] appears twice"),
                });
            }
            sections.insert(name.to_string(), Section::new());
            current = Some(name.to_string());
            continue;
        }
        let (key, value) = line.split_once('=').ok_or_else(|| ConfigError::Syntax {
            line: line_no,
            message: format!("expected `key = value`, got `{line}`"),
        })?;
        let key = key.trim();
        let section = current.as_ref().ok_or_else(|| ConfigError::Syntax {
            line: line_no,
            message: format!("key `{key}` appears before any section header"),
        })?;
        if key.is_empty() {
            return Err(ConfigError::Syntax {
                line: line_no,
                message: "empty key".into(),
            });
        }
        let entries = sections.get_mut(section).expect("section was inserted");
        if entries
            .insert(key.to_string(), (line_no, value.trim().to_string()))
            .is_some()
        {
            return Err(field(format!("{section}.{key}"), "key appears twice"));
        }
    }
    Ok(sections)
}

struct Reader<'a> {
    name: &'a str,
    entries: Section,
}

impl<'a> Reader<'a> {
    fn new(name: &'a str, entries: Section) -> Self {
        Reader { name, entries }
    }

    fn path(&self, key: &str) -> String {
        format!("{}.{key}", self.name)
    }

    fn take(&mut self, key: &str) -> Option<String> {
        self.entries.remove(key).map(|(_, v)| v)
    }

    fn require(&mut self, key: &str) -> Result<String, ConfigError> {
        self.take(key)
            .ok_or_else(|| field(self.path(key), "missing"))
    }

    fn number(&mut self, key: &str) -> Result<Option<f64>, ConfigError> {
        match self.take(key) {
            None => Ok(None),
            Some(v) => v
                .parse::<f64>()
                .ok()
                .filter(|x| x.is_finite())
                .map(Some)
                .ok_or_else(|| {
                    field(
                        self.path(key),
                        format!("expected a finite number, got `{v}`"),
                    )
                }),
        }
    }

    fn require_number(&mut self, key: &str) -> Result<f64, ConfigError> {
        self.number(key)?
            .ok_or_else(|| field(self.path(key), "missing"))
    }

    fn finish(self) -> Result<(), ConfigError> {
        match self.entries.keys().next() {
            Some(key) => Err(field(self.path(key), "unknown key")),
            None => Ok(()),
        }
    }
}

fn parse_schedule(name: &str, entries: Section) -> Result<Schedule, ConfigError> {
    let path = format!("schedule.{name}");
    let mut r = Reader::new(&path, entries);
    let kind_text = r.require("kind")?;
    let kind: ScheduleKind = kind_text.parse().map_err(|_| {
        field(
            r.path("kind"),
            format!("unknown schedule kind `{kind_text}`"),
        )
    })?;
    let value0 = r.require_number("value0")?;
    let value_f = r.number("value_f")?;
    let tau_q = r.number("tau_q")?;
    let value_f = match (kind, value_f) {
        (ScheduleKind::Constant, Some(v)) if v != value0 => {
            return Err(field(
                r.path("value_f"),
                "a constant schedule cannot change value",
            ))
        }
        (ScheduleKind::Constant, _) => value0,
        (_, Some(v)) => v,
        (_, None) => return Err(field(r.path("value_f"), "missing")),
    };
    if kind != ScheduleKind::Constant && tau_q.is_none() {
        return Err(field(r.path("tau_q"), "missing"));
    }
    r.finish()?;
    Schedule::new(kind, value0, value_f, tau_q).map_err(|source| ConfigError::Invalid {
        path: path.clone(),
        source,
    })
}

/// Parses and validates a scenario file.
pub fn parse_config(text: &str) -> Result<ScenarioConfig, ConfigError> {
    let mut sections = split_sections(text)?;

    let mut model = Reader::new(
        "model",
        sections
            .remove("model")
            .ok_or_else(|| field("model", "missing section"))?,
    );
    let family_text = model.require("family")?;
    let family = match family_text.as_str() {
        "dimer" => Family::Dimer,
        "pp" => Family::Pp,
        "mf" => Family::Mf,
        other => {
            return Err(field(
                "model.family",
                format!("unknown family `{other}` (expected dimer, pp or mf)"),
            ))
        }
    };

    let [first, second] = family.schedule_names();
    let mut schedule = |name: &str| -> Result<Schedule, ConfigError> {
        let key = format!("schedule.{name}");
        let entries = sections
            .remove(&key)
            .ok_or_else(|| field(key.clone(), "missing section"))?;
        parse_schedule(name, entries)
    };
    let (s1, s2) = (schedule(first)?, schedule(second)?);

    let run_entries = sections.remove("run").unwrap_or_default();
    if let Some(extra) = sections.keys().next() {
        return Err(field(
            extra.clone(),
            format!("unknown section for family {}", family.as_str()),
        ));
    }

    let mut horizon: Option<f64> = None;
    for (name, s) in [(first, &s1), (second, &s2)] {
        if let Some(tau) = s.tau_q() {
            match horizon {
                Some(h) if h != tau => {
                    return Err(field(
                        format!("schedule.{name}.tau_q"),
                        format!("all schedules must share tau_q ({h} vs {tau})"),
                    ))
                }
                _ => horizon = Some(tau),
            }
        }
    }
    let invalid = |source| ConfigError::Invalid {
        path: "model".into(),
        source,
    };
    let built = match family {
        Family::Dimer => {
            let omega0 = model.require_number("omega0")?;
            Model::Dimer(DimerParams::new(omega0, s1, s2).map_err(invalid)?)
        }
        Family::Pp => {
            let m = model.number("m")?.unwrap_or(1.0);
            Model::Pp(PpParams::new(m, s1, s2).map_err(invalid)?)
        }
        Family::Mf => {
            let m = model.number("m")?.unwrap_or(1.0);
            Model::Mf(MfParams::new(m, s1, s2).map_err(invalid)?)
        }
    };
    model.finish()?;

    let mut run = Reader::new("run", run_entries);
    let run_tau = run.number("tau_q")?;
    let tau_q = match (horizon, run_tau) {
        (Some(h), Some(t)) if h != t => {
            return Err(field(
                "run.tau_q",
                format!("disagrees with the schedules' tau_q {h}"),
            ))
        }
        (Some(h), _) => h,
        (None, Some(t)) if t > 0.0 => t,
        (None, Some(t)) => return Err(field("run.tau_q", format!("must be positive, got {t}"))),
        (None, None) => {
            return Err(field(
                "run.tau_q",
                "required when every schedule is constant",
            ))
        }
    };

    let dt = run.number("dt")?.unwrap_or(tau_q / DEFAULT_STEPS);
    if !(dt > 0.0) {
        return Err(field("run.dt", format!("must be positive, got {dt}")));
    }
    if dt > tau_q / MIN_STEPS * (1.0 + 1e-12) {
        return Err(field(
            "run.dt",
            format!("{dt} exceeds tau_q/1000 = {}", tau_q / MIN_STEPS),
        ));
    }

    let stride = match run.take("stride") {
        None => 1,
        Some(v) => v.parse::<usize>().ok().filter(|&s| s > 0).ok_or_else(|| {
            field(
                "run.stride",
                format!("expected a positive integer, got `{v}`"),
            )
        })?,
    };

    let modes = match run.take("modes") {
        None => ControlMode::ALL.to_vec(),
        Some(v) => {
            let mut modes = Vec::new();
            for item in v.split(',').map(str::trim).filter(|s| !s.is_empty()) {
                let mode: ControlMode = item
                    .parse()
                    .map_err(|_| field("run.modes", format!("unknown control mode `{item}`")))?;
                if modes.contains(&mode) {
                    return Err(field("run.modes", format!("`{item}` listed twice")));
                }
                modes.push(mode);
            }
            if modes.is_empty() {
                return Err(field("run.modes", "must name at least one control mode"));
            }
            modes
        }
    };

    let output = match run.take("output") {
        Some(v) if v.is_empty() => return Err(field("run.output", "empty path")),
        Some(v) => PathBuf::from(v),
        None => PathBuf::from(format!("{}.csv", family.as_str())),
    };

    let initial = match run.take("initial") {
        None => InitialState::default(),
        Some(v) => v.parse().map_err(|_| {
            field(
                "run.initial",
                format!("expected ground or vacuum, got `{v}`"),
            )
        })?,
    };
    run.finish()?;

    Ok(ScenarioConfig {
        model: built,
        tau_q,
        dt,
        stride,
        modes,
        output,
        initial,
    })
}

fn write_schedule(out: &mut String, name: &str, s: &Schedule) {
    let _ = writeln!(out, "\n[schedule.{name}]");
    let _ = writeln!(out, "kind = {}", s.kind());
    let _ = writeln!(out, "value0 = {:?}", s.value0());
    if s.kind() != ScheduleKind::Constant {
        let _ = writeln!(out, "value_f = {:?}", s.value_f());
    }
    if let Some(tau) = s.tau_q() {
        let _ = writeln!(out, "tau_q = {tau:?}");
    }
}

/// Canonical text form; `parse_config(&serialize_config(c))` returns `c`.
pub fn serialize_config(cfg: &ScenarioConfig) -> String {
    let family = cfg.model.family();
    let mut out = String::new();
    let _ = writeln!(out, "[model]");
    let _ = writeln!(out, "family = {}", family.as_str());
    match &cfg.model {
        Model::Dimer(p) => {
            let _ = writeln!(out, "omega0 = {:?}", p.omega0());
        }
        Model::Pp(p) => {
            let _ = writeln!(out, "m = {:?}", p.m());
        }
        Model::Mf(p) => {
            let _ = writeln!(out, "m = {:?}", p.m());
        }
    }
    for (name, s) in family
        .schedule_names()
        .into_iter()
        .zip(cfg.model.schedules())
    {
        write_schedule(&mut out, name, s);
    }
    let _ = writeln!(out, "\n[run]");
    let _ = writeln!(out, "tau_q = {:?}", cfg.tau_q);
    let _ = writeln!(out, "dt = {:?}", cfg.dt);
    let _ = writeln!(out, "stride = {}", cfg.stride);
    let modes: Vec<&str> = cfg.modes.iter().map(|m| m.as_str()).collect();
    let _ = writeln!(out, "modes = {}", modes.join(", "));
    let _ = writeln!(out, "output = {}", cfg.output.display());
    let _ = writeln!(out, "initial = {}", cfg.initial);
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    const FIG1: &str = include_str!("../../../configs/fig1.cfg");

    #[test]
    fn shipped_figure_config() {
        let cfg = parse_config(FIG1).unwrap();
        let Model::Dimer(p) = cfg.model else {
            panic!("expected the dimer family")
        };
        assert_eq!(p.omega0(), 1.0);
        assert_eq!(*p.g(), Schedule::linear_ramp(0.0, 0.2, 100.0).unwrap());
        assert_eq!(*p.j(), Schedule::constant(0.01));
        assert_eq!(cfg.tau_q, 100.0);
        assert_eq!(cfg.modes, ControlMode::ALL.to_vec());
        assert_eq!(cfg.dt, 1e-3);
        assert_eq!(cfg.initial, InitialState::GroundState);
    }

    #[test]
    fn unstable_ramp_is_rejected() {
        let text = FIG1.replace("value_f = 0.2", "value_f = 1.5");
        let err = parse_config(&text).unwrap_err();
        let msg = err.to_string();
        assert!(msg.contains("g^2 + J < 1"), "{msg}");
        assert!(matches!(err, ConfigError::Invalid { .. }));
    }

    #[test]
    fn missing_dt_defaults_to_fine_step() {
        let text = "[model]\nfamily = dimer\nomega0 = 1\n[schedule.g]\nkind = linear-ramp\nvalue0 = 0\nvalue_f = 0.2\ntau_q = 50\n[schedule.J]\nkind = constant\nvalue0 = 0.01\n";
        let cfg = parse_config(text).unwrap();
        assert_eq!(cfg.dt, 50.0 / 1e5);
        assert_eq!(cfg.stride, 1);
        assert_eq!(cfg.output, PathBuf::from("dimer.csv"));
    }

    #[test]
    fn errors_name_the_field() {
        let cases = [
            (FIG1.replace("stride = 1000", "stride = 0"), "run.stride"),
            (FIG1.replace("omega0 = 1", "omega0 = one"), "model.omega0"),
            (
                FIG1.replace("kind = linear-ramp", "kind = cubic"),
                "schedule.g.kind",
            ),
            (
                FIG1.replace("modes = none, mode1_only, both", "modes = "),
                "run.modes",
            ),
            (FIG1.replace("[run]", "[run]\ndt = 0.5"), "run.dt"),
            (FIG1.replace("[run]", "[run]\ncolour = red"), "run.colour"),
            (FIG1.replace("[schedule.J]", "[schedule.K]"), "schedule.J"),
            (
                FIG1.replace("\ntau_q = 100\n", "\ntau_q = 100\ntau_q = 100\n"),
                "schedule.g.tau_q",
            ),
        ];
        for (text, path) in cases {
            let msg = parse_config(&text).unwrap_err().to_string();
            assert!(msg.starts_with(path), "{path}: {msg}");
        }
    }

    #[test]
    fn syntax_errors_report_lines() {
        let err = parse_config("[model\nfamily = dimer").unwrap_err();
        assert!(matches!(err, ConfigError::Syntax { line: 1, .. }), "{err}");
        let err = parse_config("family = dimer").unwrap_err();
        assert!(matches!(err, ConfigError::Syntax { line: 1, .. }), "{err}");
        let err = parse_config("[model]\n\nfamily dimer").unwrap_err();
        assert!(matches!(err, ConfigError::Syntax { line: 3, .. }), "{err}");
    }

    #[test]
    fn constant_protocols_need_a_length() {
        let text = "[model]\nfamily = pp\n[schedule.omega]\nkind = constant\nvalue0 = 1\n[schedule.gamma]\nkind = constant\nvalue0 = 0\n";
        let msg = parse_config(text).unwrap_err().to_string();
        assert!(msg.starts_with("run.tau_q"), "{msg}");
        let cfg = parse_config(&format!("{text}[run]\ntau_q = 5\n")).unwrap();
        assert_eq!(cfg.tau_q, 5.0);
    }

    #[test]
    fn ramps_must_agree_on_length() {
        let text = FIG1.replace(
            "kind = constant\nvalue0 = 0.01",
            "kind = linear-ramp\nvalue0 = 0.01\nvalue_f = 0.02\ntau_q = 50",
        );
        let msg = parse_config(&text).unwrap_err().to_string();
        assert!(msg.starts_with("schedule.J.tau_q"), "{msg}");
    }

    #[test]
    fn serialization_round_trips() {
        let cfg = parse_config(FIG1).unwrap();
        let text = serialize_config(&cfg);
        let again = parse_config(&text).unwrap();
        assert_eq!(cfg, again);
        assert_eq!(text, serialize_config(&again));
    }
}
