//! Experiment configuration: a flat `key = value` file with optional
//! `[section]` headers, plus command-line overrides.
//!
//! ```text
//! [problem]
//! operator = involution
//! epsilon = 0, 0.9
//! alpha = 1
//! horizon = 5
//! phi = rod
//! psi = zero
//!
//! [series]
//! modes = 7, 10, 20
//! snapshots = 0.5, 2.5, 4.5
//!
//! [oracle]
//! space_n = 401
//! time_m = 4000
//! tolerance = 5e-3
//!
//! [output]
//! dir = out
//! plots = true
//! ```
//!
//! Section names only group keys; a key means the same thing in any section.

use std::fmt;
use std::path::{Path, PathBuf};
use std::str::FromStr;

use crate::error::{Error, Result};
use crate::forward::DEFAULT_TOLERANCE;
use crate::mittag_leffler::FractionalOrder;
use crate::operator::{parse_real, OperatorDescriptor};

/// Closed-form initial and terminal profiles.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Profile {
    /// `(x - a)³ (b - x)³` on the operator's interval.
    Rod,
    Zero,
    /// The `k`-th eigenfunction.
    Mode(usize),
}

impl FromStr for Profile {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let t = s.trim().to_ascii_lowercase();
        match t.as_str() {
            "rod" => Ok(Profile::Rod),
            "zero" | "0" => Ok(Profile::Zero),
            _ => t
                .strip_prefix("mode")
                .map(|k| k.trim_matches(|c: char| c == '(' || c == ')' || c == ' ' || c == '_'))
                .and_then(|k| k.parse::<usize>().ok())
                .filter(|&k| k >= 1)
                .map(Profile::Mode)
                .ok_or_else(|| Error::Config(format!("unknown profile `{s}` (rod, zero, mode<k>)"))),
        }
    }
}

impl fmt::Display for Profile {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Profile::Rod => write!(f, "rod"),
            Profile::Zero => write!(f, "zero"),
            Profile::Mode(k) => write!(f, "mode{k}"),
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct ExperimentConfig {
    pub operator: OperatorDescriptor,
    /// Involution couplings to sweep; empty means "use the operator as given".
    pub epsilons: Vec<f64>,
    pub alpha: FractionalOrder,
    pub horizon: f64,
    pub truncations: Vec<usize>,
    pub snapshots: Vec<f64>,
    pub phi: Profile,
    pub psi: Profile,
    pub space_n: usize,
    pub time_m: usize,
    pub tolerance: f64,
    pub output_dir: PathBuf,
    pub emit_plots: bool,
}

impl Default for ExperimentConfig {
    /// The rod-cooling study: `φ = x³(π - x)³`, `ψ = 0`, `ε = 0.9`, `T = 5`.
    fn default() -> Self {
        ExperimentConfig {
            operator: OperatorDescriptor::Involution { epsilon: 0.9 },
            epsilons: Vec::new(),
            alpha: FractionalOrder::ONE,
            horizon: 5.0,
            truncations: vec![7, 10, 20],
            snapshots: vec![0.5, 2.5, 4.5],
            phi: Profile::Rod,
            psi: Profile::Zero,
            space_n: 401,
            time_m: 4000,
            tolerance: DEFAULT_TOLERANCE,
            output_dir: PathBuf::from("out"),
            emit_plots: false,
        }
    }
}

/// Command-line values that replace file settings when present.
#[derive(Debug, Clone, Default)]
pub struct Overrides {
    pub operator: Option<String>,
    pub epsilon: Option<String>,
    pub alpha: Option<f64>,
    pub horizon: Option<f64>,
    pub modes: Option<String>,
    pub snapshots: Option<String>,
    pub space_n: Option<usize>,
    pub time_m: Option<usize>,
    pub out: Option<PathBuf>,
    pub plots: Option<bool>,
}

fn list<T>(value: &str, item: impl Fn(&str) -> Result<T>) -> Result<Vec<T>> {
    value
        .split(',')
        .map(str::trim)
        .filter(|s| !s.is_empty())
        .map(item)
        .collect()
}

fn count(value: &str) -> Result<usize> {
    value
        .trim()
        .parse()
        .map_err(|_| Error::Config(format!("not a non-negative integer: `{value}`")))
}

fn flag(value: &str) -> Result<bool> {
    match value.trim().to_ascii_lowercase().as_str() {
        "true" | "yes" | "on" | "1" => Ok(true),
        "false" | "no" | "off" | "0" => Ok(false),
        other => Err(Error::Config(format!("not a boolean: `{other}`"))),
    }
}

impl ExperimentConfig {
    /// Parses configuration text on top of the defaults.
    pub fn parse(text: &str) -> Result<Self> {
        let mut cfg = ExperimentConfig::default();
        for (lineno, raw) in text.lines().enumerate() {
            let line = raw.split(['#', ';']).next().unwrap_or("").trim();
            if line.is_empty() || (line.starts_with('[') && line.ends_with(']')) {
                continue;
            }
            let (key, value) = line
                .split_once('=')
                .ok_or_else(|| Error::Config(format!("line {}: expected `key = value`", lineno + 1)))?;
            cfg.set(key.trim(), value.trim())
                .map_err(|e| Error::Config(format!("line {}: {}", lineno + 1, strip_prefix(&e))))?;
        }
        Ok(cfg)
    }

    pub fn load(path: &Path) -> Result<Self> {
        let text = std::fs::read_to_string(path)
            .map_err(|e| Error::Config(format!("cannot read {}: {e}", path.display())))?;
        Self::parse(&text)
    }

    fn set(&mut self, key: &str, value: &str) -> Result<()> {
        match key.to_ascii_lowercase().replace('-', "_").as_str() {
            "operator" => self.operator = value.parse()?,
            "epsilon" | "epsilons" => self.epsilons = list(value, parse_real)?,
            "alpha" => {
                self.alpha = FractionalOrder::new(parse_real(value)?).map_err(|e| Error::Config(e.to_string()))?
            }
            "horizon" | "t" => self.horizon = parse_real(value)?,
            "modes" | "truncations" => self.truncations = list(value, count)?,
            "snapshots" => self.snapshots = list(value, parse_real)?,
            "phi" => self.phi = value.parse()?,
            "psi" => self.psi = value.parse()?,
            "space_n" => self.space_n = count(value)?,
            "time_m" => self.time_m = count(value)?,
            "tolerance" => self.tolerance = parse_real(value)?,
            "dir" | "out" | "output_dir" => self.output_dir = PathBuf::from(value),
            "plots" => self.emit_plots = flag(value)?,
            other => return Err(Error::Config(format!("unknown key `{other}`"))),
        }
        Ok(())
    }

    pub fn apply(&mut self, o: &Overrides) -> Result<()> {
        if let Some(v) = &o.operator {
            self.set("operator", v)?;
        }
        if let Some(v) = &o.epsilon {
            self.set("epsilon", v)?;
        }
        if let Some(v) = o.alpha {
            self.alpha = FractionalOrder::new(v).map_err(|e| Error::Config(e.to_string()))?;
        }
        if let Some(v) = o.horizon {
            self.horizon = v;
        }
        if let Some(v) = &o.modes {
            self.set("modes", v)?;
        }
        if let Some(v) = &o.snapshots {
            self.set("snapshots", v)?;
        }
        if let Some(v) = o.space_n {
            self.space_n = v;
        }
        if let Some(v) = o.time_m {
            self.time_m = v;
        }
        if let Some(v) = &o.out {
            self.output_dir = v.clone();
        }
        if let Some(v) = o.plots {
            self.emit_plots = v;
        }
        Ok(())
    }

    pub fn validate(&self) -> Result<()> {
        let fail = |msg: String| Err(Error::Config(msg));
        if !(self.horizon.is_finite() && self.horizon > 0.0) {
            return fail(format!("horizon must be positive, got {}", self.horizon));
        }
        if self.truncations.is_empty() {
            return fail("truncation list is empty".into());
        }
        if self.truncations[0] == 0 || self.truncations.windows(2).any(|w| w[1] <= w[0]) {
            return fail(format!(
                "truncations must be positive and strictly increasing, got {:?}",
                self.truncations
            ));
        }
        if let Some(t) = self
            .snapshots
            .iter()
            .find(|t| !(t.is_finite() && **t >= 0.0 && **t <= self.horizon))
        {
            return fail(format!("snapshot time {t} outside [0, {}]", self.horizon));
        }
        if !self.epsilons.is_empty() {
            if !matches!(self.operator, OperatorDescriptor::Involution { .. }) {
                return fail(format!("epsilon only applies to the involution operator, not {}", self.operator));
            }
            if let Some(e) = self.epsilons.iter().find(|e| !(e.abs() < 1.0)) {
                return fail(format!("epsilon must satisfy |epsilon| < 1, got {e}"));
            }
        }
        if !(self.tolerance.is_finite() && self.tolerance > 0.0) {
            return fail(format!("tolerance must be positive, got {}", self.tolerance));
        }
        if let OperatorDescriptor::Unsupported { operator } = self.operator {
            return Err(Error::UnsupportedOperator {
                name: operator.name().to_string(),
                reason: operator.reason(),
            });
        }
        if (self.phi == Profile::Rod || self.psi == Profile::Rod)
            && matches!(self.operator, OperatorDescriptor::HarmonicOscillator { .. })
        {
            return fail("the rod profile needs a bounded interval".into());
        }
        Ok(())
    }

    /// The operators of the sweep, one per `ε` (or just the configured one).
    pub fn operators(&self) -> Vec<OperatorDescriptor> {
        if self.epsilons.is_empty() {
            vec![self.operator]
        } else {
            self.epsilons
                .iter()
                .map(|&epsilon| OperatorDescriptor::Involution { epsilon })
                .collect()
        }
    }
}

fn strip_prefix(e: &Error) -> String {
    match e {
        Error::Config(m) => m.clone(),
        other => other.to_string(),
    }
}
