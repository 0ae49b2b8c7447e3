//! Line-oriented scenario configuration.
//!
//! The format is deliberately flat: `key = value` lines, optional
//! `[section]` headers, `#` comments, no nesting. Values are split at the
//! first `=`, so driving expressions (which contain `=`) pass through
//! unharmed. Unknown keys are rejected with their line number.

use std::collections::BTreeMap;
use std::path::{Path, PathBuf};

use lkweld_core::DrivingFunction;

use crate::error::CliError;
use crate::expr::{parse_delta, parse_driving, DeltaExpr};

pub const DEFAULT_DRIVING: &str = "p = 1 + (0.0,0.3)*z^1";
pub const DEFAULT_DELTA: &str = "cos(psi)";
pub const DEFAULT_T_LIST: [f64; 4] = [0.08, 0.04, 0.02, 0.01];
pub const DEFAULT_EPS_LIST: [f64; 4] = [0.04, 0.02, 0.01, 0.005];
pub const DEFAULT_GRID: usize = 512;
pub const DEFAULT_T: f64 = 0.05;
pub const DEFAULT_EPS: f64 = 0.02;

const KNOWN_KEYS: &[&str] = &[
    "name", "driving", "delta", "t_list", "eps_list", "t", "eps", "grid", "steps", "horizon",
    "tol", "out",
];

/// A fully resolved experiment scenario.
#[derive(Debug, Clone)]
pub struct Scenario {
    pub name: String,
    pub driving: DrivingFunction,
    pub driving_text: String,
    pub delta: DeltaExpr,
    /// Whether the deficit shape was given explicitly (selects the curve
    /// source of the map/weld commands).
    pub delta_explicit: bool,
    pub t_list: Vec<f64>,
    pub eps_list: Vec<f64>,
    pub t: f64,
    pub eps: f64,
    pub grid: usize,
    /// ODE step override; None = 256 per unit time.
    pub steps: Option<usize>,
    pub horizon: f64,
    pub tol: f64,
    pub out: PathBuf,
}

impl Default for Scenario {
    fn default() -> Self {
        Self {
            name: "default".into(),
            driving: parse_driving(DEFAULT_DRIVING, f64::INFINITY)
                .expect("default driving is valid"),
            driving_text: DEFAULT_DRIVING.into(),
            delta: parse_delta(DEFAULT_DELTA).expect("default delta is valid"),
            delta_explicit: false,
            t_list: DEFAULT_T_LIST.to_vec(),
            eps_list: DEFAULT_EPS_LIST.to_vec(),
            t: DEFAULT_T,
            eps: DEFAULT_EPS,
            grid: DEFAULT_GRID,
            steps: None,
            horizon: f64::INFINITY,
            tol: 1e-12,
            out: PathBuf::from("out"),
        }
    }
}

fn parse_f64(key: &str, value: &str) -> Result<f64, CliError> {
    if value == "inf" {
        return Ok(f64::INFINITY);
    }
    value
        .parse::<f64>()
        .map_err(|e| CliError::Config(format!("key '{key}': bad number '{value}': {e}")))
}

fn parse_list(key: &str, value: &str) -> Result<Vec<f64>, CliError> {
    value
        .split(',')
        .map(str::trim)
        .filter(|s| !s.is_empty())
        .map(|s| parse_f64(key, s))
        .collect()
}

fn check_decreasing_positive(key: &str, list: &[f64], horizon: f64) -> Result<(), CliError> {
    for pair in list.windows(2) {
        if pair[1] >= pair[0] {
            return Err(CliError::Config(format!("{key} must be strictly decreasing")));
        }
    }
    if list.iter().any(|&v| v <= 0.0) {
        return Err(CliError::Config(format!("{key} entries must be positive")));
    }
    if list.iter().any(|&v| v >= horizon) {
        return Err(CliError::Config(format!("{key} entries must stay below the horizon")));
    }
    Ok(())
}

impl Scenario {
    /// Loads a scenario file; `None` yields the default scenario.
    pub fn load(path: Option<&Path>) -> Result<Self, CliError> {
        let mut raw: BTreeMap<String, String> = BTreeMap::new();
        if let Some(path) = path {
            let text = std::fs::read_to_string(path).map_err(|e| {
                CliError::Config(format!("cannot read config {}: {e}", path.display()))
            })?;
            for (lineno, line) in text.lines().enumerate() {
                let line = line.trim();
                if line.is_empty() || line.starts_with('#') || line.starts_with('[') {
                    continue;
                }
                let Some((key, value)) = line.split_once('=') else {
                    return Err(CliError::Config(format!(
                        "{}:{}: expected 'key = value'",
                        path.display(),
                        lineno + 1
                    )));
                };
                let key = key.trim().to_string();
                if !KNOWN_KEYS.contains(&key.as_str()) {
                    return Err(CliError::Config(format!(
                        "{}:{}: unknown key '{key}'",
                        path.display(),
                        lineno + 1
                    )));
                }
                raw.insert(key, value.trim().to_string());
            }
        }
        Self::from_raw(raw)
    }

    fn from_raw(raw: BTreeMap<String, String>) -> Result<Self, CliError> {
        let mut sc = Scenario::default();
        if let Some(v) = raw.get("horizon") {
            sc.horizon = parse_f64("horizon", v)?;
            if sc.horizon <= 0.0 {
                return Err(CliError::Config("horizon must be positive".into()));
            }
        }
        if let Some(v) = raw.get("name") {
            sc.name = v.clone();
        }
        let driving_text = raw.get("driving").cloned().unwrap_or_else(|| DEFAULT_DRIVING.into());
        sc.driving = parse_driving(&driving_text, sc.horizon)
            .map_err(|e| CliError::Config(format!("driving: {e}")))?;
        sc.driving_text = driving_text;
        if let Some(v) = raw.get("delta") {
            sc.delta = parse_delta(v).map_err(|e| CliError::Config(format!("delta: {e}")))?;
            sc.delta_explicit = true;
        }
        if let Some(v) = raw.get("t_list") {
            sc.t_list = parse_list("t_list", v)?;
        }
        if let Some(v) = raw.get("eps_list") {
            sc.eps_list = parse_list("eps_list", v)?;
        }
        if let Some(v) = raw.get("t") {
            sc.t = parse_f64("t", v)?;
        }
        if let Some(v) = raw.get("eps") {
            sc.eps = parse_f64("eps", v)?;
        }
        if let Some(v) = raw.get("grid") {
            sc.grid = v
                .parse::<usize>()
                .map_err(|e| CliError::Config(format!("grid: bad integer '{v}': {e}")))?;
        }
        if let Some(v) = raw.get("steps") {
            let steps = v
                .parse::<usize>()
                .map_err(|e| CliError::Config(format!("steps: bad integer '{v}': {e}")))?;
            sc.steps = if steps == 0 { None } else { Some(steps) };
        }
        if let Some(v) = raw.get("tol") {
            sc.tol = parse_f64("tol", v)?;
        }
        if let Some(v) = raw.get("out") {
            sc.out = PathBuf::from(v);
        }
        check_decreasing_positive("t_list", &sc.t_list, sc.horizon)?;
        check_decreasing_positive("eps_list", &sc.eps_list, f64::INFINITY)?;
        if !sc.grid.is_power_of_two() || sc.grid < 16 {
            return Err(CliError::Config(format!(
                "grid = {} must be a power of two ≥ 16",
                sc.grid
            )));
        }
        if sc.t >= sc.horizon || sc.t < 0.0 {
            return Err(CliError::Config(format!(
                "t = {} outside [0, horizon = {})",
                sc.t, sc.horizon
            )));
        }
        Ok(sc)
    }

    /// At least three points are needed before a convergence order can be
    /// fitted.
    pub fn require_fit_points(&self, key: &str, len: usize) -> Result<(), CliError> {
        if len < 3 {
            return Err(CliError::Config(format!(
                "{key} needs at least 3 values for order fitting, got {len}"
            )));
        }
        Ok(())
    }
}
