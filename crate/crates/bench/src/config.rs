//! Experiment configuration: flat `key = value` lines, `#` comments, and
//! `[case <id>]` blocks.
//!
//! ```text
//! paths = Linear, ExactSDTheta
//! rules = GaussLegendre
//! n_sweep = 4..4096          # doubling; or an explicit list 4, 8, 12
//!
//! [case near]
//! r = 0.1414213562373095
//! theta0 = 0.5235987755982988
//! limit_scale = 2
//! ```

use std::collections::BTreeSet;
use std::f64::consts::PI;

use greens25::contours::Regularization;
use greens25::{ContourSpec, PathKind, RuleKind};
use thiserror::Error;

#[derive(Debug, Error, PartialEq)]
pub enum ConfigError {
    #[error("line {line}: {msg}")]
    Parse { line: usize, msg: String },
    #[error("invalid `{field}`: {msg}")]
    Invalid { field: String, msg: String },
}

#[derive(Debug, Clone, PartialEq)]
pub struct CaseConfig {
    pub id: String,
    pub r: f64,
    pub theta0: f64,
    pub k0_real: f64,
    pub k0_imag: f64,
    pub regularization: Regularization,
}

#[derive(Debug, Clone, PartialEq)]
pub struct ExperimentConfig {
    pub cases: Vec<CaseConfig>,
    pub paths: Vec<PathKind>,
    pub rules: Vec<RuleKind>,
    pub n_sweep: Vec<usize>,
    pub emit_maps: bool,
}

impl ExperimentConfig {
    /// (path, rule) pairs that are actually run, in output order.
    pub fn combinations(&self) -> Vec<(PathKind, RuleKind)> {
        let mut out: Vec<(PathKind, RuleKind)> = self
            .paths
            .iter()
            .flat_map(|&p| self.rules.iter().filter(move |&&r| p.accepts(r)).map(move |&r| (p, r)))
            .collect();
        out.sort_by(|a, b| (a.0.name(), a.1.name()).cmp(&(b.0.name(), b.1.name())));
        out
    }
}

pub fn default_sweep() -> Vec<usize> {
    doubling(4, 4096)
}

fn doubling(from: usize, to: usize) -> Vec<usize> {
    std::iter::successors(Some(from), |&n| n.checked_mul(2)).take_while(|&n| n <= to).collect()
}

const CASE_KEYS: [&str; 7] = ["r", "theta0", "k0_real", "k0_imag", "delta_shift", "imposed_loss", "limit_scale"];

#[derive(Default)]
struct RawCase {
    id: String,
    line: usize,
    values: Vec<(String, f64, usize)>,
}

pub fn parse_config(text: &str) -> Result<ExperimentConfig, ConfigError> {
    let mut paths: Option<Vec<PathKind>> = None;
    let mut rules: Option<Vec<RuleKind>> = None;
    let mut n_sweep: Option<Vec<usize>> = None;
    let mut emit_maps = false;
    let mut cases: Vec<RawCase> = Vec::new();

    for (idx, raw) in text.lines().enumerate() {
        let line = idx + 1;
        let err = |msg: String| ConfigError::Parse { line, msg };
        let content = raw.split('#').next().unwrap_or("").trim();
        if content.is_empty() {
            continue;
        }
        if let Some(header) = content.strip_prefix('[') {
            let inner = header.strip_suffix(']').ok_or_else(|| err("unterminated section header".into()))?;
            let mut words = inner.split_whitespace();
            match (words.next(), words.next(), words.next()) {
                (Some("case"), Some(id), None) => {
                    if cases.iter().any(|c| c.id == id) {
                        return Err(err(format!("duplicate case `{id}`")));
                    }
                    cases.push(RawCase { id: id.to_string(), line, values: Vec::new() });
                }
                _ => return Err(err(format!("expected `[case <id>]`, found `[{inner}]`"))),
            }
            continue;
        }
        let (key, value) = content.split_once('=').ok_or_else(|| err(format!("expected `key = value`, found `{content}`")))?;
        let (key, value) = (key.trim(), value.trim());
        if value.is_empty() {
            return Err(err(format!("`{key}` has no value")));
        }

        if let Some(case) = cases.last_mut() {
            if !CASE_KEYS.contains(&key) {
                return Err(err(format!("unknown case key `{key}`")));
            }
            if case.values.iter().any(|(k, _, _)| k == key) {
                return Err(err(format!("`{key}` given twice in case `{}`", case.id)));
            }
            let v: f64 = value.parse().map_err(|_| err(format!("`{key}`: `{value}` is not a number")))?;
            case.values.push((key.to_string(), v, line));
            continue;
        }

        match key {
            "paths" => {
                let list = split_list(value)
                    .map(|s| s.parse::<PathKind>().map_err(|e| err(e.to_string())))
                    .collect::<Result<Vec<_>, _>>()?;
                set_once(&mut paths, list, key, &err)?;
            }
            "rules" => {
                let list = split_list(value)
                    .map(|s| s.parse::<RuleKind>().map_err(|e| err(e.to_string())))
                    .collect::<Result<Vec<_>, _>>()?;
                set_once(&mut rules, list, key, &err)?;
            }
            "n_sweep" => {
                let list = parse_sweep(value).map_err(err)?;
                set_once(&mut n_sweep, list, key, &err)?;
            }
            "emit_maps" => {
                emit_maps = value.parse().map_err(|_| err(format!("emit_maps: `{value}` is not true/false")))?;
            }
            _ => {
                let hint = if CASE_KEYS.contains(&key) { " (case keys belong inside a [case] block)" } else { "" };
                return Err(err(format!("unknown key `{key}`{hint}")));
            }
        }
    }

    let invalid = |field: &str, msg: String| ConfigError::Invalid { field: field.to_string(), msg };
    if cases.is_empty() {
        return Err(invalid("cases", "at least one [case <id>] block is required".into()));
    }
    let paths = dedup(paths.unwrap_or_else(|| PathKind::ALL.to_vec()));
    let rules = dedup(rules.unwrap_or_else(|| RuleKind::ALL.to_vec()));
    if paths.is_empty() || rules.is_empty() {
        return Err(invalid("paths", "empty list".into()));
    }
    let n_sweep = n_sweep.unwrap_or_else(default_sweep);
    if n_sweep.is_empty() || n_sweep[0] == 0 || n_sweep.windows(2).any(|w| w[1] <= w[0]) {
        return Err(invalid("n_sweep", "must be positive and strictly increasing".into()));
    }

    let cases = cases.into_iter().map(finish_case).collect::<Result<Vec<_>, _>>()?;
    let config = ExperimentConfig { cases, paths, rules, n_sweep, emit_maps };
    if config.combinations().is_empty() {
        return Err(invalid("rules", "no listed rule applies to any listed path".into()));
    }
    Ok(config)
}

fn split_list(value: &str) -> impl Iterator<Item = &str> {
    value.split(',').map(str::trim).filter(|s| !s.is_empty())
}

fn set_once<T>(slot: &mut Option<T>, v: T, key: &str, err: &dyn Fn(String) -> ConfigError) -> Result<(), ConfigError> {
    if slot.is_some() {
        return Err(err(format!("`{key}` given twice")));
    }
    *slot = Some(v);
    Ok(())
}

fn dedup<T: Ord + Copy>(v: Vec<T>) -> Vec<T> {
    let mut seen = BTreeSet::new();
    v.into_iter().filter(|x| seen.insert(*x)).collect()
}

fn parse_sweep(value: &str) -> Result<Vec<usize>, String> {
    if let Some((a, b)) = value.split_once("..") {
        let a: usize = a.trim().parse().map_err(|_| format!("n_sweep: bad start `{}`", a.trim()))?;
        let b: usize = b.trim().parse().map_err(|_| format!("n_sweep: bad end `{}`", b.trim()))?;
        if a == 0 || b < a {
            return Err(format!("n_sweep: empty range {a}..{b}"));
        }
        return Ok(doubling(a, b));
    }
    split_list(value)
        .map(|s| s.parse::<usize>().map_err(|_| format!("n_sweep: `{s}` is not a positive integer")))
        .collect()
}

fn finish_case(raw: RawCase) -> Result<CaseConfig, ConfigError> {
    let field = |name: &str| format!("case {}.{name}", raw.id);
    let get = |k: &str| raw.values.iter().find(|(key, _, _)| key == k).map(|(_, v, _)| *v);
    let need = |k: &str| {
        get(k).ok_or_else(|| ConfigError::Invalid { field: field(k), msg: format!("missing (case starts on line {})", raw.line) })
    };
    let r = need("r")?;
    let theta0 = need("theta0")?;
    let k0_real = get("k0_real").unwrap_or(2.0 * PI);
    let k0_imag = get("k0_imag").unwrap_or(0.0);
    let regularization = Regularization {
        delta_shift: get("delta_shift").unwrap_or(0.0),
        imposed_loss: get("imposed_loss").unwrap_or(0.0),
        limit_scale: get("limit_scale").unwrap_or(1.0),
    };
    let bad = |k: &str, msg: String| Err(ConfigError::Invalid { field: field(k), msg });
    if !(r > 0.0 && r.is_finite()) {
        return bad("r", format!("{r} must be > 0"));
    }
    if !(theta0.abs() <= PI / 2.0 + 1e-12) {
        return bad("theta0", format!("{theta0} outside [-pi/2, pi/2]"));
    }
    if !(k0_real > 0.0 && k0_real.is_finite()) {
        return bad("k0_real", format!("{k0_real} must be > 0"));
    }
    if !(k0_imag >= 0.0 && k0_imag.is_finite()) {
        return bad("k0_imag", format!("{k0_imag} must be >= 0"));
    }
    if let Err(e) = ContourSpec::with_regularization(PathKind::Linear, regularization) {
        return bad("regularization", e.to_string());
    }
    Ok(CaseConfig { id: raw.id, r, theta0, k0_real, k0_imag, regularization })
}
