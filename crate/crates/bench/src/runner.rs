use std::fmt::Write as _;
use std::fs;
use std::path::{Path, PathBuf};
use std::time::Instant;

use greens25::contours::ThetaGrid;
use greens25::quadrature::MAX_HERMITE_N;
use greens25::spectral::{self, Medium, Observation};
use greens25::synthesis::{self, theta_plane_map, SynthesisError};
use greens25::{fit_convergence, ContourSpec, ConvergenceFit, PathKind, QuadratureRule, RuleKind};
use num_complex::Complex64;
use thiserror::Error;

use crate::config::{CaseConfig, ExperimentConfig};

pub const CSV_HEADER: &str = "case_id,path,rule,N,I_re,I_im,E,wall_ns";
pub const MAP_HEADER: &str = "theta_re,theta_im,logabs_integrand,re_f";
pub const LOCI_HEADER: &str = "k0_re,k0_im,kz,krho_re,krho_im";

#[derive(Debug, Error)]
pub enum RunError {
    #[error("case {case}, {path}+{rule}, N={n}: {source}")]
    Numerical { case: String, path: PathKind, rule: RuleKind, n: usize, source: SynthesisError },
    #[error("case {case}: {msg}")]
    Setup { case: String, msg: String },
    #[error("{path}: {source}")]
    Io { path: PathBuf, source: std::io::Error },
}

#[derive(Debug, Clone, PartialEq)]
pub struct Row {
    pub case_id: String,
    pub path: PathKind,
    pub rule: RuleKind,
    pub n: usize,
    pub value: Complex64,
    pub error: f64,
    pub wall_ns: u128,
}

#[derive(Debug, Clone, PartialEq)]
pub struct SeriesSummary {
    pub case_id: String,
    pub path: PathKind,
    pub rule: RuleKind,
    pub fit: Option<ConvergenceFit>,
    pub last_error: f64,
}

impl SeriesSummary {
    pub fn verdict(&self) -> String {
        match self.fit {
            Some(ConvergenceFit { algebraic_slope: None, is_exponential: true, .. }) => "floor".into(),
            Some(ConvergenceFit { is_exponential: true, .. }) => "exponential".into(),
            Some(ConvergenceFit { algebraic_slope: Some(s), .. }) => format!("slope {s:.2}"),
            Some(_) => "stalled".into(),
            None => "too few points".into(),
        }
    }
}

pub fn case_geometry(case: &CaseConfig) -> Result<(Observation, Medium), RunError> {
    let setup = |msg: String| RunError::Setup { case: case.id.clone(), msg };
    let obs = Observation::from_polar(case.r, case.theta0).map_err(|e| setup(e.to_string()))?;
    let medium = Medium::new(Complex64::new(case.k0_real, case.k0_imag)).map_err(|e| setup(e.to_string()))?;
    Ok((obs, medium))
}

/// All rows of one case, sorted by (path, rule, N). Gauss-Hermite rows stop at
/// the largest supported order.
pub fn run_case(case: &CaseConfig, config: &ExperimentConfig) -> Result<Vec<Row>, RunError> {
    let (obs, medium) = case_geometry(case)?;
    let mut rows = Vec::new();
    for (path, rule) in config.combinations() {
        let spec = ContourSpec::with_regularization(path, case.regularization)
            .map_err(|e| RunError::Setup { case: case.id.clone(), msg: e.to_string() })?;
        for &n in &config.n_sweep {
            if rule == RuleKind::GaussHermite && n > MAX_HERMITE_N {
                continue;
            }
            let numerical = |source: SynthesisError| RunError::Numerical { case: case.id.clone(), path, rule, n, source };
            let q = QuadratureRule::new(rule, n).map_err(|e| RunError::Setup { case: case.id.clone(), msg: e.to_string() })?;
            let start = Instant::now();
            let res = synthesis::synthesize(&spec, q, &obs, &medium).map_err(numerical)?;
            let wall_ns = start.elapsed().as_nanos();
            rows.push(Row { case_id: case.id.clone(), path, rule, n, value: res.value, error: res.error, wall_ns });
        }
    }
    rows.sort_by(|a, b| (a.path.name(), a.rule.name(), a.n).cmp(&(b.path.name(), b.rule.name(), b.n)));
    Ok(rows)
}

/// 17 significant digits.
pub fn fmt_float(v: f64) -> String {
    format!("{v:.16e}")
}

pub fn rows_to_csv(rows: &[Row]) -> String {
    let mut out = String::with_capacity(96 * (rows.len() + 1));
    out.push_str(CSV_HEADER);
    out.push('\n');
    for r in rows {
        let _ = writeln!(
            out,
            "{},{},{},{},{},{},{},{}",
            r.case_id,
            r.path,
            r.rule,
            r.n,
            fmt_float(r.value.re),
            fmt_float(r.value.im),
            fmt_float(r.error),
            r.wall_ns
        );
    }
    out
}

pub fn summarize(rows: &[Row]) -> Vec<SeriesSummary> {
    let mut out = Vec::new();
    let mut i = 0;
    while i < rows.len() {
        let key = (&rows[i].case_id, rows[i].path, rows[i].rule);
        let j = rows[i..].iter().position(|r| (&r.case_id, r.path, r.rule) != key).map_or(rows.len(), |p| i + p);
        let series: Vec<(usize, f64)> = rows[i..j].iter().map(|r| (r.n, r.error)).collect();
        out.push(SeriesSummary {
            case_id: key.0.clone(),
            path: key.1,
            rule: key.2,
            fit: fit_convergence(&series).ok(),
            last_error: rows[j - 1].error,
        });
        i = j;
    }
    out
}

/// Offsets from theta0 spanning the strip, for the theta-plane file.
pub fn default_map_grid() -> ThetaGrid {
    ThetaGrid { re_min: -1.6, re_max: 1.6, im_min: -3.0, im_max: 3.0, n_re: 161, n_im: 151 }
}

pub fn theta_map_csv(case: &CaseConfig, grid: &ThetaGrid) -> Result<String, RunError> {
    let (obs, medium) = case_geometry(case)?;
    let cells = theta_plane_map(grid, &obs, &medium)
        .map_err(|e| RunError::Setup { case: case.id.clone(), msg: e.to_string() })?;
    let mut out = String::from(MAP_HEADER);
    out.push('\n');
    for c in cells {
        let _ = writeln!(
            out,
            "{},{},{},{}",
            fmt_float(c.theta.re),
            fmt_float(c.theta.im),
            fmt_float(c.logabs_integrand),
            fmt_float(c.re_f)
        );
    }
    Ok(out)
}

/// k_rho loci for k0 = 2pi + i k0'' with k0'' and kz both stepped by k0'/40.
pub fn loci_csv() -> String {
    let k0r = 2.0 * std::f64::consts::PI;
    let step = k0r / 40.0;
    let media: Vec<Medium> = (0..=10).map(|i| Medium::new(Complex64::new(k0r, i as f64 * step)).unwrap()).collect();
    let kz: Vec<f64> = (-80..=80).map(|j| j as f64 * step).collect();
    let loci = spectral::krho_loci(&media, &kz).expect("non-empty grid");
    let mut out = String::from(LOCI_HEADER);
    out.push('\n');
    for (mi, m) in media.iter().enumerate() {
        for (ki, &z) in kz.iter().enumerate() {
            let k = loci[mi * kz.len() + ki];
            let _ = writeln!(
                out,
                "{},{},{},{},{}",
                fmt_float(m.k0().re),
                fmt_float(m.k0().im),
                fmt_float(z),
                fmt_float(k.re),
                fmt_float(k.im)
            );
        }
    }
    out
}

pub struct SuiteOutput {
    pub files: Vec<PathBuf>,
    pub summaries: Vec<SeriesSummary>,
}

fn write(path: PathBuf, body: &str) -> Result<PathBuf, RunError> {
    fs::write(&path, body).map_err(|source| RunError::Io { path: path.clone(), source })?;
    Ok(path)
}

/// Runs every case and writes `<case>.csv` (plus `<case>_theta_map.csv` and
/// `krho_loci.csv` when maps are requested) into `out_dir`.
pub fn run_suite(config: &ExperimentConfig, out_dir: &Path) -> Result<SuiteOutput, RunError> {
    fs::create_dir_all(out_dir).map_err(|source| RunError::Io { path: out_dir.to_path_buf(), source })?;
    let mut files = Vec::new();
    let mut summaries = Vec::new();
    for case in &config.cases {
        let rows = run_case(case, config)?;
        files.push(write(out_dir.join(format!("{}.csv", case.id)), &rows_to_csv(&rows))?);
        summaries.extend(summarize(&rows));
        if config.emit_maps {
            let body = theta_map_csv(case, &default_map_grid())?;
            files.push(write(out_dir.join(format!("{}_theta_map.csv", case.id)), &body)?);
        }
    }
    if config.emit_maps {
        files.push(write(out_dir.join("krho_loci.csv"), &loci_csv())?);
    }
    Ok(SuiteOutput { files, summaries })
}

pub fn format_summary(summaries: &[SeriesSummary]) -> String {
    let mut out = String::new();
    let _ = writeln!(out, "{:<12} {:<13} {:<15} {:>10}  fit", "case", "path", "rule", "last E");
    for s in summaries {
        let _ = writeln!(
            out,
            "{:<12} {:<13} {:<15} {:>10.2e}  {}",
            s.case_id,
            s.path.name(),
            s.rule.name(),
            s.last_error,
            s.verdict()
        );
    }
    out
}
