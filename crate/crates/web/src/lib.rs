//! Browser bindings for the demo page in `www/`.
//!
//! Each export returns a flat `Float64Array`; the layouts are given on the
//! functions. The plain-Rust versions (`*_data`) are what the native tests
//! exercise.

use std::f64::consts::PI;

use greens25::contours::ThetaGrid;
use greens25::spectral::{self, Medium, Observation};
use greens25::synthesis::{self, theta_plane_map};
use greens25::{build_contour, ContourSpec, PathKind, QuadratureRule, RuleKind};
use num_complex::Complex64;
use wasm_bindgen::prelude::*;

fn setup(r: f64, theta0: f64, loss: f64) -> Result<(Observation, Medium), String> {
    let obs = Observation::from_polar(r, theta0).map_err(|e| e.to_string())?;
    let medium = Medium::new(Complex64::new(2.0 * PI, loss)).map_err(|e| e.to_string())?;
    Ok((obs, medium))
}

/// `[n_re, n_im, re_min, re_max, im_min, im_max, then n_re*n_im values]`,
/// rows by theta'' ascending. Each value is ln|integrand| relative to its
/// saddle value; NaN marks a singular cell.
pub fn theta_map_data(r: f64, theta0: f64, loss: f64, n_re: usize, n_im: usize) -> Result<Vec<f64>, String> {
    let (obs, medium) = setup(r, theta0, loss)?;
    let grid = ThetaGrid { re_min: -1.6, re_max: 1.6, im_min: -3.0, im_max: 3.0, n_re, n_im };
    let cells = theta_plane_map(&grid, &obs, &medium).map_err(|e| e.to_string())?;
    let saddle = spectral::phase(Complex64::new(obs.theta0(), 0.0), &obs, &medium).re;
    let mut out = vec![n_re as f64, n_im as f64, grid.re_min, grid.re_max, grid.im_min, grid.im_max];
    let mut values = vec![f64::NAN; n_re * n_im];
    // cells come back row-major with singular ones dropped; place by position
    for c in cells {
        let j = ((c.theta.re - obs.theta0() - grid.re_min) / (grid.re_max - grid.re_min) * (n_re - 1) as f64).round() as usize;
        let i = ((c.theta.im - grid.im_min) / (grid.im_max - grid.im_min) * (n_im - 1) as f64).round() as usize;
        values[i * n_re + j] = c.logabs_integrand - saddle;
    }
    out.extend(values);
    Ok(out)
}

/// Node offsets from theta0 of one path at `n` nodes: `[re0, im0, re1, im1, ...]`.
pub fn path_nodes_data(path: &str, r: f64, theta0: f64, loss: f64, n: usize) -> Result<Vec<f64>, String> {
    let (obs, medium) = setup(r, theta0, loss)?;
    let kind: PathKind = path.parse().map_err(|e: greens25::contours::ContourError| e.to_string())?;
    let rule = kind.compatible_rules().iter().copied().find(|&r| r != RuleKind::RiemannMidpoint).unwrap_or(RuleKind::GaussLegendre);
    let rule = QuadratureRule::new(rule, n).map_err(|e| e.to_string())?;
    let c = build_contour(&ContourSpec::plain(kind), rule, &obs, &medium).map_err(|e| e.to_string())?;
    Ok(c
        .points
        .iter()
        .filter_map(|p| p.spectral.theta)
        .flat_map(|t| [t.re - obs.theta0(), t.im])
        .collect())
}

/// `[N0, E0, N1, E1, ...]` over N = 4, 8, ... up to `n_max`.
pub fn convergence_data(path: &str, rule: &str, r: f64, theta0: f64, loss: f64, n_max: usize) -> Result<Vec<f64>, String> {
    let (obs, medium) = setup(r, theta0, loss)?;
    let kind: PathKind = path.parse().map_err(|e: greens25::contours::ContourError| e.to_string())?;
    let rule: RuleKind = rule.parse().map_err(|e: greens25::quadrature::QuadratureError| e.to_string())?;
    let spec = ContourSpec::plain(kind);
    let mut out = Vec::new();
    let mut n = 4;
    while n <= n_max {
        let q = QuadratureRule::new(rule, n).map_err(|e| e.to_string())?;
        let res = synthesis::synthesize(&spec, q, &obs, &medium).map_err(|e| e.to_string())?;
        out.push(n as f64);
        out.push(res.error.max(synthesis::ERROR_FLOOR));
        n *= 2;
    }
    Ok(out)
}

/// Loci for `n_loss` media k0 = 2pi + i k0'' (k0'' from 0 in steps of
/// `loss_step`) and kz stepped by k0'/40 over |kz| <= 2 k0'.
/// `[n_loss, n_kz, then per medium n_kz pairs (re, im)]`.
pub fn krho_loci_data(n_loss: usize, loss_step: f64) -> Result<Vec<f64>, String> {
    let media = (0..n_loss)
        .map(|i| Medium::new(Complex64::new(2.0 * PI, i as f64 * loss_step)))
        .collect::<Result<Vec<_>, _>>()
        .map_err(|e| e.to_string())?;
    let step = 2.0 * PI / 40.0;
    let kz: Vec<f64> = (-80..=80).map(|j| j as f64 * step).collect();
    let loci = spectral::krho_loci(&media, &kz).map_err(|e| e.to_string())?;
    let mut out = vec![n_loss as f64, kz.len() as f64];
    out.extend(loci.iter().flat_map(|k| [k.re, k.im]));
    Ok(out)
}

#[wasm_bindgen]
pub fn theta_map(r: f64, theta0: f64, loss: f64, n_re: usize, n_im: usize) -> Result<Vec<f64>, JsValue> {
    theta_map_data(r, theta0, loss, n_re, n_im).map_err(|e| JsValue::from_str(&e))
}

#[wasm_bindgen]
pub fn path_nodes(path: &str, r: f64, theta0: f64, loss: f64, n: usize) -> Result<Vec<f64>, JsValue> {
    path_nodes_data(path, r, theta0, loss, n).map_err(|e| JsValue::from_str(&e))
}

#[wasm_bindgen]
pub fn convergence(path: &str, rule: &str, r: f64, theta0: f64, loss: f64, n_max: usize) -> Result<Vec<f64>, JsValue> {
    convergence_data(path, rule, r, theta0, loss, n_max).map_err(|e| JsValue::from_str(&e))
}

#[wasm_bindgen]
pub fn krho_loci(n_loss: usize, loss_step: f64) -> Result<Vec<f64>, JsValue> {
    krho_loci_data(n_loss, loss_step).map_err(|e| JsValue::from_str(&e))
}
