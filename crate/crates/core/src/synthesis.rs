//! Fourier synthesis of the 3-D Green's function from 2.5-D modes and the
//! convergence fit used to classify error sequences.

use std::f64::consts::PI;

use num_complex::Complex64;
use thiserror::Error;

use crate::contours::{self, ContourError, ContourSpec, ContourWarning, PathKind, SampledContour, ThetaGrid};
use crate::quadrature::QuadratureRule;
use crate::spectral::{self, Medium, Observation, SpectralError};
use crate::special::{self, HankelKind, SpecialFunctionError};

/// Lower clamp applied to errors before fitting or plotting.
pub const ERROR_FLOOR: f64 = 1e-15;

/// exp() of anything below this underflows to zero.
const UNDERFLOW_EXPONENT: f64 = -745.0;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum SynthesisError {
    #[error("integrand singular: {0}")]
    Singular(&'static str),
    #[error("non-finite sum on the {0} path")]
    NonFinite(PathKind),
    #[error(transparent)]
    Contour(#[from] ContourError),
    #[error(transparent)]
    Spectral(#[from] SpectralError),
    #[error(transparent)]
    Special(#[from] SpecialFunctionError),
}

#[derive(Debug, Error, Clone, PartialEq)]
pub enum FitError {
    #[error("need at least 4 records, got {0}")]
    TooFewRecords(usize),
    #[error("node counts must be strictly increasing")]
    NotIncreasing,
    #[error("error values must be finite and non-negative")]
    InvalidError,
}

/// e^{i k0 r} / (4 pi r).
pub fn greens3d_exact(obs: &Observation, medium: &Medium) -> Complex64 {
    let r = obs.r();
    (Complex64::i() * medium.k0() * r).exp() / (4.0 * PI * r)
}

/// (i/4) H0^(1)(k_rho |rho - rho'|) e^{-i kz z'}.
pub fn greens25(
    obs_rho: [f64; 2],
    source: [f64; 3],
    kz: Complex64,
    medium: &Medium,
) -> Result<Complex64, SynthesisError> {
    let d = (obs_rho[0] - source[0]).hypot(obs_rho[1] - source[1]);
    if d == 0.0 {
        return Err(SynthesisError::Singular("coincident transverse points"));
    }
    let krho = spectral::physical_krho(kz, medium);
    let h = special::hankel0(HankelKind::First, krho * d)?;
    Ok(0.25 * Complex64::i() * h * (-Complex64::i() * kz * source[2]).exp())
}

/// 4 pi r |g - I| / |e^{i k0 r}|, i.e. |g - I| / |g|.
pub fn relative_error(value: Complex64, obs: &Observation, medium: &Medium) -> f64 {
    let r = obs.r();
    let g = greens3d_exact(obs, medium);
    4.0 * PI * r * (g - value).norm() / (Complex64::i() * medium.k0() * r).exp().norm()
}

#[derive(Debug, Clone, PartialEq)]
pub struct SynthesisResult {
    pub value: Complex64,
    pub g_exact: Complex64,
    pub error: f64,
    pub n: usize,
    pub spec: ContourSpec,
    pub rule: QuadratureRule,
    /// Medium after regularization; g_exact and error refer to it.
    pub medium: Medium,
    pub warnings: Vec<ContourWarning>,
}

/// Sums the synthesis integral over an already sampled contour.
///
/// Each term is weight * m * H0(k_rho rho) e^{i kz z}, with m = k_rho on the
/// theta paths (dkz = k_rho dtheta) and 1 on the kz path. The factor
/// e^{i k0 r} is pulled out so the remaining exponent stays moderate on
/// deep evanescent nodes.
pub fn integrate(contour: &SampledContour, obs: &Observation) -> Result<Complex64, SynthesisError> {
    let rho = obs.rho();
    if rho == 0.0 {
        return Err(SynthesisError::Singular("rho = 0"));
    }
    let reference = contour.reference_exponent(obs);
    let i = Complex64::i();
    let mut sum = Complex64::new(0.0, 0.0);
    for p in &contour.points {
        let krho = p.spectral.krho;
        let w = krho * rho;
        let exponent = i * w + i * p.spectral.kz * obs.z() - reference;
        if exponent.re < UNDERFLOW_EXPONENT || p.weight == Complex64::new(0.0, 0.0) {
            continue;
        }
        if w.norm() == 0.0 {
            // a node exactly on the branch point takes the suppressed limit
            // k_rho log(k_rho) -> 0; on the kz path dkz = k_rho dtheta
            // carries the same factor
            continue;
        }
        let measure = if contour.kind == PathKind::Linear { Complex64::new(1.0, 0.0) } else { krho };
        sum += p.weight * measure * special::hankel1_scaled(w)? * exponent.exp();
    }
    let value = i / (8.0 * PI) * reference.exp() * sum;
    if value.re.is_finite() && value.im.is_finite() {
        Ok(value)
    } else {
        Err(SynthesisError::NonFinite(contour.kind))
    }
}

pub fn synthesize(
    spec: &ContourSpec,
    rule: QuadratureRule,
    obs: &Observation,
    medium: &Medium,
) -> Result<SynthesisResult, SynthesisError> {
    if obs.rho() == 0.0 {
        return Err(SynthesisError::Singular("rho = 0"));
    }
    let contour = contours::build_contour(spec, rule, obs, medium)?;
    let value = integrate(&contour, obs)?;
    let eff = contour.medium;
    Ok(SynthesisResult {
        value,
        g_exact: greens3d_exact(obs, &eff),
        error: relative_error(value, obs, &eff),
        n: rule.n(),
        spec: *spec,
        rule,
        medium: eff,
        warnings: contour.warnings,
    })
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ConvergenceFit {
    /// Least-squares slope of ln E against ln N over the fit window; `None`
    /// when everything sits at the floor or the window is too short.
    pub algebraic_slope: Option<f64>,
    pub is_exponential: bool,
    /// Inclusive index range used for the fit.
    pub window: Option<(usize, usize)>,
}

fn least_squares(x: &[f64], y: &[f64]) -> (f64, f64, f64) {
    let n = x.len() as f64;
    let mx = x.iter().sum::<f64>() / n;
    let my = y.iter().sum::<f64>() / n;
    let sxx: f64 = x.iter().map(|a| (a - mx) * (a - mx)).sum();
    let sxy: f64 = x.iter().zip(y).map(|(a, b)| (a - mx) * (b - my)).sum();
    let slope = if sxx > 0.0 { sxy / sxx } else { 0.0 };
    let icept = my - slope * mx;
    let resid = x.iter().zip(y).map(|(a, b)| (b - icept - slope * a).powi(2)).sum::<f64>().sqrt();
    (slope, icept, resid)
}

/// Curvature coefficient q of the least-squares fit y ~ a + b x + q x^2.
fn quadratic_curvature(x: &[f64], y: &[f64]) -> f64 {
    let n = x.len() as f64;
    let mx = x.iter().sum::<f64>() / n;
    let my = y.iter().sum::<f64>() / n;
    let m2 = x.iter().map(|a| (a - mx).powi(2)).sum::<f64>() / n;
    // columns u = x - mean and v = u^2 - mean(u^2) are both centered, so the
    // intercept drops out of the normal equations
    let (mut suu, mut suv, mut svv, mut suy, mut svy) = (0.0, 0.0, 0.0, 0.0, 0.0);
    for (a, b) in x.iter().zip(y) {
        let u = a - mx;
        let v = u * u - m2;
        let w = b - my;
        suu += u * u;
        suv += u * v;
        svv += v * v;
        suy += u * w;
        svy += v * w;
    }
    let det = suu * svv - suv * suv;
    if det.abs() < 1e-300 {
        return 0.0;
    }
    (suu * svy - suv * suy) / det
}

/// Classifies an error sequence E(N).
///
/// Errors are clamped at [`ERROR_FLOOR`]. The fit window starts at the first
/// record with E < 0.1 and ends before a stagnation tail (a suffix of three or
/// more records whose effective order is below 0.5) or a run of floor values.
/// The sequence counts as exponential when the semilog fit beats the log-log
/// fit by a factor of two in residual, when some pair of neighbours shows a
/// local order of 8 or more, or when the local order rises by 2 or more
/// across the window.
pub fn fit_convergence(records: &[(usize, f64)]) -> Result<ConvergenceFit, FitError> {
    if records.len() < 4 {
        return Err(FitError::TooFewRecords(records.len()));
    }
    if records.windows(2).any(|w| w[1].0 <= w[0].0) || records[0].0 == 0 {
        return Err(FitError::NotIncreasing);
    }
    if records.iter().any(|r| !(r.1 >= 0.0 && r.1.is_finite())) {
        return Err(FitError::InvalidError);
    }
    let n: Vec<f64> = records.iter().map(|r| r.0 as f64).collect();
    let e: Vec<f64> = records.iter().map(|r| r.1.max(ERROR_FLOOR)).collect();
    let at_floor = |v: f64| v <= 10.0 * ERROR_FLOOR;
    if e.iter().all(|&v| at_floor(v)) {
        return Ok(ConvergenceFit { algebraic_slope: None, is_exponential: true, window: None });
    }

    let last = e.len() - 1;
    let mut end = last;
    for s in 0..=last.saturating_sub(2) {
        let min = e[s..].iter().cloned().fold(f64::INFINITY, f64::min);
        let order = (e[s] / min).ln() / (n[last] / n[s]).ln();
        if order < 0.5 {
            end = s;
            break;
        }
    }
    while end >= 1 && at_floor(e[end]) && at_floor(e[end - 1]) {
        end -= 1;
    }
    let start = e.iter().position(|&v| v < 0.1).unwrap_or(e.len());
    if start > end || end - start + 1 < 2 {
        return Ok(ConvergenceFit { algebraic_slope: None, is_exponential: false, window: None });
    }

    let ln_n: Vec<f64> = n[start..=end].iter().map(|v| v.ln()).collect();
    let ln_e: Vec<f64> = e[start..=end].iter().map(|v| v.ln()).collect();
    let lin_n = &n[start..=end];
    let (slope, _, loglog_resid) = least_squares(&ln_n, &ln_e);

    let max_local_order = ln_n
        .windows(2)
        .zip(ln_e.windows(2))
        .map(|(x, y)| -(y[1] - y[0]) / (x[1] - x[0]))
        .fold(f64::NEG_INFINITY, f64::max);
    let mut exponential = max_local_order >= 8.0;
    if ln_n.len() >= 3 {
        let (semi_slope, _, semi_resid) = least_squares(lin_n, &ln_e);
        if semi_resid < 0.5 * loglog_resid && semi_slope < 0.0 {
            exponential = true;
        }
        let q = quadratic_curvature(&ln_n, &ln_e);
        let rise = -2.0 * q * (ln_n[ln_n.len() - 1] - ln_n[0]);
        if rise >= 2.0 {
            exponential = true;
        }
    }
    Ok(ConvergenceFit { algebraic_slope: Some(slope), is_exponential: exponential, window: Some((start, end)) })
}

/// Convenience wrapper over results ordered by N.
pub fn fit_results(results: &[SynthesisResult]) -> Result<ConvergenceFit, FitError> {
    let pairs: Vec<(usize, f64)> = results.iter().map(|r| (r.n, r.error)).collect();
    fit_convergence(&pairs)
}

/// One cell of a theta-plane map.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ThetaMapCell {
    pub theta: Complex64,
    /// ln |(i/8pi) k0 cos(theta) H0(k0 cos(theta) rho) e^{i kz z}|
    pub logabs_integrand: f64,
    pub re_f: f64,
}

/// Samples ln|integrand| and Re f on `grid`, whose offsets are taken from theta0.
/// Cells that land exactly on a singular point are skipped.
pub fn theta_plane_map(
    grid: &ThetaGrid,
    obs: &Observation,
    medium: &Medium,
) -> Result<Vec<ThetaMapCell>, SynthesisError> {
    grid.validate()?;
    let mut cells = Vec::with_capacity(grid.n_re * grid.n_im);
    for i in 0..grid.n_im {
        for j in 0..grid.n_re {
            let theta = Complex64::new(obs.theta0() + grid.re_at(j), grid.im_at(i));
            match spectral::integrand_parts(theta, obs, medium) {
                Ok((h_hat, f)) => cells.push(ThetaMapCell {
                    theta,
                    logabs_integrand: (h_hat.norm() / (8.0 * PI)).ln() + f.re,
                    re_f: f.re,
                }),
                Err(SpectralError::Singular(_)) => continue,
                Err(e) => return Err(e.into()),
            }
        }
    }
    Ok(cells)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::quadrature::RuleKind;
    use std::f64::consts::FRAC_PI_6;

    fn lossless() -> Medium {
        Medium::lossless(2.0 * PI).unwrap()
    }

    #[test]
    fn closed_form_examples() {
        let obs = Observation::new(1.0, 0.0).unwrap();
        let g = greens3d_exact(&obs, &lossless());
        assert!((g - Complex64::new(1.0 / (4.0 * PI), 0.0)).norm() < 1e-15);
        let lossy = Medium::new(Complex64::new(2.0 * PI, PI)).unwrap();
        let g = greens3d_exact(&obs, &lossy);
        assert!((g.norm() - (-PI).exp() / (4.0 * PI)).abs() < 1e-16);
    }

    #[test]
    fn greens25_reduces_to_2d() {
        let m = lossless();
        let g = greens25([1.0, 0.0], [0.0, 0.0, 0.0], Complex64::new(0.0, 0.0), &m).unwrap();
        let h = special::hankel0(HankelKind::First, Complex64::new(2.0 * PI, 0.0)).unwrap();
        assert!((g - 0.25 * Complex64::i() * h).norm() < 1e-15);
        let g2 = greens25([1.0, 0.0], [0.0, 0.0, 0.0], Complex64::new(3.0, 0.0), &m).unwrap();
        let h2 = special::hankel0(HankelKind::First, spectral::physical_krho(Complex64::new(3.0, 0.0), &m)).unwrap();
        assert!((g2 - 0.25 * Complex64::i() * h2).norm() < 1e-15);
        assert!(greens25([1.0, 2.0], [1.0, 2.0, 0.5], Complex64::new(0.0, 0.0), &m).is_err());
    }

    #[test]
    fn exact_sd_at_n100() {
        let obs = Observation::from_polar(2f64.sqrt(), FRAC_PI_6).unwrap();
        let rule = QuadratureRule::new(RuleKind::GaussLegendre, 100).unwrap();
        let res = synthesize(&ContourSpec::plain(PathKind::ExactSDTheta), rule, &obs, &lossless()).unwrap();
        assert!(res.error <= 1e-10, "E = {:e}", res.error);
        let recomputed = 4.0 * PI * obs.r() * (res.g_exact - res.value).norm()
            / (Complex64::i() * res.medium.k0() * obs.r()).exp().norm();
        assert!((recomputed - res.error).abs() <= 1e-15);
    }

    #[test]
    fn rho_zero_is_rejected() {
        let obs = Observation::new(0.0, 1.0).unwrap();
        let rule = QuadratureRule::new(RuleKind::GaussLegendre, 8).unwrap();
        let r = synthesize(&ContourSpec::plain(PathKind::ExactSDTheta), rule, &obs, &lossless());
        assert!(matches!(r, Err(SynthesisError::Singular(_))));
    }

    fn sweep() -> Vec<usize> {
        (2..=12).map(|k| 1usize << k).collect()
    }

    #[test]
    fn fit_synthetic_power_laws() {
        let recs: Vec<(usize, f64)> = sweep().into_iter().map(|n| (n, 0.3 / n as f64)).collect();
        let fit = fit_convergence(&recs).unwrap();
        assert!((fit.algebraic_slope.unwrap() + 1.0).abs() < 0.01);
        assert!(!fit.is_exponential);

        let recs: Vec<(usize, f64)> = sweep().into_iter().map(|n| (n, 1.0 / (n as f64).powi(4))).collect();
        let fit = fit_convergence(&recs).unwrap();
        assert!((fit.algebraic_slope.unwrap() + 4.0).abs() < 0.01);
        assert!(!fit.is_exponential);
    }

    #[test]
    fn fit_synthetic_exponential() {
        let recs: Vec<(usize, f64)> = (1..=20).map(|n| (n, 0.05 * 2f64.powi(-(n as i32)))).collect();
        assert!(fit_convergence(&recs).unwrap().is_exponential);
        let floor: Vec<(usize, f64)> = sweep().into_iter().map(|n| (n, 0.0)).collect();
        let fit = fit_convergence(&floor).unwrap();
        assert!(fit.is_exponential && fit.algebraic_slope.is_none());
    }

    #[test]
    fn fit_input_validation() {
        assert_eq!(fit_convergence(&[(1, 0.1), (2, 0.05)]), Err(FitError::TooFewRecords(2)));
        assert_eq!(fit_convergence(&[(1, 0.1), (2, 0.05), (2, 0.01), (4, 0.001)]), Err(FitError::NotIncreasing));
        assert_eq!(fit_convergence(&[(1, 0.1), (2, f64::NAN), (3, 0.01), (4, 0.001)]), Err(FitError::InvalidError));
    }

    #[test]
    fn fit_plateau_is_not_exponential() {
        // algebraic decay into a stagnation level well above the floor
        let recs: Vec<(usize, f64)> =
            sweep().into_iter().map(|n| (n, 0.05 / (n as f64).powi(2) + 3e-3)).collect();
        let fit = fit_convergence(&recs).unwrap();
        assert!(!fit.is_exponential);
    }
}
