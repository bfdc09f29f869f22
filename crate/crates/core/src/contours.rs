//! Sampled integration paths for the six formulations.
//!
//! Every sample carries the full measure of its node: quadrature weight times
//! the derivative of the spectral variable (theta, or kz for the linear path)
//! with respect to the rule's canonical parameter. Summing weight * integrand
//! therefore approximates the same spectral integral for every variant.

use std::f64::consts::{FRAC_PI_2, FRAC_PI_4, PI};
use std::fmt;
use std::str::FromStr;

use num_complex::Complex64;
use thiserror::Error;

use crate::quadrature::{self, QuadratureError, QuadratureRule, RuleKind};
use crate::spectral::{self, Medium, Observation, SpectralError, SpectralPoint};

pub const DEFAULT_KZ_HALFWIDTH: f64 = 2.0;
pub const DEFAULT_THETA_IMAG_MAX: f64 = 1.5 * PI;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum ContourError {
    #[error("rule {rule} cannot be used with the {path} path")]
    IncompatibleRule { path: PathKind, rule: RuleKind },
    #[error("invalid contour parameter: {0}")]
    InvalidParameter(String),
    #[error("unknown path `{0}`")]
    UnknownPath(String),
    #[error(transparent)]
    Quadrature(#[from] QuadratureError),
    #[error(transparent)]
    Spectral(#[from] SpectralError),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum PathKind {
    Linear,
    Angular,
    QuadraticSD,
    ExactSDTheta,
    ExactSDS,
    ExactSDT,
}

impl PathKind {
    pub const ALL: [PathKind; 6] = [
        PathKind::Linear,
        PathKind::Angular,
        PathKind::QuadraticSD,
        PathKind::ExactSDTheta,
        PathKind::ExactSDS,
        PathKind::ExactSDT,
    ];

    pub fn name(self) -> &'static str {
        match self {
            PathKind::Linear => "Linear",
            PathKind::Angular => "Angular",
            PathKind::QuadraticSD => "QuadraticSD",
            PathKind::ExactSDTheta => "ExactSDTheta",
            PathKind::ExactSDS => "ExactSD_S",
            PathKind::ExactSDT => "ExactSD_T",
        }
    }

    /// Rules that make sense on this path.
    pub fn compatible_rules(self) -> &'static [RuleKind] {
        match self {
            PathKind::ExactSDS => &[RuleKind::GaussHermite],
            _ => &[RuleKind::RiemannMidpoint, RuleKind::GaussLegendre],
        }
    }

    pub fn accepts(self, rule: RuleKind) -> bool {
        self.compatible_rules().contains(&rule)
    }

    /// True for the three exact steepest-descent forms.
    pub fn is_exact_descent(self) -> bool {
        matches!(self, PathKind::ExactSDTheta | PathKind::ExactSDS | PathKind::ExactSDT)
    }
}

impl fmt::Display for PathKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for PathKind {
    type Err = ContourError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let key = s.trim().to_ascii_lowercase().replace(['-', '_', ' '], "");
        PathKind::ALL
            .into_iter()
            .find(|p| p.name().to_ascii_lowercase().replace('_', "") == key)
            .ok_or_else(|| ContourError::UnknownPath(s.to_string()))
    }
}

/// Path selection with its own parameters.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum Variant {
    Linear { kz_halfwidth_multiplier: f64 },
    Angular { theta_imag_max: f64 },
    /// `epsilon: None` means pi/2 - alpha.
    QuadraticSD { epsilon: Option<f64> },
    ExactSDTheta,
    ExactSDS,
    ExactSDT,
}

impl Variant {
    pub fn kind(&self) -> PathKind {
        match self {
            Variant::Linear { .. } => PathKind::Linear,
            Variant::Angular { .. } => PathKind::Angular,
            Variant::QuadraticSD { .. } => PathKind::QuadraticSD,
            Variant::ExactSDTheta => PathKind::ExactSDTheta,
            Variant::ExactSDS => PathKind::ExactSDS,
            Variant::ExactSDT => PathKind::ExactSDT,
        }
    }

    pub fn default_for(kind: PathKind) -> Self {
        match kind {
            PathKind::Linear => Variant::Linear { kz_halfwidth_multiplier: DEFAULT_KZ_HALFWIDTH },
            PathKind::Angular => Variant::Angular { theta_imag_max: DEFAULT_THETA_IMAG_MAX },
            PathKind::QuadraticSD => Variant::QuadraticSD { epsilon: None },
            PathKind::ExactSDTheta => Variant::ExactSDTheta,
            PathKind::ExactSDS => Variant::ExactSDS,
            PathKind::ExactSDT => Variant::ExactSDT,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Regularization {
    /// theta0 is replaced by theta0 (1 - delta) as the path center.
    pub delta_shift: f64,
    /// Added to k0'' before anything else is derived.
    pub imposed_loss: f64,
    /// Multiplies the truncation extents of Linear and Angular.
    pub limit_scale: f64,
}

impl Default for Regularization {
    fn default() -> Self {
        Self { delta_shift: 0.0, imposed_loss: 0.0, limit_scale: 1.0 }
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ContourSpec {
    variant: Variant,
    regularization: Regularization,
}

impl ContourSpec {
    pub fn new(variant: Variant, regularization: Regularization) -> Result<Self, ContourError> {
        let bad = |msg: String| Err(ContourError::InvalidParameter(msg));
        let Regularization { delta_shift, imposed_loss, limit_scale } = regularization;
        if !(0.0..1.0).contains(&delta_shift) {
            return bad(format!("delta_shift = {delta_shift} outside [0, 1)"));
        }
        if !(imposed_loss >= 0.0 && imposed_loss.is_finite()) {
            return bad(format!("imposed_loss = {imposed_loss} must be >= 0"));
        }
        if !(limit_scale > 0.0 && limit_scale.is_finite()) {
            return bad(format!("limit_scale = {limit_scale} must be > 0"));
        }
        match variant {
            Variant::Linear { kz_halfwidth_multiplier: m } if !(m > 0.0 && m.is_finite()) => {
                return bad(format!("kz_halfwidth_multiplier = {m} must be > 0"));
            }
            Variant::Angular { theta_imag_max: t } if !(t > 0.0 && t.is_finite()) => {
                return bad(format!("theta_imag_max = {t} must be > 0"));
            }
            Variant::QuadraticSD { epsilon: Some(e) } if !(e > 0.0 && e <= PI) => {
                return bad(format!("epsilon = {e} outside (0, pi]"));
            }
            _ => {}
        }
        Ok(Self { variant, regularization })
    }

    pub fn plain(kind: PathKind) -> Self {
        Self { variant: Variant::default_for(kind), regularization: Regularization::default() }
    }

    pub fn with_regularization(kind: PathKind, regularization: Regularization) -> Result<Self, ContourError> {
        Self::new(Variant::default_for(kind), regularization)
    }

    pub fn variant(&self) -> Variant {
        self.variant
    }

    pub fn kind(&self) -> PathKind {
        self.variant.kind()
    }

    pub fn regularization(&self) -> Regularization {
        self.regularization
    }

    /// Medium actually integrated: the imposed loss is absolute in k0''.
    pub fn effective_medium(&self, medium: &Medium) -> Result<Medium, ContourError> {
        Ok(medium.with_added_loss(self.regularization.imposed_loss)?)
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ContourSample {
    /// Canonical abscissa of the rule.
    pub param: f64,
    pub spectral: SpectralPoint,
    /// Quadrature weight times the path Jacobian.
    pub weight: Complex64,
    /// Known value of f_c(theta) - f_c(theta_c) on the S and T paths
    /// (-s^2 and -tan^2 t), where f_c is the phase for an observation at the
    /// path center. Zero elsewhere.
    pub kernel_exponent: f64,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ContourWarning {
    /// The quadratic path reaches past the real-part span |theta'| < pi/2 - alpha
    /// of the exact steepest-descent path.
    LeavesStrip,
    /// Some node sits where Re f exceeds its saddle value.
    GrowthRegion,
}

#[derive(Debug, Clone, PartialEq)]
pub struct SampledContour {
    pub kind: PathKind,
    pub rule: QuadratureRule,
    pub points: Vec<ContourSample>,
    /// Medium after regularization.
    pub medium: Medium,
    /// theta0 (1 - delta).
    pub theta_center: f64,
    pub warnings: Vec<ContourWarning>,
}

impl SampledContour {
    /// Exponent factored out of every term by the synthesis, f(theta0) = i k0 r.
    pub fn reference_exponent(&self, obs: &Observation) -> Complex64 {
        Complex64::i() * self.medium.k0() * obs.r()
    }
}

/// dtheta/dtheta' on the exact steepest-descent path, theta' measured from the center.
pub fn exact_sd_correction(theta_p: f64, alpha: f64) -> Complex64 {
    let a = theta_p.cos() / (alpha.cos() - theta_p.sin()) + (alpha - theta_p).tan();
    Complex64::new(1.0, -a)
}

/// theta'' as a function of theta' on the exact steepest-descent path.
pub fn exact_sd_imag(theta_p: f64, alpha: f64) -> f64 {
    ((alpha.cos() - theta_p.sin()) / (alpha - theta_p).cos()).ln()
}

/// Offset from the center on the s path and its derivative d(theta)/ds.
pub fn s_path(s: f64, k0r: Complex64) -> (Complex64, Complex64) {
    let i = Complex64::i();
    // sgn(s) acos(1 - s^2/(i k0 r)), rewritten so small |s| keeps its digits
    let offset = 2.0 * (s / (2.0 * i * k0r).sqrt()).asin();
    let jac = -2.0 * i / (s * s - 2.0 * i * k0r).sqrt();
    (offset, jac)
}

/// Offset from the center on the t path and its derivative d(theta)/dt.
pub fn t_path(t: f64, k0r: Complex64) -> (Complex64, Complex64) {
    let i = Complex64::i();
    let tan = t.tan();
    let sec2 = 1.0 + tan * tan;
    let offset = 2.0 * (tan / (2.0 * i * k0r).sqrt()).asin();
    let jac = -2.0 * i * sec2 / (tan * tan - 2.0 * i * k0r).sqrt();
    (offset, jac)
}

/// Splits `n` into parts proportional to `lengths` by largest remainder.
fn split_budget(n: usize, lengths: &[f64]) -> Vec<usize> {
    let total: f64 = lengths.iter().sum();
    let ideal: Vec<f64> = lengths.iter().map(|l| n as f64 * l / total).collect();
    let mut parts: Vec<usize> = ideal.iter().map(|x| x.floor() as usize).collect();
    let mut left = n - parts.iter().sum::<usize>();
    let mut order: Vec<usize> = (0..lengths.len()).collect();
    order.sort_by(|&a, &b| {
        let (ra, rb) = (ideal[a] - ideal[a].floor(), ideal[b] - ideal[b].floor());
        rb.partial_cmp(&ra).unwrap_or(std::cmp::Ordering::Equal).then(a.cmp(&b))
    });
    for &i in &order {
        if left == 0 {
            break;
        }
        parts[i] += 1;
        left -= 1;
    }
    parts
}

pub fn build_contour(
    spec: &ContourSpec,
    rule: QuadratureRule,
    obs: &Observation,
    medium: &Medium,
) -> Result<SampledContour, ContourError> {
    let kind = spec.kind();
    if !kind.accepts(rule.kind()) {
        return Err(ContourError::IncompatibleRule { path: kind, rule: rule.kind() });
    }
    let medium = spec.effective_medium(medium)?;
    let reg = spec.regularization();
    let theta_c = obs.theta0() * (1.0 - reg.delta_shift);
    let alpha = medium.loss_angle();
    let k0 = medium.k0();
    let k0r = k0 * obs.r();
    let center = Complex64::new(theta_c, 0.0);

    let on_theta = |param: f64, theta: Complex64, weight: Complex64, kernel: f64| ContourSample {
        param,
        spectral: spectral::theta_to_modes(theta, &medium),
        weight,
        kernel_exponent: kernel,
    };

    let mut warnings = Vec::new();
    let points: Vec<ContourSample> = match spec.variant() {
        Variant::Linear { kz_halfwidth_multiplier } => {
            let half = kz_halfwidth_multiplier * k0.re * reg.limit_scale;
            let set = quadrature::nodes(rule)?;
            set.abscissas
                .iter()
                .zip(&set.weights)
                .map(|(&x, &w)| ContourSample {
                    param: x,
                    spectral: spectral::kz_to_modes(Complex64::new(half * x, 0.0), &medium),
                    weight: Complex64::new(half * w, 0.0),
                    kernel_exponent: 0.0,
                })
                .collect()
        }
        Variant::Angular { theta_imag_max } => {
            // Legs run kz from -inf to +inf: down the line Re theta = -pi/2
            // (k_rho = i k0 sinh(theta'') in the first quadrant), across the
            // real interval, then down Re theta = +pi/2.
            let tmax = theta_imag_max * reg.limit_scale;
            let budget = split_budget(rule.n(), &[tmax, PI, tmax]);
            let i = Complex64::i();
            let legs: [(Complex64, Complex64); 3] = [
                (Complex64::new(-FRAC_PI_2, tmax), -i * tmax),
                (Complex64::new(-FRAC_PI_2, 0.0), Complex64::new(PI, 0.0)),
                (Complex64::new(FRAC_PI_2, 0.0), -i * tmax),
            ];
            let mut pts = Vec::with_capacity(rule.n());
            for (&(start, dir), &n) in legs.iter().zip(&budget) {
                if n == 0 {
                    continue;
                }
                let set = quadrature::nodes(QuadratureRule::new(rule.kind(), n)?)?;
                for (&x, &w) in set.abscissas.iter().zip(&set.weights) {
                    let u = 0.5 * (x + 1.0);
                    pts.push(on_theta(x, start + dir * u, dir * (0.5 * w), 0.0));
                }
            }
            pts
        }
        Variant::QuadraticSD { epsilon } => {
            let eps = epsilon.unwrap_or(FRAC_PI_2 - alpha);
            let dir = Complex64::from_polar(1.0, -(FRAC_PI_4 + alpha / 2.0));
            if eps * dir.re >= FRAC_PI_2 - alpha {
                warnings.push(ContourWarning::LeavesStrip);
            }
            let set = quadrature::nodes(rule)?;
            set.abscissas
                .iter()
                .zip(&set.weights)
                .map(|(&x, &w)| on_theta(x, center + dir * (eps * x), dir * (eps * w), 0.0))
                .collect()
        }
        Variant::ExactSDTheta => {
            let span = FRAC_PI_2 - alpha;
            let set = quadrature::nodes(rule)?;
            set.abscissas
                .iter()
                .zip(&set.weights)
                .map(|(&x, &w)| {
                    let tp = x * span;
                    let theta = center + Complex64::new(tp, exact_sd_imag(tp, alpha));
                    on_theta(x, theta, exact_sd_correction(tp, alpha) * (w * span), 0.0)
                })
                .collect()
        }
        Variant::ExactSDS => {
            let set = quadrature::nodes(rule)?;
            let scaled = set.scaled_weights.as_ref().expect("Gauss-Hermite sets carry scaled weights");
            set.abscissas
                .iter()
                .zip(scaled)
                .map(|(&s, &ws)| {
                    // e^{-s^2} of the rule is part of e^{f(theta)}, so the
                    // scaled weight w e^{s^2} is the measure here
                    let (offset, jac) = s_path(s, k0r);
                    on_theta(s, center + offset, jac * ws, -s * s)
                })
                .collect()
        }
        Variant::ExactSDT => {
            let set = quadrature::nodes(rule)?;
            set.abscissas
                .iter()
                .zip(&set.weights)
                .map(|(&x, &w)| {
                    let t = x * FRAC_PI_2;
                    let (offset, jac) = t_path(t, k0r);
                    let tan = t.tan();
                    on_theta(x, center + offset, jac * (w * FRAC_PI_2), -tan * tan)
                })
                .collect()
        }
    };

    if kind == PathKind::QuadraticSD {
        let saddle = spectral::phase(center, obs, &medium).re;
        let tol = 1e-12 * k0.norm() * obs.r();
        if points
            .iter()
            .filter_map(|p| p.spectral.theta)
            .any(|t| spectral::phase(t, obs, &medium).re > saddle + tol)
        {
            warnings.push(ContourWarning::GrowthRegion);
        }
    }

    Ok(SampledContour { kind, rule, points, medium, theta_center: theta_c, warnings })
}

/// Rectangle in the (theta', theta'') offset plane around the saddle.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ThetaGrid {
    pub re_min: f64,
    pub re_max: f64,
    pub im_min: f64,
    pub im_max: f64,
    pub n_re: usize,
    pub n_im: usize,
}

impl ThetaGrid {
    pub fn validate(&self) -> Result<(), ContourError> {
        let ok = self.n_re >= 2
            && self.n_im >= 2
            && self.re_max > self.re_min
            && self.im_max > self.im_min
            && [self.re_min, self.re_max, self.im_min, self.im_max].iter().all(|v| v.is_finite());
        if ok {
            Ok(())
        } else {
            Err(ContourError::InvalidParameter(format!("degenerate grid {self:?}")))
        }
    }

    pub fn re_at(&self, j: usize) -> f64 {
        self.re_min + (self.re_max - self.re_min) * j as f64 / (self.n_re - 1) as f64
    }

    pub fn im_at(&self, i: usize) -> f64 {
        self.im_min + (self.im_max - self.im_min) * i as f64 / (self.n_im - 1) as f64
    }
}

/// Closed form of Re f(theta0 + theta' + i theta'') - Re f(theta0).
///
/// Re f(theta0 + theta' + i theta'') itself is
/// -(r|k0|/2) [e^{-theta''} sin(alpha + theta') + e^{theta''} sin(alpha - theta')].
pub fn growth_exponent(medium: &Medium, obs: &Observation, theta_p: f64, theta_pp: f64) -> f64 {
    let alpha = medium.loss_angle();
    let scale = 0.5 * obs.r() * medium.magnitude();
    let level = -scale * ((-theta_pp).exp() * (alpha + theta_p).sin() + theta_pp.exp() * (alpha - theta_p).sin());
    level + obs.r() * medium.magnitude() * alpha.sin()
}

/// Growth exponent over `grid`, rows by theta'' (ascending), columns by theta'.
/// Positive entries are where the integrand outgrows its saddle value.
pub fn stability_map(medium: &Medium, obs: &Observation, grid: &ThetaGrid) -> Result<Vec<Vec<f64>>, ContourError> {
    grid.validate()?;
    Ok((0..grid.n_im)
        .map(|i| (0..grid.n_re).map(|j| growth_exponent(medium, obs, grid.re_at(j), grid.im_at(i))).collect())
        .collect())
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::f64::consts::FRAC_PI_6;

    fn lossless() -> Medium {
        Medium::lossless(2.0 * PI).unwrap()
    }

    fn obs() -> Observation {
        Observation::from_polar(2f64.sqrt(), FRAC_PI_6).unwrap()
    }

    fn build(kind: PathKind, rule: RuleKind, n: usize) -> SampledContour {
        let rule = QuadratureRule::new(rule, n).unwrap();
        build_contour(&ContourSpec::plain(kind), rule, &obs(), &lossless()).unwrap()
    }

    #[test]
    fn linear_midpoint_example() {
        let c = build(PathKind::Linear, RuleKind::RiemannMidpoint, 4);
        let kz: Vec<f64> = c.points.iter().map(|p| p.spectral.kz.re).collect();
        for (got, want) in kz.iter().zip([-3.0 * PI, -PI, PI, 3.0 * PI]) {
            assert!((got - want).abs() < 1e-12);
        }
        assert!(c.points.iter().all(|p| (p.weight.re - 2.0 * PI).abs() < 1e-12 && p.weight.im == 0.0));
    }

    #[test]
    fn exact_sd_theta_examples() {
        assert!((exact_sd_imag(FRAC_PI_4, 0.0) - (-0.881374)).abs() < 1e-6);
        assert!((exact_sd_imag(FRAC_PI_4, 0.0) - (2f64.sqrt() - 1.0).ln()).abs() < 1e-15);
        assert_eq!(exact_sd_correction(0.0, 0.0), Complex64::new(1.0, -1.0));

        let c = build(PathKind::ExactSDTheta, RuleKind::GaussLegendre, 3);
        let mid = &c.points[1];
        assert_eq!(mid.spectral.theta.unwrap(), Complex64::new(obs().theta0(), 0.0));
        let w = quadrature::nodes(QuadratureRule::new(RuleKind::GaussLegendre, 3).unwrap()).unwrap().weights[1];
        let nodal = mid.weight / w;
        assert!((nodal - FRAC_PI_2 * Complex64::new(1.0, -1.0)).norm() < 1e-15);
    }

    #[test]
    fn s_nodes_sit_on_their_defining_level() {
        let c = build(PathKind::ExactSDS, RuleKind::GaussHermite, 40);
        let f0 = spectral::phase(Complex64::new(obs().theta0(), 0.0), &obs(), &lossless());
        for p in &c.points {
            let f = spectral::phase(p.spectral.theta.unwrap(), &obs(), &lossless());
            let want = -p.param * p.param;
            assert!(((f - f0) - want).norm() <= 1e-10 * want.abs().max(1.0), "s = {}", p.param);
            assert_eq!(p.kernel_exponent, want);
        }
    }

    #[test]
    fn incompatible_rules_are_rejected() {
        let gh = QuadratureRule::new(RuleKind::GaussHermite, 8).unwrap();
        let gl = QuadratureRule::new(RuleKind::GaussLegendre, 8).unwrap();
        let err = build_contour(&ContourSpec::plain(PathKind::Linear), gh, &obs(), &lossless());
        assert!(matches!(err, Err(ContourError::IncompatibleRule { .. })));
        let err = build_contour(&ContourSpec::plain(PathKind::ExactSDS), gl, &obs(), &lossless());
        assert!(matches!(err, Err(ContourError::IncompatibleRule { .. })));
    }

    #[test]
    fn spec_validation() {
        let reg = |d, l, s| Regularization { delta_shift: d, imposed_loss: l, limit_scale: s };
        assert!(ContourSpec::with_regularization(PathKind::Angular, reg(1.0, 0.0, 1.0)).is_err());
        assert!(ContourSpec::with_regularization(PathKind::Angular, reg(0.1, -1.0, 1.0)).is_err());
        assert!(ContourSpec::with_regularization(PathKind::Angular, reg(0.1, 0.0, 0.0)).is_err());
        assert!(ContourSpec::new(Variant::QuadraticSD { epsilon: Some(4.0) }, Regularization::default()).is_err());
        assert!(ContourSpec::new(Variant::Linear { kz_halfwidth_multiplier: 0.0 }, Regularization::default()).is_err());
    }

    #[test]
    fn angular_budget_and_orientation() {
        assert_eq!(split_budget(4, &[1.5 * PI, PI, 1.5 * PI]), vec![2, 1, 1]);
        assert_eq!(split_budget(100, &[1.5 * PI, PI, 1.5 * PI]).iter().sum::<usize>(), 100);
        let c = build(PathKind::Angular, RuleKind::GaussLegendre, 64);
        // kz runs from very negative to very positive
        let first = c.points.first().unwrap().spectral.kz.re;
        let last = c.points.last().unwrap().spectral.kz.re;
        assert!(first < -100.0 && last > 100.0);
        for p in &c.points {
            assert!(p.spectral.krho.re >= -1e-9 && p.spectral.krho.im >= -1e-9);
        }
    }

    #[test]
    fn quadratic_flags() {
        let c = build(PathKind::QuadraticSD, RuleKind::GaussLegendre, 16);
        assert!(c.warnings.is_empty(), "{:?}", c.warnings);
        let wide = ContourSpec::new(Variant::QuadraticSD { epsilon: Some(3.0) }, Regularization::default()).unwrap();
        let c = build_contour(&wide, QuadratureRule::new(RuleKind::GaussLegendre, 16).unwrap(), &obs(), &lossless())
            .unwrap();
        assert!(c.warnings.contains(&ContourWarning::LeavesStrip));
    }

    #[test]
    fn imposed_loss_is_absolute() {
        let reg = Regularization { imposed_loss: 0.05, ..Default::default() };
        let spec = ContourSpec::with_regularization(PathKind::Linear, reg).unwrap();
        let c = build_contour(&spec, QuadratureRule::new(RuleKind::GaussLegendre, 4).unwrap(), &obs(), &lossless())
            .unwrap();
        assert_eq!(c.medium.k0(), Complex64::new(2.0 * PI, 0.05));
    }

    #[test]
    fn stability_map_examples() {
        let m = lossless();
        let o = obs();
        assert_eq!(growth_exponent(&m, &o, 0.0, 0.0), 0.0);
        assert!(growth_exponent(&m, &o, 0.0, 1.0).abs() < 1e-12);
        // sign checked against direct evaluation of Re f
        let direct = |tp: f64, tpp: f64| {
            spectral::phase(Complex64::new(o.theta0() + tp, tpp), &o, &m).re
                - spectral::phase(Complex64::new(o.theta0(), 0.0), &o, &m).re
        };
        let v = growth_exponent(&m, &o, FRAC_PI_4, -2.0);
        assert!((v - direct(FRAC_PI_4, -2.0)).abs() < 1e-10);
        assert!(v < 0.0);
        let lossy = Medium::new(Complex64::new(2.0 * PI, 1.0)).unwrap();
        for &(tp, tpp) in &[(0.3, 0.7), (-1.0, 0.2), (0.9, -1.5)] {
            let d = spectral::phase(Complex64::new(o.theta0() + tp, tpp), &o, &lossy).re
                - spectral::phase(Complex64::new(o.theta0(), 0.0), &o, &lossy).re;
            assert!((growth_exponent(&lossy, &o, tp, tpp) - d).abs() < 1e-10);
        }
        let grid = ThetaGrid { re_min: -1.0, re_max: 1.0, im_min: -2.0, im_max: 2.0, n_re: 5, n_im: 3 };
        let map = stability_map(&m, &o, &grid).unwrap();
        assert_eq!((map.len(), map[0].len()), (3, 5));
        assert!(stability_map(&m, &o, &ThetaGrid { n_re: 1, ..grid }).is_err());
    }

    #[test]
    fn path_names_round_trip() {
        for k in PathKind::ALL {
            assert_eq!(k.name().parse::<PathKind>().unwrap(), k);
        }
        assert_eq!("exactsd_s".parse::<PathKind>().unwrap(), PathKind::ExactSDS);
    }
}
