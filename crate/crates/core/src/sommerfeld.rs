//! Numerical checks of the Sommerfeld identity
//!
//!   int k H0^(1)(k rho) / (k^2 - k'^2) dk = i pi H0^(1)(k' rho)
//!
//! over a deformed path in the k_rho plane, and of the Hankel expansion
//! identities behind it.

use std::f64::consts::PI;

use num_complex::Complex64;
use thiserror::Error;

use crate::quadrature::{self, QuadratureError, QuadratureRule, RuleKind};
use crate::special::{self, HankelKind, SpecialFunctionError};

/// Gauss-Legendre points per panel.
pub const PANEL_ORDER: usize = 10;
/// Required integrand magnitude at the truncated ends.
pub const TAIL_TOLERANCE: f64 = 1e-12;

const GRADING_SOFTENING: f64 = 0.3;
const GRADING_SAMPLES: usize = 2000;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum SommerfeldError {
    #[error("invalid case: {0}")]
    InvalidCase(String),
    #[error("integrand has not decayed at the path ends (|f| = {magnitude:e})")]
    Truncation { magnitude: f64 },
    #[error(transparent)]
    Special(#[from] SpecialFunctionError),
    #[error(transparent)]
    Quadrature(#[from] QuadratureError),
}

/// Which of the two poles +-k' the path encloses.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum PoleSide {
    /// Pole in the first quadrant, path dips under it.
    Physical,
    /// Mirror arrangement: the medium loss changes sign, the physical root
    /// moves to the fourth quadrant and the path encloses -k' instead.
    Flipped,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SommerfeldCase {
    krho_pole: Complex64,
    rho: f64,
    loss: f64,
    n: usize,
}

impl SommerfeldCase {
    pub fn new(krho_pole: Complex64, rho: f64, loss: f64, n: usize) -> Result<Self, SommerfeldError> {
        if !(rho > 0.0 && rho.is_finite()) {
            return Err(SommerfeldError::InvalidCase(format!("rho = {rho} must be > 0")));
        }
        if !(loss > 0.0) {
            return Err(SommerfeldError::InvalidCase(format!("loss = {loss} must be > 0")));
        }
        if n < PANEL_ORDER {
            return Err(SommerfeldError::InvalidCase(format!("N = {n} below one panel ({PANEL_ORDER})")));
        }
        if !(krho_pole.re > 0.0 && krho_pole.im > 0.0) {
            return Err(SommerfeldError::InvalidCase(format!("pole {krho_pole} not in the first quadrant")));
        }
        Ok(Self { krho_pole, rho, loss, n })
    }

    /// Pole of the mode kz = pi in a medium k0 = 2 pi (1 + i loss).
    pub fn from_loss(loss: f64, rho: f64, n: usize) -> Result<Self, SommerfeldError> {
        Self::new(pole_for_loss(loss), rho, loss, n)
    }

    pub fn krho_pole(&self) -> Complex64 {
        self.krho_pole
    }

    pub fn rho(&self) -> f64 {
        self.rho
    }

    pub fn loss(&self) -> f64 {
        self.loss
    }

    pub fn n(&self) -> usize {
        self.n
    }
}

/// sqrt(k0^2 - pi^2) with k0 = 2 pi (1 + i loss), root with Re >= 0.
pub fn pole_for_loss(loss: f64) -> Complex64 {
    let k0 = Complex64::new(2.0 * PI, 2.0 * PI * loss);
    let kz = Complex64::new(PI, 0.0);
    let s = (k0 * k0 - kz * kz).sqrt();
    if s.re < 0.0 {
        -s
    } else {
        s
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SommerfeldReport {
    pub lhs: Complex64,
    pub rhs: Complex64,
    pub rel_err: f64,
}

/// i pi H0^(1)(k' rho).
pub fn sommerfeld_rhs(krho_pole: Complex64, rho: f64) -> Result<Complex64, SommerfeldError> {
    Ok(Complex64::i() * PI * special::hankel0(HankelKind::First, krho_pole * rho)?)
}

fn integrand(k: Complex64, rho: f64, pole_sq: Complex64) -> Result<Complex64, SommerfeldError> {
    Ok(k * special::hankel0(HankelKind::First, k * rho)? / (k * k - pole_sq))
}

/// Polygon vertices of the path, left to right.
fn path_vertices(pole: Complex64, rho: f64, side: PoleSide) -> (Vec<Complex64>, Complex64) {
    let c = Complex64::new;
    let size = pole.norm();
    let t = 30.0 / rho + size;
    // the path passes above the origin: the H0 cut lies on the negative axis
    let r = 0.1 * size;
    let dip = 0.35 * size;
    match side {
        PoleSide::Physical => (vec![c(-t, t), c(0.0, r), c(pole.re, -dip), c(pole.re + t, t)], pole),
        PoleSide::Flipped => {
            // fourth-quadrant physical root; enclose -pole (second quadrant)
            let mirror = pole.conj();
            let picked = -mirror;
            let verts = vec![
                c(-t - size, t),
                c(picked.re - dip, 0.0),
                c(-r, 0.0),
                c(0.0, r),
                c(mirror.re, dip),
                c(mirror.re + t, t),
            ];
            (verts, mirror)
        }
    }
}

/// Composite Gauss-Legendre nodes on a polygon with panels graded toward the
/// points in `attract` (density 1/(distance + a)).
pub fn graded_panels(
    vertices: &[Complex64],
    attract: &[Complex64],
    n: usize,
) -> Result<Vec<(Complex64, Complex64)>, SommerfeldError> {
    let segs: Vec<(Complex64, Complex64)> = vertices.windows(2).map(|w| (w[0], w[1])).collect();
    let density = |z: Complex64| {
        let d = attract.iter().map(|a| (z - a).norm()).fold(f64::INFINITY, f64::min);
        1.0 / (d + GRADING_SOFTENING)
    };
    // cumulative cost along each segment, trapezoid on a fine grid
    let cumulative: Vec<Vec<f64>> = segs
        .iter()
        .map(|&(a, b)| {
            let len = (b - a).norm();
            let dens: Vec<f64> = (0..=GRADING_SAMPLES)
                .map(|j| density(a + (b - a) * (j as f64 / GRADING_SAMPLES as f64)) * len)
                .collect();
            let mut acc = vec![0.0; GRADING_SAMPLES + 1];
            for j in 1..=GRADING_SAMPLES {
                acc[j] = acc[j - 1] + 0.5 * (dens[j] + dens[j - 1]) / GRADING_SAMPLES as f64;
            }
            acc
        })
        .collect();
    let costs: Vec<f64> = cumulative.iter().map(|c| c[GRADING_SAMPLES]).collect();
    let total: f64 = costs.iter().sum();
    let panels = segs.len().max(n / PANEL_ORDER);
    let ideal: Vec<f64> = costs.iter().map(|c| panels as f64 * c / total).collect();
    let mut count: Vec<usize> = ideal.iter().map(|x| (x.floor() as usize).max(1)).collect();
    while count.iter().sum::<usize>() < panels {
        let (k, _) = ideal
            .iter()
            .zip(&count)
            .map(|(x, &m)| x - m as f64)
            .enumerate()
            .fold((0, f64::NEG_INFINITY), |best, (k, d)| if d > best.1 { (k, d) } else { best });
        count[k] += 1;
    }

    let gl = quadrature::nodes(QuadratureRule::new(RuleKind::GaussLegendre, PANEL_ORDER)?)?;
    let mut out = Vec::with_capacity(count.iter().sum::<usize>() * PANEL_ORDER);
    for ((&(a, b), &m), cum) in segs.iter().zip(&count).zip(&cumulative) {
        let breaks: Vec<f64> = (0..=m).map(|j| invert_cumulative(cum, cum[GRADING_SAMPLES] * j as f64 / m as f64)).collect();
        for j in 0..m {
            let p0 = a + (b - a) * breaks[j];
            let p1 = a + (b - a) * breaks[j + 1];
            let half = (p1 - p0) * 0.5;
            let mid = (p0 + p1) * 0.5;
            for (&x, &w) in gl.abscissas.iter().zip(&gl.weights) {
                let z = mid + half * x;
                // keep points on the positive side of the negative-axis cut
                out.push((Complex64::new(z.re, z.im + 0.0), half * w));
            }
        }
    }
    Ok(out)
}

/// Parameter u in [0, 1] where the piecewise-linear cumulative reaches `target`.
fn invert_cumulative(cum: &[f64], target: f64) -> f64 {
    let last = cum.len() - 1;
    let idx = cum.partition_point(|&c| c < target);
    if idx == 0 {
        return 0.0;
    }
    if idx > last {
        return 1.0;
    }
    let (c0, c1) = (cum[idx - 1], cum[idx]);
    let frac = if c1 > c0 { (target - c0) / (c1 - c0) } else { 0.0 };
    ((idx - 1) as f64 + frac) / last as f64
}

/// Path integral of k H0(k rho)/(k^2 - k'^2) for the chosen pole side.
/// Returns the integral and the pole the path actually encloses.
pub fn sommerfeld_integral(case: &SommerfeldCase, side: PoleSide) -> Result<(Complex64, Complex64), SommerfeldError> {
    let (verts, root) = path_vertices(case.krho_pole, case.rho, side);
    let pole_sq = root * root;
    for end in [verts[0], verts[verts.len() - 1]] {
        let magnitude = integrand(end, case.rho, pole_sq)?.norm();
        if !(magnitude < TAIL_TOLERANCE) {
            return Err(SommerfeldError::Truncation { magnitude });
        }
    }
    let nodes = graded_panels(&verts, &[Complex64::new(0.0, 0.0), root, -root], case.n)?;
    let mut sum = Complex64::new(0.0, 0.0);
    for (k, w) in nodes {
        sum += w * integrand(k, case.rho, pole_sq)?;
    }
    let picked = match side {
        PoleSide::Physical => root,
        PoleSide::Flipped => -root,
    };
    Ok((sum, picked))
}

pub fn sommerfeld_identity_check(case: &SommerfeldCase) -> Result<SommerfeldReport, SommerfeldError> {
    let (lhs, _) = sommerfeld_integral(case, PoleSide::Physical)?;
    let rhs = sommerfeld_rhs(case.krho_pole, case.rho)?;
    Ok(SommerfeldReport { lhs, rhs, rel_err: (lhs - rhs).norm() / rhs.norm() })
}

/// Largest residual of 2 J0 = H1 + H2 and H1(z) = e^{i pi} H2(z e^{-i pi}).
pub fn expansion_identities_check(z: Complex64) -> Result<f64, SpecialFunctionError> {
    let h1 = special::hankel0(HankelKind::First, z)?;
    let h2 = special::hankel0(HankelKind::Second, z)?;
    let j0 = special::bessel_j0(z)?;
    let a = (2.0 * j0 - h1 - h2).norm();
    let b = (h1 + special::hankel0_rotated(HankelKind::Second, z, -1)?).norm();
    Ok(a.max(b))
}
