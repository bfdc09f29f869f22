//! Zeroth-order cylinder functions of complex argument and Hermite polynomials.
//!
//! H0^(1) is evaluated in scaled form H0^(1)(z) e^{-iz}, which is O(|z|^{-1/2})
//! everywhere off the origin. Three routes cover the right half plane:
//!
//! * ascending series for J0 and Y0 (small |z|, and the lower sector where
//!   the integral route below loses its analyticity strip),
//! * the Laplace-type integral
//!   H0^(1)(z) e^{-iz} = sqrt(2/(pi z)) e^{-i pi/4} pi^{-1/2} int e^{-x^2} (1 + i x^2/(2z))^{-1/2} dx,
//!   summed with Gauss-Hermite nodes,
//! * the Hankel asymptotic series, truncated at its smallest term.
//!
//! The left half plane is reached with the half-turn continuation formulas.
//! J0 has an independent route (periodic trapezoid of cos(z sin t)), so that
//! identities like 2 J0 = H1 + H2 actually test something.

use std::f64::consts::{FRAC_PI_4, LN_2, PI};

use num_complex::Complex64;
use thiserror::Error;

use crate::quadrature::{self, QuadratureRule, RuleKind};

/// Euler-Mascheroni constant.
pub const EULER_GAMMA: f64 = 0.577_215_664_901_532_9;

/// |z| bound for J0 (cosh overflows past ~709 on the imaginary axis).
pub const J0_ARG_LIMIT: f64 = 700.0;

const SERIES_RADIUS: f64 = 3.5;
const ASYMPTOTIC_RADIUS: f64 = 22.0;
const LAPLACE_NODES: usize = 160;
const EPS: f64 = 1e-17;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum SpecialFunctionError {
    #[error("cylinder function is singular at z = 0")]
    Singularity,
    #[error("argument {z} outside the supported range |z| < {limit}")]
    Overflow { z: Complex64, limit: f64 },
    #[error("H0({z}) is not representable in double precision")]
    NotFinite { z: Complex64 },
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum HankelKind {
    First,
    Second,
}

/// J0 and Y0 by their ascending series. Y0 uses the principal log.
fn series_j0_y0(z: Complex64) -> (Complex64, Complex64) {
    let q = z * z * 0.25;
    let mut term = Complex64::new(1.0, 0.0);
    let mut j0 = term;
    let mut s = Complex64::new(0.0, 0.0);
    let mut harmonic = 0.0;
    let kmin = (z.norm() * 0.5) as usize + 2;
    for k in 1..600 {
        let kf = k as f64;
        term *= -q / (kf * kf);
        harmonic += 1.0 / kf;
        j0 += term;
        s -= term * harmonic;
        if k > kmin && term.norm() * (1.0 + harmonic) < EPS * (j0.norm() + s.norm()) {
            break;
        }
    }
    let log_term = (z.ln() - LN_2) + EULER_GAMMA;
    let y0 = (log_term * j0 + s) * (2.0 / PI);
    (j0, y0)
}

fn series_h1_scaled(z: Complex64) -> Complex64 {
    let (j0, y0) = series_j0_y0(z);
    (j0 + Complex64::i() * y0) * (-Complex64::i() * z).exp()
}

fn asymptotic_h1_scaled(u: Complex64) -> Complex64 {
    let mut sum = Complex64::new(1.0, 0.0);
    let mut term = sum;
    let mut last = f64::INFINITY;
    for k in 1..200 {
        let kf = k as f64;
        let a = (2.0 * kf - 1.0) * (2.0 * kf - 1.0) / (8.0 * kf);
        term *= -Complex64::i() * a / u;
        let size = term.norm();
        if size > last {
            break;
        }
        sum += term;
        if size < EPS {
            break;
        }
        last = size;
    }
    prefactor(u) * sum
}

/// sqrt(2/(pi u)) e^{-i pi/4}
fn prefactor(u: Complex64) -> Complex64 {
    (2.0 / PI).sqrt() / u.sqrt() * Complex64::from_polar(1.0, -FRAC_PI_4)
}

fn laplace_h1_scaled(u: Complex64) -> Complex64 {
    let rule = QuadratureRule::new(RuleKind::GaussHermite, LAPLACE_NODES)
        .expect("fixed node count within limits");
    let set = quadrature::nodes(rule).expect("Gauss-Hermite nodes converge at fixed order");
    let scale = Complex64::i() / (2.0 * u);
    let sum: Complex64 = set
        .abscissas
        .iter()
        .zip(&set.weights)
        .map(|(&x, &w)| w / (1.0 + scale * (x * x)).sqrt())
        .sum();
    prefactor(u) * sum / PI.sqrt()
}

/// Scaled H0^(1) for Re u >= 0, u != 0.
fn h1_scaled_right(u: Complex64) -> Complex64 {
    let r = u.norm();
    if r >= ASYMPTOTIC_RADIUS {
        asymptotic_h1_scaled(u)
    } else if r <= SERIES_RADIUS || u.arg() < -FRAC_PI_4 {
        series_h1_scaled(u)
    } else {
        laplace_h1_scaled(u)
    }
}

/// H0^(1)(z) e^{-iz} on the principal branch, -pi < arg z <= pi.
pub fn hankel1_scaled(z: Complex64) -> Result<Complex64, SpecialFunctionError> {
    if z.re == 0.0 && z.im == 0.0 {
        return Err(SpecialFunctionError::Singularity);
    }
    if !(z.re.is_finite() && z.im.is_finite()) {
        return Err(SpecialFunctionError::NotFinite { z });
    }
    if z.re >= 0.0 {
        return Ok(h1_scaled_right(z));
    }
    let u = -z;
    let h2_scaled_u = h1_scaled_right(u.conj()).conj(); // H0^(2)(u) e^{iu}
    let value = if z.im.is_sign_negative() {
        // z = u e^{-i pi}: H1(z) = 2 H1(u) + H2(u)
        2.0 * h1_scaled_right(u) * (2.0 * Complex64::i() * u).exp() + h2_scaled_u
    } else {
        // z = u e^{+i pi}: H1(z) = -H2(u)
        -h2_scaled_u
    };
    Ok(value)
}

/// H0^(kind)(z), principal branch.
pub fn hankel0(kind: HankelKind, z: Complex64) -> Result<Complex64, SpecialFunctionError> {
    let value = match kind {
        HankelKind::First => hankel1_scaled(z)? * (Complex64::i() * z).exp(),
        HankelKind::Second => (hankel1_scaled(z.conj())? * (Complex64::i() * z.conj()).exp()).conj(),
    };
    if value.re.is_finite() && value.im.is_finite() {
        Ok(value)
    } else {
        Err(SpecialFunctionError::NotFinite { z })
    }
}

/// H0^(kind)(z e^{i m pi}) continued off the principal sheet by m half-turns.
pub fn hankel0_rotated(
    kind: HankelKind,
    z: Complex64,
    half_turns: i32,
) -> Result<Complex64, SpecialFunctionError> {
    let base = hankel0(kind, z)?;
    if half_turns == 0 {
        return Ok(base);
    }
    // J0 is even; Y0 picks up 2 i m J0.
    let shift = 2.0 * half_turns as f64 * bessel_j0(z)?;
    Ok(match kind {
        HankelKind::First => base - shift,
        HankelKind::Second => base + shift,
    })
}

/// J0(z) for |z| < 700.
pub fn bessel_j0(z: Complex64) -> Result<Complex64, SpecialFunctionError> {
    let r = z.norm();
    if !(r < J0_ARG_LIMIT) {
        return Err(SpecialFunctionError::Overflow { z, limit: J0_ARG_LIMIT });
    }
    if r <= 4.0 {
        return Ok(series_j0_y0(z).0);
    }
    // Trapezoid over a full period is spectrally accurate; aliasing is
    // bounded by J_M(z), negligible once M exceeds e|z|/2 by a margin.
    let m = 2 * ((1.4 * r + 40.0) / 2.0).ceil() as usize;
    let h = 2.0 * PI / m as f64;
    let sum: Complex64 = (0..m).map(|j| (z * (h * j as f64).sin()).cos()).sum();
    Ok(sum / m as f64)
}

/// Y0(z), principal branch.
pub fn bessel_y0(z: Complex64) -> Result<Complex64, SpecialFunctionError> {
    if z.re == 0.0 && z.im == 0.0 {
        return Err(SpecialFunctionError::Singularity);
    }
    if z.norm() <= SERIES_RADIUS {
        return Ok(series_j0_y0(z).1);
    }
    let h1 = hankel0(HankelKind::First, z)?;
    let h2 = hankel0(HankelKind::Second, z)?;
    Ok((h1 - h2) / (2.0 * Complex64::i()))
}

/// Physicists' Hermite polynomial H_n(x) by the three-term recurrence.
pub fn hermite(n: u32, x: f64) -> f64 {
    let (mut prev, mut cur) = (1.0, 2.0 * x);
    if n == 0 {
        return 1.0;
    }
    for k in 1..n {
        let next = 2.0 * x * cur - 2.0 * k as f64 * prev;
        prev = cur;
        cur = next;
    }
    cur
}
