//! Quick invariant checks run by `bench selftest`.

use std::f64::consts::{FRAC_PI_2, FRAC_PI_6, PI, SQRT_2};

use greens25::contours::{self, s_path, t_path};
use greens25::quadrature;
use greens25::sommerfeld::expansion_identities_check;
use greens25::special::{self, HankelKind};
use greens25::spectral::{self, Medium, Observation};
use greens25::{build_contour, synthesize, ContourSpec, PathKind, QuadratureRule, RuleKind};
use num_complex::Complex64;

#[derive(Debug, Clone, PartialEq)]
pub struct Check {
    pub name: &'static str,
    pub pass: bool,
    pub detail: String,
}

fn check(name: &'static str, worst: f64, tol: f64) -> Check {
    Check { name, pass: worst <= tol, detail: format!("worst {worst:.2e} (tol {tol:.0e})") }
}

fn media() -> [Medium; 3] {
    [0.0, 0.05, 2.0].map(|l| Medium::new(Complex64::new(2.0 * PI, l)).unwrap())
}

fn observations() -> Vec<Observation> {
    [0.1 * SQRT_2, SQRT_2, 10.0 * SQRT_2]
        .iter()
        .flat_map(|&r| [0.0, FRAC_PI_6, PI / 4.0].map(|t| Observation::from_polar(r, t).unwrap()))
        .collect()
}

fn quadrature_exactness() -> Check {
    let mut worst = 0.0f64;
    for n in 2..=64 {
        let gl = quadrature::nodes(QuadratureRule::new(RuleKind::GaussLegendre, n).unwrap()).unwrap();
        for k in 0..2 * n {
            let got: f64 = gl.abscissas.iter().zip(&gl.weights).map(|(x, w)| w * x.powi(k as i32)).sum();
            let want = if k % 2 == 0 { 2.0 / (k as f64 + 1.0) } else { 0.0 };
            worst = worst.max((got - want).abs());
        }
    }
    check("Gauss-Legendre exactness", worst, 1e-13)
}

fn constant_phase() -> Check {
    let mut worst = 0.0f64;
    for m in media() {
        for obs in observations() {
            let f0 = spectral::phase(Complex64::new(obs.theta0(), 0.0), &obs, &m);
            let scale = m.magnitude() * obs.r();
            for (kind, rule) in [
                (PathKind::ExactSDTheta, RuleKind::GaussLegendre),
                (PathKind::ExactSDS, RuleKind::GaussHermite),
                (PathKind::ExactSDT, RuleKind::GaussLegendre),
            ] {
                let c = build_contour(&ContourSpec::plain(kind), QuadratureRule::new(rule, 64).unwrap(), &obs, &m).unwrap();
                for p in &c.points {
                    let f = spectral::phase(p.spectral.theta.unwrap(), &obs, &m);
                    if kind == PathKind::ExactSDTheta || f.re - f0.re > -745.0 {
                        worst = worst.max((f.im - f0.im).abs() / scale.max(f.re.abs()));
                    }
                }
            }
        }
    }
    check("constant phase on descent nodes", worst, 1e-10)
}

fn jacobians() -> Check {
    let mut worst = 0.0f64;
    let h = 1e-6;
    for m in media() {
        let alpha = m.loss_angle();
        let k0r = m.k0() * SQRT_2;
        for i in 1..20 {
            let x = -0.95 + 0.1 * i as f64;
            let span = FRAC_PI_2 - alpha;
            let th = |x: f64| Complex64::new(x * span, contours::exact_sd_imag(x * span, alpha));
            let an = contours::exact_sd_correction(x * span, alpha) * span;
            worst = worst.max(((th(x + h) - th(x - h)) / (2.0 * h) - an).norm() / an.norm());
            let s = 3.0 * x;
            let an = s_path(s, k0r).1;
            worst = worst.max(((s_path(s + h, k0r).0 - s_path(s - h, k0r).0) / (2.0 * h) - an).norm() / an.norm());
            let t = x * FRAC_PI_2;
            let an = t_path(t, k0r).1;
            worst = worst.max(((t_path(t + h, k0r).0 - t_path(t - h, k0r).0) / (2.0 * h) - an).norm() / an.norm());
        }
    }
    check("path Jacobians vs finite differences", worst, 1e-6)
}

fn quadrant() -> Check {
    let mut bad = 0usize;
    for m in media() {
        for j in -500..=500 {
            let k = spectral::physical_krho(Complex64::new(j as f64 * 0.07, 0.0), &m);
            if k.re < 0.0 || k.im < 0.0 {
                bad += 1;
            }
        }
    }
    Check { name: "physical-root quadrant", pass: bad == 0, detail: format!("{bad} violations") }
}

fn identities() -> Check {
    let mut worst = 0.0f64;
    for &r in &[0.01, 0.5, 2.0, 6.0, 15.0, 30.0] {
        for j in 0..12 {
            let z = Complex64::from_polar(r, -PI + (j as f64 + 1.0) * PI / 6.0);
            let h1 = special::hankel0(HankelKind::First, z).unwrap();
            let h2 = special::hankel0(HankelKind::Second, z).unwrap();
            let scale = h1.norm().max(h2.norm());
            worst = worst.max(expansion_identities_check(z).unwrap() / scale);
        }
    }
    check("cylinder-function identities", worst, 1e-10)
}

fn oracle() -> Check {
    let mut worst = 0.0f64;
    for m in media() {
        for obs in observations() {
            let res = synthesize(
                &ContourSpec::plain(PathKind::ExactSDTheta),
                QuadratureRule::new(RuleKind::GaussLegendre, 200).unwrap(),
                &obs,
                &m,
            )
            .unwrap();
            worst = worst.max(res.error);
        }
    }
    check("ExactSDTheta N=200 vs closed form", worst, 1e-8)
}

pub fn run_all() -> Vec<Check> {
    vec![quadrature_exactness(), constant_phase(), jacobians(), quadrant(), identities(), oracle()]
}
