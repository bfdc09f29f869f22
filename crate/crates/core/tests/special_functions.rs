mod support;

use std::f64::consts::PI;

use greens25::special::{bessel_j0, bessel_y0, hankel0, hankel0_rotated, hermite, HankelKind};
use num_complex::Complex64;
use proptest::prelude::*;

fn grid() -> Vec<Complex64> {
    let radii = [
        1e-6, 1e-3, 0.1, 0.5, 1.0, 2.0, 3.4, 3.6, 5.0, 8.0, 12.0, 16.0, 21.5, 22.5, 30.0, 40.0, 50.0,
    ];
    let mut pts = Vec::new();
    for r in radii {
        for j in 0..24 {
            // phases in (-pi, pi]
            let phi = -PI + (j as f64 + 1.0) * (2.0 * PI / 24.0);
            let z = Complex64::from_polar(r, phi);
            if z.im.abs() <= 20.0 {
                pts.push(z);
            }
        }
    }
    pts
}

fn rel(a: Complex64, b: Complex64) -> f64 {
    (a - b).norm() / b.norm()
}

#[test]
fn hankel_matches_oracle_on_grid() {
    let mut worst = (0.0, Complex64::new(0.0, 0.0));
    for z in grid() {
        let (h1, h2) = support::hankels(z);
        for (kind, want) in [(HankelKind::First, h1), (HankelKind::Second, h2)] {
            let got = hankel0(kind, z).unwrap();
            let e = rel(got, want);
            if e > worst.0 {
                worst = (e, z);
            }
        }
    }
    assert!(worst.0 <= 1e-12, "worst relative error {:e} at z = {}", worst.0, worst.1);
}

#[test]
fn j0_matches_oracle_on_grid() {
    // J0 has real zeros, so the error is measured against the size of the
    // travelling-wave pair it is built from.
    let mut worst = (0.0, Complex64::new(0.0, 0.0));
    for z in grid() {
        let (h1, h2) = support::hankels(z);
        let (j, _) = support::j0_y0(z);
        let scale = j.norm().max(0.5 * (h1.norm() + h2.norm()));
        let e = (bessel_j0(z).unwrap() - j).norm() / scale;
        if e > worst.0 {
            worst = (e, z);
        }
    }
    assert!(worst.0 <= 1e-12, "worst relative error {:e} at z = {}", worst.0, worst.1);
}

#[test]
fn y0_matches_oracle_off_zeros() {
    for z in grid() {
        let (h1, h2) = support::hankels(z);
        let (_, y) = support::j0_y0(z);
        let scale = y.norm().max(0.5 * (h1.norm() + h2.norm()));
        let e = (bessel_y0(z).unwrap() - y).norm() / scale;
        assert!(e <= 1e-12, "z = {z}: {e:e}");
    }
}

#[test]
fn oracle_reproduces_tabulated_values() {
    let (j, y) = support::j0_y0(Complex64::new(1.0, 0.0));
    assert!((j.re - 0.765197686557967).abs() < 1e-15);
    assert!((y.re - 0.088256964215677).abs() < 1e-15);
    let (j, _) = support::j0_y0(Complex64::new(0.0, 1.0));
    assert!((j.re - 1.266065877752008).abs() < 1e-15);
}

#[test]
fn sum_of_hankels_is_twice_j0() {
    for z in grid() {
        let h1 = hankel0(HankelKind::First, z).unwrap();
        let h2 = hankel0(HankelKind::Second, z).unwrap();
        let j = bessel_j0(z).unwrap();
        let scale = j.norm().max(0.5 * (h1.norm() + h2.norm()));
        assert!((2.0 * j - h1 - h2).norm() / scale <= 1e-10, "z = {z}");
    }
}

#[test]
fn connection_formula_with_clockwise_half_turn() {
    // H1(z) = e^{i pi} H2(z e^{-i pi})
    for z in grid() {
        let h1 = hankel0(HankelKind::First, z).unwrap();
        let rotated = hankel0_rotated(HankelKind::Second, z, -1).unwrap();
        // the rotated value is H2(z) - 2 J0(z); residual is judged against its terms
        let h2 = hankel0(HankelKind::Second, z).unwrap();
        let scale = h1.norm().max(h2.norm()).max(2.0 * bessel_j0(z).unwrap().norm());
        assert!((h1 + rotated).norm() / scale <= 1e-10, "z = {z}");
    }
}

#[test]
fn left_half_plane_agrees_with_rotation() {
    // for Im z > 0 the principal value at -z equals the continuation by -1 half-turn
    for z in grid().into_iter().filter(|z| z.im > 0.0 && z.re > 0.0) {
        // principal arg(-z) = arg z - pi
        let direct = hankel0(HankelKind::First, -z).unwrap();
        let rotated = hankel0_rotated(HankelKind::First, z, -1).unwrap();
        let scale = direct.norm().max(hankel0(HankelKind::First, z).unwrap().norm());
        assert!((direct - rotated).norm() / scale <= 1e-10, "z = {z}");
    }
}

proptest! {
    #[test]
    fn conjugate_pair_on_positive_axis(x in 1e-4f64..60.0) {
        let z = Complex64::new(x, 0.0);
        let h1 = hankel0(HankelKind::First, z).unwrap();
        let h2 = hankel0(HankelKind::Second, z).unwrap();
        prop_assert!((h2 - h1.conj()).norm() <= 1e-14 * h1.norm());
    }

    #[test]
    fn hermite_recurrence(n in 1u32..50, x in -10.0f64..10.0) {
        let lhs = hermite(n + 1, x);
        let rhs = 2.0 * x * hermite(n, x) - 2.0 * n as f64 * hermite(n - 1, x);
        let scale = lhs.abs().max(rhs.abs()).max(2.0 * x.abs() * hermite(n, x).abs()).max(1.0);
        prop_assert!((lhs - rhs).abs() <= 1e-9 * scale);
    }

    #[test]
    fn j0_is_even(re in -40.0f64..40.0, im in -15.0f64..15.0) {
        let z = Complex64::new(re, im);
        let a = bessel_j0(z).unwrap();
        let b = bessel_j0(-z).unwrap();
        prop_assert!((a - b).norm() <= 1e-12 * a.norm().max(1.0));
    }
}
