//! Test-only oracles in extended precision.
//!
//! Cylinder functions are summed from their ascending series with 512-bit
//! floats, which leaves well over 30 correct digits on |z| <= 50 even with the
//! worst cancellation. Nothing here shares code with the library.

#![allow(dead_code)]

use astro_float::{BigFloat, Consts, Radix, RoundingMode};
use num_complex::Complex64;

const P: usize = 512;
const RM: RoundingMode = RoundingMode::ToEven;
const GAMMA_DIGITS: &str =
    "0.577215664901532860606512090082402431042159335939923598805767234884867726777664670936947063";

#[derive(Clone)]
struct Big {
    re: BigFloat,
    im: BigFloat,
}

fn bf(x: f64) -> BigFloat {
    BigFloat::from_f64(x, P)
}

fn to_f64(x: &BigFloat) -> f64 {
    format!("{x}").parse().expect("decimal BigFloat formats as f64")
}

impl Big {
    fn from(z: Complex64) -> Self {
        Big { re: bf(z.re), im: bf(z.im) }
    }
    fn zero() -> Self {
        Big { re: bf(0.0), im: bf(0.0) }
    }
    fn add(&self, o: &Big) -> Big {
        Big { re: self.re.add(&o.re, P, RM), im: self.im.add(&o.im, P, RM) }
    }
    fn sub(&self, o: &Big) -> Big {
        Big { re: self.re.sub(&o.re, P, RM), im: self.im.sub(&o.im, P, RM) }
    }
    fn mul(&self, o: &Big) -> Big {
        let re = self.re.mul(&o.re, P, RM).sub(&self.im.mul(&o.im, P, RM), P, RM);
        let im = self.re.mul(&o.im, P, RM).add(&self.im.mul(&o.re, P, RM), P, RM);
        Big { re, im }
    }
    fn scale(&self, s: &BigFloat) -> Big {
        Big { re: self.re.mul(s, P, RM), im: self.im.mul(s, P, RM) }
    }
    fn times_i(&self) -> Big {
        Big { re: self.im.neg(), im: self.re.clone() }
    }
    fn norm_sqr(&self) -> BigFloat {
        self.re.mul(&self.re, P, RM).add(&self.im.mul(&self.im, P, RM), P, RM)
    }
    fn to_c64(&self) -> Complex64 {
        Complex64::new(to_f64(&self.re), to_f64(&self.im))
    }
}

/// Principal complex log.
fn ln(z: &Big, cc: &mut Consts) -> Big {
    let half = bf(0.5);
    let re = z.norm_sqr().ln(P, RM, cc).mul(&half, P, RM);
    let pi = cc.pi(P, RM);
    let im = if z.re.is_zero() {
        let h = pi.mul(&half, P, RM);
        if z.im.is_negative() { h.neg() } else { h }
    } else {
        let base = z.im.div(&z.re, P, RM).atan(P, RM, cc);
        if z.re.is_positive() {
            base
        } else if z.im.is_negative() {
            base.sub(&pi, P, RM)
        } else {
            base.add(&pi, P, RM)
        }
    };
    Big { re, im }
}

/// (J0(z), Y0(z)) on the principal branch.
pub fn j0_y0(z: Complex64) -> (Complex64, Complex64) {
    let (j, y) = series(z);
    (j.to_c64(), y.to_c64())
}

fn series(z: Complex64) -> (Big, Big) {
    let mut cc = Consts::new().expect("constant cache");
    let zb = Big::from(z);
    let q = zb.mul(&zb).scale(&bf(0.25));
    let mut term = Big { re: bf(1.0), im: bf(0.0) };
    let mut j0 = term.clone();
    let mut s = Big::zero();
    let mut harmonic = bf(0.0);
    let tiny = bf(1e-60);
    let mut k = 0u64;
    loop {
        k += 1;
        let kb = BigFloat::from_u64(k, P);
        let k2 = kb.mul(&kb, P, RM);
        term = term.mul(&q).scale(&bf(-1.0).div(&k2, P, RM));
        harmonic = harmonic.add(&bf(1.0).div(&kb, P, RM), P, RM);
        j0 = j0.add(&term);
        s = s.sub(&term.scale(&harmonic));
        let small = term.norm_sqr().cmp(&tiny.mul(&tiny, P, RM)).unwrap_or(0) < 0;
        if (k as f64) > z.norm() && small {
            break;
        }
        assert!(k < 5000, "oracle series did not terminate");
    }
    let gamma = BigFloat::parse(GAMMA_DIGITS, Radix::Dec, P, RM, &mut cc);
    let two = Big { re: bf(2.0), im: bf(0.0) };
    let mut lg = ln(&zb, &mut cc).sub(&ln(&two, &mut cc));
    lg.re = lg.re.add(&gamma, P, RM);
    let two_over_pi = bf(2.0).div(&cc.pi(P, RM), P, RM);
    let y0 = lg.mul(&j0).add(&s).scale(&two_over_pi);
    (j0, y0)
}

/// (H0^(1)(z), H0^(2)(z)) on the principal branch, combined before rounding.
pub fn hankels(z: Complex64) -> (Complex64, Complex64) {
    let (j, y) = series(z);
    (j.add(&y.times_i()).to_c64(), j.sub(&y.times_i()).to_c64())
}

/// e^{i k0 r} / (4 pi r) in extended precision.
pub fn greens3d(k0: Complex64, r: f64) -> Complex64 {
    let mut cc = Consts::new().expect("constant cache");
    let rb = bf(r);
    let phase = bf(k0.re).mul(&rb, P, RM);
    let decay = bf(-k0.im).mul(&rb, P, RM).exp(P, RM, &mut cc);
    let denom = bf(4.0).mul(&cc.pi(P, RM), P, RM).mul(&rb, P, RM);
    let mag = decay.div(&denom, P, RM);
    let re = phase.cos(P, RM, &mut cc).mul(&mag, P, RM);
    let im = phase.sin(P, RM, &mut cc).mul(&mag, P, RM);
    Complex64::new(to_f64(&re), to_f64(&im))
}
