//! Medium and observation geometry, the kz <-> k_rho <-> theta maps, and the
//! split of the angular integrand into a slowly varying amplitude and an
//! exponential phase.

use num_complex::Complex64;
use thiserror::Error;

use crate::special::{self, SpecialFunctionError};

#[derive(Debug, Error, Clone, PartialEq)]
pub enum SpectralError {
    #[error("invalid medium k0 = {0}: need Re k0 > 0 and Im k0 >= 0")]
    InvalidMedium(Complex64),
    #[error("invalid observation (rho = {rho}, z = {z}): need rho >= 0 and r > 0")]
    InvalidObservation { rho: f64, z: f64 },
    #[error("integrand singular: {0}")]
    Singular(&'static str),
    #[error("empty grid")]
    EmptyGrid,
    #[error(transparent)]
    Special(#[from] SpecialFunctionError),
}

/// Homogeneous medium with wavenumber k0 = k0' + i k0''.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Medium {
    k0: Complex64,
}

impl Medium {
    pub fn new(k0: Complex64) -> Result<Self, SpectralError> {
        if k0.re > 0.0 && k0.im >= 0.0 && k0.re.is_finite() && k0.im.is_finite() {
            Ok(Self { k0 })
        } else {
            Err(SpectralError::InvalidMedium(k0))
        }
    }

    pub fn lossless(k0: f64) -> Result<Self, SpectralError> {
        Self::new(Complex64::new(k0, 0.0))
    }

    pub fn k0(&self) -> Complex64 {
        self.k0
    }

    pub fn magnitude(&self) -> f64 {
        self.k0.norm()
    }

    /// alpha = atan2(k0'', k0'), in [0, pi/2).
    pub fn loss_angle(&self) -> f64 {
        self.k0.im.atan2(self.k0.re)
    }

    /// Same medium with `extra` added to k0''.
    pub fn with_added_loss(&self, extra: f64) -> Result<Self, SpectralError> {
        Self::new(self.k0 + Complex64::new(0.0, extra))
    }
}

/// Observation point relative to the source, in cylindrical coordinates.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Observation {
    rho: f64,
    z: f64,
    r: f64,
    theta0: f64,
}

impl Observation {
    pub fn new(rho: f64, z: f64) -> Result<Self, SpectralError> {
        let r = rho.hypot(z);
        if !(rho >= 0.0 && r > 0.0 && r.is_finite()) {
            return Err(SpectralError::InvalidObservation { rho, z });
        }
        Ok(Self { rho, z, r, theta0: z.atan2(rho) })
    }

    /// From distance and elevation angle theta0 in [-pi/2, pi/2].
    ///
    /// At theta0 = +-pi/2 this leaves rho at roundoff level (~1e-16 r), not 0.
    pub fn from_polar(r: f64, theta0: f64) -> Result<Self, SpectralError> {
        Self::new((r * theta0.cos()).max(0.0), r * theta0.sin())
    }

    pub fn rho(&self) -> f64 {
        self.rho
    }

    pub fn z(&self) -> f64 {
        self.z
    }

    pub fn r(&self) -> f64 {
        self.r
    }

    pub fn theta0(&self) -> f64 {
        self.theta0
    }

    /// The mirror point z -> -z.
    pub fn mirrored(&self) -> Self {
        Self { z: -self.z, theta0: -self.theta0, ..*self }
    }
}

/// One point of the spectrum. `theta` is absent for points built from kz.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SpectralPoint {
    pub theta: Option<Complex64>,
    pub kz: Complex64,
    pub krho: Complex64,
}

/// Root of k0^2 - kz^2 in the closed first quadrant.
///
/// For real kz (and any admissible medium) k0^2 - kz^2 lies in the closed
/// upper half plane, so the principal root or its negative is in the first
/// quadrant. Signed zeros are normalized to +0.
pub fn physical_krho(kz: Complex64, medium: &Medium) -> Complex64 {
    let k0 = medium.k0();
    let mut s = (k0 * k0 - kz * kz).sqrt();
    if s.im < 0.0 {
        s = -s;
    }
    Complex64::new(s.re + 0.0, s.im + 0.0)
}

/// kz = k0 sin(theta), k_rho = k0 cos(theta). The theta parametrization picks
/// the branch by itself, no re-rooting.
pub fn theta_to_modes(theta: Complex64, medium: &Medium) -> SpectralPoint {
    let k0 = medium.k0();
    SpectralPoint { theta: Some(theta), kz: k0 * theta.sin(), krho: k0 * theta.cos() }
}

pub fn kz_to_modes(kz: Complex64, medium: &Medium) -> SpectralPoint {
    SpectralPoint { theta: None, kz, krho: physical_krho(kz, medium) }
}

/// Phase f(theta) = i k0 r cos(theta - theta0).
pub fn phase(theta: Complex64, obs: &Observation, medium: &Medium) -> Complex64 {
    Complex64::i() * medium.k0() * obs.r() * (theta - obs.theta0()).cos()
}

/// (H_hat, f) with the full integrand equal to (i/8pi) H_hat e^f, where
/// H_hat = k0 cos(theta) H0^(1)(w) e^{-iw}, w = k0 cos(theta) rho.
pub fn integrand_parts(
    theta: Complex64,
    obs: &Observation,
    medium: &Medium,
) -> Result<(Complex64, Complex64), SpectralError> {
    if obs.rho() == 0.0 {
        return Err(SpectralError::Singular("rho = 0"));
    }
    let krho = medium.k0() * theta.cos();
    let w = krho * obs.rho();
    if w.norm() == 0.0 {
        return Err(SpectralError::Singular("cos(theta) = 0"));
    }
    let h_hat = krho * special::hankel1_scaled(w)?;
    Ok((h_hat, phase(theta, obs, medium)))
}

/// Tabulates physical_krho for every (medium, kz) pair, medium-major.
pub fn krho_loci(media: &[Medium], kz_values: &[f64]) -> Result<Vec<Complex64>, SpectralError> {
    if media.is_empty() || kz_values.is_empty() {
        return Err(SpectralError::EmptyGrid);
    }
    Ok(media
        .iter()
        .flat_map(|m| kz_values.iter().map(move |&kz| physical_krho(Complex64::new(kz, 0.0), m)))
        .collect())
}
