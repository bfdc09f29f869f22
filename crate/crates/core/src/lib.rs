//! Synthesis of the 3-D free-space Green's function e^{ik0 r}/(4 pi r) from
//! 2.5-D cylindrical modes, integrated over the kz spectrum along one of six
//! contours: the real kz line, the three-leg angular path, and four
//! steepest-descent forms (quadratic, exact in theta, and the s and t
//! re-parametrizations).

// `!(x > 0.0)` style guards are deliberate: they reject NaN too.
#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod contours;
pub mod quadrature;
pub mod sommerfeld;
pub mod special;
pub mod spectral;
pub mod synthesis;

pub use contours::{build_contour, ContourSpec, PathKind, Regularization, SampledContour, Variant};
pub use quadrature::{QuadratureRule, RuleKind};
pub use spectral::{Medium, Observation};
pub use synthesis::{fit_convergence, synthesize, ConvergenceFit, SynthesisResult};
