//! Node/weight generation on canonical domains.
//!
//! Riemann (midpoint) and Gauss-Legendre live on [-1, 1], Gauss-Hermite on
//! the real line with the e^{-x^2} kernel. Node sets are computed on first
//! use and memoized per (kind, N).

use std::collections::HashMap;
use std::fmt;
use std::str::FromStr;
use std::sync::{Arc, Mutex, OnceLock};

use thiserror::Error;

/// Largest Gauss-Hermite order accepted. Hermite functions are used for the
/// recurrence, so nothing underflows until well past this.
pub const MAX_HERMITE_N: usize = 300;

const NEWTON_TOL: f64 = 1e-14;
const NEWTON_MAX_ITER: usize = 100;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum QuadratureError {
    #[error("quadrature rule needs at least one node")]
    ZeroNodes,
    #[error("Gauss-Hermite order {n} exceeds the supported maximum {max}")]
    HermiteOrderTooLarge { n: usize, max: usize },
    #[error("{kind} root finding did not converge for N = {n}")]
    NoConvergence { kind: RuleKind, n: usize },
    #[error("unknown quadrature rule `{0}`")]
    UnknownRule(String),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum RuleKind {
    RiemannMidpoint,
    GaussLegendre,
    GaussHermite,
}

impl RuleKind {
    pub const ALL: [RuleKind; 3] = [
        RuleKind::RiemannMidpoint,
        RuleKind::GaussLegendre,
        RuleKind::GaussHermite,
    ];

    pub fn name(self) -> &'static str {
        match self {
            RuleKind::RiemannMidpoint => "Riemann",
            RuleKind::GaussLegendre => "GaussLegendre",
            RuleKind::GaussHermite => "GaussHermite",
        }
    }
}

impl fmt::Display for RuleKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for RuleKind {
    type Err = QuadratureError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s.trim().to_ascii_lowercase().replace(['-', '_', ' '], "").as_str() {
            "riemann" | "riemannmidpoint" | "midpoint" => Ok(RuleKind::RiemannMidpoint),
            "gausslegendre" | "gl" => Ok(RuleKind::GaussLegendre),
            "gausshermite" | "gh" => Ok(RuleKind::GaussHermite),
            _ => Err(QuadratureError::UnknownRule(s.to_string())),
        }
    }
}

/// A rule kind together with its node count.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct QuadratureRule {
    kind: RuleKind,
    n: usize,
}

impl QuadratureRule {
    pub fn new(kind: RuleKind, n: usize) -> Result<Self, QuadratureError> {
        if n == 0 {
            return Err(QuadratureError::ZeroNodes);
        }
        if kind == RuleKind::GaussHermite && n > MAX_HERMITE_N {
            return Err(QuadratureError::HermiteOrderTooLarge { n, max: MAX_HERMITE_N });
        }
        Ok(Self { kind, n })
    }

    pub fn kind(&self) -> RuleKind {
        self.kind
    }

    pub fn n(&self) -> usize {
        self.n
    }
}

/// Abscissas and weights of one rule, ascending in x.
///
/// For Gauss-Hermite `scaled_weights` holds w_i e^{x_i^2}, which stays O(1)
/// even where the plain weight underflows. Integrands that carry their own
/// Gaussian factor use the scaled form.
#[derive(Debug, Clone, PartialEq)]
pub struct NodeSet {
    pub abscissas: Vec<f64>,
    pub weights: Vec<f64>,
    pub scaled_weights: Option<Vec<f64>>,
}

impl NodeSet {
    pub fn len(&self) -> usize {
        self.abscissas.len()
    }

    pub fn is_empty(&self) -> bool {
        self.abscissas.is_empty()
    }
}

type Cache = Mutex<HashMap<QuadratureRule, Arc<NodeSet>>>;

fn cache() -> &'static Cache {
    static CACHE: OnceLock<Cache> = OnceLock::new();
    CACHE.get_or_init(|| Mutex::new(HashMap::new()))
}

/// Memoized node set for `rule`.
pub fn nodes(rule: QuadratureRule) -> Result<Arc<NodeSet>, QuadratureError> {
    if let Some(hit) = cache().lock().unwrap_or_else(|e| e.into_inner()).get(&rule) {
        return Ok(Arc::clone(hit));
    }
    // Computed outside the lock; a racing thread computes the same values.
    let set = Arc::new(compute(rule)?);
    let mut guard = cache().lock().unwrap_or_else(|e| e.into_inner());
    Ok(Arc::clone(guard.entry(rule).or_insert(set)))
}

/// Uncached computation, same result as [`nodes`].
pub fn compute(rule: QuadratureRule) -> Result<NodeSet, QuadratureError> {
    match rule.kind {
        RuleKind::RiemannMidpoint => Ok(midpoint(rule.n)),
        RuleKind::GaussLegendre => gauss_legendre(rule.n),
        RuleKind::GaussHermite => gauss_hermite(rule.n),
    }
}

fn midpoint(n: usize) -> NodeSet {
    let h = 2.0 / n as f64;
    NodeSet {
        abscissas: (0..n).map(|i| -1.0 + h * (i as f64 + 0.5)).collect(),
        weights: vec![h; n],
        scaled_weights: None,
    }
}

/// Legendre P_n(x) and P_{n-1}(x) by the three-term recurrence.
fn legendre_pair(n: usize, x: f64) -> (f64, f64) {
    let (mut p_prev, mut p) = (1.0, x);
    if n == 0 {
        return (1.0, 0.0);
    }
    for k in 1..n {
        let kf = k as f64;
        let next = ((2.0 * kf + 1.0) * x * p - kf * p_prev) / (kf + 1.0);
        p_prev = p;
        p = next;
    }
    (p, p_prev)
}

fn gauss_legendre(n: usize) -> Result<NodeSet, QuadratureError> {
    let nf = n as f64;
    let mut x = vec![0.0; n];
    let mut w = vec![0.0; n];
    // Roots come in +- pairs; find the non-negative half, largest first.
    for i in 0..n.div_ceil(2) {
        let mut z = (std::f64::consts::PI * (i as f64 + 0.75) / (nf + 0.5)).cos();
        let mut converged = false;
        for _ in 0..NEWTON_MAX_ITER {
            let (p, p1) = legendre_pair(n, z);
            let dp = nf * (z * p - p1) / (z * z - 1.0);
            let mut step = p / dp;
            // damping keeps the iterate inside (-1, 1) and near its bracket
            let cap = 0.5 * (1.0 - z.abs()).max(1e-3);
            if step.abs() > cap {
                step = step.signum() * cap;
            }
            z -= step;
            if step.abs() < NEWTON_TOL {
                converged = true;
                break;
            }
        }
        if !converged {
            return Err(QuadratureError::NoConvergence { kind: RuleKind::GaussLegendre, n });
        }
        let (p, p1) = legendre_pair(n, z);
        let dp = nf * (z * p - p1) / (z * z - 1.0);
        let wi = 2.0 / ((1.0 - z * z) * dp * dp);
        // odd n: the middle root is exactly zero
        let z = if n % 2 == 1 && i == n / 2 { 0.0 } else { z };
        x[i] = -z;
        x[n - 1 - i] = z;
        w[i] = wi;
        w[n - 1 - i] = wi;
    }
    Ok(NodeSet { abscissas: x, weights: w, scaled_weights: None })
}

/// Normalized Hermite functions psi_n(x), psi_{n-1}(x), where
/// psi_k = H_k(x) e^{-x^2/2} / sqrt(2^k k! sqrt(pi)).
fn hermite_function_pair(n: usize, x: f64) -> (f64, f64) {
    let mut p_prev = 0.0;
    let mut p = std::f64::consts::PI.powf(-0.25) * (-0.5 * x * x).exp();
    for k in 0..n {
        let kf = k as f64;
        let next = x * (2.0 / (kf + 1.0)).sqrt() * p - (kf / (kf + 1.0)).sqrt() * p_prev;
        p_prev = p;
        p = next;
    }
    (p, p_prev)
}

fn gauss_hermite(n: usize) -> Result<NodeSet, QuadratureError> {
    let nf = n as f64;
    let m = n.div_ceil(2);
    let mut roots: Vec<f64> = Vec::with_capacity(m);
    // Initial guesses for the largest roots (asymptotic), then extrapolation
    // from the two previously found roots.
    let mut z = 0.0;
    for i in 0..m {
        z = match i {
            0 => (2.0 * nf + 1.0).sqrt() - 1.85575 * (2.0 * nf + 1.0).powf(-1.0 / 6.0),
            1 => z - 1.14 * nf.powf(0.426) / z,
            2 => 1.86 * z - 0.86 * roots[0],
            3 => 1.91 * z - 0.91 * roots[1],
            _ => 2.0 * z - roots[i - 2],
        };
        let mut converged = false;
        for _ in 0..NEWTON_MAX_ITER {
            let (p, p1) = hermite_function_pair(n, z);
            let dp = (2.0 * nf).sqrt() * p1 - z * p;
            let step = p / dp;
            z -= step;
            if step.abs() < NEWTON_TOL * z.abs().max(1.0) {
                converged = true;
                break;
            }
        }
        if !converged || !z.is_finite() {
            return Err(QuadratureError::NoConvergence { kind: RuleKind::GaussHermite, n });
        }
        roots.push(z);
    }
    if n % 2 == 1 {
        roots[m - 1] = 0.0;
    }

    let mut x = vec![0.0; n];
    let mut w = vec![0.0; n];
    let mut ws = vec![0.0; n];
    for (i, &r) in roots.iter().enumerate() {
        let (_, p1) = hermite_function_pair(n, r);
        let scaled = 1.0 / (nf * p1 * p1);
        let plain = scaled * (-r * r).exp();
        x[i] = -r;
        x[n - 1 - i] = r;
        w[i] = plain;
        w[n - 1 - i] = plain;
        ws[i] = scaled;
        ws[n - 1 - i] = scaled;
    }
    Ok(NodeSet { abscissas: x, weights: w, scaled_weights: Some(ws) })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn set(kind: RuleKind, n: usize) -> Arc<NodeSet> {
        nodes(QuadratureRule::new(kind, n).unwrap()).unwrap()
    }

    #[test]
    fn legendre_two_and_three_points() {
        let s = set(RuleKind::GaussLegendre, 2);
        assert!((s.abscissas[1] - 0.5773502691896257).abs() < 1e-15);
        assert!((s.abscissas[0] + 0.5773502691896257).abs() < 1e-15);
        assert!(s.weights.iter().all(|w| (w - 1.0).abs() < 1e-14));

        let s = set(RuleKind::GaussLegendre, 3);
        assert_eq!(s.abscissas[1], 0.0);
        assert!((s.abscissas[2] - 0.7745966692414834).abs() < 1e-15);
        assert!((s.weights[1] - 8.0 / 9.0).abs() < 1e-14);
        assert!((s.weights[0] - 5.0 / 9.0).abs() < 1e-14);
    }

    #[test]
    fn hermite_two_points() {
        let s = set(RuleKind::GaussHermite, 2);
        assert!((s.abscissas[1] - std::f64::consts::FRAC_1_SQRT_2).abs() < 1e-15);
        let half_sqrt_pi = std::f64::consts::PI.sqrt() / 2.0;
        assert!((s.weights[0] - half_sqrt_pi).abs() < 1e-15);
        assert!((s.weights[1] - half_sqrt_pi).abs() < 1e-15);
    }

    #[test]
    fn midpoint_cells() {
        let s = set(RuleKind::RiemannMidpoint, 4);
        assert_eq!(s.abscissas, vec![-0.75, -0.25, 0.25, 0.75]);
        assert_eq!(s.weights, vec![0.5; 4]);
    }

    #[test]
    fn guards() {
        assert_eq!(QuadratureRule::new(RuleKind::GaussLegendre, 0), Err(QuadratureError::ZeroNodes));
        assert!(QuadratureRule::new(RuleKind::GaussHermite, MAX_HERMITE_N + 1).is_err());
        assert!(QuadratureRule::new(RuleKind::GaussHermite, 200).is_ok());
    }

    #[test]
    fn large_orders_converge() {
        for n in [200, 300] {
            let s = set(RuleKind::GaussHermite, n);
            let sum: f64 = s.weights.iter().sum();
            assert!((sum - std::f64::consts::PI.sqrt()).abs() < 1e-13, "n={n} sum={sum}");
            assert!(s.abscissas.windows(2).all(|p| p[0] < p[1]));
        }
        for n in [1, 4096] {
            let s = set(RuleKind::GaussLegendre, n);
            let sum: f64 = s.weights.iter().sum();
            assert!((sum - 2.0).abs() < 1e-13, "n={n} sum={sum}");
            assert!(s.abscissas.windows(2).all(|p| p[0] < p[1]));
        }
    }

    #[test]
    fn rule_names_parse() {
        for k in RuleKind::ALL {
            assert_eq!(k.name().parse::<RuleKind>().unwrap(), k);
        }
        assert_eq!("G-L".parse::<RuleKind>().unwrap(), RuleKind::GaussLegendre);
        assert!("simpson".parse::<RuleKind>().is_err());
    }

    #[test]
    fn memoized_sets_are_shared() {
        let a = set(RuleKind::GaussLegendre, 17);
        let b = set(RuleKind::GaussLegendre, 17);
        assert!(Arc::ptr_eq(&a, &b));
    }
}
