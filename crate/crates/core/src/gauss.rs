//! Gauss-Gegenbauer rules on `[-1, 1]` for `w_λ(x) = (1 - x^2)^(λ - 1/2)`.
//!
//! Rules come from the Golub-Welsch procedure: nodes are the eigenvalues of
//! the Jacobi matrix of the monic recurrence, weights are `β_0 · z_i^2`
//! with `z_i` the first eigenvector components.

use std::collections::HashMap;
use std::f64::consts::PI;
use std::fmt;
use std::str::FromStr;
use std::sync::{Arc, Mutex, OnceLock};

use serde::Serialize;

use crate::bounds::gegenbauer_weight_norm;
use crate::error::{Error, Result};
use crate::summation::CompensatedSum;
use crate::tridiag::symmetric_tridiagonal_eigen;

/// Size of the rule used for ground-truth integrals.
pub const REFERENCE_RULE_SIZE: usize = 500;

/// Weight function on `[-1, 1]`: the Gegenbauer weight with parameter `λ > -1/2`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct WeightSpec {
    lambda: f64,
}

impl WeightSpec {
    /// `λ = 0`: `(1 - x^2)^(-1/2)`.
    pub const CHEBYSHEV1: WeightSpec = WeightSpec { lambda: 0.0 };
    /// `λ = 1/2`: `w ≡ 1`.
    pub const LEGENDRE: WeightSpec = WeightSpec { lambda: 0.5 };
    /// `λ = 1`: `(1 - x^2)^(1/2)`.
    pub const CHEBYSHEV2: WeightSpec = WeightSpec { lambda: 1.0 };

    pub fn gegenbauer(lambda: f64) -> Result<Self> {
        if !(lambda > -0.5) || !lambda.is_finite() {
            return Err(Error::InvalidWeight(lambda));
        }
        Ok(Self { lambda })
    }

    pub fn lambda(&self) -> f64 {
        self.lambda
    }

    /// `‖w_λ‖_1`.
    pub fn norm(&self) -> f64 {
        gegenbauer_weight_norm(self.lambda).expect("validated at construction")
    }

    /// `w_λ(x)` on the open interval.
    pub fn eval(&self, x: f64) -> f64 {
        (1.0 - x * x).powf(self.lambda - 0.5)
    }

    /// Exact moment `∫ x^k w_λ(x) dx`.
    pub fn moment(&self, k: u32) -> f64 {
        if k % 2 == 1 {
            return 0.0;
        }
        // μ_{2m} / μ_{2m-2} = (m - 1/2) / (m + λ)
        (1..=k / 2).fold(self.norm(), |mu, m| {
            let m = f64::from(m);
            mu * (m - 0.5) / (m + self.lambda)
        })
    }

    fn cache_key(&self) -> u64 {
        self.lambda.to_bits()
    }
}

impl fmt::Display for WeightSpec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if *self == Self::CHEBYSHEV1 {
            write!(f, "chebyshev1")
        } else if *self == Self::LEGENDRE {
            write!(f, "legendre")
        } else if *self == Self::CHEBYSHEV2 {
            write!(f, "chebyshev2")
        } else {
            write!(f, "gegenbauer:{}", self.lambda)
        }
    }
}

impl FromStr for WeightSpec {
    type Err = Error;

    /// Accepts `chebyshev1`, `legendre`, `chebyshev2` or `gegenbauer:<λ>`.
    fn from_str(s: &str) -> Result<Self> {
        match s.to_ascii_lowercase().as_str() {
            "chebyshev1" | "chebyshev" => Ok(Self::CHEBYSHEV1),
            "legendre" => Ok(Self::LEGENDRE),
            "chebyshev2" => Ok(Self::CHEBYSHEV2),
            other => {
                let lam = other
                    .strip_prefix("gegenbauer:")
                    .and_then(|v| v.parse::<f64>().ok())
                    .ok_or_else(|| Error::pre(format!("unknown weight '{s}'")))?;
                Self::gegenbauer(lam)
            }
        }
    }
}

/// Three-term recurrence coefficients `(α_k, β_k)`, `k = 0..n`, of the monic
/// polynomials orthogonal under `w_λ`. `α_k = 0` by symmetry, `β_0 = ‖w_λ‖_1`.
pub fn recurrence_coefficients(weight: WeightSpec, n: usize) -> Result<(Vec<f64>, Vec<f64>)> {
    if n == 0 {
        return Err(Error::pre("rule size must be at least 1"));
    }
    let lam = weight.lambda;
    let betas = (0..n)
        .map(|k| match k {
            0 => weight.norm(),
            // k(k + 2λ - 1) / (4(k + λ)(k + λ - 1)) with the 0/0 at λ = 0 removed
            1 => 1.0 / (2.0 * (1.0 + lam)),
            _ => {
                let k = k as f64;
                k * (k + 2.0 * lam - 1.0) / (4.0 * (k + lam) * (k + lam - 1.0))
            }
        })
        .collect();
    Ok((vec![0.0; n], betas))
}

/// Nodes and positive weights for one [`WeightSpec`].
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct QuadratureRule {
    weight: WeightSpec,
    nodes: Vec<f64>,
    weights: Vec<f64>,
}

impl QuadratureRule {
    /// Build a rule from raw parts after checking its invariants.
    pub fn new(weight: WeightSpec, nodes: Vec<f64>, weights: Vec<f64>) -> Result<Self> {
        let rule = Self { weight, nodes, weights };
        rule.validate()?;
        Ok(rule)
    }

    pub fn weight(&self) -> WeightSpec {
        self.weight
    }

    pub fn nodes(&self) -> &[f64] {
        &self.nodes
    }

    pub fn weights(&self) -> &[f64] {
        &self.weights
    }

    pub fn len(&self) -> usize {
        self.nodes.len()
    }

    pub fn is_empty(&self) -> bool {
        self.nodes.is_empty()
    }

    /// `Σ w_i f(x_i)`.
    pub fn integrate<F: Fn(f64) -> f64>(&self, f: F) -> f64 {
        self.nodes
            .iter()
            .zip(&self.weights)
            .map(|(&x, &w)| w * f(x))
            .collect::<CompensatedSum>()
            .value()
    }

    /// Like [`integrate`](Self::integrate) for fallible integrands.
    pub fn try_integrate<F, E>(&self, f: F) -> std::result::Result<f64, E>
    where
        F: Fn(f64) -> std::result::Result<f64, E>,
    {
        let mut acc = CompensatedSum::new();
        for (&x, &w) in self.nodes.iter().zip(&self.weights) {
            acc.add(w * f(x)?);
        }
        Ok(acc.value())
    }

    /// `Σ |w_i f(x_i)|`, the scale at which rounding in `integrate` happens.
    pub fn absolute_sum<F: Fn(f64) -> f64>(&self, f: F) -> f64 {
        self.nodes.iter().zip(&self.weights).map(|(&x, &w)| (w * f(x)).abs()).sum()
    }

    /// Check ordering, positivity, symmetry and total mass.
    pub fn validate(&self) -> Result<()> {
        let n = self.nodes.len();
        if n == 0 || self.weights.len() != n {
            return Err(Error::pre("rule needs matching, non-empty nodes and weights"));
        }
        if self.nodes.iter().any(|x| !(x.abs() < 1.0)) {
            return Err(Error::pre("nodes must lie in the open interval (-1, 1)"));
        }
        if self.nodes.windows(2).any(|p| p[0] >= p[1]) {
            return Err(Error::pre("nodes must be strictly increasing"));
        }
        if self.weights.iter().any(|w| !(*w > 0.0)) {
            return Err(Error::pre("weights must be positive"));
        }
        for i in 0..n / 2 {
            let j = n - 1 - i;
            if (self.nodes[i] + self.nodes[j]).abs() > 1e-13
                || (self.weights[i] - self.weights[j]).abs() > 1e-13
            {
                return Err(Error::pre(format!("rule is not symmetric at pair ({i}, {j})")));
            }
        }
        let mass: f64 = self.weights.iter().sum();
        let norm = self.weight.norm();
        if ((mass - norm) / norm).abs() > 1e-12 {
            return Err(Error::pre(format!("weights sum to {mass}, expected {norm}")));
        }
        Ok(())
    }
}

/// Gauss rule with `n` points for `weight` via Golub-Welsch.
///
/// Nodes are sorted ascending and `±` pairs are averaged so the rule is
/// exactly symmetric.
pub fn golub_welsch(weight: WeightSpec, n: usize) -> Result<QuadratureRule> {
    let (alphas, betas) = recurrence_coefficients(weight, n)?;
    let off: Vec<f64> = betas[1..].iter().map(|b| b.sqrt()).collect();
    let eig = symmetric_tridiagonal_eigen(&alphas, &off)?;

    let mut pairs: Vec<(f64, f64)> = eig
        .values
        .iter()
        .zip(&eig.first)
        .map(|(&x, &z)| (x, betas[0] * z * z))
        .collect();
    pairs.sort_by(|a, b| a.0.total_cmp(&b.0));
    let (mut nodes, mut weights): (Vec<f64>, Vec<f64>) = pairs.into_iter().unzip();
    symmetrize(&mut nodes, &mut weights);
    QuadratureRule::new(weight, nodes, weights)
}

fn symmetrize(nodes: &mut [f64], weights: &mut [f64]) {
    let n = nodes.len();
    for i in 0..n / 2 {
        let j = n - 1 - i;
        let x = 0.5 * (nodes[j] - nodes[i]);
        let w = 0.5 * (weights[i] + weights[j]);
        nodes[i] = -x;
        nodes[j] = x;
        weights[i] = w;
        weights[j] = w;
    }
    if n % 2 == 1 {
        nodes[n / 2] = 0.0;
    }
}

/// Closed-form Gauss-Chebyshev rule: `x_i = cos((2i-1)π/(2n))`, `w_i = π/n`,
/// returned ascending. An independent check on [`golub_welsch`].
pub fn gauss_chebyshev_closed_form(n: usize) -> Result<QuadratureRule> {
    if n == 0 {
        return Err(Error::pre("rule size must be at least 1"));
    }
    let mut nodes: Vec<f64> = (1..=n)
        .rev()
        .map(|i| ((2 * i - 1) as f64 * PI / (2 * n) as f64).cos())
        .collect();
    let mut weights = vec![PI / n as f64; n];
    symmetrize(&mut nodes, &mut weights);
    QuadratureRule::new(WeightSpec::CHEBYSHEV1, nodes, weights)
}

type RuleCache = Mutex<HashMap<u64, Arc<QuadratureRule>>>;

fn reference_cache() -> &'static RuleCache {
    static CACHE: OnceLock<RuleCache> = OnceLock::new();
    CACHE.get_or_init(|| Mutex::new(HashMap::new()))
}

/// The `REFERENCE_RULE_SIZE`-point rule for `weight`, built once per process.
pub fn reference_rule(weight: WeightSpec) -> Result<Arc<QuadratureRule>> {
    let key = weight.cache_key();
    if let Some(rule) = reference_cache().lock().expect("cache poisoned").get(&key) {
        return Ok(Arc::clone(rule));
    }
    // built outside the lock; a racing insert just keeps the first copy
    let rule = Arc::new(golub_welsch(weight, REFERENCE_RULE_SIZE)?);
    let mut cache = reference_cache().lock().expect("cache poisoned");
    Ok(Arc::clone(cache.entry(key).or_insert(rule)))
}

/// Ground truth `∫ w_λ f` from the 500-point rule of the same weight.
pub fn reference_integral<F: Fn(f64) -> f64>(weight: WeightSpec, f: F) -> Result<f64> {
    Ok(reference_rule(weight)?.integrate(f))
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::{assert_abs_diff_eq, assert_relative_eq};

    #[test]
    fn recurrence_examples() {
        let (a, b) = recurrence_coefficients(WeightSpec::CHEBYSHEV1, 3).unwrap();
        assert_eq!(a, vec![0.0; 3]);
        assert_eq!(b, vec![PI, 0.5, 0.25]);

        let (_, b) = recurrence_coefficients(WeightSpec::LEGENDRE, 2).unwrap();
        assert_relative_eq!(b[0], 2.0, max_relative = 1e-15);
        assert_relative_eq!(b[1], 1.0 / 3.0, max_relative = 1e-15);

        let (_, b) = recurrence_coefficients(WeightSpec::CHEBYSHEV2, 2).unwrap();
        assert_relative_eq!(b[0], PI / 2.0, max_relative = 1e-15);
        assert_relative_eq!(b[1], 0.25, max_relative = 1e-15);

        assert!(recurrence_coefficients(WeightSpec::LEGENDRE, 0).is_err());
    }

    #[test]
    fn recurrence_matches_numeric_moments() {
        // β_1 = μ_2 / μ_0 for a symmetric weight; μ_2 by brute-force composite midpoint
        // on the θ-substituted integral ∫ cos²θ sin^{2λ}θ dθ.
        let lam: f64 = 1.0;
        let m = 200_000;
        let h = PI / m as f64;
        let (mut mu0, mut mu2) = (0.0, 0.0);
        for i in 0..m {
            let th = (i as f64 + 0.5) * h;
            let w = th.sin().powf(2.0 * lam) * h;
            mu0 += w;
            mu2 += w * th.cos().powi(2);
        }
        let (_, b) = recurrence_coefficients(WeightSpec::gegenbauer(lam).unwrap(), 2).unwrap();
        assert_relative_eq!(b[0], mu0, max_relative = 1e-9);
        assert_relative_eq!(b[1], mu2 / mu0, max_relative = 1e-9);
    }

    #[test]
    fn invalid_lambda() {
        assert_eq!(WeightSpec::gegenbauer(-0.5), Err(Error::InvalidWeight(-0.5)));
        assert!(WeightSpec::gegenbauer(f64::NAN).is_err());
        assert!(WeightSpec::gegenbauer(-0.49).is_ok());
    }

    #[test]
    fn parse_and_display() {
        for w in [WeightSpec::CHEBYSHEV1, WeightSpec::LEGENDRE, WeightSpec::CHEBYSHEV2] {
            assert_eq!(w.to_string().parse::<WeightSpec>().unwrap(), w);
        }
        let g: WeightSpec = "gegenbauer:2.5".parse().unwrap();
        assert_eq!(g.lambda(), 2.5);
        assert_eq!(g.to_string(), "gegenbauer:2.5");
        assert!("gegenbauer:-1".parse::<WeightSpec>().is_err());
        assert!("hermite".parse::<WeightSpec>().is_err());
    }

    #[test]
    fn chebyshev_four_point() {
        let rule = golub_welsch(WeightSpec::CHEBYSHEV1, 4).unwrap();
        let closed = gauss_chebyshev_closed_form(4).unwrap();
        for i in 0..4 {
            assert_abs_diff_eq!(rule.nodes()[i], closed.nodes()[i], epsilon = 1e-15);
            assert_abs_diff_eq!(rule.weights()[i], PI / 4.0, epsilon = 1e-14);
        }
        assert_abs_diff_eq!(rule.nodes()[3], (PI / 8.0).cos(), epsilon = 1e-15);
    }

    #[test]
    fn legendre_two_point() {
        let rule = golub_welsch(WeightSpec::LEGENDRE, 2).unwrap();
        assert_abs_diff_eq!(rule.nodes()[1], 1.0 / 3f64.sqrt(), epsilon = 1e-15);
        assert_abs_diff_eq!(rule.nodes()[0], -1.0 / 3f64.sqrt(), epsilon = 1e-15);
        assert_abs_diff_eq!(rule.weights()[0], 1.0, epsilon = 1e-15);
        assert_abs_diff_eq!(rule.weights()[1], 1.0, epsilon = 1e-15);
    }

    #[test]
    fn legendre_five_point_exactness() {
        let rule = golub_welsch(WeightSpec::LEGENDRE, 5).unwrap();
        for k in 0..=9 {
            let exact = if k % 2 == 0 { 2.0 / (k as f64 + 1.0) } else { 0.0 };
            assert_abs_diff_eq!(rule.integrate(|x| x.powi(k)), exact, epsilon = 1e-14);
            assert_relative_eq!(WeightSpec::LEGENDRE.moment(k as u32), exact, max_relative = 1e-15);
        }
    }

    #[test]
    fn single_node_rule() {
        let rule = golub_welsch(WeightSpec::CHEBYSHEV2, 1).unwrap();
        assert_eq!(rule.nodes(), &[0.0]);
        assert_relative_eq!(rule.weights()[0], PI / 2.0, max_relative = 1e-15);
    }

    #[test]
    fn integrate_examples() {
        let rule = golub_welsch(WeightSpec::LEGENDRE, 20).unwrap();
        assert_abs_diff_eq!(rule.integrate(f64::exp), 1f64.exp() - (-1f64).exp(), epsilon = 1e-13);
        assert_abs_diff_eq!(rule.integrate(|_| 1.0), 2.0, epsilon = 1e-12);

        let cheb = golub_welsch(WeightSpec::CHEBYSHEV1, 10).unwrap();
        let t7 = |x| crate::chebyshev::eval_t(7, x).unwrap();
        assert_abs_diff_eq!(cheb.integrate(t7), 0.0, epsilon = 1e-13);

        let fallible: std::result::Result<f64, &str> = cheb.try_integrate(|x| if x > 0.9 { Err("boom") } else { Ok(x) });
        assert_eq!(fallible, Err("boom"));
    }

    #[test]
    fn reference_integrals() {
        let e = 1f64.exp();
        assert_abs_diff_eq!(reference_integral(WeightSpec::LEGENDRE, f64::exp).unwrap(), e - 1.0 / e, epsilon = 1e-14);
        assert_abs_diff_eq!(reference_integral(WeightSpec::CHEBYSHEV1, |_| 1.0).unwrap(), PI, epsilon = 1e-13);
        let a = reference_rule(WeightSpec::LEGENDRE).unwrap();
        let b = reference_rule(WeightSpec::LEGENDRE).unwrap();
        assert!(Arc::ptr_eq(&a, &b));
    }

    #[test]
    fn validate_rejects_broken_rules() {
        let w = WeightSpec::LEGENDRE;
        assert!(QuadratureRule::new(w, vec![-0.5, 0.5], vec![1.0, 1.0]).is_ok());
        assert!(QuadratureRule::new(w, vec![0.5, -0.5], vec![1.0, 1.0]).is_err());
        assert!(QuadratureRule::new(w, vec![-0.5, 0.5], vec![2.5, -0.5]).is_err());
        assert!(QuadratureRule::new(w, vec![-0.5, 0.4], vec![1.0, 1.0]).is_err());
        assert!(QuadratureRule::new(w, vec![-1.0, 1.0], vec![1.0, 1.0]).is_err());
        assert!(QuadratureRule::new(w, vec![-0.5, 0.5], vec![1.0, 0.5]).is_err());
        assert!(QuadratureRule::new(w, vec![], vec![]).is_err());
    }
}
