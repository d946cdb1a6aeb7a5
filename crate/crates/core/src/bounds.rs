//! A-priori bounds for Chebyshev coefficients and Gauss quadrature errors.
//!
//! Two regularity functionals of an integrand `f` enter:
//!
//! * `V_r = ∫ |f^(r+1)(x)| / sqrt(1 - x^2) dx` (endpoint-weighted),
//! * `U_r = ∫ |f^(r+1)(x)| dx` (plain).
//!
//! `V_r`-based bounds become `+∞` when `V_r` diverges; that value is
//! propagated rather than reported as an error.

use std::f64::consts::PI;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::One;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::ladder::rational_to_f64;

/// `(r, U_r, V_r)` for one integrand. `None` means the functional is not
/// available for that order; `V_r` may be `+∞`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct RegularityProfile {
    pub r: u32,
    pub u: Option<f64>,
    pub v: Option<f64>,
}

impl RegularityProfile {
    pub fn new(r: u32, u: Option<f64>, v: Option<f64>) -> Result<Self> {
        if let Some(u) = u {
            if !(u >= 0.0) || u.is_infinite() {
                return Err(Error::pre(format!("U_r must be finite and >= 0, got {u}")));
            }
        }
        if let Some(v) = v {
            if !(v >= 0.0) {
                return Err(Error::pre(format!("V_r must be >= 0, got {v}")));
            }
        }
        if let (Some(u), Some(v)) = (u, v) {
            // (1 - x^2)^(-1/2) >= 1; allow round-off between the two quadratures
            if v.is_finite() && u > v * (1.0 + 1e-9) {
                return Err(Error::pre(format!("U_r = {u} exceeds V_r = {v}")));
            }
        }
        Ok(Self { r, u, v })
    }
}

fn nonneg(name: &str, v: f64) -> Result<()> {
    if v >= 0.0 {
        Ok(())
    } else {
        Err(Error::pre(format!("{name} must be >= 0, got {v}")))
    }
}

fn finite_nonneg(name: &str, v: f64) -> Result<()> {
    if v >= 0.0 && v.is_finite() {
        Ok(())
    } else {
        Err(Error::pre(format!("{name} must be finite and >= 0, got {v}")))
    }
}

fn coeff_index(r: u32, n: u32) -> Result<()> {
    if n < r + 1 {
        return Err(Error::pre(format!("coefficient bounds need n >= r+1, got n={n}, r={r}")));
    }
    Ok(())
}

fn quadrature_order(n: u32, r: u32) -> Result<()> {
    if n == 0 || r < 1 || r > 2 * n - 1 {
        return Err(Error::pre(format!("quadrature bounds need 1 <= r <= 2N-1, got N={n}, r={r}")));
    }
    Ok(())
}

/// Product of `factors` by pairwise (tree) multiplication.
fn pairwise_product(factors: &[f64]) -> f64 {
    match factors.len() {
        0 => 1.0,
        1 => factors[0],
        len => {
            let (a, b) = factors.split_at(len / 2);
            pairwise_product(a) * pairwise_product(b)
        }
    }
}

/// `(2N+1)(2N)···(2N-r+2)`: `r` descending factors.
pub fn xiang_denominator_factors(n: u32, r: u32) -> Vec<u64> {
    (0..r).map(|i| u64::from(2 * n + 1 - i)).collect()
}

/// `∏_{j=1}^{r} (2N - r + 2j + 1)` as its factor list.
pub fn improved_denominator_factors(n: u32, r: u32) -> Vec<u64> {
    (1..=r).map(|j| u64::from(2 * n - r + 2 * j + 1)).collect()
}

fn float_product(factors: &[u64]) -> f64 {
    pairwise_product(&factors.iter().map(|&f| f as f64).collect::<Vec<_>>())
}

/// Trefethen's coefficient bound `2 V_r / (π ∏_{j=0}^{r} (n - j))`.
pub fn trefethen_coeff_bound(v_r: f64, r: u32, n: u32) -> Result<f64> {
    coeff_index(r, n)?;
    nonneg("V_r", v_r)?;
    if v_r.is_infinite() {
        return Ok(f64::INFINITY);
    }
    let prod = pairwise_product(&(0..=r).map(|j| f64::from(n - j)).collect::<Vec<_>>());
    Ok(2.0 * v_r / (PI * prod))
}

/// Coefficient bound `2 U_r / (π ∏_{j=0}^{r} (n - r + 2j))`.
pub fn new_coeff_bound(u_r: f64, r: u32, n: u32) -> Result<f64> {
    coeff_index(r, n)?;
    finite_nonneg("U_r", u_r)?;
    let prod = pairwise_product(&(0..=r).map(|j| f64::from(n - r + 2 * j)).collect::<Vec<_>>());
    Ok(2.0 * u_r / (PI * prod))
}

/// Xiang's quadrature bound `4 V_r ‖w‖_1 / (π r (2N+1)(2N)···(2N-r+2))`.
pub fn xiang_quadrature_bound(v_r: f64, w_norm: f64, n: u32, r: u32) -> Result<f64> {
    quadrature_order(n, r)?;
    nonneg("V_r", v_r)?;
    if !(w_norm > 0.0) {
        return Err(Error::pre("weight norm must be positive"));
    }
    if v_r.is_infinite() {
        return Ok(f64::INFINITY);
    }
    let prod = float_product(&xiang_denominator_factors(n, r));
    Ok(4.0 * v_r * w_norm / (PI * f64::from(r) * prod))
}

/// Quadrature bound `4 U_r ‖w‖_1 / (r π ∏_{j=1}^{r} (2N - r + 2j + 1))`.
pub fn new_quadrature_bound(u_r: f64, w_norm: f64, n: u32, r: u32) -> Result<f64> {
    quadrature_order(n, r)?;
    finite_nonneg("U_r", u_r)?;
    if !(w_norm > 0.0) {
        return Err(Error::pre("weight norm must be positive"));
    }
    let prod = float_product(&improved_denominator_factors(n, r));
    Ok(4.0 * u_r * w_norm / (f64::from(r) * PI * prod))
}

/// Gauss-Gegenbauer bound: [`new_quadrature_bound`] with prefactor 2 instead
/// of 4 and `‖w_λ‖_1` as the weight norm.
pub fn gegenbauer_quadrature_bound(u_r: f64, lambda: f64, n: u32, r: u32) -> Result<f64> {
    let w_norm = gegenbauer_weight_norm(lambda)?;
    Ok(0.5 * new_quadrature_bound(u_r, w_norm, n, r)?)
}

/// `‖w_λ‖_1 = ∫ (1 - x^2)^(λ - 1/2) dx = sqrt(π) Γ(λ + 1/2) / Γ(λ + 1)`.
///
/// Note the Legendre case `λ = 1/2` is 2, the length of the interval.
pub fn gegenbauer_weight_norm(lambda: f64) -> Result<f64> {
    if !(lambda > -0.5) || !lambda.is_finite() {
        return Err(Error::InvalidWeight(lambda));
    }
    let twice = 2.0 * lambda;
    if twice.fract() == 0.0 && twice <= 400.0 {
        // ‖w_{μ+1}‖ = ‖w_μ‖ (μ + 1/2) / (μ + 1), from ‖w_0‖ = π or ‖w_{1/2}‖ = 2
        let (mut mu, mut norm) = if (twice as u32).is_multiple_of(2) { (0.0, PI) } else { (0.5, 2.0) };
        while mu < lambda {
            norm *= (mu + 0.5) / (mu + 1.0);
            mu += 1.0;
        }
        return Ok(norm);
    }
    use statrs::function::gamma::ln_gamma;
    Ok(PI.sqrt() * (ln_gamma(lambda + 0.5) - ln_gamma(lambda + 1.0)).exp())
}

/// Denominator factors `β_{N,r}`, `θ_{N,r}` and their ratio.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct Table1Factors {
    pub beta: f64,
    pub theta: f64,
    pub ratio: f64,
}

/// `β = 1/((2N+1)(2N)···(2N-r+2))`, `θ = 1/∏_{j=1}^{r}(2N-r+2j+1)`.
pub fn table1_factors(n: u32, r: u32) -> Result<Table1Factors> {
    quadrature_order(n, r)?;
    let beta = 1.0 / float_product(&xiang_denominator_factors(n, r));
    let theta = 1.0 / float_product(&improved_denominator_factors(n, r));
    Ok(Table1Factors { beta, theta, ratio: beta / theta })
}

/// Exact-rational `(β, θ, β/θ)`.
pub fn table1_factors_exact(n: u32, r: u32) -> Result<(BigRational, BigRational, BigRational)> {
    quadrature_order(n, r)?;
    let recip = |factors: Vec<u64>| {
        let den: BigInt = factors.into_iter().map(BigInt::from).product();
        BigRational::new(BigInt::one(), den)
    };
    let beta = recip(xiang_denominator_factors(n, r));
    let theta = recip(improved_denominator_factors(n, r));
    let ratio = &beta / &theta;
    Ok((beta, theta, ratio))
}

/// Exact factors rounded to `f64`.
pub fn table1_factors_from_exact(n: u32, r: u32) -> Result<Table1Factors> {
    let (b, t, q) = table1_factors_exact(n, r)?;
    Ok(Table1Factors {
        beta: rational_to_f64(&b),
        theta: rational_to_f64(&t),
        ratio: rational_to_f64(&q),
    })
}

/// `x` in scientific notation with `digits` significant digits, e.g. `4.10e-7`.
pub fn format_sig(x: f64, digits: usize) -> String {
    if !x.is_finite() {
        return if x > 0.0 { "inf".into() } else { format!("{x}") };
    }
    format!("{:.*e}", digits.saturating_sub(1), x)
}

/// Ratio column: one decimal below `1e4`, three significant digits above.
pub fn format_ratio(x: f64) -> String {
    if x.is_finite() && x.abs() < 1e4 {
        format!("{x:.1}")
    } else {
        format_sig(x, 3)
    }
}
