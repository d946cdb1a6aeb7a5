//! Executable identity checks, grouped into suites.
//!
//! Each suite reports `worst_margin = max(residual / tolerance)`; a suite
//! passes iff the margin is at most 1. Exact (rational) suites report 0 on
//! success and `+∞` on the first violation.

use rayon::prelude::*;
use serde::Serialize;

use crate::bounds::new_coeff_bound;
use crate::chebyshev::{eval_scaled_t, eval_scaled_t_derivative, eval_t, eval_t_derivative, recurrence};
use crate::error::{Error, Result};
use crate::expansion::chebyshev_coefficients_with_points;
use crate::gauss::{gauss_chebyshev_closed_form, golub_welsch, WeightSpec};
use crate::ladder::{lemma_key2_check, lemma_key_expansion, BetaLadder};
use crate::testbed::{corner_family, exp_function, CORNER_COEFFICIENT_POINTS};

/// Outcome of one suite.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct SuiteResult {
    pub name: String,
    pub passed: bool,
    pub worst_margin: f64,
    pub cases: usize,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub failure: Option<String>,
}

impl SuiteResult {
    fn from_margin(name: &str, cases: usize, worst: f64, failure: Option<String>) -> Self {
        let passed = worst <= 1.0 && failure.is_none();
        Self { name: name.to_string(), passed, worst_margin: worst, cases, failure }
    }

    fn exact(name: &str, cases: usize, failure: Option<String>) -> Self {
        let worst = if failure.is_some() { f64::INFINITY } else { 0.0 };
        Self::from_margin(name, cases, worst, failure)
    }
}

/// Grid for the rational suites: `2 <= n <= max_n`, `1 <= r <= min(max_r, n-1)`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub struct VerifyConfig {
    pub max_n: u32,
    pub max_r: u32,
    /// Test hook: corrupt one ladder denominator before checking.
    pub perturb: bool,
}

impl Default for VerifyConfig {
    fn default() -> Self {
        Self { max_n: 40, max_r: 12, perturb: false }
    }
}

impl VerifyConfig {
    pub fn validate(&self) -> Result<()> {
        if self.max_n < 2 {
            return Err(Error::pre(format!("max_n must be at least 2, got {}", self.max_n)));
        }
        if self.max_r < 1 || self.max_r > self.max_n - 1 {
            return Err(Error::pre(format!(
                "max_r must lie in 1..={}, got {}",
                self.max_n - 1,
                self.max_r
            )));
        }
        Ok(())
    }

    fn grid(&self) -> Vec<(u32, u32)> {
        (2..=self.max_n)
            .flat_map(|n| (1..=self.max_r.min(n - 1)).map(move |r| (n, r)))
            .collect()
    }
}

/// Run every suite in a fixed order.
pub fn run_all(config: &VerifyConfig) -> Result<Vec<SuiteResult>> {
    config.validate()?;
    Ok(vec![
        ladder_structure(config)?,
        reciprocal_identity(config)?,
        chebyshev_bound(),
        derivative_relation(),
        sturm_liouville(),
        scaled_derivative(),
        coefficient_envelope()?,
        gauss_exactness()?,
        gegenbauer_parity()?,
        chebyshev_closed_form()?,
    ])
}

fn first_failure(results: Vec<Option<String>>) -> Option<String> {
    results.into_iter().flatten().next()
}

/// Support, extremal closed forms and ladder ordering of the `r`-fold expansion.
pub fn ladder_structure(config: &VerifyConfig) -> Result<SuiteResult> {
    config.validate()?;
    let grid = config.grid();
    let checks = grid
        .par_iter()
        .enumerate()
        .map(|(i, &(n, r))| -> Result<Option<String>> {
            let mut ladder = BetaLadder::new(n, r)?;
            if config.perturb && i == 0 {
                ladder.perturb(0);
            }
            if let Err(msg) = ladder.check_structure() {
                return Ok(Some(msg));
            }
            let merged = lemma_key_expansion(n, r)?;
            if ladder.merged() != merged {
                return Ok(Some(format!("(n={n}, r={r}) ladder does not sum to the rewrite expansion")));
            }
            if let Some(m) = merged.support().find(|&m| m < n - r || m > n + r || (m + r - n) % 2 != 0) {
                return Ok(Some(format!("(n={n}, r={r}) mode {m} outside the support lattice")));
            }
            Ok(None)
        })
        .collect::<Result<Vec<_>>>()?;
    Ok(SuiteResult::exact("ladder-structure", grid.len(), first_failure(checks)))
}

/// `Σ |c_m| / m = 1/∏(n - r + 2j)` in exact rationals.
pub fn reciprocal_identity(config: &VerifyConfig) -> Result<SuiteResult> {
    config.validate()?;
    let grid = config.grid();
    let checks = grid
        .par_iter()
        .map(|&(n, r)| -> Result<Option<String>> {
            let (lhs, rhs) = lemma_key2_check(n, r)?;
            Ok((lhs != rhs).then(|| format!("(n={n}, r={r}) {lhs} != {rhs}")))
        })
        .collect::<Result<Vec<_>>>()?;
    Ok(SuiteResult::exact("reciprocal-identity", grid.len(), first_failure(checks)))
}

fn grid_points(count: usize) -> impl Iterator<Item = f64> {
    (0..count).map(move |i| -1.0 + 2.0 * i as f64 / (count - 1) as f64)
}

fn interior_points(count: usize, edge: f64) -> impl Iterator<Item = f64> {
    (0..count).map(move |i| -edge + 2.0 * edge * i as f64 / (count - 1) as f64)
}

/// `|T_n(x)| <= 1` for `n <= 200`.
pub fn chebyshev_bound() -> SuiteResult {
    let tol = 1e-14;
    let mut worst: f64 = 0.0;
    let mut cases = 0;
    for n in 0..=200 {
        for x in grid_points(1000) {
            let t = eval_t(n, x).expect("grid lies in [-1, 1]");
            worst = worst.max((t.abs() - 1.0).max(0.0) / tol);
            cases += 1;
        }
    }
    SuiteResult::from_margin("chebyshev-bound", cases, worst, None)
}

/// `(1 - x^2) T_n' = (n/2)(T_{n-1} - T_{n+1})` with `T_n'` from the recurrence.
pub fn derivative_relation() -> SuiteResult {
    let tol = 1e-11;
    let mut worst: f64 = 0.0;
    let mut cases = 0;
    for n in 1..=100u32 {
        for x in grid_points(401) {
            let (_, d) = recurrence::t_and_derivative(n, x);
            let lhs = (1.0 - x * x) * d;
            let rhs = 0.5 * f64::from(n) * (eval_t(n - 1, x).unwrap() - eval_t(n + 1, x).unwrap());
            worst = worst.max((lhs - rhs).abs() / tol);
            cases += 1;
        }
    }
    SuiteResult::from_margin("derivative-relation", cases, worst, None)
}

/// `sqrt(1-x^2) (sqrt(1-x^2) T_n')' + n^2 T_n = 0` from the trigonometric forms.
pub fn sturm_liouville() -> SuiteResult {
    let tol = 1e-9;
    let mut worst: f64 = 0.0;
    let mut cases = 0;
    for n in 0..=50u32 {
        let nf = f64::from(n);
        for x in interior_points(199, 0.999) {
            let s = (1.0 - x * x).sqrt();
            // s T_n' = n sin(nθ); d/dx of that is n^2 cos(nθ) dθ/dx = -n^2 T_n / s
            let flux_derivative = -nf * nf * eval_t(n, x).unwrap() / s;
            let residual = s * flux_derivative + nf * nf * eval_t(n, x).unwrap();
            worst = worst.max(residual.abs() / tol);
            // cross-check the flux against T_n' itself
            let flux = s * eval_t_derivative(n, x).unwrap();
            let expected = nf * nf * eval_scaled_t(n.max(1), x).unwrap();
            let flux_err = if n == 0 { flux.abs() } else { (flux - expected).abs() / nf };
            worst = worst.max(flux_err / tol);
            cases += 1;
        }
    }
    SuiteResult::from_margin("sturm-liouville", cases, worst, None)
}

/// `𝒯_n' sqrt(1-x^2) + T_n = 0`, with `𝒯_n'` checked by central differences.
pub fn scaled_derivative() -> SuiteResult {
    let (tol, fd_tol, h) = (1e-11, 1e-5, 1e-6);
    let mut worst: f64 = 0.0;
    let mut cases = 0;
    for n in 1..=50u32 {
        for x in interior_points(101, 0.95) {
            let d = eval_scaled_t_derivative(n, x).unwrap();
            let residual = d * (1.0 - x * x).sqrt() + eval_t(n, x).unwrap();
            worst = worst.max(residual.abs() / tol);
            let fd = (eval_scaled_t(n, x + h).unwrap() - eval_scaled_t(n, x - h).unwrap()) / (2.0 * h);
            worst = worst.max((fd - d).abs() / fd_tol);
            cases += 1;
        }
    }
    SuiteResult::from_margin("scaled-derivative", cases, worst, None)
}

/// Points used for the coefficient-envelope checks.
pub const ENVELOPE_POINTS: usize = CORNER_COEFFICIENT_POINTS;
/// Highest coefficient index checked against the envelope.
pub const ENVELOPE_MAX_N: usize = 200;

/// `|a_n| <= 2 U_r / (π ∏(n - r + 2j))` for the corner family and `e^x`.
/// The margin is `max |a_n| / bound`, tolerated up to `1 + 1e-6`.
pub fn coefficient_envelope() -> Result<SuiteResult> {
    let mut cases: Vec<(crate::testbed::TestFunction, u32)> = [0.0, 0.5, 0.9, 0.99]
        .into_iter()
        .map(|t| corner_family(4, t).map(|f| (f, 4)))
        .collect::<Result<_>>()?;
    cases.extend((1..=6).map(|r| (exp_function(), r)));

    let ratios = cases
        .par_iter()
        .map(|(f, r)| -> Result<(f64, usize)> {
            let u = f.profile(*r)?.u.ok_or_else(|| Error::pre("U_r unavailable"))?;
            let exp = chebyshev_coefficients_with_points(|x| f.eval(x), ENVELOPE_MAX_N, ENVELOPE_POINTS)?;
            let mut worst: f64 = 0.0;
            let mut count = 0;
            for n in (*r as usize + 1)..=ENVELOPE_MAX_N {
                let bound = new_coeff_bound(u, *r, n as u32)?;
                worst = worst.max(exp.coeff(n).abs() / bound);
                count += 1;
            }
            Ok((worst, count))
        })
        .collect::<Result<Vec<_>>>()?;
    let worst = ratios.iter().map(|p| p.0).fold(0.0, f64::max);
    let count = ratios.iter().map(|p| p.1).sum();
    let margin = worst / (1.0 + 1e-6);
    Ok(SuiteResult::from_margin("coefficient-envelope", count, margin, None))
}

/// Aliases exercised by the rule suites.
pub const WEIGHT_ALIASES: [WeightSpec; 3] = [WeightSpec::CHEBYSHEV1, WeightSpec::LEGENDRE, WeightSpec::CHEBYSHEV2];

/// Monomials of degree `<= 2N-1` are integrated to relative `1e-11`.
pub fn gauss_exactness() -> Result<SuiteResult> {
    let tol = 1e-11;
    let mut worst: f64 = 0.0;
    let mut cases = 0;
    for weight in WEIGHT_ALIASES {
        for n in 1..=20usize {
            let rule = golub_welsch(weight, n)?;
            for k in 0..(2 * n as u32) {
                let q = rule.integrate(|x| x.powi(k as i32));
                let exact = weight.moment(k);
                let scale = rule.absolute_sum(|x| x.powi(k as i32)).max(exact.abs());
                worst = worst.max((q - exact).abs() / (scale * tol));
                cases += 1;
            }
        }
    }
    Ok(SuiteResult::from_margin("gauss-exactness", cases, worst, None))
}

/// Gegenbauer values checked by the parity suite.
pub const PARITY_LAMBDAS: [f64; 4] = [0.0, 0.5, 1.0, 2.5];

/// `Q_N[T_j] = 0` within `1e-13` for odd `j <= 4N+1`.
pub fn gegenbauer_parity() -> Result<SuiteResult> {
    let tol = 1e-13;
    let mut worst: f64 = 0.0;
    let mut cases = 0;
    for lambda in PARITY_LAMBDAS {
        let weight = WeightSpec::gegenbauer(lambda)?;
        for n in 1..=20usize {
            let rule = golub_welsch(weight, n)?;
            for j in (1..=4 * n as u32 + 1).step_by(2) {
                let q = rule.try_integrate(|x| eval_t(j, x))?;
                worst = worst.max(q.abs() / tol);
                cases += 1;
            }
        }
    }
    Ok(SuiteResult::from_margin("gegenbauer-parity", cases, worst, None))
}

/// Golub-Welsch Chebyshev rules against `cos((2i-1)π/(2N))`, `π/N` within `1e-13`.
pub fn chebyshev_closed_form() -> Result<SuiteResult> {
    let tol = 1e-13;
    let mut worst: f64 = 0.0;
    let mut cases = 0;
    for n in 1..=20usize {
        let gw = golub_welsch(WeightSpec::CHEBYSHEV1, n)?;
        let cf = gauss_chebyshev_closed_form(n)?;
        for i in 0..n {
            worst = worst.max((gw.nodes()[i] - cf.nodes()[i]).abs() / tol);
            worst = worst.max((gw.weights()[i] - cf.weights()[i]).abs() / tol);
            cases += 1;
        }
    }
    Ok(SuiteResult::from_margin("chebyshev-closed-form", cases, worst, None))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn small_grid_passes() {
        let cfg = VerifyConfig { max_n: 12, max_r: 5, perturb: false };
        assert!(ladder_structure(&cfg).unwrap().passed);
        assert!(reciprocal_identity(&cfg).unwrap().passed);
    }

    #[test]
    fn perturbation_is_caught() {
        let cfg = VerifyConfig { max_n: 6, max_r: 3, perturb: true };
        let res = ladder_structure(&cfg).unwrap();
        assert!(!res.passed);
        assert!(res.worst_margin.is_infinite());
        assert!(res.failure.is_some());
    }

    #[test]
    fn config_validation() {
        assert!(VerifyConfig::default().validate().is_ok());
        assert!(VerifyConfig { max_n: 10, max_r: 10, perturb: false }.validate().is_err());
        assert!(VerifyConfig { max_n: 1, max_r: 1, perturb: false }.validate().is_err());
        assert!(VerifyConfig { max_n: 10, max_r: 0, perturb: false }.validate().is_err());
        assert_eq!(VerifyConfig { max_n: 4, max_r: 2, perturb: false }.grid(), vec![(2, 1), (3, 1), (3, 2), (4, 1), (4, 2)]);
    }

    #[test]
    fn floating_suites_pass() {
        for suite in [chebyshev_bound(), derivative_relation(), sturm_liouville(), scaled_derivative()] {
            assert!(suite.passed, "{suite:?}");
        }
        for suite in [gauss_exactness().unwrap(), gegenbauer_parity().unwrap(), chebyshev_closed_form().unwrap()] {
            assert!(suite.passed, "{suite:?}");
        }
    }
}
