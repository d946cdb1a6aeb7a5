//! Chebyshev expansion coefficients and their tail sums.
//!
//! `a_n = (2/π) ∫ f T_n / sqrt(1 - x^2)` (with `1/π` for `a_0`) is evaluated
//! by a `P`-point Gauss-Chebyshev rule, i.e. a type-II discrete cosine
//! transform of samples at `x_k = cos((2k-1)π/(2P))`. The rule is exact for
//! `f T_n` of degree below `2P`, so `P` well above `M` controls aliasing.

use std::f64::consts::PI;

use rayon::prelude::*;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::summation::CompensatedSum;

/// Minimum oversampling added on top of the truncation degree.
pub const MIN_OVERSAMPLING: usize = 64;

/// Coefficients `a_0..=a_M` of `f ≈ Σ a_n T_n`.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ChebyshevExpansion {
    coeffs: Vec<f64>,
}

impl ChebyshevExpansion {
    pub fn from_coeffs(coeffs: Vec<f64>) -> Result<Self> {
        if coeffs.is_empty() {
            return Err(Error::pre("expansion needs at least a_0"));
        }
        Ok(Self { coeffs })
    }

    pub fn coeffs(&self) -> &[f64] {
        &self.coeffs
    }

    /// Truncation degree `M`.
    pub fn degree(&self) -> usize {
        self.coeffs.len() - 1
    }

    pub fn coeff(&self, n: usize) -> f64 {
        self.coeffs.get(n).copied().unwrap_or(0.0)
    }

    /// `Σ_{n<=M} a_n T_n(x)` by Clenshaw's recurrence.
    pub fn eval(&self, x: f64) -> Result<f64> {
        let x = crate::chebyshev::clamp_to_interval(x)?;
        let (mut b1, mut b2) = (0.0, 0.0);
        for &a in self.coeffs.iter().skip(1).rev() {
            let b0 = 2.0 * x * b1 - b2 + a;
            b2 = b1;
            b1 = b0;
        }
        Ok(self.coeffs[0] + x * b1 - b2)
    }
}

/// Rule size used by [`chebyshev_coefficients`]: `M + max(64, M)`.
pub fn default_points(m: usize) -> usize {
    m + MIN_OVERSAMPLING.max(m)
}

/// Coefficients up to degree `m` with the default oversampling.
pub fn chebyshev_coefficients<F>(f: F, m: usize) -> Result<ChebyshevExpansion>
where
    F: Fn(f64) -> f64 + Sync,
{
    chebyshev_coefficients_with_points(f, m, default_points(m))
}

/// Coefficients up to degree `m` from a `points`-point Gauss-Chebyshev rule.
pub fn chebyshev_coefficients_with_points<F>(f: F, m: usize, points: usize) -> Result<ChebyshevExpansion>
where
    F: Fn(f64) -> f64 + Sync,
{
    try_chebyshev_coefficients(|x| Ok::<_, Error>(f(x)), m, points)
}

/// Fallible-integrand variant; the first evaluation error is returned.
pub fn try_chebyshev_coefficients<F, E>(f: F, m: usize, points: usize) -> Result<ChebyshevExpansion>
where
    F: Fn(f64) -> std::result::Result<f64, E> + Sync,
    E: std::fmt::Display,
{
    if points <= m {
        return Err(Error::pre(format!("need more than {m} points, got {points}")));
    }
    let p = points;
    let period = 4 * p;
    // cos(iπ/(2P)) for i in 0..4P; T_n(x_k) = cos(n(2k-1)π/(2P)) is an exact lookup
    let cosines: Vec<f64> = (0..period).map(|i| (i as f64 * PI / (2 * p) as f64).cos()).collect();

    let samples = (1..=p)
        .map(|k| f(cosines[2 * k - 1]).map_err(|e| Error::Evaluation(e.to_string())))
        .collect::<Result<Vec<f64>>>()?;
    if let Some(bad) = samples.iter().find(|v| !v.is_finite()) {
        return Err(Error::Evaluation(format!("integrand returned {bad}")));
    }

    let coeffs = (0..=m)
        .into_par_iter()
        .map(|n| {
            let mut acc = CompensatedSum::new();
            for (k, &fk) in samples.iter().enumerate() {
                let idx = (n * (2 * k + 1)) % period;
                acc.add(fk * cosines[idx]);
            }
            let scale = if n == 0 { 1.0 } else { 2.0 };
            scale * acc.value() / p as f64
        })
        .collect();
    Ok(ChebyshevExpansion { coeffs })
}

/// `π Σ_{k=N}^{⌊(M-1)/2⌋} a_{2k+1}`: the odd-index tail starting at `2N+1`.
///
/// This is not the Gauss-Chebyshev error; for symmetric weights the odd
/// modes integrate to zero under both the integral and the rule. See
/// [`aliasing_error_sum`] for the exact error.
pub fn odd_tail_sum(exp: &ChebyshevExpansion, n: usize) -> Result<f64> {
    let m = exp.degree();
    if 2 * n + 1 > m {
        return Err(Error::pre(format!("odd tail needs 2N+1 <= M, got N={n}, M={m}")));
    }
    let s: CompensatedSum = (n..=(m - 1) / 2).map(|k| exp.coeffs[2 * k + 1]).collect();
    Ok(PI * s.value())
}

/// `π Σ_{k>=1} (-1)^(k+1) a_{2Nk}`, truncated at `M`.
///
/// The `N`-point Gauss-Chebyshev rule maps `T_{2Nk}` to `π(-1)^k` and
/// every other `T_n` (`n >= 1`) to 0, so this is `I[f] - Q_N[f]` for the
/// Chebyshev weight up to the truncation.
pub fn aliasing_error_sum(exp: &ChebyshevExpansion, n: usize) -> Result<f64> {
    let m = exp.degree();
    if n == 0 || 2 * n > m {
        return Err(Error::pre(format!("aliasing sum needs 1 <= N and 2N <= M, got N={n}, M={m}")));
    }
    let s: CompensatedSum = (1..=m / (2 * n))
        .map(|k| {
            let a = exp.coeffs[2 * n * k];
            if k % 2 == 1 {
                a
            } else {
                -a
            }
        })
        .collect();
    Ok(PI * s.value())
}

/// `Σ_{n=from}^{M} |a_n|`.
pub fn abs_tail_sum(exp: &ChebyshevExpansion, from: usize) -> Result<f64> {
    let m = exp.degree();
    if from > m {
        return Err(Error::pre(format!("tail start {from} beyond degree {m}")));
    }
    Ok(exp.coeffs[from..].iter().map(|a| a.abs()).sum())
}
