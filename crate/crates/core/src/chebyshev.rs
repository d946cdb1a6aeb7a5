//! Chebyshev polynomials of the first kind and the scaled derivative
//! `𝒯_n(x) = sqrt(1 - x^2) T_n'(x) / n^2 = sin(n arccos x) / n`.
//!
//! Evaluation goes through the trigonometric forms on `[-1, 1]`. Negative
//! arguments are folded onto `[0, 1]` with the exact parity of each family,
//! so `T_n(-x) = (-1)^n T_n(x)` holds bit-for-bit.
//!
//! The three-term recurrence is kept in [`recurrence`] as an independent
//! oracle for tests and the `verify` suites.

use crate::error::{Error, Result};

/// Absolute slack admitted when checking `|x| <= 1`.
pub const DOMAIN_TOL: f64 = 1e-12;

/// Check `|x| <= 1 + DOMAIN_TOL` and clamp into `[-1, 1]`.
pub fn clamp_to_interval(x: f64) -> Result<f64> {
    if !x.is_finite() || x.abs() > 1.0 + DOMAIN_TOL {
        return Err(Error::Domain(x));
    }
    Ok(x.clamp(-1.0, 1.0))
}

#[inline]
fn odd_degree(n: u32) -> bool {
    n % 2 == 1
}

/// `T_n(x) = cos(n arccos x)`.
pub fn eval_t(n: u32, x: f64) -> Result<f64> {
    let x = clamp_to_interval(x)?;
    Ok(t_unchecked(n, x))
}

pub(crate) fn t_unchecked(n: u32, x: f64) -> f64 {
    if n == 0 {
        return 1.0;
    }
    let v = (f64::from(n) * x.abs().acos()).cos();
    if x < 0.0 && odd_degree(n) {
        -v
    } else {
        v
    }
}

/// `𝒯_n(x) = sin(n arccos x) / n`, defined for `n >= 1`. Vanishes at `±1`.
pub fn eval_scaled_t(n: u32, x: f64) -> Result<f64> {
    if n == 0 {
        return Err(Error::pre("scaled Chebyshev function needs n >= 1"));
    }
    let x = clamp_to_interval(x)?;
    Ok(scaled_t_unchecked(n, x))
}

pub(crate) fn scaled_t_unchecked(n: u32, x: f64) -> f64 {
    if x.abs() == 1.0 {
        return 0.0;
    }
    let nf = f64::from(n);
    let v = (nf * x.abs().acos()).sin() / nf;
    // 𝒯_n(-x) = (-1)^(n+1) 𝒯_n(x)
    if x < 0.0 && !odd_degree(n) {
        -v
    } else {
        v
    }
}

/// `T_n'(x) = n sin(nθ) / sin θ` with `x = cos θ`, for interior `x`.
pub fn eval_t_derivative(n: u32, x: f64) -> Result<f64> {
    let x = clamp_to_interval(x)?;
    let nf = f64::from(n);
    if x.abs() == 1.0 {
        // T_n'(1) = n^2, T_n'(-1) = (-1)^(n+1) n^2
        let v = nf * nf;
        return Ok(if x < 0.0 && !odd_degree(n) { -v } else { v });
    }
    let s = (1.0 - x * x).sqrt();
    Ok(nf * scaled_t_unchecked(n, x) * nf / s)
}

/// `𝒯_n'(x) = -T_n(x) / sqrt(1 - x^2)` on the open interval.
pub fn eval_scaled_t_derivative(n: u32, x: f64) -> Result<f64> {
    if n == 0 {
        return Err(Error::pre("scaled Chebyshev function needs n >= 1"));
    }
    let x = clamp_to_interval(x)?;
    if x.abs() == 1.0 {
        return Err(Error::pre("𝒯_n' is singular at ±1"));
    }
    Ok(-t_unchecked(n, x) / (1.0 - x * x).sqrt())
}

/// Polynomial three-term recurrences, used as an oracle only.
pub mod recurrence {
    /// `(T_n(x), T_n'(x))` from `T_{k+1} = 2x T_k - T_{k-1}` and its derivative.
    pub fn t_and_derivative(n: u32, x: f64) -> (f64, f64) {
        let (mut t_prev, mut t) = (1.0, x);
        let (mut d_prev, mut d) = (0.0, 1.0);
        if n == 0 {
            return (1.0, 0.0);
        }
        for _ in 1..n {
            let t_next = 2.0 * x * t - t_prev;
            let d_next = 2.0 * t + 2.0 * x * d - d_prev;
            t_prev = t;
            t = t_next;
            d_prev = d;
            d = d_next;
        }
        (t, d)
    }

    /// `T_n(x)` by the recurrence.
    pub fn t(n: u32, x: f64) -> f64 {
        t_and_derivative(n, x).0
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_abs_diff_eq;

    #[test]
    fn trivial_values() {
        assert_eq!(eval_t(0, 0.37).unwrap(), 1.0);
        assert_abs_diff_eq!(eval_t(3, 0.5).unwrap(), -1.0, epsilon = 1e-15);
        assert_abs_diff_eq!(eval_t(7, 1.0).unwrap(), 1.0, epsilon = 1e-15);
        assert_eq!(eval_scaled_t(5, 1.0).unwrap(), 0.0);
        assert_eq!(eval_scaled_t(5, -1.0).unwrap(), 0.0);
        assert_abs_diff_eq!(eval_scaled_t(1, 0.0).unwrap(), 1.0, epsilon = 1e-15);
    }

    #[test]
    fn scaled_t_matches_recurrence_derivative() {
        let x: f64 = 0.3;
        let (_, d) = recurrence::t_and_derivative(4, x);
        let oracle = (1.0 - x * x).sqrt() * d / 16.0;
        assert_abs_diff_eq!(eval_scaled_t(4, x).unwrap(), oracle, epsilon = 1e-14);
    }

    #[test]
    fn domain_errors() {
        assert_eq!(eval_t(2, 1.5), Err(Error::Domain(1.5)));
        assert!(eval_scaled_t(2, -1.01).is_err());
        assert!(eval_scaled_t(0, 0.1).is_err());
        // round-off from node generation is admitted
        assert_abs_diff_eq!(eval_t(2, 1.0 + 1e-13).unwrap(), 1.0, epsilon = 1e-15);
        assert!(eval_t(2, f64::NAN).is_err());
    }

    #[test]
    fn parity_is_exact() {
        for n in 0..60 {
            for &x in &[0.1, 0.33, 0.5, 0.77, 0.999] {
                let sign = if n % 2 == 0 { 1.0 } else { -1.0 };
                assert_eq!(eval_t(n, -x).unwrap(), sign * eval_t(n, x).unwrap());
                if n > 0 {
                    assert_eq!(eval_scaled_t(n, -x).unwrap(), -sign * eval_scaled_t(n, x).unwrap());
                }
            }
        }
    }

    #[test]
    fn endpoint_derivatives() {
        assert_eq!(eval_t_derivative(5, 1.0).unwrap(), 25.0);
        assert_eq!(eval_t_derivative(4, -1.0).unwrap(), -16.0);
        let (_, d) = recurrence::t_and_derivative(6, 0.41);
        assert_abs_diff_eq!(eval_t_derivative(6, 0.41).unwrap(), d, epsilon = 1e-12);
    }

    #[test]
    fn scaled_derivative_finite_difference() {
        let h = 1e-6;
        for n in 1..12 {
            for &x in &[-0.8, -0.2, 0.05, 0.6] {
                let fd = (eval_scaled_t(n, x + h).unwrap() - eval_scaled_t(n, x - h).unwrap()) / (2.0 * h);
                assert_abs_diff_eq!(eval_scaled_t_derivative(n, x).unwrap(), fd, epsilon = 1e-5);
            }
        }
    }
}
