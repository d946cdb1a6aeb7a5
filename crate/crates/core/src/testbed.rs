//! Test integrands with known regularity, and numeric evaluation of the
//! `U_r` / `V_r` functionals.
//!
//! Derivatives are supplied analytically. A derivative that is a measure
//! rather than a function (the `(j+1)`-st derivative of a corner function)
//! carries its delta masses explicitly; they are never integrated
//! numerically.

use std::f64::consts::PI;
use std::fmt;
use std::sync::OnceLock;

use crate::bounds::RegularityProfile;
use crate::error::{Error, Result};
use crate::expansion::{chebyshev_coefficients_with_points, default_points, ChebyshevExpansion};
use crate::gauss::{golub_welsch, QuadratureRule, WeightSpec};

/// Rule size for Chebyshev coefficients of corner-family integrands.
pub const CORNER_COEFFICIENT_POINTS: usize = 4096;

/// Relative tolerance of [`adaptive_integrate`] as used for `U_r` / `V_r`.
pub const ADAPTIVE_REL_TOL: f64 = 1e-9;
/// Absolute floor of [`adaptive_integrate`].
pub const ADAPTIVE_ABS_FLOOR: f64 = 1e-14;
const MAX_DEPTH: u32 = 48;
const KERNEL_POINTS: usize = 10;

fn kernel() -> &'static QuadratureRule {
    static KERNEL: OnceLock<QuadratureRule> = OnceLock::new();
    KERNEL.get_or_init(|| golub_welsch(WeightSpec::LEGENDRE, KERNEL_POINTS).expect("10-point Gauss-Legendre"))
}

fn panel<F: Fn(f64) -> f64>(f: &F, a: f64, b: f64) -> f64 {
    let (mid, half) = (0.5 * (a + b), 0.5 * (b - a));
    half * kernel().integrate(|s| f(mid + half * s))
}

/// `∫_a^b f` by recursive bisection with a 10-point Gauss-Legendre panel.
///
/// A panel is accepted when the two-half estimate agrees with the whole-panel
/// estimate to within its share of `max(rel_tol · |I|, abs_floor)`.
pub fn adaptive_integrate<F: Fn(f64) -> f64>(f: F, a: f64, b: f64, rel_tol: f64, abs_floor: f64) -> Result<f64> {
    if a == b {
        return Ok(0.0);
    }
    let whole = panel(&f, a, b);
    let tol = (rel_tol * whole.abs()).max(abs_floor);
    bisect(&f, a, b, whole, tol, b - a, 0)
}

fn bisect<F: Fn(f64) -> f64>(f: &F, a: f64, b: f64, whole: f64, tol: f64, span: f64, depth: u32) -> Result<f64> {
    let m = 0.5 * (a + b);
    let (left, right) = (panel(f, a, m), panel(f, m, b));
    let refined = left + right;
    let share = tol * (b - a) / span;
    if (refined - whole).abs() <= share {
        return Ok(refined);
    }
    if depth >= MAX_DEPTH || !refined.is_finite() {
        return Err(Error::QuadratureNonConvergence { a, b });
    }
    Ok(bisect(f, a, m, left, tol, span, depth + 1)? + bisect(f, m, b, right, tol, span, depth + 1)?)
}

fn integrate_pieces<F: Fn(f64) -> f64>(f: F, lo: f64, hi: f64, cuts: &[f64]) -> Result<f64> {
    let mut points = vec![lo];
    let mut inner: Vec<f64> = cuts.iter().copied().filter(|c| *c > lo && *c < hi).collect();
    inner.sort_by(f64::total_cmp);
    points.extend(inner);
    points.push(hi);
    let mut total = 0.0;
    for w in points.windows(2) {
        total += adaptive_integrate(&f, w[0], w[1], ADAPTIVE_REL_TOL, ADAPTIVE_ABS_FLOOR)?;
    }
    Ok(total)
}

type Density = Box<dyn Fn(f64) -> f64 + Send + Sync>;

/// A derivative `f^(k)` on `[-1, 1]`: an integrable density, optional
/// breakpoints where it is only piecewise smooth, and point masses
/// `(location, mass)` for its singular part.
pub struct Derivative {
    density: Density,
    breakpoints: Vec<f64>,
    point_masses: Vec<(f64, f64)>,
}

impl Derivative {
    pub fn smooth(density: impl Fn(f64) -> f64 + Send + Sync + 'static) -> Self {
        Self { density: Box::new(density), breakpoints: Vec::new(), point_masses: Vec::new() }
    }

    pub fn piecewise(density: impl Fn(f64) -> f64 + Send + Sync + 'static, breakpoints: Vec<f64>) -> Self {
        Self { density: Box::new(density), breakpoints, point_masses: Vec::new() }
    }

    pub fn with_point_mass(mut self, at: f64, mass: f64) -> Self {
        self.point_masses.push((at, mass));
        self
    }

    pub fn density(&self, x: f64) -> f64 {
        (self.density)(x)
    }

    pub fn point_masses(&self) -> &[(f64, f64)] {
        &self.point_masses
    }
}

impl fmt::Debug for Derivative {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("Derivative")
            .field("breakpoints", &self.breakpoints)
            .field("point_masses", &self.point_masses)
            .finish_non_exhaustive()
    }
}

/// `∫ |g|` over `[-1, 1]` for `g = f^(r+1)`; delta masses add `|mass|`.
pub fn numeric_u(deriv: &Derivative) -> Result<f64> {
    let smooth = integrate_pieces(|x| deriv.density(x).abs(), -1.0, 1.0, &deriv.breakpoints)?;
    let masses: f64 = deriv.point_masses.iter().map(|(_, m)| m.abs()).sum();
    Ok(smooth + masses)
}

/// `∫ |g| / sqrt(1 - x^2)`, evaluated as `∫_0^π |g(cos θ)| dθ`; a delta of
/// mass `m` at `t` adds `|m| / sqrt(1 - t^2)` (infinite at `±1`).
pub fn numeric_v(deriv: &Derivative) -> Result<f64> {
    let cuts: Vec<f64> = deriv.breakpoints.iter().filter(|t| t.abs() < 1.0).map(|t| t.acos()).collect();
    let smooth = integrate_pieces(|th| deriv.density(th.cos()).abs(), 0.0, PI, &cuts)?;
    let masses: f64 = deriv
        .point_masses
        .iter()
        .map(|&(t, m)| {
            if m == 0.0 {
                0.0
            } else if t.abs() >= 1.0 {
                f64::INFINITY
            } else {
                m.abs() / (1.0 - t * t).sqrt()
            }
        })
        .sum();
    Ok(smooth + masses)
}

/// Modified Bessel function `I_0(x)` by its power series.
pub(crate) fn bessel_i0(x: f64) -> f64 {
    let q = 0.25 * x * x;
    let (mut term, mut sum) = (1.0, 1.0);
    for k in 1..200 {
        term *= q / (k as f64 * k as f64);
        sum += term;
        if term < f64::EPSILON * sum {
            break;
        }
    }
    sum
}

fn factorial(k: u32) -> f64 {
    (1..=k).map(f64::from).product()
}

#[derive(Debug, Clone, Copy, PartialEq)]
enum Kind {
    /// `(x - t)^(j-1) |x - t| / j!`
    Corner { j: u32, t: f64 },
    Exp,
    /// `T_n`, used as an oracle integrand.
    Chebyshev { n: u32 },
}

/// An integrand with analytic derivatives and, where known, closed-form
/// regularity functionals.
#[derive(Debug, Clone, PartialEq)]
pub struct TestFunction {
    name: String,
    description: String,
    kind: Kind,
}

/// `f_j(x) = (x - t)^(j-1) |x - t| / j!`, whose `j`-th derivative jumps by 2 at `t`.
pub fn corner_family(j: u32, t: f64) -> Result<TestFunction> {
    if j < 2 {
        return Err(Error::pre(format!("corner family needs j >= 2, got {j}")));
    }
    if !(t.abs() < 1.0) {
        return Err(Error::pre(format!("corner location must lie in (-1, 1), got {t}")));
    }
    Ok(TestFunction {
        name: format!("corner_j{j}_t{t}"),
        description: format!("(x - {t})^{} |x - {t}| / {j}!", j - 1),
        kind: Kind::Corner { j, t },
    })
}

/// `f(x) = e^x`.
pub fn exp_function() -> TestFunction {
    TestFunction { name: "exp".into(), description: "e^x".into(), kind: Kind::Exp }
}

/// `f = T_n`.
pub fn chebyshev_mode(n: u32) -> TestFunction {
    TestFunction { name: format!("T{n}"), description: format!("T_{n}(x)"), kind: Kind::Chebyshev { n } }
}

impl TestFunction {
    pub fn name(&self) -> &str {
        &self.name
    }

    pub fn description(&self) -> &str {
        &self.description
    }

    pub fn eval(&self, x: f64) -> f64 {
        match self.kind {
            Kind::Corner { j, t } => {
                let d = x - t;
                d.powi(j as i32 - 1) * d.abs() / factorial(j)
            }
            Kind::Exp => x.exp(),
            Kind::Chebyshev { n } => crate::chebyshev::t_unchecked(n, x.clamp(-1.0, 1.0)),
        }
    }

    /// Location of the corner, for functions that have one.
    pub fn corner(&self) -> Option<f64> {
        match self.kind {
            Kind::Corner { t, .. } => Some(t),
            _ => None,
        }
    }

    /// Largest `r` for which `f^(r+1)` is a finite measure (so `U_r` exists).
    pub fn max_order(&self) -> Option<u32> {
        match self.kind {
            Kind::Corner { j, .. } => Some(j),
            Kind::Exp | Kind::Chebyshev { .. } => None,
        }
    }

    /// `f^(k)`, or `None` when it is not a measure or not provided.
    pub fn derivative(&self, k: u32) -> Option<Derivative> {
        match self.kind {
            Kind::Corner { j, t } => {
                if k <= j {
                    let p = j - k;
                    let scale = 1.0 / factorial(p);
                    // f_j^(k) = sgn(x - t) (x - t)^(j-k) / (j-k)!
                    Some(Derivative::piecewise(
                        move |x| {
                            let d = x - t;
                            match p {
                                _ if d == 0.0 => 0.0,
                                0 => d.signum(),
                                _ => d.powi(p as i32 - 1) * d.abs() * scale,
                            }
                        },
                        vec![t],
                    ))
                } else if k == j + 1 {
                    Some(Derivative::smooth(|_| 0.0).with_point_mass(t, 2.0))
                } else {
                    None
                }
            }
            Kind::Exp => Some(Derivative::smooth(f64::exp)),
            Kind::Chebyshev { n } => match k {
                0 => Some(Derivative::smooth(move |x| crate::chebyshev::t_unchecked(n, x.clamp(-1.0, 1.0)))),
                1 => Some(Derivative::smooth(move |x| crate::chebyshev::recurrence::t_and_derivative(n, x).1)),
                k if k > n => Some(Derivative::smooth(|_| 0.0)),
                _ => None,
            },
        }
    }

    /// `U_r` from the analytic `(r+1)`-st derivative.
    pub fn numeric_u(&self, r: u32) -> Result<f64> {
        let d = self.derivative(r + 1).ok_or_else(|| self.no_derivative(r))?;
        numeric_u(&d)
    }

    /// `V_r` from the analytic `(r+1)`-st derivative.
    pub fn numeric_v(&self, r: u32) -> Result<f64> {
        let d = self.derivative(r + 1).ok_or_else(|| self.no_derivative(r))?;
        numeric_v(&d)
    }

    fn no_derivative(&self, r: u32) -> Error {
        Error::pre(format!("{}: derivative of order {} is not available", self.name, r + 1))
    }

    /// `(r, U_r, V_r)`: closed forms where they exist, otherwise numeric.
    pub fn profile(&self, r: u32) -> Result<RegularityProfile> {
        match self.kind {
            Kind::Corner { j, t } => {
                if r > j {
                    return RegularityProfile::new(r, None, None);
                }
                if r == j {
                    return RegularityProfile::new(r, Some(2.0), Some(2.0 / (1.0 - t * t).sqrt()));
                }
                RegularityProfile::new(r, Some(self.numeric_u(r)?), Some(self.numeric_v(r)?))
            }
            Kind::Exp => {
                let e = 1f64.exp();
                RegularityProfile::new(r, Some(e - 1.0 / e), Some(PI * bessel_i0(1.0)))
            }
            Kind::Chebyshev { n } => {
                if r + 1 > n {
                    return RegularityProfile::new(r, Some(0.0), Some(0.0));
                }
                match self.derivative(r + 1) {
                    Some(_) => RegularityProfile::new(r, Some(self.numeric_u(r)?), Some(self.numeric_v(r)?)),
                    None => RegularityProfile::new(r, None, None),
                }
            }
        }
    }

    /// Gauss-Chebyshev rule size used for this function's coefficients.
    pub fn coefficient_points(&self, m: usize) -> usize {
        match self.kind {
            Kind::Corner { .. } => CORNER_COEFFICIENT_POINTS.max(default_points(m)),
            _ => default_points(m),
        }
    }

    /// Chebyshev coefficients up to degree `m`.
    pub fn expansion(&self, m: usize) -> Result<ChebyshevExpansion> {
        chebyshev_coefficients_with_points(|x| self.eval(x), m, self.coefficient_points(m))
    }

    /// `∫ w_λ f`, exact where a closed form exists, else the reference rule
    /// (split at the corner for corner functions, which have closed form only
    /// for `w ≡ 1`).
    pub fn integral(&self, weight: WeightSpec) -> Result<f64> {
        match self.kind {
            Kind::Corner { j, t } if weight == WeightSpec::LEGENDRE => {
                // ((1 - t)^(j+1) + (-1 - t)^(j+1)) / (j+1)!
                let k = j as i32 + 1;
                Ok(((1.0 - t).powi(k) + (-1.0 - t).powi(k)) / factorial(j + 1))
            }
            Kind::Exp if weight == WeightSpec::LEGENDRE => {
                let e = 1f64.exp();
                Ok(e - 1.0 / e)
            }
            Kind::Exp if weight == WeightSpec::CHEBYSHEV1 => Ok(PI * bessel_i0(1.0)),
            _ => crate::gauss::reference_integral(weight, |x| self.eval(x)),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::{assert_abs_diff_eq, assert_relative_eq};

    #[test]
    fn corner_examples() {
        let f = corner_family(4, 0.9).unwrap();
        let p = f.profile(4).unwrap();
        assert_eq!(p.u, Some(2.0));
        assert_relative_eq!(p.v.unwrap(), 2.0 / 0.19f64.sqrt(), max_relative = 1e-15);
        assert!((p.v.unwrap() - 4.5883).abs() < 1e-4);

        let f2 = corner_family(2, 0.0).unwrap();
        assert_eq!(f2.eval(0.5), 0.125);
        assert_eq!(f2.eval(-0.5), -0.125);

        assert!(corner_family(1, 0.0).is_err());
        assert!(corner_family(3, 1.0).is_err());
        assert!(corner_family(3, f64::NAN).is_err());
    }

    #[test]
    fn jump_values_are_distributional() {
        let f = corner_family(4, 0.9).unwrap();
        assert_eq!(f.numeric_u(4).unwrap(), 2.0);
        assert_relative_eq!(f.numeric_v(4).unwrap(), 2.0 / 0.19f64.sqrt(), max_relative = 1e-15);
        assert!(f.numeric_u(5).is_err());
        assert_eq!(f.profile(5).unwrap().u, None);
    }

    #[test]
    fn v_grows_near_the_endpoint_while_u_stays() {
        let mut last = 0.0;
        for &t in &[0.9, 0.99, 0.999, 0.9999] {
            let f = corner_family(4, t).unwrap();
            let (u, v) = (f.numeric_u(4).unwrap(), f.numeric_v(4).unwrap());
            assert_eq!(u, 2.0);
            assert!(v > last);
            assert_relative_eq!(v, 2.0 / (1.0 - t * t).sqrt(), max_relative = 1e-15);
            last = v;
        }
    }

    #[test]
    fn lower_orders_match_closed_forms() {
        // U_r = ((1-t)^{j-r} + (1+t)^{j-r}) / (j-r)!
        for &t in &[0.0, 0.5, 0.9, -0.3] {
            let f = corner_family(4, t).unwrap();
            for r in 0..4 {
                let m = 4 - r;
                let closed = ((1.0 - t).powi(m as i32) + (1.0 + t).powi(m as i32)) / factorial(m);
                assert_relative_eq!(f.numeric_u(r).unwrap(), closed, max_relative = 1e-9);
                let p = f.profile(r).unwrap();
                assert!(p.u.unwrap() <= p.v.unwrap());
            }
        }
    }

    #[test]
    fn exp_profile() {
        let f = exp_function();
        let e = 1f64.exp();
        assert_eq!(f.eval(0.0), 1.0);
        for r in 0..6 {
            let p = f.profile(r).unwrap();
            assert_relative_eq!(p.u.unwrap(), e - 1.0 / e, max_relative = 1e-15);
            assert_relative_eq!(f.numeric_u(r).unwrap(), e - 1.0 / e, max_relative = 1e-9);
            assert_relative_eq!(f.numeric_v(r).unwrap(), p.v.unwrap(), max_relative = 1e-9);
            assert!(p.u.unwrap() < p.v.unwrap());
        }
        assert_relative_eq!(PI * bessel_i0(1.0), 3.977_463_260_506_42, max_relative = 1e-13);
    }

    #[test]
    fn zero_function() {
        let z = Derivative::smooth(|_| 0.0);
        assert_eq!(numeric_u(&z).unwrap(), 0.0);
        assert_eq!(numeric_v(&z).unwrap(), 0.0);
        let p = chebyshev_mode(3).profile(3).unwrap();
        assert_eq!((p.u, p.v), (Some(0.0), Some(0.0)));
    }

    #[test]
    fn endpoint_mass_makes_v_infinite() {
        let d = Derivative::smooth(|_| 0.0).with_point_mass(1.0, 2.0);
        assert_eq!(numeric_u(&d).unwrap(), 2.0);
        assert_eq!(numeric_v(&d).unwrap(), f64::INFINITY);
    }

    #[test]
    fn adaptive_handles_kinks_and_endpoint_singularities() {
        let v = adaptive_integrate(|x: f64| (x - 0.3).abs(), -1.0, 1.0, 1e-12, 1e-15);
        // a kink off the panel grid converges slowly but does converge
        assert_abs_diff_eq!(v.unwrap(), 0.5 * (1.3f64.powi(2) + 0.7f64.powi(2)), epsilon = 1e-10);
        let s = adaptive_integrate(|th: f64| th.sin(), 0.0, PI, 1e-12, 1e-15).unwrap();
        assert_abs_diff_eq!(s, 2.0, epsilon = 1e-13);
        assert!(adaptive_integrate(|x: f64| 1.0 / x.abs().sqrt(), -1.0, 1.0, 1e-12, 1e-15).is_err());
    }

    #[test]
    fn smoothness_bookkeeping() {
        // f_j^(k) continuous at t for k <= j-1, f_j^(j) jumps by 2
        let (j, t) = (4, 0.35);
        let f = corner_family(j, t).unwrap();
        let h = 1e-9;
        for k in 0..j {
            let d = f.derivative(k).unwrap();
            assert!((d.density(t + h) - d.density(t - h)).abs() < 1e-8, "k = {k}");
        }
        let d = f.derivative(j).unwrap();
        assert_abs_diff_eq!(d.density(t + h) - d.density(t - h), 2.0, epsilon = 1e-12);

        // finite-difference probe of f''' next to t agrees with the analytic derivative
        let step = 1e-3;
        for &x in &[t - 0.05, t + 0.05] {
            let fd = (f.eval(x + 2.0 * step) - 2.0 * f.eval(x + step) + 2.0 * f.eval(x - step) - f.eval(x - 2.0 * step))
                / (2.0 * step.powi(3));
            assert_abs_diff_eq!(fd, f.derivative(3).unwrap().density(x), epsilon = 1e-5);
        }
    }

    #[test]
    fn legendre_integral_of_corner() {
        for &t in &[0.0, 0.5, 0.9, -0.7] {
            let f = corner_family(4, t).unwrap();
            let closed = f.integral(WeightSpec::LEGENDRE).unwrap();
            let split = adaptive_integrate(|x| f.eval(x), -1.0, t, 1e-14, 1e-16).unwrap()
                + adaptive_integrate(|x| f.eval(x), t, 1.0, 1e-14, 1e-16).unwrap();
            assert_abs_diff_eq!(closed, split, epsilon = 1e-15);
        }
    }
}
