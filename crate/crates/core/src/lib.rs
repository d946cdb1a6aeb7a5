//! Gauss-Christoffel and Gauss-Gegenbauer quadrature on `[-1, 1]`,
//! Chebyshev expansions, and a-priori error bounds driven by the
//! regularity functionals `U_r = ∫|f^(r+1)|` and
//! `V_r = ∫|f^(r+1)|/sqrt(1-x^2)`.
//!
//! ```
//! use gaussbound::{golub_welsch, WeightSpec};
//!
//! let rule = golub_welsch(WeightSpec::LEGENDRE, 20)?;
//! let e = 1f64.exp();
//! assert!((rule.integrate(f64::exp) - (e - 1.0 / e)).abs() < 1e-13);
//! # Ok::<(), gaussbound::Error>(())
//! ```

// `!(x > a)` comparisons are deliberate: they also reject NaN.
#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod bounds;
pub mod chebyshev;
pub mod error;
pub mod expansion;
pub mod experiments;
pub mod gauss;
pub mod ladder;
pub mod summation;
pub mod testbed;
pub mod tridiag;
pub mod verify;

pub use bounds::{
    gegenbauer_quadrature_bound, gegenbauer_weight_norm, new_coeff_bound, new_quadrature_bound,
    table1_factors, trefethen_coeff_bound, xiang_quadrature_bound, RegularityProfile, Table1Factors,
};
pub use chebyshev::{eval_scaled_t, eval_t};
pub use error::{Error, Result};
pub use expansion::{abs_tail_sum, chebyshev_coefficients, odd_tail_sum, ChebyshevExpansion};
pub use experiments::{bound_report, example1, example2, BoundReport};
pub use gauss::{golub_welsch, recurrence_coefficients, reference_integral, QuadratureRule, WeightSpec};
pub use ladder::{lemma_key2_check, lemma_key_expansion, rewrite_once, BetaLadder, ModeCombination};
pub use testbed::{corner_family, exp_function, TestFunction};
pub use verify::{run_all, SuiteResult, VerifyConfig};
