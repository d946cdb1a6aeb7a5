//! Exact expansions of the scaled Chebyshev functions `𝒯_n` as `r`-th
//! derivatives of neighbouring modes.
//!
//! One rewrite step replaces every `𝒯_m` by `(-𝒯_{m-1} + 𝒯_{m+1}) / (2m)`
//! inside one extra derivative. After `r` steps from `𝒯_n` the result is
//! supported on `n-r, n-r+2, ..., n+r`. All coefficients are exact rationals.

use std::collections::BTreeMap;
use std::fmt;

use num_bigint::{BigInt, BigUint};
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};

use crate::error::{Error, Result};

/// Finite linear combination `Σ c_m 𝒯_m` with exact rational coefficients.
///
/// Zero coefficients are never stored, so the empty map is the zero
/// combination.
#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct ModeCombination {
    terms: BTreeMap<u32, BigRational>,
}

impl ModeCombination {
    pub fn zero() -> Self {
        Self::default()
    }

    /// `1 · 𝒯_n`.
    pub fn singleton(mode: u32) -> Self {
        let mut c = Self::zero();
        c.add_term(mode, BigRational::one());
        c
    }

    pub fn from_terms<I: IntoIterator<Item = (u32, BigRational)>>(terms: I) -> Self {
        let mut c = Self::zero();
        for (m, v) in terms {
            c.add_term(m, v);
        }
        c
    }

    /// Accumulate `coeff · 𝒯_mode`, dropping the entry if it cancels.
    pub fn add_term(&mut self, mode: u32, coeff: BigRational) {
        if coeff.is_zero() {
            return;
        }
        let entry = self.terms.entry(mode).or_insert_with(BigRational::zero);
        *entry += coeff;
        if entry.is_zero() {
            self.terms.remove(&mode);
        }
    }

    pub fn coefficient(&self, mode: u32) -> BigRational {
        self.terms.get(&mode).cloned().unwrap_or_else(BigRational::zero)
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }

    /// Modes with nonzero coefficient, ascending.
    pub fn support(&self) -> impl Iterator<Item = u32> + '_ {
        self.terms.keys().copied()
    }

    pub fn iter(&self) -> impl Iterator<Item = (u32, &BigRational)> + '_ {
        self.terms.iter().map(|(m, c)| (*m, c))
    }

    /// Evaluate `Σ c_m 𝒯_m(x)` in floating point.
    pub fn eval(&self, x: f64) -> Result<f64> {
        let x = crate::chebyshev::clamp_to_interval(x)?;
        Ok(self
            .iter()
            .map(|(m, c)| rational_to_f64(c) * crate::chebyshev::scaled_t_unchecked(m, x))
            .sum())
    }
}

impl fmt::Display for ModeCombination {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            return write!(f, "0");
        }
        for (i, (m, c)) in self.iter().enumerate() {
            if i > 0 {
                write!(f, " ")?;
            }
            let sign = if c.is_negative() { "-" } else if i > 0 { "+" } else { "" };
            write!(f, "{sign}{}·𝒯_{m}", c.abs())?;
        }
        Ok(())
    }
}

pub(crate) fn rational_to_f64(q: &BigRational) -> f64 {
    num_traits::ToPrimitive::to_f64(q).unwrap_or(f64::NAN)
}

fn int(v: u64) -> BigInt {
    BigInt::from(v)
}

/// One rewrite step `𝒯_m ↦ (-𝒯_{m-1} + 𝒯_{m+1}) / (2m)` applied to every term.
///
/// The `(k+1)`-th derivative of the output equals the `k`-th derivative of
/// the input. Every mode must be at least 2 so that no `𝒯_0` appears.
pub fn rewrite_once(c: &ModeCombination) -> Result<ModeCombination> {
    if let Some(m) = c.support().find(|&m| m < 2) {
        return Err(Error::pre(format!("rewrite needs every mode >= 2, found {m}")));
    }
    let mut out = ModeCombination::zero();
    for (m, coeff) in c.iter() {
        let step = coeff / BigRational::from_integer(int(2 * u64::from(m)));
        out.add_term(m - 1, -step.clone());
        out.add_term(m + 1, step);
    }
    Ok(out)
}

fn check_order(n: u32, r: u32) -> Result<()> {
    if n < 2 || r < 1 || r > n - 1 {
        return Err(Error::pre(format!("need 2 <= n and 1 <= r <= n-1, got n={n}, r={r}")));
    }
    Ok(())
}

/// `r` rewrites of `𝒯_n`, merged by mode.
pub fn lemma_key_expansion(n: u32, r: u32) -> Result<ModeCombination> {
    check_order(n, r)?;
    let mut c = ModeCombination::singleton(n);
    for _ in 0..r {
        c = rewrite_once(&c)?;
    }
    Ok(c)
}

/// `∏_{i=1}^{r} (2n - 2i + 2)`: denominator of the all-down path.
pub fn beta_lowest(n: u32, r: u32) -> BigUint {
    (1..=r).map(|i| BigUint::from(2 * n + 2 - 2 * i)).product()
}

/// `∏_{i=1}^{r} (2n + 2i - 2)`: denominator of the all-up path.
pub fn beta_highest(n: u32, r: u32) -> BigUint {
    (1..=r).map(|i| BigUint::from(2 * n + 2 * i - 2)).product()
}

/// `∏_{j=0}^{r} (n - r + 2j)`.
pub fn key2_denominator(n: u32, r: u32) -> BigUint {
    (0..=r).map(|j| BigUint::from(n - r + 2 * j)).product()
}

/// One path of the unmerged expansion: `sign · 𝒯_mode / beta`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct LadderTerm {
    pub negative: bool,
    pub beta: BigUint,
    pub mode: u32,
}

/// The `2^r` unmerged terms of the `r`-fold expansion of `𝒯_n`.
///
/// Terms are listed depth-first with the downward branch first, so
/// entries `2j-1, 2j` (1-based) are siblings from the last rewrite and
/// share a denominator.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct BetaLadder {
    pub n: u32,
    pub r: u32,
    pub terms: Vec<LadderTerm>,
}

impl BetaLadder {
    pub fn new(n: u32, r: u32) -> Result<Self> {
        check_order(n, r)?;
        let mut terms = Vec::with_capacity(1 << r);
        expand_paths(n, r, false, BigUint::one(), &mut terms);
        Ok(Self { n, r, terms })
    }

    pub fn betas(&self) -> impl Iterator<Item = &BigUint> + '_ {
        self.terms.iter().map(|t| &t.beta)
    }

    /// Sum the unmerged terms into a merged combination.
    pub fn merged(&self) -> ModeCombination {
        ModeCombination::from_terms(self.terms.iter().map(|t| {
            let q = BigRational::new(BigInt::one(), BigInt::from(t.beta.clone()));
            (t.mode, if t.negative { -q } else { q })
        }))
    }

    /// Overwrite the denominator of the `index`-th term (0-based) with
    /// `beta + 1`. Used as a negative control for the structure checks.
    pub fn perturb(&mut self, index: usize) {
        if let Some(t) = self.terms.get_mut(index) {
            t.beta += 1u32;
        }
    }

    /// Check every structural claim about the ladder, returning the first
    /// violation found.
    pub fn check_structure(&self) -> std::result::Result<(), String> {
        let (n, r) = (self.n, self.r);
        let len = self.terms.len();
        if len != 1usize << r {
            return Err(format!("expected {} terms, found {len}", 1usize << r));
        }
        let lo = beta_lowest(n, r);
        let hi = beta_highest(n, r);
        let b = |k: usize| &self.terms[k].beta;
        if *b(0) != lo || *b(1) != lo {
            return Err(format!("(n={n}, r={r}) first pair != ∏(2n-2i+2) = {lo}"));
        }
        if *b(len - 2) != hi || *b(len - 1) != hi {
            return Err(format!("(n={n}, r={r}) last pair != ∏(2n+2i-2) = {hi}"));
        }
        for j in 0..len / 2 {
            let (a, c) = (b(2 * j), b(2 * j + 1));
            if a != c {
                return Err(format!("(n={n}, r={r}) sibling pair {j} differs: {a} vs {c}"));
            }
            if *a < lo || *a > hi {
                return Err(format!("(n={n}, r={r}) pair {j} = {a} outside [{lo}, {hi}]"));
            }
        }
        for t in &self.terms {
            let offset = i64::from(t.mode) - i64::from(n) + i64::from(r);
            if offset < 0 || offset > 2 * i64::from(r) || offset % 2 != 0 {
                return Err(format!("(n={n}, r={r}) mode {} off the n±r lattice", t.mode));
            }
            // sign is (-1)^(number of downward steps)
            let downs = (2 * i64::from(r) - offset) / 2;
            if t.negative != (downs % 2 == 1) {
                return Err(format!("(n={n}, r={r}) wrong sign on mode {}", t.mode));
            }
        }
        Ok(())
    }
}

fn expand_paths(mode: u32, depth: u32, negative: bool, beta: BigUint, out: &mut Vec<LadderTerm>) {
    if depth == 0 {
        out.push(LadderTerm { negative, beta, mode });
        return;
    }
    let beta = beta * BigUint::from(2 * mode);
    expand_paths(mode - 1, depth - 1, !negative, beta.clone(), out);
    expand_paths(mode + 1, depth - 1, negative, beta, out);
}

/// Both sides of the reciprocal-product identity
/// `Σ_j 1/(β^j · mode_j) = 1/∏_{j=0}^{r}(n - r + 2j)`.
///
/// The left side is summed from the merged expansion as `Σ |c_m| / m`;
/// all paths reaching a mode share its sign, so this equals the sum over
/// the unmerged ladder.
pub fn lemma_key2_check(n: u32, r: u32) -> Result<(BigRational, BigRational)> {
    let c = lemma_key_expansion(n, r)?;
    let lhs = c.iter().fold(BigRational::zero(), |acc, (m, coeff)| {
        acc + coeff.abs() / BigRational::from_integer(BigInt::from(m))
    });
    let rhs = BigRational::new(BigInt::one(), BigInt::from(key2_denominator(n, r)));
    Ok((lhs, rhs))
}
