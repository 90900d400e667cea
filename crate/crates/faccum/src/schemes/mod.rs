//! A ten-family catalog of counting statistics with closed-form factorial
//! moments.
//!
//! Each family describes a count `S`: for the four classical families `S` is
//! the variable itself (binomial successes, negative-binomial failures, and
//! the two hypergeometric draw counts); for the occupancy and inverse
//! families `S` is the number of cells holding exactly `r` items. In every
//! case the factorial moments `c_k = E (S)_k` have a finite closed form, and
//! the catalog exposes four views of them:
//!
//! * [`factorial_moment`]: `c_k`, exact whenever the closed form stays inside
//!   the rationals, extended-precision real otherwise.
//! * [`mean_and_variance`]: `(c_1, c_2 - c_1^2 + c_1)`.
//! * [`decomposition`]: the product form
//!   `c_i = L_n^i * exp(sum_{j>=1} Q_{j+1}(i) / (j n^j))` that drives the
//!   large-`n` normality diagnostics, returned as the leading scale `L_n`,
//!   per-`j` polynomial coefficient tables, and a declared growth constant
//!   `C` with `|Q_{j+1}(i)| <= (C i)^{j+1}`.
//! * [`decomposition_residual`]: numerical check of the truncated product
//!   form against the exact `ln c_k`.
//!
//! Limiting mean and variance constants for the occupancy and inverse
//! families live in [`limits`].

mod classical;
mod occupancy;
mod waiting;

pub mod limits;

pub use limits::{asymptotic_constants, AsymptoticConstants, Lambda, LimitParams};

use crate::bigfloat::RealCtx;
use crate::exact::{power_sum_coeffs, rational_to_f64, Poly, Rational};
use astro_float::BigFloat;
use num_bigint::BigInt;
use num_traits::{One, Signed, Zero};
use serde::{Deserialize, Serialize};
use std::fmt;
use std::str::FromStr;
use thiserror::Error;

/// Largest count parameter (`n`, `N`, `M`) the catalog accepts. Chosen so
/// every intermediate exponent fits in an `i32` and every cell-count product
/// fits in a `u64`.
pub const MAX_COUNT: u64 = 1_000_000_000;

/// Largest moment order / residual order accepted by the public operations.
pub const MAX_ORDER: u64 = 1_000_000;

/// Deepest truncation order for [`decomposition`].
pub const MAX_TRUNCATION: u32 = 64;

#[derive(Debug, Error)]
pub enum SchemeError {
    #[error("{family}: {message}")]
    InvalidParameter {
        family: &'static str,
        message: String,
    },
    #[error("{family}: factorial moment of order {k} is zero, so its logarithm is undefined")]
    ZeroMoment { family: &'static str, k: u64 },
    #[error("order {requested} exceeds the supported maximum {max}")]
    OrderTooLarge { requested: u64, max: u64 },
    #[error("truncation depth {requested} exceeds the supported maximum {max}")]
    TruncationTooDeep { requested: u32, max: u32 },
}

pub(crate) fn invalid(family: &'static str, message: impl Into<String>) -> SchemeError {
    SchemeError::InvalidParameter {
        family,
        message: message.into(),
    }
}

/// A scheme result: exact rational when the generating formula is a finite
/// product of rationals, otherwise a fixed-precision real.
#[derive(Debug, Clone)]
pub enum SchemeValue {
    Exact(Rational),
    Real(BigFloat),
}

impl SchemeValue {
    pub fn to_f64(&self) -> f64 {
        match self {
            SchemeValue::Exact(q) => rational_to_f64(q),
            SchemeValue::Real(x) => RealCtx::to_f64(x),
        }
    }

    pub fn as_exact(&self) -> Option<&Rational> {
        match self {
            SchemeValue::Exact(q) => Some(q),
            SchemeValue::Real(_) => None,
        }
    }

    pub fn is_exact(&self) -> bool {
        matches!(self, SchemeValue::Exact(_))
    }
}

// ---- family parameter records ----

/// Success count and success probability, shared by the binomial scheme
/// (`S` = successes in `n` trials) and the negative binomial scheme
/// (`S` = failures before the `n`th success).
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct BernoulliParams {
    pub n: u64,
    #[serde(with = "crate::serde_util::rational")]
    pub p: Rational,
}

/// Urn with `N` white and `M` black balls, `n` draws without replacement;
/// `S` counts the white draws.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct HypergeometricParams {
    #[serde(rename = "N")]
    pub big_n: u64,
    #[serde(rename = "M")]
    pub big_m: u64,
    pub n: u64,
}

/// Beta-mixed binomial count over `n` trials whose mixing parameters grow
/// proportionally with `n` (shape pair `n*alpha`, `n*beta`).
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct NegHypergeometricParams {
    pub n: u64,
    #[serde(with = "crate::serde_util::rational")]
    pub alpha: Rational,
    #[serde(with = "crate::serde_util::rational")]
    pub beta: Rational,
}

/// `n` items over `N` cells; `S` counts cells holding exactly `r` items.
/// Shared by the indistinct-item, distinct-item, and random-forest families,
/// which differ in the underlying uniform measure.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct OccupancyParams {
    pub n: u64,
    #[serde(rename = "N")]
    pub big_n: u64,
    pub r: u64,
}

/// Draw `n` balls from an urn holding `M` balls of each of `N` colours;
/// `S` counts colours drawn exactly `r` times.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ColouredParams {
    pub n: u64,
    #[serde(rename = "N")]
    pub big_n: u64,
    #[serde(rename = "M")]
    pub big_m: u64,
    pub r: u64,
}

/// Exchangeable negative multinomial vector over `N` coordinates with
/// stopping parameter `n` and coordinate probability `p` (`N p < 1`);
/// `S` counts coordinates equal to `r`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct NegmultiParams {
    pub n: u64,
    #[serde(rename = "N")]
    pub big_n: u64,
    #[serde(with = "crate::serde_util::rational")]
    pub p: Rational,
    pub r: u64,
}

/// Dirichlet-mixed negative multinomial over `N` coordinates: a Polya urn
/// with `a` balls per colour and `b` black balls, sampled until black shows
/// for the `(n+1)`th time; `S` counts coordinates equal to `r`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct DirichletParams {
    pub n: u64,
    #[serde(rename = "N")]
    pub big_n: u64,
    #[serde(with = "crate::serde_util::rational")]
    pub a: Rational,
    #[serde(with = "crate::serde_util::rational")]
    pub b: Rational,
    pub r: u64,
}

/// A fully parameterized scheme. Serializes as
/// `{"family": "...", "params": {...}}`, the canonical CLI config shape.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "family", content = "params", rename_all = "kebab-case")]
pub enum SchemeSpec {
    Binomial(BernoulliParams),
    NegBinomial(BernoulliParams),
    Hypergeometric(HypergeometricParams),
    NegHypergeometric(NegHypergeometricParams),
    GasIndistinct(OccupancyParams),
    GasDistinct(OccupancyParams),
    GasColoured(ColouredParams),
    GasForest(OccupancyParams),
    GiasNegmulti(NegmultiParams),
    GiasDirichlet(DirichletParams),
}

/// Family tag without parameters, for the operations (limit constants,
/// report grouping) that are keyed on the family alone.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum FamilyKind {
    Binomial,
    NegBinomial,
    Hypergeometric,
    NegHypergeometric,
    GasIndistinct,
    GasDistinct,
    GasColoured,
    GasForest,
    GiasNegmulti,
    GiasDirichlet,
}

impl FamilyKind {
    pub const ALL: [FamilyKind; 10] = [
        FamilyKind::Binomial,
        FamilyKind::NegBinomial,
        FamilyKind::Hypergeometric,
        FamilyKind::NegHypergeometric,
        FamilyKind::GasIndistinct,
        FamilyKind::GasDistinct,
        FamilyKind::GasColoured,
        FamilyKind::GasForest,
        FamilyKind::GiasNegmulti,
        FamilyKind::GiasDirichlet,
    ];

    pub fn as_str(&self) -> &'static str {
        match self {
            FamilyKind::Binomial => "binomial",
            FamilyKind::NegBinomial => "neg-binomial",
            FamilyKind::Hypergeometric => "hypergeometric",
            FamilyKind::NegHypergeometric => "neg-hypergeometric",
            FamilyKind::GasIndistinct => "gas-indistinct",
            FamilyKind::GasDistinct => "gas-distinct",
            FamilyKind::GasColoured => "gas-coloured",
            FamilyKind::GasForest => "gas-forest",
            FamilyKind::GiasNegmulti => "gias-negmulti",
            FamilyKind::GiasDirichlet => "gias-dirichlet",
        }
    }
}

impl fmt::Display for FamilyKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl FromStr for FamilyKind {
    type Err = SchemeError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        FamilyKind::ALL
            .into_iter()
            .find(|k| k.as_str() == s)
            .ok_or_else(|| invalid("family", format!("unknown family tag {s:?}")))
    }
}

impl SchemeSpec {
    pub fn kind(&self) -> FamilyKind {
        match self {
            SchemeSpec::Binomial(_) => FamilyKind::Binomial,
            SchemeSpec::NegBinomial(_) => FamilyKind::NegBinomial,
            SchemeSpec::Hypergeometric(_) => FamilyKind::Hypergeometric,
            SchemeSpec::NegHypergeometric(_) => FamilyKind::NegHypergeometric,
            SchemeSpec::GasIndistinct(_) => FamilyKind::GasIndistinct,
            SchemeSpec::GasDistinct(_) => FamilyKind::GasDistinct,
            SchemeSpec::GasColoured(_) => FamilyKind::GasColoured,
            SchemeSpec::GasForest(_) => FamilyKind::GasForest,
            SchemeSpec::GiasNegmulti(_) => FamilyKind::GiasNegmulti,
            SchemeSpec::GiasDirichlet(_) => FamilyKind::GiasDirichlet,
        }
    }

    pub fn family_name(&self) -> &'static str {
        self.kind().as_str()
    }

    /// The scheme's sample-size parameter: the `n` in the `1/(j n^j)`
    /// weights of the decomposition.
    pub fn size(&self) -> u64 {
        self.with_family(|f| f.n())
    }

    pub fn validate(&self) -> Result<(), SchemeError> {
        self.with_family(|f| f.validate())
    }

    pub(crate) fn with_family<T>(&self, op: impl FnOnce(&dyn Family) -> T) -> T {
        match self {
            SchemeSpec::Binomial(p) => op(&classical::Binomial(p)),
            SchemeSpec::NegBinomial(p) => op(&classical::NegBinomial(p)),
            SchemeSpec::Hypergeometric(p) => op(p),
            SchemeSpec::NegHypergeometric(p) => op(p),
            SchemeSpec::GasIndistinct(p) => op(&occupancy::Indistinct(p)),
            SchemeSpec::GasDistinct(p) => op(&occupancy::Distinct(p)),
            SchemeSpec::GasColoured(p) => op(p),
            SchemeSpec::GasForest(p) => op(&occupancy::Forest(p)),
            SchemeSpec::GiasNegmulti(p) => op(p),
            SchemeSpec::GiasDirichlet(p) => op(p),
        }
    }
}

/// One family's evaluation surface. Implementations live in the sibling
/// modules; everything public dispatches through [`SchemeSpec::with_family`].
pub(crate) trait Family {
    fn name(&self) -> &'static str;

    /// The sample-size parameter `n` normalizing the decomposition weights.
    fn n(&self) -> u64;

    fn validate(&self) -> Result<(), SchemeError>;

    /// Exact `c_k` for `k >= 1`, or `None` when this parameterization has no
    /// finite rational form (Dirichlet mixing with non-integer `a`).
    fn c_exact(&self, k: u64) -> Option<Rational>;

    /// `ln c_k` for `k >= 1`, or `None` when `c_k = 0`.
    fn ln_c(&self, k: u64, ctx: &mut RealCtx) -> Option<BigFloat>;

    /// `ln L_n`, always in log space so enormous scales stay cheap.
    fn ln_l(&self, ctx: &mut RealCtx) -> Result<BigFloat, SchemeError>;

    /// `L_n` itself; families whose scale is rational override this.
    fn l_n(&self, ctx: &mut RealCtx) -> Result<SchemeValue, SchemeError> {
        let ln = self.ln_l(ctx)?;
        Ok(SchemeValue::Real(ctx.exp(&ln)))
    }

    /// Coefficient tables of `Q_2 .. Q_{j_max+1}`, constant term first;
    /// entry `j-1` has length `j+2` (degree at most `j+1`).
    fn q_polys(&self, j_max: u32, ctx: &mut RealCtx) -> Result<Vec<Vec<BigFloat>>, SchemeError>;

    /// Declared envelope constant: `|Q_{j+1}(i)| <= (C i)^{j+1}` for all
    /// `i, j >= 1`, uniformly over the family's growth regime.
    fn c_bound(&self) -> f64;
}

/// The product-form decomposition of a scheme's factorial moments:
/// `c_i = L_n^i * exp(sum_{j=1}^{j_max} Q_{j+1}(i) / (j n^j) + tail)`.
#[derive(Debug)]
pub struct DecompositionData {
    /// Leading scale `L_n`.
    pub l_n: SchemeValue,
    /// `ln L_n` at working precision.
    pub ln_l: BigFloat,
    /// `q[j-1]` holds the coefficients of `Q_{j+1}`, constant term first.
    pub q: Vec<Vec<BigFloat>>,
    /// Envelope constant: `|Q_{j+1}(i)| <= (c_bound * i)^{j+1}`.
    pub c_bound: f64,
}

impl DecompositionData {
    /// Largest value of `|Q_{j+1}(i)| / (c_bound * i)^{j+1}` over the grid
    /// `1 <= i <= i_max` and all tabulated `j`. At most 1 when the declared
    /// envelope holds on the grid.
    pub fn envelope_excess(&self, i_max: u64, ctx: &RealCtx) -> f64 {
        let c = ctx.from_f64(self.c_bound);
        let mut worst = 0.0f64;
        for (idx, coeffs) in self.q.iter().enumerate() {
            let exponent = idx as u64 + 2; // Q_{j+1} with j = idx + 1
            for i in 1..=i_max {
                let x = ctx.from_u64(i);
                let value = abs_bf(&eval_poly(ctx, coeffs, &x));
                let bound = ctx.powi(&ctx.mul(&c, &x), exponent);
                let ratio = RealCtx::to_f64(&ctx.div(&value, &bound));
                worst = worst.max(ratio);
            }
        }
        worst
    }
}

// ---- public operations ----

/// `c_k = E (S)_k`. Order 0 is identically 1; orders past the support edge
/// return exact 0, matching `E (S)_k = 0` when `k` exceeds the maximum of
/// `S`.
pub fn factorial_moment(
    spec: &SchemeSpec,
    k: u64,
    ctx: &mut RealCtx,
) -> Result<SchemeValue, SchemeError> {
    spec.validate()?;
    if k > MAX_ORDER {
        return Err(SchemeError::OrderTooLarge {
            requested: k,
            max: MAX_ORDER,
        });
    }
    if k == 0 {
        return Ok(SchemeValue::Exact(Rational::one()));
    }
    spec.with_family(|fam| {
        if let Some(c) = fam.c_exact(k) {
            return Ok(SchemeValue::Exact(c));
        }
        match fam.ln_c(k, ctx) {
            Some(l) => Ok(SchemeValue::Real(ctx.exp(&l))),
            None => Ok(SchemeValue::Exact(Rational::zero())),
        }
    })
}

/// `(E S, Var S)` through the first two factorial moments:
/// `E S = c_1` and `Var S = c_2 - c_1^2 + c_1`.
pub fn mean_and_variance(
    spec: &SchemeSpec,
    ctx: &mut RealCtx,
) -> Result<(SchemeValue, SchemeValue), SchemeError> {
    spec.validate()?;
    spec.with_family(|fam| {
        if let (Some(c1), Some(c2)) = (fam.c_exact(1), fam.c_exact(2)) {
            let var = &c2 - &c1 * &c1 + &c1;
            return Ok((SchemeValue::Exact(c1), SchemeValue::Exact(var)));
        }
        let c1 = match fam.ln_c(1, ctx) {
            Some(l) => ctx.exp(&l),
            None => ctx.from_u64(0),
        };
        let c2 = match fam.ln_c(2, ctx) {
            Some(l) => ctx.exp(&l),
            None => ctx.from_u64(0),
        };
        let var = ctx.add(&ctx.sub(&c2, &ctx.mul(&c1, &c1)), &c1);
        Ok((SchemeValue::Real(c1), SchemeValue::Real(var)))
    })
}

/// The decomposition data `(L_n, Q_2..Q_{j_max+1}, C)` for a scheme.
pub fn decomposition(
    spec: &SchemeSpec,
    j_max: u32,
    ctx: &mut RealCtx,
) -> Result<DecompositionData, SchemeError> {
    spec.validate()?;
    if j_max > MAX_TRUNCATION {
        return Err(SchemeError::TruncationTooDeep {
            requested: j_max,
            max: MAX_TRUNCATION,
        });
    }
    spec.with_family(|fam| {
        Ok(DecompositionData {
            l_n: fam.l_n(ctx)?,
            ln_l: fam.ln_l(ctx)?,
            q: fam.q_polys(j_max, ctx)?,
            c_bound: fam.c_bound(),
        })
    })
}

/// Max over `1 <= k <= k_max` of
/// `|ln c_k - k ln L_n - sum_{j<=j_trunc} Q_{j+1}(k)/(j n^j)|`,
/// the absolute log error of the truncated product form. With
/// `j_trunc = 0` the sum is empty and the result is the size of the whole
/// exponential correction.
///
/// The product form describes moments strictly inside the support, so `k_max`
/// must stay below any order where `c_k` vanishes.
pub fn decomposition_residual(
    spec: &SchemeSpec,
    k_max: u64,
    j_trunc: u32,
    ctx: &mut RealCtx,
) -> Result<f64, SchemeError> {
    if k_max == 0 {
        return Err(invalid(
            spec.family_name(),
            "residual needs at least one moment order",
        ));
    }
    if k_max > MAX_ORDER {
        return Err(SchemeError::OrderTooLarge {
            requested: k_max,
            max: MAX_ORDER,
        });
    }
    let data = decomposition(spec, j_trunc, ctx)?;
    let n = spec.size();
    spec.with_family(|fam| {
        let mut worst = 0.0f64;
        for k in 1..=k_max {
            let lnc = fam.ln_c(k, ctx).ok_or(SchemeError::ZeroMoment {
                family: fam.name(),
                k,
            })?;
            let mut pred = ctx.mul(&data.ln_l, &ctx.from_u64(k));
            let x = ctx.from_u64(k);
            for j in 1..=j_trunc as u64 {
                let q_val = eval_poly(ctx, &data.q[j as usize - 1], &x);
                let weight = ctx.mul(&ctx.from_u64(j), &ctx.powi(&ctx.from_u64(n), j));
                pred = ctx.add(&pred, &ctx.div(&q_val, &weight));
            }
            let err = RealCtx::to_f64(&abs_bf(&ctx.sub(&lnc, &pred)));
            worst = worst.max(err);
        }
        Ok(worst)
    })
}

// ---- shared numeric helpers for the family implementations ----

pub(crate) fn rat_u(v: u64) -> Rational {
    Rational::from_integer(BigInt::from(v))
}

/// `(-1)^{j+1}` as a rational.
pub(crate) fn alt_sign(j: u32) -> Rational {
    if j % 2 == 1 {
        Rational::one()
    } else {
        -Rational::one()
    }
}

pub(crate) fn ln_u64(ctx: &mut RealCtx, v: u64) -> BigFloat {
    debug_assert!(v >= 1);
    ctx.ln(&ctx.from_u64(v))
}

pub(crate) fn ln_positive_rational(ctx: &mut RealCtx, q: &Rational) -> BigFloat {
    debug_assert!(q.is_positive());
    ctx.ln(&ctx.from_rational(q))
}

/// `ln (n)_k` as a short sum of logs, or `None` when the product vanishes.
pub(crate) fn ln_falling(ctx: &mut RealCtx, n: u64, k: u64) -> Option<BigFloat> {
    if k > n {
        return None;
    }
    let mut acc = ctx.from_u64(0);
    for i in 0..k {
        let term = ln_u64(ctx, n - i);
        acc = ctx.add(&acc, &term);
    }
    Some(acc)
}

/// `ln m!` through `ln Gamma(m + 1)`.
pub(crate) fn ln_factorial(ctx: &mut RealCtx, m: u64) -> BigFloat {
    if m <= 1 {
        return ctx.from_u64(0);
    }
    ctx.lgamma(&ctx.from_u64(m + 1))
}

/// `ln C(n, k)`, or `None` when `k > n` and the coefficient is zero.
pub(crate) fn ln_binomial(ctx: &mut RealCtx, n: u64, k: u64) -> Option<BigFloat> {
    if k > n {
        return None;
    }
    let top = ln_factorial(ctx, n);
    let a = ln_factorial(ctx, k);
    let b = ln_factorial(ctx, n - k);
    Some(ctx.sub(&ctx.sub(&top, &a), &b))
}

pub(crate) fn abs_bf(x: &BigFloat) -> BigFloat {
    if x.is_negative() {
        x.neg()
    } else {
        x.clone()
    }
}

/// Horner evaluation of a constant-first coefficient table.
pub(crate) fn eval_poly(ctx: &RealCtx, coeffs: &[BigFloat], x: &BigFloat) -> BigFloat {
    let mut acc = ctx.from_u64(0);
    for c in coeffs.iter().rev() {
        acc = ctx.add(&ctx.mul(&acc, x), c);
    }
    acc
}

/// `ln (n)_k`: short products as log sums, long ones through the gamma
/// function. `None` when the product vanishes.
pub(crate) fn ln_falling_long(ctx: &mut RealCtx, n: u64, k: u64) -> Option<BigFloat> {
    if k > n {
        return None;
    }
    if k <= 256 {
        return ln_falling(ctx, n, k);
    }
    let top = ln_factorial(ctx, n);
    let bot = ln_factorial(ctx, n - k);
    Some(ctx.sub(&top, &bot))
}

/// `ln x^{(k)}` for rational `x > 0`, same short/long split.
pub(crate) fn ln_rising_rat(ctx: &mut RealCtx, x: &Rational, k: u64) -> BigFloat {
    debug_assert!(x.is_positive());
    if k == 0 {
        return ctx.from_u64(0);
    }
    if k <= 256 {
        let mut acc = ctx.from_u64(0);
        for i in 0..k {
            let term = ln_positive_rational(ctx, &(x + rat_u(i)));
            acc = ctx.add(&acc, &term);
        }
        return acc;
    }
    let lo = ctx.from_rational(x);
    let hi = ctx.add(&lo, &ctx.from_u64(k));
    let top = ctx.lgamma(&hi);
    let bot = ctx.lgamma(&lo);
    ctx.sub(&top, &bot)
}

/// `Q_{j+1}(scale * i + shift)` as an exact polynomial in `i`.
pub(crate) fn powersum_scaled(j: u32, scale: &Rational, shift: u64) -> Poly {
    power_sum_coeffs(j).compose_affine(scale, &rat_u(shift))
}

/// `scale * Q_{j+1}(i)` as an exact polynomial.
pub(crate) fn powersum_times(j: u32, scale: &Rational) -> Poly {
    let mut p = Poly::zero();
    p.add_assign_scaled(&power_sum_coeffs(j), scale);
    p
}

pub(crate) fn validate_count(family: &'static str, name: &str, v: u64) -> Result<(), SchemeError> {
    if v == 0 {
        return Err(invalid(family, format!("{name} must be a positive count")));
    }
    if v > MAX_COUNT {
        return Err(invalid(
            family,
            format!("{name} = {v} exceeds the supported maximum {MAX_COUNT}"),
        ));
    }
    Ok(())
}

pub(crate) fn validate_cell_size(family: &'static str, r: u64) -> Result<(), SchemeError> {
    if r > MAX_ORDER {
        return Err(invalid(
            family,
            format!("r = {r} exceeds the supported maximum {MAX_ORDER}"),
        ));
    }
    Ok(())
}

pub(crate) fn validate_prob(
    family: &'static str,
    name: &str,
    p: &Rational,
) -> Result<(), SchemeError> {
    if !p.is_positive() || *p >= Rational::one() {
        return Err(invalid(
            family,
            format!("{name} must lie strictly between 0 and 1"),
        ));
    }
    Ok(())
}

pub(crate) fn validate_positive(
    family: &'static str,
    name: &str,
    q: &Rational,
) -> Result<(), SchemeError> {
    if !q.is_positive() {
        return Err(invalid(family, format!("{name} must be positive")));
    }
    Ok(())
}

/// Converts exact polynomials to fixed-precision tables; entry `j-1` is
/// padded to length `j+2` so consumers see the full degree-`(j+1)` shape.
pub(crate) fn polys_to_tables(ctx: &RealCtx, polys: &[Poly]) -> Vec<Vec<BigFloat>> {
    polys
        .iter()
        .enumerate()
        .map(|(idx, p)| poly_to_coeffs(ctx, p, idx + 3))
        .collect()
}

pub(crate) fn poly_to_coeffs(ctx: &RealCtx, p: &Poly, len: usize) -> Vec<BigFloat> {
    let mut out: Vec<BigFloat> = p.coeffs().iter().map(|c| ctx.from_rational(c)).collect();
    debug_assert!(out.len() <= len, "polynomial degree exceeds its slot");
    out.resize_with(len, || ctx.from_u64(0));
    out
}
