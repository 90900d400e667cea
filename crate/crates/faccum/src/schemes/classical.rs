//! The four classical families. `S` is the count itself: binomial successes,
//! negative-binomial failures, hypergeometric white draws, and the
//! beta-mixed binomial count. All four have factorial moments that are plain
//! products of rationals, so the exact route never leaves `Rational`.

use super::*;
use crate::exact::{falling_factorial, pow_ratio, rising_factorial};

pub(crate) struct Binomial<'a>(pub &'a BernoulliParams);
pub(crate) struct NegBinomial<'a>(pub &'a BernoulliParams);

impl BernoulliParams {
    fn check(&self, family: &'static str) -> Result<(), SchemeError> {
        validate_count(family, "n", self.n)?;
        validate_prob(family, "p", &self.p)
    }

    /// `(1 - p) / p`, the failure odds entering the negative binomial.
    fn odds(&self) -> Rational {
        (Rational::one() - &self.p) / &self.p
    }
}

impl Family for Binomial<'_> {
    fn name(&self) -> &'static str {
        "binomial"
    }

    fn n(&self) -> u64 {
        self.0.n
    }

    fn validate(&self) -> Result<(), SchemeError> {
        self.0.check(self.name())
    }

    fn c_exact(&self, k: u64) -> Option<Rational> {
        if k > self.0.n {
            return Some(Rational::zero());
        }
        Some(falling_factorial(&rat_u(self.0.n), k) * pow_ratio(&self.0.p, k as i64))
    }

    fn ln_c(&self, k: u64, ctx: &mut RealCtx) -> Option<BigFloat> {
        let base = ln_falling_long(ctx, self.0.n, k)?;
        let lp = ln_positive_rational(ctx, &self.0.p);
        Some(ctx.add(&base, &ctx.mul(&lp, &ctx.from_u64(k))))
    }

    fn ln_l(&self, ctx: &mut RealCtx) -> Result<BigFloat, SchemeError> {
        Ok(ln_positive_rational(ctx, &(rat_u(self.0.n) * &self.0.p)))
    }

    fn l_n(&self, _ctx: &mut RealCtx) -> Result<SchemeValue, SchemeError> {
        Ok(SchemeValue::Exact(rat_u(self.0.n) * &self.0.p))
    }

    fn q_polys(&self, j_max: u32, ctx: &mut RealCtx) -> Result<Vec<Vec<BigFloat>>, SchemeError> {
        // c_i / L^i = (n)_i / n^i, whose log is the plain power-sum series
        // with a minus sign.
        let minus_one = -Rational::one();
        let polys: Vec<Poly> = (1..=j_max).map(|j| powersum_times(j, &minus_one)).collect();
        Ok(polys_to_tables(ctx, &polys))
    }

    fn c_bound(&self) -> f64 {
        1.0
    }
}

impl Family for NegBinomial<'_> {
    fn name(&self) -> &'static str {
        "neg-binomial"
    }

    fn n(&self) -> u64 {
        self.0.n
    }

    fn validate(&self) -> Result<(), SchemeError> {
        self.0.check(self.name())
    }

    fn c_exact(&self, k: u64) -> Option<Rational> {
        Some(rising_factorial(&rat_u(self.0.n), k) * pow_ratio(&self.0.odds(), k as i64))
    }

    fn ln_c(&self, k: u64, ctx: &mut RealCtx) -> Option<BigFloat> {
        let base = ln_rising_rat(ctx, &rat_u(self.0.n), k);
        let lq = ln_positive_rational(ctx, &self.0.odds());
        Some(ctx.add(&base, &ctx.mul(&lq, &ctx.from_u64(k))))
    }

    fn ln_l(&self, ctx: &mut RealCtx) -> Result<BigFloat, SchemeError> {
        Ok(ln_positive_rational(ctx, &(rat_u(self.0.n) * self.0.odds())))
    }

    fn l_n(&self, _ctx: &mut RealCtx) -> Result<SchemeValue, SchemeError> {
        Ok(SchemeValue::Exact(rat_u(self.0.n) * self.0.odds()))
    }

    fn q_polys(&self, j_max: u32, ctx: &mut RealCtx) -> Result<Vec<Vec<BigFloat>>, SchemeError> {
        // Rising instead of falling flips the sign of every other term.
        let polys: Vec<Poly> = (1..=j_max)
            .map(|j| powersum_times(j, &alt_sign(j)))
            .collect();
        Ok(polys_to_tables(ctx, &polys))
    }

    fn c_bound(&self) -> f64 {
        1.0
    }
}

impl Family for HypergeometricParams {
    fn name(&self) -> &'static str {
        "hypergeometric"
    }

    fn n(&self) -> u64 {
        self.n
    }

    fn validate(&self) -> Result<(), SchemeError> {
        let fam = self.name();
        validate_count(fam, "N", self.big_n)?;
        validate_count(fam, "M", self.big_m)?;
        validate_count(fam, "n", self.n)?;
        if self.n > self.big_n.min(self.big_m) {
            return Err(invalid(fam, "requires n <= min(N, M)"));
        }
        Ok(())
    }

    fn c_exact(&self, k: u64) -> Option<Rational> {
        if k > self.n {
            return Some(Rational::zero());
        }
        let top = falling_factorial(&rat_u(self.n), k) * falling_factorial(&rat_u(self.big_n), k);
        Some(top / falling_factorial(&rat_u(self.big_n + self.big_m), k))
    }

    fn ln_c(&self, k: u64, ctx: &mut RealCtx) -> Option<BigFloat> {
        // k <= n <= N keeps every falling factorial below positive, so the
        // moment vanishes exactly when k exceeds the draw count.
        let draws = ln_falling_long(ctx, self.n, k)?;
        let white = ln_falling_long(ctx, self.big_n, k)?;
        let total = ln_falling_long(ctx, self.big_n + self.big_m, k)?;
        Some(ctx.sub(&ctx.add(&draws, &white), &total))
    }

    fn ln_l(&self, ctx: &mut RealCtx) -> Result<BigFloat, SchemeError> {
        Ok(ln_positive_rational(ctx, &self.scale()))
    }

    fn l_n(&self, _ctx: &mut RealCtx) -> Result<SchemeValue, SchemeError> {
        Ok(SchemeValue::Exact(self.scale()))
    }

    fn q_polys(&self, j_max: u32, ctx: &mut RealCtx) -> Result<Vec<Vec<BigFloat>>, SchemeError> {
        // Three falling factorials, three power-sum series; the draw count in
        // the denominator normalizes the other two to (n/N) and (n/(N+M)).
        let by_white = Rational::new(BigInt::from(self.n), BigInt::from(self.big_n));
        let by_total = Rational::new(BigInt::from(self.n), BigInt::from(self.big_n + self.big_m));
        let polys: Vec<Poly> = (1..=j_max)
            .map(|j| {
                let s = pow_ratio(&by_total, j as i64)
                    - pow_ratio(&by_white, j as i64)
                    - Rational::one();
                powersum_times(j, &s)
            })
            .collect();
        Ok(polys_to_tables(ctx, &polys))
    }

    fn c_bound(&self) -> f64 {
        let n = self.n as f64;
        1.0 + n / self.big_n as f64 + n / (self.big_n + self.big_m) as f64
    }
}

impl HypergeometricParams {
    fn scale(&self) -> Rational {
        Rational::new(
            BigInt::from(self.n) * BigInt::from(self.big_n),
            BigInt::from(self.big_n + self.big_m),
        )
    }
}

impl Family for NegHypergeometricParams {
    fn name(&self) -> &'static str {
        "neg-hypergeometric"
    }

    fn n(&self) -> u64 {
        self.n
    }

    fn validate(&self) -> Result<(), SchemeError> {
        let fam = self.name();
        validate_count(fam, "n", self.n)?;
        validate_positive(fam, "alpha", &self.alpha)?;
        validate_positive(fam, "beta", &self.beta)
    }

    fn c_exact(&self, k: u64) -> Option<Rational> {
        if k > self.n {
            return Some(Rational::zero());
        }
        let top = falling_factorial(&rat_u(self.n), k) * rising_factorial(&self.shape_a(), k);
        Some(top / rising_factorial(&self.shape_sum(), k))
    }

    fn ln_c(&self, k: u64, ctx: &mut RealCtx) -> Option<BigFloat> {
        let draws = ln_falling_long(ctx, self.n, k)?;
        let top = ln_rising_rat(ctx, &self.shape_a(), k);
        let bot = ln_rising_rat(ctx, &self.shape_sum(), k);
        Some(ctx.sub(&ctx.add(&draws, &top), &bot))
    }

    fn ln_l(&self, ctx: &mut RealCtx) -> Result<BigFloat, SchemeError> {
        Ok(ln_positive_rational(ctx, &self.scale()))
    }

    fn l_n(&self, _ctx: &mut RealCtx) -> Result<SchemeValue, SchemeError> {
        Ok(SchemeValue::Exact(self.scale()))
    }

    fn q_polys(&self, j_max: u32, ctx: &mut RealCtx) -> Result<Vec<Vec<BigFloat>>, SchemeError> {
        // The rising factorials have shapes n*alpha and n*(alpha+beta), so
        // their series carry alternating signs and inverse-shape powers.
        let apb = &self.alpha + &self.beta;
        let polys: Vec<Poly> = (1..=j_max)
            .map(|j| {
                let parity = -alt_sign(j); // (-1)^j
                let s = (pow_ratio(&apb, -(j as i64)) - pow_ratio(&self.alpha, -(j as i64)))
                    * parity
                    - Rational::one();
                powersum_times(j, &s)
            })
            .collect();
        Ok(polys_to_tables(ctx, &polys))
    }

    fn c_bound(&self) -> f64 {
        let inv_a = 1.0 / rational_to_f64(&self.alpha);
        let inv_sum = 1.0 / rational_to_f64(&(&self.alpha + &self.beta));
        1.0 + inv_a.max(1.0) + inv_sum.max(1.0)
    }
}

impl NegHypergeometricParams {
    /// First shape of the mixing distribution, `n * alpha`.
    fn shape_a(&self) -> Rational {
        rat_u(self.n) * &self.alpha
    }

    /// Total shape, `n * (alpha + beta)`.
    fn shape_sum(&self) -> Rational {
        rat_u(self.n) * (&self.alpha + &self.beta)
    }

    fn scale(&self) -> Rational {
        rat_u(self.n) * &self.alpha / (&self.alpha + &self.beta)
    }
}
