//! Cell-count families: `n` items spread over `N` cells under four uniform
//! measures (indistinct items, distinct items, coloured balls drawn from a
//! finite pool, and uniform rooted forests). `S` counts the cells holding
//! exactly `r` items, and every factorial moment reduces to the probability
//! that `k` designated cells all hold `r`:
//! `c_k = (N)_k P(first k cells = r)`.

use super::*;
use crate::exact::{binomial, factorial, falling_factorial, pow_ratio};

pub(crate) struct Indistinct<'a>(pub &'a OccupancyParams);
pub(crate) struct Distinct<'a>(pub &'a OccupancyParams);
pub(crate) struct Forest<'a>(pub &'a OccupancyParams);

impl OccupancyParams {
    fn check(&self, family: &'static str) -> Result<(), SchemeError> {
        validate_count(family, "n", self.n)?;
        validate_count(family, "N", self.big_n)?;
        validate_cell_size(family, self.r)
    }

    /// Shared support guards. `None` means the order is still in play;
    /// `Some(0)` short-circuits orders that no configuration can reach.
    fn support_guard(&self, k: u64) -> Option<Rational> {
        if k > self.big_n || self.r.saturating_mul(k) > self.n {
            return Some(Rational::zero());
        }
        None
    }

    /// The decompositions divide by `N - 1` or pivot on a positive scale, so
    /// a single cell leaves nothing to decompose.
    fn need_two_cells(&self, family: &'static str) -> Result<(), SchemeError> {
        if self.big_n < 2 {
            return Err(invalid(family, "the decomposition needs at least two cells"));
        }
        Ok(())
    }
}

// ---- indistinct items, uniform over compositions of n into N parts ----

impl Family for Indistinct<'_> {
    fn name(&self) -> &'static str {
        "gas-indistinct"
    }

    fn n(&self) -> u64 {
        self.0.n
    }

    fn validate(&self) -> Result<(), SchemeError> {
        self.0.check(self.name())
    }

    fn c_exact(&self, k: u64) -> Option<Rational> {
        let OccupancyParams { n, big_n, r } = *self.0;
        if let Some(zero) = self.0.support_guard(k) {
            return Some(zero);
        }
        let total = binomial(n + big_n - 1, big_n - 1);
        if k == big_n {
            // Every cell pinned to r: a single composition, reachable only
            // when the counts add up.
            if n != big_n * r {
                return Some(Rational::zero());
            }
            return Some(Rational::new(factorial(big_n), total));
        }
        let free = binomial(n - r * k + big_n - k - 1, big_n - k - 1);
        Some(falling_factorial(&rat_u(big_n), k) * Rational::new(free, total))
    }

    fn ln_c(&self, k: u64, ctx: &mut RealCtx) -> Option<BigFloat> {
        let OccupancyParams { n, big_n, r } = *self.0;
        if self.0.support_guard(k).is_some() {
            return None;
        }
        let total = ln_binomial(ctx, n + big_n - 1, big_n - 1)?;
        if k == big_n {
            if n != big_n * r {
                return None;
            }
            let perms = ln_factorial(ctx, big_n);
            return Some(ctx.sub(&perms, &total));
        }
        let picks = ln_falling_long(ctx, big_n, k)?;
        let free = ln_binomial(ctx, n - r * k + big_n - k - 1, big_n - k - 1)?;
        Some(ctx.sub(&ctx.add(&picks, &free), &total))
    }

    fn ln_l(&self, ctx: &mut RealCtx) -> Result<BigFloat, SchemeError> {
        self.0.need_two_cells(self.name())?;
        Ok(ln_positive_rational(ctx, &self.scale()))
    }

    fn l_n(&self, _ctx: &mut RealCtx) -> Result<SchemeValue, SchemeError> {
        self.0.need_two_cells(self.name())?;
        Ok(SchemeValue::Exact(self.scale()))
    }

    fn q_polys(&self, j_max: u32, ctx: &mut RealCtx) -> Result<Vec<Vec<BigFloat>>, SchemeError> {
        self.0.need_two_cells(self.name())?;
        let OccupancyParams { n, big_n, r } = *self.0;
        let by_cells = Rational::new(BigInt::from(n), BigInt::from(big_n));
        let by_cells_less = Rational::new(BigInt::from(n), BigInt::from(big_n - 1));
        let by_total = Rational::new(BigInt::from(n), BigInt::from(n + big_n - 1));
        let minus_one = -Rational::one();
        let polys: Vec<Poly> = (1..=j_max)
            .map(|j| {
                let e = j as i64;
                let own = -(pow_ratio(&by_cells, e) + pow_ratio(&by_cells_less, e));
                let mut p = powersum_times(j, &own);
                p.add_assign_scaled(&powersum_scaled(j, &rat_u(r), 0), &minus_one);
                p.add_assign_scaled(
                    &powersum_scaled(j, &rat_u(r + 1), 0),
                    &pow_ratio(&by_total, e),
                );
                p
            })
            .collect();
        Ok(polys_to_tables(ctx, &polys))
    }

    fn c_bound(&self) -> f64 {
        let OccupancyParams { n, big_n, r } = *self.0;
        let n = n as f64;
        (n / big_n as f64).max(1.0)
            + (n / (big_n - 1).max(1) as f64).max(1.0)
            + (2 * r + 1) as f64
    }
}

impl Indistinct<'_> {
    /// `N (N-1) n^r / (n + N - 1)^{r+1}`.
    fn scale(&self) -> Rational {
        let OccupancyParams { n, big_n, r } = *self.0;
        Rational::from_integer(BigInt::from(big_n) * BigInt::from(big_n - 1))
            * pow_ratio(&rat_u(n), r as i64)
            / pow_ratio(&rat_u(n + big_n - 1), r as i64 + 1)
    }
}

// ---- distinct items, uniform over the N^n placements ----

impl Family for Distinct<'_> {
    fn name(&self) -> &'static str {
        "gas-distinct"
    }

    fn n(&self) -> u64 {
        self.0.n
    }

    fn validate(&self) -> Result<(), SchemeError> {
        self.0.check(self.name())
    }

    fn c_exact(&self, k: u64) -> Option<Rational> {
        let OccupancyParams { n, big_n, r } = *self.0;
        if let Some(zero) = self.0.support_guard(k) {
            return Some(zero);
        }
        // 0^0 = 1 covers the boundary where the pinned cells absorb all
        // items (k = N forces n = rk, and otherwise leaves a zero factor).
        let spare = Rational::new(BigInt::from(big_n - k), BigInt::from(big_n));
        let fills = falling_factorial(&rat_u(n), r * k)
            / pow_ratio(&Rational::from_integer(factorial(r)), k as i64)
            / pow_ratio(&rat_u(big_n), (r * k) as i64);
        Some(falling_factorial(&rat_u(big_n), k) * fills * pow_ratio(&spare, (n - r * k) as i64))
    }

    fn ln_c(&self, k: u64, ctx: &mut RealCtx) -> Option<BigFloat> {
        let OccupancyParams { n, big_n, r } = *self.0;
        if self.0.support_guard(k).is_some() {
            return None;
        }
        if k == big_n && n != r * k {
            return None;
        }
        let picks = ln_falling_long(ctx, big_n, k)?;
        let fills = ln_falling_long(ctx, n, r * k)?;
        let r_fact = ln_factorial(ctx, r);
        let ln_cells = ln_u64(ctx, big_n);
        let mut acc = ctx.add(&picks, &fills);
        acc = ctx.sub(&acc, &ctx.mul(&r_fact, &ctx.from_u64(k)));
        acc = ctx.sub(&acc, &ctx.mul(&ln_cells, &ctx.from_u64(r * k)));
        if n > r * k {
            // spare-cell factor ((N-k)/N)^{n-rk}
            let spare = ln_u64(ctx, big_n - k);
            let ratio = ctx.sub(&spare, &ln_cells);
            acc = ctx.add(&acc, &ctx.mul(&ratio, &ctx.from_u64(n - r * k)));
        }
        Some(acc)
    }

    fn ln_l(&self, ctx: &mut RealCtx) -> Result<BigFloat, SchemeError> {
        // ln N + r (ln n - ln N) - n/N - ln r!
        let OccupancyParams { n, big_n, r } = *self.0;
        let ln_cells = ln_u64(ctx, big_n);
        let ln_items = ln_u64(ctx, n);
        let r_fact = ln_factorial(ctx, r);
        let load = ctx.from_rational(&Rational::new(BigInt::from(n), BigInt::from(big_n)));
        let mut acc = ctx.mul(&ctx.sub(&ln_items, &ln_cells), &ctx.from_u64(r));
        acc = ctx.add(&acc, &ln_cells);
        acc = ctx.sub(&acc, &load);
        Ok(ctx.sub(&acc, &r_fact))
    }

    fn q_polys(&self, j_max: u32, ctx: &mut RealCtx) -> Result<Vec<Vec<BigFloat>>, SchemeError> {
        let OccupancyParams { n, big_n, r } = *self.0;
        let load = Rational::new(BigInt::from(n), BigInt::from(big_n));
        let minus_one = -Rational::one();
        let polys: Vec<Poly> = (1..=j_max)
            .map(|j| {
                let e = j as i64;
                let load_j = pow_ratio(&load, e);
                let lead = (rat_u(r) - Rational::new(BigInt::from(j), BigInt::from(j + 1)) * &load)
                    * &load_j;
                let mut p = Poly::monomial(lead, j as usize + 1);
                p.add_assign_scaled(&powersum_times(j, &minus_one), &load_j);
                p.add_assign_scaled(&powersum_scaled(j, &rat_u(r), 0), &minus_one);
                p
            })
            .collect();
        Ok(polys_to_tables(ctx, &polys))
    }

    fn c_bound(&self) -> f64 {
        let OccupancyParams { n, big_n, r } = *self.0;
        let load = n as f64 / big_n as f64;
        2.0 * r as f64 + load + load.max(1.0)
    }
}

// ---- coloured balls: n draws from N colours with M balls each ----

impl Family for ColouredParams {
    fn name(&self) -> &'static str {
        "gas-coloured"
    }

    fn n(&self) -> u64 {
        self.n
    }

    fn validate(&self) -> Result<(), SchemeError> {
        let fam = self.name();
        validate_count(fam, "n", self.n)?;
        validate_count(fam, "N", self.big_n)?;
        validate_count(fam, "M", self.big_m)?;
        validate_cell_size(fam, self.r)?;
        if self.big_m < self.n {
            // The growth regime keeps every colour inexhaustible.
            return Err(invalid(fam, "requires M >= n"));
        }
        Ok(())
    }

    fn c_exact(&self, k: u64) -> Option<Rational> {
        let ColouredParams {
            n,
            big_n,
            big_m,
            r,
        } = *self;
        if k > big_n || r.saturating_mul(k) > n {
            return Some(Rational::zero());
        }
        // Zero-width binomial ranges cover r > M and over-drawn remainders.
        let per_colour = binomial(big_m, r);
        let rest = binomial((big_n - k) * big_m, n - r * k);
        let total = binomial(big_n * big_m, n);
        Some(
            falling_factorial(&rat_u(big_n), k)
                * pow_ratio(&Rational::from_integer(per_colour), k as i64)
                * Rational::new(rest, total),
        )
    }

    fn ln_c(&self, k: u64, ctx: &mut RealCtx) -> Option<BigFloat> {
        let ColouredParams {
            n,
            big_n,
            big_m,
            r,
        } = *self;
        if k > big_n || r.saturating_mul(k) > n {
            return None;
        }
        let picks = ln_falling_long(ctx, big_n, k)?;
        let per_colour = ln_binomial(ctx, big_m, r)?;
        let rest = ln_binomial(ctx, (big_n - k) * big_m, n - r * k)?;
        let total = ln_binomial(ctx, big_n * big_m, n)?;
        let mut acc = ctx.add(&picks, &ctx.mul(&per_colour, &ctx.from_u64(k)));
        acc = ctx.add(&acc, &rest);
        Some(ctx.sub(&acc, &total))
    }

    fn ln_l(&self, ctx: &mut RealCtx) -> Result<BigFloat, SchemeError> {
        // ln N + r ln n + ln C(M, r) + (M - r) ln(NM - n) - M ln(NM)
        let fam = self.name();
        let ColouredParams {
            n,
            big_n,
            big_m,
            r,
        } = *self;
        if r > big_m {
            return Err(invalid(fam, "r exceeds the balls available per colour"));
        }
        if big_n * big_m == n {
            return Err(invalid(
                fam,
                "drawing every ball leaves nothing to decompose",
            ));
        }
        let mut acc = ln_u64(ctx, big_n);
        let ln_items = ln_u64(ctx, n);
        acc = ctx.add(&acc, &ctx.mul(&ln_items, &ctx.from_u64(r)));
        let choose = ln_binomial(ctx, big_m, r).expect("r <= M checked above");
        acc = ctx.add(&acc, &choose);
        let ln_left = ln_u64(ctx, big_n * big_m - n);
        acc = ctx.add(&acc, &ctx.mul(&ln_left, &ctx.from_u64(big_m - r)));
        let ln_pool = ln_u64(ctx, big_n * big_m);
        Ok(ctx.sub(&acc, &ctx.mul(&ln_pool, &ctx.from_u64(big_m))))
    }

    fn q_polys(&self, j_max: u32, ctx: &mut RealCtx) -> Result<Vec<Vec<BigFloat>>, SchemeError> {
        let fam = self.name();
        let ColouredParams {
            n,
            big_n,
            big_m,
            r,
        } = *self;
        if r > big_m {
            return Err(invalid(fam, "r exceeds the balls available per colour"));
        }
        if big_n * big_m == n {
            return Err(invalid(
                fam,
                "drawing every ball leaves nothing to decompose",
            ));
        }
        let by_pool = Rational::new(BigInt::from(n), BigInt::from(big_n * big_m));
        let by_left = Rational::new(BigInt::from(n), BigInt::from(big_n * big_m - n));
        let by_cells = Rational::new(BigInt::from(n), BigInt::from(big_n));
        let minus_one = -Rational::one();
        let polys: Vec<Poly> = (1..=j_max)
            .map(|j| {
                let e = j as i64;
                let mut p = Poly::zero();
                p.add_assign_scaled(
                    &powersum_scaled(j, &rat_u(big_m), 0),
                    &pow_ratio(&by_pool, e),
                );
                p.add_assign_scaled(
                    &powersum_scaled(j, &rat_u(big_m - r), 0),
                    &(-pow_ratio(&by_left, e)),
                );
                p.add_assign_scaled(&powersum_times(j, &minus_one), &pow_ratio(&by_cells, e));
                p.add_assign_scaled(&powersum_scaled(j, &rat_u(r), 0), &minus_one);
                p
            })
            .collect();
        Ok(polys_to_tables(ctx, &polys))
    }

    fn c_bound(&self) -> f64 {
        let n = self.n as f64;
        let pool = (self.big_n * self.big_m) as f64;
        let pressure = n * self.big_m as f64 / (pool - n);
        let r = self.r as f64;
        2.0 * pressure + pressure.max(r) + (n / self.big_n as f64).max(1.0) + r
    }
}

// ---- uniform rooted forests: N trees, n non-root vertices ----

impl Family for Forest<'_> {
    fn name(&self) -> &'static str {
        "gas-forest"
    }

    fn n(&self) -> u64 {
        self.0.n
    }

    fn validate(&self) -> Result<(), SchemeError> {
        self.0.check(self.name())
    }

    fn c_exact(&self, k: u64) -> Option<Rational> {
        let OccupancyParams { n, big_n, r } = *self.0;
        if let Some(zero) = self.0.support_guard(k) {
            return Some(zero);
        }
        if k == big_n {
            if n != big_n * r {
                return Some(Rational::zero());
            }
            // All trees pinned to r non-root vertices at once.
            let top = Rational::from_integer(factorial(big_n) * factorial(n))
                * pow_ratio(&rat_u(r + 1), (big_n * (r - 1)) as i64);
            let bottom = pow_ratio(&Rational::from_integer(factorial(r)), big_n as i64)
                * rat_u(big_n)
                * pow_ratio(&rat_u(big_n + n), n as i64 - 1);
            return Some(top / bottom);
        }
        let tree_shapes = pow_ratio(&rat_u(r + 1), (k as i64) * (r as i64 - 1))
            / pow_ratio(&Rational::from_integer(factorial(r)), k as i64);
        let spare = Rational::new(BigInt::from(big_n - k), BigInt::from(big_n));
        let picks = falling_factorial(&rat_u(big_n), k) * falling_factorial(&rat_u(n), r * k);
        // The exponent dips to -1 exactly when the pinned trees absorb every
        // non-root vertex; the base N - k stays positive.
        let rest = pow_ratio(
            &rat_u(n + big_n - (r + 1) * k),
            n as i64 - 1 - (r * k) as i64,
        ) / pow_ratio(&rat_u(n + big_n), n as i64 - 1);
        Some(tree_shapes * spare * picks * rest)
    }

    fn ln_c(&self, k: u64, ctx: &mut RealCtx) -> Option<BigFloat> {
        let OccupancyParams { n, big_n, r } = *self.0;
        if self.0.support_guard(k).is_some() {
            return None;
        }
        let ln_shape = ln_u64(ctx, r + 1);
        let r_fact = ln_factorial(ctx, r);
        let ln_crowd = ln_u64(ctx, n + big_n);
        if k == big_n {
            if n != big_n * r {
                return None;
            }
            let mut acc = ln_factorial(ctx, big_n);
            let items = ln_factorial(ctx, n);
            acc = ctx.add(&acc, &items);
            acc = ctx.add(
                &acc,
                &ctx.mul(&ln_shape, &ctx.from_u64(big_n * (r - 1))),
            );
            acc = ctx.sub(&acc, &ctx.mul(&r_fact, &ctx.from_u64(big_n)));
            let roots = ln_u64(ctx, big_n);
            acc = ctx.sub(&acc, &roots);
            return Some(ctx.sub(&acc, &ctx.mul(&ln_crowd, &ctx.from_i64(n as i64 - 1))));
        }
        let mut acc = ctx.mul(&ln_shape, &ctx.from_i64(k as i64 * (r as i64 - 1)));
        acc = ctx.sub(&acc, &ctx.mul(&r_fact, &ctx.from_u64(k)));
        let spare = ln_u64(ctx, big_n - k);
        let cells = ln_u64(ctx, big_n);
        acc = ctx.add(&acc, &ctx.sub(&spare, &cells));
        let picks = ln_falling_long(ctx, big_n, k)?;
        let fills = ln_falling_long(ctx, n, r * k)?;
        acc = ctx.add(&acc, &ctx.add(&picks, &fills));
        let ln_rest = ln_u64(ctx, n + big_n - (r + 1) * k);
        acc = ctx.add(
            &acc,
            &ctx.mul(&ln_rest, &ctx.from_i64(n as i64 - 1 - (r * k) as i64)),
        );
        Some(ctx.sub(&acc, &ctx.mul(&ln_crowd, &ctx.from_i64(n as i64 - 1))))
    }

    fn ln_l(&self, ctx: &mut RealCtx) -> Result<BigFloat, SchemeError> {
        // ln N + (r-1) ln(r+1) - ln r! + r (ln n - ln(n+N)) - (n-1)(r+1)/(n+N)
        let OccupancyParams { n, big_n, r } = *self.0;
        let mut acc = ln_u64(ctx, big_n);
        let ln_shape = ln_u64(ctx, r + 1);
        acc = ctx.add(&acc, &ctx.mul(&ln_shape, &ctx.from_i64(r as i64 - 1)));
        let r_fact = ln_factorial(ctx, r);
        acc = ctx.sub(&acc, &r_fact);
        let ln_items = ln_u64(ctx, n);
        let ln_crowd = ln_u64(ctx, n + big_n);
        acc = ctx.add(
            &acc,
            &ctx.mul(&ctx.sub(&ln_items, &ln_crowd), &ctx.from_u64(r)),
        );
        let drift = Rational::new(
            BigInt::from(n - 1) * BigInt::from(r + 1),
            BigInt::from(n + big_n),
        );
        Ok(ctx.sub(&acc, &ctx.from_rational(&drift)))
    }

    fn q_polys(&self, j_max: u32, ctx: &mut RealCtx) -> Result<Vec<Vec<BigFloat>>, SchemeError> {
        let OccupancyParams { n, big_n, r } = *self.0;
        let by_cells = Rational::new(BigInt::from(n), BigInt::from(big_n));
        let crowd = BigInt::from(n + big_n);
        let base = Rational::new(BigInt::from(r + 1) * BigInt::from(n), crowd.clone());
        let drift = Rational::new(BigInt::from(r + 1) * BigInt::from(n - 1), crowd);
        let minus_one = -Rational::one();
        let one = Rational::one();
        let polys: Vec<Poly> = (1..=j_max)
            .map(|j| {
                let e = j as i64;
                let lead = (rat_u(r)
                    - Rational::new(BigInt::from(j), BigInt::from(j + 1)) * &drift)
                    * pow_ratio(&base, e);
                let mut p = Poly::monomial(lead, j as usize + 1);
                p.add_assign_scaled(
                    &powersum_scaled(j, &one, 1),
                    &(-pow_ratio(&by_cells, e)),
                );
                p.add_assign_scaled(&powersum_scaled(j, &rat_u(r), 0), &minus_one);
                p
            })
            .collect();
        Ok(polys_to_tables(ctx, &polys))
    }

    fn c_bound(&self) -> f64 {
        let OccupancyParams { n, big_n, r } = *self.0;
        let crowd = (n + big_n) as f64;
        let r_f = r as f64;
        let drift = (r_f + 1.0) * (n - 1) as f64 / crowd;
        let base = (r_f + 1.0) * n as f64 / crowd;
        (r_f + drift).max(base) + (n as f64 / big_n as f64).max(1.0) + r_f
    }
}
