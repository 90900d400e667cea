//! Inverse-sampling families: draws continue until the `(n+1)`th stop symbol
//! rather than for a fixed number of trials. `S` counts coordinates of the
//! resulting vector equal to `r`. Two mixing layers are covered: fixed
//! coordinate probability `p` (negative multinomial) and Dirichlet-mixed
//! probabilities with per-colour weight `a` and stop weight `b`.

use super::*;
use crate::exact::{factorial, falling_factorial, pow_ratio, rising_factorial};
use num_traits::ToPrimitive;

impl NegmultiParams {
    /// `(1 - Np)/p`, the odds mass shared by the stop symbol, scaled so the
    /// per-coordinate load is `n / (N beta)`.
    fn stop_odds(&self) -> Rational {
        (Rational::one() - rat_u(self.big_n) * &self.p) / &self.p
    }
}

impl Family for NegmultiParams {
    fn name(&self) -> &'static str {
        "gias-negmulti"
    }

    fn n(&self) -> u64 {
        self.n
    }

    fn validate(&self) -> Result<(), SchemeError> {
        let fam = self.name();
        validate_count(fam, "n", self.n)?;
        validate_count(fam, "N", self.big_n)?;
        validate_prob(fam, "p", &self.p)?;
        validate_cell_size(fam, self.r)?;
        if rat_u(self.big_n) * &self.p >= Rational::one() {
            return Err(invalid(fam, "requires N p < 1 to leave room for the stop symbol"));
        }
        Ok(())
    }

    fn c_exact(&self, k: u64) -> Option<Rational> {
        if k > self.big_n {
            return Some(Rational::zero());
        }
        let rk = self.r.checked_mul(k)?;
        if rk > MAX_ORDER {
            // Astronomically long rising products go through the log route.
            return None;
        }
        let odds = self.stop_odds();
        let picks = falling_factorial(&rat_u(self.big_n), k);
        let runs = rising_factorial(&rat_u(self.n + 1), rk)
            / pow_ratio(&Rational::from_integer(factorial(self.r)), k as i64);
        let scale = pow_ratio(&odds, (self.n + 1) as i64)
            / pow_ratio(&(&odds + rat_u(k)), (self.n + 1 + rk) as i64);
        Some(picks * runs * scale)
    }

    fn ln_c(&self, k: u64, ctx: &mut RealCtx) -> Option<BigFloat> {
        if k > self.big_n {
            return None;
        }
        let rk = self.r * k;
        let odds = self.stop_odds();
        let picks = ln_falling_long(ctx, self.big_n, k)?;
        let runs = ln_rising_rat(ctx, &rat_u(self.n + 1), rk);
        let r_fact = ln_factorial(ctx, self.r);
        let ln_odds = ln_positive_rational(ctx, &odds);
        let ln_bumped = ln_positive_rational(ctx, &(&odds + rat_u(k)));
        let mut acc = ctx.add(&picks, &runs);
        acc = ctx.sub(&acc, &ctx.mul(&r_fact, &ctx.from_u64(k)));
        acc = ctx.add(&acc, &ctx.mul(&ln_odds, &ctx.from_u64(self.n + 1)));
        Some(ctx.sub(&acc, &ctx.mul(&ln_bumped, &ctx.from_u64(self.n + 1 + rk))))
    }

    fn ln_l(&self, ctx: &mut RealCtx) -> Result<BigFloat, SchemeError> {
        // ln N + r (ln n - ln(N beta)) - n/(N beta) - ln r!
        let odds = self.stop_odds();
        let mut acc = ln_u64(ctx, self.big_n);
        let ln_items = ln_u64(ctx, self.n);
        let ln_odds = ln_positive_rational(ctx, &odds);
        acc = ctx.add(
            &acc,
            &ctx.mul(&ctx.sub(&ln_items, &ln_odds), &ctx.from_u64(self.r)),
        );
        acc = ctx.sub(&acc, &ctx.from_rational(&(rat_u(self.n) / &odds)));
        let r_fact = ln_factorial(ctx, self.r);
        Ok(ctx.sub(&acc, &r_fact))
    }

    fn q_polys(&self, j_max: u32, ctx: &mut RealCtx) -> Result<Vec<Vec<BigFloat>>, SchemeError> {
        let odds = self.stop_odds();
        let load = rat_u(self.n) / &odds;
        let neg_load = -load.clone();
        let stop_rate = rat_u(self.n + 1) / &odds;
        let by_cells = Rational::new(BigInt::from(self.n), BigInt::from(self.big_n));
        let minus_one = -Rational::one();
        let polys: Vec<Poly> = (1..=j_max)
            .map(|j| {
                let e = j as i64;
                let lead = (rat_u(self.r)
                    - Rational::new(BigInt::from(j), BigInt::from(j + 1)) * &stop_rate)
                    * pow_ratio(&neg_load, e);
                let mut p = Poly::monomial(lead, j as usize + 1);
                if j == 1 {
                    // The stop-odds series starts one slot early; its first
                    // term survives resummation as a bare linear piece.
                    p.add_assign_scaled(&Poly::monomial(neg_load.clone(), 1), &Rational::one());
                }
                p.add_assign_scaled(&powersum_scaled(j, &rat_u(self.r), 1), &alt_sign(j));
                p.add_assign_scaled(&powersum_times(j, &minus_one), &pow_ratio(&by_cells, e));
                p
            })
            .collect();
        Ok(polys_to_tables(ctx, &polys))
    }

    fn c_bound(&self) -> f64 {
        let odds = rational_to_f64(&self.stop_odds());
        let n = self.n as f64;
        (n / odds).sqrt()
            + 2.0 * self.r as f64
            + (n + 1.0) / odds
            + (n / self.big_n as f64).max(1.0)
    }
}

impl DirichletParams {
    /// `a` as a plain integer when it is one; rising factorials of length
    /// `k a` are rational exactly in that case.
    fn integer_weight(&self) -> Option<u64> {
        if !self.a.is_integer() {
            return None;
        }
        self.a.to_integer().to_u64()
    }
}

impl Family for DirichletParams {
    fn name(&self) -> &'static str {
        "gias-dirichlet"
    }

    fn n(&self) -> u64 {
        self.n
    }

    fn validate(&self) -> Result<(), SchemeError> {
        let fam = self.name();
        validate_count(fam, "n", self.n)?;
        validate_count(fam, "N", self.big_n)?;
        validate_positive(fam, "a", &self.a)?;
        validate_positive(fam, "b", &self.b)?;
        validate_cell_size(fam, self.r)
    }

    fn c_exact(&self, k: u64) -> Option<Rational> {
        if k > self.big_n {
            return Some(Rational::zero());
        }
        let weight = self.integer_weight()?;
        let ka = weight.checked_mul(k)?;
        let rk = self.r.checked_mul(k)?;
        if ka > MAX_ORDER || rk > MAX_ORDER {
            return None;
        }
        let picks = falling_factorial(&rat_u(self.big_n), k);
        let runs = rising_factorial(&rat_u(self.n + 1), rk)
            / pow_ratio(&Rational::from_integer(factorial(self.r)), k as i64);
        let colour_mass = rising_factorial(&self.b, ka)
            * pow_ratio(&rising_factorial(&self.a, self.r), k as i64);
        let denom = rising_factorial(&(rat_u(self.n + 1) + &self.b), rk + ka);
        Some(picks * runs * colour_mass / denom)
    }

    fn ln_c(&self, k: u64, ctx: &mut RealCtx) -> Option<BigFloat> {
        if k > self.big_n {
            return None;
        }
        let rk = self.r * k;
        let picks = ln_falling_long(ctx, self.big_n, k)?;
        let runs = ln_rising_rat(ctx, &rat_u(self.n + 1), rk);
        let r_fact = ln_factorial(ctx, self.r);

        // Real-length rising factorials via the gamma function.
        let a_f = ctx.from_rational(&self.a);
        let b_f = ctx.from_rational(&self.b);
        let k_f = ctx.from_u64(k);
        let ka = ctx.mul(&k_f, &a_f);
        let b_hi = ctx.lgamma(&ctx.add(&b_f, &ka));
        let b_lo = ctx.lgamma(&b_f);
        let a_hi = ctx.lgamma(&ctx.add(&a_f, &ctx.from_u64(self.r)));
        let a_lo = ctx.lgamma(&a_f);
        let base = ctx.add(&ctx.from_u64(self.n + 1), &b_f);
        let stretch = ctx.add(&ctx.from_u64(rk), &ka);
        let d_hi = ctx.lgamma(&ctx.add(&base, &stretch));
        let d_lo = ctx.lgamma(&base);

        let mut acc = ctx.add(&picks, &runs);
        acc = ctx.sub(&acc, &ctx.mul(&r_fact, &k_f));
        acc = ctx.add(&acc, &ctx.sub(&b_hi, &b_lo));
        acc = ctx.add(&acc, &ctx.mul(&ctx.sub(&a_hi, &a_lo), &k_f));
        Some(ctx.sub(&acc, &ctx.sub(&d_hi, &d_lo)))
    }

    fn ln_l(&self, ctx: &mut RealCtx) -> Result<BigFloat, SchemeError> {
        // ln N + lgamma(r+a) - lgamma(a) - ln r! + r ln n
        //   + a psi(1+b) - (r+a) psi(2+n+b)
        let a_f = ctx.from_rational(&self.a);
        let b_f = ctx.from_rational(&self.b);
        let mut acc = ln_u64(ctx, self.big_n);
        let a_hi = ctx.lgamma(&ctx.add(&a_f, &ctx.from_u64(self.r)));
        let a_lo = ctx.lgamma(&a_f);
        acc = ctx.add(&acc, &ctx.sub(&a_hi, &a_lo));
        let r_fact = ln_factorial(ctx, self.r);
        acc = ctx.sub(&acc, &r_fact);
        let ln_items = ln_u64(ctx, self.n);
        acc = ctx.add(&acc, &ctx.mul(&ln_items, &ctx.from_u64(self.r)));
        let psi_b = ctx.digamma(&ctx.add(&ctx.from_u64(1), &b_f));
        acc = ctx.add(&acc, &ctx.mul(&a_f, &psi_b));
        let psi_top = ctx.digamma(&ctx.add(&ctx.from_u64(2 + self.n), &b_f));
        let shifted = ctx.add(&a_f, &ctx.from_u64(self.r));
        Ok(ctx.sub(&acc, &ctx.mul(&shifted, &psi_top)))
    }

    fn q_polys(&self, j_max: u32, ctx: &mut RealCtx) -> Result<Vec<Vec<BigFloat>>, SchemeError> {
        let DirichletParams {
            n, big_n, r, ..
        } = *self;
        let shifted = rat_u(r) + &self.a; // r + a
        let top_rate = rat_u(n) * &shifted / (rat_u(n + 1) + &self.b);
        let bot_rate = rat_u(n) * &self.a / &self.b;
        let by_cells = Rational::new(BigInt::from(n), BigInt::from(big_n));
        let minus_one = -Rational::one();

        // Transcendental tail weights for the i^{j+1} coefficients.
        let a_f = ctx.from_rational(&self.a);
        let shifted_f = ctx.from_rational(&shifted);
        let b_f = ctx.from_rational(&self.b);
        let top_base = ctx.add(&ctx.from_u64(n + 1), &b_f);
        let neg_n = ctx.from_i64(-(n as i64));

        let mut tables = Vec::with_capacity(j_max as usize);
        for j in 1..=j_max {
            let e = j as i64;
            let swing = (pow_ratio(&top_rate, e) - pow_ratio(&bot_rate, e)) * alt_sign(j);
            let mut p = Poly::monomial(swing, j as usize);
            p.add_assign_scaled(&powersum_scaled(j, &rat_u(r), 1), &alt_sign(j));
            p.add_assign_scaled(&powersum_times(j, &minus_one), &pow_ratio(&by_cells, e));
            let mut coeffs = poly_to_coeffs(ctx, &p, j as usize + 2);

            let h_top = ctx.inverse_power_tail(j, &top_base);
            let h_bot = ctx.inverse_power_tail(j, &b_f);
            let lhs = ctx.mul(&ctx.powi(&shifted_f, j as u64 + 1), &h_top);
            let rhs = ctx.mul(&ctx.powi(&a_f, j as u64 + 1), &h_bot);
            let weight = ctx.from_rational(&Rational::new(
                BigInt::from(j),
                BigInt::from(j + 1),
            ));
            let tail = ctx.mul(
                &ctx.mul(&weight, &ctx.powi(&neg_n, j as u64)),
                &ctx.sub(&lhs, &rhs),
            );
            coeffs[j as usize + 1] = ctx.add(&coeffs[j as usize + 1], &tail);
            tables.push(coeffs);
        }
        Ok(tables)
    }

    fn c_bound(&self) -> f64 {
        let n = self.n as f64;
        let a = rational_to_f64(&self.a);
        let b = rational_to_f64(&self.b);
        let r = self.r as f64;
        let top_rate = n * (r + a) / (n + 1.0 + b);
        (top_rate).max(1.0)
            + (n * a / b).max(1.0)
            + 2.0 * (r + a)
            + a * (1.0 + 1.0 / b)
            + a * (n / b).max(1.0)
            + r
            + (n / self.big_n as f64).max(1.0)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exact::multinomial;
    use crate::schemes::{decomposition, decomposition_residual};

    fn rat(n: i64, d: i64) -> Rational {
        Rational::new(BigInt::from(n), BigInt::from(d))
    }

    /// All vectors (x_1..x_N) with sum at most `cap`, via odometer walk.
    fn vectors(n_coords: usize, cap: u64) -> Vec<Vec<u64>> {
        let mut out = vec![vec![]];
        for _ in 0..n_coords {
            let mut next = Vec::new();
            for v in &out {
                let used: u64 = v.iter().sum();
                for x in 0..=cap - used {
                    let mut w = v.clone();
                    w.push(x);
                    next.push(w);
                }
            }
            out = next;
        }
        out
    }

    fn hits(v: &[u64], r: u64) -> u64 {
        v.iter().filter(|&&x| x == r).count() as u64
    }

    #[test]
    fn negmulti_moments_match_truncated_pmf_sum() {
        // P(x) = multinomial(n, x_1..x_N) p0^{n+1} p^{sum x}, truncated where
        // the geometric tail is far below the assertion threshold.
        let params = NegmultiParams {
            n: 2,
            big_n: 3,
            p: rat(1, 10),
            r: 1,
        };
        let p0 = Rational::one() - rat_u(params.big_n) * &params.p;
        let mut mass = Rational::zero();
        let mut moments = vec![Rational::zero(); 4];
        for v in vectors(3, 40) {
            let total: u64 = v.iter().sum();
            let mut parts = vec![params.n];
            parts.extend_from_slice(&v);
            let prob = Rational::from_integer(multinomial(&parts))
                * pow_ratio(&p0, (params.n + 1) as i64)
                * pow_ratio(&params.p, total as i64);
            let s = hits(&v, params.r);
            for (k, m) in moments.iter_mut().enumerate() {
                *m += falling_factorial(&rat_u(s), k as u64 + 1) * &prob;
            }
            mass += prob;
        }
        let mass_gap = rational_to_f64(&(Rational::one() - &mass));
        assert!(mass_gap.abs() < 1e-15, "mass gap {mass_gap:.3e}");
        for (k, truncated) in moments.iter().enumerate() {
            let closed = params.c_exact(k as u64 + 1).unwrap();
            let gap = rational_to_f64(&(&closed - truncated));
            assert!(gap.abs() < 1e-15, "k={}: gap {gap:.3e}", k + 1);
        }
    }

    #[test]
    fn dirichlet_moments_match_truncated_pmf_sum() {
        // Mixing the coordinate probabilities over a Dirichlet weight turns
        // the pmf into rising-factorial ratios:
        // P(x) = multinomial(n, x) prod_i a^(x_i) b^(n+1) / (Na+b)^(n+1+sum).
        // The total-count tail decays like m^{-(b+1)} with a sizeable
        // b^(n+1)-driven constant; summing to 70 leaves under 1e-10.
        let params = DirichletParams {
            n: 2,
            big_n: 3,
            a: rat(1, 1),
            b: rat(12, 1),
            r: 1,
        };
        let pool = rat_u(params.big_n) * &params.a + &params.b;
        let mut mass = Rational::zero();
        let mut moments = vec![Rational::zero(); 4];
        for v in vectors(3, 70) {
            let total: u64 = v.iter().sum();
            let mut parts = vec![params.n];
            parts.extend_from_slice(&v);
            let mut prob = Rational::from_integer(multinomial(&parts))
                * rising_factorial(&params.b, params.n + 1)
                / rising_factorial(&pool, params.n + 1 + total);
            for x in &v {
                prob *= rising_factorial(&params.a, *x);
            }
            let s = hits(&v, params.r);
            for (k, m) in moments.iter_mut().enumerate() {
                *m += falling_factorial(&rat_u(s), k as u64 + 1) * &prob;
            }
            mass += prob;
        }
        let mass_gap = rational_to_f64(&(Rational::one() - &mass));
        assert!(mass_gap.abs() < 1e-9, "mass gap {mass_gap:.3e}");
        for (k, truncated) in moments.iter().enumerate() {
            let closed = params.c_exact(k as u64 + 1).unwrap();
            let gap = rational_to_f64(&(&closed - truncated));
            assert!(gap.abs() < 1e-9, "k={}: gap {gap:.3e}", k + 1);
        }
    }

    #[test]
    fn dirichlet_exact_and_gamma_routes_agree_for_integer_weight() {
        let mut ctx = RealCtx::default();
        let params = DirichletParams {
            n: 6,
            big_n: 4,
            a: rat(2, 1),
            b: rat(7, 3),
            r: 1,
        };
        for k in 1..=3u64 {
            let exact = params.c_exact(k).unwrap();
            assert!(exact.is_positive());
            let want = ln_positive_rational(&mut ctx, &exact);
            let got = params.ln_c(k, &mut ctx).unwrap();
            let diff = RealCtx::to_f64(&abs_bf(&ctx.sub(&got, &want)));
            assert!(diff < 1e-60, "k={k}: diff {diff:.3e}");
        }
    }

    #[test]
    fn dirichlet_fractional_weight_has_no_exact_route() {
        let params = DirichletParams {
            n: 5,
            big_n: 3,
            a: rat(3, 2),
            b: rat(2, 1),
            r: 0,
        };
        assert!(params.c_exact(1).is_none());
        // Past the coordinate count the moment is an exact zero regardless.
        assert_eq!(params.c_exact(4).unwrap(), Rational::zero());
        let mut ctx = RealCtx::default();
        assert!(params.ln_c(1, &mut ctx).is_some());
        assert!(params.ln_c(4, &mut ctx).is_none());
    }

    #[test]
    fn negmulti_q2_coefficients_by_hand() {
        // Q_2(i) = -load i + (r - (n+1)/(2 N beta)) (-load) i^2
        //          + (r i + 1) r i / 2 - (n/N) i (i - 1)/2
        // with load = n/(N beta); for n=100, N=50, p=1/200 the linear and
        // quadratic coefficients come to 5/6 and -212/225.
        let mut ctx = RealCtx::default();
        let spec = SchemeSpec::GiasNegmulti(NegmultiParams {
            n: 100,
            big_n: 50,
            p: rat(1, 200),
            r: 1,
        });
        let data = decomposition(&spec, 1, &mut ctx).unwrap();
        let linear = RealCtx::to_f64(&data.q[0][1]);
        let quad = RealCtx::to_f64(&data.q[0][2]);
        assert!((linear - 5.0 / 6.0).abs() < 1e-12, "linear {linear}");
        assert!((quad + 212.0 / 225.0).abs() < 1e-12, "quad {quad}");
    }

    #[test]
    fn inverse_sampling_truncated_decompositions_are_accurate() {
        let mut ctx = RealCtx::default();
        let spec = SchemeSpec::GiasNegmulti(NegmultiParams {
            n: 1000,
            big_n: 1000,
            p: rat(1, 2000),
            r: 2,
        });
        let res = decomposition_residual(&spec, 4, 10, &mut ctx).unwrap();
        assert!(res < 1e-9, "negmulti residual {res:.3e}");

        // Integer weight: exact c_k cross-checks the log prediction.
        let spec = SchemeSpec::GiasDirichlet(DirichletParams {
            n: 1000,
            big_n: 1000,
            a: rat(1, 1),
            b: rat(1000, 1),
            r: 2,
        });
        let res = decomposition_residual(&spec, 4, 10, &mut ctx).unwrap();
        assert!(res < 1e-9, "dirichlet residual {res:.3e}");

        // Fractional weight: everything through the gamma route.
        let spec = SchemeSpec::GiasDirichlet(DirichletParams {
            n: 1000,
            big_n: 1000,
            a: rat(3, 2),
            b: rat(2000, 1),
            r: 1,
        });
        let res = decomposition_residual(&spec, 4, 10, &mut ctx).unwrap();
        assert!(res < 1e-9, "dirichlet fractional residual {res:.3e}");
    }

    #[test]
    fn negmulti_rejects_saturated_probability() {
        let spec = SchemeSpec::GiasNegmulti(NegmultiParams {
            n: 5,
            big_n: 4,
            p: rat(1, 4),
            r: 0,
        });
        assert!(spec.validate().is_err());
        let spec = SchemeSpec::GiasNegmulti(NegmultiParams {
            n: 5,
            big_n: 4,
            p: rat(1, 5),
            r: 0,
        });
        spec.validate().unwrap();
    }
}
