//! Fixed-precision real arithmetic for evaluation paths where exact rationals
//! are too large to be practical.
//!
//! Factorial moments of the occupancy families involve products with ~`n`
//! factors; at `n = 10^5` the exact rational representation runs to millions
//! of digits, so the large-`n` diagnostics work in software floats instead.
//! [`RealCtx`] wraps `astro-float` with a fixed precision (default 320 bits)
//! and adds the special functions the scheme formulas need: `ln Γ`, the
//! digamma function, and the inverse-power tail sums `h_j(y) = Σ_{k≥1}
//! (k+y)^{-(j+1)}`.
//!
//! All series here are classical asymptotic expansions with Bernoulli-number
//! coefficients, taken from the exact module so the two arithmetic backends
//! share one source of truth. Arguments are promoted by functional equations
//! until the expansion floor sits below the working precision, so results are
//! accurate to within a few ulps at the context precision.

use crate::exact::{bernoulli_seq, Rational};
use astro_float::{BigFloat, Consts, Exponent, RoundingMode, Sign};
use num_bigint::BigInt;
use num_traits::{Signed, Zero};

/// Default mantissa precision in bits. 320 bits is roughly 96 decimal
/// digits, far beyond the 1e-30 comparisons the diagnostics make.
pub const DEFAULT_PRECISION: usize = 320;

// Series below a promoted argument of this size cannot reach the precision
// floor; arguments are shifted up to at least this value first.
const STIRLING_MIN_ARG: f64 = 64.0;
const TAIL_MIN_ARG: f64 = 256.0;
const MAX_SERIES_TERMS: usize = 400;

/// Shared state for fixed-precision computations: the precision, rounding
/// mode, the `astro-float` constants cache (required by `ln`/`exp`), and a
/// cache of exact Bernoulli numbers for the asymptotic series.
///
/// Methods take `&mut self` because the constants cache memoizes internally.
/// The context is cheap to create, so concurrent callers can each own one.
pub struct RealCtx {
    prec: usize,
    rm: RoundingMode,
    consts: Consts,
    bernoulli: Vec<Rational>,
}

impl Default for RealCtx {
    fn default() -> Self {
        Self::new(DEFAULT_PRECISION)
    }
}

impl RealCtx {
    /// Creates a context computing to `prec` bits of mantissa.
    pub fn new(prec: usize) -> Self {
        assert!(prec >= 64, "precision below 64 bits is not supported");
        RealCtx {
            prec,
            rm: RoundingMode::ToEven,
            consts: Consts::new().expect("constants cache allocation failed"),
            bernoulli: Vec::new(),
        }
    }

    pub fn precision(&self) -> usize {
        self.prec
    }

    // ---- conversions ----

    pub fn from_u64(&self, v: u64) -> BigFloat {
        BigFloat::from_u64(v, self.prec)
    }

    pub fn from_i64(&self, v: i64) -> BigFloat {
        BigFloat::from_i64(v, self.prec)
    }

    pub fn from_f64(&self, v: f64) -> BigFloat {
        BigFloat::from_f64(v, self.prec)
    }

    /// Exact conversion. The mantissa keeps every bit of `z`, which may
    /// exceed the context precision; later arithmetic rounds as usual.
    pub fn from_bigint(&self, z: &BigInt) -> BigFloat {
        if z.is_zero() {
            return self.from_u64(0);
        }
        let words = z.magnitude().to_u64_digits();
        let sign = if z.is_negative() { Sign::Neg } else { Sign::Pos };
        // from_words reads the words as a fraction in [0,1) times 2^e, so an
        // integer spanning w words carries exponent 64w.
        let e = (words.len() * 64) as Exponent;
        BigFloat::from_words(&words, sign, e)
    }

    /// Correctly rounded quotient of the exact numerator and denominator.
    pub fn from_rational(&self, q: &Rational) -> BigFloat {
        let num = self.from_bigint(q.numer());
        let den = self.from_bigint(q.denom());
        num.div(&den, self.prec, self.rm)
    }

    // ---- arithmetic at the context precision ----

    pub fn add(&self, a: &BigFloat, b: &BigFloat) -> BigFloat {
        a.add(b, self.prec, self.rm)
    }

    pub fn sub(&self, a: &BigFloat, b: &BigFloat) -> BigFloat {
        a.sub(b, self.prec, self.rm)
    }

    pub fn mul(&self, a: &BigFloat, b: &BigFloat) -> BigFloat {
        a.mul(b, self.prec, self.rm)
    }

    pub fn div(&self, a: &BigFloat, b: &BigFloat) -> BigFloat {
        a.div(b, self.prec, self.rm)
    }

    pub fn recip(&self, a: &BigFloat) -> BigFloat {
        a.reciprocal(self.prec, self.rm)
    }

    pub fn powi(&self, a: &BigFloat, n: u64) -> BigFloat {
        a.powi(n as usize, self.prec, self.rm)
    }

    pub fn sqrt(&self, a: &BigFloat) -> BigFloat {
        a.sqrt(self.prec, self.rm)
    }

    pub fn ln(&mut self, a: &BigFloat) -> BigFloat {
        a.ln(self.prec, self.rm, &mut self.consts)
    }

    pub fn exp(&mut self, a: &BigFloat) -> BigFloat {
        a.exp(self.prec, self.rm, &mut self.consts)
    }

    pub fn pi(&mut self) -> BigFloat {
        self.consts.pi(self.prec, self.rm)
    }

    pub fn ln_2(&mut self) -> BigFloat {
        self.consts.ln_2(self.prec, self.rm)
    }

    /// Lossy conversion reading the top 128 mantissa bits.
    pub fn to_f64(x: &BigFloat) -> f64 {
        if x.is_nan() {
            return f64::NAN;
        }
        match x.as_raw_parts() {
            None => {
                if x.is_negative() {
                    f64::NEG_INFINITY
                } else {
                    f64::INFINITY
                }
            }
            Some((words, n, sign, e, _)) => {
                if n == 0 || words.is_empty() {
                    return 0.0;
                }
                let hi = words[words.len() - 1] as f64;
                let lo = if words.len() >= 2 { words[words.len() - 2] as f64 } else { 0.0 };
                let frac = hi * (-64f64).exp2() + lo * (-128f64).exp2();
                let mag = if e > 1100 {
                    f64::INFINITY
                } else if e < -1100 {
                    0.0
                } else {
                    frac * (e as f64).exp2()
                };
                if sign == Sign::Neg {
                    -mag
                } else {
                    mag
                }
            }
        }
    }

    fn bernoulli(&mut self, m: usize) -> Rational {
        if self.bernoulli.len() <= m {
            // Recomputing the prefix is fine: this happens at most a couple
            // of times per context and the table is small.
            self.bernoulli = bernoulli_seq((2 * m).max(64) as u64);
        }
        self.bernoulli[m].clone()
    }

    /// True once `term` can no longer move `acc` at the context precision.
    fn negligible(&self, term: &BigFloat, acc: &BigFloat) -> bool {
        if term.is_zero() {
            return true;
        }
        match (term.exponent(), acc.exponent()) {
            (Some(te), Some(ae)) => (te as i64) < (ae as i64) - (self.prec as i64) - 8,
            _ => false,
        }
    }

    // ---- special functions ----

    /// Natural log of the gamma function for finite `x > 0`.
    ///
    /// Small arguments are promoted through `Γ(x+1) = x Γ(x)` until the
    /// Stirling series converges below the precision floor, then
    /// `ln Γ(z) = (z - 1/2) ln z - z + ln(2π)/2 + Σ_k B_{2k} / (2k(2k-1) z^{2k-1})`.
    pub fn lgamma(&mut self, x: &BigFloat) -> BigFloat {
        assert!(
            !x.is_nan() && x.as_raw_parts().is_some() && x.is_positive() && !x.is_zero(),
            "lgamma requires a finite positive argument"
        );
        let one = self.from_u64(1);
        let mut z = x.clone();
        let mut shift = self.from_u64(0);
        while Self::to_f64(&z) < STIRLING_MIN_ARG {
            let lnz = self.ln(&z);
            shift = self.add(&shift, &lnz);
            z = self.add(&z, &one);
        }

        let ln_z = self.ln(&z);
        let half = self.from_rational(&Rational::new(1.into(), 2.into()));
        let two_pi = {
            let pi = self.pi();
            self.add(&pi, &pi)
        };
        let ln_two_pi = self.ln(&two_pi);
        let mut acc = self.mul(&self.sub(&z, &half), &ln_z);
        acc = self.sub(&acc, &z);
        acc = self.add(&acc, &self.mul(&half, &ln_two_pi));

        let inv_z2 = self.recip(&self.mul(&z, &z));
        let mut zpow = self.recip(&z); // z^{-(2k-1)}
        for k in 1..=MAX_SERIES_TERMS {
            let coeff = self.bernoulli(2 * k)
                / Rational::from(BigInt::from(2 * k as u64 * (2 * k as u64 - 1)));
            let coeff = self.from_rational(&coeff);
            let term = self.mul(&coeff, &zpow);
            acc = self.add(&acc, &term);
            if self.negligible(&term, &acc) {
                break;
            }
            zpow = self.mul(&zpow, &inv_z2);
            debug_assert!(k < MAX_SERIES_TERMS, "Stirling series failed to converge");
        }
        self.sub(&acc, &shift)
    }

    /// Digamma function `ψ(x) = Γ'(x)/Γ(x)` for finite `x > 0`.
    ///
    /// Promotes via `ψ(x) = ψ(x+1) - 1/x`, then uses
    /// `ψ(z) = ln z - 1/(2z) - Σ_k B_{2k} / (2k z^{2k})`.
    pub fn digamma(&mut self, x: &BigFloat) -> BigFloat {
        assert!(
            !x.is_nan() && x.as_raw_parts().is_some() && x.is_positive() && !x.is_zero(),
            "digamma requires a finite positive argument"
        );
        let one = self.from_u64(1);
        let mut z = x.clone();
        let mut shift = self.from_u64(0);
        while Self::to_f64(&z) < STIRLING_MIN_ARG {
            shift = self.add(&shift, &self.recip(&z));
            z = self.add(&z, &one);
        }

        let ln_z = self.ln(&z);
        let inv_z = self.recip(&z);
        let half = self.from_rational(&Rational::new(1.into(), 2.into()));
        let mut acc = self.sub(&ln_z, &self.mul(&half, &inv_z));

        let inv_z2 = self.mul(&inv_z, &inv_z);
        let mut zpow = inv_z2.clone(); // z^{-2k}
        for k in 1..=MAX_SERIES_TERMS {
            let coeff = self.bernoulli(2 * k) / Rational::from(BigInt::from(2 * k as u64));
            let coeff = self.from_rational(&coeff);
            let term = self.mul(&coeff, &zpow);
            acc = self.sub(&acc, &term);
            if self.negligible(&term, &acc) {
                break;
            }
            zpow = self.mul(&zpow, &inv_z2);
            debug_assert!(k < MAX_SERIES_TERMS, "digamma series failed to converge");
        }
        self.sub(&acc, &shift)
    }

    /// Tail sum `h_j(y) = Σ_{k≥1} (k+y)^{-(j+1)}` for `j ≥ 1`, `y > 0`.
    ///
    /// The first terms are summed directly until `k + y` is large, and the
    /// remainder is evaluated by Euler-Maclaurin:
    /// `Σ_{k≥a} f(k) = ∫_a^∞ f + f(a)/2 + Σ_m B_{2m}/(2m)! · (j+1)^(2m-1) · (a+y)^{-(j+2m)}`
    /// for `f(t) = (t+y)^{-(j+1)}`, where the superscript denotes a rising
    /// factorial. `f` is completely monotone, so the truncation error is
    /// bounded by the first omitted term.
    pub fn inverse_power_tail(&mut self, j: u32, y: &BigFloat) -> BigFloat {
        assert!(j >= 1, "inverse_power_tail requires j >= 1");
        assert!(
            !y.is_nan() && y.as_raw_parts().is_some() && y.is_positive() && !y.is_zero(),
            "inverse_power_tail requires a finite positive argument"
        );

        let y_f = Self::to_f64(y);
        let direct = if y_f + 1.0 >= TAIL_MIN_ARG {
            0
        } else {
            (TAIL_MIN_ARG - y_f).ceil() as u64
        };

        let mut acc = self.from_u64(0);
        for k in 1..=direct {
            let base = self.add(&self.from_u64(k), y);
            let term = self.recip(&self.powi(&base, j as u64 + 1));
            acc = self.add(&acc, &term);
        }

        // Euler-Maclaurin for the remainder starting at k = direct + 1.
        let a = self.add(&self.from_u64(direct + 1), y);
        let w = self.recip(&a);
        let integral = {
            let wj = self.powi(&w, j as u64);
            let jf = self.from_u64(j as u64);
            self.div(&wj, &jf)
        };
        acc = self.add(&acc, &integral);
        let half_f_a = {
            let wj1 = self.powi(&w, j as u64 + 1);
            let half = self.from_rational(&Rational::new(1.into(), 2.into()));
            self.mul(&wj1, &half)
        };
        acc = self.add(&acc, &half_f_a);

        let w2 = self.mul(&w, &w);
        let mut wpow = self.powi(&w, j as u64 + 2); // (a+y)^{-(j+2m)}
        let mut rising = Rational::from(BigInt::from(j + 1)); // (j+1)^(2m-1)
        let mut fact = Rational::from(BigInt::from(2)); // (2m)!
        for m in 1..=MAX_SERIES_TERMS {
            let coeff = self.bernoulli(2 * m) * &rising / &fact;
            let coeff = self.from_rational(&coeff);
            let term = self.mul(&coeff, &wpow);
            acc = self.add(&acc, &term);
            if self.negligible(&term, &acc) {
                break;
            }
            let m = m as u64;
            let j = j as u64;
            rising *= Rational::from(BigInt::from((j + 2 * m) * (j + 2 * m + 1)));
            fact *= Rational::from(BigInt::from((2 * m + 1) * (2 * m + 2)));
            wpow = self.mul(&wpow, &w2);
            debug_assert!(
                (m as usize) < MAX_SERIES_TERMS,
                "tail series failed to converge"
            );
        }
        acc
    }
}
