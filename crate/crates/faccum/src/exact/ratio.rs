//! Arbitrary-precision rational scalars and small combinatorial helpers.

use num_bigint::{BigInt, Sign};
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};

/// The exact scalar used throughout the crate.
pub type Rational = BigRational;

/// `n!` as a big integer.
pub fn factorial(n: u64) -> BigInt {
    let mut acc = BigInt::one();
    for k in 2..=n {
        acc *= k;
    }
    acc
}

/// Falling factorial `(x)_k = x (x-1) ... (x-k+1)` over the rationals.
///
/// `(x)_0 = 1`. Negative and non-integer `x` are fine; for integer `x` with
/// `0 <= x < k` the product contains the factor zero and the result is 0.
pub fn falling_factorial(x: &Rational, k: u64) -> Rational {
    let mut acc = Rational::one();
    let mut term = x.clone();
    for _ in 0..k {
        acc *= &term;
        term -= Rational::one();
    }
    acc
}

/// Rising factorial `x^(k) = x (x+1) ... (x+k-1)` over the rationals.
pub fn rising_factorial(x: &Rational, k: u64) -> Rational {
    let mut acc = Rational::one();
    let mut term = x.clone();
    for _ in 0..k {
        acc *= &term;
        term += Rational::one();
    }
    acc
}

/// Integer falling factorial `(n)_k` for `n` a big integer.
pub fn falling_factorial_int(n: &BigInt, k: u64) -> BigInt {
    let mut acc = BigInt::one();
    let mut term = n.clone();
    for _ in 0..k {
        if term.is_zero() {
            return BigInt::zero();
        }
        acc *= &term;
        term -= 1;
    }
    acc
}

/// Binomial coefficient `C(n, k)` for big-integer `n >= 0`; zero when `k > n`.
pub fn binomial_int(n: &BigInt, k: u64) -> BigInt {
    if n.sign() == Sign::Minus {
        panic!("binomial_int expects n >= 0, got {n}");
    }
    if BigInt::from(k) > *n {
        return BigInt::zero();
    }
    // Symmetry keeps the product short when k is near n.
    let k = match (n - k).to_u64() {
        Some(rest) if rest < k => rest,
        _ => k,
    };
    falling_factorial_int(n, k) / factorial(k)
}

/// Binomial coefficient for machine-sized arguments.
pub fn binomial(n: u64, k: u64) -> BigInt {
    binomial_int(&BigInt::from(n), k)
}

/// Multinomial coefficient `(sum m_i)! / prod m_i!`.
pub fn multinomial(parts: &[u64]) -> BigInt {
    let total: u64 = parts.iter().sum();
    let mut acc = factorial(total);
    for &m in parts {
        acc /= factorial(m);
    }
    acc
}

/// Falling-factorial ratio `T(m, t) = (t)_m / t^m = prod_{k=1}^{m-1} (1 - k/t)`.
///
/// Empty product (`m <= 1`) is 1. `t` may be any nonzero rational, including
/// negative values, where the product becomes `prod (1 + k/|t|)`.
pub fn falling_factorial_ratio(m: u64, t: &Rational) -> Rational {
    assert!(!t.is_zero(), "falling_factorial_ratio needs t != 0");
    let mut acc = Rational::one();
    for k in 1..m {
        acc *= Rational::one() - Rational::from_integer(BigInt::from(k)) / t;
    }
    acc
}

/// `x^e` for integer exponents of either sign (`0^0 = 1`; zero base with a
/// negative exponent panics).
pub fn pow_ratio(x: &Rational, e: i64) -> Rational {
    if e == 0 {
        return Rational::one();
    }
    if x.is_zero() {
        if e < 0 {
            panic!("pow_ratio: zero base with negative exponent");
        }
        return Rational::zero();
    }
    debug_assert!(e.unsigned_abs() <= i32::MAX as u64);
    x.pow(e as i32)
}

/// Lossless-as-possible conversion of a big rational to `f64`.
///
/// Values whose numerator or denominator exceed the `f64` exponent range are
/// rescaled by a common power of two first, so e.g. ratios of two thousand-digit
/// integers still convert to their correctly rounded quotient instead of
/// `inf/inf -> NaN`.
pub fn rational_to_f64(x: &Rational) -> f64 {
    if x.is_zero() {
        return 0.0;
    }
    let num = x.numer();
    let den = x.denom();
    let nb = num.bits() as i64;
    let db = den.bits() as i64;
    // Keep ~96 high bits of each side; the quotient then rounds within f64.
    let shift_n = (nb - 96).max(0);
    let shift_d = (db - 96).max(0);
    let top_n = (num >> shift_n as u64).to_f64().unwrap_or(f64::NAN);
    let top_d = (den >> shift_d as u64).to_f64().unwrap_or(f64::NAN);
    let expo = shift_n - shift_d;
    (top_n / top_d) * libm::exp2(expo as f64)
}

/// Natural logarithm of a positive big rational, as `f64`.
///
/// Works for magnitudes far outside the `f64` range. Panics on `x <= 0`.
pub fn ln_rational(x: &Rational) -> f64 {
    assert!(x.is_positive(), "ln_rational needs x > 0, got {x}");
    ln_bigint_abs(x.numer()) - ln_bigint_abs(x.denom())
}

fn ln_bigint_abs(n: &BigInt) -> f64 {
    let bits = n.bits();
    if bits <= 64 {
        return (n.abs().to_f64().unwrap()).ln();
    }
    // n = m * 2^shift with m holding the top 64 bits.
    let shift = bits - 64;
    let m = (n.abs() >> shift).to_f64().unwrap();
    m.ln() + (shift as f64) * std::f64::consts::LN_2
}
