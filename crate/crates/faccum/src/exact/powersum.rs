//! Power-sum polynomials: the degree-`(j+1)` polynomial that agrees with
//! `sum_{k=1}^{M-1} k^j` at positive integers `M`.
//!
//! In Bernoulli form (first convention, `B_1 = -1/2`):
//!
//! ```text
//! Q_{j+1}(M) = 1/(j+1) * sum_{l=1}^{j+1} C(j+1, l) B_{j+1-l} M^l
//! ```
//!
//! Being a polynomial, it extends to every rational `M`, in particular the
//! negative arguments that arise when a falling-factorial ratio `T(m, t)` is
//! expanded at negative `t`. On positive integers it obeys the envelope
//! `|Q_{j+1}(m)| <= m^(j+1)`, the prototype for the polynomial growth bounds
//! used by the scheme decompositions.

use super::bernoulli::bernoulli_seq;
use super::poly::Poly;
use super::ratio::{binomial, Rational};
use num_bigint::BigInt;
use num_traits::{One, Zero};

/// Coefficients of `Q_{j+1}` (degree `j+1`).
pub fn power_sum_coeffs(j: u32) -> Poly {
    if j == 0 {
        // The Bernoulli form would give M, because the textbook sum starts at
        // k = 0 and 0^0 = 1. The defining sum here starts at k = 1, so the
        // count of terms is M - 1.
        return Poly::from_coeffs(vec![-Rational::one(), Rational::one()]);
    }
    let b = bernoulli_seq(j as u64);
    let mut coeffs = vec![Rational::zero(); j as usize + 2];
    let divisor = Rational::from_integer(BigInt::from(j + 1));
    for l in 1..=(j as u64 + 1) {
        let c = Rational::from_integer(binomial(j as u64 + 1, l)) * &b[(j as u64 + 1 - l) as usize];
        coeffs[l as usize] = c / &divisor;
    }
    Poly::from_coeffs(coeffs)
}

/// `Q_{j+1}(M)` for any rational `M`.
pub fn power_sum_poly(j: u32, m: &Rational) -> Rational {
    power_sum_coeffs(j).eval(m)
}
