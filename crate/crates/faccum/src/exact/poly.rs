//! Dense univariate polynomials over the exact rationals.
//!
//! Just enough structure for the decomposition tables: evaluation, linear
//! combination, and substitution of an affine argument.

use num_traits::Zero;

use super::ratio::{binomial, pow_ratio, Rational};

/// Polynomial with `coeffs[k]` multiplying `x^k`. Trailing zeros are trimmed
/// so `degree` is well defined; the zero polynomial has an empty vector.
#[derive(Debug, Clone, PartialEq, Eq, Default)]
pub struct Poly {
    coeffs: Vec<Rational>,
}

impl Poly {
    pub fn zero() -> Self {
        Poly { coeffs: Vec::new() }
    }

    pub fn from_coeffs(mut coeffs: Vec<Rational>) -> Self {
        while coeffs.last().is_some_and(|c| c.is_zero()) {
            coeffs.pop();
        }
        Poly { coeffs }
    }

    /// `c * x^degree`.
    pub fn monomial(c: Rational, degree: usize) -> Self {
        if c.is_zero() {
            return Poly::zero();
        }
        let mut coeffs = vec![Rational::zero(); degree + 1];
        coeffs[degree] = c;
        Poly { coeffs }
    }

    pub fn coeffs(&self) -> &[Rational] {
        &self.coeffs
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    /// Degree of the zero polynomial is reported as 0.
    pub fn degree(&self) -> usize {
        self.coeffs.len().saturating_sub(1)
    }

    pub fn eval(&self, x: &Rational) -> Rational {
        let mut acc = Rational::zero();
        for c in self.coeffs.iter().rev() {
            acc = acc * x + c;
        }
        acc
    }

    pub fn add_assign_scaled(&mut self, other: &Poly, scale: &Rational) {
        if scale.is_zero() || other.is_zero() {
            return;
        }
        if self.coeffs.len() < other.coeffs.len() {
            self.coeffs.resize(other.coeffs.len(), Rational::zero());
        }
        for (lhs, rhs) in self.coeffs.iter_mut().zip(&other.coeffs) {
            *lhs += rhs * scale;
        }
        while self.coeffs.last().is_some_and(|c| c.is_zero()) {
            self.coeffs.pop();
        }
    }

    /// Substitutes `x -> a x + b`, expanding binomially.
    pub fn compose_affine(&self, a: &Rational, b: &Rational) -> Poly {
        let mut out = vec![Rational::zero(); self.coeffs.len()];
        for (k, c) in self.coeffs.iter().enumerate() {
            if c.is_zero() {
                continue;
            }
            for (l, slot) in out.iter_mut().enumerate().take(k + 1) {
                let coef = Rational::from_integer(binomial(k as u64, l as u64))
                    * pow_ratio(a, l as i64)
                    * pow_ratio(b, (k - l) as i64)
                    * c;
                *slot += coef;
            }
        }
        Poly::from_coeffs(out)
    }
}
