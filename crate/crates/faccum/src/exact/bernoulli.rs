//! Bernoulli numbers, first convention (`B_1 = -1/2`).

use num_bigint::BigInt;
use num_traits::{One, Zero};

use super::ratio::{binomial, Rational};

/// `B_0, B_1, ..., B_max` by the defining recurrence
/// `sum_{j=0}^{m} C(m+1, j) B_j = 0` for `m >= 1`, `B_0 = 1`.
///
/// This recurrence fixes `B_1 = -1/2`; the power-sum polynomials in this
/// crate depend on that sign choice.
pub fn bernoulli_seq(max: u64) -> Vec<Rational> {
    let mut b = Vec::with_capacity(max as usize + 1);
    b.push(Rational::one());
    for m in 1..=max {
        let mut acc = Rational::zero();
        for (j, bj) in b.iter().enumerate() {
            acc += Rational::from_integer(binomial(m + 1, j as u64)) * bj;
        }
        let divisor = Rational::from_integer(BigInt::from(m + 1));
        b.push(-acc / divisor);
    }
    b
}

/// The single Bernoulli number `B_m`.
pub fn bernoulli(m: u64) -> Rational {
    bernoulli_seq(m).pop().unwrap()
}

#[cfg(test)]
mod tests {
    use super::*;

    fn rat(n: i64, d: i64) -> Rational {
        Rational::new(n.into(), d.into())
    }

    #[test]
    fn first_convention_values() {
        let b = bernoulli_seq(12);
        assert_eq!(b[0], rat(1, 1));
        assert_eq!(b[1], rat(-1, 2));
        assert_eq!(b[2], rat(1, 6));
        assert_eq!(b[3], rat(0, 1));
        assert_eq!(b[4], rat(-1, 30));
        assert_eq!(b[6], rat(1, 42));
        assert_eq!(b[8], rat(-1, 30));
        assert_eq!(b[10], rat(5, 66));
        assert_eq!(b[12], rat(-691, 2730));
    }

    #[test]
    fn odd_entries_above_one_vanish() {
        let b = bernoulli_seq(31);
        for m in (3..=31).step_by(2) {
            assert!(b[m].is_zero(), "B_{m} should vanish");
        }
    }
}
