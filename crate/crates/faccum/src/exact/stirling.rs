//! Stirling numbers of the second and (signed) first kind.

use num_bigint::BigInt;
use num_traits::{One, Zero};

/// `S(n, k)`, the number of ways to partition an `n`-set into `k` nonempty
/// blocks, via the triangle recurrence `S(n, k) = k S(n-1, k) + S(n-1, k-1)`.
///
/// Out-of-range arguments (`k > n`, or `k = 0` with `n > 0`) give 0;
/// `S(0, 0) = 1`.
pub fn stirling2(n: u64, k: u64) -> BigInt {
    if k > n {
        return BigInt::zero();
    }
    stirling2_row(n)[k as usize].clone()
}

/// The row `S(n, 0), S(n, 1), ..., S(n, n)`.
pub fn stirling2_row(n: u64) -> Vec<BigInt> {
    let mut row = vec![BigInt::one()]; // S(0, 0)
    for m in 1..=n {
        let mut next = vec![BigInt::zero(); m as usize + 1];
        for k in 1..=m as usize {
            let carried = if k < row.len() {
                &row[k] * k as u64
            } else {
                BigInt::zero()
            };
            next[k] = carried + &row[k - 1];
        }
        row = next;
    }
    row
}

/// Signed Stirling number of the first kind `s(n, k)`, the coefficient of
/// `y^k` in the falling factorial `(y)_n`.
///
/// These invert the second-kind triangle: `sum_j S(n, j) s(j, k)` is 1 when
/// `n = k` and 0 otherwise.
pub fn stirling1_signed(n: u64, k: u64) -> BigInt {
    if k > n {
        return BigInt::zero();
    }
    stirling1_row(n)[k as usize].clone()
}

/// The row `s(n, 0), s(n, 1), ..., s(n, n)` of signed first-kind numbers,
/// via `s(n, k) = s(n-1, k-1) - (n-1) s(n-1, k)`.
pub fn stirling1_row(n: u64) -> Vec<BigInt> {
    let mut row = vec![BigInt::one()]; // s(0, 0)
    for m in 1..=n {
        let mut next = vec![BigInt::zero(); m as usize + 1];
        for k in 1..=m as usize {
            let dropped = if k < row.len() {
                &row[k] * (m - 1)
            } else {
                BigInt::zero()
            };
            next[k] = &row[k - 1] - dropped;
        }
        row = next;
    }
    row
}
