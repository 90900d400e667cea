//! Exhaustive enumeration of the small conditioned occupancy laws, used as
//! an independent oracle for the closed-form factorial moments. Everything
//! here works directly from the joint cell-count weights, never from the
//! formulas under test.

// Each test binary pulls in what it needs; unused pieces are expected.
#![allow(dead_code)]

use faccum::exact::{binomial, factorial, multinomial, Rational};
use faccum::schemes::SchemeSpec;
use num_bigint::BigInt;
use num_traits::{One, Zero};

/// Which weight each composition of `n` into `N` cells carries.
#[derive(Clone, Copy, Debug)]
pub enum CellLaw {
    /// Every composition counts once.
    Indistinct,
    /// Multinomial weight `n! / prod x_i!`.
    Distinct,
    /// Product of per-cell subset counts `C(M, x_i)`.
    Coloured { m: u64 },
    /// Rooted-forest weight `n! prod (x_i + 1)^(x_i - 1) / x_i!`.
    Forest,
}

/// All vectors of `cells` nonnegative integers summing to `n`.
pub fn compositions(n: u64, cells: u64) -> Vec<Vec<u64>> {
    fn rec(remaining: u64, slots: u64, prefix: &mut Vec<u64>, out: &mut Vec<Vec<u64>>) {
        if slots == 1 {
            prefix.push(remaining);
            out.push(prefix.clone());
            prefix.pop();
            return;
        }
        for v in 0..=remaining {
            prefix.push(v);
            rec(remaining - v, slots - 1, prefix, out);
            prefix.pop();
        }
    }
    assert!(cells >= 1);
    let mut out = Vec::new();
    rec(n, cells, &mut Vec::new(), &mut out);
    out
}

/// Unnormalized weight of one composition under the law.
pub fn weight(law: CellLaw, x: &[u64]) -> BigInt {
    match law {
        CellLaw::Indistinct => BigInt::one(),
        CellLaw::Distinct => multinomial(x),
        CellLaw::Coloured { m } => {
            let mut w = BigInt::one();
            for &v in x {
                w *= binomial(m, v);
            }
            w
        }
        CellLaw::Forest => {
            // n! prod (x+1)^(x-1) / x!; the x = 0 factor is (1)^(-1) = 1.
            let n: u64 = x.iter().sum();
            let mut num = factorial(n);
            let mut den = BigInt::one();
            for &v in x {
                if v >= 1 {
                    num *= BigInt::from(v + 1).pow(u32::try_from(v - 1).unwrap());
                }
                den *= factorial(v);
            }
            let q = &num / &den;
            assert_eq!(&q * den, num, "forest weights are integers");
            q
        }
    }
}

/// Closed-form total mass, asserted independently of the summation so the
/// oracle itself is cross-checked: stars and bars, `N^n`, Vandermonde, and
/// the forest count `N (N + n)^(n-1)`.
pub fn expected_total(law: CellLaw, n: u64, cells: u64) -> BigInt {
    match law {
        CellLaw::Indistinct => binomial(n + cells - 1, n),
        CellLaw::Distinct => BigInt::from(cells).pow(u32::try_from(n).unwrap()),
        CellLaw::Coloured { m } => binomial(cells * m, n),
        CellLaw::Forest => {
            BigInt::from(cells) * BigInt::from(cells + n).pow(u32::try_from(n - 1).unwrap())
        }
    }
}

/// The occupancy statistic: cells holding exactly `r` items.
pub fn occupancy_stat(x: &[u64], r: u64) -> u64 {
    x.iter().filter(|&&v| v == r).count() as u64
}

/// `E (S_r)_k` by exhaustive enumeration, as an exact rational.
pub fn enumerated_factorial_moment(law: CellLaw, n: u64, cells: u64, r: u64, k: u64) -> Rational {
    let mut num = BigInt::zero();
    let mut total = BigInt::zero();
    for x in compositions(n, cells) {
        let w = weight(law, &x);
        let s = BigInt::from(occupancy_stat(&x, r));
        num += falling_int(&s, k) * &w;
        total += w;
    }
    assert_eq!(total, expected_total(law, n, cells), "total mass");
    Rational::new(num, total)
}

fn falling_int(s: &BigInt, k: u64) -> BigInt {
    let mut out = BigInt::one();
    for i in 0..k {
        out *= s - BigInt::from(i);
    }
    out
}

/// The law matching a scheme spec, with its `(n, N, r)` pulled out.
pub fn law_of(spec: &SchemeSpec) -> Option<(CellLaw, u64, u64, u64)> {
    match spec {
        SchemeSpec::GasIndistinct(p) => Some((CellLaw::Indistinct, p.n, p.big_n, p.r)),
        SchemeSpec::GasDistinct(p) => Some((CellLaw::Distinct, p.n, p.big_n, p.r)),
        SchemeSpec::GasColoured(p) => {
            Some((CellLaw::Coloured { m: p.big_m }, p.n, p.big_n, p.r))
        }
        SchemeSpec::GasForest(p) => Some((CellLaw::Forest, p.n, p.big_n, p.r)),
        _ => None,
    }
}
