//! Conversions among raw moments, cumulants, factorial moments, and
//! factorial cumulants, exact over rationals.
//!
//! Two structural maps generate everything here. The binomial recursion
//!
//! ```text
//! f_1 = x_1,   f_k = x_k - sum_{j=1}^{k-1} C(k-1, j-1) f_j x_{k-j}
//! ```
//!
//! extracts the connected part of a sequence: applied to raw moments it
//! yields cumulants, applied to factorial moments it yields factorial
//! cumulants. The Stirling sum `a_k = sum_j S2(k, j) x_j` changes basis from
//! falling powers to ordinary powers: it maps factorial moments to raw
//! moments and factorial cumulants to cumulants. Both maps are invertible,
//! which gives all twelve directed conversions between the four kinds.
//!
//! A third, independent route (`partition_cumulant`) computes a cumulant as
//! a weighted sum over integer partitions; it must agree with the recursion
//! exactly on every input, and tests enforce that.

use crate::exact::{
    binomial, enumerate_partitions, partition_coefficient, pow_ratio, stirling1_row,
    stirling2_row, Rational,
};
use num_traits::Zero;
use serde::{Deserialize, Serialize};
use thiserror::Error;

/// Which of the four related sequences a [`MomentSequence`] holds.
///
/// The order-0 term is implicitly 1 for the moment kinds and 0 for the
/// cumulant kinds; stored values start at order 1.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum MomentKind {
    Raw,
    Cumulant,
    Factorial,
    FactorialCumulant,
}

impl MomentKind {
    /// (falling basis?, connected?) coordinates of the kind.
    fn flags(self) -> (bool, bool) {
        match self {
            MomentKind::Raw => (false, false),
            MomentKind::Cumulant => (false, true),
            MomentKind::Factorial => (true, false),
            MomentKind::FactorialCumulant => (true, true),
        }
    }

    pub fn as_str(self) -> &'static str {
        match self {
            MomentKind::Raw => "raw",
            MomentKind::Cumulant => "cumulant",
            MomentKind::Factorial => "factorial",
            MomentKind::FactorialCumulant => "factorial-cumulant",
        }
    }
}

/// A finite prefix of moments of one kind; `values[k-1]` is the order-`k`
/// entry.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct MomentSequence {
    pub kind: MomentKind,
    #[serde(with = "crate::serde_util::rational_vec")]
    pub values: Vec<Rational>,
}

impl MomentSequence {
    pub fn new(kind: MomentKind, values: Vec<Rational>) -> Self {
        MomentSequence { kind, values }
    }

    pub fn order(&self) -> usize {
        self.values.len()
    }
}

#[derive(Debug, Error, PartialEq, Eq)]
pub enum TransformError {
    #[error("order {requested} requested but only {available} entries are available")]
    OrderOverflow { requested: usize, available: usize },
    #[error("expected a {expected} sequence, got {got}")]
    KindMismatch {
        expected: &'static str,
        got: &'static str,
    },
    #[error("moment sequence is empty")]
    Empty,
    #[error("orders start at 1")]
    ZeroOrder,
}

fn check_input(seq: &MomentSequence, order: usize) -> Result<(), TransformError> {
    if seq.values.is_empty() {
        return Err(TransformError::Empty);
    }
    if order == 0 {
        return Err(TransformError::ZeroOrder);
    }
    if order > seq.values.len() {
        return Err(TransformError::OrderOverflow {
            requested: order,
            available: seq.values.len(),
        });
    }
    Ok(())
}

fn check_kind(seq: &MomentSequence, expected: MomentKind) -> Result<(), TransformError> {
    if seq.kind != expected {
        return Err(TransformError::KindMismatch {
            expected: expected.as_str(),
            got: seq.kind.as_str(),
        });
    }
    Ok(())
}

// ---- the structural maps on bare sequences ----

/// The binomial recursion `f_k = x_k - sum_j C(k-1, j-1) f_j x_{k-j}`.
pub fn binomial_recursion(x: &[Rational]) -> Vec<Rational> {
    let mut f: Vec<Rational> = Vec::with_capacity(x.len());
    for k in 1..=x.len() {
        let mut v = x[k - 1].clone();
        for j in 1..k {
            let c = Rational::from(binomial(k as u64 - 1, j as u64 - 1));
            v -= c * &f[j - 1] * &x[k - j - 1];
        }
        f.push(v);
    }
    f
}

/// Inverse of [`binomial_recursion`]: `x_k = f_k + sum_j C(k-1, j-1) f_j x_{k-j}`.
pub fn binomial_recursion_inverse(f: &[Rational]) -> Vec<Rational> {
    let mut x: Vec<Rational> = Vec::with_capacity(f.len());
    for k in 1..=f.len() {
        let mut v = f[k - 1].clone();
        for j in 1..k {
            let c = Rational::from(binomial(k as u64 - 1, j as u64 - 1));
            v += c * &f[j - 1] * &x[k - j - 1];
        }
        x.push(v);
    }
    x
}

/// The Stirling change of basis `a_k = sum_j S2(k, j) x_j` (falling powers
/// to ordinary powers).
pub fn stirling_sum(x: &[Rational]) -> Vec<Rational> {
    (1..=x.len())
        .map(|k| {
            let row = stirling2_row(k as u64);
            let mut acc = Rational::zero();
            for j in 1..=k {
                acc += Rational::from(row[j].clone()) * &x[j - 1];
            }
            acc
        })
        .collect()
}

/// Inverse of [`stirling_sum`], using signed Stirling numbers of the first
/// kind: `x_k = sum_j s(k, j) a_j`.
pub fn stirling_sum_inverse(a: &[Rational]) -> Vec<Rational> {
    (1..=a.len())
        .map(|k| {
            let row = stirling1_row(k as u64);
            let mut acc = Rational::zero();
            for j in 1..=k {
                acc += Rational::from(row[j].clone()) * &a[j - 1];
            }
            acc
        })
        .collect()
}

/// Order-`j` connected part as a weighted sum over integer partitions:
/// `sum_pi D_pi prod_i x_i^{m_i}`, with the partition coefficient `D_pi`
/// from the exact module. Independent of [`binomial_recursion`] but must
/// agree with it on every input.
///
/// Panics if `x` has fewer than `j` entries.
pub fn partition_cumulant(x: &[Rational], j: u64) -> Rational {
    assert!(j >= 1, "orders start at 1");
    assert!(x.len() as u64 >= j, "need {j} entries, got {}", x.len());
    let mut total = Rational::zero();
    for part in enumerate_partitions(j).expect("j >= 1 was checked") {
        let mut term = partition_coefficient(&part);
        for (i, &m) in part.multiplicities().iter().enumerate() {
            if m > 0 {
                term *= pow_ratio(&x[i], m as i64);
            }
        }
        total += term;
    }
    total
}

// ---- named operations on typed sequences ----

/// Cumulants of orders `1..=k` from raw moments.
pub fn cumulants_from_moments(
    a: &MomentSequence,
    k: usize,
) -> Result<MomentSequence, TransformError> {
    check_kind(a, MomentKind::Raw)?;
    check_input(a, k)?;
    let mut vals = binomial_recursion(&a.values[..k]);
    vals.truncate(k);
    Ok(MomentSequence::new(MomentKind::Cumulant, vals))
}

/// Raw moments of orders `1..=k` from factorial moments.
pub fn moments_from_factorial(
    c: &MomentSequence,
    k: usize,
) -> Result<MomentSequence, TransformError> {
    check_kind(c, MomentKind::Factorial)?;
    check_input(c, k)?;
    let vals = stirling_sum(&c.values[..k]);
    Ok(MomentSequence::new(MomentKind::Raw, vals))
}

/// Factorial cumulants of orders `1..=k` from factorial moments.
pub fn factorial_cumulants(
    c: &MomentSequence,
    k: usize,
) -> Result<MomentSequence, TransformError> {
    check_kind(c, MomentKind::Factorial)?;
    check_input(c, k)?;
    let vals = binomial_recursion(&c.values[..k]);
    Ok(MomentSequence::new(MomentKind::FactorialCumulant, vals))
}

/// Order-`j` cumulant by the partition-sum route.
pub fn cumulants_via_partitions(
    a: &MomentSequence,
    j: usize,
) -> Result<Rational, TransformError> {
    check_input(a, j)?;
    Ok(partition_cumulant(&a.values, j as u64))
}

/// The order-`j` ordinary cumulant from the falling-basis side: factorial
/// cumulants are combined with a Stirling row, `b_j = sum_i S2(j, i) d_i`.
/// Accepts factorial moments (connected part is taken first) or factorial
/// cumulants directly.
pub fn cumulants_from_factorial_cumulants(
    d_or_c: &MomentSequence,
    j: usize,
) -> Result<Rational, TransformError> {
    check_input(d_or_c, j)?;
    let d = match d_or_c.kind {
        MomentKind::Factorial => binomial_recursion(&d_or_c.values[..j]),
        MomentKind::FactorialCumulant => d_or_c.values[..j].to_vec(),
        other => {
            return Err(TransformError::KindMismatch {
                expected: "factorial or factorial-cumulant",
                got: other.as_str(),
            })
        }
    };
    let row = stirling2_row(j as u64);
    let mut acc = Rational::zero();
    for (i, dv) in d.iter().enumerate() {
        acc += Rational::from(row[i + 1].clone()) * dv;
    }
    Ok(acc)
}

/// Converts a sequence to any of the four kinds, exactly. The output keeps
/// the input's length.
pub fn convert(seq: &MomentSequence, to: MomentKind) -> Result<MomentSequence, TransformError> {
    if seq.values.is_empty() {
        return Err(TransformError::Empty);
    }
    let (src_falling, src_connected) = seq.kind.flags();
    let (dst_falling, dst_connected) = to.flags();
    let mut vals = seq.values.clone();
    // Adjust connectedness in the source basis, then change basis; the two
    // orders commute and tests check that.
    if src_connected != dst_connected {
        vals = if dst_connected {
            binomial_recursion(&vals)
        } else {
            binomial_recursion_inverse(&vals)
        };
    }
    if src_falling != dst_falling {
        vals = if dst_falling {
            stirling_sum_inverse(&vals)
        } else {
            stirling_sum(&vals)
        };
    }
    Ok(MomentSequence::new(to, vals))
}

#[cfg(test)]
mod tests {
    use super::*;
    use num_bigint::BigInt;
    use proptest::prelude::*;

    fn rat(n: i64, d: i64) -> Rational {
        Rational::new(BigInt::from(n), BigInt::from(d))
    }

    fn ints(vals: &[i64]) -> Vec<Rational> {
        vals.iter().map(|&v| rat(v, 1)).collect()
    }

    fn seq(kind: MomentKind, values: Vec<Rational>) -> MomentSequence {
        MomentSequence::new(kind, values)
    }

    #[test]
    fn poisson_raw_moments_give_flat_cumulants() {
        // lambda = 2: raw moments 2, 6, 22 (Touchard), cumulants all 2.
        let a = seq(MomentKind::Raw, ints(&[2, 6, 22]));
        let b = cumulants_from_moments(&a, 3).unwrap();
        assert_eq!(b.values, ints(&[2, 2, 2]));
        assert_eq!(b.kind, MomentKind::Cumulant);
    }

    #[test]
    fn constant_variable_has_one_cumulant() {
        let a = seq(MomentKind::Raw, ints(&[1, 1, 1]));
        let b = cumulants_from_moments(&a, 3).unwrap();
        assert_eq!(b.values, ints(&[1, 0, 0]));
    }

    #[test]
    fn standard_normal_prefix_is_a_fixed_point() {
        let a = seq(MomentKind::Raw, ints(&[0, 1, 0]));
        let b = cumulants_from_moments(&a, 3).unwrap();
        assert_eq!(b.values, ints(&[0, 1, 0]));
    }

    #[test]
    fn factorial_to_raw_worked_examples() {
        // Poisson-shaped c_k = 3^k.
        let c = seq(MomentKind::Factorial, ints(&[3, 9, 27]));
        let mu = moments_from_factorial(&c, 3).unwrap();
        assert_eq!(mu.values, ints(&[3, 12, 57]));
        assert_eq!(mu.kind, MomentKind::Raw);

        // Constant 1.
        let c = seq(MomentKind::Factorial, ints(&[1, 0, 0]));
        assert_eq!(moments_from_factorial(&c, 3).unwrap().values, ints(&[1, 1, 1]));

        // Binomial(2, 1/2): factorial moments (n)_k p^k = 1, 1/2, 0; the raw
        // moments enumerate as (1/4)(0^k) + (1/2)(1^k) + (1/4)(2^k).
        let c = seq(
            MomentKind::Factorial,
            vec![rat(1, 1), rat(1, 2), rat(0, 1)],
        );
        let mu = moments_from_factorial(&c, 3).unwrap();
        assert_eq!(mu.values, vec![rat(1, 1), rat(3, 2), rat(5, 2)]);
    }

    #[test]
    fn poisson_factorial_cumulants_vanish_from_order_two() {
        for lambda in [rat(1, 3), rat(1, 1), rat(7, 2), rat(5, 1)] {
            let c: Vec<Rational> = (1..=10).map(|k| pow_ratio(&lambda, k)).collect();
            let d = factorial_cumulants(&seq(MomentKind::Factorial, c), 10).unwrap();
            assert_eq!(d.values[0], lambda);
            for (j, v) in d.values.iter().enumerate().skip(1) {
                assert!(v.is_zero(), "lambda = {lambda}, order {}", j + 1);
            }
        }
    }

    #[test]
    fn binomial_second_factorial_cumulant() {
        // Binomial(n, p): d_2 = n(n-1)p^2 - (np)^2 = -np^2; n=4, p=1/3 gives -4/9.
        let n = 4u64;
        let p = rat(1, 3);
        let c: Vec<Rational> = (1..=4)
            .map(|k| {
                Rational::from(crate::exact::falling_factorial_int(&BigInt::from(n), k))
                    * pow_ratio(&p, k as i64)
            })
            .collect();
        let d = factorial_cumulants(&seq(MomentKind::Factorial, c), 4).unwrap();
        assert_eq!(d.values[1], rat(-4, 9));
    }

    #[test]
    fn partition_route_worked_examples() {
        // Constant variable: everything past order 1 cancels.
        let a = seq(MomentKind::Raw, ints(&[1, 1, 1]));
        assert_eq!(cumulants_via_partitions(&a, 3).unwrap(), rat(0, 1));
        // Order 1 is the single partition with D = 1.
        let a = seq(MomentKind::Raw, vec![rat(5, 7)]);
        assert_eq!(cumulants_via_partitions(&a, 1).unwrap(), rat(5, 7));
    }

    #[test]
    fn variance_identity_at_order_two() {
        // b_2 = c_2 - c_1^2 + c_1 from factorial moments.
        let c = seq(MomentKind::Factorial, vec![rat(3, 2), rat(7, 3)]);
        let b2 = cumulants_from_factorial_cumulants(&c, 2).unwrap();
        let expect = rat(7, 3) - rat(9, 4) + rat(3, 2);
        assert_eq!(b2, expect);
    }

    #[test]
    fn poisson_cumulants_via_falling_basis() {
        let lambda = rat(5, 1);
        let c: Vec<Rational> = (1..=6).map(|k| pow_ratio(&lambda, k)).collect();
        let cs = seq(MomentKind::Factorial, c);
        for j in 1..=6 {
            assert_eq!(cumulants_from_factorial_cumulants(&cs, j).unwrap(), lambda);
        }
    }

    #[test]
    fn errors_are_reported() {
        let a = seq(MomentKind::Raw, ints(&[1, 2]));
        assert_eq!(
            cumulants_from_moments(&a, 3),
            Err(TransformError::OrderOverflow {
                requested: 3,
                available: 2
            })
        );
        let c = seq(MomentKind::Cumulant, ints(&[1]));
        assert!(matches!(
            moments_from_factorial(&c, 1),
            Err(TransformError::KindMismatch { .. })
        ));
        assert!(matches!(
            cumulants_from_factorial_cumulants(&c, 1),
            Err(TransformError::KindMismatch { .. })
        ));
        let empty = seq(MomentKind::Raw, vec![]);
        assert_eq!(convert(&empty, MomentKind::Raw), Err(TransformError::Empty));
    }

    fn arb_rational() -> impl Strategy<Value = Rational> {
        (any::<i32>(), 1..50u32).prop_map(|(n, d)| rat(n as i64, d as i64))
    }

    fn arb_values() -> impl Strategy<Value = Vec<Rational>> {
        prop::collection::vec(arb_rational(), 1..8)
    }

    proptest! {
        #[test]
        fn partition_route_matches_recursion(vals in arb_values()) {
            let rec = binomial_recursion(&vals);
            for j in 1..=vals.len() {
                prop_assert_eq!(
                    partition_cumulant(&vals, j as u64),
                    rec[j - 1].clone()
                );
            }
        }

        #[test]
        fn recursion_round_trips(vals in arb_values()) {
            prop_assert_eq!(binomial_recursion_inverse(&binomial_recursion(&vals)), vals.clone());
            prop_assert_eq!(binomial_recursion(&binomial_recursion_inverse(&vals)), vals);
        }

        #[test]
        fn stirling_round_trips(vals in arb_values()) {
            prop_assert_eq!(stirling_sum_inverse(&stirling_sum(&vals)), vals.clone());
            prop_assert_eq!(stirling_sum(&stirling_sum_inverse(&vals)), vals);
        }

        #[test]
        fn falling_and_power_routes_to_cumulants_agree(vals in arb_values()) {
            // b = g(f(c)) equals the recursion applied to g(c).
            let c = seq(MomentKind::Factorial, vals);
            let k = c.values.len();
            let mu = moments_from_factorial(&c, k).unwrap();
            let b_direct = cumulants_from_moments(&mu, k).unwrap();
            for j in 1..=k {
                prop_assert_eq!(
                    cumulants_from_factorial_cumulants(&c, j).unwrap(),
                    b_direct.values[j - 1].clone()
                );
            }
        }

        #[test]
        fn convert_reaches_every_kind_and_back(vals in arb_values()) {
            let kinds = [
                MomentKind::Raw,
                MomentKind::Cumulant,
                MomentKind::Factorial,
                MomentKind::FactorialCumulant,
            ];
            for from in kinds {
                let original = seq(from, vals.clone());
                for to in kinds {
                    let there = convert(&original, to).unwrap();
                    prop_assert_eq!(there.kind, to);
                    let back = convert(&there, from).unwrap();
                    prop_assert_eq!(&back, &original);
                }
                // Same-kind conversion is the identity.
                prop_assert_eq!(convert(&original, from).unwrap(), original);
            }
        }

        #[test]
        fn convert_routes_commute(vals in arb_values()) {
            // Basis change then connectedness change, against the opposite
            // order built from the raw maps.
            let via_power = stirling_sum(&binomial_recursion_inverse(&vals));
            let other = binomial_recursion_inverse(&stirling_sum(&vals));
            prop_assert_eq!(via_power, other);
        }

        #[test]
        fn first_entry_is_preserved_by_basis_change(vals in arb_values()) {
            prop_assert_eq!(stirling_sum(&vals)[0].clone(), vals[0].clone());
            prop_assert_eq!(stirling_sum_inverse(&vals)[0].clone(), vals[0].clone());
        }
    }

    #[test]
    fn moment_sequence_serde_round_trip() {
        let s = seq(MomentKind::FactorialCumulant, vec![rat(-3, 7), rat(2, 1)]);
        let text = serde_json::to_string(&s).unwrap();
        assert!(text.contains("factorial-cumulant"));
        let back: MomentSequence = serde_json::from_str(&text).unwrap();
        assert_eq!(back, s);
    }
}
