//! Exact verifier for a vanishing identity on partition-weighted sums.
//!
//! For a partition `pi` of `J` with multiplicities `m_i`, write `D_pi` for
//! the cumulant partition coefficient and `H_pi(s) = sum_i i^s m_i`. The
//! identity states that
//!
//! ```text
//! sum_{pi of J} D_pi * prod_{i=1}^{I} H_pi(s_i)  =  0
//! ```
//!
//! whenever `J >= 2`, `I >= 1`, every `s_i >= 1`, and
//! `s_1 + ... + s_I <= J + I - 2`. The bound is sharp: one step past it, at
//! `sum s_i = J + I - 1`, nonzero values appear, and for `I = 1` the sum
//! there equals `J! * S2(s_1, J)` (the Stirling number of the second kind),
//! which [`stanley_check`] verifies against an independent evaluation.
//!
//! Everything in this module is exact rational arithmetic; sweep functions
//! return reports instead of panicking so callers can decide what to assert.

use crate::exact::{
    enumerate_partitions, factorial, h_weight, partition_coefficient, stirling2, Rational,
};
use num_bigint::BigInt;
use num_traits::Zero;
use serde::Serialize;
use thiserror::Error;

#[derive(Debug, Error, PartialEq, Eq)]
pub enum IdentityError {
    #[error("J must be at least 2, got {0}")]
    WeightTooSmall(u64),
    #[error("the exponent list must be non-empty")]
    NoExponents,
    #[error("exponents must be positive")]
    ZeroExponent,
}

/// One instance of the identity: a weight `J >= 2` and exponents
/// `s_1, ..., s_I` with `I >= 1`, `s_i >= 1`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct IdentityInstance {
    j: u64,
    s: Vec<u32>,
}

impl IdentityInstance {
    pub fn new(j: u64, s: Vec<u32>) -> Result<Self, IdentityError> {
        if j < 2 {
            return Err(IdentityError::WeightTooSmall(j));
        }
        if s.is_empty() {
            return Err(IdentityError::NoExponents);
        }
        if s.contains(&0) {
            return Err(IdentityError::ZeroExponent);
        }
        Ok(IdentityInstance { j, s })
    }

    pub fn weight(&self) -> u64 {
        self.j
    }

    pub fn exponents(&self) -> &[u32] {
        &self.s
    }

    /// True when the instance satisfies `sum s_i <= J + I - 2`, the region
    /// where the sum provably vanishes.
    pub fn in_vanishing_region(&self) -> bool {
        let total: u64 = self.s.iter().map(|&v| v as u64).sum();
        total <= self.j + self.s.len() as u64 - 2
    }
}

/// Evaluates `sum_pi D_pi prod_i H_pi(s_i)` exactly.
pub fn identity_sum(inst: &IdentityInstance) -> Rational {
    let mut total = Rational::zero();
    for part in enumerate_partitions(inst.j).expect("J >= 2") {
        let mut h_prod = BigInt::from(1);
        for &s in &inst.s {
            h_prod *= h_weight(&part, s);
        }
        total += partition_coefficient(&part) * Rational::from(h_prod);
    }
    total
}

/// One evaluated case in a sweep report. The value is kept as exact
/// numerator/denominator strings so reports serialize without loss.
#[derive(Debug, Clone, Serialize)]
pub struct IdentityCase {
    #[serde(rename = "J")]
    pub j: u64,
    #[serde(rename = "I")]
    pub i: u64,
    pub s: Vec<u32>,
    pub value_numerator: String,
    pub value_denominator: String,
    pub in_vanishing_region: bool,
}

impl IdentityCase {
    fn from_instance(inst: &IdentityInstance, value: &Rational) -> Self {
        IdentityCase {
            j: inst.weight(),
            i: inst.exponents().len() as u64,
            s: inst.exponents().to_vec(),
            value_numerator: value.numer().to_string(),
            value_denominator: value.denom().to_string(),
            in_vanishing_region: inst.in_vanishing_region(),
        }
    }
}

#[derive(Debug, Serialize)]
pub struct VanishingReport {
    pub j_max: u64,
    pub i_max: u64,
    pub cases_checked: u64,
    /// Cases inside the vanishing region whose sum was not zero. Expected
    /// empty; returned rather than asserted so callers control failure.
    pub violations: Vec<IdentityCase>,
}

#[derive(Debug, Serialize)]
pub struct BoundaryReport {
    pub j_max: u64,
    pub i_max: u64,
    /// Every case on the boundary `sum s_i = J + I - 1`, with its value.
    pub cases: Vec<IdentityCase>,
    /// `(J, I)` pairs whose boundary produced no nonzero value at all.
    /// Expected empty: that is the sharpness evidence.
    pub missing_nonzero: Vec<(u64, u64)>,
}

/// Non-decreasing exponent lists of length `len` with entries `>= min` and
/// sum in `lo..=hi`. By symmetry of the product over `s_i`, enumerating
/// multisets instead of all orderings loses nothing.
fn multisets(len: usize, min: u32, lo: u64, hi: u64, prefix: &mut Vec<u32>, out: &mut Vec<Vec<u32>>) {
    if len == 0 {
        let total: u64 = prefix.iter().map(|&v| v as u64).sum();
        if total >= lo && total <= hi {
            out.push(prefix.clone());
        }
        return;
    }
    let used: u64 = prefix.iter().map(|&v| v as u64).sum();
    // Remaining slots must each hold at least `min`, so stop once even the
    // smallest completion overshoots.
    let mut v = min;
    while used + (v as u64) + (len as u64 - 1) * (min as u64).max(1) <= hi {
        prefix.push(v);
        multisets(len - 1, v, lo, hi, prefix, out);
        prefix.pop();
        v += 1;
    }
}

fn exponent_multisets(i: usize, lo: u64, hi: u64) -> Vec<Vec<u32>> {
    let mut out = Vec::new();
    let mut prefix = Vec::new();
    multisets(i, 1, lo, hi, &mut prefix, &mut out);
    out
}

/// Sweeps every `J <= j_max`, `I <= i_max`, and exponent multiset with
/// `sum s_i <= J + I - 2`, recording any case whose sum is nonzero.
pub fn verify_vanishing_region(j_max: u64, i_max: u64) -> VanishingReport {
    assert!(j_max >= 2 && i_max >= 1);
    let mut checked = 0;
    let mut violations = Vec::new();
    for j in 2..=j_max {
        for i in 1..=i_max {
            let hi = j + i - 2;
            for s in exponent_multisets(i as usize, i, hi) {
                let inst = IdentityInstance::new(j, s).expect("sweep emits valid instances");
                let value = identity_sum(&inst);
                checked += 1;
                if !value.is_zero() {
                    violations.push(IdentityCase::from_instance(&inst, &value));
                }
            }
        }
    }
    VanishingReport {
        j_max,
        i_max,
        cases_checked: checked,
        violations,
    }
}

/// Sweeps the sharp boundary `sum s_i = J + I - 1` for every `J <= j_max`,
/// `I <= i_max`, recording all values and the `(J, I)` pairs (if any) where
/// every boundary case vanished.
pub fn verify_boundary_nonvanishing(j_max: u64, i_max: u64) -> BoundaryReport {
    assert!(j_max >= 2 && i_max >= 1);
    let mut cases = Vec::new();
    let mut missing = Vec::new();
    for j in 2..=j_max {
        for i in 1..=i_max {
            let target = j + i - 1;
            let mut saw_nonzero = false;
            for s in exponent_multisets(i as usize, target, target) {
                let inst = IdentityInstance::new(j, s).expect("sweep emits valid instances");
                let value = identity_sum(&inst);
                saw_nonzero |= !value.is_zero();
                cases.push(IdentityCase::from_instance(&inst, &value));
            }
            if !saw_nonzero {
                missing.push((j, i));
            }
        }
    }
    BoundaryReport {
        j_max,
        i_max,
        cases,
        missing_nonzero: missing,
    }
}

/// Returns `(identity_sum(J, (s1)), J! * S2(s1, J))`. The two are equal for
/// every `J >= 2`, `s1 >= 1`: zero for `s1 < J`, positive from `s1 = J` on.
pub fn stanley_check(j: u64, s1: u32) -> (Rational, Rational) {
    assert!(j >= 2 && s1 >= 1, "stanley_check needs J >= 2 and s1 >= 1");
    let inst = IdentityInstance::new(j, vec![s1]).expect("arguments were just checked");
    let lhs = identity_sum(&inst);
    let rhs = Rational::from(factorial(j) * stirling2(s1 as u64, j));
    (lhs, rhs)
}

#[cfg(test)]
mod tests {
    use super::*;
    use num_bigint::BigInt;
    use proptest::prelude::*;

    fn value(j: u64, s: &[u32]) -> Rational {
        identity_sum(&IdentityInstance::new(j, s.to_vec()).unwrap())
    }

    #[test]
    fn worked_examples() {
        // J=3, s=(2): inside the region, 1*9 - 3*5 + 2*3 = 0.
        assert!(value(3, &[2]).is_zero());
        // J=3, s=(3): on the boundary, equals 3! * S2(3,3) = 6.
        assert_eq!(value(3, &[3]), Rational::from(BigInt::from(6)));
        // J=2, s=(1,1,1): every H is J, and the bare coefficients cancel.
        assert!(value(2, &[1, 1, 1]).is_zero());
    }

    #[test]
    fn instance_validation() {
        assert_eq!(
            IdentityInstance::new(1, vec![1]),
            Err(IdentityError::WeightTooSmall(1))
        );
        assert_eq!(IdentityInstance::new(3, vec![]), Err(IdentityError::NoExponents));
        assert_eq!(
            IdentityInstance::new(3, vec![2, 0]),
            Err(IdentityError::ZeroExponent)
        );
        let inst = IdentityInstance::new(4, vec![2, 1]).unwrap();
        assert!(inst.in_vanishing_region()); // 3 <= 4 + 2 - 2
        let inst = IdentityInstance::new(4, vec![2, 3]).unwrap();
        assert!(!inst.in_vanishing_region()); // 5 > 4
    }

    #[test]
    fn vanishing_sweeps_are_clean() {
        for (j_max, i_max) in [(6, 3), (2, 4), (10, 2)] {
            let report = verify_vanishing_region(j_max, i_max);
            assert!(report.cases_checked > 0, "({j_max},{i_max})");
            assert!(
                report.violations.is_empty(),
                "({j_max},{i_max}): {:?}",
                report.violations
            );
        }
    }

    #[test]
    fn vanishing_sweep_counts_forced_cases() {
        // J=2 leaves sum s_i <= I, so s_i = 1 everywhere: one multiset per I.
        let report = verify_vanishing_region(2, 4);
        assert_eq!(report.cases_checked, 4);
    }

    #[test]
    fn boundary_has_nonzero_witnesses() {
        let report = verify_boundary_nonvanishing(6, 2);
        assert!(report.missing_nonzero.is_empty(), "{:?}", report.missing_nonzero);
        for case in &report.cases {
            assert!(!case.in_vanishing_region);
        }
        // The I=1 boundary cases are J! * S2(J, J) = J!.
        let (lhs, rhs) = stanley_check(4, 4);
        assert_eq!(lhs, Rational::from(BigInt::from(24)));
        assert_eq!(lhs, rhs);
        // A specific two-exponent boundary case is nonzero.
        assert!(!value(4, &[2, 3]).is_zero());
    }

    #[test]
    fn stanley_equality_holds_broadly() {
        for j in 2..=8 {
            for s1 in 1..=12 {
                let (lhs, rhs) = stanley_check(j, s1);
                assert_eq!(lhs, rhs, "J={j}, s1={s1}");
                if (s1 as u64) < j {
                    assert!(lhs.is_zero(), "J={j}, s1={s1}");
                }
            }
        }
        assert_eq!(stanley_check(5, 3), (Rational::zero(), Rational::zero()));
        let (lhs, _) = stanley_check(3, 4);
        assert_eq!(lhs, Rational::from(BigInt::from(36)));
        let (lhs, _) = stanley_check(2, 2);
        assert_eq!(lhs, Rational::from(BigInt::from(2)));
    }

    #[test]
    fn report_serializes_with_flat_keys() {
        let report = verify_boundary_nonvanishing(3, 1);
        let text = serde_json::to_string(&report).unwrap();
        assert!(text.contains("\"J\":3"));
        assert!(text.contains("value_numerator"));
        assert!(text.contains("in_vanishing_region"));
    }

    proptest! {
        #[test]
        fn permutation_symmetry(
            j in 2u64..=8,
            s in prop::collection::vec(1u32..=6, 1..=3),
            seed in any::<u64>(),
        ) {
            let base = value(j, &s);
            let mut shuffled = s.clone();
            // Cheap deterministic shuffle driven by the seed.
            let mut state = seed | 1;
            for idx in (1..shuffled.len()).rev() {
                state = state.wrapping_mul(6364136223846793005).wrapping_add(1442695040888963407);
                let pick = (state >> 33) as usize % (idx + 1);
                shuffled.swap(idx, pick);
            }
            prop_assert_eq!(value(j, &shuffled), base);
        }

        #[test]
        fn appending_unit_exponent_scales_by_weight(
            j in 2u64..=8,
            s in prop::collection::vec(1u32..=5, 1..=2),
        ) {
            // H_pi(1) = J for every partition, so one more s = 1 factor
            // multiplies the whole sum by J.
            let base = value(j, &s);
            let mut extended = s.clone();
            extended.push(1);
            prop_assert_eq!(value(j, &extended), base * Rational::from(BigInt::from(j)));
        }
    }
}
