//! Integer partitions in multiplicity form, their signed coefficients, and
//! power-sum weights.
//!
//! A partition of `J` is stored as the vector `(m_1, ..., m_J)` where `m_i`
//! counts the parts equal to `i`, so `sum i * m_i = J`. Two derived
//! quantities drive the rest of the crate:
//!
//! * the signed coefficient `D` attached to each partition when a cumulant
//!   of order `J` is expanded over products of raw moments, and
//! * the weight `H(s) = sum_i i^s m_i`, whose products appear in the
//!   vanishing sums checked by the `identity` module.

use num_bigint::BigInt;
use num_traits::Zero;
use thiserror::Error;

use super::ratio::{factorial, multinomial, Rational};

/// Problems constructing a [`Partition`] by hand.
#[derive(Debug, Error, PartialEq, Eq)]
pub enum PartitionError {
    #[error("partition weight must be at least 1")]
    ZeroWeight,
    #[error("multiplicity vector has length {got}, expected the weight {expected}")]
    LengthMismatch { expected: usize, got: usize },
    #[error("multiplicities encode weight {computed}, declared weight is {declared}")]
    WeightMismatch { declared: u64, computed: u64 },
}

/// A partition of a positive integer, canonically represented by part
/// multiplicities: `multiplicity[i]` counts the parts equal to `i + 1`.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Partition {
    multiplicities: Vec<u64>,
}

impl Partition {
    /// Builds a partition from its multiplicity vector `(m_1, ..., m_J)`.
    ///
    /// The vector must have length `J = sum i * m_i`, i.e. be padded with
    /// trailing zeros up to the weight.
    pub fn new(multiplicities: Vec<u64>) -> Result<Self, PartitionError> {
        if multiplicities.is_empty() {
            return Err(PartitionError::ZeroWeight);
        }
        let weight: u64 = multiplicities
            .iter()
            .enumerate()
            .map(|(idx, &m)| (idx as u64 + 1) * m)
            .sum();
        if weight == 0 {
            return Err(PartitionError::ZeroWeight);
        }
        if multiplicities.len() != weight as usize {
            return Err(PartitionError::LengthMismatch {
                expected: weight as usize,
                got: multiplicities.len(),
            });
        }
        Ok(Partition { multiplicities })
    }

    fn from_parts(parts: &[u64], weight: u64) -> Self {
        let mut multiplicities = vec![0u64; weight as usize];
        for &p in parts {
            multiplicities[p as usize - 1] += 1;
        }
        Partition { multiplicities }
    }

    /// The multiplicity vector `(m_1, ..., m_J)`.
    pub fn multiplicities(&self) -> &[u64] {
        &self.multiplicities
    }

    /// The partitioned integer `J = sum i * m_i`.
    pub fn weight(&self) -> u64 {
        self.multiplicities.len() as u64
    }

    /// The number of parts `sum m_i`.
    pub fn part_count(&self) -> u64 {
        self.multiplicities.iter().sum()
    }

    /// Parts in non-increasing order, e.g. `[3, 1, 1]`.
    pub fn parts(&self) -> Vec<u64> {
        let mut out = Vec::with_capacity(self.part_count() as usize);
        for (idx, &m) in self.multiplicities.iter().enumerate().rev() {
            for _ in 0..m {
                out.push(idx as u64 + 1);
            }
        }
        out
    }
}

/// All partitions of `J`, ordered by descending lexicographic part lists:
/// for `J = 4` this yields `[4]`, `[3,1]`, `[2,2]`, `[2,1,1]`, `[1,1,1,1]`.
///
/// `J = 0` is a domain error rather than an empty enumeration.
pub fn enumerate_partitions(j: u64) -> Result<Vec<Partition>, PartitionError> {
    if j == 0 {
        return Err(PartitionError::ZeroWeight);
    }
    let mut out = Vec::new();
    let mut stack: Vec<u64> = Vec::new();
    descend(j, j, &mut stack, j, &mut out);
    Ok(out)
}

fn descend(remaining: u64, max_part: u64, stack: &mut Vec<u64>, weight: u64, out: &mut Vec<Partition>) {
    if remaining == 0 {
        out.push(Partition::from_parts(stack, weight));
        return;
    }
    let mut part = remaining.min(max_part);
    while part >= 1 {
        stack.push(part);
        descend(remaining - part, part, stack, weight, out);
        stack.pop();
        part -= 1;
    }
}

/// The signed rational coefficient carried by a partition in the expansion of
/// an order-`J` cumulant over products of raw moments:
///
/// ```text
/// D = (-1)^(M-1) * J! / (prod_i (i!)^(m_i) * M) * M! / (prod_i m_i!)
/// ```
///
/// with `M = sum m_i` the number of parts. Summed over all partitions of any
/// `J >= 2` these coefficients cancel to zero, which is the seed of the
/// identities verified in the `identity` module.
pub fn partition_coefficient(partition: &Partition) -> Rational {
    let m_total = partition.part_count();
    let mut numer = factorial(partition.weight()) * multinomial(partition.multiplicities());
    let mut denom = BigInt::from(m_total);
    for (idx, &m) in partition.multiplicities().iter().enumerate() {
        if m > 0 {
            denom *= factorial(idx as u64 + 1).pow(m as u32);
        }
    }
    if (m_total - 1) % 2 == 1 {
        numer = -numer;
    }
    Rational::new(numer, denom)
}

/// The power-sum weight `H(s) = sum_i i^s m_i`.
///
/// `H(0)` counts the parts and `H(1)` recovers the partitioned integer.
pub fn h_weight(partition: &Partition, s: u32) -> BigInt {
    let mut acc = BigInt::zero();
    for (idx, &m) in partition.multiplicities().iter().enumerate() {
        if m > 0 {
            acc += BigInt::from(idx as u64 + 1).pow(s) * m;
        }
    }
    acc
}
