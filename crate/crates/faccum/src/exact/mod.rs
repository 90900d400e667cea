//! Exact combinatorial primitives: partitions, Stirling and Bernoulli
//! numbers, power-sum polynomials, and big-rational helpers.
//!
//! Re-exports the working set so callers can write `exact::stirling2(5, 3)`
//! without digging through submodules.

pub mod bernoulli;
pub mod partition;
pub mod poly;
pub mod powersum;
pub mod ratio;
pub mod stirling;

pub use bernoulli::{bernoulli, bernoulli_seq};
pub use partition::{enumerate_partitions, h_weight, partition_coefficient, Partition, PartitionError};
pub use poly::Poly;
pub use powersum::{power_sum_coeffs, power_sum_poly};
pub use ratio::{
    binomial, binomial_int, factorial, falling_factorial, falling_factorial_int,
    falling_factorial_ratio, ln_rational, multinomial, pow_ratio, rational_to_f64,
    rising_factorial, Rational,
};
pub use stirling::{stirling1_row, stirling1_signed, stirling2, stirling2_row};
