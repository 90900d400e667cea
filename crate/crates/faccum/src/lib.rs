//! Exact and numerical tools around factorial cumulants of counting statistics.
//!
//! The crate is organized bottom-up:
//!
//! * [`exact`] - integer partitions with multiplicity bookkeeping, Stirling
//!   numbers, Bernoulli numbers, power-sum polynomials, and rational helpers.
//!   Everything here is arbitrary-precision and exact.
//! * [`bigfloat`] - a fixed-precision real-arithmetic context (default 320
//!   bits) with log-gamma, digamma, and inverse-power tail sums, used where
//!   scheme parameters make exact rationals unavailable.
//! * [`transforms`] - conversions between raw moments, cumulants, factorial
//!   moments, and factorial cumulants, each by two independent routes.
//! * [`identity`] - verifier for a family of vanishing weighted sums over
//!   partitions, including the sharp boundary where vanishing stops.
//! * [`schemes`] - a ten-family catalog of counting statistics with
//!   closed-form factorial moments, limit constants, and the
//!   `L_n^i * exp(sum_j Q_{j+1}(i)/(j n^j))` decomposition.
//! * [`diagnostics`] - standardized cumulants along an n-grid and trend
//!   reports for the conditions that drive asymptotic normality.
//! * [`simulate`] - reproducible Monte Carlo samplers for every catalog
//!   family plus empirical factorial moments, correlations, and a
//!   Kolmogorov-Smirnov distance to the normal limit.

pub mod bigfloat;
pub mod diagnostics;
pub mod exact;
pub mod identity;
pub mod schemes;
pub mod serde_util;
pub mod simulate;
pub mod transforms;
