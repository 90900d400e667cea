//! Limiting constants for the scaled mean and variance of `S` when the
//! coordinate count `N` grows with the sample size `n`.
//!
//! For the occupancy families the natural scaling is `N^{r-1}/n^r` applied to
//! both the mean and the variance of `S`; the ratio `N/n` tends to a limit
//! `lambda` in `(0, infinity]`. At `lambda = infinity` the variance constant
//! degenerates to zero for `r` in `{0, 1}` and the finer scaling `N/n^2`
//! takes over (reported here as `tilde_var_const`, evaluated along `N = n^2`).
//!
//! The inverse-sampling families scale as `1/n` instead and only admit finite
//! `lambda`; they also need the extra rate parameters carried by
//! [`LimitParams`] (`alpha` for the negative multinomial, where `N p -> alpha`,
//! and `a`, `beta` for the Dirichlet mixture, where `b / n -> beta`).

use super::{invalid, FamilyKind, SchemeError};

/// Limit of `N/n`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum Lambda {
    Finite(f64),
    Infinite,
}

/// Extra rate parameters some families need on top of `lambda`.
#[derive(Debug, Clone, Copy, Default)]
pub struct LimitParams {
    /// Limit of `N p` for the negative multinomial; must lie in `(0, 1)`.
    pub alpha: Option<f64>,
    /// Dirichlet per-colour weight `a > 0`.
    pub a: Option<f64>,
    /// Limit of `b/n` for the Dirichlet mixture; must be positive.
    pub beta: Option<f64>,
}

/// Scaled limits of mean and variance. `var_const` is absent exactly when the
/// leading-order variance vanishes (`lambda` infinite, `r` in `{0,1}`), in
/// which case `tilde_var_const` carries the `N/n^2` limit instead.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct AsymptoticConstants {
    pub mean_const: f64,
    pub var_const: Option<f64>,
    pub tilde_var_const: Option<f64>,
}

fn factorial_f64(r: u64) -> f64 {
    (1..=r).fold(1.0, |acc, v| acc * v as f64)
}

fn finite_lambda(kind: FamilyKind, lambda: Lambda) -> Result<f64, SchemeError> {
    match lambda {
        Lambda::Finite(l) if l > 0.0 && l.is_finite() => Ok(l),
        Lambda::Finite(_) => Err(invalid(kind.as_str(), "lambda must be positive")),
        Lambda::Infinite => Err(invalid(
            kind.as_str(),
            "only finite lambda limits are available for this family",
        )),
    }
}

fn occupancy_constants(
    kind: FamilyKind,
    r: u64,
    lambda: Lambda,
    mean_var: impl Fn(f64, f64) -> (f64, f64),
    infinite_mean: f64,
    tilde_pair: (f64, f64),
) -> Result<AsymptoticConstants, SchemeError> {
    let rf = r as f64;
    match lambda {
        Lambda::Finite(l) => {
            if !(l > 0.0 && l.is_finite()) {
                return Err(invalid(kind.as_str(), "lambda must be positive"));
            }
            let (mean, var) = mean_var(l, rf);
            Ok(AsymptoticConstants {
                mean_const: mean,
                var_const: Some(var),
                tilde_var_const: None,
            })
        }
        Lambda::Infinite => {
            if r >= 2 {
                // At infinite lambda the occupancy counts are asymptotically
                // Poisson and the variance constant collapses onto the mean.
                Ok(AsymptoticConstants {
                    mean_const: infinite_mean,
                    var_const: Some(infinite_mean),
                    tilde_var_const: None,
                })
            } else {
                let tilde = if r == 0 { tilde_pair.0 } else { tilde_pair.1 };
                Ok(AsymptoticConstants {
                    mean_const: infinite_mean,
                    var_const: None,
                    tilde_var_const: Some(tilde),
                })
            }
        }
    }
}

/// Limiting constants for the given family at cell count `r`.
///
/// The four classical waiting/drawing families concentrate at scale `n`
/// without free parameters, so they are rejected here; diagnostics for them
/// go through the cumulant route directly.
pub fn asymptotic_constants(
    kind: FamilyKind,
    r: u64,
    lambda: Lambda,
    extra: &LimitParams,
) -> Result<AsymptoticConstants, SchemeError> {
    match kind {
        FamilyKind::Binomial
        | FamilyKind::NegBinomial
        | FamilyKind::Hypergeometric
        | FamilyKind::NegHypergeometric => Err(invalid(
            kind.as_str(),
            "no scaled occupancy limit; this family has no N parameter",
        )),
        FamilyKind::GasIndistinct => occupancy_constants(
            kind,
            r,
            lambda,
            |l, rf| {
                let ratio = l / (1.0 + l);
                let mean = ratio.powf(rf + 1.0);
                let spread = l * (1.0 + l + (l * rf - 1.0).powi(2)) / (1.0 + l).powf(rf + 2.0);
                (mean, mean * (1.0 - spread))
            },
            1.0,
            (1.0, 4.0),
        ),
        FamilyKind::GasDistinct | FamilyKind::GasColoured => {
            // The coloured limits coincide with the distinct ones: each
            // coordinate needs exactly r of its M marks, and for M >= n the
            // with/without-replacement gap washes out of both constants.
            let tilde = (0.5, 2.0);
            occupancy_constants(
                kind,
                r,
                lambda,
                |l, rf| {
                    let rfact = factorial_f64(r);
                    let e = (-1.0 / l).exp();
                    let mean = e / rfact;
                    let spread = e * (l + (l * rf - 1.0).powi(2)) / (rfact * l.powf(rf + 1.0));
                    (mean, mean * (1.0 - spread))
                },
                1.0 / factorial_f64(r),
                tilde,
            )
        }
        FamilyKind::GasForest => occupancy_constants(
            kind,
            r,
            lambda,
            |l, rf| {
                let rfact = factorial_f64(r);
                let top = factorial_f64(r + 1);
                let e = (-(rf + 1.0) / (l + 1.0)).exp();
                let mean = (rf + 1.0).powf(rf - 1.0) / rfact
                    * (l / (l + 1.0)).powf(rf)
                    * e;
                let first = e / top
                    * (l * (rf + 1.0) / (l + 1.0)).powf(rf)
                    * (1.0 - e / top * ((rf + 1.0) / (l + 1.0)).powf(rf));
                let second = l
                    * (e * (l * rf - 1.0) / (top * (l + 1.0))).powi(2)
                    * (l * (rf + 1.0).powi(2) / (l + 1.0).powi(2)).powf(rf);
                (mean, first - second)
            },
            (r as f64 + 1.0).powf(r as f64 - 1.0) / factorial_f64(r),
            (1.5, 6.0),
        ),
        FamilyKind::GiasNegmulti => {
            let l = finite_lambda(kind, lambda)?;
            let alpha = extra
                .alpha
                .ok_or_else(|| invalid(kind.as_str(), "needs alpha, the limit of N p"))?;
            if !(alpha > 0.0 && alpha < 1.0) {
                return Err(invalid(kind.as_str(), "alpha must lie in (0, 1)"));
            }
            let rf = r as f64;
            let rfact = factorial_f64(r);
            let delta = alpha / (l * (1.0 - alpha));
            let unit = delta.powf(rf) * (-delta).exp() / rfact;
            let mean = l * unit;
            let var = mean * (1.0 - unit * (1.0 - l * (rf - delta).powi(2)));
            Ok(AsymptoticConstants {
                mean_const: mean,
                var_const: Some(var),
                tilde_var_const: None,
            })
        }
        FamilyKind::GiasDirichlet => {
            let l = finite_lambda(kind, lambda)?;
            let a = extra
                .a
                .ok_or_else(|| invalid(kind.as_str(), "needs the colour weight a"))?;
            let beta = extra
                .beta
                .ok_or_else(|| invalid(kind.as_str(), "needs beta, the limit of b/n"))?;
            if a.is_nan() || a <= 0.0 {
                return Err(invalid(kind.as_str(), "a must be positive"));
            }
            if beta.is_nan() || beta <= 0.0 {
                return Err(invalid(kind.as_str(), "beta must be positive"));
            }
            let rf = r as f64;
            let rfact = factorial_f64(r);
            let gamma_ratio = libm::tgamma(a + rf) / libm::tgamma(a);
            let unit =
                gamma_ratio * beta.powf(a) / (rfact * (1.0 + beta).powf(a + rf));
            let mean = l * unit;
            let swing =
                (a + rf).powi(2) / (beta + 1.0) - a * a / beta - rf * rf;
            let var = mean * (1.0 - unit * (1.0 + l * swing));
            Ok(AsymptoticConstants {
                mean_const: mean,
                var_const: Some(var),
                tilde_var_const: None,
            })
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::bigfloat::RealCtx;
    use crate::schemes::{mean_and_variance, OccupancyParams, SchemeSpec};

    fn pinned(kind: FamilyKind, r: u64, lambda: Lambda) -> AsymptoticConstants {
        asymptotic_constants(kind, r, lambda, &LimitParams::default()).unwrap()
    }

    #[test]
    fn balanced_urn_constants_at_unit_lambda() {
        let c = pinned(FamilyKind::GasIndistinct, 2, Lambda::Finite(1.0));
        assert!((c.mean_const - 1.0 / 8.0).abs() < 1e-15);
        assert!((c.var_const.unwrap() - 13.0 / 128.0).abs() < 1e-15);
        assert!(c.tilde_var_const.is_none());

        let c = pinned(FamilyKind::GasDistinct, 2, Lambda::Finite(1.0));
        let e = (-1.0f64).exp();
        assert!((c.mean_const - e / 2.0).abs() < 1e-15);
        assert!((c.var_const.unwrap() - e / 2.0 * (1.0 - e)).abs() < 1e-15);
        assert!((c.var_const.unwrap() - 0.116272078967).abs() < 1e-9);

        let c = pinned(FamilyKind::GasDistinct, 3, Lambda::Finite(1.0));
        assert!((c.var_const.unwrap() - 0.042516673079).abs() < 1e-9);

        let c = pinned(FamilyKind::GasColoured, 3, Lambda::Finite(1.0));
        assert!((c.var_const.unwrap() - 0.042516673079).abs() < 1e-9);

        let c = pinned(FamilyKind::GasForest, 2, Lambda::Finite(1.0));
        assert!((c.var_const.unwrap() - 0.074922176944).abs() < 1e-9);
    }

    #[test]
    fn waiting_family_constants_at_unit_lambda() {
        let extra = LimitParams {
            alpha: Some(0.5),
            ..Default::default()
        };
        let c =
            asymptotic_constants(FamilyKind::GiasNegmulti, 2, Lambda::Finite(1.0), &extra)
                .unwrap();
        let e = (-1.0f64).exp();
        assert!((c.mean_const - e / 2.0).abs() < 1e-15);
        assert!((c.var_const.unwrap() - e / 2.0).abs() < 1e-15);

        let extra = LimitParams {
            a: Some(1.0),
            beta: Some(1.0),
            ..Default::default()
        };
        let c =
            asymptotic_constants(FamilyKind::GiasDirichlet, 2, Lambda::Finite(1.0), &extra)
                .unwrap();
        assert!((c.mean_const - 1.0 / 8.0).abs() < 1e-15);
        assert!((c.var_const.unwrap() - 15.0 / 128.0).abs() < 1e-15);
    }

    #[test]
    fn sparse_regime_switches_to_fine_scaling() {
        for (kind, t0, t1) in [
            (FamilyKind::GasIndistinct, 1.0, 4.0),
            (FamilyKind::GasDistinct, 0.5, 2.0),
            (FamilyKind::GasColoured, 0.5, 2.0),
            (FamilyKind::GasForest, 1.5, 6.0),
        ] {
            let c = pinned(kind, 0, Lambda::Infinite);
            assert!(c.var_const.is_none());
            assert_eq!(c.tilde_var_const, Some(t0), "{kind} r=0");
            let c = pinned(kind, 1, Lambda::Infinite);
            assert_eq!(c.tilde_var_const, Some(t1), "{kind} r=1");
            let c = pinned(kind, 2, Lambda::Infinite);
            assert!(c.tilde_var_const.is_none());
            assert!(c.var_const.is_some());
        }
        let c = pinned(FamilyKind::GasIndistinct, 2, Lambda::Infinite);
        assert_eq!(c.mean_const, 1.0);
        assert_eq!(c.var_const, Some(1.0));
        let c = pinned(FamilyKind::GasDistinct, 3, Lambda::Infinite);
        assert!((c.mean_const - 1.0 / 6.0).abs() < 1e-15);
        let c = pinned(FamilyKind::GasForest, 2, Lambda::Infinite);
        assert!((c.mean_const - 3.0 / 2.0).abs() < 1e-15);
        assert_eq!(c.var_const, Some(c.mean_const));
    }

    #[test]
    fn unsupported_requests_are_rejected() {
        let extra = LimitParams::default();
        assert!(
            asymptotic_constants(FamilyKind::Binomial, 1, Lambda::Finite(1.0), &extra).is_err()
        );
        assert!(
            asymptotic_constants(FamilyKind::GiasNegmulti, 1, Lambda::Infinite, &extra).is_err()
        );
        assert!(
            asymptotic_constants(FamilyKind::GiasNegmulti, 1, Lambda::Finite(1.0), &extra)
                .is_err()
        );
        assert!(
            asymptotic_constants(FamilyKind::GiasDirichlet, 1, Lambda::Finite(1.0), &extra)
                .is_err()
        );
        let bad = LimitParams {
            alpha: Some(1.2),
            ..Default::default()
        };
        assert!(
            asymptotic_constants(FamilyKind::GiasNegmulti, 1, Lambda::Finite(1.0), &bad).is_err()
        );
        assert!(
            asymptotic_constants(FamilyKind::GasIndistinct, 1, Lambda::Finite(0.0), &extra)
                .is_err()
        );
    }

    #[test]
    fn finite_size_moments_approach_the_constants() {
        // N = n with r = 2: the scaled moments N/n^2 * E and N/n^2 * Var
        // should be within a few percent of the lambda = 1 constants already
        // at n = 3000.
        let n = 3000u64;
        let spec = SchemeSpec::GasIndistinct(OccupancyParams {
            n,
            big_n: n,
            r: 2,
        });
        let mut ctx = RealCtx::default();
        let (mean, var) = mean_and_variance(&spec, &mut ctx).unwrap();
        let scale = 1.0 / n as f64; // N^{r-1}/n^r with N = n
        let c = pinned(FamilyKind::GasIndistinct, 2, Lambda::Finite(1.0));
        let mean_gap = (mean.to_f64() * scale - c.mean_const).abs() / c.mean_const;
        let var_gap =
            (var.to_f64() * scale - c.var_const.unwrap()).abs() / c.var_const.unwrap();
        assert!(mean_gap < 0.01, "mean gap {mean_gap:.4}");
        assert!(var_gap < 0.01, "var gap {var_gap:.4}");
    }
}
