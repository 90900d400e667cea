//! The acceptance gate. Each test covers one numbered criterion, prints one
//! PASS/FAIL line (visible with `--nocapture`, and in the panic message on
//! failure), and enforces the stated tolerance.
//!
//! Exact criteria compare rationals with `==`; numerical criteria carry the
//! tolerance in the assertion itself. The Monte Carlo criteria use fixed
//! seeds, so the whole suite is deterministic.

mod common;

use common::{enumerated_factorial_moment, CellLaw};
use faccum::bigfloat::RealCtx;
use faccum::diagnostics::condition_report;
use faccum::exact::{
    enumerate_partitions, factorial, partition_coefficient, rational_to_f64, stirling2, Rational,
};
use faccum::identity::{stanley_check, verify_boundary_nonvanishing, verify_vanishing_region};
use faccum::schemes::{
    asymptotic_constants, decomposition_residual, factorial_moment, mean_and_variance,
    BernoulliParams, ColouredParams, DirichletParams, FamilyKind, HypergeometricParams, Lambda,
    LimitParams, NegHypergeometricParams, NegmultiParams, OccupancyParams, SchemeSpec,
    SchemeValue,
};
use faccum::simulate::{
    empirical_correlation, empirical_factorial_moment, ks_to_normal, sample_batch,
};
use faccum::transforms::{
    cumulants_from_moments, cumulants_via_partitions, factorial_cumulants, MomentKind,
    MomentSequence,
};
use num_bigint::BigInt;
use num_traits::{One, Zero};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

fn report(idx: u32, what: &str, pass: bool, detail: &str) {
    let tag = if pass { "PASS" } else { "FAIL" };
    println!("{tag} criterion {idx}: {what} ({detail})");
    assert!(pass, "FAIL criterion {idx}: {what} ({detail})");
}

fn rat(num: i64, den: i64) -> Rational {
    Rational::new(BigInt::from(num), BigInt::from(den))
}

fn exact_variance_f64(spec: &SchemeSpec) -> f64 {
    let mut ctx = RealCtx::default();
    let (_, var) = mean_and_variance(spec, &mut ctx).expect("valid spec");
    var.to_f64()
}

// -- criterion 1 -------------------------------------------------------------

#[test]
fn criterion_01_partition_coefficients_cancel() {
    let mut worst_j = 0;
    let mut pass = true;
    for j in 2..=12u64 {
        let total: Rational = enumerate_partitions(j)
            .expect("j >= 2")
            .iter()
            .map(partition_coefficient)
            .sum();
        if !total.is_zero() {
            pass = false;
            worst_j = j;
        }
    }
    report(
        1,
        "signed partition coefficients sum to zero for J = 2..12",
        pass,
        &if pass {
            "exact".to_string()
        } else {
            format!("nonzero at J = {worst_j}")
        },
    );
}

// -- criterion 2 -------------------------------------------------------------

#[test]
fn criterion_02_identity_vanishes_inside_the_region() {
    let sweep = verify_vanishing_region(10, 3);
    let pass = sweep.violations.is_empty();
    report(
        2,
        "identity sum vanishes for J <= 10, I <= 3, sum s_i <= J + I - 2",
        pass,
        &format!(
            "{} cases, {} violations",
            sweep.cases_checked,
            sweep.violations.len()
        ),
    );
}

// -- criterion 3 -------------------------------------------------------------

#[test]
fn criterion_03_boundary_is_sharp_and_matches_the_stirling_form() {
    let edge = verify_boundary_nonvanishing(8, 2);
    let mut pass = edge.missing_nonzero.is_empty();
    let mut detail = format!("{} boundary cases", edge.cases.len());

    let mut stanley_cases = 0;
    for j in 2..=8u64 {
        for s1 in 1..=14u32 {
            let (lhs, rhs) = stanley_check(j, s1);
            stanley_cases += 1;
            if lhs != rhs {
                pass = false;
                detail = format!("single-exponent mismatch at J={j}, s1={s1}");
            }
        }
    }
    if pass {
        detail.push_str(&format!(", {stanley_cases} single-exponent identities"));
    }
    report(
        3,
        "boundary multisets are nonzero and I = 1 equals J! S2(s1, J)",
        pass,
        &detail,
    );
}

// -- criterion 4 -------------------------------------------------------------

#[test]
fn criterion_04_cumulant_routes_agree_and_poisson_connects_trivially() {
    let mut rng = ChaCha8Rng::seed_from_u64(0x04AC);
    let mut pass = true;
    let mut detail = String::from("200 random sequences, orders <= 8");

    for seq_idx in 0..200 {
        let values: Vec<Rational> = (0..8)
            .map(|_| {
                let num = rng.random_range(-20..=20i64);
                let den = rng.random_range(1..=12i64);
                rat(num, den)
            })
            .collect();
        let raw = MomentSequence::new(MomentKind::Raw, values);
        let recursion = cumulants_from_moments(&raw, 8).expect("full input");
        for j in 1..=8usize {
            let direct = cumulants_via_partitions(&raw, j).expect("full input");
            if direct != recursion.values[j - 1] {
                pass = false;
                detail = format!("routes disagree at sequence {seq_idx}, order {j}");
            }
        }
    }

    // A Poisson-type moment sequence has factorial moments lam^k; its
    // factorial cumulants must collapse to (lam, 0, 0, ...).
    for lam in [rat(3, 2), rat(7, 3), rat(5, 1)] {
        let c: Vec<Rational> = (1..=8u32).map(|k| lam.clone().pow(k as i32)).collect();
        let seq = MomentSequence::new(MomentKind::Factorial, c);
        let f = factorial_cumulants(&seq, 8).expect("full input");
        if f.values[0] != lam || f.values[1..].iter().any(|v| !v.is_zero()) {
            pass = false;
            detail = format!("Poisson factorial cumulants did not vanish for lam = {lam}");
        }
    }
    report(4, "partition and recursion cumulant routes agree", pass, &detail);
}

// -- criterion 5 -------------------------------------------------------------

#[test]
fn criterion_05_closed_forms_match_exhaustive_enumeration() {
    let mut ctx = RealCtx::default();
    let mut cases = 0u64;
    let mut pass = true;
    let mut detail = String::new();

    for n in 1..=5u64 {
        for big_n in 1..=4u64 {
            for r in 0..=3u64 {
                let mut specs = vec![
                    (
                        CellLaw::Indistinct,
                        SchemeSpec::GasIndistinct(OccupancyParams { n, big_n, r }),
                    ),
                    (
                        CellLaw::Distinct,
                        SchemeSpec::GasDistinct(OccupancyParams { n, big_n, r }),
                    ),
                    (
                        CellLaw::Forest,
                        SchemeSpec::GasForest(OccupancyParams { n, big_n, r }),
                    ),
                ];
                for big_m in n..=4u64 {
                    specs.push((
                        CellLaw::Coloured { m: big_m },
                        SchemeSpec::GasColoured(ColouredParams { n, big_n, big_m, r }),
                    ));
                }
                for (law, spec) in specs {
                    for k in 1..=4u64 {
                        let closed = match factorial_moment(&spec, k, &mut ctx).unwrap() {
                            SchemeValue::Exact(q) => q,
                            SchemeValue::Real(_) => {
                                pass = false;
                                detail = format!("{} left the exact route", spec.family_name());
                                continue;
                            }
                        };
                        // The oracle also asserts that each pmf sums to 1.
                        let enumerated = enumerated_factorial_moment(law, n, big_n, r, k);
                        cases += 1;
                        if closed != enumerated {
                            pass = false;
                            detail = format!(
                                "{} n={n} N={big_n} r={r} k={k}: {closed} != {enumerated}",
                                spec.family_name()
                            );
                        }
                    }
                }
            }
        }
    }
    if pass {
        detail = format!("{cases} exact comparisons, all pmfs normalized");
    }
    report(
        5,
        "enumeration oracle matches closed forms for the four cell laws",
        pass,
        &detail,
    );
}

// -- criterion 6 -------------------------------------------------------------

struct ConstantCheck {
    label: &'static str,
    spec: SchemeSpec,
    kind: FamilyKind,
    r: u64,
    lambda: Lambda,
    extra: LimitParams,
    /// Var S is multiplied by this before comparing with the limit constant.
    scaling: f64,
    tolerance: f64,
    /// Compare with `var_const` (finite-lambda) or `tilde_var_const`.
    tilde: bool,
}

#[test]
fn criterion_06_scaled_variances_approach_their_limit_constants() {
    let n = 10_000u64;
    let nf = n as f64;
    let occ = |r| OccupancyParams { n, big_n: n, r };
    let mut checks = vec![
        ConstantCheck {
            label: "gas-indistinct r=2, lambda=1",
            spec: SchemeSpec::GasIndistinct(occ(2)),
            kind: FamilyKind::GasIndistinct,
            r: 2,
            lambda: Lambda::Finite(1.0),
            extra: LimitParams::default(),
            scaling: 1.0 / nf,
            tolerance: 0.02,
            tilde: false,
        },
        ConstantCheck {
            label: "gas-distinct r=2, lambda=1",
            spec: SchemeSpec::GasDistinct(occ(2)),
            kind: FamilyKind::GasDistinct,
            r: 2,
            lambda: Lambda::Finite(1.0),
            extra: LimitParams::default(),
            scaling: 1.0 / nf,
            tolerance: 0.02,
            tilde: false,
        },
        ConstantCheck {
            label: "gas-distinct r=3, lambda=1",
            spec: SchemeSpec::GasDistinct(occ(3)),
            kind: FamilyKind::GasDistinct,
            r: 3,
            lambda: Lambda::Finite(1.0),
            extra: LimitParams::default(),
            scaling: 1.0 / nf,
            tolerance: 0.02,
            tilde: false,
        },
        ConstantCheck {
            label: "gas-forest r=2, lambda=1",
            spec: SchemeSpec::GasForest(occ(2)),
            kind: FamilyKind::GasForest,
            r: 2,
            lambda: Lambda::Finite(1.0),
            extra: LimitParams::default(),
            scaling: 1.0 / nf,
            tolerance: 0.02,
            tilde: false,
        },
        ConstantCheck {
            label: "gias-negmulti r=2, lambda=1, alpha=1/2",
            spec: SchemeSpec::GiasNegmulti(NegmultiParams {
                n,
                big_n: n,
                p: Rational::new(BigInt::one(), BigInt::from(2 * n)),
                r: 2,
            }),
            kind: FamilyKind::GiasNegmulti,
            r: 2,
            lambda: Lambda::Finite(1.0),
            extra: LimitParams {
                alpha: Some(0.5),
                ..LimitParams::default()
            },
            scaling: 1.0 / nf,
            tolerance: 0.02,
            tilde: false,
        },
        ConstantCheck {
            label: "gias-dirichlet r=2, lambda=1, a=1, beta=1",
            spec: SchemeSpec::GiasDirichlet(DirichletParams {
                n,
                big_n: n,
                a: Rational::one(),
                b: Rational::from_integer(BigInt::from(n)),
                r: 2,
            }),
            kind: FamilyKind::GiasDirichlet,
            r: 2,
            lambda: Lambda::Finite(1.0),
            extra: LimitParams {
                a: Some(1.0),
                beta: Some(1.0),
                ..LimitParams::default()
            },
            scaling: 1.0 / nf,
            tolerance: 0.02,
            tilde: false,
        },
    ];

    // Sparse regime: N = n^2, where the leading variance terms cancel for
    // r in {0, 1} and the finer constants take over. The N/n^2 scaling is
    // identically 1 along this diagonal.
    let sparse_n = 500u64;
    let sparse = |r| OccupancyParams {
        n: sparse_n,
        big_n: sparse_n * sparse_n,
        r,
    };
    for r in 0..=1u64 {
        checks.push(ConstantCheck {
            label: if r == 0 {
                "gas-indistinct r=0, N=n^2"
            } else {
                "gas-indistinct r=1, N=n^2"
            },
            spec: SchemeSpec::GasIndistinct(sparse(r)),
            kind: FamilyKind::GasIndistinct,
            r,
            lambda: Lambda::Infinite,
            extra: LimitParams::default(),
            scaling: 1.0,
            tolerance: 0.05,
            tilde: true,
        });
        checks.push(ConstantCheck {
            label: if r == 0 {
                "gas-distinct r=0, N=n^2"
            } else {
                "gas-distinct r=1, N=n^2"
            },
            spec: SchemeSpec::GasDistinct(sparse(r)),
            kind: FamilyKind::GasDistinct,
            r,
            lambda: Lambda::Infinite,
            extra: LimitParams::default(),
            scaling: 1.0,
            tolerance: 0.05,
            tilde: true,
        });
        checks.push(ConstantCheck {
            label: if r == 0 {
                "gas-forest r=0, N=n^2"
            } else {
                "gas-forest r=1, N=n^2"
            },
            spec: SchemeSpec::GasForest(sparse(r)),
            kind: FamilyKind::GasForest,
            r,
            lambda: Lambda::Infinite,
            extra: LimitParams::default(),
            scaling: 1.0,
            tolerance: 0.05,
            tilde: true,
        });
    }

    let mut pass = true;
    let mut detail = format!("{} constants", checks.len());
    let mut worst: f64 = 0.0;
    for check in &checks {
        let limits = asymptotic_constants(check.kind, check.r, check.lambda, &check.extra)
            .expect("valid limit request");
        let target = if check.tilde {
            limits.tilde_var_const.expect("sparse r in {0,1}")
        } else {
            limits.var_const.expect("finite-lambda variance")
        };
        let scaled = exact_variance_f64(&check.spec) * check.scaling;
        let rel = (scaled - target).abs() / target.abs();
        worst = worst.max(rel);
        if rel > check.tolerance {
            pass = false;
            detail = format!(
                "{}: scaled variance {scaled:.6} vs constant {target:.6} (rel {rel:.4})",
                check.label
            );
        }
    }
    if pass {
        detail.push_str(&format!(", worst relative error {worst:.5}"));
    }
    report(
        6,
        "exact scaled variances land on the limiting constants",
        pass,
        &detail,
    );
}

// -- criterion 7 -------------------------------------------------------------

/// One spec per family at size `n`, each in its normal-limit growth regime.
/// The two-urn parameters are deliberately asymmetric: at N = M (or
/// alpha = beta) the law is symmetric, kappa_3 vanishes identically, and a
/// decay slope cannot be fitted.
fn catalog(n: u64) -> Vec<SchemeSpec> {
    let occ = |r| OccupancyParams { n, big_n: n, r };
    vec![
        SchemeSpec::Binomial(BernoulliParams { n, p: rat(1, 4) }),
        SchemeSpec::NegBinomial(BernoulliParams { n, p: rat(1, 4) }),
        SchemeSpec::Hypergeometric(HypergeometricParams {
            big_n: 2 * n,
            big_m: 3 * n,
            n,
        }),
        SchemeSpec::NegHypergeometric(NegHypergeometricParams {
            n,
            alpha: Rational::one(),
            beta: rat(2, 1),
        }),
        SchemeSpec::GasIndistinct(occ(2)),
        SchemeSpec::GasDistinct(occ(2)),
        SchemeSpec::GasColoured(ColouredParams {
            n,
            big_n: n,
            big_m: n,
            r: 2,
        }),
        SchemeSpec::GasForest(occ(2)),
        SchemeSpec::GiasNegmulti(NegmultiParams {
            n,
            big_n: n,
            p: Rational::new(BigInt::one(), BigInt::from(2 * n)),
            r: 2,
        }),
        SchemeSpec::GiasDirichlet(DirichletParams {
            n,
            big_n: n,
            a: Rational::one(),
            b: Rational::from_integer(BigInt::from(n)),
            r: 2,
        }),
    ]
}

#[test]
fn criterion_07_truncated_decomposition_reproduces_the_log_moments() {
    let mut ctx = RealCtx::default();
    let mut pass = true;
    let mut worst: f64 = 0.0;
    let mut detail = String::new();
    for spec in catalog(1000) {
        let residual = decomposition_residual(&spec, 4, 10, &mut ctx).expect("valid spec");
        worst = worst.max(residual);
        if residual >= 1e-9 {
            pass = false;
            detail = format!("{}: residual {residual:.3e}", spec.family_name());
        }
    }
    if pass {
        detail = format!("10 families, worst residual {worst:.3e}");
    }
    report(
        7,
        "decomposition residual < 1e-9 at n = 1000, k <= 4, j_trunc = 10",
        pass,
        &detail,
    );
}

// -- criterion 8 -------------------------------------------------------------

#[test]
fn criterion_08_standardized_cumulants_decay_along_the_grid() {
    let grid = [100u64, 1_000, 10_000, 100_000];
    let mut pass = true;
    let mut detail = String::new();
    let mut shallowest = f64::NEG_INFINITY;

    for family_idx in 0..catalog(1).len() {
        let specs: Vec<SchemeSpec> = grid.iter().map(|&n| catalog(n)[family_idx].clone()).collect();
        let name = specs[0].family_name();
        let diag = condition_report(&specs, 4).expect("valid grid");
        for (offset, slope) in diag.trends.kappa_slopes.iter().enumerate() {
            let j = offset + 3;
            match slope {
                Some(s) => {
                    shallowest = shallowest.max(*s);
                    if *s > -0.25 {
                        pass = false;
                        detail = format!("{name}: kappa_{j} slope {s:.3}");
                    }
                }
                None => {
                    pass = false;
                    detail = format!("{name}: kappa_{j} slope not measurable");
                }
            }
        }
    }
    if pass {
        detail = format!("10 families, shallowest slope {shallowest:.3}");
    }
    report(
        8,
        "kappa_3 and kappa_4 decay with log-log slope <= -0.25",
        pass,
        &detail,
    );
}

// -- criterion 9 -------------------------------------------------------------

#[test]
fn criterion_09_monte_carlo_agrees_with_the_exact_moments() {
    let reps = 100_000u64;
    let mut pass = true;
    let mut detail = String::new();

    // Normality of the standardized statistic at n = 10^4.
    let ks_specs = [
        SchemeSpec::Binomial(BernoulliParams {
            n: 10_000,
            p: rat(1, 2),
        }),
        SchemeSpec::GasDistinct(OccupancyParams {
            n: 10_000,
            big_n: 10_000,
            r: 2,
        }),
    ];
    let mut worst_ks: f64 = 0.0;
    for spec in &ks_specs {
        let batch = sample_batch(spec, 0xAC09, reps, &[]).expect("valid spec");
        let mut ctx = RealCtx::default();
        let (mean, variance) = mean_and_variance(spec, &mut ctx).expect("valid spec");
        let distance = ks_to_normal(&batch, mean.to_f64(), variance.to_f64().sqrt())
            .expect("enough replicates");
        worst_ks = worst_ks.max(distance);
        if distance >= 0.03 {
            pass = false;
            detail = format!("{}: KS {distance:.4}", spec.family_name());
        }
    }

    // Factorial-moment concordance across the whole catalog at n = 100.
    let mut worst_z: f64 = 0.0;
    for spec in catalog(100) {
        let batch = sample_batch(&spec, 0xAC09, reps, &[]).expect("valid spec");
        let mut ctx = RealCtx::default();
        for k in 1..=3u64 {
            let est = empirical_factorial_moment(&batch, k).expect("two or more replicates");
            let exact = factorial_moment(&spec, k, &mut ctx).expect("valid spec").to_f64();
            let z = (est.value - exact).abs() / est.std_error;
            worst_z = worst_z.max(z);
            if z >= 4.0 {
                pass = false;
                detail = format!(
                    "{} k={k}: estimate {:.4} vs {exact:.4} is {z:.2} SE off",
                    spec.family_name(),
                    est.value
                );
            }
        }
    }
    if pass {
        detail = format!("worst KS {worst_ks:.4}, worst moment deviation {worst_z:.2} SE");
    }
    report(
        9,
        "100k-replicate batches match normality and exact moments",
        pass,
        &detail,
    );
}

// -- criterion 10 ------------------------------------------------------------

#[test]
fn criterion_10_sparse_occupancy_correlations_hit_their_limits() {
    let n = 200u64;
    let big_n = n * n;
    let reps = 100_000u64;
    let specs = [
        SchemeSpec::GasIndistinct(OccupancyParams { n, big_n, r: 0 }),
        SchemeSpec::GasDistinct(OccupancyParams { n, big_n, r: 0 }),
        SchemeSpec::GasForest(OccupancyParams { n, big_n, r: 0 }),
    ];
    let mut pass = true;
    let mut detail = String::new();
    let mut extremes: Vec<String> = Vec::new();
    for spec in &specs {
        let batch = sample_batch(spec, 0xAC10, reps, &[1, 2]).expect("valid spec");
        let low = empirical_correlation(&batch, 0, 1).expect("recorded columns");
        let high = empirical_correlation(&batch, 0, 2).expect("recorded columns");
        extremes.push(format!(
            "{}: {:.3}/{:.3}",
            spec.family_name(),
            low.value,
            high.value
        ));
        if !(low.value < -0.9) {
            pass = false;
            detail = format!("{}: rho(S0, S1) = {:.4}", spec.family_name(), low.value);
        }
        if !(high.value > 0.9) {
            pass = false;
            detail = format!("{}: rho(S0, S2) = {:.4}", spec.family_name(), high.value);
        }
    }
    if pass {
        detail = format!("rho(S0,S1)/rho(S0,S2) {}", extremes.join(", "));
    }
    report(
        10,
        "empirical correlations reach their +/-0.9 limits at N = n^2",
        pass,
        &detail,
    );
}

// -- shared sanity: the helpers above stay honest ----------------------------

/// The catalog builder must emit one spec per family, each valid; criterion
/// parameters ride on it, so a silent validation failure would skew several
/// criteria at once.
#[test]
fn catalog_covers_every_family_once() {
    let specs = catalog(1000);
    assert_eq!(specs.len(), FamilyKind::ALL.len());
    for (spec, kind) in specs.iter().zip(FamilyKind::ALL) {
        assert_eq!(spec.family_name(), kind.as_str());
        spec.validate().expect("catalog specs validate");
    }
    // Exercise the helper used by criterion 1's detail formatting.
    assert_eq!(
        rational_to_f64(&Rational::from(factorial(3) * stirling2(3, 3))),
        6.0
    );
}
