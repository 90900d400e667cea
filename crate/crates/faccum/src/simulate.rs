//! Reproducible Monte Carlo samplers for every catalog family, plus the
//! estimators used to cross-check the closed-form moments against draws.
//!
//! Each family gets a sampler for its exact finite-size law, not a normal
//! surrogate: compositions come from a uniform stars-and-bars slot pattern,
//! forests from conditioned offspring rejection, the waiting-time vectors
//! from their stopped-trial constructions. Replicate `i` of a batch draws
//! from ChaCha stream `(seed, i)`, so a batch is byte-identical no matter
//! how the replicates are scheduled across threads.

use std::collections::HashSet;
use std::fmt::Write as _;

use rand::prelude::*;
use rand_chacha::ChaCha8Rng;
use rand_distr::{Beta, Binomial, Gamma, Hypergeometric, Poisson};
use rayon::prelude::*;
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::exact::ratio::rational_to_f64;
use crate::schemes::{SchemeError, SchemeSpec};

/// Smallest batch accepted by [`ks_to_normal`]; the statistic is too noisy
/// to mean anything below this.
pub const MIN_KS_REPS: u64 = 1_000;

/// Attempt budget for the conditioned-forest rejection sampler.
const FOREST_ATTEMPT_CAP: u64 = 1_000_000;

/// Offspring table is extended until the truncated tail mass drops below
/// this.
const FOREST_TAIL: f64 = 1e-12;

#[derive(Debug, Error)]
pub enum SimulateError {
    #[error(transparent)]
    Scheme(#[from] SchemeError),
    #[error("simulate: {0}")]
    InvalidRequest(String),
    #[error("gas-forest: no attempt hit the target total within {attempts} tries")]
    RejectionBudget { attempts: u64 },
    #[error("statistic S^({r}) was not recorded in this batch")]
    MissingColumn { r: u64 },
    #[error("statistic S^({r}) is constant in this batch, correlation is undefined")]
    DegenerateStatistic { r: u64 },
}

fn bad_request(message: impl Into<String>) -> SimulateError {
    SimulateError::InvalidRequest(message.into())
}

// ---- single draws ----

/// One sampled outcome. Cell families record the occupancy vector as
/// `(cell, count)` pairs sorted by cell, listing only cells that received
/// at least one item; the classical families record their scalar count.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Draw {
    Scalar(u64),
    Counts { cells: u64, nonzero: Vec<(u64, u64)> },
}

impl Draw {
    /// `S^{(r)}` read off the draw: the number of cells holding exactly `r`
    /// items. Scalar draws ignore `r`, the classical statistic is the count
    /// itself.
    pub fn statistic(&self, r: u64) -> u64 {
        match self {
            Draw::Scalar(s) => *s,
            Draw::Counts { cells, nonzero } => {
                if r == 0 {
                    cells - nonzero.len() as u64
                } else {
                    nonzero.iter().filter(|&&(_, c)| c == r).count() as u64
                }
            }
        }
    }

    /// Dense occupancy vector, `None` for scalar draws.
    pub fn dense(&self) -> Option<Vec<u64>> {
        match self {
            Draw::Scalar(_) => None,
            Draw::Counts { cells, nonzero } => {
                let mut v = vec![0u64; *cells as usize];
                for &(cell, count) in nonzero {
                    v[cell as usize] = count;
                }
                Some(v)
            }
        }
    }
}

/// The RNG for replicate `rep` of a batch keyed by `seed`. Stream selection
/// keeps replicates independent without any sequential hand-off.
fn replicate_rng(seed: u64, rep: u64) -> ChaCha8Rng {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(rep);
    rng
}

/// Draw one outcome from the scheme's law. Equals replicate 0 of any batch
/// with the same seed.
pub fn sample_counts(spec: &SchemeSpec, seed: u64) -> Result<Draw, SimulateError> {
    spec.validate()?;
    let engine = Engine::build(spec)?;
    engine.draw(&mut replicate_rng(seed, 0))
}

// ---- samplers ----

/// Prebuilt sampling plan for one spec: whatever tables or distribution
/// objects the family needs, computed once per batch.
enum Engine {
    Binomial(Binomial),
    /// Gamma-Poisson mixture: failures before the `n`th success.
    NegBinomial { gamma: Gamma<f64> },
    Hypergeometric(Hypergeometric),
    /// Beta-mixed binomial with fixed mixing shapes.
    BetaBinomial { trials: u64, beta: Beta<f64> },
    /// Uniform composition of `total` items over `cells`.
    Composition { total: u64, cells: u64 },
    /// Independent uniform cell per item.
    Assignment { total: u64, cells: u64 },
    /// Uniform `total`-subset of `cells * per_colour` balls.
    ColourUrn { total: u64, cells: u64, per_colour: u64 },
    Forest(ForestSampler),
    /// Stopped uniform trials: the number of non-stop outcomes is negative
    /// binomial (the stop count lives in the Gamma shape), and they spread
    /// over the cells multinomially.
    StopRun { cells: u64, gamma: Gamma<f64> },
    /// Reinforced urn, integer weights, run until the `stops`th black draw.
    PolyaUrn { stops: u64, cells: u64, a: u64, b: u64 },
    /// Fractional-weight counterpart of the urn: Gamma-distributed cell
    /// rates mixed into a stopped run.
    MixedStopRun { stops: u64, cells: u64, a: f64, b: f64 },
}

impl Engine {
    fn build(spec: &SchemeSpec) -> Result<Engine, SimulateError> {
        let dist_err = |what: &str, e: rand_distr::BinomialError| {
            bad_request(format!("{what}: {e}"))
        };
        match spec {
            SchemeSpec::Binomial(p) => {
                let prob = rational_to_f64(&p.p);
                Ok(Engine::Binomial(
                    Binomial::new(p.n, prob).map_err(|e| dist_err("binomial sampler", e))?,
                ))
            }
            SchemeSpec::NegBinomial(p) => {
                let prob = rational_to_f64(&p.p);
                let odds = (1.0 - prob) / prob;
                let gamma = Gamma::new(p.n as f64, odds)
                    .map_err(|e| bad_request(format!("negative binomial sampler: {e}")))?;
                Ok(Engine::NegBinomial { gamma })
            }
            SchemeSpec::Hypergeometric(p) => {
                let dist = Hypergeometric::new(p.big_n + p.big_m, p.big_n, p.n)
                    .map_err(|e| bad_request(format!("hypergeometric sampler: {e}")))?;
                Ok(Engine::Hypergeometric(dist))
            }
            SchemeSpec::NegHypergeometric(p) => {
                let a = p.n as f64 * rational_to_f64(&p.alpha);
                let b = p.n as f64 * rational_to_f64(&p.beta);
                let beta = Beta::new(a, b)
                    .map_err(|e| bad_request(format!("beta-binomial sampler: {e}")))?;
                Ok(Engine::BetaBinomial { trials: p.n, beta })
            }
            SchemeSpec::GasIndistinct(p) => Ok(Engine::Composition {
                total: p.n,
                cells: p.big_n,
            }),
            SchemeSpec::GasDistinct(p) => {
                if p.n > u32::MAX as u64 {
                    return Err(bad_request("cell assignment sampler: n exceeds u32 range"));
                }
                Ok(Engine::Assignment {
                    total: p.n,
                    cells: p.big_n,
                })
            }
            SchemeSpec::GasColoured(p) => Ok(Engine::ColourUrn {
                total: p.n,
                cells: p.big_n,
                per_colour: p.big_m,
            }),
            SchemeSpec::GasForest(p) => {
                Ok(Engine::Forest(ForestSampler::build(p.n, p.big_n)?))
            }
            SchemeSpec::GiasNegmulti(p) => {
                let colour_mass = p.big_n as f64 * rational_to_f64(&p.p);
                if colour_mass.is_nan() || colour_mass >= 1.0 {
                    return Err(bad_request(
                        "stopped-run sampler: total colour probability rounds to 1 in f64",
                    ));
                }
                // Failures before the (n+1)th stop, stop probability 1 - Np.
                let gamma = Gamma::new((p.n + 1) as f64, colour_mass / (1.0 - colour_mass))
                    .map_err(|e| bad_request(format!("stopped-run sampler: {e}")))?;
                Ok(Engine::StopRun {
                    cells: p.big_n,
                    gamma,
                })
            }
            SchemeSpec::GiasDirichlet(p) => {
                let int_pair = (integer_u64(&p.a), integer_u64(&p.b));
                if let (Some(a), Some(b)) = int_pair {
                    Ok(Engine::PolyaUrn {
                        stops: p.n + 1,
                        cells: p.big_n,
                        a,
                        b,
                    })
                } else {
                    Ok(Engine::MixedStopRun {
                        stops: p.n + 1,
                        cells: p.big_n,
                        a: rational_to_f64(&p.a),
                        b: rational_to_f64(&p.b),
                    })
                }
            }
        }
    }

    fn draw(&self, rng: &mut ChaCha8Rng) -> Result<Draw, SimulateError> {
        match self {
            Engine::Binomial(dist) => Ok(Draw::Scalar(dist.sample(rng))),
            Engine::NegBinomial { gamma } => {
                let rate = gamma.sample(rng);
                Ok(Draw::Scalar(poisson_count(rng, rate)))
            }
            Engine::Hypergeometric(dist) => Ok(Draw::Scalar(dist.sample(rng))),
            Engine::BetaBinomial { trials, beta } => {
                let theta = beta.sample(rng).clamp(0.0, 1.0);
                let dist = Binomial::new(*trials, theta)
                    .expect("clamped mixing probability is in [0, 1]");
                Ok(Draw::Scalar(dist.sample(rng)))
            }
            Engine::Composition { total, cells } => Ok(draw_composition(rng, *total, *cells)),
            Engine::Assignment { total, cells } => Ok(draw_assignment(rng, *total, *cells)),
            Engine::ColourUrn {
                total,
                cells,
                per_colour,
            } => Ok(draw_colour_urn(rng, *total, *cells, *per_colour)),
            Engine::Forest(sampler) => sampler.draw(rng),
            Engine::StopRun { cells, gamma } => {
                let rate = gamma.sample(rng);
                let run = poisson_count(rng, rate);
                let mut nonzero = Vec::new();
                split_uniform(rng, run, *cells, &mut nonzero);
                Ok(Draw::Counts {
                    cells: *cells,
                    nonzero,
                })
            }
            Engine::PolyaUrn {
                stops,
                cells,
                a,
                b,
            } => Ok(draw_polya(rng, *stops, *cells, *a, *b)),
            Engine::MixedStopRun {
                stops,
                cells,
                a,
                b,
            } => draw_mixed_stop_run(rng, *stops, *cells, *a, *b),
        }
    }
}

fn integer_u64(x: &crate::exact::ratio::Rational) -> Option<u64> {
    use num_traits::ToPrimitive;
    if x.is_integer() {
        x.to_integer().to_u64()
    } else {
        None
    }
}

/// Poisson count with a guard for a zero or non-finite rate from upstream
/// Gamma underflow.
fn poisson_count(rng: &mut ChaCha8Rng, rate: f64) -> u64 {
    if !rate.is_finite() || rate <= 0.0 {
        return 0;
    }
    Poisson::new(rate).expect("positive finite rate").sample(rng) as u64
}

/// Floyd's algorithm: a uniform `k`-subset of `0..pool`, unsorted.
fn distinct_indices(rng: &mut ChaCha8Rng, pool: u64, k: u64) -> Vec<u64> {
    debug_assert!(k <= pool);
    let mut seen = HashSet::with_capacity(k as usize);
    let mut out = Vec::with_capacity(k as usize);
    for j in pool - k..pool {
        let t = rng.random_range(0..=j);
        if seen.insert(t) {
            out.push(t);
        } else {
            seen.insert(j);
            out.push(j);
        }
    }
    out
}

/// Uniform composition of `total` items over `cells` via stars and bars:
/// pick which of the `total + cells - 1` slot positions hold the cell
/// dividers, uniformly. Samples whichever side of the divide is smaller.
fn draw_composition(rng: &mut ChaCha8Rng, total: u64, cells: u64) -> Draw {
    let slots = total + cells - 1;
    let bars = cells - 1;
    let mut nonzero = Vec::new();
    if total <= bars {
        let mut stars = distinct_indices(rng, slots, total);
        stars.sort_unstable();
        // A star at slot s with j earlier stars has s - j dividers before
        // it, which is its cell index.
        let mut idx = 0;
        while idx < stars.len() {
            let cell = stars[idx] - idx as u64;
            let start = idx;
            while idx < stars.len() && stars[idx] - idx as u64 == cell {
                idx += 1;
            }
            nonzero.push((cell, (idx - start) as u64));
        }
    } else {
        let mut bar_pos = distinct_indices(rng, slots, bars);
        bar_pos.sort_unstable();
        let mut consumed = 0u64;
        for (i, &b) in bar_pos.iter().enumerate() {
            let gap = b - consumed;
            if gap > 0 {
                nonzero.push((i as u64, gap));
            }
            consumed = b + 1;
        }
        let last = slots - consumed;
        if last > 0 {
            nonzero.push((bars, last));
        }
    }
    Draw::Counts { cells, nonzero }
}

/// Each item picks a cell independently and uniformly.
fn draw_assignment(rng: &mut ChaCha8Rng, total: u64, cells: u64) -> Draw {
    let mut counts = vec![0u32; cells as usize];
    let mut touched = Vec::with_capacity(total.min(cells) as usize);
    for _ in 0..total {
        let c = rng.random_range(0..cells) as usize;
        if counts[c] == 0 {
            touched.push(c as u64);
        }
        counts[c] += 1;
    }
    touched.sort_unstable();
    let nonzero = touched
        .into_iter()
        .map(|c| (c, counts[c as usize] as u64))
        .collect();
    Draw::Counts { cells, nonzero }
}

/// `total` balls drawn without replacement from `cells * per_colour` balls,
/// tallied by colour.
fn draw_colour_urn(rng: &mut ChaCha8Rng, total: u64, cells: u64, per_colour: u64) -> Draw {
    let mut balls = distinct_indices(rng, cells * per_colour, total);
    balls.sort_unstable();
    let mut nonzero: Vec<(u64, u64)> = Vec::new();
    for ball in balls {
        let colour = ball / per_colour;
        match nonzero.last_mut() {
            Some((c, count)) if *c == colour => *count += 1,
            _ => nonzero.push((colour, 1)),
        }
    }
    Draw::Counts { cells, nonzero }
}

/// Multinomial spread of `total` items over `cells` equal cells, peeling one
/// cell at a time with the conditionally binomial count. Appends only the
/// nonzero entries, in cell order.
fn split_uniform(rng: &mut ChaCha8Rng, mut total: u64, cells: u64, nonzero: &mut Vec<(u64, u64)>) {
    for i in 0..cells {
        if total == 0 {
            return;
        }
        let remaining = cells - i;
        if remaining == 1 {
            nonzero.push((i, total));
            return;
        }
        let x = Binomial::new(total, 1.0 / remaining as f64)
            .expect("1/remaining is in (0, 1]")
            .sample(rng);
        if x > 0 {
            nonzero.push((i, x));
        }
        total -= x;
    }
}

/// Weighted version of [`split_uniform`] for the Gamma-mixed urn.
fn split_weighted(
    rng: &mut ChaCha8Rng,
    mut total: u64,
    weights: &[f64],
    nonzero: &mut Vec<(u64, u64)>,
) {
    let mut mass: f64 = weights.iter().sum();
    for (i, &w) in weights.iter().enumerate() {
        if total == 0 {
            return;
        }
        if i + 1 == weights.len() {
            nonzero.push((i as u64, total));
            return;
        }
        // The guard only fires if the remaining mass underflows to zero;
        // dumping the rest on the current cell is the best that can be done
        // at that point.
        let p = if mass > 0.0 { (w / mass).min(1.0) } else { 1.0 };
        let x = Binomial::new(total, p)
            .expect("clamped split probability is in [0, 1]")
            .sample(rng);
        if x > 0 {
            nonzero.push((i as u64, x));
        }
        total -= x;
        mass -= w;
    }
}

/// Reinforced urn with `a` balls per colour and `b` black balls; every draw
/// goes back along with one more of the same kind. Runs until black has
/// shown `stops` times and tallies the colour draws.
fn draw_polya(rng: &mut ChaCha8Rng, stops: u64, cells: u64, a: u64, b: u64) -> Draw {
    let mut colour_w = vec![a; cells as usize];
    let mut colour_total = a * cells;
    let mut black_w = b;
    let mut counts = vec![0u64; cells as usize];
    let mut blacks = 0u64;
    while blacks < stops {
        let t = rng.random_range(0..colour_total + black_w);
        if t < black_w {
            blacks += 1;
            black_w += 1;
        } else {
            let mut x = t - black_w;
            let mut i = 0usize;
            while x >= colour_w[i] {
                x -= colour_w[i];
                i += 1;
            }
            counts[i] += 1;
            colour_w[i] += 1;
            colour_total += 1;
        }
    }
    let nonzero = counts
        .iter()
        .enumerate()
        .filter(|&(_, &c)| c > 0)
        .map(|(i, &c)| (i as u64, c))
        .collect();
    Draw::Counts { cells, nonzero }
}

/// Fractional-weight urn: Gamma cell rates give the Dirichlet mixing
/// measure, then the stopped run factorizes into a negative binomial total
/// and a weighted multinomial spread.
fn draw_mixed_stop_run(
    rng: &mut ChaCha8Rng,
    stops: u64,
    cells: u64,
    a: f64,
    b: f64,
) -> Result<Draw, SimulateError> {
    let cell_gamma =
        Gamma::new(a, 1.0).map_err(|e| bad_request(format!("mixed stopped run: {e}")))?;
    let black_gamma =
        Gamma::new(b, 1.0).map_err(|e| bad_request(format!("mixed stopped run: {e}")))?;
    let weights: Vec<f64> = (0..cells).map(|_| cell_gamma.sample(rng)).collect();
    let coloured: f64 = weights.iter().sum();
    let black = black_gamma.sample(rng).max(f64::MIN_POSITIVE);
    // Run length while the stop probability is black/(black+coloured).
    let rate_gamma = Gamma::new(stops as f64, coloured / black)
        .map_err(|e| bad_request(format!("mixed stopped run: {e}")))?;
    let rate = rate_gamma.sample(rng);
    let run = poisson_count(rng, rate);
    let mut nonzero = Vec::new();
    split_weighted(rng, run, &weights, &mut nonzero);
    Ok(Draw::Counts { cells, nonzero })
}

// ---- conditioned-forest sampler ----

/// Offspring-rejection sampler for the forest occupancy law: i.i.d. tree
/// sizes from a power-weighted offspring table, accepted when they sum to
/// the vertex budget. The conditional law does not depend on the table's
/// rate parameter, so the tuning below only buys acceptance probability.
struct ForestSampler {
    cells: u64,
    total: u64,
    /// Number of nonzero cells in one i.i.d. attempt.
    occupied: Binomial,
    /// Cumulative law of a nonzero cell value; entry `j` covers value `j+1`.
    value_cdf: Vec<f64>,
}

impl ForestSampler {
    fn build(total: u64, cells: u64) -> Result<ForestSampler, SimulateError> {
        let (_, weights) = tuned_offspring_table(total, cells)?;
        let mass: f64 = weights.iter().sum();
        let p_nonzero = 1.0 - weights[0] / mass;
        let occupied = Binomial::new(cells, p_nonzero)
            .map_err(|e| bad_request(format!("forest sampler: {e}")))?;
        let nonzero_mass = mass - weights[0];
        let mut acc = 0.0;
        let value_cdf = weights[1..]
            .iter()
            .map(|w| {
                acc += w / nonzero_mass;
                acc
            })
            .collect();
        Ok(ForestSampler {
            cells,
            total,
            occupied,
            value_cdf,
        })
    }

    fn draw(&self, rng: &mut ChaCha8Rng) -> Result<Draw, SimulateError> {
        for _ in 0..FOREST_ATTEMPT_CAP {
            // One i.i.d. attempt, factored as: how many cells are nonzero,
            // what values they take, where they sit. Only the sum decides
            // acceptance, so placement is deferred until after it.
            let k = self.occupied.sample(rng);
            if k > self.total {
                continue;
            }
            let mut values = Vec::with_capacity(k as usize);
            let mut sum = 0u64;
            for _ in 0..k {
                let u: f64 = rng.random();
                let v = self.value_cdf.partition_point(|&c| c < u) as u64 + 1;
                sum += v;
                if sum > self.total {
                    break;
                }
                values.push(v);
            }
            if sum != self.total || values.len() != k as usize {
                continue;
            }
            let mut cells_idx = distinct_indices(rng, self.cells, k);
            cells_idx.sort_unstable();
            let nonzero = cells_idx.into_iter().zip(values).collect();
            return Ok(Draw::Counts {
                cells: self.cells,
                nonzero,
            });
        }
        Err(SimulateError::RejectionBudget {
            attempts: FOREST_ATTEMPT_CAP,
        })
    }
}

/// Offspring weights `w_k` proportional to `rate^k (k+1)^(k-1)
/// exp(-(k+1) rate) / k!`, extended until the tail mass estimate drops
/// below [`FOREST_TAIL`] and at least past `need` so the conditional
/// support is complete.
fn offspring_weights(rate: f64, need: u64) -> Result<Vec<f64>, SimulateError> {
    let ln_rate = rate.ln();
    let mut w = Vec::new();
    let mut total = 0.0f64;
    let mut k = 0u64;
    loop {
        let kf = k as f64;
        let ln_w = kf * ln_rate + (kf - 1.0) * (kf + 1.0).ln()
            - (kf + 1.0) * rate
            - libm::lgamma(kf + 1.0);
        let wk = ln_w.exp();
        w.push(wk);
        total += wk;
        if k >= need && k >= 8 {
            if wk == 0.0 {
                break;
            }
            let ratio = wk / w[k as usize - 1];
            if ratio < 1.0 && wk * ratio / (1.0 - ratio) < FOREST_TAIL * total {
                break;
            }
        }
        k += 1;
        if k > 2_000_000 {
            return Err(bad_request(
                "forest sampler: offspring table failed to converge",
            ));
        }
    }
    Ok(w)
}

fn table_mean(w: &[f64]) -> f64 {
    let total: f64 = w.iter().sum();
    w.iter()
        .enumerate()
        .map(|(k, &x)| k as f64 * x)
        .sum::<f64>()
        / total
}

/// Pick the offspring rate whose truncated table has mean `total/cells`,
/// by bisection. The untruncated mean is `rate/(1 - rate)`, which seeds
/// the bracket.
fn tuned_offspring_table(total: u64, cells: u64) -> Result<(f64, Vec<f64>), SimulateError> {
    let target = total as f64 / cells as f64;
    let seed_rate = target / (1.0 + target);
    let mut lo = (seed_rate * 0.5).max(1e-300);
    let mut hi = (seed_rate + 1.0) / 2.0;
    for _ in 0..60 {
        if table_mean(&offspring_weights(hi, total)?) >= target {
            break;
        }
        hi = (hi + 1.0) / 2.0;
    }
    for _ in 0..200 {
        let mid = 0.5 * (lo + hi);
        if mid <= lo || mid >= hi {
            break;
        }
        if table_mean(&offspring_weights(mid, total)?) < target {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    let rate = 0.5 * (lo + hi);
    Ok((rate, offspring_weights(rate, total)?))
}

// ---- batches ----

/// Statistic values for `reps` independent replicates of one scheme.
///
/// The first column always tracks the scheme's own statistic: `S^{(r)}`
/// with the spec's `r` for the cell families (`column_r[0]` records it),
/// the plain count for the classical families (`column_r[0]` is `None`).
/// Extra columns record further occupancy orders from the same draws, which
/// is what cross-order correlations are computed from.
#[derive(Debug, Clone, PartialEq)]
pub struct SampleBatch {
    pub spec: SchemeSpec,
    pub seed: u64,
    pub reps: u64,
    pub column_r: Vec<Option<u64>>,
    pub stats: Vec<Vec<u64>>,
}

fn native_r(spec: &SchemeSpec) -> Option<u64> {
    match spec {
        SchemeSpec::Binomial(_)
        | SchemeSpec::NegBinomial(_)
        | SchemeSpec::Hypergeometric(_)
        | SchemeSpec::NegHypergeometric(_) => None,
        SchemeSpec::GasIndistinct(p) | SchemeSpec::GasDistinct(p) | SchemeSpec::GasForest(p) => {
            Some(p.r)
        }
        SchemeSpec::GasColoured(p) => Some(p.r),
        SchemeSpec::GiasNegmulti(p) => Some(p.r),
        SchemeSpec::GiasDirichlet(p) => Some(p.r),
    }
}

/// Sample `reps` replicates. `extra_r` requests additional occupancy orders
/// recorded from the same draws; duplicates of the scheme's own order are
/// dropped. It must be empty for the classical families, whose statistic is
/// a scalar.
pub fn sample_batch(
    spec: &SchemeSpec,
    seed: u64,
    reps: u64,
    extra_r: &[u64],
) -> Result<SampleBatch, SimulateError> {
    spec.validate()?;
    if reps == 0 {
        return Err(bad_request("a batch needs at least one replicate"));
    }
    let native = native_r(spec);
    if native.is_none() && !extra_r.is_empty() {
        return Err(bad_request(
            "the classical families have a scalar statistic; extra occupancy orders do not apply",
        ));
    }
    let engine = Engine::build(spec)?;
    let mut column_r = vec![native];
    for &r in extra_r {
        if !column_r.contains(&Some(r)) {
            column_r.push(Some(r));
        }
    }
    let orders: Vec<u64> = column_r.iter().map(|r| r.unwrap_or(0)).collect();

    let rows: Vec<Vec<u64>> = (0..reps)
        .into_par_iter()
        .map(|rep| {
            let mut rng = replicate_rng(seed, rep);
            let draw = engine.draw(&mut rng)?;
            Ok(orders.iter().map(|&r| draw.statistic(r)).collect())
        })
        .collect::<Result<_, SimulateError>>()?;

    let mut stats = vec![Vec::with_capacity(reps as usize); orders.len()];
    for row in rows {
        for (col, v) in stats.iter_mut().zip(row) {
            col.push(v);
        }
    }
    Ok(SampleBatch {
        spec: spec.clone(),
        seed,
        reps,
        column_r,
        stats,
    })
}

/// Per-column digest of a batch.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ColumnSummary {
    pub r: Option<u64>,
    pub mean: f64,
    pub variance: f64,
    pub min: u64,
    pub max: u64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct BatchSummary {
    pub family: String,
    pub seed: u64,
    pub reps: u64,
    pub columns: Vec<ColumnSummary>,
}

impl SampleBatch {
    /// The recorded column for occupancy order `r`, if any.
    pub fn column_for(&self, r: u64) -> Option<&[u64]> {
        self.column_r
            .iter()
            .position(|&c| c == Some(r))
            .map(|i| self.stats[i].as_slice())
    }

    pub fn summary(&self) -> BatchSummary {
        let columns = self
            .column_r
            .iter()
            .zip(&self.stats)
            .map(|(&r, col)| {
                let (mean, var) = mean_and_sample_variance(col);
                ColumnSummary {
                    r,
                    mean,
                    variance: var,
                    min: col.iter().copied().min().unwrap_or(0),
                    max: col.iter().copied().max().unwrap_or(0),
                }
            })
            .collect();
        BatchSummary {
            family: self.spec.family_name().to_string(),
            seed: self.seed,
            reps: self.reps,
            columns,
        }
    }

    pub fn summary_json(&self) -> String {
        let mut s = serde_json::to_string_pretty(&self.summary()).expect("summary serializes");
        s.push('\n');
        s
    }

    /// One row per replicate: the replicate's stream index, then the
    /// statistic columns.
    pub fn to_csv(&self) -> String {
        let mut out = String::from("replicate");
        for r in &self.column_r {
            match r {
                Some(r) => write!(out, ",s_r{r}").unwrap(),
                None => out.push_str(",s"),
            }
        }
        out.push('\n');
        for rep in 0..self.reps as usize {
            write!(out, "{rep}").unwrap();
            for col in &self.stats {
                write!(out, ",{}", col[rep]).unwrap();
            }
            out.push('\n');
        }
        out
    }
}

// ---- estimators ----

/// A point estimate with its plug-in standard error.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Estimate {
    pub value: f64,
    pub std_error: f64,
}

fn mean_and_sample_variance(values: &[u64]) -> (f64, f64) {
    welford(values.iter().map(|&v| v as f64))
}

/// Single-pass mean and sample variance (the `n - 1` normalization);
/// variance is 0 for fewer than two points.
fn welford(values: impl Iterator<Item = f64>) -> (f64, f64) {
    let mut mean = 0.0f64;
    let mut m2 = 0.0f64;
    let mut count = 0u64;
    for v in values {
        count += 1;
        let d = v - mean;
        mean += d / count as f64;
        m2 += d * (v - mean);
    }
    if count < 2 {
        (mean, 0.0)
    } else {
        (mean, m2 / (count - 1) as f64)
    }
}

fn falling_f64(s: u64, k: u64) -> f64 {
    if k > s {
        return 0.0;
    }
    (0..k).map(|i| (s - i) as f64).product()
}

/// Mean of the falling product `S (S-1) ... (S-k+1)` over the batch's
/// primary column, with its standard error. An unbiased estimate of the
/// `k`th factorial moment.
pub fn empirical_factorial_moment(
    batch: &SampleBatch,
    k: u64,
) -> Result<Estimate, SimulateError> {
    if batch.reps < 2 {
        return Err(bad_request(
            "a factorial-moment estimate needs at least two replicates",
        ));
    }
    let (mean, var) = welford(batch.stats[0].iter().map(|&s| falling_f64(s, k)));
    Ok(Estimate {
        value: mean,
        std_error: (var / batch.reps as f64).sqrt(),
    })
}

fn normal_cdf(x: f64) -> f64 {
    0.5 * libm::erfc(-x / std::f64::consts::SQRT_2)
}

/// Kolmogorov-Smirnov distance between the batch's primary column,
/// standardized by the supplied mean and standard deviation, and the
/// standard normal law.
pub fn ks_to_normal(batch: &SampleBatch, mean: f64, sd: f64) -> Result<f64, SimulateError> {
    if !mean.is_finite() || !sd.is_finite() || sd <= 0.0 {
        return Err(bad_request(
            "standardization needs a finite mean and a positive standard deviation",
        ));
    }
    if batch.reps < MIN_KS_REPS {
        return Err(bad_request(format!(
            "the KS statistic needs at least {MIN_KS_REPS} replicates, got {}",
            batch.reps
        )));
    }
    let mut z: Vec<f64> = batch.stats[0]
        .iter()
        .map(|&s| (s as f64 - mean) / sd)
        .collect();
    z.sort_unstable_by(f64::total_cmp);
    let n = z.len() as f64;
    let mut d = 0.0f64;
    for (i, &x) in z.iter().enumerate() {
        let phi = normal_cdf(x);
        d = d.max((phi - i as f64 / n).abs());
        d = d.max(((i + 1) as f64 / n - phi).abs());
    }
    Ok(d)
}

/// Pearson correlation between the recorded columns for orders `r1` and
/// `r2`, with the large-sample standard error `(1 - rho^2) / sqrt(reps)`.
pub fn empirical_correlation(
    batch: &SampleBatch,
    r1: u64,
    r2: u64,
) -> Result<Estimate, SimulateError> {
    let a = batch
        .column_for(r1)
        .ok_or(SimulateError::MissingColumn { r: r1 })?;
    let b = batch
        .column_for(r2)
        .ok_or(SimulateError::MissingColumn { r: r2 })?;
    if batch.reps < 2 {
        return Err(bad_request(
            "a correlation estimate needs at least two replicates",
        ));
    }
    let n = batch.reps as f64;
    let mean_a = a.iter().map(|&v| v as f64).sum::<f64>() / n;
    let mean_b = b.iter().map(|&v| v as f64).sum::<f64>() / n;
    let mut va = 0.0;
    let mut vb = 0.0;
    let mut cov = 0.0;
    for (&x, &y) in a.iter().zip(b) {
        let dx = x as f64 - mean_a;
        let dy = y as f64 - mean_b;
        va += dx * dx;
        vb += dy * dy;
        cov += dx * dy;
    }
    if va == 0.0 {
        return Err(SimulateError::DegenerateStatistic { r: r1 });
    }
    if vb == 0.0 {
        return Err(SimulateError::DegenerateStatistic { r: r2 });
    }
    let rho = cov / (va * vb).sqrt();
    Ok(Estimate {
        value: rho,
        std_error: (1.0 - rho * rho) / n.sqrt(),
    })
}
