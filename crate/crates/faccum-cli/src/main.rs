//! Command-line front end: identity sweeps, moment-kind conversion, scheme
//! queries, normality-condition reports, and Monte Carlo batches.
//!
//! Exit status: 0 when the requested checks pass, 2 when a mathematical
//! assertion fails (an identity violation, a failed trend condition), 1 for
//! usage and domain errors. Deterministic subcommands produce byte-identical
//! output for identical configuration.

use std::fs;
use std::path::PathBuf;
use std::process::ExitCode;

use anyhow::{anyhow, bail, Context, Result};
use clap::{Args, Parser, Subcommand};
use serde::{Deserialize, Serialize};
use serde_json::{json, Value};

use faccum::bigfloat::RealCtx;
use faccum::diagnostics::condition_report;
use faccum::exact::Rational;
use faccum::identity::{verify_boundary_nonvanishing, verify_vanishing_region};
use faccum::schemes::{
    decomposition, decomposition_residual, factorial_moment, mean_and_variance, BernoulliParams,
    ColouredParams, DirichletParams, FamilyKind, HypergeometricParams, NegHypergeometricParams,
    NegmultiParams, OccupancyParams, SchemeSpec, SchemeValue,
};
use faccum::serde_util::rational_from_str;
use faccum::simulate::{
    empirical_correlation, empirical_factorial_moment, ks_to_normal, sample_batch,
};
use faccum::transforms::{convert, MomentKind, MomentSequence};

#[derive(Parser)]
#[command(
    name = "faccum",
    version,
    about = "Factorial-moment toolkit: exact transforms, scheme moments, and normality diagnostics"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Sweep the partition identity over a weight and length region
    Identity(IdentityArgs),
    /// Convert a moment sequence between kinds, exactly
    Transform(TransformArgs),
    /// Closed-form factorial moments and decomposition data for one scheme
    Scheme(SchemeArgs),
    /// Normality-condition report for one family over a size grid
    CltReport(CltReportArgs),
    /// Monte Carlo batch with summary statistics
    Simulate(SimulateArgs),
}

#[derive(Args)]
struct CommonArgs {
    /// JSON config file; explicit flags override its fields
    #[arg(long)]
    config: Option<PathBuf>,
    /// Write the report to this path instead of stdout
    #[arg(long)]
    output: Option<PathBuf>,
    /// Report format where both are supported
    #[arg(long, value_enum)]
    format: Option<OutFormat>,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, clap::ValueEnum)]
enum OutFormat {
    Json,
    Csv,
}

#[derive(Args)]
struct IdentityArgs {
    /// Largest weight J to sweep
    #[arg(long = "jmax", alias = "Jmax")]
    j_max: Option<u64>,
    /// Largest exponent count I to sweep
    #[arg(long = "imax", alias = "Imax")]
    i_max: Option<u64>,
    /// Also sweep the boundary multisets, where nonzero values are expected
    #[arg(long)]
    boundary: bool,
    #[command(flatten)]
    common: CommonArgs,
}

#[derive(Args)]
struct TransformArgs {
    /// Moment file: JSON {"kind": "...", "values": [...]}
    #[arg(long)]
    input: Option<PathBuf>,
    /// Kind the input file must hold
    #[arg(long)]
    from: Option<String>,
    /// Kind to convert to
    #[arg(long)]
    to: Option<String>,
    /// Number of leading orders to convert
    #[arg(long)]
    order: Option<u64>,
    #[command(flatten)]
    common: CommonArgs,
}

#[derive(Args)]
struct SchemeArgs {
    /// Scheme as inline JSON: {"family": "...", "params": {...}}
    #[arg(long)]
    spec: Option<String>,
    /// Number of factorial moments to report
    #[arg(long)]
    moments: Option<u64>,
    /// Also report the log-moment decomposition data
    #[arg(long)]
    decomposition: bool,
    /// Truncation depth for the decomposition series
    #[arg(long = "jtrunc")]
    j_trunc: Option<u32>,
    #[command(flatten)]
    common: CommonArgs,
}

#[derive(Args)]
struct CltReportArgs {
    /// Family to place on the grid
    #[arg(long = "spec-family")]
    family: Option<String>,
    /// Comma-separated strictly increasing sizes
    #[arg(long, value_delimiter = ',')]
    grid: Option<Vec<u64>>,
    /// Deepest standardized cumulant to track
    #[arg(long = "jmax", alias = "Jmax")]
    j_max: Option<u64>,
    /// Occupancy order r for the cell families
    #[arg(long)]
    r: Option<u64>,
    /// Cell growth ratio N/n, a rational or "inf" for N = n^2
    #[arg(long)]
    lambda: Option<String>,
    /// Ratio M/n for the urn families (defaults to lambda for the classical
    /// urn, 1 for the coloured scheme)
    #[arg(long = "m-ratio")]
    m_ratio: Option<String>,
    /// Success probability for the binomial and negative binomial
    #[arg(long)]
    p: Option<String>,
    /// Mixing weight alpha (beta-binomial) or total colour probability N p
    /// (negative multinomial)
    #[arg(long)]
    alpha: Option<String>,
    /// Mixing weight beta (beta-binomial) or ratio b/n (urn stop weight)
    #[arg(long)]
    beta: Option<String>,
    /// Colour weight a for the reinforced urn
    #[arg(long)]
    a: Option<String>,
    #[command(flatten)]
    common: CommonArgs,
}

#[derive(Args)]
struct SimulateArgs {
    /// Scheme as inline JSON: {"family": "...", "params": {...}}
    #[arg(long)]
    spec: Option<String>,
    /// Number of replicates
    #[arg(long)]
    reps: Option<u64>,
    /// Stream seed; replicate i draws from stream (seed, i)
    #[arg(long)]
    seed: Option<u64>,
    /// Kolmogorov-Smirnov distance against the scheme's exact mean and sd
    #[arg(long)]
    ks: bool,
    /// Pair "r1,r2" of occupancy orders to correlate
    #[arg(long)]
    correlations: Option<String>,
    /// Extra occupancy orders to record alongside the scheme's own
    #[arg(long = "extra-r", value_delimiter = ',')]
    extra_r: Option<Vec<u64>>,
    /// Compare empirical factorial moments with closed forms up to this order
    #[arg(long)]
    moments: Option<u64>,
    #[command(flatten)]
    common: CommonArgs,
}

/// Optional fields mirroring the flags; a flag that was given wins over the
/// file value, and built-in defaults fill whatever remains.
#[derive(Default, Deserialize)]
#[serde(default, deny_unknown_fields)]
struct FileConfig {
    j_max: Option<u64>,
    i_max: Option<u64>,
    boundary: Option<bool>,
    input: Option<PathBuf>,
    from: Option<String>,
    to: Option<String>,
    order: Option<u64>,
    spec: Option<Value>,
    moments: Option<u64>,
    decomposition: Option<bool>,
    j_trunc: Option<u32>,
    family: Option<String>,
    grid: Option<Vec<u64>>,
    r: Option<u64>,
    lambda: Option<String>,
    m_ratio: Option<String>,
    p: Option<String>,
    alpha: Option<String>,
    beta: Option<String>,
    a: Option<String>,
    reps: Option<u64>,
    seed: Option<u64>,
    ks: Option<bool>,
    correlations: Option<String>,
    extra_r: Option<Vec<u64>>,
    output: Option<PathBuf>,
    format: Option<String>,
}

impl FileConfig {
    fn load(path: &Option<PathBuf>) -> Result<FileConfig> {
        match path {
            None => Ok(FileConfig::default()),
            Some(p) => {
                let text = fs::read_to_string(p)
                    .with_context(|| format!("cannot read config file {}", p.display()))?;
                serde_json::from_str(&text)
                    .with_context(|| format!("cannot parse config file {}", p.display()))
            }
        }
    }
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            // Help and version requests arrive as "errors" too; only real
            // usage mistakes take the domain-error status.
            let code = if e.use_stderr() {
                ExitCode::from(1)
            } else {
                ExitCode::SUCCESS
            };
            let _ = e.print();
            return code;
        }
    };
    match run(cli) {
        Ok(true) => ExitCode::SUCCESS,
        Ok(false) => ExitCode::from(2),
        Err(err) => {
            eprintln!("error: {err:#}");
            ExitCode::from(1)
        }
    }
}

/// Returns whether every checked assertion passed; errors are usage or
/// domain problems.
fn run(cli: Cli) -> Result<bool> {
    match cli.command {
        Command::Identity(args) => run_identity(args),
        Command::Transform(args) => run_transform(args),
        Command::Scheme(args) => run_scheme(args),
        Command::CltReport(args) => run_clt_report(args),
        Command::Simulate(args) => run_simulate(args),
    }
}

// ---- shared plumbing ----

fn resolve_format(
    flag: Option<OutFormat>,
    file: &Option<String>,
    csv_supported: bool,
) -> Result<OutFormat> {
    let chosen = match (flag, file) {
        (Some(f), _) => f,
        (None, Some(s)) => match s.as_str() {
            "json" => OutFormat::Json,
            "csv" => OutFormat::Csv,
            other => bail!("unknown format {other:?} in config file"),
        },
        (None, None) => OutFormat::Json,
    };
    if chosen == OutFormat::Csv && !csv_supported {
        bail!("this subcommand emits JSON only");
    }
    Ok(chosen)
}

fn emit(output: &Option<PathBuf>, text: &str) -> Result<()> {
    match output {
        Some(path) => fs::write(path, text)
            .with_context(|| format!("cannot write output to {}", path.display())),
        None => {
            print!("{text}");
            Ok(())
        }
    }
}

fn emit_json(output: &Option<PathBuf>, value: &Value) -> Result<()> {
    let mut text = serde_json::to_string_pretty(value).expect("report serializes");
    text.push('\n');
    emit(output, &text)
}

fn parse_rational_flag(s: &str, what: &str) -> Result<Rational> {
    rational_from_str(s).map_err(|e| anyhow!("bad {what}: {e}"))
}

fn rational_json(q: &Rational) -> Value {
    json!({"num": q.numer().to_string(), "den": q.denom().to_string()})
}

fn scheme_value_json(v: &SchemeValue) -> Value {
    match v {
        SchemeValue::Exact(q) => rational_json(q),
        SchemeValue::Real(b) => json!(RealCtx::to_f64(b)),
    }
}

fn parse_family(name: &str) -> Result<FamilyKind> {
    FamilyKind::ALL
        .into_iter()
        .find(|k| k.as_str() == name)
        .ok_or_else(|| {
            anyhow!(
                "unknown family {name:?}; expected one of {}",
                FamilyKind::ALL.map(|k| k.as_str()).join(", ")
            )
        })
}

fn parse_spec(flag: &Option<String>, file: &Option<Value>) -> Result<SchemeSpec> {
    match (flag, file) {
        (Some(text), _) => serde_json::from_str(text).context("cannot parse --spec"),
        (None, Some(value)) => {
            serde_json::from_value(value.clone()).context("cannot parse spec from config file")
        }
        (None, None) => bail!("a scheme spec is required (--spec or config file)"),
    }
}

fn parse_kind(name: &str) -> Result<MomentKind> {
    serde_json::from_value(Value::String(name.to_string()))
        .map_err(|_| anyhow!("unknown moment kind {name:?}; expected raw, cumulant, factorial, or factorial-cumulant"))
}

fn kind_name(kind: MomentKind) -> String {
    match serde_json::to_value(kind).expect("kind serializes") {
        Value::String(s) => s,
        _ => unreachable!("moment kinds serialize as strings"),
    }
}

// ---- identity ----

fn run_identity(args: IdentityArgs) -> Result<bool> {
    let file = FileConfig::load(&args.common.config)?;
    let format = resolve_format(args.common.format, &file.format, false)?;
    let output = args.common.output.clone().or(file.output);
    let j_max = args.j_max.or(file.j_max).unwrap_or(8);
    let i_max = args.i_max.or(file.i_max).unwrap_or(2);
    let boundary = args.boundary || file.boundary.unwrap_or(false);
    if !(2..=20).contains(&j_max) {
        bail!("--jmax must lie in 2..=20, got {j_max}");
    }
    if !(1..=5).contains(&i_max) {
        bail!("--imax must lie in 1..=5, got {i_max}");
    }
    let _ = format;

    let vanishing = verify_vanishing_region(j_max, i_max);
    let mut pass = vanishing.violations.is_empty();
    let mut report = json!({
        "effective_config": {
            "command": "identity",
            "j_max": j_max,
            "i_max": i_max,
            "boundary": boundary,
            "format": "json",
        },
        "vanishing": serde_json::to_value(&vanishing)?,
    });
    if boundary {
        let edge = verify_boundary_nonvanishing(j_max, i_max);
        pass &= edge.missing_nonzero.is_empty();
        report["boundary"] = serde_json::to_value(&edge)?;
    }
    emit_json(&output, &report)?;
    Ok(pass)
}

// ---- transform ----

#[derive(Serialize)]
struct TransformReport {
    effective_config: Value,
    #[serde(flatten)]
    result: MomentSequence,
}

fn run_transform(args: TransformArgs) -> Result<bool> {
    let file = FileConfig::load(&args.common.config)?;
    resolve_format(args.common.format, &file.format, false)?;
    let output = args.common.output.clone().or(file.output);
    let input = args
        .input
        .or(file.input)
        .ok_or_else(|| anyhow!("--input is required"))?;
    let from = parse_kind(
        &args
            .from
            .or(file.from)
            .ok_or_else(|| anyhow!("--from is required"))?,
    )?;
    let to = parse_kind(
        &args
            .to
            .or(file.to)
            .ok_or_else(|| anyhow!("--to is required"))?,
    )?;

    let text = fs::read_to_string(&input)
        .with_context(|| format!("cannot read moment file {}", input.display()))?;
    let seq: MomentSequence = serde_json::from_str(&text)
        .with_context(|| format!("cannot parse moment file {}", input.display()))?;
    if seq.kind != from {
        bail!(
            "moment file holds {} values, not {} as requested",
            kind_name(seq.kind),
            kind_name(from)
        );
    }
    let order = args.order.or(file.order).unwrap_or(seq.values.len() as u64);
    if order == 0 || order > seq.values.len() as u64 {
        bail!(
            "--order must lie in 1..={}, the number of values in the file",
            seq.values.len()
        );
    }
    let truncated = MomentSequence::new(seq.kind, seq.values[..order as usize].to_vec());
    let result = convert(&truncated, to)?;

    let report = TransformReport {
        effective_config: json!({
            "command": "transform",
            "input": input.display().to_string(),
            "from": kind_name(from),
            "to": kind_name(to),
            "order": order,
            "format": "json",
        }),
        result,
    };
    let mut text = serde_json::to_string_pretty(&report)?;
    text.push('\n');
    emit(&output, &text)?;
    Ok(true)
}

// ---- scheme ----

fn run_scheme(args: SchemeArgs) -> Result<bool> {
    let file = FileConfig::load(&args.common.config)?;
    resolve_format(args.common.format, &file.format, false)?;
    let output = args.common.output.clone().or(file.output);
    let spec = parse_spec(&args.spec, &file.spec)?;
    let moments = args.moments.or(file.moments).unwrap_or(4);
    let want_decomposition = args.decomposition || file.decomposition.unwrap_or(false);
    let j_trunc = args.j_trunc.or(file.j_trunc).unwrap_or(10);
    if moments == 0 {
        bail!("--moments must be at least 1");
    }

    let mut ctx = RealCtx::default();
    let mut moment_rows = Vec::new();
    for k in 1..=moments {
        let value = factorial_moment(&spec, k, &mut ctx)?;
        moment_rows.push(json!({"k": k, "value": scheme_value_json(&value)}));
    }
    let (mean, variance) = mean_and_variance(&spec, &mut ctx)?;

    let mut report = json!({
        "effective_config": {
            "command": "scheme",
            "spec": serde_json::to_value(&spec)?,
            "moments": moments,
            "decomposition": want_decomposition,
            "j_trunc": j_trunc,
            "format": "json",
        },
        "family": spec.family_name(),
        "moments": moment_rows,
        "mean": scheme_value_json(&mean),
        "variance": scheme_value_json(&variance),
    });

    if want_decomposition {
        let data = decomposition(&spec, j_trunc, &mut ctx)?;
        let q: Vec<Vec<f64>> = data
            .q
            .iter()
            .map(|poly| poly.iter().map(RealCtx::to_f64).collect())
            .collect();
        let residual = decomposition_residual(&spec, moments.min(4), j_trunc, &mut ctx)?;
        report["decomposition"] = json!({
            "l_n": scheme_value_json(&data.l_n),
            "ln_l": RealCtx::to_f64(&data.ln_l),
            "c_bound": data.c_bound,
            "q": q,
            "residual_orders": moments.min(4),
            "residual": residual,
        });
    }
    emit_json(&output, &report)?;
    Ok(true)
}

// ---- clt-report ----

enum GrowthRatio {
    Proportional(Rational),
    Quadratic,
}

fn parse_growth(s: &str) -> Result<GrowthRatio> {
    if s == "inf" || s == "infinity" {
        Ok(GrowthRatio::Quadratic)
    } else {
        Ok(GrowthRatio::Proportional(parse_rational_flag(
            s, "--lambda",
        )?))
    }
}

fn scaled_size(ratio: &Rational, n: u64, what: &str) -> Result<u64> {
    use num_traits::ToPrimitive;
    let value = (ratio * Rational::from_integer(n.into())).round();
    value
        .to_integer()
        .to_u64()
        .filter(|&v| v >= 1)
        .ok_or_else(|| anyhow!("{what} * n must round to a positive cell count"))
}

fn cell_count(growth: &GrowthRatio, n: u64) -> Result<u64> {
    match growth {
        GrowthRatio::Proportional(q) => scaled_size(q, n, "--lambda"),
        GrowthRatio::Quadratic => n
            .checked_mul(n)
            .ok_or_else(|| anyhow!("n^2 cell count overflows for n = {n}")),
    }
}

struct GridParams {
    r: u64,
    growth: GrowthRatio,
    m_ratio: Option<Rational>,
    p: Option<Rational>,
    alpha: Option<Rational>,
    beta: Option<Rational>,
    a: Option<Rational>,
}

fn grid_spec(kind: FamilyKind, n: u64, params: &GridParams) -> Result<SchemeSpec> {
    let need = |opt: &Option<Rational>, flag: &str| {
        opt.clone()
            .ok_or_else(|| anyhow!("{} requires {flag}", kind.as_str()))
    };
    Ok(match kind {
        FamilyKind::Binomial => SchemeSpec::Binomial(BernoulliParams {
            n,
            p: need(&params.p, "--p")?,
        }),
        FamilyKind::NegBinomial => SchemeSpec::NegBinomial(BernoulliParams {
            n,
            p: need(&params.p, "--p")?,
        }),
        FamilyKind::Hypergeometric => {
            let big_n = cell_count(&params.growth, n)?;
            let big_m = match &params.m_ratio {
                Some(q) => scaled_size(q, n, "--m-ratio")?,
                None => big_n,
            };
            SchemeSpec::Hypergeometric(HypergeometricParams { big_n, big_m, n })
        }
        FamilyKind::NegHypergeometric => SchemeSpec::NegHypergeometric(NegHypergeometricParams {
            n,
            alpha: params.alpha.clone().unwrap_or_else(|| Rational::from_integer(1.into())),
            beta: params.beta.clone().unwrap_or_else(|| Rational::from_integer(1.into())),
        }),
        FamilyKind::GasIndistinct => SchemeSpec::GasIndistinct(OccupancyParams {
            n,
            big_n: cell_count(&params.growth, n)?,
            r: params.r,
        }),
        FamilyKind::GasDistinct => SchemeSpec::GasDistinct(OccupancyParams {
            n,
            big_n: cell_count(&params.growth, n)?,
            r: params.r,
        }),
        FamilyKind::GasColoured => {
            let big_m = match &params.m_ratio {
                Some(q) => scaled_size(q, n, "--m-ratio")?,
                None => n,
            };
            SchemeSpec::GasColoured(ColouredParams {
                n,
                big_n: cell_count(&params.growth, n)?,
                big_m,
                r: params.r,
            })
        }
        FamilyKind::GasForest => SchemeSpec::GasForest(OccupancyParams {
            n,
            big_n: cell_count(&params.growth, n)?,
            r: params.r,
        }),
        FamilyKind::GiasNegmulti => {
            let big_n = cell_count(&params.growth, n)?;
            let alpha = params
                .alpha
                .clone()
                .unwrap_or_else(|| Rational::new(1.into(), 2.into()));
            // Keep N p pinned at alpha along the grid.
            let p = alpha / Rational::from_integer(big_n.into());
            SchemeSpec::GiasNegmulti(NegmultiParams {
                n,
                big_n,
                p,
                r: params.r,
            })
        }
        FamilyKind::GiasDirichlet => {
            let beta = params
                .beta
                .clone()
                .unwrap_or_else(|| Rational::from_integer(1.into()));
            SchemeSpec::GiasDirichlet(DirichletParams {
                n,
                big_n: cell_count(&params.growth, n)?,
                a: params.a.clone().unwrap_or_else(|| Rational::from_integer(1.into())),
                b: beta * Rational::from_integer(n.into()),
                r: params.r,
            })
        }
    })
}

fn run_clt_report(args: CltReportArgs) -> Result<bool> {
    let file = FileConfig::load(&args.common.config)?;
    let format = resolve_format(args.common.format, &file.format, true)?;
    let output = args.common.output.clone().or(file.output);
    let family = parse_family(
        &args
            .family
            .or(file.family)
            .ok_or_else(|| anyhow!("--spec-family is required"))?,
    )?;
    let grid = args
        .grid
        .or(file.grid)
        .ok_or_else(|| anyhow!("--grid is required"))?;
    if grid.len() < 2 || grid.windows(2).any(|w| w[0] >= w[1]) {
        bail!("--grid must list at least two strictly increasing sizes");
    }
    let j_max = args.j_max.or(file.j_max).unwrap_or(6);
    let j_max = u32::try_from(j_max).map_err(|_| anyhow!("--jmax is out of range"))?;

    let lambda_text = args.lambda.or(file.lambda).unwrap_or_else(|| "1".into());
    let opt_rat = |flag: Option<String>, file: Option<String>, what: &str| -> Result<Option<Rational>> {
        flag.or(file)
            .map(|s| parse_rational_flag(&s, what))
            .transpose()
    };
    let params = GridParams {
        r: args.r.or(file.r).unwrap_or(2),
        growth: parse_growth(&lambda_text)?,
        m_ratio: opt_rat(args.m_ratio, file.m_ratio, "--m-ratio")?,
        p: opt_rat(args.p, file.p, "--p")?,
        alpha: opt_rat(args.alpha, file.alpha, "--alpha")?,
        beta: opt_rat(args.beta, file.beta, "--beta")?,
        a: opt_rat(args.a, file.a, "--a")?,
    };

    let specs = grid
        .iter()
        .map(|&n| grid_spec(family, n, &params))
        .collect::<Result<Vec<_>>>()?;
    let report = condition_report(&specs, j_max)?;
    let pass = report.trends.war1_pass
        && report.trends.war2_pass
        && report.trends.fjc_pass
        && report.trends.ln0_pass;

    let config = json!({
        "command": "clt-report",
        "family": family.as_str(),
        "grid": grid,
        "j_max": j_max,
        "r": params.r,
        "lambda": lambda_text,
        "format": match format { OutFormat::Json => "json", OutFormat::Csv => "csv" },
    });
    match format {
        OutFormat::Json => {
            let body = json!({
                "effective_config": config,
                "report": serde_json::to_value(&report)?,
            });
            emit_json(&output, &body)?;
        }
        OutFormat::Csv => {
            // The table stays machine-clean; the config block goes to stderr.
            eprintln!("{config}");
            emit(&output, &report.to_csv())?;
        }
    }
    Ok(pass)
}

// ---- simulate ----

fn run_simulate(args: SimulateArgs) -> Result<bool> {
    let file = FileConfig::load(&args.common.config)?;
    let format = resolve_format(args.common.format, &file.format, true)?;
    let output = args.common.output.clone().or(file.output);
    let spec = parse_spec(&args.spec, &file.spec)?;
    let reps = args.reps.or(file.reps).unwrap_or(10_000);
    let seed = args.seed.or(file.seed).unwrap_or(0);
    let want_ks = args.ks || file.ks.unwrap_or(false);
    let moments = args.moments.or(file.moments).unwrap_or(3);
    let correlations = match args.correlations.or(file.correlations) {
        None => None,
        Some(text) => {
            let parts: Vec<&str> = text.split(',').collect();
            let [r1, r2] = parts.as_slice() else {
                bail!("--correlations takes exactly two comma-separated orders");
            };
            Some((r1.trim().parse::<u64>()?, r2.trim().parse::<u64>()?))
        }
    };

    // Record whatever extra occupancy orders the analyses will need.
    let mut extra_r = args.extra_r.or(file.extra_r).unwrap_or_default();
    if let Some((r1, r2)) = correlations {
        for r in [r1, r2] {
            if !extra_r.contains(&r) {
                extra_r.push(r);
            }
        }
    }

    let batch = sample_batch(&spec, seed, reps, &extra_r)?;

    let mut ctx = RealCtx::default();
    let mut moment_rows = Vec::new();
    for k in 1..=moments {
        let est = empirical_factorial_moment(&batch, k)?;
        let exact = factorial_moment(&spec, k, &mut ctx)?;
        moment_rows.push(json!({
            "k": k,
            "estimate": est.value,
            "std_error": est.std_error,
            "closed_form": exact.to_f64(),
        }));
    }

    let ks_block = if want_ks {
        let (mean, variance) = mean_and_variance(&spec, &mut ctx)?;
        let mean = mean.to_f64();
        let sd = variance.to_f64().sqrt();
        let distance = ks_to_normal(&batch, mean, sd)?;
        Some(json!({"mean": mean, "sd": sd, "distance": distance}))
    } else {
        None
    };

    let corr_block = match correlations {
        Some((r1, r2)) => {
            let est = empirical_correlation(&batch, r1, r2)?;
            Some(json!({
                "r1": r1,
                "r2": r2,
                "estimate": est.value,
                "std_error": est.std_error,
            }))
        }
        None => None,
    };

    let config = json!({
        "command": "simulate",
        "spec": serde_json::to_value(&spec)?,
        "reps": reps,
        "seed": seed,
        "ks": want_ks,
        "moments": moments,
        "extra_r": extra_r,
        "format": match format { OutFormat::Json => "json", OutFormat::Csv => "csv" },
    });
    let mut summary = json!({
        "effective_config": config,
        "summary": serde_json::to_value(batch.summary())?,
        "moments": moment_rows,
    });
    if let Some(block) = ks_block {
        summary["ks"] = block;
    }
    if let Some(block) = corr_block {
        summary["correlation"] = block;
    }

    match format {
        OutFormat::Json => emit_json(&output, &summary)?,
        OutFormat::Csv => {
            // Rows to the output, analyses to stderr so the table parses.
            eprintln!("{summary}");
            emit(&output, &batch.to_csv())?;
        }
    }
    Ok(true)
}
