//! Command-line frontend: parse ring and ideal descriptions, orchestrate
//! the library computations, and emit machine-readable reports.
//!
//! Exit codes: 0 on success, 2 on usage errors (bad flags, malformed
//! monomial text, non-prime characteristic, p dividing the Veronese
//! degree), 3 on computation errors (preconditions on otherwise
//! well-formed inputs, such as an ideal that is not zero-dimensional).
//!
//! Reports are deterministic: the same invocation (including the seed)
//! produces byte-identical output. Exact rationals serialize as
//! `numerator/denominator` strings, never as floating point.

use std::path::PathBuf;

use clap::error::ErrorKind;
use clap::{Parser, Subcommand};
use frobkit_core::gf::Gf;
use frobkit_core::invariants::{
    classify, growth_order, limsup_estimate, Estimate, InvariantSeries,
};
use frobkit_core::staircase::parse_ideal;
use frobkit_core::surjectivity::bq_oracle;
use frobkit_core::veronese::{dual_b_lower, dual_b_upper, VeroneseModule};
use frobkit_core::{Error, socle::SocleProblem};
use num_bigint::{BigInt, BigUint};
use num_rational::BigRational;
use num_traits::{One, Zero};
use serde::Serialize;

/// A failed invocation: the process exit code plus a one-line diagnostic.
#[derive(Debug)]
pub struct Failure {
    pub code: i32,
    pub message: String,
}

const USAGE: i32 = 2;
const COMPUTATION: i32 = 3;

impl From<Error> for Failure {
    fn from(e: Error) -> Failure {
        let code = match e {
            // The invocation itself is malformed: bad grammar or an
            // argument combination ruled out a priori.
            Error::EmptyIdeal
            | Error::ZeroAmbientDimension
            | Error::DimensionMismatch { .. }
            | Error::MonomialSyntax { .. }
            | Error::NotPrime(_)
            | Error::NotPrimePower(_)
            | Error::PrimeDividesDegree { .. }
            | Error::ClassOutOfRange { .. }
            | Error::DegreeTooSmall(_) => USAGE,
            // Well-formed inputs rejected by a computation-level
            // precondition or a runtime limit.
            _ => COMPUTATION,
        };
        Failure {
            code,
            message: format!("error: {e}"),
        }
    }
}

fn usage_error(message: impl Into<String>) -> Failure {
    Failure {
        code: USAGE,
        message: format!("error: {}", message.into()),
    }
}

fn computation_error(message: impl Into<String>) -> Failure {
    Failure {
        code: COMPUTATION,
        message: format!("error: {}", message.into()),
    }
}

#[derive(Parser)]
#[command(
    name = "frobkit",
    version,
    about = "Exact positive-characteristic singularity invariants",
    max_term_width = 80
)]
struct Cli {
    /// Report format: json or csv
    #[arg(long, global = true, default_value = "json")]
    format: String,
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Colength series of Frobenius bracket powers of a monomial ideal
    Hk {
        /// Generators, e.g. "x^2, x*y, y^2"
        #[arg(long)]
        ideal: String,
        /// Working prime characteristic
        #[arg(long)]
        prime: u64,
        /// Largest Frobenius level e (series runs e = 1..=emax)
        #[arg(long)]
        emax: u32,
        /// Tail window for the convergence gap
        #[arg(long, default_value_t = 3)]
        window: usize,
    },
    /// Exact limiting multiplicity of a monomial ideal
    HkExact {
        #[arg(long)]
        ideal: String,
    },
    /// Multiplicity drop from an ideal to a larger one containing it
    RelativeHk {
        /// Inner ideal
        #[arg(long)]
        ideal: String,
        /// Outer ideal; must contain every generator of the inner one
        #[arg(long)]
        outer: String,
    },
    /// Minimal multiplicity drop over socle representatives of a
    /// pure-power ideal
    REstimate {
        #[arg(long)]
        ideal: String,
    },
    /// Class multiplicities of one Frobenius pushforward of a Veronese
    /// module
    Decompose {
        /// Veronese degree (n >= 2, coprime to the prime)
        #[arg(long)]
        n: u64,
        /// Divisor class index in 0..n
        #[arg(long)]
        class: u64,
        #[arg(long)]
        prime: u64,
        /// Frobenius level
        #[arg(long, default_value_t = 1)]
        e: u32,
    },
    /// Splitting-number series and F-signature estimate of a Veronese
    /// ring
    Fsig {
        #[arg(long)]
        n: u64,
        #[arg(long)]
        prime: u64,
        #[arg(long)]
        emax: u32,
        #[arg(long, default_value_t = 3)]
        window: usize,
    },
    /// Certified surjective-number series and dual F-signature estimate
    DualFsig {
        #[arg(long)]
        n: u64,
        #[arg(long)]
        class: u64,
        #[arg(long)]
        prime: u64,
        #[arg(long)]
        emax: u32,
        #[arg(long, default_value_t = 3)]
        window: usize,
    },
    /// Randomized maximal surjective number at one Frobenius level
    BqOracle {
        #[arg(long)]
        n: u64,
        #[arg(long)]
        class: u64,
        #[arg(long)]
        prime: u64,
        #[arg(long, default_value_t = 1)]
        e: u32,
        /// Random trials per candidate count
        #[arg(long, default_value_t = 20)]
        trials: u64,
        /// Minimum sampling-field size; rounded up to a power of the prime
        #[arg(long, default_value_t = 101)]
        field_size: u64,
        /// Random seed; falls back to FROBKIT_SEED, then 0
        #[arg(long)]
        seed: Option<u64>,
    },
    /// Construct an element injective on a socle subspace from a problem
    /// file
    SocleInject {
        /// TOML problem file (see the repository README for the schema)
        #[arg(long)]
        file: PathBuf,
        #[arg(long, default_value_t = 20)]
        trials: u64,
        #[arg(long)]
        seed: Option<u64>,
        /// Largest field-extension degree to retry over
        #[arg(long, default_value_t = 4)]
        max_degree: u32,
    },
    /// Fit the growth exponent of a count series read from CSV
    GrowthOrder {
        /// CSV file with header e,q,count[,normalized]; "-" reads stdin
        #[arg(long)]
        input: PathBuf,
        #[arg(long)]
        prime: u64,
        /// Normalization exponent; default: smallest delta with
        /// count <= q^delta on every row
        #[arg(long)]
        delta: Option<u32>,
    },
    /// Certify singularity flags of a Veronese ring
    Classify {
        #[arg(long)]
        n: u64,
        #[arg(long)]
        prime: u64,
        #[arg(long)]
        emax: u32,
        #[arg(long, default_value_t = 3)]
        window: usize,
        /// Width tolerance for certifying equality of the two signatures,
        /// as an exact rational
        #[arg(long, default_value = "1/1000000")]
        epsilon: String,
    },
}

/// Run one invocation. `argv` includes the program name in position 0.
/// Returns the rendered report on success.
pub fn execute<I, T>(argv: I) -> Result<String, Failure>
where
    I: IntoIterator<Item = T>,
    T: Into<std::ffi::OsString> + Clone,
{
    let cli = match Cli::try_parse_from(argv) {
        Ok(cli) => cli,
        Err(e) => {
            let rendered = e.render().to_string();
            return match e.kind() {
                ErrorKind::DisplayHelp | ErrorKind::DisplayVersion => Ok(rendered),
                _ => Err(Failure {
                    code: USAGE,
                    message: rendered.trim_end().to_string(),
                }),
            };
        }
    };
    let format = match cli.format.as_str() {
        "json" => Format::Json,
        "csv" => Format::Csv,
        other => return Err(usage_error(format!("unknown format `{other}`"))),
    };
    match cli.command {
        Command::Hk {
            ideal,
            prime,
            emax,
            window,
        } => run_hk(&ideal, prime, emax, window, format),
        Command::HkExact { ideal } => run_hk_exact(&ideal, format),
        Command::RelativeHk { ideal, outer } => run_relative_hk(&ideal, &outer, format),
        Command::REstimate { ideal } => run_r_estimate(&ideal, format),
        Command::Decompose { n, class, prime, e } => run_decompose(n, class, prime, e, format),
        Command::Fsig {
            n,
            prime,
            emax,
            window,
        } => run_fsig(n, prime, emax, window, format),
        Command::DualFsig {
            n,
            class,
            prime,
            emax,
            window,
        } => run_dual_fsig(n, class, prime, emax, window, format),
        Command::BqOracle {
            n,
            class,
            prime,
            e,
            trials,
            field_size,
            seed,
        } => run_bq_oracle(n, class, prime, e, trials, field_size, resolve_seed(seed)?, format),
        Command::SocleInject {
            file,
            trials,
            seed,
            max_degree,
        } => run_socle_inject(&file, trials, resolve_seed(seed)?, max_degree, format),
        Command::GrowthOrder {
            input,
            prime,
            delta,
        } => run_growth_order(&input, prime, delta, format),
        Command::Classify {
            n,
            prime,
            emax,
            window,
            epsilon,
        } => run_classify(n, prime, emax, window, &epsilon, format),
    }
}

#[derive(Clone, Copy, PartialEq, Eq)]
enum Format {
    Json,
    Csv,
}

/// Explicit --seed wins, then FROBKIT_SEED, then 0.
fn resolve_seed(flag: Option<u64>) -> Result<u64, Failure> {
    if let Some(seed) = flag {
        return Ok(seed);
    }
    match std::env::var("FROBKIT_SEED") {
        Ok(text) => text
            .parse::<u64>()
            .map_err(|_| usage_error(format!("FROBKIT_SEED is not a 64-bit integer: `{text}`"))),
        Err(_) => Ok(0),
    }
}

fn rat(x: &BigRational) -> String {
    format!("{}/{}", x.numer(), x.denom())
}

fn parse_rational(text: &str) -> Result<BigRational, Failure> {
    let parse_int = |part: &str| {
        part.trim()
            .parse::<BigInt>()
            .map_err(|_| usage_error(format!("not an exact rational: `{text}`")))
    };
    match text.split_once('/') {
        Some((num, den)) => {
            let den = parse_int(den)?;
            if den.is_zero() {
                return Err(usage_error(format!("zero denominator in `{text}`")));
            }
            Ok(BigRational::new(parse_int(num)?, den))
        }
        None => Ok(BigRational::from_integer(parse_int(text)?)),
    }
}

#[derive(Serialize)]
struct SeriesRowOut {
    e: u32,
    q: String,
    count: String,
    normalized: String,
}

#[derive(Serialize)]
struct EstimateOut {
    value: String,
    window: usize,
    cauchy_gap: String,
    lower: Option<String>,
    upper: Option<String>,
}

impl EstimateOut {
    fn new(est: &Estimate) -> EstimateOut {
        EstimateOut {
            value: rat(&est.value),
            window: est.window,
            cauchy_gap: rat(&est.cauchy_gap),
            lower: est.lower.as_ref().map(rat),
            upper: est.upper.as_ref().map(rat),
        }
    }
}

#[derive(Serialize)]
struct SeriesReport {
    series: Vec<SeriesRowOut>,
    estimate: EstimateOut,
}

fn to_json<T: Serialize>(report: &T) -> Result<String, Failure> {
    serde_json::to_string_pretty(report)
        .map_err(|e| computation_error(format!("cannot serialize the report: {e}")))
}

fn series_csv(rows: &[SeriesRowOut]) -> String {
    let mut out = String::from("e,q,count,normalized\n");
    for row in rows {
        out.push_str(&format!(
            "{},{},{},{}\n",
            row.e, row.q, row.count, row.normalized
        ));
    }
    out
}

fn render_series(report: SeriesReport, format: Format) -> Result<String, Failure> {
    match format {
        Format::Json => to_json(&report),
        Format::Csv => Ok(series_csv(&report.series)),
    }
}

/// One header plus one row of scalar values.
fn scalar_csv(header: &str, values: &[String]) -> String {
    format!("{}\n{}\n", header, values.join(","))
}

fn run_hk(
    ideal_text: &str,
    prime: u64,
    emax: u32,
    window: usize,
    format: Format,
) -> Result<String, Failure> {
    if !frobkit_core::gf::is_prime(prime) {
        return Err(Error::NotPrime(prime).into());
    }
    let ideal = parse_ideal(ideal_text)?;
    let mult = ideal.hk_exact()?;
    let d = ideal.dim() as u32;
    let points = ideal.hk_function(prime, 1..=emax)?;
    let rows: Vec<SeriesRowOut> = points
        .iter()
        .map(|pt| SeriesRowOut {
            e: pt.e,
            q: pt.q.to_string(),
            count: pt.colength.to_string(),
            normalized: rat(&BigRational::new(
                BigInt::from(pt.colength.clone()),
                BigInt::from(pt.q.pow(d)),
            )),
        })
        .collect();
    // The limit is known exactly for monomial ideals, so the estimate is
    // the exact value with a zero gap over the available tail.
    let estimate = Estimate {
        value: mult.clone(),
        window: window.min(rows.len()).max(1),
        cauchy_gap: BigRational::zero(),
        lower: Some(mult.clone()),
        upper: Some(mult),
    };
    render_series(
        SeriesReport {
            series: rows,
            estimate: EstimateOut::new(&estimate),
        },
        format,
    )
}

fn run_hk_exact(ideal_text: &str, format: Format) -> Result<String, Failure> {
    let ideal = parse_ideal(ideal_text)?;
    let mult = rat(&ideal.hk_exact()?);
    #[derive(Serialize)]
    struct Report {
        multiplicity: String,
    }
    match format {
        Format::Json => to_json(&Report { multiplicity: mult }),
        Format::Csv => Ok(scalar_csv("multiplicity", &[mult])),
    }
}

fn run_relative_hk(inner_text: &str, outer_text: &str, format: Format) -> Result<String, Failure> {
    let inner = parse_ideal(inner_text)?;
    let outer = parse_ideal(outer_text)?;
    let value = rat(&frobkit_core::staircase::relative_hk(&inner, &outer)?);
    #[derive(Serialize)]
    struct Report {
        relative_multiplicity: String,
    }
    match format {
        Format::Json => to_json(&Report {
            relative_multiplicity: value,
        }),
        Format::Csv => Ok(scalar_csv("relative_multiplicity", &[value])),
    }
}

fn run_r_estimate(ideal_text: &str, format: Format) -> Result<String, Failure> {
    let ideal = parse_ideal(ideal_text)?;
    let value = rat(&frobkit_core::staircase::r_estimate(&ideal)?);
    #[derive(Serialize)]
    struct Report {
        r_estimate: String,
    }
    match format {
        Format::Json => to_json(&Report { r_estimate: value }),
        Format::Csv => Ok(scalar_csv("r_estimate", &[value])),
    }
}

fn run_decompose(n: u64, class: u64, prime: u64, e: u32, format: Format) -> Result<String, Failure> {
    let module = VeroneseModule::new(n, class, prime)?;
    let d = module.decompose(e);
    let q2 = BigInt::from(&d.q * &d.q);
    let normalized: Vec<String> = d
        .mult
        .iter()
        .map(|m| rat(&BigRational::new(BigInt::from(m.clone()), q2.clone())))
        .collect();
    #[derive(Serialize)]
    struct Report {
        n: u64,
        class: u64,
        p: u64,
        e: u32,
        q: String,
        mult: Vec<String>,
        normalized: Vec<String>,
    }
    let report = Report {
        n,
        class,
        p: prime,
        e,
        q: d.q.to_string(),
        mult: d.mult.iter().map(|m| m.to_string()).collect(),
        normalized,
    };
    match format {
        Format::Json => to_json(&report),
        Format::Csv => {
            let mut out = String::from("class,count,normalized\n");
            for (i, (m, nm)) in report.mult.iter().zip(&report.normalized).enumerate() {
                out.push_str(&format!("{i},{m},{nm}\n"));
            }
            Ok(out)
        }
    }
}

/// Shared shape of the fsig and dual-fsig chains: a count series over
/// e = 1..=emax normalized by q^2, a windowed tail estimate, and the
/// certified interval at the last level attached as bounds.
fn veronese_series_report(
    module: &VeroneseModule,
    counts: impl Fn(u32) -> BigUint,
    prime: u64,
    emax: u32,
    window: usize,
) -> Result<SeriesReport, Failure> {
    let mut series = InvariantSeries::new(prime, 2)?;
    for e in 1..=emax {
        series.push(e, counts(e))?;
    }
    let rows: Vec<SeriesRowOut> = series
        .points()
        .iter()
        .enumerate()
        .map(|(idx, pt)| SeriesRowOut {
            e: pt.e,
            q: pt.q.to_string(),
            count: pt.count.to_string(),
            normalized: rat(&series.normalized(idx)),
        })
        .collect();
    let mut estimate = limsup_estimate(&series, window.min(rows.len()).max(1))?;
    let (lo, hi) = module.certified_interval(emax);
    estimate.attach_bounds(lo, hi);
    Ok(SeriesReport {
        series: rows,
        estimate: EstimateOut::new(&estimate),
    })
}

fn run_fsig(n: u64, prime: u64, emax: u32, window: usize, format: Format) -> Result<String, Failure> {
    let module = VeroneseModule::new(n, 0, prime)?;
    let report = veronese_series_report(&module, |e| module.splitting_number(e), prime, emax, window)?;
    render_series(report, format)
}

fn run_dual_fsig(
    n: u64,
    class: u64,
    prime: u64,
    emax: u32,
    window: usize,
    format: Format,
) -> Result<String, Failure> {
    let module = VeroneseModule::new(n, class, prime)?;
    let report = veronese_series_report(
        &module,
        |e| {
            let d = module.decompose(e);
            dual_b_lower(&d.mult, class)
        },
        prime,
        emax,
        window,
    )?;
    render_series(report, format)
}

#[allow(clippy::too_many_arguments)]
fn run_bq_oracle(
    n: u64,
    class: u64,
    prime: u64,
    e: u32,
    trials: u64,
    field_size: u64,
    seed: u64,
    format: Format,
) -> Result<String, Failure> {
    let module = VeroneseModule::new(n, class, prime)?;
    let d = module.decompose(e);
    let field = Gf::of_char_with_min_size(prime, field_size)?;
    let report_field = field.size();
    let b = bq_oracle(&d, class, field, trials, seed)?;
    #[derive(Serialize)]
    struct Report {
        n: u64,
        class: u64,
        p: u64,
        e: u32,
        q: String,
        field_size: u64,
        trials: u64,
        seed: u64,
        lower: String,
        b_q: String,
        upper: String,
    }
    let report = Report {
        n,
        class,
        p: prime,
        e,
        q: d.q.to_string(),
        field_size: report_field,
        trials,
        seed,
        lower: dual_b_lower(&d.mult, class).to_string(),
        b_q: b.to_string(),
        upper: dual_b_upper(&d.mult, class).to_string(),
    };
    match format {
        Format::Json => to_json(&report),
        Format::Csv => Ok(scalar_csv(
            "e,q,lower,b_q,upper",
            &[
                report.e.to_string(),
                report.q,
                report.lower,
                report.b_q,
                report.upper,
            ],
        )),
    }
}

fn run_socle_inject(
    path: &std::path::Path,
    trials: u64,
    seed: u64,
    max_degree: u32,
    format: Format,
) -> Result<String, Failure> {
    let problem = SocleProblem::load(path)?;
    let (element, field) = problem.socle_injection_extended(trials, seed, max_degree)?;
    #[derive(Serialize)]
    struct Report {
        element: Vec<String>,
        field_char: u64,
        field_size: u64,
        subspace_dim: usize,
    }
    let report = Report {
        element: element.iter().map(|c| c.to_string()).collect(),
        field_char: field.characteristic(),
        field_size: field.size(),
        subspace_dim: problem.subspace.len(),
    };
    match format {
        Format::Json => to_json(&report),
        Format::Csv => {
            let mut out = String::from("index,coefficient\n");
            for (i, c) in report.element.iter().enumerate() {
                out.push_str(&format!("{i},{c}\n"));
            }
            Ok(out)
        }
    }
}

/// Parse a report-style CSV series: header e,q,count with optional extra
/// columns, one point per row.
fn parse_series_csv(text: &str, prime: u64, delta: Option<u32>) -> Result<InvariantSeries, Failure> {
    let mut lines = text.lines().map(str::trim).filter(|l| !l.is_empty());
    let header = lines
        .next()
        .ok_or_else(|| computation_error("empty series input"))?;
    if !header.starts_with("e,q,count") {
        return Err(computation_error(format!(
            "series header must start with e,q,count; got `{header}`"
        )));
    }
    let mut rows: Vec<(u32, BigUint, BigUint)> = Vec::new();
    for line in lines {
        let mut fields = line.split(',');
        let mut next = |name: &str| {
            fields
                .next()
                .map(str::trim)
                .filter(|f| !f.is_empty())
                .ok_or_else(|| computation_error(format!("row `{line}` is missing {name}")))
        };
        let e: u32 = next("e")?
            .parse()
            .map_err(|_| computation_error(format!("bad e in row `{line}`")))?;
        let q: BigUint = next("q")?
            .parse()
            .map_err(|_| computation_error(format!("bad q in row `{line}`")))?;
        let count: BigUint = next("count")?
            .parse()
            .map_err(|_| computation_error(format!("bad count in row `{line}`")))?;
        if q != BigUint::from(prime).pow(e) {
            return Err(computation_error(format!(
                "row `{line}`: q is not {prime}^{e}"
            )));
        }
        if rows.iter().any(|(seen, _, _)| *seen == e) {
            return Err(computation_error(format!("duplicate level e={e}")));
        }
        rows.push((e, q, count));
    }
    let delta = match delta {
        Some(d) => d,
        None => smallest_growth_exponent(&rows)?,
    };
    let mut series = InvariantSeries::new(prime, delta)?;
    for (e, _, count) in rows {
        series.push(e, count)?;
    }
    Ok(series)
}

/// Smallest delta with count <= q^delta on every row.
fn smallest_growth_exponent(rows: &[(u32, BigUint, BigUint)]) -> Result<u32, Failure> {
    let mut delta = 0u32;
    for (_, q, count) in rows {
        if q <= &BigUint::one() {
            // q = 1 only at e = 0, where any delta works.
            continue;
        }
        while &q.pow(delta) < count {
            delta += 1;
            if delta > 256 {
                return Err(computation_error(
                    "count grows faster than q^256; pass --delta explicitly",
                ));
            }
        }
    }
    Ok(delta)
}

fn run_growth_order(
    input: &std::path::Path,
    prime: u64,
    delta: Option<u32>,
    format: Format,
) -> Result<String, Failure> {
    if !frobkit_core::gf::is_prime(prime) {
        return Err(Error::NotPrime(prime).into());
    }
    let text = if input.as_os_str() == "-" {
        use std::io::Read;
        let mut buf = String::new();
        std::io::stdin()
            .read_to_string(&mut buf)
            .map_err(|e| computation_error(format!("cannot read stdin: {e}")))?;
        buf
    } else {
        std::fs::read_to_string(input)
            .map_err(|e| computation_error(format!("{}: {e}", input.display())))?
    };
    let series = parse_series_csv(&text, prime, delta)?;
    let order = growth_order(&series)?;
    #[derive(Serialize)]
    struct Report {
        order: Option<u32>,
        slope: f64,
        ratio: EstimateOut,
    }
    let report = Report {
        order: order.order,
        slope: order.slope,
        ratio: EstimateOut::new(&order.ratio),
    };
    match format {
        Format::Json => to_json(&report),
        Format::Csv => Ok(scalar_csv(
            "order,slope,ratio,window,cauchy_gap,lower,upper",
            &[
                report.order.map(|o| o.to_string()).unwrap_or_default(),
                report.slope.to_string(),
                report.ratio.value.clone(),
                report.ratio.window.to_string(),
                report.ratio.cauchy_gap.clone(),
                report.ratio.lower.clone().unwrap_or_default(),
                report.ratio.upper.clone().unwrap_or_default(),
            ],
        )),
    }
}

fn run_classify(
    n: u64,
    prime: u64,
    emax: u32,
    window: usize,
    epsilon_text: &str,
    format: Format,
) -> Result<String, Failure> {
    let epsilon = parse_rational(epsilon_text)?;
    let ring = VeroneseModule::new(n, 0, prime)?;
    let canonical_class = n - 2;
    let canonical = VeroneseModule::new(n, canonical_class, prime)?;

    let mut ring_series = InvariantSeries::new(prime, 2)?;
    let mut canonical_series = InvariantSeries::new(prime, 2)?;
    for e in 1..=emax {
        ring_series.push(e, ring.splitting_number(e))?;
        let d = canonical.decompose(e);
        canonical_series.push(e, dual_b_lower(&d.mult, canonical_class))?;
    }
    let eff_window = window.min(emax as usize).max(1);
    let mut s_r = limsup_estimate(&ring_series, eff_window)?;
    let (lo, hi) = ring.certified_interval(emax);
    s_r.attach_bounds(lo, hi);
    let mut s_omega = limsup_estimate(&canonical_series, eff_window)?;
    let (lo, hi) = canonical.certified_interval(emax);
    s_omega.attach_bounds(lo, hi);

    let verdict = classify(&s_r, &s_omega, &epsilon);
    #[derive(Serialize)]
    struct Report {
        n: u64,
        p: u64,
        emax: u32,
        regular: frobkit_core::invariants::Flag,
        strongly_f_regular: frobkit_core::invariants::Flag,
        f_rational: frobkit_core::invariants::Flag,
        gorenstein: frobkit_core::invariants::Flag,
        s_r: EstimateOut,
        s_omega: EstimateOut,
        notes: Vec<String>,
    }
    let report = Report {
        n,
        p: prime,
        emax,
        regular: verdict.regular,
        strongly_f_regular: verdict.strongly_f_regular,
        f_rational: verdict.f_rational,
        gorenstein: verdict.gorenstein,
        s_r: EstimateOut::new(&s_r),
        s_omega: EstimateOut::new(&s_omega),
        notes: verdict.notes,
    };
    match format {
        Format::Json => to_json(&report),
        Format::Csv => {
            let flag = |f: frobkit_core::invariants::Flag| {
                serde_json::to_value(f)
                    .ok()
                    .and_then(|v| v.as_str().map(str::to_string))
                    .unwrap_or_default()
            };
            let mut out = String::from("flag,verdict\n");
            out.push_str(&format!("regular,{}\n", flag(report.regular)));
            out.push_str(&format!(
                "strongly_f_regular,{}\n",
                flag(report.strongly_f_regular)
            ));
            out.push_str(&format!("f_rational,{}\n", flag(report.f_rational)));
            out.push_str(&format!("gorenstein,{}\n", flag(report.gorenstein)));
            Ok(out)
        }
    }
}
