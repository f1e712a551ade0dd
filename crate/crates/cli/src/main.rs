use std::fmt::Display;
use std::fs;
use std::io::{self, Write};
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde::Serialize;

use schneider_core::montecarlo::{self, ExperimentConfig, ExperimentReport, Mode};
use schneider_core::schneider::{self, ExpansionStatus};
use schneider_core::thermo::{self, DigitSet, SpectrumPoint};
use schneider_core::verify::{self, Group, VerifyOptions};
use schneider_core::{DigitPair, ExactRational, PadicInt, Prime};

#[derive(Parser)]
#[command(name = "schneider", version, about = "p-adic continued fractions, Lyapunov spectra and Monte Carlo checks")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Digit pairs (a_i, b_i) of a rational or p-adic integer
    Expand(ExpandArgs),
    /// Convergents A_n/B_n of a rational's expansion
    Convergents(ConvergentsArgs),
    /// Fixed point of T with a constant digit pair, by Hensel lifting
    FixedPoint(FixedPointArgs),
    /// Pressure of −t log ψ and its derivative
    Pressure(PressureArgs),
    /// Lyapunov spectrum at one α or on a grid
    Spectrum(SpectrumArgs),
    /// Dimension of the set with valuation digits restricted to a finite set
    Dimension(DimensionArgs),
    /// Birkhoff averages for Haar-random points
    McHaar(McArgs),
    /// Birkhoff averages and pointwise dimensions for equilibrium states
    McGibbs(McGibbsArgs),
    /// Exact approximation identity on Haar-derived rationals
    McApprox(McApproxArgs),
    /// Run the acceptance checks
    Verify(VerifyArgs),
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Format {
    Json,
    Csv,
}

#[derive(Args)]
struct OutputArgs {
    #[arg(long, value_enum, default_value_t = Format::Json)]
    format: Format,
    /// Write to this file instead of standard output
    #[arg(long)]
    output: Option<PathBuf>,
}

#[derive(Args)]
struct ExpandArgs {
    #[arg(short, long, value_parser = parse_prime)]
    prime: Prime,
    /// Exact input `m/n` or `m`
    #[arg(long, conflicts_with = "padic_digits", allow_hyphen_values = true)]
    rational: Option<String>,
    /// p-adic input as base-p digits, least significant first
    #[arg(long, value_delimiter = ',')]
    padic_digits: Option<Vec<u32>>,
    #[arg(long, default_value_t = 20)]
    depth: usize,
    /// Expand the rational in Z_p at this many digits instead of exactly
    #[arg(long)]
    precision: Option<usize>,
    #[command(flatten)]
    out: OutputArgs,
}

#[derive(Args)]
struct ConvergentsArgs {
    #[arg(short, long, value_parser = parse_prime)]
    prime: Prime,
    #[arg(long, allow_hyphen_values = true)]
    rational: String,
    #[arg(long, default_value_t = 10)]
    depth: usize,
    #[command(flatten)]
    out: OutputArgs,
}

#[derive(Args)]
struct FixedPointArgs {
    #[arg(short, long, value_parser = parse_prime)]
    prime: Prime,
    #[arg(short, long)]
    a: u32,
    #[arg(short, long)]
    b: u32,
    #[arg(long, default_value_t = 32)]
    precision: usize,
    #[command(flatten)]
    out: OutputArgs,
}

#[derive(Args)]
struct PressureArgs {
    #[arg(short, long, value_parser = parse_prime)]
    prime: Prime,
    #[arg(long, allow_hyphen_values = true)]
    t: f64,
    #[arg(short = 'n', long)]
    truncation: Option<u32>,
    #[command(flatten)]
    out: OutputArgs,
}

#[derive(Args)]
struct SpectrumArgs {
    #[arg(short, long, value_parser = parse_prime)]
    prime: Prime,
    #[arg(short = 'n', long)]
    truncation: Option<u32>,
    #[arg(long)]
    alpha: Option<f64>,
    /// α in units of log p
    #[arg(long)]
    alpha_hat: Option<f64>,
    #[arg(long, requires = "alpha_max")]
    alpha_min: Option<f64>,
    #[arg(long, requires = "alpha_min")]
    alpha_max: Option<f64>,
    #[arg(long, requires = "alpha_hat_max")]
    alpha_hat_min: Option<f64>,
    #[arg(long, requires = "alpha_hat_min")]
    alpha_hat_max: Option<f64>,
    /// Number of grid intervals
    #[arg(long, default_value_t = 100)]
    steps: usize,
    #[command(flatten)]
    out: OutputArgs,
}

#[derive(Args)]
struct DimensionArgs {
    #[arg(short, long, value_parser = parse_prime)]
    prime: Prime,
    /// Allowed valuation digits, e.g. 1,2
    #[arg(long, value_delimiter = ',', conflicts_with = "truncation")]
    digits: Option<Vec<u32>>,
    /// Shorthand for --digits 1,...,n
    #[arg(short = 'n', long)]
    truncation: Option<u32>,
    #[command(flatten)]
    out: OutputArgs,
}

#[derive(Args)]
struct SampleArgs {
    #[arg(short, long, value_parser = parse_prime)]
    prime: Prime,
    #[arg(long, default_value_t = 10_000)]
    samples: usize,
    #[arg(long, default_value_t = 1000)]
    depth: usize,
    #[arg(long, default_value_t = verify::SEED)]
    seed: u64,
    /// p-adic digits per sample (default 4 · depth · p/(p−1))
    #[arg(long)]
    precision: Option<usize>,
}

#[derive(Args)]
struct McArgs {
    #[command(flatten)]
    sample: SampleArgs,
    #[command(flatten)]
    out: OutputArgs,
}

#[derive(Args)]
struct McGibbsArgs {
    #[command(flatten)]
    sample: SampleArgs,
    #[arg(long, allow_hyphen_values = true)]
    t: f64,
    #[arg(short = 'n', long)]
    truncation: Option<u32>,
    #[command(flatten)]
    out: OutputArgs,
}

#[derive(Args)]
struct McApproxArgs {
    #[arg(short, long, value_parser = parse_prime)]
    prime: Prime,
    #[arg(long, default_value_t = 200)]
    samples: usize,
    #[arg(long, default_value_t = 50)]
    depth: usize,
    #[arg(long, default_value_t = verify::SEED)]
    seed: u64,
    #[command(flatten)]
    out: OutputArgs,
}

#[derive(Args)]
struct VerifyArgs {
    /// Run one group: thermo, schneider, padic or montecarlo
    #[arg(long)]
    only: Option<Group>,
    /// Emit results as JSON or CSV instead of a table
    #[arg(long, value_enum)]
    format: Option<Format>,
    #[arg(long)]
    output: Option<PathBuf>,
    #[arg(long, hide = true)]
    tamper_spectrum: bool,
}

enum Failure {
    Usage(String),
    Domain { kind: String, message: String },
    Io(io::Error),
    Verification,
}

impl Failure {
    fn domain<E: std::error::Error + std::fmt::Debug>(e: E) -> Self {
        let debug = format!("{e:?}");
        let kind = debug.split(|c: char| !c.is_alphanumeric()).next().unwrap_or("Error").to_string();
        Failure::Domain { kind, message: e.to_string() }
    }
}

impl From<io::Error> for Failure {
    fn from(e: io::Error) -> Self {
        Failure::Io(e)
    }
}

fn parse_prime(s: &str) -> Result<Prime, String> {
    let v: u64 = s.parse().map_err(|_| format!("'{s}' is not a positive integer"))?;
    Prime::new(v).map_err(|e| e.to_string())
}

fn parse_rational(s: &str) -> Result<ExactRational, Failure> {
    s.parse().map_err(|_| Failure::Usage(format!("'{s}' is not a rational of the form m/n or m")))
}

/// Rounds to 15 significant digits. Magnitudes outside [1e-6, 1e16) use
/// exponent notation, everything else plain decimals without grouping.
fn num(x: f64) -> String {
    if !x.is_finite() {
        return x.to_string();
    }
    let rounded: f64 = format!("{x:.14e}").parse().expect("formatted float");
    if rounded != 0.0 && !(1e-6..1e16).contains(&rounded.abs()) {
        format!("{rounded:e}")
    } else {
        rounded.to_string()
    }
}

fn csv<I: IntoIterator<Item = S>, S: Display>(fields: I) -> String {
    fields.into_iter().map(|f| f.to_string()).collect::<Vec<_>>().join(",")
}

fn json<T: Serialize>(value: &T) -> String {
    serde_json::to_string(value).expect("serializable")
}

fn emit(text: String, output: &Option<PathBuf>) -> Result<(), Failure> {
    let mut text = text;
    if !text.ends_with('\n') {
        text.push('\n');
    }
    match output {
        Some(path) => fs::write(path, text)?,
        None => io::stdout().lock().write_all(text.as_bytes())?,
    }
    Ok(())
}

#[derive(Serialize)]
struct ExpandOutput {
    pairs: Vec<DigitPair>,
    status: ExpansionStatus,
    #[serde(skip_serializing_if = "Option::is_none")]
    remaining_precision: Option<usize>,
}

fn expand(args: ExpandArgs) -> Result<(), Failure> {
    let p = args.prime;
    let e = match (&args.rational, &args.padic_digits) {
        (Some(r), None) => {
            let x = parse_rational(r)?;
            match args.precision {
                None => schneider::expand_rational(&x, p, args.depth).map_err(Failure::domain)?,
                Some(n) => {
                    let px = PadicInt::from_rational(&x, p, n).map_err(Failure::domain)?;
                    schneider::expand_padic(&px, args.depth).map_err(Failure::domain)?
                }
            }
        }
        (None, Some(digits)) => {
            let px = PadicInt::from_digits(p, digits.clone()).map_err(Failure::domain)?;
            schneider::expand_padic(&px, args.depth).map_err(Failure::domain)?
        }
        _ => return Err(Failure::Usage("give exactly one of --rational or --padic-digits".into())),
    };
    let text = match args.out.format {
        Format::Json => json(&ExpandOutput { pairs: e.pairs, status: e.status, remaining_precision: e.remaining_precision }),
        Format::Csv => {
            let mut rows = vec!["index,a,b".to_string()];
            rows.extend(e.pairs.iter().enumerate().map(|(i, d)| csv([(i + 1) as u64, d.a.into(), d.b.into()])));
            rows.join("\n")
        }
    };
    emit(text, &args.out.output)
}

#[derive(Serialize)]
struct ConvergentRow {
    index: usize,
    numerator: String,
    denominator: String,
}

fn convergents(args: ConvergentsArgs) -> Result<(), Failure> {
    let x = parse_rational(&args.rational)?;
    let e = schneider::expand_rational(&x, args.prime, args.depth).map_err(Failure::domain)?;
    let rows: Vec<ConvergentRow> = schneider::convergents(args.prime, &e.pairs)
        .into_iter()
        .map(|c| ConvergentRow { index: c.index, numerator: c.numerator.to_string(), denominator: c.denominator.to_string() })
        .collect();
    let text = match args.out.format {
        Format::Json => json(&rows),
        Format::Csv => {
            let mut lines = vec!["index,numerator,denominator".to_string()];
            lines.extend(rows.iter().map(|r| csv([r.index.to_string(), r.numerator.clone(), r.denominator.clone()])));
            lines.join("\n")
        }
    };
    emit(text, &args.out.output)
}

#[derive(Serialize)]
struct FixedPointOutput {
    p: u32,
    a: u32,
    b: u32,
    precision: usize,
    digits: Vec<u32>,
    residue: String,
}

fn fixed_point(args: FixedPointArgs) -> Result<(), Failure> {
    let x = schneider::fixed_point(args.a, args.b, args.prime, args.precision).map_err(Failure::domain)?;
    let out = FixedPointOutput {
        p: args.prime.get(),
        a: args.a,
        b: args.b,
        precision: args.precision,
        digits: x.digits().to_vec(),
        residue: x.to_biguint().to_string(),
    };
    let text = match args.out.format {
        Format::Json => json(&out),
        Format::Csv => {
            let mut lines = vec!["index,digit".to_string()];
            lines.extend(out.digits.iter().enumerate().map(|(i, d)| csv([i as u64, u64::from(*d)])));
            lines.join("\n")
        }
    };
    emit(text, &args.out.output)
}

#[derive(Serialize)]
struct PressureOutput {
    p: u32,
    t: f64,
    n: Option<u32>,
    /// `null` encodes +∞.
    pressure: Option<f64>,
    dpressure: Option<f64>,
}

fn pressure(args: PressureArgs) -> Result<(), Failure> {
    let p = args.prime;
    let (value, slope) = match args.truncation {
        Some(0) => return Err(Failure::Usage("--truncation must be at least 1".into())),
        Some(n) => (thermo::pressure_truncated(p, n, args.t), Some(thermo::dpressure_truncated(p, n, args.t))),
        None => (thermo::pressure_full(p, args.t), thermo::dpressure_full(p, args.t).ok()),
    };
    let out = PressureOutput { p: p.get(), t: args.t, n: args.truncation, pressure: value.is_finite().then_some(value), dpressure: slope };
    let text = match args.out.format {
        Format::Json => json(&out),
        Format::Csv => format!(
            "p,t,n,pressure,dpressure\n{}",
            csv([
                out.p.to_string(),
                num(out.t),
                out.n.map(|n| n.to_string()).unwrap_or_default(),
                num(value),
                slope.map(num).unwrap_or_default(),
            ])
        ),
    };
    emit(text, &args.out.output)
}

#[derive(Serialize)]
struct SpectrumRow {
    p: u32,
    alpha: f64,
    alpha_hat: f64,
    t_alpha: Option<f64>,
    pressure: Option<f64>,
    dimension: f64,
}

impl SpectrumRow {
    fn new(p: Prime, s: SpectrumPoint) -> Self {
        SpectrumRow {
            p: p.get(),
            alpha: s.alpha,
            alpha_hat: s.alpha / p.ln(),
            t_alpha: s.t_alpha,
            pressure: s.pressure,
            dimension: s.dimension,
        }
    }

    fn csv(&self) -> String {
        // infinite t_α is +∞ at the bottom endpoint and −∞ at the top one
        let bottom = self.alpha_hat < 1.5;
        let (t_inf, p_inf) = if bottom { ("inf", "-inf") } else { ("-inf", "inf") };
        csv([
            self.p.to_string(),
            num(self.alpha),
            num(self.alpha_hat),
            self.t_alpha.map(num).unwrap_or_else(|| t_inf.into()),
            self.pressure.map(num).unwrap_or_else(|| p_inf.into()),
            num(self.dimension),
        ])
    }
}

fn spectrum(args: SpectrumArgs) -> Result<(), Failure> {
    let p = args.prime;
    let lp = p.ln();
    let alphas: Vec<f64> = match (args.alpha, args.alpha_hat, args.alpha_min.zip(args.alpha_max), args.alpha_hat_min.zip(args.alpha_hat_max)) {
        (Some(a), None, None, None) => vec![a],
        (None, Some(h), None, None) => vec![h * lp],
        (None, None, Some(range), None) => grid(range, args.steps)?,
        (None, None, None, Some((lo, hi))) => grid((lo, hi), args.steps)?.into_iter().map(|h| h * lp).collect(),
        _ => {
            return Err(Failure::Usage(
                "give one of --alpha, --alpha-hat, --alpha-min/--alpha-max or --alpha-hat-min/--alpha-hat-max".into(),
            ))
        }
    };
    let mut rows = Vec::with_capacity(alphas.len());
    for alpha in &alphas {
        let point = match args.truncation {
            Some(0) => return Err(Failure::Usage("--truncation must be at least 1".into())),
            Some(n) => thermo::spectrum_truncated(p, n, *alpha),
            None => thermo::spectrum_full(p, *alpha),
        };
        rows.push(SpectrumRow::new(p, point.map_err(Failure::domain)?));
    }
    let text = match (args.out.format, rows.len()) {
        (Format::Json, 1) => json(&rows[0]),
        (Format::Json, _) => json(&rows),
        (Format::Csv, _) => {
            let mut lines = vec!["p,alpha,alpha_hat,t_alpha,pressure,dimension".to_string()];
            lines.extend(rows.iter().map(SpectrumRow::csv));
            lines.join("\n")
        }
    };
    emit(text, &args.out.output)
}

fn grid((lo, hi): (f64, f64), steps: usize) -> Result<Vec<f64>, Failure> {
    if steps == 0 || lo.is_nan() || hi.is_nan() || lo > hi {
        return Err(Failure::Usage("grid needs min <= max and --steps >= 1".into()));
    }
    Ok((0..=steps).map(|i| lo + (hi - lo) * i as f64 / steps as f64).collect())
}

#[derive(Serialize)]
struct DimensionOutput {
    dimension: f64,
}

fn dimension(args: DimensionArgs) -> Result<(), Failure> {
    let digits = match (args.digits, args.truncation) {
        (Some(d), None) => DigitSet::new(d),
        (None, Some(n)) => DigitSet::range(n),
        _ => return Err(Failure::Usage("give --digits or --truncation".into())),
    }
    .map_err(|e| Failure::Usage(e.to_string()))?;
    let d = thermo::bowen_dimension(args.prime, &digits);
    let text = match args.out.format {
        Format::Json => json(&DimensionOutput { dimension: d }),
        Format::Csv => format!("p,dimension\n{},{}", args.prime, num(d)),
    };
    emit(text, &args.out.output)
}

const MC_HEADER: &str = "p,mode,t,n,samples,depth,seed,lambda_mean,lambda_stderr,alpha_theory,dim_empirical,dim_theory";

fn mc_row(r: &ExperimentReport) -> String {
    let c = &r.config;
    let (t, n) = match c.mode {
        Mode::Gibbs { t, truncation } => (num(t), truncation.map(|n| n.to_string()).unwrap_or_default()),
        _ => (String::new(), String::new()),
    };
    csv([
        c.prime.to_string(),
        c.mode.name().to_string(),
        t,
        n,
        c.samples.to_string(),
        c.depth.to_string(),
        c.seed.to_string(),
        num(r.lambda_mean),
        num(r.lambda_stderr),
        num(r.alpha_theory),
        num(r.dim_empirical),
        num(r.dim_theory),
    ])
}

fn experiment(config: ExperimentConfig, out: &OutputArgs) -> Result<(), Failure> {
    let report = montecarlo::run(&config).map_err(Failure::domain)?;
    let text = match out.format {
        Format::Json => serde_json::to_string_pretty(&report).expect("serializable"),
        Format::Csv => format!("{MC_HEADER}\n{}", mc_row(&report)),
    };
    emit(text, &out.output)
}

fn config(s: &SampleArgs, mode: Mode) -> ExperimentConfig {
    ExperimentConfig { prime: s.prime, mode, samples: s.samples, depth: s.depth, seed: s.seed, precision: s.precision }
}

fn run_verify(args: VerifyArgs) -> Result<(), Failure> {
    let opts = VerifyOptions { only: args.only, tamper_spectrum: args.tamper_spectrum };
    let mut lines = Vec::new();
    let mut outcomes = Vec::new();
    for (id, group, _) in verify::CRITERIA {
        if opts.only.is_some_and(|g| g != group) {
            continue;
        }
        let o = verify::run_criterion(id, &opts);
        if args.format.is_none() && args.output.is_none() {
            println!("{o}");
        } else {
            lines.push(o.to_string());
        }
        outcomes.push(o);
    }
    let failed = outcomes.iter().filter(|o| !o.passed).count();
    let summary = format!("{} of {} criteria passed", outcomes.len() - failed, outcomes.len());
    match args.format {
        Some(Format::Json) => emit(json(&outcomes), &args.output)?,
        Some(Format::Csv) => {
            let mut rows = vec!["id,group,title,passed,seconds".to_string()];
            rows.extend(outcomes.iter().map(|o| csv([o.id.to_string(), o.group.to_string(), o.title.to_string(), o.passed.to_string(), num(o.seconds)])));
            emit(rows.join("\n"), &args.output)?;
        }
        None if args.output.is_some() => {
            lines.push(summary.clone());
            emit(lines.join("\n"), &args.output)?;
        }
        None => println!("{summary}"),
    }
    if failed > 0 {
        return Err(Failure::Verification);
    }
    Ok(())
}

fn dispatch(command: Command) -> Result<(), Failure> {
    match command {
        Command::Expand(a) => expand(a),
        Command::Convergents(a) => convergents(a),
        Command::FixedPoint(a) => fixed_point(a),
        Command::Pressure(a) => pressure(a),
        Command::Spectrum(a) => spectrum(a),
        Command::Dimension(a) => dimension(a),
        Command::McHaar(a) => experiment(config(&a.sample, Mode::Haar), &a.out),
        Command::McGibbs(a) => {
            experiment(config(&a.sample, Mode::Gibbs { t: a.t, truncation: a.truncation }), &a.out)
        }
        Command::McApprox(a) => {
            let c = ExperimentConfig::new(a.prime, Mode::Approx, a.samples, a.depth, a.seed);
            experiment(c, &a.out)
        }
        Command::Verify(a) => run_verify(a),
    }
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let code = if e.use_stderr() { 1 } else { 0 };
            let _ = e.print();
            return ExitCode::from(code);
        }
    };
    match dispatch(cli.command) {
        Ok(()) => ExitCode::SUCCESS,
        Err(Failure::Usage(message)) => {
            eprintln!("error: {message}");
            ExitCode::from(1)
        }
        Err(Failure::Domain { kind, message }) => {
            eprintln!("{}", serde_json::json!({ "error": "domain", "kind": kind, "message": message }));
            ExitCode::from(2)
        }
        Err(Failure::Io(e)) => {
            eprintln!("error: {e}");
            ExitCode::from(1)
        }
        Err(Failure::Verification) => ExitCode::from(3),
    }
}

#[cfg(test)]
mod tests {
    use super::num;

    #[test]
    fn number_formatting() {
        assert_eq!(num(0.1 + 0.2), "0.3");
        assert_eq!(num(2.0), "2");
        assert_eq!(num(-1.2579010549690823e-16), "-1.25790105496908e-16");
        assert_eq!(num(3e20), "3e20");
        assert_eq!(num(0.0), "0");
        assert_eq!(num(f64::INFINITY), "inf");
        assert_eq!(num(f64::NEG_INFINITY), "-inf");
        for x in [1.0e-300, 0.6942419136306173, 123456.789, -7.5e-7] {
            let back: f64 = num(x).parse().unwrap();
            assert!((back - x).abs() <= 1e-14 * x.abs());
        }
    }
}
