//! Command-line front end.
//!
//! Every subcommand reads a sample file (one value per line), turns it into
//! a mixture through one of the bootstrap methods and runs the pipeline.
//! Results go to `--output` or stdout as JSON or CSV.

use std::collections::BTreeMap;
use std::fmt::Write as _;
use std::fs;
use std::io::{self, Write as _};
use std::path::{Path, PathBuf};
use std::sync::Arc;
use std::time::Instant;

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::adapters::{efron_mean, moving_block};
use crate::bench::{time_stages, BenchRow};
use crate::charfn::GridConfig;
use crate::distribution::DiscreteDistribution;
use crate::inversion::{density_to_cdf, InversionRule};
use crate::mixture::{compute_distribution, Distribution, MixtureSpec};
use crate::oracle::{brute_force_density, ks_distance, monte_carlo_cdf, DEFAULT_ENUMERATION_LIMIT};

pub const DEFAULT_ALPHAS: [f64; 5] = [0.025, 0.05, 0.5, 0.95, 0.975];

/// Bins below this value are reported as a sign of aliasing.
const NEGATIVE_BIN_WARNING: f64 = -0.05;

#[derive(Debug, Error)]
pub enum CliError {
    #[error("{0}")]
    Usage(String),

    #[error("file not found: {0}")]
    FileNotFound(PathBuf),

    #[error("{path}:{line}: cannot parse {text:?} as a number")]
    Parse {
        path: PathBuf,
        line: usize,
        text: String,
    },

    #[error("{0}")]
    Io(#[from] io::Error),

    #[error("malformed result document: {0}")]
    Document(#[from] serde_json::Error),

    #[error(transparent)]
    Module(#[from] crate::error::Error),
}

impl CliError {
    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::Usage(_) => 2,
            _ => 1,
        }
    }
}

fn usage(msg: impl Into<String>) -> CliError {
    CliError::Usage(msg.into())
}

#[derive(Debug, Parser)]
#[command(
    name = "detboot",
    version,
    about = "Deterministic bootstrap distributions"
)]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Binned density of the bootstrap statistic.
    Density(RunArgs),
    /// Cumulative distribution on the grid.
    Cdf(RunArgs),
    /// Quantiles at the requested levels.
    Quantile(RunArgs),
    /// KS distance of the pipeline against Monte Carlo and exact enumeration.
    Compare(CompareArgs),
    /// Stage timings for a list of grid sizes.
    Bench(BenchArgs),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Method {
    EfronMean,
    MovingBlock,
    CustomMixture,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Json,
    Csv,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Inversion {
    Symmetric,
    HalfSpectrum,
}

impl From<Inversion> for InversionRule {
    fn from(i: Inversion) -> Self {
        match i {
            Inversion::Symmetric => InversionRule::Symmetric,
            Inversion::HalfSpectrum => InversionRule::HalfSpectrum,
        }
    }
}

#[derive(Debug, Clone, Args)]
pub struct SpecArgs {
    /// Sample file, one value per line.
    #[arg(long)]
    pub input: PathBuf,
    #[arg(long, value_enum)]
    pub method: Method,
    /// Block length for moving-block.
    #[arg(long)]
    pub block_length: Option<usize>,
    /// Coefficients of a custom mixture, one component each.
    #[arg(long, value_delimiter = ',', allow_hyphen_values = true, conflicts_with_all = ["coeff", "m"])]
    pub coeffs: Option<Vec<f64>>,
    /// Common coefficient of `m` identical components.
    #[arg(long, allow_negative_numbers = true, requires = "m")]
    pub coeff: Option<f64>,
    /// Component count for `--coeff`; bench accepts a comma list.
    #[arg(long, value_delimiter = ',', requires = "coeff")]
    pub m: Option<Vec<usize>>,
}

#[derive(Debug, Clone, Args)]
pub struct GridArgs {
    #[arg(long, default_value_t = 4096)]
    pub grid_size: usize,
    /// Period as a multiple of the support width.
    #[arg(long, default_value_t = 1.0)]
    pub pad: f64,
    #[arg(long, value_enum, default_value_t = Inversion::Symmetric)]
    pub inversion: Inversion,
}

#[derive(Debug, Clone, Args)]
pub struct OutputArgs {
    #[arg(long, value_enum, default_value_t = Format::Json)]
    pub format: Format,
    /// Destination file; stdout when absent.
    #[arg(long)]
    pub output: Option<PathBuf>,
}

#[derive(Debug, Clone, Args)]
pub struct RunArgs {
    #[command(flatten)]
    pub spec: SpecArgs,
    #[command(flatten)]
    pub grid: GridArgs,
    /// Quantile levels.
    #[arg(long, value_delimiter = ',')]
    pub alpha: Option<Vec<f64>>,
    #[command(flatten)]
    pub out: OutputArgs,
}

#[derive(Debug, Clone, Args)]
pub struct CompareArgs {
    #[command(flatten)]
    pub spec: SpecArgs,
    #[command(flatten)]
    pub grid: GridArgs,
    #[arg(long, default_value_t = 0)]
    pub seed: u64,
    #[arg(long, default_value_t = 100_000)]
    pub replicates: usize,
    /// Largest number of outcomes enumerated exactly.
    #[arg(long, default_value_t = DEFAULT_ENUMERATION_LIMIT)]
    pub enumeration_limit: u64,
    #[command(flatten)]
    pub out: OutputArgs,
}

#[derive(Debug, Clone, Args)]
pub struct BenchArgs {
    #[command(flatten)]
    pub spec: SpecArgs,
    /// Grid sizes to time.
    #[arg(long, value_delimiter = ',', default_value = "1024,2048,4096")]
    pub grid_size: Vec<usize>,
    #[arg(long, default_value_t = 1.0)]
    pub pad: f64,
    #[arg(long, default_value_t = 0)]
    pub seed: u64,
    /// Monte Carlo replicates; 0 skips the baseline.
    #[arg(long, default_value_t = 10_000)]
    pub replicates: usize,
    /// Runs per measurement; the median is reported.
    #[arg(long, default_value_t = 5)]
    pub repeats: usize,
    #[command(flatten)]
    pub out: OutputArgs,
}

/// How the mixture coefficients were given.
#[derive(Debug, Clone, PartialEq)]
pub enum Coefficients {
    List(Vec<f64>),
    Repeated { coeff: f64, m: usize },
}

/// A validated request for the density, cdf and quantile commands.
#[derive(Debug, Clone, PartialEq)]
pub struct RunRequest {
    pub input: PathBuf,
    pub method: Method,
    pub block_length: Option<usize>,
    pub coefficients: Option<Coefficients>,
    pub grid: GridConfig,
    pub alphas: Vec<f64>,
    pub format: Format,
    pub output: Option<PathBuf>,
}

impl RunRequest {
    pub fn from_args(args: &RunArgs) -> Result<Self, CliError> {
        let coefficients = coefficients_of(&args.spec, false)?.map(|mut c| c.remove(0));
        let grid = grid_config(args.grid.grid_size, args.grid.pad, args.grid.inversion)?;
        let alphas = args
            .alpha
            .clone()
            .unwrap_or_else(|| DEFAULT_ALPHAS.to_vec());
        if alphas.is_empty() {
            return Err(usage("--alpha needs at least one level"));
        }
        if let Some(a) = alphas.iter().find(|a| !(**a > 0.0 && **a < 1.0)) {
            return Err(usage(format!("alpha {a} is outside (0, 1)")));
        }
        let req = Self {
            input: args.spec.input.clone(),
            method: args.spec.method,
            block_length: args.spec.block_length,
            coefficients,
            grid,
            alphas,
            format: args.out.format,
            output: args.out.output.clone(),
        };
        check_method(req.method, req.block_length, req.coefficients.is_some())?;
        Ok(req)
    }
}

fn grid_config(size: usize, pad: f64, inversion: Inversion) -> Result<GridConfig, CliError> {
    if size == 0 {
        return Err(usage("--grid-size must be at least 1"));
    }
    if !(pad.is_finite() && pad >= 1.0) {
        return Err(usage(format!("--pad {pad} must be >= 1")));
    }
    Ok(GridConfig::new(size)
        .with_pad(pad)
        .with_rule(inversion.into()))
}

/// One entry per requested `m` (only bench may ask for several).
fn coefficients_of(spec: &SpecArgs, many: bool) -> Result<Option<Vec<Coefficients>>, CliError> {
    if let Some(list) = &spec.coeffs {
        if list.is_empty() {
            return Err(usage("--coeffs needs at least one value"));
        }
        return Ok(Some(vec![Coefficients::List(list.clone())]));
    }
    match (spec.coeff, &spec.m) {
        (Some(coeff), Some(ms)) => {
            if ms.is_empty() || ms.contains(&0) {
                return Err(usage("--m must be at least 1"));
            }
            if ms.len() > 1 && !many {
                return Err(usage("--m takes a single value here"));
            }
            Ok(Some(
                ms.iter()
                    .map(|&m| Coefficients::Repeated { coeff, m })
                    .collect(),
            ))
        }
        _ => Ok(None),
    }
}

fn check_method(
    method: Method,
    block_length: Option<usize>,
    has_coeffs: bool,
) -> Result<(), CliError> {
    match method {
        Method::EfronMean if block_length.is_some() || has_coeffs => {
            Err(usage("efron-mean takes no --block-length or coefficients"))
        }
        Method::MovingBlock if block_length.is_none() => {
            Err(usage("moving-block needs --block-length"))
        }
        Method::MovingBlock if has_coeffs => Err(usage("moving-block takes no coefficients")),
        Method::CustomMixture if !has_coeffs => {
            Err(usage("custom-mixture needs --coeffs or --coeff with --m"))
        }
        Method::CustomMixture if block_length.is_some() => {
            Err(usage("custom-mixture takes no --block-length"))
        }
        _ => Ok(()),
    }
}

/// Reads one finite value per line; blank lines and `#` comments are skipped.
pub fn parse_sample_file(path: &Path) -> Result<Vec<f64>, CliError> {
    let text = fs::read_to_string(path).map_err(|e| match e.kind() {
        io::ErrorKind::NotFound => CliError::FileNotFound(path.to_path_buf()),
        _ => CliError::Io(e),
    })?;
    let mut values = Vec::new();
    for (i, line) in text.lines().enumerate() {
        let t = line.trim();
        if t.is_empty() || t.starts_with('#') {
            continue;
        }
        match t.parse::<f64>() {
            Ok(v) if v.is_finite() => values.push(v),
            _ => {
                return Err(CliError::Parse {
                    path: path.to_path_buf(),
                    line: i + 1,
                    text: t.to_string(),
                })
            }
        }
    }
    Ok(values)
}

/// Echo of the method and its parameters.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct MethodEcho {
    pub name: Method,
    pub input: String,
    pub sample_size: usize,
    #[serde(skip_serializing_if = "Option::is_none", default)]
    pub block_length: Option<usize>,
    #[serde(skip_serializing_if = "Option::is_none", default)]
    pub coeffs: Option<Vec<f64>>,
    #[serde(skip_serializing_if = "Option::is_none", default)]
    pub coeff: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none", default)]
    pub m: Option<usize>,
    pub components: usize,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct SupportEcho {
    pub lower: f64,
    pub upper: f64,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Timing {
    pub seconds: f64,
}

/// Output of the density, cdf and quantile commands.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ResultDocument {
    pub command: String,
    pub method: MethodEcho,
    /// Left edge of bin 0.
    #[serde(rename = "z_L")]
    pub z_l: f64,
    #[serde(rename = "T")]
    pub period: f64,
    #[serde(rename = "N")]
    pub grid_size: usize,
    pub pad: f64,
    pub inversion: InversionRule,
    pub support: SupportEcho,
    pub bins: Vec<f64>,
    pub cum: Vec<f64>,
    /// Keyed by the level as written by `{}` formatting.
    pub quantiles: BTreeMap<String, f64>,
    pub timing: Timing,
}

impl ResultDocument {
    pub fn read(path: &Path) -> Result<Self, CliError> {
        let text = fs::read_to_string(path).map_err(|e| match e.kind() {
            io::ErrorKind::NotFound => CliError::FileNotFound(path.to_path_buf()),
            _ => CliError::Io(e),
        })?;
        Ok(serde_json::from_str(&text)?)
    }
}

/// Sample, spec and method echo for a request.
pub struct Prepared {
    pub spec: MixtureSpec,
    pub echo: MethodEcho,
}

fn prepare(
    input: &Path,
    method: Method,
    block_length: Option<usize>,
    coefficients: Option<&Coefficients>,
) -> Result<Prepared, CliError> {
    let values = parse_sample_file(input)?;
    let spec = match method {
        Method::EfronMean => efron_mean(&values)?,
        Method::MovingBlock => {
            let l = block_length.ok_or_else(|| usage("moving-block needs --block-length"))?;
            moving_block(&values, l)?.0
        }
        Method::CustomMixture => {
            let dist = Arc::new(DiscreteDistribution::from_sample(&values)?);
            match coefficients {
                Some(Coefficients::List(a)) => MixtureSpec::shared(dist, a)?,
                Some(&Coefficients::Repeated { coeff, m }) => {
                    MixtureSpec::identical(dist, coeff, m)?
                }
                None => return Err(usage("custom-mixture needs --coeffs or --coeff with --m")),
            }
        }
    };
    let (coeffs, coeff, m) = match coefficients {
        Some(Coefficients::List(a)) => (Some(a.clone()), None, None),
        Some(&Coefficients::Repeated { coeff, m }) => (None, Some(coeff), Some(m)),
        None => (None, None, None),
    };
    let echo = MethodEcho {
        name: method,
        input: input.display().to_string(),
        sample_size: values.len(),
        block_length,
        coeffs,
        coeff,
        m,
        components: spec.len(),
    };
    Ok(Prepared { spec, echo })
}

fn warn_about(spec: &MixtureSpec, cfg: &GridConfig, dist: Option<&Distribution>) {
    let atoms = spec.max_atoms();
    if cfg.size < atoms {
        eprintln!(
            "warning: grid size {} is below the largest atom count {atoms}; the density will be coarse",
            cfg.size
        );
    }
    if let Some(d) = dist {
        let low = d.density.min_bin();
        if low < NEGATIVE_BIN_WARNING {
            eprintln!("warning: smallest bin is {low:.3e}; consider a larger --pad or --grid-size");
        }
    }
}

/// Runs a density, cdf or quantile request.
pub fn run(command: &str, req: &RunRequest) -> Result<ResultDocument, CliError> {
    let start = Instant::now();
    let prepared = prepare(
        &req.input,
        req.method,
        req.block_length,
        req.coefficients.as_ref(),
    )?;
    let dist = compute_distribution(&prepared.spec, &req.grid)?;
    warn_about(&prepared.spec, &req.grid, Some(&dist));
    let mut quantiles = BTreeMap::new();
    for &alpha in &req.alphas {
        quantiles.insert(alpha.to_string(), dist.quantile(alpha)?);
    }
    Ok(ResultDocument {
        command: command.to_string(),
        method: prepared.echo,
        z_l: dist.density.origin(),
        period: dist.density.period(),
        grid_size: dist.density.len(),
        pad: req.grid.pad,
        inversion: req.grid.rule,
        support: SupportEcho {
            lower: dist.support.lower(),
            upper: dist.support.upper(),
        },
        bins: dist.density.bins().to_vec(),
        cum: dist.cdf.cum().to_vec(),
        quantiles,
        timing: Timing {
            seconds: start.elapsed().as_secs_f64(),
        },
    })
}

fn sci(x: f64) -> String {
    format!("{x:.16e}")
}

/// CSV rows: bins for density and cdf, levels for quantile.
pub fn render_csv(doc: &ResultDocument) -> String {
    let mut out = String::new();
    if doc.command == "quantile" {
        out.push_str("alpha,quantile\n");
        for (alpha, z) in &doc.quantiles {
            let _ = writeln!(out, "{alpha},{}", sci(*z));
        }
        return out;
    }
    out.push_str("bin_left,bin_right,density_mass,cdf\n");
    let n = doc.grid_size as f64;
    for (i, (b, c)) in doc.bins.iter().zip(&doc.cum).enumerate() {
        let left = doc.z_l + i as f64 * doc.period / n;
        let right = doc.z_l + (i + 1) as f64 * doc.period / n;
        let _ = writeln!(out, "{},{},{},{}", sci(left), sci(right), sci(*b), sci(*c));
    }
    out
}

fn emit(text: &str, output: Option<&Path>) -> Result<(), CliError> {
    match output {
        Some(path) => fs::write(path, text)?,
        None => io::stdout().lock().write_all(text.as_bytes())?,
    }
    Ok(())
}

fn to_json<T: Serialize>(value: &T) -> Result<String, CliError> {
    let mut s = serde_json::to_string_pretty(value)?;
    s.push('\n');
    Ok(s)
}

/// Output of the compare command.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ComparisonDocument {
    pub command: String,
    pub method: MethodEcho,
    #[serde(rename = "z_L")]
    pub z_l: f64,
    #[serde(rename = "T")]
    pub period: f64,
    #[serde(rename = "N")]
    pub grid_size: usize,
    pub seed: u64,
    pub replicates: usize,
    pub ks_monte_carlo: f64,
    /// Absent when the enumeration would exceed the limit.
    pub ks_brute_force: Option<f64>,
    pub outcomes: f64,
    pub timing: Timing,
}

pub fn compare(args: &CompareArgs) -> Result<ComparisonDocument, CliError> {
    let start = Instant::now();
    let coefficients = coefficients_of(&args.spec, false)?.map(|mut c| c.remove(0));
    check_method(
        args.spec.method,
        args.spec.block_length,
        coefficients.is_some(),
    )?;
    let cfg = grid_config(args.grid.grid_size, args.grid.pad, args.grid.inversion)?;
    if args.replicates == 0 {
        return Err(usage("--replicates must be at least 1"));
    }
    let prepared = prepare(
        &args.spec.input,
        args.spec.method,
        args.spec.block_length,
        coefficients.as_ref(),
    )?;
    let spec = &prepared.spec;
    let dist = compute_distribution(spec, &cfg)?;
    warn_about(spec, &cfg, Some(&dist));

    let mc = monte_carlo_cdf(spec, args.replicates, args.seed)?;
    let ks_monte_carlo = ks_distance(&dist.cdf, &mc);
    let ks_brute_force = match brute_force_density(spec, &cfg, args.enumeration_limit) {
        Ok(exact) => Some(ks_distance(&dist.cdf, &density_to_cdf(&exact)?)),
        Err(crate::error::Error::EnumerationTooLarge { outcomes, limit }) => {
            eprintln!("note: {outcomes} outcomes exceed the enumeration limit {limit}; brute force skipped");
            None
        }
        Err(e) => return Err(e.into()),
    };
    Ok(ComparisonDocument {
        command: "compare".into(),
        method: prepared.echo,
        z_l: dist.density.origin(),
        period: dist.density.period(),
        grid_size: dist.density.len(),
        seed: args.seed,
        replicates: args.replicates,
        ks_monte_carlo,
        ks_brute_force,
        outcomes: spec.outcome_count(),
        timing: Timing {
            seconds: start.elapsed().as_secs_f64(),
        },
    })
}

pub fn bench(args: &BenchArgs) -> Result<Vec<BenchRow>, CliError> {
    let coefficients = coefficients_of(&args.spec, true)?;
    check_method(
        args.spec.method,
        args.spec.block_length,
        coefficients.is_some(),
    )?;
    if args.grid_size.is_empty() {
        return Err(usage("--grid-size needs at least one value"));
    }
    let variants: Vec<Option<Coefficients>> = match coefficients {
        Some(list) => list.into_iter().map(Some).collect(),
        None => vec![None],
    };
    let mut rows = Vec::new();
    for c in &variants {
        let prepared = prepare(
            &args.spec.input,
            args.spec.method,
            args.spec.block_length,
            c.as_ref(),
        )?;
        for &size in &args.grid_size {
            let cfg = grid_config(size, args.pad, Inversion::Symmetric)?;
            warn_about(&prepared.spec, &cfg, None);
            rows.push(time_stages(
                &prepared.spec,
                &cfg,
                args.replicates,
                args.seed,
                args.repeats,
            )?);
        }
    }
    Ok(rows)
}

fn render_bench_csv(rows: &[BenchRow]) -> String {
    let mut out = String::from("n,m,N,B,t_forward,t_ifft,t_mc\n");
    for r in rows {
        let mc = r.t_mc.map(sci).unwrap_or_default();
        let _ = writeln!(
            out,
            "{},{},{},{},{},{},{mc}",
            r.n,
            r.m,
            r.grid_size,
            r.replicates,
            sci(r.t_forward),
            sci(r.t_ifft)
        );
    }
    out
}

fn render_compare_csv(doc: &ComparisonDocument) -> String {
    let bf = doc.ks_brute_force.map(sci).unwrap_or_default();
    format!(
        "metric,value\nks_monte_carlo,{}\nks_brute_force,{bf}\n",
        sci(doc.ks_monte_carlo)
    )
}

/// Runs a parsed command line.
pub fn execute(cli: &Cli) -> Result<(), CliError> {
    match &cli.command {
        Command::Density(args) | Command::Cdf(args) | Command::Quantile(args) => {
            let name = match cli.command {
                Command::Density(_) => "density",
                Command::Cdf(_) => "cdf",
                _ => "quantile",
            };
            let req = RunRequest::from_args(args)?;
            let doc = run(name, &req)?;
            let text = match req.format {
                Format::Json => to_json(&doc)?,
                Format::Csv => render_csv(&doc),
            };
            emit(&text, req.output.as_deref())
        }
        Command::Compare(args) => {
            let doc = compare(args)?;
            let text = match args.out.format {
                Format::Json => to_json(&doc)?,
                Format::Csv => render_compare_csv(&doc),
            };
            emit(&text, args.out.output.as_deref())
        }
        Command::Bench(args) => {
            let rows = bench(args)?;
            let text = match args.out.format {
                Format::Json => to_json(&rows)?,
                Format::Csv => render_bench_csv(&rows),
            };
            emit(&text, args.out.output.as_deref())
        }
    }
}

/// Entry point for the binary; returns the process exit code.
pub fn main_with_args<I, S>(args: I) -> i32
where
    I: IntoIterator<Item = S>,
    S: Into<std::ffi::OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            return e.exit_code();
        }
    };
    match execute(&cli) {
        Ok(()) => 0,
        Err(e) => {
            eprintln!("error: {e}");
            e.exit_code()
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::io::Write;
    use tempfile::NamedTempFile;

    fn sample_file(text: &str) -> NamedTempFile {
        let mut f = NamedTempFile::new().unwrap();
        f.write_all(text.as_bytes()).unwrap();
        f
    }

    fn parse(args: &[&str]) -> Cli {
        Cli::try_parse_from(std::iter::once("detboot").chain(args.iter().copied())).unwrap()
    }

    fn run_args(cli: &Cli) -> &RunArgs {
        match &cli.command {
            Command::Density(a) | Command::Cdf(a) | Command::Quantile(a) => a,
            _ => panic!("not a run command"),
        }
    }

    #[test]
    fn parses_sample_format() {
        let f = sample_file("1.0\n  2.5  \n# note\n\n3e-1\n");
        assert_eq!(parse_sample_file(f.path()).unwrap(), vec![1.0, 2.5, 0.3]);
    }

    #[test]
    fn parse_error_reports_line() {
        let f = sample_file("abc\n");
        match parse_sample_file(f.path()).unwrap_err() {
            CliError::Parse { line, .. } => assert_eq!(line, 1),
            e => panic!("unexpected {e:?}"),
        }
        let f = sample_file("1\n\n2\nnan\n");
        match parse_sample_file(f.path()).unwrap_err() {
            CliError::Parse { line, .. } => assert_eq!(line, 4),
            e => panic!("unexpected {e:?}"),
        }
    }

    #[test]
    fn missing_file() {
        let err = parse_sample_file(Path::new("/nonexistent/sample.txt")).unwrap_err();
        assert!(matches!(err, CliError::FileNotFound(_)));
        assert_eq!(err.exit_code(), 1);
    }

    #[test]
    fn request_validation() {
        let f = sample_file("1\n2\n");
        let p = f.path().to_str().unwrap();
        let bad = [
            vec!["density", "--input", p, "--method", "custom-mixture"],
            vec!["density", "--input", p, "--method", "moving-block"],
            vec![
                "density",
                "--input",
                p,
                "--method",
                "efron-mean",
                "--alpha",
                "1.5",
            ],
            vec![
                "density",
                "--input",
                p,
                "--method",
                "efron-mean",
                "--pad",
                "0.5",
            ],
            vec![
                "density",
                "--input",
                p,
                "--method",
                "efron-mean",
                "--grid-size",
                "0",
            ],
            vec![
                "density",
                "--input",
                p,
                "--method",
                "efron-mean",
                "--coeffs",
                "1",
            ],
            vec![
                "density",
                "--input",
                p,
                "--method",
                "custom-mixture",
                "--coeff",
                "1",
                "--m",
                "2,3",
            ],
        ];
        for args in bad {
            let cli = parse(&args);
            let err = RunRequest::from_args(run_args(&cli)).unwrap_err();
            assert_eq!(err.exit_code(), 2, "{args:?}");
        }
        let cli = parse(&[
            "cdf",
            "--input",
            p,
            "--method",
            "custom-mixture",
            "--coeffs",
            "-1,0.5",
        ]);
        let req = RunRequest::from_args(run_args(&cli)).unwrap();
        assert_eq!(req.coefficients, Some(Coefficients::List(vec![-1.0, 0.5])));
        assert_eq!(req.alphas, DEFAULT_ALPHAS.to_vec());
    }

    #[test]
    fn clap_rejects_mixed_coefficient_forms() {
        let args = [
            "detboot",
            "density",
            "--input",
            "x",
            "--method",
            "custom-mixture",
            "--coeffs",
            "1",
            "--coeff",
            "1",
            "--m",
            "2",
        ];
        let err = Cli::try_parse_from(args).unwrap_err();
        assert_eq!(err.exit_code(), 2);
    }

    #[test]
    fn constant_sample_gives_zero_quantiles() {
        let f = sample_file("0.7\n0.7\n0.7\n0.7\n");
        let cli = parse(&[
            "quantile",
            "--input",
            f.path().to_str().unwrap(),
            "--method",
            "efron-mean",
            "--grid-size",
            "64",
        ]);
        let doc = run("quantile", &RunRequest::from_args(run_args(&cli)).unwrap()).unwrap();
        let width = doc.period / doc.grid_size as f64;
        assert_eq!(doc.bins[0], 1.0);
        for z in doc.quantiles.values() {
            assert!(z.abs() <= width);
        }
    }

    #[test]
    fn five_fold_custom_mixture() {
        let values: Vec<String> = (0..20)
            .map(|i| format!("{}", 0.3872 + i as f64 * 0.975))
            .collect();
        let f = sample_file(&values.join("\n"));
        let cli = parse(&[
            "density",
            "--input",
            f.path().to_str().unwrap(),
            "--method",
            "custom-mixture",
            "--coeffs",
            "1,1,1,1,1",
            "--grid-size",
            "1000",
        ]);
        let doc = run("density", &RunRequest::from_args(run_args(&cli)).unwrap()).unwrap();
        let total: f64 = doc.bins.iter().sum();
        assert!((total - 1.0).abs() <= 1e-9);
        let (lo, hi) = (0.3872, 0.3872 + 19.0 * 0.975);
        assert!((doc.support.lower - 5.0 * lo).abs() <= 1e-12);
        assert!((doc.support.upper - 5.0 * hi).abs() <= 1e-12);
    }

    #[test]
    fn json_round_trip_is_bitwise() {
        let values: Vec<String> = (0..9)
            .map(|i| format!("{}", (i as f64 * 1.37).sin()))
            .collect();
        let f = sample_file(&values.join("\n"));
        let cli = parse(&[
            "quantile",
            "--input",
            f.path().to_str().unwrap(),
            "--method",
            "efron-mean",
            "--grid-size",
            "300",
            "--alpha",
            "0.01,0.1,0.5,0.9,0.99",
        ]);
        let doc = run("quantile", &RunRequest::from_args(run_args(&cli)).unwrap()).unwrap();
        let out = NamedTempFile::new().unwrap();
        fs::write(out.path(), to_json(&doc).unwrap()).unwrap();
        let back = ResultDocument::read(out.path()).unwrap();
        assert_eq!(back, doc);
        for (k, v) in &doc.quantiles {
            assert_eq!(back.quantiles[k].to_bits(), v.to_bits());
        }
    }

    #[test]
    fn csv_rows() {
        let f = sample_file("0\n1\n");
        let cli = parse(&[
            "density",
            "--input",
            f.path().to_str().unwrap(),
            "--method",
            "custom-mixture",
            "--coeff",
            "1",
            "--m",
            "2",
            "--grid-size",
            "4",
            "--pad",
            "2",
            "--format",
            "csv",
        ]);
        let doc = run("density", &RunRequest::from_args(run_args(&cli)).unwrap()).unwrap();
        let csv = render_csv(&doc);
        let lines: Vec<&str> = csv.lines().collect();
        assert_eq!(lines[0], "bin_left,bin_right,density_mass,cdf");
        assert_eq!(lines.len(), 5);
        let first: Vec<f64> = lines[1].split(',').map(|x| x.parse().unwrap()).collect();
        assert_eq!(first[0], 0.0);
        assert_eq!(first[1], 1.0);
        assert!((first[2] - 0.25).abs() < 1e-15);
    }

    #[test]
    fn compare_reports_both_distances() {
        let f = sample_file("0\n1\n3\n");
        let cli = parse(&[
            "compare",
            "--input",
            f.path().to_str().unwrap(),
            "--method",
            "custom-mixture",
            "--coeffs",
            "1,1",
            "--grid-size",
            "64",
            "--pad",
            "1.3333333333333333",
            "--replicates",
            "20000",
            "--seed",
            "5",
        ]);
        let Command::Compare(args) = &cli.command else {
            panic!()
        };
        let doc = compare(args).unwrap();
        // T = 8 puts every outcome on the grid.
        assert!(doc.ks_monte_carlo <= 0.02, "{}", doc.ks_monte_carlo);
        assert!(doc.ks_brute_force.unwrap() <= 1e-9);
        assert_eq!(doc.outcomes, 9.0);
    }

    #[test]
    fn bench_rows_per_grid_and_m() {
        let f = sample_file("0\n1\n3\n");
        let cli = parse(&[
            "bench",
            "--input",
            f.path().to_str().unwrap(),
            "--method",
            "custom-mixture",
            "--coeff",
            "0.5",
            "--m",
            "2,4",
            "--grid-size",
            "64,128",
            "--replicates",
            "100",
            "--repeats",
            "1",
        ]);
        let Command::Bench(args) = &cli.command else {
            panic!()
        };
        let rows = bench(args).unwrap();
        let shape: Vec<(usize, usize)> = rows.iter().map(|r| (r.m, r.grid_size)).collect();
        assert_eq!(shape, vec![(2, 64), (2, 128), (4, 64), (4, 128)]);
    }
}
