//! Command-line front end.
//!
//! Exit codes: 0 on success, 2 for invalid input, 3 for internal errors.
//! Data goes to stdout, diagnostics to stderr.

use std::fmt::Write as _;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde_json::json;
use thiserror::Error;

use crate::cartan::{cartan_matrix, path_counts_bruteforce, path_counts_gf, CartanError, DEFAULT_PATH_CAP};
use crate::ktheory::{compute_ktheory, low_dim_params, source_matrix, KTheoryError, MatrixSource, SCHEMA_VERSION};
use crate::linalg::determinant;
use crate::params::{is_prime, validate_params, validate_prime_power, ParamsError, PrimePower, QuotientParams};
use crate::quiver::build_quiver;
use crate::snf::smith_normal_form;
use crate::sweep::{run_sweep, PrimeChoice, SweepConfig, SweepError, WeightMode, DEFAULT_MAX_CELLS};
use crate::verify::{verify_paper, PaperFixture};

pub const EXIT_OK: u8 = 0;
pub const EXIT_INVALID_INPUT: u8 = 2;
pub const EXIT_INTERNAL: u8 = 3;

#[derive(Debug, Parser)]
#[command(name = "cyclic-ktheory", version, about = "K-theory with Z/l^nu coefficients of cyclic quotient singularities")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Kernel and cokernel of M over Z/l^nu: the groups in every degree.
    Compute {
        #[command(flatten)]
        params: ParamArgs,
        #[command(flatten)]
        coefficient: CoefficientArgs,
        #[arg(long, value_enum, default_value_t = SourceArg::Pipeline)]
        source: SourceArg,
        #[arg(long, value_enum, default_value_t = OutputFormat::Pretty)]
        format: OutputFormat,
    },
    /// The truncated quiver with relations.
    Quiver {
        #[command(flatten)]
        params: ParamArgs,
        #[arg(long, value_enum, default_value_t = OutputFormat::Dot)]
        format: OutputFormat,
    },
    /// Path counts and the Cartan matrix.
    Cartan {
        #[command(flatten)]
        params: ParamArgs,
        /// Also count paths by explicit enumeration and compare.
        #[arg(long)]
        check: bool,
        /// Raw path cap for the enumeration.
        #[arg(long, default_value_t = DEFAULT_PATH_CAP)]
        cap: u64,
        #[arg(long, value_enum, default_value_t = OutputFormat::Pretty)]
        format: OutputFormat,
    },
    /// The matrix M and its determinant.
    Matrix {
        #[command(flatten)]
        params: ParamArgs,
        #[arg(long, value_enum, default_value_t = SourceArg::Pipeline)]
        source: SourceArg,
        #[arg(long, value_enum, default_value_t = OutputFormat::Pretty)]
        format: OutputFormat,
    },
    /// Smith normal form of M with its certificate U M V = D.
    Snf {
        #[command(flatten)]
        params: ParamArgs,
        #[arg(long, value_enum, default_value_t = SourceArg::Pipeline)]
        source: SourceArg,
        /// Shortcut for the printed low-dimensional matrix.
        #[arg(long, value_enum)]
        fixture: Option<SnfFixture>,
        #[arg(long, value_enum, default_value_t = OutputFormat::Pretty)]
        format: OutputFormat,
    },
    /// Compare printed matrices with the computed ones.
    VerifyPaper {
        #[arg(long, value_enum)]
        fixture: FixtureArg,
        /// Dimension for the family fixture.
        #[arg(long)]
        d: Option<usize>,
        #[arg(long, value_enum, default_value_t = OutputFormat::Pretty)]
        format: OutputFormat,
    },
    /// Evaluate a grid of parameters and coefficients.
    Sweep(SweepArgs),
}

#[derive(Debug, Args)]
pub struct ParamArgs {
    /// Order of the cyclic group.
    #[arg(long, allow_hyphen_values = true)]
    pub n: Option<i64>,
    /// Dimension; defaults to the number of weights.
    #[arg(long, allow_hyphen_values = true)]
    pub d: Option<i64>,
    /// Comma-separated weights a_1,...,a_d, order preserved.
    #[arg(long, allow_hyphen_values = true)]
    pub weights: Option<String>,
}

#[derive(Debug, Args)]
pub struct CoefficientArgs {
    /// The prime l.
    #[arg(long, allow_hyphen_values = true)]
    pub prime: Option<String>,
    /// The exponent nu.
    #[arg(long, default_value_t = 1, allow_hyphen_values = true)]
    pub exponent: i64,
}

#[derive(Debug, Args)]
pub struct SweepArgs {
    /// Values of n: comma-separated numbers or inclusive ranges a..b.
    #[arg(long)]
    pub n: String,
    /// Values of d (default: every d from 2 to n).
    #[arg(long)]
    pub d: Option<String>,
    #[arg(long, value_enum, default_value_t = WeightsModeArg::Sorted)]
    pub weights_mode: WeightsModeArg,
    /// Fixed weights, used with --weights-mode explicit.
    #[arg(long)]
    pub weights: Option<String>,
    /// Primes: numbers, ranges a..b (primes inside), or `n` for l = n.
    #[arg(long, default_value = "")]
    pub primes: String,
    #[arg(long, default_value = "1")]
    pub exponents: String,
    #[arg(long, value_enum, default_value_t = SourceArg::Pipeline)]
    pub source: SourceArg,
    #[arg(long, default_value_t = DEFAULT_MAX_CELLS)]
    pub max_cells: usize,
    /// Worker threads (default: all cores).
    #[arg(long)]
    pub jobs: Option<usize>,
    #[arg(long, value_enum, default_value_t = OutputFormat::Csv)]
    pub format: OutputFormat,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum OutputFormat {
    Pretty,
    Json,
    Csv,
    Dot,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum SourceArg {
    Pipeline,
    Family,
    Fixture,
}

impl From<SourceArg> for MatrixSource {
    fn from(s: SourceArg) -> Self {
        match s {
            SourceArg::Pipeline => MatrixSource::TheoremPipeline,
            SourceArg::Family => MatrixSource::ClosedFormFamily,
            SourceArg::Fixture => MatrixSource::PaperFixture,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum SnfFixture {
    #[value(alias = "low-dim-example")]
    PaperLowDim,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum FixtureArg {
    #[value(alias = "paper-low-dim")]
    LowDimExample,
    Family,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum WeightsModeArg {
    All,
    Sorted,
    Ones,
    Explicit,
}

#[derive(Debug, Error)]
pub enum CliError {
    #[error("{0}")]
    Invalid(String),
    #[error("internal error: {0}")]
    Internal(String),
}

impl CliError {
    pub fn exit_code(&self) -> u8 {
        match self {
            CliError::Invalid(_) => EXIT_INVALID_INPUT,
            CliError::Internal(_) => EXIT_INTERNAL,
        }
    }
}

impl From<ParamsError> for CliError {
    fn from(e: ParamsError) -> Self {
        CliError::Invalid(e.to_string())
    }
}

impl From<KTheoryError> for CliError {
    fn from(e: KTheoryError) -> Self {
        CliError::Invalid(e.to_string())
    }
}

impl From<CartanError> for CliError {
    fn from(e: CartanError) -> Self {
        match e {
            CartanError::PathExplosion { .. } => CliError::Invalid(e.to_string()),
            CartanError::NotHomogeneous { .. } => CliError::Internal(e.to_string()),
        }
    }
}

impl From<SweepError> for CliError {
    fn from(e: SweepError) -> Self {
        match e {
            SweepError::Pool(_) => CliError::Internal(e.to_string()),
            _ => CliError::Invalid(e.to_string()),
        }
    }
}

fn invalid(msg: impl Into<String>) -> CliError {
    CliError::Invalid(msg.into())
}

fn parse_int_list(flag: &str, text: &str) -> Result<Vec<i64>, CliError> {
    text.split(',')
        .map(str::trim)
        .filter(|s| !s.is_empty())
        .map(|s| s.parse::<i64>().map_err(|_| invalid(format!("--{flag}: `{s}` is not an integer"))))
        .collect()
}

/// Numbers and inclusive ranges `a..b`, sorted and deduplicated.
fn parse_number_set(flag: &str, text: &str) -> Result<Vec<u64>, CliError> {
    let mut out = Vec::new();
    for item in text.split(',').map(str::trim).filter(|s| !s.is_empty()) {
        let parse = |s: &str| s.trim().parse::<u64>().map_err(|_| invalid(format!("--{flag}: `{s}` is not a number")));
        match item.split_once("..") {
            Some((lo, hi)) => {
                let hi = hi.strip_prefix('=').unwrap_or(hi);
                out.extend(parse(lo)?..=parse(hi)?);
            }
            None => out.push(parse(item)?),
        }
    }
    out.sort_unstable();
    out.dedup();
    Ok(out)
}

fn parse_primes(text: &str) -> Result<Vec<PrimeChoice>, CliError> {
    let mut out = Vec::new();
    for item in text.split(',').map(str::trim).filter(|s| !s.is_empty()) {
        if item == "n" {
            out.push(PrimeChoice::MatchN);
        } else if item.contains("..") {
            let range = parse_number_set("primes", item)?;
            out.extend(range.into_iter().filter(|&p| is_prime(p)).map(PrimeChoice::Fixed));
        } else {
            let p = item.parse::<u64>().map_err(|_| invalid(format!("--primes: `{item}` is not a number")))?;
            validate_prime_power(p as i128, 1)?;
            out.push(PrimeChoice::Fixed(p));
        }
    }
    Ok(out)
}

impl ParamArgs {
    fn resolve(&self) -> Result<QuotientParams, CliError> {
        let n = self.n.ok_or_else(|| invalid("missing --n"))?;
        let weights = self.weights.as_deref().ok_or_else(|| invalid("missing --weights"))?;
        let weights = parse_int_list("weights", weights)?;
        let d = self.d.unwrap_or(weights.len() as i64);
        Ok(validate_params(n, d, &weights)?)
    }
}

impl CoefficientArgs {
    fn resolve(&self) -> Result<PrimePower, CliError> {
        let prime = self.prime.as_deref().ok_or_else(|| invalid("missing --prime"))?.trim();
        let l = match prime.parse::<i128>() {
            Ok(l) => l,
            Err(_) if !prime.is_empty() && prime.chars().all(|c| c.is_ascii_digit()) => {
                return Err(ParamsError::PrimeOutOfRange(prime.to_string()).into())
            }
            Err(_) => return Err(invalid(format!("--prime: `{prime}` is not an integer"))),
        };
        Ok(validate_prime_power(l, self.exponent)?)
    }
}

fn require_format(format: OutputFormat, allowed: &[OutputFormat], command: &str) -> Result<(), CliError> {
    if allowed.contains(&format) {
        Ok(())
    } else {
        Err(invalid(format!("--format {format:?} is not supported by `{command}`").to_lowercase()))
    }
}

fn to_json(value: &impl serde::Serialize) -> String {
    let mut s = serde_json::to_string_pretty(value).expect("serializable");
    s.push('\n');
    s
}

/// Runs one parsed command and returns what belongs on stdout.
pub fn execute(cli: &Cli) -> Result<String, CliError> {
    use OutputFormat::*;
    match &cli.command {
        Command::Compute { params, coefficient, source, format } => {
            require_format(*format, &[Pretty, Json], "compute")?;
            let params = params.resolve()?;
            let coefficient = coefficient.resolve()?;
            let report = compute_ktheory(&params, &coefficient, (*source).into())?;
            Ok(match format {
                Json => to_json(&report),
                _ => report.to_pretty(),
            })
        }
        Command::Quiver { params, format } => {
            require_format(*format, &[Dot, Json], "quiver")?;
            let params = params.resolve()?;
            let quiver = build_quiver(&params);
            Ok(match format {
                Dot => quiver.to_dot(),
                _ => to_json(&json!({ "schema_version": SCHEMA_VERSION, "params": params, "quiver": quiver })),
            })
        }
        Command::Cartan { params, check, cap, format } => {
            require_format(*format, &[Pretty, Json], "cartan")?;
            let params = params.resolve()?;
            let counts = path_counts_gf(&params);
            let brute = if *check { Some(path_counts_bruteforce(&build_quiver(&params), *cap)?) } else { None };
            if let Some(b) = &brute {
                if *b != counts {
                    return Err(CliError::Internal("enumerated path counts disagree with the generating function".into()));
                }
            }
            let cartan = cartan_matrix(&counts);
            Ok(match format {
                Json => to_json(&json!({
                    "schema_version": SCHEMA_VERSION,
                    "params": params,
                    "path_counts": counts,
                    "cartan": cartan.matrix(),
                    "enumeration_agrees": brute.map(|_| true),
                })),
                _ => {
                    let mut out = String::new();
                    writeln!(out, "parameters: {params}").unwrap();
                    let p: Vec<String> = counts.counts().iter().map(ToString::to_string).collect();
                    writeln!(out, "P = [{}]", p.join(", ")).unwrap();
                    if brute.is_some() {
                        writeln!(out, "enumeration: agrees").unwrap();
                    }
                    writeln!(out, "C =").unwrap();
                    for line in cartan.matrix().to_string().lines() {
                        writeln!(out, "  {line}").unwrap();
                    }
                    out
                }
            })
        }
        Command::Matrix { params, source, format } => {
            require_format(*format, &[Pretty, Json], "matrix")?;
            let params = params.resolve()?;
            let source: MatrixSource = (*source).into();
            let m = source_matrix(&params, source)?;
            let det = determinant(&m).map_err(|e| CliError::Internal(e.to_string()))?;
            Ok(match format {
                Json => to_json(&json!({
                    "schema_version": SCHEMA_VERSION,
                    "params": params,
                    "matrix_source": source,
                    "matrix": m,
                    "determinant": det.to_string(),
                })),
                _ => {
                    let mut out = format!("parameters: {params}\nsource: {source}\nM =\n");
                    for line in m.to_string().lines() {
                        writeln!(out, "  {line}").unwrap();
                    }
                    writeln!(out, "det M = {det}").unwrap();
                    out
                }
            })
        }
        Command::Snf { params, source, fixture, format } => {
            require_format(*format, &[Pretty, Json], "snf")?;
            let (params, source) = match fixture {
                Some(SnfFixture::PaperLowDim) => (low_dim_params(), MatrixSource::PaperFixture),
                None => (params.resolve()?, (*source).into()),
            };
            let m = source_matrix(&params, source)?;
            let snf = smith_normal_form(&m);
            snf.verify(&m).map_err(CliError::Internal)?;
            Ok(match format {
                Json => to_json(&json!({
                    "schema_version": SCHEMA_VERSION,
                    "params": params,
                    "matrix_source": source,
                    "matrix": m,
                    "snf": snf,
                })),
                _ => {
                    let mut out = format!("parameters: {params}\nsource: {source}\n");
                    for (name, mat) in [("M", &m), ("U", &snf.u), ("V", &snf.v), ("D", &snf.d)] {
                        writeln!(out, "{name} =").unwrap();
                        for line in mat.to_string().lines() {
                            writeln!(out, "  {line}").unwrap();
                        }
                    }
                    let divs: Vec<String> = snf.divisors.iter().map(ToString::to_string).collect();
                    writeln!(out, "divisors: {}", divs.join(", ")).unwrap();
                    out
                }
            })
        }
        Command::VerifyPaper { fixture, d, format } => {
            require_format(*format, &[Pretty, Json], "verify-paper")?;
            let fixture = match fixture {
                FixtureArg::LowDimExample => PaperFixture::LowDimExample,
                FixtureArg::Family => PaperFixture::Family { d: d.ok_or_else(|| invalid("--fixture family needs --d"))? },
            };
            let report = verify_paper(fixture)?;
            Ok(match format {
                Json => to_json(&json!({ "schema_version": SCHEMA_VERSION, "verification": report })),
                _ => report.to_pretty(),
            })
        }
        Command::Sweep(args) => {
            require_format(args.format, &[Csv, Json], "sweep")?;
            let n_values = parse_number_set("n", &args.n)?.into_iter().map(|n| n as usize).collect();
            let d_values = args
                .d
                .as_deref()
                .map(|d| parse_number_set("d", d).map(|v| v.into_iter().map(|d| d as usize).collect()))
                .transpose()?;
            let mode = match args.weights_mode {
                WeightsModeArg::All => WeightMode::All,
                WeightsModeArg::Sorted => WeightMode::Sorted,
                WeightsModeArg::Ones => WeightMode::Ones,
                WeightsModeArg::Explicit => WeightMode::Explicit(parse_int_list(
                    "weights",
                    args.weights.as_deref().ok_or_else(|| invalid("--weights-mode explicit needs --weights"))?,
                )?),
            };
            let exponents = parse_number_set("exponents", &args.exponents)?
                .into_iter()
                .map(|e| u32::try_from(e).map_err(|_| invalid("--exponents: value too large")))
                .collect::<Result<Vec<_>, _>>()?;
            if exponents.contains(&0) {
                return Err(ParamsError::NonPositiveExponent(0).into());
            }
            if args.jobs == Some(0) {
                return Err(invalid("--jobs must be positive"));
            }
            let config = SweepConfig {
                n_values,
                d_values,
                mode,
                primes: parse_primes(&args.primes)?,
                exponents,
                source: args.source.into(),
                max_cells: args.max_cells,
                jobs: args.jobs,
            };
            let table = run_sweep(&config)?;
            Ok(match args.format {
                Json => {
                    let mut s = table.to_json();
                    s.push('\n');
                    s
                }
                _ => table.to_csv(),
            })
        }
    }
}

pub fn run() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            return ExitCode::from(if e.use_stderr() { EXIT_INVALID_INPUT } else { EXIT_OK });
        }
    };
    let outcome = std::panic::catch_unwind(|| execute(&cli));
    match outcome {
        Ok(Ok(out)) => {
            print!("{out}");
            ExitCode::from(EXIT_OK)
        }
        Ok(Err(e)) => {
            eprintln!("error: {e}");
            ExitCode::from(e.exit_code())
        }
        Err(_) => {
            eprintln!("internal error: computation panicked");
            ExitCode::from(EXIT_INTERNAL)
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn run_args(args: &[&str]) -> Result<String, CliError> {
        let cli = Cli::try_parse_from(std::iter::once("cyclic-ktheory").chain(args.iter().copied())).unwrap();
        execute(&cli)
    }

    #[test]
    fn number_sets() {
        assert_eq!(parse_number_set("n", "7,3..5, 3").unwrap(), vec![3, 4, 5, 7]);
        assert_eq!(parse_number_set("n", "2..=4").unwrap(), vec![2, 3, 4]);
        assert!(parse_number_set("n", "x").is_err());
        assert_eq!(
            parse_primes("2..13").unwrap(),
            [2, 3, 5, 7, 11, 13].iter().map(|&p| PrimeChoice::Fixed(p)).collect::<Vec<_>>()
        );
        assert!(parse_primes("4").is_err());
        assert_eq!(parse_primes("n").unwrap(), vec![PrimeChoice::MatchN]);
    }

    #[test]
    fn compute_family() {
        let out = run_args(&["compute", "--n", "3", "--d", "3", "--weights", "1,1,1", "--prime", "3", "--exponent", "1"]).unwrap();
        assert!(out.contains("i >= 0 even: Z/3 ⊕ Z/3"), "{out}");
        assert!(out.contains("i >= 0 odd:  Z/3 ⊕ Z/3"), "{out}");
    }

    #[test]
    fn validation_errors_exit_two() {
        let err = run_args(&["compute", "--n", "4", "--d", "3", "--weights", "1,1,2"]).unwrap_err();
        assert_eq!(err.exit_code(), EXIT_INVALID_INPUT);
        assert!(err.to_string().contains("not coprime"));
        let err = run_args(&["quiver", "--n", "5", "--weights", "1,2,2", "--format", "csv"]).unwrap_err();
        assert_eq!(err.exit_code(), EXIT_INVALID_INPUT);
        let err = run_args(&["compute", "--n", "5", "--weights", "1,2,2", "--prime", "99999999999999999999999"]).unwrap_err();
        assert!(err.to_string().contains("supported range"));
    }

    #[test]
    fn snf_fixture_divisors() {
        let out = run_args(&["snf", "--fixture", "paper-low-dim"]).unwrap();
        assert!(out.contains("divisors: 1, 1, 1, 26"), "{out}");
    }
}
