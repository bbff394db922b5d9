//! `tm-lcs`: generate Thue-Morse words, build and verify common
//! subsequences against their complements, compute exact LCS values, check
//! the omission bounds and export OEIS b-files.
//!
//! Data goes to stdout, diagnostics to stderr. Exit codes: 0 success,
//! 1 usage error, 2 cap or budget exceeded, 3 verification failure.

use std::fs;
use std::io::{self, Read, Write};
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};
use tm_lcs::alignment::{verify, AlignmentRecord};
use tm_lcs::construction::{construct_pow2, construct_prefix, construct_word};
use tm_lcs::lcs::{a_of, b_of, lcs_length};
use tm_lcs::oeis::{export, Sequence};
use tm_lcs::word::{decompose_prefix, tm_prefix, tm_word, ThueMorseSource};
use tm_lcs::{analysis, Algorithm, BitWord, ConstructionResult, Error, Limits};

const EXIT_USAGE: u8 = 1;
const EXIT_LIMIT: u8 = 2;
const EXIT_VERIFY: u8 = 3;

#[derive(Parser, Debug)]
#[command(name = "tm-lcs", version, about = "Common subsequences of Thue-Morse words and their complements")]
struct Cli {
    #[command(flatten)]
    limits: LimitArgs,
    #[command(subcommand)]
    command: Command,
}

#[derive(Args, Debug)]
struct LimitArgs {
    /// Largest word or prefix materialized, in symbols
    #[arg(long, global = true, default_value_t = Limits::DEFAULT_MAX_SYMBOLS)]
    max_symbols: u64,
    /// Largest k for which CS(k) is materialized
    #[arg(long, global = true, default_value_t = Limits::DEFAULT_MAX_MATERIALIZED_POW2)]
    max_materialized_k: u32,
    /// Cell budget for the quadratic DP
    #[arg(long, global = true, default_value_t = Limits::DEFAULT_QUADRATIC_BUDGET)]
    quadratic_budget: u128,
    /// Cell budget for the bit-parallel and linear-space algorithms
    #[arg(long, global = true, default_value_t = Limits::DEFAULT_BIT_PARALLEL_BUDGET)]
    bit_parallel_budget: u128,
    /// Largest k for which f(k) is evaluated
    #[arg(long, global = true, default_value_t = Limits::DEFAULT_MAX_F_EXPONENT)]
    max_f_exponent: u32,
}

impl LimitArgs {
    fn limits(&self) -> Limits {
        Limits {
            max_symbols: self.max_symbols,
            max_materialized_pow2: self.max_materialized_k,
            quadratic_budget: self.quadratic_budget,
            bit_parallel_budget: self.bit_parallel_budget,
            max_f_exponent: self.max_f_exponent,
        }
    }
}

/// Which pair of words to operate on.
#[derive(Args, Debug)]
#[group(required = false, multiple = false)]
struct Target {
    /// mu^n(0) against mu^n(1)
    #[arg(long, value_name = "N")]
    word: Option<u64>,
    /// The length-n prefix of the sequence against its complement
    #[arg(long, value_name = "N")]
    prefix: Option<u64>,
}

#[derive(Args, Debug)]
#[group(required = true, multiple = false)]
struct ConstructTarget {
    /// mu^n(0) against mu^n(1)
    #[arg(long, value_name = "N")]
    word: Option<u64>,
    /// The length-n prefix of the sequence against its complement
    #[arg(long, value_name = "N")]
    prefix: Option<u64>,
    /// CS(k), on mu^(2^k)(0) against mu^(2^k)(1)
    #[arg(long, value_name = "K")]
    pow2: Option<u32>,
}

#[derive(Debug, Clone, Copy, ValueEnum)]
enum TableFormat {
    Csv,
    Json,
}

#[derive(Debug, Clone, Copy, ValueEnum)]
enum WordFormat {
    Text,
    Json,
}

#[derive(Debug, Clone, Copy, ValueEnum)]
enum AlgorithmArg {
    QuadraticDp,
    LinearSpace,
    BitParallel,
}

impl From<AlgorithmArg> for Algorithm {
    fn from(a: AlgorithmArg) -> Self {
        match a {
            AlgorithmArg::QuadraticDp => Algorithm::QuadraticDp,
            AlgorithmArg::LinearSpace => Algorithm::LinearSpace,
            AlgorithmArg::BitParallel => Algorithm::BitParallel,
        }
    }
}

#[derive(Debug, Clone, Copy, ValueEnum)]
enum SequenceArg {
    A297618,
    A320847,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Print a Thue-Morse word or prefix as a 0/1 string
    Generate {
        #[command(flatten)]
        target: Target,
        #[arg(long, value_enum, default_value_t = WordFormat::Text)]
        format: WordFormat,
    },
    /// Print the block decomposition of a prefix length as JSON
    Decompose {
        n: u64,
    },
    /// Build the recursive common subsequence and emit it as alignment JSON
    Construct {
        #[command(flatten)]
        target: ConstructTarget,
        /// Print only the exact length
        #[arg(long)]
        length_only: bool,
    },
    /// Verify alignment JSON read from stdin against a word pair
    Verify {
        #[command(flatten)]
        target: ConstructTarget,
    },
    /// Exact LCS length; words come from --word/--prefix or two 0/1 strings on stdin
    Lcs {
        #[command(flatten)]
        target: Target,
        #[arg(long, value_enum, default_value_t = AlgorithmArg::BitParallel)]
        algorithm: AlgorithmArg,
    },
    /// Table of f(k), |CS(k)| and the bound checks
    Analyze {
        #[arg(long, default_value_t = 12)]
        max_k: u32,
        #[arg(long, value_enum, default_value_t = TableFormat::Csv)]
        format: TableFormat,
    },
    /// Export an OEIS b-file
    Oeis {
        #[arg(long, value_enum)]
        sequence: SequenceArg,
        #[arg(long, value_name = "N")]
        max: u64,
        #[arg(long, value_enum, default_value_t = AlgorithmArg::BitParallel)]
        algorithm: AlgorithmArg,
        /// Write to this file instead of stdout
        #[arg(long)]
        output: Option<std::path::PathBuf>,
    },
}

enum Failure {
    Usage(String),
    Lib(Error),
    Verification(String),
    Io(io::Error),
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        Failure::Lib(e)
    }
}

impl From<io::Error> for Failure {
    fn from(e: io::Error) -> Self {
        Failure::Io(e)
    }
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            return if e.use_stderr() {
                ExitCode::from(EXIT_USAGE)
            } else {
                ExitCode::SUCCESS
            };
        }
    };
    let limits = cli.limits.limits();
    let mut stdout = io::stdout().lock();
    match run(cli.command, &limits, &mut stdout) {
        Ok(()) => ExitCode::SUCCESS,
        Err(failure) => {
            let (code, message) = match failure {
                Failure::Usage(m) => (EXIT_USAGE, m),
                Failure::Verification(m) => (EXIT_VERIFY, format!("verification failed: {m}")),
                Failure::Io(e) => (EXIT_USAGE, e.to_string()),
                Failure::Lib(e) => (exit_code_for(&e), e.to_string()),
            };
            eprintln!("tm-lcs: {message}");
            ExitCode::from(code)
        }
    }
}

fn exit_code_for(e: &Error) -> u8 {
    match e {
        Error::CapExceeded { .. } | Error::BudgetExceeded { .. } | Error::ExponentTooLarge { .. } => {
            EXIT_LIMIT
        }
        Error::InvalidSymbol(_) | Error::InvalidArgument(_) => EXIT_USAGE,
        Error::NegativeIndex { .. } | Error::Overlap { .. } | Error::IndexOutOfRange { .. } => {
            EXIT_VERIFY
        }
    }
}

fn run(command: Command, limits: &Limits, out: &mut impl Write) -> Result<(), Failure> {
    match command {
        Command::Generate { target, format } => {
            let word = match (target.word, target.prefix) {
                (Some(n), None) => tm_word(exponent(n)?, 0, limits)?,
                (None, Some(n)) => tm_prefix(n, limits)?,
                _ => return Err(Failure::Usage("generate needs --word or --prefix".into())),
            };
            match format {
                WordFormat::Text => writeln!(out, "{word}")?,
                WordFormat::Json => writeln!(out, "{}", to_json(&word))?,
            }
        }
        Command::Decompose { n } => {
            writeln!(out, "{}", to_json(&decompose_prefix(n)))?;
        }
        Command::Construct {
            target,
            length_only,
        } => {
            let result = build(&target, !length_only, limits)?;
            if length_only {
                writeln!(out, "{}", result.length)?;
            } else {
                let alignment = result
                    .alignment
                    .expect("materialized construction carries an alignment");
                let source = virtual_pair(&target)?;
                verify(&alignment, &source.0, &source.1)
                    .map_err(|v| Failure::Verification(v.to_string()))?;
                if result.length != alignment.len().into() {
                    return Err(Failure::Verification(format!(
                        "alignment has {} matches, expected {}",
                        alignment.len(),
                        result.length
                    )));
                }
                let record = alignment.to_record(source.0.len, source.1.len);
                writeln!(out, "{}", to_json(&record))?;
            }
        }
        Command::Verify { target } => {
            let mut input = String::new();
            io::stdin().read_to_string(&mut input)?;
            let record: AlignmentRecord = serde_json::from_str(&input)
                .map_err(|e| Failure::Usage(format!("invalid alignment JSON: {e}")))?;
            let (x, y) = virtual_pair(&target)?;
            if record.x_len != x.len || record.y_len != y.len {
                return Err(Failure::Verification(format!(
                    "alignment is for lengths ({}, {}), words have ({}, {})",
                    record.x_len, record.y_len, x.len, y.len
                )));
            }
            let alignment = record.alignment();
            verify(&alignment, &x, &y).map_err(|v| Failure::Verification(v.to_string()))?;
            writeln!(out, "ok {}", alignment.len())?;
        }
        Command::Lcs { target, algorithm } => {
            let algorithm = Algorithm::from(algorithm);
            let result = match (target.word, target.prefix) {
                (Some(n), None) => a_of(exponent(n)?, algorithm, limits)?,
                (None, Some(n)) => b_of(n, algorithm, limits)?,
                _ => {
                    let (x, y) = read_word_pair()?;
                    lcs_length(&x, &y, algorithm, limits)?
                }
            };
            writeln!(out, "{}", to_json(&result))?;
        }
        Command::Analyze { max_k, format } => {
            let limits = Limits {
                max_f_exponent: limits.max_f_exponent.max(max_k + 1),
                ..*limits
            };
            let rows = analysis::ratio_table(max_k, &limits)?;
            match format {
                TableFormat::Csv => write!(out, "{}", analysis::table_csv(&rows))?,
                TableFormat::Json => writeln!(out, "{}", to_json(&rows))?,
            }
        }
        Command::Oeis {
            sequence,
            max,
            algorithm,
            output,
        } => {
            let sequence = match sequence {
                SequenceArg::A297618 => Sequence::A297618,
                SequenceArg::A320847 => Sequence::A320847,
            };
            let result = export(sequence, max, algorithm.into(), limits);
            if let Some(e) = &result.stopped {
                let last = result.terms.last().map_or(0, |t| t.0);
                eprintln!("tm-lcs: warning: {sequence} stopped after n = {last}: {e}");
            }
            match output {
                Some(path) => fs::write(path, result.to_bfile())?,
                None => write!(out, "{}", result.to_bfile())?,
            }
        }
    }
    Ok(())
}

fn exponent(n: u64) -> Result<u32, Failure> {
    u32::try_from(n).map_err(|_| Failure::Usage(format!("word exponent {n} is too large")))
}

fn build(target: &ConstructTarget, materialize: bool, limits: &Limits) -> Result<ConstructionResult, Failure> {
    Ok(match (target.word, target.prefix, target.pow2) {
        (Some(n), None, None) => construct_word(n, materialize, limits)?,
        (None, Some(n), None) => construct_prefix(n, materialize, limits)?,
        (None, None, Some(k)) => construct_pow2(k, materialize, limits)?,
        _ => return Err(Failure::Usage("exactly one of --word, --prefix, --pow2".into())),
    })
}

/// The (X, Y) pair as digit sources, for streaming verification.
fn virtual_pair(target: &ConstructTarget) -> Result<(ThueMorseSource, ThueMorseSource), Failure> {
    let len = match (target.word, target.prefix, target.pow2) {
        (Some(n), None, None) if n < 64 => 1u64 << n,
        (None, Some(n), None) => n,
        (None, None, Some(k)) if k < 6 => 1u64 << (1u64 << k),
        _ => return Err(Failure::Usage("word pair too long to index with 64 bits".into())),
    };
    Ok((
        ThueMorseSource::prefix(len),
        ThueMorseSource::complement_prefix(len),
    ))
}

fn read_word_pair() -> Result<(BitWord, BitWord), Failure> {
    let mut input = String::new();
    io::stdin().read_to_string(&mut input)?;
    let mut tokens = input.split_whitespace();
    let mut next = || -> Result<BitWord, Failure> {
        tokens
            .next()
            .ok_or_else(|| Failure::Usage("expected two 0/1 strings on stdin".into()))?
            .parse()
            .map_err(Failure::Lib)
    };
    let x = next()?;
    let y = next()?;
    Ok((x, y))
}

fn to_json<T: serde::Serialize>(v: &T) -> String {
    serde_json::to_string(v).expect("values serialize to JSON")
}
