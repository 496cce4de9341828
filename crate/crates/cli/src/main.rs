//! The `milnor` command line: apply operation words, run check suites,
//! evaluate witness certificates, and scan kernels on a bidegree.
//!
//! Exit codes: 0 success, 1 a mathematical check failed, 2 usage error,
//! 3 internal consistency defect (the tool caught itself disagreeing).

use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};
use milnor_cli::certify::{certify, render_human as render_certificate, Group};
use milnor_cli::scan::{render_human as render_scan, scan};
use milnor_cli::verify::{formula_checks, property_checks, Check, PropertyOptions};
use milnor_cli::CliError;
use milnor_core::{
    parse_element, parse_word, Bidegree, ComputationRecord, OperationWord, PrimitiveOp,
    RingContext,
};

/// Reduced power indices accepted on the command line.
const MAX_POWER_INDEX: u32 = 10_000;
/// Milnor indices accepted on the command line; beyond this the recursion
/// depth and the l^i exponents stop being useful.
const MAX_MILNOR_INDEX: u32 = 12;

#[derive(Parser)]
#[command(
    name = "milnor",
    version,
    about = "Steenrod and Milnor operations in the mod-l cohomology of B(Z/l)^n"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Apply an operation word to an expression.
    Apply(ApplyArgs),
    /// Run the built-in identity and property check suites.
    Verify(VerifyArgs),
    /// Evaluate the non-algebraicity witness certificate for a group.
    Certify(CertifyArgs),
    /// Matrix rank and kernel of an operation word on one bidegree.
    Scan(ScanArgs),
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Format {
    Human,
    Json,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Suite {
    Formulas,
    Properties,
    All,
}

#[derive(Args)]
struct ApplyArgs {
    /// The prime l.
    #[arg(short = 'l', long = "prime")]
    prime: u32,
    /// Number of Z/l factors in B(Z/l)^n.
    #[arg(short = 'n', long = "rank", default_value_t = 3)]
    rank: u32,
    /// Comma-separated operations, leftmost applied last (e.g. "Q1,Q0").
    #[arg(long)]
    word: String,
    /// Input expression (e.g. "x1*x2*x3 + tau*y1*x2").
    #[arg(long)]
    expr: String,
    #[arg(long, value_enum, default_value_t = Format::Human)]
    format: Format,
}

#[derive(Args)]
struct VerifyArgs {
    /// The prime l.
    #[arg(short = 'l', long = "prime")]
    prime: u32,
    /// Which suite to run.
    #[arg(long, value_enum, default_value_t = Suite::All)]
    suite: Suite,
    /// First-degree bound for sampled monomials and the exhaustive sweep.
    #[arg(long, default_value_t = 12)]
    max_degree: i64,
    /// Seed for the randomized property checks.
    #[arg(long, default_value_t = 2026)]
    seed: u64,
    /// Sample count per property check.
    #[arg(long, default_value_t = 200)]
    samples: usize,
    /// Largest Milnor index exercised by the suites.
    #[arg(long, default_value_t = 3)]
    max_q_index: u32,
    #[arg(long, value_enum, default_value_t = Format::Human)]
    format: Format,
}

#[derive(Args)]
struct CertifyArgs {
    /// Group name: G2, F4, or E8.
    #[arg(long)]
    group: String,
    #[arg(long, value_enum, default_value_t = Format::Human)]
    format: Format,
    /// Also write the JSON certificate to this path.
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Args)]
struct ScanArgs {
    /// The prime l.
    #[arg(short = 'l', long = "prime")]
    prime: u32,
    /// Number of Z/l factors in B(Z/l)^n.
    #[arg(short = 'n', long = "rank", default_value_t = 3)]
    rank: u32,
    /// Source bidegree as "m,w".
    #[arg(long)]
    bidegree: String,
    /// Comma-separated operations, leftmost applied last.
    #[arg(long)]
    word: String,
    #[arg(long, value_enum, default_value_t = Format::Human)]
    format: Format,
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(err) => {
            eprintln!("{err}");
            ExitCode::from(err.exit_code() as u8)
        }
    }
}

fn run(cli: Cli) -> Result<(), CliError> {
    match cli.command {
        Command::Apply(args) => run_apply(args),
        Command::Verify(args) => run_verify(args),
        Command::Certify(args) => run_certify(args),
        Command::Scan(args) => run_scan(args),
    }
}

fn checked_word(text: &str) -> Result<OperationWord, CliError> {
    let word = parse_word(text).map_err(|e| CliError::Usage(e.to_string()))?;
    for op in word.ops() {
        match *op {
            PrimitiveOp::Power(i) if i > MAX_POWER_INDEX => {
                return Err(CliError::Usage(format!(
                    "reduced power index {i} exceeds the supported bound {MAX_POWER_INDEX}"
                )));
            }
            PrimitiveOp::Milnor(i) if i > MAX_MILNOR_INDEX => {
                return Err(CliError::Usage(format!(
                    "Milnor index {i} exceeds the supported bound {MAX_MILNOR_INDEX}"
                )));
            }
            _ => {}
        }
    }
    Ok(word)
}

fn run_apply(args: ApplyArgs) -> Result<(), CliError> {
    let ctx = RingContext::new(args.prime, args.rank).map_err(|e| CliError::Usage(e.to_string()))?;
    let word = checked_word(&args.word)?;
    let input = parse_element(&ctx, &args.expr).map_err(|e| CliError::Usage(e.to_string()))?;
    let output = word.apply(&input);
    let record = ComputationRecord::new(&word, &input, &output);
    match args.format {
        Format::Json => println!("{}", record.to_json_line()),
        Format::Human => {
            let bid = |b: Option<[i64; 2]>| {
                b.map_or("undefined".to_string(), |[m, w]| format!("({m}, {w})"))
            };
            println!("input:    {}   [bidegree {}]", record.input, bid(record.input_bidegree));
            println!(
                "word:     {}   [shift ({}, {})]",
                record.word, record.shift[0], record.shift[1]
            );
            println!("output:   {}", record.output);
            println!("bidegree: {}", bid(record.output_bidegree));
            println!("terms:    {}", record.output_terms.len());
        }
    }
    Ok(())
}

fn run_verify(args: VerifyArgs) -> Result<(), CliError> {
    if args.max_q_index > MAX_MILNOR_INDEX {
        return Err(CliError::Usage(format!(
            "max q index {} exceeds the supported bound {MAX_MILNOR_INDEX}",
            args.max_q_index
        )));
    }
    let mut suites: Vec<(&'static str, Vec<Check>)> = Vec::new();
    if matches!(args.suite, Suite::Formulas | Suite::All) {
        suites.push(("formulas", formula_checks(args.prime, args.max_q_index)?));
    }
    if matches!(args.suite, Suite::Properties | Suite::All) {
        let opts = PropertyOptions {
            max_degree: args.max_degree,
            seed: args.seed,
            samples: args.samples,
            max_q: args.max_q_index,
        };
        suites.push(("properties", property_checks(args.prime, &opts)?));
    }

    let total: usize = suites.iter().map(|(_, checks)| checks.len()).sum();
    let failed: usize = suites
        .iter()
        .flat_map(|(_, checks)| checks)
        .filter(|check| !check.passed)
        .count();

    match args.format {
        Format::Json => {
            #[derive(serde::Serialize)]
            struct SuiteReport<'a> {
                suite: &'a str,
                checks: &'a [Check],
            }
            #[derive(serde::Serialize)]
            struct VerifyReport<'a> {
                prime: u32,
                total: usize,
                failed: usize,
                passed: bool,
                suites: Vec<SuiteReport<'a>>,
            }
            let report = VerifyReport {
                prime: args.prime,
                total,
                failed,
                passed: failed == 0,
                suites: suites
                    .iter()
                    .map(|(suite, checks)| SuiteReport { suite, checks })
                    .collect(),
            };
            println!("{}", serde_json::to_string(&report).expect("report serialization cannot fail"));
        }
        Format::Human => {
            for (suite, checks) in &suites {
                println!("suite {suite} (l = {}):", args.prime);
                for check in checks {
                    println!(
                        "  {}  {:<44} {}",
                        if check.passed { "ok  " } else { "FAIL" },
                        check.name,
                        check.detail
                    );
                }
            }
            println!("{}/{total} checks passed", total - failed);
        }
    }

    if failed > 0 {
        Err(CliError::Check(format!("{failed} of {total} checks failed")))
    } else {
        Ok(())
    }
}

fn run_certify(args: CertifyArgs) -> Result<(), CliError> {
    let group = Group::from_name(&args.group).ok_or_else(|| {
        CliError::Usage(format!("unknown group '{}': expected G2, F4, or E8", args.group))
    })?;
    let cert = certify(group)?;
    let json = serde_json::to_string(&cert).expect("certificate serialization cannot fail");
    match args.format {
        Format::Json => println!("{json}"),
        Format::Human => println!("{}", render_certificate(&cert)),
    }
    if let Some(path) = &args.out {
        std::fs::write(path, format!("{json}\n"))
            .map_err(|e| CliError::Usage(format!("cannot write {}: {e}", path.display())))?;
    }
    if !cert.nonzero {
        return Err(CliError::Check(format!(
            "certificate for {} failed: Q1(u4) is zero",
            cert.group
        )));
    }
    Ok(())
}

fn run_scan(args: ScanArgs) -> Result<(), CliError> {
    let word = checked_word(&args.word)?;
    let source = parse_bidegree(&args.bidegree)?;
    let report = scan(args.prime, args.rank, source, &word)?;
    match args.format {
        Format::Json => {
            println!("{}", serde_json::to_string(&report).expect("report serialization cannot fail"));
        }
        Format::Human => println!("{}", render_scan(&report)),
    }
    Ok(())
}

fn parse_bidegree(text: &str) -> Result<Bidegree, CliError> {
    let parts: Vec<&str> = text.split(',').map(str::trim).collect();
    let [m, w] = parts.as_slice() else {
        return Err(CliError::Usage(format!(
            "bidegree must be given as 'm,w', got '{text}'"
        )));
    };
    let m = m
        .parse::<i64>()
        .map_err(|e| CliError::Usage(format!("bad first degree '{m}': {e}")))?;
    let w = w
        .parse::<i64>()
        .map_err(|e| CliError::Usage(format!("bad weight '{w}': {e}")))?;
    Ok(Bidegree::new(m, w))
}
