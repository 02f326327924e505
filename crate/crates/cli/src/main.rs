//! `qverify`: run the exact verification suites, inspect the registry, and
//! print cyclotomic polynomials.
//!
//! Exit codes: 0 when every case passes, 1 when any case fails or errors,
//! 2 on usage or configuration problems.

use std::io::Write;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};
use qverify_core::qpoly::cyclotomic;
use qverify_core::report::Status;
use qverify_core::suite::{registry_rows, run_suite, Suite, SuiteConfig};

#[derive(Parser)]
#[command(
    name = "qverify",
    about = "Exact verification of q-series identities and cyclotomic q-congruences",
    version
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Run verification suites or single registry cases.
    Verify(VerifyArgs),
    /// List registry ids with their statements and default ranges.
    List(ListArgs),
    /// Print the n-th cyclotomic polynomial.
    Cyclotomic { n: u32 },
}

#[derive(Args)]
struct VerifyArgs {
    /// Suite to run: identities, congruences, primes, oracles, all.
    #[arg(long, default_value = "all")]
    suite: String,
    /// Run a single registry id (e.g. CARLITZ, TH_MAIN_M, ST_MODP).
    #[arg(long)]
    id: Option<String>,
    /// Single n value.
    #[arg(long)]
    n: Option<i64>,
    /// Cap the default n range.
    #[arg(long)]
    n_max: Option<i64>,
    /// Explicit comma-separated list of n values.
    #[arg(long, value_delimiter = ',')]
    n_list: Option<Vec<i64>>,
    /// Fix the named parameter m.
    #[arg(long)]
    m: Option<i64>,
    /// Fix the named parameter d.
    #[arg(long, allow_hyphen_values = true)]
    d: Option<i64>,
    /// Fix the prime p (prime suite).
    #[arg(long)]
    p: Option<u64>,
    /// Fix the exponent r (prime suite).
    #[arg(long)]
    r: Option<u32>,
    /// Samples per identity case.
    #[arg(long)]
    trials: Option<u32>,
    /// Root seed for the deterministic sample generator.
    #[arg(long, default_value_t = 42)]
    seed: u64,
    /// Worker threads (default: one per core). The QVERIFY_THREADS
    /// environment variable overrides this flag.
    #[arg(long)]
    threads: Option<usize>,
    /// Write the JSON report document to this path.
    #[arg(long)]
    out: Option<String>,
    /// Stop scheduling new cases after the first failure.
    #[arg(long)]
    fail_fast: bool,
    /// Print the JSON report document to stdout instead of per-case lines.
    #[arg(long)]
    json: bool,
    /// Include wall-clock timings in the report (off by default so equal
    /// configurations produce byte-identical documents).
    #[arg(long)]
    timings: bool,
    /// Run the cases from a corpus file (JSON array of case records)
    /// instead of enumerating a suite.
    #[arg(long)]
    corpus: Option<String>,
}

#[derive(Args)]
struct ListArgs {
    /// Restrict to one suite.
    #[arg(long)]
    suite: Option<String>,
    /// Show a single id.
    #[arg(long)]
    id: Option<String>,
}

fn main() -> ExitCode {
    match Cli::parse().command {
        Command::Verify(args) => cmd_verify(args),
        Command::List(args) => cmd_list(args),
        Command::Cyclotomic { n } => cmd_cyclotomic(n),
    }
}

fn usage_error(msg: &str) -> ExitCode {
    eprintln!("error: {msg}");
    ExitCode::from(2)
}

fn cmd_verify(args: VerifyArgs) -> ExitCode {
    let suite: Suite = match args.suite.parse() {
        Ok(s) => s,
        Err(e) => return usage_error(&e.to_string()),
    };
    if let Some(id) = &args.id {
        if !registry_rows(None).iter().any(|row| row.name == id) {
            return usage_error(&format!("unknown registry id: {id}"));
        }
    }
    let config = SuiteConfig {
        suite,
        id_filter: args.id,
        n: args.n,
        n_max: args.n_max,
        n_list: args.n_list,
        m: args.m,
        d: args.d,
        p: args.p,
        r: args.r,
        trials: args.trials,
        seed: args.seed,
        fail_fast: args.fail_fast,
        threads: args.threads,
        timings: args.timings,
        corpus: args.corpus,
    };
    let doc = match run_suite(&config) {
        Ok(doc) => doc,
        Err(e) => return usage_error(&e.to_string()),
    };
    let json = doc.to_json();
    if args.json {
        print!("{json}");
    } else {
        for case in &doc.cases {
            let status = match case.status {
                Status::Pass => "pass ",
                Status::Fail => "FAIL ",
                Status::Error => "ERROR",
            };
            let params: Vec<String> = case
                .params
                .iter()
                .map(|(k, v)| format!("{k}={v}"))
                .collect();
            let detail = case
                .detail
                .as_deref()
                .map(|d| format!("  [{d}]"))
                .unwrap_or_default();
            println!("{status} {} {}{}", case.id, params.join(" "), detail);
        }
        println!(
            "summary: {} pass, {} fail, {} error",
            doc.summary.pass, doc.summary.fail, doc.summary.error
        );
    }
    if let Some(path) = &args.out {
        if let Err(e) = std::fs::File::create(path).and_then(|mut f| f.write_all(json.as_bytes()))
        {
            return usage_error(&format!("cannot write report to {path}: {e}"));
        }
    }
    if doc.all_passed() {
        ExitCode::SUCCESS
    } else {
        ExitCode::from(1)
    }
}

fn cmd_list(args: ListArgs) -> ExitCode {
    let suite = match args.suite.as_deref() {
        None => None,
        Some(s) => match s.parse::<Suite>() {
            Ok(s) => Some(s),
            Err(e) => return usage_error(&e.to_string()),
        },
    };
    let mut rows = registry_rows(suite);
    if let Some(id) = &args.id {
        rows.retain(|row| row.name == id);
        if rows.is_empty() {
            return usage_error(&format!("unknown registry id: {id}"));
        }
    }
    for row in rows {
        println!("{}", row.name);
        println!("  suite:     {:?}", row.suite);
        println!("  params:    {}", row.params);
        println!("  defaults:  {}", row.default_range);
        println!("  statement: {}", row.statement);
    }
    ExitCode::SUCCESS
}

fn cmd_cyclotomic(n: u32) -> ExitCode {
    match cyclotomic(n) {
        Ok(p) => {
            println!("{p}");
            ExitCode::SUCCESS
        }
        Err(e) => usage_error(&e.to_string()),
    }
}
