// Copyright 2026 The parity-loqc Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//    http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

//! `parity-loqc`: regenerate the resource tables and run the self-checks.

mod render;

use std::fs::File;
use std::io::{self, Write};
use std::ops::RangeInclusive;
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};
use parity_loqc::fusion::GateType;
use parity_loqc::strategy::{strategy_search, CandidateSpace, RecyclePolicy};
use parity_loqc::tables::{self, TABLE1_ROWS, TABLE1_TRIALS, TABLE2_ROWS, TABLE2_TRIALS};
use parity_loqc::verify::{run_suite, Suite};

use render::{Format, Metadata};

const EXIT_VERIFY: u8 = 1;
const EXIT_USAGE: u8 = 2;
const EXIT_IO: u8 = 3;

#[derive(Parser, Debug)]
#[command(name = "parity-loqc", version, about = "Parity-encoded linear-optics resource tables and checks")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Resource and success table for building states and Z90.
    Table1(TableArgs),
    /// Success and cost table for the CNOT.
    Table2(TableArgs),
    /// Run self-check suites (all of them when none are named).
    Verify(VerifyArgs),
    /// Cheapest fusion tree for one resource size.
    StrategySearch(SearchArgs),
}

#[derive(Args, Debug)]
struct Common {
    #[arg(long, default_value_t = 42)]
    seed: u64,
    #[arg(long, value_enum, default_value_t = Format::Csv)]
    format: Format,
    /// Write here instead of standard output.
    #[arg(long)]
    out: Option<PathBuf>,
    /// Worker threads; results do not depend on it.
    #[arg(long, value_parser = clap::value_parser!(u32).range(1..))]
    threads: Option<u32>,
}

#[derive(Args, Debug)]
struct TableArgs {
    #[command(flatten)]
    common: Common,
    /// Defaults to 500000 for table1 and 100000 for table2.
    #[arg(long, value_parser = clap::value_parser!(u64).range(1..))]
    trials: Option<u64>,
    /// Inclusive row range `A..B`.
    #[arg(long, value_parser = parse_rows)]
    rows: Option<RangeInclusive<usize>>,
    #[arg(long, default_value_t = true, action = clap::ArgAction::Set)]
    recycle: bool,
}

#[derive(Args, Debug)]
struct VerifyArgs {
    suites: Vec<Suite>,
    #[arg(long, default_value_t = 4, value_parser = clap::value_parser!(u64).range(1..=5))]
    max_level: u64,
    #[arg(long, default_value_t = 42)]
    seed: u64,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
enum Gates {
    /// f_I joins only.
    TypeI,
    Both,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
enum Policy {
    None,
    Pool,
    Credit,
}

#[derive(Args, Debug)]
struct SearchArgs {
    #[command(flatten)]
    common: Common,
    /// Resource size.
    #[arg(long, short = 'm')]
    size: usize,
    #[arg(long, value_enum, default_value_t = Gates::TypeI)]
    gates: Gates,
    /// Overrides `--policy` with `credit` or `none`.
    #[arg(long, action = clap::ArgAction::Set)]
    recycle: Option<bool>,
    #[arg(long, value_enum, default_value_t = Policy::None)]
    policy: Policy,
    /// Monte-Carlo trials per candidate when pooling.
    #[arg(long, default_value_t = 20_000, value_parser = clap::value_parser!(u64).range(1..))]
    trials: u64,
}

fn parse_rows(s: &str) -> Result<RangeInclusive<usize>, String> {
    let bad = || format!("expected A..B, got {s:?}");
    let (a, b) = match s.split_once("..") {
        Some((a, b)) => (a, b.strip_prefix('=').unwrap_or(b)),
        None => (s, s),
    };
    let a: usize = a.trim().parse().map_err(|_| bad())?;
    let b: usize = b.trim().parse().map_err(|_| bad())?;
    if a > b {
        return Err(format!("empty range {s:?}"));
    }
    Ok(a..=b)
}

enum Failure {
    Usage(String),
    Io(String),
    Verify,
}

impl From<io::Error> for Failure {
    fn from(e: io::Error) -> Self {
        Failure::Io(e.to_string())
    }
}

fn emit(out: &Option<PathBuf>, body: &str) -> Result<(), Failure> {
    match out {
        Some(path) => {
            let mut f = File::create(path).map_err(|e| Failure::Io(format!("{}: {e}", path.display())))?;
            f.write_all(body.as_bytes()).map_err(|e| Failure::Io(format!("{}: {e}", path.display())))?;
        }
        None => io::stdout().write_all(body.as_bytes())?,
    }
    Ok(())
}

/// Summary lines go to stderr when the data itself goes to stdout.
fn note(common: &Common, line: &str) {
    if common.out.is_some() {
        println!("{line}");
    } else {
        eprintln!("{line}");
    }
}

fn with_threads<T: Send>(threads: Option<u32>, f: impl FnOnce() -> T + Send) -> Result<T, Failure> {
    let mut builder = rayon::ThreadPoolBuilder::new();
    if let Some(n) = threads {
        builder = builder.num_threads(n as usize);
    }
    let pool = builder.build().map_err(|e| Failure::Usage(e.to_string()))?;
    Ok(pool.install(f))
}

fn table1(args: TableArgs) -> Result<(), Failure> {
    let rows = args.rows.unwrap_or(TABLE1_ROWS);
    let trials = args.trials.unwrap_or(TABLE1_TRIALS);
    let c = &args.common;
    let data = with_threads(c.threads, || tables::table1(rows.clone(), trials, c.seed, args.recycle))?
        .map_err(|e| Failure::Usage(e.to_string()))?;
    let meta = Metadata::new("table1", c.seed, trials, args.recycle);
    emit(&c.out, &render::table1(&data, &meta, c.format))?;
    for line in render::table1_summary(&data) {
        note(c, &line);
    }
    for w in tables::table1_precision_warnings(&data) {
        note(c, &format!("insufficient precision: {w}"));
    }
    Ok(())
}

fn table2(args: TableArgs) -> Result<(), Failure> {
    let rows = args.rows.unwrap_or(TABLE2_ROWS);
    let trials = args.trials.unwrap_or(TABLE2_TRIALS);
    let c = &args.common;
    let data = with_threads(c.threads, || tables::table2(rows.clone(), trials, c.seed, args.recycle))?
        .map_err(|e| Failure::Usage(e.to_string()))?;
    let meta = Metadata::new("table2", c.seed, trials, args.recycle);
    emit(&c.out, &render::table2(&data, &meta, c.format))?;
    for line in render::table2_summary(&data) {
        note(c, &line);
    }
    for w in tables::table2_precision_warnings(&data) {
        note(c, &format!("insufficient precision: {w}"));
    }
    Ok(())
}

fn verify(args: VerifyArgs) -> Result<(), Failure> {
    let suites = if args.suites.is_empty() { Suite::ALL.to_vec() } else { args.suites };
    let mut ok = true;
    for suite in suites {
        let report = run_suite(suite, args.max_level as usize, args.seed);
        for c in &report.checks {
            println!("{} {suite} {}: {}", if c.passed { "PASS" } else { "FAIL" }, c.name, c.detail);
        }
        ok &= report.passed();
    }
    if ok {
        Ok(())
    } else {
        Err(Failure::Verify)
    }
}

fn search(args: SearchArgs) -> Result<(), Failure> {
    let recycle = match (args.recycle, args.policy) {
        (Some(true), _) => RecyclePolicy::Credit,
        (Some(false), _) => RecyclePolicy::None,
        (None, Policy::None) => RecyclePolicy::None,
        (None, Policy::Pool) => RecyclePolicy::Pool,
        (None, Policy::Credit) => RecyclePolicy::Credit,
    };
    let mut space = match args.gates {
        Gates::TypeI => CandidateSpace { gates: vec![GateType::TypeI], recycle, ..CandidateSpace::fusion_type_i() },
        Gates::Both => CandidateSpace::both_gates(recycle),
    };
    space.seed = args.common.seed;
    let c = &args.common;
    let result = with_threads(c.threads, || strategy_search(args.size, &space, args.trials))?
        .map_err(|e| Failure::Usage(e.to_string()))?;
    let meta = Metadata::new("strategy-search", c.seed, if result.exact { 0 } else { args.trials }, recycle.recycles());
    emit(&c.out, &render::search(&result, &meta, c.format))?;
    Ok(())
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            return if e.use_stderr() { ExitCode::from(EXIT_USAGE) } else { ExitCode::SUCCESS };
        }
    };
    let result = match cli.command {
        Command::Table1(a) => table1(a),
        Command::Table2(a) => table2(a),
        Command::Verify(a) => verify(a),
        Command::StrategySearch(a) => search(a),
    };
    match result {
        Ok(()) => ExitCode::SUCCESS,
        Err(Failure::Verify) => ExitCode::from(EXIT_VERIFY),
        Err(Failure::Usage(msg)) => {
            eprintln!("error: {msg}");
            ExitCode::from(EXIT_USAGE)
        }
        Err(Failure::Io(msg)) => {
            eprintln!("error: {msg}");
            ExitCode::from(EXIT_IO)
        }
    }
}
