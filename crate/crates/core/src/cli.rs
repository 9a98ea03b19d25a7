//! The `tctr` command line. Each subcommand is also callable as a function
//! returning the text it would print.

use std::ffi::OsString;
use std::fs::{self, File};
use std::io::{self, BufReader, Write};
use std::path::{Path, PathBuf};

use clap::{Parser, Subcommand, ValueEnum};

use crate::bench::{self, BenchConfig, WorkloadParams};
use crate::container;
use crate::corpus::{generate_synthetic, synthetic_network, LengthParams, NetworkDescription, NetworkParams, TimeGrid};
use crate::error::{Error, Result};
use crate::index::TripIndex;
use crate::oracle;
use crate::query::Query;
use crate::stats::SpaceReport;
use crate::TripCorpus;

pub const ALLOWED_RATES: [usize; 3] = [16, 64, 256];

#[derive(Debug, Parser)]
#[command(name = "tctr", version, about = "Compressed trip index over a transport network")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum Engine {
    Index,
    Oracle,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Write a synthetic network description.
    Network {
        #[arg(long, default_value_t = 313)]
        stops: u32,
        /// Lines per direction.
        #[arg(long, default_value_t = 23)]
        lines: u32,
        #[arg(long, default_value_t = 1)]
        seed: u64,
        #[arg(short, long)]
        output: PathBuf,
    },
    /// Draw synthetic trips over a network.
    Generate {
        network: PathBuf,
        #[arg(short = 'n', long)]
        count: usize,
        #[arg(long, default_value_t = 1)]
        seed: u64,
        #[arg(short, long)]
        output: PathBuf,
    },
    /// Build an index from a corpus file.
    Build {
        corpus: PathBuf,
        #[arg(long, default_value_t = 64)]
        rate: usize,
        /// Accept any positive sample rate.
        #[arg(long)]
        unsafe_rate: bool,
        #[arg(short, long)]
        output: PathBuf,
    },
    /// Evaluate one query expression.
    Query {
        index: PathBuf,
        #[arg(required = true, num_args = 1..)]
        expr: Vec<String>,
        #[arg(long, value_enum, default_value_t = Engine::Index)]
        engine: Engine,
        /// Corpus for the oracle engine; defaults to the trips stored in the index.
        #[arg(long)]
        corpus: Option<PathBuf>,
        /// Also print the suffix-array ranges used.
        #[arg(long)]
        verbose: bool,
        /// Read times as DAYTYPE/HH:MM.
        #[arg(long)]
        clock: bool,
    },
    /// Time random queries of every type.
    Bench {
        index: PathBuf,
        #[arg(long, default_value_t = 10_000)]
        queries: usize,
        #[arg(long, default_value_t = 1)]
        repetitions: usize,
        #[arg(long, default_value_t = 1)]
        threads: usize,
        #[arg(long, default_value_t = 100)]
        max_k: usize,
        #[arg(long, default_value_t = 1)]
        seed: u64,
        #[arg(long)]
        csv: Option<PathBuf>,
    },
    /// Print space usage and structural statistics.
    Stats { index: PathBuf },
}

/// 2 for usage, parse and configuration problems and unreadable inputs,
/// 1 for everything else.
pub fn exit_code(err: &Error) -> i32 {
    match err {
        Error::Usage(_) | Error::Parse { .. } | Error::Config(_) => 2,
        Error::Io(e) if e.kind() == io::ErrorKind::NotFound => 2,
        _ => 1,
    }
}

fn open(path: &Path) -> Result<BufReader<File>> {
    File::open(path)
        .map(BufReader::new)
        .map_err(|e| Error::Io(io::Error::new(e.kind(), format!("{}: {e}", path.display()))))
}

fn read_corpus(path: &Path) -> Result<TripCorpus> {
    TripCorpus::parse(open(path)?)
}

fn load_index(path: &Path) -> Result<TripIndex> {
    container::from_bytes(
        &fs::read(path).map_err(|e| Error::Io(io::Error::new(e.kind(), format!("{}: {e}", path.display()))))?,
    )
}

pub fn cmd_network(params: &NetworkParams, seed: u64, output: &Path) -> Result<String> {
    let net = synthetic_network(params, seed)?;
    fs::write(output, net.to_text())?;
    Ok(format!("wrote {} stops, {} lines to {}", net.stops.len(), net.lines.len(), output.display()))
}

pub fn cmd_generate(network: &Path, count: usize, seed: u64, output: &Path) -> Result<String> {
    let net = NetworkDescription::parse(open(network)?)?;
    let corpus = generate_synthetic(&net, count, seed, LengthParams::default(), TimeGrid::default())?;
    fs::write(output, corpus.to_text())?;
    Ok(format!("trips {}\nmean length {:.2}", corpus.len(), corpus.mean_trip_length()))
}

pub fn check_rate(rate: usize, unsafe_rate: bool) -> Result<()> {
    if rate == 0 || (!unsafe_rate && !ALLOWED_RATES.contains(&rate)) {
        return Err(Error::usage(format!(
            "sample rate {rate} not allowed; use one of {ALLOWED_RATES:?} (or a positive value with --unsafe-rate)"
        )));
    }
    Ok(())
}

pub fn cmd_build(corpus: &Path, rate: usize, unsafe_rate: bool, output: &Path) -> Result<String> {
    check_rate(rate, unsafe_rate)?;
    let corpus = read_corpus(corpus)?;
    let index = TripIndex::build(&corpus, rate)?;
    container::save(&index, output)?;
    Ok(SpaceReport::of(&index).to_string())
}

pub fn cmd_query(
    index: &Path,
    expr: &str,
    engine: Engine,
    corpus: Option<&Path>,
    verbose: bool,
    clock: bool,
) -> Result<String> {
    let idx = load_index(index)?;
    let grid = idx.grid();
    let q = Query::parse(expr, clock.then_some(&grid))?;
    let answer = match engine {
        Engine::Index => idx.answer(&q)?,
        Engine::Oracle => {
            let trips = match corpus {
                Some(p) => read_corpus(p)?,
                None => idx.reconstruct()?,
            };
            oracle::evaluate(&trips, &q)?
        }
    };
    let mut out = answer.to_string();
    if verbose {
        for (label, r) in idx.explain(&q)? {
            out.push_str(&format!("\n# {label}: [{}, {}] ({} entries)", r.start, r.end, r.len()));
        }
    }
    Ok(out)
}

pub fn cmd_bench(index: &Path, params: &WorkloadParams, cfg: &BenchConfig, csv: Option<&Path>) -> Result<String> {
    if cfg.repetitions == 0 {
        return Err(Error::usage("repetitions must be at least 1"));
    }
    let idx = load_index(index)?;
    let workload = bench::random_workload(&idx, params)?;
    let rows = bench::run(&idx, &workload, cfg)?;
    if let Some(p) = csv {
        fs::write(p, bench::csv(&rows))?;
    }
    let mut out = bench::table(&rows);
    if cfg.threads > 1 {
        out.push_str("\nper-thread mean_us\n");
        for r in &rows {
            let parts: Vec<String> = r.thread_means_us.iter().map(|m| format!("{m:.3}")).collect();
            out.push_str(&format!("{}  {}\n", r.query, parts.join(" ")));
        }
    }
    out.push_str("\ntime restriction overhead (mean_us)\n");
    for (name, d) in bench::temporal_overhead(&rows) {
        out.push_str(&format!("{name}  {d:+.3}\n"));
    }
    let report = SpaceReport::of(&idx);
    out.push_str(&format!("\nstops index / plain baseline  {:.2}%", report.ratio_percent()));
    Ok(out)
}

pub fn cmd_stats(index: &Path) -> Result<String> {
    Ok(SpaceReport::of(&load_index(index)?).to_string())
}

pub fn execute(cli: Cli) -> Result<String> {
    match cli.command {
        Command::Network { stops, lines, seed, output } => {
            let params = NetworkParams { stops, lines, ..NetworkParams::default() };
            cmd_network(&params, seed, &output)
        }
        Command::Generate { network, count, seed, output } => cmd_generate(&network, count, seed, &output),
        Command::Build { corpus, rate, unsafe_rate, output } => cmd_build(&corpus, rate, unsafe_rate, &output),
        Command::Query { index, expr, engine, corpus, verbose, clock } => {
            cmd_query(&index, &expr.join(" "), engine, corpus.as_deref(), verbose, clock)
        }
        Command::Bench { index, queries, repetitions, threads, max_k, seed, csv } => {
            let params = WorkloadParams { queries_per_type: queries, max_k, seed, ..WorkloadParams::default() };
            cmd_bench(&index, &params, &BenchConfig { repetitions, threads }, csv.as_deref())
        }
        Command::Stats { index } => cmd_stats(&index),
    }
}

/// Parses `args`, runs the command, prints its output, and returns the exit code.
pub fn run<I, T>(args: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            return e.exit_code();
        }
    };
    match execute(cli) {
        Ok(out) => {
            let mut stdout = io::stdout().lock();
            let _ = writeln!(stdout, "{out}");
            0
        }
        Err(e) => {
            eprintln!("tctr: {e}");
            exit_code(&e)
        }
    }
}
