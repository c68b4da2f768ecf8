use std::fs::File;
use std::io::{self, BufWriter, Write};
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand, ValueEnum};
use serde::Serialize;

use decor::bench::{bench_suite, summarize, write_csv, BenchConfig, KSpec};
use decor::{
    decor_with_deadline, is_commutative, naive_max_commutative, run_cpr, CandidateSet, Deadline, DecorStats, Error,
    Evidence, Factor, FactorGraph,
};

#[derive(Parser)]
#[command(
    name = "decor",
    version,
    about = "Commutative argument detection and colour passing for factor graphs"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Find commutative argument subsets of one factor.
    Detect {
        #[arg(long)]
        input: PathBuf,
        #[arg(long)]
        factor: String,
        #[arg(long, value_enum, default_value_t = Algo::Decor)]
        algorithm: Algo,
        #[arg(long)]
        timeout_ms: Option<u64>,
        /// Re-check every reported subset against the table.
        #[arg(long)]
        verify: bool,
    },
    /// Time both detectors on generated factors and write CSV.
    Bench {
        #[arg(long, value_delimiter = ',', default_value = "2,4,6,8,10,12,14,16")]
        n: Vec<usize>,
        #[arg(long, value_delimiter = ',', default_value = "0,2,half,n-1,n")]
        k: Vec<KSpec>,
        #[arg(long, default_value_t = 1)]
        reps: usize,
        #[arg(long, default_value_t = 300_000)]
        timeout_ms: u64,
        #[arg(long, default_value_t = 42)]
        seed: u64,
        #[arg(long, default_value_t = 1)]
        parallel: usize,
        #[arg(long, default_value_t = 2)]
        range: usize,
        /// CSV destination; stdout when absent.
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Group indistinguishable variables and factors.
    Lift {
        #[arg(long)]
        input: PathBuf,
        /// JSON destination; stdout when absent.
        #[arg(long)]
        out: Option<PathBuf>,
    },
}

#[derive(Clone, Copy, ValueEnum)]
enum Algo {
    Decor,
    Naive,
}

#[derive(Serialize)]
struct Detection<'a> {
    factor: &'a str,
    algorithm: &'static str,
    subsets: Vec<Vec<&'a str>>,
    #[serde(skip_serializing_if = "Option::is_none")]
    verified: Option<bool>,
    #[serde(skip_serializing_if = "Option::is_none")]
    stats: Option<DecorStats>,
    #[serde(skip_serializing_if = "Option::is_none")]
    subsets_tested: Option<u64>,
}

enum Failure {
    Input(Error),
    Timeout,
    Unverified,
    Output(io::Error),
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        match e {
            Error::Io(e) if e.kind() == io::ErrorKind::BrokenPipe => Failure::Output(e),
            other => Failure::Input(other),
        }
    }
}

impl From<io::Error> for Failure {
    fn from(e: io::Error) -> Self {
        Failure::Output(e)
    }
}

fn names(factor: &Factor, set: CandidateSet) -> Vec<&str> {
    set.positions().into_iter().map(|p| factor.args()[p].name()).collect()
}

fn detect(
    input: PathBuf,
    factor: String,
    algorithm: Algo,
    timeout_ms: Option<u64>,
    verify: bool,
) -> Result<(), Failure> {
    let graph = FactorGraph::from_path(input)?;
    let f = graph
        .factor(&factor)
        .ok_or_else(|| Error::UnknownFactor(factor.clone()))?;
    let deadline = Deadline::from_millis(timeout_ms);
    let (sets, mut report) = match algorithm {
        Algo::Decor => {
            let out = decor_with_deadline(f, deadline).map_err(|_| Failure::Timeout)?;
            let sets = out.candidates.sorted();
            let report = Detection {
                factor: f.name(),
                algorithm: "decor",
                subsets: Vec::new(),
                verified: None,
                stats: Some(out.stats),
                subsets_tested: None,
            };
            (sets, report)
        }
        Algo::Naive => {
            let out = naive_max_commutative(f, deadline).map_err(|_| Failure::Timeout)?;
            let report = Detection {
                factor: f.name(),
                algorithm: "naive",
                subsets: Vec::new(),
                verified: None,
                stats: None,
                subsets_tested: Some(out.subsets_tested),
            };
            (out.best.into_iter().collect(), report)
        }
    };
    if verify {
        let positions: Vec<Vec<usize>> = sets.iter().map(|s| s.positions()).collect();
        let ok = positions
            .iter()
            .map(|p| is_commutative(f, p))
            .collect::<decor::Result<Vec<_>>>()?;
        report.verified = Some(ok.iter().all(|&b| b));
    }
    report.subsets = sets.iter().map(|&s| names(f, s)).collect();
    let mut stdout = io::stdout().lock();
    serde_json::to_writer_pretty(&mut stdout, &report).map_err(Error::from)?;
    writeln!(stdout)?;
    if report.verified == Some(false) {
        return Err(Failure::Unverified);
    }
    Ok(())
}

fn output(path: Option<PathBuf>) -> io::Result<Box<dyn Write>> {
    Ok(match path {
        Some(p) => Box::new(BufWriter::new(File::create(p)?)),
        None => Box::new(io::stdout().lock()),
    })
}

fn run(cli: Cli) -> Result<(), Failure> {
    match cli.command {
        Command::Detect {
            input,
            factor,
            algorithm,
            timeout_ms,
            verify,
        } => detect(input, factor, algorithm, timeout_ms, verify),
        Command::Bench {
            n,
            k,
            reps,
            timeout_ms,
            seed,
            parallel,
            range,
            out,
        } => {
            let config = BenchConfig {
                n_list: n,
                k_spec: k,
                range_size: range,
                reps,
                timeout_ms,
                seed,
                parallel: parallel.max(1),
            };
            let rows = bench_suite(&config)?;
            let mut sink = output(out)?;
            write_csv(&rows, &mut sink)?;
            sink.flush()?;
            let mut err = io::stderr().lock();
            for s in summarize(&rows) {
                let us = |v: Option<f64>| v.map_or_else(|| "-".to_string(), |v| format!("{v:.0}"));
                writeln!(
                    err,
                    "{:<5} n={:<2} k={:<2} runs={} timeouts={} mean_us={} median_us={}",
                    s.algorithm,
                    s.n,
                    s.k,
                    s.runs,
                    s.timeouts,
                    us(s.mean_us),
                    us(s.median_us)
                )?;
            }
            Ok(())
        }
        Command::Lift { input, out } => {
            let graph = FactorGraph::from_path(input)?;
            let groups = run_cpr(&graph, &Evidence::from_graph(&graph))?;
            let mut sink = output(out)?;
            writeln!(sink, "{}", groups.to_json_string()?)?;
            sink.flush()?;
            Ok(())
        }
    }
}

fn main() -> ExitCode {
    match run(Cli::parse()) {
        Ok(()) => ExitCode::SUCCESS,
        Err(Failure::Input(e)) => {
            eprintln!("error: {e}");
            ExitCode::from(2)
        }
        Err(Failure::Timeout) => {
            eprintln!("error: deadline exceeded");
            ExitCode::from(3)
        }
        Err(Failure::Unverified) => {
            eprintln!("error: a reported subset failed verification");
            ExitCode::from(1)
        }
        Err(Failure::Output(e)) => {
            eprintln!("error: {e}");
            ExitCode::from(1)
        }
    }
}
