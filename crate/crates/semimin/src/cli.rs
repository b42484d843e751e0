//! The `semimin` command line.

use std::ffi::OsString;
use std::fs::File;
use std::io::{self, BufWriter, Write};
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};
use semimin_core::scan::minimizer_set;
use semimin_core::trie::{build_trie, trie_path_minimizers};
use semimin_core::{BlockLayout, EngineKind, Error, KmerOrder, OrderMode};

use crate::bench::{self, BenchParams, Scenario};
use crate::input;
use crate::verify::{self, VerifyConfig};

pub const EXIT_USAGE: u8 = 1;
pub const EXIT_MISMATCH: u8 = 2;
pub const EXIT_IO: u8 = 3;

#[derive(Parser, Debug)]
#[command(name = "semimin", version, about = "Minimizers of semi-dynamic strings")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Args, Debug, Clone)]
pub struct OrderArgs {
    /// k-mer order: `krf` (seeded Karp-Rabin fingerprints) or `lex`
    #[arg(long, default_value = "krf")]
    pub order: OrderMode,
    /// seed for the fingerprint base and synthetic data
    #[arg(long, default_value_t = 0)]
    pub seed: u64,
    /// block layout of the two-layer engine: `fixed:<c>` or `progressing`
    #[arg(long = "block-scheme", default_value = "progressing")]
    pub block_scheme: BlockLayout,
}

#[derive(Subcommand, Debug)]
pub enum Command {
    /// Print the minimizer set of a plain-text or FASTA file
    Minimize {
        input: PathBuf,
        #[arg(long)]
        w: usize,
        #[arg(long)]
        k: usize,
        #[arg(long, default_value = "two-stack")]
        engine: EngineKind,
        #[command(flatten)]
        order: OrderArgs,
        #[arg(long)]
        out: Option<PathBuf>,
        #[arg(long)]
        verbose: bool,
    },
    /// Report trie nodes where minimizers of root-ward paths of length l start
    Trie {
        /// one string per line
        input: PathBuf,
        #[arg(long)]
        l: usize,
        #[arg(long)]
        k: usize,
        #[arg(long, default_value = "two-stack")]
        engine: EngineKind,
        #[command(flatten)]
        order: OrderArgs,
        #[arg(long)]
        out: Option<PathBuf>,
        /// also print `node,offset` for every window
        #[arg(long)]
        verbose: bool,
    },
    /// Cross-check the engines against brute force on seeded random inputs
    Verify {
        #[arg(long, default_value_t = 0)]
        seed: u64,
        /// cases per suite
        #[arg(long, default_value_t = 200)]
        cases: usize,
        /// longest border-op sequence
        #[arg(long = "max-ops", default_value_t = 2000)]
        max_ops: usize,
        #[arg(long, value_delimiter = ',', default_value = "heap,deque,two-stack,two-layer")]
        engines: Vec<EngineKind>,
        /// any of engines, scan, trie
        #[arg(long, value_delimiter = ',', default_value = "engines,scan,trie")]
        suites: Vec<String>,
        #[arg(long)]
        verbose: bool,
    },
    /// Time engines on synthetic strings and write CSV
    Bench {
        #[arg(long, value_delimiter = ',', default_value = "deque,heap,two-stack,two-layer")]
        engines: Vec<EngineKind>,
        #[arg(long, value_delimiter = ',', default_value = "one-way-slide")]
        scenario: Vec<Scenario>,
        /// synthetic string length
        #[arg(long, default_value_t = 1_000_000)]
        n: usize,
        /// one or more window sizes
        #[arg(long, value_delimiter = ',', default_value = "64")]
        w: Vec<usize>,
        /// k-mer length; defaults to 2·log2(w)
        #[arg(long)]
        k: Option<usize>,
        #[command(flatten)]
        order: OrderArgs,
        #[arg(long, default_value_t = 3)]
        reps: usize,
        #[arg(long)]
        out: Option<PathBuf>,
        #[arg(long)]
        verbose: bool,
    },
}

#[derive(Debug)]
enum Failure {
    Usage(String),
    Io(String),
    Mismatch,
}

impl Failure {
    fn io(path: &Path, e: io::Error) -> Self {
        Failure::Io(format!("{}: {e}", path.display()))
    }
}

impl From<io::Error> for Failure {
    fn from(e: io::Error) -> Self {
        Failure::Io(e.to_string())
    }
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        Failure::Usage(e.to_string())
    }
}

/// Parses `args` and runs the selected subcommand.
pub fn run<I, T>(args: I) -> ExitCode
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
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
    match dispatch(cli.command) {
        Ok(()) => ExitCode::SUCCESS,
        Err(Failure::Usage(msg)) => {
            eprintln!("error: {msg}");
            ExitCode::from(EXIT_USAGE)
        }
        Err(Failure::Io(msg)) => {
            eprintln!("error: {msg}");
            ExitCode::from(EXIT_IO)
        }
        Err(Failure::Mismatch) => ExitCode::from(EXIT_MISMATCH),
    }
}

fn output(out: &Option<PathBuf>) -> Result<Box<dyn Write>, Failure> {
    Ok(match out {
        Some(path) => Box::new(BufWriter::new(
            File::create(path).map_err(|e| Failure::io(path, e))?,
        )),
        None => Box::new(BufWriter::new(io::stdout().lock())),
    })
}

fn make_order(k: usize, args: &OrderArgs) -> Result<KmerOrder, Failure> {
    if k == 0 {
        return Err(Failure::Usage("k must be at least 1".into()));
    }
    Ok(KmerOrder::seeded(k, args.seed, args.order)?)
}

fn dispatch(command: Command) -> Result<(), Failure> {
    match command {
        Command::Minimize {
            input,
            w,
            k,
            engine,
            order,
            out,
            verbose,
        } => minimize(&input, w, k, engine, &order, &out, verbose),
        Command::Trie {
            input,
            l,
            k,
            engine,
            order,
            out,
            verbose,
        } => trie(&input, l, k, engine, &order, &out, verbose),
        Command::Verify {
            seed,
            cases,
            max_ops,
            engines,
            suites,
            verbose,
        } => run_verify(
            VerifyConfig {
                seed,
                cases,
                max_ops,
                engines,
            },
            &suites,
            verbose,
        ),
        Command::Bench {
            engines,
            scenario,
            n,
            w,
            k,
            order,
            reps,
            out,
            verbose,
        } => run_bench(&engines, &scenario, n, &w, k, &order, reps, &out, verbose),
    }
}

fn minimize(
    path: &Path,
    w: usize,
    k: usize,
    engine: EngineKind,
    args: &OrderArgs,
    out: &Option<PathBuf>,
    verbose: bool,
) -> Result<(), Failure> {
    if w < 2 {
        return Err(Failure::Usage("w must be at least 2".into()));
    }
    let order = make_order(k, args)?;
    let records = input::read_sequences(path).map_err(|e| Failure::io(path, e))?;
    let many = records.len() > 1;
    let mut out = output(out)?;
    if many {
        writeln!(out, "record,pos")?;
    }
    for (i, record) in records.iter().enumerate() {
        let label = if record.name.is_empty() {
            format!("#{}", i + 1)
        } else {
            record.name.clone()
        };
        let set = match minimizer_set(&record.seq, w, &order, engine, args.block_scheme) {
            Ok(set) => set,
            Err(Error::TooShort { needed, got }) => {
                eprintln!("warning: skipping record {label}: length {got} is below one window ({needed})");
                continue;
            }
            Err(e) => return Err(e.into()),
        };
        if verbose {
            eprintln!("{label}: {} letters, {} minimizers", record.seq.len(), set.positions.len());
        }
        for p in set.positions {
            if many {
                writeln!(out, "{},{p}", record.name)?;
            } else {
                writeln!(out, "{p}")?;
            }
        }
    }
    out.flush()?;
    Ok(())
}

fn trie(
    path: &Path,
    l: usize,
    k: usize,
    engine: EngineKind,
    args: &OrderArgs,
    out: &Option<PathBuf>,
    verbose: bool,
) -> Result<(), Failure> {
    let order = make_order(k, args)?;
    if l < k {
        return Err(Failure::Usage("l must be at least k".into()));
    }
    let strings = input::read_string_set(path).map_err(|e| Failure::io(path, e))?;
    let trie = build_trie(&strings);
    let report = trie_path_minimizers(&trie, l, &order, engine, args.block_scheme)?;
    let mut out = output(out)?;
    for id in &report.reported {
        writeln!(out, "{id}")?;
    }
    if verbose {
        writeln!(out, "node,offset")?;
        for (node, offset) in &report.windows {
            writeln!(out, "{node},{offset}")?;
        }
        eprintln!(
            "{} nodes, {} windows, {} border modifications",
            trie.len(),
            report.windows.len(),
            report.ops
        );
    }
    out.flush()?;
    Ok(())
}

fn run_verify(cfg: VerifyConfig, suites: &[String], verbose: bool) -> Result<(), Failure> {
    let reports = verify::run_suites(&cfg, suites).map_err(Failure::Usage)?;
    let mut clean = true;
    for report in &reports {
        println!("{report}");
        if verbose {
            for (label, s) in &report.stats {
                println!(
                    "  {label:<22} ops {:>9}  rebuilds {:>6}  recomputes {:>6}  flushes {:>6}  peak pairs {:>5}",
                    s.ops, s.rebuilds, s.recomputes, s.flushes, s.max_live_pairs
                );
            }
        }
        for f in &report.failures {
            println!("MISMATCH {}", f.detail);
            println!("reproduce with: {}", f.reproducer);
        }
        clean &= report.ok() && report.witness_violations() == 0;
    }
    if clean {
        println!("all suites passed");
        Ok(())
    } else {
        Err(Failure::Mismatch)
    }
}

#[allow(clippy::too_many_arguments)]
fn run_bench(
    engines: &[EngineKind],
    scenarios: &[Scenario],
    n: usize,
    ws: &[usize],
    k: Option<usize>,
    args: &OrderArgs,
    reps: usize,
    out: &Option<PathBuf>,
    verbose: bool,
) -> Result<(), Failure> {
    let text = bench::synthetic_text(n, args.seed);
    let mut records = Vec::new();
    for &w in ws {
        let params = BenchParams {
            n,
            w,
            k: k.unwrap_or_else(|| bench::default_k(w)),
            seed: args.seed,
            reps,
            mode: args.order,
            layout: args.block_scheme,
        };
        for &scenario in scenarios {
            for &engine in engines {
                match bench::run(engine, scenario, &params, &text) {
                    Ok(r) => {
                        if verbose {
                            eprintln!("{scenario} {engine} w={w}: {:.1} ns/op", r.ns_per_op);
                        }
                        records.push(r);
                    }
                    Err(Error::Unsupported { .. }) => {
                        eprintln!("warning: {engine} cannot run {scenario}; skipped");
                    }
                    Err(e) => return Err(e.into()),
                }
            }
        }
    }
    let mut out = output(out)?;
    bench::write_csv(&records, &mut out).map_err(|e| Failure::Io(e.to_string()))?;
    out.flush()?;
    Ok(())
}
