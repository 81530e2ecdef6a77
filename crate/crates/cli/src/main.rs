//! `spp`: solve, cross-check, generate and benchmark Short Path Packing
//! instances.
//!
//! Exit codes: 0 yes, 1 no, 2 timeout, 64 usage error, 65 malformed graph
//! file, 66 unreadable graph file.

mod bench;

use std::fs::File;
use std::io::{self, BufReader, Write};
use std::path::{Path as FsPath, PathBuf};
use std::process::ExitCode;

use anyhow::anyhow;
use clap::{Args, Parser, Subcommand};
use serde::Serialize;

use spp::graph::Path;
use spp::oracle;
use spp::{solve, Decision, Graph, ParseError, SolveStats, SolverConfig, SppInstance};

const EX_USAGE: u8 = 64;
const EX_DATAERR: u8 = 65;
const EX_NOINPUT: u8 = 66;

#[derive(Parser, Debug)]
#[command(name = "spp", version, about = "Exact solver for packing short vertex-disjoint s-t paths")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Decide an instance with the search-tree solver.
    Solve(SolveArgs),
    /// Decide an instance by brute force (small graphs only).
    Oracle(OracleArgs),
    /// Write a seeded G(n, p) random graph.
    Gen(GenArgs),
    /// Run a configuration matrix over sampled terminal pairs.
    Bench(bench::BenchArgs),
}

#[derive(Args, Debug)]
struct InstanceArgs {
    /// Graph file: header "<n> <m>", then one "u v" line per edge (1-based).
    graph: PathBuf,
    /// Source vertex (1-based).
    #[arg(long)]
    s: usize,
    /// Target vertex (1-based).
    #[arg(long)]
    t: usize,
    /// Number of paths.
    #[arg(long)]
    k: usize,
    /// Maximum path length in edges.
    #[arg(long)]
    ell: usize,
}

#[derive(Args, Debug)]
struct SolveArgs {
    #[command(flatten)]
    instance: InstanceArgs,
    /// Heuristics: `all`, `bare`, or a comma list of b-cpl, b-sp, b-fi,
    /// d-ms, c-dist, c-pl.
    #[arg(long, default_value = "all")]
    heur: String,
    #[arg(long)]
    no_preprocess: bool,
    #[arg(long)]
    no_trivial: bool,
    /// Run the separator check only while the remaining lists are bare.
    #[arg(long, default_value_t = true, action = clap::ArgAction::Set)]
    dms_bare_lists_only: bool,
    #[arg(long)]
    timeout_ms: Option<u64>,
    /// Print a JSON report instead of text.
    #[arg(long)]
    json: bool,
}

#[derive(Args, Debug)]
struct OracleArgs {
    #[command(flatten)]
    instance: InstanceArgs,
    /// Also compute the largest packing of paths of length at most ell.
    #[arg(long)]
    max: bool,
    #[arg(long)]
    json: bool,
}

#[derive(Args, Debug)]
struct GenArgs {
    #[arg(long)]
    n: usize,
    #[arg(long)]
    p: f64,
    #[arg(long, default_value_t = 0)]
    seed: u64,
    /// Output file; stdout if absent.
    #[arg(short, long)]
    output: Option<PathBuf>,
}

/// An error with the exit code it maps to.
#[derive(Debug)]
struct Failure {
    code: u8,
    error: anyhow::Error,
}

impl Failure {
    fn usage(error: impl Into<anyhow::Error>) -> Self {
        Failure { code: EX_USAGE, error: error.into() }
    }
}

impl From<anyhow::Error> for Failure {
    fn from(error: anyhow::Error) -> Self {
        Failure { code: 1, error }
    }
}

impl From<io::Error> for Failure {
    fn from(error: io::Error) -> Self {
        Failure { code: 1, error: error.into() }
    }
}

pub(crate) fn read_graph(path: &FsPath) -> Result<Graph, Failure> {
    let file = File::open(path).map_err(|e| Failure {
        code: EX_NOINPUT,
        error: anyhow!("{}: {e}", path.display()),
    })?;
    Graph::read_text(BufReader::new(file)).map_err(|e| Failure {
        code: match e {
            ParseError::Io(_) => EX_NOINPUT,
            _ => EX_DATAERR,
        },
        error: anyhow!("{}: {e}", path.display()),
    })
}

fn load_instance(a: &InstanceArgs) -> Result<SppInstance, Failure> {
    let g = read_graph(&a.graph)?;
    let n = g.vertex_count();
    for (name, v) in [("--s", a.s), ("--t", a.t)] {
        if v == 0 || v > n {
            return Err(Failure::usage(anyhow!("{name} {v} is not a vertex (graph has 1..={n})")));
        }
    }
    SppInstance::new(g, a.s - 1, a.t - 1, a.k, a.ell).map_err(Failure::usage)
}

fn exit_for(d: Decision) -> u8 {
    match d {
        Decision::Yes => 0,
        Decision::No => 1,
        Decision::Timeout => 2,
    }
}

fn print_paths(out: &mut impl Write, paths: &[Path]) -> io::Result<()> {
    for (i, p) in paths.iter().enumerate() {
        writeln!(out, "path {}: {p}", i + 1)?;
    }
    Ok(())
}

#[derive(Serialize)]
struct SolveReport<'a> {
    decision: Decision,
    witness: Option<&'a [Path]>,
    config: String,
    stats: &'a SolveStats,
}

fn cmd_solve(a: &SolveArgs) -> Result<u8, Failure> {
    let mut cfg = SolverConfig::named(&a.heur).map_err(Failure::usage)?;
    cfg.preprocess = !a.no_preprocess;
    cfg.trivial_detection = !a.no_trivial;
    cfg.dms_bare_lists_only = a.dms_bare_lists_only;
    cfg.timeout_ms = a.timeout_ms;
    let inst = load_instance(&a.instance)?;
    let r = solve(&inst, &cfg);

    let stdout = io::stdout();
    let mut out = stdout.lock();
    if a.json {
        let report = SolveReport {
            decision: r.decision,
            witness: r.witness.as_ref().map(|w| w.paths.as_slice()),
            config: cfg.fingerprint(),
            stats: &r.stats,
        };
        serde_json::to_writer_pretty(&mut out, &report).map_err(anyhow::Error::from)?;
        writeln!(out)?;
    } else {
        writeln!(out, "{}", r.decision)?;
        if let Some(w) = &r.witness {
            print_paths(&mut out, &w.paths)?;
        }
        let s = &r.stats;
        writeln!(
            out,
            "solved by {} in {:.3} ms; {} nodes (rules {}/{}/{}), depth {}; graph {}x{} -> {}x{}",
            s.solved_by, s.wall_ms, s.nodes, s.br1, s.br2, s.br3, s.max_depth, s.n_before, s.m_before, s.n_after, s.m_after
        )?;
    }
    Ok(exit_for(r.decision))
}

fn cmd_oracle(a: &OracleArgs) -> Result<u8, Failure> {
    let inst = load_instance(&a.instance)?;
    let ans = if a.max { oracle::decide_with_max(&inst) } else { oracle::decide(&inst) };
    let stdout = io::stdout();
    let mut out = stdout.lock();
    if a.json {
        serde_json::to_writer_pretty(&mut out, &ans).map_err(anyhow::Error::from)?;
        writeln!(out)?;
    } else {
        writeln!(out, "{}", ans.decision)?;
        if let Some(w) = &ans.witness {
            print_paths(&mut out, &w.paths)?;
        }
        if let Some(m) = ans.max_packing {
            writeln!(out, "max packing: {m}")?;
        }
    }
    Ok(exit_for(ans.decision))
}

fn cmd_gen(a: &GenArgs) -> Result<u8, Failure> {
    if a.n < 2 {
        return Err(Failure::usage(anyhow!("--n must be at least 2")));
    }
    if !(0.0..=1.0).contains(&a.p) {
        return Err(Failure::usage(anyhow!("--p must lie in [0, 1]")));
    }
    let g = spp::generate::gnp(a.n, a.p, a.seed);
    match &a.output {
        Some(path) => {
            let mut f = File::create(path).map_err(|e| anyhow!("{}: {e}", path.display()))?;
            g.write_text(&mut f)?;
        }
        None => g.write_text(io::stdout().lock())?,
    }
    Ok(0)
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let code = if e.use_stderr() { EX_USAGE } else { 0 };
            let _ = e.print();
            return ExitCode::from(code);
        }
    };
    let result = match &cli.command {
        Command::Solve(a) => cmd_solve(a),
        Command::Oracle(a) => cmd_oracle(a),
        Command::Gen(a) => cmd_gen(a),
        Command::Bench(a) => bench::run(a),
    };
    match result {
        Ok(code) => ExitCode::from(code),
        Err(f) => {
            eprintln!("spp: {:#}", f.error);
            ExitCode::from(f.code)
        }
    }
}
