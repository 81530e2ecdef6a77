//! Batch benchmark: sampled terminal pairs x (k, ell) grid x configurations,
//! one CSV row per solver run.

use std::fs::File;
use std::io::{self, Write};
use std::path::PathBuf;

use anyhow::anyhow;
use clap::Args;
use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::Serialize;

use spp::graph::{Bfs, Graph};
use spp::{solve, SolverConfig, SppInstance};

use crate::{read_graph, Failure};

/// The standard comparison matrix, plus `bare`.
pub const DEFAULT_CONFIGS: &str =
    "b-sp,b-sp+b-fi,b-sp+c,b-sp+d-ms,b-sp+b-fi+c,b-sp+b-fi+d-ms,b-sp+c+d-ms,all,bare";

/// Pairs farther apart than this are never sampled.
const MAX_PAIR_DIST: usize = 10;

#[derive(Args, Debug)]
pub struct BenchArgs {
    /// Graph files.
    #[arg(required = true)]
    graphs: Vec<PathBuf>,
    /// Terminal pairs sampled per graph.
    #[arg(long, default_value_t = 10)]
    pairs: usize,
    #[arg(long, default_value_t = 2)]
    k_min: usize,
    #[arg(long, default_value_t = 7)]
    k_max: usize,
    #[arg(long, default_value_t = 5)]
    ell_min: usize,
    #[arg(long, default_value_t = 10)]
    ell_max: usize,
    /// Comma-separated configuration names; `+` joins heuristics.
    #[arg(long, default_value = DEFAULT_CONFIGS)]
    configs: String,
    #[arg(long, default_value_t = 30_000)]
    timeout_ms: u64,
    #[arg(long, default_value_t = 0)]
    seed: u64,
    /// Worker threads; defaults to the number of CPUs.
    #[arg(long)]
    jobs: Option<usize>,
    /// Disable root detection, so every instance reaches the search tree.
    #[arg(long)]
    no_trivial: bool,
    #[arg(long)]
    no_preprocess: bool,
    /// CSV output; stdout if absent.
    #[arg(short, long)]
    output: Option<PathBuf>,
}

/// One CSV row.
#[derive(Debug, Default, Serialize)]
pub struct RunRecord {
    pub graph: String,
    pub s: Option<usize>,
    pub t: Option<usize>,
    pub k: Option<usize>,
    pub ell: Option<usize>,
    pub config: String,
    pub decision: String,
    pub solved_by: String,
    pub nodes: Option<u64>,
    pub br1: Option<u64>,
    pub br2: Option<u64>,
    pub br3: Option<u64>,
    pub prunes_len: Option<u64>,
    pub prunes_bcpl: Option<u64>,
    pub prunes_bsp: Option<u64>,
    pub bfi_recorded: Option<u64>,
    pub bfi_masked: Option<u64>,
    pub dms_fired: Option<u64>,
    pub max_depth: Option<usize>,
    pub n_before: Option<usize>,
    pub n_after: Option<usize>,
    pub m_before: Option<usize>,
    pub m_after: Option<usize>,
    pub wall_ms: Option<f64>,
}

/// Up to `count` distinct pairs `(s, t)`, `s != t`, at distance at most 10.
pub fn sample_pairs(g: &Graph, count: usize, rng: &mut ChaCha8Rng) -> Vec<(usize, usize)> {
    let n = g.vertex_count();
    let mut out: Vec<(usize, usize)> = Vec::new();
    if n < 2 {
        return out;
    }
    let mut bfs = Bfs::new(n);
    let mut dist = Vec::new();
    let attempts = 50 * count.max(1) + 100;
    for _ in 0..attempts {
        if out.len() == count {
            break;
        }
        let s = rng.gen_range(0..n);
        let t = rng.gen_range(0..n);
        if s == t || out.contains(&(s, t)) {
            continue;
        }
        bfs.distances_into(g, None, s, Some(MAX_PAIR_DIST), &mut dist);
        if dist[t] <= MAX_PAIR_DIST {
            out.push((s, t));
        }
    }
    out
}

struct Job<'a> {
    graph: &'a str,
    g: &'a Graph,
    s: usize,
    t: usize,
    k: usize,
    ell: usize,
    configs: Vec<(String, SolverConfig)>,
}

fn run_job(job: &Job<'_>) -> Vec<RunRecord> {
    let inst = SppInstance::new(job.g.clone(), job.s, job.t, job.k, job.ell).expect("sampled pair is valid");
    job.configs
        .iter()
        .map(|(name, cfg)| {
            let r = solve(&inst, cfg);
            let st = r.stats;
            RunRecord {
                graph: job.graph.to_string(),
                s: Some(job.s + 1),
                t: Some(job.t + 1),
                k: Some(job.k),
                ell: Some(job.ell),
                config: name.clone(),
                decision: r.decision.to_string(),
                solved_by: st.solved_by.to_string(),
                nodes: Some(st.nodes),
                br1: Some(st.br1),
                br2: Some(st.br2),
                br3: Some(st.br3),
                prunes_len: Some(st.prunes_len),
                prunes_bcpl: Some(st.prunes_bcpl),
                prunes_bsp: Some(st.prunes_bsp),
                bfi_recorded: Some(st.bfi_recorded),
                bfi_masked: Some(st.bfi_masked),
                dms_fired: Some(st.dms_fired),
                max_depth: Some(st.max_depth),
                n_before: Some(st.n_before),
                n_after: Some(st.n_after),
                m_before: Some(st.m_before),
                m_after: Some(st.m_after),
                wall_ms: Some(st.wall_ms),
            }
        })
        .collect()
}

pub fn run(a: &BenchArgs) -> Result<u8, Failure> {
    if a.k_min == 0 || a.ell_min == 0 || a.k_min > a.k_max || a.ell_min > a.ell_max {
        return Err(Failure::usage(anyhow!("need 1 <= k-min <= k-max and 1 <= ell-min <= ell-max")));
    }
    let mut configs = Vec::new();
    for name in a.configs.split(',').map(str::trim).filter(|s| !s.is_empty()) {
        let mut cfg = SolverConfig::named(name).map_err(Failure::usage)?;
        cfg.timeout_ms = Some(a.timeout_ms);
        cfg.trivial_detection = !a.no_trivial;
        cfg.preprocess = !a.no_preprocess;
        cfg.rng_seed = a.seed;
        configs.push((name.to_string(), cfg));
    }

    let mut records = Vec::new();
    let mut graphs = Vec::new();
    for path in &a.graphs {
        let label = path.display().to_string();
        match read_graph(path) {
            Ok(g) => graphs.push((label, g)),
            Err(f) => {
                eprintln!("spp bench: skipping {:#}", f.error);
                records.push(RunRecord {
                    graph: label,
                    decision: "skipped".into(),
                    solved_by: "unreadable".into(),
                    ..Default::default()
                });
            }
        }
    }

    let mut jobs = Vec::new();
    for (gi, (label, g)) in graphs.iter().enumerate() {
        let mut rng = ChaCha8Rng::seed_from_u64(a.seed.wrapping_add(gi as u64));
        for (s, t) in sample_pairs(g, a.pairs, &mut rng) {
            for k in a.k_min..=a.k_max {
                for ell in a.ell_min..=a.ell_max {
                    let mut order = configs.clone();
                    order.shuffle(&mut rng);
                    jobs.push(Job {
                        graph: label,
                        g,
                        s,
                        t,
                        k,
                        ell,
                        configs: order,
                    });
                }
            }
        }
    }

    let pool = rayon::ThreadPoolBuilder::new()
        .num_threads(a.jobs.unwrap_or(0))
        .build()
        .map_err(anyhow::Error::from)?;
    let rows: Vec<Vec<RunRecord>> = pool.install(|| jobs.par_iter().map(run_job).collect());
    records.extend(rows.into_iter().flatten());

    let sink: Box<dyn Write> = match &a.output {
        Some(p) => Box::new(File::create(p).map_err(|e| anyhow!("{}: {e}", p.display()))?),
        None => Box::new(io::stdout().lock()),
    };
    let mut w = csv::Writer::from_writer(sink);
    for r in &records {
        w.serialize(r).map_err(anyhow::Error::from)?;
    }
    w.flush()?;
    Ok(0)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn pairs_are_close_and_distinct() {
        let g = spp::generate::gnp(30, 0.1, 3);
        let mut rng = ChaCha8Rng::seed_from_u64(1);
        let pairs = sample_pairs(&g, 8, &mut rng);
        let mut bfs = Bfs::new(30);
        let mut d = Vec::new();
        for (i, &(s, t)) in pairs.iter().enumerate() {
            assert_ne!(s, t);
            assert!(!pairs[..i].contains(&(s, t)));
            bfs.distances_into(&g, None, s, None, &mut d);
            assert!(d[t] <= MAX_PAIR_DIST);
        }
    }

    #[test]
    fn edgeless_graph_has_no_pairs() {
        let g = Graph::empty(5);
        let mut rng = ChaCha8Rng::seed_from_u64(1);
        assert!(sample_pairs(&g, 3, &mut rng).is_empty());
    }

    #[test]
    fn default_configs_parse() {
        for name in DEFAULT_CONFIGS.split(',') {
            SolverConfig::named(name).unwrap();
        }
    }
}
