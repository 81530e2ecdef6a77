//! The search-tree solver.
//!
//! Each node runs the greedy builder; when it breaks, a branching rule
//! inserts one previously used vertex into one checkpoint list per child.
//! Children are explored depth-first until one succeeds or all fail.

use std::collections::BTreeSet;
use std::fmt;
use std::str::FromStr;
use std::time::{Duration, Instant};

use serde::Serialize;
use thiserror::Error;

use crate::graph::{DistanceTable, Graph, Path, Vertex};
use crate::greedy::{Failure, FailureCondition, Greedy, GreedyOutcome};
use crate::model::{
    validate_solution, ForbiddenInterval, IntervalStore, Solution, SppInstance, SppcInstance,
};
use crate::preprocess::{self, Detector, TrivialOutcome};

/// Heuristic toggles and limits.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize)]
pub struct SolverConfig {
    pub preprocess: bool,
    pub trivial_detection: bool,
    /// Prune lists with too few adjacent consecutive checkpoints.
    pub b_cpl: bool,
    /// Prune lists whose summed checkpoint distances exceed the bound.
    pub b_sp: bool,
    /// Forbidden intervals.
    pub b_fi: bool,
    /// Separator check after each greedily fixed path.
    pub d_ms: bool,
    /// Only run the separator check while the remaining lists are bare.
    pub dms_bare_lists_only: bool,
    /// Order candidates by distance to their insertion neighbors.
    pub c_dist: bool,
    /// Order rule-2 positions by descending greedy subpath length.
    pub c_pl: bool,
    pub timeout_ms: Option<u64>,
    /// Seed for instance generation in harnesses; the solver ignores it.
    pub rng_seed: u64,
}

impl Default for SolverConfig {
    fn default() -> Self {
        SolverConfig::all()
    }
}

#[derive(Debug, Error, Clone, PartialEq, Eq)]
#[error("unknown heuristic {0:?} (expected bare, all, or a '+'/','-joined list of b-cpl, b-sp, b-fi, d-ms, c-dist, c-pl, c)")]
pub struct UnknownHeuristic(pub String);

impl SolverConfig {
    /// No heuristics; preprocessing and root detection on.
    pub fn bare() -> Self {
        SolverConfig {
            preprocess: true,
            trivial_detection: true,
            b_cpl: false,
            b_sp: false,
            b_fi: false,
            d_ms: false,
            dms_bare_lists_only: true,
            c_dist: false,
            c_pl: false,
            timeout_ms: None,
            rng_seed: 0,
        }
    }

    /// `b-sp`, `b-fi`, `c-dist`, `c-pl` and `d-ms`.
    pub fn all() -> Self {
        SolverConfig {
            b_sp: true,
            b_fi: true,
            d_ms: true,
            c_dist: true,
            c_pl: true,
            ..Self::bare()
        }
    }

    /// Parses a configuration name such as `bare`, `all`, `b-sp+b-fi` or
    /// `b-sp+c` (`c` stands for `c-dist+c-pl`). Only the heuristic toggles
    /// are set; everything else comes from [`SolverConfig::bare`].
    pub fn named(name: &str) -> Result<Self, UnknownHeuristic> {
        match name {
            "bare" | "" => return Ok(Self::bare()),
            "all" => return Ok(Self::all()),
            _ => {}
        }
        let mut cfg = Self::bare();
        for tok in name.split(['+', ',']) {
            cfg.enable(tok.trim())?;
        }
        Ok(cfg)
    }

    pub fn enable(&mut self, heuristic: &str) -> Result<(), UnknownHeuristic> {
        match heuristic {
            "b-cpl" => self.b_cpl = true,
            "b-sp" => self.b_sp = true,
            "b-fi" => self.b_fi = true,
            "d-ms" => self.d_ms = true,
            "c-dist" => self.c_dist = true,
            "c-pl" => self.c_pl = true,
            "c" => {
                self.c_dist = true;
                self.c_pl = true;
            }
            other => return Err(UnknownHeuristic(other.to_string())),
        }
        Ok(())
    }

    /// Heuristic codes that are switched on, `+`-joined, or `bare`.
    pub fn heuristics_label(&self) -> String {
        let parts: Vec<&str> = [
            (self.b_cpl, "b-cpl"),
            (self.b_sp, "b-sp"),
            (self.b_fi, "b-fi"),
            (self.d_ms, "d-ms"),
            (self.c_dist, "c-dist"),
            (self.c_pl, "c-pl"),
        ]
        .iter()
        .filter(|(on, _)| *on)
        .map(|&(_, s)| s)
        .collect();
        if parts.is_empty() {
            "bare".to_string()
        } else {
            parts.join("+")
        }
    }

    /// Stable short description of every toggle, for result tables.
    pub fn fingerprint(&self) -> String {
        let mut s = self.heuristics_label();
        if !self.preprocess {
            s.push_str("/no-pre");
        }
        if !self.trivial_detection {
            s.push_str("/no-triv");
        }
        if self.d_ms && !self.dms_bare_lists_only {
            s.push_str("/dms-any");
        }
        s
    }
}

impl FromStr for SolverConfig {
    type Err = UnknownHeuristic;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        Self::named(s)
    }
}

/// How the instance was decided.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Default)]
#[serde(rename_all = "kebab-case")]
pub enum SolvedBy {
    TrivialYes,
    TrivialNo,
    /// The root greedy run succeeded.
    Greedy,
    #[default]
    Search,
    Timeout,
}

impl fmt::Display for SolvedBy {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            SolvedBy::TrivialYes => "trivial-yes",
            SolvedBy::TrivialNo => "trivial-no",
            SolvedBy::Greedy => "greedy",
            SolvedBy::Search => "search",
            SolvedBy::Timeout => "timeout",
        })
    }
}

#[derive(Clone, Debug, Default, PartialEq, Serialize)]
pub struct SolveStats {
    pub nodes: u64,
    pub br1: u64,
    pub br2: u64,
    pub br3: u64,
    pub prunes_len: u64,
    pub prunes_bcpl: u64,
    pub prunes_bsp: u64,
    pub bfi_recorded: u64,
    /// Vertices hidden by intervals in greedy runs plus candidates skipped.
    pub bfi_masked: u64,
    pub dms_fired: u64,
    pub solved_by: SolvedBy,
    /// Root test that decided the instance, if any.
    pub detector: Option<Detector>,
    pub wall_ms: f64,
    pub n_before: usize,
    pub n_after: usize,
    pub m_before: usize,
    pub m_after: usize,
    pub max_depth: usize,
    /// Largest candidate set produced by each rule.
    pub max_branch: [usize; 3],
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Decision {
    Yes,
    No,
    Timeout,
}

impl fmt::Display for Decision {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Decision::Yes => "yes",
            Decision::No => "no",
            Decision::Timeout => "timeout",
        })
    }
}

#[derive(Clone, Debug)]
pub struct SolveResult {
    pub decision: Decision,
    /// Paths in original vertex ids.
    pub witness: Option<Solution>,
    pub stats: SolveStats,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub enum PruneReason {
    /// A list has more than `ell + 1` entries.
    Length,
    Bcpl,
    Bsp,
}

/// A child instance: insert `vertex` into list `list` at 0-based position
/// `index`, between the current entries `before` and `after`.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct Candidate {
    pub list: usize,
    pub index: usize,
    pub vertex: Vertex,
    pub before: Vertex,
    pub after: Vertex,
}

/// Events recorded by [`solve_traced`].
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum TraceEvent {
    Enter {
        depth: usize,
        lists: Vec<Vec<Vertex>>,
    },
    Pruned(PruneReason),
    Greedy(GreedyOutcome),
    Branch {
        rule: FailureCondition,
        candidates: Vec<Candidate>,
    },
}

pub fn node_infeasible(
    inst: &SppcInstance<'_>,
    cfg: &SolverConfig,
    dist: &mut DistanceTable,
) -> Option<PruneReason> {
    let ell = inst.ell;
    if inst.lists.iter().any(|l| l.len() > ell + 1) {
        return Some(PruneReason::Length);
    }
    if cfg.b_cpl {
        for l in &inst.lists {
            if l.len() > ell / 2 + 1 {
                let adjacent = l
                    .entries()
                    .windows(2)
                    .filter(|w| inst.graph.has_edge(w[0], w[1]))
                    .count() as i64;
                let need = 2 * (l.len() as i64 - 1) - ell as i64;
                if adjacent < need {
                    return Some(PruneReason::Bcpl);
                }
            }
        }
    }
    if cfg.b_sp {
        for l in &inst.lists {
            let mut sum = 0usize;
            for w in l.entries().windows(2) {
                sum = sum.saturating_add(dist.dist(inst.graph, w[0], w[1]));
            }
            if sum > ell {
                return Some(PruneReason::Bsp);
            }
        }
    }
    None
}

fn order_vertices(
    g: &Graph,
    pool: &BTreeSet<Vertex>,
    before: Vertex,
    after: Vertex,
    cfg: &SolverConfig,
    dist: &mut DistanceTable,
) -> Vec<Vertex> {
    let mut vs: Vec<Vertex> = pool.iter().copied().collect();
    if cfg.c_dist {
        let mut keyed: Vec<(usize, Vertex)> = vs
            .iter()
            .map(|&v| (dist.dist(g, before, v).saturating_add(dist.dist(g, after, v)), v))
            .collect();
        keyed.sort();
        vs = keyed.into_iter().map(|(_, v)| v).collect();
    }
    vs
}

fn candidates_at(
    inst: &SppcInstance<'_>,
    list: usize,
    index: usize,
    pool: &BTreeSet<Vertex>,
    cfg: &SolverConfig,
    dist: &mut DistanceTable,
) -> impl Iterator<Item = Candidate> {
    let entries = inst.lists[list].entries();
    let (before, after) = (entries[index - 1], entries[index]);
    order_vertices(inst.graph, pool, before, after, cfg, dist)
        .into_iter()
        .map(move |vertex| Candidate {
            list,
            index,
            vertex,
            before,
            after,
        })
}

fn without_lists(inst: &SppcInstance<'_>, vs: impl IntoIterator<Item = Vertex>) -> BTreeSet<Vertex> {
    let lists = inst.all_list_vertices();
    vs.into_iter().filter(|v| !lists.contains(v)).collect()
}

fn completed_internals(f: &Failure) -> impl Iterator<Item = Vertex> + '_ {
    f.complete_paths.iter().flat_map(|p| p.internal().iter().copied())
}

/// Children for a missing subpath: every previously used non-terminal
/// vertex, inserted right before the unreachable checkpoint.
pub fn branch_fc1(
    inst: &SppcInstance<'_>,
    f: &Failure,
    cfg: &SolverConfig,
    dist: &mut DistanceTable,
) -> Vec<Candidate> {
    assert_eq!(f.condition, FailureCondition::Fc1);
    let j = f.segment_index.expect("FC1 carries a subpath index");
    let pool = without_lists(
        inst,
        completed_internals(f).chain(f.partial_subpaths.iter().flat_map(|q| q.vertices().iter().copied())),
    );
    candidates_at(inst, f.path_index, j + 1, &pool, cfg, dist).collect()
}

/// Children for an overlong path: for every subpath position up to the
/// failing one, every previously used non-terminal vertex not on that
/// position's own greedy subpath.
pub fn branch_fc2(
    inst: &SppcInstance<'_>,
    f: &Failure,
    cfg: &SolverConfig,
    dist: &mut DistanceTable,
) -> Vec<Candidate> {
    assert_eq!(f.condition, FailureCondition::Fc2);
    let jb = f.segment_index.expect("FC2 carries a subpath index");
    let mut positions: Vec<usize> = (0..=jb).collect();
    if cfg.c_pl {
        let len_at = |j: usize| -> usize {
            if j < jb {
                f.partial_subpaths[j].len()
            } else {
                f.failing_subpath.as_ref().map_or(0, Path::len)
            }
        };
        // Stable sort keeps ascending positions among equal lengths.
        positions.sort_by_key(|&j| std::cmp::Reverse(len_at(j)));
    }
    let mut out = Vec::new();
    for jp in positions {
        let pool = without_lists(
            inst,
            completed_internals(f).chain(
                f.partial_subpaths
                    .iter()
                    .enumerate()
                    .filter(|&(j, _)| j != jp)
                    .flat_map(|(_, q)| q.vertices().iter().copied()),
            ),
        );
        out.extend(candidates_at(inst, f.path_index, jp + 1, &pool, cfg, dist));
    }
    out
}

/// Children for a too-small separator: every internal vertex of the fixed
/// paths, at every position of every list not yet built.
pub fn branch_fc3(
    inst: &SppcInstance<'_>,
    f: &Failure,
    cfg: &SolverConfig,
    dist: &mut DistanceTable,
) -> Vec<Candidate> {
    assert_eq!(f.condition, FailureCondition::Fc3);
    let pool = without_lists(inst, completed_internals(f));
    let mut out = Vec::new();
    for list in f.path_index..inst.k {
        for j in 0..inst.lists[list].segments() {
            out.extend(candidates_at(inst, list, j + 1, &pool, cfg, dist));
        }
    }
    out
}

/// Whether inserting `c` would put a vertex between the two ends of an
/// interval that applies to its list.
fn is_forbidden(store: &IntervalStore, inst: &SppcInstance<'_>, c: &Candidate) -> bool {
    let list = &inst.lists[c.list];
    store.iter().any(|iv| {
        iv.x == c.vertex
            && iv.applies_to(c.list)
            && match (list.position(iv.a), list.position(iv.b)) {
                (Some(pa), Some(pb)) => pa < c.index && pb >= c.index,
                _ => false,
            }
    })
}

/// Records that `c` failed: lists equal to the one it modified (their
/// paths are interchangeable) must not route `c.vertex` between
/// `c.before` and `c.after` anywhere in the remaining sibling subtrees.
pub fn record_forbidden_interval(store: &mut IntervalStore, inst: &SppcInstance<'_>, c: &Candidate) -> bool {
    let target = &inst.lists[c.list];
    let mut lists = 0u64;
    for (i, l) in inst.lists.iter().enumerate() {
        if i < 64 && l == target {
            lists |= 1 << i;
        }
    }
    if lists == 0 {
        return false;
    }
    store.push(ForbiddenInterval {
        a: c.before,
        b: c.after,
        x: c.vertex,
        lists,
    });
    true
}

enum NodeResult {
    Found(Vec<Path>),
    Exhausted,
    TimedOut,
}

struct Searcher {
    cfg: SolverConfig,
    stats: SolveStats,
    intervals: IntervalStore,
    dist: DistanceTable,
    greedy: Greedy,
    deadline: Option<Instant>,
    trace: Option<Vec<TraceEvent>>,
    k: usize,
    ell: usize,
}

impl Searcher {
    fn new(graph: &Graph, k: usize, ell: usize, cfg: SolverConfig, deadline: Option<Instant>) -> Self {
        Searcher {
            cfg,
            stats: SolveStats::default(),
            intervals: IntervalStore::new(),
            dist: DistanceTable::new(graph.vertex_count()),
            greedy: Greedy::new(graph),
            deadline,
            trace: None,
            k,
            ell,
        }
    }

    fn expired(&self) -> bool {
        self.deadline.is_some_and(|d| Instant::now() >= d)
    }

    fn emit(&mut self, ev: impl FnOnce() -> TraceEvent) {
        if let Some(t) = self.trace.as_mut() {
            t.push(ev());
        }
    }

    fn node(&mut self, inst: &SppcInstance<'_>, depth: usize) -> NodeResult {
        self.stats.nodes += 1;
        self.stats.max_depth = self.stats.max_depth.max(depth);
        assert!(depth <= self.k * self.ell, "depth {depth} exceeds k*ell");
        debug_assert!(inst.lists_consistent());
        self.emit(|| TraceEvent::Enter {
            depth,
            lists: inst.lists.iter().map(|l| l.entries().to_vec()).collect(),
        });
        if self.expired() {
            return NodeResult::TimedOut;
        }
        if let Some(reason) = node_infeasible(inst, &self.cfg, &mut self.dist) {
            match reason {
                PruneReason::Length => self.stats.prunes_len += 1,
                PruneReason::Bcpl => self.stats.prunes_bcpl += 1,
                PruneReason::Bsp => self.stats.prunes_bsp += 1,
            }
            self.emit(|| TraceEvent::Pruned(reason));
            return NodeResult::Exhausted;
        }

        let intervals = self.cfg.b_fi.then_some(&self.intervals);
        self.greedy.counters = Default::default();
        let outcome = self.greedy.run(inst, intervals, &self.cfg);
        self.stats.bfi_masked += self.greedy.counters.bfi_masked;
        self.stats.dms_fired += self.greedy.counters.dms_fired;
        if self.trace.is_some() {
            let o = outcome.clone();
            self.emit(|| TraceEvent::Greedy(o));
        }
        let failure = match outcome {
            GreedyOutcome::Success { paths, .. } => return NodeResult::Found(paths),
            GreedyOutcome::Failure(f) => f,
        };

        let (k, ell) = (self.k, self.ell);
        let candidates = match failure.condition {
            FailureCondition::Fc1 => {
                self.stats.br1 += 1;
                let c = branch_fc1(inst, &failure, &self.cfg, &mut self.dist);
                assert!(c.len() <= k * ell, "rule 1 produced {} > k*ell children", c.len());
                c
            }
            FailureCondition::Fc2 => {
                self.stats.br2 += 1;
                let c = branch_fc2(inst, &failure, &self.cfg, &mut self.dist);
                assert!(c.len() <= k * ell * ell, "rule 2 produced {} > k*ell^2 children", c.len());
                c
            }
            FailureCondition::Fc3 => {
                self.stats.br3 += 1;
                let c = branch_fc3(inst, &failure, &self.cfg, &mut self.dist);
                assert!(c.len() <= k * k * ell * ell, "rule 3 produced {} > k^2*ell^2 children", c.len());
                c
            }
        };
        let rule_idx = match failure.condition {
            FailureCondition::Fc1 => 0,
            FailureCondition::Fc2 => 1,
            FailureCondition::Fc3 => 2,
        };
        self.stats.max_branch[rule_idx] = self.stats.max_branch[rule_idx].max(candidates.len());
        if self.trace.is_some() {
            let c = candidates.clone();
            self.emit(|| TraceEvent::Branch {
                rule: failure.condition,
                candidates: c,
            });
        }

        let mark = self.intervals.mark();
        let mut result = NodeResult::Exhausted;
        for cand in &candidates {
            if self.expired() {
                result = NodeResult::TimedOut;
                break;
            }
            if self.cfg.b_fi && is_forbidden(&self.intervals, inst, cand) {
                self.stats.bfi_masked += 1;
                continue;
            }
            debug_assert!(!inst.is_checkpoint(cand.vertex));
            let mut child = inst.clone();
            child.lists[cand.list].insert(cand.index, cand.vertex);
            match self.node(&child, depth + 1) {
                NodeResult::Exhausted => {
                    if self.cfg.b_fi && record_forbidden_interval(&mut self.intervals, inst, cand) {
                        self.stats.bfi_recorded += 1;
                    }
                }
                other => {
                    result = other;
                    break;
                }
            }
        }
        self.intervals.release(mark);
        result
    }
}

/// Solves `inst` under `cfg`.
pub fn solve(inst: &SppInstance, cfg: &SolverConfig) -> SolveResult {
    solve_impl(inst, cfg, false).0
}

/// Like [`solve`], also returning the sequence of search events.
pub fn solve_traced(inst: &SppInstance, cfg: &SolverConfig) -> (SolveResult, Vec<TraceEvent>) {
    solve_impl(inst, cfg, true)
}

fn solve_impl(inst: &SppInstance, cfg: &SolverConfig, traced: bool) -> (SolveResult, Vec<TraceEvent>) {
    let start = Instant::now();
    let deadline = cfg.timeout_ms.map(|ms| start + Duration::from_millis(ms));
    let root = SppcInstance::from_spp(inst);

    let reduction = if cfg.preprocess {
        Some(preprocess::reduce(&root).expect("bare lists always survive reduction"))
    } else {
        None
    };
    let work = match &reduction {
        Some(r) => r.instance(),
        None => root.clone(),
    };
    let to_original = |paths: Vec<Path>| -> Solution {
        let paths = match &reduction {
            Some(r) => paths
                .into_iter()
                .map(|p| Path(p.0.into_iter().map(|v| r.report.to_original(v)).collect()))
                .collect(),
            None => paths,
        };
        Solution { paths }
    };

    let mut stats = SolveStats {
        n_before: inst.graph.vertex_count(),
        m_before: inst.graph.edge_count(),
        n_after: work.graph.vertex_count(),
        m_after: work.graph.edge_count(),
        ..Default::default()
    };

    let finish = |decision, witness: Option<Solution>, mut stats: SolveStats, trace| {
        if let Some(w) = &witness {
            let check = validate_solution(&root, w);
            assert!(check.is_ok(), "solver produced an invalid witness: {check:?}");
        }
        stats.wall_ms = start.elapsed().as_secs_f64() * 1e3;
        (
            SolveResult {
                decision,
                witness,
                stats,
            },
            trace,
        )
    };

    if cfg.trivial_detection {
        match preprocess::detect_trivial(&work) {
            TrivialOutcome::Yes(sol, d) => {
                stats.solved_by = SolvedBy::TrivialYes;
                stats.detector = Some(d);
                return finish(Decision::Yes, Some(to_original(sol.paths)), stats, Vec::new());
            }
            TrivialOutcome::No(d) => {
                stats.solved_by = SolvedBy::TrivialNo;
                stats.detector = Some(d);
                return finish(Decision::No, None, stats, Vec::new());
            }
            TrivialOutcome::Unknown => {}
        }
    }

    let mut searcher = Searcher::new(work.graph, inst.k, inst.ell, *cfg, deadline);
    if traced {
        searcher.trace = Some(Vec::new());
    }
    let result = searcher.node(&work, 0);
    let trace = searcher.trace.take().unwrap_or_default();
    let search_stats = searcher.stats;
    stats = SolveStats {
        n_before: stats.n_before,
        m_before: stats.m_before,
        n_after: stats.n_after,
        m_after: stats.m_after,
        ..search_stats
    };
    match result {
        NodeResult::Found(paths) => {
            stats.solved_by = if stats.nodes == 1 { SolvedBy::Greedy } else { SolvedBy::Search };
            finish(Decision::Yes, Some(to_original(paths)), stats, trace)
        }
        NodeResult::Exhausted => {
            stats.solved_by = SolvedBy::Search;
            finish(Decision::No, None, stats, trace)
        }
        NodeResult::TimedOut => {
            stats.solved_by = SolvedBy::Timeout;
            finish(Decision::Timeout, None, stats, trace)
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::graph::tests::g_ex;
    use crate::greedy::run_greedy;
    use crate::model::CheckpointList;

    fn p(ids: &[usize]) -> Path {
        Path(ids.iter().map(|i| i - 1).collect())
    }

    fn failure(inst: &SppcInstance<'_>, cfg: &SolverConfig) -> Failure {
        match run_greedy(inst, cfg) {
            GreedyOutcome::Failure(f) => f,
            other => panic!("expected failure, got {other:?}"),
        }
    }

    #[test]
    fn config_names() {
        assert_eq!(SolverConfig::named("bare").unwrap(), SolverConfig::bare());
        assert_eq!(SolverConfig::named("all").unwrap(), SolverConfig::all());
        let c = SolverConfig::named("b-sp+c").unwrap();
        assert!(c.b_sp && c.c_dist && c.c_pl && !c.b_fi && !c.d_ms);
        assert_eq!(SolverConfig::named("b-sp+c-dist+c-pl").unwrap(), c);
        assert_eq!(c.heuristics_label(), "b-sp+c-dist+c-pl");
        assert!(SolverConfig::named("b-xx").is_err());
        let mut nt = SolverConfig::all();
        nt.trivial_detection = false;
        assert_eq!(nt.fingerprint(), "b-sp+b-fi+d-ms+c-dist+c-pl/no-triv");
    }

    #[test]
    fn infeasibility_checks() {
        let g = g_ex();
        let mut dist = DistanceTable::new(11);
        let mut inst = SppcInstance::bare(&g, 0, 4, 1, 5);
        inst.lists[0] = CheckpointList::from_entries(vec![0, 1, 2, 3, 5, 6, 4]).unwrap();
        assert_eq!(node_infeasible(&inst, &SolverConfig::bare(), &mut dist), Some(PruneReason::Length));

        let cpl = SolverConfig { b_cpl: true, ..SolverConfig::bare() };
        inst.lists[0] = CheckpointList::from_entries(p(&[1, 7, 10, 5]).0).unwrap();
        assert_eq!(node_infeasible(&inst, &cpl, &mut dist), Some(PruneReason::Bcpl));

        let sp = SolverConfig { b_sp: true, ..SolverConfig::bare() };
        inst.lists[0] = CheckpointList::from_entries(p(&[1, 10, 8, 5]).0).unwrap();
        // 3 + 4 + 2 > 5
        assert_eq!(dist.dist(&g, 9, 7), 4);
        assert_eq!(node_infeasible(&inst, &sp, &mut dist), Some(PruneReason::Bsp));
        assert_eq!(node_infeasible(&inst, &SolverConfig::bare(), &mut dist), None);
    }

    #[test]
    fn rule_one_on_fixture() {
        let g = g_ex();
        let inst = SppcInstance::bare(&g, 0, 4, 2, 5);
        let f = failure(&inst, &SolverConfig::bare());
        let mut dist = DistanceTable::new(11);
        for cfg in [SolverConfig::bare(), SolverConfig { c_dist: true, ..SolverConfig::bare() }] {
            let c = branch_fc1(&inst, &f, &cfg, &mut dist);
            let vs: Vec<_> = c.iter().map(|c| c.vertex).collect();
            assert_eq!(vs, vec![1, 2, 3]);
            assert!(c.iter().all(|c| c.list == 1 && c.index == 1 && c.before == 0 && c.after == 4));
        }
    }

    #[test]
    fn rule_one_empty_pool() {
        let g = Graph::from_edges(4, &[(0, 1), (2, 3)]).unwrap();
        let inst = SppcInstance::bare(&g, 0, 3, 1, 5);
        let f = failure(&inst, &SolverConfig::bare());
        let mut dist = DistanceTable::new(4);
        assert!(branch_fc1(&inst, &f, &SolverConfig::bare(), &mut dist).is_empty());
    }

    fn fc2_setup(g: &Graph) -> (SppcInstance<'_>, Failure) {
        let mut inst = SppcInstance::bare(g, 0, 6, 1, 5);
        inst.lists[0] = CheckpointList::from_entries(vec![0, 2, 5, 6]).unwrap();
        let f = failure(&inst, &SolverConfig::bare());
        (inst, f)
    }

    #[test]
    fn rule_two_pools_and_positions() {
        let g = crate::greedy::tests::fc2_fixture();
        let (inst, f) = fc2_setup(&g);
        let mut dist = DistanceTable::new(7);
        let c = branch_fc2(&inst, &f, &SolverConfig::bare(), &mut dist);
        let by_pos = |idx: usize| -> Vec<Vertex> {
            c.iter().filter(|c| c.index == idx).map(|c| c.vertex).collect()
        };
        // m = 1, x = 3, y = 4
        assert_eq!(by_pos(1), vec![3, 4]);
        assert_eq!(by_pos(2), vec![1]);
        assert_eq!(by_pos(3), vec![1, 3, 4]);
        let order: Vec<usize> = c.iter().map(|c| c.index).collect();
        assert_eq!(order, vec![1, 1, 2, 3, 3, 3]);

        let pl = SolverConfig { c_pl: true, ..SolverConfig::bare() };
        let c = branch_fc2(&inst, &f, &pl, &mut dist);
        let mut seen = Vec::new();
        for cand in &c {
            if seen.last() != Some(&cand.index) {
                seen.push(cand.index);
            }
        }
        assert_eq!(seen, vec![2, 1, 3]);
    }

    #[test]
    fn rule_three_on_fixture() {
        let g = g_ex();
        let inst = SppcInstance::bare(&g, 0, 4, 3, 9);
        let cfg = SolverConfig { d_ms: true, ..SolverConfig::bare() };
        let f = failure(&inst, &cfg);
        let mut dist = DistanceTable::new(11);
        let c = branch_fc3(&inst, &f, &cfg, &mut dist);
        assert_eq!(c.len(), 6);
        assert_eq!(
            c.iter().map(|c| (c.list, c.vertex)).collect::<Vec<_>>(),
            vec![(1, 1), (1, 2), (1, 3), (2, 1), (2, 2), (2, 3)]
        );
    }

    #[test]
    fn rule_three_empty_pool_refutes() {
        let g = Graph::from_edges(3, &[(0, 1), (1, 2)]).unwrap();
        let spp = SppInstance::new(g, 0, 2, 2, 5).unwrap();
        let cfg = SolverConfig {
            trivial_detection: false,
            ..SolverConfig::named("d-ms").unwrap()
        };
        let r = solve(&spp, &cfg);
        assert_eq!(r.decision, Decision::No);
        assert_eq!(r.stats.nodes, 1);
        assert_eq!(r.stats.br3, 1);
    }

    #[test]
    fn interval_scoping() {
        let g = g_ex();
        let inst = SppcInstance::bare(&g, 0, 4, 2, 5);
        let mut store = IntervalStore::new();
        let outer = store.mark();
        let c = Candidate { list: 1, index: 1, vertex: 2, before: 0, after: 4 };
        assert!(record_forbidden_interval(&mut store, &inst, &c));
        // Both lists are (v1, v5), so the interval covers both.
        assert_eq!(store.iter().next().unwrap().lists, 0b11);
        assert_eq!(store.active_for(0, &inst.lists[0], 0), vec![2]);
        let inner = store.mark();
        store.push(ForbiddenInterval { a: 0, b: 4, x: 7, lists: 1 });
        store.release(inner);
        assert_eq!(store.len(), 1);
        assert!(is_forbidden(&store, &inst, &c));
        store.release(outer);
        assert!(store.is_empty());
    }

    #[test]
    fn interval_limited_to_equal_lists() {
        let g = g_ex();
        let mut inst = SppcInstance::bare(&g, 0, 4, 2, 5);
        inst.lists[0].insert(1, 5);
        let c = Candidate { list: 1, index: 1, vertex: 2, before: 0, after: 4 };
        record_forbidden_interval(&mut IntervalStore::new(), &inst, &c);
        let mut store = IntervalStore::new();
        record_forbidden_interval(&mut store, &inst, &c);
        assert_eq!(store.iter().next().unwrap().lists, 0b10);
    }

    #[test]
    fn fixture_solve() {
        let spp = SppInstance::new(g_ex(), 0, 4, 2, 5).unwrap();
        let cfg = SolverConfig { trivial_detection: false, ..SolverConfig::bare() };
        let r = solve(&spp, &cfg);
        assert_eq!(r.decision, Decision::Yes);
        assert!(r.stats.br1 >= 1);
        assert_eq!(r.stats.solved_by, SolvedBy::Search);
        // With d-ms the same break is caught one step earlier, as FC3.
        let cfg = SolverConfig { trivial_detection: false, ..SolverConfig::default() };
        let r = solve(&spp, &cfg);
        assert_eq!(r.decision, Decision::Yes);
        assert_eq!((r.stats.br1, r.stats.br3), (0, 1));
        let r = solve(&spp, &SolverConfig::default());
        assert_eq!(r.stats.solved_by, SolvedBy::TrivialYes);
    }

    #[test]
    fn path_graph_is_no_everywhere() {
        let g = Graph::from_edges(3, &[(0, 1), (1, 2)]).unwrap();
        let spp = SppInstance::new(g, 0, 2, 2, 5).unwrap();
        let r = solve(&spp, &SolverConfig::default());
        assert_eq!((r.decision, r.stats.solved_by), (Decision::No, SolvedBy::TrivialNo));
        let off = SolverConfig {
            preprocess: false,
            trivial_detection: false,
            ..SolverConfig::bare()
        };
        let r = solve(&spp, &off);
        assert_eq!(r.decision, Decision::No);
        assert_eq!(r.stats.nodes, 2);
    }

    #[test]
    fn timeout_is_reported() {
        let spp = SppInstance::new(g_ex(), 0, 4, 2, 5).unwrap();
        let cfg = SolverConfig {
            trivial_detection: false,
            timeout_ms: Some(0),
            ..SolverConfig::bare()
        };
        let r = solve(&spp, &cfg);
        assert_eq!(r.decision, Decision::Timeout);
        assert_eq!(r.stats.solved_by, SolvedBy::Timeout);
        assert!(r.witness.is_none());
    }
}
