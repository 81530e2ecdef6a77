//! Checkpoint-aware greedy construction of the `k` paths.
//!
//! Path `i` is assembled from shortest subpaths between consecutive entries
//! of its checkpoint list. Subpath `j` of path `i` is searched in the graph
//! with these vertices removed: internal vertices of paths `0..i`, vertices
//! of subpaths `0..j` of path `i`, every list entry of every list except the
//! two endpoints of the subpath, and (with forbidden intervals on) every
//! vertex forbidden between those endpoints.

use crate::flows;
use crate::graph::{Bfs, Graph, Path, VertexMask};
use crate::model::{IntervalStore, SppcInstance};
use crate::search::SolverConfig;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, serde::Serialize)]
pub enum FailureCondition {
    /// No subpath exists between two consecutive checkpoints.
    Fc1,
    /// The path under construction would exceed the length bound.
    Fc2,
    /// After fixing some paths, too few disjoint s-t paths remain.
    Fc3,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Failure {
    pub condition: FailureCondition,
    /// 0-based index of the path being built when the run broke.
    pub path_index: usize,
    /// 0-based index of the failing subpath; `None` for FC3.
    pub segment_index: Option<usize>,
    /// Paths completed before the failure.
    pub complete_paths: Vec<Path>,
    /// Subpaths of the broken path computed before the failing one.
    pub partial_subpaths: Vec<Path>,
    /// The overlong subpath that triggered FC2.
    pub failing_subpath: Option<Path>,
}

impl Failure {
    /// 1-based outer loop index at the break point.
    pub fn i_beta(&self) -> usize {
        self.path_index + 1
    }

    /// 1-based inner loop index at the break point.
    pub fn j_beta(&self) -> Option<usize> {
        self.segment_index.map(|j| j + 1)
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum GreedyOutcome {
    Success {
        paths: Vec<Path>,
        subpaths: Vec<Vec<Path>>,
    },
    Failure(Failure),
}

/// Per-run side counters.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq)]
pub struct GreedyCounters {
    /// Vertices hidden from a subpath search by a forbidden interval.
    pub bfi_masked: u64,
    pub dms_fired: u64,
}

/// Reusable scratch state for greedy runs on one graph.
pub struct Greedy {
    work: VertexMask,
    completed: VertexMask,
    bfs: Bfs,
    pub counters: GreedyCounters,
}

impl Greedy {
    pub fn new(g: &Graph) -> Self {
        Greedy {
            work: VertexMask::new(g.vertex_count()),
            completed: VertexMask::new(g.vertex_count()),
            bfs: Bfs::new(g.vertex_count()),
            counters: GreedyCounters::default(),
        }
    }

    pub fn run(
        &mut self,
        inst: &SppcInstance<'_>,
        intervals: Option<&IntervalStore>,
        cfg: &SolverConfig,
    ) -> GreedyOutcome {
        self.work.clear();
        self.completed.clear();
        let outcome = self.run_inner(inst, intervals, cfg);
        self.work.clear();
        self.completed.clear();
        outcome
    }

    fn separator_too_small(&mut self, inst: &SppcInstance<'_>, done: usize, cfg: &SolverConfig) -> bool {
        if !cfg.d_ms {
            return false;
        }
        if cfg.dms_bare_lists_only && !inst.lists[done..].iter().all(|l| l.is_bare()) {
            return false;
        }
        let need = inst.k - done;
        let flow = flows::disjoint_path_count(inst.graph, Some(&self.completed), inst.s, inst.t, need);
        if flow < need {
            self.counters.dms_fired += 1;
            true
        } else {
            false
        }
    }

    fn run_inner(
        &mut self,
        inst: &SppcInstance<'_>,
        intervals: Option<&IntervalStore>,
        cfg: &SolverConfig,
    ) -> GreedyOutcome {
        let g = inst.graph;
        let mut paths: Vec<Path> = Vec::with_capacity(inst.k);
        let mut all_subpaths: Vec<Vec<Path>> = Vec::with_capacity(inst.k);

        if !cfg.trivial_detection && self.separator_too_small(inst, 0, cfg) {
            return fc3(0, paths);
        }

        // Each list vertex is hidden once, even s and t which every list shares.
        for v in inst.all_list_vertices() {
            self.work.hide(v);
        }

        // The edge st is a path of its own and may be used only once.
        let mut direct_used = false;
        for (i, list) in inst.lists.iter().enumerate() {
            let entries = list.entries();
            let mut length = 0;
            let mut subpaths: Vec<Path> = Vec::with_capacity(list.segments());
            for j in 0..list.segments() {
                let (a, b) = (entries[j], entries[j + 1]);
                self.work.unhide(a);
                self.work.unhide(b);
                let forbidden = match intervals {
                    Some(store) => store.active_for(i, list, j),
                    None => Vec::new(),
                };
                for &x in &forbidden {
                    self.work.hide(x);
                }
                self.counters.bfi_masked += forbidden.len() as u64;
                let q = if direct_used && list.is_bare() {
                    self.bfs.path_avoiding_edge(g, &self.work, a, b)
                } else {
                    self.bfs.path(g, &self.work, a, b)
                };
                for &x in &forbidden {
                    self.work.unhide(x);
                }
                self.work.hide(a);
                self.work.hide(b);

                let fail = |condition, failing_subpath| {
                    GreedyOutcome::Failure(Failure {
                        condition,
                        path_index: i,
                        segment_index: Some(j),
                        complete_paths: paths.clone(),
                        partial_subpaths: subpaths.clone(),
                        failing_subpath,
                    })
                };
                let Some(q) = q else {
                    return fail(FailureCondition::Fc1, None);
                };
                if length + q.len() > inst.ell {
                    return fail(FailureCondition::Fc2, Some(q));
                }
                length += q.len();
                direct_used |= a == inst.s && b == inst.t && q.len() == 1;
                for &v in q.internal() {
                    self.work.hide(v);
                }
                subpaths.push(q);
            }

            // The subpath internals stay hidden in `work`; mirror them into
            // `completed` for the separator check.
            let mut full = vec![entries[0]];
            for q in &subpaths {
                full.extend_from_slice(&q.vertices()[1..]);
            }
            let path = Path(full);
            for &v in path.internal() {
                self.completed.hide(v);
            }
            // Checkpoints of this list become internal path vertices too;
            // they are already hidden through the list layer.
            paths.push(path);
            all_subpaths.push(subpaths);

            if i + 1 < inst.k && self.separator_too_small(inst, i + 1, cfg) {
                return fc3(i + 1, paths);
            }
        }
        GreedyOutcome::Success {
            paths,
            subpaths: all_subpaths,
        }
    }
}

fn fc3(path_index: usize, complete_paths: Vec<Path>) -> GreedyOutcome {
    GreedyOutcome::Failure(Failure {
        condition: FailureCondition::Fc3,
        path_index,
        segment_index: None,
        complete_paths,
        partial_subpaths: Vec::new(),
        failing_subpath: None,
    })
}

/// One greedy run with fresh scratch state.
pub fn run_greedy(inst: &SppcInstance<'_>, cfg: &SolverConfig) -> GreedyOutcome {
    Greedy::new(inst.graph).run(inst, None, cfg)
}

/// One greedy run honoring forbidden intervals.
pub fn run_greedy_with_intervals(
    inst: &SppcInstance<'_>,
    intervals: &IntervalStore,
    cfg: &SolverConfig,
) -> GreedyOutcome {
    Greedy::new(inst.graph).run(inst, Some(intervals), cfg)
}
