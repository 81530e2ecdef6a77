//! Problem instances, checkpoint lists, forbidden intervals and solution
//! validation.

use std::collections::BTreeSet;
use std::fmt;

use serde::Serialize;
use thiserror::Error;

use crate::graph::{Graph, Path, Vertex};

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum InstanceError {
    #[error("terminal {0} out of range (n = {1})")]
    TerminalOutOfRange(Vertex, usize),
    #[error("s and t must differ")]
    SameTerminals,
    #[error("k must be at least 1")]
    ZeroK,
    #[error("ell must be at least 1")]
    ZeroEll,
}

/// Are there `k` internally vertex-disjoint `s`-`t` paths of length at most
/// `ell` in `graph`?
#[derive(Clone, Debug)]
pub struct SppInstance {
    pub graph: Graph,
    pub s: Vertex,
    pub t: Vertex,
    pub k: usize,
    pub ell: usize,
}

impl SppInstance {
    pub fn new(graph: Graph, s: Vertex, t: Vertex, k: usize, ell: usize) -> Result<Self, InstanceError> {
        let n = graph.vertex_count();
        for v in [s, t] {
            if v >= n {
                return Err(InstanceError::TerminalOutOfRange(v, n));
            }
        }
        if s == t {
            return Err(InstanceError::SameTerminals);
        }
        if k == 0 {
            return Err(InstanceError::ZeroK);
        }
        if ell == 0 {
            return Err(InstanceError::ZeroEll);
        }
        Ok(SppInstance { graph, s, t, k, ell })
    }
}

/// Ordered terminal list: `s`, the checkpoints, `t`.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct CheckpointList(Vec<Vertex>);

impl CheckpointList {
    pub fn bare(s: Vertex, t: Vertex) -> Self {
        CheckpointList(vec![s, t])
    }

    /// Builds a list, checking the anchoring and distinctness invariants.
    pub fn from_entries(entries: Vec<Vertex>) -> Option<Self> {
        let list = CheckpointList(entries);
        list.is_well_formed().then_some(list)
    }

    pub fn entries(&self) -> &[Vertex] {
        &self.0
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    /// Number of subpaths an `L`-path decomposes into.
    pub fn segments(&self) -> usize {
        self.0.len() - 1
    }

    pub fn is_bare(&self) -> bool {
        self.0.len() == 2
    }

    pub fn checkpoints(&self) -> &[Vertex] {
        &self.0[1..self.0.len() - 1]
    }

    pub fn position(&self, v: Vertex) -> Option<usize> {
        self.0.iter().position(|&x| x == v)
    }

    /// Inserts `v` so that it lands at 0-based index `idx`, between the
    /// former entries `idx - 1` and `idx`.
    pub fn insert(&mut self, idx: usize, v: Vertex) {
        assert!(idx >= 1 && idx < self.0.len(), "insert index {idx} outside the interior");
        self.0.insert(idx, v);
    }

    fn is_well_formed(&self) -> bool {
        if self.0.len() < 2 {
            return false;
        }
        let (s, t) = (self.0[0], self.0[self.0.len() - 1]);
        if s == t {
            return false;
        }
        let inner = self.checkpoints();
        let set: BTreeSet<_> = inner.iter().collect();
        set.len() == inner.len() && !set.contains(&s) && !set.contains(&t)
    }

    /// More than `ell + 1` entries means no `L`-path of length `ell` exists.
    pub fn is_trivially_too_long(&self, ell: usize) -> bool {
        self.0.len() > ell + 1
    }
}

impl fmt::Display for CheckpointList {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", Path(self.0.clone()))
    }
}

pub fn is_list_trivially_too_long(list: &CheckpointList, ell: usize) -> bool {
    list.is_trivially_too_long(ell)
}

/// A search-tree node: the base instance plus one checkpoint list per path.
#[derive(Clone, Debug)]
pub struct SppcInstance<'g> {
    pub graph: &'g Graph,
    pub s: Vertex,
    pub t: Vertex,
    pub k: usize,
    pub ell: usize,
    pub lists: Vec<CheckpointList>,
}

impl<'g> SppcInstance<'g> {
    pub fn from_spp(spp: &'g SppInstance) -> Self {
        Self::bare(&spp.graph, spp.s, spp.t, spp.k, spp.ell)
    }

    pub fn bare(graph: &'g Graph, s: Vertex, t: Vertex, k: usize, ell: usize) -> Self {
        SppcInstance {
            graph,
            s,
            t,
            k,
            ell,
            lists: vec![CheckpointList::bare(s, t); k],
        }
    }

    pub fn is_checkpoint(&self, v: Vertex) -> bool {
        self.lists.iter().any(|l| l.entries().contains(&v))
    }

    /// Every vertex in any list, terminals included.
    pub fn all_list_vertices(&self) -> BTreeSet<Vertex> {
        self.lists.iter().flat_map(|l| l.entries().iter().copied()).collect()
    }

    pub fn all_bare(&self) -> bool {
        self.lists.iter().all(CheckpointList::is_bare)
    }

    /// Internal checkpoints are globally distinct and lists are anchored.
    pub fn lists_consistent(&self) -> bool {
        let mut seen = BTreeSet::new();
        self.lists.len() == self.k
            && self.lists.iter().all(|l| {
                l.is_well_formed()
                    && l.entries()[0] == self.s
                    && l.entries()[l.len() - 1] == self.t
                    && l.checkpoints().iter().all(|&v| seen.insert(v))
            })
    }
}

pub fn from_spp(spp: &SppInstance) -> SppcInstance<'_> {
    SppcInstance::from_spp(spp)
}

/// `(a, b, x)`: inserting `x` between consecutive checkpoints `a` and `b`
/// cannot lead to a solution in the current scope.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub struct ForbiddenInterval {
    pub a: Vertex,
    pub b: Vertex,
    pub x: Vertex,
    /// Bit `i` set when the interval applies to list `i`.
    pub lists: u64,
}

impl ForbiddenInterval {
    pub fn applies_to(&self, list: usize) -> bool {
        list < 64 && self.lists & (1 << list) != 0
    }
}

/// Stack of forbidden intervals with scope marks. A search node takes a
/// mark on entry and truncates back to it on exit, so intervals pushed by
/// a node are visible to its later children and their subtrees only.
#[derive(Clone, Debug, Default)]
pub struct IntervalStore {
    items: Vec<ForbiddenInterval>,
}

impl IntervalStore {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn mark(&self) -> usize {
        self.items.len()
    }

    pub fn release(&mut self, mark: usize) {
        self.items.truncate(mark);
    }

    pub fn push(&mut self, iv: ForbiddenInterval) {
        self.items.push(iv);
    }

    pub fn iter(&self) -> impl Iterator<Item = &ForbiddenInterval> {
        self.items.iter()
    }

    pub fn len(&self) -> usize {
        self.items.len()
    }

    pub fn is_empty(&self) -> bool {
        self.items.is_empty()
    }

    /// Vertices forbidden on the subpath between `list[j]` and `list[j+1]`
    /// of list number `list_idx`: those `x` with an interval `(a, b, x)`
    /// where `a` sits at or before `j` and `b` at or after `j + 1`.
    pub fn active_for(&self, list_idx: usize, list: &CheckpointList, j: usize) -> Vec<Vertex> {
        let mut out = Vec::new();
        for iv in &self.items {
            if !iv.applies_to(list_idx) {
                continue;
            }
            let (Some(pa), Some(pb)) = (list.position(iv.a), list.position(iv.b)) else {
                continue;
            };
            if pa <= j && pb > j {
                out.push(iv.x);
            }
        }
        out
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Solution {
    pub paths: Vec<Path>,
}

#[derive(Clone, Debug, PartialEq, Eq, Error)]
pub enum Violation {
    #[error("expected {expected} paths, got {got}")]
    PathCount { expected: usize, got: usize },
    #[error("path {0} is not a simple path in the graph")]
    NotAPath(usize),
    #[error("path {0} does not run from s to t")]
    WrongEnds(usize),
    #[error("path {path} has length {len} > {ell}")]
    TooLong { path: usize, len: usize, ell: usize },
    #[error("paths {a} and {b} share internal vertex {vertex}")]
    NotDisjoint { a: usize, b: usize, vertex: Vertex },
    #[error("path {0} does not visit its checkpoints in order")]
    Checkpoints(usize),
    #[error("paths {0} and {1} both use the direct edge")]
    DirectEdgeTwice(usize, usize),
}

impl Serialize for Path {
    fn serialize<S: serde::Serializer>(&self, ser: S) -> Result<S::Ok, S::Error> {
        ser.collect_seq(self.0.iter().map(|v| v + 1))
    }
}

/// Checks `sol` against `inst` definitionally: edges against the original
/// graph, checkpoint order by scanning each path.
pub fn validate_solution(inst: &SppcInstance<'_>, sol: &Solution) -> Result<(), Violation> {
    if sol.paths.len() != inst.k {
        return Err(Violation::PathCount {
            expected: inst.k,
            got: sol.paths.len(),
        });
    }
    for (i, p) in sol.paths.iter().enumerate() {
        if !p.is_valid_in(inst.graph) {
            return Err(Violation::NotAPath(i));
        }
        if p.first() != inst.s || p.last() != inst.t {
            return Err(Violation::WrongEnds(i));
        }
        if p.len() > inst.ell {
            return Err(Violation::TooLong {
                path: i,
                len: p.len(),
                ell: inst.ell,
            });
        }
        if let Some(list) = inst.lists.get(i) {
            if !visits_in_order(p, list) {
                return Err(Violation::Checkpoints(i));
            }
        }
    }
    let mut direct = sol.paths.iter().enumerate().filter(|(_, p)| p.len() == 1).map(|(i, _)| i);
    if let (Some(a), Some(b)) = (direct.next(), direct.next()) {
        return Err(Violation::DirectEdgeTwice(a, b));
    }
    let mut owner = vec![usize::MAX; inst.graph.vertex_count()];
    for (i, p) in sol.paths.iter().enumerate() {
        for &v in p.internal() {
            if owner[v] != usize::MAX {
                return Err(Violation::NotDisjoint {
                    a: owner[v],
                    b: i,
                    vertex: v,
                });
            }
            owner[v] = i;
        }
    }
    Ok(())
}

fn visits_in_order(p: &Path, list: &CheckpointList) -> bool {
    let mut last = 0;
    for &c in list.checkpoints() {
        match p.internal().iter().position(|&v| v == c) {
            Some(pos) if pos + 1 > last => last = pos + 1,
            _ => return false,
        }
    }
    true
}
