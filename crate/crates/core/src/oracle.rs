//! Brute-force reference answers: enumerate every short simple path, then
//! backtrack over internally disjoint combinations. Deliberately naive.

use serde::Serialize;

use crate::graph::{Graph, Path, Vertex};
use crate::model::{CheckpointList, Solution, SppInstance, SppcInstance};
use crate::search::Decision;

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct OracleAnswer {
    pub decision: Decision,
    pub witness: Option<Solution>,
    pub max_packing: Option<usize>,
}

/// All simple `s`-`t` paths with at most `ell` edges, in lexicographic
/// order of their vertex sequences.
pub fn enumerate_bounded_paths(g: &Graph, s: Vertex, t: Vertex, ell: usize) -> Vec<Path> {
    let mut out = Vec::new();
    if s == t {
        return out;
    }
    let mut on_path = vec![false; g.vertex_count()];
    let mut stack = vec![s];
    on_path[s] = true;
    dfs(g, t, ell, &mut stack, &mut on_path, &mut out);
    out
}

fn dfs(g: &Graph, t: Vertex, ell: usize, stack: &mut Vec<Vertex>, on_path: &mut [bool], out: &mut Vec<Path>) {
    let u = *stack.last().unwrap();
    if stack.len() > ell {
        return;
    }
    let mut nbrs = g.neighbors(u).to_vec();
    nbrs.sort_unstable();
    for w in nbrs {
        if on_path[w] {
            continue;
        }
        stack.push(w);
        if w == t {
            out.push(Path(stack.clone()));
        } else {
            on_path[w] = true;
            dfs(g, t, ell, stack, on_path, out);
            on_path[w] = false;
        }
        stack.pop();
    }
}

/// Internal vertices of a path as a bitset.
#[derive(Clone, Debug)]
struct Bits(Vec<u64>);

impl Bits {
    fn of(p: &Path, n: usize) -> Bits {
        let mut b = vec![0u64; n.div_ceil(64).max(1)];
        for &v in p.internal() {
            b[v / 64] |= 1 << (v % 64);
        }
        Bits(b)
    }

    fn disjoint(&self, other: &Bits) -> bool {
        self.0.iter().zip(&other.0).all(|(a, b)| a & b == 0)
    }
}

struct Packer<'a> {
    paths: &'a [Path],
    bits: Vec<Bits>,
}

impl<'a> Packer<'a> {
    fn new(paths: &'a [Path], n: usize) -> Self {
        let bits = paths.iter().map(|p| Bits::of(p, n)).collect();
        Packer { paths, bits }
    }

    /// Two distinct paths are compatible when their internals are disjoint;
    /// the direct edge has no internals but exists only once.
    fn compatible(&self, a: usize, b: usize) -> bool {
        a != b && self.bits[a].disjoint(&self.bits[b])
    }

    /// First `k`-subset (in lexicographic index order) of pairwise
    /// compatible paths.
    fn find(&self, k: usize) -> Option<Vec<usize>> {
        let all: Vec<usize> = (0..self.paths.len()).collect();
        let mut chosen = Vec::new();
        self.extend(&all, k, &mut chosen).then_some(chosen)
    }

    fn extend(&self, cands: &[usize], k: usize, chosen: &mut Vec<usize>) -> bool {
        if chosen.len() == k {
            return true;
        }
        let need = k - chosen.len();
        for (pos, &c) in cands.iter().enumerate() {
            if cands.len() - pos < need {
                return false;
            }
            let rest: Vec<usize> = cands[pos + 1..]
                .iter()
                .copied()
                .filter(|&d| self.compatible(c, d))
                .collect();
            if rest.len() + 1 < need {
                continue;
            }
            chosen.push(c);
            if self.extend(&rest, k, chosen) {
                return true;
            }
            chosen.pop();
        }
        false
    }

    fn max(&self) -> usize {
        let all: Vec<usize> = (0..self.paths.len()).collect();
        let mut best = 0;
        self.grow(&all, 0, &mut best);
        best
    }

    fn grow(&self, cands: &[usize], depth: usize, best: &mut usize) {
        *best = (*best).max(depth);
        for (pos, &c) in cands.iter().enumerate() {
            if depth + cands.len() - pos <= *best {
                return;
            }
            let rest: Vec<usize> = cands[pos + 1..]
                .iter()
                .copied()
                .filter(|&d| self.compatible(c, d))
                .collect();
            self.grow(&rest, depth + 1, best);
        }
    }

    /// Smallest total length over all `k`-subsets of compatible paths.
    fn min_total(&self, k: usize) -> Option<usize> {
        let all: Vec<usize> = (0..self.paths.len()).collect();
        let mut best = None;
        self.min_rec(&all, k, 0, 0, &mut best);
        best
    }

    fn min_rec(&self, cands: &[usize], k: usize, depth: usize, total: usize, best: &mut Option<usize>) {
        if depth == k {
            *best = Some(best.map_or(total, |b| b.min(total)));
            return;
        }
        for (pos, &c) in cands.iter().enumerate() {
            if cands.len() - pos < k - depth {
                return;
            }
            let t = total + self.paths[c].len();
            if best.is_some_and(|b| t >= b) {
                continue;
            }
            let rest: Vec<usize> = cands[pos + 1..]
                .iter()
                .copied()
                .filter(|&d| self.compatible(c, d))
                .collect();
            self.min_rec(&rest, k, depth + 1, t, best);
        }
    }
}

/// Exact answer for `inst`.
pub fn decide(inst: &SppInstance) -> OracleAnswer {
    let paths = enumerate_bounded_paths(&inst.graph, inst.s, inst.t, inst.ell);
    let packer = Packer::new(&paths, inst.graph.vertex_count());
    match packer.find(inst.k) {
        Some(idx) => OracleAnswer {
            decision: Decision::Yes,
            witness: Some(Solution {
                paths: idx.into_iter().map(|i| paths[i].clone()).collect(),
            }),
            max_packing: None,
        },
        None => OracleAnswer {
            decision: Decision::No,
            witness: None,
            max_packing: None,
        },
    }
}

/// Like [`decide`], also filling in the maximum packing size.
pub fn decide_with_max(inst: &SppInstance) -> OracleAnswer {
    let mut ans = decide(inst);
    ans.max_packing = Some(max_packing(&inst.graph, inst.s, inst.t, inst.ell));
    ans
}

/// Largest number of internally disjoint `s`-`t` paths of length at most
/// `ell`. With `ell >= n - 1` this is the unbounded Menger number.
pub fn max_packing(g: &Graph, s: Vertex, t: Vertex, ell: usize) -> usize {
    let paths = enumerate_bounded_paths(g, s, t, ell);
    Packer::new(&paths, g.vertex_count()).max()
}

/// Smallest total length of `k` internally disjoint `s`-`t` paths, with no
/// bound on individual lengths.
pub fn min_total_length(g: &Graph, s: Vertex, t: Vertex, k: usize) -> Option<usize> {
    let paths = enumerate_bounded_paths(g, s, t, g.vertex_count().saturating_sub(1));
    Packer::new(&paths, g.vertex_count()).min_total(k)
}

fn follows_list(p: &Path, list: &CheckpointList) -> bool {
    let mut next = 1;
    let cps = list.checkpoints();
    for &v in p.internal() {
        if next <= cps.len() && v == cps[next - 1] {
            next += 1;
        }
    }
    next == cps.len() + 1
}

/// Every solution of a checkpoint instance, path `i` following list `i`.
/// Stops after `limit` solutions.
pub fn sppc_solutions(inst: &SppcInstance<'_>, limit: usize) -> Vec<Solution> {
    let paths = enumerate_bounded_paths(inst.graph, inst.s, inst.t, inst.ell);
    let n = inst.graph.vertex_count();
    let bits: Vec<Bits> = paths.iter().map(|p| Bits::of(p, n)).collect();
    let per_list: Vec<Vec<usize>> = inst
        .lists
        .iter()
        .map(|l| (0..paths.len()).filter(|&i| follows_list(&paths[i], l)).collect())
        .collect();
    let mut out = Vec::new();
    let mut chosen = Vec::new();
    sppc_rec(&paths, &bits, &per_list, &mut chosen, &mut out, limit);
    out
}

fn sppc_rec(
    paths: &[Path],
    bits: &[Bits],
    per_list: &[Vec<usize>],
    chosen: &mut Vec<usize>,
    out: &mut Vec<Solution>,
    limit: usize,
) {
    if out.len() >= limit {
        return;
    }
    let i = chosen.len();
    if i == per_list.len() {
        out.push(Solution {
            paths: chosen.iter().map(|&c| paths[c].clone()).collect(),
        });
        return;
    }
    for &c in &per_list[i] {
        if chosen.iter().all(|&d| d != c && bits[c].disjoint(&bits[d])) {
            chosen.push(c);
            sppc_rec(paths, bits, per_list, chosen, out, limit);
            chosen.pop();
        }
    }
}

/// Exact answer for a checkpoint instance.
pub fn decide_sppc(inst: &SppcInstance<'_>) -> Option<Solution> {
    sppc_solutions(inst, 1).pop()
}
