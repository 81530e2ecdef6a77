//! Vertex-split digraph and the two unit-capacity flow routines built on it:
//! the maximum number of internally vertex-disjoint s-t paths (equal to the
//! minimum s-t vertex separator when s and t are not adjacent) and k
//! disjoint s-t paths of minimum total length.
//!
//! Each original vertex `v` becomes `v_in = 2v` and `v_out = 2v + 1` joined
//! by an internal arc; each edge `{u, v}` becomes `u_out -> v_in` and
//! `v_out -> u_in`. Flow runs from `s_out` to `t_in`.

use std::cmp::Reverse;
use std::collections::{BinaryHeap, VecDeque};

use thiserror::Error;

use crate::graph::{Graph, GraphError, Path, Vertex, VertexMask};

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum FlowError {
    #[error("source and sink coincide (vertex {0})")]
    SameTerminal(Vertex),
    #[error("k must be at least 1")]
    ZeroPaths,
    #[error(transparent)]
    Graph(#[from] GraphError),
}

#[inline]
pub fn node_in(v: Vertex) -> usize {
    2 * v
}

#[inline]
pub fn node_out(v: Vertex) -> usize {
    2 * v + 1
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum ArcKind {
    /// `v_in -> v_out`
    Internal(Vertex),
    /// `u_out -> v_in`
    Cross(Vertex, Vertex),
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct SplitArc {
    pub tail: usize,
    pub head: usize,
    pub kind: ArcKind,
}

/// The split digraph of an undirected graph. Every arc has capacity 1 and
/// cost 1.
#[derive(Clone, Debug)]
pub struct SplitDigraph {
    node_count: usize,
    arcs: Vec<SplitArc>,
}

impl SplitDigraph {
    pub fn node_count(&self) -> usize {
        self.node_count
    }

    pub fn arc_count(&self) -> usize {
        self.arcs.len()
    }

    pub fn arcs(&self) -> &[SplitArc] {
        &self.arcs
    }
}

pub fn split_transform(g: &Graph) -> SplitDigraph {
    let n = g.vertex_count();
    let mut arcs = Vec::with_capacity(n + 2 * g.edge_count());
    for v in 0..n {
        arcs.push(SplitArc {
            tail: node_in(v),
            head: node_out(v),
            kind: ArcKind::Internal(v),
        });
    }
    for u in 0..n {
        for &v in g.neighbors(u) {
            arcs.push(SplitArc {
                tail: node_out(u),
                head: node_in(v),
                kind: ArcKind::Cross(u, v),
            });
        }
    }
    SplitDigraph { node_count: 2 * n, arcs }
}

/// Residual network with paired arcs: arc `e` and its reverse `e ^ 1`.
struct Residual {
    out: Vec<Vec<usize>>,
    head: Vec<usize>,
    cap: Vec<u32>,
    cost: Vec<i64>,
}

impl Residual {
    /// Builds the residual network of the split digraph restricted to
    /// vertices outside `mask`.
    fn build(g: &Graph, mask: Option<&VertexMask>) -> Self {
        let split = split_transform(g);
        let live = |v: Vertex| mask.map_or(true, |m| !m.is_masked(v));
        let mut r = Residual {
            out: vec![Vec::new(); split.node_count()],
            head: Vec::with_capacity(2 * split.arc_count()),
            cap: Vec::with_capacity(2 * split.arc_count()),
            cost: Vec::with_capacity(2 * split.arc_count()),
        };
        for arc in split.arcs() {
            let keep = match arc.kind {
                ArcKind::Internal(v) => live(v),
                ArcKind::Cross(u, v) => live(u) && live(v),
            };
            if keep {
                r.push(arc.tail, arc.head);
            }
        }
        r
    }

    fn push(&mut self, tail: usize, head: usize) {
        let e = self.head.len();
        self.out[tail].push(e);
        self.head.push(head);
        self.cap.push(1);
        self.cost.push(1);
        self.out[head].push(e + 1);
        self.head.push(tail);
        self.cap.push(0);
        self.cost.push(-1);
    }

    fn tail(&self, e: usize) -> usize {
        self.head[e ^ 1]
    }

    fn augment(&mut self, path: &[usize]) {
        for &e in path {
            self.cap[e] -= 1;
            self.cap[e ^ 1] += 1;
        }
    }

    /// Arc ids of a BFS augmenting path from `src` to `dst`, if any.
    fn bfs_path(&self, src: usize, dst: usize) -> Option<Vec<usize>> {
        let mut via = vec![usize::MAX; self.out.len()];
        let mut seen = vec![false; self.out.len()];
        let mut queue = VecDeque::new();
        seen[src] = true;
        queue.push_back(src);
        while let Some(x) = queue.pop_front() {
            if x == dst {
                break;
            }
            for &e in &self.out[x] {
                let y = self.head[e];
                if self.cap[e] > 0 && !seen[y] {
                    seen[y] = true;
                    via[y] = e;
                    queue.push_back(y);
                }
            }
        }
        if !seen[dst] {
            return None;
        }
        let mut path = Vec::new();
        let mut cur = dst;
        while cur != src {
            let e = via[cur];
            path.push(e);
            cur = self.tail(e);
        }
        path.reverse();
        Some(path)
    }
}

/// Maximum number of internally vertex-disjoint `s`-`t` paths in `g`
/// minus `mask`, stopping early once `limit` is reached. A direct `s`-`t`
/// edge counts as one path.
pub fn disjoint_path_count(
    g: &Graph,
    mask: Option<&VertexMask>,
    s: Vertex,
    t: Vertex,
    limit: usize,
) -> usize {
    if mask.is_some_and(|m| m.is_masked(s) || m.is_masked(t)) {
        return 0;
    }
    let mut r = Residual::build(g, mask);
    let (src, dst) = (node_out(s), node_in(t));
    let mut flow = 0;
    while flow < limit {
        match r.bfs_path(src, dst) {
            Some(p) => {
                r.augment(&p);
                flow += 1;
            }
            None => break,
        }
    }
    flow
}

/// Max-flow value from `s_out` to `t_in` in the split digraph.
///
/// For non-adjacent terminals this is the size of a minimum s-t vertex
/// separator. When `s` and `t` are adjacent no separator exists; the value
/// returned is still the Menger count of disjoint paths, with the direct
/// edge contributing one.
pub fn min_vertex_separator_size(g: &Graph, s: Vertex, t: Vertex) -> Result<usize, FlowError> {
    g.check_vertex(s)?;
    g.check_vertex(t)?;
    if s == t {
        return Err(FlowError::SameTerminal(s));
    }
    Ok(disjoint_path_count(g, None, s, t, usize::MAX))
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct DisjointPathsResult {
    /// Sorted by length, then lexicographically.
    pub paths: Vec<Path>,
    /// Sum of original path lengths.
    pub total_length: usize,
    /// Total length of the corresponding paths in the split digraph.
    pub split_length: usize,
}

/// `k` internally vertex-disjoint `s`-`t` paths of minimum total length, by
/// successive shortest augmenting paths with node potentials on the split
/// digraph. `None` if fewer than `k` disjoint paths exist.
pub fn min_total_length_disjoint_paths(
    g: &Graph,
    s: Vertex,
    t: Vertex,
    k: usize,
) -> Result<Option<DisjointPathsResult>, FlowError> {
    g.check_vertex(s)?;
    g.check_vertex(t)?;
    if s == t {
        return Err(FlowError::SameTerminal(s));
    }
    if k == 0 {
        return Err(FlowError::ZeroPaths);
    }
    let mut r = Residual::build(g, None);
    let (src, dst) = (node_out(s), node_in(t));
    let nodes = r.out.len();
    let mut potential = vec![0i64; nodes];
    let mut split_length = 0i64;

    for _ in 0..k {
        // Dijkstra on reduced costs; all reduced costs are non-negative.
        let mut dist = vec![i64::MAX; nodes];
        let mut via = vec![usize::MAX; nodes];
        let mut heap = BinaryHeap::new();
        dist[src] = 0;
        heap.push(Reverse((0i64, src)));
        while let Some(Reverse((d, x))) = heap.pop() {
            if d > dist[x] {
                continue;
            }
            for &e in &r.out[x] {
                if r.cap[e] == 0 {
                    continue;
                }
                let y = r.head[e];
                let reduced = r.cost[e] + potential[x] - potential[y];
                debug_assert!(reduced >= 0, "negative reduced cost {reduced}");
                let nd = d + reduced;
                if nd < dist[y] {
                    dist[y] = nd;
                    via[y] = e;
                    heap.push(Reverse((nd, y)));
                }
            }
        }
        if dist[dst] == i64::MAX {
            return Ok(None);
        }
        let cap_d = dist[dst];
        for v in 0..nodes {
            // Unreached nodes get the sink distance so reduced costs on
            // arcs into the reached set stay non-negative.
            potential[v] += dist[v].min(cap_d);
        }
        let mut path = Vec::new();
        let mut cur = dst;
        while cur != src {
            let e = via[cur];
            path.push(e);
            cur = r.tail(e);
        }
        split_length += path.iter().map(|&e| r.cost[e]).sum::<i64>();
        r.augment(&path);
    }

    let paths = decompose(&r, g, s, t, k);
    let split_length = usize::try_from(split_length).expect("total cost is positive");
    let total_length: usize = paths.iter().map(Path::len).sum();
    debug_assert_eq!(2 * total_length, split_length + k);
    Ok(Some(DisjointPathsResult {
        paths,
        total_length,
        split_length,
    }))
}

/// Walks flow-carrying forward arcs from `s_out`. Each split node other than
/// the terminals carries at most one unit, so every walk is a simple path;
/// flow cycles not reachable from the source are ignored.
fn decompose(r: &Residual, g: &Graph, s: Vertex, t: Vertex, k: usize) -> Vec<Path> {
    let n = g.vertex_count();
    let carries = |e: usize| e % 2 == 0 && r.cap[e] == 0;
    let mut used = vec![false; r.head.len()];
    let mut paths = Vec::with_capacity(k);
    let (src, dst) = (node_out(s), node_in(t));
    for _ in 0..k {
        let mut verts = vec![s];
        let mut seen = vec![false; n];
        seen[s] = true;
        let mut cur = src;
        while cur != dst {
            let e = r.out[cur]
                .iter()
                .copied()
                .find(|&e| carries(e) && !used[e])
                .expect("flow conservation");
            used[e] = true;
            cur = r.head[e];
            if cur % 2 == 0 {
                let v = cur / 2;
                assert!(!seen[v], "flow walk revisits vertex {v}");
                seen[v] = true;
                verts.push(v);
            }
        }
        paths.push(Path(verts));
    }
    paths.sort_by(|a, b| a.len().cmp(&b.len()).then_with(|| a.cmp(b)));
    paths
}
