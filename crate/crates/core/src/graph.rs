//! Simple undirected graphs, masked views and breadth-first search.
//!
//! Vertices are dense ids `0..n`. The text format used on disk is 1-based.

use std::collections::{BTreeMap, BTreeSet, VecDeque};
use std::fmt;
use std::io::{BufRead, Write};

use thiserror::Error;

pub type Vertex = usize;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum GraphError {
    #[error("vertex {0} out of range (n = {1})")]
    OutOfRange(Vertex, usize),
    #[error("vertex {0} is masked")]
    Masked(Vertex),
    #[error("self-loop on vertex {0}")]
    SelfLoop(Vertex),
    #[error("duplicate edge {{{0}, {1}}}")]
    DuplicateEdge(Vertex, Vertex),
}

#[derive(Debug, Error)]
pub enum ParseError {
    #[error("line {line}: {msg}")]
    Syntax { line: usize, msg: String },
    #[error("line {line}: {source}")]
    Graph {
        line: usize,
        #[source]
        source: GraphError,
    },
    #[error("expected {expected} edge lines, found {found}")]
    EdgeCount { expected: usize, found: usize },
    #[error("missing header line \"<n> <m>\"")]
    MissingHeader,
    #[error(transparent)]
    Io(#[from] std::io::Error),
}

/// Immutable simple undirected graph with sorted adjacency lists.
#[derive(Clone, PartialEq, Eq)]
pub struct Graph {
    adj: Vec<Vec<Vertex>>,
    edge_count: usize,
}

impl fmt::Debug for Graph {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("Graph")
            .field("n", &self.vertex_count())
            .field("m", &self.edge_count)
            .finish()
    }
}

impl Graph {
    /// Builds a graph from 0-based edges. Rejects loops and duplicates.
    pub fn from_edges(n: usize, edges: &[(Vertex, Vertex)]) -> Result<Self, GraphError> {
        let mut b = GraphBuilder::new(n);
        for &(u, v) in edges {
            b.add_edge(u, v)?;
        }
        Ok(b.build())
    }

    pub fn empty(n: usize) -> Self {
        Graph {
            adj: vec![Vec::new(); n],
            edge_count: 0,
        }
    }

    #[inline]
    pub fn vertex_count(&self) -> usize {
        self.adj.len()
    }

    #[inline]
    pub fn edge_count(&self) -> usize {
        self.edge_count
    }

    #[inline]
    pub fn neighbors(&self, v: Vertex) -> &[Vertex] {
        &self.adj[v]
    }

    #[inline]
    pub fn degree(&self, v: Vertex) -> usize {
        self.adj[v].len()
    }

    pub fn has_edge(&self, u: Vertex, v: Vertex) -> bool {
        u < self.adj.len() && self.adj[u].binary_search(&v).is_ok()
    }

    pub fn check_vertex(&self, v: Vertex) -> Result<(), GraphError> {
        if v < self.vertex_count() {
            Ok(())
        } else {
            Err(GraphError::OutOfRange(v, self.vertex_count()))
        }
    }

    /// Edges `(u, v)` with `u < v`, in lexicographic order.
    pub fn edges(&self) -> impl Iterator<Item = (Vertex, Vertex)> + '_ {
        self.adj
            .iter()
            .enumerate()
            .flat_map(|(u, ns)| ns.iter().filter(move |&&v| v > u).map(move |&v| (u, v)))
    }

    /// Induced subgraph on `keep` (must be sorted, deduplicated). Ids are
    /// renumbered in ascending order, so relative order is preserved.
    pub fn induced(&self, keep: &[Vertex]) -> Graph {
        let mut new_id = vec![usize::MAX; self.vertex_count()];
        for (i, &v) in keep.iter().enumerate() {
            new_id[v] = i;
        }
        let mut adj = Vec::with_capacity(keep.len());
        let mut m2 = 0;
        for &v in keep {
            let ns: Vec<Vertex> = self.adj[v]
                .iter()
                .filter_map(|&u| (new_id[u] != usize::MAX).then_some(new_id[u]))
                .collect();
            m2 += ns.len();
            adj.push(ns);
        }
        Graph {
            adj,
            edge_count: m2 / 2,
        }
    }

    /// Parses the text format: `#` comments, a `<n> <m>` header, then `m`
    /// lines `<u> <v>` with 1-based ids.
    pub fn read_text<R: BufRead>(reader: R) -> Result<Self, ParseError> {
        let mut builder: Option<GraphBuilder> = None;
        let mut expected = 0;
        let mut found = 0;
        for (idx, line) in reader.lines().enumerate() {
            let line = line?;
            let lineno = idx + 1;
            let trimmed = line.trim();
            if trimmed.is_empty() || trimmed.starts_with('#') {
                continue;
            }
            let nums = parse_pair(trimmed).map_err(|msg| ParseError::Syntax { line: lineno, msg })?;
            match builder.as_mut() {
                None => {
                    expected = nums.1;
                    builder = Some(GraphBuilder::new(nums.0));
                }
                Some(b) => {
                    if found == expected {
                        return Err(ParseError::Syntax {
                            line: lineno,
                            msg: format!("more than the declared {expected} edges"),
                        });
                    }
                    let (u, v) = nums;
                    if u == 0 || v == 0 || u > b.n || v > b.n {
                        return Err(ParseError::Syntax {
                            line: lineno,
                            msg: format!("vertex ids must lie in 1..={}", b.n),
                        });
                    }
                    b.add_edge(u - 1, v - 1).map_err(|source| ParseError::Graph {
                        line: lineno,
                        source: one_based(source),
                    })?;
                    found += 1;
                }
            }
        }
        let b = builder.ok_or(ParseError::MissingHeader)?;
        if found != expected {
            return Err(ParseError::EdgeCount { expected, found });
        }
        Ok(b.build())
    }

    pub fn parse_text(text: &str) -> Result<Self, ParseError> {
        Self::read_text(text.as_bytes())
    }

    pub fn write_text<W: Write>(&self, mut w: W) -> std::io::Result<()> {
        writeln!(w, "{} {}", self.vertex_count(), self.edge_count())?;
        for (u, v) in self.edges() {
            writeln!(w, "{} {}", u + 1, v + 1)?;
        }
        Ok(())
    }

    pub fn to_text(&self) -> String {
        let mut buf = Vec::new();
        self.write_text(&mut buf).expect("writing to a Vec cannot fail");
        String::from_utf8(buf).expect("ascii output")
    }
}

fn one_based(e: GraphError) -> GraphError {
    match e {
        GraphError::SelfLoop(v) => GraphError::SelfLoop(v + 1),
        GraphError::DuplicateEdge(u, v) => GraphError::DuplicateEdge(u + 1, v + 1),
        other => other,
    }
}

fn parse_pair(line: &str) -> Result<(usize, usize), String> {
    let mut it = line.split_whitespace();
    let mut next = |what: &str| -> Result<usize, String> {
        let tok = it.next().ok_or_else(|| format!("missing {what}"))?;
        tok.parse::<usize>()
            .map_err(|_| format!("expected a non-negative integer, got {tok:?}"))
    };
    let a = next("first number")?;
    let b = next("second number")?;
    if let Some(extra) = it.next() {
        return Err(format!("unexpected trailing token {extra:?}"));
    }
    Ok((a, b))
}

/// Incremental construction with duplicate and loop rejection.
pub struct GraphBuilder {
    n: usize,
    adj: Vec<BTreeSet<Vertex>>,
    m: usize,
}

impl GraphBuilder {
    pub fn new(n: usize) -> Self {
        GraphBuilder {
            n,
            adj: vec![BTreeSet::new(); n],
            m: 0,
        }
    }

    pub fn add_edge(&mut self, u: Vertex, v: Vertex) -> Result<(), GraphError> {
        if u >= self.n {
            return Err(GraphError::OutOfRange(u, self.n));
        }
        if v >= self.n {
            return Err(GraphError::OutOfRange(v, self.n));
        }
        if u == v {
            return Err(GraphError::SelfLoop(u));
        }
        if !self.adj[u].insert(v) {
            return Err(GraphError::DuplicateEdge(u.min(v), u.max(v)));
        }
        self.adj[v].insert(u);
        self.m += 1;
        Ok(())
    }

    pub fn build(self) -> Graph {
        Graph {
            adj: self.adj.into_iter().map(|s| s.into_iter().collect()).collect(),
            edge_count: self.m,
        }
    }
}

/// Set of vertices treated as absent. Layers are additive: each `hide`
/// increments a per-vertex counter and `unhide` decrements it, so nested
/// scopes can mask overlapping sets and restore them in any order.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct VertexMask {
    hidden: Vec<u32>,
}

impl VertexMask {
    pub fn new(n: usize) -> Self {
        VertexMask { hidden: vec![0; n] }
    }

    pub fn from_vertices(n: usize, vs: impl IntoIterator<Item = Vertex>) -> Self {
        let mut m = Self::new(n);
        for v in vs {
            m.hide(v);
        }
        m
    }

    #[inline]
    pub fn is_masked(&self, v: Vertex) -> bool {
        self.hidden[v] > 0
    }

    #[inline]
    pub fn hide(&mut self, v: Vertex) {
        self.hidden[v] += 1;
    }

    #[inline]
    pub fn unhide(&mut self, v: Vertex) {
        debug_assert!(self.hidden[v] > 0, "unhide of visible vertex {v}");
        self.hidden[v] -= 1;
    }

    pub fn len(&self) -> usize {
        self.hidden.len()
    }

    pub fn is_empty(&self) -> bool {
        self.hidden.is_empty()
    }

    pub fn masked_vertices(&self) -> impl Iterator<Item = Vertex> + '_ {
        self.hidden
            .iter()
            .enumerate()
            .filter(|(_, &c)| c > 0)
            .map(|(v, _)| v)
    }

    pub fn clear(&mut self) {
        self.hidden.iter_mut().for_each(|c| *c = 0);
    }
}

/// A simple path: distinct vertices, consecutive ones adjacent.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Path(pub Vec<Vertex>);

impl Path {
    pub fn len(&self) -> usize {
        self.0.len().saturating_sub(1)
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn vertices(&self) -> &[Vertex] {
        &self.0
    }

    pub fn first(&self) -> Vertex {
        self.0[0]
    }

    pub fn last(&self) -> Vertex {
        *self.0.last().expect("paths are non-empty")
    }

    /// Vertices other than the two ends.
    pub fn internal(&self) -> &[Vertex] {
        if self.0.len() <= 2 {
            &[]
        } else {
            &self.0[1..self.0.len() - 1]
        }
    }

    /// Checks the path invariants against `g` (unmasked).
    pub fn is_valid_in(&self, g: &Graph) -> bool {
        if self.0.is_empty() || self.0.iter().any(|&v| v >= g.vertex_count()) {
            return false;
        }
        let distinct: BTreeSet<_> = self.0.iter().collect();
        distinct.len() == self.0.len() && self.0.windows(2).all(|w| g.has_edge(w[0], w[1]))
    }
}

impl fmt::Display for Path {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "(")?;
        for (i, v) in self.0.iter().enumerate() {
            if i > 0 {
                write!(f, ",")?;
            }
            write!(f, "{}", v + 1)?;
        }
        write!(f, ")")
    }
}

const UNSEEN: usize = usize::MAX;

/// Reusable BFS scratch space. Neighbors are scanned in ascending id order
/// and parents are fixed on first discovery, so results are deterministic.
#[derive(Clone, Debug)]
pub struct Bfs {
    parent: Vec<Vertex>,
    dist: Vec<usize>,
    touched: Vec<Vertex>,
    queue: VecDeque<Vertex>,
}

impl Bfs {
    pub fn new(n: usize) -> Self {
        Bfs {
            parent: vec![UNSEEN; n],
            dist: vec![UNSEEN; n],
            touched: Vec::new(),
            queue: VecDeque::new(),
        }
    }

    fn reset(&mut self, n: usize) {
        if self.dist.len() != n {
            *self = Bfs::new(n);
            return;
        }
        for &v in &self.touched {
            self.dist[v] = UNSEEN;
            self.parent[v] = UNSEEN;
        }
        self.touched.clear();
        self.queue.clear();
    }

    fn visit(&mut self, v: Vertex, d: usize, p: Vertex) {
        self.dist[v] = d;
        self.parent[v] = p;
        self.touched.push(v);
        self.queue.push_back(v);
    }

    /// Shortest `a`-`b` path in `g` minus `mask`, or `None` if disconnected.
    /// Endpoints are not checked against the mask; callers that need that
    /// guarantee use [`shortest_path`].
    pub fn path(&mut self, g: &Graph, mask: &VertexMask, a: Vertex, b: Vertex) -> Option<Path> {
        self.path_bounded(g, mask, a, b, usize::MAX)
    }

    /// Like [`Bfs::path`] but gives up once the frontier passes `max_len`.
    pub fn path_bounded(
        &mut self,
        g: &Graph,
        mask: &VertexMask,
        a: Vertex,
        b: Vertex,
        max_len: usize,
    ) -> Option<Path> {
        self.search(g, mask, a, b, max_len, false)
    }

    /// Shortest `a`-`b` path that does not use the edge `ab` itself.
    pub fn path_avoiding_edge(&mut self, g: &Graph, mask: &VertexMask, a: Vertex, b: Vertex) -> Option<Path> {
        self.search(g, mask, a, b, usize::MAX, true)
    }

    fn search(
        &mut self,
        g: &Graph,
        mask: &VertexMask,
        a: Vertex,
        b: Vertex,
        max_len: usize,
        skip_direct: bool,
    ) -> Option<Path> {
        self.reset(g.vertex_count());
        self.visit(a, 0, a);
        if a == b {
            return Some(Path(vec![a]));
        }
        while let Some(u) = self.queue.pop_front() {
            let du = self.dist[u];
            if du >= max_len {
                break;
            }
            for &w in g.neighbors(u) {
                if self.dist[w] != UNSEEN || mask.is_masked(w) || (skip_direct && u == a && w == b) {
                    continue;
                }
                self.visit(w, du + 1, u);
                if w == b {
                    return Some(self.trace(a, b));
                }
            }
        }
        None
    }

    fn trace(&self, a: Vertex, b: Vertex) -> Path {
        let mut out = vec![b];
        let mut cur = b;
        while cur != a {
            cur = self.parent[cur];
            out.push(cur);
        }
        out.reverse();
        Path(out)
    }

    /// Fills `out[v]` with the distance from `src` for every vertex within
    /// `radius`, `usize::MAX` elsewhere.
    pub fn distances_into(
        &mut self,
        g: &Graph,
        mask: Option<&VertexMask>,
        src: Vertex,
        radius: Option<usize>,
        out: &mut Vec<usize>,
    ) {
        self.reset(g.vertex_count());
        let radius = radius.unwrap_or(usize::MAX);
        self.visit(src, 0, src);
        while let Some(u) = self.queue.pop_front() {
            let du = self.dist[u];
            if du >= radius {
                continue;
            }
            for &w in g.neighbors(u) {
                if self.dist[w] != UNSEEN || mask.is_some_and(|m| m.is_masked(w)) {
                    continue;
                }
                self.visit(w, du + 1, u);
            }
        }
        out.clear();
        out.resize(g.vertex_count(), UNSEEN);
        for &v in &self.touched {
            out[v] = self.dist[v];
        }
    }
}

/// Shortest path between `a` and `b` in the masked view of `g`.
pub fn shortest_path(
    g: &Graph,
    mask: &VertexMask,
    a: Vertex,
    b: Vertex,
) -> Result<Option<Path>, GraphError> {
    for v in [a, b] {
        g.check_vertex(v)?;
        if mask.is_masked(v) {
            return Err(GraphError::Masked(v));
        }
    }
    Ok(Bfs::new(g.vertex_count()).path(g, mask, a, b))
}

/// BFS distances from `src`, restricted to `radius` when given.
pub fn distances_from(
    g: &Graph,
    mask: &VertexMask,
    src: Vertex,
    radius: Option<usize>,
) -> Result<BTreeMap<Vertex, usize>, GraphError> {
    g.check_vertex(src)?;
    if mask.is_masked(src) {
        return Err(GraphError::Masked(src));
    }
    let mut out = Vec::new();
    Bfs::new(g.vertex_count()).distances_into(g, Some(mask), src, radius, &mut out);
    Ok(out
        .into_iter()
        .enumerate()
        .filter(|&(_, d)| d != UNSEEN)
        .collect())
}

/// The closed `r`-neighborhood of `src` in the unmasked graph.
pub fn neighborhood(g: &Graph, src: Vertex, r: usize) -> Result<BTreeSet<Vertex>, GraphError> {
    let mask = VertexMask::new(g.vertex_count());
    Ok(distances_from(g, &mask, src, Some(r))?.into_keys().collect())
}

/// All-pairs distances computed lazily, one BFS per queried source.
#[derive(Clone, Debug)]
pub struct DistanceTable {
    rows: Vec<Option<Vec<usize>>>,
    bfs: Bfs,
}

impl DistanceTable {
    pub fn new(n: usize) -> Self {
        DistanceTable {
            rows: vec![None; n],
            bfs: Bfs::new(n),
        }
    }

    /// Distance in the unmasked graph; `usize::MAX` if disconnected.
    pub fn dist(&mut self, g: &Graph, a: Vertex, b: Vertex) -> usize {
        if self.rows[a].is_none() {
            if let Some(row) = &self.rows[b] {
                return row[a];
            }
            let mut row = Vec::new();
            self.bfs.distances_into(g, None, a, None, &mut row);
            self.rows[a] = Some(row);
        }
        self.rows[a].as_ref().expect("row just filled")[b]
    }
}

/// The eleven-vertex worked-example graph, 0-based (v1 = 0, ..., v11 = 10).
/// Two disjoint v1-v5 paths of length 5 exist, but the greedy shortest path
/// v1..v5 of length 4 blocks both.
pub fn example_graph() -> Graph {
    let e = [
        (1, 2),
        (2, 3),
        (3, 4),
        (4, 5),
        (1, 6),
        (6, 7),
        (7, 8),
        (8, 4),
        (2, 9),
        (9, 10),
        (10, 11),
        (11, 5),
    ];
    let edges: Vec<_> = e.iter().map(|&(u, v)| (u - 1, v - 1)).collect();
    Graph::from_edges(11, &edges).expect("static edge list")
}
