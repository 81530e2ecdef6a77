//! Input reduction and root-level detection of trivial instances.

use serde::Serialize;
use thiserror::Error;

use crate::flows;
use crate::graph::{Bfs, Graph, Path, Vertex, VertexMask};
use crate::model::{CheckpointList, Solution, SppcInstance};

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum PreprocessError {
    #[error("checkpoint {0} does not survive reduction")]
    LostCheckpoint(Vertex),
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct ReductionReport {
    /// Kept original ids, ascending. Reduced id `i` is `kept[i]`.
    pub kept: Vec<Vertex>,
    pub n_before: usize,
    pub n_after: usize,
    pub m_before: usize,
    pub m_after: usize,
}

impl ReductionReport {
    pub fn to_original(&self, v: Vertex) -> Vertex {
        self.kept[v]
    }

    pub fn to_reduced(&self, v: Vertex) -> Option<Vertex> {
        self.kept.binary_search(&v).ok()
    }
}

/// A reduced graph plus the instance data translated into its ids.
#[derive(Clone, Debug)]
pub struct Reduction {
    pub graph: Graph,
    pub s: Vertex,
    pub t: Vertex,
    pub k: usize,
    pub ell: usize,
    pub lists: Vec<CheckpointList>,
    pub report: ReductionReport,
}

impl Reduction {
    pub fn instance(&self) -> SppcInstance<'_> {
        SppcInstance {
            graph: &self.graph,
            s: self.s,
            t: self.t,
            k: self.k,
            ell: self.ell,
            lists: self.lists.clone(),
        }
    }
}

/// Vertices that can lie on an `s`-`t` path of length at most `ell`:
/// `N_ell(s) ∩ N_ell(t) ∩ (N_{ell/2}(s) ∪ N_{ell/2}(t))`. The terminals are
/// always kept so the reduced instance stays well-formed even when
/// `dist(s, t) > ell`.
pub fn kept_vertices(g: &Graph, s: Vertex, t: Vertex, ell: usize) -> Vec<Vertex> {
    let mut bfs = Bfs::new(g.vertex_count());
    let (mut ds, mut dt) = (Vec::new(), Vec::new());
    bfs.distances_into(g, None, s, Some(ell), &mut ds);
    bfs.distances_into(g, None, t, Some(ell), &mut dt);
    let half = ell / 2;
    (0..g.vertex_count())
        .filter(|&v| {
            v == s
                || v == t
                || (ds[v] <= ell && dt[v] <= ell && (ds[v] <= half || dt[v] <= half))
        })
        .collect()
}

/// Neighborhood filter followed by iterated removal of vertices of degree
/// at most one (other than `s` and `t`). The answer is unchanged.
pub fn reduce(inst: &SppcInstance<'_>) -> Result<Reduction, PreprocessError> {
    let g = inst.graph;
    let (s, t) = (inst.s, inst.t);
    let kept = kept_vertices(g, s, t, inst.ell);

    let mut alive = vec![false; g.vertex_count()];
    for &v in &kept {
        alive[v] = true;
    }
    let mut degree = vec![0usize; g.vertex_count()];
    for &v in &kept {
        degree[v] = g.neighbors(v).iter().filter(|&&u| alive[u]).count();
    }
    let mut stack: Vec<Vertex> = kept
        .iter()
        .copied()
        .filter(|&v| v != s && v != t && degree[v] <= 1)
        .collect();
    while let Some(v) = stack.pop() {
        if !alive[v] {
            continue;
        }
        alive[v] = false;
        for &u in g.neighbors(v) {
            if alive[u] {
                degree[u] -= 1;
                if u != s && u != t && degree[u] == 1 {
                    stack.push(u);
                }
            }
        }
    }
    let kept: Vec<Vertex> = kept.into_iter().filter(|&v| alive[v]).collect();
    let reduced = g.induced(&kept);
    let report = ReductionReport {
        n_before: g.vertex_count(),
        n_after: reduced.vertex_count(),
        m_before: g.edge_count(),
        m_after: reduced.edge_count(),
        kept,
    };
    let map = |v: Vertex| report.to_reduced(v).ok_or(PreprocessError::LostCheckpoint(v));
    let lists = inst
        .lists
        .iter()
        .map(|l| {
            let entries = l.entries().iter().map(|&v| map(v)).collect::<Result<Vec<_>, _>>()?;
            Ok(CheckpointList::from_entries(entries).expect("relabeling preserves list shape"))
        })
        .collect::<Result<Vec<_>, PreprocessError>>()?;
    Ok(Reduction {
        s: map(s).expect("terminals are always kept"),
        t: map(t).expect("terminals are always kept"),
        k: inst.k,
        ell: inst.ell,
        lists,
        graph: reduced,
        report,
    })
}

/// Which root test decided the instance.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum Detector {
    /// `ell = 1`: only the direct edge can be used.
    EllOne,
    /// `ell = 2`: direct edge plus common neighbors.
    EllTwo,
    /// `k = 1`: one shortest path.
    SinglePath,
    /// Fewer than `k` disjoint paths exist at all.
    Separator,
    /// From `k` disjoint paths of minimum total length.
    MinTotalLength,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum TrivialOutcome {
    Yes(Solution, Detector),
    No(Detector),
    Unknown,
}

/// Root-only tests, applied in order. Assumes bare checkpoint lists.
pub fn detect_trivial(inst: &SppcInstance<'_>) -> TrivialOutcome {
    debug_assert!(inst.all_bare(), "trivial detection runs on bare lists only");
    let g = inst.graph;
    let (s, t, k, ell) = (inst.s, inst.t, inst.k, inst.ell);
    let adjacent = g.has_edge(s, t);

    if ell == 1 {
        return if k == 1 && adjacent {
            TrivialOutcome::Yes(
                Solution { paths: vec![Path(vec![s, t])] },
                Detector::EllOne,
            )
        } else {
            TrivialOutcome::No(Detector::EllOne)
        };
    }
    if ell == 2 {
        let mut paths = Vec::new();
        if adjacent {
            paths.push(Path(vec![s, t]));
        }
        for &c in g.neighbors(s) {
            if paths.len() == k {
                break;
            }
            if c != t && g.has_edge(c, t) {
                paths.push(Path(vec![s, c, t]));
            }
        }
        paths.truncate(k);
        return if paths.len() == k {
            TrivialOutcome::Yes(Solution { paths }, Detector::EllTwo)
        } else {
            TrivialOutcome::No(Detector::EllTwo)
        };
    }
    if k == 1 {
        let mask = VertexMask::new(g.vertex_count());
        return match Bfs::new(g.vertex_count()).path_bounded(g, &mask, s, t, ell) {
            Some(p) if p.len() <= ell => {
                TrivialOutcome::Yes(Solution { paths: vec![p] }, Detector::SinglePath)
            }
            _ => TrivialOutcome::No(Detector::SinglePath),
        };
    }
    if flows::disjoint_path_count(g, None, s, t, k) < k {
        return TrivialOutcome::No(Detector::Separator);
    }
    match flows::min_total_length_disjoint_paths(g, s, t, k).expect("terminals validated") {
        None => TrivialOutcome::No(Detector::Separator),
        Some(r) => {
            let longest = r.paths.iter().map(|p| p.len()).max().unwrap_or(0);
            if longest <= ell {
                TrivialOutcome::Yes(Solution { paths: r.paths }, Detector::MinTotalLength)
            } else if r.total_length > k * ell {
                TrivialOutcome::No(Detector::MinTotalLength)
            } else {
                TrivialOutcome::Unknown
            }
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::graph::tests::g_ex;
    use crate::model::validate_solution;

    fn with_pendant(at: Vertex) -> Graph {
        let g = g_ex();
        let mut edges: Vec<_> = g.edges().collect();
        edges.push((at, 11));
        Graph::from_edges(12, &edges).unwrap()
    }

    #[test]
    fn fixture_keeps_everything() {
        let g = g_ex();
        let inst = SppcInstance::bare(&g, 0, 4, 2, 5);
        let r = reduce(&inst).unwrap();
        assert_eq!(r.report.n_after, 11);
        assert_eq!(r.report.m_after, 12);
        assert_eq!(r.report.kept, (0..11).collect::<Vec<_>>());
    }

    #[test]
    fn pendant_far_from_both_terminals_is_dropped() {
        // v12 hangs off v7: distance 3 from v1 and 4 from v5, so with
        // ell = 5 it lies in neither radius-2 ball.
        let g = with_pendant(6);
        let inst = SppcInstance::bare(&g, 0, 4, 2, 5);
        assert!(!kept_vertices(&g, 0, 4, 5).contains(&11));
        let r = reduce(&inst).unwrap();
        assert_eq!(r.report.n_after, 11);
        assert_eq!(r.report.to_reduced(11), None);
    }

    #[test]
    fn pendant_removed_by_degree_rule() {
        // v12 hangs off v2: distance 2 from v1, so only the degree rule drops it.
        let g = with_pendant(1);
        assert!(kept_vertices(&g, 0, 4, 5).contains(&11));
        let inst = SppcInstance::bare(&g, 0, 4, 2, 5);
        let r = reduce(&inst).unwrap();
        assert_eq!(r.report.n_after, 11);
        assert_eq!(r.report.m_after, 12);
    }

    #[test]
    fn star_keeps_center_only() {
        // center 0, s = 1, t = 2, leaves 3..8
        let edges: Vec<_> = (1..8).map(|v| (0, v)).collect();
        let g = Graph::from_edges(8, &edges).unwrap();
        let kept = kept_vertices(&g, 1, 2, 2);
        assert_eq!(kept, vec![0, 1, 2]);
        let inst = SppcInstance::bare(&g, 1, 2, 1, 2);
        let r = reduce(&inst).unwrap();
        assert_eq!(r.report.kept, vec![0, 1, 2]);
    }

    #[test]
    fn degree_chain_peels_completely() {
        // s - a - t with a tail a - b - c: b and c are peeled in turn.
        let g = Graph::from_edges(5, &[(0, 1), (1, 2), (1, 3), (3, 4)]).unwrap();
        let inst = SppcInstance::bare(&g, 0, 2, 1, 6);
        let r = reduce(&inst).unwrap();
        assert_eq!(r.report.kept, vec![0, 1, 2]);
    }

    #[test]
    fn far_terminals_stay() {
        let g = Graph::from_edges(4, &[(0, 1), (1, 2), (2, 3)]).unwrap();
        let inst = SppcInstance::bare(&g, 0, 3, 1, 2);
        let r = reduce(&inst).unwrap();
        assert!(r.report.kept.contains(&0) && r.report.kept.contains(&3));
    }

    #[test]
    fn lost_checkpoint_is_an_error() {
        let g = with_pendant(6);
        let mut inst = SppcInstance::bare(&g, 0, 4, 1, 5);
        inst.lists[0].insert(1, 11);
        assert_eq!(reduce(&inst).unwrap_err(), PreprocessError::LostCheckpoint(11));
    }

    #[test]
    fn fixture_detections() {
        let g = g_ex();
        let inst = SppcInstance::bare(&g, 0, 4, 2, 5);
        match detect_trivial(&inst) {
            TrivialOutcome::Yes(sol, Detector::MinTotalLength) => {
                assert_eq!(validate_solution(&inst, &sol), Ok(()));
                assert!(sol.paths.iter().all(|p| p.len() == 5));
            }
            other => panic!("unexpected {other:?}"),
        }
        let inst = SppcInstance::bare(&g, 0, 4, 3, 9);
        assert_eq!(detect_trivial(&inst), TrivialOutcome::No(Detector::Separator));
        let inst = SppcInstance::bare(&g, 0, 4, 2, 4);
        assert_eq!(detect_trivial(&inst), TrivialOutcome::No(Detector::MinTotalLength));
    }

    #[test]
    fn fast_cases() {
        let tri = Graph::from_edges(4, &[(0, 1), (1, 2), (0, 2), (0, 3), (3, 2)]).unwrap();
        let yes1 = SppcInstance::bare(&tri, 0, 2, 1, 1);
        assert!(matches!(detect_trivial(&yes1), TrivialOutcome::Yes(_, Detector::EllOne)));
        let no1 = SppcInstance::bare(&tri, 0, 2, 2, 1);
        assert_eq!(detect_trivial(&no1), TrivialOutcome::No(Detector::EllOne));
        let yes2 = SppcInstance::bare(&tri, 0, 2, 3, 2);
        match detect_trivial(&yes2) {
            TrivialOutcome::Yes(sol, Detector::EllTwo) => {
                assert_eq!(validate_solution(&yes2, &sol), Ok(()))
            }
            other => panic!("unexpected {other:?}"),
        }
        let no2 = SppcInstance::bare(&tri, 0, 2, 4, 2);
        assert_eq!(detect_trivial(&no2), TrivialOutcome::No(Detector::EllTwo));
        let single = SppcInstance::bare(&tri, 1, 3, 1, 3);
        assert!(matches!(detect_trivial(&single), TrivialOutcome::Yes(_, Detector::SinglePath)));
        let g = g_ex();
        let single_no = SppcInstance::bare(&g, 0, 4, 1, 3);
        assert_eq!(detect_trivial(&single_no), TrivialOutcome::No(Detector::SinglePath));
    }
}
