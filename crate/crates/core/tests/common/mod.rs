//! Seeded random instances shared by the integration tests.

#![allow(dead_code)]

use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use spp::generate::gnp;
use spp::graph::{distances_from, Graph, VertexMask};
use spp::SppInstance;

pub const PS: [f64; 3] = [0.15, 0.25, 0.35];
pub const KS: [usize; 2] = [2, 3];
pub const ELLS: [usize; 3] = [5, 6, 7];

#[derive(Clone, Debug)]
pub struct Case {
    pub id: String,
    pub inst: SppInstance,
}

/// Terminals at distance 2..=ell when such a pair exists, else any pair.
fn pick_terminals(g: &Graph, ell: usize, rng: &mut ChaCha8Rng) -> (usize, usize) {
    let n = g.vertex_count();
    let mask = VertexMask::new(n);
    let mut pairs = Vec::new();
    for s in 0..n {
        let d = distances_from(g, &mask, s, Some(ell)).expect("vertex in range");
        for (&t, &dist) in &d {
            if t > s && (2..=ell).contains(&dist) {
                pairs.push((s, t));
            }
        }
    }
    match pairs.choose(rng) {
        Some(&p) => p,
        None => {
            let s = rng.gen_range(0..n);
            (s, (s + 1 + rng.gen_range(0..n - 1)) % n)
        }
    }
}

/// `per_combo` graphs for every (p, k, ell) combination, n cycling through
/// 8..=18.
pub fn suite(per_combo: usize) -> Vec<Case> {
    let mut out = Vec::new();
    let mut idx = 0u64;
    for &p in &PS {
        for &k in &KS {
            for &ell in &ELLS {
                for _ in 0..per_combo {
                    let n = 8 + (idx % 11) as usize;
                    let seed = 1000 + idx;
                    let g = gnp(n, p, seed);
                    let mut rng = ChaCha8Rng::seed_from_u64(seed);
                    let (s, t) = pick_terminals(&g, ell, &mut rng);
                    out.push(Case {
                        id: format!("gnp(n={n},p={p},seed={seed}) s={} t={} k={k} ell={ell}", s + 1, t + 1),
                        inst: SppInstance::new(g, s, t, k, ell).expect("valid instance"),
                    });
                    idx += 1;
                }
            }
        }
    }
    out
}

/// Small random graphs with a random terminal pair.
pub fn small_graphs(count: usize, max_n: usize, seed: u64) -> Vec<(Graph, usize, usize)> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    (0..count)
        .map(|_| {
            let n = rng.gen_range(4..=max_n);
            let p = rng.gen_range(0.15..0.5);
            let g = gnp(n, p, rng.gen());
            let s = rng.gen_range(0..n);
            let t = (s + rng.gen_range(1..n)) % n;
            (g, s, t)
        })
        .collect()
}
