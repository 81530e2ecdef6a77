//! Seeded Erdős–Rényi–Gilbert graphs.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::graph::{Graph, GraphBuilder};

/// `G(n, p)`: every unordered pair becomes an edge independently with
/// probability `p`. Pairs are visited in lexicographic order, so the result
/// depends only on `(n, p, seed)`.
pub fn gnp(n: usize, p: f64, seed: u64) -> Graph {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    gnp_with(n, p, &mut rng)
}

pub fn gnp_with<R: Rng>(n: usize, p: f64, rng: &mut R) -> Graph {
    let p = p.clamp(0.0, 1.0);
    let mut b = GraphBuilder::new(n);
    for u in 0..n {
        for v in u + 1..n {
            // gen_bool(1.0) is always true and gen_bool(0.0) always false.
            if rng.gen_bool(p) {
                b.add_edge(u, v).expect("fresh pair");
            }
        }
    }
    b.build()
}
