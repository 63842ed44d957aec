//! Shared helpers for the integration tests.
#![allow(dead_code)]

use std::path::PathBuf;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use tourlink::toolkit::load;
use tourlink::{Tournament, VertexSet};

pub fn fixture(name: &str) -> Tournament {
    let path = PathBuf::from(env!("CARGO_MANIFEST_DIR"))
        .join("tests/fixtures")
        .join(name);
    load(&path).unwrap_or_else(|e| panic!("{}: {e}", path.display()))
}

/// Stalled instances: file, `k`, and a pairing for which the greedy router
/// stalls when started from the identity order.
pub const STALL_FIXTURES: [(&str, usize, [usize; 3]); 4] = [
    ("stall_k2_n12.trn", 2, [1, 0, 0]),
    ("stall_k2_n14.trn", 2, [1, 0, 0]),
    ("stall_k3_n20_a.trn", 3, [1, 0, 2]),
    ("stall_k3_n20_b.trn", 3, [2, 1, 0]),
];

/// `k` distinct random vertices of `0..n` avoiding `taken`.
pub fn pick_distinct(
    rng: &mut ChaCha8Rng,
    n: usize,
    k: usize,
    taken: &mut VertexSet,
) -> Vec<usize> {
    let mut out = Vec::with_capacity(k);
    while out.len() < k {
        let v = rng.gen_range(0..n);
        if taken.insert(v) {
            out.push(v);
        }
    }
    out
}

/// A tournament whose peeling provably leaves `core` as `T[V]`.
#[derive(Debug)]
pub struct Planted {
    pub t: Tournament,
    pub x0: Vec<usize>,
    pub y0: Vec<usize>,
    /// Host id of core vertex `j`; ascending, so `T[V]` reproduces `core`.
    pub core_ids: Vec<usize>,
}

/// Embeds `core` (on `m` vertices) into a larger tournament for `k` terminal
/// pairs so that peeling step `i` removes `u_i` and core vertex `i`:
///
/// - `u_i` dominates `u_j` for `j < i`, core vertex `i`, a random `width`-set
///   `W_i` of the bulk, and every terminal; everything else dominates `u_i`;
/// - `W_i` dominates core vertex `i`, so that vertex has out-degree 0 inside
///   `N⁺(u_i)` and no common out-neighbour with `u_i`;
/// - all remaining pairs are oriented at random.
///
/// With `bulk` comfortably larger than `2·width`, `u_i` has the unique
/// minimum out-degree `1 + width` in each residual tournament.
pub fn plant(core: &Tournament, k: usize, bulk: usize, width: usize, seed: u64) -> Planted {
    let m = core.n();
    let terms = 2 * k;
    let core0 = terms;
    let u0 = core0 + m;
    let h0 = u0 + m;
    let n = h0 + bulk;
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let widths: Vec<VertexSet> = (0..m)
        .map(|_| {
            let mut w = VertexSet::new(bulk);
            pick_distinct(&mut rng, bulk, width, &mut w);
            w
        })
        .collect();
    let random: Vec<Vec<bool>> = (0..n)
        .map(|_| (0..n).map(|_| rng.gen()).collect())
        .collect();
    #[derive(Clone, Copy)]
    enum Role {
        Terminal,
        Core(usize),
        U(usize),
        Bulk(usize),
    }
    let role = |v: usize| {
        if v < core0 {
            Role::Terminal
        } else if v < u0 {
            Role::Core(v - core0)
        } else if v < h0 {
            Role::U(v - u0)
        } else {
            Role::Bulk(v - h0)
        }
    };
    // Orientation for a < b: Some(true) means a→b.
    let fixed = |a: usize, b: usize| -> Option<bool> {
        use Role::*;
        let forward = |x: Role, y: Role| -> Option<bool> {
            match (x, y) {
                (Core(i), Core(j)) => Some(core.dominates(i, j)),
                (U(i), U(j)) => Some(i > j),
                (U(i), Core(j)) => Some(i == j),
                (U(i), Bulk(h)) => Some(widths[i].contains(h)),
                (U(_), Terminal) => Some(true),
                (Bulk(h), Core(j)) if widths[j].contains(h) => Some(true),
                _ => None,
            }
        };
        forward(role(a), role(b)).or_else(|| forward(role(b), role(a)).map(|f| !f))
    };
    let t = Tournament::from_pair_fn(n, |a, b| fixed(a, b).unwrap_or(random[a][b]));
    Planted {
        t,
        x0: (0..k).collect(),
        y0: (k..2 * k).collect(),
        core_ids: (core0..u0).collect(),
    }
}
