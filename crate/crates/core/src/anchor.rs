//! Anchoring pairs: disjoint `k`-sets `A`, `B` such that for every pairing
//! `π` there are disjoint dipaths `a_i ⇝ b_{π(i)}`.
//!
//! A candidate comes from a local median order (`A` = first `k`, `B` = last `k`
//! in the order's reversed indexing). Routing runs an alternating greedy of
//! short paths through the middle of the order; if it ever stalls, the stalled
//! source/target neighbourhoods contain a complete domination pair, which
//! routes every pairing by single arcs. Certificates are therefore lazy: a
//! median candidate either routes, or escalates exactly once.

use serde::Serialize;

use crate::error::{Error, Result};
use crate::flow::PathSystem;
use crate::ordering::{check_interval_domination, local_median_order, Ordering};
use crate::tournament::{Dipath, Tournament};
use crate::vertex_set::VertexSet;

/// `⌈8.5k − 6⌉`, the order size from which median candidates are guaranteed
/// to route or yield a domination pair.
pub fn anchor_threshold(k: usize) -> usize {
    assert!(k >= 1);
    (17 * k - 11) / 2
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
#[serde(tag = "kind", rename_all = "kebab-case")]
pub enum CertificateKind {
    /// `a` = first `k` of `ordering`, `b[i]` = `ordering[n − 1 − i]`, and
    /// `middle` the rest.
    Median {
        ordering: Ordering,
        middle: VertexSet,
    },
    /// Every arc between the sides goes from `a` to `b`.
    Domination,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct AnchorCertificate {
    pub kind: CertificateKind,
    /// Anchoring side, as an ordered tuple.
    pub a: Vec<usize>,
    /// Anchored side, as an ordered tuple.
    pub b: Vec<usize>,
}

impl AnchorCertificate {
    pub fn k(&self) -> usize {
        self.a.len()
    }

    pub fn is_domination(&self) -> bool {
        matches!(self.kind, CertificateKind::Domination)
    }

    /// A domination certificate, checking disjointness and every `a→b` arc.
    pub fn domination(t: &Tournament, a: Vec<usize>, b: Vec<usize>) -> Result<Self> {
        if a.len() != b.len() || a.is_empty() {
            return Err(Error::input(
                "domination sides must be nonempty and equal-sized",
            ));
        }
        let sa = to_set(t.n(), &a)?;
        let sb = to_set(t.n(), &b)?;
        if !sa.is_disjoint(&sb) {
            return Err(Error::input("domination sides overlap"));
        }
        for &x in &a {
            for &y in &b {
                if !t.dominates(x, y) {
                    return Err(Error::input(format!(
                        "missing arc {x}→{y} in domination pair"
                    )));
                }
            }
        }
        Ok(AnchorCertificate {
            kind: CertificateKind::Domination,
            a,
            b,
        })
    }

    /// A median candidate over a caller-supplied order, which must satisfy
    /// interval domination.
    pub fn median(t: &Tournament, k: usize, ordering: Ordering) -> Result<Self> {
        let n = t.n();
        if k == 0 {
            return Err(Error::input("k must be positive"));
        }
        if n < 2 * k {
            return Err(Error::precondition(
                "anchor candidate",
                format!("n = {n} is smaller than 2k = {}", 2 * k),
            ));
        }
        if ordering.len() != n {
            return Err(Error::input("order does not cover the tournament"));
        }
        let violations = check_interval_domination(t, ordering.perm())?;
        if let Some(v) = violations.first() {
            return Err(Error::precondition(
                "anchor candidate",
                format!("order violates interval domination at ({}, {})", v.i, v.j),
            ));
        }
        let perm = ordering.perm();
        let a = perm[..k].to_vec();
        let b: Vec<usize> = (0..k).map(|i| perm[n - 1 - i]).collect();
        let middle = VertexSet::from_vertices(n, perm[k..n - k].iter().copied());
        check_median_degree_bounds(t, k, &a, &b, &middle)?;
        Ok(AnchorCertificate {
            kind: CertificateKind::Median { ordering, middle },
            a,
            b,
        })
    }

    pub fn map(&self, to_host: &[usize]) -> (Vec<usize>, Vec<usize>) {
        (
            self.a.iter().map(|&v| to_host[v]).collect(),
            self.b.iter().map(|&v| to_host[v]).collect(),
        )
    }
}

fn to_set(n: usize, vs: &[usize]) -> Result<VertexSet> {
    let mut s = VertexSet::new(n);
    for &v in vs {
        if v >= n {
            return Err(Error::input(format!("vertex {v} out of range")));
        }
        if !s.insert(v) {
            return Err(Error::input(format!("vertex {v} repeated")));
        }
    }
    Ok(s)
}

/// For the `i`-th (1-based) source, `2·d⁺_Z(x_i) ≥ n − 3k + i`; symmetrically
/// for sinks with in-degrees. Both follow from interval domination.
fn check_median_degree_bounds(
    t: &Tournament,
    k: usize,
    a: &[usize],
    b: &[usize],
    middle: &VertexSet,
) -> Result<()> {
    let n = t.n();
    for i in 1..=k {
        let need = (n + i).saturating_sub(3 * k);
        let out = t.out_degree_within(a[i - 1], middle);
        if 2 * out < need {
            return Err(Error::precondition(
                "anchor candidate",
                format!("2·d⁺_Z(x_{i}) = {} < n − 3k + i = {need}", 2 * out),
            ));
        }
        let inn = t.in_degree_within(b[i - 1], middle);
        if 2 * inn < need {
            return Err(Error::precondition(
                "anchor candidate",
                format!("2·d⁻_Z(y_{i}) = {} < n − 3k + i = {need}", 2 * inn),
            ));
        }
    }
    Ok(())
}

#[derive(Debug, Clone, Default)]
pub struct AnchorOptions {
    /// Minimum tournament size; defaults to [`anchor_threshold`]. Smaller values
    /// are accepted for experiments, but routing may then fail its size checks.
    pub threshold: Option<usize>,
    /// Starting order for the local search (identity by default).
    pub seed_order: Option<Ordering>,
}

pub fn find_anchored_candidate(t: &Tournament, k: usize) -> Result<AnchorCertificate> {
    find_anchored_candidate_with(t, k, &AnchorOptions::default())
}

pub fn find_anchored_candidate_with(
    t: &Tournament,
    k: usize,
    options: &AnchorOptions,
) -> Result<AnchorCertificate> {
    if k == 0 {
        return Err(Error::input("k must be positive"));
    }
    let threshold = options.threshold.unwrap_or_else(|| anchor_threshold(k));
    if t.n() < threshold {
        return Err(Error::precondition(
            "anchor candidate",
            format!("n = {} is below the threshold {threshold}", t.n()),
        ));
    }
    let ordering = local_median_order(t, options.seed_order.as_ref());
    AnchorCertificate::median(t, k, ordering)
}

/// Where the alternating greedy got stuck.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct Stall {
    /// The 1-based step that failed (`h + 1`).
    pub step: usize,
    pub source: usize,
    pub target: usize,
    /// Middle vertices still unused when the step failed.
    pub pool: VertexSet,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct GreedyState {
    pub h: usize,
    pub paths: Vec<Dipath>,
    pub used: VertexSet,
    pub stall: Option<Stall>,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum RouteOutcome {
    /// Path `i` runs from `a[i]` to `b[π(i)]`.
    Routed(PathSystem),
    /// The greedy stalled; retry with `certificate`, which never stalls.
    Escalated {
        certificate: AnchorCertificate,
        state: GreedyState,
    },
}

fn check_permutation(pi: &[usize], k: usize) -> Result<()> {
    if pi.len() != k {
        return Err(Error::input(format!(
            "permutation has {} entries, expected {k}",
            pi.len()
        )));
    }
    let mut seen = vec![false; k];
    for &p in pi {
        if p >= k || std::mem::replace(&mut seen[p], true) {
            return Err(Error::input(format!("not a permutation of 0..{k}")));
        }
    }
    Ok(())
}

/// A dipath `src ⇝ dst` of length at most 3 whose interior lies in `pool`:
/// a direct arc, else the smallest middle vertex, else the lexicographically
/// smallest interior pair.
pub fn greedy_short_path(
    t: &Tournament,
    src: usize,
    dst: usize,
    pool: &VertexSet,
) -> Option<Dipath> {
    assert_ne!(src, dst);
    if t.dominates(src, dst) {
        return Some(Dipath::new(vec![src, dst]));
    }
    let mut pool = pool.clone();
    pool.remove(src);
    pool.remove(dst);
    let into_dst = t.in_neighbors(dst).intersection(&pool);
    let firsts = t.out_neighbors(src).intersection(&pool);
    if let Some(z) = firsts.first_common(&into_dst) {
        return Some(Dipath::new(vec![src, z, dst]));
    }
    for a in firsts.iter() {
        if let Some(b) = t.out_neighbors(a).first_common(&into_dst) {
            return Some(Dipath::new(vec![src, a, b, dst]));
        }
    }
    None
}

/// Disjoint dipaths `a_i ⇝ b_{π(i)}` for the requested pairing.
///
/// Domination certificates answer with single arcs. Median certificates run
/// the alternating greedy: odd steps take the lowest unused source `x_i` and
/// look for a path to `y_{π(i)}`, even steps take the lowest unused sink `y_i`
/// and look for a path from `x_{π⁻¹(i)}`; every path has length ≤ 3 and an
/// interior drawn from the unused middle.
pub fn route(t: &Tournament, cert: &AnchorCertificate, pi: &[usize]) -> Result<RouteOutcome> {
    let k = cert.k();
    check_permutation(pi, k)?;
    let middle = match &cert.kind {
        CertificateKind::Domination => {
            let paths: Vec<Dipath> = (0..k)
                .map(|i| Dipath::new(vec![cert.a[i], cert.b[pi[i]]]))
                .collect();
            let mut ps = PathSystem::from_paths(paths);
            ps.permutation = Some(pi.to_vec());
            return Ok(RouteOutcome::Routed(ps));
        }
        CertificateKind::Median { middle, .. } => middle,
    };

    let mut inverse = vec![0; k];
    for (i, &p) in pi.iter().enumerate() {
        inverse[p] = i;
    }
    let mut source_done = vec![false; k];
    let mut sink_done = vec![false; k];
    let mut by_source: Vec<Option<Dipath>> = vec![None; k];
    let mut state = GreedyState {
        h: 0,
        paths: Vec::new(),
        used: VertexSet::new(t.n()),
        stall: None,
    };
    for step in 1..=k {
        let (xi, yi) = if step % 2 == 1 {
            let i = source_done.iter().position(|d| !d).expect("unused source");
            (i, pi[i])
        } else {
            let i = sink_done.iter().position(|d| !d).expect("unused sink");
            (inverse[i], i)
        };
        let (src, dst) = (cert.a[xi], cert.b[yi]);
        let pool = middle.difference(&state.used);
        match greedy_short_path(t, src, dst, &pool) {
            Some(path) => {
                for &v in path.vertices() {
                    state.used.insert(v);
                }
                state.paths.push(path.clone());
                state.h += 1;
                source_done[xi] = true;
                sink_done[yi] = true;
                by_source[xi] = Some(path);
            }
            None => {
                state.stall = Some(Stall {
                    step,
                    source: src,
                    target: dst,
                    pool,
                });
                let certificate = extract_domination_pair(t, &state, k)?;
                return Ok(RouteOutcome::Escalated { certificate, state });
            }
        }
    }
    let paths: Vec<Dipath> = by_source
        .into_iter()
        .map(|p| p.expect("all routed"))
        .collect();
    let mut ps = PathSystem::from_paths(paths);
    ps.permutation = Some(pi.to_vec());
    Ok(RouteOutcome::Routed(ps))
}

/// From a stalled greedy state, the domination pair hidden in the stalled
/// ends' neighbourhoods.
///
/// With `X*` the out-neighbours of the stalled source in the pool and `Y*` the
/// in-neighbours of the stalled target, a stall means `X* ∩ Y* = ∅` and no arc
/// runs from `X* ∪ {source}` to `Y* ∪ {target}`; in a tournament every arc
/// between them then points back, so the `k` smallest of `Y* ∪ {target}`
/// dominate the `k` smallest of `X* ∪ {source}`.
pub fn extract_domination_pair(
    t: &Tournament,
    state: &GreedyState,
    k: usize,
) -> Result<AnchorCertificate> {
    const STEP: &str = "domination extraction";
    let stall = state
        .stall
        .as_ref()
        .ok_or_else(|| Error::precondition(STEP, "greedy state has no stall"))?;
    if state.h + 1 > k {
        return Err(Error::precondition(
            STEP,
            format!("h = {} > k − 1 = {}", state.h, k - 1),
        ));
    }
    let mut out_side = t.out_neighbors(stall.source).intersection(&stall.pool);
    let mut in_side = t.in_neighbors(stall.target).intersection(&stall.pool);
    if !out_side.is_disjoint(&in_side) {
        return Err(Error::precondition(STEP, "X* ∩ Y* ≠ ∅"));
    }
    out_side.insert(stall.source);
    in_side.insert(stall.target);
    for x in out_side.iter() {
        if let Some(y) = t.out_neighbors(x).first_common(&in_side) {
            return Err(Error::precondition(
                STEP,
                format!("A(X* ∪ {{x}}, Y* ∪ {{y}}) ≠ ∅: arc {x}→{y}"),
            ));
        }
    }
    if out_side.len() < k {
        return Err(Error::precondition(
            STEP,
            format!("|X* ∪ {{x}}| = {} < k = {k}", out_side.len()),
        ));
    }
    if in_side.len() < k {
        return Err(Error::precondition(
            STEP,
            format!("|Y* ∪ {{y}}| = {} < k = {k}", in_side.len()),
        ));
    }
    AnchorCertificate::domination(t, in_side.smallest(k), out_side.smallest(k))
}
