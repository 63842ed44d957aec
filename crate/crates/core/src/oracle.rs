//! Exhaustive checkers for desk-scale instances.
//!
//! Each oracle takes its size limit explicitly and refuses larger inputs with
//! [`Error::Budget`] instead of truncating the search. Nothing here shares code
//! with the constructive modules beyond the tournament type itself.

use serde::Serialize;

use crate::error::{Error, Result};
use crate::flow::{DigraphView, PathSystem};
use crate::ordering::Ordering;
use crate::tournament::{Dipath, Tournament};
use crate::vertex_set::VertexSet;

/// Default vertex limit for the path-family backtracking.
pub const LINKED_BUDGET: usize = 14;
/// Vertex limit for [`brute_force_is_k_linked`].
pub const K_LINKED_BUDGET: usize = 10;
/// Live-vertex limit for [`brute_force_vertex_connectivity`].
pub const CONNECTIVITY_BUDGET: usize = 12;
/// Vertex limit for [`exact_median_order`].
pub const MEDIAN_BUDGET: usize = 12;
/// X-side limit for [`brute_force_max_deficiency`].
pub const DEFICIENCY_BUDGET: usize = 12;
/// Live-vertex limit for the set-to-set path and cut oracles.
pub const MENGER_BUDGET: usize = 9;

fn over_budget(what: &str, size: usize, budget: usize) -> Result<()> {
    if size > budget {
        return Err(Error::Budget(format!(
            "{what}: size {size} exceeds budget {budget}"
        )));
    }
    Ok(())
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum ViolationKind {
    Disjointness,
    Endpoint,
    MissingArc,
    Membership,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct Violation {
    pub kind: ViolationKind,
    pub detail: String,
}

impl Violation {
    fn new(kind: ViolationKind, detail: String) -> Self {
        Violation { kind, detail }
    }
}

/// Every reason `ps` fails to be a disjoint system of dipaths joining
/// `expected_pairs` in order.
pub fn validate_path_system(
    t: &Tournament,
    expected_pairs: &[(usize, usize)],
    ps: &PathSystem,
) -> Vec<Violation> {
    use ViolationKind::*;
    let n = t.n();
    let mut out = Vec::new();
    if ps.paths.len() != expected_pairs.len() {
        out.push(Violation::new(
            Endpoint,
            format!(
                "{} paths for {} pairs",
                ps.paths.len(),
                expected_pairs.len()
            ),
        ));
    }
    let mut owner: Vec<Option<usize>> = vec![None; n];
    for (i, path) in ps.paths.iter().enumerate() {
        let vs = path.vertices();
        if let Some(&v) = vs.iter().find(|&&v| v >= n) {
            out.push(Violation::new(
                Membership,
                format!("path {i}: vertex {v} outside 0..{n}"),
            ));
            continue;
        }
        if let Some(&(s, d)) = expected_pairs.get(i) {
            if vs.first() != Some(&s) || vs.last() != Some(&d) {
                out.push(Violation::new(
                    Endpoint,
                    format!(
                        "path {i} runs {:?} → {:?}, expected {s} → {d}",
                        vs.first(),
                        vs.last()
                    ),
                ));
            }
        }
        for w in vs.windows(2) {
            if w[0] == w[1] || !t.dominates(w[0], w[1]) {
                out.push(Violation::new(
                    MissingArc,
                    format!("path {i}: no arc {} → {}", w[0], w[1]),
                ));
            }
        }
        for &v in vs {
            match owner[v] {
                Some(j) if j == i => out.push(Violation::new(
                    Disjointness,
                    format!("path {i} repeats vertex {v}"),
                )),
                Some(j) => out.push(Violation::new(
                    Disjointness,
                    format!("paths {j} and {i} share vertex {v}"),
                )),
                None => owner[v] = Some(i),
            }
        }
    }
    out
}

fn distinct_terminals(n: usize, xs: &[usize], ys: &[usize]) -> Result<VertexSet> {
    if xs.len() != ys.len() {
        return Err(Error::input("terminal tuples differ in length"));
    }
    let mut all = VertexSet::new(n);
    for &v in xs.iter().chain(ys) {
        if v >= n {
            return Err(Error::input(format!("terminal {v} out of range")));
        }
        if !all.insert(v) {
            return Err(Error::input(format!("terminal {v} repeated")));
        }
    }
    Ok(all)
}

struct Linker<'a> {
    t: &'a Tournament,
    xs: &'a [usize],
    ys: &'a [usize],
    free: VertexSet,
    paths: Vec<Vec<usize>>,
}

impl Linker<'_> {
    fn reaches(&self, from: usize, to: usize) -> bool {
        if self.t.dominates(from, to) {
            return true;
        }
        let mut seen = VertexSet::new(self.t.n());
        let mut frontier = self.t.out_neighbors(from).intersection(&self.free);
        while !frontier.is_empty() {
            seen.union_with(&frontier);
            let mut next = VertexSet::new(self.t.n());
            for v in frontier.iter() {
                if self.t.dominates(v, to) {
                    return true;
                }
                next.union_with(self.t.out_neighbors(v));
            }
            next.intersect_with(&self.free);
            next.difference_with(&seen);
            frontier = next;
        }
        false
    }

    /// Every remaining pair must still be joinable through free vertices.
    fn feasible(&self, from_pair: usize) -> bool {
        (from_pair..self.xs.len()).all(|j| self.reaches(self.xs[j], self.ys[j]))
    }

    fn extend(&mut self, i: usize, at: usize, current: &mut Vec<usize>) -> bool {
        let target = self.ys[i];
        if self.t.dominates(at, target) {
            current.push(target);
            self.paths.push(current.clone());
            if self.start(i + 1) {
                return true;
            }
            self.paths.pop();
            current.pop();
        }
        let options = self.t.out_neighbors(at).intersection(&self.free);
        for z in options.iter() {
            self.free.remove(z);
            current.push(z);
            if self.reaches(z, target) && self.extend(i, z, current) {
                return true;
            }
            current.pop();
            self.free.insert(z);
        }
        false
    }

    fn start(&mut self, i: usize) -> bool {
        if i == self.xs.len() {
            return true;
        }
        if !self.feasible(i) {
            return false;
        }
        let mut current = vec![self.xs[i]];
        self.extend(i, self.xs[i], &mut current)
    }
}

/// Disjoint dipaths `xs[i] ⇝ ys[i]` for every `i`, or `None` when no such
/// family exists. Backtracks over interior vertices in ascending id, one pair
/// at a time, pruning once some later pair can no longer be joined.
pub fn brute_force_linked(
    t: &Tournament,
    xs: &[usize],
    ys: &[usize],
    budget: usize,
) -> Result<Option<PathSystem>> {
    over_budget("brute_force_linked", t.n(), budget)?;
    let terminals = distinct_terminals(t.n(), xs, ys)?;
    let mut search = Linker {
        t,
        xs,
        ys,
        free: terminals.complement(),
        paths: Vec::new(),
    };
    if !search.start(0) {
        return Ok(None);
    }
    Ok(Some(PathSystem::from_paths(
        search.paths.into_iter().map(Dipath::new).collect(),
    )))
}

/// Whether every pair of disjoint ordered `k`-tuples can be linked. The
/// statement is vacuous, hence `true`, when `n < 2k`.
pub fn brute_force_is_k_linked(t: &Tournament, k: usize) -> Result<bool> {
    over_budget("brute_force_is_k_linked", t.n(), K_LINKED_BUDGET)?;
    over_budget("brute_force_is_k_linked (k)", k, 2)?;
    let n = t.n();
    if k == 0 {
        return Ok(true);
    }
    let mut tuple = Vec::with_capacity(2 * k);
    is_k_linked_rec(t, k, n, &mut tuple)
}

fn is_k_linked_rec(t: &Tournament, k: usize, n: usize, tuple: &mut Vec<usize>) -> Result<bool> {
    if tuple.len() == 2 * k {
        let (xs, ys) = tuple.split_at(k);
        return Ok(brute_force_linked(t, xs, ys, K_LINKED_BUDGET)?.is_some());
    }
    for v in 0..n {
        if tuple.contains(&v) {
            continue;
        }
        tuple.push(v);
        let ok = is_k_linked_rec(t, k, n, tuple)?;
        tuple.pop();
        if !ok {
            return Ok(false);
        }
    }
    Ok(true)
}

fn next_permutation(p: &mut [usize]) -> bool {
    let Some(i) = (1..p.len()).rev().find(|&i| p[i - 1] < p[i]) else {
        return false;
    };
    let j = (i..p.len()).rev().find(|&j| p[j] > p[i - 1]).unwrap();
    p.swap(i - 1, j);
    p[i..].reverse();
    true
}

/// Whether `a` anchors `b`: every pairing `a[i] ⇝ b[π(i)]` admits disjoint
/// dipaths.
pub fn brute_force_anchors(
    t: &Tournament,
    a: &[usize],
    b: &[usize],
    budget: usize,
) -> Result<bool> {
    over_budget("brute_force_anchors (k)", a.len(), 4)?;
    over_budget("brute_force_anchors", t.n(), budget)?;
    distinct_terminals(t.n(), a, b)?;
    let mut pi: Vec<usize> = (0..a.len()).collect();
    loop {
        let targets: Vec<usize> = pi.iter().map(|&j| b[j]).collect();
        if brute_force_linked(t, a, &targets, budget)?.is_none() {
            return Ok(false);
        }
        if !next_permutation(&mut pi) {
            return Ok(true);
        }
    }
}

fn strongly_connected(t: &Tournament, alive: &VertexSet) -> bool {
    let Some(root) = alive.first() else {
        return true;
    };
    let sweep = |forward: bool| {
        let mut seen = VertexSet::from_vertices(t.n(), [root]);
        let mut stack = vec![root];
        while let Some(v) = stack.pop() {
            let next = if forward {
                t.out_neighbors(v).intersection(alive)
            } else {
                t.in_neighbors(v).intersection(alive)
            };
            for w in next.iter() {
                if seen.insert(w) {
                    stack.push(w);
                }
            }
        }
        seen.len() == alive.len()
    };
    sweep(true) && sweep(false)
}

fn subsets_of_size(items: &[usize], size: usize, f: &mut impl FnMut(&[usize]) -> bool) -> bool {
    fn rec(
        items: &[usize],
        size: usize,
        from: usize,
        cur: &mut Vec<usize>,
        f: &mut impl FnMut(&[usize]) -> bool,
    ) -> bool {
        if cur.len() == size {
            return f(cur);
        }
        for i in from..items.len() {
            if items.len() - i < size - cur.len() {
                break;
            }
            cur.push(items[i]);
            if rec(items, size, i + 1, cur, f) {
                return true;
            }
            cur.pop();
        }
        false
    }
    rec(items, size, 0, &mut Vec::new(), f)
}

/// The smallest number of live vertices whose removal leaves a digraph that is
/// not strongly connected (on at least two vertices); `alive − 1` if none.
pub fn brute_force_vertex_connectivity(view: &DigraphView<'_>) -> Result<usize> {
    let alive = view.alive();
    let m = alive.len();
    over_budget("brute_force_vertex_connectivity", m, CONNECTIVITY_BUDGET)?;
    if m <= 1 {
        return Ok(0);
    }
    let t = view.tournament();
    let items = alive.to_vec();
    for size in 0..=m - 2 {
        let found = subsets_of_size(&items, size, &mut |cut| {
            let mut rest = alive.clone();
            for &c in cut {
                rest.remove(c);
            }
            !strongly_connected(t, &rest)
        });
        if found {
            return Ok(size);
        }
    }
    Ok(m - 1)
}

/// A true median order by dynamic programming over vertex subsets: the best
/// order of a set ends in some vertex `v`, which gains one forward arc from
/// every earlier in-neighbour. Ties go to the smallest final vertex.
pub fn exact_median_order(t: &Tournament) -> Result<Ordering> {
    let n = t.n();
    over_budget("exact_median_order", n, MEDIAN_BUDGET)?;
    let full = (1usize << n) - 1;
    let in_mask: Vec<usize> = (0..n)
        .map(|v| {
            (0..n)
                .filter(|&u| u != v && t.dominates(u, v))
                .map(|u| 1 << u)
                .sum()
        })
        .collect();
    let mut best = vec![0usize; 1 << n];
    let mut last = vec![usize::MAX; 1 << n];
    for set in 1..=full {
        let mut top = None;
        for (v, &mask) in in_mask.iter().enumerate() {
            if set & (1 << v) == 0 {
                continue;
            }
            let rest = set & !(1 << v);
            let value = best[rest] + (mask & rest).count_ones() as usize;
            if top.is_none_or(|(b, _)| value > b) {
                top = Some((value, v));
            }
        }
        let (b, v) = top.unwrap();
        best[set] = b;
        last[set] = v;
    }
    let mut perm = Vec::with_capacity(n);
    let mut set = full;
    while set != 0 {
        let v = last[set];
        perm.push(v);
        set &= !(1 << v);
    }
    perm.reverse();
    let ord = Ordering::new(t, perm)?;
    debug_assert_eq!(ord.forward_arcs(), best[full]);
    Ok(ord)
}

/// `max |S| − |N(S)|` over all `S ⊆ X` with a witness (the first maximiser in
/// subset-mask order; the empty set when the maximum is 0).
pub fn brute_force_max_deficiency(
    x_size: usize,
    z_size: usize,
    edges: &[(usize, usize)],
) -> Result<(usize, VertexSet)> {
    over_budget("brute_force_max_deficiency", x_size, DEFICIENCY_BUDGET)?;
    let mut nbrs = vec![VertexSet::new(z_size); x_size];
    for &(x, z) in edges {
        if x >= x_size || z >= z_size {
            return Err(Error::input(format!("edge ({x}, {z}) out of range")));
        }
        nbrs[x].insert(z);
    }
    let mut best = (0usize, 0usize);
    for mask in 0..1usize << x_size {
        let mut hood = VertexSet::new(z_size);
        for (x, set) in nbrs.iter().enumerate() {
            if mask & (1 << x) != 0 {
                hood.union_with(set);
            }
        }
        let size = mask.count_ones() as usize;
        if size > hood.len() && size - hood.len() > best.0 {
            best = (size - hood.len(), mask);
        }
    }
    let witness = VertexSet::from_vertices(x_size, (0..x_size).filter(|x| best.1 & (1 << x) != 0));
    Ok((best.0, witness))
}

fn check_terminal_sets(
    view: &DigraphView<'_>,
    sources: &VertexSet,
    sinks: &VertexSet,
) -> Result<()> {
    over_budget("set-to-set oracle", view.alive_count(), MENGER_BUDGET)?;
    if !sources.is_disjoint(sinks) {
        return Err(Error::input("sources and sinks overlap"));
    }
    if !sources.is_subset(&view.alive()) || !sinks.is_subset(&view.alive()) {
        return Err(Error::input("terminal vertex is deleted from the view"));
    }
    Ok(())
}

/// The largest number of vertex-disjoint dipaths from distinct sources to
/// distinct sinks, by trying every simple path for every source in turn.
pub fn brute_force_max_disjoint_paths(
    view: &DigraphView<'_>,
    sources: &VertexSet,
    sinks: &VertexSet,
) -> Result<usize> {
    check_terminal_sets(view, sources, sinks)?;
    let srcs = sources.to_vec();
    let mut free = view.alive();
    Ok(max_paths_rec(view, &srcs, 0, sinks, &mut free))
}

fn max_paths_rec(
    view: &DigraphView<'_>,
    srcs: &[usize],
    i: usize,
    sinks: &VertexSet,
    free: &mut VertexSet,
) -> usize {
    if i == srcs.len() {
        return 0;
    }
    let mut best = max_paths_rec(view, srcs, i + 1, sinks, free);
    let remaining = srcs.len() - i;
    let s = srcs[i];
    // An earlier path may have used this source as an interior vertex.
    if !free.contains(s) {
        return best;
    }
    free.remove(s);
    let mut on_done = |free: &mut VertexSet| {
        let got = 1 + max_paths_rec(view, srcs, i + 1, sinks, free);
        best = best.max(got);
        best == remaining
    };
    simple_paths(view, s, sinks, free, &mut on_done);
    free.insert(s);
    best
}

/// Calls `on_done` with the live set updated for every simple path from `at`
/// to a free sink; stops early when `on_done` returns `true`.
fn simple_paths(
    view: &DigraphView<'_>,
    at: usize,
    sinks: &VertexSet,
    free: &mut VertexSet,
    on_done: &mut impl FnMut(&mut VertexSet) -> bool,
) -> bool {
    let next = view.tournament().out_neighbors(at).intersection(free);
    for w in next.iter() {
        free.remove(w);
        let stop = if sinks.contains(w) {
            on_done(free)
        } else {
            simple_paths(view, w, sinks, free, on_done)
        };
        free.insert(w);
        if stop {
            return true;
        }
    }
    false
}

/// Whether deleting `cut` leaves no dipath from a source to a sink.
pub fn separates(
    view: &DigraphView<'_>,
    sources: &VertexSet,
    sinks: &VertexSet,
    cut: &VertexSet,
) -> bool {
    let t = view.tournament();
    let alive = view.alive().difference(cut);
    let mut seen = sources.intersection(&alive);
    let mut stack = seen.to_vec();
    while let Some(v) = stack.pop() {
        if sinks.contains(v) {
            return false;
        }
        for w in t.out_neighbors(v).intersection(&alive).iter() {
            if seen.insert(w) {
                stack.push(w);
            }
        }
    }
    true
}

/// The smallest set of live vertices (terminals allowed) meeting every
/// source-to-sink dipath, with a witness.
pub fn brute_force_min_separating_cut(
    view: &DigraphView<'_>,
    sources: &VertexSet,
    sinks: &VertexSet,
) -> Result<(usize, VertexSet)> {
    check_terminal_sets(view, sources, sinks)?;
    let items = view.alive().to_vec();
    for size in 0..=items.len() {
        let mut witness = None;
        subsets_of_size(&items, size, &mut |cut| {
            let c = VertexSet::from_vertices(view.n(), cut.iter().copied());
            if separates(view, sources, sinks, &c) {
                witness = Some(c);
                true
            } else {
                false
            }
        });
        if let Some(w) = witness {
            return Ok((size, w));
        }
    }
    unreachable!("deleting every live vertex separates")
}
