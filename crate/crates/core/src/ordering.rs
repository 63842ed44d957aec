//! Local median orders.
//!
//! A true median order (maximum number of forward arcs) is NP-hard to find.
//! Everything downstream only consumes its interval-domination property: for
//! every `i < j`, `perm[i]` dominates at least half of `perm[i+1..=j]` and
//! `perm[j]` is dominated by at least half of `perm[i..j]`. An order with that
//! property is reached by local search, since moving a violating endpoint
//! across its interval strictly increases the forward-arc count.

use serde::Serialize;

use crate::error::{Error, Result};
use crate::tournament::Tournament;

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct Ordering {
    perm: Vec<usize>,
    forward_arcs: usize,
}

impl Ordering {
    /// Wraps a permutation of `V(t)`, counting its forward arcs.
    pub fn new(t: &Tournament, perm: Vec<usize>) -> Result<Self> {
        check_permutation(t.n(), &perm)?;
        let forward_arcs = count_forward_arcs(t, &perm);
        Ok(Ordering { perm, forward_arcs })
    }

    pub fn identity(t: &Tournament) -> Self {
        Ordering::new(t, (0..t.n()).collect()).expect("identity is a permutation")
    }

    pub fn perm(&self) -> &[usize] {
        &self.perm
    }

    pub fn forward_arcs(&self) -> usize {
        self.forward_arcs
    }

    pub fn len(&self) -> usize {
        self.perm.len()
    }

    pub fn is_empty(&self) -> bool {
        self.perm.is_empty()
    }

    pub fn into_perm(self) -> Vec<usize> {
        self.perm
    }
}

/// Which half of the interval-domination property an interval breaks.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum Clause {
    /// `perm[i]` dominates fewer than half of `perm[i+1..=j]`.
    LeftOutDomination,
    /// `perm[j]` is dominated by fewer than half of `perm[i..j]`.
    RightInDomination,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub struct IntervalViolation {
    pub i: usize,
    pub j: usize,
    pub clause: Clause,
    /// The number of dominated (resp. dominating) vertices actually found.
    pub count: usize,
    /// `⌈(j − i)/2⌉`.
    pub required: usize,
}

fn check_permutation(n: usize, perm: &[usize]) -> Result<()> {
    if perm.len() != n {
        return Err(Error::input(format!(
            "order lists {} vertices, tournament has {n}",
            perm.len()
        )));
    }
    let mut seen = vec![false; n];
    for &v in perm {
        if v >= n || std::mem::replace(&mut seen[v], true) {
            return Err(Error::input(format!(
                "order is not a permutation (vertex {v})"
            )));
        }
    }
    Ok(())
}

fn count_forward_arcs(t: &Tournament, perm: &[usize]) -> usize {
    let mut count = 0;
    for (i, &a) in perm.iter().enumerate() {
        for &b in &perm[i + 1..] {
            count += usize::from(t.dominates(a, b));
        }
    }
    count
}

/// Scans intervals by ascending `j`, then ascending `i`, the left clause before
/// the right one. With `first_only` the scan stops at the first violation.
fn scan(t: &Tournament, perm: &[usize], first_only: bool) -> Vec<IntervalViolation> {
    let n = perm.len();
    let mut found = Vec::new();
    // out_count[i] = #{l in (i, j] : perm[i] → perm[l]} for the current j.
    let mut out_count = vec![0usize; n];
    let mut in_count = vec![0usize; n];
    for j in 1..n {
        let pj = perm[j];
        for i in 0..j {
            out_count[i] += usize::from(t.dominates(perm[i], pj));
        }
        // in_count[i] = #{l in [i, j) : perm[l] → perm[j]}.
        let mut acc = 0;
        for i in (0..j).rev() {
            acc += usize::from(t.dominates(perm[i], pj));
            in_count[i] = acc;
        }
        for i in 0..j {
            let span = j - i;
            let required = span.div_ceil(2);
            if 2 * out_count[i] < span {
                found.push(IntervalViolation {
                    i,
                    j,
                    clause: Clause::LeftOutDomination,
                    count: out_count[i],
                    required,
                });
                if first_only {
                    return found;
                }
            }
            if 2 * in_count[i] < span {
                found.push(IntervalViolation {
                    i,
                    j,
                    clause: Clause::RightInDomination,
                    count: in_count[i],
                    required,
                });
                if first_only {
                    return found;
                }
            }
        }
    }
    found
}

/// Every interval of `perm` that breaks interval domination; an empty result
/// certifies the order.
pub fn check_interval_domination(t: &Tournament, perm: &[usize]) -> Result<Vec<IntervalViolation>> {
    check_permutation(t.n(), perm)?;
    Ok(scan(t, perm, false))
}

/// Local search from `seed` (identity when `None`) until no interval is
/// violated. Each repair moves the offending endpoint to the other end of its
/// interval and raises the forward-arc count by at least one, so at most
/// `n(n−1)/2` repairs happen.
pub fn local_median_order(t: &Tournament, seed: Option<&Ordering>) -> Ordering {
    let mut perm = match seed {
        Some(s) if s.len() == t.n() => s.perm.clone(),
        Some(_) => panic!("seed order does not match the tournament"),
        None => (0..t.n()).collect(),
    };
    let mut forward = count_forward_arcs(t, &perm);
    while let Some(v) = scan(t, &perm, true).pop() {
        let gain = match v.clause {
            Clause::LeftOutDomination => {
                let moved = perm.remove(v.i);
                perm.insert(v.j, moved);
                (v.j - v.i) - 2 * v.count
            }
            Clause::RightInDomination => {
                let moved = perm.remove(v.j);
                perm.insert(v.i, moved);
                (v.j - v.i) - 2 * v.count
            }
        };
        debug_assert!(gain > 0);
        forward += gain;
        debug_assert_eq!(forward, count_forward_arcs(t, &perm));
    }
    Ordering {
        perm,
        forward_arcs: forward,
    }
}
