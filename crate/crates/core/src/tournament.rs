//! Tournament representation and the queries every other module builds on.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::vertex_set::VertexSet;

/// A complete orientation on `n` vertices stored as out-neighbourhood rows.
///
/// Construction enforces that exactly one of `u→v`, `v→u` holds for every
/// pair of distinct vertices and that there are no loops; values are immutable
/// afterwards.
#[derive(Clone, PartialEq, Eq)]
pub struct Tournament {
    out: Vec<VertexSet>,
}

impl std::fmt::Debug for Tournament {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(f, "Tournament(n={})", self.n())
    }
}

impl Tournament {
    /// Builds the tournament where, for `u < v`, the arc is `u→v` exactly when
    /// `forward(u, v)` returns `true`.
    pub fn from_pair_fn<F: FnMut(usize, usize) -> bool>(n: usize, mut forward: F) -> Self {
        let mut out = vec![VertexSet::new(n); n];
        for u in 0..n {
            for v in u + 1..n {
                if forward(u, v) {
                    out[u].insert(v);
                } else {
                    out[v].insert(u);
                }
            }
        }
        Tournament { out }
    }

    /// Validates out-neighbourhood rows.
    pub fn from_out_rows(out: Vec<VertexSet>) -> Result<Self> {
        let n = out.len();
        for (u, row) in out.iter().enumerate() {
            if row.universe() != n {
                return Err(Error::input(format!(
                    "row {u} has universe {} but tournament has {n} vertices",
                    row.universe()
                )));
            }
            if row.contains(u) {
                return Err(Error::input(format!("loop at vertex {u}")));
            }
        }
        for u in 0..n {
            for v in u + 1..n {
                if out[u].contains(v) == out[v].contains(u) {
                    return Err(Error::input(format!(
                        "pair ({u}, {v}) must carry exactly one arc"
                    )));
                }
            }
        }
        Ok(Tournament { out })
    }

    pub fn transitive(n: usize) -> Self {
        Tournament::from_pair_fn(n, |_, _| true)
    }

    #[inline]
    pub fn n(&self) -> usize {
        self.out.len()
    }

    pub fn vertices(&self) -> VertexSet {
        VertexSet::full(self.n())
    }

    fn check_vertex(&self, v: usize) -> Result<()> {
        if v < self.n() {
            Ok(())
        } else {
            Err(Error::input(format!(
                "vertex {v} out of range for tournament on {} vertices",
                self.n()
            )))
        }
    }

    /// Checked arc query: `u→v`?
    pub fn arc(&self, u: usize, v: usize) -> Result<bool> {
        self.check_vertex(u)?;
        self.check_vertex(v)?;
        if u == v {
            return Err(Error::input(format!("arc query on a single vertex {u}")));
        }
        Ok(self.dominates(u, v))
    }

    /// Unchecked arc query; `false` when `u == v`.
    #[inline]
    pub fn dominates(&self, u: usize, v: usize) -> bool {
        self.out[u].contains(v)
    }

    #[inline]
    pub fn out_neighbors(&self, v: usize) -> &VertexSet {
        &self.out[v]
    }

    pub fn in_neighbors(&self, v: usize) -> VertexSet {
        let mut s = self.out[v].complement();
        s.remove(v);
        s
    }

    pub fn out_degree(&self, v: usize) -> usize {
        self.out[v].len()
    }

    /// `|{u ∈ S \ {v} : v→u}|`.
    pub fn out_degree_within(&self, v: usize, set: &VertexSet) -> usize {
        self.out[v].intersection_len(set)
    }

    /// `|{u ∈ S \ {v} : u→v}|`.
    pub fn in_degree_within(&self, v: usize, set: &VertexSet) -> usize {
        let others = set.len() - usize::from(set.contains(v));
        others - self.out[v].intersection_len(set)
    }

    /// The subtournament on `set`, relabelled in ascending vertex order; the
    /// second component maps new ids to host ids.
    pub fn induced(&self, set: &VertexSet) -> Result<(Tournament, Vec<usize>)> {
        let map = set.to_vec();
        Ok((self.induced_on(&map)?, map))
    }

    /// The subtournament on an explicit vertex list; new id `i` is `list[i]`.
    pub fn induced_on(&self, list: &[usize]) -> Result<Tournament> {
        if list.is_empty() {
            return Err(Error::input("induced subtournament on an empty set"));
        }
        let mut seen = VertexSet::new(self.n());
        for &v in list {
            self.check_vertex(v)?;
            if !seen.insert(v) {
                return Err(Error::input(format!("vertex {v} listed twice")));
            }
        }
        Ok(Tournament::from_pair_fn(list.len(), |i, j| {
            self.dominates(list[i], list[j])
        }))
    }

    /// A vertex of minimum out-degree (smallest id on ties) and that degree.
    pub fn min_out_degree(&self) -> (usize, usize) {
        let (v, d) = self
            .min_out_degree_within(&self.vertices())
            .expect("tournament has at least one vertex");
        assert!(
            2 * d < self.n().max(1),
            "minimum out-degree {d} exceeds (n-1)/2 for n={}",
            self.n()
        );
        (v, d)
    }

    /// Minimum out-degree inside the subtournament `T[set]`, ties to smallest id.
    pub fn min_out_degree_within(&self, set: &VertexSet) -> Option<(usize, usize)> {
        let mut best: Option<(usize, usize)> = None;
        for v in set.iter() {
            let d = self.out_degree_within(v, set);
            if best.is_none_or(|(_, bd)| d < bd) {
                best = Some((v, d));
            }
        }
        best
    }

    /// Breadth-first shortest dipath from `src` to `dst` through `allowed`
    /// (endpoints need not be in `allowed`). Neighbours are scanned in ascending
    /// id order.
    pub fn shortest_path_within(
        &self,
        src: usize,
        dst: usize,
        allowed: &VertexSet,
    ) -> Option<Dipath> {
        let n = self.n();
        let mut parent = vec![usize::MAX; n];
        let mut seen = VertexSet::new(n);
        seen.insert(src);
        let mut queue = std::collections::VecDeque::from([src]);
        while let Some(u) = queue.pop_front() {
            if u == dst {
                let mut path = vec![dst];
                let mut cur = dst;
                while cur != src {
                    cur = parent[cur];
                    path.push(cur);
                }
                path.reverse();
                return Some(Dipath::new(path));
            }
            for w in self.out[u].iter() {
                if (w == dst || allowed.contains(w)) && seen.insert(w) {
                    parent[w] = u;
                    queue.push_back(w);
                }
            }
        }
        None
    }
}

/// An ordered list of distinct vertices; as a path in a tournament every
/// consecutive pair must be an arc (see [`Dipath::check_in`]).
#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(transparent)]
pub struct Dipath(Vec<usize>);

impl Dipath {
    pub fn new(vertices: Vec<usize>) -> Self {
        Dipath(vertices)
    }

    pub fn vertices(&self) -> &[usize] {
        &self.0
    }

    /// Number of arcs.
    pub fn length(&self) -> usize {
        self.0.len().saturating_sub(1)
    }

    pub fn source(&self) -> Option<usize> {
        self.0.first().copied()
    }

    pub fn sink(&self) -> Option<usize> {
        self.0.last().copied()
    }

    pub fn interior(&self) -> &[usize] {
        if self.0.len() <= 2 {
            &[]
        } else {
            &self.0[1..self.0.len() - 1]
        }
    }

    /// Appends `other`, whose first vertex must equal this path's last.
    pub fn concat(&self, other: &Dipath) -> Dipath {
        assert_eq!(self.sink(), other.source(), "paths do not meet");
        let mut v = self.0.clone();
        v.extend_from_slice(&other.0[1..]);
        Dipath(v)
    }

    pub fn map(&self, f: impl Fn(usize) -> usize) -> Dipath {
        Dipath(self.0.iter().map(|&v| f(v)).collect())
    }

    /// Confirms the path is nonempty, repeat-free and arc-connected in `t`.
    pub fn check_in(&self, t: &Tournament) -> Result<()> {
        if self.0.is_empty() {
            return Err(Error::input("empty path"));
        }
        let mut seen = VertexSet::new(t.n());
        for &v in &self.0 {
            t.check_vertex(v)?;
            if !seen.insert(v) {
                return Err(Error::input(format!("vertex {v} repeated on path")));
            }
        }
        for w in self.0.windows(2) {
            if !t.dominates(w[0], w[1]) {
                return Err(Error::input(format!("no arc {}→{}", w[0], w[1])));
            }
        }
        Ok(())
    }
}
