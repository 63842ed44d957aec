//! Menger machinery: vertex connectivity, set-to-set disjoint path systems and
//! bipartite matchings with a deficiency witness.

mod connectivity;
mod matching;
pub(crate) mod network;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::tournament::{Dipath, Tournament};
use crate::vertex_set::VertexSet;

pub use connectivity::{is_k_connected, local_connectivity, vertex_connectivity, Connectivity};
pub use matching::{matching_with_deficiency, DeficiencyMatching};

use network::{node_in, node_out, split_network};

/// A tournament with some vertices deleted. Arcs touching a deleted vertex are
/// never reported.
#[derive(Debug, Clone)]
pub struct DigraphView<'a> {
    tournament: &'a Tournament,
    deleted: VertexSet,
}

impl<'a> DigraphView<'a> {
    pub fn new(tournament: &'a Tournament) -> Self {
        DigraphView {
            tournament,
            deleted: VertexSet::new(tournament.n()),
        }
    }

    pub fn with_deleted(tournament: &'a Tournament, deleted: VertexSet) -> Self {
        assert_eq!(deleted.universe(), tournament.n());
        DigraphView {
            tournament,
            deleted,
        }
    }

    pub fn tournament(&self) -> &'a Tournament {
        self.tournament
    }

    /// Size of the underlying vertex range (including deleted vertices).
    pub fn n(&self) -> usize {
        self.tournament.n()
    }

    pub fn deleted(&self) -> &VertexSet {
        &self.deleted
    }

    pub fn alive(&self) -> VertexSet {
        self.deleted.complement()
    }

    pub fn alive_count(&self) -> usize {
        self.n() - self.deleted.len()
    }

    pub fn is_alive(&self, v: usize) -> bool {
        v < self.n() && !self.deleted.contains(v)
    }

    pub fn arc(&self, u: usize, v: usize) -> bool {
        self.is_alive(u) && self.is_alive(v) && self.tournament.dominates(u, v)
    }
}

/// Pairwise vertex-disjoint dipaths with declared endpoints.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct PathSystem {
    pub pairs: Vec<(usize, usize)>,
    pub paths: Vec<Dipath>,
    /// For set-to-set systems: the sink index (into the ascending sink list)
    /// reached from each source index.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub permutation: Option<Vec<usize>>,
}

impl PathSystem {
    pub fn from_paths(paths: Vec<Dipath>) -> Self {
        let pairs = paths
            .iter()
            .map(|p| {
                (
                    p.source().unwrap_or(usize::MAX),
                    p.sink().unwrap_or(usize::MAX),
                )
            })
            .collect();
        PathSystem {
            pairs,
            paths,
            permutation: None,
        }
    }

    pub fn len(&self) -> usize {
        self.paths.len()
    }

    pub fn is_empty(&self) -> bool {
        self.paths.is_empty()
    }
}

/// Outcome of [`max_disjoint_paths`].
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum DisjointPaths {
    Found(PathSystem),
    /// Fewer than the requested number of paths exist; `cut` is a vertex set of
    /// size `achieved` meeting every source-to-sink dipath.
    Deficit {
        achieved: usize,
        cut: VertexSet,
    },
}

/// Up to `target_k` pairwise disjoint dipaths from distinct sources to distinct
/// sinks. Paths never pass through a source or sink as an interior vertex.
///
/// The system is read off a unit vertex-capacity flow; decomposition follows
/// the lowest-numbered arc carrying flow. Paths are listed by ascending source.
pub fn max_disjoint_paths(
    view: &DigraphView<'_>,
    sources: &VertexSet,
    sinks: &VertexSet,
    target_k: usize,
) -> Result<DisjointPaths> {
    let n = view.n();
    if sources.universe() != n || sinks.universe() != n {
        return Err(Error::input("terminal sets over the wrong vertex range"));
    }
    if !sources.is_disjoint(sinks) {
        return Err(Error::input("sources and sinks overlap"));
    }
    if sources.is_empty() || sinks.is_empty() {
        return Err(Error::input("sources and sinks must be nonempty"));
    }
    if !sources.is_disjoint(view.deleted()) || !sinks.is_disjoint(view.deleted()) {
        return Err(Error::input("terminal vertex is deleted from the view"));
    }
    if target_k > sources.len().min(sinks.len()) {
        return Err(Error::input(format!(
            "target {target_k} exceeds min(|sources|, |sinks|) = {}",
            sources.len().min(sinks.len())
        )));
    }

    let super_source = 2 * n;
    let super_sink = 2 * n + 1;
    let mut g = split_network(view, 2, |u, v| !sources.contains(v) && !sinks.contains(u));
    for s in sources.iter() {
        g.add_edge(super_source, node_in(s), network::INF);
    }
    for t in sinks.iter() {
        g.add_edge(node_out(t), super_sink, network::INF);
    }
    let achieved = g.max_flow(super_source, super_sink, target_k);
    if achieved < target_k {
        let cut = network::cut_vertices(&g, super_source, view);
        return Ok(DisjointPaths::Deficit { achieved, cut });
    }

    let sink_rank: Vec<usize> = {
        let mut r = vec![usize::MAX; n];
        for (i, t) in sinks.iter().enumerate() {
            r[t] = i;
        }
        r
    };
    let mut pairs = Vec::new();
    let mut paths = Vec::new();
    let mut permutation = Vec::new();
    // Each vertex carries at most one unit, so the walk out of a vertex is forced.
    let flow_successor = |v: usize| {
        g.edges_from(node_out(v))
            .iter()
            .copied()
            .filter(|&e| g.is_forward(e) && g.flow_on(e) > 0 && g.head(e) < 2 * n)
            .min_by_key(|&e| g.head(e))
            .map(|e| g.head(e) / 2)
    };
    for s in sources.iter() {
        let carries_flow = g
            .edges_from(node_in(s))
            .iter()
            .any(|&e| g.is_forward(e) && g.head(e) == node_out(s) && g.flow_on(e) > 0);
        if !carries_flow {
            continue;
        }
        let mut path = vec![s];
        let mut v = s;
        while !sinks.contains(v) {
            v = flow_successor(v).expect("flow conservation");
            path.push(v);
        }
        pairs.push((s, v));
        permutation.push(sink_rank[v]);
        paths.push(Dipath::new(path));
    }
    Ok(DisjointPaths::Found(PathSystem {
        pairs,
        paths,
        permutation: Some(permutation),
    }))
}
