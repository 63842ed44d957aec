//! Unit-capacity vertex-split flow networks (Dinic).

use std::collections::VecDeque;

use crate::vertex_set::VertexSet;

use super::DigraphView;

pub(crate) const INF: u32 = u32::MAX / 2;

#[derive(Clone)]
pub(crate) struct FlowGraph {
    adj: Vec<Vec<usize>>,
    to: Vec<usize>,
    cap: Vec<u32>,
    initial: Vec<u32>,
    level: Vec<u32>,
    cursor: Vec<usize>,
}

impl FlowGraph {
    pub(crate) fn new(nodes: usize) -> Self {
        FlowGraph {
            adj: vec![Vec::new(); nodes],
            to: Vec::new(),
            cap: Vec::new(),
            initial: Vec::new(),
            level: vec![0; nodes],
            cursor: vec![0; nodes],
        }
    }

    pub(crate) fn add_edge(&mut self, u: usize, v: usize, c: u32) -> usize {
        let id = self.to.len();
        self.adj[u].push(id);
        self.to.push(v);
        self.cap.push(c);
        self.initial.push(c);
        self.adj[v].push(id + 1);
        self.to.push(u);
        self.cap.push(0);
        self.initial.push(0);
        id
    }

    pub(crate) fn reset(&mut self) {
        self.cap.copy_from_slice(&self.initial);
    }

    /// Flow pushed through forward edge `e`.
    pub(crate) fn flow_on(&self, e: usize) -> u32 {
        self.initial[e] - self.cap[e]
    }

    pub(crate) fn head(&self, e: usize) -> usize {
        self.to[e]
    }

    pub(crate) fn edges_from(&self, u: usize) -> &[usize] {
        &self.adj[u]
    }

    pub(crate) fn is_forward(&self, e: usize) -> bool {
        e.is_multiple_of(2)
    }

    fn bfs(&mut self, s: usize, t: usize) -> bool {
        self.level.iter_mut().for_each(|l| *l = u32::MAX);
        self.level[s] = 0;
        let mut queue = VecDeque::from([s]);
        while let Some(u) = queue.pop_front() {
            for &e in &self.adj[u] {
                let v = self.to[e];
                if self.cap[e] > 0 && self.level[v] == u32::MAX {
                    self.level[v] = self.level[u] + 1;
                    queue.push_back(v);
                }
            }
        }
        self.level[t] != u32::MAX
    }

    fn dfs(&mut self, u: usize, t: usize, pushed: u32) -> u32 {
        if u == t {
            return pushed;
        }
        while self.cursor[u] < self.adj[u].len() {
            let e = self.adj[u][self.cursor[u]];
            let v = self.to[e];
            if self.cap[e] > 0 && self.level[v] == self.level[u] + 1 {
                let got = self.dfs(v, t, pushed.min(self.cap[e]));
                if got > 0 {
                    self.cap[e] -= got;
                    self.cap[e ^ 1] += got;
                    return got;
                }
            }
            self.cursor[u] += 1;
        }
        0
    }

    /// Maximum `s`–`t` flow, stopping early once `limit` is reached.
    pub(crate) fn max_flow(&mut self, s: usize, t: usize, limit: usize) -> usize {
        let mut total = 0usize;
        while total < limit && self.bfs(s, t) {
            self.cursor.iter_mut().for_each(|c| *c = 0);
            while total < limit {
                let want = u32::try_from(limit - total).unwrap_or(INF).min(INF);
                let got = self.dfs(s, t, want);
                if got == 0 {
                    break;
                }
                total += got as usize;
            }
        }
        total
    }

    /// Nodes reachable from `s` in the residual graph.
    pub(crate) fn residual_reachable(&self, s: usize) -> Vec<bool> {
        let mut seen = vec![false; self.adj.len()];
        seen[s] = true;
        let mut queue = VecDeque::from([s]);
        while let Some(u) = queue.pop_front() {
            for &e in &self.adj[u] {
                let v = self.to[e];
                if self.cap[e] > 0 && !seen[v] {
                    seen[v] = true;
                    queue.push_back(v);
                }
            }
        }
        seen
    }
}

/// `v_in = 2v`, `v_out = 2v + 1`; the split edge carries one unit and arc edges
/// are uncapacitated, so every minimum cut consists of split edges only.
#[inline]
pub(crate) fn node_in(v: usize) -> usize {
    2 * v
}

#[inline]
pub(crate) fn node_out(v: usize) -> usize {
    2 * v + 1
}

/// Builds the split network of the view's live vertices, with `extra` nodes
/// appended after the `2n` vertex nodes. `keep_arc(u, v)` filters arcs.
pub(crate) fn split_network(
    view: &DigraphView<'_>,
    extra: usize,
    keep_arc: impl Fn(usize, usize) -> bool,
) -> FlowGraph {
    let n = view.n();
    let mut g = FlowGraph::new(2 * n + extra);
    let alive = view.alive();
    for v in alive.iter() {
        g.add_edge(node_in(v), node_out(v), 1);
    }
    for u in alive.iter() {
        let mut heads = view.tournament().out_neighbors(u).clone();
        heads.intersect_with(&alive);
        for v in heads.iter() {
            if keep_arc(u, v) {
                g.add_edge(node_out(u), node_in(v), INF);
            }
        }
    }
    g
}

/// Vertices whose split edge crosses the residual cut from `s`.
pub(crate) fn cut_vertices(g: &FlowGraph, s: usize, view: &DigraphView<'_>) -> VertexSet {
    let reach = g.residual_reachable(s);
    let mut cut = VertexSet::new(view.n());
    for v in view.alive().iter() {
        if reach[node_in(v)] && !reach[node_out(v)] {
            cut.insert(v);
        }
    }
    cut
}
