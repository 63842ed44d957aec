use std::collections::VecDeque;

use serde::Serialize;

use crate::error::{Error, Result};
use crate::vertex_set::VertexSet;

/// A maximum matching together with a Hall obstruction that certifies it.
///
/// `s ⊆ X` attains the maximum deficiency `|S| − |N(S)|`, and every member of
/// `N(S)` is matched into `S`, so `|matching| = |X| − deficiency`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct DeficiencyMatching {
    /// `(x, z)` edges, ascending by `x`.
    pub matching: Vec<(usize, usize)>,
    pub s: VertexSet,
    pub neighborhood: VertexSet,
    pub deficiency: usize,
    #[serde(skip)]
    mate_x: Vec<Option<usize>>,
    #[serde(skip)]
    mate_z: Vec<Option<usize>>,
}

impl DeficiencyMatching {
    pub fn mate_of_x(&self, x: usize) -> Option<usize> {
        self.mate_x[x]
    }

    pub fn mate_of_z(&self, z: usize) -> Option<usize> {
        self.mate_z[z]
    }

    pub fn x_size(&self) -> usize {
        self.mate_x.len()
    }

    pub fn z_size(&self) -> usize {
        self.mate_z.len()
    }
}

fn augment(
    x: usize,
    adj: &[Vec<usize>],
    visited: &mut [bool],
    mate_x: &mut [Option<usize>],
    mate_z: &mut [Option<usize>],
) -> bool {
    for &z in &adj[x] {
        if visited[z] {
            continue;
        }
        visited[z] = true;
        let free = match mate_z[z] {
            None => true,
            Some(other) => augment(other, adj, visited, mate_x, mate_z),
        };
        if free {
            mate_x[x] = Some(z);
            mate_z[z] = Some(x);
            return true;
        }
    }
    false
}

/// Maximum matching of the bipartite graph `X = [0, x_size)`, `Z = [0, z_size)`
/// by augmenting paths (neighbours tried in ascending order), then the set `S`
/// of X-vertices reachable from unmatched X-vertices along alternating paths.
pub fn matching_with_deficiency(
    x_size: usize,
    z_size: usize,
    edges: &[(usize, usize)],
) -> Result<DeficiencyMatching> {
    let mut adj = vec![Vec::new(); x_size];
    for &(x, z) in edges {
        if x >= x_size || z >= z_size {
            return Err(Error::input(format!(
                "edge ({x}, {z}) outside {x_size}×{z_size} bipartite graph"
            )));
        }
        adj[x].push(z);
    }
    for list in &mut adj {
        list.sort_unstable();
        list.dedup();
    }

    let mut mate_x = vec![None; x_size];
    let mut mate_z = vec![None; z_size];
    for x in 0..x_size {
        let mut visited = vec![false; z_size];
        augment(x, &adj, &mut visited, &mut mate_x, &mut mate_z);
    }

    let mut s = VertexSet::new(x_size);
    let mut neighborhood = VertexSet::new(z_size);
    let mut queue: VecDeque<usize> = (0..x_size).filter(|&x| mate_x[x].is_none()).collect();
    for &x in &queue {
        s.insert(x);
    }
    while let Some(x) = queue.pop_front() {
        for &z in &adj[x] {
            if neighborhood.insert(z) {
                let partner = mate_z[z].expect("an unmatched neighbour would augment");
                if s.insert(partner) {
                    queue.push_back(partner);
                }
            }
        }
    }

    let matching: Vec<(usize, usize)> = mate_x
        .iter()
        .enumerate()
        .filter_map(|(x, z)| z.map(|z| (x, z)))
        .collect();
    let deficiency = s.len() - neighborhood.len();
    debug_assert_eq!(matching.len() + deficiency, x_size);
    Ok(DeficiencyMatching {
        matching,
        s,
        neighborhood,
        deficiency,
        mate_x,
        mate_z,
    })
}
