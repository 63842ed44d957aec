use rayon::prelude::*;
use serde::Serialize;

use crate::vertex_set::VertexSet;

use super::network::{cut_vertices, node_in, node_out, split_network, FlowGraph};
use super::DigraphView;

/// Exact strong vertex connectivity with a witness.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct Connectivity {
    pub value: usize,
    /// A minimum separator, present whenever `value < alive − 1`.
    pub separator: Option<VertexSet>,
    /// An ordered pair `(x, y)` with no `x→y` dipath after removing the separator.
    pub pair: Option<(usize, usize)>,
}

fn local(g: &mut FlowGraph, x: usize, y: usize, limit: usize) -> usize {
    g.reset();
    g.max_flow(node_out(x), node_in(y), limit)
}

/// Maximum number of internally disjoint `x→y` dipaths when `x↛y`, capped at
/// `limit`.
pub fn local_connectivity(view: &DigraphView<'_>, x: usize, y: usize, limit: usize) -> usize {
    assert!(view.is_alive(x) && view.is_alive(y) && x != y);
    assert!(!view.arc(x, y), "adjacent pair has no vertex separator");
    let mut g = split_network(view, 0, |_, _| true);
    local(&mut g, x, y, limit)
}

/// κ(D): the minimum over ordered pairs `x↛y` of the local connectivity, and
/// `alive − 1` when every ordered pair is an arc. A single live vertex (or none)
/// has connectivity 0.
///
/// Some vertex among the first `κ + 1` live vertices avoids a minimum
/// separator, so only those need to act as one end of the pair; the scan stops
/// as soon as it has passed `best + 1` of them.
pub fn vertex_connectivity(view: &DigraphView<'_>) -> Connectivity {
    let alive: Vec<usize> = view.alive().to_vec();
    let m = alive.len();
    if m <= 1 {
        return Connectivity {
            value: 0,
            separator: None,
            pair: None,
        };
    }
    let mut g = split_network(view, 0, |_, _| true);
    let mut best = m - 1;
    let mut witness: Option<(usize, usize, VertexSet)> = None;
    for (idx, &x) in alive.iter().enumerate() {
        if idx > best {
            break;
        }
        for &y in &alive {
            if y == x {
                continue;
            }
            for (a, b) in [(x, y), (y, x)] {
                if view.arc(a, b) {
                    continue;
                }
                let f = local(&mut g, a, b, best);
                if f < best {
                    best = f;
                    witness = Some((a, b, cut_vertices(&g, node_out(a), view)));
                }
                if best == 0 {
                    break;
                }
            }
        }
    }
    match witness {
        Some((a, b, sep)) => Connectivity {
            value: best,
            separator: Some(sep),
            pair: Some((a, b)),
        },
        None => Connectivity {
            value: best,
            separator: None,
            pair: None,
        },
    }
}

/// `κ(D) ≥ k`, deciding early: local flows stop at `k`, and only the first `k`
/// live vertices serve as pair ends.
pub fn is_k_connected(view: &DigraphView<'_>, k: usize) -> bool {
    if k == 0 {
        return true;
    }
    let alive: Vec<usize> = view.alive().to_vec();
    if alive.len() <= k {
        return false;
    }
    let base = split_network(view, 0, |_, _| true);
    alive[..k].par_iter().all(|&x| {
        let mut g = base.clone();
        alive.iter().all(|&y| {
            if y == x {
                return true;
            }
            let (a, b) = if view.arc(x, y) { (y, x) } else { (x, y) };
            if view.arc(a, b) {
                return true;
            }
            local(&mut g, a, b, k) >= k
        })
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::toolkit::generate::{generate, GenSpec};
    use crate::tournament::Tournament;

    #[test]
    fn transitive_has_zero_connectivity() {
        let t = Tournament::transitive(5);
        let c = vertex_connectivity(&DigraphView::new(&t));
        assert_eq!(c.value, 0);
        assert_eq!(c.separator, Some(VertexSet::new(5)));
        let (a, b) = c.pair.unwrap();
        assert!(a > b, "a later vertex cannot reach an earlier one");
    }

    #[test]
    fn three_cycle() {
        let t = Tournament::from_pair_fn(3, |u, v| !(u == 0 && v == 2));
        let view = DigraphView::new(&t);
        let c = vertex_connectivity(&view);
        assert_eq!(c.value, 1);
        assert_eq!(c.separator.unwrap().len(), 1);
        assert!(is_k_connected(&view, 1));
        assert!(!is_k_connected(&view, 2));
    }

    #[test]
    fn quadratic_residue_seven() {
        let t = generate(&GenSpec::rotational_qr(7)).unwrap();
        let view = DigraphView::new(&t);
        let c = vertex_connectivity(&view);
        assert_eq!(c.value, 3);
        let sep = c.separator.unwrap();
        assert_eq!(sep.len(), 3);
        let rest = DigraphView::with_deleted(&t, sep);
        assert_eq!(vertex_connectivity(&rest).value, 0);
    }

    #[test]
    fn single_vertex_and_empty_views() {
        let t = Tournament::transitive(1);
        assert_eq!(vertex_connectivity(&DigraphView::new(&t)).value, 0);
        let t = Tournament::transitive(3);
        let gone = DigraphView::with_deleted(&t, VertexSet::full(3));
        assert_eq!(vertex_connectivity(&gone).value, 0);
        assert!(is_k_connected(&gone, 0));
    }

    #[test]
    fn early_exit_agrees_with_exact_value() {
        let t = generate(&GenSpec::random(100, 2024)).unwrap();
        let view = DigraphView::new(&t);
        let exact = vertex_connectivity(&view).value;
        assert_eq!(is_k_connected(&view, 19), exact >= 19);
        assert!(is_k_connected(&view, exact));
        assert!(!is_k_connected(&view, exact + 1));
    }
}
