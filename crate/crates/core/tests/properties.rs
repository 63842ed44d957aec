use proptest::prelude::*;
use proptest::sample::subsequence;

use tourlink::anchor::{
    find_anchored_candidate, greedy_short_path, route, AnchorCertificate, RouteOutcome,
};
use tourlink::flow::{
    is_k_connected, matching_with_deficiency, max_disjoint_paths, vertex_connectivity, DigraphView,
    DisjointPaths,
};
use tourlink::linker::{link, HypothesisCheck, LinkOptions};
use tourlink::oracle::{
    brute_force_is_k_linked, brute_force_linked, brute_force_max_deficiency,
    brute_force_max_disjoint_paths, brute_force_min_separating_cut,
    brute_force_vertex_connectivity, exact_median_order, separates, validate_path_system,
};
use tourlink::ordering::{check_interval_domination, local_median_order};
use tourlink::toolkit::{from_trn, generate, to_trn, to_trn_with_comments, GenSpec};
use tourlink::{Ordering, Tournament, VertexSet};

fn random(n: usize, seed: u64) -> Tournament {
    generate(&GenSpec::random(n, seed)).unwrap()
}

fn no_link() -> LinkOptions {
    LinkOptions {
        hypotheses: HypothesisCheck::Never,
    }
}

/// A tournament on `n` vertices plus two disjoint nonempty terminal sets and a
/// set of deleted non-terminals.
fn terminal_instance(
    max_n: usize,
) -> impl Strategy<Value = (Tournament, VertexSet, VertexSet, VertexSet)> {
    (3..=max_n, any::<u64>())
        .prop_flat_map(|(n, seed)| {
            let roles = proptest::collection::vec(0u8..6, n);
            (Just(n), Just(seed), roles)
        })
        .prop_filter_map("both terminal sets nonempty", |(n, seed, roles)| {
            let pick = |r: u8| VertexSet::from_vertices(n, (0..n).filter(|&v| roles[v] == r));
            let (sources, sinks, deleted) = (pick(0), pick(1), pick(2));
            (!sources.is_empty() && !sinks.is_empty())
                .then(|| (random(n, seed), sources, sinks, deleted))
        })
}

fn all_permutations(k: usize) -> Vec<Vec<usize>> {
    if k == 0 {
        return vec![Vec::new()];
    }
    let mut out = Vec::new();
    for rest in all_permutations(k - 1) {
        for slot in 0..=rest.len() {
            let mut p = rest.clone();
            p.insert(slot, k - 1);
            out.push(p);
        }
    }
    out
}

fn check_route_system(
    t: &Tournament,
    cert: &AnchorCertificate,
    pi: &[usize],
    outcome: &RouteOutcome,
) -> Result<(), TestCaseError> {
    let RouteOutcome::Routed(ps) = outcome else {
        return Err(TestCaseError::fail("domination certificate escalated"));
    };
    let pairs: Vec<(usize, usize)> = (0..cert.k()).map(|i| (cert.a[i], cert.b[pi[i]])).collect();
    prop_assert!(validate_path_system(t, &pairs, ps).is_empty());
    let ends = VertexSet::from_vertices(t.n(), cert.a.iter().chain(&cert.b).copied());
    for p in &ps.paths {
        prop_assert!(p.length() <= 3);
        prop_assert!(p.interior().iter().all(|&v| !ends.contains(v)));
    }
    Ok(())
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn tournament_arcs_are_complementary(n in 1usize..40, seed in any::<u64>()) {
        let t = random(n, seed);
        for u in 0..n {
            prop_assert!(!t.dominates(u, u));
            for v in u + 1..n {
                prop_assert!(t.dominates(u, v) != t.dominates(v, u));
            }
        }
        let total: usize = (0..n).map(|v| t.out_degree(v)).sum();
        prop_assert_eq!(total, n * (n - 1) / 2);
    }

    #[test]
    fn random_generator_is_a_pure_function_of_the_seed(n in 2usize..60, seed in any::<u64>()) {
        let a = random(n, seed);
        let b = random(n, seed);
        prop_assert!(a == b);
        // Each pair's orientation depends only on (seed, u, v), so a prefix
        // of a larger instance is the smaller instance.
        let bigger = random(n + 5, seed);
        let prefix: Vec<usize> = (0..n).collect();
        prop_assert!(bigger.induced_on(&prefix).unwrap() == a);
    }

    #[test]
    fn trn_round_trip(n in 1usize..50, seed in any::<u64>(), note in "[a-z ]{0,20}") {
        let t = random(n, seed);
        prop_assert!(from_trn(&to_trn(&t)).unwrap() == t);
        prop_assert!(from_trn(&to_trn_with_comments(&t, &[note])).unwrap() == t);
    }

    #[test]
    fn local_median_satisfies_interval_domination(n in 1usize..60, seed in any::<u64>(), shuffle in any::<u64>()) {
        let t = random(n, seed);
        let mut perm: Vec<usize> = (0..n).collect();
        perm.sort_by_key(|&v| (v as u64).wrapping_mul(shuffle | 1).rotate_left(17));
        let start = Ordering::new(&t, perm).unwrap();
        let ord = local_median_order(&t, Some(&start));
        prop_assert!(check_interval_domination(&t, ord.perm()).unwrap().is_empty());
        prop_assert!(ord.forward_arcs() >= start.forward_arcs());
        let again = local_median_order(&t, Some(&start));
        prop_assert_eq!(ord.perm(), again.perm());
    }

    #[test]
    fn local_median_never_beats_the_exact_optimum(n in 1usize..=9, seed in any::<u64>()) {
        let t = random(n, seed);
        let exact = exact_median_order(&t).unwrap();
        let local = local_median_order(&t, None);
        prop_assert!(local.forward_arcs() <= exact.forward_arcs());
        prop_assert!(check_interval_domination(&t, exact.perm()).unwrap().is_empty());
    }

    #[test]
    fn matching_certifies_its_deficiency(
        x_size in 0usize..=8,
        z_size in 0usize..=8,
        bits in proptest::collection::vec(any::<bool>(), 64),
    ) {
        let edges: Vec<(usize, usize)> = (0..x_size)
            .flat_map(|x| (0..z_size).map(move |z| (x, z)))
            .filter(|&(x, z)| bits[x * 8 + z])
            .collect();
        let m = matching_with_deficiency(x_size, z_size, &edges).unwrap();
        prop_assert_eq!(m.matching.len() + m.deficiency, x_size);
        let (brute, _) = brute_force_max_deficiency(x_size, z_size, &edges).unwrap();
        prop_assert_eq!(m.deficiency, brute);

        let mut seen_z = VertexSet::new(z_size);
        for &(x, z) in &m.matching {
            prop_assert!(edges.contains(&(x, z)));
            prop_assert!(seen_z.insert(z));
        }
        let mut hood = VertexSet::new(z_size);
        for &(x, z) in &edges {
            if m.s.contains(x) {
                hood.insert(z);
            }
        }
        prop_assert_eq!(hood.to_vec(), m.neighborhood.to_vec());
        prop_assert_eq!(m.s.len() - m.neighborhood.len(), m.deficiency);
        for z in m.neighborhood.iter() {
            let partner = m.mate_of_z(z);
            prop_assert!(partner.is_some_and(|x| m.s.contains(x)));
        }
    }

    #[test]
    fn menger_duality_against_brute_force((t, sources, sinks, deleted) in terminal_instance(9)) {
        let view = DigraphView::with_deleted(&t, deleted.clone());
        let want = sources.len().min(sinks.len());
        let brute = brute_force_max_disjoint_paths(&view, &sources, &sinks).unwrap();
        let (cut_size, _) = brute_force_min_separating_cut(&view, &sources, &sinks).unwrap();
        prop_assert_eq!(brute, cut_size.min(want));
        match max_disjoint_paths(&view, &sources, &sinks, want).unwrap() {
            DisjointPaths::Found(ps) => {
                prop_assert_eq!(ps.len(), want);
                prop_assert_eq!(brute, want);
                let terminals = sources.union(&sinks);
                let mut used = VertexSet::new(t.n());
                for p in &ps.paths {
                    p.check_in(&t).unwrap();
                    prop_assert!(sources.contains(p.source().unwrap()));
                    prop_assert!(sinks.contains(p.sink().unwrap()));
                    for &v in p.vertices() {
                        prop_assert!(!deleted.contains(v));
                        prop_assert!(used.insert(v));
                    }
                    prop_assert!(p.interior().iter().all(|&v| !terminals.contains(v)));
                }
            }
            DisjointPaths::Deficit { achieved, cut } => {
                prop_assert!(achieved < want);
                prop_assert_eq!(achieved, brute);
                prop_assert_eq!(cut.len(), achieved);
                prop_assert!(separates(&view, &sources, &sinks, &cut));
            }
        }
    }

    #[test]
    fn deleting_a_vertex_never_adds_paths(
        (t, sources, sinks, deleted) in terminal_instance(12),
        victim in any::<prop::sample::Index>(),
    ) {
        let spare: Vec<usize> = sources.union(&sinks).union(&deleted).complement().to_vec();
        prop_assume!(!spare.is_empty());
        let w = spare[victim.index(spare.len())];
        let want = sources.len().min(sinks.len());
        let count = |view: &DigraphView<'_>| match max_disjoint_paths(view, &sources, &sinks, want).unwrap() {
            DisjointPaths::Found(ps) => ps.len(),
            DisjointPaths::Deficit { achieved, .. } => achieved,
        };
        let before = count(&DigraphView::with_deleted(&t, deleted.clone()));
        let mut smaller = deleted.clone();
        smaller.insert(w);
        let after = count(&DigraphView::with_deleted(&t, smaller));
        prop_assert!(after <= before);
        prop_assert!(after + 1 >= before);
    }

    #[test]
    fn vertex_connectivity_matches_brute_force(n in 1usize..=9, seed in any::<u64>(), gone in 0usize..3) {
        let t = random(n, seed);
        let deleted = VertexSet::from_vertices(n, (0..gone.min(n - 1)).map(|i| (i * 5 + 1) % n));
        let view = DigraphView::with_deleted(&t, deleted);
        let got = vertex_connectivity(&view);
        prop_assert_eq!(got.value, brute_force_vertex_connectivity(&view).unwrap());
        for k in 0..=view.alive_count() {
            prop_assert_eq!(is_k_connected(&view, k), k <= got.value);
        }
        if let (Some(sep), Some((x, y))) = (&got.separator, got.pair) {
            prop_assert_eq!(sep.len(), got.value);
            prop_assert!(!sep.contains(x) && !sep.contains(y));
            let mut gone = view.deleted().clone();
            gone.union_with(sep);
            let cut_view = DigraphView::with_deleted(&t, gone);
            let from = VertexSet::from_vertices(n, [x]);
            let to = VertexSet::from_vertices(n, [y]);
            prop_assert!(separates(&cut_view, &from, &to, &VertexSet::new(n)));
        }
    }

    #[test]
    fn deleting_a_vertex_costs_at_most_one_connectivity(n in 2usize..=14, seed in any::<u64>(), victim in any::<prop::sample::Index>()) {
        let t = random(n, seed);
        let whole = vertex_connectivity(&DigraphView::new(&t)).value;
        let w = victim.index(n);
        let less = vertex_connectivity(&DigraphView::with_deleted(&t, VertexSet::from_vertices(n, [w]))).value;
        prop_assert!(less + 1 >= whole);
    }

    #[test]
    fn brute_force_linkage_agrees_with_flow_on_identity_pairings(
        seed in any::<u64>(),
        ends in subsequence((0..10usize).collect::<Vec<_>>(), 4),
        split in 0usize..6,
    ) {
        let t = random(10, seed);
        // Pick which two of the four chosen vertices are sources.
        let source_pos = [[0, 1], [0, 2], [0, 3], [1, 2], [1, 3], [2, 3]][split];
        let xs: Vec<usize> = source_pos.iter().map(|&i| ends[i]).collect();
        let ys: Vec<usize> = (0..4).filter(|i| !source_pos.contains(i)).map(|i| ends[i]).collect();
        let linked = brute_force_linked(&t, &xs, &ys, 14).unwrap();
        if let Some(ps) = &linked {
            let pairs: Vec<(usize, usize)> = xs.iter().copied().zip(ys.iter().copied()).collect();
            prop_assert!(validate_path_system(&t, &pairs, ps).is_empty());
        }
        let view = DigraphView::new(&t);
        let sources = VertexSet::from_vertices(10, xs.iter().copied());
        let sinks = VertexSet::from_vertices(10, ys.iter().copied());
        match max_disjoint_paths(&view, &sources, &sinks, 2).unwrap() {
            DisjointPaths::Found(ps) => {
                if ps.permutation.as_deref() == Some(&[0, 1][..]) {
                    prop_assert!(linked.is_some());
                }
            }
            DisjointPaths::Deficit { .. } => prop_assert!(linked.is_none()),
        }
    }

    #[test]
    fn greedy_short_paths_stay_in_the_pool(n in 3usize..30, seed in any::<u64>(), mask in any::<u64>()) {
        let t = random(n, seed);
        let pool = VertexSet::from_vertices(n, (0..n).filter(|&v| mask >> (v % 64) & 1 == 1));
        for (src, dst) in [(0, 1), (1, 0), (n - 1, 0)] {
            match greedy_short_path(&t, src, dst, &pool) {
                Some(p) => {
                    p.check_in(&t).unwrap();
                    prop_assert!(p.length() <= 3);
                    prop_assert_eq!((p.source(), p.sink()), (Some(src), Some(dst)));
                    prop_assert!(p.interior().iter().all(|&v| pool.contains(v) && v != src && v != dst));
                }
                None => {
                    prop_assert!(!t.dominates(src, dst));
                    let mut inner = pool.clone();
                    inner.remove(src);
                    inner.remove(dst);
                    let mut allowed = inner.clone();
                    allowed.insert(src);
                    allowed.insert(dst);
                    if let Some(p) = t.shortest_path_within(src, dst, &allowed) {
                        prop_assert!(p.length() > 3);
                    }
                }
            }
        }
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(24))]

    #[test]
    fn anchor_routes_every_pairing(seed in any::<u64>()) {
        // Twenty vertices meet the threshold for k = 3 exactly.
        let t = random(20, seed);
        let cert = find_anchored_candidate(&t, 3).unwrap();
        for pi in all_permutations(3) {
            match route(&t, &cert, &pi).unwrap() {
                outcome @ RouteOutcome::Routed(_) => check_route_system(&t, &cert, &pi, &outcome)?,
                RouteOutcome::Escalated { certificate, state } => {
                    prop_assert!(certificate.is_domination());
                    prop_assert!(state.stall.is_some());
                    for (i, &a) in certificate.a.iter().enumerate() {
                        for &b in &certificate.b {
                            prop_assert!(t.dominates(a, b), "arc {}→{} missing (a index {})", a, b, i);
                        }
                    }
                    let retry = route(&t, &certificate, &pi).unwrap();
                    check_route_system(&t, &certificate, &pi, &retry)?;
                }
            }
        }
    }

    #[test]
    fn linker_output_is_valid_and_deterministic(seed in any::<u64>(), picks in subsequence((0..120usize).collect::<Vec<_>>(), 4)) {
        let t = random(120, seed);
        let x0 = [picks[0], picks[2]];
        let y0 = [picks[3], picks[1]];
        let first = link(&t, &x0, &y0, &no_link());
        let second = link(&t, &x0, &y0, &no_link());
        match (first, second) {
            (Ok((ps, trace)), Ok((ps2, trace2))) => {
                prop_assert_eq!(&ps, &ps2);
                prop_assert_eq!(&trace, &trace2);
                let pairs = [(x0[0], y0[0]), (x0[1], y0[1])];
                prop_assert!(validate_path_system(&t, &pairs, &ps).is_empty());
            }
            (Err(a), Err(b)) => prop_assert_eq!(a.to_string(), b.to_string()),
            _ => prop_assert!(false, "two runs disagreed on success"),
        }
    }
}

#[test]
fn deficient_successors_keep_enough_room_outside_the_forbidden_set() {
    let mut deficient_records = 0;
    for seed in 0..60u64 {
        let t = random(120, seed);
        let (x0, y0) = ([0usize, 1], [2usize, 3]);
        let (_, trace) = link(&t, &x0, &y0, &no_link()).unwrap();
        let pipe = trace.pipeline.as_ref().unwrap();
        let terminals = VertexSet::from_vertices(120, x0.iter().chain(&y0).copied());
        for attempt in &pipe.attempts {
            for rec in &attempt.forbidden {
                deficient_records += 1;
                // Rebuild the forbidden set from the trace alone.
                let mut f = terminals.clone();
                for p in &pipe.peels[..rec.alpha - 1] {
                    f.insert(p.u);
                    f.insert(p.v);
                }
                for j in attempt.matching.neighborhood.iter() {
                    f.insert(pipe.peels[attempt.alpha[j] - 1].u);
                }
                for p in &pipe.peels[rec.alpha..] {
                    f.insert(p.v);
                }
                for &x in &pipe.successors {
                    f.insert(x);
                }
                f.union_with(&pipe.peels[rec.alpha - 1].common);

                let x_prime = pipe.successors[rec.terminal];
                let room = t.out_neighbors(x_prime).difference(&f);
                assert_eq!(room.len(), rec.available, "seed {seed}");
                assert!(rec.available > attempt.d, "seed {seed}");
                assert!(room.contains(rec.chosen), "seed {seed}");
                assert!(rec.gamma < 2 * 2);
                assert!(rec.tau <= 2 * (rec.alpha - 1));
                let q = &attempt.q_paths[rec.terminal];
                assert_eq!(&q.vertices()[..3], &[x0[rec.terminal], x_prime, rec.chosen]);
            }
        }
    }
    assert!(
        deficient_records > 0,
        "no deficient matching among the sampled instances"
    );
}

#[test]
fn rotational_qr7_is_strongly_connected_but_not_two_linked() {
    let qr7 = generate(&GenSpec::rotational_qr(7)).unwrap();
    assert!(brute_force_is_k_linked(&qr7, 1).unwrap());
    assert!(!brute_force_is_k_linked(&qr7, 2).unwrap());
}
