//! Disjoint linkage of two terminal tuples in a highly connected tournament.
//!
//! The pipeline:
//!
//! 1. peel `k*` pairs `(u_i, v_i)` off `T − X₀ − Y₀`, each `u_i` of minimum
//!    out-degree and `v_i` of minimum out-degree inside `N⁺(u_i)`;
//! 2. find an anchoring pair `V₁`, `V₂` inside `T[{v_1..v_k*}]`;
//! 3. step every `x_i` to a successor `x_i′` outside everything peeled;
//! 4. match successors to the pairs behind `V₁` (an edge when `x′` dominates
//!    `u` or `v`); a deficient successor takes one more step `x′ → x″`;
//! 5. join `V₂` to `Y₀` in `T − B` by Menger, reading off the pairing;
//! 6. route `V₁` to `V₂` inside `T[V]` with the pairing that makes the three
//!    pieces of every path meet.
//!
//! Each step checks the inequality that guarantees it and reports the first one
//! that fails as [`Error::Precondition`].

use serde::Serialize;

use crate::anchor::{
    anchor_threshold, find_anchored_candidate, route, AnchorCertificate, GreedyState, RouteOutcome,
};
use crate::error::{Error, Result};
use crate::flow::{
    is_k_connected, matching_with_deficiency, max_disjoint_paths, DeficiencyMatching, DigraphView,
    DisjointPaths, PathSystem,
};
use crate::oracle::validate_path_system;
use crate::tournament::{Dipath, Tournament};
use crate::vertex_set::VertexSet;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub struct Thresholds {
    /// `⌈12.5k − 6⌉`
    pub connectivity: usize,
    /// `21k − 14`
    pub min_out_degree: usize,
    /// `⌈8.5k − 6⌉`
    pub k_star: usize,
}

pub fn thresholds(k: usize) -> Result<Thresholds> {
    if k == 0 {
        return Err(Error::input("k must be positive"));
    }
    Ok(Thresholds {
        connectivity: (25 * k - 11) / 2,
        min_out_degree: 21 * k - 14,
        k_star: anchor_threshold(k),
    })
}

/// Which of the two hypotheses a tournament meets.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct HypothesisReport {
    pub k: usize,
    pub required_connectivity: usize,
    pub connectivity_ok: bool,
    pub required_min_out_degree: usize,
    pub min_out_degree: usize,
}

impl HypothesisReport {
    pub fn degree_ok(&self) -> bool {
        self.min_out_degree >= self.required_min_out_degree
    }

    pub fn holds(&self) -> bool {
        self.connectivity_ok && self.degree_ok()
    }
}

impl std::fmt::Display for HypothesisReport {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        let mut failed = Vec::new();
        if !self.connectivity_ok {
            failed.push(format!("κ < {}", self.required_connectivity));
        }
        if !self.degree_ok() {
            failed.push(format!(
                "δ⁺ = {} < {}",
                self.min_out_degree, self.required_min_out_degree
            ));
        }
        if failed.is_empty() {
            write!(
                f,
                "k = {}: κ ≥ {} and δ⁺ ≥ {} hold",
                self.k, self.required_connectivity, self.required_min_out_degree
            )
        } else {
            write!(f, "k = {}: {}", self.k, failed.join(", "))
        }
    }
}

/// Evaluates both hypotheses for linking `k` pairs.
pub fn check_hypotheses(t: &Tournament, k: usize) -> Result<HypothesisReport> {
    let th = thresholds(k)?;
    let (_, min_out_degree) = t.min_out_degree();
    let connectivity_ok = is_k_connected(&DigraphView::new(t), th.connectivity);
    Ok(HypothesisReport {
        k,
        required_connectivity: th.connectivity,
        connectivity_ok,
        required_min_out_degree: th.min_out_degree,
        min_out_degree,
    })
}

/// Tournaments up to this size have their hypotheses checked by default.
pub const AUTO_HYPOTHESIS_LIMIT: usize = 300;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum HypothesisCheck {
    /// Check when `n ≤` [`AUTO_HYPOTHESIS_LIMIT`].
    #[default]
    Auto,
    Always,
    Never,
}

#[derive(Debug, Clone, Default)]
pub struct LinkOptions {
    pub hypotheses: HypothesisCheck,
}

/// One peeled pair.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct PeelRecord {
    /// 1-based.
    pub step: usize,
    pub u: usize,
    pub v: usize,
    /// `d⁺(u)` in the residual tournament before this step, which is its
    /// minimum out-degree.
    pub out_degree_u: usize,
    /// Common out-neighbourhood of `u` and `v` in the residual tournament.
    pub common: VertexSet,
}

fn check_terminals(n: usize, x0: &[usize], y0: &[usize]) -> Result<VertexSet> {
    if x0.len() != y0.len() {
        return Err(Error::input(format!(
            "{} sources but {} sinks",
            x0.len(),
            y0.len()
        )));
    }
    if x0.is_empty() {
        return Err(Error::input("at least one terminal pair is required"));
    }
    let mut all = VertexSet::new(n);
    for &v in x0.iter().chain(y0) {
        if v >= n {
            return Err(Error::input(format!(
                "terminal {v} out of range for n = {n}"
            )));
        }
        if !all.insert(v) {
            return Err(Error::input(format!("terminal {v} appears twice")));
        }
    }
    Ok(all)
}

/// Peels `k_star` pairs off `T − X₀ − Y₀`, smallest id on every tie.
pub fn peel(t: &Tournament, x0: &[usize], y0: &[usize], k_star: usize) -> Result<Vec<PeelRecord>> {
    const STEP: &str = "peel";
    let k = x0.len();
    let terminals = check_terminals(t.n(), x0, y0)?;
    let (_, delta) = t.min_out_degree();
    let mut residual = terminals.complement();
    let mut records = Vec::with_capacity(k_star);
    for step in 1..=k_star {
        let (u, du) = t.min_out_degree_within(&residual).ok_or_else(|| {
            Error::precondition(STEP, format!("residual tournament empty at step {step}"))
        })?;
        if du == 0 {
            return Err(Error::precondition(
                STEP,
                format!(
                    "δ⁺(T_{}) = 0 at step {step}; no out-neighbour to peel",
                    step - 1
                ),
            ));
        }
        let floor = delta.saturating_sub(2 * k + 2 * (step - 1));
        if du < floor {
            return Err(Error::precondition(
                STEP,
                format!("δ⁺(T_{}) = {du} < δ⁺(T) − 2k − 2(i−1) = {floor}", step - 1),
            ));
        }
        let hood = t.out_neighbors(u).intersection(&residual);
        let (v, dv) = t
            .min_out_degree_within(&hood)
            .expect("u has an out-neighbour");
        let common = hood.intersection(t.out_neighbors(v));
        debug_assert_eq!(common.len(), dv);
        if 2 * common.len() > du - 1 {
            return Err(Error::precondition(
                STEP,
                format!(
                    "claim |A_{step}| = {} ≤ (d⁺(u) − 1)/2 = {} fails",
                    common.len(),
                    (du - 1) as f64 / 2.0
                ),
            ));
        }
        residual.remove(u);
        residual.remove(v);
        records.push(PeelRecord {
            step,
            u,
            v,
            out_degree_u: du,
            common,
        });
    }
    Ok(records)
}

/// For each `x_i` in order, its smallest-id out-neighbour outside `forbidden`
/// and not already chosen.
pub fn select_successors(
    t: &Tournament,
    x0: &[usize],
    forbidden: &VertexSet,
) -> Result<Vec<usize>> {
    let mut blocked = forbidden.clone();
    let mut chosen = Vec::with_capacity(x0.len());
    for (i, &x) in x0.iter().enumerate() {
        let pick = t
            .out_neighbors(x)
            .difference(&blocked)
            .first()
            .ok_or_else(|| {
                Error::precondition(
                    "successor selection",
                    format!("x_{} = {x} has no available out-neighbour", i + 1),
                )
            })?;
        blocked.insert(pick);
        chosen.push(pick);
    }
    Ok(chosen)
}

/// Edge `(i, j)` iff `x1[i]` dominates either vertex of `pairs[j]`.
pub fn build_shrunk_bipartite(
    t: &Tournament,
    x1: &[usize],
    pairs: &[(usize, usize)],
) -> Vec<(usize, usize)> {
    let mut edges = Vec::new();
    for (i, &x) in x1.iter().enumerate() {
        for (j, &(u, v)) in pairs.iter().enumerate() {
            debug_assert!(x != u && x != v);
            if t.dominates(x, u) || t.dominates(x, v) {
                edges.push((i, j));
            }
        }
    }
    edges
}

/// The vertices a deficient successor must not step to, and the quantities
/// that bound how many of its out-neighbours they can absorb.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct ForbiddenSet {
    pub set: VertexSet,
    /// `d⁺(x′, X₀ ∪ Y₀)`.
    pub gamma: usize,
    /// `d⁺(x′, D_1 ∪ … ∪ D_{α−1})`.
    pub tau: usize,
    /// `d⁺(x′, V(T) \ F)`.
    pub available: usize,
}

/// What [`forbidden_set`] needs from the pipeline state.
pub struct ForbiddenContext<'a> {
    pub terminals: &'a VertexSet,
    pub peels: &'a [PeelRecord],
    /// Peel steps (1-based) whose `u` lies behind a vertex of `N(S)`.
    pub neighborhood_steps: &'a [usize],
    pub successors: &'a [usize],
}

/// `F = X₀ ∪ Y₀ ∪ D_1 ∪ … ∪ D_{α−1} ∪ Ũ ∪ Ṽ ∪ X₁ ∪ A_α` for a deficient
/// successor `x′` routed towards pair `α`, where `Ũ` holds the `u`'s behind
/// `N(S)` and `Ṽ = V \ {v_1, …, v_α}`.
pub fn forbidden_set(
    t: &Tournament,
    ctx: &ForbiddenContext<'_>,
    x_prime: usize,
    alpha: usize,
) -> ForbiddenSet {
    let n = t.n();
    let out = t.out_neighbors(x_prime);
    let mut set = ctx.terminals.clone();
    let gamma = out.intersection_len(ctx.terminals);
    let mut earlier = VertexSet::new(n);
    for p in &ctx.peels[..alpha - 1] {
        earlier.insert(p.u);
        earlier.insert(p.v);
    }
    let tau = out.intersection_len(&earlier);
    set.union_with(&earlier);
    for &step in ctx.neighborhood_steps {
        set.insert(ctx.peels[step - 1].u);
    }
    for p in &ctx.peels[alpha..] {
        set.insert(p.v);
    }
    for &x in ctx.successors {
        set.insert(x);
    }
    set.union_with(&ctx.peels[alpha - 1].common);
    let available = out.difference(&set).len();
    ForbiddenSet {
        set,
        gamma,
        tau,
        available,
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct ForbiddenRecord {
    /// Terminal index (0-based) of the deficient source.
    pub terminal: usize,
    /// Peel step of the pair its path enters.
    pub alpha: usize,
    pub gamma: usize,
    pub tau: usize,
    pub available: usize,
    pub chosen: usize,
}

/// One pass through steps 2-6 of the pipeline with a fixed certificate.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct Attempt {
    /// Certificate over `T[V]`, in local indices of [`PipelineTrace::v_list`].
    pub certificate: AnchorCertificate,
    /// Peel steps behind `V₁` and `V₂`, in certificate order.
    pub alpha: Vec<usize>,
    pub beta: Vec<usize>,
    pub matching: DeficiencyMatching,
    /// `assignment[i]` = index into `V₁` that terminal `i`'s first segment enters.
    pub assignment: Vec<usize>,
    pub d: usize,
    pub s: usize,
    pub forbidden: Vec<ForbiddenRecord>,
    /// `x_i ⇝ v_{α}` segments, by terminal index.
    pub q_paths: Vec<Dipath>,
    pub b_set: VertexSet,
    pub residual_k_connected: bool,
    /// `V₂ → Y₀` paths in `T − B`, by ascending source.
    pub menger: PathSystem,
    /// `route_permutation[j]` = index into `V₂` that `V₁[j]` must reach.
    pub route_permutation: Vec<usize>,
    pub outcome: AttemptOutcome,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
#[serde(tag = "status", rename_all = "kebab-case")]
pub enum AttemptOutcome {
    /// Anchor paths inside `T[V]`, host indices, by `V₁` index.
    Routed { anchor_paths: PathSystem },
    /// The greedy stalled; the next attempt uses the extracted pair.
    Escalated { state: GreedyState },
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct PipelineTrace {
    pub peels: Vec<PeelRecord>,
    pub u: VertexSet,
    pub v: VertexSet,
    /// `V` in ascending host id; local index `i` of `T[V]` is `v_list[i]`.
    pub v_list: Vec<usize>,
    pub successors: Vec<usize>,
    /// One entry, or two when the first certificate escalated.
    pub attempts: Vec<Attempt>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct LinkerTrace {
    pub k: usize,
    pub k_star: usize,
    /// `None` when hypotheses were not checked.
    pub hypotheses: Option<HypothesisReport>,
    pub warnings: Vec<String>,
    /// Absent for `k = 1`, which links by breadth-first search.
    pub pipeline: Option<PipelineTrace>,
    pub final_paths: PathSystem,
}

impl LinkerTrace {
    pub fn escalated(&self) -> bool {
        self.pipeline.as_ref().is_some_and(|p| p.attempts.len() > 1)
    }
}

/// Disjoint dipaths `x0[i] ⇝ y0[i]`.
pub fn link(
    t: &Tournament,
    x0: &[usize],
    y0: &[usize],
    options: &LinkOptions,
) -> Result<(PathSystem, LinkerTrace)> {
    let n = t.n();
    let terminals = check_terminals(n, x0, y0)?;
    let k = x0.len();
    let th = thresholds(k)?;
    let mut warnings = Vec::new();
    let run_check = match options.hypotheses {
        HypothesisCheck::Always => true,
        HypothesisCheck::Never => false,
        HypothesisCheck::Auto => {
            if n > AUTO_HYPOTHESIS_LIMIT {
                warnings.push(format!(
                    "hypotheses not checked for n = {n} > {AUTO_HYPOTHESIS_LIMIT}; the output is still validated"
                ));
            }
            n <= AUTO_HYPOTHESIS_LIMIT
        }
    };
    let hypotheses = if run_check {
        let report = check_hypotheses(t, k)?;
        if !report.holds() {
            return Err(Error::Hypothesis(report));
        }
        Some(report)
    } else {
        None
    };
    let verified = hypotheses.is_some();
    let expected: Vec<(usize, usize)> = x0.iter().copied().zip(y0.iter().copied()).collect();

    let (final_paths, pipeline) = if k == 1 {
        let allowed = terminals.complement();
        let path = t
            .shortest_path_within(x0[0], y0[0], &allowed)
            .ok_or_else(|| {
                Error::precondition(
                    "breadth-first search",
                    format!("no dipath {} ⇝ {}", x0[0], y0[0]),
                )
            })?;
        (PathSystem::from_paths(vec![path]), None)
    } else {
        let pipeline = run_pipeline(t, x0, y0, &terminals, th, verified)?;
        let last = pipeline.attempts.last().expect("at least one attempt");
        let AttemptOutcome::Routed { anchor_paths } = &last.outcome else {
            unreachable!("a trace only ends after a routed attempt")
        };
        let ps = assemble(y0, last, anchor_paths)?;
        (ps, Some(pipeline))
    };

    let violations = validate_path_system(t, &expected, &final_paths);
    if let Some(v) = violations.first() {
        return Err(Error::precondition(
            "assembly",
            format!("{} violation(s), first: {}", violations.len(), v.detail),
        ));
    }
    let trace = LinkerTrace {
        k,
        k_star: th.k_star,
        hypotheses,
        warnings,
        pipeline,
        final_paths: final_paths.clone(),
    };
    Ok((final_paths, trace))
}

fn run_pipeline(
    t: &Tournament,
    x0: &[usize],
    y0: &[usize],
    terminals: &VertexSet,
    th: Thresholds,
    verified: bool,
) -> Result<PipelineTrace> {
    let n = t.n();
    let peels = peel(t, x0, y0, th.k_star)?;
    let u = VertexSet::from_vertices(n, peels.iter().map(|p| p.u));
    let v = VertexSet::from_vertices(n, peels.iter().map(|p| p.v));
    let (tv, v_list) = t.induced(&v)?;
    let mut step_of = vec![0usize; n];
    for p in &peels {
        step_of[p.v] = p.step;
    }

    let mut blocked = terminals.union(&u);
    blocked.union_with(&v);
    let successors = select_successors(t, x0, &blocked)?;

    let mut trace = PipelineTrace {
        peels,
        u,
        v,
        v_list,
        successors,
        attempts: Vec::new(),
    };
    let mut certificate = find_anchored_candidate(&tv, x0.len())?;
    loop {
        let (attempt, escalation) = run_attempt(
            t,
            &tv,
            x0,
            y0,
            terminals,
            &trace,
            &step_of,
            certificate,
            verified,
        )?;
        trace.attempts.push(attempt);
        match escalation {
            None => return Ok(trace),
            Some(_) if trace.attempts.len() > 1 => {
                return Err(Error::precondition(
                    "anchor routing",
                    "a domination certificate stalled",
                ))
            }
            Some(next) => certificate = next,
        }
    }
}

#[allow(clippy::too_many_arguments)]
fn run_attempt(
    t: &Tournament,
    tv: &Tournament,
    x0: &[usize],
    y0: &[usize],
    terminals: &VertexSet,
    trace: &PipelineTrace,
    step_of: &[usize],
    certificate: AnchorCertificate,
    verified: bool,
) -> Result<(Attempt, Option<AnchorCertificate>)> {
    let n = t.n();
    let k = y0.len();
    let peels = &trace.peels;
    let x1 = &trace.successors;
    let (v1_host, v2_host) = certificate.map(&trace.v_list);
    let alpha: Vec<usize> = v1_host.iter().map(|&v| step_of[v]).collect();
    let beta: Vec<usize> = v2_host.iter().map(|&v| step_of[v]).collect();
    let pair_of = |step: usize| (peels[step - 1].u, peels[step - 1].v);

    // Matching successors to the pairs behind V₁.
    let pairs: Vec<(usize, usize)> = alpha.iter().map(|&a| pair_of(a)).collect();
    let edges = build_shrunk_bipartite(t, x1, &pairs);
    let matching = matching_with_deficiency(k, k, &edges)?;
    let d = matching.deficiency;
    let s = matching.s.len();

    // Deficient successors are dominated by both ends of every pair outside N(S).
    for j in 0..k {
        if matching.neighborhood.contains(j) {
            continue;
        }
        let common = &peels[alpha[j] - 1].common;
        for i in matching.s.iter() {
            if !common.contains(x1[i]) {
                return Err(Error::precondition(
                    "matching",
                    format!("S ⊆ A_{} fails at x′ = {}", alpha[j], x1[i]),
                ));
            }
        }
    }

    let mut unmatched_z = (0..k).filter(|&j| matching.mate_of_z(j).is_none());
    let assignment: Vec<usize> = (0..k)
        .map(|i| {
            matching
                .mate_of_x(i)
                .unwrap_or_else(|| unmatched_z.next().expect("as many free z as free x"))
        })
        .collect();

    // First segments.
    let neighborhood_steps: Vec<usize> = matching.neighborhood.iter().map(|j| alpha[j]).collect();
    let ctx = ForbiddenContext {
        terminals,
        peels,
        neighborhood_steps: &neighborhood_steps,
        successors: x1,
    };
    let mut q_paths = Vec::with_capacity(k);
    let mut forbidden = Vec::new();
    let mut chosen = VertexSet::new(n);
    for i in 0..k {
        let a = alpha[assignment[i]];
        let (pu, pv) = pair_of(a);
        let mut path = vec![x0[i], x1[i]];
        if matching.mate_of_x(i).is_none() {
            let f = forbidden_set(t, &ctx, x1[i], a);
            if f.gamma > 2 * k - 1 {
                return Err(Error::precondition(
                    "forbidden set",
                    format!("γ = {} > 2k − 1 = {}", f.gamma, 2 * k - 1),
                ));
            }
            if f.tau > 2 * (a - 1) {
                return Err(Error::precondition(
                    "forbidden set",
                    format!("τ = {} > 2(α − 1) = {}", f.tau, 2 * (a - 1)),
                ));
            }
            if verified && f.available <= d {
                return Err(Error::precondition(
                    "forbidden set",
                    format!("d⁺(x′, V(T) \\ F) = {} ≤ d = {d}", f.available),
                ));
            }
            let pick = t
                .out_neighbors(x1[i])
                .difference(&f.set)
                .difference(&chosen)
                .first()
                .ok_or_else(|| {
                    Error::precondition(
                        "second successor",
                        format!(
                            "x′ = {} has no out-neighbour outside F and earlier choices",
                            x1[i]
                        ),
                    )
                })?;
            if !t.dominates(pick, pu) && !t.dominates(pick, pv) {
                return Err(Error::precondition(
                    "second successor",
                    format!("x″ = {pick} dominates neither end of pair {a}"),
                ));
            }
            chosen.insert(pick);
            forbidden.push(ForbiddenRecord {
                terminal: i,
                alpha: a,
                gamma: f.gamma,
                tau: f.tau,
                available: f.available,
                chosen: pick,
            });
            path.push(pick);
        }
        let last = *path.last().unwrap();
        if !t.dominates(last, pv) {
            debug_assert!(t.dominates(last, pu));
            path.push(pu);
        }
        path.push(pv);
        q_paths.push(Dipath::new(path));
    }
    if let Some(long) = q_paths.iter().find(|q| q.length() > 4) {
        return Err(Error::precondition(
            "first segments",
            format!("segment {:?} longer than 4", long.vertices()),
        ));
    }

    // B and the Menger step.
    let mut b_set = VertexSet::new(n);
    for q in &q_paths {
        for &w in q.vertices() {
            b_set.insert(w);
        }
    }
    let anchor_sides = VertexSet::from_vertices(n, v1_host.iter().chain(&v2_host).copied());
    b_set.union_with(&trace.v.difference(&anchor_sides));
    let k_star = peels.len();
    if b_set.len() > 5 * k + k_star - 2 * k {
        return Err(Error::precondition(
            "deleted set",
            format!(
                "|B| = {} > 5k + (k* − 2k) = {}",
                b_set.len(),
                5 * k + k_star - 2 * k
            ),
        ));
    }
    let residual = DigraphView::with_deleted(t, b_set.clone());
    let residual_k_connected = is_k_connected(&residual, k);
    if verified && !residual_k_connected {
        return Err(Error::precondition(
            "deleted set",
            format!("T − B is not {k}-connected"),
        ));
    }
    let sources = VertexSet::from_vertices(n, v2_host.iter().copied());
    let sinks = VertexSet::from_vertices(n, y0.iter().copied());
    let menger = match max_disjoint_paths(&residual, &sources, &sinks, k)? {
        DisjointPaths::Found(ps) => ps,
        DisjointPaths::Deficit { achieved, .. } => {
            return Err(Error::precondition(
                "Menger step",
                format!("only {achieved} of {k} disjoint V₂ → Y₀ paths in T − B"),
            ))
        }
    };

    // V₁[assignment[i]] must reach the V₂ vertex whose R path ends at y_i.
    let mut v2_index = vec![usize::MAX; n];
    for (j, &w) in v2_host.iter().enumerate() {
        v2_index[w] = j;
    }
    let mut route_permutation = vec![usize::MAX; k];
    for (i, &y) in y0.iter().enumerate() {
        let (start, _) = menger
            .pairs
            .iter()
            .copied()
            .find(|&(_, end)| end == y)
            .expect("every sink is reached");
        route_permutation[assignment[i]] = v2_index[start];
    }

    let (outcome, escalation) = match route(tv, &certificate, &route_permutation)? {
        RouteOutcome::Routed(local) => {
            let mapped: Vec<Dipath> = local
                .paths
                .iter()
                .map(|p| p.map(|w| trace.v_list[w]))
                .collect();
            let mut anchor_paths = PathSystem::from_paths(mapped);
            anchor_paths.permutation = local.permutation;
            (AttemptOutcome::Routed { anchor_paths }, None)
        }
        RouteOutcome::Escalated { certificate, state } => {
            (AttemptOutcome::Escalated { state }, Some(certificate))
        }
    };

    let attempt = Attempt {
        certificate,
        alpha,
        beta,
        matching,
        assignment,
        d,
        s,
        forbidden,
        q_paths,
        b_set,
        residual_k_connected,
        menger,
        route_permutation,
        outcome,
    };
    Ok((attempt, escalation))
}

fn assemble(y0: &[usize], attempt: &Attempt, anchor_paths: &PathSystem) -> Result<PathSystem> {
    let mut paths = Vec::with_capacity(y0.len());
    for (i, &y) in y0.iter().enumerate() {
        let q = &attempt.q_paths[i];
        let p = &anchor_paths.paths[attempt.assignment[i]];
        let r = attempt
            .menger
            .paths
            .iter()
            .find(|r| r.sink() == Some(y))
            .expect("every sink is reached");
        if q.sink() != p.source() || p.sink() != r.source() {
            return Err(Error::precondition(
                "assembly",
                format!("segments for pair {i} do not meet"),
            ));
        }
        paths.push(q.concat(p).concat(r));
    }
    Ok(PathSystem::from_paths(paths))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::toolkit::generate::{generate, GenSpec};

    #[test]
    fn threshold_values() {
        let th = |k| {
            let t = thresholds(k).unwrap();
            (t.connectivity, t.min_out_degree, t.k_star)
        };
        assert_eq!(th(1), (7, 7, 3));
        assert_eq!(th(2), (19, 28, 11));
        assert_eq!(th(3), (32, 49, 20));
        assert_eq!(th(4), (44, 70, 28));
        assert!(thresholds(0).is_err());
    }

    #[test]
    fn single_pair_on_three_cycle() {
        let t = Tournament::from_pair_fn(3, |u, v| !(u == 0 && v == 2));
        let opts = LinkOptions {
            hypotheses: HypothesisCheck::Never,
        };
        let (ps, trace) = link(&t, &[0], &[2], &opts).unwrap();
        assert_eq!(ps.paths[0].vertices(), &[0, 1, 2]);
        assert!(trace.pipeline.is_none());
    }

    #[test]
    fn hypothesis_gate() {
        let t = generate(&GenSpec::random(40, 1)).unwrap();
        let opts = LinkOptions {
            hypotheses: HypothesisCheck::Always,
        };
        match link(&t, &[0, 1], &[2, 3], &opts) {
            Err(Error::Hypothesis(r)) => {
                assert!(!r.connectivity_ok);
                assert!(!r.degree_ok());
                let text = r.to_string();
                assert!(text.contains("κ") && text.contains("δ⁺"), "{text}");
            }
            other => panic!("unexpected {other:?}"),
        }
    }

    #[test]
    fn terminal_errors() {
        let t = Tournament::transitive(10);
        let opts = LinkOptions::default();
        assert!(matches!(
            link(&t, &[0, 1], &[1, 2], &opts),
            Err(Error::Input(_))
        ));
        assert!(matches!(
            link(&t, &[0], &[1, 2], &opts),
            Err(Error::Input(_))
        ));
        assert!(matches!(link(&t, &[0], &[10], &opts), Err(Error::Input(_))));
        assert!(matches!(link(&t, &[], &[], &opts), Err(Error::Input(_))));
    }

    #[test]
    fn peel_on_random_tournament() {
        let t = generate(&GenSpec::random(120, 11)).unwrap();
        let (x0, y0) = ([0, 1], [2, 3]);
        let peels = peel(&t, &x0, &y0, 11).unwrap();
        assert_eq!(peels.len(), 11);
        let mut residual = VertexSet::full(120);
        for v in x0.iter().chain(&y0) {
            residual.remove(*v);
        }
        for p in &peels {
            let (u, du) = t.min_out_degree_within(&residual).unwrap();
            assert_eq!((p.u, p.out_degree_u), (u, du));
            let hood = t.out_neighbors(u).intersection(&residual);
            assert!(hood.contains(p.v));
            assert_eq!(p.common, hood.intersection(t.out_neighbors(p.v)));
            assert!(2 * p.common.len() < du);
            residual.remove(p.u);
            residual.remove(p.v);
        }
    }

    #[test]
    fn peel_fails_on_transitive() {
        let t = Tournament::transitive(50);
        let err = peel(&t, &[0, 1], &[2, 3], 11).unwrap_err();
        assert!(matches!(err, Error::Precondition { ref step, .. } if step == "peel"));
    }

    #[test]
    fn successors_are_distinct_and_smallest() {
        let t = Tournament::transitive(8);
        let forbidden = VertexSet::from_vertices(8, [0, 1, 2, 3]);
        assert_eq!(
            select_successors(&t, &[0, 1], &forbidden).unwrap(),
            vec![4, 5]
        );
        let all_but = VertexSet::from_vertices(8, 0..7);
        assert!(select_successors(&t, &[6, 5], &all_but).is_err());
    }

    #[test]
    fn successors_with_overlapping_pools() {
        // Three sources each see exactly {3, 4, 5}: every greedy order finds
        // distinct choices, matching an exhaustive search for a system of
        // distinct representatives.
        let t = Tournament::from_pair_fn(9, |u, v| match (u, v) {
            (0..=2, 3..=5) => true,
            (0..=2, _) => false,
            _ => true,
        });
        let forbidden = VertexSet::from_vertices(9, [0, 1, 2]);
        let got = select_successors(&t, &[0, 1, 2], &forbidden).unwrap();
        assert_eq!(got, vec![3, 4, 5]);
    }

    #[test]
    fn shrunk_bipartite_edges() {
        let t = generate(&GenSpec::random(30, 4)).unwrap();
        let x1 = [0, 1, 2, 3];
        let pairs = [(10, 11), (12, 13), (14, 15)];
        let edges = build_shrunk_bipartite(&t, &x1, &pairs);
        for (i, &x) in x1.iter().enumerate() {
            for (j, &(u, v)) in pairs.iter().enumerate() {
                let present = edges.contains(&(i, j));
                assert_eq!(present, t.dominates(x, u) || t.dominates(x, v));
            }
        }
        let t = Tournament::transitive(4);
        assert_eq!(build_shrunk_bipartite(&t, &[0], &[(1, 2)]), vec![(0, 0)]);
        assert!(build_shrunk_bipartite(&t, &[3], &[(1, 2)]).is_empty());
    }

    #[test]
    fn forbidden_set_at_first_pair() {
        let t = generate(&GenSpec::random(40, 8)).unwrap();
        let terminals = VertexSet::from_vertices(40, [0, 1, 2, 3]);
        let peels: Vec<PeelRecord> = (0..3)
            .map(|i| PeelRecord {
                step: i + 1,
                u: 10 + 2 * i,
                v: 11 + 2 * i,
                out_degree_u: 0,
                common: VertexSet::from_vertices(40, [30 + i]),
            })
            .collect();
        let ctx = ForbiddenContext {
            terminals: &terminals,
            peels: &peels,
            neighborhood_steps: &[2],
            successors: &[20, 21],
        };
        let f = forbidden_set(&t, &ctx, 20, 1);
        assert_eq!(f.set.to_vec(), vec![0, 1, 2, 3, 12, 13, 15, 20, 21, 30]);
        assert_eq!(f.tau, 0);
        assert_eq!(f.gamma, t.out_neighbors(20).intersection_len(&terminals));
        assert_eq!(f.available, t.out_neighbors(20).difference(&f.set).len());
    }

    fn qualifying(n: usize, k: usize, from_seed: u64) -> (Tournament, u64) {
        (from_seed..)
            .find_map(|seed| {
                let t = generate(&GenSpec::random(n, seed)).unwrap();
                check_hypotheses(&t, k)
                    .unwrap()
                    .holds()
                    .then_some((t, seed))
            })
            .unwrap()
    }

    #[test]
    fn two_pairs_on_a_qualifying_tournament() {
        let (t, _) = qualifying(120, 2, 0);
        let (ps, trace) = link(&t, &[5, 17], &[60, 99], &LinkOptions::default()).unwrap();
        assert!(validate_path_system(&t, &[(5, 60), (17, 99)], &ps).is_empty());
        let pipeline = trace.pipeline.as_ref().unwrap();
        assert_eq!(pipeline.peels.len(), 11);
        let attempt = pipeline.attempts.last().unwrap();
        assert!(attempt.b_set.len() <= 17);
        assert!(attempt.q_paths.iter().all(|q| q.length() <= 4));
        assert!(attempt.residual_k_connected);
        assert_eq!(attempt.matching.matching.len() + attempt.d, 2);
        assert!(trace.hypotheses.as_ref().unwrap().holds());
    }

    #[test]
    fn link_is_deterministic() {
        let (t, _) = qualifying(120, 2, 3);
        let opts = LinkOptions::default();
        let a = link(&t, &[1, 2], &[3, 4], &opts).unwrap();
        let b = link(&t, &[1, 2], &[3, 4], &opts).unwrap();
        assert_eq!(a, b);
    }
}
