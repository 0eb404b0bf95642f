//! Coloring the vertices left uncolored by the nibble.
//!
//! Residual weights are normalised over the usable colors, every uncolored
//! vertex draws a color, and bad events (a monochromatic 3-edge of `H_T`, or
//! a `G_c` edge with both ends colored `c`) are removed by resampling the
//! vertices of the lowest such event. A greedy pass over the original
//! constraints takes over when resampling runs out of budget or a vertex has
//! no usable weight left.

use std::collections::BTreeSet;

use serde::{Deserialize, Serialize};

use crate::error::Result;
use crate::harness::verify::{verify_coloring, Verdict};
use crate::hypergraph::Vertex;
use crate::lists::Color;
use crate::nibble::NibbleState;
use crate::rng::{KeyedRng, Phase};

pub const DEFAULT_STARVATION_FLOOR: f64 = 1e-6;
pub const DEFAULT_BUDGET: usize = 1_000_000;

/// `p*_u`: residual weights over `C(u) - B(u)` with `p > 0`, rescaled to sum
/// to one. Empty for colored and starved vertices.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct NormalizedDistribution {
    pub support: Vec<Vec<(Color, f64)>>,
    /// Residual mass before rescaling, per vertex (0 for colored vertices).
    pub mass: Vec<f64>,
    pub starved: Vec<Vertex>,
    pub floor: f64,
}

impl NormalizedDistribution {
    pub fn prob(&self, u: Vertex, c: Color) -> f64 {
        let s = &self.support[u];
        s.binary_search_by_key(&c, |&(x, _)| x)
            .map_or(0.0, |i| s[i].1)
    }
}

pub fn normalize(state: &NibbleState, floor: f64) -> NormalizedDistribution {
    let n = state.n();
    let mut support = vec![Vec::new(); n];
    let mut mass = vec![0.0; n];
    let mut starved = Vec::new();
    for u in state.uncolored_vertices() {
        let cells: Vec<(Color, f64)> = state
            .lists()
            .list(u)
            .iter()
            .zip(state.weights(u))
            .filter(|&(&c, &p)| p > 0.0 && !state.is_frozen(u, c))
            .map(|(&c, &p)| (c, p))
            .collect();
        let m: f64 = cells.iter().map(|&(_, p)| p).sum();
        mass[u] = m;
        if m < floor {
            starved.push(u);
            continue;
        }
        support[u] = cells.into_iter().map(|(c, p)| (c, p / m)).collect();
    }
    NormalizedDistribution {
        support,
        mass,
        starved,
        floor,
    }
}

/// Bad events in canonical order: every `A` before every `B`, then by
/// edge (and color).
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(tag = "kind")]
pub enum BadEvent {
    A { edge: [Vertex; 3] },
    B { color: Color, edge: [Vertex; 2] },
}

impl BadEvent {
    pub fn vertices(&self) -> &[Vertex] {
        match self {
            BadEvent::A { edge } => edge,
            BadEvent::B { edge, .. } => edge,
        }
    }
}

/// Events touching `u` that occur under `assignment`.
fn events_at(
    state: &NibbleState,
    assignment: &[Option<Color>],
    u: Vertex,
    out: &mut Vec<BadEvent>,
) {
    let Some(c) = assignment[u] else { return };
    let h = state.hypergraph();
    for &i in h.incident3(u) {
        let e = h.edges3()[i];
        if e.iter().all(|&x| assignment[x] == Some(c)) {
            out.push(BadEvent::A { edge: e });
        }
    }
    for v in state.graphs().neighbors(u, c) {
        if assignment[v] == Some(c) {
            out.push(BadEvent::B {
                color: c,
                edge: crate::hypergraph::sorted2(u, v),
            });
        }
    }
}

/// Every occurring bad event, sorted and deduplicated. `assignment` holds
/// colors for the uncolored vertices; other entries are ignored.
pub fn find_bad_events(state: &NibbleState, assignment: &[Option<Color>]) -> Vec<BadEvent> {
    let mut out = Vec::new();
    for u in state.uncolored_vertices() {
        events_at(state, assignment, u, &mut out);
    }
    out.sort_unstable();
    out.dedup();
    out
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(tag = "outcome", rename_all = "snake_case")]
pub enum ResampleOutcome {
    /// Total coloring (nibble colors plus the residual assignment).
    Success {
        coloring: Vec<Color>,
        resamples: usize,
    },
    FallbackNeeded {
        resamples: usize,
        remaining_bad: usize,
        reason: String,
    },
}

fn draw(dist: &NormalizedDistribution, rng: &KeyedRng, u: Vertex, k: u64) -> Color {
    let x = rng.uniform(k, Phase::Finisher, u as u64, 0);
    let s = &dist.support[u];
    let mut acc = 0.0;
    for &(c, p) in s {
        acc += p;
        if x < acc {
            return c;
        }
    }
    s.last().expect("non-empty support").0
}

/// Samples every uncolored vertex from `dist`, then repeatedly redraws the
/// vertices of the lowest occurring bad event until none occurs or `budget`
/// redraws have been spent.
pub fn resample_until_clear(
    state: &NibbleState,
    dist: &NormalizedDistribution,
    seed: u64,
    budget: usize,
) -> ResampleOutcome {
    if !dist.starved.is_empty() {
        return ResampleOutcome::FallbackNeeded {
            resamples: 0,
            remaining_bad: 0,
            reason: format!("{} starved vertices", dist.starved.len()),
        };
    }
    let rng = KeyedRng::new(seed);
    let mut draws = vec![0u64; state.n()];
    let mut assignment: Vec<Option<Color>> = state.coloring().to_vec();
    let uncolored = state.uncolored_vertices();
    for &u in &uncolored {
        assignment[u] = Some(draw(dist, &rng, u, 0));
        draws[u] = 1;
    }
    let mut bad: BTreeSet<BadEvent> = find_bad_events(state, &assignment).into_iter().collect();
    let mut resamples = 0;
    let mut scratch = Vec::new();
    while let Some(&ev) = bad.iter().next() {
        if resamples >= budget {
            return ResampleOutcome::FallbackNeeded {
                resamples,
                remaining_bad: bad.len(),
                reason: "resampling budget exhausted".to_string(),
            };
        }
        resamples += 1;
        let vs: Vec<Vertex> = ev.vertices().to_vec();
        scratch.clear();
        for &u in &vs {
            events_at(state, &assignment, u, &mut scratch);
        }
        for e in &scratch {
            bad.remove(e);
        }
        for &u in &vs {
            assignment[u] = Some(draw(dist, &rng, u, draws[u]));
            draws[u] += 1;
        }
        scratch.clear();
        for &u in &vs {
            events_at(state, &assignment, u, &mut scratch);
        }
        bad.extend(scratch.iter().copied());
    }
    ResampleOutcome::Success {
        coloring: assignment
            .into_iter()
            .map(|c| c.expect("every vertex assigned"))
            .collect(),
        resamples,
    }
}

/// Local Lemma conditions for the residual instance. The dependency sum of
/// an event is bounded by the total probability of all events through each
/// of its vertices (the event itself included).
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct LllReport {
    pub events_a: usize,
    pub events_b: usize,
    pub max_prob: f64,
    pub max_neighborhood_sum: f64,
    pub prob_condition: bool,
    pub neighborhood_condition: bool,
    pub satisfied: bool,
    /// Largest `Pr[A_uvw] / e_uvw` (at most 8 when every residual mass is at
    /// least 1/2).
    pub max_a_over_edge_weight: f64,
    /// Largest `Σ_{c, ux ∈ G_c} Pr[B_{ux,c}] / f_u` (at most 4 likewise).
    pub max_b_over_f: f64,
    pub min_mass: f64,
}

pub fn lll_condition_report(state: &NibbleState, dist: &NormalizedDistribution) -> LllReport {
    let n = state.n();
    let h = state.hypergraph();
    let mut load = vec![0.0; n];
    let mut max_prob: f64 = 0.0;
    let mut max_a_ratio: f64 = 0.0;
    let mut prob_a = Vec::with_capacity(h.edges3().len());
    for &[a, b, c] in h.edges3() {
        let pr: f64 = dist.support[a]
            .iter()
            .map(|&(col, p)| p * dist.prob(b, col) * dist.prob(c, col))
            .sum();
        let ew: f64 = state
            .lists()
            .list(a)
            .iter()
            .zip(state.weights(a))
            .map(|(&col, &p)| p * state.weight(b, col) * state.weight(c, col))
            .sum();
        if ew > 0.0 {
            max_a_ratio = max_a_ratio.max(pr / ew);
        }
        for x in [a, b, c] {
            load[x] += pr;
        }
        max_prob = max_prob.max(pr);
        prob_a.push(pr);
    }
    let mut events_b = 0;
    let mut b_edges: Vec<([Vertex; 2], f64)> = Vec::new();
    let mut max_b_ratio: f64 = 0.0;
    let mut b_load = vec![0.0; n];
    for u in state.uncolored_vertices() {
        let mut f_u = 0.0;
        for &(c, pu) in &dist.support[u] {
            for v in state.graphs().neighbors(u, c) {
                let pv = dist.prob(v, c);
                f_u += state.weight(u, c) * state.weight(v, c);
                let pr = pu * pv;
                b_load[u] += pr;
                if u < v && pr > 0.0 {
                    events_b += 1;
                    b_edges.push(([u, v], pr));
                    max_prob = max_prob.max(pr);
                }
            }
        }
        if f_u > 0.0 {
            max_b_ratio = max_b_ratio.max(b_load[u] / f_u);
        }
    }
    for u in 0..n {
        load[u] += b_load[u];
    }
    let mut max_nb: f64 = 0.0;
    for &e in h.edges3() {
        max_nb = max_nb.max(e.iter().map(|&x| load[x]).sum());
    }
    for &([u, v], _) in &b_edges {
        max_nb = max_nb.max(load[u] + load[v]);
    }
    let min_mass = state
        .uncolored_vertices()
        .into_iter()
        .map(|u| dist.mass[u])
        .fold(f64::INFINITY, f64::min);
    let prob_condition = max_prob <= 0.25;
    let neighborhood_condition = max_nb <= 0.25;
    LllReport {
        events_a: prob_a.iter().filter(|&&p| p > 0.0).count(),
        events_b,
        max_prob,
        max_neighborhood_sum: max_nb,
        prob_condition,
        neighborhood_condition,
        satisfied: prob_condition && neighborhood_condition,
        max_a_over_edge_weight: max_a_ratio,
        max_b_over_f: max_b_ratio,
        min_mass: if min_mass.is_finite() { min_mass } else { 1.0 },
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(tag = "outcome", rename_all = "snake_case")]
pub enum GreedyOutcome {
    Colored { coloring: Vec<Color> },
    Infeasible { vertex: Vertex },
}

/// Colors the remaining vertices one at a time, most constrained first,
/// with the smallest list color that completes no monochromatic edge of the
/// original input. Starts from `partial`.
pub fn greedy_fallback(state: &NibbleState, partial: &[Option<Color>]) -> GreedyOutcome {
    let h = state.original();
    let lists = state.lists();
    let mut coloring = partial.to_vec();
    let mut order: Vec<Vertex> = (0..h.n()).filter(|&u| coloring[u].is_none()).collect();
    let residual_degree = |u: Vertex| h.incident2(u).len() + h.incident3(u).len();
    order.sort_by_key(|&u| (std::cmp::Reverse(residual_degree(u)), u));
    for u in order {
        let blocked = |c: Color| {
            h.neighbors2(u).any(|v| coloring[v] == Some(c))
                || h.links3(u)
                    .any(|[v, w]| coloring[v] == Some(c) && coloring[w] == Some(c))
        };
        match lists.list(u).iter().copied().find(|&c| !blocked(c)) {
            Some(c) => coloring[u] = Some(c),
            None => return GreedyOutcome::Infeasible { vertex: u },
        }
    }
    GreedyOutcome::Colored {
        coloring: coloring
            .into_iter()
            .map(|c| c.expect("all colored"))
            .collect(),
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum FinisherMode {
    /// Resampling, then greedy if needed.
    Mt,
    Greedy,
    /// Only the Local Lemma report; the residual stays uncolored.
    ReportOnly,
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct FinisherOptions {
    pub mode: FinisherMode,
    pub budget: usize,
    pub floor: f64,
    pub seed: u64,
}

impl Default for FinisherOptions {
    fn default() -> Self {
        Self {
            mode: FinisherMode::Mt,
            budget: DEFAULT_BUDGET,
            floor: DEFAULT_STARVATION_FLOOR,
            seed: 0,
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum FinishMethod {
    /// Nothing was left to color.
    None,
    Resampling,
    Greedy,
    Skipped,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct FinishResult {
    /// Total coloring when one was produced.
    pub coloring: Option<Vec<Color>>,
    pub method: FinishMethod,
    pub residual: usize,
    pub resamples: usize,
    pub fallback_reason: Option<String>,
    pub starved: Vec<Vertex>,
    pub lll: LllReport,
    /// Verdict of the verifier on the input, or `None` without a coloring.
    pub verdict: Option<Verdict>,
    /// Vertex the greedy pass could not color.
    pub infeasible_vertex: Option<Vertex>,
}

impl FinishResult {
    pub fn is_success(&self) -> bool {
        self.verdict.as_ref().is_some_and(Verdict::is_ok)
    }
}

/// Completes the nibble's partial coloring per `opts` and verifies the
/// result against the original input and lists.
pub fn finish(state: &NibbleState, opts: &FinisherOptions) -> Result<FinishResult> {
    let dist = normalize(state, opts.floor);
    let lll = lll_condition_report(state, &dist);
    let residual = state.uncolored_count();
    let mut res = FinishResult {
        coloring: None,
        method: FinishMethod::Skipped,
        residual,
        resamples: 0,
        fallback_reason: None,
        starved: dist.starved.clone(),
        lll,
        verdict: None,
        infeasible_vertex: None,
    };
    if opts.mode == FinisherMode::ReportOnly {
        return Ok(res);
    }
    let mut use_greedy = opts.mode == FinisherMode::Greedy;
    if !use_greedy {
        match resample_until_clear(state, &dist, opts.seed, opts.budget) {
            ResampleOutcome::Success {
                coloring,
                resamples,
            } => {
                res.coloring = Some(coloring);
                res.resamples = resamples;
                res.method = if residual == 0 {
                    FinishMethod::None
                } else {
                    FinishMethod::Resampling
                };
            }
            ResampleOutcome::FallbackNeeded {
                resamples, reason, ..
            } => {
                res.resamples = resamples;
                res.fallback_reason = Some(reason);
                use_greedy = true;
            }
        }
    }
    if use_greedy {
        res.method = FinishMethod::Greedy;
        match greedy_fallback(state, state.coloring()) {
            GreedyOutcome::Colored { coloring } => res.coloring = Some(coloring),
            GreedyOutcome::Infeasible { vertex } => res.infeasible_vertex = Some(vertex),
        }
    }
    res.verdict = res
        .coloring
        .as_ref()
        .map(|c| verify_coloring(state.original(), Some(state.lists()), c));
    Ok(res)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::hypergraph::RankedHypergraph;
    use crate::lists::ListAssignment;
    use crate::nibble::RunOptions;
    use crate::params::{NibbleParams, Parameters};

    fn state(h: &RankedHypergraph, colors: usize, p_hat: f64) -> NibbleState {
        let p = Parameters::practical(
            3.0,
            1.0,
            1.0,
            NibbleParams {
                colors,
                iterations: 1,
                theta: 0.3,
                p_hat,
            },
        )
        .unwrap();
        NibbleState::init(
            h,
            &ListAssignment::uniform(h.n(), colors),
            &p,
            &RunOptions::default(),
        )
        .unwrap()
    }

    #[test]
    fn normalize_rescales() {
        let h = RankedHypergraph::empty(1);
        let mut s = state(&h, 2, 0.5);
        s.set_cell(0, 0, 0.3, false).unwrap();
        s.set_cell(0, 1, 0.1, false).unwrap();
        let d = normalize(&s, DEFAULT_STARVATION_FLOOR);
        assert!((d.prob(0, 0) - 0.75).abs() < 1e-15);
        assert!((d.prob(0, 1) - 0.25).abs() < 1e-15);
        s.set_cell(0, 1, 0.0, false).unwrap();
        assert_eq!(normalize(&s, 1e-6).support[0], vec![(0, 1.0)]);
        s.set_cell(0, 0, 0.0, false).unwrap();
        assert_eq!(normalize(&s, 1e-6).starved, vec![0]);
    }

    #[test]
    fn frozen_colors_excluded() {
        let h = RankedHypergraph::empty(1);
        let mut s = state(&h, 4, 0.5);
        s.set_cell(0, 2, 0.5, true).unwrap();
        let d = normalize(&s, 1e-6);
        assert_eq!(d.prob(0, 2), 0.0);
        assert!((d.support[0].iter().map(|x| x.1).sum::<f64>() - 1.0).abs() < 1e-12);
    }

    #[test]
    fn bad_events() {
        let h = RankedHypergraph::from_edges(5, &[[3, 4]], &[[0, 1, 2]]).unwrap();
        let s = state(&h, 8, 0.5);
        let all5 = vec![Some(5), Some(5), Some(5), Some(1), Some(2)];
        assert_eq!(
            find_bad_events(&s, &all5),
            vec![BadEvent::A { edge: [0, 1, 2] }]
        );
        let distinct: Vec<_> = (0..5).map(Some).collect();
        assert!(find_bad_events(&s, &distinct).is_empty());
        let b = vec![Some(0), Some(1), Some(2), Some(3), Some(3)];
        assert_eq!(
            find_bad_events(&s, &b),
            vec![BadEvent::B {
                color: 3,
                edge: [3, 4]
            }]
        );
    }

    #[test]
    fn lll_uniform_four_colors_one_edge() {
        let h = RankedHypergraph::from_edges(3, &[], &[[0, 1, 2]]).unwrap();
        let s = state(&h, 4, 0.5);
        let r = lll_condition_report(&s, &normalize(&s, 1e-6));
        assert!((r.max_prob - 1.0 / 16.0).abs() < 1e-15);
        assert!(r.prob_condition);
        // each vertex carries the one event: 3/16
        assert!((r.max_neighborhood_sum - 3.0 / 16.0).abs() < 1e-15);
        assert!(r.satisfied);
    }

    #[test]
    fn lll_empty_residual_vacuous() {
        let s = state(&RankedHypergraph::empty(0), 2, 0.5);
        assert!(lll_condition_report(&s, &normalize(&s, 1e-6)).satisfied);
    }

    #[test]
    fn resampling_trivial_cases() {
        let s = state(&RankedHypergraph::empty(4), 3, 0.5);
        let d = normalize(&s, 1e-6);
        match resample_until_clear(&s, &d, 1, 10) {
            ResampleOutcome::Success { resamples, .. } => assert_eq!(resamples, 0),
            other => panic!("{other:?}"),
        }
        // disjoint supports on one edge
        let h = RankedHypergraph::from_edges(3, &[], &[[0, 1, 2]]).unwrap();
        let mut s = state(&h, 3, 1.0);
        for u in 0..3 {
            for c in 0..3 {
                s.set_cell(u, c, if c == u { 1.0 } else { 0.0 }, false)
                    .unwrap();
            }
        }
        let d = normalize(&s, 1e-6);
        match resample_until_clear(&s, &d, 1, 10) {
            ResampleOutcome::Success {
                resamples,
                coloring,
            } => {
                assert_eq!(resamples, 0);
                assert_eq!(coloring, vec![0, 1, 2]);
            }
            other => panic!("{other:?}"),
        }
    }

    #[test]
    fn impossible_residual_needs_fallback() {
        let h = RankedHypergraph::from_edges(3, &[], &[[0, 1, 2]]).unwrap();
        let s = state(&h, 1, 1.0);
        let d = normalize(&s, 1e-6);
        assert!(matches!(
            resample_until_clear(&s, &d, 1, 50),
            ResampleOutcome::FallbackNeeded { resamples: 50, .. }
        ));
        assert_eq!(
            greedy_fallback(&s, s.coloring()),
            GreedyOutcome::Infeasible { vertex: 2 }
        );
    }

    #[test]
    fn greedy_avoids_blocked_color() {
        let h = RankedHypergraph::from_edges(2, &[[0, 1]], &[]).unwrap();
        let s = state(&h, 2, 0.5);
        match greedy_fallback(&s, &[None, Some(0)]) {
            GreedyOutcome::Colored { coloring } => assert_eq!(coloring, vec![1, 0]),
            other => panic!("{other:?}"),
        }
        let empty = state(&RankedHypergraph::empty(0), 2, 0.5);
        assert_eq!(
            greedy_fallback(&empty, &[]),
            GreedyOutcome::Colored { coloring: vec![] }
        );
    }

    #[test]
    fn finish_modes() {
        let h = RankedHypergraph::from_edges(4, &[[0, 3]], &[[0, 1, 2]]).unwrap();
        let s = state(&h, 3, 0.5);
        for mode in [FinisherMode::Mt, FinisherMode::Greedy] {
            let r = finish(
                &s,
                &FinisherOptions {
                    mode,
                    ..Default::default()
                },
            )
            .unwrap();
            assert!(r.is_success(), "{mode:?}: {r:?}");
        }
        let r = finish(
            &s,
            &FinisherOptions {
                mode: FinisherMode::ReportOnly,
                ..Default::default()
            },
        )
        .unwrap();
        assert!(r.coloring.is_none());
        assert_eq!(r.residual, 4);
    }
}
