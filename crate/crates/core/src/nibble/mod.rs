//! The iterative semi-random coloring engine.
//!
//! Each iteration activates colors at random, works out which colors each
//! vertex loses to its neighbours, rescales the surviving weights so that
//! every weight is a martingale, colors vertices with a surviving activated
//! color, and records in the color graphs which pairs may no longer share a
//! color.
//!
//! Cells are stored per vertex in the order of that vertex's (sorted) list.

mod graphs;
mod stats;
mod survival;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::harness::verify::{verify_partial, Verdict};
use crate::hypergraph::{RankedHypergraph, Vertex};
use crate::lists::{Color, ListAssignment};
use crate::params::{NibbleParams, Parameters};
use crate::rng::{KeyedRng, Phase};
use crate::triangle::find_triangles;

pub use graphs::ColorGraphs;
pub use stats::{Aggregate, EnvelopeCheck, IterationStats, Trace, VertexStats};
pub use survival::{
    Link, McKey, QKind, QMode, SurvivalEntry, SurvivalOptions, DEFAULT_EXACT_LIMIT,
    DEFAULT_MC_SAMPLES,
};

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize, Default)]
pub struct RunOptions {
    pub survival: SurvivalOptions,
    /// Thread count; `None` uses the global pool.
    pub workers: Option<usize>,
    /// Check weight, frozen-set, color-graph and triangle invariants every
    /// iteration.
    pub debug_invariants: bool,
    /// Skip the triangle-freeness check at initialisation.
    pub skip_triangle_check: bool,
}

#[derive(Clone, Debug)]
pub struct NibbleState {
    iteration: usize,
    original: RankedHypergraph,
    // 3-edges of the input restricted to the uncolored vertices
    h: RankedHypergraph,
    graphs: ColorGraphs,
    lists: ListAssignment,
    weights: Vec<Vec<f64>>,
    frozen: Vec<Vec<bool>>,
    uncolored: Vec<bool>,
    coloring: Vec<Option<Color>>,
    params: Parameters,
    nibble: NibbleParams,
    h0: Vec<f64>,
}

/// Activated colors per vertex, sorted. Empty for colored vertices.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ActivationSample {
    pub iteration: usize,
    pub gamma: Vec<Vec<Color>>,
}

impl ActivationSample {
    pub fn is_active(&self, v: Vertex, c: Color) -> bool {
        self.gamma[v].binary_search(&c).is_ok()
    }
}

/// Lost colors per vertex (restricted to the vertex's list), sorted.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct LostColors {
    pub lost: Vec<Vec<Color>>,
}

impl LostColors {
    pub fn contains(&self, u: Vertex, c: Color) -> bool {
        self.lost[u].binary_search(&c).is_ok()
    }
}

/// `q_u(c)` for every uncolored `u` and every list color with positive,
/// unfrozen weight. Aligned with the lists.
#[derive(Clone, Debug, PartialEq)]
pub struct SurvivalTable {
    pub entries: Vec<Vec<Option<SurvivalEntry>>>,
}

impl SurvivalTable {
    pub fn count(&self, kind: QKind) -> usize {
        self.entries
            .iter()
            .flatten()
            .flatten()
            .filter(|e| e.kind == kind)
            .count()
    }
}

/// Result of the weight update, not yet applied.
#[derive(Clone, Debug, PartialEq)]
pub struct WeightUpdate {
    pub weights: Vec<Vec<f64>>,
    pub frozen: Vec<Vec<bool>>,
    /// Colors whose equalising coin came up heads, per vertex.
    pub eta_heads: Vec<Vec<Color>>,
    pub flip1_cells: usize,
    pub flip2_cells: usize,
}

#[derive(Clone, Debug)]
pub struct RunResult {
    pub coloring: Vec<Option<Color>>,
    pub state: NibbleState,
    pub trace: Trace,
}

fn entropy(ws: &[f64]) -> f64 {
    ws.iter().filter(|&&p| p > 0.0).map(|&p| -p * p.ln()).sum()
}

impl NibbleState {
    /// Uniform initial weights `1/C`, empty frozen sets, every color graph a
    /// copy of the input's 2-edges.
    pub fn init(
        h: &RankedHypergraph,
        lists: &ListAssignment,
        params: &Parameters,
        opts: &RunOptions,
    ) -> Result<Self> {
        let nibble = params.nibble_params()?;
        if lists.n() != h.n() {
            return Err(Error::input(format!(
                "{} lists for {} vertices",
                lists.n(),
                h.n()
            )));
        }
        if h.n() > 0 && lists.uniform_size() != Some(nibble.colors) {
            return Err(Error::input(format!(
                "every list must hold exactly C = {} colors",
                nibble.colors
            )));
        }
        let start = 1.0 / nibble.colors as f64;
        if start > nibble.p_hat {
            return Err(Error::parameter(format!(
                "1/C = {start} exceeds the cap p_hat = {}",
                nibble.p_hat
            )));
        }
        if nibble.theta * nibble.p_hat > 1.0 {
            return Err(Error::parameter("theta * p_hat exceeds 1"));
        }
        if !opts.skip_triangle_check {
            if let Some(w) = find_triangles(h, 1).into_iter().next() {
                return Err(Error::Triangle(Box::new(w)));
            }
        }
        let n = h.n();
        let weights: Vec<Vec<f64>> = (0..n).map(|u| vec![start; lists.list(u).len()]).collect();
        let h0 = weights.iter().map(|w| entropy(w)).collect();
        Ok(Self {
            iteration: 0,
            original: h.clone(),
            h: h.three_uniform_part(),
            graphs: ColorGraphs::new(h),
            lists: lists.clone(),
            frozen: (0..n).map(|u| vec![false; lists.list(u).len()]).collect(),
            weights,
            uncolored: vec![true; n],
            coloring: vec![None; n],
            params: *params,
            nibble,
            h0,
        })
    }

    pub fn iteration(&self) -> usize {
        self.iteration
    }

    pub fn n(&self) -> usize {
        self.original.n()
    }

    pub fn original(&self) -> &RankedHypergraph {
        &self.original
    }

    /// `H_i`: 3-edges of the input on the uncolored vertices.
    pub fn hypergraph(&self) -> &RankedHypergraph {
        &self.h
    }

    pub fn graphs(&self) -> &ColorGraphs {
        &self.graphs
    }

    pub fn lists(&self) -> &ListAssignment {
        &self.lists
    }

    pub fn params(&self) -> &Parameters {
        &self.params
    }

    pub fn nibble_params(&self) -> &NibbleParams {
        &self.nibble
    }

    pub fn coloring(&self) -> &[Option<Color>] {
        &self.coloring
    }

    pub fn is_uncolored(&self, u: Vertex) -> bool {
        self.uncolored[u]
    }

    pub fn uncolored_vertices(&self) -> Vec<Vertex> {
        (0..self.n()).filter(|&u| self.uncolored[u]).collect()
    }

    pub fn uncolored_count(&self) -> usize {
        self.uncolored.iter().filter(|&&x| x).count()
    }

    fn slot(&self, u: Vertex, c: Color) -> Option<usize> {
        let l = self.lists.list(u);
        if l.get(c) == Some(&c) {
            return Some(c);
        }
        l.binary_search(&c).ok()
    }

    /// `p_u(c)`; zero for colors outside the list.
    pub fn weight(&self, u: Vertex, c: Color) -> f64 {
        self.slot(u, c).map_or(0.0, |k| self.weights[u][k])
    }

    /// Weights of `u` in list order.
    pub fn weights(&self, u: Vertex) -> &[f64] {
        &self.weights[u]
    }

    pub fn is_frozen(&self, u: Vertex, c: Color) -> bool {
        self.slot(u, c).is_some_and(|k| self.frozen[u][k])
    }

    /// `B(u)`, sorted.
    pub fn frozen_colors(&self, u: Vertex) -> Vec<Color> {
        self.lists
            .list(u)
            .iter()
            .zip(&self.frozen[u])
            .filter(|(_, &f)| f)
            .map(|(&c, _)| c)
            .collect()
    }

    pub fn frozen_cell_count(&self) -> usize {
        (0..self.n())
            .filter(|&u| self.uncolored[u])
            .map(|u| self.frozen[u].iter().filter(|&&f| f).count())
            .sum()
    }

    /// Uncolored vertices whose weights are all zero.
    pub fn starved(&self) -> Vec<Vertex> {
        (0..self.n())
            .filter(|&u| self.uncolored[u] && self.weights[u].iter().all(|&p| p == 0.0))
            .collect()
    }

    /// Overwrites one cell, for building fixtures. `frozen` requires
    /// `p = p̂`.
    pub fn set_cell(&mut self, u: Vertex, c: Color, p: f64, frozen: bool) -> Result<()> {
        let k = self
            .slot(u, c)
            .ok_or_else(|| Error::input(format!("color {c} is not on the list of {u}")))?;
        if !(0.0..=self.nibble.p_hat).contains(&p) {
            return Err(Error::input(format!("weight {p} outside [0, p_hat]")));
        }
        if frozen && p != self.nibble.p_hat {
            return Err(Error::input("a frozen cell must hold p_hat"));
        }
        self.weights[u][k] = p;
        self.frozen[u][k] = frozen;
        Ok(())
    }

    /// Local constraint structure of the cell `(u, c)`.
    pub fn link(&self, u: Vertex, c: Color) -> Link {
        let theta = self.nibble.theta;
        let mut verts: Vec<Vertex> = self.h.neighbors3(u);
        let pos = |verts: &[Vertex], x: Vertex| verts.binary_search(&x).expect("link vertex");
        let pairs: Vec<[usize; 2]> = self
            .h
            .links3(u)
            .map(|[v, w]| [pos(&verts, v), pos(&verts, w)])
            .collect();
        let base = verts.len();
        let mut singletons = Vec::new();
        for v in self.graphs.neighbors(u, c) {
            match verts[..base].binary_search(&v) {
                Ok(i) => singletons.push(i),
                Err(_) => {
                    singletons.push(verts.len());
                    verts.push(v);
                }
            }
        }
        let probs = verts.iter().map(|&v| theta * self.weight(v, c)).collect();
        Link {
            probs,
            pairs,
            singletons,
        }
    }

    /// `q_u(c)` for a single cell.
    pub fn survival_prob(
        &self,
        u: Vertex,
        c: Color,
        opts: &SurvivalOptions,
        rng: &KeyedRng,
    ) -> Result<SurvivalEntry> {
        if u >= self.n() || !self.uncolored[u] {
            return Err(Error::contract(format!(
                "vertex {u} is not an uncolored vertex"
            )));
        }
        let k = self
            .slot(u, c)
            .ok_or_else(|| Error::contract(format!("color {c} is not on the list of {u}")))?;
        if self.frozen[u][k] {
            return Err(Error::contract(format!("color {c} is frozen at {u}")));
        }
        Ok(self.link(u, c).evaluate(opts, self.mc_key(rng, u, c)))
    }

    fn mc_key(&self, rng: &KeyedRng, u: Vertex, c: Color) -> McKey {
        McKey {
            rng: *rng,
            iteration: self.iteration as u64,
            vertex: u as u64,
            color: c as u64,
        }
    }

    pub fn sample_activations(&self, rng: &KeyedRng) -> Result<ActivationSample> {
        let theta = self.nibble.theta;
        let i = self.iteration as u64;
        let gamma = (0..self.n())
            .into_par_iter()
            .map(|u| {
                if !self.uncolored[u] {
                    return Ok(Vec::new());
                }
                let mut out = Vec::new();
                for (&c, &p) in self.lists.list(u).iter().zip(&self.weights[u]) {
                    if p <= 0.0 {
                        continue;
                    }
                    let a = theta * p;
                    if a > 1.0 {
                        return Err(Error::parameter(format!(
                            "activation probability {a} exceeds 1"
                        )));
                    }
                    if rng.bernoulli(a, i, Phase::Activation, u as u64, c as u64) {
                        out.push(c);
                    }
                }
                Ok(out)
            })
            .collect::<Result<Vec<_>>>()?;
        Ok(ActivationSample {
            iteration: self.iteration,
            gamma,
        })
    }

    pub fn lost_colors(&self, sample: &ActivationSample) -> LostColors {
        let lost = (0..self.n())
            .into_par_iter()
            .map(|u| {
                if !self.uncolored[u] {
                    return Vec::new();
                }
                let mut out: Vec<Color> = Vec::new();
                for [v, w] in self.h.links3(u) {
                    let (gv, gw) = (&sample.gamma[v], &sample.gamma[w]);
                    let (mut a, mut b) = (0, 0);
                    while a < gv.len() && b < gw.len() {
                        match gv[a].cmp(&gw[b]) {
                            std::cmp::Ordering::Less => a += 1,
                            std::cmp::Ordering::Greater => b += 1,
                            std::cmp::Ordering::Equal => {
                                out.push(gv[a]);
                                a += 1;
                                b += 1;
                            }
                        }
                    }
                }
                for v in self.graphs.base_neighbors(u) {
                    out.extend_from_slice(&sample.gamma[v]);
                }
                for (&c, nbrs) in self.graphs.extra_neighbors(u) {
                    if nbrs.iter().any(|&v| sample.is_active(v, c)) {
                        out.push(c);
                    }
                }
                out.sort_unstable();
                out.dedup();
                out.retain(|&c| self.slot(u, c).is_some());
                out
            })
            .collect();
        LostColors { lost }
    }

    pub fn survival_table(&self, opts: &SurvivalOptions, rng: &KeyedRng) -> SurvivalTable {
        let entries = (0..self.n())
            .into_par_iter()
            .map(|u| {
                if !self.uncolored[u] {
                    return Vec::new();
                }
                self.lists
                    .list(u)
                    .iter()
                    .enumerate()
                    .map(|(k, &c)| {
                        (self.weights[u][k] > 0.0 && !self.frozen[u][k])
                            .then(|| self.link(u, c).evaluate(opts, self.mc_key(rng, u, c)))
                    })
                    .collect()
            })
            .collect();
        SurvivalTable { entries }
    }

    /// New weights: surviving cells with `p/q < p̂` are rescaled to `p/q`
    /// (others drop to 0); every remaining positive cell tosses a coin with
    /// `Pr[heads] = p/p̂` and becomes `p̂` (frozen) or 0.
    pub fn update_weights(
        &self,
        sample: &ActivationSample,
        lost: &LostColors,
        table: &SurvivalTable,
        rng: &KeyedRng,
    ) -> Result<WeightUpdate> {
        let p_hat = self.nibble.p_hat;
        let i = self.iteration as u64;
        debug_assert_eq!(sample.iteration, self.iteration);
        let rows = (0..self.n())
            .into_par_iter()
            .map(|u| {
                if !self.uncolored[u] {
                    return Ok((
                        self.weights[u].clone(),
                        self.frozen[u].clone(),
                        Vec::new(),
                        0,
                        0,
                    ));
                }
                let list = self.lists.list(u);
                let mut w = vec![0.0; list.len()];
                let mut f = vec![false; list.len()];
                let mut heads = Vec::new();
                let (mut n1, mut n2) = (0, 0);
                for (k, &c) in list.iter().enumerate() {
                    let p = self.weights[u][k];
                    if p <= 0.0 {
                        continue;
                    }
                    let frozen = self.frozen[u][k];
                    let q = if frozen {
                        None
                    } else {
                        let e = table.entries[u][k].ok_or_else(|| {
                            Error::contract(format!(
                                "no survival probability for vertex {u}, color {c}"
                            ))
                        })?;
                        Some(e.q)
                    };
                    match q {
                        Some(q) if q > 0.0 && p / q < p_hat => {
                            n1 += 1;
                            if !lost.contains(u, c) {
                                w[k] = p / q;
                            }
                        }
                        _ => {
                            n2 += 1;
                            if rng.bernoulli(p / p_hat, i, Phase::Equalizer, u as u64, c as u64) {
                                w[k] = p_hat;
                                f[k] = true;
                                heads.push(c);
                            }
                        }
                    }
                }
                Ok((w, f, heads, n1, n2))
            })
            .collect::<Result<Vec<_>>>()?;
        let mut out = WeightUpdate {
            weights: Vec::with_capacity(rows.len()),
            frozen: Vec::with_capacity(rows.len()),
            eta_heads: Vec::with_capacity(rows.len()),
            flip1_cells: 0,
            flip2_cells: 0,
        };
        for (w, f, h, n1, n2) in rows {
            out.weights.push(w);
            out.frozen.push(f);
            out.eta_heads.push(h);
            out.flip1_cells += n1;
            out.flip2_cells += n2;
        }
        Ok(out)
    }

    /// Each uncolored vertex with an activated, unfrozen, unlost color takes
    /// the smallest one.
    pub fn assign_colors(
        &self,
        sample: &ActivationSample,
        lost: &LostColors,
    ) -> Vec<(Vertex, Color)> {
        (0..self.n())
            .filter(|&u| self.uncolored[u])
            .filter_map(|u| {
                sample.gamma[u]
                    .iter()
                    .copied()
                    .find(|&c| !self.is_frozen(u, c) && !lost.contains(u, c))
                    .map(|c| (u, c))
            })
            .collect()
    }

    /// Applies an update and the new colors, then grows and prunes the color
    /// graphs and restricts `H` to the vertices still uncolored.
    pub fn apply(&mut self, update: WeightUpdate, newly: &[(Vertex, Color)]) {
        self.weights = update.weights;
        self.frozen = update.frozen;
        for &(u, c) in newly {
            self.coloring[u] = Some(c);
            self.uncolored[u] = false;
        }
        for &(w, c) in newly {
            for [u, v] in self.h.links3(w) {
                if self.uncolored[u] && self.uncolored[v] {
                    self.graphs.add(u, v, c);
                }
            }
        }
        for &(u, _) in newly {
            self.graphs.remove_vertex(u);
        }
        self.h = self.original.three_uniform_part().induce(&self.uncolored);
        self.iteration += 1;
    }

    fn measure(&self) -> (Vec<VertexStats>, f64) {
        let verts = self.uncolored_vertices();
        let edge_weight = |e: [Vertex; 3]| -> f64 {
            let [a, b, c] = e;
            self.lists
                .list(a)
                .iter()
                .zip(&self.weights[a])
                .map(|(&col, &p)| p * self.weight(b, col) * self.weight(c, col))
                .sum()
        };
        let edge_weights: Vec<f64> = self
            .h
            .edges3()
            .par_iter()
            .map(|&e| edge_weight(e))
            .collect();
        let edge_max = edge_weights.iter().copied().fold(0.0, f64::max);
        let stats = verts
            .par_iter()
            .map(|&u| {
                let e = self.h.incident3(u).iter().map(|&i| edge_weights[i]).sum();
                let mut f = 0.0;
                let list = self.lists.list(u);
                let base: Vec<Vertex> = self.graphs.base_neighbors(u).collect();
                for (&c, &p) in list.iter().zip(&self.weights[u]) {
                    if p == 0.0 {
                        continue;
                    }
                    let mut s: f64 = base.iter().map(|&v| self.weight(v, c)).sum();
                    if let Some(ex) = self.graphs.extra_neighbors(u).get(&c) {
                        s += ex.iter().map(|&v| self.weight(v, c)).sum::<f64>();
                    }
                    f += p * s;
                }
                VertexStats {
                    vertex: u,
                    weight_sum: self.weights[u].iter().sum(),
                    e,
                    f,
                    entropy: entropy(&self.weights[u]),
                    degree_h: self.h.incident3(u).len(),
                    degree_g_max: self.graphs.max_degree(u),
                }
            })
            .collect();
        (stats, edge_max)
    }

    /// Invariant checks that are cheap enough to leave on in debug runs.
    fn check_invariants(&self) -> Vec<String> {
        let mut out = Vec::new();
        let p_hat = self.nibble.p_hat;
        for u in 0..self.n() {
            if self.graphs.is_alive(u) != self.uncolored[u] {
                out.push(format!(
                    "vertex {u}: color-graph membership disagrees with uncolored set"
                ));
            }
            if !self.uncolored[u] {
                continue;
            }
            for (k, &p) in self.weights[u].iter().enumerate() {
                if !(0.0..=p_hat).contains(&p) {
                    out.push(format!("vertex {u}: weight {p} outside [0, p_hat]"));
                }
                if self.iteration > 0 && self.frozen[u][k] != (p == p_hat) {
                    out.push(format!("vertex {u}: frozen flag disagrees with weight {p}"));
                }
            }
        }
        out
    }

    /// Whether `H_i ∪ G_c` is triangle-free for every color.
    pub fn color_graphs_triangle_free(&self) -> bool {
        let base = self.original.induce(&self.uncolored);
        if !find_triangles(&base, 1).is_empty() {
            return false;
        }
        self.graphs
            .colors_with_extra_edges()
            .into_iter()
            .collect::<Vec<_>>()
            .par_iter()
            .all(|&c| {
                find_triangles(&base.with_extra_edges2(self.graphs.extra_edges(c)), 1).is_empty()
            })
    }

    /// One full iteration. Mutates the state and returns its statistics.
    pub fn iterate(&mut self, rng: &KeyedRng, opts: &RunOptions) -> Result<IterationStats> {
        let i = self.iteration;
        let (vertices, edge_max) = self.measure();
        let envelopes = stats::envelopes(&self.params, i, &vertices, &self.h0);
        let uncolored_before = vertices.len();

        let sample = self.sample_activations(rng)?;
        let lost = self.lost_colors(&sample);
        let table = self.survival_table(&opts.survival, rng);
        let update = self.update_weights(&sample, &lost, &table, rng)?;
        let newly = self.assign_colors(&sample, &lost);

        let mut st = IterationStats {
            iteration: i,
            uncolored_before,
            newly_colored: newly.len(),
            weight_sum: Aggregate::of(vertices.iter().map(|s| s.weight_sum)),
            e: Aggregate::of(vertices.iter().map(|s| s.e)),
            f: Aggregate::of(vertices.iter().map(|s| s.f)),
            entropy: Aggregate::of(vertices.iter().map(|s| s.entropy)),
            degree_h: Aggregate::of(vertices.iter().map(|s| s.degree_h as f64)),
            degree_g_max: Aggregate::of(vertices.iter().map(|s| s.degree_g_max as f64)),
            edge_weight_max: edge_max,
            envelopes,
            q_exact: table.count(QKind::Exact),
            q_bound: table.count(QKind::LowerBound),
            q_monte_carlo: table.count(QKind::MonteCarlo),
            q_max_std_err: table
                .entries
                .iter()
                .flatten()
                .flatten()
                .map(|e| e.std_err)
                .fold(0.0, f64::max),
            flip1_cells: update.flip1_cells,
            flip2_cells: update.flip2_cells,
            eta_heads: update.eta_heads.iter().map(Vec::len).sum(),
            vertices,
            ..Default::default()
        };

        self.apply(update, &newly);

        st.colored_total = self.n() - self.uncolored_count();
        st.frozen_cells = self.frozen_cell_count();
        st.starved = self.starved().len();
        st.color_graph_extra_edges = self.graphs.extra_edge_count();
        let verdict = verify_partial(&self.original, Some(&self.lists), &self.coloring);
        st.proper = verdict == Verdict::Ok;
        st.first_violation = (!st.proper).then_some(verdict);
        if opts.debug_invariants {
            st.invariant_violations = self.check_invariants();
            st.triangle_free = Some(self.color_graphs_triangle_free());
        }
        Ok(st)
    }
}

fn run_inner(
    h: &RankedHypergraph,
    lists: &ListAssignment,
    params: &Parameters,
    seed: u64,
    opts: &RunOptions,
) -> Result<RunResult> {
    let mut state = NibbleState::init(h, lists, params, opts)?;
    let rng = KeyedRng::new(seed);
    let mut rounds = Vec::new();
    for _ in 0..state.nibble.iterations {
        if state.uncolored_count() == 0 {
            break;
        }
        rounds.push(state.iterate(&rng, opts)?);
    }
    let trace = Trace {
        seed,
        n: state.n(),
        colors: state.nibble.colors,
        iterations_planned: state.nibble.iterations,
        theta: state.nibble.theta,
        p_hat: state.nibble.p_hat,
        q_mode: opts.survival.mode,
        rounds,
        colored: state.n() - state.uncolored_count(),
        uncolored: state.uncolored_count(),
        starved: state.starved(),
    };
    Ok(RunResult {
        coloring: state.coloring.clone(),
        state,
        trace,
    })
}

/// `T` iterations from the initial state, stopping early once every vertex
/// is colored.
pub fn run(
    h: &RankedHypergraph,
    lists: &ListAssignment,
    params: &Parameters,
    seed: u64,
    opts: &RunOptions,
) -> Result<RunResult> {
    match opts.workers {
        Some(w) => {
            let pool = rayon::ThreadPoolBuilder::new()
                .num_threads(w.max(1))
                .build()
                .map_err(|e| Error::input(format!("cannot build worker pool: {e}")))?;
            pool.install(|| run_inner(h, lists, params, seed, opts))
        }
        None => run_inner(h, lists, params, seed, opts),
    }
}
