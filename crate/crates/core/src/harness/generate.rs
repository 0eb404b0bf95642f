//! Seeded instance generators.

use rand::seq::SliceRandom;
use rand::Rng;
use rand_chacha::rand_core::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::hypergraph::{sorted3, Edge, HypergraphBuilder, RankedHypergraph, Vertex};
use crate::triangle::TriangleGuard;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum GeneratorKind {
    /// Pairwise edge-disjoint triples (every codegree at most 1).
    PartialSteiner,
    /// Uniformly random 3-edges.
    Random3,
    /// Uniformly random 3-edges plus random 2-edges.
    RandomRank3,
    /// Random edges, each kept only if it closes no triangle.
    TriangleFreeFiltered,
}

impl std::str::FromStr for GeneratorKind {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "partial_steiner" => Ok(Self::PartialSteiner),
            "random3" => Ok(Self::Random3),
            "random_rank3" => Ok(Self::RandomRank3),
            "triangle_free_filtered" => Ok(Self::TriangleFreeFiltered),
            other => Err(Error::input(format!("unknown generator kind {other:?}"))),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct GeneratorSpec {
    pub kind: GeneratorKind,
    pub n: usize,
    /// Number of 3-edges wanted. When given, it must be met exactly; a target
    /// derived from `delta` alone is best effort.
    pub edges: Option<usize>,
    /// Cap on the 3-degree. Without `edges`, the generator aims for
    /// `⌊nΔ/3⌋` 3-edges.
    pub delta: Option<usize>,
    /// Mean 2-degree (2-edge count `⌊n·d/2⌋`). Ignored by `partial_steiner`
    /// and `random3`.
    pub degree2: f64,
    /// `partial_steiner` only: the complete system, for `n ≡ 3 (mod 6)`.
    pub full: bool,
    /// `triangle_free_filtered` only: probability that a proposal reuses a
    /// pair of an existing 3-edge.
    pub book_bias: f64,
    /// Proposal budget for the rejection-based kinds, as a multiple of the
    /// edge target.
    pub attempts_factor: usize,
    pub seed: u64,
}

impl GeneratorSpec {
    pub fn new(kind: GeneratorKind, n: usize, seed: u64) -> Self {
        Self {
            kind,
            n,
            edges: None,
            delta: None,
            degree2: 0.0,
            full: false,
            book_bias: 0.0,
            attempts_factor: 50,
            seed,
        }
    }

    pub fn with_edges(mut self, m: usize) -> Self {
        self.edges = Some(m);
        self
    }

    pub fn with_delta(mut self, d: usize) -> Self {
        self.delta = Some(d);
        self
    }

    pub fn with_degree2(mut self, d: f64) -> Self {
        self.degree2 = d;
        self
    }

    pub fn with_book_bias(mut self, b: f64) -> Self {
        self.book_bias = b;
        self
    }

    pub fn full(mut self) -> Self {
        self.full = true;
        self
    }

    fn edge_target(&self) -> usize {
        match (self.edges, self.delta) {
            (Some(m), _) => m,
            (None, Some(d)) => self.n * d / 3,
            (None, None) => 0,
        }
    }
}

fn choose3(n: usize) -> u128 {
    let n = n as u128;
    if n < 3 {
        0
    } else {
        n * (n - 1) * (n - 2) / 6
    }
}

fn random_triple(rng: &mut ChaCha8Rng, n: usize) -> [Vertex; 3] {
    loop {
        let (a, b, c) = (
            rng.gen_range(0..n),
            rng.gen_range(0..n),
            rng.gen_range(0..n),
        );
        if a != b && b != c && a != c {
            return sorted3(a, b, c);
        }
    }
}

pub fn generate(spec: &GeneratorSpec) -> Result<RankedHypergraph> {
    let mut rng = ChaCha8Rng::seed_from_u64(spec.seed);
    if !(spec.degree2 >= 0.0 && spec.degree2.is_finite()) {
        return Err(Error::input("2-degree density must be non-negative"));
    }
    match spec.kind {
        GeneratorKind::PartialSteiner => partial_steiner(spec, &mut rng),
        GeneratorKind::Random3 => random_uniform(spec, &mut rng, false),
        GeneratorKind::RandomRank3 => random_uniform(spec, &mut rng, true),
        GeneratorKind::TriangleFreeFiltered => triangle_free(spec, &mut rng),
    }
}

fn random_relabel(rng: &mut ChaCha8Rng, n: usize) -> Vec<Vertex> {
    let mut perm: Vec<Vertex> = (0..n).collect();
    perm.shuffle(rng);
    perm
}

/// The complete system on `n = 6k + 3` points: points are `Z_{2k+1} × Z_3`,
/// with one triple per vertical line and three per pair `x < y`.
fn bose(n: usize) -> Vec<[Vertex; 3]> {
    let m = n / 3;
    let pt = |x: usize, i: usize| x + m * i;
    // x ∘ y = (x + y)/2 mod m, m odd
    let half = m.div_ceil(2);
    let op = |x: usize, y: usize| ((x + y) * half) % m;
    let mut out = Vec::with_capacity(n * (n - 1) / 6);
    for x in 0..m {
        out.push(sorted3(pt(x, 0), pt(x, 1), pt(x, 2)));
    }
    for x in 0..m {
        for y in x + 1..m {
            for i in 0..3 {
                out.push(sorted3(pt(x, i), pt(y, i), pt(op(x, y), (i + 1) % 3)));
            }
        }
    }
    out
}

fn partial_steiner(spec: &GeneratorSpec, rng: &mut ChaCha8Rng) -> Result<RankedHypergraph> {
    let n = spec.n;
    let max_edges = n * n.saturating_sub(1) / 6;
    if spec.full {
        if n % 6 != 3 {
            return Err(Error::input(format!(
                "a complete system is built only for n ≡ 3 (mod 6), got {n}"
            )));
        }
        let perm = random_relabel(rng, n);
        let triples: Vec<[Vertex; 3]> = bose(n)
            .into_iter()
            .map(|[a, b, c]| sorted3(perm[a], perm[b], perm[c]))
            .collect();
        return RankedHypergraph::from_edges(n, &[], &triples);
    }
    let target = spec.edge_target();
    if target > max_edges {
        return Err(Error::input(format!(
            "{target} pair-disjoint triples cannot fit on {n} vertices (at most {max_edges})"
        )));
    }
    let cap = spec.delta.unwrap_or(usize::MAX);
    let mut b = HypergraphBuilder::new(n);
    let mut degree = vec![0usize; n];
    let mut open: Vec<Vertex> = (0..n).collect();
    let budget = spec.attempts_factor.max(1) * target.max(1);
    let mut attempts = 0;
    let mut count = 0;
    while count < target && attempts < budget && open.len() >= 3 {
        attempts += 1;
        // the first vertex is a least-loaded open vertex among a few samples
        let u = (0..3)
            .map(|_| open[rng.gen_range(0..open.len())])
            .min_by_key(|&x| (degree[x], x))
            .expect("non-empty");
        let v = open[rng.gen_range(0..open.len())];
        let w = open[rng.gen_range(0..open.len())];
        if u == v || v == w || u == w {
            continue;
        }
        if b.contains_edge3(u, v, w)
            || b.codegree(u, v) > 0
            || b.codegree(v, w) > 0
            || b.codegree(u, w) > 0
        {
            continue;
        }
        b.add_edge3(u, v, w)?;
        count += 1;
        for x in [u, v, w] {
            degree[x] += 1;
        }
        if [u, v, w].iter().any(|&x| degree[x] >= cap) {
            open.retain(|&x| degree[x] < cap);
        }
    }
    if spec.edges.is_some() && count < target {
        return Err(Error::Generator(format!(
            "placed {count} of {target} pair-disjoint triples in {attempts} attempts"
        )));
    }
    Ok(b.build())
}

fn add_random_edges2(
    b: &mut HypergraphBuilder,
    spec: &GeneratorSpec,
    rng: &mut ChaCha8Rng,
    guard: Option<&mut TriangleGuard>,
) -> Result<()> {
    let n = spec.n;
    let target = (spec.degree2 * n as f64 / 2.0).floor() as usize;
    if target == 0 {
        return Ok(());
    }
    if n < 2 || target > n * (n - 1) / 2 {
        return Err(Error::input(format!(
            "{target} 2-edges cannot fit on {n} vertices"
        )));
    }
    let mut guard = guard;
    let budget = spec.attempts_factor.max(1) * target;
    let mut placed = 0;
    let mut attempts = 0;
    while placed < target && attempts < budget {
        attempts += 1;
        let (u, v) = (rng.gen_range(0..n), rng.gen_range(0..n));
        if u == v || b.contains_edge2(u, v) {
            continue;
        }
        if let Some(g) = guard.as_deref_mut() {
            let e = Edge::pair(u, v);
            if g.would_create_triangle(e) {
                continue;
            }
            g.insert(e);
        }
        b.add_edge2(u, v)?;
        placed += 1;
    }
    if guard.is_none() && placed < target {
        return Err(Error::Generator(format!(
            "placed {placed} of {target} 2-edges"
        )));
    }
    Ok(())
}

fn random_uniform(
    spec: &GeneratorSpec,
    rng: &mut ChaCha8Rng,
    with_pairs: bool,
) -> Result<RankedHypergraph> {
    let n = spec.n;
    let target = spec.edge_target();
    if target as u128 > choose3(n) {
        return Err(Error::input(format!(
            "{target} 3-edges cannot fit on {n} vertices"
        )));
    }
    let cap = spec.delta.unwrap_or(usize::MAX);
    let mut b = HypergraphBuilder::new(n);
    let mut degree = vec![0usize; n];
    let mut open: Vec<Vertex> = if cap > 0 {
        (0..n).collect()
    } else {
        Vec::new()
    };
    let budget = spec.attempts_factor.max(1) * target.max(1);
    let (mut count, mut attempts) = (0, 0);
    while count < target && attempts < budget && open.len() >= 3 {
        attempts += 1;
        let [u, v, w] = if open.len() == n {
            random_triple(rng, n)
        } else {
            let pick: Vec<Vertex> = open.choose_multiple(rng, 3).copied().collect();
            sorted3(pick[0], pick[1], pick[2])
        };
        if b.contains_edge3(u, v, w) {
            continue;
        }
        b.add_edge3(u, v, w)?;
        count += 1;
        for x in [u, v, w] {
            degree[x] += 1;
        }
        if [u, v, w].iter().any(|&x| degree[x] >= cap) {
            open.retain(|&x| degree[x] < cap);
        }
    }
    if spec.edges.is_some() && count < target {
        return Err(Error::Generator(format!(
            "placed {count} of {target} 3-edges in {attempts} attempts"
        )));
    }
    if with_pairs {
        add_random_edges2(&mut b, spec, rng, None)?;
    }
    Ok(b.build())
}

/// Consecutive rejected proposals, per vertex, after which the filtered
/// generator stops.
const STALL_FACTOR: usize = 50;

fn triangle_free(spec: &GeneratorSpec, rng: &mut ChaCha8Rng) -> Result<RankedHypergraph> {
    let n = spec.n;
    let target = spec.edge_target();
    if target as u128 > choose3(n) {
        return Err(Error::input(format!(
            "{target} 3-edges cannot fit on {n} vertices"
        )));
    }
    if !(0.0..=1.0).contains(&spec.book_bias) {
        return Err(Error::input("book bias must lie in [0, 1]"));
    }
    let cap = spec.delta.unwrap_or(usize::MAX);
    let mut b = HypergraphBuilder::new(n);
    let mut guard = TriangleGuard::new(n);
    let mut degree = vec![0usize; n];
    let mut placed: Vec<[Vertex; 3]> = Vec::new();
    // vertices below the degree cap, with their positions for O(1) removal
    let mut open: Vec<Vertex> = if cap > 0 {
        (0..n).collect()
    } else {
        Vec::new()
    };
    let mut slot: Vec<usize> = (0..n).collect();
    let budget = spec.attempts_factor.max(1) * target.max(1);
    let stall_limit = STALL_FACTOR * n.max(1);
    let (mut attempts, mut stalled) = (0, 0);
    while placed.len() < target && attempts < budget && stalled < stall_limit && open.len() >= 3 {
        attempts += 1;
        stalled += 1;
        let [u, v, w] = if !placed.is_empty() && rng.gen_bool(spec.book_bias) {
            let base = placed[rng.gen_range(0..placed.len())];
            let keep = rng.gen_range(0..3);
            let pair: Vec<Vertex> = (0..3).filter(|&i| i != keep).map(|i| base[i]).collect();
            let x = open[rng.gen_range(0..open.len())];
            if pair.contains(&x) {
                continue;
            }
            sorted3(pair[0], pair[1], x)
        } else {
            let i = rng.gen_range(0..open.len());
            let j = rng.gen_range(0..open.len());
            let k = rng.gen_range(0..open.len());
            if i == j || j == k || i == k {
                continue;
            }
            sorted3(open[i], open[j], open[k])
        };
        if b.contains_edge3(u, v, w) || [u, v, w].iter().any(|&x| degree[x] >= cap) {
            continue;
        }
        let e = Edge::Triple([u, v, w]);
        if guard.would_create_triangle(e) {
            continue;
        }
        stalled = 0;
        guard.insert(e);
        b.add_edge3(u, v, w)?;
        placed.push([u, v, w]);
        for x in [u, v, w] {
            degree[x] += 1;
            if degree[x] == cap {
                let at = slot[x];
                let last = *open.last().expect("x is open");
                let end = open.len() - 1;
                open.swap(at, end);
                slot[last] = at;
                open.pop();
            }
        }
    }
    if spec.edges.is_some() && placed.len() < target {
        return Err(Error::Generator(format!(
            "kept {} of {target} 3-edges after {attempts} proposals (max degree {})",
            placed.len(),
            degree.iter().max().copied().unwrap_or(0)
        )));
    }
    add_random_edges2(&mut b, spec, rng, Some(&mut guard))?;
    Ok(b.build())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::triangle::is_triangle_free;

    #[test]
    fn full_system_on_nine_points() {
        let h = generate(&GeneratorSpec::new(GeneratorKind::PartialSteiner, 9, 1).full()).unwrap();
        assert_eq!(h.edges3().len(), 12);
        assert!(h.profile().codegree_max <= 1);
        // every pair covered exactly once
        assert_eq!(h.codegree_pairs().len(), 36);
    }

    #[test]
    fn full_system_larger() {
        for n in [3, 15, 21, 27] {
            let h =
                generate(&GeneratorSpec::new(GeneratorKind::PartialSteiner, n, 5).full()).unwrap();
            assert_eq!(h.edges3().len(), n * (n - 1) / 6);
            assert!(h.profile().codegree_max <= 1);
        }
        assert!(generate(&GeneratorSpec::new(GeneratorKind::PartialSteiner, 7, 0).full()).is_err());
    }

    #[test]
    fn greedy_packing_is_linear() {
        let spec = GeneratorSpec::new(GeneratorKind::PartialSteiner, 200, 3).with_delta(10);
        let h = generate(&spec).unwrap();
        let p = h.profile();
        assert!(p.codegree_max <= 1);
        assert!(p.delta3 <= 10);
        assert!(h.edges3().len() > 600);
    }

    #[test]
    fn random3_empty_and_counts() {
        let h = generate(&GeneratorSpec::new(GeneratorKind::Random3, 10, 0).with_edges(0)).unwrap();
        assert_eq!(h.edge_count(), 0);
        let h =
            generate(&GeneratorSpec::new(GeneratorKind::Random3, 30, 0).with_edges(50)).unwrap();
        assert_eq!(h.edges3().len(), 50);
        assert!(generate(&GeneratorSpec::new(GeneratorKind::Random3, 4, 0).with_edges(5)).is_err());
    }

    #[test]
    fn random_rank3_has_pairs() {
        let spec = GeneratorSpec::new(GeneratorKind::RandomRank3, 40, 2)
            .with_edges(30)
            .with_degree2(2.0);
        let h = generate(&spec).unwrap();
        assert_eq!(h.edges2().len(), 40);
        assert_eq!(h.edges3().len(), 30);
    }

    #[test]
    fn filtered_is_triangle_free_and_seeded() {
        let spec = GeneratorSpec::new(GeneratorKind::TriangleFreeFiltered, 60, 9)
            .with_delta(6)
            .with_degree2(0.5)
            .with_book_bias(0.3);
        let a = generate(&spec).unwrap();
        assert!(is_triangle_free(&a));
        assert_eq!(a, generate(&spec).unwrap());
    }
}
