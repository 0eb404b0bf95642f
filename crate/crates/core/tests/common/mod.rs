//! Independent oracles shared by the integration and acceptance tests.

#![allow(dead_code)]

use std::collections::BTreeSet;

use rand::seq::SliceRandom;
use rand::Rng;
use rand_chacha::ChaCha8Rng;

use trifree_color::{Edge, RankedHypergraph, TriangleKind, TriangleWitness, Vertex};

/// Random rank-3 hypergraph with `m2` 2-edges and `m3` 3-edges (duplicates
/// skipped, so the counts are upper bounds).
pub fn random_rank3(rng: &mut ChaCha8Rng, n: usize, m2: usize, m3: usize) -> RankedHypergraph {
    let mut e2: BTreeSet<[Vertex; 2]> = BTreeSet::new();
    let mut e3: BTreeSet<[Vertex; 3]> = BTreeSet::new();
    if n >= 2 {
        for _ in 0..m2 {
            let mut p = [rng.gen_range(0..n), rng.gen_range(0..n)];
            if p[0] != p[1] {
                p.sort_unstable();
                e2.insert(p);
            }
        }
    }
    if n >= 3 {
        let all: Vec<Vertex> = (0..n).collect();
        for _ in 0..m3 {
            let mut t: Vec<Vertex> = all.choose_multiple(rng, 3).copied().collect();
            t.sort_unstable();
            e3.insert([t[0], t[1], t[2]]);
        }
    }
    let e2: Vec<_> = e2.into_iter().collect();
    let e3: Vec<_> = e3.into_iter().collect();
    RankedHypergraph::from_edges(n, &e2, &e3).expect("valid random hypergraph")
}

fn kind_of(edges: &[Edge; 3]) -> TriangleKind {
    let triples = edges.iter().filter(|e| e.len() == 3).count();
    if triples == 0 {
        return TriangleKind::Graph;
    }
    if triples < 3 {
        return TriangleKind::Mixed;
    }
    let span: BTreeSet<Vertex> = edges.iter().flat_map(|e| e.vertices().to_vec()).collect();
    match span.len() {
        4 => TriangleKind::K4Minus,
        5 => TriangleKind::F5,
        _ => TriangleKind::C3,
    }
}

/// Every triangle found by scanning all triples of distinct edges and every
/// assignment of the three roles, in canonical witness form.
pub fn brute_triangles(h: &RankedHypergraph) -> BTreeSet<TriangleWitness> {
    let edges: Vec<Edge> = h.edges().collect();
    let mut out = BTreeSet::new();
    let m = edges.len();
    for i in 0..m {
        for j in i + 1..m {
            for k in j + 1..m {
                let trio = [edges[i], edges[j], edges[k]];
                for perm in [
                    [0, 1, 2],
                    [0, 2, 1],
                    [1, 0, 2],
                    [1, 2, 0],
                    [2, 0, 1],
                    [2, 1, 0],
                ] {
                    let (e, f, g) = (trio[perm[0]], trio[perm[1]], trio[perm[2]]);
                    for &u in e.vertices() {
                        for &v in e.vertices() {
                            for &w in f.vertices() {
                                if u == v || v == w || u == w {
                                    continue;
                                }
                                if !(f.contains(v) && g.contains(w) && g.contains(u)) {
                                    continue;
                                }
                                if [u, v, w]
                                    .iter()
                                    .any(|&x| e.contains(x) && f.contains(x) && g.contains(x))
                                {
                                    continue;
                                }
                                out.insert(canonical(u, v, w, e, f, g));
                            }
                        }
                    }
                }
            }
        }
    }
    out
}

/// Canonical form: vertices ascending, the i-th edge covering the i-th
/// cyclic pair of the sorted vertices.
fn canonical(u: Vertex, v: Vertex, w: Vertex, e: Edge, f: Edge, g: Edge) -> TriangleWitness {
    let covering = |a: Vertex, b: Vertex| {
        let key = |x: Vertex, y: Vertex| (x.min(y), x.max(y));
        let want = key(a, b);
        if want == key(u, v) {
            e
        } else if want == key(v, w) {
            f
        } else {
            g
        }
    };
    let mut vs = [u, v, w];
    vs.sort_unstable();
    let edges = [
        covering(vs[0], vs[1]),
        covering(vs[1], vs[2]),
        covering(vs[2], vs[0]),
    ];
    TriangleWitness {
        vertices: vs,
        kind: kind_of(&edges),
        edges,
    }
}

/// Survival probability by summing over all `2^k` activation patterns.
pub fn enumerate_survival(probs: &[f64], pairs: &[[usize; 2]], singletons: &[usize]) -> f64 {
    let k = probs.len();
    assert!(k <= 24, "enumeration oracle is exponential");
    let mut total = 0.0;
    for mask in 0u32..(1u32 << k) {
        let on = |i: usize| mask >> i & 1 == 1;
        let lost = pairs.iter().any(|&[a, b]| on(a) && on(b)) || singletons.iter().any(|&s| on(s));
        if lost {
            continue;
        }
        let mut p = 1.0;
        for (i, &a) in probs.iter().enumerate() {
            p *= if on(i) { a } else { 1.0 - a };
        }
        total += p;
    }
    total
}

/// One-line properness check, independent of the library verifier.
pub fn brute_proper(h: &RankedHypergraph, coloring: &[usize]) -> bool {
    coloring.len() == h.n()
        && h.edges().all(|e| {
            e.vertices()
                .iter()
                .any(|&x| coloring[x] != coloring[e.vertices()[0]])
        })
}

/// Properness of a partial coloring: no edge fully colored with one color.
pub fn brute_partial_proper(h: &RankedHypergraph, coloring: &[Option<usize>]) -> bool {
    h.edges().all(|e| {
        let cs: Vec<Option<usize>> = e.vertices().iter().map(|&x| coloring[x]).collect();
        cs.iter().any(Option::is_none) || cs.iter().any(|&c| c != cs[0])
    })
}

/// Naive codegree recount over all 3-edges.
pub fn max_codegree(h: &RankedHypergraph) -> usize {
    let mut best = 0;
    for a in 0..h.n() {
        for b in a + 1..h.n() {
            let c = h
                .edges3()
                .iter()
                .filter(|t| t.contains(&a) && t.contains(&b))
                .count();
            best = best.max(c);
        }
    }
    best
}

/// Naive maximum 2-degree.
pub fn max_degree2(h: &RankedHypergraph) -> usize {
    (0..h.n())
        .map(|x| h.edges2().iter().filter(|e| e.contains(&x)).count())
        .max()
        .unwrap_or(0)
}
