//! Triangle detection for rank-3 hypergraphs.
//!
//! A triangle is three distinct vertices `u, v, w` and three distinct edges
//! `e, f, g` with `u,v ∈ e`, `v,w ∈ f`, `w,u ∈ g` and
//! `{u,v,w} ∩ e ∩ f ∩ g = ∅`. With edges of size at most three the last
//! condition is equivalent to `w ∉ e`, `u ∉ f`, `v ∉ g`: every edge holds
//! exactly two of the three vertices, which also forces the edges to be
//! distinct.

use std::collections::{BTreeSet, HashMap};

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::hypergraph::{sorted2, Edge, RankedHypergraph, Vertex};

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub enum TriangleKind {
    /// Loose triangle `{abc, cde, efa}`.
    C3,
    /// `{abc, bcd, aed}`.
    F5,
    /// `{abc, bcd, abd}`.
    K4Minus,
    /// At least one 2-edge and at least one 3-edge.
    Mixed,
    /// Three 2-edges.
    Graph,
}

/// A triangle in canonical form: `vertices` ascending, `edges[0]` covers
/// `(v0, v1)`, `edges[1]` covers `(v1, v2)`, `edges[2]` covers `(v2, v0)`.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub struct TriangleWitness {
    pub vertices: [Vertex; 3],
    pub edges: [Edge; 3],
    pub kind: TriangleKind,
}

impl TriangleWitness {
    /// Checks the defining conditions; used by tests and debug assertions.
    pub fn is_valid(&self) -> bool {
        let [u, v, w] = self.vertices;
        let [e, f, g] = &self.edges;
        u != v
            && v != w
            && u != w
            && e != f
            && f != g
            && e != g
            && e.contains(u)
            && e.contains(v)
            && f.contains(v)
            && f.contains(w)
            && g.contains(w)
            && g.contains(u)
            && [u, v, w]
                .iter()
                .all(|&x| !(e.contains(x) && f.contains(x) && g.contains(x)))
    }

    /// Sorted edge triple, the deduplication key alongside `vertices`.
    pub fn edge_set(&self) -> [Edge; 3] {
        let mut es = self.edges;
        es.sort();
        es
    }
}

pub fn classify(edges: &[Edge; 3]) -> TriangleKind {
    let triples = edges
        .iter()
        .filter(|e| matches!(e, Edge::Triple(_)))
        .count();
    match triples {
        0 => TriangleKind::Graph,
        3 => {
            let union: BTreeSet<Vertex> = edges
                .iter()
                .flat_map(|e| e.vertices().iter().copied())
                .collect();
            // Three 3-edges forming a triangle span 4, 5 or 6 vertices, and the
            // span alone determines the isomorphism type.
            match union.len() {
                4 => TriangleKind::K4Minus,
                5 => TriangleKind::F5,
                _ => TriangleKind::C3,
            }
        }
        _ => TriangleKind::Mixed,
    }
}

struct PairCover<'a> {
    h: &'a RankedHypergraph,
    shadow: Vec<Vec<Vertex>>,
}

impl<'a> PairCover<'a> {
    fn new(h: &'a RankedHypergraph) -> Self {
        let mut shadow: Vec<Vec<Vertex>> = vec![Vec::new(); h.n()];
        for e in h.edges() {
            let vs = e.vertices();
            for &a in vs {
                for &b in vs {
                    if a != b {
                        shadow[a].push(b);
                    }
                }
            }
        }
        for s in &mut shadow {
            s.sort_unstable();
            s.dedup();
        }
        Self { h, shadow }
    }

    /// Edges covering `{a, b}` and avoiding `not`, in canonical order.
    fn covering(&self, a: Vertex, b: Vertex, not: Vertex) -> Vec<Edge> {
        let mut out = Vec::new();
        if self.h.contains_edge2(a, b) {
            out.push(Edge::pair(a, b));
        }
        for &i in self.h.pair_edges(a, b) {
            let e = self.h.edges3()[i];
            if !e.contains(&not) {
                out.push(Edge::Triple(e));
            }
        }
        out
    }

    fn triangles_at(&self, u: Vertex, limit: usize) -> Vec<TriangleWitness> {
        let mut out = Vec::new();
        let nu = &self.shadow[u];
        for &v in nu.iter().filter(|&&v| v > u) {
            let nv = &self.shadow[v];
            for &w in nv.iter().filter(|&&w| w > v) {
                if nu.binary_search(&w).is_err() {
                    continue;
                }
                let es = self.covering(u, v, w);
                if es.is_empty() {
                    continue;
                }
                let fs = self.covering(v, w, u);
                if fs.is_empty() {
                    continue;
                }
                let gs = self.covering(w, u, v);
                for e in &es {
                    for f in &fs {
                        for g in &gs {
                            let edges = [*e, *f, *g];
                            out.push(TriangleWitness {
                                vertices: [u, v, w],
                                edges,
                                kind: classify(&edges),
                            });
                            if out.len() >= limit {
                                return out;
                            }
                        }
                    }
                }
            }
        }
        out
    }
}

/// Up to `limit` triangles of `h` in canonical order (by vertex triple, then
/// by the covering edges). Empty iff `h` is triangle-free, for `limit >= 1`.
pub fn find_triangles(h: &RankedHypergraph, limit: usize) -> Vec<TriangleWitness> {
    if limit == 0 {
        return Vec::new();
    }
    let cover = PairCover::new(h);
    if limit <= 16 {
        let mut out = Vec::new();
        for u in 0..h.n() {
            out.extend(cover.triangles_at(u, limit - out.len()));
            if out.len() >= limit {
                break;
            }
        }
        return out;
    }
    let per_vertex: Vec<Vec<TriangleWitness>> = (0..h.n())
        .into_par_iter()
        .map(|u| cover.triangles_at(u, limit))
        .collect();
    per_vertex.into_iter().flatten().take(limit).collect()
}

pub fn is_triangle_free(h: &RankedHypergraph) -> bool {
    find_triangles(h, 1).is_empty()
}

/// Dynamic edge set that answers "would inserting this edge close a
/// triangle?" without rescanning the whole hypergraph.
#[derive(Clone, Debug)]
pub struct TriangleGuard {
    /// Sorted 2-shadow neighbourhoods.
    shadow: Vec<Vec<Vertex>>,
    cover: HashMap<[Vertex; 2], Vec<Edge>>,
}

impl TriangleGuard {
    pub fn new(n: usize) -> Self {
        Self {
            shadow: vec![Vec::new(); n],
            cover: HashMap::new(),
        }
    }

    pub fn from_hypergraph(h: &RankedHypergraph) -> Self {
        let mut g = Self::new(h.n());
        for e in h.edges() {
            g.insert(e);
        }
        g
    }

    fn covers(&self, a: Vertex, b: Vertex) -> &[Edge] {
        self.cover
            .get(&sorted2(a, b))
            .map(Vec::as_slice)
            .unwrap_or(&[])
    }

    /// True if some triangle of `self + e` uses `e`.
    pub fn would_create_triangle(&self, e: Edge) -> bool {
        let vs = e.vertices();
        for (i, &a) in vs.iter().enumerate() {
            for &b in &vs[i + 1..] {
                let (sa, sb) = (&self.shadow[a], &self.shadow[b]);
                let (mut i, mut j) = (0, 0);
                while i < sa.len() && j < sb.len() {
                    let (x, y) = (sa[i], sb[j]);
                    if x < y {
                        i += 1;
                        continue;
                    }
                    if y < x {
                        j += 1;
                        continue;
                    }
                    i += 1;
                    j += 1;
                    if e.contains(x) {
                        continue;
                    }
                    let left = self.covers(a, x).iter().any(|f| !f.contains(b));
                    let right = self.covers(b, x).iter().any(|f| !f.contains(a));
                    if left && right {
                        return true;
                    }
                }
            }
        }
        false
    }

    pub fn insert(&mut self, e: Edge) {
        let vs = e.vertices();
        for (i, &a) in vs.iter().enumerate() {
            for &b in &vs[i + 1..] {
                for (x, y) in [(a, b), (b, a)] {
                    if let Err(at) = self.shadow[x].binary_search(&y) {
                        self.shadow[x].insert(at, y);
                    }
                }
                self.cover.entry(sorted2(a, b)).or_default().push(e);
            }
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    const A: usize = 0;
    const B: usize = 1;
    const C: usize = 2;
    const D: usize = 3;
    const E: usize = 4;
    const F: usize = 5;

    fn h3(n: usize, es: &[[usize; 3]]) -> RankedHypergraph {
        RankedHypergraph::from_edges(n, &[], es).unwrap()
    }

    #[test]
    fn loose_triangle() {
        let h = h3(6, &[[A, B, C], [C, D, E], [E, F, A]]);
        let ts = find_triangles(&h, usize::MAX);
        assert_eq!(ts.len(), 1);
        assert_eq!(ts[0].vertices, [A, C, E]);
        assert_eq!(ts[0].kind, TriangleKind::C3);
        assert!(ts[0].is_valid());
        assert!(!is_triangle_free(&h));
    }

    #[test]
    fn k4_minus_and_f5() {
        let h = h3(4, &[[A, B, C], [B, C, D], [A, B, D]]);
        let ts = find_triangles(&h, usize::MAX);
        assert!(!ts.is_empty());
        assert!(ts
            .iter()
            .all(|t| t.kind == TriangleKind::K4Minus && t.is_valid()));

        let h = h3(5, &[[A, B, C], [B, C, D], [A, E, D]]);
        let ts = find_triangles(&h, usize::MAX);
        assert!(!ts.is_empty());
        assert!(ts
            .iter()
            .all(|t| t.kind == TriangleKind::F5 && t.is_valid()));
    }

    #[test]
    fn small_triangle_free_cases() {
        assert!(find_triangles(&h3(3, &[[A, B, C]]), 10).is_empty());
        assert!(is_triangle_free(&h3(4, &[[A, B, C], [A, B, D]])));
        // a book: many pages on one pair
        assert!(is_triangle_free(&h3(
            6,
            &[[A, B, C], [A, B, D], [A, B, E], [A, B, F]]
        )));
    }

    #[test]
    fn graph_and_mixed_triangles() {
        let h = RankedHypergraph::from_edges(3, &[[A, B], [B, C], [C, A]], &[]).unwrap();
        let ts = find_triangles(&h, 5);
        assert_eq!(ts.len(), 1);
        assert_eq!(ts[0].kind, TriangleKind::Graph);

        // 3-edge abc plus 2-edges cd, da: triangle (a, c, d)
        let h = RankedHypergraph::from_edges(4, &[[C, D], [D, A]], &[[A, B, C]]).unwrap();
        let ts = find_triangles(&h, 5);
        assert_eq!(ts.len(), 1);
        assert_eq!(ts[0].kind, TriangleKind::Mixed);
        assert!(ts[0].is_valid());
    }

    #[test]
    fn limit_is_respected() {
        let h = h3(4, &[[A, B, C], [B, C, D], [A, B, D], [A, C, D]]);
        let all = find_triangles(&h, usize::MAX);
        assert!(all.len() > 2);
        assert_eq!(find_triangles(&h, 2), all[..2].to_vec());
        assert!(find_triangles(&h, 0).is_empty());
    }

    #[test]
    fn guard_agrees_with_detector_on_templates() {
        for es in [
            vec![[A, B, C], [C, D, E], [E, F, A]],
            vec![[A, B, C], [B, C, D], [A, B, D]],
            vec![[A, B, C], [B, C, D], [A, E, D]],
        ] {
            let mut g = TriangleGuard::new(6);
            g.insert(Edge::Triple(es[0]));
            g.insert(Edge::Triple(es[1]));
            assert!(g.would_create_triangle(Edge::Triple(es[2])));
        }
        let mut g = TriangleGuard::new(6);
        g.insert(Edge::triple(A, B, C));
        g.insert(Edge::triple(A, B, D));
        assert!(!g.would_create_triangle(Edge::triple(A, B, E)));
        assert!(g.would_create_triangle(Edge::pair(C, D)));
    }
}
