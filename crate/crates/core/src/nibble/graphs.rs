//! Per-color 2-graphs `G_c`. Every `G_c` starts as the original 2-edge
//! graph, which is stored once; edges added later are kept per color.

use std::collections::{BTreeMap, BTreeSet};

use crate::hypergraph::{sorted2, RankedHypergraph, Vertex};
use crate::lists::Color;

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ColorGraphs {
    base: Vec<Vec<Vertex>>,
    extra: Vec<BTreeMap<Color, BTreeSet<Vertex>>>,
    alive: Vec<bool>,
    extra_edges: usize,
}

impl ColorGraphs {
    /// Every color graph equal to the 2-edges of `h`, all vertices present.
    pub fn new(h: &RankedHypergraph) -> Self {
        let n = h.n();
        let base = (0..n)
            .map(|u| {
                let mut nb: Vec<Vertex> = h.neighbors2(u).collect();
                nb.sort_unstable();
                nb
            })
            .collect();
        Self {
            base,
            extra: vec![BTreeMap::new(); n],
            alive: vec![true; n],
            extra_edges: 0,
        }
    }

    pub fn n(&self) -> usize {
        self.alive.len()
    }

    pub fn is_alive(&self, u: Vertex) -> bool {
        self.alive[u]
    }

    /// `N_c(u)` in increasing order. Empty for removed vertices.
    pub fn neighbors(&self, u: Vertex, c: Color) -> Vec<Vertex> {
        if !self.alive[u] {
            return Vec::new();
        }
        let mut out: Vec<Vertex> = self.base[u]
            .iter()
            .copied()
            .filter(|&v| self.alive[v])
            .collect();
        if let Some(ex) = self.extra[u].get(&c) {
            out.extend(ex.iter().copied());
            out.sort_unstable();
        }
        out
    }

    /// Surviving original 2-edge neighbours of `u`, shared by every color.
    pub fn base_neighbors(&self, u: Vertex) -> impl Iterator<Item = Vertex> + '_ {
        self.base[u]
            .iter()
            .copied()
            .filter(move |&v| self.alive[u] && self.alive[v])
    }

    /// Colors with an added edge at `u`, each with its added neighbours.
    pub fn extra_neighbors(&self, u: Vertex) -> &BTreeMap<Color, BTreeSet<Vertex>> {
        &self.extra[u]
    }

    pub fn degree(&self, u: Vertex, c: Color) -> usize {
        if !self.alive[u] {
            return 0;
        }
        self.base_neighbors(u).count() + self.extra[u].get(&c).map_or(0, BTreeSet::len)
    }

    /// Largest `d_{G_c}(u)` over all colors.
    pub fn max_degree(&self, u: Vertex) -> usize {
        if !self.alive[u] {
            return 0;
        }
        let base = self.base_neighbors(u).count();
        base + self.extra[u].values().map(BTreeSet::len).max().unwrap_or(0)
    }

    pub fn contains(&self, u: Vertex, v: Vertex, c: Color) -> bool {
        if !self.alive[u] || !self.alive[v] {
            return false;
        }
        self.base[u].binary_search(&v).is_ok()
            || self.extra[u].get(&c).is_some_and(|s| s.contains(&v))
    }

    /// Adds `uv` to `G_c` unless already present. Returns whether it was new.
    pub fn add(&mut self, u: Vertex, v: Vertex, c: Color) -> bool {
        assert!(
            self.alive[u] && self.alive[v] && u != v,
            "color-graph edge must join two live vertices"
        );
        if self.contains(u, v, c) {
            return false;
        }
        self.extra[u].entry(c).or_default().insert(v);
        self.extra[v].entry(c).or_default().insert(u);
        self.extra_edges += 1;
        true
    }

    /// Deletes `u` from every color graph.
    pub fn remove_vertex(&mut self, u: Vertex) {
        if !self.alive[u] {
            return;
        }
        self.alive[u] = false;
        let ex = std::mem::take(&mut self.extra[u]);
        for (c, nbrs) in ex {
            for v in nbrs {
                let entry = self.extra[v].get_mut(&c).expect("symmetric adjacency");
                entry.remove(&u);
                if entry.is_empty() {
                    self.extra[v].remove(&c);
                }
                self.extra_edges -= 1;
            }
        }
    }

    /// Number of added (non-original) edges over all colors.
    pub fn extra_edge_count(&self) -> usize {
        self.extra_edges
    }

    /// Colors that have at least one added edge.
    pub fn colors_with_extra_edges(&self) -> BTreeSet<Color> {
        self.extra.iter().flat_map(|m| m.keys().copied()).collect()
    }

    /// Edges of `G_c`, canonical and sorted.
    pub fn edges(&self, c: Color) -> Vec<[Vertex; 2]> {
        let mut out = BTreeSet::new();
        for u in 0..self.n() {
            for v in self.neighbors(u, c) {
                if u < v {
                    out.insert(sorted2(u, v));
                }
            }
        }
        out.into_iter().collect()
    }

    /// Added edges of `G_c` only.
    pub fn extra_edges(&self, c: Color) -> Vec<[Vertex; 2]> {
        let mut out = Vec::new();
        for u in 0..self.n() {
            if let Some(s) = self.extra[u].get(&c) {
                out.extend(s.range(u + 1..).map(|&v| [u, v]));
            }
        }
        out
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn base_edges_in_every_color() {
        let h = RankedHypergraph::from_edges(4, &[[0, 1]], &[[1, 2, 3]]).unwrap();
        let g = ColorGraphs::new(&h);
        for c in 0..5 {
            assert_eq!(g.edges(c), vec![[0, 1]]);
            assert!(g.contains(1, 0, c));
        }
    }

    #[test]
    fn add_and_remove() {
        let h = RankedHypergraph::from_edges(4, &[[0, 1]], &[]).unwrap();
        let mut g = ColorGraphs::new(&h);
        assert!(!g.add(0, 1, 2));
        assert!(g.add(2, 3, 2));
        assert!(!g.add(3, 2, 2));
        assert_eq!(g.edges(2), vec![[0, 1], [2, 3]]);
        assert_eq!(g.edges(1), vec![[0, 1]]);
        assert_eq!(g.degree(2, 2), 1);
        assert_eq!(g.max_degree(3), 1);
        assert_eq!(g.extra_edge_count(), 1);
        g.remove_vertex(3);
        assert_eq!(g.edges(2), vec![[0, 1]]);
        assert_eq!(g.extra_edge_count(), 0);
        g.remove_vertex(0);
        assert!(g.edges(2).is_empty());
        assert!(g.neighbors(1, 0).is_empty());
    }
}
