//! Rank-3 hypergraphs: vertices `0..n`, 2-edges and 3-edges stored in
//! canonical (sorted) form, with per-vertex incidence lists and a pair index
//! that answers codegree queries in O(1).

pub mod io;

use std::collections::{BTreeSet, HashMap};

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

pub use io::{parse, serialize};

pub type Vertex = usize;

/// An edge of a rank-3 hypergraph, vertices sorted ascending.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(untagged)]
pub enum Edge {
    Pair([Vertex; 2]),
    Triple([Vertex; 3]),
}

impl Edge {
    pub fn pair(u: Vertex, v: Vertex) -> Self {
        Edge::Pair(sorted2(u, v))
    }

    pub fn triple(u: Vertex, v: Vertex, w: Vertex) -> Self {
        Edge::Triple(sorted3(u, v, w))
    }

    pub fn vertices(&self) -> &[Vertex] {
        match self {
            Edge::Pair(e) => e,
            Edge::Triple(e) => e,
        }
    }

    pub fn contains(&self, x: Vertex) -> bool {
        self.vertices().contains(&x)
    }

    pub fn len(&self) -> usize {
        self.vertices().len()
    }

    pub fn is_empty(&self) -> bool {
        false
    }
}

pub(crate) fn sorted2(u: Vertex, v: Vertex) -> [Vertex; 2] {
    if u <= v {
        [u, v]
    } else {
        [v, u]
    }
}

pub(crate) fn sorted3(u: Vertex, v: Vertex, w: Vertex) -> [Vertex; 3] {
    let mut e = [u, v, w];
    e.sort_unstable();
    e
}

/// Maximum 3-degree, maximum 2-degree and maximum codegree.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct DegreeProfile {
    pub delta3: usize,
    pub delta2: usize,
    pub codegree_max: usize,
}

/// Incremental construction of a [`RankedHypergraph`]. Rejects loops,
/// out-of-range vertices and duplicate edges at insertion time.
#[derive(Clone, Debug)]
pub struct HypergraphBuilder {
    n: usize,
    edges2: BTreeSet<[Vertex; 2]>,
    edges3: BTreeSet<[Vertex; 3]>,
    pair_count: HashMap<[Vertex; 2], u32>,
}

impl HypergraphBuilder {
    pub fn new(n: usize) -> Self {
        Self {
            n,
            edges2: BTreeSet::new(),
            edges3: BTreeSet::new(),
            pair_count: HashMap::new(),
        }
    }

    pub fn n(&self) -> usize {
        self.n
    }

    fn check(&self, vs: &[Vertex]) -> Result<()> {
        for (i, &x) in vs.iter().enumerate() {
            if x >= self.n {
                return Err(Error::input(format!(
                    "vertex {x} out of range (n = {})",
                    self.n
                )));
            }
            if vs[..i].contains(&x) {
                return Err(Error::input(format!("edge {vs:?} repeats vertex {x}")));
            }
        }
        Ok(())
    }

    pub fn add_edge2(&mut self, u: Vertex, v: Vertex) -> Result<&mut Self> {
        self.check(&[u, v])?;
        if !self.edges2.insert(sorted2(u, v)) {
            return Err(Error::input(format!("duplicate 2-edge {{{u}, {v}}}")));
        }
        Ok(self)
    }

    pub fn add_edge3(&mut self, u: Vertex, v: Vertex, w: Vertex) -> Result<&mut Self> {
        self.check(&[u, v, w])?;
        let e = sorted3(u, v, w);
        if !self.edges3.insert(e) {
            return Err(Error::input(format!("duplicate 3-edge {{{u}, {v}, {w}}}")));
        }
        for p in triple_pairs(e) {
            *self.pair_count.entry(p).or_insert(0) += 1;
        }
        Ok(self)
    }

    pub fn add_edge(&mut self, e: Edge) -> Result<&mut Self> {
        match e {
            Edge::Pair([u, v]) => self.add_edge2(u, v),
            Edge::Triple([u, v, w]) => self.add_edge3(u, v, w),
        }
    }

    pub fn contains_edge2(&self, u: Vertex, v: Vertex) -> bool {
        self.edges2.contains(&sorted2(u, v))
    }

    pub fn contains_edge3(&self, u: Vertex, v: Vertex, w: Vertex) -> bool {
        self.edges3.contains(&sorted3(u, v, w))
    }

    /// Current number of 3-edges through the pair.
    pub fn codegree(&self, u: Vertex, v: Vertex) -> usize {
        self.pair_count.get(&sorted2(u, v)).copied().unwrap_or(0) as usize
    }

    pub fn remove_edge3(&mut self, u: Vertex, v: Vertex, w: Vertex) -> bool {
        let e = sorted3(u, v, w);
        if !self.edges3.remove(&e) {
            return false;
        }
        for p in triple_pairs(e) {
            if let Some(c) = self.pair_count.get_mut(&p) {
                *c -= 1;
                if *c == 0 {
                    self.pair_count.remove(&p);
                }
            }
        }
        true
    }

    pub fn build(self) -> RankedHypergraph {
        RankedHypergraph::from_sorted(
            self.n,
            self.edges2.into_iter().collect(),
            self.edges3.into_iter().collect(),
        )
    }
}

pub(crate) fn triple_pairs(e: [Vertex; 3]) -> [[Vertex; 2]; 3] {
    [[e[0], e[1]], [e[0], e[2]], [e[1], e[2]]]
}

/// Immutable rank-3 hypergraph. Safe to share across threads.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct RankedHypergraph {
    n: usize,
    edges2: Vec<[Vertex; 2]>,
    edges3: Vec<[Vertex; 3]>,
    inc2: Vec<Vec<usize>>,
    inc3: Vec<Vec<usize>>,
    // pair -> indices of the 3-edges covering it
    pairs: HashMap<[Vertex; 2], Vec<usize>>,
}

impl RankedHypergraph {
    pub fn empty(n: usize) -> Self {
        Self::from_sorted(n, Vec::new(), Vec::new())
    }

    /// Build from edge lists in any order. Errors on duplicates, loops and
    /// out-of-range vertices.
    pub fn from_edges(n: usize, edges2: &[[Vertex; 2]], edges3: &[[Vertex; 3]]) -> Result<Self> {
        let mut b = HypergraphBuilder::new(n);
        for &[u, v] in edges2 {
            b.add_edge2(u, v)?;
        }
        for &[u, v, w] in edges3 {
            b.add_edge3(u, v, w)?;
        }
        Ok(b.build())
    }

    // Edge lists must be canonical, sorted and duplicate free.
    fn from_sorted(n: usize, edges2: Vec<[Vertex; 2]>, edges3: Vec<[Vertex; 3]>) -> Self {
        let mut inc2 = vec![Vec::new(); n];
        let mut inc3 = vec![Vec::new(); n];
        let mut pairs: HashMap<[Vertex; 2], Vec<usize>> = HashMap::new();
        for (i, e) in edges2.iter().enumerate() {
            inc2[e[0]].push(i);
            inc2[e[1]].push(i);
        }
        for (i, &e) in edges3.iter().enumerate() {
            for &x in &e {
                inc3[x].push(i);
            }
            for p in triple_pairs(e) {
                pairs.entry(p).or_default().push(i);
            }
        }
        Self {
            n,
            edges2,
            edges3,
            inc2,
            inc3,
            pairs,
        }
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn edges2(&self) -> &[[Vertex; 2]] {
        &self.edges2
    }

    pub fn edges3(&self) -> &[[Vertex; 3]] {
        &self.edges3
    }

    pub fn edge_count(&self) -> usize {
        self.edges2.len() + self.edges3.len()
    }

    /// All edges, 2-edges first, each group in canonical order.
    pub fn edges(&self) -> impl Iterator<Item = Edge> + '_ {
        self.edges2
            .iter()
            .map(|&e| Edge::Pair(e))
            .chain(self.edges3.iter().map(|&e| Edge::Triple(e)))
    }

    fn check_vertex(&self, u: Vertex) -> Result<()> {
        if u >= self.n {
            Err(Error::input(format!(
                "vertex {u} out of range (n = {})",
                self.n
            )))
        } else {
            Ok(())
        }
    }

    pub fn degree3(&self, u: Vertex) -> Result<usize> {
        self.check_vertex(u)?;
        Ok(self.inc3[u].len())
    }

    pub fn degree2(&self, u: Vertex) -> Result<usize> {
        self.check_vertex(u)?;
        Ok(self.inc2[u].len())
    }

    /// Number of 3-edges containing both `u` and `v`.
    pub fn codegree(&self, u: Vertex, v: Vertex) -> Result<usize> {
        self.check_vertex(u)?;
        self.check_vertex(v)?;
        if u == v {
            return Err(Error::input(format!(
                "codegree of a vertex with itself ({u})"
            )));
        }
        Ok(self.pair_edges(u, v).len())
    }

    /// Indices (into [`edges3`](Self::edges3)) of the 3-edges covering a pair.
    pub fn pair_edges(&self, u: Vertex, v: Vertex) -> &[usize] {
        self.pairs
            .get(&sorted2(u, v))
            .map(Vec::as_slice)
            .unwrap_or(&[])
    }

    /// Pairs with positive codegree together with the count, in canonical order.
    pub fn codegree_pairs(&self) -> Vec<([Vertex; 2], usize)> {
        let mut out: Vec<_> = self.pairs.iter().map(|(&p, es)| (p, es.len())).collect();
        out.sort_unstable();
        out
    }

    pub fn incident3(&self, u: Vertex) -> &[usize] {
        &self.inc3[u]
    }

    pub fn incident2(&self, u: Vertex) -> &[usize] {
        &self.inc2[u]
    }

    /// Neighbours of `u` through 2-edges.
    pub fn neighbors2(&self, u: Vertex) -> impl Iterator<Item = Vertex> + '_ {
        self.inc2[u].iter().map(move |&i| {
            let [a, b] = self.edges2[i];
            if a == u {
                b
            } else {
                a
            }
        })
    }

    /// For each 3-edge through `u`, the other two vertices.
    pub fn links3(&self, u: Vertex) -> impl Iterator<Item = [Vertex; 2]> + '_ {
        self.inc3[u]
            .iter()
            .map(move |&i| other_two(self.edges3[i], u))
    }

    /// `N_H(u)`: vertices sharing a 3-edge with `u`, sorted.
    pub fn neighbors3(&self, u: Vertex) -> Vec<Vertex> {
        let mut out: Vec<_> = self.links3(u).flatten().collect();
        out.sort_unstable();
        out.dedup();
        out
    }

    /// `N_H(u, v)`: third vertices of the 3-edges through the pair.
    pub fn pair_neighbors(&self, u: Vertex, v: Vertex) -> Vec<Vertex> {
        self.pair_edges(u, v)
            .iter()
            .map(|&i| {
                let e = self.edges3[i];
                e.into_iter()
                    .find(|&x| x != u && x != v)
                    .expect("3-edge has a third vertex")
            })
            .collect()
    }

    pub fn contains_edge2(&self, u: Vertex, v: Vertex) -> bool {
        self.edges2.binary_search(&sorted2(u, v)).is_ok()
    }

    pub fn contains_edge3(&self, u: Vertex, v: Vertex, w: Vertex) -> bool {
        self.edges3.binary_search(&sorted3(u, v, w)).is_ok()
    }

    pub fn profile(&self) -> DegreeProfile {
        DegreeProfile {
            delta3: self.inc3.iter().map(Vec::len).max().unwrap_or(0),
            delta2: self.inc2.iter().map(Vec::len).max().unwrap_or(0),
            codegree_max: self.pairs.values().map(Vec::len).max().unwrap_or(0),
        }
    }

    /// Sub-hypergraph induced by the vertices flagged in `keep`; vertex ids
    /// are preserved, so `n` is unchanged.
    pub fn induce(&self, keep: &[bool]) -> RankedHypergraph {
        assert_eq!(keep.len(), self.n, "induce mask length must equal n");
        let e2 = self
            .edges2
            .iter()
            .copied()
            .filter(|e| e.iter().all(|&x| keep[x]))
            .collect();
        let e3 = self
            .edges3
            .iter()
            .copied()
            .filter(|e| e.iter().all(|&x| keep[x]))
            .collect();
        RankedHypergraph::from_sorted(self.n, e2, e3)
    }

    /// [`induce`](Self::induce) with the subset given as a vertex list.
    pub fn induce_set(&self, subset: &[Vertex]) -> Result<RankedHypergraph> {
        let mut keep = vec![false; self.n];
        for &x in subset {
            self.check_vertex(x)?;
            keep[x] = true;
        }
        Ok(self.induce(&keep))
    }

    /// Same vertex set and 3-edges, 2-edges dropped.
    pub fn three_uniform_part(&self) -> RankedHypergraph {
        RankedHypergraph::from_sorted(self.n, Vec::new(), self.edges3.clone())
    }

    /// Vertex-disjoint union of edge sets over the same vertex range.
    pub fn with_extra_edges2(
        &self,
        extra: impl IntoIterator<Item = [Vertex; 2]>,
    ) -> RankedHypergraph {
        let mut set: BTreeSet<[Vertex; 2]> = self.edges2.iter().copied().collect();
        set.extend(extra.into_iter().map(|[u, v]| sorted2(u, v)));
        RankedHypergraph::from_sorted(self.n, set.into_iter().collect(), self.edges3.clone())
    }

    pub fn to_builder(&self) -> HypergraphBuilder {
        let mut b = HypergraphBuilder::new(self.n);
        for &[u, v] in &self.edges2 {
            b.add_edge2(u, v).expect("canonical edge set");
        }
        for &[u, v, w] in &self.edges3 {
            b.add_edge3(u, v, w).expect("canonical edge set");
        }
        b
    }
}

pub(crate) fn other_two(e: [Vertex; 3], u: Vertex) -> [Vertex; 2] {
    if e[0] == u {
        [e[1], e[2]]
    } else if e[1] == u {
        [e[0], e[2]]
    } else {
        debug_assert_eq!(e[2], u);
        [e[0], e[1]]
    }
}
