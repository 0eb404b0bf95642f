//! Codegree reduction: every pair lying in too many 3-edges is replaced by a
//! 2-edge, and all 3-edges through that pair are dropped. Any proper coloring
//! of the reduced hypergraph is proper for the original, because each dropped
//! 3-edge contains a pair that is now a 2-edge.

use std::collections::BTreeSet;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::harness::verify::{verify_coloring, Verdict};
use crate::hypergraph::{triple_pairs, DegreeProfile, RankedHypergraph, Vertex};

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ReductionReport {
    pub threshold: usize,
    pub pairs_replaced: Vec<[Vertex; 2]>,
    pub edges3_removed: usize,
    pub edges2_added: usize,
    pub profile_before: DegreeProfile,
    pub profile_after: DegreeProfile,
}

/// `max(2, ⌈delta^{3/5}⌉)`.
///
/// The floor of 2 matters only for `delta = 1`, where a cutoff of 1 would
/// turn every 3-edge into a graph triangle.
pub fn codegree_threshold(delta: usize) -> usize {
    let t = (delta as f64).powf(0.6);
    // guard against powf landing a hair above an exact integer
    let rounded = t.round();
    let t = if (t - rounded).abs() < 1e-9 {
        rounded
    } else {
        t.ceil()
    };
    (t as usize).max(2)
}

pub fn codegree_reduce(
    h: &RankedHypergraph,
    delta: usize,
) -> Result<(RankedHypergraph, ReductionReport)> {
    let before = h.profile();
    if delta < before.delta3 {
        return Err(Error::input(format!(
            "delta = {delta} is below the maximum 3-degree {}",
            before.delta3
        )));
    }
    let threshold = codegree_threshold(delta);

    let pairs_replaced: Vec<[Vertex; 2]> = h
        .codegree_pairs()
        .into_iter()
        .filter(|&(_, d)| d >= threshold)
        .map(|(p, _)| p)
        .collect();
    let replaced: BTreeSet<[Vertex; 2]> = pairs_replaced.iter().copied().collect();

    let kept3: Vec<[Vertex; 3]> = h
        .edges3()
        .iter()
        .copied()
        .filter(|&e| triple_pairs(e).iter().all(|p| !replaced.contains(p)))
        .collect();
    let mut edges2: BTreeSet<[Vertex; 2]> = h.edges2().iter().copied().collect();
    let before2 = edges2.len();
    edges2.extend(pairs_replaced.iter().copied());
    let e2: Vec<_> = edges2.into_iter().collect();

    let out = RankedHypergraph::from_edges(h.n(), &e2, &kept3)?;
    let report = ReductionReport {
        threshold,
        edges3_removed: h.edges3().len() - kept3.len(),
        edges2_added: e2.len() - before2,
        pairs_replaced,
        profile_before: before,
        profile_after: out.profile(),
    };
    Ok((out, report))
}

/// Checks `coloring` against the reduced hypergraph and, when proper there,
/// confirms it is proper for the original as well.
pub fn lift_coloring(
    h: &RankedHypergraph,
    reduced: &RankedHypergraph,
    coloring: &[usize],
) -> Result<bool> {
    if h.n() != reduced.n() || coloring.len() != h.n() {
        return Err(Error::input(format!(
            "vertex counts differ: original {}, reduced {}, coloring {}",
            h.n(),
            reduced.n(),
            coloring.len()
        )));
    }
    if verify_coloring(reduced, None, coloring) != Verdict::Ok {
        return Ok(false);
    }
    match verify_coloring(h, None, coloring) {
        Verdict::Ok => Ok(true),
        bad => Err(Error::contract(format!(
            "coloring is proper on the reduced hypergraph but not on the original: {bad:?}"
        ))),
    }
}
