//! Proper-coloring verification. Reads only the hypergraph, the lists and
//! the coloring, never any engine state.

use serde::{Deserialize, Serialize};

use crate::hypergraph::{Edge, RankedHypergraph, Vertex};
use crate::lists::{Color, ListAssignment};

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "verdict", rename_all = "snake_case")]
pub enum Verdict {
    Ok,
    LengthMismatch { expected: usize, got: usize },
    Uncolored { vertex: Vertex },
    NotInList { vertex: Vertex, color: Color },
    Monochromatic { edge: Edge, color: Color },
}

impl Verdict {
    pub fn is_ok(&self) -> bool {
        matches!(self, Verdict::Ok)
    }
}

/// `Ok` iff every 2-edge has two colors, every 3-edge has at least two, and
/// (when `lists` is given) every vertex's color is on its list. Otherwise the
/// first violation in vertex order, then canonical edge order.
pub fn verify_coloring(
    h: &RankedHypergraph,
    lists: Option<&ListAssignment>,
    coloring: &[Color],
) -> Verdict {
    if coloring.len() != h.n() {
        return Verdict::LengthMismatch {
            expected: h.n(),
            got: coloring.len(),
        };
    }
    let partial: Vec<Option<Color>> = coloring.iter().copied().map(Some).collect();
    verify_partial(h, lists, &partial)
}

/// Like [`verify_coloring`] but on a partial coloring: edges with an
/// uncolored vertex are skipped.
pub fn verify_partial(
    h: &RankedHypergraph,
    lists: Option<&ListAssignment>,
    coloring: &[Option<Color>],
) -> Verdict {
    if coloring.len() != h.n() {
        return Verdict::LengthMismatch {
            expected: h.n(),
            got: coloring.len(),
        };
    }
    if let Some(lists) = lists {
        for (v, c) in coloring.iter().enumerate() {
            if let Some(c) = *c {
                if v >= lists.n() || !lists.contains(v, c) {
                    return Verdict::NotInList {
                        vertex: v,
                        color: c,
                    };
                }
            }
        }
    }
    for e in h.edges() {
        let vs = e.vertices();
        let Some(c0) = coloring[vs[0]] else { continue };
        if vs[1..].iter().all(|&x| coloring[x] == Some(c0)) {
            return Verdict::Monochromatic { edge: e, color: c0 };
        }
    }
    Verdict::Ok
}

/// Total-coloring check that also reports the first uncolored vertex.
pub fn verify_total(
    h: &RankedHypergraph,
    lists: Option<&ListAssignment>,
    coloring: &[Option<Color>],
) -> Verdict {
    if let Some(v) = coloring.iter().position(Option::is_none) {
        return Verdict::Uncolored { vertex: v };
    }
    verify_partial(h, lists, coloring)
}
