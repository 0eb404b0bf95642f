//! Generators, verification, and experiment drivers.

pub mod experiment;
pub mod generate;
pub mod verify;

use std::collections::BTreeMap;

use crate::error::{Error, Result};
use crate::hypergraph::{RankedHypergraph, Vertex};
use crate::lists::Color;

pub use experiment::{
    bound_shape, color_instance, results_csv, run_experiment, summarize, ColorChoice,
    ExperimentConfig, ExperimentResult, ExperimentSummary, PipelineOutcome, PracticalSpec,
};
pub use generate::{generate, GeneratorKind, GeneratorSpec};
pub use verify::{verify_coloring, verify_partial, verify_total, Verdict};

/// The largest color class of a proper coloring (smallest color on ties),
/// sorted. It contains no complete edge.
pub fn independent_set_from_coloring(
    h: &RankedHypergraph,
    coloring: &[Color],
) -> Result<Vec<Vertex>> {
    match verify_coloring(h, None, coloring) {
        Verdict::Ok => {}
        bad => return Err(Error::contract(format!("coloring is not proper: {bad:?}"))),
    }
    let mut classes: BTreeMap<Color, Vec<Vertex>> = BTreeMap::new();
    for (v, &c) in coloring.iter().enumerate() {
        classes.entry(c).or_default().push(v);
    }
    let mut best: Vec<Vertex> = Vec::new();
    for class in classes.into_values() {
        if class.len() > best.len() {
            best = class;
        }
    }
    Ok(best)
}
