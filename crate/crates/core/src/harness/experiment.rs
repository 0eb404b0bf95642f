//! The full pipeline (optional codegree reduction, nibble, finisher,
//! verification) and multi-seed experiments over it.

use std::collections::BTreeSet;
use std::fmt::Write as _;
use std::time::Instant;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::finisher::{finish, FinishMethod, FinishResult, FinisherOptions};
use crate::hypergraph::{DegreeProfile, RankedHypergraph};
use crate::lists::{Color, ListAssignment};
use crate::nibble::{run, RunOptions, Trace};
use crate::params::{NibbleParams, Parameters};
use crate::reduce::{codegree_reduce, ReductionReport};

use super::generate::{generate, GeneratorSpec};
use super::independent_set_from_coloring;
use super::verify::{verify_coloring, Verdict};

pub const DEFAULT_K: f64 = 3.0;
pub const DEFAULT_ITERATIONS: usize = 10;
pub const DEFAULT_THETA: f64 = 0.5;
pub const DEFAULT_P_HAT_FACTOR: f64 = 2.0;

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum ColorChoice {
    Fixed(usize),
    /// `C = ⌈k·√(Δ/ln Δ)⌉`, at least 1.
    Scaled(f64),
}

/// Hand-set engine parameters. `p̂ = min(1, p_hat_factor / C)`.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct PracticalSpec {
    pub colors: ColorChoice,
    pub iterations: usize,
    pub theta: f64,
    pub p_hat_factor: f64,
}

impl Default for PracticalSpec {
    fn default() -> Self {
        Self {
            colors: ColorChoice::Scaled(DEFAULT_K),
            iterations: DEFAULT_ITERATIONS,
            theta: DEFAULT_THETA,
            p_hat_factor: DEFAULT_P_HAT_FACTOR,
        }
    }
}

impl PracticalSpec {
    /// Resolves the color count for an instance with maximum 3-degree `delta`.
    pub fn resolve(&self, delta: usize) -> Result<NibbleParams> {
        let colors = match self.colors {
            ColorChoice::Fixed(c) => c,
            ColorChoice::Scaled(k) => {
                let d = delta as f64;
                if delta <= 1 {
                    1
                } else {
                    ((k * (d / d.ln()).sqrt()).ceil() as usize).max(1)
                }
            }
        };
        if colors == 0 {
            return Err(Error::input("color count must be positive"));
        }
        if !(self.p_hat_factor >= 1.0) {
            return Err(Error::input(
                "p_hat factor must be at least 1 so that 1/C <= p_hat",
            ));
        }
        Ok(NibbleParams {
            colors,
            iterations: self.iterations,
            theta: self.theta,
            p_hat: (self.p_hat_factor / colors as f64).min(1.0),
        })
    }
}

#[derive(Clone, Debug)]
pub struct PipelineOutcome {
    pub coloring: Option<Vec<Color>>,
    pub trace: Trace,
    pub finish: FinishResult,
    pub reduction: Option<ReductionReport>,
    /// Verdict against the unreduced input.
    pub verdict: Option<Verdict>,
    pub parameters: Parameters,
}

/// Nibble plus finisher on `h` (reduced first when `reduce` is set). The
/// verdict is always computed against the original `h`.
pub fn color_instance(
    h: &RankedHypergraph,
    lists: &ListAssignment,
    np: NibbleParams,
    reduce: bool,
    seed: u64,
    run_opts: &RunOptions,
    fin_opts: &FinisherOptions,
) -> Result<PipelineOutcome> {
    let profile = h.profile();
    let (work, reduction) = if reduce {
        let (r, rep) = codegree_reduce(h, profile.delta3)?;
        (r, Some(rep))
    } else {
        (h.clone(), None)
    };
    let wp = work.profile();
    let params = Parameters::practical(
        profile.delta3 as f64,
        wp.delta2 as f64,
        wp.codegree_max as f64,
        np,
    )?;
    let result = run(&work, lists, &params, seed, run_opts)?;
    let fin = finish(
        &result.state,
        &FinisherOptions {
            seed: fin_opts.seed ^ seed.rotate_left(17),
            ..*fin_opts
        },
    )?;
    let verdict = fin
        .coloring
        .as_ref()
        .map(|c| verify_coloring(h, Some(lists), c));
    Ok(PipelineOutcome {
        coloring: fin.coloring.clone(),
        trace: result.trace,
        finish: fin,
        reduction,
        verdict,
        parameters: params,
    })
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ExperimentConfig {
    pub generator: GeneratorSpec,
    /// Generate a fresh instance per seed (instance seed = run seed); when
    /// false the generator's own seed fixes one instance for all runs.
    pub vary_instance: bool,
    pub practical: PracticalSpec,
    pub reduce: bool,
    pub run: RunOptions,
    pub finisher: FinisherOptions,
    pub seeds: Vec<u64>,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ExperimentResult {
    pub seed: u64,
    pub n: usize,
    pub profile: DegreeProfile,
    pub reduced_profile: Option<DegreeProfile>,
    pub params: Option<NibbleParams>,
    pub colored_by_nibble: f64,
    pub finisher: Option<FinishMethod>,
    pub resamples: usize,
    pub lll_satisfied: Option<bool>,
    pub verdict: Option<Verdict>,
    pub success: bool,
    pub colors_used: usize,
    pub independent_set: usize,
    pub wall_ms: f64,
    pub rounds: usize,
    pub error: Option<String>,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ExperimentSummary {
    pub runs: usize,
    pub successes: usize,
    pub success_rate: f64,
    pub mean_colored_by_nibble: f64,
    /// Mean of `colors used / max{Δ₂/ln Δ₂, √(Δ/ln Δ)}` over successful runs,
    /// with `x/ln x` floored at its minimum `e`.
    pub mean_ratio: Option<f64>,
    pub mean_wall_ms: f64,
}

fn x_over_ln(x: f64) -> f64 {
    if x > std::f64::consts::E {
        x / x.ln()
    } else {
        std::f64::consts::E
    }
}

/// `max{Δ₂/ln Δ₂, √(Δ/ln Δ)}` with the floor described on
/// [`ExperimentSummary::mean_ratio`].
pub fn bound_shape(profile: &DegreeProfile) -> f64 {
    x_over_ln(profile.delta2 as f64).max(x_over_ln(profile.delta3 as f64).sqrt())
}

fn run_one(cfg: &ExperimentConfig, base: Option<&RankedHypergraph>, seed: u64) -> ExperimentResult {
    let start = Instant::now();
    let mut out = ExperimentResult {
        seed,
        n: 0,
        profile: DegreeProfile::default(),
        reduced_profile: None,
        params: None,
        colored_by_nibble: 0.0,
        finisher: None,
        resamples: 0,
        lll_satisfied: None,
        verdict: None,
        success: false,
        colors_used: 0,
        independent_set: 0,
        wall_ms: 0.0,
        rounds: 0,
        error: None,
    };
    let body = |out: &mut ExperimentResult| -> Result<()> {
        let h = match base {
            Some(h) => h.clone(),
            None => generate(&GeneratorSpec {
                seed,
                ..cfg.generator.clone()
            })?,
        };
        out.n = h.n();
        out.profile = h.profile();
        let np = cfg.practical.resolve(out.profile.delta3)?;
        out.params = Some(np);
        let lists = ListAssignment::uniform(h.n(), np.colors);
        let res = color_instance(&h, &lists, np, cfg.reduce, seed, &cfg.run, &cfg.finisher)?;
        out.reduced_profile = res.reduction.as_ref().map(|r| r.profile_after);
        out.colored_by_nibble = if h.n() == 0 {
            1.0
        } else {
            res.trace.colored as f64 / h.n() as f64
        };
        out.rounds = res.trace.rounds.len();
        out.finisher = Some(res.finish.method);
        out.resamples = res.finish.resamples;
        out.lll_satisfied = Some(res.finish.lll.satisfied);
        out.success = res.verdict.as_ref().is_some_and(Verdict::is_ok);
        out.verdict = res.verdict;
        if let (true, Some(c)) = (out.success, res.coloring.as_ref()) {
            out.colors_used = c.iter().collect::<BTreeSet<_>>().len();
            out.independent_set = independent_set_from_coloring(&h, c)?.len();
        }
        Ok(())
    };
    if let Err(e) = body(&mut out) {
        out.error = Some(e.to_string());
    }
    out.wall_ms = start.elapsed().as_secs_f64() * 1e3;
    out
}

/// One pipeline run per seed, in parallel; results in seed order.
pub fn run_experiment(
    cfg: &ExperimentConfig,
) -> Result<(Vec<ExperimentResult>, ExperimentSummary)> {
    let base = if cfg.vary_instance {
        None
    } else {
        Some(generate(&cfg.generator)?)
    };
    let results: Vec<ExperimentResult> = cfg
        .seeds
        .par_iter()
        .map(|&s| run_one(cfg, base.as_ref(), s))
        .collect();
    let summary = summarize(&results);
    Ok((results, summary))
}

pub fn summarize(results: &[ExperimentResult]) -> ExperimentSummary {
    let runs = results.len();
    let successes = results.iter().filter(|r| r.success).count();
    let mean = |xs: Vec<f64>| {
        if xs.is_empty() {
            None
        } else {
            Some(xs.iter().sum::<f64>() / xs.len() as f64)
        }
    };
    let ratios: Vec<f64> = results
        .iter()
        .filter(|r| r.success)
        .map(|r| r.colors_used as f64 / bound_shape(&r.profile))
        .collect();
    ExperimentSummary {
        runs,
        successes,
        success_rate: if runs == 0 {
            0.0
        } else {
            successes as f64 / runs as f64
        },
        mean_colored_by_nibble: mean(results.iter().map(|r| r.colored_by_nibble).collect())
            .unwrap_or(0.0),
        mean_ratio: mean(ratios),
        mean_wall_ms: mean(results.iter().map(|r| r.wall_ms).collect()).unwrap_or(0.0),
    }
}

pub fn results_csv(results: &[ExperimentResult]) -> String {
    let mut out = String::from(
        "seed,n,delta3,delta2,codegree,colors,iterations,theta,p_hat,colored_by_nibble,finisher,resamples,lll_satisfied,success,colors_used,independent_set,wall_ms,error\n",
    );
    for r in results {
        let np = r.params;
        let _ = writeln!(
            out,
            "{},{},{},{},{},{},{},{},{},{:.6},{},{},{},{},{},{},{:.3},{}",
            r.seed,
            r.n,
            r.profile.delta3,
            r.profile.delta2,
            r.profile.codegree_max,
            np.map_or(String::new(), |p| p.colors.to_string()),
            np.map_or(String::new(), |p| p.iterations.to_string()),
            np.map_or(String::new(), |p| p.theta.to_string()),
            np.map_or(String::new(), |p| p.p_hat.to_string()),
            r.colored_by_nibble,
            r.finisher.map_or(String::new(), |f| serde_json::to_value(f)
                .map(|v| v.as_str().unwrap_or("").to_string())
                .unwrap_or_default()),
            r.resamples,
            r.lll_satisfied.map_or(String::new(), |b| b.to_string()),
            r.success,
            r.colors_used,
            r.independent_set,
            r.wall_ms,
            r.error.as_deref().unwrap_or("").replace(',', ";"),
        );
    }
    out
}
