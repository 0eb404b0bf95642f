//! Per-iteration measurements and their comparison with the tracking
//! envelopes. Nothing here influences the run; it is reporting only.

use serde::{Deserialize, Serialize};

use crate::harness::verify::Verdict;
use crate::hypergraph::Vertex;
use crate::params::Parameters;

use super::survival::QMode;

/// Tracked quantities of one uncolored vertex at the start of an iteration.
#[derive(Clone, Copy, Debug, Default, PartialEq, Serialize, Deserialize)]
pub struct VertexStats {
    pub vertex: Vertex,
    /// `w(p_u) = Σ_c p_u(c)`.
    pub weight_sum: f64,
    /// `e_u = Σ_{uvw} Σ_c p_u(c) p_v(c) p_w(c)`.
    pub e: f64,
    /// `f_u = Σ_c Σ_{uv ∈ G_c} p_u(c) p_v(c)`.
    pub f: f64,
    /// `h_u = -Σ_c p_u(c) ln p_u(c)`.
    pub entropy: f64,
    pub degree_h: usize,
    /// `max_c d_{G_c}(u)`.
    pub degree_g_max: usize,
}

#[derive(Clone, Copy, Debug, Default, PartialEq, Serialize, Deserialize)]
pub struct Aggregate {
    pub min: f64,
    pub max: f64,
    pub mean: f64,
}

impl Aggregate {
    pub fn of(xs: impl IntoIterator<Item = f64>) -> Self {
        let mut n = 0usize;
        let (mut min, mut max, mut sum) = (f64::INFINITY, f64::NEG_INFINITY, 0.0);
        for x in xs {
            n += 1;
            min = min.min(x);
            max = max.max(x);
            sum += x;
        }
        if n == 0 {
            return Self::default();
        }
        Self {
            min,
            max,
            mean: sum / n as f64,
        }
    }
}

/// One tracked property: the bound at this iteration, the worst measured
/// value, and how many vertices exceed the bound.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct EnvelopeCheck {
    pub name: String,
    pub bound: f64,
    pub worst: f64,
    pub violations: usize,
    pub holds: bool,
}

#[derive(Clone, Debug, Default, PartialEq, Serialize, Deserialize)]
pub struct IterationStats {
    pub iteration: usize,
    pub uncolored_before: usize,
    pub newly_colored: usize,
    pub colored_total: usize,
    pub frozen_cells: usize,
    pub starved: usize,
    pub weight_sum: Aggregate,
    pub e: Aggregate,
    pub f: Aggregate,
    pub entropy: Aggregate,
    pub degree_h: Aggregate,
    pub degree_g_max: Aggregate,
    pub edge_weight_max: f64,
    pub envelopes: Vec<EnvelopeCheck>,
    pub q_exact: usize,
    pub q_bound: usize,
    pub q_monte_carlo: usize,
    pub q_max_std_err: f64,
    pub flip1_cells: usize,
    pub flip2_cells: usize,
    pub eta_heads: usize,
    pub color_graph_extra_edges: usize,
    /// Partial coloring proper for the input after this iteration.
    pub proper: bool,
    pub first_violation: Option<Verdict>,
    /// `H_i ∪ G_c` triangle-free for every color; only checked in debug mode.
    pub triangle_free: Option<bool>,
    pub invariant_violations: Vec<String>,
    #[serde(skip)]
    pub vertices: Vec<VertexStats>,
}

/// Summary of a complete run, serialisable for replay comparison.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Trace {
    pub seed: u64,
    pub n: usize,
    pub colors: usize,
    pub iterations_planned: usize,
    pub theta: f64,
    pub p_hat: f64,
    pub q_mode: QMode,
    pub rounds: Vec<IterationStats>,
    pub colored: usize,
    pub uncolored: usize,
    pub starved: Vec<Vertex>,
}

impl Trace {
    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("trace is serialisable")
    }

    /// Whether the partial coloring was proper after every round.
    pub fn always_proper(&self) -> bool {
        self.rounds.iter().all(|r| r.proper)
    }
}

/// Builds the six envelope checks for iteration `i`. `h0` holds the initial
/// entropies indexed by vertex.
pub(crate) fn envelopes(
    p: &Parameters,
    i: usize,
    vs: &[VertexStats],
    h0: &[f64],
) -> Vec<EnvelopeCheck> {
    let fi = i as f64;
    let decay3 = (1.0 - p.theta / 3.0).powf(fi);
    let decay4 = (1.0 - p.theta / 4.0).powf(fi);
    let omega1 = p.ln_omega1.exp();
    let omega2 = p.ln_omega2.exp();
    let omega6 = p.ln_omega6.exp();
    let delta = p.delta();
    let entropy_drop = 21.0
        * p.epsilon
        * (0..i)
            .map(|j| (1.0 - p.theta / 4.0).powi(j as i32))
            .sum::<f64>();

    let check = |name: &str, bound: f64, vals: &mut dyn Iterator<Item = f64>| {
        let mut worst = f64::NEG_INFINITY;
        let mut violations = 0;
        for x in vals {
            worst = worst.max(x);
            if x > bound {
                violations += 1;
            }
        }
        if worst == f64::NEG_INFINITY {
            worst = 0.0;
        }
        EnvelopeCheck {
            name: name.to_string(),
            bound,
            worst,
            violations,
            holds: violations == 0,
        }
    };

    vec![
        check(
            "P1",
            fi / omega1,
            &mut vs.iter().map(|s| (1.0 - s.weight_sum).abs()),
        ),
        check(
            "P2",
            decay3 * p.omega + fi / omega2,
            &mut vs.iter().map(|s| s.e),
        ),
        check("P3", 8.0 * decay4 * p.omega, &mut vs.iter().map(|s| s.f)),
        check(
            "P4",
            entropy_drop,
            &mut vs.iter().map(|s| h0[s.vertex] - s.entropy),
        ),
        check(
            "P5",
            decay3 * delta,
            &mut vs.iter().map(|s| s.degree_h as f64),
        ),
        check(
            "P6",
            3.0 * omega6 * fi * p.theta * delta * p.p_hat(),
            &mut vs.iter().map(|s| s.degree_g_max as f64),
        ),
    ]
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn aggregate_basic() {
        let a = Aggregate::of([1.0, 2.0, 6.0]);
        assert_eq!(a.min, 1.0);
        assert_eq!(a.max, 6.0);
        assert_eq!(a.mean, 3.0);
        assert_eq!(Aggregate::of(std::iter::empty()), Aggregate::default());
    }
}
