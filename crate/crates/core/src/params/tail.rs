//! Exponential tail bounds, returned as natural logarithms of the bound.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum TailBound {
    /// Sum of independent terms with `|X_i| ≤ a_i`: `exp(-2t²/Σa_i²)`.
    Hoeffding { ranges: Vec<f64> },
    /// Sum of independent terms with `X_i ≤ E[X_i] + b`:
    /// `exp(-t²/(2 Var + b t))`.
    Variance { variance: f64, b: f64 },
    /// Function with bounded differences `d_i`: `exp(-2t²/Σd_i²)`.
    McDiarmid { differences: Vec<f64> },
    /// Bounded differences holding only on a product event `A`:
    /// `exp(-2t²/Σd_i²) + Pr[not A]`.
    Conditional {
        differences: Vec<f64>,
        prob_not_a: f64,
    },
}

fn sum_squares(name: &str, xs: &[f64]) -> Result<f64> {
    if xs.is_empty() {
        return Err(Error::input(format!("{name} must be non-empty")));
    }
    if xs.iter().any(|x| !x.is_finite()) {
        return Err(Error::input(format!("{name} must be finite")));
    }
    let s: f64 = xs.iter().map(|x| x * x).sum();
    if s <= 0.0 {
        return Err(Error::input(format!("{name} must not all be zero")));
    }
    Ok(s)
}

/// `ln` of the bound on the probability of a deviation of `t`.
pub fn ln_tail_bound(bound: &TailBound, t: f64) -> Result<f64> {
    if !(t > 0.0 && t.is_finite()) {
        return Err(Error::input(format!(
            "deviation t must be positive, got {t}"
        )));
    }
    match bound {
        TailBound::Hoeffding { ranges } => Ok(-2.0 * t * t / sum_squares("ranges", ranges)?),
        TailBound::McDiarmid { differences } => {
            Ok(-2.0 * t * t / sum_squares("differences", differences)?)
        }
        TailBound::Variance { variance, b } => {
            if !(*variance >= 0.0 && *b >= 0.0) || !variance.is_finite() || !b.is_finite() {
                return Err(Error::input(
                    "variance and b must be non-negative and finite",
                ));
            }
            Ok(-t * t / (2.0 * variance + b * t))
        }
        TailBound::Conditional {
            differences,
            prob_not_a,
        } => {
            if !(0.0..=1.0).contains(prob_not_a) {
                return Err(Error::input(format!(
                    "Pr[not A] must lie in [0, 1], got {prob_not_a}"
                )));
            }
            let base = -2.0 * t * t / sum_squares("differences", differences)?;
            if *prob_not_a == 0.0 {
                return Ok(base);
            }
            let lp = prob_not_a.ln();
            let hi = base.max(lp);
            Ok(hi + ((base - hi).exp() + (lp - hi).exp()).ln())
        }
    }
}
