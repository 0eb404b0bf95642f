//! Algorithm parameters, their derived quantities, and the feasibility
//! checks that govern them.
//!
//! Quantities that blow past `f64` range for large `Δ` (the degree itself,
//! the color count, the error terms) are stored as natural logarithms and
//! carry an `ln_` prefix. Everything else is stored directly.

mod constraints;
mod tail;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

pub use constraints::{
    check_constraints, claim_report, ClaimItem, ClaimReport, ConstraintRecord, ConstraintReport,
    Relation, LITTLE_O_TOLERANCE,
};
pub use tail::{ln_tail_bound, TailBound};

/// The codegree-control constant `m`.
pub const M: u32 = 21;
/// Constant in the list-chromatic bound.
pub const C0: f64 = 1.0 / 86_000.0;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Regime {
    /// Every derived quantity follows its formula.
    Formula,
    /// Colors, iterations, activation rate and cap were set by hand.
    Practical,
}

/// Independent parameters, with degrees and `ω₀` given as logarithms so that
/// astronomically large values are representable.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct ParamInputs {
    pub ln_delta: f64,
    pub ln_delta2: f64,
    pub ln_codegree: f64,
    pub epsilon: f64,
    pub omega: f64,
    pub ln_p_hat: f64,
    pub ln_omega0: f64,
}

impl ParamInputs {
    /// From plain values. `delta2` and `codegree` may be zero.
    pub fn new(
        delta: f64,
        delta2: f64,
        codegree: f64,
        epsilon: f64,
        omega: f64,
        p_hat: f64,
        omega0: f64,
    ) -> Self {
        Self {
            ln_delta: delta.ln(),
            ln_delta2: delta2.ln(),
            ln_codegree: codegree.ln(),
            epsilon,
            omega,
            ln_p_hat: p_hat.ln(),
            ln_omega0: omega0.ln(),
        }
    }

    fn validate(&self) -> Result<()> {
        let finite = |name: &str, x: f64| {
            if x.is_finite() {
                Ok(())
            } else {
                Err(Error::input(format!("{name} must be positive and finite")))
            }
        };
        finite("delta", self.ln_delta)?;
        finite("epsilon", self.epsilon)?;
        finite("omega", self.omega)?;
        finite("p_hat", self.ln_p_hat)?;
        finite("omega0", self.ln_omega0)?;
        for (name, x) in [("delta2", self.ln_delta2), ("codegree", self.ln_codegree)] {
            // zero is allowed (ln = -inf), negative or NaN is not
            if x.is_nan() || x == f64::INFINITY {
                return Err(Error::input(format!(
                    "{name} must be non-negative and finite"
                )));
            }
        }
        if self.epsilon <= 0.0 {
            return Err(Error::input("epsilon must be positive"));
        }
        if self.omega <= 1.0 {
            return Err(Error::input(format!(
                "omega must exceed 1 (got {})",
                self.omega
            )));
        }
        if self.ln_p_hat > 0.0 {
            return Err(Error::input("p_hat must lie in (0, 1]"));
        }
        Ok(())
    }
}

/// Full parameter set: the independent inputs plus every derived quantity.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct Parameters {
    pub ln_delta: f64,
    pub ln_delta2: f64,
    pub ln_codegree: f64,
    pub epsilon: f64,
    pub omega: f64,
    pub ln_p_hat: f64,
    /// `p̂` itself; kept alongside its log so hand-set caps stay exact.
    pub p_hat: f64,
    pub ln_omega0: f64,
    /// `ln C`, where `C = ⌈√(Δ/ω)⌉` (unrounded once beyond 2^53).
    pub ln_colors: f64,
    /// `T = ⌈(5ω/ε) ln ω⌉`.
    pub iterations: f64,
    pub theta: f64,
    pub m: u32,
    pub ln_omega1: f64,
    pub ln_omega2: f64,
    pub ln_omega3: f64,
    pub ln_omega4: f64,
    pub ln_omega5: f64,
    pub ln_omega6: f64,
    pub c0: f64,
    pub regime: Regime,
}

/// The four numbers the coloring engine consumes.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct NibbleParams {
    pub colors: usize,
    pub iterations: usize,
    pub theta: f64,
    pub p_hat: f64,
}

fn ceil_if_exact(ln_x: f64) -> f64 {
    // ceiling is only meaningful while integers are exactly representable
    let x = ln_x.exp();
    if x.is_finite() && x < 9.0e15 {
        x.ceil().ln()
    } else {
        ln_x
    }
}

fn ln_pos(x: f64) -> f64 {
    if x > 0.0 {
        x.ln()
    } else {
        f64::NAN
    }
}

/// Fills every derived field from the inputs. Accepts inputs outside the
/// algorithm's domain (e.g. `ω ≤ 1`); the constraint checker flags those.
fn derive_unchecked(inp: &ParamInputs, regime: Regime) -> Parameters {
    let ParamInputs {
        ln_delta,
        epsilon,
        omega,
        ln_omega0,
        ..
    } = *inp;
    let ln_omega = omega.ln();
    let ln_colors = ceil_if_exact(0.5 * (ln_delta - ln_omega));
    let iterations = ((5.0 * omega / epsilon) * ln_omega).ceil();
    let theta = epsilon / omega;
    Parameters {
        ln_delta,
        ln_delta2: inp.ln_delta2,
        ln_codegree: inp.ln_codegree,
        epsilon,
        omega,
        ln_p_hat: inp.ln_p_hat,
        p_hat: inp.ln_p_hat.exp(),
        ln_omega0,
        ln_colors,
        iterations,
        theta,
        m: M,
        ln_omega1: ln_pos(iterations) + ln_pos(ln_colors),
        ln_omega2: ln_omega0 - (16.0 * omega).ln(),
        ln_omega3: 2.0 * ln_omega,
        ln_omega4: 2.0 * ln_omega,
        ln_omega5: 0.95 * ln_delta,
        ln_omega6: 0.25 * ln_delta,
        c0: C0,
        regime,
    }
}

/// Derive all table quantities from the independent parameters.
pub fn derive(inputs: &ParamInputs) -> Result<Parameters> {
    inputs.validate()?;
    Ok(derive_unchecked(inputs, Regime::Formula))
}

/// The fixed assignment used for triangle-free inputs:
/// `ε = 1/40`, `ω = (1/25)(ε/86) ln Δ`, `p̂ = Δ^{-11/24}`, `ω₀ = 1/(19 θ p̂)`,
/// with the codegree at its admissible maximum `Δ^{6/10}`.
///
/// `ω` falls below 1 unless `ln Δ > 86 000`; such parameters are returned
/// anyway and reported infeasible by [`check_constraints`].
pub fn fixed_assignment(ln_delta: f64, ln_delta2: f64) -> Parameters {
    let epsilon = 1.0 / 40.0;
    let omega = (1.0 / 25.0) * (epsilon / 86.0) * ln_delta;
    let ln_p_hat = -(11.0 / 24.0) * ln_delta;
    let theta = epsilon / omega;
    let ln_omega0 = -((19.0 * theta).ln() + ln_p_hat);
    let inputs = ParamInputs {
        ln_delta,
        ln_delta2,
        ln_codegree: 0.6 * ln_delta,
        epsilon,
        omega,
        ln_p_hat,
        ln_omega0,
    };
    derive_unchecked(&inputs, Regime::Formula)
}

impl Parameters {
    /// Hand-tuned parameters for desk-scale runs. `ω` and `ε` are backed out
    /// of the supplied values (`C = √(Δ/ω)`, `θ = ε/ω`) so that every
    /// derived quantity and envelope stays defined.
    pub fn practical(delta: f64, delta2: f64, codegree: f64, np: NibbleParams) -> Result<Self> {
        if np.colors == 0 || np.iterations == 0 {
            return Err(Error::input("colors and iterations must be positive"));
        }
        if !(np.theta > 0.0 && np.theta <= 1.0) {
            return Err(Error::input(format!(
                "theta must lie in (0, 1], got {}",
                np.theta
            )));
        }
        if !(np.p_hat > 0.0 && np.p_hat <= 1.0) {
            return Err(Error::input(format!(
                "p_hat must lie in (0, 1], got {}",
                np.p_hat
            )));
        }
        let delta = delta.max(1.0);
        let colors = np.colors as f64;
        let omega = delta / (colors * colors);
        let epsilon = np.theta * omega;
        let ln_omega0 = -(19.0 * np.theta * np.p_hat).ln();
        let ln_colors = colors.ln();
        let iterations = np.iterations as f64;
        Ok(Parameters {
            ln_delta: delta.ln(),
            ln_delta2: delta2.ln(),
            ln_codegree: codegree.ln(),
            epsilon,
            omega,
            ln_p_hat: np.p_hat.ln(),
            p_hat: np.p_hat,
            ln_omega0,
            ln_colors,
            iterations,
            theta: np.theta,
            m: M,
            ln_omega1: ln_pos(iterations) + ln_pos(ln_colors),
            ln_omega2: ln_omega0 - (16.0 * omega).ln(),
            ln_omega3: 2.0 * omega.ln(),
            ln_omega4: 2.0 * omega.ln(),
            ln_omega5: 0.95 * delta.ln(),
            ln_omega6: 0.25 * delta.ln(),
            c0: C0,
            regime: Regime::Practical,
        })
    }

    pub fn p_hat(&self) -> f64 {
        self.p_hat
    }

    pub fn delta(&self) -> f64 {
        self.ln_delta.exp()
    }

    pub fn colors(&self) -> f64 {
        self.ln_colors.exp()
    }

    /// Reasons this parameter set lies outside the algorithm's domain.
    pub fn regime_issues(&self) -> Vec<String> {
        let mut out = Vec::new();
        if !(self.omega > 1.0) {
            out.push(format!("omega = {:.6e} is not above 1", self.omega));
        }
        if !(self.theta > 0.0 && self.theta < 0.5) {
            out.push(format!("theta = {:.6e} is outside (0, 1/2)", self.theta));
        }
        if !(self.iterations >= 1.0) {
            out.push(format!("T = {} is below 1", self.iterations));
        }
        if !(self.epsilon > 0.0 && self.epsilon < 1.0) {
            out.push(format!("epsilon = {} is outside (0, 1)", self.epsilon));
        }
        if !(self.ln_p_hat <= 0.0) {
            out.push("p_hat exceeds 1".to_string());
        }
        if !(self.ln_colors >= 0.0) {
            out.push("C is below 1".to_string());
        }
        out
    }

    /// The engine parameters, when `C` and `T` are small enough to run.
    pub fn nibble_params(&self) -> Result<NibbleParams> {
        let colors = self.colors().round();
        if !(1.0..1.0e7).contains(&colors) {
            return Err(Error::parameter(format!(
                "C = e^{:.3} is not a runnable color count",
                self.ln_colors
            )));
        }
        if !(self.iterations >= 1.0 && self.iterations < 1.0e7) {
            return Err(Error::parameter(format!(
                "T = {} is not a runnable iteration count",
                self.iterations
            )));
        }
        Ok(NibbleParams {
            colors: colors as usize,
            iterations: self.iterations as usize,
            theta: self.theta,
            p_hat: self.p_hat(),
        })
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn derive_formulas() {
        // choose Δ so that ω = 2
        let inp = ParamInputs::new(1.0e6, 10.0, 4.0, 1.0 / 40.0, 2.0, 0.01, 1.0e5);
        let p = derive(&inp).unwrap();
        assert!((p.theta - 1.0 / 80.0).abs() < 1e-15);
        assert_eq!(p.iterations, (400.0 * 2f64.ln()).ceil());
        assert_eq!(p.m, 21);
        assert_eq!(p.colors().round(), (1.0e6f64 / 2.0).sqrt().ceil());
        assert!((p.ln_omega3 - 2.0 * 2f64.ln()).abs() < 1e-12);
        assert!((p.ln_omega2 - (1.0e5f64 / 32.0).ln()).abs() < 1e-12);
    }

    #[test]
    fn omega5_omega6_at_two_to_twenty() {
        let inp = ParamInputs::new(2f64.powi(20), 1.0, 1.0, 0.025, 3.0, 0.01, 10.0);
        let p = derive(&inp).unwrap();
        assert!((p.ln_omega5.exp() - 2f64.powi(19)).abs() < 1e-6);
        assert!((p.ln_omega6.exp() - 32.0).abs() < 1e-9);
    }

    #[test]
    fn derive_rejects_bad_inputs() {
        let ok = ParamInputs::new(1.0e6, 10.0, 4.0, 0.025, 2.0, 0.01, 1.0e5);
        assert!(derive(&ok).is_ok());
        for bad in [
            ParamInputs { epsilon: 0.0, ..ok },
            ParamInputs { omega: 1.0, ..ok },
            ParamInputs {
                omega: f64::NAN,
                ..ok
            },
            ParamInputs {
                ln_delta: f64::NEG_INFINITY,
                ..ok
            },
            ParamInputs {
                ln_p_hat: 0.5,
                ..ok
            },
            ParamInputs {
                ln_delta2: f64::NAN,
                ..ok
            },
        ] {
            assert!(derive(&bad).is_err(), "{bad:?}");
        }
        // zero 2-degree is fine
        assert!(derive(&ParamInputs::new(1.0e6, 0.0, 4.0, 0.025, 2.0, 0.01, 1.0e5)).is_ok());
    }

    #[test]
    fn fixed_assignment_values() {
        let ln_delta = 24.0 * 2f64.ln();
        let p = fixed_assignment(ln_delta, 0.0);
        assert!((p.p_hat() - 2f64.powi(-11)).abs() < 1e-15);

        let p = fixed_assignment(1.0e6f64.ln(), 0.0);
        assert!((p.omega - 1.606e-4).abs() < 1e-6, "omega = {}", p.omega);
        assert!(!p.regime_issues().is_empty());

        // boundary ω = 1
        let p = fixed_assignment(25.0 * 86.0 * 40.0, 0.0);
        assert!((p.omega - 1.0).abs() < 1e-12);
    }

    #[test]
    fn practical_roundtrip() {
        let np = NibbleParams {
            colors: 12,
            iterations: 30,
            theta: 0.3,
            p_hat: 0.25,
        };
        let p = Parameters::practical(30.0, 2.0, 1.0, np).unwrap();
        assert_eq!(p.regime, Regime::Practical);
        assert_eq!(p.nibble_params().unwrap(), np);
        assert!((p.omega - 30.0 / 144.0).abs() < 1e-15);
    }
}
