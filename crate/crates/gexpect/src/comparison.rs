//! Strict-comparison machinery on top of the two engines.
//!
//! For payoffs of Brownian increments with `phi <= psi` everywhere and
//! `sigma_low > 0`, the expectations separate strictly exactly when some
//! point has `phi(x0) < psi(x0)`. This module mechanizes that check at grid
//! resolution, the companion negativity check for single-increment payoffs,
//! mean-certainty detection, and the quadratic-variation counterexample
//! showing that capacity-one strictness of an event does **not** force a
//! strict gap in expectation.
//!
//! Verdicts are tolerance-aware: the default tolerance is
//! `max(1e-4, 3 x estimated scheme error)` where the estimate comes from one
//! grid-refinement step, so verdicts do not flip on discretization noise.
//! A witness found at grid resolution is sound; a sub-grid-width witness can
//! be missed, which limits completeness, not soundness. With
//! `sigma_low = 0` the inputs are still processed but the strictness
//! guarantee is downgraded to a report: the degenerate band genuinely
//! breaks the theorem (the payoff `min(x, 0)` has expectation 0 there).

use crate::cylinder::{self, CylinderError, CylinderFunctional, PrefixGrid};
use crate::gheat::{self, Accuracy, GheatError, VolatilityBand};
use crate::payoff::{EventPredicate, PayoffError, PayoffExpr, Relation};
use crate::scenarios::{self, ControlPolicy, McFunctional, McParams, ScenarioError};
use serde::Serialize;
use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum ComparisonError {
    #[error("payoff must reference at most x1, got arity {arity}")]
    PayoffArity { arity: usize },
    #[error("payoff is positive at x = {x}: phi({x}) = {value} > 0")]
    PhiPositive { x: f64, value: f64 },
    #[error(
        "the counterexample needs sigma_high > sigma_low > 0, got [{sigma_low}, {sigma_high}]"
    )]
    BandHypothesis { sigma_low: f64, sigma_high: f64 },
    #[error(transparent)]
    Cylinder(#[from] CylinderError),
    #[error(transparent)]
    Gheat(#[from] GheatError),
    #[error(transparent)]
    Scenario(#[from] ScenarioError),
    #[error(transparent)]
    Payoff(#[from] PayoffError),
}

/// Outcome class of a comparison.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub enum Verdict {
    /// `value_hi - value_lo > tolerance`.
    StrictLess,
    /// `|value_hi - value_lo| <= tolerance`.
    EqualWithinTol,
    /// `value_hi - value_lo < -tolerance`; should not happen for ordered
    /// payoffs and indicates a broken input or tolerance.
    OrderViolation,
}

/// A comparison outcome: both values, their gap, and the tolerance the
/// verdict was decided at.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ComparisonVerdict {
    pub value_lo: f64,
    pub value_hi: f64,
    pub gap: f64,
    pub tolerance: f64,
    pub verdict: Verdict,
}

impl ComparisonVerdict {
    fn classify(value_lo: f64, value_hi: f64, tolerance: f64) -> Self {
        let gap = value_hi - value_lo;
        let verdict = if gap > tolerance {
            Verdict::StrictLess
        } else if gap < -tolerance {
            Verdict::OrderViolation
        } else {
            Verdict::EqualWithinTol
        };
        ComparisonVerdict {
            value_lo,
            value_hi,
            gap,
            tolerance,
            verdict,
        }
    }
}

/// Floor below which the default tolerance never drops.
const TOLERANCE_FLOOR: f64 = 1e-4;

fn default_tolerance(scheme_error_estimate: f64) -> f64 {
    TOLERANCE_FLOOR.max(3.0 * scheme_error_estimate)
}

/// Report of a strict-comparison check between two cylinder functionals.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct StrictComparisonReport {
    pub verdict: ComparisonVerdict,
    /// A grid node with `phi(x0) < psi(x0) - tolerance`, when one exists.
    /// Existence of a witness is the "if" side of the strictness
    /// equivalence; its absence at grid resolution supports the "only if"
    /// side.
    pub witness: Option<Vec<f64>>,
    /// Whether `sigma_low > 0`. When false the StrictLess guarantee does
    /// not apply and the verdict is informational.
    pub sigma_low_positive: bool,
}

/// Strict-comparison check: evaluates both functionals on one
/// discretization, scans for an order violation and a strictness witness,
/// and classifies the gap.
///
/// With `tolerance = None` the tolerance is calibrated from one
/// grid-refinement step (Richardson-style), and the refined values are the
/// ones reported.
pub fn check_strict(
    f_lo: &CylinderFunctional,
    f_hi: &CylinderFunctional,
    band: &VolatilityBand,
    grid: &PrefixGrid,
    tolerance: Option<f64>,
) -> Result<StrictComparisonReport, ComparisonError> {
    let (values, tol) = match tolerance {
        Some(tol) => (cylinder::evaluate_pair(f_lo, f_hi, band, grid)?, tol),
        None => {
            let coarse = cylinder::evaluate_pair(f_lo, f_hi, band, grid)?;
            let fine = cylinder::evaluate_pair(f_lo, f_hi, band, &grid.refined())?;
            let est = (coarse.0 - fine.0).abs().max((coarse.1 - fine.1).abs());
            (fine, default_tolerance(est))
        }
    };
    let verdict = ComparisonVerdict::classify(values.0, values.1, tol);
    let witness = cylinder::scan_order(f_lo, f_hi, band, tol)?;
    Ok(StrictComparisonReport {
        verdict,
        witness,
        sigma_low_positive: band.sigma_low() > 0.0,
    })
}

/// Report of a negativity check of a single-increment payoff against zero.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct NegativityReport {
    /// Verdict of `E[phi(B_1)]` against 0 (`value_hi = 0`).
    pub verdict: ComparisonVerdict,
    /// A grid node with `phi(x0) < 0`, when one exists. Without a witness
    /// (phi identically zero on the grid) there is nothing to separate.
    pub witness: Option<f64>,
    /// Whether `sigma_low > 0`, the hypothesis under which a witness forces
    /// a strictly negative expectation.
    pub sigma_low_positive: bool,
}

/// Check `E[phi(B_1)] < 0` for a nonpositive payoff with a negative
/// witness. Fails if `phi > 0` anywhere on the evaluation grid; a missing
/// witness or `sigma_low = 0` downgrade the report instead of failing.
pub fn check_negativity(
    phi: &PayoffExpr,
    band: &VolatilityBand,
    accuracy: &Accuracy,
    tolerance: Option<f64>,
) -> Result<NegativityReport, ComparisonError> {
    if phi.arity() > 1 {
        return Err(ComparisonError::PayoffArity { arity: phi.arity() });
    }

    // Scan sign structure on the solve grid's footprint.
    let radius = gheat::linearity_radius(|x| phi.eval(&[x]).unwrap_or(f64::NAN));
    let scan_half = match accuracy {
        Accuracy::Grid(g) => g.x_max().max(-g.x_min()),
        Accuracy::AutoRadius(r) => 6.0 * band.sigma_high() + r,
        Accuracy::Auto => 6.0 * band.sigma_high() + radius,
    };
    let mut witness = None;
    const SCAN_NODES: usize = 2001;
    for i in 0..SCAN_NODES {
        let x = -scan_half + 2.0 * scan_half * i as f64 / (SCAN_NODES - 1) as f64;
        let v = phi.eval(&[x])?;
        if v > 0.0 {
            return Err(ComparisonError::PhiPositive { x, value: v });
        }
        if witness.is_none() && v < 0.0 {
            witness = Some(x);
        }
    }

    let t = 1.0;
    let (value, tol) = match tolerance {
        Some(tol) => (gheat::g_expectation_terminal(phi, band, t, accuracy)?, tol),
        None => {
            let coarse = gheat::g_expectation_terminal(phi, band, t, accuracy)?;
            let refined = match accuracy {
                Accuracy::Grid(g) => Accuracy::Grid(g.refined()),
                auto => {
                    // One refinement of the auto grid.
                    let base = match auto {
                        Accuracy::AutoRadius(r) => gheat::auto_grid(*r, band, t)?,
                        _ => gheat::auto_grid(radius, band, t)?,
                    };
                    Accuracy::Grid(base.refined())
                }
            };
            let fine = gheat::g_expectation_terminal(phi, band, t, &refined)?;
            (fine, default_tolerance((coarse - fine).abs()))
        }
    };

    Ok(NegativityReport {
        verdict: ComparisonVerdict::classify(value, 0.0, tol),
        witness,
        sigma_low_positive: band.sigma_low() > 0.0,
    })
}

/// Report of a mean-certainty check.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct MeanCertaintyReport {
    /// True when `|E[X] + E[-X]| <= tolerance`: the sublinear expectation
    /// of X collapses to a single number.
    pub is_certain: bool,
    /// `E[X]`.
    pub e_plus: f64,
    /// `E[-X]`; mean certainty is `e_plus = -e_minus`.
    pub e_minus: f64,
    pub tolerance: f64,
}

/// Compute `E[X]` and `E[-X]` on the same discretization and test
/// `E[X] = -E[-X]` within `tolerance`.
pub fn check_mean_certainty(
    f: &CylinderFunctional,
    band: &VolatilityBand,
    grid: &PrefixGrid,
    tolerance: f64,
) -> Result<MeanCertaintyReport, ComparisonError> {
    let e_plus = cylinder::evaluate_cylinder(f, band, grid)?;
    let e_minus = cylinder::evaluate_cylinder(&f.negated(), band, grid)?;
    Ok(MeanCertaintyReport {
        is_certain: (e_plus + e_minus).abs() <= tolerance,
        e_plus,
        e_minus,
        tolerance,
    })
}

/// Scripted quadratic-variation counterexample.
///
/// With `sigma_high > sigma_low > 0`, the event `<B>_T < sigma_high^2 T`
/// has capacity one (witnessed by the constant-`sigma_low` scenario, under
/// which it holds on every path), yet `E[<B>_T] = sigma_high^2 T`: the
/// dominated variable loses nothing in expectation. The strictness
/// hypothesis `inf_P P(<B>_T < sigma_high^2 T) > 0` fails, refuted by the
/// constant-`sigma_high` scenario under which the event has probability 0.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct QvCounterexampleReport {
    pub sigma_low: f64,
    pub sigma_high: f64,
    pub horizon: f64,
    /// `sigma_high^2 T`, the almost-sure upper bound of `<B>_T`.
    pub qv_bound: f64,
    /// Empirical probability of `<B>_T < qv_bound` under constant
    /// `sigma_low`; equals 1 exactly, so the capacity of the event is 1.
    pub capacity_event_lower: f64,
    /// Monte Carlo lower bound of `E[<B>_T]` over the two constant
    /// policies; matches `qv_bound` up to MC error.
    pub expectation_value: f64,
    pub expectation_ci_halfwidth: f64,
    pub expectation_argmax: ControlPolicy,
    /// The exact value `E[<B>_T] = sigma_high^2 T`.
    pub expectation_theoretical: f64,
    /// Empirical probability of the event under constant `sigma_high`;
    /// equals 0 exactly, refuting `inf_P P(event) > 0`.
    pub refutation_prob_high: f64,
    /// True when the refutation leg came out exactly zero.
    pub strict_hypothesis_refuted: bool,
}

pub fn run_qv_counterexample(
    band: &VolatilityBand,
    horizon: f64,
    mc: &McParams,
) -> Result<QvCounterexampleReport, ComparisonError> {
    let (sl, sh) = (band.sigma_low(), band.sigma_high());
    if !(sh > sl && sl > 0.0) {
        return Err(ComparisonError::BandHypothesis {
            sigma_low: sl,
            sigma_high: sh,
        });
    }
    let qv_bound = sh * sh * horizon;
    let event = EventPredicate::new(
        PayoffExpr::parse("x2").expect("static payoff"),
        Relation::Lt,
        PayoffExpr::constant(qv_bound),
    );
    let low = ControlPolicy::constant(sl);
    let high = ControlPolicy::constant(sh);

    let capacity =
        scenarios::capacity_lower_bound(&event, band, std::slice::from_ref(&low), horizon, mc)?;
    let expectation = scenarios::lower_bound_expectation(
        &McFunctional::terminal_qv(horizon),
        band,
        &[low, high.clone()],
        mc,
    )?;
    let refutation =
        scenarios::capacity_lower_bound(&event, band, std::slice::from_ref(&high), horizon, mc)?;

    Ok(QvCounterexampleReport {
        sigma_low: sl,
        sigma_high: sh,
        horizon,
        qv_bound,
        capacity_event_lower: capacity.value,
        expectation_value: expectation.value,
        expectation_ci_halfwidth: expectation.ci_halfwidth,
        expectation_argmax: expectation.argmax_policy,
        expectation_theoretical: qv_bound,
        refutation_prob_high: refutation.value,
        strict_hypothesis_refuted: refutation.value == 0.0,
    })
}
