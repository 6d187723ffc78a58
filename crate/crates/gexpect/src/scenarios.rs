//! Dual side of the sublinear expectation: volatility-controlled scenarios.
//!
//! The G-expectation has the dual representation `E[X] = sup_P E_P[X]` over
//! a family of laws induced by adapted volatility controls
//! `sigma_t in [sigma_low, sigma_high]`. Simulating under any finite family
//! of controls therefore yields
//!
//! * certified lower bounds for `E[X]` (maximal Monte Carlo mean), and
//! * lower bounds for the Choquet capacity `v(A) = sup_P P(A)` (maximal
//!   empirical frequency).
//!
//! The inf-side capacity bound goes through the PDE instead: for a
//! piecewise-linear sub-indicator `g <= 1_[a,b]`,
//! `inf_P P(a <= B_t <= b) >= -E[-g(B_t)]`, which is the one direction a
//! finite scenario family cannot certify.
//!
//! Paths are Euler constructions `dB = sigma sqrt(dt) xi` with per-path RNG
//! substreams derived from `(seed, path index)`, so ensembles are
//! reproducible and independent of the worker count. Means are accumulated
//! with pairwise summation in index order.

use crate::cylinder::CylinderFunctional;
use crate::gheat::{self, Accuracy, GheatError, VolatilityBand};
use crate::payoff::{EventPredicate, Expr, PayoffError, PayoffExpr};
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rand_distr::{Distribution, StandardNormal};
use rayon::prelude::*;
use serde::{Deserialize, Serialize};
use std::io::{self, Write};
use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum ScenarioError {
    #[error("Monte Carlo parameters need n_paths >= 1 and n_steps >= 1")]
    BadMcParams,
    #[error("horizon must be positive, got {horizon}")]
    BadHorizon { horizon: f64 },
    #[error("policy emits sigma = {sigma} outside [{sigma_low}, {sigma_high}] at path {path}, step {step}")]
    SigmaOutOfBand {
        sigma: f64,
        sigma_low: f64,
        sigma_high: f64,
        path: usize,
        step: usize,
    },
    #[error("piecewise policy needs strictly increasing breakpoints and len(sigmas) = len(breakpoints) + 1")]
    BadPiecewisePolicy,
    #[error("policy family is empty")]
    EmptyPolicyFamily,
    #[error(
        "functional references x{arity}, but the simulated state exposes only {max} coordinates"
    )]
    FunctionalArity { arity: usize, max: usize },
    #[error("cylinder time {t} does not fall on a distinct simulation step; increase n_steps")]
    TimeNotResolved { t: f64 },
    #[error("mollified indicator support is empty: need b - a > 2 epsilon, got b - a = {width}, epsilon = {epsilon}")]
    EmptyMollifiedSupport { width: f64, epsilon: f64 },
    #[error("mollifier needs a < b and epsilon > 0, got a = {a}, b = {b}, epsilon = {epsilon}")]
    BadMollifier { a: f64, b: f64, epsilon: f64 },
    #[error(transparent)]
    Gheat(#[from] GheatError),
    #[error(transparent)]
    Payoff(#[from] PayoffError),
}

/// Monte Carlo parameters. The seed is always explicit; there is no
/// wall-clock default.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct McParams {
    pub n_paths: usize,
    pub n_steps: usize,
    pub seed: u64,
}

impl McParams {
    pub fn new(n_paths: usize, n_steps: usize, seed: u64) -> Result<Self, ScenarioError> {
        if n_paths == 0 || n_steps == 0 {
            return Err(ScenarioError::BadMcParams);
        }
        Ok(McParams {
            n_paths,
            n_steps,
            seed,
        })
    }
}

/// An adapted volatility control. Every emitted sigma must lie in the band.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum ControlPolicy {
    /// `sigma_t = sigma` for all t.
    Constant { sigma: f64 },
    /// `sigma_t = sigmas[j]` on `[breakpoints[j-1], breakpoints[j])`, with
    /// the first interval starting at 0 and the last extending to the
    /// horizon. Requires `sigmas.len() == breakpoints.len() + 1`.
    PiecewiseConstant {
        breakpoints: Vec<f64>,
        sigmas: Vec<f64>,
    },
    /// Bang-bang feedback: `sigma_high` where the predicate holds at
    /// `(x1, x2) = (t, B_t)`, else `sigma_low`.
    FeedbackBangBang { predicate: EventPredicate },
}

impl ControlPolicy {
    pub fn constant(sigma: f64) -> Self {
        ControlPolicy::Constant { sigma }
    }

    /// Short descriptor for reports.
    pub fn describe(&self) -> String {
        match self {
            ControlPolicy::Constant { sigma } => format!("constant sigma = {sigma}"),
            ControlPolicy::PiecewiseConstant {
                breakpoints,
                sigmas,
            } => {
                format!("piecewise sigma = {sigmas:?} at breakpoints {breakpoints:?}")
            }
            ControlPolicy::FeedbackBangBang { predicate } => {
                format!("bang-bang on ({predicate}) with (x1, x2) = (t, B)")
            }
        }
    }

    fn validate(&self, band: &VolatilityBand) -> Result<(), ScenarioError> {
        match self {
            ControlPolicy::Constant { .. } => Ok(()),
            ControlPolicy::PiecewiseConstant {
                breakpoints,
                sigmas,
            } => {
                if sigmas.len() != breakpoints.len() + 1
                    || breakpoints.windows(2).any(|w| w[1] <= w[0])
                    || breakpoints.iter().any(|b| !b.is_finite() || *b < 0.0)
                {
                    return Err(ScenarioError::BadPiecewisePolicy);
                }
                Ok(())
            }
            ControlPolicy::FeedbackBangBang { predicate } => {
                if predicate.arity() > 2 {
                    return Err(ScenarioError::FunctionalArity {
                        arity: predicate.arity(),
                        max: 2,
                    });
                }
                let _ = band;
                Ok(())
            }
        }
    }

    fn sigma_at(&self, t: f64, b: f64, band: &VolatilityBand) -> Result<f64, PayoffError> {
        Ok(match self {
            ControlPolicy::Constant { sigma } => *sigma,
            ControlPolicy::PiecewiseConstant {
                breakpoints,
                sigmas,
            } => {
                let idx = breakpoints.iter().take_while(|&&bp| bp <= t).count();
                sigmas[idx]
            }
            ControlPolicy::FeedbackBangBang { predicate } => {
                if predicate.holds(&[t, b])? {
                    band.sigma_high()
                } else {
                    band.sigma_low()
                }
            }
        })
    }
}

/// Simulated ensemble summary: Brownian state and running quadratic
/// variation, recorded at a small set of times (always including the
/// horizon).
///
/// Quadratic variation is tracked as the running sum of `sigma^2`, scaled by
/// `dt` at read-out, so that pathwise band bounds
/// `sigma_low^2 t <= qv(t) <= sigma_high^2 t` survive floating-point
/// accumulation whenever the squared volatilities are exactly representable.
#[derive(Debug, Clone, PartialEq)]
pub struct PathEnsemble {
    horizon: f64,
    n_paths: usize,
    n_steps: usize,
    seed: u64,
    record_times: Vec<f64>,
    // Row-major [path][record].
    b: Vec<f64>,
    qv: Vec<f64>,
}

impl PathEnsemble {
    pub fn horizon(&self) -> f64 {
        self.horizon
    }

    pub fn n_paths(&self) -> usize {
        self.n_paths
    }

    pub fn n_steps(&self) -> usize {
        self.n_steps
    }

    pub fn seed(&self) -> u64 {
        self.seed
    }

    /// Times at which state was recorded (step-snapped, increasing, last is
    /// the horizon).
    pub fn record_times(&self) -> &[f64] {
        &self.record_times
    }

    pub fn b_at(&self, path: usize, record: usize) -> f64 {
        self.b[path * self.record_times.len() + record]
    }

    pub fn qv_at(&self, path: usize, record: usize) -> f64 {
        self.qv[path * self.record_times.len() + record]
    }

    pub fn terminal_b(&self, path: usize) -> f64 {
        self.b_at(path, self.record_times.len() - 1)
    }

    pub fn terminal_qv(&self, path: usize) -> f64 {
        self.qv_at(path, self.record_times.len() - 1)
    }

    /// CSV dump of per-path terminal state, header `path,B_T,qv_T`.
    pub fn write_summary_csv<W: Write>(&self, w: &mut W) -> io::Result<()> {
        writeln!(w, "path,B_T,qv_T")?;
        for k in 0..self.n_paths {
            writeln!(w, "{},{},{}", k, self.terminal_b(k), self.terminal_qv(k))?;
        }
        Ok(())
    }
}

/// Simulate an ensemble, recording terminal state only.
pub fn simulate(
    policy: &ControlPolicy,
    band: &VolatilityBand,
    horizon: f64,
    mc: &McParams,
) -> Result<PathEnsemble, ScenarioError> {
    simulate_recorded(policy, band, horizon, mc, &[])
}

/// Simulate an ensemble, additionally recording state at `record_times`
/// (snapped to the nearest step; must resolve to distinct steps).
pub fn simulate_recorded(
    policy: &ControlPolicy,
    band: &VolatilityBand,
    horizon: f64,
    mc: &McParams,
    record_times: &[f64],
) -> Result<PathEnsemble, ScenarioError> {
    if !(horizon.is_finite() && horizon > 0.0) {
        return Err(ScenarioError::BadHorizon { horizon });
    }
    McParams::new(mc.n_paths, mc.n_steps, mc.seed)?;
    policy.validate(band)?;

    let dt = horizon / mc.n_steps as f64;
    let record_steps = resolve_record_steps(record_times, dt, mc.n_steps)?;
    let n_rec = record_steps.len();
    let sqrt_dt = dt.sqrt();
    let (sl, sh) = (band.sigma_low(), band.sigma_high());

    let per_path: Result<Vec<PathRecords>, ScenarioError> = (0..mc.n_paths)
        .into_par_iter()
        .map(|path| {
            let mut rng = ChaCha8Rng::seed_from_u64(mc.seed);
            rng.set_stream(path as u64);
            let mut b = 0.0f64;
            let mut sum_sq = 0.0f64; // running sum of sigma^2
            let mut rec_b = Vec::with_capacity(n_rec);
            let mut rec_qv = Vec::with_capacity(n_rec);
            let mut next_rec = 0usize;
            for step in 0..mc.n_steps {
                let t = step as f64 * dt;
                let sigma = policy.sigma_at(t, b, band)?;
                if !(sigma >= sl && sigma <= sh) {
                    return Err(ScenarioError::SigmaOutOfBand {
                        sigma,
                        sigma_low: sl,
                        sigma_high: sh,
                        path,
                        step,
                    });
                }
                let xi: f64 = StandardNormal.sample(&mut rng);
                b += sigma * sqrt_dt * xi;
                sum_sq += sigma * sigma;
                if next_rec < n_rec && record_steps[next_rec] == step + 1 {
                    rec_b.push(b);
                    rec_qv.push(sum_sq * dt);
                    next_rec += 1;
                }
            }
            Ok((rec_b, rec_qv))
        })
        .collect();
    let per_path = per_path?;

    let mut b = Vec::with_capacity(mc.n_paths * n_rec);
    let mut qv = Vec::with_capacity(mc.n_paths * n_rec);
    for (pb, pq) in per_path {
        b.extend_from_slice(&pb);
        qv.extend_from_slice(&pq);
    }

    let record_times = record_steps.iter().map(|&s| s as f64 * dt).collect();
    Ok(PathEnsemble {
        horizon,
        n_paths: mc.n_paths,
        n_steps: mc.n_steps,
        seed: mc.seed,
        record_times,
        b,
        qv,
    })
}

/// Per-path recorded (B, qv) slices, in record order.
type PathRecords = (Vec<f64>, Vec<f64>);

fn resolve_record_steps(
    record_times: &[f64],
    dt: f64,
    n_steps: usize,
) -> Result<Vec<usize>, ScenarioError> {
    let mut steps: Vec<usize> = Vec::with_capacity(record_times.len() + 1);
    for &t in record_times {
        let s = (t / dt).round();
        if !(s >= 1.0 && s <= n_steps as f64) {
            return Err(ScenarioError::TimeNotResolved { t });
        }
        let s = s as usize;
        if steps.contains(&s) {
            return Err(ScenarioError::TimeNotResolved { t });
        }
        steps.push(s);
    }
    if !steps.contains(&n_steps) {
        steps.push(n_steps);
    }
    steps.sort_unstable();
    Ok(steps)
}

/// A functional the scenario engine can evaluate per path.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum McFunctional {
    /// Payoff of increments at the cylinder's partition times.
    Cylinder(CylinderFunctional),
    /// Payoff of terminal state with `(x1, x2) = (B_T, <B>_T)`.
    Terminal { payoff: PayoffExpr, horizon: f64 },
}

impl McFunctional {
    /// The terminal quadratic variation `<B>_T`.
    pub fn terminal_qv(horizon: f64) -> Self {
        McFunctional::Terminal {
            payoff: PayoffExpr::new(Expr::Var(1)).expect("x2 is a valid payoff"),
            horizon,
        }
    }

    pub fn horizon(&self) -> f64 {
        match self {
            McFunctional::Cylinder(f) => f.horizon(),
            McFunctional::Terminal { horizon, .. } => *horizon,
        }
    }

    fn validate(&self) -> Result<(), ScenarioError> {
        match self {
            McFunctional::Cylinder(_) => Ok(()),
            McFunctional::Terminal { payoff, .. } => {
                if payoff.arity() > 2 {
                    Err(ScenarioError::FunctionalArity {
                        arity: payoff.arity(),
                        max: 2,
                    })
                } else {
                    Ok(())
                }
            }
        }
    }

    fn record_times(&self) -> Vec<f64> {
        match self {
            McFunctional::Cylinder(f) => f.times().to_vec(),
            McFunctional::Terminal { .. } => vec![],
        }
    }

    fn eval_path(&self, ensemble: &PathEnsemble, path: usize) -> Result<f64, PayoffError> {
        match self {
            McFunctional::Cylinder(f) => {
                let n = f.n_increments();
                let mut incs = Vec::with_capacity(n);
                let mut prev = 0.0;
                // Partition times occupy the leading records in order.
                for k in 0..n {
                    let b = ensemble.b_at(path, k);
                    incs.push(b - prev);
                    prev = b;
                }
                f.payoff().eval(&incs)
            }
            McFunctional::Terminal { payoff, .. } => {
                payoff.eval(&[ensemble.terminal_b(path), ensemble.terminal_qv(path)])
            }
        }
    }
}

/// Pairwise summation in index order: deterministic for a fixed input
/// regardless of worker count, accurate to a few ulps.
fn pairwise_sum(xs: &[f64]) -> f64 {
    if xs.len() <= 32 {
        return xs.iter().sum();
    }
    let mid = xs.len() / 2;
    pairwise_sum(&xs[..mid]) + pairwise_sum(&xs[mid..])
}

/// Mean and 99% confidence half-width (normal approximation).
fn mean_and_ci99(xs: &[f64]) -> (f64, f64) {
    let n = xs.len() as f64;
    let mean = pairwise_sum(xs) / n;
    if xs.len() < 2 {
        return (mean, f64::INFINITY);
    }
    let sq: Vec<f64> = xs.iter().map(|&x| (x - mean) * (x - mean)).collect();
    let var = pairwise_sum(&sq) / (n - 1.0);
    // Phi^{-1}(0.995)
    const Z99: f64 = 2.575829303548901;
    (mean, Z99 * (var / n).sqrt())
}

/// Per-policy Monte Carlo estimate.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct PolicyEstimate {
    pub mean: f64,
    pub ci_halfwidth: f64,
}

/// Result of the finite inner maximization `max_policy E_policy[X]`.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct LowerBoundResult {
    /// Best Monte Carlo mean: a lower bound for `E[X]` up to MC error.
    pub value: f64,
    /// 99% confidence half-width of the best mean.
    pub ci_halfwidth: f64,
    pub argmax_index: usize,
    pub argmax_policy: ControlPolicy,
    pub per_policy: Vec<PolicyEstimate>,
}

/// Maximize the Monte Carlo mean of `f` over a finite policy family.
///
/// The result under-estimates `E[X] = sup_P E_P[X]` (up to MC error),
/// which is the certified direction for a lower bound.
pub fn lower_bound_expectation(
    f: &McFunctional,
    band: &VolatilityBand,
    policies: &[ControlPolicy],
    mc: &McParams,
) -> Result<LowerBoundResult, ScenarioError> {
    if policies.is_empty() {
        return Err(ScenarioError::EmptyPolicyFamily);
    }
    f.validate()?;
    let horizon = f.horizon();
    let record = f.record_times();

    let mut per_policy = Vec::with_capacity(policies.len());
    for policy in policies {
        let ensemble = simulate_recorded(policy, band, horizon, mc, &record)?;
        let values: Result<Vec<f64>, PayoffError> = (0..ensemble.n_paths())
            .map(|k| f.eval_path(&ensemble, k))
            .collect();
        let (mean, ci) = mean_and_ci99(&values?);
        per_policy.push(PolicyEstimate {
            mean,
            ci_halfwidth: ci,
        });
    }

    let argmax_index = per_policy
        .iter()
        .enumerate()
        .max_by(|a, b| a.1.mean.total_cmp(&b.1.mean))
        .map(|(i, _)| i)
        .unwrap();
    Ok(LowerBoundResult {
        value: per_policy[argmax_index].mean,
        ci_halfwidth: per_policy[argmax_index].ci_halfwidth,
        argmax_index,
        argmax_policy: policies[argmax_index].clone(),
        per_policy,
    })
}

/// Result of the capacity sup-side estimate.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct CapacityLowerResult {
    /// Best empirical probability: lower-bounds `v(A) = sup_P P(A)`.
    pub value: f64,
    pub argmax_index: usize,
    pub argmax_policy: ControlPolicy,
    /// Empirical probability under each policy.
    pub per_policy: Vec<f64>,
}

/// Maximal empirical probability of an event of the terminal state
/// `(x1, x2) = (B_T, <B>_T)` over a finite policy family; lower-bounds the
/// Choquet capacity of the event.
pub fn capacity_lower_bound(
    event: &EventPredicate,
    band: &VolatilityBand,
    policies: &[ControlPolicy],
    horizon: f64,
    mc: &McParams,
) -> Result<CapacityLowerResult, ScenarioError> {
    if policies.is_empty() {
        return Err(ScenarioError::EmptyPolicyFamily);
    }
    if event.arity() > 2 {
        return Err(ScenarioError::FunctionalArity {
            arity: event.arity(),
            max: 2,
        });
    }
    let mut per_policy = Vec::with_capacity(policies.len());
    for policy in policies {
        let ensemble = simulate(policy, band, horizon, mc)?;
        let mut hits = 0usize;
        for k in 0..ensemble.n_paths() {
            if event.holds(&[ensemble.terminal_b(k), ensemble.terminal_qv(k)])? {
                hits += 1;
            }
        }
        per_policy.push(hits as f64 / ensemble.n_paths() as f64);
    }
    let argmax_index = per_policy
        .iter()
        .enumerate()
        .max_by(|a, b| a.1.total_cmp(b.1))
        .map(|(i, _)| i)
        .unwrap();
    Ok(CapacityLowerResult {
        value: per_policy[argmax_index],
        argmax_index,
        argmax_policy: policies[argmax_index].clone(),
        per_policy,
    })
}

/// Piecewise-linear sub-indicator of `[a, b]`: support `[a+eps, b-eps]`,
/// ramps of width `eps`, plateau value 1. Built as a payoff AST so it can
/// feed the PDE solver.
pub(crate) fn mollified_sub_indicator(
    a: f64,
    b: f64,
    epsilon: f64,
) -> Result<PayoffExpr, ScenarioError> {
    if !(a.is_finite() && b.is_finite() && a < b && epsilon > 0.0) {
        return Err(ScenarioError::BadMollifier { a, b, epsilon });
    }
    if b - a <= 2.0 * epsilon {
        return Err(ScenarioError::EmptyMollifiedSupport {
            width: b - a,
            epsilon,
        });
    }
    let lo = a + epsilon;
    let hi = b - epsilon;
    let slope = 1.0 / epsilon;
    let x = || Box::new(Expr::Var(0));
    let ramp_up = Expr::Mul(
        Box::new(Expr::Const(slope)),
        Box::new(Expr::Sub(x(), Box::new(Expr::Const(lo)))),
    );
    let ramp_down = Expr::Mul(
        Box::new(Expr::Const(slope)),
        Box::new(Expr::Sub(Box::new(Expr::Const(hi)), x())),
    );
    let inner = Expr::Min(vec![Expr::Const(1.0), ramp_up, ramp_down]);
    let g = Expr::Max(vec![Expr::Const(0.0), inner]);
    Ok(PayoffExpr::new(g).expect("mollifier AST is valid"))
}

/// Certified lower bound for `inf_P P(a <= B_t <= b)`, computed PDE-side as
/// `-E[-g(B_t)]` with `g` the mollified sub-indicator. Equivalently an
/// upper bound of `1 - value` for the capacity of the complement event.
///
/// This is the safe direction a finite scenario family cannot provide: the
/// sup over finitely many policies under-estimates `v`, while the inf needs
/// an over-approximation of the whole family, which only the PDE gives.
pub fn capacity_complement_upper(
    a: f64,
    b: f64,
    t: f64,
    band: &VolatilityBand,
    epsilon: f64,
) -> Result<f64, ScenarioError> {
    let g = mollified_sub_indicator(a, b, epsilon)?;
    // Resolve the ramps: dx at most epsilon/4, domain covering [a, b].
    let radius = a.abs().max(b.abs()) + 1.0;
    let half = 6.0 * band.sigma_high() * t.sqrt() + radius;
    let dx = (epsilon / 4.0).min(0.025);
    let n = ((half / dx).ceil() as usize).max(200) * 2 + 1;
    let grid = gheat::GridSpec::new(-half, half, n, t, gheat::DEFAULT_CFL_SAFETY)?;
    let value = gheat::g_expectation_terminal(&g.negated(), band, t, &Accuracy::Grid(grid))?;
    Ok(-value)
}
