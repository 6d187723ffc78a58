//! Numerical laboratory for sublinear (G-) expectations.
//!
//! The crate computes `E[X]` for payoffs of a G-Brownian motion — a Brownian
//! motion whose volatility is only known to lie in a band `[sigma_low,
//! sigma_high]` — and mechanically checks when comparison between such
//! expectations is strict.
//!
//! Two independent engines answer the same questions from opposite sides:
//!
//! * [`gheat`] / [`cylinder`] — the primal side. A monotone explicit
//!   finite-difference scheme solves the fully nonlinear G-heat equation
//!   `du/dt = G(d2u/dx2)`, `G(a) = (sigma_high^2 a+ - sigma_low^2 a-)/2`,
//!   whose solution at `(t, 0)` is the sublinear expectation of a terminal
//!   payoff. Multi-time payoffs of Brownian increments reduce to nested
//!   one-dimensional solves by backward recursion.
//! * [`scenarios`] — the dual side. The sublinear expectation is the
//!   supremum of classical expectations over volatility-controlled
//!   diffusions, so Monte Carlo simulation under any admissible control
//!   yields a certified lower bound, and empirical event frequencies lower
//!   bound the associated Choquet capacity `v(A) = sup_P P(A)`.
//!
//! [`comparison`] sits on top of both engines: strict-comparison verdicts,
//! negativity checks, mean-certainty detection, and a scripted
//! quadratic-variation counterexample in which an event holds with capacity
//! one while the expectations it separates coincide.
//!
//! [`payoff`] provides the small expression language payoffs are written in,
//! and [`cli`] the batch front door used by the `gexpect` binary.
//!
//! See the crate examples for one runnable walkthrough per capability.

pub mod cli;
pub mod comparison;
pub mod cylinder;
pub mod gheat;
pub mod payoff;
pub mod scenarios;

pub use comparison::{
    check_mean_certainty, check_negativity, check_strict, run_qv_counterexample, ComparisonVerdict,
    Verdict,
};
pub use cylinder::{evaluate_cylinder, evaluate_pair, Axis, CylinderFunctional, PrefixGrid};
pub use gheat::{
    g_expectation_terminal, g_function, solve_gheat, Accuracy, GridSpec, Snapshots, SolutionField,
    VolatilityBand,
};
pub use payoff::{EventPredicate, Expr, PayoffExpr, Relation};
pub use scenarios::{
    capacity_complement_upper, capacity_lower_bound, lower_bound_expectation, simulate,
    ControlPolicy, McFunctional, McParams, PathEnsemble,
};
