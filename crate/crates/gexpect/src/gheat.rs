//! Monotone explicit finite-difference solver for the G-heat equation
//!
//! ```text
//! du/dt = G(d2u/dx2),   G(a) = (sigma_high^2 * a+  -  sigma_low^2 * a-) / 2,
//! u(0, x) = phi(x),
//! ```
//!
//! the fully nonlinear parabolic PDE characterizing the G-normal
//! distribution: `u(t, 0)` equals the sublinear expectation of `phi(B_t)`
//! under volatility uncertainty `[sigma_low, sigma_high]`.
//!
//! The scheme is first order in time with a central second difference, G
//! applied nodewise:
//!
//! ```text
//! u[k+1][i] = u[k][i] + dt * G((u[k][i+1] - 2 u[k][i] + u[k][i-1]) / dx^2)
//! ```
//!
//! The nodewise sign test on the second difference is exactly the bang-bang
//! volatility choice `sigma^2 in {sigma_low^2, sigma_high^2}` that G encodes.
//! Under the CFL bound `dt <= cfl_safety * dx^2 / sigma_high^2` the update is
//! a convex combination of neighboring values, hence monotone, and converges
//! to the viscosity solution. The two boundary nodes evolve with a zero
//! second difference (linear extrapolation) and therefore hold their initial
//! values; this is exact for asymptotically linear payoffs, and the default
//! domain half-width of `6 sigma_high sqrt(t)` beyond the payoff's feature
//! radius keeps boundary pollution at the origin far below scheme error.

use crate::payoff::{PayoffError, PayoffExpr};
use serde::{Deserialize, Serialize};
use thiserror::Error;

/// Errors from grid construction and PDE solves.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum GheatError {
    #[error("invalid volatility band: need 0 <= sigma_low <= sigma_high and sigma_high > 0, got [{sigma_low}, {sigma_high}]")]
    InvalidBand { sigma_low: f64, sigma_high: f64 },
    #[error("invalid grid: {reason}")]
    InvalidGrid { reason: String },
    #[error("CFL violation: cfl_safety must lie in (0, 1], got {cfl_safety}; the explicit scheme is not monotone outside that range")]
    CflViolation { cfl_safety: f64 },
    #[error("non-finite value encountered at time step {time_index}")]
    NonFinite { time_index: usize },
    #[error("payoff must reference at most x1 (arity <= 1), got arity {arity}")]
    PayoffArity { arity: usize },
    #[error("query x = {x} outside grid domain [{x_min}, {x_max}]")]
    OutOfDomain { x: f64, x_min: f64, x_max: f64 },
    #[error(transparent)]
    Payoff(#[from] PayoffError),
}

/// The volatility uncertainty interval `[sigma_low, sigma_high]` defining G.
///
/// `sigma_high^2` is the upper variance `E[X^2]` and `sigma_low^2` the lower
/// variance `-E[-X^2]` of the associated G-normal distribution.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(try_from = "BandRepr")]
pub struct VolatilityBand {
    sigma_low: f64,
    sigma_high: f64,
}

#[derive(Deserialize)]
struct BandRepr {
    sigma_low: f64,
    sigma_high: f64,
}

impl TryFrom<BandRepr> for VolatilityBand {
    type Error = GheatError;
    fn try_from(r: BandRepr) -> Result<Self, GheatError> {
        VolatilityBand::new(r.sigma_low, r.sigma_high)
    }
}

impl VolatilityBand {
    /// Requires `0 <= sigma_low <= sigma_high` and `sigma_high > 0`.
    pub fn new(sigma_low: f64, sigma_high: f64) -> Result<Self, GheatError> {
        let ok = sigma_low.is_finite()
            && sigma_high.is_finite()
            && sigma_low >= 0.0
            && sigma_low <= sigma_high
            && sigma_high > 0.0;
        if ok {
            Ok(VolatilityBand {
                sigma_low,
                sigma_high,
            })
        } else {
            Err(GheatError::InvalidBand {
                sigma_low,
                sigma_high,
            })
        }
    }

    pub fn sigma_low(&self) -> f64 {
        self.sigma_low
    }

    pub fn sigma_high(&self) -> f64 {
        self.sigma_high
    }

    /// True when `sigma_low == sigma_high`: G degenerates to the classical
    /// heat operator, which the solver uses as an oracle path.
    pub fn is_degenerate(&self) -> bool {
        self.sigma_low == self.sigma_high
    }
}

/// `G(alpha) = (sigma_high^2 * alpha+ - sigma_low^2 * alpha-) / 2`.
#[inline]
pub fn g_function(alpha: f64, band: &VolatilityBand) -> f64 {
    let sh2 = band.sigma_high * band.sigma_high;
    let sl2 = band.sigma_low * band.sigma_low;
    (sh2 * alpha.max(0.0) - sl2 * (-alpha).max(0.0)) / 2.0
}

/// Uniform space-time discretization of `[x_min, x_max] x [0, t_final]`.
///
/// The time step is derived, not stored: the solver takes the largest
/// `dt <= cfl_safety * dx^2 / sigma_high^2` that divides `t_final` evenly.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(try_from = "GridRepr")]
pub struct GridSpec {
    x_min: f64,
    x_max: f64,
    n_space: usize,
    t_final: f64,
    cfl_safety: f64,
}

#[derive(Deserialize)]
struct GridRepr {
    x_min: f64,
    x_max: f64,
    n_space: usize,
    t_final: f64,
    #[serde(default = "default_cfl")]
    cfl_safety: f64,
}

fn default_cfl() -> f64 {
    DEFAULT_CFL_SAFETY
}

impl TryFrom<GridRepr> for GridSpec {
    type Error = GheatError;
    fn try_from(r: GridRepr) -> Result<Self, GheatError> {
        GridSpec::new(r.x_min, r.x_max, r.n_space, r.t_final, r.cfl_safety)
    }
}

/// Default CFL safety factor; monotonicity needs `1 - sigma_high^2 dt/dx^2 >= 0`.
pub const DEFAULT_CFL_SAFETY: f64 = 0.9;

impl GridSpec {
    pub fn new(
        x_min: f64,
        x_max: f64,
        n_space: usize,
        t_final: f64,
        cfl_safety: f64,
    ) -> Result<Self, GheatError> {
        if !(x_min.is_finite() && x_max.is_finite() && x_min < x_max) {
            return Err(GheatError::InvalidGrid {
                reason: format!("need finite x_min < x_max, got [{x_min}, {x_max}]"),
            });
        }
        if n_space < 3 {
            return Err(GheatError::InvalidGrid {
                reason: format!("need n_space >= 3, got {n_space}"),
            });
        }
        if !(t_final.is_finite() && t_final > 0.0) {
            return Err(GheatError::InvalidGrid {
                reason: format!("need t_final > 0, got {t_final}"),
            });
        }
        if !(cfl_safety > 0.0 && cfl_safety <= 1.0) {
            return Err(GheatError::CflViolation { cfl_safety });
        }
        Ok(GridSpec {
            x_min,
            x_max,
            n_space,
            t_final,
            cfl_safety,
        })
    }

    pub fn x_min(&self) -> f64 {
        self.x_min
    }

    pub fn x_max(&self) -> f64 {
        self.x_max
    }

    pub fn n_space(&self) -> usize {
        self.n_space
    }

    pub fn t_final(&self) -> f64 {
        self.t_final
    }

    pub fn cfl_safety(&self) -> f64 {
        self.cfl_safety
    }

    pub fn dx(&self) -> f64 {
        (self.x_max - self.x_min) / (self.n_space - 1) as f64
    }

    /// Node coordinate `x_min + i * dx`.
    pub fn x_at(&self, i: usize) -> f64 {
        self.x_min + i as f64 * self.dx()
    }

    /// Number of time steps and the step the solver will use for `band`.
    pub fn time_steps(&self, band: &VolatilityBand) -> (usize, f64) {
        let dx = self.dx();
        let sh2 = band.sigma_high() * band.sigma_high();
        let dt_max = self.cfl_safety * dx * dx / sh2;
        let n = (self.t_final / dt_max).ceil().max(1.0) as usize;
        (n, self.t_final / n as f64)
    }

    /// Same domain with `2 n_space - 1` nodes: one refinement level (dx
    /// halved, dt rescaled through the CFL bound).
    pub fn refined(&self) -> GridSpec {
        GridSpec {
            n_space: 2 * self.n_space - 1,
            ..self.clone()
        }
    }
}

/// Which time slices a solve should retain.
#[derive(Debug, Clone, Default, PartialEq, Serialize, Deserialize)]
pub enum Snapshots {
    /// Initial condition and terminal slice only (the default).
    #[default]
    Endpoints,
    /// Endpoints plus the slices nearest the requested times.
    Times(Vec<f64>),
    /// The full time history. Memory grows with the step count.
    EveryStep,
}

/// Grid-sampled solution `u(t, .)` of a G-heat solve.
#[derive(Debug, Clone, PartialEq)]
pub struct SolutionField {
    grid: GridSpec,
    times: Vec<f64>,
    values: Vec<Vec<f64>>,
}

impl SolutionField {
    pub fn grid(&self) -> &GridSpec {
        &self.grid
    }

    /// Snapshot times, increasing, always starting at 0 and ending at
    /// `t_final`.
    pub fn times(&self) -> &[f64] {
        &self.times
    }

    pub fn snapshot(&self, time_index: usize) -> &[f64] {
        &self.values[time_index]
    }

    pub fn n_snapshots(&self) -> usize {
        self.values.len()
    }

    /// Terminal slice `u(t_final, .)`.
    pub fn terminal(&self) -> &[f64] {
        self.values
            .last()
            .expect("field holds at least two snapshots")
    }

    /// Linear interpolation of the `time_index`-th snapshot at `x`.
    pub fn sample(&self, time_index: usize, x: f64) -> Result<f64, GheatError> {
        let u = &self.values[time_index];
        sample_grid(&self.grid, u, x)
    }
}

fn sample_grid(grid: &GridSpec, u: &[f64], x: f64) -> Result<f64, GheatError> {
    let dx = grid.dx();
    if x < grid.x_min - 1e-12 * dx || x > grid.x_max + 1e-12 * dx {
        return Err(GheatError::OutOfDomain {
            x,
            x_min: grid.x_min,
            x_max: grid.x_max,
        });
    }
    let s = ((x - grid.x_min) / dx).clamp(0.0, (grid.n_space - 1) as f64);
    let i = (s.floor() as usize).min(grid.n_space - 2);
    let w = s - i as f64;
    Ok(u[i] + w * (u[i + 1] - u[i]))
}

/// Solve the G-heat equation with initial condition `phi` (arity <= 1).
///
/// Returns the requested snapshots; fails on non-finite values with the time
/// index at which they appeared.
pub fn solve_gheat(
    phi: &PayoffExpr,
    band: &VolatilityBand,
    grid: &GridSpec,
    snapshots: &Snapshots,
) -> Result<SolutionField, GheatError> {
    if phi.arity() > 1 {
        return Err(GheatError::PayoffArity { arity: phi.arity() });
    }
    let initial: Vec<f64> = (0..grid.n_space)
        .map(|i| phi.eval(&[grid.x_at(i)]))
        .collect::<Result<_, _>>()?;
    solve_values(initial, band, grid, snapshots)
}

/// Solve from an already-sampled initial slice. Used by the cylinder
/// recursion, where intermediate value functions exist only as tables.
pub(crate) fn solve_values(
    initial: Vec<f64>,
    band: &VolatilityBand,
    grid: &GridSpec,
    snapshots: &Snapshots,
) -> Result<SolutionField, GheatError> {
    assert_eq!(initial.len(), grid.n_space);
    if !initial.iter().all(|v| v.is_finite()) {
        return Err(GheatError::NonFinite { time_index: 0 });
    }

    let n = grid.n_space;
    let dx = grid.dx();
    let dx2 = dx * dx;
    let (n_steps, dt) = grid.time_steps(band);

    // Step indices at which to retain a slice; always 0 and n_steps.
    let mut keep: Vec<usize> = match snapshots {
        Snapshots::Endpoints => vec![0, n_steps],
        Snapshots::EveryStep => (0..=n_steps).collect(),
        Snapshots::Times(ts) => {
            let mut v: Vec<usize> = ts
                .iter()
                .map(|t| ((t / dt).round().max(0.0) as usize).min(n_steps))
                .collect();
            v.push(0);
            v.push(n_steps);
            v.sort_unstable();
            v.dedup();
            v
        }
    };
    keep.sort_unstable();
    keep.dedup();

    let mut times = Vec::with_capacity(keep.len());
    let mut values = Vec::with_capacity(keep.len());
    let mut keep_iter = keep.iter().copied().peekable();

    let mut u = initial;
    let mut next = vec![0.0; n];

    if keep_iter.peek() == Some(&0) {
        keep_iter.next();
        times.push(0.0);
        values.push(u.clone());
    }

    for step in 1..=n_steps {
        let mut finite = true;
        next[0] = u[0];
        next[n - 1] = u[n - 1];
        for i in 1..n - 1 {
            let d2 = (u[i + 1] - 2.0 * u[i] + u[i - 1]) / dx2;
            let v = u[i] + dt * g_function(d2, band);
            finite &= v.is_finite();
            next[i] = v;
        }
        if !finite {
            return Err(GheatError::NonFinite { time_index: step });
        }
        std::mem::swap(&mut u, &mut next);
        if keep_iter.peek() == Some(&step) {
            keep_iter.next();
            let t = if step == n_steps {
                grid.t_final
            } else {
                step as f64 * dt
            };
            times.push(t);
            values.push(u.clone());
        }
    }

    Ok(SolutionField {
        grid: grid.clone(),
        times,
        values,
    })
}

/// Terminal slice only; the cheap entry point for the cylinder recursion.
pub(crate) fn solve_terminal(
    initial: Vec<f64>,
    band: &VolatilityBand,
    grid: &GridSpec,
) -> Result<Vec<f64>, GheatError> {
    let field = solve_values(initial, band, grid, &Snapshots::Endpoints)?;
    let mut values = field.values;
    Ok(values.pop().expect("terminal snapshot"))
}

/// Grid selection for [`g_expectation_terminal`].
#[derive(Debug, Clone, PartialEq)]
pub enum Accuracy {
    /// Auto-sized domain: half-width `6 sigma_high sqrt(t)` plus the
    /// payoff's detected feature radius, resolution `dx ~ 0.025` with at
    /// least 401 nodes, odd so that x = 0 is a node.
    Auto,
    /// Auto sizing with an explicit feature radius instead of the probe.
    AutoRadius(f64),
    /// Fully explicit grid.
    Grid(GridSpec),
}

/// Feature radius used by auto sizing when the probe finds nothing.
const DEFAULT_RADIUS: f64 = 1.0;
/// Largest radius the probe reports for payoffs that never become linear
/// (polynomials of degree >= 2, exponentials).
const MAX_PROBE_RADIUS: f64 = 8.0;

/// Smallest dyadic radius beyond which `f` looks linear, probed on both
/// sides with second differences at two step sizes. Payoffs with global
/// curvature cap out at [`MAX_PROBE_RADIUS`].
pub(crate) fn linearity_radius(f: impl Fn(f64) -> f64) -> f64 {
    let mut r = DEFAULT_RADIUS;
    while r < MAX_PROBE_RADIUS {
        let mut linear = true;
        for side in [-1.0, 1.0] {
            for h in [0.5, 1.0] {
                let a = f(side * r);
                let b = f(side * (r + h));
                let c = f(side * (r + 2.0 * h));
                let d2 = a - 2.0 * b + c;
                let scale = 1.0 + a.abs() + c.abs();
                // Negated so that NaN samples count as non-linear.
                let within = d2.abs() <= 1e-9 * scale;
                if !within {
                    linear = false;
                }
            }
        }
        if linear {
            return r;
        }
        r *= 2.0;
    }
    MAX_PROBE_RADIUS
}

pub(crate) fn auto_grid(
    radius: f64,
    band: &VolatilityBand,
    t: f64,
) -> Result<GridSpec, GheatError> {
    let half = 6.0 * band.sigma_high() * t.sqrt() + radius;
    // dx about 0.025, never fewer than 401 nodes, odd so x = 0 is a node.
    let n = ((40.0 * half).ceil() as usize * 2 + 1).max(401);
    GridSpec::new(-half, half, n, t, DEFAULT_CFL_SAFETY)
}

/// `E[phi(B_t)] = u(t, 0)`, solving on an auto-sized or explicit grid.
pub fn g_expectation_terminal(
    phi: &PayoffExpr,
    band: &VolatilityBand,
    t: f64,
    accuracy: &Accuracy,
) -> Result<f64, GheatError> {
    if phi.arity() > 1 {
        return Err(GheatError::PayoffArity { arity: phi.arity() });
    }
    let grid = match accuracy {
        Accuracy::Auto => {
            let radius = linearity_radius(|x| phi.eval(&[x]).unwrap_or(f64::NAN));
            auto_grid(radius, band, t)?
        }
        Accuracy::AutoRadius(r) => auto_grid(*r, band, t)?,
        Accuracy::Grid(g) => {
            if (g.t_final - t).abs() > 1e-12 * t.max(1.0) {
                return Err(GheatError::InvalidGrid {
                    reason: format!(
                        "grid t_final {} does not match requested horizon {t}",
                        g.t_final
                    ),
                });
            }
            g.clone()
        }
    };
    let field = solve_gheat(phi, band, &grid, &Snapshots::Endpoints)?;
    field.sample(field.n_snapshots() - 1, 0.0)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::payoff::PayoffExpr;

    fn band(lo: f64, hi: f64) -> VolatilityBand {
        VolatilityBand::new(lo, hi).unwrap()
    }

    fn p(src: &str) -> PayoffExpr {
        PayoffExpr::parse(src).unwrap()
    }

    #[test]
    fn g_function_matches_definition() {
        let b = band(0.5, 1.0);
        assert_eq!(g_function(2.0, &b), 1.0);
        assert_eq!(g_function(0.0, &b), 0.0);
        assert_eq!(g_function(-2.0, &b), -0.25);
        // Degenerate band: classical heat operator sigma^2 alpha / 2.
        let c = band(1.0, 1.0);
        assert_eq!(g_function(3.0, &c), 1.5);
        assert_eq!(g_function(-3.0, &c), -1.5);
    }

    #[test]
    fn band_validation() {
        assert!(VolatilityBand::new(-0.1, 1.0).is_err());
        assert!(VolatilityBand::new(1.0, 0.5).is_err());
        assert!(VolatilityBand::new(0.0, 0.0).is_err());
        assert!(VolatilityBand::new(0.0, 1.0).is_ok());
        assert!(band(0.3, 0.3).is_degenerate());
    }

    #[test]
    fn grid_validation() {
        assert!(GridSpec::new(1.0, -1.0, 101, 1.0, 0.9).is_err());
        assert!(GridSpec::new(-1.0, 1.0, 2, 1.0, 0.9).is_err());
        assert!(GridSpec::new(-1.0, 1.0, 101, 0.0, 0.9).is_err());
        assert!(matches!(
            GridSpec::new(-1.0, 1.0, 101, 1.0, 1.5),
            Err(GheatError::CflViolation { .. })
        ));
        assert!(matches!(
            GridSpec::new(-1.0, 1.0, 101, 1.0, 0.0),
            Err(GheatError::CflViolation { .. })
        ));
    }

    #[test]
    fn derived_dt_respects_cfl() {
        let g = GridSpec::new(-4.0, 4.0, 257, 1.0, 0.9).unwrap();
        let b = band(0.5, 1.0);
        let (n, dt) = g.time_steps(&b);
        let dx = g.dx();
        assert!(dt <= 0.9 * dx * dx / (b.sigma_high() * b.sigma_high()) + 1e-15);
        assert!((n as f64 * dt - 1.0).abs() < 1e-12);
    }

    // Dyadic grid: node coordinates, and hence second differences of linear
    // data, are exact in floating point.
    fn dyadic_grid(t: f64) -> GridSpec {
        GridSpec::new(-4.0, 4.0, 257, t, 0.9).unwrap()
    }

    #[test]
    fn constants_are_preserved_exactly() {
        let f = solve_gheat(
            &p("3.25"),
            &band(0.5, 1.0),
            &dyadic_grid(1.0),
            &Snapshots::Endpoints,
        )
        .unwrap();
        assert!(f.terminal().iter().all(|&v| v == 3.25));
    }

    #[test]
    fn linear_data_is_a_fixed_point_on_dyadic_grids() {
        let g = dyadic_grid(1.0);
        let f = solve_gheat(&p("x1"), &band(0.5, 1.0), &g, &Snapshots::Endpoints).unwrap();
        for i in 0..g.n_space() {
            assert_eq!(f.terminal()[i], g.x_at(i));
        }
    }

    #[test]
    fn initial_snapshot_equals_payoff_samples() {
        let g = dyadic_grid(0.5);
        let phi = p("max(0, 1 - abs(x1))");
        let f = solve_gheat(&phi, &band(0.5, 1.0), &g, &Snapshots::Endpoints).unwrap();
        for i in 0..g.n_space() {
            assert_eq!(f.snapshot(0)[i], phi.eval(&[g.x_at(i)]).unwrap());
        }
        assert_eq!(f.times()[0], 0.0);
        assert_eq!(*f.times().last().unwrap(), 0.5);
    }

    #[test]
    fn upper_variance_from_convex_square() {
        let v =
            g_expectation_terminal(&p("pow(x1,2)"), &band(0.5, 1.0), 1.0, &Accuracy::Auto).unwrap();
        assert!((v - 1.0).abs() < 5e-3, "got {v}");
    }

    #[test]
    fn lower_variance_from_concave_square() {
        let v = g_expectation_terminal(&p("-pow(x1,2)"), &band(0.5, 1.0), 1.0, &Accuracy::Auto)
            .unwrap();
        assert!((v + 0.25).abs() < 5e-3, "got {v}");
    }

    #[test]
    fn scaling_in_time() {
        // B_t ~ sqrt(t) B_1: the square payoff gives t * sigma_high^2.
        let v =
            g_expectation_terminal(&p("pow(x1,2)"), &band(0.5, 1.0), 2.0, &Accuracy::Auto).unwrap();
        assert!((v - 2.0).abs() < 1e-2, "got {v}");
    }

    #[test]
    fn linear_payoff_has_zero_expectation() {
        let v = g_expectation_terminal(&p("x1"), &band(0.5, 1.0), 2.0, &Accuracy::Auto).unwrap();
        assert!(v.abs() < 1e-9, "got {v}");
    }

    #[test]
    fn degenerate_band_min_payoff_is_a_fixed_point() {
        // With sigma_low = 0 the concave kink of min(x, 0) never diffuses:
        // the initial condition is a stationary solution.
        let v = g_expectation_terminal(&p("min(x1, 0)"), &band(0.0, 1.0), 1.0, &Accuracy::Auto)
            .unwrap();
        assert!(v.abs() < 1e-9, "got {v}");
    }

    #[test]
    fn min_payoff_under_positive_low_volatility() {
        // Concave payoff: the optimizer sits at sigma_low throughout, so the
        // value is the classical one, -sigma_low sqrt(t) / sqrt(2 pi).
        let v = g_expectation_terminal(&p("min(x1, 0)"), &band(0.5, 1.0), 1.0, &Accuracy::Auto)
            .unwrap();
        let oracle = -0.5 / (2.0 * std::f64::consts::PI).sqrt();
        assert!((v - oracle).abs() < 2e-3, "got {v}, oracle {oracle}");
    }

    #[test]
    fn snapshot_times_cover_requested_interior_points() {
        let g = dyadic_grid(1.0);
        let f = solve_gheat(
            &p("pow(x1,2)"),
            &band(0.5, 1.0),
            &g,
            &Snapshots::Times(vec![0.25, 0.5]),
        )
        .unwrap();
        assert_eq!(f.times()[0], 0.0);
        assert_eq!(*f.times().last().unwrap(), 1.0);
        assert_eq!(f.n_snapshots(), 4);
        assert!((f.times()[1] - 0.25).abs() < 2e-3);
        assert!((f.times()[2] - 0.5).abs() < 2e-3);
    }

    #[test]
    fn bounded_payoff_obeys_discrete_maximum_principle() {
        let g = GridSpec::new(-6.0, 6.0, 241, 0.5, 0.9).unwrap();
        let f = solve_gheat(
            &p("max(0, 1 - abs(x1))"),
            &band(0.5, 1.0),
            &g,
            &Snapshots::EveryStep,
        )
        .unwrap();
        let mut prev = f64::INFINITY;
        for k in 0..f.n_snapshots() {
            let m = f.snapshot(k).iter().fold(0.0f64, |a, &v| a.max(v.abs()));
            assert!(m <= prev + 1e-12);
            prev = m;
        }
        // Bounds of the initial data bound every slice.
        for k in 0..f.n_snapshots() {
            for &v in f.snapshot(k) {
                assert!((-1e-12..=1.0 + 1e-12).contains(&v));
            }
        }
    }

    #[test]
    fn non_finite_initial_sample_is_reported_at_time_zero() {
        let g = GridSpec::new(0.0, 1000.0, 101, 1.0, 0.9).unwrap();
        let err =
            solve_gheat(&p("exp(x1)"), &band(0.5, 1.0), &g, &Snapshots::Endpoints).unwrap_err();
        assert_eq!(err, GheatError::NonFinite { time_index: 0 });
    }

    #[test]
    fn overflow_during_marching_reports_the_step() {
        // exp on [700, 709.7] stays finite at sampling, but doubling the
        // near-boundary values inside the second difference overflows.
        let g = GridSpec::new(700.0, 709.7, 101, 1.0, 0.9).unwrap();
        let err =
            solve_gheat(&p("exp(x1)"), &band(0.5, 1.0), &g, &Snapshots::Endpoints).unwrap_err();
        match err {
            GheatError::NonFinite { time_index } => assert!(time_index >= 1),
            other => panic!("expected NonFinite, got {other:?}"),
        }
    }

    #[test]
    fn arity_two_payoff_is_rejected() {
        let err = g_expectation_terminal(&p("x1 + x2"), &band(0.5, 1.0), 1.0, &Accuracy::Auto)
            .unwrap_err();
        assert_eq!(err, GheatError::PayoffArity { arity: 2 });
    }

    #[test]
    fn sample_interpolates_and_checks_domain() {
        let g = dyadic_grid(1.0);
        let f = solve_gheat(&p("x1"), &band(0.5, 1.0), &g, &Snapshots::Endpoints).unwrap();
        assert!((f.sample(1, 0.015625).unwrap() - 0.015625).abs() < 1e-12);
        assert!(matches!(
            f.sample(1, 5.0),
            Err(GheatError::OutOfDomain { .. })
        ));
    }

    #[test]
    fn linearity_radius_probes() {
        let kink = p("min(x1, 0)");
        assert_eq!(linearity_radius(|x| kink.eval(&[x]).unwrap()), 1.0);
        let bump = p("-max(0, 1 - abs(x1 - 2))");
        assert_eq!(linearity_radius(|x| bump.eval(&[x]).unwrap()), 4.0);
        let square = p("pow(x1,2)");
        assert_eq!(linearity_radius(|x| square.eval(&[x]).unwrap()), 8.0);
    }
}
