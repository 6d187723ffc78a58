//! Multi-time cylinder functionals evaluated by backward recursion.
//!
//! A cylinder functional is a payoff of finitely many Brownian increments,
//! `phi(B_{t1}, B_{t2} - B_{t1}, ..., B_{tn} - B_{t(n-1)})`. Its sublinear
//! expectation reduces to nested one-dimensional G-heat solves: with
//! `psi_n = phi` and `delta_k = t_k - t_(k-1)`,
//!
//! ```text
//! psi_(k-1)(x1..x(k-1)) = value at (delta_k, 0) of the G-heat solve with
//!                         initial condition y -> psi_k(x1..x(k-1), y)
//! ```
//!
//! and `psi_0` is the expectation. Intermediate `psi_k` are tabulated on a
//! tensor of per-increment axes and interpolated linearly between nodes;
//! linear interpolation of pointwise-ordered tables stays ordered, so the
//! comparison checks built on top are not confounded by the tabulation.
//!
//! The recursion costs one solve per prefix-grid point and is capped at
//! three increments. Solves at a fixed recursion level are independent and
//! run as a parallel map combined by index, so results do not depend on the
//! worker count.

use crate::gheat::{self, GheatError, GridSpec, VolatilityBand, DEFAULT_CFL_SAFETY};
use crate::payoff::{PayoffError, PayoffExpr};
use rayon::prelude::*;
use serde::{Deserialize, Serialize};
use thiserror::Error;

/// Hard cap on the number of increments; the tensor-grid cost is
/// `O(m^(n-1))` solves.
pub const MAX_INCREMENTS: usize = 3;

/// Default PDE spatial resolution used by auto grids.
const DEFAULT_PDE_DX: f64 = 0.025;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum CylinderError {
    #[error("cylinder functionals support at most {MAX_INCREMENTS} increments, got {n}")]
    TooManyIncrements { n: usize },
    #[error("times must be strictly increasing and positive")]
    BadTimes,
    #[error("payoff references x{arity} but the functional has only {n} increments")]
    ArityMismatch { arity: usize, n: usize },
    #[error("time partitions differ; pair evaluation requires identical partitions")]
    PartitionMismatch,
    #[error("order violated at grid node {node:?}: lower payoff {lo} > upper payoff {hi}")]
    OrderViolation { node: Vec<f64>, lo: f64, hi: f64 },
    #[error("prefix grid axis {axis} spans {available} but the solve needs {needed}; widen the axis or use an auto grid")]
    PrefixGridTooNarrow {
        axis: usize,
        needed: f64,
        available: f64,
    },
    #[error("prefix grid has {axes} axes but the functional needs {needed}")]
    AxisCountMismatch { axes: usize, needed: usize },
    #[error(transparent)]
    Gheat(#[from] GheatError),
    #[error(transparent)]
    Payoff(#[from] PayoffError),
}

/// A payoff of Brownian increments at a strictly increasing time partition.
///
/// Variable `x_i` is bound to the i-th increment `B_{t_i} - B_{t_(i-1)}`
/// (with `t_0 = 0`). The payoff may reference fewer variables than there
/// are increments; unreferenced increments integrate out exactly.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(try_from = "CylinderRepr")]
pub struct CylinderFunctional {
    times: Vec<f64>,
    payoff: PayoffExpr,
}

#[derive(Deserialize)]
struct CylinderRepr {
    times: Vec<f64>,
    payoff: PayoffExpr,
}

impl TryFrom<CylinderRepr> for CylinderFunctional {
    type Error = CylinderError;
    fn try_from(r: CylinderRepr) -> Result<Self, CylinderError> {
        CylinderFunctional::new(r.times, r.payoff)
    }
}

impl CylinderFunctional {
    pub fn new(times: Vec<f64>, payoff: PayoffExpr) -> Result<Self, CylinderError> {
        if times.is_empty()
            || times[0] <= 0.0
            || times.windows(2).any(|w| w[1] <= w[0])
            || times.iter().any(|t| !t.is_finite())
        {
            return Err(CylinderError::BadTimes);
        }
        if times.len() > MAX_INCREMENTS {
            return Err(CylinderError::TooManyIncrements { n: times.len() });
        }
        if payoff.arity() > times.len() {
            return Err(CylinderError::ArityMismatch {
                arity: payoff.arity(),
                n: times.len(),
            });
        }
        Ok(CylinderFunctional { times, payoff })
    }

    /// Single-time functional `phi(B_t)`.
    pub fn terminal(t: f64, payoff: PayoffExpr) -> Result<Self, CylinderError> {
        Self::new(vec![t], payoff)
    }

    pub fn times(&self) -> &[f64] {
        &self.times
    }

    pub fn payoff(&self) -> &PayoffExpr {
        &self.payoff
    }

    pub fn n_increments(&self) -> usize {
        self.times.len()
    }

    /// Last partition time.
    pub fn horizon(&self) -> f64 {
        *self.times.last().expect("nonempty partition")
    }

    /// Increment lengths `t_k - t_(k-1)`.
    pub fn deltas(&self) -> Vec<f64> {
        let mut prev = 0.0;
        self.times
            .iter()
            .map(|&t| {
                let d = t - prev;
                prev = t;
                d
            })
            .collect()
    }

    /// The functional of the pointwise-negated payoff.
    pub fn negated(&self) -> Self {
        CylinderFunctional {
            times: self.times.clone(),
            payoff: self.payoff.negated(),
        }
    }
}

/// One tabulation axis: a uniform 1-D grid.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Axis {
    pub x_min: f64,
    pub x_max: f64,
    pub n_nodes: usize,
}

impl Axis {
    pub fn new(x_min: f64, x_max: f64, n_nodes: usize) -> Result<Self, CylinderError> {
        if !(x_min.is_finite() && x_max.is_finite() && x_min < x_max) || n_nodes < 3 {
            return Err(CylinderError::Gheat(GheatError::InvalidGrid {
                reason: format!(
                    "axis needs x_min < x_max and n_nodes >= 3, got [{x_min}, {x_max}] x {n_nodes}"
                ),
            }));
        }
        Ok(Axis {
            x_min,
            x_max,
            n_nodes,
        })
    }

    fn symmetric(half: f64, n_nodes: usize) -> Axis {
        Axis {
            x_min: -half,
            x_max: half,
            n_nodes,
        }
    }

    fn dx(&self) -> f64 {
        (self.x_max - self.x_min) / (self.n_nodes - 1) as f64
    }

    fn node(&self, i: usize) -> f64 {
        self.x_min + i as f64 * self.dx()
    }

    fn interp(&self, values: &[f64], x: f64) -> f64 {
        let s = ((x - self.x_min) / self.dx()).clamp(0.0, (self.n_nodes - 1) as f64);
        let i = (s.floor() as usize).min(self.n_nodes - 2);
        let w = s - i as f64;
        values[i] + w * (values[i + 1] - values[i])
    }
}

/// Tabulation grids for the intermediate value functions, plus the spatial
/// resolution of the per-level PDE solves.
///
/// `axes[k]` tabulates the (k+1)-th increment variable; the last increment
/// is the PDE variable and needs no axis. Auto grids widen themselves when
/// a solve needs more range; explicit grids report an error instead.
#[derive(Debug, Clone, PartialEq)]
pub struct PrefixGrid {
    axes: Vec<Axis>,
    pde_dx: f64,
    auto_widen: bool,
}

/// Default tabulation spacing per axis, by increment count. Node counts
/// follow from the axis half-widths so that widening an axis never costs
/// resolution.
fn default_axis_spacing(n_increments: usize) -> f64 {
    match n_increments {
        0..=2 => 0.0625,
        _ => 0.25,
    }
}

fn nodes_for(half: f64, spacing: f64) -> usize {
    ((half / spacing).ceil() as usize).max(4) * 2 + 1
}

impl PrefixGrid {
    /// Axes sized like the solver's auto domains: half-width
    /// `6 sigma_high sqrt(delta_k)` plus the payoff's feature radius in that
    /// variable.
    pub fn auto(f: &CylinderFunctional, band: &VolatilityBand) -> Self {
        let spacing = default_axis_spacing(f.n_increments());
        let halves = variable_halfwidths(f, band);
        let axes = halves[..f.n_increments() - 1]
            .iter()
            .map(|&h| Axis::symmetric(h, nodes_for(h, spacing)))
            .collect();
        PrefixGrid {
            axes,
            pde_dx: DEFAULT_PDE_DX,
            auto_widen: true,
        }
    }

    /// Auto sizing with explicit per-axis node count and PDE resolution.
    pub fn auto_with(
        f: &CylinderFunctional,
        band: &VolatilityBand,
        axis_nodes: usize,
        pde_dx: f64,
    ) -> Self {
        let halves = variable_halfwidths(f, band);
        let axes = halves[..f.n_increments() - 1]
            .iter()
            .map(|&h| Axis::symmetric(h, axis_nodes))
            .collect();
        PrefixGrid {
            axes,
            pde_dx,
            auto_widen: true,
        }
    }

    /// Fully explicit tabulation axes. Solves that need more range fail
    /// with [`CylinderError::PrefixGridTooNarrow`].
    pub fn explicit(axes: Vec<Axis>, pde_dx: f64) -> Result<Self, CylinderError> {
        if !(pde_dx.is_finite() && pde_dx > 0.0) {
            return Err(CylinderError::Gheat(GheatError::InvalidGrid {
                reason: format!("pde_dx must be positive, got {pde_dx}"),
            }));
        }
        Ok(PrefixGrid {
            axes,
            pde_dx,
            auto_widen: false,
        })
    }

    pub fn axes(&self) -> &[Axis] {
        &self.axes
    }

    pub fn pde_dx(&self) -> f64 {
        self.pde_dx
    }

    /// One refinement level: doubled axis resolution, halved PDE spacing.
    /// Used for Richardson-style tolerance estimates.
    pub fn refined(&self) -> PrefixGrid {
        PrefixGrid {
            axes: self
                .axes
                .iter()
                .map(|a| Axis {
                    n_nodes: 2 * a.n_nodes - 1,
                    ..*a
                })
                .collect(),
            pde_dx: self.pde_dx / 2.0,
            auto_widen: self.auto_widen,
        }
    }

    /// Resolve the axes against the ranges this functional actually needs.
    fn resolved_axes(
        &self,
        f: &CylinderFunctional,
        band: &VolatilityBand,
    ) -> Result<Vec<Axis>, CylinderError> {
        let needed = variable_halfwidths(f, band);
        let n_axes = f.n_increments() - 1;
        if self.axes.len() < n_axes {
            return Err(CylinderError::AxisCountMismatch {
                axes: self.axes.len(),
                needed: n_axes,
            });
        }
        let mut axes = Vec::with_capacity(n_axes);
        for (k, axis) in self.axes[..n_axes].iter().enumerate() {
            let need = needed[k];
            if axis.x_min <= -need && axis.x_max >= need {
                axes.push(axis.clone());
            } else if self.auto_widen {
                // Widen while preserving the original spacing.
                axes.push(Axis::symmetric(need, nodes_for(need, axis.dx())));
            } else {
                return Err(CylinderError::PrefixGridTooNarrow {
                    axis: k,
                    needed: need,
                    available: axis.x_max.min(-axis.x_min),
                });
            }
        }
        Ok(axes)
    }
}

/// Half-width needed per increment variable: the gheat domain-sizing rule
/// `6 sigma_high sqrt(delta_k)` plus the payoff's feature radius along that
/// variable (probed on the zero-prefix slice).
pub(crate) fn variable_halfwidths(f: &CylinderFunctional, band: &VolatilityBand) -> Vec<f64> {
    let n = f.n_increments();
    let deltas = f.deltas();
    let mut point = vec![0.0; n];
    (0..n)
        .map(|k| {
            let radius = gheat::linearity_radius(|x| {
                let mut pt = point.clone();
                pt[k] = x;
                f.payoff().eval(&pt).unwrap_or(f64::NAN)
            });
            let _ = &mut point;
            6.0 * band.sigma_high() * deltas[k].sqrt() + radius
        })
        .collect()
}

fn pde_grid_for_level(half: f64, delta: f64, pde_dx: f64) -> Result<GridSpec, CylinderError> {
    let n = ((half / pde_dx).ceil() as usize).max(100) * 2 + 1;
    Ok(GridSpec::new(-half, half, n, delta, DEFAULT_CFL_SAFETY)?)
}

/// Flat row-major tensor table over a list of axes (last axis fastest).
struct Table {
    axes: Vec<Axis>,
    values: Vec<f64>,
}

fn tensor_size(axes: &[Axis]) -> usize {
    axes.iter().map(|a| a.n_nodes).product()
}

fn unflatten(axes: &[Axis], mut flat: usize, out: &mut [f64]) {
    for (k, axis) in axes.iter().enumerate().rev() {
        out[k] = axis.node(flat % axis.n_nodes);
        flat /= axis.n_nodes;
    }
}

/// `E[phi(B_{t1}, B_{t2}-B_{t1}, ...)]` by backward recursion through
/// nested G-heat solves.
pub fn evaluate_cylinder(
    f: &CylinderFunctional,
    band: &VolatilityBand,
    grid: &PrefixGrid,
) -> Result<f64, CylinderError> {
    let n = f.n_increments();
    let deltas = f.deltas();
    let halves = variable_halfwidths(f, band);
    let axes = grid.resolved_axes(f, band)?;

    // table holds psi_k over axes[0..k]; None means psi_n = payoff.
    let mut table: Option<Table> = None;

    for k in (1..=n).rev() {
        let delta = deltas[k - 1];
        let pde = pde_grid_for_level(halves[k - 1], delta, grid.pde_dx)?;
        let prefix_axes = &axes[..k - 1];
        let n_prefix = tensor_size(prefix_axes);
        let n_space = pde.n_space();

        let results: Result<Vec<f64>, CylinderError> = (0..n_prefix)
            .into_par_iter()
            .map(|flat| {
                let mut point = vec![0.0; k];
                unflatten(prefix_axes, flat, &mut point[..k - 1]);
                let initial: Result<Vec<f64>, CylinderError> = (0..n_space)
                    .map(|i| {
                        let y = pde.x_at(i);
                        match &table {
                            None => {
                                point[k - 1] = y;
                                Ok(f.payoff().eval(&point)?)
                            }
                            Some(t) => {
                                // Interpolate psi_k along its last axis; the
                                // prefix coordinates are exact table nodes.
                                let axis = &t.axes[k - 1];
                                let slice_start = flat * axis.n_nodes;
                                let slice = &t.values[slice_start..slice_start + axis.n_nodes];
                                Ok(axis.interp(slice, y))
                            }
                        }
                    })
                    .collect();
                let terminal = gheat::solve_terminal(initial?, band, &pde)?;
                // x = 0 is a node: the grid is symmetric with odd n_space.
                Ok(terminal[(n_space - 1) / 2])
            })
            .collect();

        table = Some(Table {
            axes: axes[..k - 1].to_vec(),
            values: results?,
        });
    }

    let t = table.expect("at least one recursion level");
    debug_assert_eq!(t.values.len(), 1);
    Ok(t.values[0])
}

/// Check `lo <= hi` on a tensor of probe nodes covering the per-variable
/// ranges, and report a strictness witness (a node where
/// `hi - lo > witness_tol`) if one exists.
pub(crate) fn scan_order(
    f_lo: &CylinderFunctional,
    f_hi: &CylinderFunctional,
    band: &VolatilityBand,
    witness_tol: f64,
) -> Result<Option<Vec<f64>>, CylinderError> {
    const PROBE_NODES: usize = 41;
    let n = f_lo.n_increments();
    let halves = variable_halfwidths(f_lo, band);
    let halves_hi = variable_halfwidths(f_hi, band);
    let probe_axes: Vec<Axis> = (0..n)
        .map(|k| Axis::symmetric(halves[k].max(halves_hi[k]), PROBE_NODES))
        .collect();
    let total = tensor_size(&probe_axes);
    let mut witness: Option<Vec<f64>> = None;
    let mut point = vec![0.0; n];
    for flat in 0..total {
        unflatten(&probe_axes, flat, &mut point);
        let lo = f_lo.payoff().eval(&point)?;
        let hi = f_hi.payoff().eval(&point)?;
        if lo > hi {
            return Err(CylinderError::OrderViolation {
                node: point.clone(),
                lo,
                hi,
            });
        }
        if witness.is_none() && hi - lo > witness_tol {
            witness = Some(point.clone());
        }
    }
    Ok(witness)
}

/// Evaluate two cylinder functionals sharing a time partition on the
/// identical discretization, after verifying `f_lo <= f_hi` on a tensor of
/// probe nodes. Identical payoffs produce bitwise identical outputs.
pub fn evaluate_pair(
    f_lo: &CylinderFunctional,
    f_hi: &CylinderFunctional,
    band: &VolatilityBand,
    grid: &PrefixGrid,
) -> Result<(f64, f64), CylinderError> {
    if f_lo.times() != f_hi.times() {
        return Err(CylinderError::PartitionMismatch);
    }
    scan_order(f_lo, f_hi, band, f64::INFINITY)?;
    // Resolve one common grid wide enough for both payoffs so the two
    // evaluations share every node.
    let grid = common_grid(f_lo, f_hi, band, grid)?;
    let lo = evaluate_cylinder(f_lo, band, &grid)?;
    let hi = evaluate_cylinder(f_hi, band, &grid)?;
    Ok((lo, hi))
}

/// Widen `grid` so both functionals resolve to the same axes.
fn common_grid(
    f_lo: &CylinderFunctional,
    f_hi: &CylinderFunctional,
    band: &VolatilityBand,
    grid: &PrefixGrid,
) -> Result<PrefixGrid, CylinderError> {
    let a = grid.resolved_axes(f_lo, band)?;
    let b = grid.resolved_axes(f_hi, band)?;
    let axes = a
        .into_iter()
        .zip(b)
        .map(|(x, y)| Axis {
            x_min: x.x_min.min(y.x_min),
            x_max: x.x_max.max(y.x_max),
            n_nodes: x.n_nodes.max(y.n_nodes),
        })
        .collect();
    Ok(PrefixGrid {
        axes,
        pde_dx: grid.pde_dx,
        auto_widen: grid.auto_widen,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::gheat::VolatilityBand;
    use crate::payoff::PayoffExpr;

    fn band(lo: f64, hi: f64) -> VolatilityBand {
        VolatilityBand::new(lo, hi).unwrap()
    }

    fn p(src: &str) -> PayoffExpr {
        PayoffExpr::parse(src).unwrap()
    }

    fn cyl(times: &[f64], src: &str) -> CylinderFunctional {
        CylinderFunctional::new(times.to_vec(), p(src)).unwrap()
    }

    #[test]
    fn construction_validates() {
        assert!(matches!(
            CylinderFunctional::new(vec![], p("x1")),
            Err(CylinderError::BadTimes)
        ));
        assert!(matches!(
            CylinderFunctional::new(vec![1.0, 0.5], p("x1")),
            Err(CylinderError::BadTimes)
        ));
        assert!(matches!(
            CylinderFunctional::new(vec![-1.0], p("x1")),
            Err(CylinderError::BadTimes)
        ));
        assert!(matches!(
            CylinderFunctional::new(vec![0.25, 0.5, 0.75, 1.0], p("x1")),
            Err(CylinderError::TooManyIncrements { n: 4 })
        ));
        assert!(matches!(
            CylinderFunctional::new(vec![1.0], p("x1 + x2")),
            Err(CylinderError::ArityMismatch { arity: 2, n: 1 })
        ));
        // Fewer referenced variables than increments is fine.
        assert!(CylinderFunctional::new(vec![0.5, 1.0], p("min(x1,0)")).is_ok());
    }

    #[test]
    fn single_increment_square_matches_upper_variance() {
        let f = cyl(&[1.0], "pow(x1,2)");
        let g = PrefixGrid::auto(&f, &band(0.5, 1.0));
        let v = evaluate_cylinder(&f, &band(0.5, 1.0), &g).unwrap();
        assert!((v - 1.0).abs() < 5e-3, "got {v}");
    }

    #[test]
    fn linear_two_increment_payoff_vanishes() {
        let f = cyl(&[0.3, 1.1], "x1 + x2");
        let b = band(0.5, 1.0);
        let g = PrefixGrid::auto(&f, &b);
        let v = evaluate_cylinder(&f, &b, &g).unwrap();
        assert!(v.abs() < 2e-3, "got {v}");
    }

    #[test]
    fn convex_in_each_variable_uses_upper_volatility() {
        let f = cyl(&[0.5, 1.0], "pow(x1,2) + pow(x2,2)");
        let b = band(0.5, 1.0);
        let g = PrefixGrid::auto(&f, &b);
        let v = evaluate_cylinder(&f, &b, &g).unwrap();
        assert!((v - 1.0).abs() < 5e-3, "got {v}");
    }

    #[test]
    fn mixed_convexity_splits_the_band() {
        // Inner increment concave (sigma_low optimal), outer convex
        // (sigma_high optimal): sh^2 t1 - sl^2 (t2 - t1) = 0.375.
        let f = cyl(&[0.5, 1.0], "pow(x1,2) - pow(x2,2)");
        let b = band(0.5, 1.0);
        let g = PrefixGrid::auto(&f, &b);
        let v = evaluate_cylinder(&f, &b, &g).unwrap();
        assert!((v - 0.375).abs() < 5e-3, "got {v}");
    }

    #[test]
    fn tower_consistency_for_recombined_increments() {
        // g(x1 + x2) recombines into B_{t2}.
        let f = cyl(&[0.5, 1.0], "pow(x1 + x2, 2)");
        let b = band(0.5, 1.0);
        let g = PrefixGrid::auto(&f, &b);
        let v = evaluate_cylinder(&f, &b, &g).unwrap();
        let direct = crate::gheat::g_expectation_terminal(
            &p("pow(x1,2)"),
            &b,
            1.0,
            &crate::gheat::Accuracy::Auto,
        )
        .unwrap();
        assert!((v - direct).abs() < 4e-3, "cylinder {v} vs direct {direct}");
    }

    #[test]
    fn appended_time_with_unused_increment_changes_nothing() {
        let b = band(0.5, 1.0);
        let base = cyl(&[0.5], "min(x1, 0)");
        let padded = cyl(&[0.5, 1.25], "min(x1, 0)");
        let v0 = evaluate_cylinder(&base, &b, &PrefixGrid::auto(&base, &b)).unwrap();
        let v1 = evaluate_cylinder(&padded, &b, &PrefixGrid::auto(&padded, &b)).unwrap();
        assert!((v0 - v1).abs() < 2e-3, "base {v0} vs padded {v1}");
    }

    #[test]
    fn three_increments_run_on_a_coarse_grid() {
        let f = cyl(&[0.25, 0.5, 0.75], "x1 + x2 + x3");
        let b = band(0.5, 1.0);
        let g = PrefixGrid::auto_with(&f, &b, 33, 0.05);
        let v = evaluate_cylinder(&f, &b, &g).unwrap();
        assert!(v.abs() < 5e-3, "got {v}");
    }

    #[test]
    fn pair_of_identical_functionals_is_bitwise_equal() {
        let f = cyl(&[0.5, 1.0], "min(x1,0) + min(x2,0)");
        let b = band(0.5, 1.0);
        let g = PrefixGrid::auto(&f, &b);
        let (lo, hi) = evaluate_pair(&f, &f, &b, &g).unwrap();
        assert_eq!(lo, hi);
    }

    #[test]
    fn pair_min_against_zero_is_strictly_ordered() {
        let f_lo = cyl(&[1.0], "min(x1,0)");
        let f_hi = cyl(&[1.0], "0");
        let b = band(0.5, 1.0);
        let g = PrefixGrid::auto(&f_lo, &b);
        let (lo, hi) = evaluate_pair(&f_lo, &f_hi, &b, &g).unwrap();
        assert_eq!(hi, 0.0);
        // Fine-grid reference: the concave payoff sits at sigma_low, value
        // -sigma_low/sqrt(2 pi).
        let oracle = -0.5 / (2.0 * std::f64::consts::PI).sqrt();
        assert!((lo - oracle).abs() < 2e-3, "got {lo}");
        assert!(lo < hi);
    }

    #[test]
    fn pair_degenerate_low_band_collapses_the_gap() {
        let f_lo = cyl(&[1.0], "min(x1,0)");
        let f_hi = cyl(&[1.0], "0");
        let b = band(0.0, 1.0);
        let g = PrefixGrid::auto(&f_lo, &b);
        let (lo, hi) = evaluate_pair(&f_lo, &f_hi, &b, &g).unwrap();
        assert!(lo.abs() < 1e-9 && hi.abs() < 1e-9, "lo {lo}, hi {hi}");
    }

    #[test]
    fn pair_rejects_partition_mismatch_and_order_violation() {
        let b = band(0.5, 1.0);
        let f1 = cyl(&[1.0], "x1");
        let f2 = cyl(&[0.5], "x1");
        let g = PrefixGrid::auto(&f1, &b);
        assert!(matches!(
            evaluate_pair(&f1, &f2, &b, &g),
            Err(CylinderError::PartitionMismatch)
        ));
        let hi = cyl(&[1.0], "min(x1, 0)");
        let lo = cyl(&[1.0], "0");
        assert!(matches!(
            evaluate_pair(&lo, &hi, &b, &g),
            Err(CylinderError::OrderViolation { .. })
        ));
    }

    #[test]
    fn explicit_narrow_grid_errors_and_auto_widens() {
        let f = cyl(&[0.5, 1.0], "pow(x1,2) - pow(x2,2)");
        let b = band(0.5, 1.0);
        let narrow = PrefixGrid::explicit(vec![Axis::new(-1.0, 1.0, 41).unwrap()], 0.05).unwrap();
        assert!(matches!(
            evaluate_cylinder(&f, &b, &narrow),
            Err(CylinderError::PrefixGridTooNarrow { axis: 0, .. })
        ));
        // Auto grids sized for a different payoff widen instead of failing.
        let other = cyl(&[0.5, 1.0], "x1 + x2");
        let g = PrefixGrid::auto(&other, &b);
        let v = evaluate_cylinder(&f, &b, &g).unwrap();
        assert!((v - 0.375).abs() < 5e-3, "got {v}");
    }

    #[test]
    fn monotone_in_payoff_on_the_grid() {
        let b = band(0.5, 1.0);
        let f_lo = cyl(&[0.5, 1.0], "min(x1, 0) + min(x2, 0)");
        let f_hi = cyl(&[0.5, 1.0], "min(x1, 0)");
        let g = PrefixGrid::auto(&f_lo, &b);
        let (lo, hi) = evaluate_pair(&f_lo, &f_hi, &b, &g).unwrap();
        assert!(lo <= hi + 1e-12, "lo {lo}, hi {hi}");
    }
}
