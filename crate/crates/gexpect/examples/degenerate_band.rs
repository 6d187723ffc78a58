//! With `sigma_low = 0` the strict comparison theorem genuinely fails.
//!
//! The payoff `min(x, 0)` is concave, and concave kinks diffuse at
//! `sigma_low`. When the band floor is zero the initial condition is a
//! stationary solution of the G-heat equation, so `E[min(B_1, 0)] = 0` even
//! though `min(x, 0) < 0` on a half line: the payoff sits strictly below
//! zero somewhere, yet nothing separates the expectations.
//!
//! ```bash
//! cargo run --example degenerate_band
//! ```

use gexpect::{
    g_expectation_terminal, solve_gheat, Accuracy, GridSpec, PayoffExpr, Snapshots, VolatilityBand,
};

fn main() -> Result<(), Box<dyn std::error::Error>> {
    let phi = PayoffExpr::parse("min(x1, 0)")?;

    let degenerate = VolatilityBand::new(0.0, 1.0)?;
    let v0 = g_expectation_terminal(&phi, &degenerate, 1.0, &Accuracy::Auto)?;
    println!("band (0, 1):   E[min(B_1, 0)] = {v0:.3e}   (the kink never moves)");

    // The whole field is a fixed point, not just the value at the origin.
    let grid = GridSpec::new(-7.0, 7.0, 401, 1.0, 0.9)?;
    let field = solve_gheat(&phi, &degenerate, &grid, &Snapshots::Endpoints)?;
    let drift = field
        .terminal()
        .iter()
        .zip(field.snapshot(0))
        .map(|(a, b)| (a - b).abs())
        .fold(0.0f64, f64::max);
    println!("               max |u(1, .) - u(0, .)| = {drift:.3e}");

    // Any positive floor restores strictness.
    let positive = VolatilityBand::new(0.5, 1.0)?;
    let v1 = g_expectation_terminal(&phi, &positive, 1.0, &Accuracy::Auto)?;
    println!("band (0.5, 1): E[min(B_1, 0)] = {v1:.5}   (strictly negative)");
    Ok(())
}
