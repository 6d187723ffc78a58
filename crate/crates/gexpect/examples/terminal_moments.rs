//! The defining moment identities of the G-normal distribution.
//!
//! `E[B_1^2]` is the upper variance `sigma_high^2`, while `-E[-B_1^2]` is
//! the lower variance `sigma_low^2`: convex payoffs see the most volatile
//! scenario, concave payoffs the least volatile one. Linear payoffs have no
//! volatility exposure at all.
//!
//! ```bash
//! cargo run --example terminal_moments
//! ```

use gexpect::{g_expectation_terminal, Accuracy, PayoffExpr, VolatilityBand};

fn main() -> Result<(), Box<dyn std::error::Error>> {
    let band = VolatilityBand::new(0.5, 1.0)?;

    let cases = [
        ("pow(x1,2)", 1.0, "upper variance sigma_high^2"),
        ("-pow(x1,2)", 1.0, "minus the lower variance -sigma_low^2"),
        ("x1", 1.0, "linear payoffs are certain"),
        (
            "pow(x1,2)",
            2.0,
            "scaling: B_t ~ sqrt(t) B_1 gives t sigma_high^2",
        ),
    ];

    println!("band (0.5, 1):");
    for (src, t, label) in cases {
        let phi = PayoffExpr::parse(src)?;
        let v = g_expectation_terminal(&phi, &band, t, &Accuracy::Auto)?;
        println!("  E[{src:>10} at t = {t}] = {v:>8.5}   ({label})");
    }

    // In the degenerate band the two variances agree: classical Brownian
    // motion is recovered.
    let classical = VolatilityBand::new(1.0, 1.0)?;
    let up = g_expectation_terminal(
        &PayoffExpr::parse("pow(x1,2)")?,
        &classical,
        1.0,
        &Accuracy::Auto,
    )?;
    let dn = g_expectation_terminal(
        &PayoffExpr::parse("-pow(x1,2)")?,
        &classical,
        1.0,
        &Accuracy::Auto,
    )?;
    println!(
        "degenerate band (1, 1): E[B^2] = {up:.5}, -E[-B^2] = {:.5}",
        -dn
    );
    Ok(())
}
