//! Multi-time payoffs of Brownian increments via backward recursion.
//!
//! A payoff `phi(B_{t1}, B_{t2} - B_{t1})` reduces to nested one-dimensional
//! solves: integrate the last increment out, tabulate the intermediate value
//! function, repeat. The mixed-convexity payoff `x1^2 - x2^2` shows the
//! optimizer splitting the band across increments: the convex outer leg
//! takes `sigma_high`, the concave inner leg `sigma_low`, so the value is
//! `sigma_high^2 t1 - sigma_low^2 (t2 - t1)`.
//!
//! ```bash
//! cargo run --example two_step_cylinder
//! ```

use gexpect::{evaluate_cylinder, CylinderFunctional, PayoffExpr, PrefixGrid, VolatilityBand};

fn main() -> Result<(), Box<dyn std::error::Error>> {
    let band = VolatilityBand::new(0.5, 1.0)?;
    let times = vec![0.5, 1.0];

    let cases = [
        ("x1 + x2", 0.0, "increments are centered"),
        (
            "pow(x1,2) + pow(x2,2)",
            1.0,
            "convex in both: sigma_high^2 t2",
        ),
        (
            "pow(x1,2) - pow(x2,2)",
            0.375,
            "mixed: sigma_high^2 t1 - sigma_low^2 (t2 - t1)",
        ),
        ("pow(x1 + x2, 2)", 1.0, "increments recombine into B_{t2}"),
    ];

    println!("two-increment payoffs at times (0.5, 1.0), band (0.5, 1):");
    for (src, oracle, label) in cases {
        let f = CylinderFunctional::new(times.clone(), PayoffExpr::parse(src)?)?;
        let grid = PrefixGrid::auto(&f, &band);
        let v = evaluate_cylinder(&f, &band, &grid)?;
        println!("  E[{src:>22}] = {v:>8.5}  (oracle {oracle:>6.3}: {label})");
    }
    Ok(())
}
