//! Strict-comparison verdicts, negativity checks and mean certainty.
//!
//! With a positive volatility floor, ordered payoffs separate strictly in
//! expectation exactly when they differ somewhere. The check reports the
//! verdict, a witness node, and whether the floor hypothesis held; the
//! companion negativity check handles single-increment payoffs against
//! zero, and the mean-certainty check detects when the sublinear
//! expectation collapses to one number.
//!
//! ```bash
//! cargo run --example strict_comparison
//! ```

use gexpect::{
    check_mean_certainty, check_negativity, check_strict, Accuracy, CylinderFunctional, PayoffExpr,
    PrefixGrid, VolatilityBand,
};

fn main() -> Result<(), Box<dyn std::error::Error>> {
    let band = VolatilityBand::new(0.5, 1.0)?;

    // Two-increment ordered pair: min(x1,0)+min(x2,0) <= 0 with plenty of
    // separation.
    let times = vec![0.5, 1.0];
    let f_lo = CylinderFunctional::new(times.clone(), PayoffExpr::parse("min(x1,0) + min(x2,0)")?)?;
    let f_hi = CylinderFunctional::new(times, PayoffExpr::parse("0")?)?;
    let grid = PrefixGrid::auto(&f_lo, &band);
    let r = check_strict(&f_lo, &f_hi, &band, &grid, None)?;
    println!("strict comparison of min(x1,0)+min(x2,0) against 0:");
    println!(
        "  verdict {:?}, gap {:.5} at tolerance {:.1e}",
        r.verdict.verdict, r.verdict.gap, r.verdict.tolerance
    );
    println!(
        "  witness {:?}, sigma_low > 0: {}",
        r.witness, r.sigma_low_positive
    );

    // Negativity of a bump sitting away from the start point: diffusion
    // must reach it, and with a positive floor it always does.
    let bump = PayoffExpr::parse("-max(0, 1 - abs(x1 - 2))")?;
    let n = check_negativity(&bump, &band, &Accuracy::Auto, None)?;
    println!(
        "negativity of the offset bump: verdict {:?}, E = {:.5}",
        n.verdict.verdict, n.verdict.value_lo
    );

    // Mean certainty: linear payoffs are certain, convex ones are not.
    for src in ["x1", "pow(x1,2)"] {
        let f = CylinderFunctional::terminal(1.0, PayoffExpr::parse(src)?)?;
        let g = PrefixGrid::auto(&f, &band);
        let m = check_mean_certainty(&f, &band, &g, 1e-3)?;
        println!(
            "mean certainty of {src:>9}: {} (E[X] = {:.5}, -E[-X] = {:.5})",
            if m.is_certain { "certain" } else { "uncertain" },
            m.e_plus,
            -m.e_minus
        );
    }
    Ok(())
}
