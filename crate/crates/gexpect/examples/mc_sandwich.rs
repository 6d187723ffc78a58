//! The dual sandwich: scenario Monte Carlo bounds the PDE value from below.
//!
//! The sublinear expectation is a supremum of classical expectations over
//! volatility-controlled diffusions, so every simulated control yields a
//! certified lower bound. Maximizing over a small family of controls gets
//! within Monte Carlo error of the PDE value whenever the family contains a
//! near-optimal control — here the constant extremes do.
//!
//! ```bash
//! cargo run --example mc_sandwich
//! ```

use gexpect::{
    g_expectation_terminal, lower_bound_expectation, Accuracy, ControlPolicy, CylinderFunctional,
    McFunctional, McParams, PayoffExpr, VolatilityBand,
};

fn main() -> Result<(), Box<dyn std::error::Error>> {
    let band = VolatilityBand::new(0.5, 1.0)?;
    let mc = McParams::new(100_000, 500, 42)?;
    let family = [
        ControlPolicy::constant(0.5),
        ControlPolicy::constant(0.75),
        ControlPolicy::constant(1.0),
    ];

    println!("payoff            PDE value   MC lower bound (99% CI)   argmax policy");
    for src in ["pow(x1,2)", "-pow(x1,2)", "min(x1, 0)"] {
        let phi = PayoffExpr::parse(src)?;
        let pde = g_expectation_terminal(&phi, &band, 1.0, &Accuracy::Auto)?;
        let f = McFunctional::Cylinder(CylinderFunctional::terminal(1.0, phi)?);
        let r = lower_bound_expectation(&f, &band, &family, &mc)?;
        println!(
            "{src:>12}    {pde:>9.5}   {:>9.5} +/- {:>7.1e}   {}",
            r.value,
            r.ci_halfwidth,
            r.argmax_policy.describe()
        );
        assert!(
            r.value <= pde + r.ci_halfwidth + 5e-3,
            "sandwich violated: the MC bound exceeded the PDE value"
        );
    }
    println!();
    println!("every MC bound sits below its PDE value (up to CI): the sandwich holds");
    Ok(())
}
