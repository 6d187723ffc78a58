//! Capacity-one strictness without a strict gap in expectation.
//!
//! The quadratic variation `<B>_t` is dominated by `sigma_high^2 t` on
//! every path. Under the constant-`sigma_low` scenario the domination is
//! strict with probability one, so the event `<B>_t < sigma_high^2 t` has
//! Choquet capacity one. Yet the expectations coincide:
//! `E[<B>_t] = sigma_high^2 t` exactly, because the constant-`sigma_high`
//! scenario pins the quadratic variation to its ceiling — the same scenario
//! that gives the strictness event probability zero and thereby refutes the
//! inf-hypothesis of the strict comparison theorem.
//!
//! ```bash
//! cargo run --example qv_counterexample
//! ```

use gexpect::{run_qv_counterexample, McParams, VolatilityBand};

fn main() -> Result<(), Box<dyn std::error::Error>> {
    let band = VolatilityBand::new(0.5, 1.0)?;
    let mc = McParams::new(100_000, 1000, 42)?;
    let r = run_qv_counterexample(&band, 1.0, &mc)?;

    println!(
        "band ({}, {}), horizon {}",
        r.sigma_low, r.sigma_high, r.horizon
    );
    println!("almost-sure bound: <B>_1 <= sigma_high^2 = {}", r.qv_bound);
    println!();
    println!(
        "capacity leg:     P(<B>_1 < {}) = {} under constant sigma_low  =>  v(event) = 1",
        r.qv_bound, r.capacity_event_lower
    );
    println!(
        "expectation leg:  E[<B>_1] >= {} +/- {:.1e} at {} (theory: {})",
        r.expectation_value,
        r.expectation_ci_halfwidth,
        r.expectation_argmax.describe(),
        r.expectation_theoretical
    );
    println!(
        "refutation leg:   P(<B>_1 < {}) = {} under constant sigma_high",
        r.qv_bound, r.refutation_prob_high
    );
    println!();
    println!("the event holds quasi-surely in the strict sense (capacity 1), yet no strict");
    println!(
        "gap separates E[<B>_1] from E[sigma_high^2]: the inf-hypothesis fails ({})",
        if r.strict_hypothesis_refuted {
            "refuted above"
        } else {
            "not refuted"
        }
    );
    Ok(())
}
