//! Closed-form rate breakdown of the reference deployment, and how the
//! simplified regimes compare to the full expression.
//!
//! ```bash
//! cargo run --release -p irsim --example rate_breakdown
//! ```

use irsim::prelude::*;

fn main() -> Result<()> {
    let sc = ScenarioConfig::table1().with_rho_d_dbm(40.0).with_upsilon(0.5);
    let bd = closed_form_breakdown(&sc)?;

    println!("per-user breakdown at 40 dBm, 0.5 m uncertainty:");
    println!(
        "{:>5} {:>13} {:>13} {:>13} {:>9}",
        "user", "desired W", "leakage W", "interf W", "rate"
    );
    for k in 0..sc.k_users {
        let interference: f64 = (0..sc.k_users).filter(|&i| i != k).map(|i| bd.c[k][i]).sum();
        println!(
            "{:>5} {:>13.4e} {:>13.4e} {:>13.4e} {:>9.4}",
            k + 1,
            bd.a[k],
            bd.b[k],
            interference,
            bd.rate[k]
        );
    }
    println!("sum rate: {:.4} bits/s/Hz", sum_rate(&bd));

    println!("\nsimplified regimes (sum rate):");
    for (label, variant) in [
        ("orthogonal directions", CorollaryVariant::Orthogonal),
        ("perfect location", CorollaryVariant::PerfectLocation),
        ("large M", CorollaryVariant::LargeM),
        ("large N", CorollaryVariant::LargeN),
        ("no NLOS", CorollaryVariant::NoNlos),
    ] {
        let sr = sum_rate(&rate_corollary(&sc, variant)?);
        println!("  {label:<24} {sr:>8.4}");
        for warning in irsim::rate::corollary_precondition_warnings(&sc, variant) {
            println!("      note: {warning}");
        }
    }

    // Shrinking the uncertainty closes the gap to the perfect-location value.
    println!("\nsum rate vs uncertainty radius:");
    for upsilon in [0.0, 0.25, 0.5, 1.0, 2.0, 4.0] {
        let sr = sum_rate(&closed_form_breakdown(&sc.clone().with_upsilon(upsilon))?);
        println!("  {upsilon:>5.2} m: {sr:>8.4}");
    }
    Ok(())
}
