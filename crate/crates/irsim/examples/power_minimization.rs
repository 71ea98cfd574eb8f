//! Minimum-power allocation under per-user rate targets, and the feasibility
//! threshold as a function of location uncertainty.
//!
//! ```bash
//! cargo run --release -p irsim --example power_minimization
//! ```

use irsim::prelude::*;

fn main() -> Result<()> {
    let sc = ScenarioConfig::table1().with_upsilon(0.5);
    let coeffs = per_unit_coeffs(&sc)?;
    let noise = sc.noise_watts();

    println!("minimum total power vs common rate target (0.5 m uncertainty):");
    println!("{:>7} {:>12} {:>40}", "target", "total", "per-user powers (mW)");
    for target in [0.5, 1.0, 1.5, 2.0, 2.5, 3.0, 3.5] {
        let lp = build_lp(&coeffs, &vec![target; sc.k_users], noise);
        let sol = solve_min_power(&lp)?;
        match sol.status {
            SolveStatus::Optimal => {
                let mw: Vec<String> =
                    sol.p.iter().map(|&p| format!("{:.3}", p * 1e3)).collect();
                println!(
                    "{target:>7.2} {:>9.2} dBm {:>40}",
                    watts_to_dbm(sol.total),
                    mw.join("  ")
                );
            }
            SolveStatus::Infeasible => println!("{target:>7.2}   infeasible"),
        }
    }

    println!("\nlargest feasible common rate vs uncertainty radius:");
    for upsilon in [0.0, 0.5, 1.0, 2.0] {
        let point = ScenarioConfig::table1().with_upsilon(upsilon);
        let found = max_feasible_common_rate(&point, 1e-4)?;
        let suffix = if found.at_ceiling { " (search ceiling)" } else { "" };
        println!("  {upsilon:>4.1} m: {:.4} bits/s/Hz{suffix}", found.rate);
    }
    Ok(())
}
