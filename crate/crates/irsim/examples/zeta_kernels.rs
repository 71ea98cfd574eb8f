//! Correlation kernels of the angle error against their sampling oracle.
//!
//! ```bash
//! cargo run --release -p irsim --example zeta_kernels
//! ```

use irsim::montecarlo::mc_zeta;
use irsim::prelude::*;

fn main() -> Result<()> {
    let tables = ScenarioConfig::table1().tables()?;
    let geom_a = &tables.geo[0][0];
    let geom_b = &tables.geo[1][0];
    let radius = 1.0;
    let draws = 2_000_000;

    println!("single-link coefficients E{{e^(j pi (s-1) eps)}}:");
    println!("{:>4} {:>12} {:>12} {:>10}", "s", "closed", "sampled", "std err");
    for s in [1, 2, 4, 8, 16] {
        let closed = zeta_single(geom_a, radius, s);
        let est = mc_zeta(geom_a, None, radius, s, 1, draws, 7)?;
        println!("{s:>4} {closed:>12.6} {:>12.6} {:>10.1e}", est.value, est.std_err);
    }

    println!("\nelement pairs on one link (s = 3):");
    for l in [1, 3, 6, 12] {
        let closed = zeta_pair(geom_a, radius, 3, l);
        let est = mc_zeta(geom_a, None, radius, 3, l, draws, 8)?;
        println!("   l = {l:>2}: closed {closed:>9.6}, sampled {:>9.6}", est.value);
    }

    println!("\ncross-IRS coefficients (both errors share one displacement):");
    for (s, l) in [(2, 2), (4, 7), (16, 16)] {
        let closed = zeta_cross(geom_a, geom_b, radius, s, l);
        let est = mc_zeta(geom_a, Some(geom_b), radius, s, l, draws, 9)?;
        println!(
            "   (s, l) = ({s:>2}, {l:>2}): closed {closed:>9.6}, sampled {:>9.6}, imag {:+.1e}",
            est.value, est.imag
        );
    }
    Ok(())
}
