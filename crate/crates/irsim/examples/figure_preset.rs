//! Run a figure preset at a reduced Monte Carlo budget and print the CSV.
//! The `irsim` binary exposes the same presets at full budget.
//!
//! ```bash
//! cargo run --release -p irsim --example figure_preset
//! ```

use irsim::prelude::*;

fn main() -> Result<()> {
    let opts = PresetOptions {
        seed: Some(7),
        mc_loc: Some(20),
        mc_fade: Some(100),
        mode: None,
    };
    let csv = run_preset("fig2", &opts)?;
    print!("{csv}");

    eprintln!();
    eprintln!("(sum rate vs transmit power at 0.5 m and 2 m uncertainty;");
    eprintln!(" columns pair the closed form with its Monte Carlo check)");
    Ok(())
}
