//! Location-aided multi-IRS downlink simulator.
//!
//! One base station with `N` antennas serves `K` single-antenna users, each
//! through its own intelligent reflecting surface of `M` passive elements.
//! Beams are designed from imperfect user locations only: the true position
//! is uniform in a ball around the reported one, the resulting angle error
//! has closed-form statistics, and the achievable rate follows in closed
//! form. The crate implements that pipeline end to end:
//!
//! - [`geometry`]: effective angles, the bounded location-error model, and
//!   the correlation kernels of the angle error.
//! - [`channel`]: steering vectors, path loss, noise, Rician channel draws.
//! - [`beamforming`]: matched transmit beams, conjugate phase-shift beams,
//!   effective channel composition.
//! - [`rate`]: the closed-form rate breakdown and its simplified regimes.
//! - [`montecarlo`]: seeded sampling estimators that validate the closed
//!   forms (deterministic across thread counts).
//! - [`power_control`]: minimum total power under per-user rate targets via
//!   a small dense simplex.
//! - [`scenario`]: deployment description and its key-value file format.
//! - [`report`]: CSV documents for analyses, figure presets, and sweeps.
//!
//! ```
//! use irsim::prelude::*;
//!
//! let scenario = ScenarioConfig::table1().with_rho_d_dbm(40.0);
//! let breakdown = closed_form_breakdown(&scenario)?;
//! let mc = mc_breakdown(&scenario, &McConfig::new(20, 100, scenario.seed))?;
//! assert!((sum_rate(&breakdown) - sum_rate(&mc)).abs() < 1.0);
//! # irsim::Result::Ok(())
//! ```

// Small co-indexed tables are walked by index throughout the numeric code,
// and negated comparisons like `!(x > 0.0)` deliberately reject NaN.
#![allow(clippy::needless_range_loop, clippy::neg_cmp_op_on_partial_ord)]

pub mod beamforming;
pub mod channel;
pub mod error;
pub mod geometry;
pub mod montecarlo;
pub mod power_control;
pub mod rate;
pub mod report;
pub mod rng;
pub mod scenario;

pub use error::{Error, Result};

/// The commonly used surface in one import.
pub mod prelude {
    pub use crate::beamforming::{
        effective_channel, phase_shift_beam, transmit_beams, BeamSet, PowerSplit,
    };
    pub use crate::channel::{
        noise_power, path_loss, sample_bs_irs, sample_irs_user, steering_inner, steering_vector,
        FadingParams, RicianK,
    };
    pub use crate::error::{Error, Result};
    pub use crate::geometry::{
        angle_error, bs_irs_angles, error_pdf, error_variance, link_geometry,
        sample_location_error, zeta_cross, zeta_kernel, zeta_pair, zeta_single, BsIrsAngles,
        LinkGeometry, LocationError, Position3,
    };
    pub use crate::montecarlo::{mc_breakdown, mc_zeta, ErrorMode, McConfig, ZetaEstimate};
    pub use crate::power_control::{
        build_lp, enforce_power_cap, max_feasible_common_rate, per_unit_coeffs, solve_min_power,
        CommonRateSearch, LpProblem, PowerAllocation, SolveStatus, UnitCoeffs,
    };
    pub use crate::rate::{
        beta_cascaded, closed_form_breakdown, interference_alignment_factor, rate_corollary,
        sum_rate, CascadedGain, CorollaryVariant, RateBreakdown,
    };
    pub use crate::report::{
        run_analyze, run_compare, run_power_control, run_preset, run_simulate, run_sweep,
        PresetOptions, SweepParam, SweepSpec,
    };
    pub use crate::rng::CounterRng;
    pub use crate::scenario::{dbm_to_watts, load_scenario, watts_to_dbm, Eta, ScenarioConfig};
}
