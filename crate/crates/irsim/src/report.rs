//! Experiment harness: analysis documents, figure presets, and parameter
//! sweeps, all emitted as RFC-4180 CSV (CRLF line endings, header row,
//! UTF-8). Output is byte-identical for a given scenario and seed: sweep
//! points may evaluate in parallel, but rows are assembled in sweep order
//! and every random stream is keyed, never shared.

use crate::error::{Error, Result};
use crate::montecarlo::{mc_breakdown, ErrorMode, McConfig};
use crate::power_control::{
    build_lp, enforce_power_cap, per_unit_coeffs, solve_min_power, SolveStatus,
};
use crate::rate::{closed_form_breakdown, rate_corollary, sum_rate, CorollaryVariant, RateBreakdown};
use crate::scenario::{watts_to_dbm, ScenarioConfig};
use rayon::prelude::*;

// ── CSV assembly ────────────────────────────────────────────────────────────

struct Csv {
    out: String,
    columns: usize,
}

impl Csv {
    fn new(header: &[String]) -> Self {
        let mut csv = Csv {
            out: String::new(),
            columns: header.len(),
        };
        csv.push_row(header);
        csv
    }

    fn push_row(&mut self, cells: &[String]) {
        assert_eq!(cells.len(), self.columns, "ragged CSV row");
        // No cell this crate emits contains a comma, quote, or newline, so
        // plain joining stays within RFC 4180.
        self.out.push_str(&cells.join(","));
        self.out.push_str("\r\n");
    }

    fn finish(self) -> String {
        self.out
    }
}

fn header(names: &[&str]) -> Vec<String> {
    names.iter().map(|s| s.to_string()).collect()
}

fn fmt_rate(v: f64) -> String {
    format!("{v:.6}")
}

fn fmt_watts(v: f64) -> String {
    format!("{v:.6e}")
}

fn fmt_param(v: f64) -> String {
    format!("{v}")
}

/// Total power cell: dBm normally, `0 W` for exactly zero (no dBm value
/// exists), `infeasible` when the LP has no solution.
fn fmt_total_power(total: Option<f64>) -> String {
    match total {
        None => "infeasible".to_string(),
        Some(0.0) => "0 W".to_string(),
        Some(w) => format!("{:.4}", watts_to_dbm(w)),
    }
}

// ── Breakdown documents ─────────────────────────────────────────────────────

fn breakdown_quantities(bd: &RateBreakdown) -> Vec<(String, f64)> {
    let k_users = bd.a.len();
    let mut rows = Vec::new();
    for k in 0..k_users {
        rows.push((format!("a_{}", k + 1), bd.a[k]));
    }
    for k in 0..k_users {
        rows.push((format!("b_{}", k + 1), bd.b[k]));
    }
    for k in 0..k_users {
        for i in 0..k_users {
            rows.push((format!("c_{}_{}", k + 1, i + 1), bd.c[k][i]));
        }
    }
    for k in 0..k_users {
        rows.push((format!("rate_{}", k + 1), bd.rate[k]));
    }
    rows.push(("sum_rate".to_string(), sum_rate(bd)));
    rows
}

fn fmt_quantity(name: &str, value: f64) -> String {
    if name.starts_with("rate") || name == "sum_rate" {
        fmt_rate(value)
    } else {
        fmt_watts(value)
    }
}

/// Closed-form breakdown as a `quantity,value` document.
pub fn run_analyze(sc: &ScenarioConfig) -> Result<String> {
    let bd = closed_form_breakdown(sc)?;
    let mut csv = Csv::new(&header(&["quantity", "value"]));
    for (name, value) in breakdown_quantities(&bd) {
        csv.push_row(&[name.clone(), fmt_quantity(&name, value)]);
    }
    Ok(csv.finish())
}

/// Monte Carlo breakdown as a `quantity,value` document.
pub fn run_simulate(sc: &ScenarioConfig, cfg: &McConfig) -> Result<String> {
    let bd = mc_breakdown(sc, cfg)?;
    let mut csv = Csv::new(&header(&["quantity", "value"]));
    for (name, value) in breakdown_quantities(&bd) {
        csv.push_row(&[name.clone(), fmt_quantity(&name, value)]);
    }
    Ok(csv.finish())
}

/// Closed form and Monte Carlo side by side with relative gaps.
pub fn run_compare(sc: &ScenarioConfig, cfg: &McConfig) -> Result<String> {
    let cf = closed_form_breakdown(sc)?;
    let mc = mc_breakdown(sc, cfg)?;
    let mut csv = Csv::new(&header(&["quantity", "closed_form", "monte_carlo", "rel_gap"]));
    for ((name, a), (_, b)) in breakdown_quantities(&cf)
        .into_iter()
        .zip(breakdown_quantities(&mc))
    {
        let gap = (a - b).abs() / a.abs().max(b.abs()).max(1e-300);
        csv.push_row(&[
            name.clone(),
            fmt_quantity(&name, a),
            fmt_quantity(&name, b),
            format!("{gap:.6e}"),
        ]);
    }
    Ok(csv.finish())
}

// ── Power control ───────────────────────────────────────────────────────────

/// Power-control run: the CSV document plus whether any target was
/// infeasible (drives the CLI `--strict` exit code).
pub struct PowerRun {
    pub csv: String,
    pub any_infeasible: bool,
}

/// Solve the minimum-power problem for each common rate target.
pub fn run_power_control(sc: &ScenarioConfig, targets: &[f64]) -> Result<PowerRun> {
    if targets.is_empty() {
        return Err(Error::InvalidArgument(
            "at least one rate target is required".into(),
        ));
    }
    if targets.iter().any(|t| !(*t >= 0.0)) {
        return Err(Error::InvalidArgument(
            "rate targets must be finite and >= 0".into(),
        ));
    }
    let coeffs = per_unit_coeffs(sc)?;
    let noise = sc.noise_watts();
    let cap = sc.rho_d_cap_watts();
    let k_users = coeffs.a_bar.len();

    let mut names = vec!["rate_target".to_string(), "total_dbm".to_string()];
    for k in 0..k_users {
        names.push(format!("p_{}_watts", k + 1));
    }
    let mut csv = Csv::new(&names);
    let mut any_infeasible = false;
    let mut sorted: Vec<f64> = targets.to_vec();
    sorted.sort_by(|a, b| a.partial_cmp(b).unwrap());
    for &target in &sorted {
        let lp = build_lp(&coeffs, &vec![target; k_users], noise);
        let sol = enforce_power_cap(solve_min_power(&lp)?, cap);
        let mut cells = vec![fmt_param(target)];
        match sol.status {
            SolveStatus::Optimal => {
                cells.push(fmt_total_power(Some(sol.total)));
                cells.extend(sol.p.iter().map(|&p| fmt_watts(p)));
            }
            SolveStatus::Infeasible => {
                any_infeasible = true;
                cells.push(fmt_total_power(None));
                cells.extend(std::iter::repeat_n(String::new(), k_users));
            }
        }
        csv.push_row(&cells);
    }
    Ok(PowerRun {
        csv: csv.finish(),
        any_infeasible,
    })
}

// ── Presets ─────────────────────────────────────────────────────────────────

/// Knobs the CLI can override on any preset.
#[derive(Debug, Clone, Default)]
pub struct PresetOptions {
    pub seed: Option<u64>,
    pub mc_loc: Option<usize>,
    pub mc_fade: Option<usize>,
    pub mode: Option<ErrorMode>,
}

impl PresetOptions {
    fn mc(&self, sc: &ScenarioConfig, loc: usize, fade: usize) -> McConfig {
        McConfig {
            n_location_draws: self.mc_loc.unwrap_or(loc),
            n_fading_draws: self.mc_fade.unwrap_or(fade),
            seed: self.seed.unwrap_or(sc.seed),
            mode: self.mode.unwrap_or(ErrorMode::LinearizedError),
        }
    }
}

pub const PRESET_NAMES: [&str; 7] = ["fig2", "fig3", "fig4", "fig5", "fig6", "fig7", "fig8"];

/// Run a named figure reproduction and return its CSV document.
///
/// - `fig2`: sum rate vs transmit power at 0.5 m and 2 m uncertainty.
/// - `fig3`: orthogonal vs non-orthogonal IRS directions at 1 m.
/// - `fig4`: IRSs interpolated between the BS and their users.
/// - `fig5`: sum rate vs reflecting elements, with the large-M regime.
/// - `fig6`: sum rate vs Rician factor, with the pure-LOS regime.
/// - `fig7`: sum rate vs BS antennas, with the large-N regime.
/// - `fig8`: minimum total power vs the common rate target.
pub fn run_preset(name: &str, opts: &PresetOptions) -> Result<String> {
    match name {
        "fig2" => preset_power_sweep(opts),
        "fig3" => preset_directions(opts),
        "fig4" => preset_irs_placement(opts),
        "fig5" => preset_elements(opts),
        "fig6" => preset_rician(opts),
        "fig7" => preset_antennas(opts),
        "fig8" => preset_power_control(opts),
        other => Err(Error::InvalidArgument(format!(
            "unknown preset `{other}`; expected one of {}",
            PRESET_NAMES.join(", ")
        ))),
    }
}

fn rate_pair(sc: &ScenarioConfig, cfg: &McConfig) -> Result<(f64, f64)> {
    let cf = sum_rate(&closed_form_breakdown(sc)?);
    let mc = sum_rate(&mc_breakdown(sc, cfg)?);
    Ok((cf, mc))
}

fn collect_rows<F>(values: &[f64], eval: F) -> Result<Vec<Vec<String>>>
where
    F: Fn(f64) -> Result<Vec<String>> + Sync,
{
    values.par_iter().map(|&v| eval(v)).collect()
}

fn preset_power_sweep(opts: &PresetOptions) -> Result<String> {
    let rhos: Vec<f64> = (0..=8).map(|i| 5.0 * i as f64).collect();
    let upsilons = [0.5, 2.0];
    let rows = collect_rows(&rhos, |rho| {
        let mut cells = vec![fmt_param(rho)];
        for &upsilon in &upsilons {
            let sc = ScenarioConfig::table1()
                .with_rho_d_dbm(rho)
                .with_upsilon(upsilon);
            let cfg = opts.mc(&sc, 200, 1000);
            let (cf, mc) = rate_pair(&sc, &cfg)?;
            cells.push(fmt_rate(cf));
            cells.push(fmt_rate(mc));
        }
        Ok(cells)
    })?;
    let mut csv = Csv::new(&header(&[
        "rho_d_dbm",
        "closed_form_upsilon_0.5",
        "monte_carlo_upsilon_0.5",
        "closed_form_upsilon_2",
        "monte_carlo_upsilon_2",
    ]));
    rows.iter().for_each(|r| csv.push_row(r));
    Ok(csv.finish())
}

fn preset_directions(opts: &PresetOptions) -> Result<String> {
    let rhos: Vec<f64> = (0..=8).map(|i| 5.0 * i as f64).collect();
    let rows = collect_rows(&rhos, |rho| {
        let orth = ScenarioConfig::table1()
            .with_rho_d_dbm(rho)
            .with_upsilon(1.0);
        let nonorth = ScenarioConfig::nonorthogonal_directions()
            .with_rho_d_dbm(rho)
            .with_upsilon(1.0);
        let cfg = opts.mc(&orth, 200, 1000);
        let (cf_o, mc_o) = rate_pair(&orth, &cfg)?;
        let c1 = sum_rate(&rate_corollary(&orth, CorollaryVariant::Orthogonal)?);
        let (cf_n, mc_n) = rate_pair(&nonorth, &cfg)?;
        Ok(vec![
            fmt_param(rho),
            fmt_rate(cf_o),
            fmt_rate(c1),
            fmt_rate(mc_o),
            fmt_rate(cf_n),
            fmt_rate(mc_n),
        ])
    })?;
    let mut csv = Csv::new(&header(&[
        "rho_d_dbm",
        "closed_form_orthogonal",
        "corollary_orthogonal",
        "monte_carlo_orthogonal",
        "closed_form_nonorthogonal",
        "monte_carlo_nonorthogonal",
    ]));
    rows.iter().for_each(|r| csv.push_row(r));
    Ok(csv.finish())
}

/// The placement path is a reconstruction: each IRS moves along the straight
/// segment from the BS to its served user, parameterized by the fraction of
/// the way there.
fn preset_irs_placement(opts: &PresetOptions) -> Result<String> {
    let fractions: Vec<f64> = (1..=9).map(|i| i as f64 / 10.0).collect();
    let rows = collect_rows(&fractions, |frac| {
        let mut sc = ScenarioConfig::table1();
        for m in 0..sc.k_users {
            let user = sc.users_est[sc.assignment.iter().position(|&x| x == m).unwrap()];
            sc.irs[m].x = frac * user.x;
            sc.irs[m].y = frac * user.y;
            sc.irs[m].z = frac * user.z;
        }
        let cfg = opts.mc(&sc, 100, 500);
        let (cf, mc) = rate_pair(&sc, &cfg)?;
        Ok(vec![fmt_param(frac), fmt_rate(cf), fmt_rate(mc)])
    })?;
    let mut csv = Csv::new(&header(&["bs_to_user_fraction", "closed_form", "monte_carlo"]));
    rows.iter().for_each(|r| csv.push_row(r));
    Ok(csv.finish())
}

fn preset_elements(opts: &PresetOptions) -> Result<String> {
    let ms: Vec<f64> = [4.0, 8.0, 16.0, 32.0, 64.0].to_vec();
    let ns = [5usize, 10];
    let rows = collect_rows(&ms, |m| {
        let mut cells = vec![fmt_param(m)];
        for &n in &ns {
            let sc = ScenarioConfig::table1()
                .with_upsilon(0.0)
                .with_m_elements(m as usize)
                .with_n_antennas(n);
            // Location draws collapse at zero uncertainty.
            let cfg = opts.mc(&sc, 1, 500);
            let (cf, mc) = rate_pair(&sc, &cfg)?;
            let limit = sum_rate(&rate_corollary(&sc, CorollaryVariant::LargeM)?);
            cells.push(fmt_rate(cf));
            cells.push(fmt_rate(mc));
            cells.push(fmt_rate(limit));
        }
        Ok(cells)
    })?;
    let mut csv = Csv::new(&header(&[
        "m_elements",
        "closed_form_n5",
        "monte_carlo_n5",
        "large_m_limit_n5",
        "closed_form_n10",
        "monte_carlo_n10",
        "large_m_limit_n10",
    ]));
    rows.iter().for_each(|r| csv.push_row(r));
    Ok(csv.finish())
}

fn preset_rician(opts: &PresetOptions) -> Result<String> {
    let vs: Vec<f64> = [0.5, 1.0, 2.0, 5.0, 10.0, 20.0, 50.0, 100.0].to_vec();
    let ms = [4usize, 8];
    let rows = collect_rows(&vs, |v| {
        let mut cells = vec![fmt_param(v)];
        for &m in &ms {
            let sc = ScenarioConfig::table1()
                .with_upsilon(0.0)
                .with_m_elements(m)
                .with_rician_all(crate::channel::RicianK::Finite(v));
            let cfg = opts.mc(&sc, 1, 1000);
            let (cf, mc) = rate_pair(&sc, &cfg)?;
            let limit = sum_rate(&rate_corollary(&sc, CorollaryVariant::NoNlos)?);
            cells.push(fmt_rate(cf));
            cells.push(fmt_rate(mc));
            cells.push(fmt_rate(limit));
        }
        Ok(cells)
    })?;
    let mut csv = Csv::new(&header(&[
        "rician_v",
        "closed_form_m4",
        "monte_carlo_m4",
        "no_nlos_limit_m4",
        "closed_form_m8",
        "monte_carlo_m8",
        "no_nlos_limit_m8",
    ]));
    rows.iter().for_each(|r| csv.push_row(r));
    Ok(csv.finish())
}

fn preset_antennas(opts: &PresetOptions) -> Result<String> {
    let ns: Vec<f64> = [1.0, 2.0, 4.0, 8.0, 16.0, 32.0, 64.0].to_vec();
    let ms = [8usize, 16];
    let rows = collect_rows(&ns, |n| {
        let mut cells = vec![fmt_param(n)];
        for &m in &ms {
            let sc = ScenarioConfig::table1()
                .with_upsilon(0.0)
                .with_rho_d_dbm(40.0)
                .with_n_antennas(n as usize)
                .with_m_elements(m);
            let cfg = opts.mc(&sc, 1, 500);
            let (cf, mc) = rate_pair(&sc, &cfg)?;
            let limit = sum_rate(&rate_corollary(&sc, CorollaryVariant::LargeN)?);
            cells.push(fmt_rate(cf));
            cells.push(fmt_rate(mc));
            cells.push(fmt_rate(limit));
        }
        Ok(cells)
    })?;
    let mut csv = Csv::new(&header(&[
        "n_antennas",
        "closed_form_m8",
        "monte_carlo_m8",
        "large_n_limit_m8",
        "closed_form_m16",
        "monte_carlo_m16",
        "large_n_limit_m16",
    ]));
    rows.iter().for_each(|r| csv.push_row(r));
    Ok(csv.finish())
}

fn preset_power_control(_opts: &PresetOptions) -> Result<String> {
    let targets: Vec<f64> = (1..=24).map(|i| 0.25 * i as f64).collect();
    let upsilons = [0.5, 2.0];
    let mut per_upsilon = Vec::new();
    for &upsilon in &upsilons {
        let sc = ScenarioConfig::table1().with_upsilon(upsilon);
        let coeffs = per_unit_coeffs(&sc)?;
        let noise = sc.noise_watts();
        per_upsilon.push((coeffs, noise));
    }
    let mut csv = Csv::new(&header(&[
        "rate_target",
        "total_dbm_upsilon_0.5",
        "total_dbm_upsilon_2",
    ]));
    for &target in &targets {
        let mut cells = vec![fmt_param(target)];
        for (coeffs, noise) in &per_upsilon {
            let lp = build_lp(coeffs, &vec![target; coeffs.a_bar.len()], *noise);
            let sol = solve_min_power(&lp)?;
            cells.push(match sol.status {
                SolveStatus::Optimal => fmt_total_power(Some(sol.total)),
                SolveStatus::Infeasible => fmt_total_power(None),
            });
        }
        csv.push_row(&cells);
    }
    Ok(csv.finish())
}

// ── Generic sweeps ──────────────────────────────────────────────────────────

/// Parameter a sweep may vary.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum SweepParam {
    RhoDdbm,
    Upsilon,
    MElements,
    NAntennas,
    RicianV,
    RateTarget,
}

impl SweepParam {
    pub fn parse(name: &str) -> Result<Self> {
        Ok(match name {
            "rho_d_dbm" => SweepParam::RhoDdbm,
            "upsilon" => SweepParam::Upsilon,
            "m" => SweepParam::MElements,
            "n" => SweepParam::NAntennas,
            "v" => SweepParam::RicianV,
            "rate_target" => SweepParam::RateTarget,
            other => {
                return Err(Error::InvalidArgument(format!(
                    "unknown sweep parameter `{other}`; expected rho_d_dbm, upsilon, m, n, v, or rate_target"
                )))
            }
        })
    }

    fn column(&self) -> &'static str {
        match self {
            SweepParam::RhoDdbm => "rho_d_dbm",
            SweepParam::Upsilon => "upsilon",
            SweepParam::MElements => "m_elements",
            SweepParam::NAntennas => "n_antennas",
            SweepParam::RicianV => "rician_v",
            SweepParam::RateTarget => "rate_target",
        }
    }

    fn apply(&self, sc: &ScenarioConfig, value: f64) -> Result<ScenarioConfig> {
        let integral = |name: &str| -> Result<usize> {
            if value.fract() != 0.0 || value < 1.0 {
                return Err(Error::InvalidArgument(format!(
                    "{name} must be a positive integer, got {value}"
                )));
            }
            Ok(value as usize)
        };
        Ok(match self {
            SweepParam::RhoDdbm => sc.clone().with_rho_d_dbm(value),
            SweepParam::Upsilon => {
                if !(value >= 0.0) {
                    return Err(Error::InvalidArgument(format!(
                        "upsilon must be >= 0, got {value}"
                    )));
                }
                sc.clone().with_upsilon(value)
            }
            SweepParam::MElements => sc.clone().with_m_elements(integral("m")?),
            SweepParam::NAntennas => sc.clone().with_n_antennas(integral("n")?),
            SweepParam::RicianV => {
                let v = if value.is_infinite() {
                    crate::channel::RicianK::Infinite
                } else if value >= 0.0 {
                    crate::channel::RicianK::Finite(value)
                } else {
                    return Err(Error::InvalidArgument(format!(
                        "Rician factor must be >= 0 or inf, got {value}"
                    )));
                };
                sc.clone().with_rician_all(v)
            }
            SweepParam::RateTarget => sc.clone(),
        })
    }
}

/// Sweep spec: a parameter and the values to take, in output order.
#[derive(Debug, Clone)]
pub struct SweepSpec {
    pub param: SweepParam,
    pub values: Vec<f64>,
}

/// Evaluate a sweep. Rate-style parameters produce closed-form and Monte
/// Carlo sum rates; `rate_target` produces power-control rows.
pub fn run_sweep(sc: &ScenarioConfig, spec: &SweepSpec, cfg: &McConfig) -> Result<String> {
    if spec.values.is_empty() {
        return Err(Error::InvalidArgument("the sweep value list is empty".into()));
    }
    let mut values = spec.values.clone();
    values.sort_by(|a, b| a.partial_cmp(b).unwrap());

    if spec.param == SweepParam::RateTarget {
        return Ok(run_power_control(sc, &values)?.csv);
    }

    let rows = collect_rows(&values, |value| {
        let point = spec.param.apply(sc, value)?;
        let (cf, mc) = rate_pair(&point, cfg)?;
        Ok(vec![fmt_param(value), fmt_rate(cf), fmt_rate(mc)])
    })?;
    let mut csv = Csv::new(&header(&[spec.param.column(), "closed_form", "monte_carlo"]));
    rows.iter().for_each(|r| csv.push_row(r));
    Ok(csv.finish())
}

#[cfg(test)]
mod tests {
    use super::*;

    fn small_opts() -> PresetOptions {
        PresetOptions {
            seed: Some(3),
            mc_loc: Some(4),
            mc_fade: Some(20),
            mode: None,
        }
    }

    #[test]
    fn analyze_document_shape() {
        let csv = run_analyze(&ScenarioConfig::table1()).unwrap();
        let mut lines = csv.lines();
        assert_eq!(lines.next().unwrap(), "quantity,value");
        // 4 a + 4 b + 16 c + 4 rate + 1 sum.
        assert_eq!(csv.lines().count(), 1 + 29);
        assert!(csv.ends_with("\r\n"));
        assert!(csv.contains("sum_rate"));
    }

    #[test]
    fn compare_document_has_gap_column() {
        let sc = ScenarioConfig::table1();
        let cfg = McConfig::new(3, 20, 5);
        let csv = run_compare(&sc, &cfg).unwrap();
        assert!(csv.starts_with("quantity,closed_form,monte_carlo,rel_gap\r\n"));
    }

    #[test]
    fn power_document_renders_edge_cells() {
        let sc = ScenarioConfig::table1();
        let run = run_power_control(&sc, &[0.0, 2.0, 25.0]).unwrap();
        let lines: Vec<&str> = run.csv.lines().collect();
        assert_eq!(lines[0], "rate_target,total_dbm,p_1_watts,p_2_watts,p_3_watts,p_4_watts");
        assert!(lines[1].starts_with("0,0 W,"), "{}", lines[1]);
        assert!(lines[3].contains("infeasible"), "{}", lines[3]);
        assert!(run.any_infeasible);
    }

    #[test]
    fn power_rows_monotone_until_infeasible() {
        let sc = ScenarioConfig::table1();
        let run = run_power_control(&sc, &[0.5, 1.0, 1.5, 2.0, 2.5]).unwrap();
        let mut last = f64::NEG_INFINITY;
        for line in run.csv.lines().skip(1) {
            let total = line.split(',').nth(1).unwrap();
            if total == "infeasible" {
                break;
            }
            let dbm: f64 = total.parse().unwrap();
            assert!(dbm >= last, "{}", run.csv);
            last = dbm;
        }
    }

    #[test]
    fn unknown_preset_is_usage_error() {
        let err = run_preset("fig9", &PresetOptions::default()).unwrap_err();
        assert!(matches!(err, Error::InvalidArgument(_)));
    }

    #[test]
    fn preset_fig2_deterministic_and_well_formed() {
        let a = run_preset("fig2", &small_opts()).unwrap();
        let b = run_preset("fig2", &small_opts()).unwrap();
        assert_eq!(a, b);
        assert!(a.starts_with("rho_d_dbm,"));
        assert_eq!(a.lines().count(), 10);
    }

    #[test]
    fn sweep_orders_rows_by_value() {
        let sc = ScenarioConfig::table1();
        let cfg = McConfig::new(2, 10, 5);
        let spec = SweepSpec {
            param: SweepParam::Upsilon,
            values: vec![2.0, 0.5, 1.0],
        };
        let csv = run_sweep(&sc, &spec, &cfg).unwrap();
        let firsts: Vec<&str> = csv
            .lines()
            .skip(1)
            .map(|l| l.split(',').next().unwrap())
            .collect();
        assert_eq!(firsts, vec!["0.5", "1", "2"]);
    }

    #[test]
    fn sweep_rejects_bad_values() {
        let sc = ScenarioConfig::table1();
        let cfg = McConfig::new(1, 1, 5);
        let spec = SweepSpec {
            param: SweepParam::MElements,
            values: vec![2.5],
        };
        assert!(run_sweep(&sc, &spec, &cfg).is_err());
        assert!(SweepParam::parse("bandwidth").is_err());
    }
}
