//! Closed-form achievable-rate evaluation.
//!
//! The rate bound treats the mean effective gain as the known signal and all
//! deviation from it as noise: per user the breakdown is desired power `A`,
//! leakage `B`, and interference `C`, with
//! `R = log2(1 + A / (B + sum C + noise))`. The mean over location error
//! enters through the correlation kernels of [`crate::geometry`]; the mean
//! over NLOS fading enters through the four LOS/NLOS power combinations of
//! the two hops.
//!
//! Evaluation cost: per user the same-IRS double sums collapse over the
//! element-index difference (O(M) kernel evaluations), while the cross-IRS
//! terms need the full O(K^2 M^2) lattice; those correlation tables are
//! built once per scenario and reused for every interfering beam.

use crate::channel::{steering_inner, FadingParams};
use crate::error::{Error, Result};
use crate::geometry::{zeta_cross, zeta_kernel, LinkGeometry};
use crate::scenario::{ScenarioConfig, ScenarioTables};
use num_complex::Complex64;
use std::f64::consts::PI;

/// LOS power gain of the cascaded BS-IRS-user link.
#[derive(Debug, Clone, Copy)]
pub struct CascadedGain {
    pub beta: f64,
}

/// beta = alpha1 alpha2 v1 v2 / ((v1+1)(v2+1)); with both factors infinite
/// this is exactly alpha1 alpha2.
pub fn beta_cascaded(b2i: &FadingParams, i2u: &FadingParams) -> CascadedGain {
    CascadedGain {
        beta: b2i.alpha
            * i2u.alpha
            * b2i.rician_k.los_fraction()
            * i2u.rician_k.los_fraction(),
    }
}

/// Per-user rate breakdown, all powers in watts.
#[derive(Debug, Clone)]
pub struct RateBreakdown {
    /// Desired signal power A_k.
    pub a: Vec<f64>,
    /// Leakage power B_k.
    pub b: Vec<f64>,
    /// Interference C[k][i] at user k from beam i; C[k][k] is the total
    /// second moment of the own-beam gain.
    pub c: Vec<Vec<f64>>,
    /// Achievable rate, bits/s/Hz.
    pub rate: Vec<f64>,
}

/// Sum rate over users, bits/s/Hz.
pub fn sum_rate(breakdown: &RateBreakdown) -> f64 {
    breakdown.rate.iter().sum()
}

/// Dirichlet-kernel power ratio |a^T(theta_1) a*(theta_2)|^2 on the user
/// side of an IRS: M^2 when the two users sit in the same direction, 0 at
/// the kernel nulls.
pub fn interference_alignment_factor(
    geom_i_to_k: &LinkGeometry,
    geom_i_to_i: &LinkGeometry,
    m_elements: usize,
) -> f64 {
    steering_inner(m_elements, geom_i_to_k.cos_y, geom_i_to_i.cos_y).norm_sqr()
}

// ── Shared per-scenario tables ──────────────────────────────────────────────

/// Per-watt coefficients: A_k = a_bar[k] * p_k and C[k][i] = c_bar[k][i] * p_i
/// with p_i = eta_i * rho_d.
pub(crate) struct PerWattCoeffs {
    pub a_bar: Vec<f64>,
    pub c_bar: Vec<Vec<f64>>,
}

struct LinkPowers {
    /// LOS x LOS cascade gain (beta).
    los_los: f64,
    /// LOS (BS hop) x NLOS (user hop), i.e. beta / v_i2u.
    los_nlos: f64,
    /// NLOS x NLOS, i.e. beta / (v_b2i v_i2u).
    nlos_nlos: f64,
    /// NLOS (BS hop) x LOS (user hop), i.e. beta / v_b2i.
    nlos_los: f64,
}

impl LinkPowers {
    fn new(b2i: &FadingParams, i2u: &FadingParams) -> Self {
        let base = b2i.alpha * i2u.alpha;
        let (l1, n1) = (b2i.rician_k.los_fraction(), b2i.rician_k.nlos_fraction());
        let (l2, n2) = (i2u.rician_k.los_fraction(), i2u.rician_k.nlos_fraction());
        LinkPowers {
            los_los: base * l1 * l2,
            los_nlos: base * l1 * n2,
            nlos_nlos: base * n1 * n2,
            nlos_los: base * n1 * l2,
        }
    }
}

/// Correlation and steering tables shared by the full and simplified
/// evaluations, built once per scenario.
struct RateTables {
    powers: Vec<Vec<LinkPowers>>,
    /// BS-side steering inner product between IRS m and the beam of user i.
    inner_bs: Vec<Vec<Complex64>>,
    /// Mean LOS factor per (m, k): sum_s zeta_s e^{j pi (s-1) delta}, with
    /// delta the estimated-angle gap seen by IRS m between user k and its
    /// own user.
    f_mean: Vec<Vec<Complex64>>,
    /// Same-IRS second-moment factor per (m, k), collapsed over s - l.
    s_second: Vec<Vec<f64>>,
    /// Cross-IRS factor per (m, n, k), m != n; the full element lattice.
    t_cross: Vec<Vec<Vec<Complex64>>>,
}

impl RateTables {
    fn build(t: &ScenarioTables) -> Self {
        let k_users = t.num_users;
        let n = t.n_antennas;
        let m_elems = t.m_elements;
        let powers: Vec<Vec<LinkPowers>> = (0..k_users)
            .map(|m| {
                (0..k_users)
                    .map(|k| LinkPowers::new(&t.fading_b2i[m], &t.fading_i2u[m][k]))
                    .collect()
            })
            .collect();
        let inner_bs: Vec<Vec<Complex64>> = (0..k_users)
            .map(|m| {
                (0..k_users)
                    .map(|i| {
                        steering_inner(n, t.angles[m].aod, t.angles[t.irs_of_user[i]].aod)
                    })
                    .collect()
            })
            .collect();
        let delta: Vec<Vec<f64>> = (0..k_users)
            .map(|m| {
                let own = t.geo[m][t.user_of_irs[m]].cos_y;
                (0..k_users).map(|k| t.geo[m][k].cos_y - own).collect()
            })
            .collect();

        let mut f_mean = vec![vec![Complex64::default(); k_users]; k_users];
        let mut s_second = vec![vec![0.0; k_users]; k_users];
        for m in 0..k_users {
            for k in 0..k_users {
                let g = &t.geo[m][k];
                let step = PI * g.phi * t.upsilon / g.d_hat;
                let mut f = Complex64::default();
                for s in 0..m_elems {
                    f += zeta_kernel(step * s as f64)
                        * Complex64::from_polar(1.0, PI * s as f64 * delta[m][k]);
                }
                f_mean[m][k] = f;
                let mut s2 = m_elems as f64;
                for d in 1..m_elems {
                    s2 += 2.0
                        * (m_elems - d) as f64
                        * zeta_kernel(step * d as f64)
                        * (PI * d as f64 * delta[m][k]).cos();
                }
                s_second[m][k] = s2;
            }
        }

        let mut t_cross =
            vec![vec![vec![Complex64::default(); k_users]; k_users]; k_users];
        for m in 0..k_users {
            for nn in 0..k_users {
                if nn == m {
                    continue;
                }
                for k in 0..k_users {
                    let mut acc = Complex64::default();
                    for s in 0..m_elems {
                        for l in 0..m_elems {
                            let z = zeta_cross(
                                &t.geo[m][k],
                                &t.geo[nn][k],
                                t.upsilon,
                                s + 1,
                                l + 1,
                            );
                            let phase = PI
                                * (s as f64 * delta[m][k] - l as f64 * delta[nn][k]);
                            acc += z * Complex64::from_polar(1.0, phase);
                        }
                    }
                    t_cross[m][nn][k] = acc;
                }
            }
        }

        RateTables {
            powers,
            inner_bs,
            f_mean,
            s_second,
            t_cross,
        }
    }

    fn beta(&self, m: usize, k: usize) -> f64 {
        self.powers[m][k].los_los
    }
}

pub(crate) fn per_watt_coefficients(t: &ScenarioTables) -> Result<PerWattCoeffs> {
    let tables = RateTables::build(t);
    let k_users = t.num_users;
    let n = t.n_antennas as f64;
    let m_elems = t.m_elements as f64;

    let mut a_bar = vec![0.0; k_users];
    for k in 0..k_users {
        let mut acc = Complex64::default();
        for m in 0..k_users {
            acc += tables.beta(m, k).sqrt() * tables.inner_bs[m][k] * tables.f_mean[m][k];
        }
        a_bar[k] = acc.norm_sqr() / n;
        if !a_bar[k].is_finite() {
            return Err(Error::Numerical(format!(
                "desired-power coefficient for user {k} is not finite"
            )));
        }
    }

    let mut c_bar = vec![vec![0.0; k_users]; k_users];
    for k in 0..k_users {
        for i in 0..k_users {
            let mut real_part = 0.0;
            for m in 0..k_users {
                let p = &tables.powers[m][k];
                let gain2 = tables.inner_bs[m][i].norm_sqr();
                real_part += m_elems * p.los_nlos * gain2
                    + m_elems * n * p.nlos_nlos
                    + m_elems * n * p.nlos_los;
                real_part += p.los_los * gain2 * tables.s_second[m][k];
            }
            let mut cross = Complex64::default();
            for m in 0..k_users {
                for nn in 0..k_users {
                    if nn == m {
                        continue;
                    }
                    cross += tables.inner_bs[m][i]
                        * tables.inner_bs[nn][i].conj()
                        * (tables.beta(m, k) * tables.beta(nn, k)).sqrt()
                        * tables.t_cross[m][nn][k];
                }
            }
            // The cross sum is analytically real (each (m, n) term pairs
            // with its conjugate (n, m) term); anything beyond rounding
            // indicates a bug.
            let scale = real_part.abs() + cross.re.abs() + 1e-300;
            if cross.im.abs() > 1e-9 * scale {
                return Err(Error::Numerical(format!(
                    "interference C[{k}][{i}] kept an imaginary residue of {}",
                    cross.im
                )));
            }
            c_bar[k][i] = (real_part + cross.re) / n;
            if !c_bar[k][i].is_finite() {
                return Err(Error::Numerical(format!(
                    "interference coefficient C[{k}][{i}] is not finite"
                )));
            }
        }
    }
    Ok(PerWattCoeffs { a_bar, c_bar })
}

fn assemble(a: Vec<f64>, b: Vec<f64>, c: Vec<Vec<f64>>, noise: f64) -> RateBreakdown {
    let k_users = a.len();
    let rate = (0..k_users)
        .map(|k| {
            let interference: f64 = (0..k_users)
                .filter(|&i| i != k)
                .map(|i| c[k][i])
                .sum();
            (1.0 + a[k] / (b[k] + interference + noise)).log2()
        })
        .collect();
    RateBreakdown { a, b, c, rate }
}

/// Full closed-form breakdown of the achievable rate for a scenario.
pub fn closed_form_breakdown(sc: &ScenarioConfig) -> Result<RateBreakdown> {
    let t = sc.tables()?;
    let coeffs = per_watt_coefficients(&t)?;
    let k_users = t.num_users;
    let a: Vec<f64> = (0..k_users)
        .map(|k| coeffs.a_bar[k] * t.eta[k] * t.rho_d)
        .collect();
    let c: Vec<Vec<f64>> = (0..k_users)
        .map(|k| {
            (0..k_users)
                .map(|i| coeffs.c_bar[k][i] * t.eta[i] * t.rho_d)
                .collect()
        })
        .collect();
    let b: Vec<f64> = (0..k_users).map(|k| c[k][k] - a[k]).collect();
    Ok(assemble(a, b, c, t.noise))
}

/// Simplified regimes of the closed form.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum CorollaryVariant {
    /// Interference-free IRS directions relative to the BS.
    Orthogonal,
    /// Zero location uncertainty (also assumes orthogonal directions).
    PerfectLocation,
    /// Reflecting-element count grows without bound; noise dropped.
    LargeM,
    /// Antenna count grows without bound; noise dropped.
    LargeN,
    /// Pure LOS on every link.
    NoNlos,
}

/// Structural checks behind each simplified regime. Violations do not stop
/// the evaluation (the formulas are approximations either way); callers may
/// surface these to the user.
pub fn corollary_precondition_warnings(
    sc: &ScenarioConfig,
    variant: CorollaryVariant,
) -> Vec<String> {
    let mut warnings = Vec::new();
    let Ok(t) = sc.tables() else {
        return warnings;
    };
    let check_orthogonal = |warnings: &mut Vec<String>| {
        let mut worst = 0.0f64;
        for m in 0..t.num_users {
            for i in 0..t.num_users {
                if t.irs_of_user[i] != m {
                    worst = worst.max(
                        steering_inner(t.n_antennas, t.angles[m].aod, t.angles[t.irs_of_user[i]].aod)
                            .norm(),
                    );
                }
            }
        }
        if worst > 1e-6 * t.n_antennas as f64 {
            warnings.push(format!(
                "IRS directions are not interference-free: worst cross inner product {worst:.3e}"
            ));
        }
    };
    match variant {
        CorollaryVariant::Orthogonal => check_orthogonal(&mut warnings),
        CorollaryVariant::PerfectLocation => {
            check_orthogonal(&mut warnings);
            if t.upsilon > 0.0 {
                warnings.push(format!(
                    "location uncertainty is {} m, the formula assumes 0",
                    t.upsilon
                ));
            }
        }
        CorollaryVariant::LargeM | CorollaryVariant::LargeN => {
            check_orthogonal(&mut warnings);
            if t.upsilon > 0.0 {
                warnings.push(format!(
                    "location uncertainty is {} m, the formula assumes 0",
                    t.upsilon
                ));
            }
        }
        CorollaryVariant::NoNlos => {
            check_orthogonal(&mut warnings);
            if t.upsilon > 0.0 {
                warnings.push(format!(
                    "location uncertainty is {} m, the formula assumes 0",
                    t.upsilon
                ));
            }
            let finite = t
                .fading_b2i
                .iter()
                .map(|f| f.rician_k)
                .chain(t.fading_i2u.iter().flatten().map(|f| f.rician_k))
                .any(|v| !v.is_infinite());
            if finite {
                warnings.push("some links carry NLOS power, the formula assumes pure LOS".into());
            }
        }
    }
    warnings
}

/// Evaluate one of the simplified regimes, verbatim including the terms each
/// regime drops (the asymptotic regimes also drop the noise floor), so the
/// gap to [`closed_form_breakdown`] measures the approximation itself.
pub fn rate_corollary(sc: &ScenarioConfig, variant: CorollaryVariant) -> Result<RateBreakdown> {
    let t = sc.tables()?;
    let tables = RateTables::build(&t);
    let k_users = t.num_users;
    let n = t.n_antennas as f64;
    let m_elems = t.m_elements as f64;
    let p: Vec<f64> = (0..k_users).map(|k| t.eta[k] * t.rho_d).collect();
    let own = |i: usize| t.irs_of_user[i];

    // Per-user NLOS floor shared by several regimes: sum over IRSs of the
    // mixed-hop powers.
    let mixed_floor: Vec<f64> = (0..k_users)
        .map(|k| {
            (0..k_users)
                .map(|m| tables.powers[m][k].nlos_nlos + tables.powers[m][k].nlos_los)
                .sum()
        })
        .collect();
    let alignment = |i: usize, k: usize| -> f64 {
        interference_alignment_factor(
            &t.geo[own(i)][k],
            &t.geo[own(i)][t.user_of_irs[own(i)]],
            t.m_elements,
        )
    };

    let breakdown = match variant {
        CorollaryVariant::Orthogonal => {
            let a: Vec<f64> = (0..k_users)
                .map(|k| n * p[k] * tables.beta(own(k), k) * tables.f_mean[own(k)][k].norm_sqr())
                .collect();
            let c: Vec<Vec<f64>> = (0..k_users)
                .map(|k| {
                    (0..k_users)
                        .map(|i| {
                            n * m_elems * p[i] * tables.powers[own(i)][k].los_nlos
                                + m_elems * p[i] * mixed_floor[k]
                                + n * p[i]
                                    * tables.beta(own(i), k)
                                    * tables.s_second[own(i)][k]
                        })
                        .collect()
                })
                .collect();
            let b: Vec<f64> = (0..k_users).map(|k| c[k][k] - a[k]).collect();
            assemble(a, b, c, t.noise)
        }
        CorollaryVariant::PerfectLocation => {
            let a: Vec<f64> = (0..k_users)
                .map(|k| n * m_elems * m_elems * p[k] * tables.beta(own(k), k))
                .collect();
            let c: Vec<Vec<f64>> = (0..k_users)
                .map(|k| {
                    (0..k_users)
                        .map(|i| {
                            n * m_elems * p[i] * tables.powers[own(i)][k].los_nlos
                                + m_elems * p[i] * mixed_floor[k]
                                + n * p[i] * tables.beta(own(i), k) * alignment(i, k)
                        })
                        .collect()
                })
                .collect();
            let b: Vec<f64> = (0..k_users).map(|k| c[k][k] - a[k]).collect();
            assemble(a, b, c, t.noise)
        }
        CorollaryVariant::LargeM => {
            let a: Vec<f64> = (0..k_users)
                .map(|k| n * m_elems * m_elems * p[k] * tables.beta(own(k), k))
                .collect();
            let b: Vec<f64> = (0..k_users)
                .map(|k| {
                    n * m_elems * p[k] * tables.powers[own(k)][k].los_nlos
                        + m_elems * p[k] * mixed_floor[k]
                })
                .collect();
            let mut c = vec![vec![0.0; k_users]; k_users];
            for k in 0..k_users {
                for i in 0..k_users {
                    if i == k {
                        c[k][i] = a[k] + b[k];
                    } else {
                        c[k][i] = n * m_elems * p[i] * tables.powers[own(i)][k].los_nlos
                            + m_elems * p[i] * mixed_floor[k];
                    }
                }
            }
            assemble(a, b, c, 0.0)
        }
        CorollaryVariant::LargeN => {
            let a: Vec<f64> = (0..k_users)
                .map(|k| n * m_elems * m_elems * p[k] * tables.beta(own(k), k))
                .collect();
            let b: Vec<f64> = (0..k_users)
                .map(|k| n * m_elems * p[k] * tables.powers[own(k)][k].los_nlos)
                .collect();
            let mut c = vec![vec![0.0; k_users]; k_users];
            for k in 0..k_users {
                for i in 0..k_users {
                    if i == k {
                        c[k][i] = a[k] + b[k];
                    } else {
                        c[k][i] = n * m_elems * p[i] * tables.powers[own(i)][k].los_nlos
                            + n * p[i] * tables.beta(own(i), k) * alignment(i, k);
                    }
                }
            }
            assemble(a, b, c, 0.0)
        }
        CorollaryVariant::NoNlos => {
            let a: Vec<f64> = (0..k_users)
                .map(|k| n * m_elems * m_elems * p[k] * tables.beta(own(k), k))
                .collect();
            let b = vec![0.0; k_users];
            let mut c = vec![vec![0.0; k_users]; k_users];
            for k in 0..k_users {
                for i in 0..k_users {
                    if i == k {
                        c[k][i] = a[k];
                    } else {
                        c[k][i] = n * p[i] * tables.beta(own(i), k) * alignment(i, k);
                    }
                }
            }
            assemble(a, b, c, t.noise)
        }
    };
    Ok(breakdown)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::channel::RicianK;
    use crate::scenario::ScenarioConfig;

    fn rel_gap(a: f64, b: f64) -> f64 {
        (a - b).abs() / a.abs().max(b.abs()).max(1e-300)
    }

    #[test]
    fn beta_cascaded_cases() {
        let f = |alpha, k| FadingParams {
            alpha,
            rician_k: k,
        };
        let b = beta_cascaded(&f(0.2, RicianK::Infinite), &f(0.5, RicianK::Infinite));
        assert!((b.beta - 0.1).abs() < 1e-15);
        let b = beta_cascaded(&f(1.0, RicianK::Finite(5.0)), &f(1.0, RicianK::Finite(5.0)));
        assert!((b.beta - 25.0 / 36.0).abs() < 1e-15);
        let b = beta_cascaded(&f(1.0, RicianK::Finite(0.0)), &f(1.0, RicianK::Infinite));
        assert_eq!(b.beta, 0.0);
        let f1 = f(0.3, RicianK::Finite(4.0));
        let f2 = f(0.7, RicianK::Finite(9.0));
        assert!(beta_cascaded(&f1, &f2).beta <= f1.alpha * f2.alpha);
    }

    #[test]
    fn perfect_location_exact_single_user() {
        // Upsilon = 0, K = 1: A = N M^2 eta rho beta exactly.
        let sc = ScenarioConfig::orthogonal_directions(1, 5).with_upsilon(0.0);
        let t = sc.tables().unwrap();
        let bd = closed_form_breakdown(&sc).unwrap();
        let beta = beta_cascaded(&t.fading_b2i[0], &t.fading_i2u[0][0]).beta;
        let expected = 5.0 * 256.0 * t.eta[0] * t.rho_d * beta;
        assert!(rel_gap(bd.a[0], expected) < 1e-12, "{} vs {expected}", bd.a[0]);
        let c2 = rate_corollary(&sc, CorollaryVariant::PerfectLocation).unwrap();
        assert!(rel_gap(c2.a[0], expected) < 1e-12);
    }

    #[test]
    fn leakage_is_second_moment_minus_desired() {
        for upsilon in [0.0, 0.5, 2.0] {
            let sc = ScenarioConfig::table1().with_upsilon(upsilon);
            let bd = closed_form_breakdown(&sc).unwrap();
            for k in 0..4 {
                assert!(rel_gap(bd.b[k], bd.c[k][k] - bd.a[k]) < 1e-9);
                assert!(bd.a[k] >= 0.0);
                assert!(bd.b[k] >= -1e-9 * bd.c[k][k]);
                for i in 0..4 {
                    assert!(bd.c[k][i] >= -1e-9 * bd.c[k][k]);
                }
            }
        }
    }

    #[test]
    fn reference_deployment_reproduces_reported_sum_rates() {
        let sc = ScenarioConfig::table1()
            .with_rho_d_dbm(40.0)
            .with_upsilon(0.5);
        let sr = sum_rate(&closed_form_breakdown(&sc).unwrap());
        assert!((14.4..=17.6).contains(&sr), "sum rate {sr}");
        let sc = sc.with_upsilon(2.0);
        let sr = sum_rate(&closed_form_breakdown(&sc).unwrap());
        assert!((4.7..=6.3).contains(&sr), "sum rate {sr}");
    }

    #[test]
    fn orthogonal_regime_matches_full_form_at_null_spacings() {
        for upsilon in [0.0, 0.7, 2.0] {
            let sc = ScenarioConfig::orthogonal_directions(4, 5).with_upsilon(upsilon);
            let full = closed_form_breakdown(&sc).unwrap();
            let c1 = rate_corollary(&sc, CorollaryVariant::Orthogonal).unwrap();
            for k in 0..4 {
                assert!(rel_gap(full.a[k], c1.a[k]) < 1e-9);
                assert!(rel_gap(full.b[k], c1.b[k]) < 1e-9);
                assert!(rel_gap(full.rate[k], c1.rate[k]) < 1e-9);
                for i in 0..4 {
                    assert!(rel_gap(full.c[k][i], c1.c[k][i]) < 1e-9);
                }
            }
            assert!(corollary_precondition_warnings(&sc, CorollaryVariant::Orthogonal)
                .is_empty());
        }
    }

    #[test]
    fn full_form_converges_to_perfect_location_regime() {
        let sc = ScenarioConfig::orthogonal_directions(4, 5).with_upsilon(1e-6);
        let full = closed_form_breakdown(&sc).unwrap();
        let c2 = rate_corollary(&sc, CorollaryVariant::PerfectLocation).unwrap();
        for k in 0..4 {
            assert!(rel_gap(full.rate[k], c2.rate[k]) < 1e-6);
            assert!(rel_gap(full.a[k], c2.a[k]) < 1e-6);
        }
    }

    #[test]
    fn rate_increases_with_power() {
        let mut last = 0.0;
        for dbm in [10.0, 20.0, 30.0, 40.0] {
            let sc = ScenarioConfig::table1().with_rho_d_dbm(dbm);
            let sr = sum_rate(&closed_form_breakdown(&sc).unwrap());
            assert!(sr > last, "sum rate {sr} at {dbm} dBm not above {last}");
            last = sr;
        }
    }

    #[test]
    fn rate_increases_with_rician_factor() {
        let mut last_b2i = 0.0;
        let mut last_i2u = 0.0;
        for v in [1.0, 2.0, 5.0, 10.0, 100.0] {
            let mut sc = ScenarioConfig::table1();
            sc.v_b2i = vec![RicianK::Finite(v); 4];
            let sr = sum_rate(&closed_form_breakdown(&sc).unwrap());
            assert!(sr > last_b2i, "{sr} vs {last_b2i} at v_b2i={v}");
            last_b2i = sr;

            let mut sc = ScenarioConfig::table1();
            sc.v_i2u = vec![vec![RicianK::Finite(v); 4]; 4];
            let sr = sum_rate(&closed_form_breakdown(&sc).unwrap());
            assert!(sr > last_i2u, "{sr} vs {last_i2u} at v_i2u={v}");
            last_i2u = sr;
        }
    }

    #[test]
    fn alignment_factor_reference_points() {
        let g = |cos_y: f64| LinkGeometry {
            d_hat: 30.0,
            cos_x: 0.0,
            cos_y,
            cos_z: (1.0 - cos_y * cos_y).sqrt(),
            phi: 1.0,
        };
        let m = 16;
        let aligned = interference_alignment_factor(&g(0.3), &g(0.3), m);
        assert!((aligned - 256.0).abs() < 1e-9);
        let null = interference_alignment_factor(&g(0.3 + 2.0 / 16.0), &g(0.3), m);
        assert!(null < 1e-18);
        // Random gap against the direct phasor sum.
        for delta in [0.013, 0.21, 0.77] {
            let direct: Complex64 = (0..m)
                .map(|s| Complex64::from_polar(1.0, PI * s as f64 * delta))
                .sum();
            let got = interference_alignment_factor(&g(0.1 + delta), &g(0.1), m);
            assert!((got - direct.norm_sqr()).abs() < 1e-10);
        }
    }

    #[test]
    fn sum_rate_trivia() {
        let zero = RateBreakdown {
            a: vec![0.0; 3],
            b: vec![0.0; 3],
            c: vec![vec![0.0; 3]; 3],
            rate: vec![0.0; 3],
        };
        assert_eq!(sum_rate(&zero), 0.0);
        let sc = ScenarioConfig::orthogonal_directions(1, 5);
        let bd = closed_form_breakdown(&sc).unwrap();
        assert_eq!(sum_rate(&bd), bd.rate[0]);
    }

    #[test]
    fn sum_rate_invariant_under_user_relabeling() {
        let base = ScenarioConfig::table1().with_upsilon(1.0);
        let mut rotated = base.clone();
        rotated.irs.rotate_left(1);
        rotated.users_est.rotate_left(1);
        let r_base = closed_form_breakdown(&base).unwrap();
        let r_rot = closed_form_breakdown(&rotated).unwrap();
        assert!(rel_gap(sum_rate(&r_base), sum_rate(&r_rot)) < 1e-12);
        for k in 0..4 {
            assert!(rel_gap(r_base.rate[(k + 1) % 4], r_rot.rate[k]) < 1e-12);
        }
    }

    #[test]
    fn corollary_warnings_flag_structural_violations() {
        let sc = ScenarioConfig::table1().with_upsilon(1.0);
        let w = corollary_precondition_warnings(&sc, CorollaryVariant::NoNlos);
        assert!(w.iter().any(|s| s.contains("NLOS")), "{w:?}");
        assert!(w.iter().any(|s| s.contains("uncertainty")), "{w:?}");
        let sc = ScenarioConfig::orthogonal_directions(2, 5)
            .with_upsilon(0.0)
            .with_rician_all(RicianK::Infinite);
        assert!(corollary_precondition_warnings(&sc, CorollaryVariant::NoNlos).is_empty());
    }

    #[test]
    fn no_nlos_single_user_sinr_is_quadratic_in_m() {
        let base = ScenarioConfig::orthogonal_directions(1, 5)
            .with_upsilon(0.0)
            .with_rician_all(RicianK::Infinite);
        let sinr = |m: usize| {
            let sc = base.clone().with_m_elements(m);
            let bd = closed_form_breakdown(&sc).unwrap();
            bd.a[0] / (bd.b[0] + sc.noise_watts())
        };
        let ratio = sinr(32) / sinr(16);
        assert!((ratio - 4.0).abs() < 1e-6, "ratio {ratio}");
    }
}
