//! Minimum-power allocation under per-user rate constraints.
//!
//! The rate constraint `R_k >= target` is linear in the per-user powers once
//! the breakdown is expressed through per-watt coefficients, so the whole
//! problem is a K-variable linear program: minimize total power subject to
//! one inequality per user and nonnegativity. The solver is a dense
//! two-phase simplex with Bland's rule; the problems are tiny and cycling
//! freedom matters more than speed.

use crate::error::{Error, Result};
use crate::rate::per_watt_coefficients;
use crate::scenario::ScenarioConfig;

/// Per-watt rate-breakdown coefficients: `A_k = a_bar[k] p_k`,
/// `C[k][i] = c_bar[k][i] p_i`, `b_bar[k] = c_bar[k][k] - a_bar[k]`.
#[derive(Debug, Clone)]
pub struct UnitCoeffs {
    pub a_bar: Vec<f64>,
    pub b_bar: Vec<f64>,
    pub c_bar: Vec<Vec<f64>>,
}

/// Strip the power factors out of the closed-form breakdown.
pub fn per_unit_coeffs(sc: &ScenarioConfig) -> Result<UnitCoeffs> {
    let t = sc.tables()?;
    let coeffs = per_watt_coefficients(&t)?;
    let b_bar = (0..t.num_users)
        .map(|k| coeffs.c_bar[k][k] - coeffs.a_bar[k])
        .collect();
    Ok(UnitCoeffs {
        a_bar: coeffs.a_bar,
        b_bar,
        c_bar: coeffs.c_bar,
    })
}

/// The LP in constraint form: row k demands `d_bar[k] . p + rhs[k] <= 0`.
#[derive(Debug, Clone)]
pub struct LpProblem {
    pub d_bar: Vec<Vec<f64>>,
    /// (2^target - 1) * noise, watts.
    pub rhs: Vec<f64>,
    /// Requested per-user rates, bits/s/Hz.
    pub targets: Vec<f64>,
}

/// Assemble the constraint rows for the given rate targets.
pub fn build_lp(coeffs: &UnitCoeffs, targets: &[f64], noise: f64) -> LpProblem {
    let k_users = coeffs.a_bar.len();
    assert_eq!(targets.len(), k_users);
    let mut d_bar = vec![vec![0.0; k_users]; k_users];
    let mut rhs = vec![0.0; k_users];
    for k in 0..k_users {
        let gamma = (2f64.powf(targets[k]) - 1.0).max(0.0);
        for i in 0..k_users {
            d_bar[k][i] = if i == k {
                gamma * coeffs.b_bar[k] - coeffs.a_bar[k]
            } else {
                gamma * coeffs.c_bar[k][i]
            };
        }
        rhs[k] = gamma * noise;
    }
    LpProblem {
        d_bar,
        rhs,
        targets: targets.to_vec(),
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum SolveStatus {
    Optimal,
    Infeasible,
}

/// Solver output. When infeasible, the powers are zero and `total` is zero.
#[derive(Debug, Clone)]
pub struct PowerAllocation {
    /// Per-user transmit powers, watts.
    pub p: Vec<f64>,
    /// Total transmit power, watts.
    pub total: f64,
    pub status: SolveStatus,
}

const RC_EPS: f64 = 1e-10;
const PIVOT_EPS: f64 = 1e-11;
const MAX_PIVOTS: usize = 100_000;

/// Minimize total power subject to the LP rows and `p >= 0`.
pub fn solve_min_power(lp: &LpProblem) -> Result<PowerAllocation> {
    let k_users = lp.rhs.len();
    if lp.d_bar.len() != k_users || lp.d_bar.iter().any(|r| r.len() != k_users) {
        return Err(Error::InvalidArgument(
            "LP constraint matrix must be K x K".into(),
        ));
    }
    let infeasible = || PowerAllocation {
        p: vec![0.0; k_users],
        total: 0.0,
        status: SolveStatus::Infeasible,
    };

    // Rewrite row k as g . p >= h with h >= 0, equilibrated to unit row
    // scale so the pivot tolerances are meaningful across the wildly mixed
    // magnitudes of channel gains and noise.
    let mut rows: Vec<(Vec<f64>, f64)> = Vec::with_capacity(k_users);
    for k in 0..k_users {
        let g: Vec<f64> = lp.d_bar[k].iter().map(|&v| -v).collect();
        let h = lp.rhs[k];
        if !g.iter().all(|v| v.is_finite()) || !h.is_finite() {
            return Err(Error::InvalidArgument(
                "LP coefficients must be finite".into(),
            ));
        }
        let scale = g.iter().fold(0.0f64, |m, v| m.max(v.abs()));
        if scale == 0.0 {
            if h > 0.0 {
                return Ok(infeasible());
            }
            continue; // 0 >= h with h <= 0: trivially satisfied
        }
        rows.push((g.iter().map(|v| v / scale).collect(), h / scale));
    }

    let m = rows.len();
    if m == 0 {
        return Ok(PowerAllocation {
            p: vec![0.0; k_users],
            total: 0.0,
            status: SolveStatus::Optimal,
        });
    }

    // Columns: K powers, m surplus, m artificial, then the rhs.
    let num_cols = k_users + 2 * m;
    let rhs_col = num_cols;
    let mut tab = vec![vec![0.0; num_cols + 1]; m];
    let mut basis = vec![0usize; m];
    for (r, (g, h)) in rows.iter().enumerate() {
        tab[r][..k_users].copy_from_slice(g);
        tab[r][k_users + r] = -1.0;
        tab[r][k_users + m + r] = 1.0;
        tab[r][rhs_col] = *h;
        basis[r] = k_users + m + r;
    }

    // Phase 1: minimize the artificial sum.
    let mut cost1 = vec![0.0; num_cols];
    for j in k_users + m..num_cols {
        cost1[j] = 1.0;
    }
    let phase1 = simplex(&mut tab, &mut basis, &cost1, num_cols)?;
    let h_norm: f64 = rows.iter().map(|(_, h)| h.abs()).sum();
    if phase1 > 1e-9 * (1.0 + h_norm) {
        return Ok(infeasible());
    }
    // Drive leftover artificials out of the basis where a pivot exists; a
    // fully zero row can keep its artificial (it stays at level zero and
    // artificial columns are blocked below).
    for r in 0..m {
        if basis[r] >= k_users + m {
            if let Some(j) = (0..k_users + m).find(|&j| tab[r][j].abs() > PIVOT_EPS) {
                pivot(&mut tab, &mut basis, r, j);
            }
        }
    }

    // Phase 2: minimize total power, artificial columns blocked.
    let mut cost2 = vec![0.0; num_cols];
    for j in 0..k_users {
        cost2[j] = 1.0;
    }
    simplex(&mut tab, &mut basis, &cost2, k_users + m)?;

    let mut p = vec![0.0; k_users];
    for r in 0..m {
        if basis[r] < k_users {
            p[basis[r]] = tab[r][rhs_col].max(0.0);
        }
    }
    let total = p.iter().sum();
    Ok(PowerAllocation {
        p,
        total,
        status: SolveStatus::Optimal,
    })
}

fn pivot(tab: &mut [Vec<f64>], basis: &mut [usize], row: usize, col: usize) {
    let inv = 1.0 / tab[row][col];
    for v in tab[row].iter_mut() {
        *v *= inv;
    }
    tab[row][col] = 1.0;
    let pivot_row = tab[row].clone();
    for (r, tab_row) in tab.iter_mut().enumerate() {
        if r == row {
            continue;
        }
        let factor = tab_row[col];
        if factor != 0.0 {
            for (v, pv) in tab_row.iter_mut().zip(&pivot_row) {
                *v -= factor * pv;
            }
            tab_row[col] = 0.0;
        }
    }
    basis[row] = col;
}

/// Bland-rule simplex over the columns `0..num_allowed`; returns the final
/// objective value.
fn simplex(
    tab: &mut [Vec<f64>],
    basis: &mut [usize],
    cost: &[f64],
    num_allowed: usize,
) -> Result<f64> {
    let m = tab.len();
    let rhs_col = tab[0].len() - 1;
    for _ in 0..MAX_PIVOTS {
        // Reduced costs from scratch; the tableaus are tiny.
        let mut entering = None;
        for j in 0..num_allowed {
            if basis.contains(&j) {
                continue;
            }
            let mut rc = cost[j];
            for r in 0..m {
                rc -= cost[basis[r]] * tab[r][j];
            }
            if rc < -RC_EPS {
                entering = Some(j);
                break; // Bland: lowest-index improving column
            }
        }
        let Some(col) = entering else {
            let obj = (0..m).map(|r| cost[basis[r]] * tab[r][rhs_col]).sum();
            return Ok(obj);
        };
        let mut leaving: Option<(usize, f64)> = None;
        for r in 0..m {
            if tab[r][col] > PIVOT_EPS {
                let ratio = tab[r][rhs_col] / tab[r][col];
                let better = match leaving {
                    None => true,
                    // Bland tie-break: lowest basic-variable index.
                    Some((best_r, best)) => {
                        ratio < best - PIVOT_EPS
                            || (ratio <= best + PIVOT_EPS && basis[r] < basis[best_r])
                    }
                };
                if better {
                    leaving = Some((r, ratio));
                }
            }
        }
        let Some((row, _)) = leaving else {
            // The objective is a sum of nonnegative variables; an unbounded
            // direction means corrupted inputs.
            return Err(Error::Internal(
                "LP unbounded below, which this problem family cannot be".into(),
            ));
        };
        pivot(tab, basis, row, col);
    }
    Err(Error::Internal("simplex failed to terminate".into()))
}

/// Apply an optional total-power ceiling. Because the ceiling bounds the
/// objective itself, comparing the unconstrained optimum against it is
/// exact: the capped problem is feasible iff the optimal total fits.
pub fn enforce_power_cap(alloc: PowerAllocation, cap_watts: Option<f64>) -> PowerAllocation {
    match (alloc.status, cap_watts) {
        (SolveStatus::Optimal, Some(cap)) if alloc.total > cap => PowerAllocation {
            p: vec![0.0; alloc.p.len()],
            total: 0.0,
            status: SolveStatus::Infeasible,
        },
        _ => alloc,
    }
}

/// Result of the common-rate bisection.
#[derive(Debug, Clone, Copy)]
pub struct CommonRateSearch {
    /// Largest feasible common rate found, bits/s/Hz.
    pub rate: f64,
    /// True when the search ceiling itself is feasible (interference-free
    /// systems have no finite threshold).
    pub at_ceiling: bool,
}

pub const DEFAULT_RATE_CEILING: f64 = 30.0;

/// Bisect for the largest common rate target that keeps the power-control
/// problem feasible. Feasibility is monotone in the target: raising it only
/// shrinks the feasible set.
pub fn max_feasible_common_rate(sc: &ScenarioConfig, tol: f64) -> Result<CommonRateSearch> {
    max_feasible_common_rate_with_ceiling(sc, tol, DEFAULT_RATE_CEILING)
}

pub fn max_feasible_common_rate_with_ceiling(
    sc: &ScenarioConfig,
    tol: f64,
    ceiling: f64,
) -> Result<CommonRateSearch> {
    if !(tol > 0.0) {
        return Err(Error::InvalidArgument(format!(
            "bisection tolerance must be positive, got {tol}"
        )));
    }
    let coeffs = per_unit_coeffs(sc)?;
    let noise = sc.noise_watts();
    let cap = sc.rho_d_cap_watts();
    let k_users = coeffs.a_bar.len();
    let feasible = |rate: f64| -> Result<bool> {
        let lp = build_lp(&coeffs, &vec![rate; k_users], noise);
        let sol = enforce_power_cap(solve_min_power(&lp)?, cap);
        Ok(sol.status == SolveStatus::Optimal)
    };
    if !feasible(0.0)? {
        return Err(Error::Internal(
            "zero-rate targets must always be feasible".into(),
        ));
    }
    if feasible(ceiling)? {
        return Ok(CommonRateSearch {
            rate: ceiling,
            at_ceiling: true,
        });
    }
    let (mut lo, mut hi) = (0.0, ceiling);
    while hi - lo > tol {
        let mid = 0.5 * (lo + hi);
        if feasible(mid)? {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    Ok(CommonRateSearch {
        rate: lo,
        at_ceiling: false,
    })
}
