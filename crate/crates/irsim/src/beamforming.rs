//! Transmit beams, conjugate phase-shift beams, and effective channel
//! composition.
//!
//! Beams are built from estimated angles only; the true angles realized by a
//! channel draw never enter the design.

use crate::channel::{steering_vector, BsIrsChannel, IrsUserChannel};
use crate::error::{Error, Result};
use num_complex::Complex64;
use std::f64::consts::PI;

/// Total BS power and its per-user split.
#[derive(Debug, Clone)]
pub struct PowerSplit {
    /// Total BS transmit power, watts.
    pub rho_d: f64,
    /// Power control coefficients, each positive, summing to at most 1.
    pub eta: Vec<f64>,
}

impl PowerSplit {
    pub fn new(rho_d: f64, eta: Vec<f64>) -> Result<Self> {
        if !(rho_d > 0.0) {
            return Err(Error::InvalidArgument(format!(
                "total power must be positive, got {rho_d}"
            )));
        }
        if eta.iter().any(|&e| !(e > 0.0)) {
            return Err(Error::InvalidArgument(
                "every power coefficient must be positive".into(),
            ));
        }
        let sum: f64 = eta.iter().sum();
        if sum > 1.0 + 1e-12 {
            return Err(Error::InvalidArgument(format!(
                "power coefficients sum to {sum} > 1"
            )));
        }
        Ok(PowerSplit { rho_d, eta })
    }

    pub fn uniform(rho_d: f64, users: usize) -> Result<Self> {
        Self::new(rho_d, vec![1.0 / users as f64; users])
    }
}

/// Per-user transmit beams and per-IRS phase-shift beams.
#[derive(Debug, Clone)]
pub struct BeamSet {
    /// K vectors of length N; ||w_k||^2 = eta_k * rho_d.
    pub transmit: Vec<Vec<Complex64>>,
    /// K vectors of length M, unit-modulus entries.
    pub phase: Vec<Vec<Complex64>>,
}

impl BeamSet {
    /// Build the whole beam set from a scenario's estimated angles: each
    /// transmit beam aims at its user's serving IRS, each phase beam
    /// conjugates the estimated cascade phase toward the served user.
    pub fn from_estimates(t: &crate::scenario::ScenarioTables) -> Result<Self> {
        let user_aods: Vec<f64> = (0..t.num_users)
            .map(|i| t.angles[t.irs_of_user[i]].aod)
            .collect();
        let split = PowerSplit::new(t.rho_d, t.eta.clone())?;
        let transmit = transmit_beams(&split, &user_aods, t.n_antennas);
        let phase = (0..t.num_users)
            .map(|m| {
                phase_shift_beam(
                    t.geo[m][t.user_of_irs[m]].cos_y,
                    t.angles[m].aoa,
                    t.m_elements,
                )
            })
            .collect();
        Ok(BeamSet { transmit, phase })
    }
}

/// Matched (conjugated) transmit beams, one per user, each aimed at the
/// serving IRS direction: w_k = sqrt(eta_k rho_d / N) a*(aod_k).
pub fn transmit_beams(split: &PowerSplit, bs_irs_aods: &[f64], n_antennas: usize) -> Vec<Vec<Complex64>> {
    assert_eq!(split.eta.len(), bs_irs_aods.len());
    split
        .eta
        .iter()
        .zip(bs_irs_aods)
        .map(|(&eta, &aod)| {
            let scale = (eta * split.rho_d / n_antennas as f64).sqrt();
            steering_vector(n_antennas, aod)
                .into_iter()
                .map(|e| scale * e.conj())
                .collect()
        })
        .collect()
}

/// Conjugate cascade phase beam: element s is
/// e^{-j pi (s-1)(est_i2u_aod + b2i_aoa)}, unit modulus by construction.
pub fn phase_shift_beam(est_i2u_aod: f64, b2i_aoa: f64, m_elements: usize) -> Vec<Complex64> {
    (0..m_elements)
        .map(|s| Complex64::from_polar(1.0, -PI * s as f64 * (est_i2u_aod + b2i_aoa)))
        .collect()
}

/// Effective per-user channels g_k^T = sum_m g_{mk}^T Theta_m G_m, computed
/// through the Hadamard identity g^T diag(xi) G = (xi o g)^T G.
pub fn effective_channel(
    bs_irs: &[BsIrsChannel],
    irs_user: &[Vec<IrsUserChannel>],
    phases: &[Vec<Complex64>],
) -> Result<Vec<Vec<Complex64>>> {
    let num_irs = bs_irs.len();
    if irs_user.len() != num_irs || phases.len() != num_irs {
        return Err(Error::InvalidArgument(format!(
            "inconsistent IRS counts: {} channel matrices, {} user-vector rows, {} phase beams",
            num_irs,
            irs_user.len(),
            phases.len()
        )));
    }
    let num_users = irs_user.first().map_or(0, |row| row.len());
    let n_antennas = bs_irs.first().map_or(0, |g| g.n_antennas);
    for (m, g) in bs_irs.iter().enumerate() {
        if g.n_antennas != n_antennas {
            return Err(Error::InvalidArgument(
                "BS antenna count differs across channel matrices".into(),
            ));
        }
        if phases[m].len() != g.m_elements {
            return Err(Error::InvalidArgument(format!(
                "phase beam {m} has length {} but the IRS has {} elements",
                phases[m].len(),
                g.m_elements
            )));
        }
        if irs_user[m].len() != num_users {
            return Err(Error::InvalidArgument(
                "user count differs across IRS rows".into(),
            ));
        }
        for (k, v) in irs_user[m].iter().enumerate() {
            if v.entries.len() != g.m_elements {
                return Err(Error::InvalidArgument(format!(
                    "channel vector ({m}, {k}) has length {} but the IRS has {} elements",
                    v.entries.len(),
                    g.m_elements
                )));
            }
        }
    }

    let mut out = vec![vec![Complex64::new(0.0, 0.0); n_antennas]; num_users];
    for (m, g) in bs_irs.iter().enumerate() {
        for (k, user_vec) in irs_user[m].iter().enumerate() {
            let eff = &mut out[k];
            for s in 0..g.m_elements {
                let weight = phases[m][s] * user_vec.entries[s];
                let row = &g.entries[s * n_antennas..(s + 1) * n_antennas];
                for (acc, &entry) in eff.iter_mut().zip(row) {
                    *acc += weight * entry;
                }
            }
        }
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::channel::{sample_bs_irs, sample_irs_user, FadingParams, RicianK};
    use crate::rng::CounterRng;

    #[test]
    fn transmit_beam_norm_and_gain() {
        let split = PowerSplit::new(1.0, vec![1.0]).unwrap();
        let beams = transmit_beams(&split, &[0.42], 4);
        for e in &beams[0] {
            assert!((e.norm() - 0.5).abs() < 1e-12);
        }
        let norm2: f64 = beams[0].iter().map(|e| e.norm_sqr()).sum();
        assert!((norm2 - 1.0).abs() < 1e-12);

        // a^T(theta_k) w_k = sqrt(eta rho N), real and positive.
        let a = steering_vector(4, 0.42);
        let gain: Complex64 = a.iter().zip(&beams[0]).map(|(x, w)| x * w).sum();
        assert!((gain - Complex64::new(2.0, 0.0)).norm() < 1e-12);
    }

    #[test]
    fn transmit_beams_orthogonal_spacing() {
        let split = PowerSplit::uniform(2.0, 2).unwrap();
        // Interference-free spacing for N = 5: gap 2/5.
        let aods = [0.1, 0.5];
        let beams = transmit_beams(&split, &aods, 5);
        let a0 = steering_vector(5, aods[0]);
        let leak: Complex64 = a0.iter().zip(&beams[1]).map(|(x, w)| x * w).sum();
        assert!(leak.norm() < 1e-12);
    }

    #[test]
    fn phase_beam_unit_modulus_and_zero_case() {
        let xi = phase_shift_beam(0.0, 0.0, 8);
        for e in &xi {
            assert!((e - Complex64::new(1.0, 0.0)).norm() < 1e-15);
        }
        let xi = phase_shift_beam(0.37, -0.81, 16);
        for e in &xi {
            assert!((e.norm() - 1.0).abs() < 1e-15);
        }
    }

    #[test]
    fn phase_beam_aligns_los_cascade() {
        // With the estimated angle equal to the true one, the composed
        // per-element cascade phase is zero: xi^T (g o b) = M.
        let m = 12;
        let (aod_i2u, aoa) = (0.3, -0.6);
        let xi = phase_shift_beam(aod_i2u, aoa, m);
        let g = steering_vector(m, aod_i2u);
        let b = steering_vector(m, aoa);
        let sum: Complex64 = (0..m).map(|s| xi[s] * g[s] * b[s]).sum();
        assert!((sum - Complex64::new(m as f64, 0.0)).norm() < 1e-10);
    }

    #[test]
    fn phase_beam_maximizes_los_objective() {
        // No random unit-modulus beam beats the conjugate beam on
        // |xi^T (g o b)|^2 for LOS draws.
        let m = 10;
        let (aod_i2u, aoa) = (0.21, 0.55);
        let g = steering_vector(m, aod_i2u);
        let b = steering_vector(m, aoa);
        let objective = |xi: &[Complex64]| -> f64 {
            let s: Complex64 = (0..m).map(|i| xi[i] * g[i] * b[i]).sum();
            s.norm_sqr()
        };
        let best = objective(&phase_shift_beam(aod_i2u, aoa, m));
        assert!((best - (m * m) as f64).abs() < 1e-9);
        let mut rng = CounterRng::keyed(77, &[0]);
        for _ in 0..10_000 {
            let xi: Vec<Complex64> = (0..m)
                .map(|_| Complex64::from_polar(1.0, rng.uniform_symmetric(std::f64::consts::PI)))
                .collect();
            assert!(objective(&xi) <= best + 1e-9);
        }
    }

    #[test]
    fn effective_channel_zero_and_k1_los() {
        // K = 1, all-LOS, perfect location: g^T w = sqrt(eta rho N beta) M.
        let (m, n) = (16, 5);
        let alpha_b2i = 0.04;
        let alpha_i2u = 0.09;
        let fading_b2i = FadingParams {
            alpha: alpha_b2i,
            rician_k: RicianK::Infinite,
        };
        let fading_i2u = FadingParams {
            alpha: alpha_i2u,
            rician_k: RicianK::Infinite,
        };
        let (aod, aoa, i2u_aod) = (-0.59, 0.59, 0.36);
        let mut rng = CounterRng::keyed(1, &[1]);
        let g_mat = sample_bs_irs(m, n, aoa, aod, &fading_b2i, &mut rng);
        let g_vec = sample_irs_user(m, i2u_aod, &fading_i2u, &mut rng);
        let xi = phase_shift_beam(i2u_aod, aoa, m);
        let eff = effective_channel(&[g_mat], &[vec![g_vec]], &[xi]).unwrap();

        let split = PowerSplit::new(2.0, vec![1.0]).unwrap();
        let w = transmit_beams(&split, &[aod], n);
        let y: Complex64 = eff[0].iter().zip(&w[0]).map(|(g, w)| g * w).sum();
        let beta = alpha_b2i * alpha_i2u;
        let expected = (1.0 * 2.0 * n as f64 * beta).sqrt() * m as f64;
        assert!((y - Complex64::new(expected, 0.0)).norm() < 1e-9 * expected);

        // Zero channels give a zero vector.
        let zero_mat = BsIrsChannel {
            m_elements: m,
            n_antennas: n,
            entries: vec![Complex64::new(0.0, 0.0); m * n],
        };
        let zero_vec = IrsUserChannel {
            entries: vec![Complex64::new(0.0, 0.0); m],
        };
        let eff = effective_channel(
            &[zero_mat],
            &[vec![zero_vec]],
            &[phase_shift_beam(0.1, 0.2, m)],
        )
        .unwrap();
        assert!(eff[0].iter().all(|e| e.norm() == 0.0));
    }

    #[test]
    fn hadamard_identity_matches_direct_composition() {
        // (xi o g)^T G equals g^T diag(xi) G evaluated naively.
        let (m, n) = (6, 4);
        let fading = FadingParams {
            alpha: 1.0,
            rician_k: RicianK::Finite(2.0),
        };
        let mut rng = CounterRng::keyed(10, &[3]);
        let g_mat = sample_bs_irs(m, n, 0.3, -0.2, &fading, &mut rng);
        let g_vec = sample_irs_user(m, 0.7, &fading, &mut rng);
        let xi = phase_shift_beam(0.7, 0.3, m);

        let eff = effective_channel(
            std::slice::from_ref(&g_mat),
            &[vec![g_vec.clone()]],
            std::slice::from_ref(&xi),
        )
        .unwrap();

        let mut direct = vec![Complex64::new(0.0, 0.0); n];
        for (s, direct_row) in (0..m).map(|s| (s, s * n)) {
            for c in 0..n {
                direct[c] += g_vec.entries[s] * xi[s] * g_mat.entries[direct_row + c];
            }
        }
        for c in 0..n {
            assert!((eff[0][c] - direct[c]).norm() < 1e-12);
        }
    }

    #[test]
    fn mean_gain_power_invariant_under_global_phase_rotation() {
        // Rotating every phase beam by one common phase rotates each g^T w
        // but leaves |mean g^T w|^2 unchanged.
        let (m, n) = (8, 4);
        let fading = FadingParams {
            alpha: 1.0,
            rician_k: RicianK::Finite(3.0),
        };
        let xi = phase_shift_beam(0.4, -0.2, m);
        let rot = Complex64::from_polar(1.0, 1.234);
        let xi_rot: Vec<Complex64> = xi.iter().map(|e| rot * e).collect();
        let split = PowerSplit::new(1.5, vec![1.0]).unwrap();
        let w = transmit_beams(&split, &[0.3], n);

        let mut rng = CounterRng::keyed(21, &[0]);
        let mut mean = Complex64::default();
        let mut mean_rot = Complex64::default();
        for _ in 0..50 {
            let g_mat = sample_bs_irs(m, n, -0.2, 0.3, &fading, &mut rng);
            let g_vec = sample_irs_user(m, 0.41, &fading, &mut rng);
            for (phases, acc) in [(&xi, &mut mean), (&xi_rot, &mut mean_rot)] {
                let eff = effective_channel(
                    std::slice::from_ref(&g_mat),
                    &[vec![g_vec.clone()]],
                    std::slice::from_ref(phases),
                )
                .unwrap();
                *acc += eff[0].iter().zip(&w[0]).map(|(g, w)| g * w).sum::<Complex64>();
            }
        }
        let (a, a_rot) = (mean.norm_sqr(), mean_rot.norm_sqr());
        assert!((a - a_rot).abs() < 1e-9 * a, "{a} vs {a_rot}");
    }

    #[test]
    fn effective_channel_rejects_mismatched_dims() {
        let g_mat = BsIrsChannel {
            m_elements: 4,
            n_antennas: 3,
            entries: vec![Complex64::new(0.0, 0.0); 12],
        };
        let g_vec = IrsUserChannel {
            entries: vec![Complex64::new(0.0, 0.0); 4],
        };
        let short_phase = vec![Complex64::new(1.0, 0.0); 3];
        let err = effective_channel(&[g_mat], &[vec![g_vec]], &[short_phase]);
        assert!(matches!(err, Err(Error::InvalidArgument(_))));
    }
}
