//! Array steering vectors, large-scale fading, noise power, and seeded
//! sampling of the Rician BS-to-IRS and IRS-to-user channels.
//!
//! Element spacing is half a wavelength at both arrays and the pi factor is
//! folded into the steering exponent, so every angle in this module is the
//! dimensionless effective angle in [-1, 1].

use crate::error::{Error, Result};
use crate::rng::CounterRng;
use num_complex::Complex64;
use std::f64::consts::PI;

/// Rician K-factor. Pure LOS is a first-class sentinel rather than a large
/// float so that no-NLOS limits are exact.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum RicianK {
    Finite(f64),
    Infinite,
}

impl RicianK {
    /// Fraction of link power in the LOS component: v / (v + 1).
    pub fn los_fraction(&self) -> f64 {
        match *self {
            RicianK::Finite(v) => v / (v + 1.0),
            RicianK::Infinite => 1.0,
        }
    }

    /// Fraction of link power in the NLOS component: 1 / (v + 1).
    pub fn nlos_fraction(&self) -> f64 {
        match *self {
            RicianK::Finite(v) => 1.0 / (v + 1.0),
            RicianK::Infinite => 0.0,
        }
    }

    pub fn is_infinite(&self) -> bool {
        matches!(self, RicianK::Infinite)
    }
}

/// Large-scale gain and Rician factor of one link.
#[derive(Debug, Clone, Copy)]
pub struct FadingParams {
    /// Large-scale power gain, linear.
    pub alpha: f64,
    pub rician_k: RicianK,
}

/// One draw of a BS-to-IRS channel matrix, `m_elements` rows by
/// `n_antennas` columns, row-major.
#[derive(Debug, Clone)]
pub struct BsIrsChannel {
    pub m_elements: usize,
    pub n_antennas: usize,
    pub entries: Vec<Complex64>,
}

impl BsIrsChannel {
    #[inline]
    pub fn at(&self, row: usize, col: usize) -> Complex64 {
        self.entries[row * self.n_antennas + col]
    }
}

/// One draw of an IRS-to-user channel vector, length `m_elements`.
#[derive(Debug, Clone)]
pub struct IrsUserChannel {
    pub entries: Vec<Complex64>,
}

/// Array response vector: element n is e^{j pi (n-1) theta}.
pub fn steering_vector(length: usize, theta: f64) -> Vec<Complex64> {
    assert!(length >= 1);
    (0..length)
        .map(|n| Complex64::from_polar(1.0, PI * n as f64 * theta))
        .collect()
}

/// Inner product a(theta1)^T a*(theta2) in closed Dirichlet-kernel form,
/// falling back to direct summation near the removable singularity.
pub fn steering_inner(length: usize, theta1: f64, theta2: f64) -> Complex64 {
    assert!(length >= 1);
    let delta = theta1 - theta2;
    let half = PI * delta / 2.0;
    let denom = half.sin();
    if denom.abs() < 1e-9 {
        // delta near an even integer: sum the N unit phasors directly.
        return (0..length)
            .map(|n| Complex64::from_polar(1.0, PI * n as f64 * delta))
            .sum();
    }
    let ratio = (length as f64 * half).sin() / denom;
    Complex64::from_polar(1.0, (length as f64 - 1.0) * half) * ratio
}

/// Distance-law path gain: 10^(c0_db/10) * distance^(-exponent), with the
/// reference distance fixed at 1 m.
pub fn path_loss(distance: f64, c0_db: f64, exponent: f64) -> Result<f64> {
    if !(distance > 0.0) {
        return Err(Error::InvalidArgument(format!(
            "path loss needs a positive distance, got {distance}"
        )));
    }
    Ok(10f64.powf(c0_db / 10.0) * distance.powf(-exponent))
}

/// Thermal noise power in watts for a flat PSD given in dBm/Hz.
pub fn noise_power(bandwidth_hz: f64, psd_dbm_per_hz: f64) -> f64 {
    assert!(bandwidth_hz > 0.0);
    10f64.powf((psd_dbm_per_hz + 10.0 * bandwidth_hz.log10() - 30.0) / 10.0)
}

/// Draw a BS-to-IRS channel: sqrt(alpha v/(v+1)) b(aoa) a^T(aod) plus
/// sqrt(alpha/(v+1)) times an i.i.d. standard complex Gaussian matrix.
pub fn sample_bs_irs(
    m_elements: usize,
    n_antennas: usize,
    aoa: f64,
    aod: f64,
    fading: &FadingParams,
    rng: &mut CounterRng,
) -> BsIrsChannel {
    assert!(m_elements >= 1 && n_antennas >= 1);
    let los_scale = (fading.alpha * fading.rician_k.los_fraction()).sqrt();
    let nlos_scale = (fading.alpha * fading.rician_k.nlos_fraction()).sqrt();
    let b = steering_vector(m_elements, aoa);
    let a = steering_vector(n_antennas, aod);
    let mut entries = Vec::with_capacity(m_elements * n_antennas);
    for row in &b {
        for col in &a {
            let mut e = los_scale * row * col;
            if nlos_scale > 0.0 {
                e += nlos_scale * rng.complex_gaussian();
            }
            entries.push(e);
        }
    }
    BsIrsChannel {
        m_elements,
        n_antennas,
        entries,
    }
}

/// Draw an IRS-to-user channel vector with the LOS term steered at the
/// true departure angle (estimated angle plus the realized error).
pub fn sample_irs_user(
    m_elements: usize,
    true_aod: f64,
    fading: &FadingParams,
    rng: &mut CounterRng,
) -> IrsUserChannel {
    assert!(m_elements >= 1);
    let los_scale = (fading.alpha * fading.rician_k.los_fraction()).sqrt();
    let nlos_scale = (fading.alpha * fading.rician_k.nlos_fraction()).sqrt();
    let entries = steering_vector(m_elements, true_aod)
        .into_iter()
        .map(|los| {
            let mut e = los_scale * los;
            if nlos_scale > 0.0 {
                e += nlos_scale * rng.complex_gaussian();
            }
            e
        })
        .collect();
    IrsUserChannel { entries }
}
