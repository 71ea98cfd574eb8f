//! Effective angles from coordinates, bounded location error, and the
//! statistics of the resulting angle-estimation error.
//!
//! The user's true position is uniformly distributed in a ball of radius
//! `upsilon` around its reported position. To first order, the error of the
//! effective IRS-to-user angle is a linear form of the displacement, which
//! makes its density a truncated parabola and makes every correlation
//! coefficient `E{e^{j pi n eps}}` available in closed form through a single
//! real kernel. This module houses those closed forms together with the
//! sampler used to cross-check them.

use crate::error::{Error, Result};
use crate::rng::CounterRng;
use std::f64::consts::PI;

/// Cartesian point, meters.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Position3 {
    pub x: f64,
    pub y: f64,
    pub z: f64,
}

impl Position3 {
    pub fn new(x: f64, y: f64, z: f64) -> Self {
        Position3 { x, y, z }
    }

    pub fn distance(&self, other: &Position3) -> f64 {
        let (dx, dy, dz) = (self.x - other.x, self.y - other.y, self.z - other.z);
        (dx * dx + dy * dy + dz * dz).sqrt()
    }

    pub fn is_finite(&self) -> bool {
        self.x.is_finite() && self.y.is_finite() && self.z.is_finite()
    }
}

/// Estimated IRS-to-user link geometry.
///
/// `cos_y` is the effective angle of departure along the array axis; `phi`
/// is the spread coefficient that scales the location uncertainty into angle
/// uncertainty. `phi = 0` exactly when the user lies on the array axis seen
/// from the IRS, in which case the angle error is identically zero.
#[derive(Debug, Clone, Copy)]
pub struct LinkGeometry {
    /// Estimated IRS-user distance, meters (> 0).
    pub d_hat: f64,
    /// Direction cosine along x.
    pub cos_x: f64,
    /// Direction cosine along y (the effective AOD).
    pub cos_y: f64,
    /// Direction cosine along z.
    pub cos_z: f64,
    /// Spread coefficient sqrt((cos_y^2-1)^2 + cos_y^2 cos_z^2 + cos_y^2 cos_x^2).
    pub phi: f64,
}

/// Displacement of the true user position from the reported one, meters.
#[derive(Debug, Clone, Copy, Default)]
pub struct LocationError {
    pub dx: f64,
    pub dy: f64,
    pub dz: f64,
}

impl LocationError {
    pub fn norm(&self) -> f64 {
        (self.dx * self.dx + self.dy * self.dy + self.dz * self.dz).sqrt()
    }
}

/// Effective angles of the BS-IRS link. With the BS at the origin and both
/// arrays along the y axis, the arrival angle is the negated departure angle.
#[derive(Debug, Clone, Copy)]
pub struct BsIrsAngles {
    /// Effective AOD at the BS, in [-1, 1].
    pub aod: f64,
    /// Effective AOA at the IRS, in [-1, 1].
    pub aoa: f64,
}

/// Effective BS-to-IRS angles from coordinates.
///
/// The BS must sit at the coordinate origin; the whole angle model is
/// expressed in that frame.
pub fn bs_irs_angles(bs: Position3, irs: Position3) -> Result<BsIrsAngles> {
    if bs != Position3::new(0.0, 0.0, 0.0) {
        return Err(Error::InvalidArgument(format!(
            "BS must be at the coordinate origin, got ({}, {}, {})",
            bs.x, bs.y, bs.z
        )));
    }
    let d = bs.distance(&irs);
    if d == 0.0 {
        return Err(Error::DegenerateGeometry(
            "BS and IRS positions coincide".into(),
        ));
    }
    let aod = -(irs.y - bs.y) / d;
    Ok(BsIrsAngles { aod, aoa: -aod })
}

/// Estimated link geometry between an IRS and a reported user position.
pub fn link_geometry(irs: Position3, est_user: Position3) -> Result<LinkGeometry> {
    let d_hat = irs.distance(&est_user);
    if d_hat == 0.0 {
        return Err(Error::DegenerateGeometry(
            "IRS and user positions coincide".into(),
        ));
    }
    let cos_x = (irs.x - est_user.x) / d_hat;
    let cos_y = (irs.y - est_user.y) / d_hat;
    let cos_z = (irs.z - est_user.z) / d_hat;
    let cy2 = cos_y * cos_y;
    let phi = ((cy2 - 1.0) * (cy2 - 1.0) + cy2 * cos_z * cos_z + cy2 * cos_x * cos_x).sqrt();
    Ok(LinkGeometry {
        d_hat,
        cos_x,
        cos_y,
        cos_z,
        phi,
    })
}

/// Draw a displacement uniformly from the solid ball of the given radius.
///
/// Rejection sampling from the bounding cube; exact and reproducible for a
/// given stream. A zero radius returns the zero displacement without
/// consuming any randomness.
pub fn sample_location_error(radius: f64, rng: &mut CounterRng) -> Result<LocationError> {
    if !(radius >= 0.0) || !radius.is_finite() {
        return Err(Error::InvalidArgument(format!(
            "uncertainty radius must be finite and >= 0, got {radius}"
        )));
    }
    if radius == 0.0 {
        return Ok(LocationError::default());
    }
    loop {
        let dx = rng.uniform_symmetric(radius);
        let dy = rng.uniform_symmetric(radius);
        let dz = rng.uniform_symmetric(radius);
        if dx * dx + dy * dy + dz * dz <= radius * radius {
            return Ok(LocationError { dx, dy, dz });
        }
    }
}

/// First-order error of the effective IRS-to-user angle for a given
/// displacement of the true position.
#[inline]
pub fn angle_error(geom: &LinkGeometry, err: &LocationError) -> f64 {
    ((geom.cos_y * geom.cos_y - 1.0) * err.dy
        + geom.cos_y * geom.cos_z * err.dz
        + geom.cos_y * geom.cos_x * err.dx)
        / geom.d_hat
}

/// Density of the angle-estimation error at `x`: a downward parabola
/// supported on |x| <= upsilon * phi / d_hat, zero outside.
///
/// Fails when `phi = 0` (the error is then identically zero and has no
/// density); callers must special-case that geometry.
pub fn error_pdf(geom: &LinkGeometry, radius: f64, x: f64) -> Result<f64> {
    if !(radius > 0.0) {
        return Err(Error::InvalidArgument(format!(
            "uncertainty radius must be > 0, got {radius}"
        )));
    }
    if geom.phi == 0.0 {
        return Err(Error::DegenerateDistribution(
            "phi = 0: the angle error is identically zero".into(),
        ));
    }
    let support = radius * geom.phi / geom.d_hat;
    if x.abs() > support {
        return Ok(0.0);
    }
    let d = geom.d_hat;
    let phi = geom.phi;
    let value = -(3.0 * d * d * d) / (4.0 * radius.powi(3)) / (phi * phi * phi) * x * x
        + (3.0 * d) / (4.0 * radius) / phi;
    Ok(value.max(0.0))
}

/// Variance of the angle-estimation error: upsilon^2 phi^2 / (5 d_hat^2).
/// The mean is zero by symmetry.
pub fn error_variance(geom: &LinkGeometry, radius: f64) -> f64 {
    let s = radius * geom.phi / geom.d_hat;
    s * s / 5.0
}

/// Threshold below which the kernel switches to its Taylor series; the
/// closed form is 0/0 at w = 0.
const KERNEL_TAYLOR_THRESHOLD: f64 = 1e-3;

/// Correlation kernel (3/w^2)(sin w / w - cos w), continued through w = 0
/// by its 4th-order Taylor series 1 - w^2/10 + w^4/280.
///
/// This is the characteristic function of the parabola-distributed angle
/// error, so its value always lies in [-1, 1].
pub fn zeta_kernel(w: f64) -> f64 {
    debug_assert!(w >= 0.0 && w.is_finite());
    if w < KERNEL_TAYLOR_THRESHOLD {
        let w2 = w * w;
        1.0 - w2 / 10.0 + w2 * w2 / 280.0
    } else {
        3.0 / (w * w) * (w.sin() / w - w.cos())
    }
}

/// Correlation coefficient of the element-`s` phase term with the mean LOS
/// phase: `E{e^{j pi (s-1) eps}}`. Equals 1 at s = 1 or zero uncertainty.
pub fn zeta_single(geom: &LinkGeometry, radius: f64, s: usize) -> f64 {
    assert!(s >= 1, "element index is 1-based");
    zeta_kernel(PI * (s - 1) as f64 * geom.phi * radius / geom.d_hat)
}

/// Correlation coefficient between the phase terms of elements `s` and `l`
/// on the same link: `E{e^{j pi (s-l) eps}}`.
pub fn zeta_pair(geom: &LinkGeometry, radius: f64, s: usize, l: usize) -> f64 {
    assert!(s >= 1 && l >= 1, "element indices are 1-based");
    let gap = s.abs_diff(l) as f64;
    zeta_kernel(PI * gap * geom.phi * radius / geom.d_hat)
}

/// Correlation coefficient between phase terms of two different IRS links to
/// the same user: `E{e^{j pi [(s-1) eps_m - (l-1) eps_n]}}`.
///
/// Both errors are driven by the one shared displacement of that user, so
/// the combined exponent is again a linear form of the displacement and the
/// same kernel applies with the combined coefficient norm. The `s = l = 1`
/// branch generalizes to "zero combined coefficient gives 1", which also
/// covers `geom_m = geom_n, s = l`.
pub fn zeta_cross(
    geom_m: &LinkGeometry,
    geom_n: &LinkGeometry,
    radius: f64,
    s: usize,
    l: usize,
) -> f64 {
    assert!(s >= 1 && l >= 1, "element indices are 1-based");
    let sm = (s - 1) as f64;
    let ln = (l - 1) as f64;
    let a = sm * (geom_m.cos_y * geom_m.cos_y - 1.0) / geom_m.d_hat
        - ln * (geom_n.cos_y * geom_n.cos_y - 1.0) / geom_n.d_hat;
    let b = sm * geom_m.cos_y * geom_m.cos_z / geom_m.d_hat
        - ln * geom_n.cos_y * geom_n.cos_z / geom_n.d_hat;
    let c = sm * geom_m.cos_y * geom_m.cos_x / geom_m.d_hat
        - ln * geom_n.cos_y * geom_n.cos_x / geom_n.d_hat;
    zeta_kernel(PI * radius * (a * a + b * b + c * c).sqrt())
}

#[cfg(test)]
mod tests {
    use super::*;

    fn close(a: f64, b: f64, tol: f64) -> bool {
        (a - b).abs() <= tol
    }

    fn table1_link() -> LinkGeometry {
        link_geometry(
            Position3::new(240.0, 178.0, -20.0),
            Position3::new(224.0, 168.0, -40.0),
        )
        .unwrap()
    }

    #[test]
    fn bs_irs_angles_table1() {
        let a = bs_irs_angles(
            Position3::new(0.0, 0.0, 0.0),
            Position3::new(240.0, 178.0, -20.0),
        )
        .unwrap();
        let d = 89_684.0_f64.sqrt();
        assert!(close(d, 299.472, 1e-3));
        assert!(close(a.aod, -178.0 / d, 1e-12));
        assert!(close(a.aod, -0.59438, 1e-5));
        assert!(close(a.aoa, -a.aod, 0.0));
    }

    #[test]
    fn bs_irs_angles_axis_cases() {
        let on_x = bs_irs_angles(Position3::new(0.0, 0.0, 0.0), Position3::new(50.0, 0.0, 0.0))
            .unwrap();
        assert_eq!(on_x.aod, 0.0);
        assert_eq!(on_x.aoa, 0.0);

        let broadside =
            bs_irs_angles(Position3::new(0.0, 0.0, 0.0), Position3::new(0.0, 30.0, 0.0)).unwrap();
        assert!(close(broadside.aod, -1.0, 1e-15));
        assert!(close(broadside.aoa, 1.0, 1e-15));
    }

    #[test]
    fn bs_irs_angles_rejects_bad_input() {
        let err = bs_irs_angles(Position3::new(1.0, 0.0, 0.0), Position3::new(2.0, 0.0, 0.0));
        assert!(matches!(err, Err(Error::InvalidArgument(_))));
        let err = bs_irs_angles(Position3::new(0.0, 0.0, 0.0), Position3::new(0.0, 0.0, 0.0));
        assert!(matches!(err, Err(Error::DegenerateGeometry(_))));
    }

    #[test]
    fn link_geometry_table1() {
        let g = table1_link();
        assert!(close(g.d_hat, 756.0_f64.sqrt(), 1e-12));
        assert!(close(g.d_hat, 27.4955, 1e-4));
        assert!(close(g.cos_y, 0.36370, 1e-5));
        let unit = g.cos_x * g.cos_x + g.cos_y * g.cos_y + g.cos_z * g.cos_z;
        assert!(close(unit, 1.0, 1e-12));
        let cy2 = g.cos_y * g.cos_y;
        let phi = ((cy2 - 1.0).powi(2) + cy2 * g.cos_z * g.cos_z + cy2 * g.cos_x * g.cos_x).sqrt();
        assert!(close(g.phi, phi, 1e-12));
        assert!(g.phi <= std::f64::consts::SQRT_2);
    }

    #[test]
    fn link_geometry_degenerate_axes() {
        // IRS straight above the user: cos_y = 0, phi = 1.
        let above = link_geometry(Position3::new(0.0, 0.0, 10.0), Position3::new(0.0, 0.0, 0.0))
            .unwrap();
        assert_eq!(above.cos_y, 0.0);
        assert!(close(above.phi, 1.0, 1e-15));

        // Pure y offset: cos_y = 1, phi = 0.
        let along = link_geometry(Position3::new(0.0, 25.0, 0.0), Position3::new(0.0, 0.0, 0.0))
            .unwrap();
        assert!(close(along.cos_y.abs(), 1.0, 1e-15));
        assert!(close(along.phi, 0.0, 1e-12));

        let err = link_geometry(Position3::new(1.0, 2.0, 3.0), Position3::new(1.0, 2.0, 3.0));
        assert!(matches!(err, Err(Error::DegenerateGeometry(_))));
    }

    #[test]
    fn ball_sampling_degenerate_and_support() {
        let mut rng = CounterRng::keyed(1, &[0]);
        let zero = sample_location_error(0.0, &mut rng).unwrap();
        assert_eq!((zero.dx, zero.dy, zero.dz), (0.0, 0.0, 0.0));

        for _ in 0..10_000 {
            let e = sample_location_error(2.0, &mut rng).unwrap();
            assert!(e.norm() <= 2.0);
        }

        assert!(matches!(
            sample_location_error(-1.0, &mut rng),
            Err(Error::InvalidArgument(_))
        ));
    }

    #[test]
    fn ball_sampling_moments() {
        // For a uniform ball of radius 1: each coordinate has mean 0 and
        // E{||delta||} = 3/4.
        let mut rng = CounterRng::keyed(42, &[1]);
        let n = 1_000_000;
        let (mut sx, mut sy, mut sz, mut snorm) = (0.0, 0.0, 0.0, 0.0);
        for _ in 0..n {
            let e = sample_location_error(1.0, &mut rng).unwrap();
            sx += e.dx;
            sy += e.dy;
            sz += e.dz;
            snorm += e.norm();
        }
        let nf = n as f64;
        assert!(sx.abs() / nf < 0.005);
        assert!(sy.abs() / nf < 0.005);
        assert!(sz.abs() / nf < 0.005);
        let mean_norm = snorm / nf;
        assert!(
            (mean_norm - 0.75).abs() / 0.75 < 0.01,
            "mean norm {mean_norm}"
        );
    }

    #[test]
    fn angle_error_special_cases() {
        let g = table1_link();
        assert_eq!(angle_error(&g, &LocationError::default()), 0.0);

        // cos_y = 0: only the (cos_y^2 - 1) dy term survives.
        let above = link_geometry(Position3::new(0.0, 0.0, 10.0), Position3::new(0.0, 0.0, 0.0))
            .unwrap();
        let e = angle_error(
            &above,
            &LocationError {
                dx: 0.0,
                dy: 0.3,
                dz: 0.0,
            },
        );
        assert!(close(e, -0.3 / above.d_hat, 1e-15));
    }

    #[test]
    fn angle_error_support_bound() {
        // |eps| <= upsilon * phi / d_hat by Cauchy-Schwarz.
        let g = table1_link();
        let radius = 1.7;
        let bound = radius * g.phi / g.d_hat;
        let mut rng = CounterRng::keyed(5, &[2]);
        for _ in 0..100_000 {
            let e = sample_location_error(radius, &mut rng).unwrap();
            assert!(angle_error(&g, &e).abs() <= bound * (1.0 + 1e-12));
        }
    }

    #[test]
    fn pdf_boundary_and_center() {
        let g = table1_link();
        let radius = 1.0;
        let support = radius * g.phi / g.d_hat;
        assert!(close(error_pdf(&g, radius, support).unwrap(), 0.0, 1e-9));
        assert!(close(error_pdf(&g, radius, -support).unwrap(), 0.0, 1e-9));
        assert_eq!(error_pdf(&g, radius, support * 1.01).unwrap(), 0.0);
        let center = error_pdf(&g, radius, 0.0).unwrap();
        assert!(close(center, 3.0 * g.d_hat / (4.0 * radius * g.phi), 1e-12));
    }

    #[test]
    fn pdf_integrates_to_one() {
        // Composite Simpson quadrature; exact for the quadratic density up
        // to rounding.
        let g = table1_link();
        let radius = 0.8;
        let support = radius * g.phi / g.d_hat;
        let n = 2000;
        let h = 2.0 * support / n as f64;
        let mut integral = 0.0;
        for i in 0..n {
            let x0 = -support + i as f64 * h;
            let x2 = x0 + h;
            let x1 = 0.5 * (x0 + x2);
            let f = |x: f64| error_pdf(&g, radius, x).unwrap();
            integral += h / 6.0 * (f(x0) + 4.0 * f(x1) + f(x2));
        }
        assert!(close(integral, 1.0, 1e-10), "integral {integral}");
    }

    #[test]
    fn pdf_degenerate_phi() {
        let along = link_geometry(Position3::new(0.0, 25.0, 0.0), Position3::new(0.0, 0.0, 0.0))
            .unwrap();
        assert!(matches!(
            error_pdf(&along, 1.0, 0.0),
            Err(Error::DegenerateDistribution(_))
        ));
    }

    #[test]
    fn variance_closed_form() {
        let g = LinkGeometry {
            d_hat: 10.0,
            cos_x: 0.0,
            cos_y: 0.0,
            cos_z: 1.0,
            phi: 1.0,
        };
        assert!(close(error_variance(&g, 1.0), 0.002, 1e-15));
        assert_eq!(error_variance(&g, 0.0), 0.0);
    }

    #[test]
    fn variance_matches_sampling() {
        let g = table1_link();
        let radius = 1.3;
        let mut rng = CounterRng::keyed(9, &[3]);
        let n = 1_000_000;
        let (mut sum, mut sum2) = (0.0, 0.0);
        for _ in 0..n {
            let e = sample_location_error(radius, &mut rng).unwrap();
            let eps = angle_error(&g, &e);
            sum += eps;
            sum2 += eps * eps;
        }
        let nf = n as f64;
        let mean = sum / nf;
        let var = sum2 / nf - mean * mean;
        let sigma2 = error_variance(&g, radius);
        assert!(mean.abs() < 3.0 * sigma2.sqrt() / nf.sqrt(), "mean {mean}");
        assert!((var - sigma2).abs() / sigma2 < 0.01, "var {var} vs {sigma2}");
    }

    #[test]
    fn kernel_reference_points() {
        assert!(close(zeta_kernel(0.0), 1.0, 0.0));
        assert!(close(zeta_kernel(PI), 3.0 / (PI * PI), 1e-14));
        assert!(close(zeta_kernel(PI / 2.0), 24.0 / PI.powi(3), 1e-14));
    }

    #[test]
    fn kernel_taylor_matches_closed_form_at_threshold() {
        // Below the switch the closed form carries cancellation noise of
        // roughly eps/w^2; the Taylor value must sit inside that band, and
        // the kernel must be continuous across the switch.
        for &w in &[9.0e-4_f64, 1.0e-3, 1.1e-3] {
            let closed = 3.0 / (w * w) * (w.sin() / w - w.cos());
            assert!(close(zeta_kernel(w), closed, 1e-9));
        }
        let below = zeta_kernel(1e-3 - 1e-12);
        let above = zeta_kernel(1e-3 + 1e-12);
        assert!(close(below, above, 1e-9));
    }

    #[test]
    fn kernel_bounded_by_one() {
        for i in 0..20_000 {
            let w = i as f64 * 0.01;
            let z = zeta_kernel(w);
            assert!(z.abs() <= 1.0 + 1e-15, "kernel({w}) = {z}");
        }
    }

    #[test]
    fn zeta_single_trivial_cases() {
        let g = table1_link();
        assert_eq!(zeta_single(&g, 1.5, 1), 1.0);
        assert_eq!(zeta_single(&g, 0.0, 7), 1.0);
        let expected = zeta_kernel(PI * 4.0 * g.phi * 1.0 / g.d_hat);
        assert!(close(zeta_single(&g, 1.0, 5), expected, 0.0));
    }

    #[test]
    fn zeta_pair_reductions() {
        let g = table1_link();
        assert_eq!(zeta_pair(&g, 1.2, 6, 6), 1.0);
        assert_eq!(zeta_pair(&g, 1.2, 3, 9), zeta_pair(&g, 1.2, 9, 3));
        for s in 1..=8 {
            assert_eq!(zeta_pair(&g, 0.9, s, 1), zeta_single(&g, 0.9, s));
        }
    }

    #[test]
    fn zeta_cross_reductions() {
        let g_m = table1_link();
        let g_n = link_geometry(
            Position3::new(333.0, 68.0, -20.0),
            Position3::new(224.0, 168.0, -40.0),
        )
        .unwrap();
        assert_eq!(zeta_cross(&g_m, &g_n, 1.0, 1, 1), 1.0);
        assert_eq!(zeta_cross(&g_m, &g_m, 1.0, 4, 4), 1.0);
        // Swapping both the geometries and the indices negates the linear
        // form, leaving the kernel argument unchanged.
        for (s, l) in [(2, 5), (1, 9), (7, 3)] {
            assert_eq!(
                zeta_cross(&g_m, &g_n, 1.4, s, l),
                zeta_cross(&g_n, &g_m, 1.4, l, s)
            );
        }
    }

    #[test]
    fn zeta_single_is_cross_with_unit_l() {
        let g = table1_link();
        // The two routes assemble the kernel argument differently, so only
        // rounding-level disagreement is allowed.
        for s in 1..=16 {
            let single = zeta_single(&g, 1.1, s);
            let cross = zeta_cross(&g, &g, 1.1, s, 1);
            assert!(close(single, cross, 1e-12));
        }
    }
}
