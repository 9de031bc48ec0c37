//! Dispersion relations of isotropy-optimised FDTD schemes for the Maxwell
//! equations. All wavenumbers are scaled by `h`, frequencies enter as
//! `omega k` and the Courant number is `sigma = c k / h`; the results are
//! the relations multiplied through by `h^2`.

use crate::error::{Error, Result};

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum GridDirection {
    Axis,
    Diagonal,
}

/// Spatial factor of the weighted two-point/four-point scheme,
/// `w sin(bh/2) + (1-w) sin(3bh/2)/3`, times `sqrt(2)` along the diagonal so
/// that its square is the right-hand side of the dispersion relation
/// `sin^2(omega k/2)/sigma^2 = F^2`.
pub fn sun_trueman_dispersion(w: f64, beta_h: f64, direction: GridDirection) -> f64 {
    let f = w * (0.5 * beta_h).sin() + (1.0 - w) * (1.5 * beta_h).sin() / 3.0;
    match direction {
        GridDirection::Axis => f,
        GridDirection::Diagonal => std::f64::consts::SQRT_2 * f,
    }
}

fn koh_sums(xi_h: f64, eta_h: f64) -> (f64, f64) {
    let sx = (0.5 * xi_h).sin().powi(2);
    let sy = (0.5 * eta_h).sin().powi(2);
    (sx + sy, sx * sy)
}

/// Residual of the Koh dispersion relation
/// `C+ Cx (alpha - 2/C+)^2 - (4 Cx/C+ - C+) - sin^2(omega k/2)/sigma^2`.
pub fn koh_residual(alpha: f64, xi_h: f64, eta_h: f64, omega_k: f64, courant: f64) -> f64 {
    let (cp, cx) = koh_sums(xi_h, eta_h);
    let st = (0.5 * omega_k).sin().powi(2) / (courant * courant);
    cp * cx * (alpha - 2.0 / cp).powi(2) - (4.0 * cx / cp - cp) - st
}

/// The root `alpha` of the Koh relation that vanishes when the mode obeys
/// the second-order (Yee) dispersion relation.
pub fn koh_alpha_of_mode(xi_h: f64, eta_h: f64, omega_k: f64, courant: f64) -> Result<f64> {
    if !(courant > 0.0) {
        return Err(Error::invalid(format!("Courant number must be positive, got {courant}")));
    }
    let (cp, cx) = koh_sums(xi_h, eta_h);
    if cx < 1e-300 {
        return Err(Error::SingularMode { xi_h, eta_h });
    }
    let st = (0.5 * omega_k).sin().powi(2) / (courant * courant);
    let discriminant = 1.0 - cp / (4.0 * cx) * (cp - st);
    if discriminant < 0.0 {
        return Err(Error::NoRealSolution { discriminant });
    }
    // 1 - sqrt(d) written as (1 - d)/(1 + sqrt(d)) to keep small alphas accurate
    Ok(2.0 / cp * (1.0 - discriminant) / (1.0 + discriminant.sqrt()))
}

/// Residual `sin^2(omega k/2)/sigma^2 - (Kx^2 + Ky^2 + Kz^2)` of the 3D
/// isotropic-dispersion FDTD relation with weighting factors `alpha_w`,
/// `beta_w`.
pub fn kim3d_dispersion_residual(
    alpha_w: f64,
    beta_w: f64,
    xi_h: f64,
    eta_h: f64,
    zeta_h: f64,
    omega_k: f64,
    courant: f64,
) -> f64 {
    let s = [(0.5 * xi_h).sin(), (0.5 * eta_h).sin(), (0.5 * zeta_h).sin()];
    let st = (0.5 * omega_k).sin().powi(2) / (courant * courant);
    let mut k2 = 0.0;
    for p in 0..3 {
        let (q1, q2) = (s[(p + 1) % 3], s[(p + 2) % 3]);
        let pp = q1 * q2;
        let qp = q1 * q1 + q2 * q2;
        let kp = s[p] * (alpha_w * (pp - qp) - beta_w * qp / 2.0 + 1.0);
        k2 += kp * kp;
    }
    st - k2
}

/// Numerical frequency `omega k` in `[0, pi]` of a 3D mode, by bisection
/// on the dispersion residual.
pub fn kim3d_frequency(alpha_w: f64, beta_w: f64, wave_h: [f64; 3], courant: f64) -> Result<f64> {
    if !(courant > 0.0) {
        return Err(Error::invalid(format!("Courant number must be positive, got {courant}")));
    }
    let r = |w: f64| kim3d_dispersion_residual(alpha_w, beta_w, wave_h[0], wave_h[1], wave_h[2], w, courant);
    let (mut lo, mut hi) = (0.0, std::f64::consts::PI);
    if r(hi) < 0.0 {
        // the mode needs sin(omega k/2) > 1: unstable at this Courant number
        return Err(Error::NoRealSolution { discriminant: r(hi) });
    }
    if r(lo) >= 0.0 {
        return Ok(0.0);
    }
    for _ in 0..200 {
        let mid = 0.5 * (lo + hi);
        if mid <= lo || mid >= hi {
            break;
        }
        if r(mid) < 0.0 {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    Ok(0.5 * (lo + hi))
}

/// Normalised phase velocity `v/c0` of the mode with magnitude `kh`
/// along polar angle `theta` (from z) and azimuth `phi`.
pub fn kim3d_phase_velocity(alpha_w: f64, beta_w: f64, kh: f64, theta: f64, phi: f64, courant: f64) -> Result<f64> {
    if !(kh > 0.0) {
        return Err(Error::UndefinedPhaseVelocity);
    }
    let wave = [kh * theta.sin() * phi.cos(), kh * theta.sin() * phi.sin(), kh * theta.cos()];
    Ok(kim3d_frequency(alpha_w, beta_w, wave, courant)? / (courant * kh))
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::f64::consts::PI;

    #[test]
    fn sun_trueman_limits() {
        let bh = 0.4;
        assert_eq!(sun_trueman_dispersion(1.0, bh, GridDirection::Axis), (0.5 * bh).sin());
        assert!((sun_trueman_dispersion(0.0, bh, GridDirection::Axis) - (1.5 * bh).sin() / 3.0).abs() < 1e-16);
        let d = sun_trueman_dispersion(0.7, bh, GridDirection::Diagonal);
        assert!((d * d - 2.0 * sun_trueman_dispersion(0.7, bh, GridDirection::Axis).powi(2)).abs() < 1e-15);
    }

    #[test]
    fn sun_trueman_nine_eighths_is_fourth_order() {
        // error against bh/2 should drop by 2^5 when bh halves
        let err = |bh: f64| sun_trueman_dispersion(9.0 / 8.0, bh, GridDirection::Axis) - 0.5 * bh;
        let ratio = err(0.1) / err(0.05);
        assert!((ratio.log2() - 5.0).abs() < 0.05, "{ratio}");
    }

    #[test]
    fn koh_alpha_vanishes_on_yee_modes() {
        let (xi, eta, sigma) = (0.6, 0.35, 0.5);
        let (cp, _) = koh_sums(xi, eta);
        let omega_k = 2.0 * (sigma * cp.sqrt()).asin();
        assert!(koh_alpha_of_mode(xi, eta, omega_k, sigma).unwrap().abs() < 1e-14);
    }

    #[test]
    fn koh_alpha_back_substitutes() {
        let (xi, eta, sigma) = (PI / 4.0, PI / 4.0, 0.5);
        let omega_k = sigma * (xi * xi + eta * eta).sqrt();
        let alpha = koh_alpha_of_mode(xi, eta, omega_k, sigma).unwrap();
        assert!(koh_residual(alpha, xi, eta, omega_k, sigma).abs() < 1e-12);
    }

    #[test]
    fn koh_errors() {
        assert!(matches!(koh_alpha_of_mode(0.5, 0.0, 0.2, 0.5), Err(Error::SingularMode { .. })));
        assert!(matches!(koh_alpha_of_mode(0.5, 0.1, 0.0, 0.5), Err(Error::NoRealSolution { .. })));
    }

    #[test]
    fn kim_reduces_to_yee() {
        let (xi, eta, zeta, w, s): (f64, f64, f64, f64, f64) = (0.3, -1.1, 2.0, 0.7, 0.4);
        let yee = (0.5 * w).sin().powi(2) / (s * s)
            - ((0.5 * xi).sin().powi(2) + (0.5 * eta).sin().powi(2) + (0.5 * zeta).sin().powi(2));
        assert!((kim3d_dispersion_residual(0.0, 0.0, xi, eta, zeta, w, s) - yee).abs() < 1e-15);
        assert_eq!(kim3d_dispersion_residual(0.3, 0.1, 0.0, 0.0, 0.0, 0.0, s), 0.0);
    }

    #[test]
    fn kim_frequency_root() {
        let wave = [0.4, 0.2, -0.3];
        let w = kim3d_frequency(0.1, 0.05, wave, 0.5).unwrap();
        assert!(kim3d_dispersion_residual(0.1, 0.05, wave[0], wave[1], wave[2], w, 0.5).abs() < 1e-12);
        let yee = kim3d_frequency(0.0, 0.0, wave, 0.5).unwrap();
        let closed = 2.0 * (0.5 * wave.iter().map(|x| (0.5 * x).sin().powi(2)).sum::<f64>().sqrt()).asin();
        assert!((yee - closed).abs() < 1e-14);
        assert!(kim3d_frequency(0.0, 0.0, [PI, PI, PI], 0.9).is_err());
    }
}
