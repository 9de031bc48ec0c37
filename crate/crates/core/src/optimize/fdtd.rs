//! Calibration of the isotropy weights of the 2D FDTD schemes.

use std::f64::consts::{FRAC_PI_2, SQRT_2};

use crate::error::{Error, Result};
use crate::spectral::koh_alpha_of_mode;

/// Weight `w` that makes the axis and diagonal dispersion relations of the
/// weighted scheme agree, given the scaled phase advances per grid step
/// along the axis (`beta_a_h`) and along each axis for the diagonal wave
/// (`beta_d_h`).
pub fn sun_trueman_weight(beta_a_h: f64, beta_d_h: f64) -> Result<f64> {
    let s1 = |x: f64| (0.5 * x).sin();
    let s3 = |x: f64| (1.5 * x).sin() / 3.0;
    let num = SQRT_2 * s3(beta_d_h) - s3(beta_a_h);
    let den = (s1(beta_a_h) - s3(beta_a_h)) - SQRT_2 * (s1(beta_d_h) - s3(beta_d_h));
    if den.abs() < 1e-14 || !den.is_finite() {
        return Err(Error::DegenerateMesh { denominator: den });
    }
    Ok(num / den)
}

/// [`sun_trueman_weight`] for an isotropic target: a wave with phase
/// constant `beta` advances `beta h` per step along a grid line and
/// `beta h / sqrt 2` per axis step when it travels diagonally.
pub fn sun_trueman_weight_isotropic(beta_h: f64) -> Result<f64> {
    sun_trueman_weight(beta_h, beta_h / SQRT_2)
}

/// Frequency used to calibrate the Koh weight.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum KohTarget {
    /// The frequency the second-order scheme produces for a grid-aligned
    /// wave of the same magnitude, `sin(omega k/2) = sigma sin(Kh/2)`; the
    /// calibrated weight then does not depend on the Courant number.
    AxisMatched,
    /// The exact frequency `omega k = sigma Kh`.
    Exact,
}

impl KohTarget {
    pub fn omega_k(self, kh: f64, courant: f64) -> Result<f64> {
        match self {
            KohTarget::Exact => Ok(courant * kh),
            KohTarget::AxisMatched => {
                let s = courant * (0.5 * kh).sin();
                if s.abs() > 1.0 {
                    return Err(Error::NoRealSolution { discriminant: 1.0 - s * s });
                }
                Ok(2.0 * s.asin())
            }
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct KohSample {
    pub azimuth: f64,
    pub xi_h: f64,
    pub eta_h: f64,
    pub omega_k: f64,
    pub alpha: f64,
}

/// Per-mode weights at magnitude `kh` on `n_angles` midpoint azimuths in
/// `(0, pi/2)`; modes without a real weight are skipped.
pub fn koh_alpha_samples(kh: f64, courant: f64, n_angles: usize, target: KohTarget) -> Result<Vec<KohSample>> {
    if n_angles < 16 {
        return Err(Error::invalid(format!("need at least 16 azimuths, got {n_angles}")));
    }
    if !(kh > 0.0 && kh.is_finite()) || !(courant > 0.0 && courant.is_finite()) {
        return Err(Error::invalid(format!("need Kh > 0 and Courant > 0, got {kh}, {courant}")));
    }
    let omega_k = target.omega_k(kh, courant)?;
    let mut out = Vec::with_capacity(n_angles);
    for i in 0..n_angles {
        let azimuth = FRAC_PI_2 * (i as f64 + 0.5) / n_angles as f64;
        let (xi_h, eta_h) = (kh * azimuth.cos(), kh * azimuth.sin());
        match koh_alpha_of_mode(xi_h, eta_h, omega_k, courant) {
            Ok(alpha) => out.push(KohSample { azimuth, xi_h, eta_h, omega_k, alpha }),
            Err(Error::SingularMode { .. } | Error::NoRealSolution { .. }) => {}
            Err(e) => return Err(e),
        }
    }
    Ok(out)
}

/// Mean Koh weight over the azimuth at resolution `kh`.
pub fn koh_mean_alpha(kh: f64, courant: f64, n_angles: usize, target: KohTarget) -> Result<f64> {
    let samples = koh_alpha_samples(kh, courant, n_angles, target)?;
    if samples.is_empty() {
        return Err(Error::NoData(format!("no azimuth admits a real weight at Kh = {kh}, Courant = {courant}")));
    }
    Ok(samples.iter().map(|s| s.alpha).sum::<f64>() / samples.len() as f64)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::spectral::{koh_residual, sun_trueman_dispersion, GridDirection};
    use std::f64::consts::PI;

    #[test]
    fn sun_trueman_weight_balances_axis_and_diagonal() {
        for bh in [0.3, PI / 5.0, 1.2] {
            let (ba, bd) = (bh, bh / SQRT_2);
            let w = sun_trueman_weight(ba, bd).unwrap();
            let axis = sun_trueman_dispersion(w, ba, GridDirection::Axis).powi(2);
            let diag = sun_trueman_dispersion(w, bd, GridDirection::Diagonal).powi(2);
            assert!((axis - diag).abs() < 1e-12);
        }
    }

    #[test]
    fn sun_trueman_small_mesh_limit() {
        assert!(matches!(sun_trueman_weight(1e-6, 1e-6 / SQRT_2), Err(Error::DegenerateMesh { .. })));
        let w = sun_trueman_weight_isotropic(0.02).unwrap();
        assert!((w - 1.125).abs() < 1e-3, "{w}");
    }

    #[test]
    fn koh_mean_near_one_sixth() {
        let a = koh_mean_alpha(2.0 * PI / 20.0, 0.5, 64, KohTarget::AxisMatched).unwrap();
        assert!((a - 0.167).abs() < 0.01, "{a}");
    }

    #[test]
    fn koh_axis_matched_ignores_courant() {
        let a = koh_mean_alpha(0.5, 0.3, 64, KohTarget::AxisMatched).unwrap();
        let b = koh_mean_alpha(0.5, 0.7, 64, KohTarget::AxisMatched).unwrap();
        assert!((a - b).abs() < 1e-8);
    }

    #[test]
    fn koh_samples_back_substitute() {
        for s in koh_alpha_samples(0.6, 0.7, 32, KohTarget::AxisMatched).unwrap() {
            assert!(koh_residual(s.alpha, s.xi_h, s.eta_h, s.omega_k, 0.7).abs() < 1e-12);
        }
    }

    #[test]
    fn koh_rejects_sparse_sampling() {
        assert!(koh_mean_alpha(0.5, 0.5, 8, KohTarget::Exact).is_err());
    }
}
