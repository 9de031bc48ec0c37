//! Isotropy-optimised member of the fourth-order tridiagonal compact family
//! `alpha f'_{j-1} + f'_j + alpha f'_{j+1} = a (f_{j+1} - f_{j-1})/(2h) + b (f_{j+2} - f_{j-2})/(4h)`.

use std::f64::consts::FRAC_PI_2;

use super::{minimize_scalar, Minimum};
use crate::error::{Error, Result};
use crate::quadrature::simpson_2d;

/// Search interval for `alpha`; `2 alpha < 1` keeps the denominator positive.
pub const GS_ALPHA_RANGE: (f64, f64) = (0.0, 0.45);

const PANELS: (usize, usize) = (256, 128);
const SCAN: usize = 45;

/// A family member, identified by its compact weight alone.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct GsScheme {
    pub alpha_c: f64,
}

impl GsScheme {
    pub fn coefficients(&self) -> (f64, f64) {
        gs_coefficients(self.alpha_c)
    }

    pub fn wavenumber(&self, w: f64) -> Result<f64> {
        gs_wavenumber(self.alpha_c, w)
    }
}

/// `(a, b) = (2(2 + alpha)/3, (4 alpha - 1)/3)`.
pub fn gs_coefficients(alpha_c: f64) -> (f64, f64) {
    (2.0 * (2.0 + alpha_c) / 3.0, (4.0 * alpha_c - 1.0) / 3.0)
}

/// `w_d(w) = (a sin w + (b/2) sin 2w) / (1 + 2 alpha cos w)`.
pub fn gs_wavenumber(alpha_c: f64, w: f64) -> Result<f64> {
    let (a, b) = gs_coefficients(alpha_c);
    let den = 1.0 + 2.0 * alpha_c * w.cos();
    if den.abs() < 1e-12 {
        return Err(Error::Singularity { z: w });
    }
    Ok((a * w.sin() + 0.5 * b * (2.0 * w).sin()) / den)
}

/// `E_i = int_0^{w_max} int_0^{pi/2} |cos t w_d(w cos t) + sin t w_d(w sin t) - w| dt dw`.
pub fn gs_isotropy_error(alpha_c: f64, w_max: f64) -> Result<f64> {
    if !(w_max > 0.0 && w_max <= std::f64::consts::PI) {
        return Err(Error::invalid(format!("w_max must lie in (0, pi], got {w_max}")));
    }
    if !alpha_c.is_finite() {
        return Err(Error::invalid("alpha must be finite"));
    }
    // 1 + 2 alpha cos w vanishes at acos(-1/(2 alpha)) once |2 alpha| >= 1
    if (2.0 * alpha_c).abs() >= 1.0 {
        let z = (-1.0 / (2.0 * alpha_c)).acos();
        if z <= w_max {
            return Err(Error::Singularity { z });
        }
    }
    simpson_2d(
        |w, t| {
            let (c, s) = (t.cos(), t.sin());
            Ok((c * gs_wavenumber(alpha_c, w * c)? + s * gs_wavenumber(alpha_c, w * s)? - w).abs())
        },
        (0.0, w_max),
        (0.0, FRAC_PI_2),
        PANELS,
    )
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct GsResult {
    pub alpha_star: f64,
    pub e_i: f64,
    pub degenerate: bool,
}

/// Minimises [`gs_isotropy_error`] over [`GS_ALPHA_RANGE`].
pub fn gs_optimize(w_max: f64) -> Result<GsResult> {
    let Minimum { x, value, degenerate } =
        minimize_scalar(|a| gs_isotropy_error(a, w_max), GS_ALPHA_RANGE.0, GS_ALPHA_RANGE.1, SCAN)?;
    Ok(GsResult { alpha_star: x, e_i: value, degenerate })
}
