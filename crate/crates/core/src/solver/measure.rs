//! Empirical measurements on simulated fields.

use std::f64::consts::{PI, SQRT_2};

use num_complex::Complex64;

use super::{l2_norm, march, InitialCondition, SimulationConfig};
use crate::error::{Error, Result};
use crate::scheme::{Stencil2D, StencilKind};
use crate::spectral::{advection_phase_group, stencil_symbol};

/// Number of final steps the growth rate is averaged over.
pub const GROWTH_WINDOW: usize = 100;

/// The grid mode nearest to a requested wavevector.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SnappedMode {
    pub mx: i64,
    pub my: i64,
    pub kh: f64,
    pub angle: f64,
    /// Whether the mode differs from the request.
    pub snapped: bool,
}

/// Nearest exactly periodic mode to magnitude `kh` along `angle` on an
/// `n x n` grid.
pub fn snap_mode(n: usize, kh: f64, angle: f64) -> SnappedMode {
    let scale = n as f64 / (2.0 * PI);
    let mx = (kh * angle.cos() * scale).round() as i64;
    let my = (kh * angle.sin() * scale).round() as i64;
    let skh = 2.0 * PI * ((mx * mx + my * my) as f64).sqrt() / n as f64;
    let sangle = (my as f64).atan2(mx as f64);
    let same_angle = (sangle - angle).rem_euclid(2.0 * PI);
    let snapped = (skh - kh).abs() > 1e-12 * kh.max(1.0) || same_angle.min(2.0 * PI - same_angle) > 1e-12;
    SnappedMode { mx, my, kh: skh, angle: sangle, snapped }
}

/// Projection `sum u exp(-i k . x)` of a field onto the grid mode `(mx, my)`.
pub fn mode_phase(u: &[f64], n: usize, mx: i64, my: i64) -> Complex64 {
    let table: Vec<Complex64> = (0..n).map(|p| Complex64::from_polar(1.0, -2.0 * PI * p as f64 / n as f64)).collect();
    let mut acc = Complex64::new(0.0, 0.0);
    for j in 0..n {
        for i in 0..n {
            let p = (mx * i as i64 + my * j as i64).rem_euclid(n as i64) as usize;
            acc += u[j * n + i] * table[p];
        }
    }
    acc
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct AnisotropyRow {
    pub requested_angle: f64,
    pub mode: SnappedMode,
    pub empirical: f64,
    pub predicted: f64,
}

fn slope(xs: &[f64], ys: &[f64]) -> f64 {
    let n = xs.len() as f64;
    let mx = xs.iter().sum::<f64>() / n;
    let my = ys.iter().sum::<f64>() / n;
    let sxy: f64 = xs.iter().zip(ys).map(|(x, y)| (x - mx) * (y - my)).sum();
    let sxx: f64 = xs.iter().map(|x| (x - mx).powi(2)).sum();
    sxy / sxx
}

/// Measures the phase speed of plane waves at resolution `ppw` along each
/// angle by a least-squares fit of the mode's phase against time, next to
/// the semi-discrete prediction for the same (snapped) mode.
pub fn measure_anisotropy(template: &SimulationConfig, ppw: f64, angles: &[f64]) -> Result<Vec<AnisotropyRow>> {
    if !(ppw >= 2.5 && ppw.is_finite()) {
        return Err(Error::invalid(format!("ppw must be >= 2.5, got {ppw}")));
    }
    if template.steps < 200 {
        return Err(Error::invalid(format!("phase fits need at least 200 steps, got {}", template.steps)));
    }
    if !(template.c > 0.0) {
        return Err(Error::invalid("phase speed measurement needs a non-zero velocity"));
    }
    let kh = 2.0 * PI / ppw;
    let symbol = template.operator.symbol();
    angles
        .iter()
        .map(|&requested_angle| {
            let mode = snap_mode(template.n, kh, requested_angle);
            if mode.mx == 0 && mode.my == 0 {
                return Err(Error::invalid(format!("ppw {ppw} has no grid mode on n = {}", template.n)));
            }
            let mut cfg = template.clone();
            cfg.angle = mode.angle;
            cfg.noise = 0.0;
            let (mut times, mut phases) = (Vec::new(), Vec::new());
            let mut last = 0.0;
            let mut unwrapped = 0.0;
            march(&cfg, &InitialCondition::Mode { mx: mode.mx, my: mode.my }, |step, u| {
                let arg = mode_phase(u, cfg.n, mode.mx, mode.my).arg();
                if step > 0 {
                    unwrapped += (arg - last + PI).rem_euclid(2.0 * PI) - PI;
                } else {
                    unwrapped = arg;
                }
                last = arg;
                times.push(step as f64 * cfg.k);
                phases.push(unwrapped);
                Ok(())
            })?;
            let omega = -slope(&times, &phases);
            let empirical = omega * cfg.h / (cfg.c * mode.kh);
            let predicted = advection_phase_group(&symbol, mode.kh, mode.angle)?.phase;
            Ok(AnisotropyRow { requested_angle, mode, empirical, predicted })
        })
        .collect()
}

/// Log-log slope of the axis-vs-diagonal discrepancy of a Laplacian
/// stencil, `|L(Kh, 0) - L(Kh/sqrt 2, Kh/sqrt 2)| / Kh^2`, against `Kh`.
///
/// Returns `+inf` when the stencil is isotropic to machine precision at
/// every sample.
pub fn fit_anisotropy_order(stencil: &Stencil2D, kh_values: &[f64]) -> Result<f64> {
    if stencil.kind != StencilKind::Laplacian {
        return Err(Error::invalid(format!("anisotropy order needs a Laplacian stencil, got {:?}", stencil.kind)));
    }
    if kh_values.len() < 2 || kh_values.iter().any(|&k| !(k > 0.0 && k < 1.0)) {
        return Err(Error::invalid("need at least two Kh values in (0, 1)"));
    }
    let lo = kh_values.iter().copied().fold(f64::INFINITY, f64::min);
    let hi = kh_values.iter().copied().fold(0.0, f64::max);
    if hi / lo < 10.0 - 1e-9 {
        return Err(Error::invalid(format!("Kh values must span a decade, got [{lo}, {hi}]")));
    }
    let (mut xs, mut ys) = (Vec::new(), Vec::new());
    for &kh in kh_values {
        let s = kh / SQRT_2;
        let d = (stencil_symbol(stencil, kh, 0.0, 1.0) - stencil_symbol(stencil, s, s, 1.0)).norm() / (kh * kh);
        if d >= 1e-15 {
            xs.push(kh.ln());
            ys.push(d.ln());
        }
    }
    if xs.len() < 2 {
        return Ok(f64::INFINITY);
    }
    Ok(slope(&xs, &ys))
}

/// Per-step L2 amplification averaged over the final [`GROWTH_WINDOW`]
/// steps; `+inf` if the run diverges.
pub fn growth_rate(cfg: &SimulationConfig, init: &InitialCondition) -> Result<f64> {
    if cfg.steps < 500 {
        return Err(Error::invalid(format!("growth rates need at least 500 steps, got {}", cfg.steps)));
    }
    let start = cfg.steps - GROWTH_WINDOW;
    let (mut a, mut b) = (0.0, 0.0);
    let run = march(cfg, init, |step, u| {
        if step == start {
            a = l2_norm(u);
        }
        if step == cfg.steps {
            b = l2_norm(u);
        }
        Ok(())
    });
    match run {
        Err(Error::Divergence { .. }) => return Ok(f64::INFINITY),
        Err(e) => return Err(e),
        Ok(()) => {}
    }
    if !(b.is_finite() && a.is_finite()) {
        return Ok(f64::INFINITY);
    }
    if a == b {
        return Ok(1.0);
    }
    if a == 0.0 {
        return Ok(f64::INFINITY);
    }
    Ok((b / a).powf(1.0 / GROWTH_WINDOW as f64))
}
