//! Parameter optimisation of anisotropy error functionals.

mod fdtd;
mod gs;
mod icf;

pub use fdtd::{
    koh_alpha_samples, koh_mean_alpha, sun_trueman_weight, sun_trueman_weight_isotropic, KohSample, KohTarget,
};
pub use gs::{gs_coefficients, gs_isotropy_error, gs_optimize, gs_wavenumber, GsResult, GsScheme, GS_ALPHA_RANGE};
pub use icf::{icf_functional, icf_optimize, icf_optimize_with, IcfMode, IcfObjective, IcfResult, ICF_BETA_RANGE};

use crate::error::{Error, Result};

/// Absolute tolerance of the golden-section refinement.
pub const GOLDEN_TOL: f64 = 1e-8;

/// Objectives whose sampled spread is below this are treated as flat.
pub const FLAT_SPREAD: f64 = 1e-14;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Minimum {
    pub x: f64,
    pub value: f64,
    /// The objective was flat on the scan; `x` is the lower bracket end.
    pub degenerate: bool,
}

/// Minimises `f` on `[lo, hi]`: a uniform scan of `scan` intervals picks
/// the best bracket (ties resolve to the smaller parameter), then golden
/// section refines it to [`GOLDEN_TOL`].
pub fn minimize_scalar<F>(f: F, lo: f64, hi: f64, scan: usize) -> Result<Minimum>
where
    F: Fn(f64) -> Result<f64>,
{
    if !(lo < hi) || scan < 2 {
        return Err(Error::invalid(format!("bad search interval [{lo}, {hi}] with {scan} scan intervals")));
    }
    let eval = |x: f64| -> Result<f64> {
        let v = f(x)?;
        if v.is_finite() {
            Ok(v)
        } else {
            Err(Error::Quadrature(format!("objective is {v} at {x}")))
        }
    };
    let step = (hi - lo) / scan as f64;
    let xs: Vec<f64> = (0..=scan).map(|i| if i == scan { hi } else { lo + step * i as f64 }).collect();
    let values = xs.iter().map(|&x| eval(x)).collect::<Result<Vec<_>>>()?;
    let (mut best, mut best_v) = (0, values[0]);
    let (mut vmin, mut vmax) = (values[0], values[0]);
    for (i, &v) in values.iter().enumerate() {
        if v < best_v {
            best = i;
            best_v = v;
        }
        vmin = vmin.min(v);
        vmax = vmax.max(v);
    }
    if vmax - vmin < FLAT_SPREAD {
        return Ok(Minimum { x: lo, value: values[0], degenerate: true });
    }

    let inv_phi = (5f64.sqrt() - 1.0) / 2.0;
    let mut a = xs[best.saturating_sub(1)];
    let mut b = xs[(best + 1).min(scan)];
    let mut c = b - inv_phi * (b - a);
    let mut d = a + inv_phi * (b - a);
    let mut fc = eval(c)?;
    let mut fd = eval(d)?;
    while b - a > GOLDEN_TOL {
        if fc <= fd {
            b = d;
            d = c;
            fd = fc;
            c = b - inv_phi * (b - a);
            fc = eval(c)?;
        } else {
            a = c;
            c = d;
            fc = fd;
            d = a + inv_phi * (b - a);
            fd = eval(d)?;
        }
    }
    let (x, value) = if fc <= fd { (c, fc) } else { (d, fd) };
    if value <= best_v {
        Ok(Minimum { x, value, degenerate: false })
    } else {
        Ok(Minimum { x: xs[best], value: best_v, degenerate: false })
    }
}
