//! Modified wavenumbers, 2D dispersion symbols and direction-dependent
//! phase/group velocities.
//!
//! Wavenumbers are scaled by the grid step throughout (`z = xi h`), and
//! velocities are normalised by the exact propagation speed.

pub mod maxwell;
mod polar;

pub use maxwell::{
    kim3d_dispersion_residual, kim3d_frequency, kim3d_phase_velocity, koh_alpha_of_mode, koh_residual,
    sun_trueman_dispersion, GridDirection,
};
pub use polar::{anisotropy_polar, PolarRow, VelocityPolar};

use std::f64::consts::PI;

use num_complex::Complex64;

use crate::csv::fmt_f64;
use crate::error::{Error, Result};
use crate::scheme::{MultiDimScheme, PrefactoredScheme, SchemeSpec, Stencil2D, StencilKind};

/// Central-difference step (in `Kh`) used for numerical group velocities.
pub const GROUP_STEP: f64 = 1e-6;

/// `K(z) = sum 2 a_n sin(nz) / (1 + sum 2 alpha_n cos(nz))`.
pub fn modified_wavenumber(scheme: &SchemeSpec, z: f64) -> Result<f64> {
    let num: f64 = scheme
        .a_f64()
        .iter()
        .enumerate()
        .map(|(k, a)| 2.0 * a * ((k + 1) as f64 * z).sin())
        .sum();
    if scheme.is_explicit() {
        return Ok(num);
    }
    let den = 1.0
        + scheme
            .alpha_f64()
            .iter()
            .enumerate()
            .map(|(k, al)| 2.0 * al * ((k + 1) as f64 * z).cos())
            .sum::<f64>();
    if den.abs() < 1e-12 {
        return Err(Error::Singularity { z });
    }
    Ok(num / den)
}

/// One point of a modified-wavenumber curve.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct WavenumberSample {
    pub z: f64,
    pub k_num: Complex64,
}

/// `samples` points of `K(z)` on `[0, pi]`, endpoints included.
pub fn wavenumber_curve(scheme: &SchemeSpec, samples: usize) -> Result<Vec<WavenumberSample>> {
    if samples < 2 {
        return Err(Error::invalid("a wavenumber curve needs at least two samples"));
    }
    (0..samples)
        .map(|i| {
            let z = PI * i as f64 / (samples - 1) as f64;
            Ok(WavenumberSample { z, k_num: Complex64::new(modified_wavenumber(scheme, z)?, 0.0) })
        })
        .collect()
}

/// CSV with header `z,k_num` (real part of the modified wavenumber).
pub fn wavenumber_csv(samples: &[WavenumberSample]) -> String {
    let mut out = String::from("z,k_num\n");
    for s in samples {
        out.push_str(&format!("{},{}\n", fmt_f64(s.z), fmt_f64(s.k_num.re)));
    }
    out
}

/// Forward and backward modified wavenumbers of a prefactored scheme, such
/// that `i K` is the Fourier symbol of each sweep.
pub fn prefactored_symbol(pref: &PrefactoredScheme, z: f64) -> Result<(Complex64, Complex64)> {
    let (a, b, c) = (pref.a_coef, pref.b_coef, pref.c_coef);
    let e = Complex64::from_polar(1.0, z);
    let ei = e.conj();
    let i = Complex64::i();
    let f_den = a * e + c * ei + (1.0 - a - c);
    let b_den = c * e + a * ei + (1.0 - a - c);
    if f_den.norm() < 1e-12 || b_den.norm() < 1e-12 {
        return Err(Error::Singularity { z });
    }
    let f_num = b * e - (2.0 * b - 1.0) - (1.0 - b) * ei;
    let b_num = (1.0 - b) * e + (2.0 * b - 1.0) - b * ei;
    Ok((f_num / f_den / i, b_num / b_den / i))
}

/// Real modified wavenumber of the forward/backward average.
pub fn prefactored_real(pref: &PrefactoredScheme, z: f64) -> Result<f64> {
    let (f, b) = prefactored_symbol(pref, z)?;
    Ok(0.5 * (f.re + b.re))
}

/// Real modified wavenumber of a multidimensional scheme for the x
/// derivative: `(2/(1+beta)) sum a_n { sin(n xi) + beta/2 [sin(n(xi+eta)) + sin(n(xi-eta))] }`.
///
/// The operator symbol is `i` times this value; centred weights cancel
/// the cosine parts.
pub fn multidim_symbol(md: &MultiDimScheme, xi_h: f64, eta_h: f64) -> f64 {
    let beta = md.icf_beta;
    let sum: f64 = md
        .base
        .a_f64()
        .iter()
        .enumerate()
        .map(|(k, a)| {
            let n = (k + 1) as f64;
            a * ((n * xi_h).sin() + 0.5 * beta * ((n * (xi_h + eta_h)).sin() + (n * (xi_h - eta_h)).sin()))
        })
        .sum();
    2.0 * sum / (1.0 + beta)
}

/// Real part of the multidimensional prefactored x-derivative symbol,
/// `(1/(1+beta)) { f(xi) + beta/2 [f(xi+eta) + f(xi-eta)] }` with `f` the
/// averaged 1D prefactored wavenumber.
pub fn multidim_prefactored_real(pref: &PrefactoredScheme, beta: f64, xi_h: f64, eta_h: f64) -> Result<f64> {
    let f = |z| prefactored_real(pref, z);
    Ok((f(xi_h)? + 0.5 * beta * (f(xi_h + eta_h)? + f(xi_h - eta_h)?)) / (1.0 + beta))
}

/// Discrete Fourier symbol `sum w exp(i(di xi + dj eta)) / h^d` of a
/// stencil, with `d` the derivative order of its kind.
pub fn stencil_symbol(st: &Stencil2D, xi_h: f64, eta_h: f64, h: f64) -> Complex64 {
    // exp(i t) = 1 + (-2 sin^2(t/2) + i sin t) avoids cancellation for
    // consistent stencils, whose weights sum to zero
    let mut total = 0.0;
    let mut re = 0.0;
    let mut im = 0.0;
    for e in &st.entries {
        let t = f64::from(e.di) * xi_h + f64::from(e.dj) * eta_h;
        let s = (0.5 * t).sin();
        total += e.weight;
        re += e.weight * (-2.0 * s * s);
        im += e.weight * t.sin();
    }
    Complex64::new(total + re, im) / h.powi(st.kind.derivative_order() as i32)
}

/// Anything that supplies real modified wavenumbers `(K_x h, K_y h)` of the
/// x and y first-derivative operators at a scaled wavevector.
pub trait DispersionSymbol: Sync {
    fn gradient(&self, xi_h: f64, eta_h: f64) -> Result<(f64, f64)>;

    fn label(&self) -> String;
}

/// Spectral (exact) differentiation.
#[derive(Debug, Clone, Copy, Default)]
pub struct ExactOperator;

impl DispersionSymbol for ExactOperator {
    fn gradient(&self, xi_h: f64, eta_h: f64) -> Result<(f64, f64)> {
        Ok((xi_h, eta_h))
    }

    fn label(&self) -> String {
        "exact".into()
    }
}

impl DispersionSymbol for SchemeSpec {
    fn gradient(&self, xi_h: f64, eta_h: f64) -> Result<(f64, f64)> {
        Ok((modified_wavenumber(self, xi_h)?, modified_wavenumber(self, eta_h)?))
    }

    fn label(&self) -> String {
        self.label.clone()
    }
}

impl DispersionSymbol for MultiDimScheme {
    fn gradient(&self, xi_h: f64, eta_h: f64) -> Result<(f64, f64)> {
        Ok((multidim_symbol(self, xi_h, eta_h), multidim_symbol(self, eta_h, xi_h)))
    }

    fn label(&self) -> String {
        format!("{}+icf({})", self.base.label, self.icf_beta)
    }
}

/// MacCormack pairing of the sweeps: the imaginary parts cancel.
impl DispersionSymbol for PrefactoredScheme {
    fn gradient(&self, xi_h: f64, eta_h: f64) -> Result<(f64, f64)> {
        Ok((prefactored_real(self, xi_h)?, prefactored_real(self, eta_h)?))
    }

    fn label(&self) -> String {
        self.label.clone()
    }
}

/// Multidimensional prefactored scheme (isotropy-corrected sweeps).
#[derive(Debug, Clone)]
pub struct MultiDimPrefactored {
    pub base: PrefactoredScheme,
    pub icf_beta: f64,
}

impl DispersionSymbol for MultiDimPrefactored {
    fn gradient(&self, xi_h: f64, eta_h: f64) -> Result<(f64, f64)> {
        Ok((
            multidim_prefactored_real(&self.base, self.icf_beta, xi_h, eta_h)?,
            multidim_prefactored_real(&self.base, self.icf_beta, eta_h, xi_h)?,
        ))
    }

    fn label(&self) -> String {
        format!("{}+icf({})", self.base.label, self.icf_beta)
    }
}

/// A first-derivative stencil used for x and, transposed, for y.
impl DispersionSymbol for Stencil2D {
    fn gradient(&self, xi_h: f64, eta_h: f64) -> Result<(f64, f64)> {
        if self.kind != StencilKind::FirstDerivativeX {
            return Err(Error::invalid(format!("{:?} stencil is not a first-derivative operator", self.kind)));
        }
        Ok((stencil_symbol(self, xi_h, eta_h, 1.0).im, stencil_symbol(self, eta_h, xi_h, 1.0).im))
    }

    fn label(&self) -> String {
        "stencil".into()
    }
}

impl<T: DispersionSymbol + ?Sized> DispersionSymbol for &T {
    fn gradient(&self, xi_h: f64, eta_h: f64) -> Result<(f64, f64)> {
        (**self).gradient(xi_h, eta_h)
    }

    fn label(&self) -> String {
        (**self).label()
    }
}

impl<T: DispersionSymbol + ?Sized> DispersionSymbol for Box<T> {
    fn gradient(&self, xi_h: f64, eta_h: f64) -> Result<(f64, f64)> {
        (**self).gradient(xi_h, eta_h)
    }

    fn label(&self) -> String {
        (**self).label()
    }
}

/// Normalised advection frequency `omega h / c` of the mode with wavevector
/// magnitude `kh` travelling along `angle` (velocity parallel to it).
pub fn advection_frequency<S: DispersionSymbol + ?Sized>(symbol: &S, kh: f64, angle: f64) -> Result<f64> {
    let (c, s) = (angle.cos(), angle.sin());
    let (kx, ky) = symbol.gradient(kh * c, kh * s)?;
    Ok(c * kx + s * ky)
}

/// Normalised numerical wave-equation frequency `sqrt(Kx^2 + Ky^2)`.
pub fn wave_frequency<S: DispersionSymbol + ?Sized>(symbol: &S, xi_h: f64, eta_h: f64) -> Result<f64> {
    let (kx, ky) = symbol.gradient(xi_h, eta_h)?;
    Ok(kx.hypot(ky))
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PhaseGroup {
    /// `c_n / c`
    pub phase: f64,
    /// `g_n / c`, the derivative of the frequency along the direction.
    pub group: f64,
}

/// Normalised phase and group velocity of the advected mode.
///
/// For second-order central differences this is
/// `c_n/c = [cos a sin(Kh cos a) + sin a sin(Kh sin a)] / Kh` and
/// `g_n/c = cos^2 a cos(Kh cos a) + sin^2 a cos(Kh sin a)`; in general the
/// group velocity is a central difference of step [`GROUP_STEP`].
pub fn advection_phase_group<S: DispersionSymbol + ?Sized>(symbol: &S, kh: f64, angle: f64) -> Result<PhaseGroup> {
    if kh == 0.0 {
        return Err(Error::UndefinedPhaseVelocity);
    }
    if !(kh.is_finite() && angle.is_finite()) || kh < 0.0 {
        return Err(Error::invalid(format!("need finite Kh > 0 and angle, got Kh = {kh}, angle = {angle}")));
    }
    let omega = advection_frequency(symbol, kh, angle)?;
    let up = advection_frequency(symbol, kh + GROUP_STEP, angle)?;
    let down = advection_frequency(symbol, kh - GROUP_STEP, angle)?;
    Ok(PhaseGroup { phase: omega / kh, group: (up - down) / (2.0 * GROUP_STEP) })
}

/// A point on a 2D (wave-equation) dispersion surface.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct DispersionPoint2D {
    pub xi_h: f64,
    pub eta_h: f64,
    pub omega_norm: f64,
    pub angle: f64,
    pub kh: f64,
}

/// Samples the numerical frequency surface on a polar grid of
/// `n_radial x n_angles` points up to `kh_max`.
pub fn dispersion_surface<S: DispersionSymbol + ?Sized>(
    symbol: &S,
    kh_max: f64,
    n_radial: usize,
    n_angles: usize,
) -> Result<Vec<DispersionPoint2D>> {
    if n_radial == 0 || n_angles == 0 || !(kh_max > 0.0) {
        return Err(Error::invalid("dispersion surface needs kh_max > 0 and non-empty sampling"));
    }
    let mut out = Vec::with_capacity(n_radial * n_angles);
    for r in 1..=n_radial {
        let kh = kh_max * r as f64 / n_radial as f64;
        for a in 0..n_angles {
            let angle = 2.0 * PI * a as f64 / n_angles as f64;
            let (xi_h, eta_h) = (kh * angle.cos(), kh * angle.sin());
            out.push(DispersionPoint2D { xi_h, eta_h, omega_norm: wave_frequency(symbol, xi_h, eta_h)?, angle, kh });
        }
    }
    Ok(out)
}
