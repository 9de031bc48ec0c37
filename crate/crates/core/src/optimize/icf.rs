//! Isotropy corrector factor (ICF) for multidimensional explicit schemes.
//!
//! The axis curve is the numerical dispersion along a grid line, the
//! diagonal curve the one along `xi = eta`; `C(beta)` integrates the squared
//! gap between their phase (or group) velocities over `[0, kh_max]`.

use std::f64::consts::FRAC_PI_4;

use super::{minimize_scalar, Minimum};
use crate::error::{Error, Result};
use crate::quadrature::simpson_nodes;
use crate::scheme::{MultiDimScheme, SchemeSpec};
use crate::spectral::{advection_frequency, DispersionSymbol, GROUP_STEP};

pub const ICF_BETA_RANGE: (f64, f64) = (0.0, 4.0);

const PANELS: usize = 512;
const SCAN: usize = 400;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum IcfMode {
    Phase,
    Group,
}

#[derive(Debug, Clone)]
pub struct IcfObjective {
    pub scheme: SchemeSpec,
    pub kh_max: f64,
    pub mode: IcfMode,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct IcfResult {
    pub beta_star: f64,
    /// `C(beta*)`
    pub objective: f64,
    /// `C(0)`, the conventional scheme.
    pub objective_at_zero: f64,
    pub degenerate: bool,
}

fn check_kh_max(kh_max: f64) -> Result<()> {
    if !(kh_max > 0.0 && kh_max <= std::f64::consts::PI) {
        return Err(Error::invalid(format!("kh_max must lie in (0, pi], got {kh_max}")));
    }
    Ok(())
}

/// Phase or group velocity along `angle`; the `Kh = 0` phase velocity is
/// its limit 1.
fn velocity<S: DispersionSymbol + ?Sized>(symbol: &S, kh: f64, angle: f64, mode: IcfMode) -> Result<f64> {
    match mode {
        IcfMode::Phase if kh == 0.0 => Ok(1.0),
        IcfMode::Phase => Ok(advection_frequency(symbol, kh, angle)? / kh),
        IcfMode::Group => {
            let up = advection_frequency(symbol, kh + GROUP_STEP, angle)?;
            let down = advection_frequency(symbol, kh - GROUP_STEP, angle)?;
            Ok((up - down) / (2.0 * GROUP_STEP))
        }
    }
}

fn nodes(kh_max: f64) -> Vec<f64> {
    (0..=PANELS).map(|i| kh_max * i as f64 / PANELS as f64).collect()
}

/// `C(beta)` for the family `make(beta)` by composite Simpson on 512 panels.
pub fn icf_functional<S, F>(make: F, beta: f64, kh_max: f64, mode: IcfMode) -> Result<f64>
where
    S: DispersionSymbol,
    F: Fn(f64) -> Result<S>,
{
    check_kh_max(kh_max)?;
    let symbol = make(beta)?;
    let values = nodes(kh_max)
        .into_iter()
        .map(|kh| Ok((velocity(&symbol, kh, 0.0, mode)? - velocity(&symbol, kh, FRAC_PI_4, mode)?).powi(2)))
        .collect::<Result<Vec<_>>>()?;
    simpson_nodes(&values, kh_max / PANELS as f64)
}

/// Generic optimiser over `beta` in [`ICF_BETA_RANGE`].
pub fn icf_optimize_with<S, F>(make: F, kh_max: f64, mode: IcfMode) -> Result<IcfResult>
where
    S: DispersionSymbol,
    F: Fn(f64) -> Result<S>,
{
    let c = |beta| icf_functional(&make, beta, kh_max, mode);
    let Minimum { x, value, degenerate } = minimize_scalar(c, ICF_BETA_RANGE.0, ICF_BETA_RANGE.1, 40)?;
    Ok(IcfResult { beta_star: x, objective: value, objective_at_zero: c(0.0)?, degenerate })
}

/// Velocities on the quadrature nodes, split by their dependence on beta.
///
/// The multidimensional symbol is `(S_axis + beta S_diag)/(1 + beta)` for
/// fixed base weights, so the diagonal velocity is
/// `(v(0) + beta d)/(1 + beta)` with `d = 2 v(1) - v(0)`; the axis
/// velocity does not depend on beta at all.
#[derive(Debug, Clone)]
struct Prepared {
    axis: Vec<f64>,
    diag0: Vec<f64>,
    diag_inf: Vec<f64>,
    step: f64,
}

impl Prepared {
    fn value(&self, beta: f64) -> Result<f64> {
        let values: Vec<f64> = self
            .axis
            .iter()
            .zip(self.diag0.iter().zip(&self.diag_inf))
            .map(|(a, (d0, di))| (a - (d0 + beta * di) / (1.0 + beta)).powi(2))
            .collect();
        simpson_nodes(&values, self.step)
    }
}

impl IcfObjective {
    pub fn new(scheme: SchemeSpec, kh_max: f64, mode: IcfMode) -> Result<Self> {
        check_kh_max(kh_max)?;
        if !scheme.is_explicit() {
            return Err(Error::invalid(format!("ICF needs an explicit scheme, `{}` is compact", scheme.label)));
        }
        Ok(Self { scheme, kh_max, mode })
    }

    fn prepare(&self) -> Result<Prepared> {
        check_kh_max(self.kh_max)?;
        let off = MultiDimScheme::new(self.scheme.clone(), 0.0)?;
        let on = MultiDimScheme::new(self.scheme.clone(), 1.0)?;
        let (mut axis, mut diag0, mut diag_inf) = (Vec::new(), Vec::new(), Vec::new());
        for kh in nodes(self.kh_max) {
            axis.push(velocity(&off, kh, 0.0, self.mode)?);
            let d0 = velocity(&off, kh, FRAC_PI_4, self.mode)?;
            let d1 = velocity(&on, kh, FRAC_PI_4, self.mode)?;
            diag0.push(d0);
            diag_inf.push(2.0 * d1 - d0);
        }
        Ok(Prepared { axis, diag0, diag_inf, step: self.kh_max / PANELS as f64 })
    }

    /// `C(beta)`.
    pub fn value(&self, beta: f64) -> Result<f64> {
        if !(beta.is_finite() && beta >= 0.0) {
            return Err(Error::invalid(format!("beta must be finite and >= 0, got {beta}")));
        }
        self.prepare()?.value(beta)
    }

    /// `C(beta)` on many points with the node velocities computed once.
    pub fn values(&self, betas: &[f64]) -> Result<Vec<f64>> {
        let p = self.prepare()?;
        betas.iter().map(|&b| p.value(b)).collect()
    }
}

/// Minimises `C(beta)` over [`ICF_BETA_RANGE`].
pub fn icf_optimize(obj: &IcfObjective) -> Result<IcfResult> {
    let p = obj.prepare()?;
    let Minimum { x, value, degenerate } =
        minimize_scalar(|b| p.value(b), ICF_BETA_RANGE.0, ICF_BETA_RANGE.1, SCAN)?;
    Ok(IcfResult { beta_star: x, objective: value, objective_at_zero: p.value(0.0)?, degenerate })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::scheme::builtin_catalog;
    use crate::spectral::ExactOperator;
    use std::f64::consts::FRAC_PI_2;

    fn objective(label: &str, mode: IcfMode) -> IcfObjective {
        IcfObjective::new(builtin_catalog().scheme(label).unwrap().clone(), FRAC_PI_2, mode).unwrap()
    }

    #[test]
    fn split_form_matches_direct_evaluation() {
        // group velocities are central differences, good to ~eps/GROUP_STEP
        for (mode, tol) in [(IcfMode::Phase, 1e-12), (IcfMode::Group, 1e-7)] {
            let obj = objective("E4", mode);
            for beta in [0.0, 0.3, 1.7, 4.0] {
                let direct =
                    icf_functional(|b| MultiDimScheme::new(obj.scheme.clone(), b), beta, obj.kh_max, mode).unwrap();
                let split = obj.value(beta).unwrap();
                assert!((direct - split).abs() <= tol * direct, "{mode:?} {beta}: {direct} {split}");
            }
        }
    }

    #[test]
    fn e2_prefers_positive_beta() {
        let r = icf_optimize(&objective("E2", IcfMode::Phase)).unwrap();
        assert!(r.beta_star > 0.0);
        assert!(r.objective < r.objective_at_zero);
    }

    #[test]
    fn exact_operator_is_flat() {
        let r = icf_optimize_with(|_| Ok(ExactOperator), 1.0, IcfMode::Phase).unwrap();
        assert_eq!(r.beta_star, 0.0);
        assert!(r.degenerate);
        assert!(r.objective < 1e-28);
    }

    #[test]
    fn validation() {
        let e2 = builtin_catalog().scheme("E2").unwrap().clone();
        assert!(IcfObjective::new(e2.clone(), 0.0, IcfMode::Phase).is_err());
        assert!(IcfObjective::new(e2, 3.5, IcfMode::Phase).is_err());
        let c4 = builtin_catalog().scheme("C4").unwrap().clone();
        assert!(IcfObjective::new(c4, 1.0, IcfMode::Phase).is_err());
    }
}
