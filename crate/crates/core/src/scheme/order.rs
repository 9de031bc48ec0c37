//! Formal order of accuracy from Taylor series coefficients.
//!
//! The series are built from exact moment sums rather than by sampling the
//! symbol: at `z = 2^-12` the `z^7` error term of a sixth-order scheme is
//! far below double-precision resolution of `K(z)`.

use num_complex::Complex64;

use super::{PrefactoredScheme, SchemeSpec, Stencil2D};
use crate::error::{Error, Result};

/// Relative tolerance on series coefficients for exactly specified weights.
pub const SERIES_TOL: f64 = 1e-9;

const MAX_DEGREE: u32 = 15;

pub trait FormalOrder {
    /// Largest `n` such that the truncation error is `O(h^n)`.
    fn measured_order(&self) -> Result<u32>;
}

pub fn verify_formal_order<S: FormalOrder + ?Sized>(scheme: &S) -> Result<u32> {
    scheme.measured_order()
}

fn factorial(n: u32) -> f64 {
    (1..=n).map(f64::from).product()
}

impl FormalOrder for SchemeSpec {
    /// Matches `N(z) - z D(z)` degree by degree, where `N`, `D` are the
    /// numerator and denominator of the modified wavenumber. Printed
    /// decimals only pin the moments down to their last digit, so the
    /// tolerance widens to ten quanta for such schemes.
    fn measured_order(&self) -> Result<u32> {
        let a = self.a_f64();
        let alpha = self.alpha_f64();
        let tol = SERIES_TOL.max(10.0 * self.coefficient_quantum);
        for p in 0..=(MAX_DEGREE / 2) {
            let odd = 2 * p + 1;
            let mut residual = if p == 0 { -1.0 } else { 0.0 };
            let mut scale = if p == 0 { 1.0 } else { 0.0 };
            for (k, w) in a.iter().enumerate() {
                let term = 2.0 * w * ((k + 1) as f64).powi(odd as i32) / factorial(odd);
                residual += term;
                scale += term.abs();
            }
            for (k, w) in alpha.iter().enumerate() {
                let term = 2.0 * w * ((k + 1) as f64).powi(2 * p as i32) / factorial(2 * p);
                residual -= term;
                scale += term.abs();
            }
            if residual.abs() > tol * scale {
                if p == 0 {
                    return Err(Error::Inconsistent {
                        label: self.label.clone(),
                        detail: format!("K'(0) differs from 1 by {residual:e}"),
                    });
                }
                return Ok(2 * p);
            }
        }
        Ok(MAX_DEGREE + 1)
    }
}

/// Taylor coefficients of `sum_m c_m exp(i m z)` up to `z^degree`.
fn exp_series(terms: &[(f64, f64)], degree: u32) -> Vec<Complex64> {
    (0..=degree)
        .map(|k| {
            terms
                .iter()
                .map(|&(coef, m)| coef * Complex64::new(0.0, m).powu(k) / factorial(k))
                .sum()
        })
        .collect()
}

fn divide_series(num: &[Complex64], den: &[Complex64]) -> Vec<Complex64> {
    let mut q = vec![Complex64::new(0.0, 0.0); num.len()];
    for k in 0..num.len() {
        let mut acc = num[k];
        for j in 1..=k {
            acc -= den[j] * q[k - j];
        }
        q[k] = acc / den[0];
    }
    q
}

impl FormalOrder for PrefactoredScheme {
    /// Order of the forward/backward average, whose symbol is the real
    /// part of the forward symbol.
    fn measured_order(&self) -> Result<u32> {
        let (a, b, c) = (self.a_coef, self.b_coef, self.c_coef);
        let num = exp_series(&[(b, 1.0), (-(2.0 * b - 1.0), 0.0), (-(1.0 - b), -1.0)], MAX_DEGREE);
        let den = exp_series(&[(a, 1.0), (c, -1.0), (1.0 - a - c, 0.0)], MAX_DEGREE);
        if den[0].norm() < SERIES_TOL {
            return Err(Error::Singularity { z: 0.0 });
        }
        // i K(z) = num/den, so Re K has the coefficients Im(num/den)
        let q = divide_series(&num, &den);
        for (k, coef) in q.iter().enumerate() {
            let target = if k == 1 { 1.0 } else { 0.0 };
            if (coef.im - target).abs() > SERIES_TOL {
                if k <= 1 {
                    return Err(Error::Inconsistent {
                        label: self.label.clone(),
                        detail: format!("degree-{k} coefficient is {}", coef.im),
                    });
                }
                return Ok(k as u32 - 1);
            }
        }
        Ok(MAX_DEGREE)
    }
}

/// One term `coef * h^(p+q-d) * d^p/dx^p d^q/dy^q u` of a truncation error.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct TruncationTerm {
    pub p: u32,
    pub q: u32,
    pub coef: f64,
}

fn stencil_moment(st: &Stencil2D, p: u32, q: u32) -> (f64, f64) {
    let norm = factorial(p) * factorial(q);
    st.entries.iter().fold((0.0, 0.0), |(m, s), e| {
        let t = e.weight * f64::from(e.di).powi(p as i32) * f64::from(e.dj).powi(q as i32) / norm;
        (m + t, s + t.abs())
    })
}

/// First degree whose moments disagree with the exact operator, with the
/// mismatching terms. `None` when every degree up to the search limit
/// matches.
fn first_mismatch(st: &Stencil2D) -> Option<(u32, Vec<TruncationTerm>)> {
    for degree in 0..=12 {
        let mut terms = Vec::new();
        for p in 0..=degree {
            let q = degree - p;
            let (m, scale) = stencil_moment(st, p, q);
            let diff = m - st.kind.target_moment(p, q);
            if diff.abs() > SERIES_TOL * scale.max(1.0) {
                terms.push(TruncationTerm { p, q, coef: diff });
            }
        }
        if !terms.is_empty() {
            return Some((degree, terms));
        }
    }
    None
}

impl FormalOrder for Stencil2D {
    fn measured_order(&self) -> Result<u32> {
        let d = self.kind.derivative_order();
        match first_mismatch(self) {
            Some((degree, terms)) if degree <= d => Err(Error::Inconsistent {
                label: format!("{:?} stencil", self.kind),
                detail: format!("moment mismatch at degree {degree}: {terms:?}"),
            }),
            Some((degree, _)) => Ok(degree - d),
            None => Ok(13 - d),
        }
    }
}

/// Leading truncation-error terms of a stencil (the lowest-degree moment
/// mismatches), or an empty list when none is found up to degree 12.
pub fn truncation_terms(st: &Stencil2D) -> Vec<TruncationTerm> {
    first_mismatch(st).map(|(_, t)| t).unwrap_or_default()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::scheme::{builtin_catalog, kumar_stencils, trefethen_laplacian, StencilEntry, StencilKind};

    #[test]
    fn explicit_orders() {
        let cat = builtin_catalog();
        assert_eq!(verify_formal_order(cat.scheme("E2").unwrap()).unwrap(), 2);
        assert_eq!(verify_formal_order(cat.scheme("E4").unwrap()).unwrap(), 4);
        assert_eq!(verify_formal_order(cat.scheme("E6").unwrap()).unwrap(), 6);
        assert!(verify_formal_order(cat.scheme("DRP").unwrap()).unwrap() >= 2);
    }

    #[test]
    fn inconsistent_scheme_is_rejected() {
        let s = SchemeSpec::from_text("bad", &[], &["1"], 2).unwrap();
        assert!(matches!(verify_formal_order(&s), Err(Error::Inconsistent { .. })));
    }

    #[test]
    fn sixth_order_compact_family_member() {
        // alpha = 1/3, a = 14/9, b = 1/9 in the (a, b/2) convention
        let s = SchemeSpec::from_text("C6", &["1/3"], &["7/9", "1/36"], 6).unwrap();
        assert_eq!(verify_formal_order(&s).unwrap(), 6);
    }

    #[test]
    fn kumar_leading_terms_are_laplacian_shaped() {
        let k = kumar_stencils();
        // (h^2/6)(u_xxx + u_xyy)
        let dx = truncation_terms(&k.dx);
        assert_eq!(dx.len(), 2);
        for t in &dx {
            assert!((t.p, t.q) == (3, 0) || (t.p, t.q) == (1, 2));
            assert!((t.coef - 1.0 / 6.0).abs() < 1e-14);
        }
        // (h^2/12)(u_xxxx + u_xxyy)
        let dxx = truncation_terms(&k.dxx);
        assert_eq!(dxx.len(), 2);
        for t in &dxx {
            assert!((t.p, t.q) == (4, 0) || (t.p, t.q) == (2, 2));
            assert!((t.coef - 1.0 / 12.0).abs() < 1e-14);
        }
    }

    #[test]
    fn five_point_laplacian_leading_term_is_directional() {
        let st = trefethen_laplacian(1.0, 0.0).unwrap();
        let t = truncation_terms(&st);
        // (h^2/12)(u_xxxx + u_yyyy): no mixed term
        assert_eq!(t.len(), 2);
        assert!(t.iter().all(|t| t.p == 0 || t.q == 0));
    }

    #[test]
    fn stencil_inconsistency() {
        let st = Stencil2D::new(StencilKind::FirstDerivativeX, vec![StencilEntry::new(1, 0, 1.0)]).unwrap();
        assert!(verify_formal_order(&st).is_err());
    }
}
