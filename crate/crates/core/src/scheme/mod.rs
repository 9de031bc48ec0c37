//! Scheme definitions: centred explicit/compact first-derivative schemes,
//! prefactored compact schemes, multidimensional (isotropy-corrected)
//! schemes and free-form 2D stencils.

mod catalog;
pub mod io;
mod order;
mod prefactored;
mod stencil;

pub use catalog::{builtin_catalog, Catalog};
pub use order::{truncation_terms, verify_formal_order, FormalOrder, TruncationTerm};
pub use prefactored::{derive_prefactored, PrefactoredScheme};
pub use stencil::{kumar_stencils, trefethen_laplacian, KumarStencils, Stencil2D, StencilEntry, StencilKind};

use num_rational::Ratio;

use crate::error::{Error, Result};

/// Exact scheme weight. Printed decimals are kept as decimal fractions so
/// the catalog compares exactly against the published table.
pub type Weight = Ratio<i64>;

pub fn weight_to_f64(w: &Weight) -> f64 {
    *w.numer() as f64 / *w.denom() as f64
}

/// Parses a weight written as an integer, a decimal, a fraction, or a
/// decimal divided by an integer (`1.5669657/2`).
///
/// Returns the weight together with the place value of its last printed
/// digit (`0.0` for exact entries such as `2/3`).
pub fn parse_weight(text: &str) -> Result<(Weight, f64)> {
    let text = text.trim();
    let bad = || Error::invalid(format!("malformed weight `{text}`"));
    let (head, divisor) = match text.split_once('/') {
        Some((h, d)) => (h.trim(), d.trim().parse::<i64>().map_err(|_| bad())?),
        None => (text, 1),
    };
    if divisor == 0 {
        return Err(bad());
    }
    let (negative, digits) = match head.strip_prefix('-') {
        Some(rest) => (true, rest),
        None => (false, head),
    };
    let (int_part, frac_part) = digits.split_once('.').unwrap_or((digits, ""));
    if int_part.is_empty() && frac_part.is_empty() {
        return Err(bad());
    }
    if !int_part.chars().chain(frac_part.chars()).all(|c| c.is_ascii_digit()) {
        return Err(bad());
    }
    let scale = 10i64
        .checked_pow(frac_part.len() as u32)
        .ok_or_else(bad)?;
    let mut numer: i64 = 0;
    for c in int_part.chars().chain(frac_part.chars()) {
        numer = numer
            .checked_mul(10)
            .and_then(|n| n.checked_add(c as i64 - '0' as i64))
            .ok_or_else(bad)?;
    }
    if negative {
        numer = -numer;
    }
    let denom = scale.checked_mul(divisor).ok_or_else(bad)?;
    let quantum = if frac_part.is_empty() { 0.0 } else { 1.0 / scale as f64 };
    Ok((Ratio::new(numer, denom), quantum))
}

/// A centred first-derivative scheme
///
/// `sum_k alpha_k (u'_{j+k} + u'_{j-k}) + u'_j = (1/h) sum_k a_k (u_{j+k} - u_{j-k})`.
#[derive(Debug, Clone, PartialEq)]
pub struct SchemeSpec {
    pub label: String,
    /// Implicit weights, empty for explicit schemes.
    pub alpha: Vec<Weight>,
    /// Explicit weights, never empty.
    pub a: Vec<Weight>,
    pub formal_order: u32,
    /// Place value of the coarsest printed digit among the weights; zero
    /// when every weight is an exact fraction.
    pub coefficient_quantum: f64,
}

impl SchemeSpec {
    pub fn new(
        label: impl Into<String>,
        alpha: Vec<Weight>,
        a: Vec<Weight>,
        formal_order: u32,
        coefficient_quantum: f64,
    ) -> Result<Self> {
        let label = label.into();
        if a.is_empty() {
            return Err(Error::invalid(format!("scheme `{label}` has no explicit weights")));
        }
        if !(coefficient_quantum.is_finite() && coefficient_quantum >= 0.0) {
            return Err(Error::invalid("coefficient quantum must be a finite non-negative number"));
        }
        Ok(Self { label, alpha, a, formal_order, coefficient_quantum })
    }

    /// Builds a scheme from textual weights, tracking printed precision.
    pub fn from_text(label: &str, alpha: &[&str], a: &[&str], formal_order: u32) -> Result<Self> {
        let mut quantum: f64 = 0.0;
        let mut parse_all = |items: &[&str]| -> Result<Vec<Weight>> {
            let mut out = Vec::with_capacity(items.len());
            for s in items {
                let (w, q) = parse_weight(s)?;
                quantum = quantum.max(q);
                out.push(w);
            }
            Ok(out)
        };
        let alpha = parse_all(alpha)?;
        let a = parse_all(a)?;
        // trailing zero columns of the table are not part of the stencil
        let trim = |mut v: Vec<Weight>| {
            while v.last().is_some_and(|w| *w.numer() == 0) {
                v.pop();
            }
            v
        };
        Self::new(label, trim(alpha), trim(a), formal_order, quantum)
    }

    pub fn is_explicit(&self) -> bool {
        self.alpha.is_empty()
    }

    pub fn alpha_f64(&self) -> Vec<f64> {
        self.alpha.iter().map(weight_to_f64).collect()
    }

    pub fn a_f64(&self) -> Vec<f64> {
        self.a.iter().map(weight_to_f64).collect()
    }

    /// Half-width of the explicit stencil.
    pub fn explicit_width(&self) -> usize {
        self.a.len()
    }

    /// The x-derivative as a 2D stencil (explicit schemes only).
    pub fn to_stencil(&self) -> Result<Stencil2D> {
        MultiDimScheme::new(self.clone(), 0.0)?.to_stencil()
    }
}

/// Isotropy-corrected multidimensional scheme built on an explicit base.
///
/// The x-derivative mixes the base stencil along the grid line with the
/// same weights applied along both diagonals:
/// `(1/(h(1+beta))) sum_n a_n [ (E_x^n - E_x^-n) + beta/2 ((E_x^n E_y^n - E_x^-n E_y^-n) + (E_x^n E_y^-n - E_x^-n E_y^n)) ]`.
#[derive(Debug, Clone, PartialEq)]
pub struct MultiDimScheme {
    pub base: SchemeSpec,
    pub icf_beta: f64,
}

impl MultiDimScheme {
    pub fn new(base: SchemeSpec, icf_beta: f64) -> Result<Self> {
        if !base.is_explicit() {
            return Err(Error::invalid(format!(
                "multidimensional construction needs an explicit base, `{}` is compact",
                base.label
            )));
        }
        if !(icf_beta.is_finite() && icf_beta >= 0.0) {
            return Err(Error::invalid(format!("isotropy corrector must be finite and >= 0, got {icf_beta}")));
        }
        Ok(Self { base, icf_beta })
    }

    pub fn to_stencil(&self) -> Result<Stencil2D> {
        let beta = self.icf_beta;
        let norm = 1.0 / (1.0 + beta);
        let diag = 0.5 * beta * norm;
        let mut entries = Vec::new();
        for (k, w) in self.base.a_f64().into_iter().enumerate() {
            let n = k as i32 + 1;
            entries.push(StencilEntry::new(n, 0, w * norm));
            entries.push(StencilEntry::new(-n, 0, -w * norm));
            if beta != 0.0 {
                entries.push(StencilEntry::new(n, n, w * diag));
                entries.push(StencilEntry::new(-n, -n, -w * diag));
                entries.push(StencilEntry::new(n, -n, w * diag));
                entries.push(StencilEntry::new(-n, n, -w * diag));
            }
        }
        Stencil2D::new(StencilKind::FirstDerivativeX, entries)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn parses_table_weights() {
        let (w, q) = parse_weight("1.5669657/2").unwrap();
        assert_eq!(w, Ratio::new(15_669_657, 20_000_000));
        assert_eq!(q, 1e-7);
        let (w, q) = parse_weight("-1/12").unwrap();
        assert_eq!(w, Ratio::new(-1, 12));
        assert_eq!(q, 0.0);
        let (w, _) = parse_weight("-0.166705904").unwrap();
        assert_eq!(w, Ratio::new(-166_705_904, 1_000_000_000));
        assert_eq!(parse_weight("0").unwrap().0, Ratio::from_integer(0));
    }

    #[test]
    fn rejects_garbage_weights() {
        for s in ["", "abc", "1/0", "1.2.3", "--1", "1e-3"] {
            assert!(parse_weight(s).is_err(), "{s}");
        }
    }

    #[test]
    fn multidim_needs_explicit_base() {
        let cat = builtin_catalog();
        assert!(MultiDimScheme::new(cat.scheme("C4").unwrap().clone(), 0.5).is_err());
        assert!(MultiDimScheme::new(cat.scheme("E2").unwrap().clone(), -1.0).is_err());
        assert!(MultiDimScheme::new(cat.scheme("E2").unwrap().clone(), f64::NAN).is_err());
    }

    #[test]
    fn multidim_stencil_weights_normalise() {
        let cat = builtin_catalog();
        let md = MultiDimScheme::new(cat.scheme("E2").unwrap().clone(), 2.0).unwrap();
        let st = md.to_stencil().unwrap();
        // axis weight 1/(1+beta) * 1/2, each diagonal beta/2 of that
        assert!((st.weight_at(1, 0) - 0.5 / 3.0).abs() < 1e-15);
        assert!((st.weight_at(1, 1) - 0.5 / 3.0).abs() < 1e-15);
        assert!((st.weight_at(-1, 1) + 0.5 / 3.0).abs() < 1e-15);
        assert_eq!(verify_formal_order(&st).unwrap(), 2);
    }
}
