use crate::error::{Error, Result};

/// Prefactored compact scheme on a three-point stencil.
///
/// Forward sweep:  `a u'F_{j+1} + c u'F_{j-1} + (1-a-c) u'F_j = [b u_{j+1} - (2b-1) u_j - (1-b) u_{j-1}] / h`
/// Backward sweep: `c u'B_{j+1} + a u'B_{j-1} + (1-a-c) u'B_j = [(1-b) u_{j+1} + (2b-1) u_j - b u_{j-1}] / h`
///
/// The backward sweep is the mirror image of the forward one, so its
/// symbol is the complex conjugate of the forward symbol.
#[derive(Debug, Clone, PartialEq)]
pub struct PrefactoredScheme {
    pub label: String,
    pub a_coef: f64,
    pub b_coef: f64,
    pub c_coef: f64,
    pub formal_order: u32,
}

impl PrefactoredScheme {
    pub fn new(label: impl Into<String>, a_coef: f64, b_coef: f64, c_coef: f64, formal_order: u32) -> Result<Self> {
        let label = label.into();
        if ![a_coef, b_coef, c_coef].iter().all(|v| v.is_finite()) {
            return Err(Error::invalid(format!("prefactored scheme `{label}` has non-finite coefficients")));
        }
        Ok(Self { label, a_coef, b_coef, c_coef, formal_order })
    }

    /// Centre weight `e = 2b - 1` of the forward explicit part.
    pub fn e_coef(&self) -> f64 {
        2.0 * self.b_coef - 1.0
    }

    /// Trailing weight `f = 1 - b` of the forward explicit part.
    pub fn f_coef(&self) -> f64 {
        1.0 - self.b_coef
    }

    /// Diagonal weight `1 - a - c` of the implicit part.
    pub fn diag_coef(&self) -> f64 {
        1.0 - self.a_coef - self.c_coef
    }
}

/// Derives prefactored coefficients by Taylor matching with `c = 0`.
///
/// With `c = 0` the real part of the forward symbol is
/// `z + [a(b-a) - 1/6] z^3 + ...`; the `z^5` coefficient reduces, after
/// eliminating `b`, to `-(a^2 - a + 1/5)/6`.
///
/// * order 6: both conditions, `a^2 - a + 1/5 = 0` and `b = a + 1/(6a)`
///   (equivalently `b = 1 - 1/(30a)`).
/// * order 4: the `z^3` condition plus a vanishing trailing weight
///   (`b = 1`), giving `a^2 - a + 1/6 = 0`.
///
/// The smaller root is taken so the sweep ratio `a/(1-a)` stays below one.
pub fn derive_prefactored(order: u32) -> Result<PrefactoredScheme> {
    let smaller_root = |constant: f64| -> Result<f64> {
        let disc = 1.0 - 4.0 * constant;
        if disc < 0.0 {
            return Err(Error::Infeasible { order });
        }
        Ok(0.5 - 0.5 * disc.sqrt())
    };
    match order {
        4 => {
            let a = smaller_root(1.0 / 6.0)?;
            PrefactoredScheme::new("PC4", a, 1.0, 0.0, 4)
        }
        6 => {
            let a = smaller_root(1.0 / 5.0)?;
            PrefactoredScheme::new("PC6", a, 1.0 - 1.0 / (30.0 * a), 0.0, 6)
        }
        8 => {
            // The c = 0 family has two unknowns; the sixth-order solution
            // leaves a nonzero z^7 term, so eighth order is out of reach.
            let six = derive_prefactored(6)?;
            match super::verify_formal_order(&six)? {
                n if n >= 8 => Ok(PrefactoredScheme { label: "PC8".into(), formal_order: 8, ..six }),
                _ => Err(Error::Infeasible { order }),
            }
        }
        _ => Err(Error::invalid(format!("prefactored order must be 4 or 6, got {order}"))),
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::scheme::verify_formal_order;

    #[test]
    fn sixth_order_closed_form() {
        let p = derive_prefactored(6).unwrap();
        let a = 0.5 - 1.0 / (2.0 * 5f64.sqrt());
        assert!((p.a_coef - a).abs() < 1e-15);
        assert!((p.a_coef - 0.276393).abs() < 1e-6);
        assert!((p.b_coef - (1.0 - 1.0 / (30.0 * a))).abs() < 1e-15);
        assert_eq!(p.c_coef, 0.0);
        assert!(verify_formal_order(&p).unwrap() >= 6);
    }

    #[test]
    fn fourth_order_from_moments() {
        let p = derive_prefactored(4).unwrap();
        // z^3 moment condition a(b - a) = 1/6
        assert!((p.a_coef * (p.b_coef - p.a_coef) - 1.0 / 6.0).abs() < 1e-15);
        assert!((p.a_coef - (3.0 - 3f64.sqrt()) / 6.0).abs() < 1e-15);
        assert_eq!(p.f_coef(), 0.0);
        assert_eq!(p.e_coef(), 1.0);
        assert_eq!(verify_formal_order(&p).unwrap(), 4);
    }

    #[test]
    fn unsupported_orders() {
        assert!(matches!(derive_prefactored(8), Err(Error::Infeasible { order: 8 })));
        assert!(matches!(derive_prefactored(5), Err(Error::Validation(_))));
        assert!(matches!(derive_prefactored(2), Err(Error::Validation(_))));
    }
}
