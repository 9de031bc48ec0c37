//! The invariant suite behind `anisoscope verify`.
//!
//! Every check recomputes its reference independently of the code path it
//! audits (hand-entered fractions for the weight table, direct linear
//! solves for symbols, closed forms for the special cases).

use std::f64::consts::{FRAC_PI_2, FRAC_PI_4, PI};

use num_rational::Ratio;

use crate::error::{Error, Result};
use crate::scheme::{
    builtin_catalog, kumar_stencils, trefethen_laplacian, verify_formal_order, Catalog, MultiDimScheme, Weight,
};
use crate::solver::{apply_scheme_periodic, fit_anisotropy_order};
use crate::spectral::{
    advection_phase_group, anisotropy_polar, kim3d_dispersion_residual, koh_alpha_of_mode, koh_residual,
    modified_wavenumber, multidim_symbol, prefactored_real, prefactored_symbol, DispersionSymbol,
};
use crate::stability::{
    advection_limit, leapfrog_md_factor, maccormack_diagonal_bound, maccormack_limit, LimitKind, StabilityQuery,
};

#[derive(Debug, Clone, PartialEq)]
pub struct Check {
    pub name: &'static str,
    pub passed: bool,
    pub detail: String,
}

#[derive(Debug, Clone, Default)]
pub struct Report {
    pub checks: Vec<Check>,
}

impl Report {
    pub fn passed(&self) -> bool {
        self.checks.iter().all(|c| c.passed)
    }

    pub fn to_csv(&self) -> String {
        let mut out = String::from("check,passed,detail\n");
        for c in &self.checks {
            out.push_str(&format!("{},{},{}\n", c.name, c.passed, c.detail.replace(',', ";")));
        }
        out
    }
}

type Outcome = Result<(bool, String)>;

/// Table weights as `(numerator, denominator)`: label, alpha_1..2, a_1..3.
#[allow(clippy::type_complexity)]
const TABLE_FRACTIONS: &[(&str, [(i64, i64); 2], [(i64, i64); 3])] = &[
    ("E2", [(0, 1), (0, 1)], [(1, 2), (0, 1), (0, 1)]),
    ("E4", [(0, 1), (0, 1)], [(2, 3), (-1, 12), (0, 1)]),
    ("E6", [(0, 1), (0, 1)], [(3, 4), (-3, 20), (1, 60)]),
    (
        "DRP",
        [(0, 1), (0, 1)],
        [(770_882_380, 1_000_000_000), (-166_705_904, 1_000_000_000), (20_843_142, 1_000_000_000)],
    ),
    ("C4", [(1, 4), (0, 1)], [(3, 4), (0, 1), (0, 1)]),
    ("Haras", [(3_534_620, 10_000_000), (0, 1)], [(15_669_657, 20_000_000), (13_995_831, 400_000_000), (0, 1)]),
    (
        "Lui",
        [(5_381_301, 10_000_000), (666_331, 10_000_000)],
        [(136_757_772, 200_000_000), (823_428_170, 4_000_000_000), (185_207_834, 60_000_000_000)],
    ),
    (
        "Lele",
        [(5_771_439, 10_000_000), (896_406, 10_000_000)],
        [(13_025_166, 20_000_000), (99_355, 400_000), (3_750_245, 600_000_000)],
    ),
];

const NOMINAL_ORDERS: &[(&str, u32)] =
    &[("E2", 2), ("E4", 4), ("E6", 6), ("DRP", 4), ("C4", 4), ("Haras", 2), ("Lui", 6), ("Lele", 4)];

fn padded(w: &[Weight], len: usize) -> Vec<Weight> {
    let mut v = w.to_vec();
    v.resize(len, Ratio::from_integer(0));
    v
}

fn table_weights(cat: &Catalog) -> Outcome {
    let mut bad = Vec::new();
    for (label, alpha, a) in TABLE_FRACTIONS {
        let Some(s) = cat.scheme(label) else {
            bad.push(format!("{label} missing"));
            continue;
        };
        let want_alpha: Vec<Weight> = alpha.iter().map(|&(n, d)| Ratio::new(n, d)).collect();
        let want_a: Vec<Weight> = a.iter().map(|&(n, d)| Ratio::new(n, d)).collect();
        if padded(&s.alpha, 2) != want_alpha || padded(&s.a, 3) != want_a {
            bad.push(label.to_string());
        }
    }
    let ok = bad.is_empty() && cat.schemes.len() == TABLE_FRACTIONS.len();
    Ok((ok, if ok { format!("{} schemes exact", TABLE_FRACTIONS.len()) } else { format!("mismatch: {}", bad.join(" ")) }))
}

fn formal_orders(cat: &Catalog) -> Outcome {
    let mut ok = true;
    let mut parts = Vec::new();
    for &(label, nominal) in NOMINAL_ORDERS {
        let s = cat.scheme(label).ok_or_else(|| Error::invalid(format!("{label} missing")))?;
        let measured = verify_formal_order(s)?;
        ok &= measured == nominal && s.formal_order == nominal;
        parts.push(format!("{label}={measured}"));
    }
    for p in &cat.prefactored {
        let measured = verify_formal_order(p)?;
        ok &= measured == p.formal_order;
        parts.push(format!("{}={measured}", p.label));
    }
    Ok((ok, parts.join(" ")))
}

/// Applies each scheme to `cos(2 pi m j/N)` by a direct solve and compares
/// with `-K(z) sin(2 pi m j/N)`.
fn dft_oracle(cat: &Catalog) -> Outcome {
    let n = 64;
    let mut worst = 0.0f64;
    for s in &cat.schemes {
        for m in 1..32 {
            let z = 2.0 * PI * m as f64 / n as f64;
            let u: Vec<f64> = (0..n).map(|j| (z * j as f64).cos()).collect();
            let du = apply_scheme_periodic(s, &u, 1.0)?;
            let k = modified_wavenumber(s, z)?;
            let scale = k.abs().max(1e-300);
            for (j, d) in du.iter().enumerate() {
                worst = worst.max((d + k * (z * j as f64).sin()).abs() / scale);
            }
        }
    }
    Ok((worst <= 1e-10, format!("max relative deviation {worst:.3e}")))
}

fn e2_velocities(cat: &Catalog) -> Outcome {
    let e2 = cat.scheme("E2").ok_or_else(|| Error::invalid("E2 missing"))?;
    let axis = advection_phase_group(e2, FRAC_PI_2, 0.0)?;
    let diag = advection_phase_group(e2, FRAC_PI_2, FRAC_PI_4)?;
    // 2 sqrt(2) sin(pi/(2 sqrt 2)) / pi
    let s = FRAC_PI_2 * FRAC_PI_4.cos();
    let diag_ref = 2.0 * FRAC_PI_4.cos() * s.sin() / FRAC_PI_2;
    let errs = [(axis.phase - 2.0 / PI).abs(), axis.group.abs(), (diag.phase - diag_ref).abs()];
    let worst = errs.iter().copied().fold(0.0, f64::max);
    Ok((worst <= 1e-6, format!("c(0)={:.10} c(pi/4)={:.10} g(0)={:.2e}", axis.phase, diag.phase, axis.group)))
}

fn prefactored_symbols(cat: &Catalog) -> Outcome {
    let (mut real_err, mut imag_err) = (0.0f64, 0.0f64);
    for p in &cat.prefactored {
        let reference: fn(f64) -> f64 = match p.formal_order {
            4 => |z| 3.0 * z.sin() / (2.0 + z.cos()),
            6 => |z| (28.0 * z.sin() + (2.0 * z).sin()) / (18.0 + 12.0 * z.cos()),
            _ => continue,
        };
        for i in 0..100 {
            let z = PI * (i as f64 + 0.5) / 100.0;
            let (f, b) = prefactored_symbol(p, z)?;
            imag_err = imag_err.max((f.im + b.im).abs());
            real_err = real_err.max((prefactored_real(p, z)? - reference(z)).abs());
        }
    }
    Ok((real_err <= 1e-12 && imag_err <= 1e-14, format!("real {real_err:.2e} imag {imag_err:.2e}")))
}

fn multidim_reduction(cat: &Catalog) -> Outcome {
    let mut worst = 0.0f64;
    for s in cat.schemes.iter().filter(|s| s.is_explicit()) {
        let md = MultiDimScheme::new(s.clone(), 0.0)?;
        for i in 0..20 {
            for j in 0..20 {
                let (xi, eta) = (-PI + 0.31 * i as f64, -PI + 0.29 * j as f64);
                worst = worst.max((multidim_symbol(&md, xi, eta) - modified_wavenumber(s, xi)?).abs());
            }
        }
    }
    Ok((worst <= 1e-13, format!("max deviation {worst:.2e}")))
}

fn polar_symmetry(cat: &Catalog) -> Outcome {
    let (mut phase, mut group) = (0.0f64, 0.0f64);
    let symbols: Vec<Box<dyn DispersionSymbol>> = cat
        .schemes
        .iter()
        .map(|s| Box::new(s.clone()) as Box<dyn DispersionSymbol>)
        .chain(cat.prefactored.iter().map(|p| Box::new(p.clone()) as Box<dyn DispersionSymbol>))
        .collect();
    for symbol in &symbols {
        let polar = anisotropy_polar(symbol, 4.0, 72)?;
        let n = polar.rows.len();
        let at = |i: usize| &polar.rows[i % n];
        for i in 0..n {
            // reflections about the x axis and the diagonal, then quarter turns
            for j in [n - i, n / 4 + n - i, i + n / 4] {
                phase = phase.max((at(i).phase - at(j).phase).abs());
                group = group.max((at(i).group - at(j).group).abs());
            }
        }
    }
    // group velocities are central differences, so their rounding is
    // amplified by 1/GROUP_STEP
    Ok((phase <= 1e-12 && group <= 1e-8, format!("max asymmetry phase {phase:.2e} group {group:.2e}")))
}

/// Error area `int_0^2 |K(z) - z| dz` must shrink along E2, E4, E6, DRP
/// and stay below DRP for every compact scheme.
fn resolution_ordering(cat: &Catalog) -> Outcome {
    let area = |label: &str| -> Result<f64> {
        let s = cat.scheme(label).ok_or_else(|| Error::invalid(format!("{label} missing")))?;
        let n = 2000;
        let mut acc = 0.0;
        for i in 0..=n {
            let z = 2.0 * i as f64 / n as f64;
            let w = if i == 0 || i == n { 0.5 } else { 1.0 };
            acc += w * (modified_wavenumber(s, z)? - z).abs();
        }
        Ok(acc * 2.0 / n as f64)
    };
    let explicit = ["E2", "E4", "E6", "DRP"].map(area);
    let compact = ["C4", "Haras", "Lui", "Lele"].map(area);
    let explicit = explicit.into_iter().collect::<Result<Vec<_>>>()?;
    let compact = compact.into_iter().collect::<Result<Vec<_>>>()?;
    let mut ok = explicit.windows(2).all(|w| w[0] > w[1]);
    ok &= compact.iter().all(|&c| c < explicit[3]);
    let fmt: Vec<String> = explicit.iter().chain(&compact).map(|a| format!("{a:.3e}")).collect();
    Ok((ok, fmt.join(" ")))
}

fn laplacian_orders() -> Outcome {
    let kh: Vec<f64> = (0..8).map(|i| 0.05 * 10f64.powf(i as f64 / 7.0)).collect();
    let five = fit_anisotropy_order(&trefethen_laplacian(1.0, 0.0)?, &kh)?;
    let blend = fit_anisotropy_order(&trefethen_laplacian(2.0 / 3.0, 1.0 / 3.0)?, &kh)?;
    let ok = (five - 2.0).abs() <= 0.2 && (blend - 4.0).abs() <= 0.2;
    Ok((ok, format!("five-point {five:.3} blend {blend:.3}")))
}

/// Error of the Kumar first and second derivatives on `sin x cos 2y`
/// against `(h^2/6) lap(u_x)` and `(h^2/12) lap(u_xx)` under refinement.
fn kumar_leading_terms() -> Outcome {
    let k = kumar_stencils();
    let f = |x: f64, y: f64| x.sin() * (2.0 * y).cos();
    let (x, y): (f64, f64) = (0.3, 0.4);
    let (c, s, c2) = (x.cos(), x.sin(), (2.0 * y).cos());
    let mut ratios = Vec::new();
    for level in 0..5 {
        let h = 0.1 / 2f64.powi(level);
        let e1 = k.dx.apply_fn(f, x, y, h) - c * c2;
        let p1 = h * h / 6.0 * (-5.0 * c * c2);
        let e2 = k.dxx.apply_fn(f, x, y, h) + s * c2;
        let p2 = h * h / 12.0 * (5.0 * s * c2);
        ratios.push((e1 / p1, e2 / p2));
    }
    let finest = &ratios[ratios.len() - 2..];
    let ok = finest.iter().all(|(a, b)| (a - 1.0).abs() <= 0.01 && (b - 1.0).abs() <= 0.01);
    let (a, b) = ratios[ratios.len() - 1];
    Ok((ok, format!("finest ratios {a:.5} {b:.5}")))
}

fn stability_closed_forms() -> Outcome {
    let mut ok = true;
    for i in 0..=1000 {
        let beta = i as f64 * 0.01;
        let f = leapfrog_md_factor(beta)?;
        ok &= (1.0..2.0).contains(&f);
        ok &= maccormack_diagonal_bound(beta + 0.01, PI) > maccormack_diagonal_bound(beta, PI);
        let (sx, sy) = (0.37 * (i % 7) as f64 / 6.0, 0.41 * (i % 11) as f64 / 10.0);
        let q = StabilityQuery::new(sx, sy, 0.0, 0.8)?;
        let swapped = StabilityQuery::new(sy, sx, beta, 0.8)?;
        ok &= advection_limit(&q, LimitKind::Conventional) == advection_limit(&q, LimitKind::Multidimensional);
        let q = StabilityQuery { beta, ..q };
        ok &= maccormack_limit(&q) == maccormack_limit(&swapped);
    }
    // the bound approaches 1/xi_max^{3/2} from below with relative gap
    // 1 - (1 + (1 + beta)^{-2/3})^{-3/2}
    let mut gaps = Vec::new();
    for beta in [1e3, 1e4, 1e5, 1e6] {
        let ratio = maccormack_diagonal_bound(beta, PI) * PI.powf(1.5);
        let expected = (1.0 + (1.0 + beta).powf(-2.0 / 3.0)).powf(-1.5);
        ok &= ratio < 1.0 && (ratio - expected).abs() <= 1e-12;
        gaps.push(1.0 - ratio);
    }
    ok &= gaps.windows(2).all(|w| w[1] < w[0]);
    Ok((ok, format!("gap to 1/xi_max^1.5 at beta=1e3..1e6: {:.3e} {:.3e} {:.3e} {:.3e}", gaps[0], gaps[1], gaps[2], gaps[3])))
}

fn koh_back_substitution() -> Outcome {
    let mut worst = 0.0f64;
    for &courant in &[0.3, 0.6] {
        for &ppw in &[10.0, 20.0, 40.0] {
            let kh = 2.0 * PI / ppw;
            let omega_k = 2.0 * (courant * (kh / 2.0).sin()).asin();
            for i in 0..32 {
                let phi = 2.0 * PI * (i as f64 + 0.5) / 32.0;
                let (xi, eta) = (kh * phi.cos(), kh * phi.sin());
                if let Ok(alpha) = koh_alpha_of_mode(xi, eta, omega_k, courant) {
                    worst = worst.max(koh_residual(alpha, xi, eta, omega_k, courant).abs());
                }
            }
        }
    }
    Ok((worst < 1e-12, format!("max residual {worst:.2e}")))
}

fn kim_reduces_to_yee() -> Outcome {
    let mut worst = 0.0f64;
    for i in 0..1000u32 {
        // low-discrepancy points in [0, pi]^3 x [0, pi]
        let t = |p: f64| PI * ((i as f64 + 0.5) * p).fract();
        let (xi, eta, zeta, w) = (t(0.618_033_988_7), t(0.754_877_666_2), t(0.569_840_290_9), t(0.453_397_651_5));
        let courant = 0.5;
        let yee = (w / 2.0).sin().powi(2) / (courant * courant)
            - ((xi / 2.0).sin().powi(2) + (eta / 2.0).sin().powi(2) + (zeta / 2.0).sin().powi(2));
        worst = worst.max((kim3d_dispersion_residual(0.0, 0.0, xi, eta, zeta, w, courant) - yee).abs());
    }
    Ok((worst <= 1e-14, format!("max deviation {worst:.2e}")))
}

/// Runs every invariant check on the built-in catalog.
pub fn run_invariant_suite() -> Report {
    let cat = builtin_catalog();
    let checks: Vec<(&'static str, Outcome)> = vec![
        ("table-weights", table_weights(&cat)),
        ("formal-orders", formal_orders(&cat)),
        ("dft-oracle", dft_oracle(&cat)),
        ("e2-velocities", e2_velocities(&cat)),
        ("prefactored-symbols", prefactored_symbols(&cat)),
        ("multidim-reduction", multidim_reduction(&cat)),
        ("polar-symmetry", polar_symmetry(&cat)),
        ("resolution-ordering", resolution_ordering(&cat)),
        ("laplacian-orders", laplacian_orders()),
        ("kumar-leading-terms", kumar_leading_terms()),
        ("stability-closed-forms", stability_closed_forms()),
        ("koh-back-substitution", koh_back_substitution()),
        ("kim-yee-reduction", kim_reduces_to_yee()),
    ];
    let checks = checks
        .into_iter()
        .map(|(name, outcome)| match outcome {
            Ok((passed, detail)) => Check { name, passed, detail },
            Err(e) => Check { name, passed: false, detail: format!("error: {e}") },
        })
        .collect();
    Report { checks }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn suite_passes() {
        let report = run_invariant_suite();
        for c in &report.checks {
            assert!(c.passed, "{}: {}", c.name, c.detail);
        }
        assert!(report.to_csv().starts_with("check,passed,detail\n"));
    }
}
