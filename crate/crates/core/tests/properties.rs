use std::f64::consts::{FRAC_PI_2, PI};

use anisoscope::optimize::{koh_alpha_samples, sun_trueman_weight, KohTarget};
use anisoscope::scheme::{builtin_catalog, kumar_stencils, trefethen_laplacian, MultiDimScheme};
use anisoscope::spectral::{
    advection_phase_group, anisotropy_polar, kim3d_dispersion_residual, koh_residual, modified_wavenumber,
    multidim_symbol, prefactored_real, prefactored_symbol, stencil_symbol,
};
use anisoscope::stability::{
    advection_limit, leapfrog_md_factor, maccormack_limit, LimitKind, StabilityQuery,
};
use proptest::prelude::*;

fn scheme_index() -> impl Strategy<Value = usize> {
    0..builtin_catalog().schemes.len()
}

proptest! {
    #[test]
    fn wavenumber_is_odd(idx in scheme_index(), z in 0.0..PI) {
        let s = &builtin_catalog().schemes[idx];
        let (p, m) = (modified_wavenumber(s, z).unwrap(), modified_wavenumber(s, -z).unwrap());
        prop_assert!((p + m).abs() <= 1e-15 * p.abs().max(1.0));
    }

    #[test]
    fn zero_beta_multidim_is_conventional(idx in 0usize..4, xi in -PI..PI, eta in -PI..PI) {
        let s = builtin_catalog().schemes[idx].clone();
        prop_assume!(s.is_explicit());
        let md = MultiDimScheme::new(s.clone(), 0.0).unwrap();
        let k = modified_wavenumber(&s, xi).unwrap();
        prop_assert!((multidim_symbol(&md, xi, eta) - k).abs() <= 1e-14);
    }

    #[test]
    fn multidim_axis_symbol_ignores_beta(idx in 0usize..4, beta in 0.0..4.0f64, xi in -PI..PI) {
        let s = builtin_catalog().schemes[idx].clone();
        let md = MultiDimScheme::new(s.clone(), beta).unwrap();
        prop_assert!((multidim_symbol(&md, xi, 0.0) - modified_wavenumber(&s, xi).unwrap()).abs() <= 1e-14);
    }

    #[test]
    fn prefactored_sweeps_are_conjugate(z in 0.0..PI, which in 0usize..2) {
        let p = &builtin_catalog().prefactored[which];
        let (f, b) = prefactored_symbol(p, z).unwrap();
        prop_assert!((f.im + b.im).abs() <= 1e-14);
        prop_assert!((f.re - b.re).abs() <= 1e-14);
        prop_assert!((prefactored_real(p, z).unwrap() - 0.5 * (f.re + b.re)).abs() <= 1e-15);
    }

    #[test]
    fn e2_group_velocity_closed_form(kh in 0.05..3.0f64, angle in 0.0..(2.0 * PI)) {
        let e2 = builtin_catalog().scheme("E2").unwrap().clone();
        let (c, s) = (angle.cos(), angle.sin());
        let g = c * c * (kh * c).cos() + s * s * (kh * s).cos();
        let phase = (c * (kh * c).sin() + s * (kh * s).sin()) / kh;
        let pg = advection_phase_group(&e2, kh, angle).unwrap();
        prop_assert!((pg.group - g).abs() <= 1e-6);
        prop_assert!((pg.phase - phase).abs() <= 1e-14);
    }

    #[test]
    fn polar_has_eightfold_symmetry(idx in scheme_index(), ppw in 3.0..20.0f64) {
        let s = builtin_catalog().schemes[idx].clone();
        let polar = anisotropy_polar(&s, ppw, 32).unwrap();
        let n = polar.rows.len();
        for i in 0..n {
            for j in [(n - i) % n, (n / 2 + n - i) % n, (n / 4 + n - i) % n] {
                prop_assert!((polar.rows[i].phase - polar.rows[j].phase).abs() <= 1e-13);
            }
        }
    }

    #[test]
    fn md_factor_is_bounded(beta in 0.0..1e6f64) {
        let f = leapfrog_md_factor(beta).unwrap();
        prop_assert!((1.0..2.0).contains(&f));
    }

    #[test]
    fn md_limit_reduces_at_zero_beta(sx in 0.0..2.0f64, sy in 0.0..2.0f64, cfl in 0.1..2.0f64) {
        let q = StabilityQuery::new(sx, sy, 0.0, cfl).unwrap();
        prop_assert_eq!(advection_limit(&q, LimitKind::Conventional), advection_limit(&q, LimitKind::Multidimensional));
    }

    #[test]
    fn maccormack_is_mirror_symmetric(sx in 0.0..1.0f64, sy in 0.0..1.0f64, beta in 0.0..10.0f64, xi in 0.5..PI) {
        let a = StabilityQuery::new(sx, sy, beta, 1.0).unwrap().with_xi_max(xi).unwrap();
        let b = StabilityQuery::new(sy, sx, beta, 1.0).unwrap().with_xi_max(xi).unwrap();
        prop_assert_eq!(maccormack_limit(&a), maccormack_limit(&b));
    }

    #[test]
    fn sun_trueman_weight_depends_on_products(ba in 0.05..1.2f64, bd in 0.05..0.8f64, h in 0.1..10.0f64) {
        prop_assume!((ba - bd).abs() > 1e-3);
        // the same mesh-scaled arguments reached from different (beta, h)
        let direct = sun_trueman_weight(ba, bd);
        let scaled = sun_trueman_weight((ba / h) * h, (bd / h) * h);
        match (direct, scaled) {
            (Ok(x), Ok(y)) => prop_assert!((x - y).abs() <= 1e-9 * x.abs().max(1.0)),
            (Err(_), Err(_)) => {}
            _ => prop_assert!(false, "weight defined for one scaling only"),
        }
    }

    #[test]
    fn koh_alphas_back_substitute(ppw in 5.0..40.0f64, courant in 0.1..0.7f64) {
        let kh = 2.0 * PI / ppw;
        let omega_k = KohTarget::AxisMatched.omega_k(kh, courant).unwrap();
        for s in koh_alpha_samples(kh, courant, 32, KohTarget::AxisMatched).unwrap() {
            prop_assert!(koh_residual(s.alpha, s.xi_h, s.eta_h, omega_k, courant).abs() < 1e-12);
        }
    }

    #[test]
    fn kim_without_weights_is_yee(xi in 0.0..PI, eta in 0.0..PI, zeta in 0.0..PI, w in 0.0..PI, courant in 0.1..0.57f64) {
        let yee = (w / 2.0).sin().powi(2) / (courant * courant)
            - ((xi / 2.0).sin().powi(2) + (eta / 2.0).sin().powi(2) + (zeta / 2.0).sin().powi(2));
        prop_assert!((kim3d_dispersion_residual(0.0, 0.0, xi, eta, zeta, w, courant) - yee).abs() <= 1e-14);
    }

    #[test]
    fn trefethen_blend_is_consistent(w in 0.0..1.0f64, xi in -1.0..1.0f64, eta in -1.0..1.0f64) {
        prop_assume!(xi.hypot(eta) > 0.1);
        let st = trefethen_laplacian(1.0 - w, w).unwrap();
        let exact = -(xi * xi + eta * eta);
        let err = |h: f64| (stencil_symbol(&st, xi * h, eta * h, h).re - exact).abs();
        let (coarse, fine) = (err(0.02), err(0.01));
        prop_assume!(coarse > 1e-9);
        prop_assert!((coarse / fine).log2() >= 1.9);
    }

    #[test]
    fn kumar_first_derivative_is_directional(x in -5.0..5.0f64, y in -5.0..5.0f64) {
        let dx = kumar_stencils().dx;
        prop_assert!(dx.apply_fn(|_, y| y, x, y, 1.0).abs() <= 1e-12);
        prop_assert!(dx.apply_fn(|_, y| y * y, x, y, 1.0).abs() <= 1e-11);
        prop_assert!((dx.apply_fn(|x, y| x * y, x, y, 1.0) - y).abs() <= 1e-12);
    }
}

#[test]
fn e2_documented_velocities() {
    let e2 = builtin_catalog().scheme("E2").unwrap().clone();
    let axis = advection_phase_group(&e2, FRAC_PI_2, 0.0).unwrap();
    assert!((axis.phase - 2.0 / PI).abs() < 1e-12);
    assert!(axis.group.abs() < 1e-6);
    let diag = advection_phase_group(&e2, FRAC_PI_2, PI / 4.0).unwrap();
    assert!((diag.phase - 0.8068).abs() < 1e-4);
}
