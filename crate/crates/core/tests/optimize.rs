use std::f64::consts::{FRAC_PI_2, FRAC_PI_4, PI};

use anisoscope::optimize::{
    gs_isotropy_error, gs_optimize, icf_optimize, koh_mean_alpha, sun_trueman_weight_isotropic, IcfMode,
    IcfObjective, KohTarget, GS_ALPHA_RANGE, ICF_BETA_RANGE,
};
use anisoscope::quadrature::simpson;
use anisoscope::scheme::builtin_catalog;
use anisoscope::spectral::advection_phase_group;

fn objective(label: &str, kh_max: f64, mode: IcfMode) -> IcfObjective {
    IcfObjective::new(builtin_catalog().scheme(label).unwrap().clone(), kh_max, mode).unwrap()
}

#[test]
fn icf_minimum_beats_the_audit_grid() {
    for label in ["E2", "E4", "E6"] {
        for kh_max in [FRAC_PI_4, FRAC_PI_2] {
            for mode in [IcfMode::Phase, IcfMode::Group] {
                let obj = objective(label, kh_max, mode);
                let r = icf_optimize(&obj).unwrap();
                let n = ((ICF_BETA_RANGE.1 - ICF_BETA_RANGE.0) / 1e-3).round() as usize;
                let grid: Vec<f64> = (0..=n).map(|i| ICF_BETA_RANGE.0 + i as f64 * 1e-3).collect();
                let values = obj.values(&grid).unwrap();
                let best = values.iter().copied().fold(f64::INFINITY, f64::min);
                assert!(r.objective <= best, "{label} {kh_max} {mode:?}: {} > {best}", r.objective);
                assert!(r.objective < r.objective_at_zero);
            }
        }
    }
}

#[test]
fn icf_at_zero_is_the_polar_gap() {
    for label in ["E2", "E4", "E6"] {
        let s = builtin_catalog().scheme(label).unwrap().clone();
        let gap = |kh: f64| {
            if kh == 0.0 {
                return 0.0;
            }
            let axis = advection_phase_group(&s, kh, 0.0).unwrap().phase;
            let diag = advection_phase_group(&s, kh, FRAC_PI_4).unwrap().phase;
            (axis - diag).powi(2)
        };
        let reference = simpson(|kh| Ok(gap(kh)), 0.0, FRAC_PI_2, 2048).unwrap();
        let c0 = objective(label, FRAC_PI_2, IcfMode::Phase).value(0.0).unwrap();
        assert!((c0 - reference).abs() <= 1e-8 * reference, "{label}: {c0} vs {reference}");
    }
}

#[test]
fn icf_quadrature_is_converged() {
    let obj = objective("E4", FRAC_PI_2, IcfMode::Phase);
    let s = obj.scheme.clone();
    for beta in [0.0, 0.33, 2.0] {
        let md = anisoscope::scheme::MultiDimScheme::new(s.clone(), beta).unwrap();
        let gap = |kh: f64| -> anisoscope::Result<f64> {
            if kh == 0.0 {
                return Ok(0.0);
            }
            let a = advection_phase_group(&md, kh, 0.0)?.phase;
            let d = advection_phase_group(&md, kh, FRAC_PI_4)?.phase;
            Ok((a - d).powi(2))
        };
        let doubled = simpson(gap, 0.0, FRAC_PI_2, 1024).unwrap();
        let c = obj.value(beta).unwrap();
        assert!((c - doubled).abs() <= 1e-6 * doubled);
    }
}

#[test]
fn gs_minimum_beats_the_audit_grid() {
    for w_max in [0.5, FRAC_PI_2, 2.5] {
        let r = gs_optimize(w_max).unwrap();
        let n = ((GS_ALPHA_RANGE.1 - GS_ALPHA_RANGE.0) / 1e-3).round() as usize;
        for i in 0..=n {
            let a = GS_ALPHA_RANGE.0 + i as f64 * 1e-3;
            assert!(r.e_i <= gs_isotropy_error(a, w_max).unwrap(), "w_max {w_max} alpha {a}");
        }
    }
}

#[test]
fn sun_trueman_weight_tends_to_nine_eighths() {
    let coarse = sun_trueman_weight_isotropic(0.1).unwrap();
    let fine = sun_trueman_weight_isotropic(0.02).unwrap();
    assert!((fine - 1.125).abs() < (coarse - 1.125).abs());
    assert!((fine - 1.125).abs() < 1e-4);
    assert!((sun_trueman_weight_isotropic(PI / 5.0).unwrap() - 1.1337327).abs() < 1e-6);
}

#[test]
fn koh_mean_alpha_near_one_sixth() {
    for ppw in [10.0, 20.0, 40.0] {
        for courant in [0.3, 0.6] {
            let a = koh_mean_alpha(2.0 * PI / ppw, courant, 64, KohTarget::AxisMatched).unwrap();
            assert!((a - 0.167).abs() <= 0.01, "ppw {ppw} courant {courant}: {a}");
        }
    }
}
