use std::f64::consts::PI;

use anisoscope::scheme::builtin_catalog;
use anisoscope::solver::{
    growth_rate, l2_norm, measure_anisotropy, parse_config, run_advection2d, write_raw_field, InitialCondition,
    Marcher, OperatorSpec, SimulationConfig,
};
use anisoscope::stability::{advection_sigma_limit, marcher_cfl, LimitKind};

fn e4() -> OperatorSpec {
    OperatorSpec::Scheme(builtin_catalog().scheme("E4").unwrap().clone())
}

#[test]
fn leapfrog_conserves_plane_wave_norm() {
    let cfg = SimulationConfig::new(e4(), Marcher::LeapFrog, 32, 1.0, 0.4, 1.0, 0.3, 1000);
    let init = InitialCondition::PlaneWave { kh: 2.0 * PI / 8.0, angle: 0.3 };
    let mut cfg = cfg;
    cfg.record_stride = 1000;
    let hist = run_advection2d(&cfg, &init).unwrap();
    let (a, b) = (l2_norm(&hist.snapshots[0].field), l2_norm(&hist.last().field));
    assert!((a - b).abs() <= 1e-8 * a, "{a} {b}");
}

#[test]
fn shifting_the_initial_field_shifts_the_result() {
    let n = 32;
    let field: Vec<f64> = (0..n * n)
        .map(|p| {
            let (i, j) = ((p % n) as f64, (p / n) as f64);
            (-((i - 10.0).powi(2) + (j - 13.0).powi(2)) / 8.0).exp()
        })
        .collect();
    let shifted: Vec<f64> = (0..n * n).map(|p| field[(p / n) * n + (p % n + n - 1) % n]).collect();
    let mut cfg = SimulationConfig::new(e4(), Marcher::Rk4, n, 1.0, 0.2, 1.0, 0.7, 50);
    cfg.record_stride = 50;
    let a = run_advection2d(&cfg, &InitialCondition::Field(field)).unwrap();
    let b = run_advection2d(&cfg, &InitialCondition::Field(shifted)).unwrap();
    let (a, b) = (&a.last().field, &b.last().field);
    for (p, value) in b.iter().enumerate() {
        let q = (p / n) * n + (p % n + n - 1) % n;
        assert_eq!(*value, a[q]);
    }
}

#[test]
fn measured_phase_speed_matches_spectrum_for_every_scheme() {
    let cat = builtin_catalog();
    let ops = cat
        .schemes
        .iter()
        .map(|s| OperatorSpec::Scheme(s.clone()))
        .chain(cat.prefactored.iter().map(|p| OperatorSpec::Prefactored(p.clone())));
    for op in ops {
        let label = op.label();
        let cfg = SimulationConfig::new(op, Marcher::Rk4, 32, 1.0, 0.01, 1.0, 0.0, 200);
        for ppw in [4.0, 8.0, 16.0] {
            let rows = measure_anisotropy(&cfg, ppw, &[0.0, PI / 4.0, 0.4636476090008061]).unwrap();
            for r in rows {
                let rel = (r.empirical - r.predicted).abs() / r.predicted;
                assert!(rel <= 1e-5, "{label} ppw {ppw}: {r:?}");
            }
        }
    }
}

#[test]
fn growth_rates_bracket_the_closed_form() {
    let e2 = builtin_catalog().scheme("E2").unwrap().clone();
    let cfl = marcher_cfl(&e2, Marcher::LeapFrog).unwrap();
    let limit = advection_sigma_limit(cfl, 0.0, 0.0, LimitKind::Conventional);
    let init = InitialCondition::PlaneWave { kh: PI / 4.0, angle: 0.0 };
    let mut cfg = SimulationConfig::new(OperatorSpec::Scheme(e2), Marcher::LeapFrog, 32, 1.0, 0.5 * limit, 1.0, 0.0, 500);
    cfg.noise = 1e-10;
    assert!(growth_rate(&cfg, &init).unwrap() <= 1.0 + 1e-10);
    cfg.k = 1.1 * limit;
    assert!(growth_rate(&cfg, &init).unwrap() > 1.0 + 1e-4);
}

#[test]
fn identical_configs_give_identical_histories() {
    let mut cfg = SimulationConfig::new(e4(), Marcher::LeapFrog, 32, 1.0, 0.3, 1.0, 0.5, 40);
    cfg.noise = 1e-3;
    cfg.seed = 11;
    cfg.record_stride = 10;
    let init = InitialCondition::Gaussian { width: 3.0 };
    assert_eq!(run_advection2d(&cfg, &init).unwrap(), run_advection2d(&cfg, &init).unwrap());
}

#[test]
fn config_file_drives_a_run_and_dumps_a_field() {
    let text = "scheme=PC6\nmarcher=maccormack\nn=32\nk=0.1\nangle_deg=30\nsteps=20\ninitial=gaussian\nwidth=3\n";
    let setup = parse_config(text, &builtin_catalog()).unwrap();
    let hist = run_advection2d(&setup.config, &setup.initial).unwrap();
    assert_eq!(hist.snapshots.len(), 2);
    let dir = std::env::temp_dir().join(format!("anisoscope-dump-{}", std::process::id()));
    std::fs::create_dir_all(&dir).unwrap();
    let path = dir.join("field.f64");
    let header = write_raw_field(&path, hist.last(), hist.n, hist.h).unwrap();
    let bytes = std::fs::read(&path).unwrap();
    assert_eq!(bytes.len(), 32 * 32 * 8);
    let first = f64::from_le_bytes(bytes[..8].try_into().unwrap());
    assert_eq!(first, hist.last().field[0]);
    let header = std::fs::read_to_string(header).unwrap();
    assert!(header.contains("n=32") && header.contains("step=20"));
    std::fs::remove_dir_all(dir).unwrap();
}
