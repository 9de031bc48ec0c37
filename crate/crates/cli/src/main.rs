use std::f64::consts::PI;
use std::fmt::Write as _;
use std::fs;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use anisoscope::csv::fmt_f64;
use anisoscope::optimize::{gs_optimize, icf_optimize, IcfMode, IcfObjective};
use anisoscope::scheme::{builtin_catalog, verify_formal_order, Catalog, Weight};
use anisoscope::solver::{
    measure_anisotropy, parse_config, resolve_operator, run_advection2d, write_raw_field, InitialCondition, Marcher,
    OperatorSpec, SimulationConfig,
};
use anisoscope::spectral::{anisotropy_polar, prefactored_symbol, wavenumber_csv, wavenumber_curve};
use anisoscope::stability::{
    advection_sigma_limit, maccormack_sigma_limit, marcher_cfl, sigma_grid, stability_scan, boundary_from_scan,
    LimitKind,
};
use anisoscope::verify::run_invariant_suite;
use anisoscope::{Category, Error};
use clap::{Parser, Subcommand, ValueEnum};

const VERSION: &str = env!("CARGO_PKG_VERSION");

#[derive(Parser, Debug)]
#[command(name = "anisoscope", version, about = "Numerical anisotropy analysis for finite-difference schemes")]
struct Cli {
    /// Write the CSV to this file instead of standard output.
    #[arg(long, global = true)]
    out: Option<PathBuf>,

    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Catalog entries with their nominal and verified orders.
    ListSchemes,
    /// Modified wavenumber K(z) on [0, pi].
    Wavenumber {
        #[arg(long)]
        scheme: String,
        #[arg(long, default_value_t = 64)]
        samples: usize,
    },
    /// Phase and group velocity polar at one resolution.
    Polar {
        #[arg(long)]
        scheme: String,
        #[arg(long)]
        ppw: f64,
        #[arg(long, default_value_t = 72)]
        angles: usize,
        /// Isotropy corrector factor for explicit schemes.
        #[arg(long, default_value_t = 0.0)]
        beta: f64,
    },
    /// Optimal isotropy corrector factor for an explicit scheme.
    OptimizeIcf {
        #[arg(long)]
        scheme: String,
        #[arg(long, default_value_t = PI / 2.0)]
        kh_max: f64,
        #[arg(long, value_enum, default_value_t = ModeArg::Phase)]
        mode: ModeArg,
    },
    /// Optimal compact-filter coefficient for the isotropy error function.
    OptimizeGs {
        #[arg(long, default_value_t = PI / 2.0)]
        w_max: f64,
    },
    /// Closed-form and empirical Courant limits.
    Stability {
        #[arg(long)]
        scheme: String,
        #[arg(long, default_value = "leapfrog")]
        marcher: String,
        #[arg(long, default_value_t = 0.0)]
        beta: f64,
        /// Advection direction in degrees.
        #[arg(long, default_value_t = 0.0)]
        direction: f64,
        #[arg(long, default_value_t = PI)]
        xi_max: f64,
        #[arg(long, default_value_t = 64)]
        n: usize,
        #[arg(long, default_value_t = 500)]
        steps: usize,
        #[arg(long, default_value_t = 0)]
        seed: u64,
    },
    /// Run the reference solver from a key=value config file.
    Simulate {
        #[arg(long)]
        config: PathBuf,
        /// Also write the final field as raw little-endian f64 (plus a .hdr file).
        #[arg(long)]
        dump: Option<PathBuf>,
        /// Measure phase speeds at this many angles in [0, 45] degrees instead.
        #[arg(long)]
        anisotropy_angles: Option<usize>,
    },
    /// Run the invariant suite.
    Verify,
}

#[derive(Clone, Copy, Debug, ValueEnum)]
enum ModeArg {
    Phase,
    Group,
}

/// Output of a command: CSV body plus the parameters that produced it.
struct Output {
    params: Vec<(&'static str, String)>,
    body: String,
    extra_outputs: Vec<PathBuf>,
    ok: bool,
}

impl Output {
    fn new(params: Vec<(&'static str, String)>, body: String) -> Self {
        Self { params, body, extra_outputs: Vec::new(), ok: true }
    }
}

fn manifest(command: &str, out: &Output, target: Option<&Path>) -> String {
    let mut line = format!("# manifest: tool=anisoscope version={VERSION} command={command}");
    for (k, v) in &out.params {
        let _ = write!(line, " {k}={v}");
    }
    let mut files: Vec<String> = vec![target.map_or("stdout".into(), |p| p.display().to_string())];
    files.extend(out.extra_outputs.iter().map(|p| p.display().to_string()));
    let _ = write!(line, " outputs={}", files.join(";"));
    line
}

fn num(x: f64) -> String {
    fmt_f64(x)
}

fn weight_cells(ws: &[Weight], len: usize) -> Vec<String> {
    (0..len).map(|i| ws.get(i).map_or("0".into(), |w| w.to_string())).collect()
}

fn list_schemes(cat: &Catalog) -> Result<Output, Error> {
    let mut body = String::from("label,kind,nominal_order,measured_order,alpha_1,alpha_2,a_1,a_2,a_3,pf_a,pf_b,pf_c\n");
    for s in &cat.schemes {
        let kind = if s.is_explicit() { "explicit" } else { "compact" };
        let mut cells = vec![s.label.clone(), kind.into(), s.formal_order.to_string()];
        cells.push(verify_formal_order(s)?.to_string());
        cells.extend(weight_cells(&s.alpha, 2));
        cells.extend(weight_cells(&s.a, 3));
        cells.extend([String::new(), String::new(), String::new()]);
        let _ = writeln!(body, "{}", cells.join(","));
    }
    for p in &cat.prefactored {
        let _ = writeln!(
            body,
            "{},prefactored,{},{},,,,,,{},{},{}",
            p.label,
            p.formal_order,
            verify_formal_order(p)?,
            num(p.a_coef),
            num(p.b_coef),
            num(p.c_coef)
        );
    }
    Ok(Output::new(Vec::new(), body))
}

fn wavenumber(cat: &Catalog, label: &str, samples: usize) -> Result<Output, Error> {
    let params = vec![("scheme", label.to_string()), ("samples", samples.to_string())];
    if let Some(s) = cat.scheme(label) {
        return Ok(Output::new(params, wavenumber_csv(&wavenumber_curve(s, samples)?)));
    }
    let p = cat.prefactored(label).ok_or_else(|| Error::Validation(format!("unknown scheme `{label}`")))?;
    if samples < 2 {
        return Err(Error::Validation("a wavenumber curve needs at least two samples".into()));
    }
    let mut body = String::from("z,k_forward_re,k_forward_im,k_backward_re,k_backward_im\n");
    for i in 0..samples {
        let z = PI * i as f64 / (samples - 1) as f64;
        let (f, b) = prefactored_symbol(p, z)?;
        let _ = writeln!(body, "{},{},{},{},{}", num(z), num(f.re), num(f.im), num(b.re), num(b.im));
    }
    Ok(Output::new(params, body))
}

fn polar(cat: &Catalog, label: &str, ppw: f64, angles: usize, beta: f64) -> Result<Output, Error> {
    let op = resolve_operator(label, beta, cat)?;
    let p = anisotropy_polar(&op.symbol(), ppw, angles)?;
    let params = vec![
        ("scheme", label.to_string()),
        ("ppw", num(ppw)),
        ("angles", angles.to_string()),
        ("beta", num(beta)),
    ];
    Ok(Output::new(params, p.to_csv()))
}

fn optimize_icf(cat: &Catalog, label: &str, kh_max: f64, mode: ModeArg) -> Result<Output, Error> {
    let s = cat.scheme(label).ok_or_else(|| Error::Validation(format!("unknown explicit scheme `{label}`")))?;
    let (mode, name) = match mode {
        ModeArg::Phase => (IcfMode::Phase, "phase"),
        ModeArg::Group => (IcfMode::Group, "group"),
    };
    let r = icf_optimize(&IcfObjective::new(s.clone(), kh_max, mode)?)?;
    let body = format!(
        "beta_star,objective,objective_at_zero,degenerate\n{},{},{},{}\n",
        num(r.beta_star),
        num(r.objective),
        num(r.objective_at_zero),
        u8::from(r.degenerate)
    );
    let params = vec![("scheme", label.to_string()), ("kh_max", num(kh_max)), ("mode", name.to_string())];
    Ok(Output::new(params, body))
}

fn optimize_gs(w_max: f64) -> Result<Output, Error> {
    let r = gs_optimize(w_max)?;
    let body = format!(
        "alpha_star,isotropy_error,degenerate\n{},{},{}\n",
        num(r.alpha_star),
        num(r.e_i),
        u8::from(r.degenerate)
    );
    Ok(Output::new(vec![("w_max", num(w_max))], body))
}

#[allow(clippy::too_many_arguments)]
fn stability(
    cat: &Catalog,
    label: &str,
    marcher: &str,
    beta: f64,
    direction: f64,
    xi_max: f64,
    n: usize,
    steps: usize,
    seed: u64,
) -> Result<Output, Error> {
    let marcher = Marcher::parse(marcher)?;
    let angle = direction.to_radians();
    let op = resolve_operator(label, beta, cat)?;
    let kind = if beta > 0.0 { LimitKind::Multidimensional } else { LimitKind::Conventional };
    let closed = match marcher {
        Marcher::MacCormack => {
            if !(xi_max > 0.0 && xi_max.is_finite()) {
                return Err(Error::Validation(format!("xi_max must be positive, got {xi_max}")));
            }
            maccormack_sigma_limit(beta, xi_max, angle)
        }
        _ => {
            // the CFL constant is a property of the one-dimensional scheme
            let base = match &op {
                OperatorSpec::MultiDim(md) => OperatorSpec::Scheme(md.base.clone()),
                other => other.clone(),
            };
            let cfl = marcher_cfl(&base.symbol(), marcher)?;
            advection_sigma_limit(cfl, beta, angle, kind)
        }
    };
    let mut cfg = SimulationConfig::new(op, marcher, n, 1.0, 0.1, 1.0, angle, steps);
    cfg.noise = 1e-10;
    cfg.seed = seed;
    let init = InitialCondition::PlaneWave { kh: 2.0 * PI / 8.0, angle };
    let grid = sigma_grid(0.9 * closed, 1.1 * closed, 41);
    let scan = stability_scan(&cfg, &init, &grid)?;
    let empirical = boundary_from_scan(&scan)?;
    let top = u8::from(empirical == grid[grid.len() - 1]);
    let body = format!(
        "closed_form_sigma,empirical_sigma,relative_margin,grid_top_reached\n{},{},{},{}\n",
        num(closed),
        num(empirical),
        num(empirical / closed - 1.0),
        top
    );
    let params = vec![
        ("scheme", label.to_string()),
        ("marcher", marcher.name().to_string()),
        ("beta", num(beta)),
        ("direction", num(direction)),
        ("xi_max", num(xi_max)),
        ("n", n.to_string()),
        ("steps", steps.to_string()),
        ("seed", seed.to_string()),
        ("noise", num(1e-10)),
        ("ppw", "8".into()),
        ("sigma_grid", "0.90..1.10x41".into()),
    ];
    Ok(Output::new(params, body))
}

fn simulate(cat: &Catalog, config: &Path, dump: Option<&Path>, angles: Option<usize>) -> Result<Output, Error> {
    let text = fs::read_to_string(config)?;
    let setup = parse_config(&text, cat)?;
    if let Some(w) = setup.config.cfl_advisory()? {
        eprintln!("WARNING: {w}");
    }
    let mut params: Vec<(&'static str, String)> = vec![("config", config.display().to_string())];
    params.extend(setup.resolved.iter().map(|(k, v)| (key_name(k), v.clone())));
    if let Some(n_angles) = angles {
        if n_angles < 1 {
            return Err(Error::Validation("need at least one angle".into()));
        }
        let ppw = setup.ppw.ok_or_else(|| Error::Validation("phase speeds need initial=plane".into()))?;
        let list: Vec<f64> =
            (0..n_angles).map(|i| PI / 4.0 * i as f64 / (n_angles - 1).max(1) as f64).collect();
        let rows = measure_anisotropy(&setup.config, ppw, &list)?;
        let mut body = String::from("requested_angle,mx,my,angle,kh,snapped,c_empirical,c_predicted\n");
        for r in rows {
            let _ = writeln!(
                body,
                "{},{},{},{},{},{},{},{}",
                num(r.requested_angle),
                r.mode.mx,
                r.mode.my,
                num(r.mode.angle),
                num(r.mode.kh),
                u8::from(r.mode.snapped),
                num(r.empirical),
                num(r.predicted)
            );
        }
        params.push(("anisotropy_angles", n_angles.to_string()));
        return Ok(Output::new(params, body));
    }
    let hist = run_advection2d(&setup.config, &setup.initial)?;
    let mut body = String::from("step,time,l2_norm,max_abs\n");
    for s in &hist.snapshots {
        let l2 = s.field.iter().map(|x| x * x).sum::<f64>().sqrt();
        let max = s.field.iter().fold(0.0f64, |m, x| m.max(x.abs()));
        let _ = writeln!(body, "{},{},{},{}", s.step, num(s.time), num(l2), num(max));
    }
    let mut out = Output::new(params, body);
    if let Some(path) = dump {
        let header = write_raw_field(path, hist.last(), hist.n, hist.h)?;
        out.extra_outputs.extend([path.to_path_buf(), header]);
    }
    Ok(out)
}

/// Config keys are a fixed set; map them onto static names for the manifest.
fn key_name(k: &str) -> &'static str {
    const KEYS: &[&str] = &[
        "scheme", "beta", "marcher", "n", "h", "k", "c", "angle_deg", "steps", "initial", "ppw", "width",
        "record_stride", "noise", "seed",
    ];
    KEYS.iter().find(|&&x| x == k).copied().unwrap_or("key")
}

fn verify() -> Output {
    let report = run_invariant_suite();
    let mut out = Output::new(Vec::new(), report.to_csv());
    out.ok = report.passed();
    out
}

fn configure_threads() -> Result<(), Error> {
    let Ok(raw) = std::env::var("ANISOSCOPE_THREADS") else {
        return Ok(());
    };
    let n: usize = raw
        .trim()
        .parse()
        .map_err(|_| Error::Validation(format!("ANISOSCOPE_THREADS must be a non-negative integer, got `{raw}`")))?;
    if n > 0 {
        rayon::ThreadPoolBuilder::new()
            .num_threads(n)
            .build_global()
            .map_err(|e| Error::Validation(format!("cannot configure thread pool: {e}")))?;
    }
    Ok(())
}

fn command_name(c: &Command) -> &'static str {
    match c {
        Command::ListSchemes => "list-schemes",
        Command::Wavenumber { .. } => "wavenumber",
        Command::Polar { .. } => "polar",
        Command::OptimizeIcf { .. } => "optimize-icf",
        Command::OptimizeGs { .. } => "optimize-gs",
        Command::Stability { .. } => "stability",
        Command::Simulate { .. } => "simulate",
        Command::Verify => "verify",
    }
}

fn run(cli: Cli) -> Result<bool, Error> {
    configure_threads()?;
    let cat = builtin_catalog();
    let output = match &cli.command {
        Command::ListSchemes => list_schemes(&cat)?,
        Command::Wavenumber { scheme, samples } => wavenumber(&cat, scheme, *samples)?,
        Command::Polar { scheme, ppw, angles, beta } => polar(&cat, scheme, *ppw, *angles, *beta)?,
        Command::OptimizeIcf { scheme, kh_max, mode } => optimize_icf(&cat, scheme, *kh_max, *mode)?,
        Command::OptimizeGs { w_max } => optimize_gs(*w_max)?,
        Command::Stability { scheme, marcher, beta, direction, xi_max, n, steps, seed } => {
            stability(&cat, scheme, marcher, *beta, *direction, *xi_max, *n, *steps, *seed)?
        }
        Command::Simulate { config, dump, anisotropy_angles } => {
            simulate(&cat, config, dump.as_deref(), *anisotropy_angles)?
        }
        Command::Verify => verify(),
    };
    let text = format!("{}\n{}", manifest(command_name(&cli.command), &output, cli.out.as_deref()), output.body);
    match &cli.out {
        Some(path) => fs::write(path, text)?,
        None => print!("{text}"),
    }
    Ok(output.ok)
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            use clap::error::ErrorKind;
            if matches!(e.kind(), ErrorKind::DisplayHelp | ErrorKind::DisplayVersion) {
                print!("{e}");
                return ExitCode::SUCCESS;
            }
            eprint!("ERROR:{}: {}", Category::Validation, e.render());
            return ExitCode::from(1);
        }
    };
    match run(cli) {
        Ok(true) => ExitCode::SUCCESS,
        Ok(false) => {
            eprintln!("ERROR:{}: invariant suite failed", Category::Numerical);
            ExitCode::from(2)
        }
        Err(e) => {
            let category = e.category();
            eprintln!("ERROR:{category}: {e}");
            ExitCode::from(match category {
                Category::Validation => 1,
                Category::Numerical => 2,
            })
        }
    }
}
