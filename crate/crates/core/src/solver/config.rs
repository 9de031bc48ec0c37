//! Flat `key=value` simulation configs and raw field dumps.
//!
//! ```text
//! # comments and blank lines are ignored
//! scheme=E4
//! beta=0.5
//! marcher=rk4
//! n=64
//! h=1
//! k=0.05
//! c=1
//! angle_deg=30
//! steps=400
//! initial=plane      # plane | gaussian
//! ppw=8
//! ```

use std::collections::BTreeMap;
use std::fs;
use std::io::Write as _;
use std::path::{Path, PathBuf};

use super::{InitialCondition, Marcher, OperatorSpec, SimulationConfig, Snapshot};
use crate::csv::fmt_f64;
use crate::error::{Error, Result};
use crate::scheme::{kumar_stencils, Catalog, MultiDimScheme};

const KEYS: &[&str] = &[
    "scheme",
    "beta",
    "marcher",
    "n",
    "h",
    "k",
    "c",
    "angle_deg",
    "steps",
    "initial",
    "ppw",
    "width",
    "record_stride",
    "noise",
    "seed",
];

/// A parsed config: solver settings plus the initial data they start from.
#[derive(Debug, Clone, PartialEq)]
pub struct SimulationSetup {
    pub config: SimulationConfig,
    pub initial: InitialCondition,
    /// Resolution of the plane wave, when the initial data is one.
    pub ppw: Option<f64>,
    /// Every key with its effective value, for manifests.
    pub resolved: BTreeMap<String, String>,
}

/// Resolves a scheme label: catalog entries, `exact` and `kumar`; a
/// non-zero `beta` turns an explicit scheme into its multidimensional form.
pub fn resolve_operator(label: &str, beta: f64, catalog: &Catalog) -> Result<OperatorSpec> {
    let lower = label.to_ascii_lowercase();
    let plain = |op: OperatorSpec| {
        if beta != 0.0 {
            Err(Error::invalid(format!("`{label}` has no multidimensional form")))
        } else {
            Ok(op)
        }
    };
    if lower == "exact" {
        return plain(OperatorSpec::Exact);
    }
    if lower == "kumar" {
        return plain(OperatorSpec::Stencil(kumar_stencils().dx));
    }
    if let Some(s) = catalog.scheme(label) {
        return if beta != 0.0 {
            Ok(OperatorSpec::MultiDim(MultiDimScheme::new(s.clone(), beta)?))
        } else {
            Ok(OperatorSpec::Scheme(s.clone()))
        };
    }
    if let Some(p) = catalog.prefactored(label) {
        return plain(OperatorSpec::Prefactored(p.clone()));
    }
    Err(Error::invalid(format!("unknown scheme `{label}`")))
}

pub fn parse_config(text: &str, catalog: &Catalog) -> Result<SimulationSetup> {
    let mut values: BTreeMap<String, (String, usize)> = BTreeMap::new();
    for (idx, raw) in text.lines().enumerate() {
        let line = raw.split('#').next().unwrap_or("").trim();
        if line.is_empty() {
            continue;
        }
        let (k, v) = line
            .split_once('=')
            .ok_or_else(|| Error::Parse { line: idx + 1, msg: format!("expected key=value, got `{line}`") })?;
        let k = k.trim().to_ascii_lowercase();
        if !KEYS.contains(&k.as_str()) {
            return Err(Error::Parse { line: idx + 1, msg: format!("unknown key `{k}`") });
        }
        if values.insert(k.clone(), (v.trim().to_string(), idx + 1)).is_some() {
            return Err(Error::Parse { line: idx + 1, msg: format!("duplicate key `{k}`") });
        }
    }
    let text_of = |key: &str, default: &str| values.get(key).map(|(v, _)| v.clone()).unwrap_or(default.to_string());
    let number = |key: &str, default: &str| -> Result<f64> {
        let v = text_of(key, default);
        let line = values.get(key).map_or(0, |(_, l)| *l);
        v.parse::<f64>().map_err(|_| Error::Parse { line, msg: format!("`{key}` is not a number: `{v}`") })
    };
    let integer = |key: &str, default: &str| -> Result<u64> {
        let v = text_of(key, default);
        let line = values.get(key).map_or(0, |(_, l)| *l);
        v.parse::<u64>().map_err(|_| Error::Parse { line, msg: format!("`{key}` is not a non-negative integer: `{v}`") })
    };

    let scheme = values.get("scheme").map(|(v, _)| v.clone()).ok_or_else(|| Error::invalid("config needs `scheme`"))?;
    let beta = number("beta", "0")?;
    let operator = resolve_operator(&scheme, beta, catalog)?;
    let marcher = Marcher::parse(&text_of("marcher", "rk4"))?;
    let steps = integer("steps", "200")? as usize;
    let mut config = SimulationConfig::new(
        operator,
        marcher,
        integer("n", "64")? as usize,
        number("h", "1")?,
        number("k", "0.1")?,
        number("c", "1")?,
        number("angle_deg", "0")?.to_radians(),
        steps,
    );
    config.record_stride = integer("record_stride", &steps.max(1).to_string())? as usize;
    config.noise = number("noise", "0")?;
    config.seed = integer("seed", "0")?;

    let (initial, ppw) = match text_of("initial", "plane").to_ascii_lowercase().as_str() {
        "plane" => {
            let ppw = number("ppw", "8")?;
            if !(ppw >= 2.0 && ppw.is_finite()) {
                return Err(Error::invalid(format!("ppw must be >= 2, got {ppw}")));
            }
            (InitialCondition::PlaneWave { kh: 2.0 * std::f64::consts::PI / ppw, angle: config.angle }, Some(ppw))
        }
        "gaussian" => (InitialCondition::Gaussian { width: number("width", "4")? }, None),
        other => return Err(Error::invalid(format!("unknown initial condition `{other}`"))),
    };
    config.validate()?;

    let mut resolved = BTreeMap::new();
    for key in KEYS {
        let v = match *key {
            "scheme" => scheme.clone(),
            "beta" => fmt_f64(beta),
            "marcher" => marcher.name().to_string(),
            "n" => config.n.to_string(),
            "h" => fmt_f64(config.h),
            "k" => fmt_f64(config.k),
            "c" => fmt_f64(config.c),
            "angle_deg" => fmt_f64(number("angle_deg", "0")?),
            "steps" => config.steps.to_string(),
            "initial" => text_of("initial", "plane").to_ascii_lowercase(),
            "ppw" => ppw.map(fmt_f64).unwrap_or_default(),
            "width" => match initial {
                InitialCondition::Gaussian { width } => fmt_f64(width),
                _ => String::new(),
            },
            "record_stride" => config.record_stride.to_string(),
            "noise" => fmt_f64(config.noise),
            "seed" => config.seed.to_string(),
            _ => continue,
        };
        if !v.is_empty() {
            resolved.insert(key.to_string(), v);
        }
    }
    Ok(SimulationSetup { config, initial, ppw, resolved })
}

/// Writes a field as row-major little-endian f64 and a `<path>.hdr` text
/// header next to it; returns the header path.
pub fn write_raw_field(path: &Path, snapshot: &Snapshot, n: usize, h: f64) -> Result<PathBuf> {
    let mut bytes = Vec::with_capacity(snapshot.field.len() * 8);
    for v in &snapshot.field {
        bytes.extend_from_slice(&v.to_le_bytes());
    }
    fs::write(path, bytes)?;
    let mut header_path = path.as_os_str().to_owned();
    header_path.push(".hdr");
    let header_path = PathBuf::from(header_path);
    let mut f = fs::File::create(&header_path)?;
    writeln!(f, "format=f64le")?;
    writeln!(f, "layout=row-major")?;
    writeln!(f, "index=j*n+i")?;
    writeln!(f, "n={n}")?;
    writeln!(f, "h={}", fmt_f64(h))?;
    writeln!(f, "step={}", snapshot.step)?;
    writeln!(f, "time={}", fmt_f64(snapshot.time))?;
    Ok(header_path)
}
