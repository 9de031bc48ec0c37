//! Line-oriented text format for scheme catalogs.
//!
//! ```text
//! # comment
//! scheme=E4;order=4;quantum=0e0;alpha=;a=2/3,-1/12
//! prefactored=PC6;order=6;a=2.7639320225002101e-1;b=8.7939886704167006e-1;c=0e0
//! ```
//!
//! Explicit/compact weights are written as reduced fractions; prefactored
//! coefficients as 17-significant-digit floats.

use std::collections::HashMap;
use std::fmt::Write as _;

use num_rational::Ratio;

use super::{Catalog, PrefactoredScheme, SchemeSpec, Weight};
use crate::csv::fmt_f64;
use crate::error::{Error, Result};

fn fmt_weight(w: &Weight) -> String {
    if *w.denom() == 1 {
        w.numer().to_string()
    } else {
        format!("{}/{}", w.numer(), w.denom())
    }
}

fn fmt_weights(ws: &[Weight]) -> String {
    ws.iter().map(fmt_weight).collect::<Vec<_>>().join(",")
}

pub fn scheme_record(s: &SchemeSpec) -> String {
    format!(
        "scheme={};order={};quantum={:e};alpha={};a={}",
        s.label,
        s.formal_order,
        s.coefficient_quantum,
        fmt_weights(&s.alpha),
        fmt_weights(&s.a)
    )
}

pub fn prefactored_record(p: &PrefactoredScheme) -> String {
    format!(
        "prefactored={};order={};a={};b={};c={}",
        p.label,
        p.formal_order,
        fmt_f64(p.a_coef),
        fmt_f64(p.b_coef),
        fmt_f64(p.c_coef)
    )
}

pub fn write_catalog(cat: &Catalog) -> String {
    let mut out = String::from("# anisoscope scheme catalog v1\n");
    for s in &cat.schemes {
        let _ = writeln!(out, "{}", scheme_record(s));
    }
    for p in &cat.prefactored {
        let _ = writeln!(out, "{}", prefactored_record(p));
    }
    out
}

fn parse_fraction(text: &str, line: usize) -> Result<Weight> {
    let err = || Error::Parse { line, msg: format!("bad fraction `{text}`") };
    let (n, d) = text.split_once('/').unwrap_or((text, "1"));
    let n: i64 = n.trim().parse().map_err(|_| err())?;
    let d: i64 = d.trim().parse().map_err(|_| err())?;
    if d == 0 {
        return Err(err());
    }
    Ok(Ratio::new(n, d))
}

fn parse_list(text: &str, line: usize) -> Result<Vec<Weight>> {
    if text.trim().is_empty() {
        return Ok(Vec::new());
    }
    text.split(',').map(|t| parse_fraction(t, line)).collect()
}

pub fn read_catalog(text: &str) -> Result<Catalog> {
    let mut schemes = Vec::new();
    let mut prefactored = Vec::new();
    for (idx, raw) in text.lines().enumerate() {
        let line = idx + 1;
        let raw = raw.trim();
        if raw.is_empty() || raw.starts_with('#') {
            continue;
        }
        let mut fields = HashMap::new();
        let mut kind = None;
        for (pos, part) in raw.split(';').enumerate() {
            let (k, v) = part
                .split_once('=')
                .ok_or_else(|| Error::Parse { line, msg: format!("expected key=value, got `{part}`") })?;
            if pos == 0 {
                kind = Some((k.trim().to_string(), v.trim().to_string()));
            } else {
                fields.insert(k.trim().to_string(), v.trim().to_string());
            }
        }
        let (kind, label) = kind.ok_or_else(|| Error::Parse { line, msg: "empty record".into() })?;
        let get = |key: &str| {
            fields
                .get(key)
                .map(String::as_str)
                .ok_or_else(|| Error::Parse { line, msg: format!("missing `{key}`") })
        };
        let num = |key: &str| -> Result<f64> {
            get(key)?.parse().map_err(|_| Error::Parse { line, msg: format!("`{key}` is not a number") })
        };
        let order: u32 = get("order")?
            .parse()
            .map_err(|_| Error::Parse { line, msg: "`order` is not an integer".into() })?;
        match kind.as_str() {
            "scheme" => schemes.push(SchemeSpec::new(
                label,
                parse_list(get("alpha")?, line)?,
                parse_list(get("a")?, line)?,
                order,
                num("quantum")?,
            )?),
            "prefactored" => prefactored.push(PrefactoredScheme::new(label, num("a")?, num("b")?, num("c")?, order)?),
            other => return Err(Error::Parse { line, msg: format!("unknown record kind `{other}`") }),
        }
    }
    Ok(Catalog { schemes, prefactored })
}
