use std::f64::consts::PI;
use std::fmt::Write as _;

use super::{advection_phase_group, DispersionSymbol};
use crate::csv::{fmt_f64, parse_table};
use crate::error::{Error, Result};

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PolarRow {
    pub angle: f64,
    pub phase: f64,
    pub group: f64,
}

/// Direction -> (phase, group velocity) table at a fixed resolution.
#[derive(Debug, Clone, PartialEq)]
pub struct VelocityPolar {
    pub ppw: f64,
    pub rows: Vec<PolarRow>,
}

impl VelocityPolar {
    pub fn kh(&self) -> f64 {
        2.0 * PI / self.ppw
    }

    /// `max |c_n/c - 1|` over the sampled angles.
    pub fn max_phase_error(&self) -> f64 {
        self.rows.iter().map(|r| (r.phase - 1.0).abs()).fold(0.0, f64::max)
    }

    /// `max c_n - min c_n` over the sampled angles.
    pub fn spread(&self) -> f64 {
        let max = self.rows.iter().map(|r| r.phase).fold(f64::NEG_INFINITY, f64::max);
        let min = self.rows.iter().map(|r| r.phase).fold(f64::INFINITY, f64::min);
        max - min
    }

    /// `angle_rad,c_n_over_c,g_n_over_c` rows followed by a summary comment.
    pub fn to_csv(&self) -> String {
        let mut out = String::from("angle_rad,c_n_over_c,g_n_over_c\n");
        for r in &self.rows {
            let _ = writeln!(out, "{},{},{}", fmt_f64(r.angle), fmt_f64(r.phase), fmt_f64(r.group));
        }
        let _ = writeln!(
            out,
            "# ppw={},spread={},max_phase_error={}",
            fmt_f64(self.ppw),
            fmt_f64(self.spread()),
            fmt_f64(self.max_phase_error())
        );
        out
    }

    pub fn from_csv(text: &str) -> Result<Self> {
        let table = parse_table(text)?;
        let col = |name: &str| table.column(name).ok_or_else(|| Error::invalid(format!("missing column `{name}`")));
        let (angle, phase, group) = (col("angle_rad")?, col("c_n_over_c")?, col("g_n_over_c")?);
        let ppw = table
            .meta("ppw")
            .ok_or_else(|| Error::invalid("missing `ppw` summary"))?
            .parse::<f64>()
            .map_err(|e| Error::invalid(format!("bad ppw: {e}")))?;
        let rows = angle
            .into_iter()
            .zip(phase)
            .zip(group)
            .map(|((angle, phase), group)| PolarRow { angle, phase, group })
            .collect();
        Ok(VelocityPolar { ppw, rows })
    }
}

/// Phase/group velocity polar at `Kh = 2 pi / ppw`, angles uniform on `[0, 2 pi)`.
pub fn anisotropy_polar<S: DispersionSymbol + ?Sized>(symbol: &S, ppw: f64, n_angles: usize) -> Result<VelocityPolar> {
    if !(ppw >= 2.0 && ppw.is_finite()) {
        return Err(Error::invalid(format!("ppw must be finite and >= 2, got {ppw}")));
    }
    if n_angles < 8 {
        return Err(Error::invalid(format!("need at least 8 angles, got {n_angles}")));
    }
    let kh = 2.0 * PI / ppw;
    let rows = (0..n_angles)
        .map(|i| {
            let angle = 2.0 * PI * i as f64 / n_angles as f64;
            let pg = advection_phase_group(symbol, kh, angle)?;
            if !(pg.phase.is_finite() && pg.group.is_finite()) {
                return Err(Error::Quadrature(format!("non-finite velocity at angle {angle}")));
            }
            Ok(PolarRow { angle, phase: pg.phase, group: pg.group })
        })
        .collect::<Result<Vec<_>>>()?;
    Ok(VelocityPolar { ppw, rows })
}
