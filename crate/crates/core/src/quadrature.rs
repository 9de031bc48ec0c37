//! Composite Simpson rules with compensated (Neumaier) summation so results
//! do not depend on accumulation order subtleties.

use crate::error::{Error, Result};

/// Neumaier-compensated accumulator.
#[derive(Debug, Default, Clone, Copy)]
pub struct CompensatedSum {
    sum: f64,
    carry: f64,
}

impl CompensatedSum {
    pub fn add(&mut self, x: f64) {
        let t = self.sum + x;
        if self.sum.abs() >= x.abs() {
            self.carry += (self.sum - t) + x;
        } else {
            self.carry += (x - t) + self.sum;
        }
        self.sum = t;
    }

    pub fn value(&self) -> f64 {
        self.sum + self.carry
    }
}

fn simpson_weight(i: usize, panels: usize) -> f64 {
    if i == 0 || i == panels {
        1.0
    } else if i % 2 == 1 {
        4.0
    } else {
        2.0
    }
}

/// Composite Simpson on `[lo, hi]` with an even number of panels.
pub fn simpson<F>(f: F, lo: f64, hi: f64, panels: usize) -> Result<f64>
where
    F: Fn(f64) -> Result<f64>,
{
    let panels = panels.max(2) + panels % 2;
    let step = (hi - lo) / panels as f64;
    let mut acc = CompensatedSum::default();
    for i in 0..=panels {
        let x = lo + step * i as f64;
        let v = f(x)?;
        if !v.is_finite() {
            return Err(Error::Quadrature(format!("integrand is {v} at x = {x}")));
        }
        acc.add(simpson_weight(i, panels) * v);
    }
    Ok(acc.value() * step / 3.0)
}

/// Composite Simpson on nodes already sampled uniformly (odd node count).
pub fn simpson_nodes(values: &[f64], step: f64) -> Result<f64> {
    let n = values.len();
    if n < 3 || n.is_multiple_of(2) {
        return Err(Error::Quadrature(format!("Simpson needs an odd node count >= 3, got {n}")));
    }
    let panels = n - 1;
    let mut acc = CompensatedSum::default();
    for (i, v) in values.iter().enumerate() {
        if !v.is_finite() {
            return Err(Error::Quadrature(format!("node {i} is {v}")));
        }
        acc.add(simpson_weight(i, panels) * v);
    }
    Ok(acc.value() * step / 3.0)
}

/// Tensor-product composite Simpson on a rectangle.
pub fn simpson_2d<F>(f: F, x: (f64, f64), y: (f64, f64), panels: (usize, usize)) -> Result<f64>
where
    F: Fn(f64, f64) -> Result<f64>,
{
    let px = panels.0.max(2) + panels.0 % 2;
    let py = panels.1.max(2) + panels.1 % 2;
    let hx = (x.1 - x.0) / px as f64;
    let hy = (y.1 - y.0) / py as f64;
    let mut acc = CompensatedSum::default();
    for i in 0..=px {
        let xi = x.0 + hx * i as f64;
        let wx = simpson_weight(i, px);
        for j in 0..=py {
            let yj = y.0 + hy * j as f64;
            let v = f(xi, yj)?;
            if !v.is_finite() {
                return Err(Error::Quadrature(format!("integrand is {v} at ({xi}, {yj})")));
            }
            acc.add(wx * simpson_weight(j, py) * v);
        }
    }
    Ok(acc.value() * hx * hy / 9.0)
}
