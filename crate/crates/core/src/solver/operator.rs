//! Periodic spatial operators as fixed lists of taps.
//!
//! Every operator the solver uses is shift invariant on the periodic grid,
//! so it is a (possibly dense) convolution. Compact and prefactored schemes
//! become dense circulant kernels: the first row of `A^-1 B`, obtained once
//! per grid size by LU factorisation.

use std::collections::BTreeMap;

use nalgebra::{DMatrix, DVector};
use num_complex::Complex64;
use rayon::prelude::*;

use crate::error::{Error, Result};
use crate::scheme::{MultiDimScheme, PrefactoredScheme, SchemeSpec, Stencil2D, StencilKind};
use crate::spectral::{DispersionSymbol, ExactOperator};

/// The first-derivative operator a simulation advects with.
#[derive(Debug, Clone, PartialEq)]
pub enum OperatorSpec {
    Scheme(SchemeSpec),
    MultiDim(MultiDimScheme),
    /// An x-derivative stencil; the y-derivative is its transpose.
    Stencil(Stencil2D),
    Prefactored(PrefactoredScheme),
    /// Spectral differentiation (the Nyquist mode is differentiated to zero).
    Exact,
}

impl OperatorSpec {
    pub fn label(&self) -> String {
        match self {
            OperatorSpec::Scheme(s) => s.label.clone(),
            OperatorSpec::MultiDim(m) => m.label(),
            OperatorSpec::Stencil(_) => "stencil".into(),
            OperatorSpec::Prefactored(p) => p.label.clone(),
            OperatorSpec::Exact => "exact".into(),
        }
    }

    /// Semi-discrete dispersion used to predict measured phase speeds.
    pub fn symbol(&self) -> Box<dyn DispersionSymbol + '_> {
        match self {
            OperatorSpec::Scheme(s) => Box::new(s),
            OperatorSpec::MultiDim(m) => Box::new(m),
            OperatorSpec::Stencil(s) => Box::new(s),
            OperatorSpec::Prefactored(p) => Box::new(p),
            OperatorSpec::Exact => Box::new(ExactOperator),
        }
    }

    /// Largest `|i|` or `|j|` offset touched on an infinite grid, `None`
    /// for operators that are dense on any grid.
    pub fn radius(&self) -> Option<usize> {
        match self {
            OperatorSpec::Scheme(s) if s.is_explicit() => Some(s.explicit_width()),
            OperatorSpec::MultiDim(m) => Some(m.base.explicit_width()),
            OperatorSpec::Stencil(s) => Some(s.radius()),
            _ => None,
        }
    }
}

/// Which half of a prefactored pair to build.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Sweep {
    Forward,
    Backward,
    /// The average of the two sweeps.
    Central,
}

fn wrap(offset: isize, n: usize) -> usize {
    offset.rem_euclid(n as isize) as usize
}

/// Signed offset of column `m` relative to row 0 on an `n`-periodic grid.
fn signed(m: usize, n: usize) -> isize {
    if m <= n / 2 {
        m as isize
    } else {
        m as isize - n as isize
    }
}

fn compact_matrices(scheme: &SchemeSpec, n: usize) -> (DMatrix<f64>, DMatrix<f64>) {
    let mut a = DMatrix::<f64>::identity(n, n);
    let mut b = DMatrix::<f64>::zeros(n, n);
    for j in 0..n {
        for (k, al) in scheme.alpha_f64().into_iter().enumerate() {
            let k = k as isize + 1;
            a[(j, wrap(j as isize + k, n))] += al;
            a[(j, wrap(j as isize - k, n))] += al;
        }
        for (k, w) in scheme.a_f64().into_iter().enumerate() {
            let k = k as isize + 1;
            b[(j, wrap(j as isize + k, n))] += w;
            b[(j, wrap(j as isize - k, n))] -= w;
        }
    }
    (a, b)
}

fn prefactored_matrices(p: &PrefactoredScheme, n: usize, sweep: Sweep) -> (DMatrix<f64>, DMatrix<f64>) {
    let (ac, bc, cc) = (p.a_coef, p.b_coef, p.c_coef);
    let mut a = DMatrix::<f64>::zeros(n, n);
    let mut b = DMatrix::<f64>::zeros(n, n);
    // forward rows; the backward sweep is the mirror image
    let (sign, e) = match sweep {
        Sweep::Forward => (1isize, -(2.0 * bc - 1.0)),
        _ => (-1isize, 2.0 * bc - 1.0),
    };
    for j in 0..n {
        let up = wrap(j as isize + sign, n);
        let down = wrap(j as isize - sign, n);
        a[(j, up)] += ac;
        a[(j, down)] += cc;
        a[(j, j)] += 1.0 - ac - cc;
        let s = sign as f64;
        b[(j, up)] += s * bc;
        b[(j, j)] += e;
        b[(j, down)] -= s * (1.0 - bc);
    }
    (a, b)
}

/// First row of `A^-1 B`.
fn circulant_row(a: &DMatrix<f64>, b: &DMatrix<f64>, what: &str) -> Result<Vec<f64>> {
    let n = a.nrows();
    let mut e0 = DVector::<f64>::zeros(n);
    e0[0] = 1.0;
    let y = a
        .transpose()
        .lu()
        .solve(&e0)
        .ok_or_else(|| Error::SingularSystem(format!("{what} on {n} points")))?;
    Ok((b.transpose() * y).iter().copied().collect())
}

fn spectral_row(n: usize) -> Vec<f64> {
    // d_m = (2/N) sum_{k=1}^{N/2-1} theta_k sin(theta_k m), theta_k = 2 pi k / N
    (0..n)
        .map(|m| {
            let mut acc = 0.0;
            for k in 1..n.div_ceil(2) {
                let theta = 2.0 * std::f64::consts::PI * k as f64 / n as f64;
                let phase = ((k * m) % n) as f64 * 2.0 * std::f64::consts::PI / n as f64;
                acc += theta * phase.sin();
            }
            2.0 * acc / n as f64
        })
        .collect()
}

/// 1D periodic x-derivative kernel `(D u)_j = sum_m w_m u_{j+m}` (units 1/h).
pub fn kernel_1d(op: &OperatorSpec, n: usize, sweep: Sweep) -> Result<Vec<(isize, f64)>> {
    let dense = |row: Vec<f64>| -> Vec<(isize, f64)> {
        row.into_iter().enumerate().filter(|(_, w)| *w != 0.0).map(|(m, w)| (signed(m, n), w)).collect()
    };
    match op {
        OperatorSpec::Scheme(s) if s.is_explicit() => Ok(s
            .a_f64()
            .into_iter()
            .enumerate()
            .flat_map(|(k, w)| [(k as isize + 1, w), (-(k as isize) - 1, -w)])
            .collect()),
        OperatorSpec::Scheme(s) => {
            let (a, b) = compact_matrices(s, n);
            Ok(dense(circulant_row(&a, &b, &s.label)?))
        }
        OperatorSpec::Prefactored(p) => {
            let row = match sweep {
                Sweep::Central => {
                    let (af, bf) = prefactored_matrices(p, n, Sweep::Forward);
                    let (ab, bb) = prefactored_matrices(p, n, Sweep::Backward);
                    let f = circulant_row(&af, &bf, &p.label)?;
                    let b = circulant_row(&ab, &bb, &p.label)?;
                    f.iter().zip(&b).map(|(x, y)| 0.5 * (x + y)).collect()
                }
                s => {
                    let (a, b) = prefactored_matrices(p, n, s);
                    circulant_row(&a, &b, &p.label)?
                }
            };
            Ok(dense(row))
        }
        OperatorSpec::Exact => Ok(dense(spectral_row(n))),
        OperatorSpec::MultiDim(_) | OperatorSpec::Stencil(_) => {
            Err(Error::invalid("2D operators have no 1D kernel; use Taps::advection"))
        }
    }
}

/// Applies a catalog scheme to a periodic grid function by solving the
/// implicit system directly.
pub fn apply_scheme_periodic(scheme: &SchemeSpec, u: &[f64], h: f64) -> Result<Vec<f64>> {
    let n = u.len();
    let (a, b) = compact_matrices(scheme, n);
    let rhs = &b * DVector::from_column_slice(u) / h;
    if scheme.is_explicit() {
        return Ok(rhs.iter().copied().collect());
    }
    let x = a.lu().solve(&rhs).ok_or_else(|| Error::SingularSystem(format!("{} on {n} points", scheme.label)))?;
    Ok(x.iter().copied().collect())
}

/// Applies one sweep of a prefactored scheme to a periodic grid function.
pub fn apply_prefactored_periodic(p: &PrefactoredScheme, u: &[f64], h: f64, sweep: Sweep) -> Result<Vec<f64>> {
    if sweep == Sweep::Central {
        let f = apply_prefactored_periodic(p, u, h, Sweep::Forward)?;
        let b = apply_prefactored_periodic(p, u, h, Sweep::Backward)?;
        return Ok(f.iter().zip(&b).map(|(x, y)| 0.5 * (x + y)).collect());
    }
    let n = u.len();
    let (a, b) = prefactored_matrices(p, n, sweep);
    let rhs = &b * DVector::from_column_slice(u) / h;
    let x = a.lu().solve(&rhs).ok_or_else(|| Error::SingularSystem(format!("{} on {n} points", p.label)))?;
    Ok(x.iter().copied().collect())
}

/// A 2D periodic convolution `(L u)_{i,j} = sum w u_{i+di, j+dj}`, entries
/// sorted row-major by `(dj, di)`.
#[derive(Debug, Clone, PartialEq)]
pub struct Taps {
    pub entries: Vec<(isize, isize, f64)>,
}

impl Taps {
    fn from_map(map: BTreeMap<(isize, isize), f64>) -> Self {
        Self { entries: map.into_iter().filter(|(_, w)| *w != 0.0).map(|((dj, di), w)| (di, dj, w)).collect() }
    }

    /// `cos(angle) D_x + sin(angle) D_y` on an `n x n` grid (units 1/h).
    pub fn advection(op: &OperatorSpec, n: usize, angle: f64, sweep: Sweep) -> Result<Self> {
        let (cx, cy) = (angle.cos(), angle.sin());
        let mut map = BTreeMap::new();
        let mut add = |di: isize, dj: isize, w: f64| {
            *map.entry((wrap(dj, n) as isize, wrap(di, n) as isize)).or_insert(0.0) += w;
        };
        let stencil = match op {
            OperatorSpec::Stencil(s) => Some(s.clone()),
            OperatorSpec::MultiDim(m) => Some(m.to_stencil()?),
            _ => None,
        };
        match stencil {
            Some(st) => {
                if st.kind != StencilKind::FirstDerivativeX {
                    return Err(Error::invalid(format!("cannot advect with a {:?} stencil", st.kind)));
                }
                for e in &st.entries {
                    add(e.di as isize, e.dj as isize, cx * e.weight);
                    add(e.dj as isize, e.di as isize, cy * e.weight);
                }
            }
            None => {
                for (m, w) in kernel_1d(op, n, sweep)? {
                    add(m, 0, cx * w);
                    add(0, m, cy * w);
                }
            }
        }
        Ok(Self::from_map(map))
    }

    /// Fourier symbol at the grid mode `(mx, my)`.
    pub fn symbol(&self, n: usize, mx: i64, my: i64) -> Complex64 {
        self.entries
            .iter()
            .map(|&(di, dj, w)| {
                let p = (mx * di as i64 + my * dj as i64).rem_euclid(n as i64);
                w * Complex64::from_polar(1.0, 2.0 * std::f64::consts::PI * p as f64 / n as f64)
            })
            .sum()
    }

    /// `out = scale * L u` on an `n x n` row-major field.
    pub fn apply(&self, u: &[f64], out: &mut [f64], n: usize, scale: f64) {
        out.par_chunks_mut(n).enumerate().for_each(|(j, row)| {
            for v in row.iter_mut() {
                *v = 0.0;
            }
            for &(di, dj, w) in &self.entries {
                let src = &u[wrap(j as isize + dj, n) * n..][..n];
                let di = wrap(di, n);
                let (tail, head) = src.split_at(di);
                // u_{i+di} for i < n - di is head[i], then wraps to tail
                for (v, x) in row.iter_mut().zip(head.iter().chain(tail)) {
                    *v += w * x;
                }
            }
            for v in row.iter_mut() {
                *v *= scale;
            }
        });
    }
}
