use crate::error::{Error, Result};

/// What a [`Stencil2D`] approximates. Weights are in units of `1/h` for the
/// first derivative and `1/h^2` for the second-order kinds.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum StencilKind {
    FirstDerivativeX,
    SecondDerivativeXX,
    Laplacian,
    CrossXY,
}

impl StencilKind {
    pub fn derivative_order(self) -> u32 {
        match self {
            StencilKind::FirstDerivativeX => 1,
            _ => 2,
        }
    }

    /// Normalised moments `sum w di^p dj^q / (p! q!)` an exact operator has.
    pub(crate) fn target_moment(self, p: u32, q: u32) -> f64 {
        let hit = match self {
            StencilKind::FirstDerivativeX => (p, q) == (1, 0),
            StencilKind::SecondDerivativeXX => (p, q) == (2, 0),
            StencilKind::Laplacian => (p, q) == (2, 0) || (p, q) == (0, 2),
            StencilKind::CrossXY => (p, q) == (1, 1),
        };
        if hit {
            1.0
        } else {
            0.0
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct StencilEntry {
    pub di: i32,
    pub dj: i32,
    pub weight: f64,
}

impl StencilEntry {
    pub fn new(di: i32, dj: i32, weight: f64) -> Self {
        Self { di, dj, weight }
    }
}

/// Offset/weight stencil on a square grid. Entries are merged by offset and
/// kept in row-major order (`dj` outer, `di` inner).
#[derive(Debug, Clone, PartialEq)]
pub struct Stencil2D {
    pub kind: StencilKind,
    pub entries: Vec<StencilEntry>,
}

impl Stencil2D {
    pub fn new(kind: StencilKind, entries: Vec<StencilEntry>) -> Result<Self> {
        if entries.is_empty() {
            return Err(Error::invalid("stencil has no entries"));
        }
        if entries.iter().any(|e| !e.weight.is_finite()) {
            return Err(Error::invalid("stencil weights must be finite"));
        }
        let mut merged: Vec<StencilEntry> = Vec::with_capacity(entries.len());
        let mut sorted = entries;
        sorted.sort_by_key(|e| (e.dj, e.di));
        for e in sorted {
            match merged.last_mut() {
                Some(last) if last.di == e.di && last.dj == e.dj => last.weight += e.weight,
                _ => merged.push(e),
            }
        }
        merged.retain(|e| e.weight != 0.0);
        if merged.is_empty() {
            return Err(Error::invalid("stencil weights cancel to zero"));
        }
        Ok(Self { kind, entries: merged })
    }

    pub fn weight_at(&self, di: i32, dj: i32) -> f64 {
        self.entries
            .iter()
            .find(|e| e.di == di && e.dj == dj)
            .map_or(0.0, |e| e.weight)
    }

    /// Largest `|di|` or `|dj|` reached.
    pub fn radius(&self) -> usize {
        self.entries
            .iter()
            .map(|e| e.di.unsigned_abs().max(e.dj.unsigned_abs()) as usize)
            .max()
            .unwrap_or(0)
    }

    /// Swaps the roles of x and y, turning an x-derivative into a
    /// y-derivative.
    pub fn transposed(&self) -> Self {
        let entries = self.entries.iter().map(|e| StencilEntry::new(e.dj, e.di, e.weight)).collect();
        Self::new(self.kind, entries).expect("transposition keeps a valid stencil")
    }

    /// Weighted sum `wa * a + wb * b` of two stencils of the same kind.
    pub fn blend(wa: f64, a: &Stencil2D, wb: f64, b: &Stencil2D) -> Result<Self> {
        if a.kind != b.kind {
            return Err(Error::invalid("cannot blend stencils of different kinds"));
        }
        let entries = a
            .entries
            .iter()
            .map(|e| StencilEntry::new(e.di, e.dj, wa * e.weight))
            .chain(b.entries.iter().map(|e| StencilEntry::new(e.di, e.dj, wb * e.weight)))
            .collect();
        Self::new(a.kind, entries)
    }

    /// Applies the stencil to a function sampled on a grid of step `h`
    /// around `(x, y)`.
    pub fn apply_fn(&self, f: impl Fn(f64, f64) -> f64, x: f64, y: f64, h: f64) -> f64 {
        let sum: f64 =
            self.entries.iter().map(|e| e.weight * f(x + f64::from(e.di) * h, y + f64::from(e.dj) * h)).sum();
        sum / h.powi(self.kind.derivative_order() as i32)
    }

    /// Checks the parity expected of the kind: first derivatives are odd in
    /// `di`, the second-order kinds even under full point reflection.
    pub fn has_expected_symmetry(&self, tol: f64) -> bool {
        self.entries.iter().all(|e| {
            let mirror = match self.kind {
                StencilKind::FirstDerivativeX => -self.weight_at(-e.di, e.dj),
                StencilKind::SecondDerivativeXX | StencilKind::Laplacian => self.weight_at(-e.di, e.dj),
                StencilKind::CrossXY => self.weight_at(-e.di, -e.dj),
            };
            (e.weight - mirror).abs() <= tol * e.weight.abs().max(1.0)
        })
    }
}

/// Isotropic stencils for dendritic-growth style problems.
#[derive(Debug, Clone)]
pub struct KumarStencils {
    pub dx: Stencil2D,
    pub dxx: Stencil2D,
    pub laplacian: Stencil2D,
    pub dxy: Stencil2D,
}

pub fn kumar_stencils() -> KumarStencils {
    let rows = [(-1, 1.0 / 6.0), (0, 4.0 / 6.0), (1, 1.0 / 6.0)];
    let dx = rows
        .iter()
        .flat_map(|&(dj, w)| [StencilEntry::new(1, dj, w / 2.0), StencilEntry::new(-1, dj, -w / 2.0)])
        .collect();
    let second_rows = [(-1, 1.0 / 12.0), (0, 10.0 / 12.0), (1, 1.0 / 12.0)];
    let dxx: Vec<_> = second_rows
        .iter()
        .flat_map(|&(dj, w)| {
            [StencilEntry::new(1, dj, w), StencilEntry::new(0, dj, -2.0 * w), StencilEntry::new(-1, dj, w)]
        })
        .collect();
    let dxx = Stencil2D::new(StencilKind::SecondDerivativeXX, dxx).expect("static stencil");
    let dyy = dxx.transposed();
    let laplacian = Stencil2D::new(
        StencilKind::Laplacian,
        dxx.entries.iter().chain(dyy.entries.iter()).copied().collect(),
    )
    .expect("static stencil");
    let dxy = Stencil2D::new(
        StencilKind::CrossXY,
        vec![
            StencilEntry::new(1, 1, 0.25),
            StencilEntry::new(-1, -1, 0.25),
            StencilEntry::new(1, -1, -0.25),
            StencilEntry::new(-1, 1, -0.25),
        ],
    )
    .expect("static stencil");
    KumarStencils {
        dx: Stencil2D::new(StencilKind::FirstDerivativeX, dx).expect("static stencil"),
        dxx,
        laplacian,
        dxy,
    }
}

/// Blend of the five-point Laplacian and its 45-degree rotated version
/// (diagonal neighbours at spacing `sqrt(2) h`).
pub fn trefethen_laplacian(w_axis: f64, w_diag: f64) -> Result<Stencil2D> {
    if !(w_axis.is_finite() && w_diag.is_finite()) || (w_axis + w_diag - 1.0).abs() > 1e-12 {
        return Err(Error::invalid(format!(
            "Laplacian blend weights must sum to 1, got {w_axis} + {w_diag}"
        )));
    }
    let axis = Stencil2D::new(
        StencilKind::Laplacian,
        vec![
            StencilEntry::new(1, 0, 1.0),
            StencilEntry::new(-1, 0, 1.0),
            StencilEntry::new(0, 1, 1.0),
            StencilEntry::new(0, -1, 1.0),
            StencilEntry::new(0, 0, -4.0),
        ],
    )?;
    let diag = Stencil2D::new(
        StencilKind::Laplacian,
        vec![
            StencilEntry::new(1, 1, 0.5),
            StencilEntry::new(-1, 1, 0.5),
            StencilEntry::new(1, -1, 0.5),
            StencilEntry::new(-1, -1, 0.5),
            StencilEntry::new(0, 0, -2.0),
        ],
    )?;
    match (w_axis == 0.0, w_diag == 0.0) {
        (false, true) => Ok(axis),
        (true, false) => Ok(diag),
        _ => Stencil2D::blend(w_axis, &axis, w_diag, &diag),
    }
}
