use std::fmt;

use thiserror::Error;

/// Coarse classification used by front ends to pick exit codes and the
/// `ERROR:<category>:` prefix.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Category {
    Validation,
    Numerical,
}

impl fmt::Display for Category {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Category::Validation => f.write_str("validation"),
            Category::Numerical => f.write_str("numerical"),
        }
    }
}

#[derive(Debug, Error)]
pub enum Error {
    #[error("{0}")]
    Validation(String),

    #[error("scheme `{label}` does not approximate a derivative: {detail}")]
    Inconsistent { label: String, detail: String },

    #[error("implicit denominator vanishes at z = {z}")]
    Singularity { z: f64 },

    #[error("no real coefficients reach order {order} on the three-point prefactored stencil")]
    Infeasible { order: u32 },

    #[error("phase velocity is undefined at Kh = 0")]
    UndefinedPhaseVelocity,

    #[error("mode (xi_h = {xi_h}, eta_h = {eta_h}) is axis aligned; the cross term vanishes")]
    SingularMode { xi_h: f64, eta_h: f64 },

    #[error("no real solution: discriminant = {discriminant}")]
    NoRealSolution { discriminant: f64 },

    #[error("mesh is degenerate: weight denominator = {denominator:e}")]
    DegenerateMesh { denominator: f64 },

    #[error("quadrature produced a non-finite value: {0}")]
    Quadrature(String),

    #[error("no usable samples: {0}")]
    NoData(String),

    #[error("solution diverged at step {step}")]
    Divergence { step: usize },

    #[error("every Courant number in the grid was unstable")]
    BoundaryNotFound,

    #[error("implicit system is singular: {0}")]
    SingularSystem(String),

    #[error("line {line}: {msg}")]
    Parse { line: usize, msg: String },

    #[error(transparent)]
    Io(#[from] std::io::Error),
}

impl Error {
    pub fn category(&self) -> Category {
        match self {
            Error::Validation(_) | Error::Parse { .. } | Error::Io(_) | Error::Inconsistent { .. } => {
                Category::Validation
            }
            _ => Category::Numerical,
        }
    }

    pub(crate) fn invalid(msg: impl Into<String>) -> Self {
        Error::Validation(msg.into())
    }
}

pub type Result<T> = std::result::Result<T, Error>;
