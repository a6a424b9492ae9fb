//! Periodic functions on `[0, n]`: truncated Fourier series, uniform grids,
//! quadrature, Sobolev norms and the measure-preservation constraint
//! `Σ_{i=0}^{n-1} h(y + i) = 1`.

mod density;
mod fourier;
mod grid;

pub(crate) use density::check_density_bounds;
pub use density::{
    constraint_residual, InverseDerivative, TangentVector, CONSTRAINT_TOL, DELTA_FLOOR,
};
pub use fourier::{derivative_sup_bound, project_constraint, sobolev_sup_constant, FourierRep};
pub use grid::{quadrature, GridRep};

use std::f64::consts::PI;

/// Grid size used by flows and gradient quadrature unless overridden.
pub const DEFAULT_GRID: usize = 1024;
/// Default Galerkin truncation (three odd harmonics).
pub const DEFAULT_FLOW_MODES: usize = 3;
/// Truncation used for verification runs.
pub const DEFAULT_VERIFY_MODES: usize = 32;

/// `cos(2πj/N)` and `sin(2πj/N)` for `j = 0..N`.
///
/// On a uniform periodic grid every harmonic `k` evaluated at node `j` is
/// a lookup at index `k·j mod N`, which keeps sampling and projection exact
/// to one rounding per table entry.
#[derive(Debug, Clone)]
pub struct TrigTable {
    cos: Vec<f64>,
    sin: Vec<f64>,
}

impl TrigTable {
    pub fn new(nodes: usize) -> Self {
        let step = 2.0 * PI / nodes as f64;
        let (cos, sin) = (0..nodes)
            .map(|j| {
                let x = step * j as f64;
                (x.cos(), x.sin())
            })
            .unzip();
        Self { cos, sin }
    }

    #[inline]
    pub fn len(&self) -> usize {
        self.cos.len()
    }

    #[inline]
    pub fn is_empty(&self) -> bool {
        self.cos.is_empty()
    }

    /// `cos(2π·k·j/N)`.
    #[inline]
    pub fn cos(&self, k: usize, j: usize) -> f64 {
        self.cos[(k * j) % self.cos.len()]
    }

    /// `sin(2π·k·j/N)`.
    #[inline]
    pub fn sin(&self, k: usize, j: usize) -> f64 {
        self.sin[(k * j) % self.sin.len()]
    }
}
