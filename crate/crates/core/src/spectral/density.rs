use super::{FourierRep, GridRep};
use crate::error::{invalid, FlowError, Result};

/// Lower guard on every density value fed to a logarithm. The upper guard
/// is `1 − DELTA_FLOOR`.
pub const DELTA_FLOOR: f64 = 1e-9;

/// Residual allowed on `Σ_i h(y + i) = 1` for a valid density.
pub const CONSTRAINT_TOL: f64 = 1e-9;

fn check_grid(grid: &GridRep, degree: usize) -> Result<()> {
    if degree < 1 {
        return invalid("degree must be at least 1");
    }
    if grid.period != degree as f64 {
        return invalid(format!(
            "period {} does not match degree {degree}",
            grid.period
        ));
    }
    if grid.len() < 4 || !grid.len().is_multiple_of(degree) {
        return invalid(format!(
            "grid size {} must be ≥ 4 and divisible by {degree}",
            grid.len()
        ));
    }
    if grid.samples.iter().any(|v| !v.is_finite()) {
        return invalid("grid samples must be finite");
    }
    Ok(())
}

/// `max_{y ∈ [0,1)} |Σ_{i=0}^{n-1} f(y + i) − target|` over grid nodes.
pub(crate) fn translation_residual(grid: &GridRep, degree: usize, target: f64) -> f64 {
    let shift = grid.len() / degree;
    (0..shift)
        .map(|j| {
            let s: f64 = (0..degree).map(|i| grid.samples[j + i * shift]).sum();
            (s - target).abs()
        })
        .fold(0.0, f64::max)
}

/// The derivative `h = g′` of the inverse lift of a degree-`n` expanding
/// map, sampled on a uniform grid over `[0, n]`.
#[derive(Debug, Clone, PartialEq)]
pub struct InverseDerivative {
    grid: GridRep,
    degree: usize,
}

impl InverseDerivative {
    /// Wraps samples without checking the density bounds; see [`Self::validate`].
    pub fn from_grid(grid: GridRep, degree: usize) -> Result<Self> {
        check_grid(&grid, degree)?;
        Ok(Self { grid, degree })
    }

    pub fn from_fourier(rep: &FourierRep, nodes: usize) -> Result<Self> {
        let degree = rep.period.round() as usize;
        Self::from_grid(rep.sample(nodes), degree)
    }

    /// `h ≡ 1/n`, the inverse derivative of the linear map.
    pub fn uniform(degree: usize, nodes: usize) -> Result<Self> {
        Self::from_grid(
            GridRep::from_fn(degree as f64, nodes, |_| 1.0 / degree as f64),
            degree,
        )
    }

    pub fn grid(&self) -> &GridRep {
        &self.grid
    }

    pub fn into_grid(self) -> GridRep {
        self.grid
    }

    pub fn degree(&self) -> usize {
        self.degree
    }

    /// Fails with a domain error on the first node outside `(δ, 1 − δ)`.
    pub fn check_bounds(&self) -> Result<()> {
        check_density_bounds(&self.grid.samples)
    }

    /// Bounds plus the measure-preservation constraint.
    pub fn validate(&self) -> Result<()> {
        self.check_bounds()?;
        let r = constraint_residual(self);
        if r > CONSTRAINT_TOL {
            return Err(FlowError::Domain {
                what: "constraint residual",
                value: r,
                index: 0,
            });
        }
        Ok(())
    }

    /// `∫₀ⁿ h dy`.
    pub fn mass(&self) -> f64 {
        super::quadrature(&self.grid)
    }

    /// `h + ε·ψ`, unchecked.
    pub fn perturbed(&self, psi: &TangentVector, eps: f64) -> Result<Self> {
        let grid = self.grid.zip_with(psi.grid(), |h, p| h + eps * p)?;
        Ok(Self {
            grid,
            degree: self.degree,
        })
    }
}

pub(crate) fn check_density_bounds(samples: &[f64]) -> Result<()> {
    for (index, &value) in samples.iter().enumerate() {
        if !(value > DELTA_FLOOR && value < 1.0 - DELTA_FLOOR) {
            return Err(FlowError::Domain {
                what: "density",
                value,
                index,
            });
        }
    }
    Ok(())
}

/// A perturbation `ψ` of an inverse derivative with `Σ_i ψ(y + i) = 0`.
#[derive(Debug, Clone, PartialEq)]
pub struct TangentVector {
    grid: GridRep,
    degree: usize,
}

impl TangentVector {
    pub fn from_grid(grid: GridRep, degree: usize) -> Result<Self> {
        check_grid(&grid, degree)?;
        Ok(Self { grid, degree })
    }

    pub fn from_fourier(rep: &FourierRep, nodes: usize) -> Result<Self> {
        let degree = rep.period.round() as usize;
        Self::from_grid(rep.sample(nodes), degree)
    }

    pub fn zero(degree: usize, nodes: usize) -> Result<Self> {
        Self::from_grid(GridRep::from_fn(degree as f64, nodes, |_| 0.0), degree)
    }

    pub fn grid(&self) -> &GridRep {
        &self.grid
    }

    pub fn degree(&self) -> usize {
        self.degree
    }

    pub fn l2_norm(&self) -> f64 {
        self.grid.l2_norm()
    }

    pub fn scale(&self, s: f64) -> Self {
        Self {
            grid: self.grid.map(|v| s * v),
            degree: self.degree,
        }
    }

    /// `L²` inner product by quadrature.
    pub fn dot(&self, other: &TangentVector) -> Result<f64> {
        self.grid.inner(&other.grid)
    }

    /// `max_y |Σ_i ψ(y + i)|`; zero for an exact tangent vector.
    pub fn tangency_residual(&self) -> f64 {
        translation_residual(&self.grid, self.degree, 0.0)
    }
}

/// `max_{y ∈ [0,1)} |Σ_{i=0}^{n-1} h(y + i) − 1|` over grid nodes.
pub fn constraint_residual(h: &InverseDerivative) -> f64 {
    translation_residual(&h.grid, h.degree, 1.0)
}
