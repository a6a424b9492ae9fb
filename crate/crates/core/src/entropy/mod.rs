//! The SRB entropy `H(h) = −∫₀ⁿ h ln h dy` of a Lebesgue-preserving
//! expanding map, written in the inverse-derivative coordinate `h = g′`,
//! together with its directional derivatives and gradients.
//!
//! Two metrics are supported:
//!
//! * the `L²` metric on the tangent space `Σ_i ψ(y + i) = 0`, for any
//!   degree, where the gradient has the closed form
//!   `R_h(y) = −ln h(y) + (1/n) Σ_i ln h(y + i)`;
//! * the `H²` Sobolev metric for degree 2, where the gradient is obtained
//!   by projecting the derivative onto the orthonormal basis
//!   `c_k cos(kπy), c_k sin(kπy)` for odd `k` (see [`galerkin`]).

pub mod galerkin;

pub use galerkin::{
    basis_norm_factor_sq, galerkin_rhs_even, sobolev_gradient_n2, CosineModes, OddModeGrid,
    OddModes,
};

use crate::error::Result;
use crate::spectral::{quadrature, GridRep, InverseDerivative, TangentVector};

/// `−∫₀ⁿ h ln h dy`.
pub fn entropy(h: &InverseDerivative) -> Result<f64> {
    h.check_bounds()?;
    Ok(-quadrature(&h.grid().map(|v| v * v.ln())))
}

/// `DH_h(ψ) = −∫₀ⁿ ψ ln h dy`.
pub fn gateaux_h(h: &InverseDerivative, psi: &TangentVector) -> Result<f64> {
    h.check_bounds()?;
    let log_h = h.grid().map(f64::ln);
    Ok(-log_h.inner(psi.grid())?)
}

/// Derivative of `H(g)` along a perturbation `φ` of the inverse map, in the
/// form `−∫₀ⁿ ln g′ · φ′ dy`. `φ′` is taken spectrally.
pub fn gateaux_g(g_prime: &InverseDerivative, phi: &TangentVector) -> Result<f64> {
    g_prime.check_bounds()?;
    let dphi = phi.grid().derivative()?;
    let log_g = g_prime.grid().map(f64::ln);
    Ok(-log_g.inner(&dphi)?)
}

/// The integrated-by-parts form `∫₀ⁿ (g″/g′) φ dy` of [`gateaux_g`].
pub fn gateaux_g_by_parts(g_prime: &InverseDerivative, phi: &TangentVector) -> Result<f64> {
    g_prime.check_bounds()?;
    let g2 = g_prime.grid().derivative()?;
    let ratio = g2.zip_with(g_prime.grid(), |a, b| a / b)?;
    ratio.inner(phi.grid())
}

/// Riesz representative of `DH_h` in the `L²` tangent space:
/// `R_h(y) = −ln h(y) + (1/n) Σ_{i=0}^{n-1} ln h(y + i)`.
pub fn riesz_gradient(h: &InverseDerivative) -> Result<TangentVector> {
    h.check_bounds()?;
    let n = h.degree();
    let samples = &h.grid().samples;
    let shift = samples.len() / n;
    let logs: Vec<f64> = samples.iter().map(|v| v.ln()).collect();
    let mut out = vec![0.0; samples.len()];
    for j in 0..shift {
        let avg = (0..n).map(|i| logs[j + i * shift]).sum::<f64>() / n as f64;
        for i in 0..n {
            out[j + i * shift] = avg - logs[j + i * shift];
        }
    }
    TangentVector::from_grid(GridRep::new(h.grid().period, out)?, n)
}
