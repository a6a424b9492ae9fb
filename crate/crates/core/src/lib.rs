//! Gradient flows of the SRB entropy on Lebesgue-measure-preserving
//! expanding maps of the circle.
//!
//! A degree-`n` map is described by the derivative `h = g′` of the inverse
//! of its lift, a density on `[0, n]` with `0 < h < 1` and
//! `Σ_{i=0}^{n-1} h(y + i) = 1`. In that coordinate the entropy is the Gibbs
//! form `H(h) = −∫ h ln h`.
//!
//! * [`spectral`]: Fourier and grid representations, quadrature, Sobolev norms.
//! * [`mod@entropy`]: the functional, its directional derivatives and gradients.
//! * [`flow`]: time integration of the four gradient systems.
//! * [`verify`]: seeded oracle checks of every identity the flows rely on.

pub mod entropy;
pub mod error;
pub mod flow;
pub mod spectral;
pub mod verify;

pub use entropy::{entropy, gateaux_g, gateaux_h, riesz_gradient, CosineModes, OddModes};
pub use error::{FlowError, Result};
pub use flow::{integrate, FlowConfig, FlowSystem, Integrator, Trajectory};
pub use spectral::{FourierRep, GridRep, InverseDerivative, TangentVector};
pub use verify::CheckReport;
