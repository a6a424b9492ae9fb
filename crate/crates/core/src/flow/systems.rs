use super::{FlowSystem, Observation};
use crate::entropy::{riesz_gradient, CosineModes, OddModeGrid, OddModes};
use crate::error::{invalid, FlowError, Result};
use crate::spectral::{
    check_density_bounds, constraint_residual, GridRep, InverseDerivative, TangentVector,
    DELTA_FLOOR,
};

/// Values `x_k = h(y + k − 1)` of a density at the `n` translates of a point.
#[derive(Debug, Clone, PartialEq)]
pub struct SimplexState {
    x: Vec<f64>,
}

impl SimplexState {
    pub fn new(x: Vec<f64>) -> Result<Self> {
        if x.len() < 2 {
            return invalid("simplex state needs at least two components");
        }
        for (index, &value) in x.iter().enumerate() {
            if !(value > 0.0 && value < 1.0) {
                return Err(FlowError::Domain {
                    what: "simplex component",
                    value,
                    index,
                });
            }
        }
        let s: f64 = x.iter().sum();
        if (s - 1.0).abs() > 1e-12 {
            return invalid(format!("simplex components sum to {s}, not 1"));
        }
        Ok(Self { x })
    }

    pub fn as_slice(&self) -> &[f64] {
        &self.x
    }

    pub fn into_vec(self) -> Vec<f64> {
        self.x
    }
}

fn simplex_velocity(x: &[f64]) -> Result<Vec<f64>> {
    for (index, &value) in x.iter().enumerate() {
        if value <= DELTA_FLOOR {
            return Err(FlowError::Domain {
                what: "simplex component",
                value,
                index,
            });
        }
    }
    let logs: Vec<f64> = x.iter().map(|v| v.ln()).collect();
    let mean = logs.iter().sum::<f64>() / x.len() as f64;
    Ok(logs.iter().map(|l| mean - l).collect())
}

/// `ẋ_k = −ln x_k + (1/n) Σ_i ln x_i`.
pub fn simplex_rhs(x: &SimplexState) -> Result<Vec<f64>> {
    simplex_velocity(&x.x)
}

/// Velocity of the `L²` gradient flow, i.e. the Riesz gradient `R_h`.
pub fn riesz_flow_rhs(h: &InverseDerivative) -> Result<TangentVector> {
    riesz_gradient(h)
}

/// Coefficient velocities of the degree-2 `H²` gradient flow.
pub fn galerkin_flow_rhs(state: &OddModes, nodes: usize) -> Result<OddModes> {
    OddModeGrid::new(nodes).sobolev_gradient(state)
}

/// Odd Fourier coefficients of `w_yy / w_y` for `w = y/2 + Σ (a cos + b sin)`.
///
/// This is the projection of `w_t = w_yy / w_y` onto the truncated odd
/// harmonics. It is computed through the spectral module's discrete
/// transform, independently of the Galerkin quadrature.
pub fn pde_rhs(state: &OddModes, nodes: usize) -> Result<OddModes> {
    let wy = state.inverse_derivative();
    if 2 * wy.modes() >= nodes {
        return invalid(format!(
            "{nodes} nodes cannot resolve harmonic {}",
            wy.modes()
        ));
    }
    let wy_grid = wy.sample(nodes);
    check_density_bounds(&wy_grid.samples)?;
    let wyy_grid = wy.differentiate().sample(nodes);
    let ratio = wyy_grid.zip_with(&wy_grid, |a, b| a / b)?;
    let coeffs = ratio.to_fourier(wy.modes())?;
    let a = (0..state.modes()).map(|m| coeffs.cos[2 * m]).collect();
    let b = (0..state.modes()).map(|m| coeffs.sin[2 * m]).collect();
    OddModes::new(a, b)
}

/// Exact heat-equation evolution of the even-case coefficients:
/// `B_k(t) = B_k(0)·exp(−(2k−1)² t)`.
pub fn heat_reference(initial: &[f64], t: f64) -> Vec<f64> {
    initial
        .iter()
        .enumerate()
        .map(|(m, b)| {
            let k = (2 * m + 1) as f64;
            b * (-k * k * t).exp()
        })
        .collect()
}

/// The `n`-point simplex ODE.
#[derive(Debug, Clone, Copy)]
pub struct SimplexFlow {
    pub degree: usize,
}

impl FlowSystem for SimplexFlow {
    fn dim(&self) -> usize {
        self.degree
    }

    fn rhs(&self, state: &[f64]) -> Result<Vec<f64>> {
        simplex_velocity(state)
    }

    fn observe(&self, state: &[f64]) -> Result<Observation> {
        let v = simplex_velocity(state)?;
        Ok(Observation {
            entropy: -state.iter().map(|x| x * x.ln()).sum::<f64>(),
            grad_norm: v.iter().map(|x| x * x).sum::<f64>().sqrt(),
            constraint_residual: (state.iter().sum::<f64>() - 1.0).abs(),
        })
    }
}

/// `L²` gradient flow of a degree-`n` density sampled on `nodes` points.
#[derive(Debug, Clone, Copy)]
pub struct RieszFlow {
    pub degree: usize,
    pub nodes: usize,
}

impl RieszFlow {
    fn density(&self, state: &[f64]) -> Result<InverseDerivative> {
        InverseDerivative::from_grid(
            GridRep::new(self.degree as f64, state.to_vec())?,
            self.degree,
        )
    }
}

impl FlowSystem for RieszFlow {
    fn dim(&self) -> usize {
        self.nodes
    }

    fn rhs(&self, state: &[f64]) -> Result<Vec<f64>> {
        Ok(riesz_gradient(&self.density(state)?)?
            .grid()
            .samples
            .clone())
    }

    fn observe(&self, state: &[f64]) -> Result<Observation> {
        let h = self.density(state)?;
        let r = riesz_gradient(&h)?;
        Ok(Observation {
            entropy: crate::entropy::entropy(&h)?,
            grad_norm: r.l2_norm(),
            constraint_residual: constraint_residual(&h),
        })
    }
}

/// Entropy and constraint residual of a degree-2 density sampled at
/// `N` uniform nodes of one period.
fn degree_two_observation(h: &[f64], grad_norm: f64) -> Result<Observation> {
    check_density_bounds(h)?;
    let n = h.len();
    let entropy = -(2.0 / n as f64) * h.iter().map(|v| v * v.ln()).sum::<f64>();
    let half = n / 2;
    let residual = (0..half)
        .map(|j| (h[j] + h[j + half] - 1.0).abs())
        .fold(0.0, f64::max);
    Ok(Observation {
        entropy,
        grad_norm,
        constraint_residual: residual,
    })
}

/// Degree-2 `H²` gradient flow on interleaved odd modes `(a₁, b₁, a₃, b₃, …)`.
#[derive(Debug, Clone)]
pub struct GalerkinFlow {
    pub modes: usize,
    grid: OddModeGrid,
}

impl GalerkinFlow {
    pub fn new(modes: usize, nodes: usize) -> Self {
        Self {
            modes,
            grid: OddModeGrid::new(nodes),
        }
    }
}

impl FlowSystem for GalerkinFlow {
    fn dim(&self) -> usize {
        2 * self.modes
    }

    fn rhs(&self, state: &[f64]) -> Result<Vec<f64>> {
        Ok(self
            .grid
            .sobolev_gradient(&OddModes::from_flat(state)?)?
            .to_flat())
    }

    fn observe(&self, state: &[f64]) -> Result<Observation> {
        let s = OddModes::from_flat(state)?;
        let (uy, _) = self.grid.slopes(&s);
        let grad = self.grid.sobolev_gradient(&s)?;
        degree_two_observation(&uy, grad.sobolev_norm())
    }
}

/// Even-case Galerkin flow in the `B` variables.
#[derive(Debug, Clone)]
pub struct EvenGalerkinFlow {
    pub modes: usize,
    grid: OddModeGrid,
}

impl EvenGalerkinFlow {
    pub fn new(modes: usize, nodes: usize) -> Self {
        Self {
            modes,
            grid: OddModeGrid::new(nodes),
        }
    }
}

impl FlowSystem for EvenGalerkinFlow {
    fn dim(&self) -> usize {
        self.modes
    }

    fn rhs(&self, state: &[f64]) -> Result<Vec<f64>> {
        Ok(self.grid.even_rhs(&CosineModes(state.to_vec()))?.0)
    }

    fn observe(&self, state: &[f64]) -> Result<Observation> {
        let b = CosineModes(state.to_vec());
        let h = self.grid.even_density(&b);
        let grad = self.grid.even_rhs(&b)?;
        degree_two_observation(&h, grad.sobolev_norm())
    }
}

/// Projected gradient-dependent diffusion `w_t = w_yy / w_y` on odd modes.
#[derive(Debug, Clone, Copy)]
pub struct PdeFlow {
    pub modes: usize,
    pub nodes: usize,
}

impl FlowSystem for PdeFlow {
    fn dim(&self) -> usize {
        2 * self.modes
    }

    fn rhs(&self, state: &[f64]) -> Result<Vec<f64>> {
        Ok(pde_rhs(&OddModes::from_flat(state)?, self.nodes)?.to_flat())
    }

    fn observe(&self, state: &[f64]) -> Result<Observation> {
        let s = OddModes::from_flat(state)?;
        let h = s.inverse_derivative().sample(self.nodes);
        let v = pde_rhs(&s, self.nodes)?;
        let norm = v.to_flat().iter().map(|x| x * x).sum::<f64>().sqrt();
        degree_two_observation(&h.samples, norm)
    }
}

/// [`PdeFlow`] restricted to even densities, in the `B` variables.
#[derive(Debug, Clone, Copy)]
pub struct EvenPdeFlow {
    pub modes: usize,
    pub nodes: usize,
}

impl FlowSystem for EvenPdeFlow {
    fn dim(&self) -> usize {
        self.modes
    }

    fn rhs(&self, state: &[f64]) -> Result<Vec<f64>> {
        let s = OddModes::from_cosine_modes(&CosineModes(state.to_vec()));
        Ok(pde_rhs(&s, self.nodes)?.to_cosine_modes().0)
    }

    fn observe(&self, state: &[f64]) -> Result<Observation> {
        let s = OddModes::from_cosine_modes(&CosineModes(state.to_vec()));
        let h = s.inverse_derivative().sample(self.nodes);
        let v = pde_rhs(&s, self.nodes)?;
        let norm = v.to_flat().iter().map(|x| x * x).sum::<f64>().sqrt();
        degree_two_observation(&h.samples, norm)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::entropy::basis_norm_factor_sq;
    use crate::flow::{integrate, FlowConfig, Integrator};
    use std::f64::consts::PI;

    #[test]
    fn simplex_rhs_examples() {
        let eq = SimplexState::new(vec![0.5, 0.5]).unwrap();
        assert_eq!(simplex_rhs(&eq).unwrap(), vec![0.0, 0.0]);

        let x = SimplexState::new(vec![0.3, 0.7]).unwrap();
        let v = simplex_rhs(&x).unwrap();
        let expected = 0.5 * (7.0f64 / 3.0).ln();
        assert!((v[0] - expected).abs() < 1e-15 && (v[1] + expected).abs() < 1e-15);
        assert!((expected - 0.4236489).abs() < 1e-7);

        let third = SimplexState::new(vec![1.0 / 3.0; 3]).unwrap();
        assert!(simplex_rhs(&third).unwrap().iter().all(|v| v.abs() < 1e-15));
    }

    #[test]
    fn simplex_state_validation() {
        assert!(SimplexState::new(vec![0.2, 0.7]).is_err());
        assert!(SimplexState::new(vec![1.0, 0.0]).is_err());
        assert!(SimplexState::new(vec![1.0]).is_err());
        assert!(SimplexFlow { degree: 2 }.rhs(&[1e-12, 1.0]).is_err());
    }

    #[test]
    fn riesz_rhs_is_pointwise_simplex_rhs() {
        for n in [2usize, 3, 5] {
            let g = GridRep::from_fn(n as f64, 40 * n, |y| {
                1.0 / n as f64 + 0.05 * (2.0 * PI * y / n as f64).cos()
                    - 0.03 * (4.0 * PI * y / n as f64).sin()
            });
            let h = InverseDerivative::from_grid(g, n).unwrap();
            let r = riesz_flow_rhs(&h).unwrap();
            let shift = 40;
            for j in 0..shift {
                let xs: Vec<f64> = (0..n).map(|i| h.grid().samples[j + i * shift]).collect();
                let v = simplex_velocity(&xs).unwrap();
                for (i, vi) in v.iter().enumerate() {
                    assert!((vi - r.grid().samples[j + i * shift]).abs() < 1e-12);
                }
            }
        }
    }

    #[test]
    fn riesz_rhs_examples() {
        let u = InverseDerivative::uniform(4, 64).unwrap();
        assert!(riesz_flow_rhs(&u)
            .unwrap()
            .grid()
            .samples
            .iter()
            .all(|v| v.abs() < 1e-15));
        let h = InverseDerivative::from_grid(
            GridRep::from_fn(2.0, 64, |y| 0.5 + 0.25 * (PI * y).cos()),
            2,
        )
        .unwrap();
        assert!((riesz_flow_rhs(&h).unwrap().grid().samples[0] + 0.5 * 3f64.ln()).abs() < 1e-14);
    }

    #[test]
    fn galerkin_rhs_examples() {
        let z = galerkin_flow_rhs(&OddModes::zero(3), 256).unwrap();
        assert!(z.to_flat().iter().all(|&v| v == 0.0));
        let s = OddModes::from_cosine_modes(&CosineModes(vec![0.25, 0.0, 0.0]));
        let v = galerkin_flow_rhs(&s, 1024).unwrap().to_cosine_modes();
        let expected = -2.0 * PI * PI * basis_norm_factor_sq(1) * (2.0 - 3f64.sqrt());
        assert!((v.0[0] - expected).abs() < 1e-14);
    }

    #[test]
    fn pde_rhs_is_galerkin_without_weights() {
        let s = OddModes::from_cosine_modes(&CosineModes(vec![0.25, 0.0, 0.0]));
        let g = galerkin_flow_rhs(&s, 1024).unwrap();
        let p = pde_rhs(&s, 1024).unwrap();
        assert!((g.b[0] / p.b[0] - basis_norm_factor_sq(1)).abs() < 1e-14);
        assert_eq!(pde_rhs(&OddModes::zero(2), 64).unwrap(), OddModes::zero(2));
        assert!(pde_rhs(&OddModes::zero(20), 64).is_err());
    }

    #[test]
    fn heat_reference_examples() {
        assert_eq!(heat_reference(&[0.25, 0.1], 0.0), vec![0.25, 0.1]);
        let b = heat_reference(&[0.25], 1.0);
        assert!((b[0] - 0.25 * (-1.0f64).exp()).abs() < 1e-17);
        let b = heat_reference(&[1.0, 1.0], 0.7);
        assert!((b[1] / b[0] - (-8.0 * 0.7f64).exp()).abs() < 1e-15);
        assert!((heat_reference(&[0.0, 1.0], 0.3)[1] - (-2.7f64).exp()).abs() < 1e-15);
    }

    #[test]
    fn equilibrium_trajectories_are_constant() {
        let cfg = FlowConfig {
            dt: 0.1,
            t_end: 1.0,
            ..FlowConfig::default()
        };
        let t = integrate(&SimplexFlow { degree: 3 }, &[1.0 / 3.0; 3], &cfg).unwrap();
        assert!(t.states.iter().all(|s| s == &t.states[0]));
        let t = integrate(&EvenGalerkinFlow::new(3, 256), &[0.0; 3], &cfg).unwrap();
        assert!(t.states.iter().all(|s| s.iter().all(|&v| v == 0.0)));
        assert!(t.entropy.iter().all(|&e| (e - 2f64.ln()).abs() < 1e-14));
    }

    #[test]
    fn simplex_two_point_convergence() {
        let cfg = FlowConfig {
            dt: 0.01,
            t_end: 50.0,
            integrator: Integrator::Rk4,
            record_every: 100,
            ..FlowConfig::default()
        };
        let t = integrate(&SimplexFlow { degree: 2 }, &[0.3, 0.7], &cfg).unwrap();
        for x in &t.final_state {
            assert!((x - 0.5).abs() < 1e-6);
        }
        assert!(t.worst_entropy_dip() >= -1e-12);
    }

    #[test]
    fn even_and_general_galerkin_flows_agree() {
        let cfg = FlowConfig {
            dt: 0.1,
            t_end: 5.0,
            integrator: Integrator::Rk4,
            ..FlowConfig::default()
        };
        let b0 = CosineModes(vec![0.2, 0.01, -0.002]);
        let even = integrate(&EvenGalerkinFlow::new(3, 512), &b0.0, &cfg).unwrap();
        let odd0 = OddModes::from_cosine_modes(&b0).to_flat();
        let general = integrate(&GalerkinFlow::new(3, 512), &odd0, &cfg).unwrap();
        let fin = OddModes::from_flat(&general.final_state).unwrap();
        assert!(fin.a.iter().all(|a| a.abs() < 1e-10));
        for (x, y) in fin.to_cosine_modes().0.iter().zip(&even.final_state) {
            assert!((x - y).abs() < 1e-12);
        }
        for (x, y) in general.entropy.iter().zip(&even.entropy) {
            assert!((x - y).abs() < 1e-12);
        }
    }

    #[test]
    fn galerkin_state_leaving_domain_halts() {
        let cfg = FlowConfig {
            dt: 0.1,
            t_end: 1.0,
            ..FlowConfig::default()
        };
        let r = integrate(&EvenGalerkinFlow::new(1, 64), &[0.55], &cfg);
        assert!(matches!(r, Err(FlowError::Domain { .. })));
    }
}
