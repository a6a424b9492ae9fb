//! Fixed-step time integration of the entropy gradient flows.
//!
//! Every system is exposed through [`FlowSystem`] over a flat `Vec<f64>`
//! state so that one integrator serves the simplex ODE, the `L²` flow on a
//! grid, the degree-2 Galerkin systems and the diffusion PDE projection.

mod systems;

pub use systems::{
    galerkin_flow_rhs, heat_reference, pde_rhs, riesz_flow_rhs, simplex_rhs, EvenGalerkinFlow,
    EvenPdeFlow, GalerkinFlow, PdeFlow, RieszFlow, SimplexFlow, SimplexState,
};

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::{invalid, FlowError, Result};
use crate::spectral::{DEFAULT_FLOW_MODES, DEFAULT_GRID};

/// Monitors evaluated at recorded steps.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Observation {
    pub entropy: f64,
    pub grad_norm: f64,
    pub constraint_residual: f64,
}

/// A gradient vector field on a flat state vector.
pub trait FlowSystem: Sync {
    fn dim(&self) -> usize;

    /// Time derivative of the state. Fails when the state has left the
    /// expanding-map region.
    fn rhs(&self, state: &[f64]) -> Result<Vec<f64>>;

    fn observe(&self, state: &[f64]) -> Result<Observation>;
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Integrator {
    Euler,
    Rk4,
}

impl std::str::FromStr for Integrator {
    type Err = FlowError;

    fn from_str(s: &str) -> Result<Self> {
        match s.to_ascii_lowercase().as_str() {
            "euler" => Ok(Self::Euler),
            "rk4" => Ok(Self::Rk4),
            other => invalid(format!(
                "unknown integrator `{other}` (expected euler or rk4)"
            )),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct FlowConfig {
    pub dt: f64,
    pub t_end: f64,
    pub integrator: Integrator,
    /// Galerkin truncation `M`.
    pub modes: usize,
    /// Quadrature / state grid size `N`.
    pub grid: usize,
    pub record_every: usize,
    /// Keep full state snapshots in the trajectory.
    pub store_states: bool,
}

impl Default for FlowConfig {
    fn default() -> Self {
        Self {
            dt: 0.1,
            t_end: 50.0,
            integrator: Integrator::Euler,
            modes: DEFAULT_FLOW_MODES,
            grid: DEFAULT_GRID,
            record_every: 1,
            store_states: true,
        }
    }
}

impl FlowConfig {
    pub fn validate(&self) -> Result<()> {
        if !(self.dt.is_finite() && self.dt > 0.0) {
            return invalid(format!("dt must be positive, got {}", self.dt));
        }
        if !(self.t_end.is_finite() && self.dt < self.t_end) {
            return invalid(format!(
                "t_end ({}) must exceed dt ({})",
                self.t_end, self.dt
            ));
        }
        if self.modes < 1 {
            return invalid("need at least one mode");
        }
        if self.grid < 4 * self.modes {
            return invalid(format!(
                "grid {} too coarse for {} modes (need N ≥ 4M)",
                self.grid, self.modes
            ));
        }
        if self.record_every == 0 {
            return invalid("record_every must be at least 1");
        }
        Ok(())
    }

    pub fn steps(&self) -> usize {
        (self.t_end / self.dt).round() as usize
    }
}

/// Recorded samples of one integration run.
#[derive(Debug, Clone, Default, PartialEq, Serialize)]
pub struct Trajectory {
    pub times: Vec<f64>,
    pub states: Vec<Vec<f64>>,
    pub entropy: Vec<f64>,
    pub grad_norm: Vec<f64>,
    pub constraint_residual: Vec<f64>,
    /// State after the last step, kept even when snapshots are disabled.
    pub final_state: Vec<f64>,
}

impl Trajectory {
    pub fn len(&self) -> usize {
        self.times.len()
    }

    pub fn is_empty(&self) -> bool {
        self.times.is_empty()
    }

    /// Most negative step-over-step entropy change (0 if entropy never drops).
    pub fn worst_entropy_dip(&self) -> f64 {
        self.entropy
            .windows(2)
            .map(|w| w[1] - w[0])
            .fold(0.0, f64::min)
    }

    fn record(&mut self, t: f64, state: &[f64], obs: Observation, keep: bool) {
        self.times.push(t);
        if keep {
            self.states.push(state.to_vec());
        }
        self.entropy.push(obs.entropy);
        self.grad_norm.push(obs.grad_norm);
        self.constraint_residual.push(obs.constraint_residual);
    }
}

fn axpy(x: &[f64], a: f64, y: &[f64]) -> Vec<f64> {
    x.iter().zip(y).map(|(x, y)| x + a * y).collect()
}

/// Advance one step of size `dt`.
pub fn step<S: FlowSystem + ?Sized>(
    system: &S,
    state: &[f64],
    dt: f64,
    integrator: Integrator,
) -> Result<Vec<f64>> {
    match integrator {
        Integrator::Euler => Ok(axpy(state, dt, &system.rhs(state)?)),
        Integrator::Rk4 => {
            let k1 = system.rhs(state)?;
            let k2 = system.rhs(&axpy(state, 0.5 * dt, &k1))?;
            let k3 = system.rhs(&axpy(state, 0.5 * dt, &k2))?;
            let k4 = system.rhs(&axpy(state, dt, &k3))?;
            Ok((0..state.len())
                .map(|i| state[i] + dt / 6.0 * (k1[i] + 2.0 * k2[i] + 2.0 * k3[i] + k4[i]))
                .collect())
        }
    }
}

/// Integrate from `initial` to `cfg.t_end`, recording every
/// `cfg.record_every` steps plus the first and last.
pub fn integrate<S: FlowSystem + ?Sized>(
    system: &S,
    initial: &[f64],
    cfg: &FlowConfig,
) -> Result<Trajectory> {
    cfg.validate()?;
    if initial.len() != system.dim() {
        return invalid(format!(
            "initial state has {} entries, system expects {}",
            initial.len(),
            system.dim()
        ));
    }
    let steps = cfg.steps();
    let mut traj = Trajectory::default();
    let mut state = initial.to_vec();
    traj.record(0.0, &state, system.observe(&state)?, cfg.store_states);
    for k in 1..=steps {
        state = step(system, &state, cfg.dt, cfg.integrator)?;
        if state.iter().any(|v| !v.is_finite()) {
            return Err(FlowError::Step { step: k });
        }
        if k % cfg.record_every == 0 || k == steps {
            let obs = system.observe(&state)?;
            traj.record(k as f64 * cfg.dt, &state, obs, cfg.store_states);
        }
    }
    traj.final_state = state;
    Ok(traj)
}

/// Integrate independent initial conditions in parallel. Output order
/// follows `initials` and each run is bitwise identical to a serial call.
pub fn integrate_many<S: FlowSystem + ?Sized>(
    system: &S,
    initials: &[Vec<f64>],
    cfg: &FlowConfig,
) -> Vec<Result<Trajectory>> {
    initials
        .par_iter()
        .map(|x0| integrate(system, x0, cfg))
        .collect()
}
