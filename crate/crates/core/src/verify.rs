//! Seeded oracle checks for the identities the gradient flows rely on.
//!
//! Tolerances fall in two classes: quadrature-limited identities
//! ([`QUADRATURE_TOL`]) and algebraic identities that hold up to rounding
//! ([`ALGEBRAIC_TOL`], [`EXACT_TOL`]).

use std::collections::BTreeMap;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::Serialize;

use crate::entropy::{
    basis_norm_factor_sq, entropy, galerkin_rhs_even, gateaux_h, riesz_gradient, CosineModes,
    OddModeGrid, OddModes,
};
use crate::error::{invalid, Result};
use crate::flow::{pde_rhs, simplex_rhs, SimplexState};
use crate::spectral::{
    derivative_sup_bound, project_constraint, FourierRep, InverseDerivative, TangentVector,
    DEFAULT_GRID, DEFAULT_VERIFY_MODES,
};

/// Identities whose error is dominated by quadrature.
pub const QUADRATURE_TOL: f64 = 1e-8;
/// Inequalities and ratios that hold up to accumulated rounding.
pub const ALGEBRAIC_TOL: f64 = 1e-9;
/// Per-mode ratio identities.
pub const RATIO_TOL: f64 = 1e-10;
/// Exact equilibria.
pub const EXACT_TOL: f64 = 1e-12;

/// Outcome of one named check.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct CheckReport {
    pub name: String,
    pub max_abs_error: f64,
    pub tolerance: f64,
    pub passed: bool,
    pub samples: usize,
    /// Check-specific diagnostics (observed orders, violation counts, ...).
    #[serde(skip_serializing_if = "BTreeMap::is_empty")]
    pub metrics: BTreeMap<String, f64>,
}

impl CheckReport {
    pub fn new(
        name: impl Into<String>,
        max_abs_error: f64,
        tolerance: f64,
        samples: usize,
    ) -> Self {
        Self {
            name: name.into(),
            max_abs_error,
            tolerance,
            passed: max_abs_error <= tolerance,
            samples,
            metrics: BTreeMap::new(),
        }
    }

    pub fn with_metric(mut self, key: &str, value: f64) -> Self {
        self.metrics.insert(key.to_string(), value);
        self
    }
}

pub fn seeded_rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

/// Smallest multiple of `degree` that is at least [`DEFAULT_GRID`].
pub fn grid_for_degree(degree: usize) -> usize {
    DEFAULT_GRID.div_ceil(degree) * degree
}

fn random_projected(rng: &mut impl Rng, degree: usize, modes: usize) -> FourierRep {
    let cos = (0..modes).map(|_| rng.gen_range(-1.0..1.0)).collect();
    let sin = (0..modes).map(|_| rng.gen_range(-1.0..1.0)).collect();
    let raw = FourierRep {
        period: degree as f64,
        mean: 0.0,
        cos,
        sin,
    };
    project_constraint(&raw, degree)
}

/// Unit-`L²` tangent vector with `modes` random harmonics.
pub fn random_tangent(
    rng: &mut impl Rng,
    degree: usize,
    modes: usize,
    nodes: usize,
) -> Result<TangentVector> {
    let psi = TangentVector::from_fourier(&random_projected(rng, degree, modes), nodes)?;
    let norm = psi.l2_norm();
    if norm == 0.0 {
        return invalid("random tangent vector vanished; increase modes");
    }
    Ok(psi.scale(1.0 / norm))
}

/// `1/n` plus a random feasible perturbation whose sup norm is
/// `amplitude/n`, with `0 < amplitude < 1`.
pub fn random_density(
    rng: &mut impl Rng,
    degree: usize,
    modes: usize,
    nodes: usize,
    amplitude: f64,
) -> Result<InverseDerivative> {
    let pert = random_projected(rng, degree, modes).sample(nodes);
    let sup = pert.samples.iter().fold(0.0_f64, |m, v| m.max(v.abs()));
    let s = amplitude / (degree as f64 * sup);
    let grid = pert.map(|v| 1.0 / degree as f64 + s * v);
    let h = InverseDerivative::from_grid(grid, degree)?;
    h.validate()?;
    Ok(h)
}

/// Interior point of the `n`-simplex with every component at least
/// `0.05 / n`.
pub fn random_simplex_point(rng: &mut impl Rng, n: usize) -> Vec<f64> {
    let raw: Vec<f64> = (0..n).map(|_| rng.gen_range(0.05..1.0)).collect();
    let total: f64 = raw.iter().sum();
    raw.iter().map(|v| v / total).collect()
}

/// Random odd-mode state with `0.1 ≤ u_y ≤ 0.9`.
pub fn random_galerkin_state(rng: &mut impl Rng, modes: usize) -> OddModes {
    let a: Vec<f64> = (0..modes).map(|_| rng.gen_range(-1.0..1.0)).collect();
    let b: Vec<f64> = (0..modes).map(|_| rng.gen_range(-1.0..1.0)).collect();
    let spread: f64 = a
        .iter()
        .zip(&b)
        .enumerate()
        .map(|(m, (x, y))| std::f64::consts::PI * (2 * m + 1) as f64 * (x.abs() + y.abs()))
        .sum();
    let s = 0.4 / spread;
    OddModes {
        a: a.iter().map(|v| v * s).collect(),
        b: b.iter().map(|v| v * s).collect(),
    }
}

/// Central finite differences of the entropy against [`gateaux_h`].
#[derive(Debug, Clone, PartialEq)]
pub struct FdCheck {
    pub report: CheckReport,
    /// Exact directional derivative `DH_h(ψ)`.
    pub derivative: f64,
    /// Scaled error `|FD(ε) − DH| / max(|DH|, 10⁻²)` for each `ε`.
    pub errors: Vec<f64>,
    /// `log₂`-type observed orders between consecutive `ε` (NaN when either
    /// error is below the rounding floor).
    pub orders: Vec<f64>,
}

/// Errors below this are treated as rounding noise when estimating orders.
const FD_NOISE_FLOOR: f64 = 1e-8;
const FD_MIN_ORDER: f64 = 1.8;

/// Compare `[H(h+εψ) − H(h−εψ)]/(2ε)` with `DH_h(ψ)` for every `ε`.
///
/// Passes when the error at the last `ε` is within `tolerance` and every
/// resolvable consecutive pair shows at least second-order decay.
pub fn fd_derivative_check(
    h: &InverseDerivative,
    psi: &TangentVector,
    eps_list: &[f64],
    tolerance: f64,
) -> Result<FdCheck> {
    if eps_list.is_empty() {
        return invalid("need at least one step size");
    }
    let d = gateaux_h(h, psi)?;
    let scale = d.abs().max(1e-2);
    let mut errors = Vec::with_capacity(eps_list.len());
    for &eps in eps_list {
        let plus = entropy(&h.perturbed(psi, eps)?)?;
        let minus = entropy(&h.perturbed(psi, -eps)?)?;
        let fd = (plus - minus) / (2.0 * eps);
        errors.push((fd - d).abs() / scale);
    }
    let orders: Vec<f64> = errors
        .windows(2)
        .zip(eps_list.windows(2))
        .map(|(e, s)| {
            if e[0] > FD_NOISE_FLOOR && e[1] > FD_NOISE_FLOOR {
                (e[0] / e[1]).ln() / (s[0] / s[1]).ln()
            } else {
                f64::NAN
            }
        })
        .collect();
    let min_order = orders
        .iter()
        .filter(|o| !o.is_nan())
        .fold(f64::INFINITY, |m, &o| m.min(o));
    let last = *errors.last().unwrap();
    let mut report = CheckReport::new("fd_derivative", last, tolerance, eps_list.len())
        .with_metric("directional_derivative", d);
    if min_order.is_finite() {
        report = report.with_metric("min_observed_order", min_order);
        report.passed &= min_order >= FD_MIN_ORDER;
    }
    Ok(FdCheck {
        report,
        derivative: d,
        errors,
        orders,
    })
}

/// `max |∫ R_h ψ + ∫ ψ ln h|` over random unit tangent vectors.
pub fn riesz_identity_check(
    h: &InverseDerivative,
    trials: usize,
    seed: u64,
) -> Result<CheckReport> {
    let mut rng = seeded_rng(seed);
    let r = riesz_gradient(h)?;
    let n = h.degree();
    let nodes = h.grid().len();
    let mut worst = 0.0_f64;
    for _ in 0..trials {
        let psi = random_tangent(&mut rng, n, DEFAULT_VERIFY_MODES.min(nodes / 4), nodes)?;
        let lhs = r.dot(&psi)?;
        let rhs = gateaux_h(h, &psi)?;
        worst = worst.max((lhs - rhs).abs());
    }
    Ok(CheckReport::new(
        format!("riesz_identity_n{n}"),
        worst,
        QUADRATURE_TOL,
        trials,
    ))
}

/// No random unit tangent direction beats the normalized Riesz gradient.
pub fn gradient_maximality_check(
    h: &InverseDerivative,
    trials: usize,
    seed: u64,
) -> Result<CheckReport> {
    let mut rng = seeded_rng(seed);
    let r = riesz_gradient(h)?;
    let r_norm = r.l2_norm();
    if r_norm == 0.0 {
        return invalid("maximality check needs a non-constant density");
    }
    let best = gateaux_h(h, &r.scale(1.0 / r_norm))?;
    let n = h.degree();
    let nodes = h.grid().len();
    let mut excess = 0.0_f64;
    let mut violations = 0usize;
    for _ in 0..trials {
        let psi = random_tangent(&mut rng, n, DEFAULT_VERIFY_MODES.min(nodes / 4), nodes)?;
        let d = gateaux_h(h, &psi)?;
        let over = d - best;
        if over > ALGEBRAIC_TOL {
            violations += 1;
        }
        excess = excess.max(over);
    }
    Ok(CheckReport::new(
        format!("gradient_maximality_n{n}"),
        excess.max(0.0),
        ALGEBRAIC_TOL,
        trials,
    )
    .with_metric("violations", violations as f64)
    .with_metric("max_directional_derivative", best)
    .with_metric("riesz_norm", r_norm))
}

/// Per-mode `galerkin / pde = c²_{2m−1}` wherever the PDE component is
/// resolvable (`|pde| > 10⁻¹²`).
pub fn ode_pde_proportionality_check(states: &[OddModes], nodes: usize) -> Result<CheckReport> {
    let grid = OddModeGrid::new(nodes);
    let mut worst = 0.0_f64;
    let mut compared = 0usize;
    for s in states {
        let g = grid.sobolev_gradient(s)?;
        let p = pde_rhs(s, nodes)?;
        for m in 0..s.modes() {
            let c2 = basis_norm_factor_sq(2 * m + 1);
            for (gv, pv) in [(g.a[m], p.a[m]), (g.b[m], p.b[m])] {
                if pv.abs() > 1e-12 {
                    worst = worst.max((gv / pv - c2).abs());
                    compared += 1;
                }
            }
        }
    }
    Ok(
        CheckReport::new("ode_pde_proportionality", worst, RATIO_TOL, states.len())
            .with_metric("components_compared", compared as f64),
    )
}

/// At `h ≡ 1/n` every gradient vanishes and the entropy is `ln n`.
pub fn equilibrium_check(degree: usize) -> Result<CheckReport> {
    if degree < 2 {
        return invalid("degree must be at least 2");
    }
    let h = InverseDerivative::uniform(degree, grid_for_degree(degree))?;
    let riesz = riesz_gradient(&h)?.l2_norm();
    let simplex = simplex_rhs(&SimplexState::new(vec![1.0 / degree as f64; degree])?)?
        .iter()
        .fold(0.0_f64, |m, v| m.max(v.abs()));
    let entropy_gap = (entropy(&h)? - (degree as f64).ln()).abs();
    let mut worst = riesz.max(simplex).max(entropy_gap);
    let mut report = CheckReport::new(format!("equilibrium_n{degree}"), 0.0, EXACT_TOL, 1)
        .with_metric("riesz_norm", riesz)
        .with_metric("simplex_rhs", simplex)
        .with_metric("entropy_gap", entropy_gap);
    if degree == 2 {
        let g = galerkin_rhs_even(&CosineModes(vec![0.0; 3]), DEFAULT_GRID)?;
        let galerkin = g.0.iter().fold(0.0_f64, |m, v| m.max(v.abs()));
        worst = worst.max(galerkin);
        report = report.with_metric("galerkin_rhs", galerkin);
    }
    report.max_abs_error = worst;
    report.passed = worst <= EXACT_TOL;
    Ok(report)
}

/// `sup|φ′| ≤ 2(π²/6)^{1/2}‖φ‖_{H²}` on random truncated series.
pub fn derivative_bound_check(
    trials: usize,
    modes: usize,
    degree: usize,
    seed: u64,
) -> CheckReport {
    let mut rng = seeded_rng(seed);
    let mut excess = f64::NEG_INFINITY;
    let mut violations = 0usize;
    for _ in 0..trials {
        let cos = (0..modes).map(|_| rng.gen_range(-1.0..1.0)).collect();
        let sin = (0..modes).map(|_| rng.gen_range(-1.0..1.0)).collect();
        let phi = FourierRep {
            period: degree as f64,
            mean: 0.0,
            cos,
            sin,
        };
        let (lhs, rhs) = derivative_sup_bound(&phi);
        if lhs > rhs {
            violations += 1;
        }
        excess = excess.max(lhs - rhs);
    }
    let mut report = CheckReport::new("derivative_sup_bound", excess.max(0.0), 0.0, trials)
        .with_metric("violations", violations as f64)
        .with_metric("max_lhs_minus_rhs", excess);
    report.passed = violations == 0;
    report
}

/// Every check at its default configuration. Checks run in parallel;
/// the output order is fixed.
pub fn run_suite(seed: u64) -> Vec<Result<CheckReport>> {
    type Job = Box<dyn Fn(u64) -> Result<CheckReport> + Send + Sync>;
    let jobs: Vec<Job> = vec![
        Box::new(|seed| {
            let mut rng = seeded_rng(seed);
            let h = random_density(&mut rng, 2, 8, DEFAULT_GRID, 0.5)?;
            let psi = random_tangent(&mut rng, 2, 8, DEFAULT_GRID)?;
            Ok(fd_derivative_check(&h, &psi, &[4e-2, 2e-2, 1e-2, 1e-5], 1e-6)?.report)
        }),
        Box::new(|seed| {
            let mut rng = seeded_rng(seed ^ 1);
            let h = random_density(&mut rng, 2, 8, DEFAULT_GRID, 0.5)?;
            riesz_identity_check(&h, 100, seed)
        }),
        Box::new(|seed| {
            let mut rng = seeded_rng(seed ^ 3);
            let h = random_density(&mut rng, 3, 8, grid_for_degree(3), 0.5)?;
            riesz_identity_check(&h, 100, seed)
        }),
        Box::new(|seed| {
            let mut rng = seeded_rng(seed ^ 5);
            let h = random_density(&mut rng, 5, 8, grid_for_degree(5), 0.5)?;
            riesz_identity_check(&h, 100, seed)
        }),
        Box::new(|seed| {
            let mut rng = seeded_rng(seed ^ 7);
            let h = random_density(&mut rng, 3, 8, grid_for_degree(3), 0.5)?;
            gradient_maximality_check(&h, 1000, seed)
        }),
        Box::new(|seed| {
            let mut rng = seeded_rng(seed ^ 11);
            let states: Vec<OddModes> = (0..50)
                .map(|_| random_galerkin_state(&mut rng, 3))
                .collect();
            ode_pde_proportionality_check(&states, DEFAULT_GRID)
        }),
        Box::new(|_| equilibrium_check(2)),
        Box::new(|_| equilibrium_check(5)),
        Box::new(|seed| Ok(derivative_bound_check(1000, 8, 2, seed))),
    ];
    jobs.par_iter().map(|job| job(seed)).collect()
}
