//! Acceptance gate. Each criterion prints one `[PASS]`/`[FAIL]` line with the
//! measured values; the process exits nonzero if any criterion fails.
//!
//! Run with `cargo test -p srbflow-core --test acceptance`.

use std::f64::consts::PI;
use std::process::ExitCode;
use std::time::{Duration, Instant};

use srbflow_core::entropy::basis_norm_factor_sq;
use srbflow_core::flow::{heat_reference, step, EvenGalerkinFlow, RieszFlow, SimplexFlow};
use srbflow_core::spectral::{sobolev_sup_constant, GridRep, DEFAULT_GRID};
use srbflow_core::verify::{
    derivative_bound_check, fd_derivative_check, gradient_maximality_check, grid_for_degree,
    ode_pde_proportionality_check, random_density, random_galerkin_state, random_simplex_point,
    random_tangent, riesz_identity_check, seeded_rng,
};
use srbflow_core::{
    entropy, integrate, FlowConfig, Integrator, InverseDerivative, OddModes, TangentVector,
};

const SEED: u64 = 20_240_601;

/// Rounding allowance for the componentwise simplex monitors.
const SIMPLEX_ROUNDING: f64 = 8.0 * f64::EPSILON;

struct Outcome {
    passed: bool,
    detail: String,
}

impl Outcome {
    fn new(passed: bool, detail: impl Into<String>) -> Self {
        Self {
            passed,
            detail: detail.into(),
        }
    }
}

type Criterion = (&'static str, &'static str, Duration, fn() -> Outcome);

fn cosine_density(nodes: usize) -> InverseDerivative {
    InverseDerivative::from_grid(
        GridRep::from_fn(2.0, nodes, |y| 0.5 + 0.25 * (PI * y).cos()),
        2,
    )
    .expect("valid density")
}

fn c1_equilibrium_entropy() -> Outcome {
    let mut worst = 0.0_f64;
    for n in [2usize, 3, 5, 10] {
        let h = InverseDerivative::uniform(n, grid_for_degree(n)).unwrap();
        worst = worst.max((entropy(&h).unwrap() - (n as f64).ln()).abs());
    }
    Outcome::new(
        worst <= 1e-12,
        format!("max |H - ln n| = {worst:.3e} (tol 1e-12)"),
    )
}

fn c2_derivative_oracle() -> Outcome {
    let eps = [1e-2, 5e-3, 2.5e-3, 1e-5];
    let mut rng = seeded_rng(SEED);
    let mut worst_err = 0.0_f64;
    let mut min_order = f64::INFINITY;
    let mut failures = 0;
    for trial in 0..20 {
        let n = if trial % 2 == 0 { 2 } else { 3 };
        let nodes = grid_for_degree(n);
        let h = random_density(&mut rng, n, 8, nodes, 0.5).unwrap();
        let psi = random_tangent(&mut rng, n, 8, nodes).unwrap();
        let c = fd_derivative_check(&h, &psi, &eps, 1e-6).unwrap();
        worst_err = worst_err.max(c.report.max_abs_error);
        if let Some(o) = c.report.metrics.get("min_observed_order") {
            min_order = min_order.min(*o);
        }
        failures += usize::from(!c.report.passed);
    }

    let psi = TangentVector::from_grid(
        GridRep::from_fn(2.0, DEFAULT_GRID, |y| PI * (PI * y).cos()),
        2,
    )
    .unwrap();
    let closed = fd_derivative_check(&cosine_density(DEFAULT_GRID), &psi, &eps, 1e-6).unwrap();
    let exact = -2.0 * PI * (2.0 - 3f64.sqrt());
    let closed_gap = (closed.derivative - exact).abs();
    let passed = failures == 0 && closed.report.passed && closed_gap < 1e-12;
    Outcome::new(
        passed,
        format!(
            "20 pairs: max rel err {worst_err:.2e} at eps=1e-5, min order {min_order:.3}, \
             {failures} failing; closed form DH = {:.10} vs {exact:.10}, FD err {:.2e}",
            closed.derivative, closed.report.max_abs_error
        ),
    )
}

fn c3_riesz_and_maximality() -> Outcome {
    let mut rng = seeded_rng(SEED ^ 3);
    let mut worst = 0.0_f64;
    let mut violations = 0.0;
    let mut passed = true;
    for n in [2usize, 3, 5] {
        let h = random_density(&mut rng, n, 8, grid_for_degree(n), 0.5).unwrap();
        let r = riesz_identity_check(&h, 100, SEED + n as u64).unwrap();
        worst = worst.max(r.max_abs_error);
        passed &= r.passed;
        let m = gradient_maximality_check(&h, 1000, SEED + 10 * n as u64).unwrap();
        violations += m.metrics["violations"];
        passed &= m.passed;
    }
    let cos_check = riesz_identity_check(&cosine_density(DEFAULT_GRID), 100, SEED).unwrap();
    passed &= cos_check.passed;
    worst = worst.max(cos_check.max_abs_error);
    Outcome::new(
        passed && violations == 0.0,
        format!(
            "Riesz identity max err {worst:.2e} (tol 1e-8); maximality violations {violations}"
        ),
    )
}

fn c4_riesz_flow_constraint() -> Outcome {
    let h0 = cosine_density(DEFAULT_GRID);
    let cfg = FlowConfig {
        dt: 0.01,
        t_end: 50.0,
        integrator: Integrator::Rk4,
        store_states: false,
        ..FlowConfig::default()
    };
    let system = RieszFlow {
        degree: 2,
        nodes: DEFAULT_GRID,
    };
    let traj = integrate(&system, &h0.grid().samples, &cfg).unwrap();
    let residual = traj
        .constraint_residual
        .iter()
        .fold(0.0_f64, |m, &v| m.max(v));
    let dip = traj.worst_entropy_dip();
    Outcome::new(
        residual <= 1e-9 && dip >= -1e-10,
        format!(
            "{} steps: max residual {residual:.2e}, worst entropy dip {dip:.2e}, \
             H(0) = {:.7}, H(50) = {:.12}",
            traj.len() - 1,
            traj.entropy[0],
            traj.entropy.last().unwrap()
        ),
    )
}

fn c5_simplex_convergence() -> Outcome {
    let n = 5;
    let mut rng = seeded_rng(SEED ^ 5);
    let x0 = random_simplex_point(&mut rng, n);
    let cfg = FlowConfig {
        dt: 0.01,
        t_end: 200.0,
        integrator: Integrator::Rk4,
        ..FlowConfig::default()
    };
    let traj = integrate(&SimplexFlow { degree: n }, &x0, &cfg).unwrap();

    let sum_drift = traj
        .constraint_residual
        .iter()
        .fold(0.0_f64, |m, &v| m.max(v));
    let dist = traj
        .final_state
        .iter()
        .fold(0.0_f64, |m, v| m.max((v - 1.0 / n as f64).abs()));
    let mut growth = 0.0_f64;
    let mut flips = 0;
    for w in traj.states.windows(2) {
        for i in 0..n {
            for j in i + 1..n {
                let before = w[0][i] - w[0][j];
                let after = w[1][i] - w[1][j];
                growth = growth.max(after.abs() - before.abs());
                if before.abs() > SIMPLEX_ROUNDING
                    && after.abs() > SIMPLEX_ROUNDING
                    && before.signum() != after.signum()
                {
                    flips += 1;
                }
            }
        }
    }
    let passed = dist <= 1e-6 && sum_drift <= 1e-12 && growth <= SIMPLEX_ROUNDING && flips == 0;
    Outcome::new(
        passed,
        format!(
            "x(0) = {x0:.4?}; max |x - 1/5| at t=200 {dist:.2e}; max |sum - 1| {sum_drift:.2e}; \
             max pairwise growth {growth:.2e}; sign flips {flips}"
        ),
    )
}

fn c6_reported_run() -> Outcome {
    let cfg = FlowConfig {
        dt: 0.1,
        t_end: 50.0,
        integrator: Integrator::Euler,
        ..FlowConfig::default()
    };
    let system = EvenGalerkinFlow::new(3, DEFAULT_GRID);
    let traj = integrate(&system, &[0.25, 0.0, 0.0], &cfg).unwrap();
    let at = |t: f64| &traj.states[(t / cfg.dt).round() as usize];

    let monotone = traj.states.windows(2).all(|w| w[1][0] < w[0][0]);
    let b2 = traj.states.iter().fold(0.0_f64, |m, s| m.max(s[1].abs()));
    let b3 = traj.states.iter().fold(0.0_f64, |m, s| m.max(s[2].abs()));
    let reported = [(10.0, 0.121), (20.0, 0.043), (50.0, 0.000431)];
    let mut factor_ok = true;
    let mut rows = Vec::new();
    for (t, expected) in reported {
        let s = at(t);
        let ratio = s[0] / expected;
        factor_ok &= (0.5..=2.0).contains(&ratio);
        rows.push(format!(
            "t={t}: B = ({:.6e}, {:.6e}, {:.6e}), reported B1 {expected}, ratio {ratio:.4}",
            s[0], s[1], s[2]
        ));
    }
    let passed = monotone && b2 < 1e-3 && b3 < 1e-5 && factor_ok;
    Outcome::new(
        passed,
        format!(
            "B1 strictly decreasing: {monotone}; max|B2| {b2:.3e} (< 1e-3); max|B3| {b3:.3e} (< 1e-5); \
             B1 within factor 2 of reported: {factor_ok}\n        {}",
            rows.join("\n        ")
        ),
    )
}

/// Least-squares slope of `ln |B|` against `t`, negated.
fn fitted_rate(times: &[f64], values: &[f64]) -> f64 {
    let n = times.len() as f64;
    let logs: Vec<f64> = values.iter().map(|v| v.abs().ln()).collect();
    let tm = times.iter().sum::<f64>() / n;
    let lm = logs.iter().sum::<f64>() / n;
    let cov: f64 = times
        .iter()
        .zip(&logs)
        .map(|(t, l)| (t - tm) * (l - lm))
        .sum();
    let var: f64 = times.iter().map(|t| (t - tm) * (t - tm)).sum();
    -cov / var
}

fn c7_linearized_rate() -> Outcome {
    let cfg = FlowConfig {
        dt: 0.01,
        t_end: 5.0,
        integrator: Integrator::Rk4,
        ..FlowConfig::default()
    };
    let system = EvenGalerkinFlow::new(3, DEFAULT_GRID);
    let mut passed = true;
    let mut parts = Vec::new();
    for m in 0..3 {
        let mut b0 = vec![0.0; 3];
        b0[m] = 1e-4;
        let traj = integrate(&system, &b0, &cfg).unwrap();
        let series: Vec<f64> = traj.states.iter().map(|s| s[m]).collect();
        let rate = fitted_rate(&traj.times, &series);
        let k = (2 * m + 1) as f64;
        let expected = 2.0 * PI * PI * k * k * basis_norm_factor_sq(2 * m + 1);
        let rel = (rate - expected).abs() / expected;
        let tol = if m == 0 { 1e-3 } else { 5e-3 };
        passed &= rel <= tol;
        parts.push(format!(
            "B{}: {rate:.6e} vs {expected:.6e} (rel {rel:.1e})",
            m + 1
        ));
    }
    Outcome::new(passed, parts.join("; "))
}

fn c8_proportionality() -> Outcome {
    let mut rng = seeded_rng(SEED ^ 8);
    let states: Vec<OddModes> = (0..50)
        .map(|_| random_galerkin_state(&mut rng, 3))
        .collect();
    let r = ode_pde_proportionality_check(&states, DEFAULT_GRID).unwrap();
    Outcome::new(
        r.passed && r.metrics["components_compared"] > 0.0,
        format!(
            "max |ratio - c^2| {:.2e} (tol 1e-10) over {} components",
            r.max_abs_error, r.metrics["components_compared"]
        ),
    )
}

fn c9_derivative_bound() -> Outcome {
    let r = derivative_bound_check(1000, 8, 2, SEED);
    Outcome::new(
        r.passed,
        format!(
            "constant {:.10}; violations {}; max sup|phi'| - bound {:.3e}",
            sobolev_sup_constant(),
            r.metrics["violations"],
            r.metrics["max_lhs_minus_rhs"]
        ),
    )
}

fn c10_spectral_richness() -> Outcome {
    let b0 = [0.25, 0.0, 0.0];
    let system = EvenGalerkinFlow::new(3, DEFAULT_GRID);
    let next = step(&system, &b0, 0.1, Integrator::Euler).unwrap();
    let heat = heat_reference(&b0, 0.1);
    let passed = next[1].abs() > 1e-12 && next[2].abs() > 1e-12 && heat[1] == 0.0 && heat[2] == 0.0;
    Outcome::new(
        passed,
        format!(
            "flow: B2 = {:.6e}, B3 = {:.6e}; heat: B2 = {}, B3 = {}",
            next[1], next[2], heat[1], heat[2]
        ),
    )
}

fn main() -> ExitCode {
    let criteria: [Criterion; 10] = [
        (
            "C1",
            "equilibrium entropy",
            Duration::from_secs(1),
            c1_equilibrium_entropy,
        ),
        (
            "C2",
            "derivative oracle",
            Duration::from_secs(5),
            c2_derivative_oracle,
        ),
        (
            "C3",
            "Riesz identity and maximality",
            Duration::from_secs(10),
            c3_riesz_and_maximality,
        ),
        (
            "C4",
            "tangency and constraint preservation",
            Duration::from_secs(10),
            c4_riesz_flow_constraint,
        ),
        (
            "C5",
            "simplex convergence",
            Duration::from_secs(5),
            c5_simplex_convergence,
        ),
        (
            "C6",
            "reported run reproduction",
            Duration::from_secs(5),
            c6_reported_run,
        ),
        (
            "C7",
            "linearized decay rates",
            Duration::from_secs(5),
            c7_linearized_rate,
        ),
        (
            "C8",
            "ODE/PDE proportionality",
            Duration::from_secs(2),
            c8_proportionality,
        ),
        (
            "C9",
            "derivative sup bound",
            Duration::from_secs(5),
            c9_derivative_bound,
        ),
        (
            "C10",
            "spectral richness",
            Duration::from_secs(1),
            c10_spectral_richness,
        ),
    ];
    let mut failed = Vec::new();
    for (id, name, budget, run) in criteria {
        let start = Instant::now();
        let outcome = run();
        let elapsed = start.elapsed();
        let in_budget = elapsed <= budget;
        let passed = outcome.passed && in_budget;
        println!(
            "[{}] {id} {name} ({:.2}s, budget {}s{}): {}",
            if passed { "PASS" } else { "FAIL" },
            elapsed.as_secs_f64(),
            budget.as_secs(),
            if in_budget { "" } else { ", over budget" },
            outcome.detail
        );
        if !passed {
            failed.push(id);
        }
    }
    if failed.is_empty() {
        println!("acceptance: all 10 criteria passed");
        ExitCode::SUCCESS
    } else {
        println!("acceptance: {} failed: {}", failed.len(), failed.join(", "));
        ExitCode::FAILURE
    }
}
