use std::f64::consts::PI;
use std::path::PathBuf;
use std::process::ExitCode;

use srbflow_core::entropy::OddModeGrid;
use srbflow_core::flow::{
    heat_reference, EvenGalerkinFlow, EvenPdeFlow, GalerkinFlow, PdeFlow, RieszFlow, SimplexFlow,
    SimplexState,
};
use srbflow_core::spectral::{constraint_residual, project_constraint, DEFAULT_FLOW_MODES};
use srbflow_core::verify::{grid_for_degree, random_simplex_point, run_suite, seeded_rng};
use srbflow_core::{
    entropy, integrate, riesz_gradient, CheckReport, CosineModes, FlowConfig, FlowSystem,
    FourierRep, Integrator, InverseDerivative, OddModes, Trajectory,
};

use crate::args::{
    Cli, Command, EntropyArgs, FigureArgs, FigureKind, IoArgs, ModesArgs, RieszArgs, RunArgs,
    SimplexArgs, VerifyArgs,
};
use crate::config::{pick, pick_list, ConfigFile};
use crate::error::CliError;
use crate::output::{resolve_format, Format, Sink, Table};

const DEFAULT_SEED: u64 = 42;
const DEFAULT_FIGURE_POINTS: usize = 361;
const AMPLITUDE_NODES: usize = 1024;

pub fn run(cli: Cli) -> Result<ExitCode, CliError> {
    match cli.command {
        Command::Simplex(a) => simplex(a),
        Command::Galerkin(a) => modes_flow(a, false),
        Command::Pde(a) => modes_flow(a, true),
        Command::Riesz(a) => riesz(a),
        Command::Entropy(a) => entropy_cmd(a),
        Command::Verify(a) => verify(a),
        Command::Figure(a) => figure(a),
    }
    .map(|code| code.unwrap_or(ExitCode::SUCCESS))
}

type Outcome = Result<Option<ExitCode>, CliError>;

struct Output {
    sink: Sink,
    format: Format,
}

fn output(
    io: &IoArgs,
    file: &ConfigFile,
    stem: &str,
    fallback: Format,
) -> Result<Output, CliError> {
    let out: Option<PathBuf> = pick(io.out.clone(), file, "out")?;
    let format = resolve_format(pick(io.format, file, "format")?, out.as_deref(), fallback);
    Ok(Output {
        sink: Sink::resolve(out, stem, format),
        format,
    })
}

fn flow_config(run: &RunArgs, file: &ConfigFile, base: FlowConfig) -> Result<FlowConfig, CliError> {
    let cfg = FlowConfig {
        dt: pick(run.dt, file, "dt")?.unwrap_or(base.dt),
        t_end: pick(run.t_end, file, "t-end")?.unwrap_or(base.t_end),
        integrator: pick(run.integrator, file, "integrator")?.unwrap_or(base.integrator),
        grid: pick(run.grid, file, "grid")?.unwrap_or(base.grid),
        record_every: pick(run.record_every, file, "record-every")?.unwrap_or(base.record_every),
        ..base
    };
    cfg.validate().map_err(CliError::setup)?;
    Ok(cfg)
}

fn extrema(values: &[f64]) -> (f64, f64) {
    values
        .iter()
        .fold((f64::INFINITY, f64::NEG_INFINITY), |(lo, hi), &v| {
            (lo.min(v), hi.max(v))
        })
}

fn report_extrema(label: &str, values: &[f64]) -> Result<(), CliError> {
    let (lo, hi) = extrema(values);
    eprintln!("{label} h(y): min {lo:.6}, max {hi:.6}");
    if lo > 0.0 && hi < 1.0 {
        Ok(())
    } else {
        Err(CliError::Validation(format!(
            "{label} h(y) must lie in (0, 1), got [{lo}, {hi}]"
        )))
    }
}

fn trajectory_table(traj: &Trajectory, state_columns: Vec<String>) -> Table {
    let mut columns = vec!["t".to_string()];
    columns.extend(state_columns);
    columns.extend(["entropy".to_string(), "grad_norm".to_string()]);
    let mut table = Table::new(columns);
    for (i, t) in traj.times.iter().enumerate() {
        let mut row = vec![*t];
        row.extend(&traj.states[i]);
        row.extend([traj.entropy[i], traj.grad_norm[i]]);
        table.push(row);
    }
    table
}

fn simplex(args: SimplexArgs) -> Outcome {
    let file = ConfigFile::load(args.io.config.as_deref())?;
    let n = pick(args.n, &file, "n")?;
    let x = pick_list(args.x, &file, "x")?;
    let seed = pick(args.seed, &file, "seed")?.unwrap_or(DEFAULT_SEED);
    let x0 = match (x, n) {
        (Some(x), Some(n)) if x.len() != n => {
            return Err(CliError::Validation(format!(
                "--x has {} components but --n is {n}",
                x.len()
            )))
        }
        (Some(x), _) => x,
        (None, Some(n)) if n >= 2 => random_simplex_point(&mut seeded_rng(seed), n),
        (None, Some(n)) => {
            return Err(CliError::Validation(format!(
                "--n must be at least 2, got {n}"
            )))
        }
        (None, None) => return Err(CliError::Usage("give --x or --n".into())),
    };
    let state = SimplexState::new(x0).map_err(CliError::setup)?;
    let n = state.as_slice().len();
    let cfg = flow_config(&args.run, &file, FlowConfig::default())?;
    let out = output(&args.io, &file, "simplex", Format::Csv)?;

    let traj = integrate(&SimplexFlow { degree: n }, state.as_slice(), &cfg)
        .map_err(CliError::during_run)?;
    let table = trajectory_table(&traj, (1..=n).map(|k| format!("x{k}")).collect());
    out.sink.write_table(&table, out.format)?;
    Ok(None)
}

enum ModeInit {
    Even(Vec<f64>),
    General(OddModes),
}

fn padded(list: Option<Vec<f64>>, modes: usize, flag: &str) -> Result<Vec<f64>, CliError> {
    let mut v = list.unwrap_or_default();
    if v.len() > modes {
        return Err(CliError::Validation(format!(
            "{flag} has {} entries but only {modes} modes are kept",
            v.len()
        )));
    }
    v.resize(modes, 0.0);
    Ok(v)
}

fn modes_flow(args: ModesArgs, pde: bool) -> Outcome {
    let stem = if pde { "pde" } else { "galerkin" };
    let file = ConfigFile::load(args.io.config.as_deref())?;
    let n = pick(args.n, &file, "n")?.unwrap_or(2);
    if n != 2 {
        return Err(CliError::Validation(format!(
            "the Sobolev gradient flow is only available for degree 2, got {n}"
        )));
    }
    let big_b = pick_list(args.big_b, &file, "B")?;
    let a = pick_list(args.a, &file, "a")?;
    let b = pick_list(args.b, &file, "b")?;
    if big_b.is_some() && (a.is_some() || b.is_some()) {
        return Err(CliError::Usage(
            "--B cannot be combined with --a/--b".into(),
        ));
    }
    if big_b.is_none() && a.is_none() && b.is_none() {
        return Err(CliError::Usage(
            "give an initial state with --B or --a/--b".into(),
        ));
    }
    let longest = [&big_b, &a, &b]
        .iter()
        .filter_map(|l| l.as_ref().map(Vec::len))
        .max()
        .unwrap_or(0);
    let modes = pick(args.modes, &file, "modes")?.unwrap_or(longest.max(DEFAULT_FLOW_MODES));
    if modes == 0 {
        return Err(CliError::Validation("--modes must be at least 1".into()));
    }
    let init = match big_b {
        Some(bb) => ModeInit::Even(padded(Some(bb), modes, "--B")?),
        None => ModeInit::General(
            OddModes::new(padded(a, modes, "--a")?, padded(b, modes, "--b")?)
                .map_err(CliError::setup)?,
        ),
    };
    let base = FlowConfig {
        modes,
        ..FlowConfig::default()
    };
    let cfg = flow_config(&args.run, &file, base)?;
    let out = output(&args.io, &file, stem, Format::Csv)?;
    let grid = OddModeGrid::new(cfg.grid);

    let (system, start, columns): (Box<dyn FlowSystem>, Vec<f64>, Vec<String>) = match init {
        ModeInit::Even(bb) => {
            report_extrema("initial", &grid.even_density(&CosineModes(bb.clone())))?;
            let system: Box<dyn FlowSystem> = if pde {
                Box::new(EvenPdeFlow {
                    modes,
                    nodes: cfg.grid,
                })
            } else {
                Box::new(EvenGalerkinFlow::new(modes, cfg.grid))
            };
            (system, bb, (1..=modes).map(|k| format!("B{k}")).collect())
        }
        ModeInit::General(state) => {
            report_extrema("initial", &grid.slopes(&state).0)?;
            let system: Box<dyn FlowSystem> = if pde {
                Box::new(PdeFlow {
                    modes,
                    nodes: cfg.grid,
                })
            } else {
                Box::new(GalerkinFlow::new(modes, cfg.grid))
            };
            let columns = (0..modes)
                .flat_map(|m| [format!("a{}", 2 * m + 1), format!("b{}", 2 * m + 1)])
                .collect();
            (system, state.to_flat(), columns)
        }
    };

    let traj = integrate(system.as_ref(), &start, &cfg).map_err(CliError::during_run)?;
    let final_h = if start.len() == modes {
        grid.even_density(&CosineModes(traj.final_state.clone()))
    } else {
        let s = OddModes::from_flat(&traj.final_state).map_err(CliError::during_run)?;
        grid.slopes(&s).0
    };
    let (lo, hi) = extrema(&final_h);
    eprintln!("final h(y): min {lo:.6}, max {hi:.6}");
    out.sink
        .write_table(&trajectory_table(&traj, columns), out.format)?;
    Ok(None)
}

/// `1/n` plus the constraint-projected perturbation with the given harmonics.
fn density_from_harmonics(
    n: usize,
    cos: Vec<f64>,
    sin: Vec<f64>,
    nodes: usize,
) -> Result<InverseDerivative, CliError> {
    let raw = FourierRep::new(n as f64, 0.0, cos, sin).map_err(CliError::setup)?;
    let mut rep = project_constraint(&raw, n);
    if rep != raw {
        eprintln!("note: harmonics divisible by {n} were removed by the constraint projection");
    }
    rep.mean = 1.0 / n as f64;
    let h = InverseDerivative::from_fourier(&rep, nodes).map_err(CliError::setup)?;
    report_extrema("initial", &h.grid().samples)?;
    h.validate().map_err(CliError::setup)?;
    Ok(h)
}

fn riesz(args: RieszArgs) -> Outcome {
    let file = ConfigFile::load(args.io.config.as_deref())?;
    let n = pick(args.n, &file, "n")?.unwrap_or(2);
    if n < 2 {
        return Err(CliError::Validation(format!(
            "--n must be at least 2, got {n}"
        )));
    }
    let cos = pick_list(args.cos, &file, "cos")?;
    let sin = pick_list(args.sin, &file, "sin")?;
    if cos.is_none() && sin.is_none() {
        return Err(CliError::Usage(
            "give an initial density with --cos/--sin".into(),
        ));
    }
    let base = FlowConfig {
        grid: grid_for_degree(n),
        ..FlowConfig::default()
    };
    let cfg = flow_config(&args.run, &file, base)?;
    let out = output(&args.io, &file, "riesz", Format::Csv)?;
    let h = density_from_harmonics(
        n,
        cos.unwrap_or_default(),
        sin.unwrap_or_default(),
        cfg.grid,
    )?;

    let system = RieszFlow {
        degree: n,
        nodes: cfg.grid,
    };
    let traj = integrate(&system, &h.grid().samples, &cfg).map_err(CliError::during_run)?;
    let mut table = Table::new(
        [
            "t",
            "entropy",
            "grad_norm",
            "constraint_residual",
            "h_min",
            "h_max",
        ]
        .map(String::from)
        .to_vec(),
    );
    for (i, t) in traj.times.iter().enumerate() {
        let (lo, hi) = extrema(&traj.states[i]);
        table.push(vec![
            *t,
            traj.entropy[i],
            traj.grad_norm[i],
            traj.constraint_residual[i],
            lo,
            hi,
        ]);
    }
    out.sink.write_table(&table, out.format)?;
    Ok(None)
}

fn entropy_cmd(args: EntropyArgs) -> Outcome {
    let file = ConfigFile::load(args.io.config.as_deref())?;
    let big_b = pick_list(args.big_b, &file, "B")?;
    let n = pick(args.n, &file, "n")?.unwrap_or(2);
    if n < 2 {
        return Err(CliError::Validation(format!(
            "--n must be at least 2, got {n}"
        )));
    }
    let nodes = pick(args.grid, &file, "grid")?.unwrap_or(grid_for_degree(n));
    let cos = pick_list(args.cos, &file, "cos")?;
    let sin = pick_list(args.sin, &file, "sin")?;
    let out = output(&args.io, &file, "entropy", Format::Csv)?;

    let h = match big_b {
        Some(_) if n != 2 => {
            return Err(CliError::Validation(
                "--B describes a degree-2 density".into(),
            ))
        }
        Some(_) if cos.is_some() || sin.is_some() => {
            return Err(CliError::Usage(
                "--B cannot be combined with --cos/--sin".into(),
            ))
        }
        Some(bb) => {
            let rep = OddModes::from_cosine_modes(&CosineModes(bb)).inverse_derivative();
            let h = InverseDerivative::from_fourier(&rep, nodes).map_err(CliError::setup)?;
            report_extrema("input", &h.grid().samples)?;
            h
        }
        None if cos.is_none() && sin.is_none() => {
            InverseDerivative::uniform(n, nodes).map_err(CliError::setup)?
        }
        None => density_from_harmonics(n, cos.unwrap_or_default(), sin.unwrap_or_default(), nodes)?,
    };
    let value = entropy(&h).map_err(CliError::setup)?;
    let grad = riesz_gradient(&h).map_err(CliError::setup)?;
    let (lo, hi) = extrema(&h.grid().samples);
    let mut table = Table::new(
        [
            "entropy",
            "riesz_grad_norm",
            "h_min",
            "h_max",
            "constraint_residual",
        ]
        .map(String::from)
        .to_vec(),
    );
    table.push(vec![value, grad.l2_norm(), lo, hi, constraint_residual(&h)]);
    out.sink.write_table(&table, out.format)?;
    Ok(None)
}

fn verify(args: VerifyArgs) -> Outcome {
    let file = ConfigFile::load(args.io.config.as_deref())?;
    let seed = pick(args.seed, &file, "seed")?.unwrap_or(DEFAULT_SEED);
    let out = output(&args.io, &file, "verify", Format::Json)?;
    let reports: Vec<CheckReport> = run_suite(seed)
        .into_iter()
        .collect::<Result<_, _>>()
        .map_err(|e| CliError::Runtime(e.to_string()))?;
    let passed = reports.iter().filter(|r| r.passed).count();
    for r in reports.iter().filter(|r| !r.passed) {
        eprintln!(
            "FAILED {}: error {:.3e} > tolerance {:.1e}",
            r.name, r.max_abs_error, r.tolerance
        );
    }
    eprintln!("{passed}/{} checks passed (seed {seed})", reports.len());
    match out.format {
        Format::Json => out.sink.write_json(&reports)?,
        Format::Csv => {
            let mut w = csv::Writer::from_writer(out.sink.open()?);
            w.write_record(["name", "max_abs_error", "tolerance", "passed", "samples"])?;
            for r in &reports {
                w.write_record([
                    r.name.clone(),
                    format!("{:.16e}", r.max_abs_error),
                    format!("{:.16e}", r.tolerance),
                    r.passed.to_string(),
                    r.samples.to_string(),
                ])?;
            }
            w.flush()?;
        }
    }
    Ok((passed < reports.len()).then(|| ExitCode::from(1)))
}

/// `h(τ) − 1/2 = Σ B_k cos((2k−1)τ)`.
fn deviation(big_b: &[f64], tau: f64) -> f64 {
    big_b
        .iter()
        .enumerate()
        .map(|(m, b)| b * ((2 * m + 1) as f64 * tau).cos())
        .sum()
}

fn figure(args: FigureArgs) -> Outcome {
    let file = ConfigFile::load(args.io.config.as_deref())?;
    let points = pick(args.points, &file, "points")?.unwrap_or(DEFAULT_FIGURE_POINTS);
    if points < 3 {
        return Err(CliError::Validation(format!(
            "--points must be at least 3, got {points}"
        )));
    }
    let stem = match args.which {
        FigureKind::Fig1 => "fig1",
        FigureKind::Fig2 => "fig2",
    };
    let t_end = match args.which {
        FigureKind::Fig1 => 20.0,
        FigureKind::Fig2 => 50.0,
    };
    let base = FlowConfig {
        dt: 0.1,
        t_end,
        integrator: Integrator::Euler,
        modes: DEFAULT_FLOW_MODES,
        ..FlowConfig::default()
    };
    let run = RunArgs {
        grid: args.grid,
        ..RunArgs::default()
    };
    let cfg = flow_config(&run, &file, base)?;
    let out = output(&args.io, &file, stem, Format::Csv)?;

    let b0 = vec![0.25, 0.0, 0.0];
    let traj = integrate(&EvenGalerkinFlow::new(cfg.modes, cfg.grid), &b0, &cfg)
        .map_err(CliError::during_run)?;
    let at = |t: f64| &traj.states[(t / cfg.dt).round() as usize];
    let taus: Vec<f64> = (0..points)
        .map(|j| 2.0 * PI * j as f64 / (points - 1) as f64)
        .collect();

    let table = match args.which {
        FigureKind::Fig1 => {
            let snaps = [at(0.0), at(10.0), at(20.0)];
            for (t, s) in [0.0, 10.0, 20.0].iter().zip(&snaps) {
                eprintln!("t = {t}: B = {s:?}");
            }
            let mut table = Table::new(
                ["tau", "dev_t0", "dev_t10", "dev_t20"]
                    .map(String::from)
                    .to_vec(),
            );
            for &tau in &taus {
                let mut row = vec![tau];
                row.extend(snaps.iter().map(|s| deviation(s, tau)));
                table.push(row);
            }
            table
        }
        FigureKind::Fig2 => {
            let late = at(50.0);
            // Least-squares cosine amplitude on a fine periodic grid, so it
            // does not depend on --points.
            let fine: Vec<f64> = (0..AMPLITUDE_NODES)
                .map(|j| 2.0 * PI * j as f64 / AMPLITUDE_NODES as f64)
                .collect();
            let num: f64 = fine.iter().map(|&t| deviation(late, t) * t.cos()).sum();
            let den: f64 = fine.iter().map(|&t| t.cos() * t.cos()).sum();
            let amplitude = num / den;
            let heat = heat_reference(&b0, 50.0);
            eprintln!("t = 50: B = {late:?}; fitted cosine amplitude {amplitude:.6e}");
            let mut table = Table::new(
                ["tau", "deviation_x1000", "cosine_x1000", "heat_x1000"]
                    .map(String::from)
                    .to_vec(),
            );
            for &tau in &taus {
                table.push(vec![
                    tau,
                    1000.0 * deviation(late, tau),
                    1000.0 * amplitude * tau.cos(),
                    1000.0 * deviation(&heat, tau),
                ]);
            }
            table
        }
    };
    out.sink.write_table(&table, out.format)?;
    Ok(None)
}
