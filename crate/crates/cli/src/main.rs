use std::fmt;
use std::path::PathBuf;
use std::process::ExitCode;

use anyhow::Result;
use clap::{Args, Parser, Subcommand, ValueEnum};
use otto_core::optimize::{closed_form_high_t, numeric_max_work};
use otto_core::sweep::{
    adiabaticity_sweep, efficiency_sweep, ho_comparison, region_map, region_table,
};
use otto_core::{
    run_cycle, synthetic_unitary, thermo, verify, xi_to_tau, DriveSchedule, EfficiencyMode, Format,
    Grid, OttoError, Table, TauSearch, Value, WorkRateOptions, XiOptions,
};

mod settings;

use settings::{read_config, Settings};

#[derive(Parser, Debug)]
#[command(
    name = "otto",
    version,
    about = "Two-level Otto engine with a squeezed hot bath"
)]
struct Cli {
    #[command(flatten)]
    common: Common,

    #[command(subcommand)]
    command: Command,
}

#[derive(Args, Debug)]
struct Common {
    /// Flat key=value file; flags override it.
    #[arg(long, global = true)]
    config: Option<PathBuf>,
    /// Cold-stroke frequency ω_c/2π in kHz.
    #[arg(long, global = true)]
    freq_c_khz: Option<f64>,
    /// ω_h/ω_c.
    #[arg(long, global = true)]
    omega_ratio: Option<f64>,
    /// k_B·T_c in peV.
    #[arg(long, global = true)]
    energy_scale_pev: Option<f64>,
    /// β_h/β_c.
    #[arg(long, global = true)]
    beta_ratio: Option<f64>,
    /// Squeezing parameter.
    #[arg(long, global = true)]
    r: Option<f64>,
    /// Adiabaticity parameter of the expansion and compression strokes.
    #[arg(long, global = true)]
    xi: Option<f64>,
    /// Stroke duration in ms: a value, or min:max:step for `xi`.
    #[arg(long, global = true)]
    tau_ms: Option<String>,
    /// axis=min:max:step with axis one of r, xi, tau_ms. Repeatable.
    #[arg(long, global = true)]
    grid: Vec<String>,
    /// Write the table here instead of stdout.
    #[arg(long, global = true)]
    out: Option<PathBuf>,
    /// Output table format, csv by default.
    #[arg(long, global = true, value_parser = ["csv", "json"])]
    format: Option<String>,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Echo the parameter record with θ, ζ and derived limits.
    Params,
    /// Adiabaticity ξ(τ) of the linear drive, or the τ reaching a target ξ.
    Xi {
        /// Smallest τ with ξ ≤ target instead of a sweep.
        #[arg(long)]
        target: Option<f64>,
        /// Step-doubling cap for the propagator.
        #[arg(long, default_value_t = 1 << 22)]
        max_steps: usize,
    },
    /// One cycle from the closed forms and from the density matrix.
    Cycle,
    /// Efficiency over r for a list of ξ values.
    EfficiencySweep {
        #[arg(long, value_enum, default_value_t = SweepMode::OptimizedHighT)]
        mode: SweepMode,
        /// Comma-separated ξ values; ignored when --grid xi=… is given.
        #[arg(long, value_delimiter = ',')]
        xi_values: Vec<f64>,
        /// Add the work-per-drive-time column (fixed-exact only).
        #[arg(long)]
        work_rate: bool,
        /// Bath contact time attributed to one cycle, ms.
        #[arg(long, default_value_t = 0.0)]
        t_thermal_ms: f64,
    },
    /// Classify (r, ξ) cells at the maximum-work ratio.
    RegionMap,
    /// Quasi-static optimized efficiency, two-level vs oscillator.
    CompareHo,
    /// Maximum-work ω_h, closed form and numeric.
    Optimize {
        /// Upper end of the ω_h/ω_c search.
        #[arg(long, default_value_t = 100.0)]
        ratio_cap: f64,
    },
    /// Seeded cross-check of closed forms against the density matrix.
    Verify {
        #[arg(long, default_value_t = 1000)]
        draws: usize,
        #[arg(long, default_value_t = 0)]
        seed: u64,
    },
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
enum SweepMode {
    OptimizedHighT,
    FixedExact,
}

/// Failure classes that map onto dedicated exit codes.
#[derive(Debug)]
enum Outcome {
    Unconverged(usize),
    VerifyFailed,
}

impl fmt::Display for Outcome {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Outcome::Unconverged(n) => write!(f, "{n} row(s) did not converge"),
            Outcome::VerifyFailed => f.write_str("verification failed"),
        }
    }
}

impl std::error::Error for Outcome {}

fn exit_code(err: &anyhow::Error) -> u8 {
    if let Some(o) = err.downcast_ref::<Outcome>() {
        return match o {
            Outcome::Unconverged(_) => 3,
            Outcome::VerifyFailed => 4,
        };
    }
    match err.downcast_ref::<OttoError>() {
        Some(
            OttoError::Validation { .. }
            | OttoError::Range { .. }
            | OttoError::OutOfRegime { .. }
            | OttoError::OutOfDomain { .. }
            | OttoError::Parse(_),
        ) => 2,
        Some(OttoError::NonConvergence { .. }) => 3,
        _ => 1,
    }
}

fn resolve(common: &Common) -> Result<Settings> {
    let mut s = Settings::default();
    if let Some(path) = &common.config {
        for (k, v) in read_config(path)? {
            s.set(&k, &v)?;
        }
    }
    let flags = [
        ("freq_c_khz", common.freq_c_khz),
        ("omega_ratio", common.omega_ratio),
        ("energy_scale_pev", common.energy_scale_pev),
        ("beta_ratio", common.beta_ratio),
        ("r", common.r),
        ("xi", common.xi),
    ];
    for (k, v) in flags {
        if let Some(v) = v {
            s.set(k, &v.to_string())?;
        }
    }
    if let Some(t) = &common.tau_ms {
        s.set("tau_ms", t)?;
    }
    if let Some(f) = &common.format {
        s.set("format", f)?;
    }
    for g in &common.grid {
        s.set_grid(g)?;
    }
    Ok(s)
}

fn emit(table: &Table, s: &Settings, common: &Common) -> Result<()> {
    table.write(common.out.as_deref(), s.format())?;
    Ok(())
}

fn grid_or(g: Option<Grid>, min: f64, max: f64, step: f64) -> Result<Vec<f64>> {
    Ok(match g {
        Some(g) => g.values(),
        None => Grid::new(min, max, step)?.values(),
    })
}

fn params_table(s: &Settings) -> Result<Table> {
    let p = s.params()?;
    let d = p.derive()?;
    let mut t = Table::new([
        "omega_c",
        "omega_h",
        "beta_c",
        "beta_h",
        "r",
        "theta_c",
        "theta_h",
        "zeta",
        "tanh_theta_c",
        "tanh_theta_h",
        "eta_otto",
        "eta_carnot",
        "xi_max",
    ]);
    t.push(vec![
        p.omega_c.into(),
        p.omega_h.into(),
        p.beta_c.into(),
        p.beta_h.into(),
        p.r.into(),
        d.theta_c.into(),
        d.theta_h.into(),
        d.zeta.into(),
        d.tanh_c().into(),
        d.tanh_h().into(),
        (1.0 - p.omega_c / p.omega_h).into(),
        thermo::carnot(&p).into(),
        thermo::xi_max(&p)?.into(),
    ]);
    Ok(t)
}

fn xi_command(s: &Settings, target: Option<f64>, max_steps: usize) -> Result<Table> {
    let p = s.params()?;
    let opts = XiOptions {
        max_steps,
        ..XiOptions::default()
    };
    if let Some(target) = target {
        let search = TauSearch {
            xi: opts,
            ..TauSearch::default()
        };
        let hit = xi_to_tau(p.omega_c, p.omega_h, target, &search)?;
        let mut t = Table::new(["xi_target", "tau_grid_s", "tau_s", "xi"]);
        t.push(vec![
            target.into(),
            hit.tau_grid.into(),
            hit.tau.into(),
            hit.xi.into(),
        ]);
        return Ok(t);
    }
    let taus_ms = match (&s.tau_ms, s.grid_tau_ms) {
        (Some(spec), _) => spec.parse::<Grid>()?.values(),
        (None, g) => grid_or(g, 0.0, 2.0, 0.05)?,
    };
    let taus: Vec<f64> = taus_ms.iter().map(|t| t * 1e-3).collect();
    Ok(adiabaticity_sweep(p.omega_c, p.omega_h, &taus, &opts)?)
}

fn cycle_table(s: &Settings) -> Result<Table> {
    let p = s.params()?;
    let (u, tau) = match (s.xi, &s.tau_ms) {
        (Some(_), Some(_)) => {
            return Err(OttoError::Validation {
                field: "cycle",
                reason: "give either --xi or --tau-ms, not both".into(),
            }
            .into())
        }
        (Some(xi), None) => (synthetic_unitary(xi, 0.0)?, None),
        (None, Some(t)) => {
            let tau = t.parse::<f64>().map_err(|_| OttoError::Validation {
                field: "tau_ms",
                reason: format!("expected a single value, got {t:?}"),
            })? * 1e-3;
            let rep = DriveSchedule::new(p.omega_c, p.omega_h, tau)?.adiabaticity_xi()?;
            (rep.propagator, Some(tau))
        }
        (None, None) => (synthetic_unitary(0.0, 0.0)?, None),
    };
    let ledger = run_cycle(&p, &u)?;
    let xi = ledger.xi_effective;
    let closed = thermo::evaluate(&p, xi)?;

    let mut t = Table::new([
        "source",
        "r",
        "xi",
        "tau_s",
        "q_hot",
        "q_cold",
        "w_net",
        "eta",
        "xi_max",
        "extracting",
    ]);
    t.push(vec![
        "closed_form".into(),
        p.r.into(),
        xi.into(),
        Value::opt(tau),
        closed.q_hot.into(),
        closed.q_cold.into(),
        closed.w_net.into(),
        Value::opt(closed.eta),
        closed.xi_max.into(),
        closed.extracting.into(),
    ]);
    t.push(vec![
        "density_matrix".into(),
        p.r.into(),
        xi.into(),
        Value::opt(tau),
        ledger.q_hot.into(),
        ledger.q_cold.into(),
        ledger.w_net.into(),
        Value::opt(ledger.efficiency()),
        closed.xi_max.into(),
        ledger.extracting().into(),
    ]);
    Ok(t)
}

fn efficiency_table(
    s: &Settings,
    mode: SweepMode,
    xi_values: &[f64],
    work_rate: bool,
    t_thermal_ms: f64,
) -> Result<Table> {
    let r_grid = grid_or(s.grid_r, 0.0, 3.0, 0.01)?;
    let defaults: &[f64] = match mode {
        SweepMode::OptimizedHighT => &[0.0, 0.15, 0.3, 0.4],
        SweepMode::FixedExact => &[0.0, 0.1, 0.2, 0.3],
    };
    let xis = match (s.grid_xi, xi_values.is_empty()) {
        (Some(g), _) => g.values(),
        (None, false) => xi_values.to_vec(),
        (None, true) => defaults.to_vec(),
    };
    let mode = match mode {
        SweepMode::OptimizedHighT => EfficiencyMode::OptimizedHighT {
            beta_ratio: s.beta_ratio,
        },
        SweepMode::FixedExact => EfficiencyMode::FixedFrequenciesExact {
            params: s.params()?,
        },
    };
    let rate = WorkRateOptions {
        t_thermal: t_thermal_ms * 1e-3,
        search: TauSearch::default(),
    };
    Ok(efficiency_sweep(
        mode,
        &r_grid,
        &xis,
        work_rate.then_some(&rate),
    )?)
}

fn optimize_table(s: &Settings, ratio_cap: f64) -> Result<Table> {
    let p = s.params()?;
    let xi = s.xi.unwrap_or(0.0);
    let mut t = Table::new([
        "mode",
        "xi",
        "ratio",
        "omega_h_star",
        "w_net_star",
        "eta_star",
    ]);
    let closed = match closed_form_high_t(&p, xi) {
        Ok(o) => Some(o),
        Err(OttoError::OutOfDomain { .. }) => None,
        Err(e) => return Err(e.into()),
    };
    let numeric = numeric_max_work(&p, xi, ratio_cap)?;
    for (name, res) in [("closed_form_high_t", closed), ("numeric_exact", numeric)] {
        t.push(vec![
            name.into(),
            xi.into(),
            Value::opt(res.map(|o| o.ratio)),
            Value::opt(res.map(|o| o.omega_h_star)),
            Value::opt(res.map(|o| o.w_net_star)),
            Value::opt(res.map(|o| o.eta_star)),
        ]);
    }
    Ok(t)
}

fn run(cli: &Cli) -> Result<()> {
    let s = resolve(&cli.common)?;
    if let Ok(p) = s.params() {
        for w in p.warnings() {
            eprintln!("warning: {w}");
        }
    }
    let common = &cli.common;
    match &cli.command {
        Command::Params => emit(&params_table(&s)?, &s, common),
        Command::Xi { target, max_steps } => {
            let t = xi_command(&s, *target, *max_steps)?;
            emit(&t, &s, common)?;
            let unconverged = t
                .values("converged")
                .map(|col| col.iter().filter(|v| ***v == Value::Bool(false)).count())
                .unwrap_or(0);
            if unconverged > 0 {
                return Err(Outcome::Unconverged(unconverged).into());
            }
            Ok(())
        }
        Command::Cycle => emit(&cycle_table(&s)?, &s, common),
        Command::EfficiencySweep {
            mode,
            xi_values,
            work_rate,
            t_thermal_ms,
        } => emit(
            &efficiency_table(&s, *mode, xi_values, *work_rate, *t_thermal_ms)?,
            &s,
            common,
        ),
        Command::RegionMap => {
            let r_grid = grid_or(s.grid_r, 0.0, 3.0, 0.05)?;
            let xi_grid = grid_or(s.grid_xi, 0.0, 0.45, 0.05)?;
            let cells = region_map(s.beta_ratio, &r_grid, &xi_grid)?;
            emit(&region_table(s.beta_ratio, &cells), &s, common)
        }
        Command::CompareHo => {
            let r_grid = grid_or(s.grid_r, 0.0, 3.0, 0.05)?;
            emit(&ho_comparison(s.beta_ratio, &r_grid)?, &s, common)
        }
        Command::Optimize { ratio_cap } => emit(&optimize_table(&s, *ratio_cap)?, &s, common),
        Command::Verify { draws, seed } => {
            let report = verify(*draws, *seed)?;
            let text = match s.format {
                Some(Format::Json) => verify_json(&report)?,
                _ => format!("{report}\n"),
            };
            match &common.out {
                Some(path) => std::fs::write(path, text)?,
                None => print!("{text}"),
            }
            if !report.passed() {
                return Err(Outcome::VerifyFailed.into());
            }
            Ok(())
        }
    }
}

fn verify_json(report: &otto_core::VerifyReport) -> Result<String> {
    let mut t = Table::new([
        "draws",
        "seed",
        "q_hot",
        "q_cold",
        "w_net",
        "eta",
        "eta_cases",
        "closure",
        "phase",
        "reduction",
        "dominance_violations",
        "passed",
    ]);
    t.push(vec![
        report.draws.into(),
        Value::Int(report.seed),
        report.q_hot.into(),
        report.q_cold.into(),
        report.w_net.into(),
        report.eta.into(),
        report.eta_cases.into(),
        report.closure.into(),
        report.phase.into(),
        report.reduction.into(),
        report.dominance_violations.into(),
        report.passed().into(),
    ]);
    Ok(t.to_json()?)
}

fn closed_pipe(err: &anyhow::Error) -> bool {
    let broken = |io: &std::io::Error| io.kind() == std::io::ErrorKind::BrokenPipe;
    err.chain().any(|c| match c.downcast_ref::<OttoError>() {
        Some(OttoError::Io(io)) => broken(io),
        _ => c.downcast_ref::<std::io::Error>().is_some_and(broken),
    })
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(&cli) {
        Ok(()) => ExitCode::SUCCESS,
        // A closed reader, as with `| head`, is not a failure.
        Err(e) if closed_pipe(&e) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {e:#}");
            ExitCode::from(exit_code(&e))
        }
    }
}
