use std::path::PathBuf;
use std::process::ExitCode;

use anyhow::{bail, Result};
use clap::{Args, Parser, Subcommand, ValueEnum};
use ghz_adiabatic_cli::settings::load_config;
use ghz_adiabatic_cli::{run_experiment, validate_config, Experiment, Figure, Kind, Settings};

/// Simulates adiabatic GHZ-state metrology in the infinite-range transverse-field Ising model and writes CSV tables.
#[derive(Parser)]
#[command(name = "ghz-adiabatic", version)]
struct Cli {
    #[command(subcommand)]
    command: Command,
    #[command(flatten)]
    flags: Flags,
}

#[derive(Clone, Copy, ValueEnum)]
enum FigureArg {
    Fig1,
    Fig2,
    Fig3,
    Fig4,
    Fig5,
    Fig6,
    Fig8,
}

#[derive(Subcommand)]
enum Command {
    /// Reproduce one figure with its default parameters.
    Figure { which: FigureArg },
    /// Ground-state overlap with the initial state against h_x.
    Overlap,
    /// Minimum even-sector gap against N.
    GapScaling,
    /// GHZ and return fidelities against the ramp time.
    ScanTa,
    /// Estimation uncertainty against the sensing time.
    UncertaintySweep,
    /// Heisenberg and standard quantum limits.
    Limits,
    /// System sizes that beat the SQL under dephasing.
    DephasingWindow,
    /// Finite-time budget scaling and the improvement factors.
    TimeBudget,
    /// Monte-Carlo check of the finite-field slope bound.
    BoundsCheck,
    /// Global S_Z readout of the ideal probe state.
    SzReadout,
    /// Check a config file and report every problem.
    Validate,
}

/// Every flag is global and overrides the same key from `--config`.
#[derive(Args)]
struct Flags {
    /// TOML config with [experiment], [model], [schedule], [metrology], [output] and [run] sections.
    #[arg(long, global = true)]
    config: Option<PathBuf>,
    /// Experiment kind, for `validate` without a config kind.
    #[arg(long, global = true)]
    kind: Option<String>,
    /// Qubit numbers: `10`, `10,50,100` or `10:100:10`.
    #[arg(long = "N", global = true)]
    n: Option<String>,
    /// Initial transverse field in units of JN (default 1; 2 with `--start ground`).
    #[arg(long = "h0x-over-JN", global = true)]
    h0x_over_jn: Option<String>,
    /// `projected` (|N/2,N/2>_X) or `ground` (ground state at the initial field).
    #[arg(long, global = true)]
    start: Option<String>,
    /// `cosine-sine` or `linear`.
    #[arg(long, global = true)]
    schedule: Option<String>,
    /// Ramp time(s) in units of (2JN^2)^-1, as a value, list or range.
    #[arg(long = "Ta", global = true)]
    ta: Option<String>,
    /// Sensing times in units of (2JN^2)^-1.
    #[arg(long = "tint-grid", global = true)]
    tint_grid: Option<String>,
    /// Transverse fields in units of JN.
    #[arg(long = "hx-grid", global = true)]
    hx_grid: Option<String>,
    /// `midpoint`, `cf4` or `cf4-fixed`.
    #[arg(long, global = true)]
    integrator: Option<String>,
    /// Values of Gamma*C for the dephasing window.
    #[arg(long = "gamma-c", global = true)]
    gamma_c: Option<String>,
    /// Dephasing rate Gamma.
    #[arg(long, global = true)]
    gamma: Option<String>,
    /// Number of repetitions M.
    #[arg(long = "M", global = true)]
    m: Option<String>,
    /// Sensing time for `limits`.
    #[arg(long = "T-int", global = true)]
    t_int: Option<String>,
    /// Total time T.
    #[arg(long = "T", global = true)]
    t: Option<String>,
    /// Preparation time (equal to the readout time).
    #[arg(long = "T-prep", global = true)]
    t_prep: Option<String>,
    /// Sensing-time exponent, 0 <= epsilon <= 1/2.
    #[arg(long, global = true)]
    epsilon: Option<String>,
    /// Preparation constant C.
    #[arg(long = "C", global = true)]
    c: Option<String>,
    /// Total-time constant C-tilde.
    #[arg(long = "C-tilde", global = true)]
    c_tilde: Option<String>,
    /// `averaged` or `single-shot`.
    #[arg(long, global = true)]
    variant: Option<String>,
    /// Operating point (h_k + h_0)/JN, `pi/2`, or `smallest` for the smallest calibrated branch.
    #[arg(long, global = true)]
    offset: Option<String>,
    /// Finite-difference step in h_z.
    #[arg(long = "fd-step", global = true)]
    fd_step: Option<String>,
    /// Relative phase alpha of the S_Z readout state.
    #[arg(long, global = true)]
    alpha: Option<String>,
    /// Longitudinal fields in units of JN.
    #[arg(long = "hz-grid", global = true)]
    hz_grid: Option<String>,
    /// Target ground-state probability for the preparation constant.
    #[arg(long, global = true)]
    probability: Option<String>,
    /// Monte-Carlo draws per grid point.
    #[arg(long, global = true)]
    count: Option<String>,
    /// Largest N of the dephasing window.
    #[arg(long = "n-max", global = true)]
    n_max: Option<String>,
    /// Output directory (default: $GHZ_ADIABATIC_OUT, else ./results).
    #[arg(long, global = true)]
    out: Option<String>,
    /// Random seed for `bounds-check`.
    #[arg(long, global = true)]
    seed: Option<String>,
}

impl Flags {
    fn settings(&self) -> Result<Settings> {
        let pairs = [
            ("kind", &self.kind),
            ("N", &self.n),
            ("h0x_over_JN", &self.h0x_over_jn),
            ("start", &self.start),
            ("schedule", &self.schedule),
            ("Ta", &self.ta),
            ("tint_grid", &self.tint_grid),
            ("hx_grid", &self.hx_grid),
            ("integrator", &self.integrator),
            ("gamma_c", &self.gamma_c),
            ("gamma", &self.gamma),
            ("M", &self.m),
            ("T_int", &self.t_int),
            ("T", &self.t),
            ("T_prep", &self.t_prep),
            ("epsilon", &self.epsilon),
            ("C", &self.c),
            ("C_tilde", &self.c_tilde),
            ("variant", &self.variant),
            ("offset", &self.offset),
            ("fd_step", &self.fd_step),
            ("alpha", &self.alpha),
            ("hz_grid", &self.hz_grid),
            ("probability", &self.probability),
            ("count", &self.count),
            ("n_max", &self.n_max),
            ("out", &self.out),
            ("seed", &self.seed),
        ];
        let mut s = Settings::default();
        for (key, value) in pairs {
            if let Some(v) = value {
                if let Err(e) = s.set(key, v) {
                    bail!("--{}: {e}", key.replace('_', "-"));
                }
            }
        }
        Ok(s)
    }
}

fn figure(arg: FigureArg) -> Figure {
    match arg {
        FigureArg::Fig1 => Figure::Fig1,
        FigureArg::Fig2 => Figure::Fig2,
        FigureArg::Fig3 => Figure::Fig3,
        FigureArg::Fig4 => Figure::Fig4,
        FigureArg::Fig5 => Figure::Fig5,
        FigureArg::Fig6 => Figure::Fig6,
        FigureArg::Fig8 => Figure::Fig8,
    }
}

fn config_layer(flags: &Flags) -> Result<(Settings, Vec<String>)> {
    match &flags.config {
        Some(path) => load_config(path),
        None => Ok((Settings::default(), Vec::new())),
    }
}

fn validate(flags: &Flags) -> Result<bool> {
    let (file, mut problems) = config_layer(flags)?;
    let cli = flags.settings()?;
    let kind = cli.kind.or(file.kind);
    match kind {
        None => problems.push("missing `kind`: set [experiment] kind or --kind".into()),
        Some(kind) => {
            let merged = Settings::defaults(kind).merge(file).merge(cli);
            problems.extend(validate_config(kind, &merged));
        }
    }
    if problems.is_empty() {
        println!("ok");
        return Ok(true);
    }
    for p in &problems {
        println!("{p}");
    }
    Ok(false)
}

fn run(kind: Kind, flags: &Flags) -> Result<()> {
    let (file, problems) = config_layer(flags)?;
    if let Some(first) = problems.first() {
        bail!("{first}");
    }
    if let Some(k) = file.kind {
        if k.experiment() != kind.experiment() {
            bail!("config kind `{k}` does not match the `{kind}` subcommand");
        }
    }
    let settings = Settings::defaults(kind)
        .merge(file)
        .merge(flags.settings()?);
    let report = run_experiment(kind, &settings)?;
    for line in &report.summary {
        println!("{line}");
    }
    for path in report.write(&settings.out_dir())? {
        println!("wrote {}", path.display());
    }
    Ok(())
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(c) => c,
        Err(e) if !e.use_stderr() => {
            let _ = e.print();
            return ExitCode::SUCCESS;
        }
        Err(e) => {
            let text = e.to_string();
            eprintln!("{}", text.lines().next().unwrap_or("invalid arguments"));
            return ExitCode::from(2);
        }
    };
    let kind = match cli.command {
        Command::Figure { which } => Kind::Figure(figure(which)),
        Command::Overlap => Kind::Plain(Experiment::Overlap),
        Command::GapScaling => Kind::Plain(Experiment::GapScaling),
        Command::ScanTa => Kind::Plain(Experiment::ScanTa),
        Command::UncertaintySweep => Kind::Plain(Experiment::UncertaintySweep),
        Command::Limits => Kind::Plain(Experiment::Limits),
        Command::DephasingWindow => Kind::Plain(Experiment::DephasingWindow),
        Command::TimeBudget => Kind::Plain(Experiment::TimeBudget),
        Command::BoundsCheck => Kind::Plain(Experiment::BoundsCheck),
        Command::SzReadout => Kind::Plain(Experiment::SzReadout),
        Command::Validate => {
            return match validate(&cli.flags) {
                Ok(true) => ExitCode::SUCCESS,
                Ok(false) => ExitCode::FAILURE,
                Err(e) => {
                    eprintln!("error: {e:#}");
                    ExitCode::FAILURE
                }
            };
        }
    };
    match run(kind, &cli.flags) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {e:#}");
            ExitCode::FAILURE
        }
    }
}
