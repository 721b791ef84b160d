//! Argument definitions, validation, and command dispatch.
//!
//! Exit codes: 0 success, 2 configuration error (including clap usage
//! errors), 3 numeric or chart error, 1 I/O failure.

use std::fmt;
use std::path::PathBuf;

use clap::{Args, Parser, Subcommand, ValueEnum};

use torus_holonomy::geometry::LoopSpec;
use torus_holonomy::hannay::{
    berry_averaged_shift, berry_simulate, compare_frameworks, hannay_angle_line_integral,
    OmegaProfile, SimulateOptions, DEFAULT_TIME_PANELS,
};
use torus_holonomy::transport::{
    projection_ratio, reference_p0, transport_closed_form, transport_numeric,
};
use torus_holonomy::{TangentVector, Torus};

use crate::angle::parse_angle;
use crate::output::{emit_json, sweep_csv, write_atomic};
use crate::records::{KnotLengthRecord, TransportBothRecord, TransportRecord};
use crate::sweep::{linspace, sweep_parallel};

use std::f64::consts::TAU;

/// Environment variable consulted for the default `--jobs` value.
pub const JOBS_ENV: &str = "TORUS_HOLONOMY_JOBS";

#[derive(Debug)]
pub enum CliError {
    /// Inconsistent or out-of-range configuration; exit code 2.
    Config(String),
    /// Numeric or chart failure; exit code 3.
    Numeric(String),
    /// Filesystem failure; exit code 1.
    Io(std::io::Error),
}

impl CliError {
    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::Config(_) => 2,
            CliError::Numeric(_) => 3,
            CliError::Io(_) => 1,
        }
    }
}

impl fmt::Display for CliError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            CliError::Config(msg) => write!(f, "configuration error: {msg}"),
            CliError::Numeric(e) => write!(f, "computation failed: {e}"),
            CliError::Io(e) => write!(f, "i/o error: {e}"),
        }
    }
}

impl From<torus_holonomy::Error> for CliError {
    fn from(e: torus_holonomy::Error) -> Self {
        use torus_holonomy::Error::*;
        match e {
            InvalidTorus { .. } | InvalidProfile { .. } => CliError::Config(e.to_string()),
            _ => CliError::Numeric(e.to_string()),
        }
    }
}

impl From<std::io::Error> for CliError {
    fn from(e: std::io::Error) -> Self {
        CliError::Io(e)
    }
}

#[derive(Parser, Debug)]
#[command(
    name = "torus-holonomy",
    version,
    about = "Parallel-transport anholonomy and Hannay angles for loops on a torus"
)]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Subcommand, Debug)]
pub enum Command {
    /// Sweep the anholonomy ratio Σ over toroidal-loop angles (CSV)
    SigmaSweep(SigmaSweepArgs),
    /// Parallel-transport a vector around one loop (JSON)
    Transport(TransportArgs),
    /// Hannay angle for a loop on the revolving torus (JSON)
    Hannay(HannayArgs),
    /// Full particle simulation in the revolving frame (JSON)
    BerrySim(BerrySimArgs),
    /// Winding length by quadrature and closed-form estimate (JSON)
    KnotLength(KnotLengthArgs),
    /// Run every Hannay framework and report pairwise differences (JSON)
    Compare(CompareArgs),
}

#[derive(Args, Debug)]
pub struct TorusParams {
    /// Tube radius (defaults to 1)
    #[arg(long)]
    pub a: Option<f64>,
    /// Central radius; exactly one of --c / --n
    #[arg(long, conflicts_with = "n")]
    pub c: Option<f64>,
    /// Aspect ratio n = c/a
    #[arg(long)]
    pub n: Option<f64>,
}

impl TorusParams {
    pub fn build(&self) -> Result<Torus, CliError> {
        let a = self.a.unwrap_or(1.0);
        let c = match (self.c, self.n) {
            (Some(c), None) => c,
            (None, Some(n)) => n * a,
            _ => return Err(CliError::Config("supply exactly one of --c or --n".into())),
        };
        Ok(Torus::new(a, c)?)
    }
}

#[derive(ValueEnum, Clone, Copy, Debug, PartialEq, Eq)]
pub enum LoopKind {
    Toroidal,
    Poloidal,
    Knot,
}

#[derive(Args, Debug)]
pub struct LoopParams {
    /// Loop kind
    #[arg(long = "loop", value_enum)]
    pub kind: LoopKind,
    /// Poloidal angle of a toroidal loop (angle literal, e.g. "pi/3")
    #[arg(long, value_parser = parse_angle, allow_hyphen_values = true)]
    pub theta0: Option<f64>,
    /// Toroidal angle of a poloidal loop (angle literal)
    #[arg(long, value_parser = parse_angle, allow_hyphen_values = true)]
    pub phi0: Option<f64>,
    /// Toroidal winding count of a knot loop
    #[arg(long)]
    pub p: Option<f64>,
    /// Poloidal winding count of a knot loop
    #[arg(long)]
    pub q: Option<f64>,
}

impl LoopParams {
    pub fn build(&self) -> Result<LoopSpec, CliError> {
        let reject = |flag: &str, kind: &str| {
            Err(CliError::Config(format!(
                "--{flag} does not apply to --loop {kind}"
            )))
        };
        match self.kind {
            LoopKind::Toroidal => {
                if self.phi0.is_some() {
                    return reject("phi0", "toroidal");
                }
                if self.p.is_some() || self.q.is_some() {
                    return reject("p/--q", "toroidal");
                }
                Ok(LoopSpec::Toroidal {
                    theta0: self.theta0.unwrap_or(0.0),
                })
            }
            LoopKind::Poloidal => {
                if self.theta0.is_some() {
                    return reject("theta0", "poloidal");
                }
                if self.p.is_some() || self.q.is_some() {
                    return reject("p/--q", "poloidal");
                }
                Ok(LoopSpec::Poloidal {
                    phi0: self.phi0.unwrap_or(0.0),
                })
            }
            LoopKind::Knot => {
                if self.theta0.is_some() || self.phi0.is_some() {
                    return reject("theta0/--phi0", "knot");
                }
                let (Some(p), Some(q)) = (self.p, self.q) else {
                    return Err(CliError::Config("--loop knot needs --p and --q".into()));
                };
                if p < 0.0 || q < 0.0 {
                    return Err(CliError::Config(
                        "winding counts must be nonnegative".into(),
                    ));
                }
                Ok(LoopSpec::Winding { p, q })
            }
        }
    }
}

#[derive(Args, Debug)]
pub struct SigmaSweepArgs {
    /// Aspect ratio n = c/a
    #[arg(long)]
    pub n: f64,
    /// Tube radius
    #[arg(long, default_value_t = 1.0)]
    pub a: f64,
    /// Number of grid points (inclusive of both ends)
    #[arg(long)]
    pub samples: usize,
    /// Grid start (angle literal)
    #[arg(long, value_parser = parse_angle, default_value = "0")]
    pub min: f64,
    /// Grid end (angle literal)
    #[arg(long, value_parser = parse_angle, default_value = "2pi")]
    pub max: f64,
    /// Output CSV path
    #[arg(long)]
    pub out: PathBuf,
    /// Worker threads (default: $TORUS_HOLONOMY_JOBS, else 1)
    #[arg(long)]
    pub jobs: Option<usize>,
}

#[derive(ValueEnum, Clone, Copy, Debug, PartialEq, Eq)]
pub enum TransportMethod {
    Closed,
    Numeric,
    Both,
}

#[derive(Args, Debug)]
pub struct TransportArgs {
    #[command(flatten)]
    pub torus: TorusParams,
    #[command(flatten)]
    pub path: LoopParams,
    /// Starting vector P^phi (with --p0-theta; defaults to the sweep vector)
    #[arg(long = "p0-phi", requires = "p0_theta", allow_negative_numbers = true)]
    pub p0_phi: Option<f64>,
    /// Starting vector P^theta
    #[arg(long = "p0-theta", requires = "p0_phi", allow_negative_numbers = true)]
    pub p0_theta: Option<f64>,
    #[arg(long, value_enum)]
    pub method: TransportMethod,
    /// RK4 steps for the numeric route
    #[arg(long, default_value_t = torus_holonomy::transport::DEFAULT_STEPS)]
    pub steps: usize,
    /// Evaluate the closed form at this parameter instead of 2pi
    #[arg(long, value_parser = parse_angle, allow_hyphen_values = true)]
    pub lambda: Option<f64>,
    /// Write JSON here instead of stdout
    #[arg(long)]
    pub out: Option<PathBuf>,
}

#[derive(ValueEnum, Clone, Copy, Debug, PartialEq, Eq)]
pub enum FrameworkArg {
    Line,
    BerryAvg,
    BerrySim,
    All,
}

#[derive(Args, Debug)]
pub struct HannayArgs {
    #[command(flatten)]
    pub torus: TorusParams,
    #[command(flatten)]
    pub path: LoopParams,
    /// Torus revolutions about the x axis
    #[arg(long, allow_negative_numbers = true)]
    pub n1: i32,
    /// Torus revolutions about the y axis
    #[arg(long, allow_negative_numbers = true)]
    pub n2: i32,
    /// Torus revolutions about the z axis
    #[arg(long, allow_negative_numbers = true)]
    pub n3: i32,
    /// Process time
    #[arg(long, default_value_t = 1.0)]
    pub t: f64,
    #[arg(long, value_enum, default_value_t = FrameworkArg::Line)]
    pub framework: FrameworkArg,
    /// Particle circuits per revolution (berry-sim / all)
    #[arg(long, default_value_t = torus_holonomy::hannay::DEFAULT_CIRCUITS)]
    pub circuits: usize,
    /// RK4 steps per particle circuit
    #[arg(long = "steps-per-circuit", default_value_t = torus_holonomy::hannay::DEFAULT_STEPS_PER_CIRCUIT)]
    pub steps_per_circuit: usize,
    /// Simpson panels for loop quadratures
    #[arg(long, default_value_t = torus_holonomy::geometry::DEFAULT_PANELS)]
    pub panels: usize,
    #[arg(long)]
    pub out: Option<PathBuf>,
}

#[derive(Args, Debug)]
pub struct BerrySimArgs {
    #[command(flatten)]
    pub torus: TorusParams,
    #[command(flatten)]
    pub path: LoopParams,
    #[arg(long, allow_negative_numbers = true)]
    pub n1: i32,
    #[arg(long, allow_negative_numbers = true)]
    pub n2: i32,
    #[arg(long, allow_negative_numbers = true)]
    pub n3: i32,
    #[arg(long, default_value_t = 1.0)]
    pub t: f64,
    #[arg(long, default_value_t = torus_holonomy::hannay::DEFAULT_CIRCUITS)]
    pub circuits: usize,
    #[arg(long = "steps-per-circuit", default_value_t = torus_holonomy::hannay::DEFAULT_STEPS_PER_CIRCUIT)]
    pub steps_per_circuit: usize,
    #[arg(long)]
    pub out: Option<PathBuf>,
}

#[derive(ValueEnum, Clone, Copy, Debug, PartialEq, Eq)]
pub enum LengthMethod {
    Quad,
    Approx,
    Both,
}

#[derive(Args, Debug)]
pub struct KnotLengthArgs {
    #[command(flatten)]
    pub torus: TorusParams,
    #[arg(long)]
    pub p: f64,
    #[arg(long)]
    pub q: f64,
    #[arg(long, value_enum, default_value_t = LengthMethod::Both)]
    pub method: LengthMethod,
    /// Simpson panels for the quadrature route
    #[arg(long, default_value_t = 1 << 14)]
    pub panels: usize,
    #[arg(long)]
    pub out: Option<PathBuf>,
}

#[derive(Args, Debug)]
pub struct CompareArgs {
    #[command(flatten)]
    pub torus: TorusParams,
    #[command(flatten)]
    pub path: LoopParams,
    #[arg(long, allow_negative_numbers = true)]
    pub n1: i32,
    #[arg(long, allow_negative_numbers = true)]
    pub n2: i32,
    #[arg(long, allow_negative_numbers = true)]
    pub n3: i32,
    #[arg(long, default_value_t = 1.0)]
    pub t: f64,
    #[arg(long, default_value_t = torus_holonomy::hannay::DEFAULT_CIRCUITS)]
    pub circuits: usize,
    #[arg(long = "steps-per-circuit", default_value_t = torus_holonomy::hannay::DEFAULT_STEPS_PER_CIRCUIT)]
    pub steps_per_circuit: usize,
    #[arg(long, default_value_t = torus_holonomy::geometry::DEFAULT_PANELS)]
    pub panels: usize,
    #[arg(long)]
    pub out: Option<PathBuf>,
}

fn check_panels(panels: usize) -> Result<(), CliError> {
    if panels < 2 || !panels.is_multiple_of(2) {
        return Err(CliError::Config(format!(
            "--panels must be even and >= 2, got {panels}"
        )));
    }
    Ok(())
}

pub fn run(cli: &Cli) -> Result<(), CliError> {
    match &cli.command {
        Command::SigmaSweep(args) => run_sigma_sweep(args),
        Command::Transport(args) => run_transport(args),
        Command::Hannay(args) => run_hannay(args),
        Command::BerrySim(args) => run_berry_sim(args),
        Command::KnotLength(args) => run_knot_length(args),
        Command::Compare(args) => run_compare(args),
    }
}

fn run_sigma_sweep(args: &SigmaSweepArgs) -> Result<(), CliError> {
    if args.samples < 2 {
        return Err(CliError::Config("--samples must be at least 2".into()));
    }
    if !args.min.is_finite() || !args.max.is_finite() || args.max <= args.min {
        return Err(CliError::Config("--max must be greater than --min".into()));
    }
    // torus validity (positivity) is checked up front
    Torus::new(args.a, args.n * args.a)?;

    let jobs = match args.jobs {
        Some(j) => j.max(1),
        None => std::env::var(JOBS_ENV)
            .ok()
            .and_then(|v| v.parse::<usize>().ok())
            .unwrap_or(1)
            .max(1),
    };

    let grid = linspace(args.min, args.max, args.samples);
    let rows = sweep_parallel(args.n, args.a, &grid, jobs);
    let csv = sweep_csv(&rows);
    write_atomic(&args.out, csv.as_bytes())?;
    Ok(())
}

fn starting_vector(torus: &Torus, p0_phi: Option<f64>, p0_theta: Option<f64>) -> TangentVector {
    match (p0_phi, p0_theta) {
        (Some(p), Some(t)) => TangentVector::new(p, t),
        _ => reference_p0(torus),
    }
}

fn run_transport(args: &TransportArgs) -> Result<(), CliError> {
    let torus = args.torus.build()?;
    let path = args.path.build()?;
    let p0 = starting_vector(&torus, args.p0_phi, args.p0_theta);
    if args.steps < 16 {
        return Err(CliError::Config("--steps must be at least 16".into()));
    }
    if args.lambda.is_some() && args.method != TransportMethod::Closed {
        return Err(CliError::Config(
            "--lambda only applies to --method closed".into(),
        ));
    }

    let closed_record = |lambda: f64| -> Result<TransportRecord, CliError> {
        let p_final = transport_closed_form(&torus, &path, p0, lambda)?;
        Ok(TransportRecord {
            method: "closed".into(),
            steps: None,
            lambda,
            p_final,
            sigma: projection_ratio(&torus, &path, p0, p_final),
            norm_drift: 0.0,
        })
    };
    let numeric_record = || -> Result<TransportRecord, CliError> {
        let r = transport_numeric(&torus, &path, p0, args.steps)?;
        // passing close to a pinch circle can blow the integration up
        // without tripping the exact degeneracy gate
        if !(r.p_final.p_phi.is_finite()
            && r.p_final.p_theta.is_finite()
            && r.norm_drift.is_finite())
        {
            return Err(CliError::Numeric(
                "transport diverged near a chart singularity".into(),
            ));
        }
        Ok(TransportRecord {
            method: "numeric".into(),
            steps: Some(args.steps),
            lambda: TAU,
            p_final: r.p_final,
            sigma: r.sigma,
            norm_drift: r.norm_drift,
        })
    };

    match args.method {
        TransportMethod::Closed => {
            let rec = closed_record(args.lambda.unwrap_or(TAU))?;
            emit_json(&rec, args.out.as_deref())?;
        }
        TransportMethod::Numeric => {
            let rec = numeric_record()?;
            emit_json(&rec, args.out.as_deref())?;
        }
        TransportMethod::Both => {
            let closed = closed_record(TAU)?;
            let numeric = numeric_record()?;
            let difference = TangentVector::new(
                numeric.p_final.p_phi - closed.p_final.p_phi,
                numeric.p_final.p_theta - closed.p_final.p_theta,
            );
            let rec = TransportBothRecord {
                closed,
                numeric,
                difference,
            };
            emit_json(&rec, args.out.as_deref())?;
        }
    }
    Ok(())
}

fn run_hannay(args: &HannayArgs) -> Result<(), CliError> {
    let torus = args.torus.build()?;
    let path = args.path.build()?;
    check_panels(args.panels)?;
    if args.circuits < 1 || args.steps_per_circuit < 1 {
        return Err(CliError::Config(
            "--circuits and --steps-per-circuit must be positive".into(),
        ));
    }
    let profile = OmegaProfile::new(args.n1, args.n2, args.n3, args.t)?;

    match args.framework {
        FrameworkArg::Line => {
            let rep = hannay_angle_line_integral(&torus, &path, &profile, args.panels)?;
            emit_json(&rep, args.out.as_deref())?;
        }
        FrameworkArg::BerryAvg => {
            let rep =
                berry_averaged_shift(&torus, &path, &profile, args.panels, DEFAULT_TIME_PANELS)?;
            emit_json(&rep, args.out.as_deref())?;
        }
        FrameworkArg::BerrySim => {
            let sim = berry_simulate(
                &torus,
                &path,
                &profile,
                args.circuits,
                args.steps_per_circuit,
            )?;
            emit_json(&sim.report, args.out.as_deref())?;
        }
        FrameworkArg::All => {
            let cmp = compare_frameworks(
                &torus,
                &path,
                &profile,
                args.panels,
                Some(SimulateOptions {
                    circuits: args.circuits,
                    steps_per_circuit: args.steps_per_circuit,
                }),
            )?;
            emit_json(&cmp, args.out.as_deref())?;
        }
    }
    Ok(())
}

fn run_berry_sim(args: &BerrySimArgs) -> Result<(), CliError> {
    let torus = args.torus.build()?;
    let path = args.path.build()?;
    if args.circuits < 1 || args.steps_per_circuit < 1 {
        return Err(CliError::Config(
            "--circuits and --steps-per-circuit must be positive".into(),
        ));
    }
    let profile = OmegaProfile::new(args.n1, args.n2, args.n3, args.t)?;
    let sim = berry_simulate(
        &torus,
        &path,
        &profile,
        args.circuits,
        args.steps_per_circuit,
    )?;
    emit_json(&sim, args.out.as_deref())?;
    Ok(())
}

fn run_knot_length(args: &KnotLengthArgs) -> Result<(), CliError> {
    let torus = args.torus.build()?;
    check_panels(args.panels)?;
    if args.p < 0.0 || args.q < 0.0 || (args.p == 0.0 && args.q == 0.0) {
        return Err(CliError::Config(
            "winding counts must be nonnegative and not both zero".into(),
        ));
    }
    let path = LoopSpec::Winding {
        p: args.p,
        q: args.q,
    };
    let quad = matches!(args.method, LengthMethod::Quad | LengthMethod::Both)
        .then(|| torus.loop_length(&path, args.panels));
    let estimate = matches!(args.method, LengthMethod::Approx | LengthMethod::Both)
        .then(|| torus.approx_knot_length(args.p, args.q));
    let rec = KnotLengthRecord {
        p: args.p,
        q: args.q,
        a: torus.a(),
        c: torus.c(),
        panels: quad.is_some().then_some(args.panels),
        length_quadrature: quad,
        length_estimate: estimate,
        relative_difference: match (quad, estimate) {
            (Some(l), Some(e)) => Some((e - l).abs() / l),
            _ => None,
        },
    };
    emit_json(&rec, args.out.as_deref())?;
    Ok(())
}

fn run_compare(args: &CompareArgs) -> Result<(), CliError> {
    let torus = args.torus.build()?;
    let path = args.path.build()?;
    check_panels(args.panels)?;
    if args.circuits < 1 || args.steps_per_circuit < 1 {
        return Err(CliError::Config(
            "--circuits and --steps-per-circuit must be positive".into(),
        ));
    }
    let profile = OmegaProfile::new(args.n1, args.n2, args.n3, args.t)?;
    let cmp = compare_frameworks(
        &torus,
        &path,
        &profile,
        args.panels,
        Some(SimulateOptions {
            circuits: args.circuits,
            steps_per_circuit: args.steps_per_circuit,
        }),
    )?;
    emit_json(&cmp, args.out.as_deref())?;
    Ok(())
}
