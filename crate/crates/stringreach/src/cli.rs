//! Command-line front end.
//!
//! Every command writes its main document to `--out` when given and to
//! standard output otherwise. Exit status is 0 on success, 2 when the library
//! rejects the input and 3 for unreadable or malformed files.

use std::ffi::OsString;
use std::io::Write;
use std::path::{Path, PathBuf};

use clap::{Args, Parser, Subcommand};
use stringreach_core::dynamics::{attained_pairing, extremal_control};
use stringreach_core::geometry::{dual_feasible, support_dinfty, support_dt, support_scaled_dt};
use stringreach_core::synthesis::{
    default_max_periods, stabilize, steer_from_zero, SynthesisReport, DEFAULT_RADIUS,
};
use stringreach_core::{bellman, gauge_dinfty, simulate, State};

use crate::io::{
    read_dual, read_schedule, read_state, to_json, trace_csv, trajectory_csv, trajectory_sidecar,
    write_file, BellmanDoc, CertifyDoc, GaugeDoc, ScheduleDoc, StateDoc, SynthesisDoc,
};
use crate::strange::example_strange;
use crate::sweep::{random_base, sweep, sweep_csv, unit_base};
use crate::CliError;

#[derive(Debug, Parser)]
#[command(
    name = "stringreach",
    version,
    about = "Minimum-time control of a closed string"
)]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// T0, T1 and the asymptotic Bellman value of a state.
    Bellman(StateArgs),
    /// Gauge of the limit set and its optimal dual.
    Mu(StateArgs),
    /// Support functions of D(T), C(T)D(T) and D∞ at a dual.
    Support(SupportArgs),
    /// Exact simulation of a schedule.
    Simulate(SimulateArgs),
    /// Bang-bang extremal control of a dual.
    Extremal(ExtremalArgs),
    /// Schedule steering a neighbourhood of zero onto a target.
    Synthesize(SynthesizeArgs),
    /// Damp a state into a ball around zero.
    Stabilize(StabilizeArgs),
    /// Certified lower and upper bounds on the minimum time.
    Certify(CertifyArgs),
    /// Certify a family of dilated states and write CSV.
    Sweep(SweepArgs),
    /// Equal-time schedules reaching one profile with a range of heights.
    #[command(name = "example-strange")]
    ExampleStrange(StrangeArgs),
}

#[derive(Debug, Args)]
pub struct StateArgs {
    /// State as a JSON file or inline JSON.
    #[arg(long)]
    pub state: String,
    #[arg(long)]
    pub out: Option<PathBuf>,
}

#[derive(Debug, Args)]
pub struct SupportArgs {
    /// Dual as a JSON file or inline JSON.
    #[arg(long)]
    pub dual: String,
    /// Horizon for the finite-time support functions.
    #[arg(long = "T")]
    pub horizon: Option<f64>,
    #[arg(long)]
    pub out: Option<PathBuf>,
}

#[derive(Debug, Args)]
pub struct SimulateArgs {
    /// Start state; zero when omitted.
    #[arg(long)]
    pub state: Option<String>,
    #[arg(long)]
    pub schedule: String,
    /// Final state.
    #[arg(long)]
    pub out: Option<PathBuf>,
    /// Trajectory CSV; field checkpoints go next to it with a `.json` extension.
    #[arg(long)]
    pub trace: Option<PathBuf>,
}

#[derive(Debug, Args)]
pub struct ExtremalArgs {
    #[arg(long)]
    pub dual: String,
    #[arg(long = "T")]
    pub horizon: f64,
    /// Schedule JSON.
    #[arg(long)]
    pub out: Option<PathBuf>,
}

#[derive(Debug, Args)]
pub struct SynthesizeArgs {
    #[arg(long)]
    pub target: String,
    #[arg(long, default_value_t = DEFAULT_RADIUS)]
    pub radius: f64,
    #[arg(long)]
    pub max_periods: Option<usize>,
    /// Schedule JSON.
    #[arg(long)]
    pub out: Option<PathBuf>,
    /// Per-period CSV: period, t, calT, supnorm, f.
    #[arg(long)]
    pub trace: Option<PathBuf>,
}

#[derive(Debug, Args)]
pub struct StabilizeArgs {
    #[arg(long)]
    pub state: String,
    #[arg(long, default_value_t = DEFAULT_RADIUS)]
    pub radius: f64,
    #[arg(long)]
    pub max_periods: Option<usize>,
    #[arg(long)]
    pub out: Option<PathBuf>,
    #[arg(long)]
    pub trace: Option<PathBuf>,
}

#[derive(Debug, Args)]
pub struct CertifyArgs {
    #[arg(long)]
    pub state: String,
    #[arg(long, default_value_t = DEFAULT_RADIUS)]
    pub radius: f64,
    #[arg(long)]
    pub out: Option<PathBuf>,
}

#[derive(Debug, Args)]
pub struct SweepArgs {
    /// Base state; `F ≡ 1, f = 0` unless given or `--seed` is set.
    #[arg(long)]
    pub state: Option<String>,
    #[arg(long, value_delimiter = ',', default_values_t = [10.0, 20.0, 40.0, 80.0])]
    pub scales: Vec<f64>,
    #[arg(long, default_value_t = DEFAULT_RADIUS)]
    pub radius: f64,
    /// Draw a random base field from this seed.
    #[arg(long)]
    pub seed: Option<u64>,
    /// Arc count of the random base field.
    #[arg(long, default_value_t = 8)]
    pub arcs: usize,
    #[arg(long)]
    pub out: Option<PathBuf>,
}

#[derive(Debug, Args)]
pub struct StrangeArgs {
    /// Number of subintervals of a ∈ [1/2, 1].
    #[arg(long, default_value_t = 8)]
    pub steps: usize,
    #[arg(long)]
    pub out: Option<PathBuf>,
}

fn emit(out: &mut dyn Write, path: Option<&Path>, doc: &str) -> Result<(), CliError> {
    match path {
        Some(p) => write_file(p, doc),
        None => out
            .write_all(doc.as_bytes())
            .map_err(|e| CliError::Io(format!("cannot write output: {e}"))),
    }
}

fn synthesis_doc(rep: &SynthesisReport) -> String {
    to_json(&SynthesisDoc {
        elapsed: rep.elapsed,
        periods: rep.periods,
        exhausted: rep.exhausted,
        residual: StateDoc::from(&rep.residual_state),
    })
}

fn write_report(
    out: &mut dyn Write,
    rep: &SynthesisReport,
    schedule: Option<&Path>,
    trace: Option<&Path>,
) -> Result<(), CliError> {
    if let Some(p) = schedule {
        write_file(p, &to_json(&ScheduleDoc::from(&rep.schedule)))?;
    }
    if let Some(p) = trace {
        write_file(p, &trace_csv(&rep.trace))?;
    }
    emit(out, None, &synthesis_doc(rep))
}

fn budget(max_periods: Option<usize>, state: &State) -> usize {
    max_periods.unwrap_or_else(|| default_max_periods(state))
}

/// Execute a parsed command, writing documents to `out` or the `--out` file.
pub fn run(cli: Cli, out: &mut dyn Write) -> Result<(), CliError> {
    match cli.command {
        Command::Bellman(a) => {
            let s = read_state(&a.state)?;
            emit(
                out,
                a.out.as_deref(),
                &to_json(&BellmanDoc::from(&bellman(&s))),
            )
        }
        Command::Mu(a) => {
            let s = read_state(&a.state)?;
            emit(
                out,
                a.out.as_deref(),
                &to_json(&GaugeDoc::from(&gauge_dinfty(&s))),
            )
        }
        Command::Support(a) => {
            let d = read_dual(&a.dual)?;
            let mut doc = serde_json::Map::new();
            doc.insert("support_Dinfty".into(), support_dinfty(&d).into());
            doc.insert("feasible".into(), dual_feasible(&d).into());
            if let Some(t) = a.horizon {
                if !t.is_finite() || t < 0.0 {
                    return Err(CliError::Domain(format!(
                        "horizon must be non-negative, got {t}"
                    )));
                }
                doc.insert("T".into(), t.into());
                doc.insert("support_DT".into(), support_dt(&d, t).into());
                doc.insert("support_scaled_DT".into(), support_scaled_dt(&d, t).into());
            }
            emit(out, a.out.as_deref(), &to_json(&doc))
        }
        Command::Simulate(a) => {
            let start = match &a.state {
                Some(s) => read_state(s)?,
                None => State::zero(),
            };
            let schedule = read_schedule(&a.schedule)?;
            let traj = simulate(&start, &schedule)?;
            if let Some(p) = &a.trace {
                write_file(p, &trajectory_csv(&traj))?;
                write_file(&p.with_extension("json"), &trajectory_sidecar(&traj))?;
            }
            emit(
                out,
                a.out.as_deref(),
                &to_json(&StateDoc::from(traj.final_state())),
            )
        }
        Command::Extremal(a) => {
            let d = read_dual(&a.dual)?;
            let c = extremal_control(&d, a.horizon)?;
            if a.out.is_some() {
                emit(out, a.out.as_deref(), &to_json(&ScheduleDoc::from(&c)))?;
                let mut doc = serde_json::Map::new();
                doc.insert("attained".into(), attained_pairing(&d, a.horizon)?.into());
                doc.insert("support_DT".into(), support_dt(&d, a.horizon).into());
                emit(out, None, &to_json(&doc))
            } else {
                emit(out, None, &to_json(&ScheduleDoc::from(&c)))
            }
        }
        Command::Synthesize(a) => {
            let target = read_state(&a.target)?;
            let rep = steer_from_zero(&target, a.radius, budget(a.max_periods, &target))?;
            write_report(out, &rep, a.out.as_deref(), a.trace.as_deref())
        }
        Command::Stabilize(a) => {
            let s = read_state(&a.state)?;
            let rep = stabilize(&s, a.radius, budget(a.max_periods, &s))?;
            write_report(out, &rep, a.out.as_deref(), a.trace.as_deref())
        }
        Command::Certify(a) => {
            let s = read_state(&a.state)?;
            let c = stringreach_core::certify::certify(&s, a.radius)?;
            emit(out, a.out.as_deref(), &to_json(&CertifyDoc::from(&c)))
        }
        Command::Sweep(a) => {
            let base = match (&a.state, a.seed) {
                (Some(s), _) => read_state(s)?,
                (None, Some(seed)) => random_base(seed, a.arcs)?,
                (None, None) => unit_base(),
            };
            let rows = sweep(&base, &a.scales, a.radius)?;
            emit(out, a.out.as_deref(), &sweep_csv(&rows))
        }
        Command::ExampleStrange(a) => {
            let report = example_strange(a.steps)?;
            emit(out, a.out.as_deref(), &to_json(&report))
        }
    }
}

/// Parse `args` (program name first), run, and return the exit status.
pub fn main_with_args<I, T>(args: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(c) => c,
        Err(e) => {
            let code = e.exit_code();
            let _ = e.print();
            return code;
        }
    };
    let stdout = std::io::stdout();
    let mut lock = stdout.lock();
    match run(cli, &mut lock) {
        Ok(()) => 0,
        Err(e) => {
            eprintln!("error: {e}");
            e.exit_code()
        }
    }
}
