//! JSON documents for states, duals, schedules and results, and the CSV
//! writers for trajectories, traces and sweeps.

use std::fs;
use std::path::Path;

use serde::de::DeserializeOwned;
use serde::{Deserialize, Serialize};
use stringreach_core::bellman::{BellmanBranch, BellmanBreakdown};
use stringreach_core::certify::CertifiedInterval;
use stringreach_core::geometry::{GaugeBranch, GaugeResult};
use stringreach_core::synthesis::TracePoint;
use stringreach_core::{ControlSchedule, Dual, Field, State, Trajectory};

use crate::error::CliError;

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct StateDoc {
    pub breakpoints: Vec<f64>,
    pub values: Vec<f64>,
    pub f: f64,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct DualDoc {
    pub breakpoints: Vec<f64>,
    pub values: Vec<f64>,
    pub phi: f64,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ScheduleDoc {
    #[serde(rename = "T")]
    pub horizon: f64,
    pub breakpoints: Vec<f64>,
    pub samples: Vec<f64>,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct GaugeDoc {
    pub mu: f64,
    pub branch: String,
    #[serde(skip_serializing_if = "Option::is_none", default)]
    pub dual: Option<DualDoc>,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct BellmanDoc {
    #[serde(rename = "T0")]
    pub t0: f64,
    #[serde(rename = "T1")]
    pub t1: f64,
    #[serde(rename = "calT")]
    pub calt: f64,
    pub branch: String,
    /// `1`, `-1`, or `null` when unset.
    pub sigma: Option<i8>,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct CertifyDoc {
    pub lower: f64,
    pub upper: f64,
    #[serde(rename = "calT")]
    pub calt: f64,
    /// `null` when the lower bound is zero and the upper bound is not.
    pub ratio: Option<f64>,
    pub periods: usize,
    /// Leading periods spent steering from zero into the terminal ball.
    pub completion_periods: usize,
    pub exhausted: bool,
    pub start_residual: StateDoc,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct SynthesisDoc {
    pub elapsed: f64,
    pub periods: usize,
    pub exhausted: bool,
    pub residual: StateDoc,
}

impl From<&State> for StateDoc {
    fn from(s: &State) -> Self {
        StateDoc {
            breakpoints: s.field.breakpoints().to_vec(),
            // `+ 0.0` turns negative zeros into zeros.
            values: s.field.values().iter().map(|v| v + 0.0).collect(),
            f: s.height + 0.0,
        }
    }
}

impl TryFrom<StateDoc> for State {
    type Error = CliError;

    fn try_from(d: StateDoc) -> Result<Self, CliError> {
        Ok(State::new(Field::new(d.breakpoints, d.values)?, d.f))
    }
}

impl From<&Dual> for DualDoc {
    fn from(d: &Dual) -> Self {
        DualDoc {
            breakpoints: d.field.breakpoints().to_vec(),
            values: d.field.values().to_vec(),
            phi: d.drift,
        }
    }
}

impl TryFrom<DualDoc> for Dual {
    type Error = CliError;

    fn try_from(d: DualDoc) -> Result<Self, CliError> {
        Ok(Dual::new(Field::new(d.breakpoints, d.values)?, d.phi))
    }
}

impl From<&ControlSchedule> for ScheduleDoc {
    fn from(c: &ControlSchedule) -> Self {
        ScheduleDoc {
            horizon: c.horizon(),
            breakpoints: c.breakpoints().to_vec(),
            samples: c.samples().to_vec(),
        }
    }
}

impl TryFrom<ScheduleDoc> for ControlSchedule {
    type Error = CliError;

    fn try_from(d: ScheduleDoc) -> Result<Self, CliError> {
        Ok(ControlSchedule::new(d.horizon, d.breakpoints, d.samples)?)
    }
}

impl From<&GaugeResult> for GaugeDoc {
    fn from(g: &GaugeResult) -> Self {
        GaugeDoc {
            mu: g.mu,
            branch: match g.branch {
                GaugeBranch::SupNorm => "supnorm",
                GaugeBranch::Quadratic => "quadratic",
            }
            .to_string(),
            dual: g.dual.as_ref().map(DualDoc::from),
        }
    }
}

impl From<&BellmanBreakdown> for BellmanDoc {
    fn from(b: &BellmanBreakdown) -> Self {
        BellmanDoc {
            t0: b.t0,
            t1: b.t1,
            calt: b.value,
            branch: match b.branch {
                BellmanBranch::T0 => "T0",
                BellmanBranch::T1 => "T1",
                BellmanBranch::Tie => "tie",
            }
            .to_string(),
            sigma: b.sigma.map(|s| s.value() as i8),
        }
    }
}

impl From<&CertifiedInterval> for CertifyDoc {
    fn from(c: &CertifiedInterval) -> Self {
        CertifyDoc {
            lower: c.lower,
            upper: c.upper,
            calt: c.calt,
            ratio: c.ratio.is_finite().then_some(c.ratio),
            periods: c.periods,
            completion_periods: c.completion_periods,
            exhausted: c.exhausted,
            start_residual: StateDoc::from(&c.start_residual),
        }
    }
}

/// Parse a document, naming the offending field on failure.
pub fn parse_json<T: DeserializeOwned>(text: &str, what: &str) -> Result<T, CliError> {
    let de = &mut serde_json::Deserializer::from_str(text);
    serde_path_to_error::deserialize(de).map_err(|e| {
        let path = e.path().to_string();
        CliError::Malformed(format!("{what}: field `{path}`: {}", e.inner()))
    })
}

/// Inline JSON when `arg` starts with `{`, otherwise a path to read.
pub fn read_doc<T: DeserializeOwned>(arg: &str, what: &str) -> Result<T, CliError> {
    let trimmed = arg.trim_start();
    if trimmed.starts_with('{') {
        parse_json(trimmed, what)
    } else {
        let text = fs::read_to_string(arg)
            .map_err(|e| CliError::Io(format!("cannot read {what} from {arg}: {e}")))?;
        parse_json(&text, what)
    }
}

pub fn read_state(arg: &str) -> Result<State, CliError> {
    read_doc::<StateDoc>(arg, "state")?.try_into()
}

pub fn read_dual(arg: &str) -> Result<Dual, CliError> {
    read_doc::<DualDoc>(arg, "dual")?.try_into()
}

pub fn read_schedule(arg: &str) -> Result<ControlSchedule, CliError> {
    read_doc::<ScheduleDoc>(arg, "schedule")?.try_into()
}

pub fn to_json<T: Serialize>(value: &T) -> String {
    let mut s = serde_json::to_string_pretty(value).expect("documents serialize");
    s.push('\n');
    s
}

pub fn write_file(path: &Path, contents: &str) -> Result<(), CliError> {
    fs::write(path, contents)
        .map_err(|e| CliError::Io(format!("cannot write {}: {e}", path.display())))
}

/// 17 significant digits, `.` as decimal separator.
pub fn fmt_real(x: f64) -> String {
    format!("{x:.16e}")
}

fn csv_writer() -> csv::Writer<Vec<u8>> {
    csv::WriterBuilder::new()
        .terminator(csv::Terminator::Any(b'\n'))
        .from_writer(Vec::new())
}

fn finish(w: csv::Writer<Vec<u8>>) -> String {
    let bytes = w.into_inner().expect("in-memory csv flush");
    String::from_utf8(bytes).expect("csv output is ascii")
}

/// Rows of real numbers under `header`.
pub fn real_table(header: &[&str], rows: impl IntoIterator<Item = Vec<f64>>) -> String {
    let mut w = csv_writer();
    w.write_record(header).expect("in-memory csv");
    for row in rows {
        w.write_record(row.into_iter().map(fmt_real))
            .expect("in-memory csv");
    }
    finish(w)
}

/// `t, f, supnorm_F, mean_F, mean_F2` for each sampled state.
pub fn trajectory_csv(traj: &Trajectory) -> String {
    real_table(
        &["t", "f", "supnorm_F", "mean_F", "mean_F2"],
        traj.times.iter().zip(&traj.states).map(|(&t, s)| {
            vec![
                t,
                s.height,
                s.field.sup_norm(),
                s.field.mean(),
                s.field.mean_square(),
            ]
        }),
    )
}

#[derive(Serialize)]
struct Checkpoint {
    t: f64,
    state: StateDoc,
}

/// Field checkpoints accompanying [`trajectory_csv`].
pub fn trajectory_sidecar(traj: &Trajectory) -> String {
    let points: Vec<Checkpoint> = traj
        .times
        .iter()
        .zip(&traj.states)
        .map(|(&t, s)| Checkpoint {
            t,
            state: StateDoc::from(s),
        })
        .collect();
    to_json(&points)
}

/// `period, t, calT, supnorm, f`.
pub fn trace_csv(trace: &[TracePoint]) -> String {
    let mut w = csv_writer();
    w.write_record(["period", "t", "calT", "supnorm", "f"])
        .expect("in-memory csv");
    for p in trace {
        w.write_record([
            p.period.to_string(),
            fmt_real(p.time),
            fmt_real(p.calt),
            fmt_real(p.sup_norm),
            fmt_real(p.height),
        ])
        .expect("in-memory csv");
    }
    finish(w)
}
