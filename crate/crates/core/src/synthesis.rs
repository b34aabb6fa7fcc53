//! Per-period feedback: growth away from zero, damping toward zero, and
//! steering from zero to a target through time reversal.

use alloc::vec::Vec;

use crate::bellman::{bellman, BellmanBranch};
use crate::dynamics::{simulate, ControlSchedule};
use crate::error::{domain, Result};
use crate::field::{Field, State};
use crate::num::{ceil, sign, TWO_PI};

/// Terminal ball radius used when none is given.
pub const DEFAULT_RADIUS: f64 = 1.0;

/// One row of a synthesis trace, taken at the start of `period`.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct TracePoint {
    pub period: usize,
    pub time: f64,
    pub calt: f64,
    pub sup_norm: f64,
    pub height: f64,
}

#[derive(Clone, Debug, PartialEq)]
pub struct SynthesisReport {
    pub schedule: ControlSchedule,
    pub periods: usize,
    pub trace: Vec<TracePoint>,
    /// For [`stabilize`] the state reached; for [`steer_from_zero`] the start
    /// state from which the schedule reaches the target.
    pub residual_state: State,
    pub elapsed: f64,
    /// `max_periods` ran out before the ball was reached.
    pub exhausted: bool,
}

/// `u(t) = G(t)` on `[0, 2π)`.
fn period_schedule(profile: &Field) -> ControlSchedule {
    let pieces = profile
        .pieces()
        .into_iter()
        .map(|(a, _, v)| (a, v))
        .collect();
    ControlSchedule::from_sorted(TWO_PI, pieces)
}

/// `u(t) = k·sign F(2π − t)`.
fn reflected_sign_schedule(field: &Field, k: f64) -> ControlSchedule {
    period_schedule(&field.reflect().signum().scale(k))
}

fn constant_period(sigma: f64) -> ControlSchedule {
    ControlSchedule::from_sorted(TWO_PI, alloc::vec![(0.0, sigma)])
}

/// Growth feedback for one period, moving `𝒯` up by `2π`.
///
/// On the T0 branch (including ties) `u(t) = sign F(2π − t)`; on the T1
/// branch `u ≡ sign(2f + 𝒯⟨F⟩)`. A state on a bad curve is pushed off it with
/// `u ≡ −sign⟨F⟩`.
pub fn growth_period_control(state: &State) -> Result<ControlSchedule> {
    if state.is_zero() {
        return Err(domain("growth control is undefined at the zero state"));
    }
    let b = bellman(state);
    let on_bad_curve =
        b.branch == BellmanBranch::Tie && b.sigma.is_none() && state.field.is_constant();
    if on_bad_curve {
        return Ok(constant_period(-sign(state.field.mean())));
    }
    if b.t0 >= b.t1 || b.branch == BellmanBranch::Tie {
        return Ok(reflected_sign_schedule(&state.field, 1.0));
    }
    Ok(constant_period(b.sigma.map_or(1.0, |s| s.value())))
}

fn reflected_value(state: &State) -> f64 {
    bellman(&state.reflect_negate()).value
}

/// Candidate damping profiles `G`, applied as `u(t) = G(2π − t)`.
///
/// Level cuts `−sign(F − θ)` pull the profile toward a level `θ` (the
/// constants `±1` are the cuts below and above the range, `θ = 0` is
/// `−sign F`); magnitude cuts apply `−sign F` where `|F| ≥ θ` and a constant
/// elsewhere.
fn damping_profiles(field: &Field) -> Vec<Field> {
    let mut levels: Vec<f64> = field.values().to_vec();
    levels.sort_by(f64::total_cmp);
    levels.dedup();
    let mut cuts = alloc::vec![0.0, f64::NEG_INFINITY, f64::INFINITY];
    cuts.extend(levels.windows(2).map(|w| 0.5 * (w[0] + w[1])));
    let mut out: Vec<Field> = cuts
        .iter()
        .map(|&theta| field.map(|v| if v - theta >= 0.0 { -1.0 } else { 1.0 }))
        .collect();
    let mut mags: Vec<f64> = field.values().iter().map(|v| v.abs()).collect();
    mags.sort_by(f64::total_cmp);
    mags.dedup();
    for &theta in mags.iter().skip(1) {
        for sigma in [1.0, -1.0] {
            out.push(field.map(|v| if v.abs() >= theta { -sign(v) } else { sigma }));
        }
    }
    out
}

/// Damping feedback for one period.
///
/// Every candidate profile from `damping_profiles` is run through the
/// exact period map and the one giving the smallest `𝒯(R(next))` wins, with
/// `R` the time-reversal companion. The first candidate is `−sign F(2π − t)`,
/// which therefore wins ties; the constants come next.
pub fn damp_period_control(state: &State) -> ControlSchedule {
    if state.is_zero() {
        return ControlSchedule::empty();
    }
    let mut best: Option<(f64, ControlSchedule)> = None;
    for profile in damping_profiles(&state.field) {
        let control = period_schedule(&profile.reflect());
        let Ok(next) = simulate(state, &control) else {
            continue;
        };
        let value = reflected_value(next.final_state());
        if best.as_ref().is_none_or(|(v, _)| value < *v) {
            best = Some((value, control));
        }
    }
    best.map_or_else(|| constant_period(-1.0), |(_, c)| c)
}

/// One period of the terminal phase, used once greedy damping stalls.
///
/// A nonzero field gets `u(2π − x) = −clamp(F(x), −1, 1)`, which zeroes
/// every arc with `|F| ≤ 1` and shrinks the others by 1. Once `F ≡ 0` the
/// constant `c = clamp(f/2π, −1, 1)` is applied; the next period then
/// applies `−c`, restoring `F ≡ 0` with `f` moved by `−2πc`.
pub fn terminal_period_control(state: &State) -> ControlSchedule {
    if state.field.sup_norm() <= ZERO_FIELD_TOL {
        let c = (state.height / TWO_PI).clamp(-1.0, 1.0);
        if c == 0.0 {
            return ControlSchedule::empty();
        }
        return constant_period(c);
    }
    period_schedule(&state.field.map(|v| -v.clamp(-1.0, 1.0)).reflect())
}

/// Fields below this sup norm count as zero in the terminal phase.
const ZERO_FIELD_TOL: f64 = 1e-14;

/// Greedy damping is considered stalled when a period lowers `𝒯(R(·))` by
/// less than this.
const STALL_DROP: f64 = core::f64::consts::PI;

/// Below this `𝒯(R(·))` the driver enters the end game.
const ENDGAME_CALT: f64 = 4.0 * TWO_PI;

/// Cap on the rollouts used to score end-game candidates.
const ROLLOUT_CAP: usize = 256;

/// The driver outside the end game: greedy damping until a period lowers
/// `𝒯(R(·))` by less than π, then [`terminal_period_control`] for good.
fn base_period_control(state: &State, stalled: &mut bool) -> (ControlSchedule, Option<State>) {
    if !*stalled {
        let control = damp_period_control(state);
        if let Ok(t) = simulate(state, &control) {
            let next = t.into_final();
            if reflected_value(&next) > reflected_value(state) - STALL_DROP {
                *stalled = true;
            } else {
                return (control, Some(next));
            }
        } else {
            *stalled = true;
        }
    }
    (terminal_period_control(state), None)
}

/// Periods the base driver needs to bring `state` within `radius`, or
/// more than `cap` if it does not manage within `cap`.
fn base_periods(state: &State, mut stalled: bool, radius: f64, cap: usize) -> usize {
    let mut s = state.clone();
    for n in 0..cap {
        if s.norm() <= radius {
            return n;
        }
        let (control, next) = base_period_control(&s, &mut stalled);
        s = match next {
            Some(next) => next,
            None => match simulate(&s, &control) {
                Ok(t) if !control.is_empty() => t.into_final(),
                _ => return cap + 1,
            },
        };
    }
    if s.norm() <= radius {
        cap
    } else {
        cap + 1
    }
}

/// End-game step: among the base step, the damping candidates and the
/// terminal step, the one whose successor the base driver finishes soonest,
/// then the lowest `𝒯(R(next))`. `stalled` is the base driver's state after
/// the step, so following the base driver from there reproduces the scored
/// rollout and the count falls by at least one every period.
fn endgame_period_control(state: &State, radius: f64, stalled: &mut bool) -> ControlSchedule {
    let mut candidates = alloc::vec![
        base_period_control(state, &mut stalled.clone()).0,
        terminal_period_control(state),
    ];
    candidates.extend(
        damping_profiles(&state.field)
            .iter()
            .map(|p| period_schedule(&p.reflect())),
    );
    let mut best: Option<((usize, f64), bool, ControlSchedule)> = None;
    for control in candidates {
        let Ok(next) = simulate(state, &control) else {
            continue;
        };
        let next = next.into_final();
        let value = reflected_value(&next);
        for flag in [false, true] {
            let score = (base_periods(&next, flag, radius, ROLLOUT_CAP), value);
            let better = best
                .as_ref()
                .is_none_or(|(b, _, _)| score.0 < b.0 || (score.0 == b.0 && score.1 < b.1));
            if better {
                best = Some((score, flag, control.clone()));
            }
        }
    }
    match best {
        Some((_, flag, control)) => {
            *stalled = flag;
            control
        }
        None => terminal_period_control(state),
    }
}

fn trace_point(period: usize, state: &State) -> TracePoint {
    TracePoint {
        period,
        time: period as f64 * TWO_PI,
        calt: reflected_value(state),
        sup_norm: state.field.sup_norm(),
        height: state.height,
    }
}

/// Apply [`damp_period_control`] until `state.norm() ≤ radius` or
/// `max_periods` periods have run. Once a damping period lowers `𝒯(R(·))` by
/// less than π, or `𝒯(R(·))` drops below `8π`, the driver switches for good
/// to an end game that scores candidates by terminal-phase rollouts.
pub fn stabilize(state: &State, radius: f64, max_periods: usize) -> Result<SynthesisReport> {
    if !(radius > 0.0) {
        return Err(domain("terminal ball radius must be positive"));
    }
    let mut current = state.clone();
    let mut trace = alloc::vec![trace_point(0, &current)];
    let mut pieces: Vec<(f64, f64)> = Vec::new();
    let mut periods = 0;
    let mut endgame = false;
    let mut stalled = false;
    while current.norm() > radius && periods < max_periods {
        endgame = endgame || reflected_value(&current) <= ENDGAME_CALT;
        let mut control = ControlSchedule::empty();
        if !endgame {
            control = base_period_control(&current, &mut stalled).0;
            endgame = stalled;
        }
        if endgame {
            control = endgame_period_control(&current, radius, &mut stalled);
        }
        let next = simulate(&current, &control)?.into_final();
        if control.is_empty() {
            break;
        }
        current = next;
        let offset = periods as f64 * TWO_PI;
        pieces.extend(
            control
                .breakpoints()
                .iter()
                .zip(control.samples())
                .map(|(&t, &u)| (t + offset, u)),
        );
        periods += 1;
        trace.push(trace_point(periods, &current));
    }
    let elapsed = periods as f64 * TWO_PI;
    Ok(SynthesisReport {
        schedule: if periods == 0 {
            ControlSchedule::empty()
        } else {
            ControlSchedule::from_sorted(elapsed, pieces)
        },
        periods,
        exhausted: current.norm() > radius,
        trace,
        residual_state: current,
        elapsed,
    })
}

/// A period budget comfortably above `𝒯/2π` damping periods, for either
/// `state` or its companion.
pub fn default_max_periods(state: &State) -> usize {
    let calt = bellman(state).value.max(reflected_value(state));
    4 * ceil(calt / TWO_PI) as usize + 64
}

/// Schedule reaching `target` from a point within `radius` of zero.
///
/// Damps the companion `R(target)` to a state `Q` and reverses the schedule
/// in time; the reversed schedule steers `R(Q)` exactly onto `target`.
pub fn steer_from_zero(target: &State, radius: f64, max_periods: usize) -> Result<SynthesisReport> {
    let back = stabilize(&target.reflect_negate(), radius, max_periods)?;
    let elapsed = back.elapsed;
    let periods = back.periods;
    let trace = back
        .trace
        .iter()
        .rev()
        .map(|p| TracePoint {
            period: periods - p.period,
            time: elapsed - p.time,
            ..*p
        })
        .collect();
    Ok(SynthesisReport {
        schedule: back.schedule.reversed(),
        periods,
        trace,
        residual_state: back.residual_state.reflect_negate(),
        elapsed,
        exhausted: back.exhausted,
    })
}
