//! Two-sided bounds on the minimum time: dual separation from below and the
//! synthesis schedule from above.

use alloc::vec::Vec;

use crate::bellman::bellman;
use crate::dynamics::ControlSchedule;
use crate::error::{domain, Error, Result};
use crate::field::{Dual, Field, State};
use crate::geometry::{quadratic_dual, support_dinfty, support_dt};
use crate::num::{abs, sign};
use crate::synthesis::{default_max_periods, steer_from_zero};

/// Width of the sliver duals placed at the ends of maximizing arcs.
pub const SLIVER: f64 = 1e-9;

/// Horizon multiples `T/𝒯` at which duals of `C(T)S` are pulled back.
const PULLBACK_FACTORS: [f64; 9] = [0.5, 0.75, 0.9, 0.97, 1.0, 1.03, 1.1, 1.25, 1.5];

/// Radius to which the upper-bound schedule is completed back to zero: the
/// terminal phase lands on zero up to rounding.
pub const COMPLETION_RADIUS: f64 = 1e-6;

/// Number of steps in the blend between the sup-norm and quadratic duals.
const BLEND_STEPS: usize = 10;

#[derive(Clone, Debug, PartialEq)]
pub struct CertifiedInterval {
    pub lower: f64,
    pub upper: f64,
    pub calt: f64,
    /// `upper / lower`; infinite when only the lower end is zero.
    pub ratio: f64,
    pub witness_dual: Option<Dual>,
    /// Schedule realising `upper`, from `start_residual` to the state.
    pub schedule: ControlSchedule,
    /// Start of the upper-bound schedule, within [`COMPLETION_RADIUS`] of zero.
    pub start_residual: State,
    pub periods: usize,
    /// Leading periods that steer from zero into the terminal ball; the rest
    /// steer from the ball to the state.
    pub completion_periods: usize,
    /// The synthesis ran out of periods before reaching the ball.
    pub exhausted: bool,
}

/// Smallest `T` with `s_{D(T)}(dual) ≥ target`, from below.
fn separation_time(dual: &Dual, target: f64) -> Result<f64> {
    let mut hi = 1.0;
    let mut doublings = 0;
    while support_dt(dual, hi) < target {
        hi *= 2.0;
        doublings += 1;
        if doublings > 200 {
            return Err(Error::Bracketing(
                "support function never reaches the pairing".into(),
            ));
        }
    }
    let mut lo = 0.0;
    for _ in 0..200 {
        let mid = 0.5 * (lo + hi);
        if !(mid > lo && mid < hi) {
            break;
        }
        if support_dt(dual, mid) < target {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    Ok(lo)
}

/// Allowance for rounding in the pairing and in the support function, so that
/// an endpoint whose pairing equals the support is not pushed past a flat
/// stretch of `T ↦ s_{D(T)}`.
fn rounding_slack(state: &State, dual: &Dual, pair: f64) -> f64 {
    let scale = dual.field.sup_norm() * (state.field.sup_norm() + 1.0) + abs(dual.drift);
    1e-12 * abs(pair) + 4e-13 * scale
}

/// Best separation lower bound over `duals`: for each dual with positive
/// pairing, no `T` with `s_{D(T)} < ⟨state, dual⟩` can reach the state.
pub fn lower_bound(state: &State, duals: &[Dual]) -> Result<(f64, Dual)> {
    let first = duals
        .first()
        .ok_or_else(|| domain("lower_bound needs at least one dual"))?;
    let mut best = (0.0, first.clone());
    for d in duals {
        let pair = state.pair(d);
        if !(pair > 0.0) {
            continue;
        }
        let t = separation_time(d, pair - rounding_slack(state, d, pair))?;
        if t > best.0 {
            best = (t, d.clone());
        }
    }
    Ok(best)
}

/// `sign F` on the arcs where `|F|` attains its maximum, zero elsewhere.
fn sup_norm_dual(field: &Field) -> Option<Dual> {
    let sup = field.sup_norm();
    if !(sup > 0.0) {
        return None;
    }
    let cut = sup * (1.0 - 1e-12);
    Some(Dual::new(
        field.map(|v| if abs(v) >= cut { sign(v) } else { 0.0 }),
        0.0,
    ))
}

/// Default separating duals for `state`:
/// - blends of the sup-norm dual and the quadratic dual of `C(T)S`, both at
///   unit `D∞` support, pulled back by `C*(T)` for `T` near `𝒯`;
/// - the sup-norm dual itself and slivers at both ends of each maximizing arc;
/// - the pure drift dual `(0, sign f)`.
pub fn default_duals(state: &State) -> Vec<Dual> {
    let mut out = Vec::new();
    let calt = bellman(state).value;
    let sup_dual = sup_norm_dual(&state.field);
    if calt > 0.0 {
        let unit_sup = sup_dual.as_ref().map(|d| {
            let s = support_dinfty(d);
            Dual::new(d.field.scale(1.0 / s), 0.0)
        });
        for k in PULLBACK_FACTORS {
            let t = k * calt;
            let Ok(scaled) = state.scale(t) else {
                continue;
            };
            let quad = quadratic_dual(&scaled);
            for i in 0..=BLEND_STEPS {
                let a = i as f64 / BLEND_STEPS as f64;
                let blend = match (&quad, &unit_sup) {
                    (Some(q), Some(u)) => Dual::new(
                        q.field.zip_with(&u.field, |x, y| a * x + (1.0 - a) * y),
                        a * q.drift,
                    ),
                    (Some(q), None) if i == BLEND_STEPS => q.clone(),
                    _ => continue,
                };
                out.push(blend.scale_adjoint(t));
            }
        }
    }
    if let Some(d) = sup_dual {
        for arc in state
            .field
            .arcs()
            .filter(|a| abs(a.value) >= sup_cut(state))
            .take(16)
        {
            let w = SLIVER.min(0.5 * arc.len());
            let s = sign(arc.value);
            out.push(Dual::new(Field::indicator(arc.end - w, arc.end, s), 0.0));
            out.push(Dual::new(
                Field::indicator(arc.start, arc.start + w, s),
                0.0,
            ));
        }
        out.push(d);
    }
    if state.height != 0.0 {
        out.push(Dual::new(Field::zero(), sign(state.height)));
    }
    out
}

fn sup_cut(state: &State) -> f64 {
    state.field.sup_norm() * (1.0 - 1e-12)
}

/// Lower bound from [`default_duals`]. The upper bound is the length of a
/// schedule from (numerically) zero: [`steer_from_zero`] into the terminal
/// ball of `radius`, preceded by a second run that steers from zero onto the
/// ball state it starts from.
pub fn certify(state: &State, radius: f64) -> Result<CertifiedInterval> {
    certify_with(state, radius, default_max_periods(state))
}

pub fn certify_with(state: &State, radius: f64, max_periods: usize) -> Result<CertifiedInterval> {
    if !(radius > 0.0) {
        return Err(domain("terminal ball radius must be positive"));
    }
    let calt = bellman(state).value;
    if state.norm() <= radius {
        return Ok(CertifiedInterval {
            lower: 0.0,
            upper: 0.0,
            calt,
            ratio: 1.0,
            witness_dual: None,
            schedule: ControlSchedule::empty(),
            start_residual: state.clone(),
            periods: 0,
            completion_periods: 0,
            exhausted: false,
        });
    }
    let duals = default_duals(state);
    let (lower, witness) = if duals.is_empty() {
        (0.0, None)
    } else {
        let (t, d) = lower_bound(state, &duals)?;
        (t, Some(d))
    };
    let report = steer_from_zero(state, radius, max_periods)?;
    let completion = if report.residual_state.norm() > COMPLETION_RADIUS {
        let ball = &report.residual_state;
        Some(steer_from_zero(
            ball,
            COMPLETION_RADIUS,
            default_max_periods(ball),
        )?)
    } else {
        None
    };
    let (schedule, start_residual, completion_periods, completion_exhausted) = match completion {
        Some(c) => (
            c.schedule.concat(&report.schedule),
            c.residual_state,
            c.periods,
            c.exhausted,
        ),
        None => (report.schedule, report.residual_state, 0, false),
    };
    let upper = schedule.horizon();
    let ratio = if lower > 0.0 {
        upper / lower
    } else {
        f64::INFINITY
    };
    Ok(CertifiedInterval {
        lower,
        upper,
        calt,
        ratio,
        witness_dual: witness,
        schedule,
        start_residual,
        periods: report.periods + completion_periods,
        completion_periods,
        exhausted: report.exhausted || completion_exhausted,
    })
}
