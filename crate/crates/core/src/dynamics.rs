//! Exact simulation of the reduced system by characteristics.
//!
//! `F` is transported with unit speed in the positive direction and the
//! control is injected at `x = 0`: a disturbance emitted at time `t₀` sits at
//! `x = (t − t₀) mod 2π` at time `t`. The mean height obeys `ḟ = −⟨F⟩` and
//! `d⟨F⟩/dt = u/2π`, so each constant-control step of length `τ` updates it by
//! `f ← f − τ⟨F⟩ − cτ²/4π` with no discretisation error.

use alloc::vec;
use alloc::vec::Vec;

use crate::error::{domain, Error, Result};
use crate::field::{Dual, Field, State, ARC_TOL, MERGE_TOL};
use crate::num::{abs, sign, PI, TWO_PI};

/// Piecewise-constant admissible control `u(t) ∈ [−1, 1]` on `[0, T)`.
#[derive(Clone, Debug, PartialEq)]
pub struct ControlSchedule {
    horizon: f64,
    breakpoints: Vec<f64>,
    samples: Vec<f64>,
}

impl ControlSchedule {
    /// Validated constructor. `breakpoints` start at 0, increase strictly and
    /// stay below `horizon`; every sample satisfies `|u| ≤ 1`. A zero horizon
    /// with no breakpoints is the empty schedule.
    pub fn new(horizon: f64, breakpoints: Vec<f64>, samples: Vec<f64>) -> Result<Self> {
        if !horizon.is_finite() || horizon < 0.0 {
            return Err(domain("schedule horizon must be finite and non-negative"));
        }
        if breakpoints.len() != samples.len() {
            return Err(domain("schedule needs exactly one sample per breakpoint"));
        }
        if horizon == 0.0 {
            if !breakpoints.is_empty() {
                return Err(domain("empty schedule cannot carry samples"));
            }
            return Ok(Self::empty());
        }
        if breakpoints.first() != Some(&0.0) {
            return Err(domain("schedule breakpoints must start at 0"));
        }
        for (i, &t) in breakpoints.iter().enumerate() {
            if !t.is_finite() || t >= horizon || (i > 0 && t <= breakpoints[i - 1]) {
                return Err(domain(
                    "schedule breakpoints must increase strictly within [0, T)",
                ));
            }
        }
        if samples.iter().any(|u| !u.is_finite() || abs(*u) > 1.0) {
            return Err(domain("inadmissible control: |u| must not exceed 1"));
        }
        Ok(Self::canonical(
            horizon,
            breakpoints.into_iter().zip(samples).collect(),
        ))
    }

    pub fn empty() -> Self {
        Self {
            horizon: 0.0,
            breakpoints: Vec::new(),
            samples: Vec::new(),
        }
    }

    pub fn constant(horizon: f64, value: f64) -> Result<Self> {
        Self::new(horizon, vec![0.0], vec![value])
    }

    /// From `(start, value)` pairs already sorted by start, first start at 0.
    pub(crate) fn from_sorted(horizon: f64, pieces: Vec<(f64, f64)>) -> Self {
        Self::canonical(horizon, pieces)
    }

    fn canonical(horizon: f64, pieces: Vec<(f64, f64)>) -> Self {
        let n = pieces.len();
        let mut kept: Vec<(f64, f64)> = Vec::with_capacity(n);
        for i in 0..n {
            let end = if i + 1 < n { pieces[i + 1].0 } else { horizon };
            if end - pieces[i].0 < ARC_TOL {
                continue;
            }
            match kept.last() {
                Some(&(_, prev)) if abs(prev - pieces[i].1) <= MERGE_TOL => {}
                _ => kept.push(pieces[i]),
            }
        }
        if kept.is_empty() {
            return Self::empty();
        }
        kept[0].0 = 0.0;
        let (breakpoints, samples) = kept.into_iter().unzip();
        Self {
            horizon,
            breakpoints,
            samples,
        }
    }

    pub fn horizon(&self) -> f64 {
        self.horizon
    }

    pub fn breakpoints(&self) -> &[f64] {
        &self.breakpoints
    }

    pub fn samples(&self) -> &[f64] {
        &self.samples
    }

    pub fn is_empty(&self) -> bool {
        self.samples.is_empty()
    }

    /// `(t0, t1, u)` for each interval, in order.
    pub fn pieces(&self) -> impl Iterator<Item = (f64, f64, f64)> + '_ {
        let n = self.samples.len();
        (0..n).map(move |i| {
            let end = if i + 1 < n {
                self.breakpoints[i + 1]
            } else {
                self.horizon
            };
            (self.breakpoints[i], end, self.samples[i])
        })
    }

    pub fn value_at(&self, t: f64) -> Option<f64> {
        if self.is_empty() || t < 0.0 || t >= self.horizon {
            return None;
        }
        let idx = self.breakpoints.partition_point(|&b| b <= t);
        Some(self.samples[idx - 1])
    }

    /// `∫₀^T u dt`.
    pub fn integral(&self) -> f64 {
        self.pieces().map(|(a, b, u)| (b - a) * u).sum()
    }

    /// `t ↦ u(T − t)`.
    pub fn reversed(&self) -> Self {
        let pieces: Vec<(f64, f64)> = self
            .pieces()
            .collect::<Vec<_>>()
            .into_iter()
            .rev()
            .map(|(_, b, u)| (self.horizon - b, u))
            .collect();
        Self::canonical(self.horizon, pieces)
    }

    /// `self` on `[0, T₁)` followed by `other` on `[T₁, T₁ + T₂)`.
    pub fn concat(&self, other: &Self) -> Self {
        let shift = self.horizon;
        let pieces = self
            .breakpoints
            .iter()
            .copied()
            .zip(self.samples.iter().copied())
            .chain(
                other
                    .breakpoints
                    .iter()
                    .map(|&t| t + shift)
                    .zip(other.samples.iter().copied()),
            )
            .collect();
        Self::canonical(self.horizon + other.horizon, pieces)
    }
}

/// States sampled along a run; the last entry is the final state.
#[derive(Clone, Debug, PartialEq)]
pub struct Trajectory {
    pub times: Vec<f64>,
    pub states: Vec<State>,
}

impl Trajectory {
    pub fn final_state(&self) -> &State {
        self.states
            .last()
            .expect("trajectory always holds the start state")
    }

    pub fn into_final(mut self) -> State {
        self.states
            .pop()
            .expect("trajectory always holds the start state")
    }
}

/// Advances `state` by `tau ≤ 2π` under the control `pieces`, given relative
/// to the start of the step as `(a, b, u)` tiling `[0, tau)`.
fn advance(state: &State, tau: f64, pieces: &[(f64, f64, f64)]) -> State {
    let full_turn = abs(tau - TWO_PI) <= 1e-12;
    let transported = if full_turn {
        state.field.clone()
    } else {
        state.field.rotate(tau)
    };
    // Control applied at relative time t sits at x = tau − t at the end of the step.
    let mut injected: Vec<(f64, f64)> = pieces.iter().map(|&(_, b, u)| (tau - b, u)).collect();
    if !full_turn {
        injected.push((tau, 0.0));
    }
    let field = transported.add(&Field::from_arcs(injected));

    let mut mean = state.field.mean();
    let mut height = state.height;
    for &(a, b, u) in pieces {
        let len = b - a;
        height -= len * mean + u * len * len / (4.0 * PI);
        mean += u * len / TWO_PI;
    }
    State::new(field, height)
}

/// Exact solution of the reduced system from `start` under `control`, with
/// checkpoints at every multiple of 2π and at the horizon.
pub fn simulate(start: &State, control: &ControlSchedule) -> Result<Trajectory> {
    let mut traj = Trajectory {
        times: vec![0.0],
        states: vec![start.clone()],
    };
    if control.is_empty() {
        return Ok(traj);
    }
    let horizon = control.horizon();
    let pieces: Vec<(f64, f64, f64)> = control.pieces().collect();
    let mut state = start.clone();
    let mut idx = 0;
    let mut k = 0usize;
    loop {
        let c0 = k as f64 * TWO_PI;
        if c0 >= horizon {
            break;
        }
        let c1 = ((k + 1) as f64 * TWO_PI).min(horizon);
        let mut local = Vec::new();
        while idx < pieces.len() {
            let (a, b, u) = pieces[idx];
            let (lo, hi) = (a.max(c0), b.min(c1));
            if hi > lo {
                local.push((lo - c0, hi - c0, u));
            }
            if b <= c1 {
                idx += 1;
            } else {
                break;
            }
        }
        state = advance(&state, c1 - c0, &local);
        traj.times.push(c1);
        traj.states.push(state.clone());
        k += 1;
    }
    Ok(traj)
}

/// One period of constant control `σ = ±1` in closed form:
/// `F' = F + σ`, `f' = f − 2π(⟨F⟩ + σ/2)`.
pub fn period_map_constant(state: &State, sigma: f64) -> State {
    State::new(
        state.field.add_constant(sigma),
        state.height - TWO_PI * (state.field.mean() + 0.5 * sigma),
    )
}

/// Bang-bang control `u(t) = sign(Φ(T−t) − φ·(T−t))` with exact switching
/// times; `sign(0) = +1`.
pub fn extremal_control(dual: &Dual, horizon: f64) -> Result<ControlSchedule> {
    if dual.is_zero() {
        return Err(Error::DegenerateDual);
    }
    if !(horizon > 0.0) || !horizon.is_finite() {
        return Err(domain("extremal control needs a positive horizon"));
    }
    let slope = dual.drift;
    // Signs of the adjoint trace on s-intervals, s = T − t.
    let mut by_s: Vec<(f64, f64, f64)> = Vec::new();
    for (s0, s1, v) in dual.field.periodic_pieces(horizon) {
        let (g0, g1) = (v - slope * s0, v - slope * s1);
        if g0 * g1 < 0.0 {
            let root = (v / slope).clamp(s0, s1);
            by_s.push((s0, root, sign(g0)));
            by_s.push((root, s1, sign(g1)));
        } else {
            by_s.push((s0, s1, sign(0.5 * (g0 + g1))));
        }
    }
    let pieces = by_s
        .into_iter()
        .rev()
        .map(|(_, s1, u)| (horizon - s1, u))
        .collect();
    Ok(ControlSchedule::from_sorted(horizon, pieces))
}

/// Pairing of the dual with the endpoint reached from rest under its
/// extremal control.
pub fn attained_pairing(dual: &Dual, horizon: f64) -> Result<f64> {
    let control = extremal_control(dual, horizon)?;
    let end = simulate(&State::zero(), &control)?.into_final();
    Ok(end.pair(dual))
}
