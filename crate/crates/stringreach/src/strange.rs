//! The family of equal-time schedules with a common final profile and a
//! whole interval of final heights.
//!
//! `u = a` on `[0, π)`, `1/2` on `[π, 2π)` and `3/2 − a` on `[2π, 3π)` with
//! `a ∈ [1/2, 1]` all end at `F = 3/2` on `[0, π)`, `1/2` on `[π, 2π)` after
//! time `3π`, while the height follows `f = −∫₀^π u − 3π/4 = −πa − 3π/4`.

use serde::Serialize;
use stringreach_core::certify::{default_duals, lower_bound};
use stringreach_core::num::PI;
use stringreach_core::{simulate, t_zero, ControlSchedule, Field, State};

use crate::CliError;

#[derive(Clone, Debug, Serialize)]
pub struct StrangeMember {
    pub a: f64,
    pub f_simulated: f64,
    pub f_affine: f64,
    /// `L¹` distance between the final field and the common profile.
    pub profile_error: f64,
}

#[derive(Clone, Debug, Serialize)]
pub struct StrangeReport {
    #[serde(rename = "T")]
    pub horizon: f64,
    /// `T0` of the common profile.
    #[serde(rename = "T0")]
    pub t0: f64,
    /// Dual-separation lower bound on the minimum time of the `a = 3/4` endpoint.
    pub lower_bound: f64,
    pub f_min: f64,
    pub f_max: f64,
    pub members: Vec<StrangeMember>,
}

pub fn profile() -> Field {
    Field::new(vec![0.0, PI], vec![1.5, 0.5]).expect("valid profile")
}

pub fn schedule(a: f64) -> Result<ControlSchedule, CliError> {
    Ok(ControlSchedule::new(
        3.0 * PI,
        vec![0.0, PI, 2.0 * PI],
        vec![a, 0.5, 1.5 - a],
    )?)
}

pub fn affine_height(a: f64) -> f64 {
    -PI * a - 0.75 * PI
}

/// Simulate the family at `steps + 1` evenly spaced `a ∈ [1/2, 1]`.
pub fn example_strange(steps: usize) -> Result<StrangeReport, CliError> {
    let steps = steps.max(1);
    let target = profile();
    let mut members = Vec::with_capacity(steps + 1);
    for i in 0..=steps {
        let a = 0.5 + 0.5 * i as f64 / steps as f64;
        let end = simulate(&State::zero(), &schedule(a)?)?.into_final();
        members.push(StrangeMember {
            a,
            f_simulated: end.height,
            f_affine: affine_height(a),
            profile_error: end.field.l1_distance(&target),
        });
    }
    let mid = State::new(target.clone(), affine_height(0.75));
    let (lower, _) = lower_bound(&mid, &default_duals(&mid))?;
    let heights = members.iter().map(|m| m.f_simulated);
    Ok(StrangeReport {
        horizon: 3.0 * PI,
        t0: t_zero(&mid),
        lower_bound: lower,
        f_min: heights.clone().fold(f64::INFINITY, f64::min),
        f_max: heights.fold(f64::NEG_INFINITY, f64::max),
        members,
    })
}
