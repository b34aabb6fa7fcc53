//! Support functions of the reachable sets `D(T)` and of the limit set `D∞`,
//! and the closed-form Minkowski gauge of `D∞` with its optimal dual.

use crate::field::{Dual, State};
use crate::num::{abs, sign, sqrt, PI, TWO_PI};

/// Feasibility slack on `s_{D∞} ≤ 1`.
pub const FEASIBILITY_TOL: f64 = 1e-12;

/// `∫_{s0}^{s1} |g|` for the affine `g` with end values `g0`, `g1`.
fn abs_affine_integral(g0: f64, g1: f64, len: f64) -> f64 {
    if g0 * g1 >= 0.0 {
        0.5 * abs(g0 + g1) * len
    } else {
        0.5 * (g0 * g0 + g1 * g1) / abs(g0 - g1) * len
    }
}

/// `s_{D(T)}(Φ, φ) = ∫₀^T |Φ(s) − φs| ds`, evaluated piece by piece over the
/// periodic extension of `Φ`. Returns 0 for `T ≤ 0`.
pub fn support_dt(dual: &Dual, horizon: f64) -> f64 {
    if !(horizon > 0.0) {
        return 0.0;
    }
    let slope = dual.drift;
    dual.field
        .periodic_pieces(horizon)
        .into_iter()
        .map(|(s0, s1, v)| abs_affine_integral(v - slope * s0, v - slope * s1, s1 - s0))
        .sum()
}

/// `∫₀¹ |w − τ| dτ`.
fn unit_ramp_distance(w: f64) -> f64 {
    if w <= 0.0 {
        0.5 - w
    } else if w >= 1.0 {
        w - 0.5
    } else {
        w * w - w + 0.5
    }
}

/// `s_{D∞}(Φ, φ) = (1/2π)∫₀¹∫₀^{2π} |Φ(x) − φτ| dx dτ`, exact per arc.
pub fn support_dinfty(dual: &Dual) -> f64 {
    let slope = dual.drift;
    let total: f64 = dual
        .field
        .arcs()
        .map(|a| {
            let inner = if slope == 0.0 {
                abs(a.value)
            } else {
                abs(slope) * unit_ramp_distance(a.value / slope)
            };
            inner * a.len()
        })
        .sum();
    total / TWO_PI
}

/// `s_{C(T)D(T)}(Φ, φ) = s_{D(T)}(C*(T)(Φ, φ))`.
pub fn support_scaled_dt(dual: &Dual, horizon: f64) -> f64 {
    if !(horizon > 0.0) {
        return 0.0;
    }
    support_dt(&dual.scale_adjoint(horizon), horizon)
}

pub fn dual_feasible(dual: &Dual) -> bool {
    support_dinfty(dual) <= 1.0 + FEASIBILITY_TOL
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum GaugeBranch {
    /// `μ = 2π‖F‖∞`.
    SupNorm,
    /// `μ = 2π(|⟨F⟩+2f| + √((⟨F⟩+2f)² + ⟨F²⟩))`, strictly above the sup-norm term.
    Quadratic,
}

#[derive(Clone, Debug, PartialEq)]
pub struct GaugeResult {
    pub mu: f64,
    pub branch: GaugeBranch,
    /// Optimal dual, present on the quadratic branch only.
    pub dual: Option<Dual>,
}

/// The two terms of the `D∞` gauge before the factor 2π: `(‖F‖∞, quadratic)`.
pub(crate) fn gauge_terms(state: &State) -> (f64, f64) {
    let sup = state.field.sup_norm();
    let a = state.field.mean() + 2.0 * state.height;
    (sup, abs(a) + sqrt(a * a + state.field.mean_square()))
}

/// Maximiser of the pairing with `state` over `s_{D∞} ≤ 1` when the
/// quadratic term alone is the gauge:
/// `φ = 4μ²/(μ² + 4π²⟨F²⟩)·sign(⟨F⟩+2f)` and `Φ = (π/μ)|φ|F + φ/2` with
/// `μ` the quadratic term. `None` when that term vanishes.
pub fn quadratic_dual(state: &State) -> Option<Dual> {
    let (_, quad) = gauge_terms(state);
    if !(quad > 0.0) {
        return None;
    }
    let mu = TWO_PI * quad;
    let a = state.field.mean() + 2.0 * state.height;
    let drift = 4.0 * mu * mu / (mu * mu + 4.0 * PI * PI * state.field.mean_square()) * sign(a);
    let field = state.field.map(|v| PI / mu * abs(drift) * v + 0.5 * drift);
    Some(Dual::new(field, drift))
}

/// Minkowski gauge of the limit set `D∞`.
///
/// On the quadratic branch the optimal dual is [`quadratic_dual`]. A tie
/// between the two branches is reported as [`GaugeBranch::SupNorm`] without a
/// dual.
pub fn gauge_dinfty(state: &State) -> GaugeResult {
    if state.is_zero() {
        return GaugeResult {
            mu: 0.0,
            branch: GaugeBranch::SupNorm,
            dual: None,
        };
    }
    let (sup, quad) = gauge_terms(state);
    if quad > sup {
        GaugeResult {
            mu: TWO_PI * quad,
            branch: GaugeBranch::Quadratic,
            dual: quadratic_dual(state),
        }
    } else {
        GaugeResult {
            mu: TWO_PI * sup,
            branch: GaugeBranch::SupNorm,
            dual: None,
        }
    }
}
