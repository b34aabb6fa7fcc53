//! The asymptotic Bellman function `𝒯 = max(T0, T1)`.

use alloc::format;

use crate::error::{domain, Error, Result};
use crate::field::State;
use crate::geometry::gauge_dinfty;
use crate::num::{abs, sqrt, PI, TWO_PI};

/// Relative tolerance used to classify ties and a vanishing `2f + 𝒯⟨F⟩`.
pub const TIE_TOL: f64 = 1e-12;

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Sign {
    Plus,
    Minus,
}

impl Sign {
    pub fn of(x: f64) -> Sign {
        if x >= 0.0 {
            Sign::Plus
        } else {
            Sign::Minus
        }
    }

    pub fn value(self) -> f64 {
        match self {
            Sign::Plus => 1.0,
            Sign::Minus => -1.0,
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum BellmanBranch {
    T0,
    T1,
    Tie,
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct BellmanBreakdown {
    pub t0: f64,
    pub t1: f64,
    pub value: f64,
    pub branch: BellmanBranch,
    /// `sign(2f + 𝒯⟨F⟩)`, `None` when the argument vanishes.
    pub sigma: Option<Sign>,
}

impl BellmanBreakdown {
    fn zero() -> Self {
        BellmanBreakdown {
            t0: 0.0,
            t1: 0.0,
            value: 0.0,
            branch: BellmanBranch::Tie,
            sigma: None,
        }
    }
}

/// `T0 = 2π‖F‖∞`.
pub fn t_zero(state: &State) -> f64 {
    TWO_PI * state.field.sup_norm()
}

/// Positive root of `2|2f + T⟨F⟩| = T²/2π − 2π⟨F²⟩`.
///
/// Each sign branch `σ` of the absolute value is an ordinary quadratic with
/// largest root `2π(σ⟨F⟩ + √(⟨F⟩² + ⟨F²⟩ + 2σf/π))`. The left side minus the
/// right side is the minimum over `σ` of the two branch quadratics, so the
/// positive root is the larger of the two branch roots.
pub fn t_one(state: &State) -> Result<f64> {
    if state.is_zero() {
        return Err(domain("T1 is undefined for the zero state"));
    }
    let m = state.field.mean();
    let m2 = state.field.mean_square();
    let f = state.height;
    let mut best = f64::NEG_INFINITY;
    for sigma in [1.0, -1.0] {
        let d = m2 + 2.0 * sigma * f / PI;
        let disc = m * m + d;
        if disc < 0.0 {
            continue;
        }
        let root = sqrt(disc);
        let sm = sigma * m;
        let r = if sm >= 0.0 {
            sm + root
        } else {
            d / (abs(m) + root)
        };
        best = best.max(TWO_PI * r);
    }
    if best > 0.0 {
        Ok(best)
    } else {
        Err(domain(format!(
            "no positive root of the T1 equation (got {best})"
        )))
    }
}

/// Residual `2|2f + T⟨F⟩| − (T²/2π − 2π⟨F²⟩)` of the T1 equation.
pub fn t_one_residual(state: &State, t: f64) -> f64 {
    let lhs = 2.0 * abs(2.0 * state.height + t * state.field.mean());
    let rhs = t * t / TWO_PI - TWO_PI * state.field.mean_square();
    lhs - rhs
}

pub fn bellman(state: &State) -> BellmanBreakdown {
    if state.is_zero() {
        return BellmanBreakdown::zero();
    }
    let t0 = t_zero(state);
    let t1 = t_one(state).unwrap_or(0.0);
    let value = t0.max(t1);
    let branch = if abs(t0 - t1) <= TIE_TOL * value {
        BellmanBranch::Tie
    } else if t0 > t1 {
        BellmanBranch::T0
    } else {
        BellmanBranch::T1
    };
    let m = state.field.mean();
    let arg = 2.0 * state.height + value * m;
    let scale = 2.0 * abs(state.height) + value * abs(m);
    let sigma = if abs(arg) <= TIE_TOL * scale {
        None
    } else {
        Some(Sign::of(arg))
    };
    BellmanBreakdown {
        t0,
        t1,
        value,
        branch,
        sigma,
    }
}

/// Solve `μ_{D∞}(C(T)S) = 1` for `T` by geometric bisection, independently of
/// the closed-form `T1`.
pub fn gauge_root_crosscheck(state: &State) -> Result<f64> {
    if state.is_zero() {
        return Err(domain("gauge root is undefined for the zero state"));
    }
    let guess = bellman(state).value;
    let gauge_at = |t: f64| -> Result<f64> { Ok(gauge_dinfty(&state.scale(t)?).mu) };
    let (mut lo, mut hi) = (1e-6 * guess, 1e6 * guess);
    if gauge_at(lo)? < 1.0 || gauge_at(hi)? > 1.0 {
        return Err(Error::Bracketing(format!(
            "gauge of C(T)S does not cross 1 on [{lo}, {hi}]"
        )));
    }
    for _ in 0..200 {
        let mid = sqrt(lo * hi);
        if !(mid > lo && mid < hi) {
            break;
        }
        if gauge_at(mid)? > 1.0 {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    Ok(0.5 * (lo + hi))
}

/// The window `(𝒯(1 − C r^{−1/2}), 𝒯(1 + C r^{−1}))` with
/// `r = ‖F‖∞ + |f|^{1/2}`; the lower end is clamped at 0.
pub fn reach_time_window(state: &State, c: f64) -> (f64, f64) {
    let value = bellman(state).value;
    let r = state.field.sup_norm() + sqrt(abs(state.height));
    if r == 0.0 {
        return (0.0, 0.0);
    }
    let lower = value * (1.0 - c / sqrt(r));
    (lower.max(0.0), value * (1.0 + c / r))
}
