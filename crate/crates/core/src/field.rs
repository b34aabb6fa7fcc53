//! Piecewise-constant fields on the circle, reduced states, dual vectors and
//! the wave-equation view of a state.
//!
//! A [`Field`] is a 2π-periodic step function stored by its breakpoints
//! `x_0 < x_1 < … < x_{n-1}` in `[0, 2π)` and one value per arc
//! `[x_i, x_{i+1})`; the last arc wraps around to `x_0 + 2π`. Every
//! constructor returns the canonical form: arcs shorter than [`ARC_TOL`] are
//! absorbed by their predecessor and neighbouring arcs whose values differ by
//! at most [`MERGE_TOL`] are merged. A constant field always has the single
//! breakpoint `0`.

use alloc::vec;
use alloc::vec::Vec;

use crate::error::{domain, Result};
use crate::num::{abs, sign, sqrt, wrap_angle, TWO_PI};

/// Adjacent arcs whose values differ by at most this much are merged.
pub const MERGE_TOL: f64 = 1e-13;
/// Arcs shorter than this are dropped.
pub const ARC_TOL: f64 = 1e-13;

/// A 2π-periodic piecewise-constant real function.
#[derive(Clone, Debug, PartialEq)]
pub struct Field {
    breakpoints: Vec<f64>,
    values: Vec<f64>,
}

/// One arc `[start, end)` of a field. `end` may exceed 2π for the wrapping arc.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct Arc {
    pub start: f64,
    pub end: f64,
    pub value: f64,
}

impl Arc {
    #[inline]
    pub fn len(&self) -> f64 {
        self.end - self.start
    }
}

impl Field {
    /// Validated constructor. Breakpoints must be finite, strictly increasing
    /// and lie in `[0, 2π)`; there must be one value per breakpoint.
    pub fn new(breakpoints: Vec<f64>, values: Vec<f64>) -> Result<Self> {
        if breakpoints.is_empty() {
            return Err(domain("field needs at least one breakpoint"));
        }
        if breakpoints.len() != values.len() {
            return Err(domain("field needs exactly one value per breakpoint"));
        }
        for (i, &x) in breakpoints.iter().enumerate() {
            if !x.is_finite() || !(0.0..TWO_PI).contains(&x) {
                return Err(domain("field breakpoints must lie in [0, 2pi)"));
            }
            if i > 0 && x <= breakpoints[i - 1] {
                return Err(domain("field breakpoints must be strictly increasing"));
            }
        }
        if values.iter().any(|v| !v.is_finite()) {
            return Err(domain("field values must be finite"));
        }
        Ok(Self::canonical(
            breakpoints.into_iter().zip(values).collect(),
        ))
    }

    pub fn constant(value: f64) -> Self {
        Self {
            breakpoints: vec![0.0],
            values: vec![value],
        }
    }

    pub fn zero() -> Self {
        Self::constant(0.0)
    }

    /// `value` on the arc `[start, end)` (taken mod 2π), zero elsewhere.
    pub fn indicator(start: f64, end: f64, value: f64) -> Self {
        if end - start >= TWO_PI {
            return Self::constant(value);
        }
        if end <= start {
            return Self::zero();
        }
        Self::from_arcs([(start, value), (end, 0.0)])
    }

    /// Builds a field from arc starts (any real numbers, reduced mod 2π) and
    /// the values carried from each start up to the next one. When two starts
    /// coincide the later one in the input wins.
    pub fn from_arcs(arcs: impl IntoIterator<Item = (f64, f64)>) -> Self {
        let mut arcs: Vec<(f64, f64)> = arcs.into_iter().map(|(x, v)| (wrap_angle(x), v)).collect();
        arcs.sort_by(|a, b| a.0.total_cmp(&b.0));
        Self::canonical(arcs)
    }

    /// Canonical form of arcs sorted by start, all starts in `[0, 2π)`.
    fn canonical(arcs: Vec<(f64, f64)>) -> Self {
        let n = arcs.len();
        if n == 0 {
            return Self::zero();
        }
        let mut kept: Vec<(f64, f64)> = Vec::with_capacity(n);
        for i in 0..n {
            let next = if i + 1 < n {
                arcs[i + 1].0
            } else {
                arcs[0].0 + TWO_PI
            };
            if next - arcs[i].0 >= ARC_TOL {
                kept.push(arcs[i]);
            }
        }
        if kept.is_empty() {
            kept.push(arcs[n - 1]);
        }

        let mut merged: Vec<(f64, f64)> = Vec::with_capacity(kept.len());
        for (x, v) in kept {
            match merged.last() {
                Some(&(_, prev)) if abs(v - prev) <= MERGE_TOL => {}
                _ => merged.push((x, v)),
            }
        }
        while merged.len() > 1 && abs(merged[0].1 - merged[merged.len() - 1].1) <= MERGE_TOL {
            merged.remove(0);
        }
        if merged.len() == 1 {
            return Self::constant(merged[0].1);
        }
        let (breakpoints, values) = merged.into_iter().unzip();
        Self {
            breakpoints,
            values,
        }
    }

    pub fn breakpoints(&self) -> &[f64] {
        &self.breakpoints
    }

    pub fn values(&self) -> &[f64] {
        &self.values
    }

    /// Number of arcs.
    pub fn len(&self) -> usize {
        self.values.len()
    }

    pub fn is_empty(&self) -> bool {
        false
    }

    pub fn is_constant(&self) -> bool {
        self.values.len() == 1
    }

    pub fn is_zero(&self) -> bool {
        self.is_constant() && self.values[0] == 0.0
    }

    /// Arcs in breakpoint order; the last one ends at `x_0 + 2π`.
    pub fn arcs(&self) -> impl Iterator<Item = Arc> + '_ {
        let n = self.len();
        (0..n).map(move |i| Arc {
            start: self.breakpoints[i],
            end: if i + 1 < n {
                self.breakpoints[i + 1]
            } else {
                self.breakpoints[0] + TWO_PI
            },
            value: self.values[i],
        })
    }

    /// The field cut into pieces `(a, b, value)` that tile `[0, 2π)` in order.
    pub fn pieces(&self) -> Vec<(f64, f64, f64)> {
        let n = self.len();
        let last = self.values[n - 1];
        let mut out = Vec::with_capacity(n + 1);
        if self.breakpoints[0] > 0.0 {
            out.push((0.0, self.breakpoints[0], last));
        }
        for i in 0..n {
            let end = if i + 1 < n {
                self.breakpoints[i + 1]
            } else {
                TWO_PI
            };
            out.push((self.breakpoints[i], end, self.values[i]));
        }
        out
    }

    /// Pieces of the periodic extension tiling `[0, horizon]` in order.
    pub fn periodic_pieces(&self, horizon: f64) -> Vec<(f64, f64, f64)> {
        let base = self.pieces();
        let mut out = Vec::new();
        let mut k = 0usize;
        loop {
            let offset = k as f64 * TWO_PI;
            if offset >= horizon {
                break;
            }
            for &(a, b, v) in &base {
                let (s0, s1) = (a + offset, (b + offset).min(horizon));
                if s1 > s0 {
                    out.push((s0, s1, v));
                }
                if b + offset >= horizon {
                    break;
                }
            }
            k += 1;
        }
        out
    }

    /// Value on the arc containing `x` (taken mod 2π).
    pub fn value_at(&self, x: f64) -> f64 {
        let x = wrap_angle(x);
        let idx = self.breakpoints.partition_point(|&b| b <= x);
        if idx == 0 {
            self.values[self.len() - 1]
        } else {
            self.values[idx - 1]
        }
    }

    /// Mean value `(1/2π)∫F`.
    pub fn mean(&self) -> f64 {
        self.arcs().map(|a| a.value * a.len()).sum::<f64>() / TWO_PI
    }

    /// Mean of `F²`.
    pub fn mean_square(&self) -> f64 {
        self.arcs()
            .map(|a| a.value * a.value * a.len())
            .sum::<f64>()
            / TWO_PI
    }

    /// Essential supremum of `|F|`.
    pub fn sup_norm(&self) -> f64 {
        self.values.iter().fold(0.0, |m, &v| m.max(abs(v)))
    }

    /// `∫|F|` over one period.
    pub fn l1_norm(&self) -> f64 {
        self.arcs().map(|a| abs(a.value) * a.len()).sum()
    }

    /// Common refinement of two fields: `(a, b, self, other)` tiling `[0, 2π)`.
    fn overlay(&self, other: &Field) -> Vec<(f64, f64, f64, f64)> {
        let (p, q) = (self.pieces(), other.pieces());
        let mut out = Vec::with_capacity(p.len() + q.len());
        let (mut i, mut j, mut x) = (0, 0, 0.0);
        while i < p.len() && j < q.len() {
            let end = p[i].1.min(q[j].1);
            if end > x {
                out.push((x, end, p[i].2, q[j].2));
                x = end;
            }
            if p[i].1 <= end {
                i += 1;
            }
            if q[j].1 <= end {
                j += 1;
            }
        }
        out
    }

    /// Pointwise combination on the common refinement.
    pub fn zip_with(&self, other: &Field, op: impl Fn(f64, f64) -> f64) -> Field {
        Self::canonical(
            self.overlay(other)
                .into_iter()
                .map(|(a, _, u, v)| (a, op(u, v)))
                .collect(),
        )
    }

    pub fn map(&self, op: impl Fn(f64) -> f64) -> Field {
        Self::canonical(
            self.breakpoints
                .iter()
                .zip(&self.values)
                .map(|(&x, &v)| (x, op(v)))
                .collect(),
        )
    }

    /// `∫₀^{2π} F·G dx`, exact on the common refinement.
    pub fn inner(&self, other: &Field) -> f64 {
        self.overlay(other)
            .into_iter()
            .map(|(a, b, u, v)| (b - a) * u * v)
            .sum()
    }

    /// `∫|F − G|`.
    pub fn l1_distance(&self, other: &Field) -> f64 {
        self.overlay(other)
            .into_iter()
            .map(|(a, b, u, v)| (b - a) * abs(u - v))
            .sum()
    }

    pub fn add(&self, other: &Field) -> Field {
        self.zip_with(other, |u, v| u + v)
    }

    pub fn add_constant(&self, c: f64) -> Field {
        self.map(|v| v + c)
    }

    pub fn scale(&self, k: f64) -> Field {
        self.map(|v| k * v)
    }

    pub fn neg(&self) -> Field {
        self.map(|v| -v)
    }

    /// `sign ∘ F` with `sign(0) = +1`.
    pub fn signum(&self) -> Field {
        self.map(sign)
    }

    /// `x ↦ F(x − shift)`: the profile transported by `shift` in the positive direction.
    pub fn rotate(&self, shift: f64) -> Field {
        Self::from_arcs(self.arcs().map(|a| (a.start + shift, a.value)))
    }

    /// `x ↦ F(−x)`. The arc `[a, b)` becomes `(−b, −a]`.
    pub fn reflect(&self) -> Field {
        Self::from_arcs(self.arcs().map(|a| (-a.end, a.value)))
    }
}

/// Reduced phase point `(F, f)`: `F = h_x − h_t` and `f` the mean of `h`.
#[derive(Clone, Debug, PartialEq)]
pub struct State {
    pub field: Field,
    /// Mean displacement `f = (1/2π)∫h`.
    pub height: f64,
}

impl State {
    pub fn new(field: Field, height: f64) -> Self {
        Self { field, height }
    }

    pub fn zero() -> Self {
        Self::new(Field::zero(), 0.0)
    }

    pub fn is_zero(&self) -> bool {
        self.field.is_zero() && self.height == 0.0
    }

    /// `max(‖F‖∞, |f|^{1/2})`, the size used for terminal balls.
    pub fn norm(&self) -> f64 {
        self.field.sup_norm().max(sqrt(abs(self.height)))
    }

    /// `⟨(F,f),(Φ,φ)⟩ = ∫F·Φ + 2π·f·φ`.
    pub fn pair(&self, dual: &Dual) -> f64 {
        self.field.inner(&dual.field) + TWO_PI * self.height * dual.drift
    }

    /// Time-reversal companion `(−F(−x), f)`.
    pub fn reflect_negate(&self) -> State {
        State::new(self.field.reflect().neg(), self.height)
    }

    /// Scaling operator `C(T)(F, f) = (F/T, f/T²)`.
    pub fn scale(&self, horizon: f64) -> Result<State> {
        if !(horizon > 0.0) || !horizon.is_finite() {
            return Err(domain("scaling horizon must be positive"));
        }
        Ok(State::new(
            self.field.scale(1.0 / horizon),
            self.height / (horizon * horizon),
        ))
    }

    /// `(λF, λ²f)`, the inverse of [`State::scale`] for `λ = T`.
    pub fn dilate(&self, lambda: f64) -> State {
        State::new(self.field.scale(lambda), self.height * lambda * lambda)
    }

    /// `a·self + b·other`.
    pub fn combine(&self, a: f64, other: &State, b: f64) -> State {
        State::new(
            self.field.zip_with(&other.field, |u, v| a * u + b * v),
            a * self.height + b * other.height,
        )
    }
}

/// Linear functional `(Φ, φ)` on states.
#[derive(Clone, Debug, PartialEq)]
pub struct Dual {
    pub field: Field,
    /// Scalar component `φ`; the adjoint trace is `Φ(s) − φ·s`.
    pub drift: f64,
}

impl Dual {
    pub fn new(field: Field, drift: f64) -> Self {
        Self { field, drift }
    }

    pub fn is_zero(&self) -> bool {
        self.field.is_zero() && self.drift == 0.0
    }

    /// Adjoint scaling `C*(T)(Φ, φ) = (Φ/T, φ/T²)`.
    pub fn scale_adjoint(&self, horizon: f64) -> Dual {
        Dual::new(
            self.field.scale(1.0 / horizon),
            self.drift / (horizon * horizon),
        )
    }

    /// `‖Φ‖_{L1} + 2π|φ|`.
    pub fn l1_norm(&self) -> f64 {
        self.field.l1_norm() + TWO_PI * abs(self.drift)
    }
}

/// Wave-equation view `(h, h_t)` of a state: `h` is continuous piecewise
/// linear through `nodes`, which run from `x = 0` to `x = 2π`.
#[derive(Clone, Debug, PartialEq)]
pub struct WaveState {
    pub nodes: Vec<(f64, f64)>,
    pub velocity: Field,
}

impl WaveState {
    pub fn validate(&self) -> Result<()> {
        let n = self.nodes.len();
        if n < 2 {
            return Err(domain("wave profile needs at least two nodes"));
        }
        if self.nodes[0].0 != 0.0 || self.nodes[n - 1].0 != TWO_PI {
            return Err(domain("wave profile must span [0, 2pi]"));
        }
        if self.nodes.windows(2).any(|w| w[1].0 <= w[0].0) {
            return Err(domain("wave nodes must be strictly increasing"));
        }
        let (h0, h1) = (self.nodes[0].1, self.nodes[n - 1].1);
        if abs(h0 - h1) > 1e-9 * (1.0 + abs(h0)) {
            return Err(domain("wave profile must be periodic"));
        }
        Ok(())
    }

    /// Mean of `h` (trapezoid rule, exact for piecewise-linear profiles).
    pub fn mean_height(&self) -> f64 {
        self.nodes
            .windows(2)
            .map(|w| 0.5 * (w[0].1 + w[1].1) * (w[1].0 - w[0].0))
            .sum::<f64>()
            / TWO_PI
    }

    /// Linear interpolation of `h` at `x` (taken mod 2π).
    pub fn height_at(&self, x: f64) -> f64 {
        let x = wrap_angle(x);
        let idx = self
            .nodes
            .partition_point(|n| n.0 <= x)
            .clamp(1, self.nodes.len() - 1);
        let ((x0, h0), (x1, h1)) = (self.nodes[idx - 1], self.nodes[idx]);
        h0 + (h1 - h0) * (x - x0) / (x1 - x0)
    }

    /// Arcwise slope `h_x`.
    pub fn slope(&self) -> Field {
        Field::from_arcs(
            self.nodes
                .windows(2)
                .map(|w| (w[0].0, (w[1].1 - w[0].1) / (w[1].0 - w[0].0))),
        )
    }
}

/// `(h, g) ↦ (F, f) = (h_x − g, ⟨h⟩)`.
pub fn state_from_wave(wave: &WaveState) -> Result<State> {
    wave.validate()?;
    Ok(State::new(
        wave.slope().zip_with(&wave.velocity, |hx, g| hx - g),
        wave.mean_height(),
    ))
}

/// Recovers `(h, h_t)` from `(F, f)` using the even/odd split
/// `h_t = −(F(x) + F(−x))/2`, `h_x = (F(x) − F(−x))/2`. The additive constant
/// of `h` is chosen so that `⟨h⟩ = f` holds exactly.
pub fn wave_from_state(state: &State) -> WaveState {
    let mirrored = state.field.reflect();
    let velocity = state.field.zip_with(&mirrored, |u, v| -0.5 * (u + v));
    let slope = state.field.zip_with(&mirrored, |u, v| 0.5 * (u - v));

    let pieces = slope.pieces();
    let mut nodes = Vec::with_capacity(pieces.len() + 1);
    let mut h = 0.0;
    nodes.push((0.0, h));
    for &(a, b, v) in &pieces {
        h += v * (b - a);
        nodes.push((b, h));
    }
    // ∫h_x over a period vanishes; pin the endpoint against rounding.
    let last = nodes.len() - 1;
    nodes[last].1 = nodes[0].1;

    let raw = WaveState { nodes, velocity };
    let shift = state.height - raw.mean_height();
    WaveState {
        nodes: raw.nodes.into_iter().map(|(x, h)| (x, h + shift)).collect(),
        velocity: raw.velocity,
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::num::PI;
    use crate::testutil::{field_strategy, midpoint_mean, random_field, rng};
    use proptest::prelude::*;

    fn two_level() -> Field {
        Field::new(vec![0.0, PI], vec![1.5, 0.5]).unwrap()
    }

    #[test]
    fn moments_of_simple_fields() {
        let c = Field::constant(2.0);
        assert_eq!(c.mean(), 2.0);
        assert_eq!(c.mean_square(), 4.0);
        assert_eq!(Field::constant(-2.0).sup_norm(), 2.0);
        assert_eq!(Field::zero().sup_norm(), 0.0);

        let f = two_level();
        assert!((f.mean() - 1.0).abs() < 1e-15);
        assert!((f.mean_square() - 1.25).abs() < 1e-15);
        assert_eq!(f.sup_norm(), 1.5);
    }

    #[test]
    fn moments_match_quadrature() {
        let mut r = rng(11);
        for _ in 0..20 {
            let f = random_field(&mut r, 12, 3.0);
            let m = midpoint_mean(|x| f.value_at(x), 100_000);
            let m2 = midpoint_mean(|x| f.value_at(x).powi(2), 100_000);
            // Midpoint quadrature on a step function errs by at most one cell per jump.
            let cell = TWO_PI / 100_000.0;
            let slack =
                2.0 * f.len() as f64 * cell * f.sup_norm().powi(2).max(f.sup_norm()) / TWO_PI;
            assert!((f.mean() - m).abs() <= slack + 1e-12);
            assert!((f.mean_square() - m2).abs() <= slack + 1e-12);
        }
    }

    #[test]
    fn canonical_form_merges_and_drops() {
        let f = Field::new(vec![0.0, 1.0, 2.0, 3.0], vec![1.0, 1.0 + 5e-14, 2.0, 1.0]).unwrap();
        assert_eq!(f.breakpoints(), &[2.0, 3.0]);
        assert_eq!(f.values(), &[2.0, 1.0]);

        let g = Field::new(vec![0.0, 1.0, 1.0 + 1e-15], vec![1.0, 5.0, 2.0]).unwrap();
        assert_eq!(g.len(), 2);
        assert_eq!(g.value_at(1.5), 2.0);

        let c = Field::new(vec![1.0, 4.0], vec![3.0, 3.0]).unwrap();
        assert_eq!(c, Field::constant(3.0));
    }

    #[test]
    fn validation_rejects_bad_input() {
        assert!(Field::new(vec![], vec![]).is_err());
        assert!(Field::new(vec![0.0, 1.0], vec![1.0]).is_err());
        assert!(Field::new(vec![1.0, 0.5], vec![1.0, 2.0]).is_err());
        assert!(Field::new(vec![0.0, TWO_PI], vec![1.0, 2.0]).is_err());
        assert!(Field::new(vec![-0.1], vec![1.0]).is_err());
        assert!(Field::new(vec![0.0], vec![f64::NAN]).is_err());
    }

    #[test]
    fn value_lookup_wraps() {
        let f = Field::new(vec![1.0, 4.0], vec![2.0, -1.0]).unwrap();
        assert_eq!(f.value_at(0.5), -1.0);
        assert_eq!(f.value_at(1.0), 2.0);
        assert_eq!(f.value_at(5.0), -1.0);
        assert_eq!(f.value_at(1.5 + TWO_PI), 2.0);
        let total: f64 = f.pieces().iter().map(|p| p.1 - p.0).sum();
        assert!((total - TWO_PI).abs() < 1e-15);
    }

    #[test]
    fn pairing_examples() {
        let one = State::new(Field::constant(1.0), 0.0);
        assert!((one.pair(&Dual::new(Field::constant(1.0), 0.0)) - TWO_PI).abs() < 1e-14);
        let lift = State::new(Field::zero(), 1.0);
        assert!((lift.pair(&Dual::new(Field::zero(), 1.0)) - TWO_PI).abs() < 1e-14);
        let s2 = core::f64::consts::SQRT_2;
        let d = Dual::new(Field::constant(1.0 + s2), 2.0 + s2);
        assert!((one.pair(&d) - TWO_PI * (1.0 + s2)).abs() < 1e-13);
    }

    #[test]
    fn reflect_negate_examples() {
        let s = State::new(Field::constant(0.7), 2.5);
        assert_eq!(s.reflect_negate(), State::new(Field::constant(-0.7), 2.5));
        let t = State::new(Field::new(vec![0.5, 2.0], vec![1.0, -3.0]).unwrap(), 1.0);
        let r = t.reflect_negate();
        // (−F(−x)) at x = 5.0: −F(2π − 5.0) = −F(1.283…) = −1.
        assert_eq!(r.field.value_at(5.0), -1.0);
        assert_eq!(r.field.value_at(3.0), 3.0);
    }

    #[test]
    fn scale_examples_and_errors() {
        let s = State::new(Field::constant(2.0), 4.0);
        assert_eq!(s.scale(2.0).unwrap(), State::new(Field::constant(1.0), 1.0));
        assert_eq!(s.scale(1.0).unwrap(), s);
        assert!(s.scale(0.0).is_err());
        assert!(s.scale(-1.0).is_err());
    }

    #[test]
    fn wave_examples() {
        let flat = wave_from_state(&State::new(Field::zero(), 3.0));
        assert!(flat.nodes.iter().all(|n| (n.1 - 3.0).abs() < 1e-15));
        assert!(flat.velocity.is_zero());

        // F odd about 0 gives a vanishing velocity.
        let odd = Field::new(vec![0.0, PI], vec![1.0, -1.0]).unwrap();
        let w = wave_from_state(&State::new(odd, 0.0));
        assert!(w.velocity.sup_norm() < 1e-15);

        let zero = WaveState {
            nodes: vec![(0.0, 0.0), (TWO_PI, 0.0)],
            velocity: Field::zero(),
        };
        assert!(state_from_wave(&zero).unwrap().is_zero());
        let lifted = WaveState {
            nodes: vec![(0.0, 2.0), (PI, 2.0), (TWO_PI, 2.0)],
            velocity: Field::zero(),
        };
        let s = state_from_wave(&lifted).unwrap();
        assert!(s.field.is_zero());
        assert!((s.height - 2.0).abs() < 1e-15);
    }

    #[test]
    fn wave_mean_matches_quadrature() {
        let mut r = rng(5);
        for _ in 0..20 {
            let s = State::new(
                random_field(&mut r, 10, 2.0),
                3.0 * (r.random::<f64>() - 0.5),
            );
            let w = wave_from_state(&s);
            assert!((w.mean_height() - s.height).abs() < 1e-12);
            let q = midpoint_mean(|x| w.height_at(x), 100_000);
            assert!((q - s.height).abs() < 1e-8);
        }
    }

    #[test]
    fn wave_profile_is_even() {
        let mut r = rng(6);
        let s = State::new(random_field(&mut r, 9, 1.0), 0.3);
        let w = wave_from_state(&s);
        for k in 1..50 {
            let x = 0.1237 * k as f64;
            assert!((w.height_at(x) - w.height_at(-x)).abs() < 1e-12);
            let (g1, g2) = (w.velocity.value_at(x), w.velocity.value_at(-x));
            assert!((g1 - g2).abs() < 1e-12);
        }
    }

    use rand::Rng;

    proptest! {
        #[test]
        fn wave_round_trip(f in field_strategy(10), h in -5.0f64..5.0) {
            let s = State::new(f, h);
            let back = state_from_wave(&wave_from_state(&s)).unwrap();
            prop_assert!(back.field.l1_distance(&s.field) < 1e-11);
            prop_assert!((back.height - s.height).abs() < 1e-12);
        }

        #[test]
        fn pairing_is_bilinear(
            f1 in field_strategy(8), f2 in field_strategy(8), g in field_strategy(8),
            h1 in -3.0f64..3.0, h2 in -3.0f64..3.0, p in -3.0f64..3.0,
            a in -2.0f64..2.0, b in -2.0f64..2.0,
        ) {
            let (s1, s2, d) = (State::new(f1, h1), State::new(f2, h2), Dual::new(g, p));
            let lhs = s1.combine(a, &s2, b).pair(&d);
            let rhs = a * s1.pair(&d) + b * s2.pair(&d);
            prop_assert!((lhs - rhs).abs() <= 1e-12 * (1.0 + lhs.abs()));
        }

        #[test]
        fn reflect_negate_properties(f in field_strategy(10), h in -5.0f64..5.0) {
            let s = State::new(f, h);
            let r = s.reflect_negate();
            prop_assert!(r.reflect_negate().field.l1_distance(&s.field) < 1e-12);
            prop_assert_eq!(r.height, s.height);
            prop_assert!((r.field.mean() + s.field.mean()).abs() < 1e-12);
            prop_assert!((r.field.mean_square() - s.field.mean_square()).abs() < 1e-12);
            prop_assert_eq!(r.field.sup_norm(), s.field.sup_norm());
        }

        #[test]
        fn scaling_laws(f in field_strategy(10), h in -5.0f64..5.0, t in 0.1f64..50.0, u in 0.1f64..50.0) {
            let s = State::new(f, h);
            let c = s.scale(t).unwrap();
            prop_assert!((c.field.mean() - s.field.mean() / t).abs() < 1e-12);
            prop_assert!((c.field.mean_square() - s.field.mean_square() / (t * t)).abs() < 1e-12);
            prop_assert!((c.field.sup_norm() - s.field.sup_norm() / t).abs() < 1e-12);
            prop_assert!((c.height - s.height / (t * t)).abs() < 1e-12);
            let twice = c.scale(u).unwrap();
            let once = s.scale(t * u).unwrap();
            prop_assert!(twice.field.l1_distance(&once.field) < 1e-12);
            prop_assert!((twice.height - once.height).abs() < 1e-12);
        }
    }
}
