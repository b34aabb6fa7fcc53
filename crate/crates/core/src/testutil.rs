//! Shared generators and oracles for unit tests.

use alloc::vec::Vec;

use proptest::prelude::*;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::field::{Dual, Field, State};
use crate::num::TWO_PI;

pub fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

/// Random field with up to `max_arcs` arcs and values in `[-amp, amp]`.
pub fn random_field(r: &mut impl Rng, max_arcs: usize, amp: f64) -> Field {
    let n = r.random_range(1..=max_arcs);
    let mut xs: Vec<f64> = (0..n).map(|_| r.random::<f64>() * TWO_PI).collect();
    xs.sort_by(f64::total_cmp);
    xs.dedup_by(|a, b| (*a - *b).abs() < 1e-6);
    let vals = xs
        .iter()
        .map(|_| amp * (2.0 * r.random::<f64>() - 1.0))
        .collect();
    Field::new(xs, vals).unwrap()
}

pub fn random_state(r: &mut impl Rng, max_arcs: usize, amp: f64, height: f64) -> State {
    State::new(
        random_field(r, max_arcs, amp),
        height * (2.0 * r.random::<f64>() - 1.0),
    )
}

pub fn random_dual(r: &mut impl Rng, max_arcs: usize) -> Dual {
    Dual::new(
        random_field(r, max_arcs, 2.0),
        2.0 * r.random::<f64>() - 1.0,
    )
}

/// Midpoint-rule mean over one period.
pub fn midpoint_mean(f: impl Fn(f64) -> f64, n: usize) -> f64 {
    let h = TWO_PI / n as f64;
    (0..n).map(|i| f((i as f64 + 0.5) * h)).sum::<f64>() / n as f64
}

pub fn field_strategy(max_arcs: usize) -> impl Strategy<Value = Field> {
    (1..=max_arcs)
        .prop_flat_map(|n| {
            (
                proptest::collection::vec(0.0..TWO_PI, n),
                proptest::collection::vec(-3.0f64..3.0, n),
            )
        })
        .prop_map(|(mut xs, vs)| {
            xs.sort_by(f64::total_cmp);
            xs.dedup_by(|a, b| (*a - *b).abs() < 1e-6);
            let vs = vs[..xs.len()].to_vec();
            Field::new(xs, vs).unwrap()
        })
}
