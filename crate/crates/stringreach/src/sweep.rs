//! Certified bounds along a sweep of dilations `(λF, λ²f)`.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use stringreach_core::certify::certify;
use stringreach_core::num::TWO_PI;
use stringreach_core::{Field, State};

use crate::io::real_table;
use crate::CliError;

/// Environment variable capping the worker threads of a sweep.
pub const THREADS_ENV: &str = "STRINGREACH_THREADS";

/// Largest arc count accepted for random base fields.
pub const MAX_RANDOM_ARCS: usize = 32;

#[derive(Clone, Debug, PartialEq)]
pub struct SweepRow {
    pub lambda: f64,
    pub lower: f64,
    pub upper: f64,
    pub calt: f64,
    pub exhausted: bool,
}

impl SweepRow {
    pub fn ratio(&self) -> f64 {
        self.upper / self.lower
    }
}

/// The default base state `F ≡ 1, f = 0`.
pub fn unit_base() -> State {
    State::new(Field::constant(1.0), 0.0)
}

/// A step field with `arcs` arcs at uniform positions and values uniform in
/// `[−1, 1]`, and `f` uniform in `[−1, 1]`.
pub fn random_base(seed: u64, arcs: usize) -> Result<State, CliError> {
    if arcs == 0 || arcs > MAX_RANDOM_ARCS {
        return Err(CliError::Domain(format!(
            "random base needs between 1 and {MAX_RANDOM_ARCS} arcs, got {arcs}"
        )));
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let starts: Vec<(f64, f64)> = (0..arcs)
        .map(|_| (rng.random::<f64>() * TWO_PI, rng.random_range(-1.0..=1.0)))
        .collect();
    let height = rng.random_range(-1.0..=1.0);
    Ok(State::new(Field::from_arcs(starts), height))
}

fn thread_cap() -> Option<usize> {
    std::env::var(THREADS_ENV)
        .ok()
        .and_then(|v| v.trim().parse::<usize>().ok())
        .filter(|&n| n > 0)
}

/// Certify `(λF, λ²f)` for every `λ` in `scales`; rows come back sorted by `λ`.
pub fn sweep(base: &State, scales: &[f64], radius: f64) -> Result<Vec<SweepRow>, CliError> {
    if base.is_zero() {
        return Err(CliError::Domain("sweep base state must be nonzero".into()));
    }
    if let Some(bad) = scales.iter().find(|l| !l.is_finite() || **l <= 0.0) {
        return Err(CliError::Domain(format!(
            "scales must be positive, got {bad}"
        )));
    }
    let run = || -> Result<Vec<SweepRow>, CliError> {
        scales
            .par_iter()
            .map(|&lambda| {
                let c = certify(&base.dilate(lambda), radius)?;
                Ok(SweepRow {
                    lambda,
                    lower: c.lower,
                    upper: c.upper,
                    calt: c.calt,
                    exhausted: c.exhausted,
                })
            })
            .collect()
    };
    let mut rows = match thread_cap() {
        Some(n) => rayon::ThreadPoolBuilder::new()
            .num_threads(n)
            .build()
            .map_err(|e| CliError::Io(format!("cannot start worker pool: {e}")))?
            .install(run)?,
        None => run()?,
    };
    rows.sort_by(|a, b| a.lambda.total_cmp(&b.lambda));
    Ok(rows)
}

pub fn sweep_csv(rows: &[SweepRow]) -> String {
    real_table(
        &[
            "lambda",
            "lower",
            "upper",
            "calT",
            "upper_over_lower",
            "lower_over_calT",
            "upper_over_calT",
        ],
        rows.iter().map(|r| {
            vec![
                r.lambda,
                r.lower,
                r.upper,
                r.calt,
                r.ratio(),
                r.lower / r.calt,
                r.upper / r.calt,
            ]
        }),
    )
}
