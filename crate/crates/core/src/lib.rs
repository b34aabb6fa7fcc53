//! Minimum-time reachability and asymptotically optimal control of a closed
//! string driven by a bounded point force.
//!
//! The string is handled in reduced coordinates `(F, f)` where `F = h_x − h_t`
//! is a 2π-periodic step function and `f` is the mean displacement. The crate
//! is `no_std` and only needs `alloc`.

#![no_std]
// `!(x > 0.0)` is used on purpose so that NaN fails the check.
#![allow(clippy::neg_cmp_op_on_partial_ord)]

extern crate alloc;

pub mod bellman;
pub mod certify;
pub mod dynamics;
mod error;
pub mod field;
pub mod geometry;
pub mod num;
pub mod synthesis;

#[cfg(test)]
extern crate std;
#[cfg(test)]
mod testutil;

pub use bellman::{bellman, t_one, t_zero, BellmanBranch, BellmanBreakdown, Sign};
pub use dynamics::{simulate, ControlSchedule, Trajectory};
pub use error::{Error, Result};
pub use field::{Dual, Field, State, WaveState};
pub use geometry::{gauge_dinfty, GaugeBranch, GaugeResult};
