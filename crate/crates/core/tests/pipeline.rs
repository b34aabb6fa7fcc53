use std::f64::consts::{PI, SQRT_2};

use proptest::prelude::*;
use stringreach_core::certify::{certify, default_duals, lower_bound};
use stringreach_core::dynamics::extremal_control;
use stringreach_core::geometry::support_dt;
use stringreach_core::synthesis::{default_max_periods, stabilize, steer_from_zero};
use stringreach_core::{bellman, gauge_dinfty, simulate, ControlSchedule, Dual, Field, State};

const TWO_PI: f64 = 2.0 * PI;

fn run(start: &State, c: &ControlSchedule) -> State {
    simulate(start, c).unwrap().into_final()
}

fn close(a: &State, b: &State, tol: f64) -> bool {
    a.field.l1_distance(&b.field) <= tol
        && (a.height - b.height).abs() <= tol * b.height.abs().max(1.0)
}

fn schedule() -> impl Strategy<Value = ControlSchedule> {
    (1usize..8, 0.5f64..15.0).prop_flat_map(|(n, t)| {
        (
            proptest::collection::vec(0.0..t, n),
            proptest::collection::vec(-1.0f64..=1.0, n),
        )
            .prop_map(move |(mut ts, us)| {
                ts.sort_by(f64::total_cmp);
                ts[0] = 0.0;
                ts.dedup();
                let us = us[..ts.len()].to_vec();
                ControlSchedule::new(t, ts, us).unwrap()
            })
    })
}

#[test]
fn unit_field_anchor() {
    let s = State::new(Field::constant(1.0), 0.0);
    let want = TWO_PI * (1.0 + SQRT_2);
    assert!((bellman(&s).value - want).abs() < 1e-12 * want);
    assert!((gauge_dinfty(&s).mu - want).abs() < 1e-12 * want);
}

#[test]
fn equal_time_family_has_affine_heights() {
    let mut fields = Vec::new();
    for a in [0.5, 0.625, 0.75, 0.875, 1.0] {
        let c =
            ControlSchedule::new(3.0 * PI, vec![0.0, PI, TWO_PI], vec![a, 0.5, 1.5 - a]).unwrap();
        let end = run(&State::zero(), &c);
        assert!(
            (end.height - (-PI * a - 0.75 * PI)).abs() < 1e-12,
            "{a} {}",
            end.height
        );
        fields.push(end.field);
    }
    for f in &fields[1..] {
        assert!(f.l1_distance(&fields[0]) < 1e-12);
    }
    let end = State::new(fields[0].clone(), -1.5 * PI);
    let (lower, _) = lower_bound(&end, &default_duals(&end)).unwrap();
    assert!(
        lower <= 3.0 * PI && lower > 3.0 * PI * (1.0 - 1e-9),
        "{lower}"
    );
}

#[test]
fn extremal_controls_attain_the_support() {
    let d = Dual::new(
        Field::new(vec![0.0, 2.0, 4.0], vec![1.0, -0.5, 0.25]).unwrap(),
        0.3,
    );
    for t in [PI, TWO_PI, 10.0 * PI] {
        let end = run(&State::zero(), &extremal_control(&d, t).unwrap());
        let s = support_dt(&d, t);
        assert!((end.pair(&d) - s).abs() <= 1e-9 * s);
    }
}

#[test]
fn stabilize_then_steer_back() {
    let target = State::new(Field::new(vec![0.0, 3.0], vec![1.0, -0.4]).unwrap(), 0.7).dilate(25.0);
    let down = stabilize(&target, 1.0, default_max_periods(&target)).unwrap();
    assert!(!down.exhausted && down.residual_state.norm() <= 1.0);
    assert!(close(
        &run(&target, &down.schedule),
        &down.residual_state,
        1e-9
    ));

    let up = steer_from_zero(&target, 1.0, default_max_periods(&target)).unwrap();
    assert!(up.residual_state.norm() <= 1.0);
    assert!(close(&run(&up.residual_state, &up.schedule), &target, 1e-9));
}

#[test]
fn certified_interval_for_a_large_unit_state() {
    let s = State::new(Field::constant(1.0), 0.0).dilate(100.0);
    let c = certify(&s, 1.0).unwrap();
    assert!(!c.exhausted);
    assert!(c.lower <= c.calt * (1.0 + 1e-9));
    assert!(c.lower <= c.upper && c.ratio <= 1.3, "{c:?}");
    assert!(close(&run(&c.start_residual, &c.schedule), &s, 1e-8));
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn time_reversal(c in schedule(), vals in proptest::collection::vec(-2.0f64..2.0, 3), f in -3.0f64..3.0) {
        let a = State::new(Field::new(vec![0.0, 2.0, 5.0], vals).unwrap(), f);
        let b = run(&a, &c);
        let back = run(&b.reflect_negate(), &c.reversed());
        prop_assert!(close(&back, &a.reflect_negate(), 1e-9));
    }

    #[test]
    fn reached_states_are_never_certified_late(c in schedule()) {
        let end = run(&State::zero(), &c);
        prop_assume!(!end.is_zero());
        let (lower, _) = lower_bound(&end, &default_duals(&end)).unwrap();
        prop_assert!(lower <= c.horizon() * (1.0 + 1e-9), "{lower} {}", c.horizon());
    }
}
