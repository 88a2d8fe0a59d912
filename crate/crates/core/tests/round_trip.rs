//! Inverse solvers against forward simulation on random ground truths.

use proptest::prelude::*;
use trajectory_oracle::geom::{circle_line_intersections, DirectedLine};
use trajectory_oracle::reconstruct::{
    same_line_within, same_trajectory_within, same_turn_within, solve_bonus, solve_case1,
    solve_case2, solve_case3, solve_case4, BonusInput, ACCEPT_RESIDUAL,
};
use trajectory_oracle::{
    Circle, LinearTrajectory, Point2, Radar, TimedWaypoint, Tolerance, TurnTrajectory, UnitVec2,
};

const TOL: Tolerance = Tolerance::DEFAULT;
const MATCH: f64 = 1e-6;

/// Largest candidate counts seen over 100,000 random round trips.
const CASE3_MAX: usize = 2;
const CASE4_MAX: usize = 4;
const BONUS_MAX: usize = 2;

fn coord() -> impl Strategy<Value = f64> {
    -100.0..100.0f64
}

fn point() -> impl Strategy<Value = Point2> {
    (coord(), coord()).prop_map(|(x, y)| Point2::new(x, y))
}

fn heading() -> impl Strategy<Value = UnitVec2> {
    (0.0..std::f64::consts::TAU).prop_map(UnitVec2::from_angle)
}

/// A radar and a route crossing it with closest distance below 0.9 radius.
fn crossing() -> impl Strategy<Value = (Radar, LinearTrajectory)> {
    (point(), 1.0..30.0f64, heading(), -0.9..0.9f64, 0.5..10.0f64, -50.0..50.0f64).prop_map(
        |(center, radius, dir, offset, speed, t0)| {
            let foot = center + (offset * radius) * dir.perp();
            let route = LinearTrajectory::new(foot - radius * dir, dir, speed, t0).unwrap();
            (Radar::new("r1", center, radius), route)
        },
    )
}

/// A second radar of the given radius entered by `route` at time `t`.
fn radar_entered_at(route: &LinearTrajectory, t: f64, radius: f64, tilt: f64) -> Radar {
    let at = route.position_at(t);
    Radar::new("r2", at + radius * route.direction.rotated(tilt), radius)
}

fn times(route: &LinearTrajectory, r: &Radar) -> (f64, f64) {
    route.entry_exit_times(&r.threat, TOL).expect("route crosses radar")
}

fn reflect(l: &DirectedLine, axis: &DirectedLine) -> DirectedLine {
    let mirror = |p: Point2| {
        let foot = axis.foot_of(p);
        foot + (foot - p)
    };
    DirectedLine::through(mirror(l.origin), mirror(l.point_at(1.0))).unwrap()
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(256))]

    #[test]
    fn case1_contains_truth_and_is_symmetric(
        anchor in point(), dir in heading(), c1 in point(), c2 in point(),
    ) {
        let line = DirectedLine::new(anchor, dir);
        let (d1, d2) = (line.signed_distance(c1).abs(), line.signed_distance(c2).abs());
        prop_assume!(c1.distance(c2) >= 1.0 && d1 >= 1e-3 && d2 >= 1e-3);
        let set = solve_case1(c1, d1, c2, d2, TOL).unwrap();
        prop_assert!(set.len() <= 4);
        prop_assert!(set.routes().any(|l| same_line_within(l, &line, MATCH)));
        let axis = DirectedLine::through(c1, c2).unwrap();
        for l in set.routes() {
            prop_assert!((l.signed_distance(c1).abs() - d1).abs() < ACCEPT_RESIDUAL);
            prop_assert!((l.signed_distance(c2).abs() - d2).abs() < ACCEPT_RESIDUAL);
            let m = reflect(l, &axis);
            prop_assert!(set.routes().any(|k| same_line_within(k, &m, MATCH)));
        }
    }

    #[test]
    fn case2_contains_truth(
        (r1, route) in crossing(), gap in 0.1..60.0f64, radius in 1.0..30.0f64, tilt in -1.3..1.3f64,
    ) {
        let (t_in1, t_out1) = times(&route, &r1);
        let t_in2 = t_in1 + gap / route.speed;
        let r2 = radar_entered_at(&route, t_in2, radius, tilt);
        prop_assume!(r1.threat.center.distance(r2.threat.center) >= 1e-3);
        let d1 = route.closest_approach(r1.threat.center).0;
        let set = solve_case2(&r1, d1, t_in1, t_out1, &r2, t_in2, TOL).unwrap();
        prop_assert!(set.len() <= 4);
        prop_assert!(set.routes().any(|c| same_trajectory_within(c, &route, MATCH)));
        for c in set.routes() {
            let (a, b) = times(c, &r1);
            let (e, _) = times(c, &r2);
            prop_assert!((a - t_in1).abs() < ACCEPT_RESIDUAL);
            prop_assert!((b - t_out1).abs() < ACCEPT_RESIDUAL);
            prop_assert!((e - t_in2).abs() < ACCEPT_RESIDUAL);
            prop_assert!((c.closest_approach(r1.threat.center).0 - d1).abs() < ACCEPT_RESIDUAL);
        }
    }

    #[test]
    fn case3_obeys_ratio_law(
        (radar, route) in crossing(), frac in 0.05..3.0f64, interior in any::<bool>(), before in any::<bool>(),
    ) {
        let (t_in, t_out) = times(&route, &radar);
        let span = t_out - t_in;
        let t_wp = if interior {
            t_in + frac.min(0.95) * span
        } else if before {
            t_in - frac * span
        } else {
            t_out + frac * span
        };
        let waypoint = TimedWaypoint { position: route.position_at(t_wp), time: t_wp };
        let set = solve_case3(&radar, t_in, t_out, &waypoint, TOL).unwrap();
        prop_assert!(set.len() <= CASE3_MAX);
        prop_assert!(set.routes().any(|c| same_trajectory_within(c, &route, MATCH)));
        let want = (t_out - t_wp).abs() / (t_wp - t_in).abs();
        for c in set.routes() {
            let hits = circle_line_intersections(&radar.threat, &c.line(), TOL);
            prop_assert_eq!(hits.len(), 2);
            let a = waypoint.position;
            let got = a.distance(hits[1]) / a.distance(hits[0]);
            prop_assert!((got - want).abs() <= 1e-9 * want, "AY/AX {} vs {}", got, want);
            let (e, x) = times(c, &radar);
            prop_assert!((e - t_in).abs() < ACCEPT_RESIDUAL && (x - t_out).abs() < ACCEPT_RESIDUAL);
            prop_assert!(c.position_at(t_wp).distance(a) < ACCEPT_RESIDUAL);
        }
    }

    #[test]
    fn case4_contains_truth(
        (r1, route) in crossing(), gap in 0.0..40.0f64, radius in 1.0..30.0f64, tilt in -1.3..1.3f64,
    ) {
        let (t_a, t_b) = times(&route, &r1);
        let r2 = radar_entered_at(&route, t_b + gap / route.speed, radius, tilt);
        let (t_c, t_d) = times(&route, &r2);
        let set = solve_case4(&r1, t_a, t_b, &r2, t_c, t_d, TOL).unwrap();
        prop_assert!(set.len() <= CASE4_MAX);
        prop_assert!(set.routes().any(|c| same_trajectory_within(c, &route, MATCH)));
        for c in set.routes() {
            let (a, b) = times(c, &r1);
            let (cc, d) = times(c, &r2);
            for (sim, obs) in [(a, t_a), (b, t_b), (cc, t_c), (d, t_d)] {
                prop_assert!((sim - obs).abs() < ACCEPT_RESIDUAL);
            }
        }
    }

    #[test]
    fn case4_time_scale_leaves_lines(
        (r1, route) in crossing(), gap in 0.0..40.0f64, radius in 1.0..30.0f64, tilt in -1.3..1.3f64,
        lambda in 0.1..10.0f64,
    ) {
        let (t_a, t_b) = times(&route, &r1);
        let r2 = radar_entered_at(&route, t_b + gap / route.speed, radius, tilt);
        let (t_c, t_d) = times(&route, &r2);
        let base = solve_case4(&r1, t_a, t_b, &r2, t_c, t_d, TOL).unwrap();
        let scaled = solve_case4(&r1, lambda * t_a, lambda * t_b, &r2, lambda * t_c, lambda * t_d, TOL).unwrap();
        prop_assert_eq!(base.len(), scaled.len());
        let eps = TOL.eps(r1.threat.scale().max(r2.threat.scale()));
        for c in base.routes() {
            let m = scaled.routes().find(|s| same_line_within(&s.line(), &c.line(), eps));
            prop_assert!(m.is_some(), "line {:?} lost under scaling", c.line());
            let m = m.unwrap();
            prop_assert!((m.speed * lambda - c.speed).abs() <= 1e-9 * c.speed);
        }
    }

    #[test]
    fn bonus_contains_truth(
        start in point(), leg1 in heading(), turn_distance in 1.0..50.0f64,
        turn in 0.1..2.8f64, left in any::<bool>(), speed in 0.5..10.0f64, t0 in -50.0..50.0f64,
        radius in 1.0..20.0f64, ahead in 0.5..50.0f64, tilt in -1.3..1.3f64,
    ) {
        let leg2 = leg1.rotated(if left { turn } else { -turn });
        let route = TurnTrajectory::from_turn_distance(start, leg1, turn_distance, leg2, speed, t0).unwrap();
        let entry = route.turn_point + ahead * leg2;
        let threat = Circle::new(entry + radius * leg2.rotated(tilt), radius);
        let (t_in, t_out) = route.entry_exit_times(&threat, TOL).unwrap();
        prop_assume!(t_in > route.turn_time() + 1e-6);
        let input = BonusInput {
            start,
            leg1_direction: leg1,
            total_distance_to_entry: speed * (t_in - t0),
            inner_chord: speed * (t_out - t_in),
            threat,
        };
        let set = solve_bonus(&input, speed, t0, TOL).unwrap();
        prop_assert!(set.len() <= BONUS_MAX);
        prop_assert!(set.routes().any(|c| same_turn_within(c, &route, MATCH)));
        for c in set.routes() {
            let (a, b) = c.entry_exit_times(&threat, TOL).unwrap();
            prop_assert!(a >= c.turn_time());
            prop_assert!((speed * (a - t0) - input.total_distance_to_entry).abs() < ACCEPT_RESIDUAL);
            prop_assert!((speed * (b - a) - input.inner_chord).abs() < ACCEPT_RESIDUAL);
        }
    }
}
