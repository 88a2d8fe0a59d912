//! Random scenarios that satisfy each case's preconditions.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use trajectory_oracle::scenario::ScenarioFile;
use trajectory_oracle::{
    CaseTag, InformationPolicy, LinearTrajectory, Point2, Radar, RadarPolicy, Route, Tolerance,
    TurnTrajectory, UnitVec2,
};

/// Coordinates are drawn from `[-EXTENT, EXTENT]`.
pub const EXTENT: f64 = 100.0;

fn point(rng: &mut impl Rng) -> Point2 {
    Point2::new(rng.random_range(-EXTENT..EXTENT), rng.random_range(-EXTENT..EXTENT))
}

fn heading(rng: &mut impl Rng) -> UnitVec2 {
    UnitVec2::from_angle(rng.random_range(0.0..std::f64::consts::TAU))
}

/// Center of a circle of radius `r` that the ray `(at, dir)` enters exactly
/// at `at`.
fn center_ahead(rng: &mut impl Rng, at: Point2, dir: UnitVec2, r: f64) -> Point2 {
    at + r * dir.rotated(rng.random_range(-1.3..1.3))
}

/// A linear route crossing `radar` at closest distance below 0.9 of its radius.
fn crossing_route(rng: &mut impl Rng, radar: &Radar) -> LinearTrajectory {
    let dir = heading(rng);
    let d = rng.random_range(0.0..0.9) * radar.threat.radius;
    let side = if rng.random_bool(0.5) { 1.0 } else { -1.0 };
    let foot = radar.threat.center + (side * d) * dir.perp();
    let anchor = foot + rng.random_range(-2.0 * radar.threat.radius..0.0) * dir;
    LinearTrajectory::new(
        anchor,
        dir,
        rng.random_range(0.5..10.0),
        rng.random_range(-50.0..50.0),
    )
    .expect("positive speed")
}

fn radius(rng: &mut impl Rng) -> f64 {
    rng.random_range(1.0..30.0)
}

pub fn random_scenario(case: CaseTag, rng: &mut impl Rng) -> ScenarioFile {
    let tol = Tolerance::default();
    let (radars, truth, policy) = match case {
        CaseTag::Case1 => loop {
            let dir = heading(rng);
            let route = LinearTrajectory::new(point(rng), dir, rng.random_range(0.5..10.0), 0.0)
                .expect("positive speed");
            let (c1, c2) = (point(rng), point(rng));
            let line = route.line();
            let (d1, d2) = (line.signed_distance(c1).abs(), line.signed_distance(c2).abs());
            if c1.distance(c2) < 1.0 || d1 < 1e-3 || d2 < 1e-3 {
                continue;
            }
            let radars = vec![
                Radar::new("r1", c1, d1 + rng.random_range(1.0..20.0)),
                Radar::new("r2", c2, d2 + rng.random_range(1.0..20.0)),
            ];
            let policy = InformationPolicy::default()
                .with_radar("r1", RadarPolicy::CLOSEST)
                .with_radar("r2", RadarPolicy::CLOSEST);
            break (radars, Route::Linear(route), policy);
        },
        CaseTag::Case2 => loop {
            let r1 = Radar::new("r1", point(rng), radius(rng));
            let route = crossing_route(rng, &r1);
            let (t_in1, _) = route.entry_exit_times(&r1.threat, tol).expect("crossing");
            let t_in2 = t_in1 + rng.random_range(0.1..60.0) / route.speed;
            let r2_radius = radius(rng);
            let e2 = route.position_at(t_in2);
            let r2 = Radar::new("r2", center_ahead(rng, e2, route.direction, r2_radius), r2_radius);
            if r1.threat.center.distance(r2.threat.center) < 1e-3 {
                continue;
            }
            let policy = InformationPolicy::default()
                .with_radar("r1", RadarPolicy::ALL)
                .with_radar("r2", RadarPolicy::ENTRY);
            break (vec![r1, r2], Route::Linear(route), policy);
        },
        CaseTag::Case3 => {
            let interior = rng.random_range(0..3) == 2;
            return random_case3(rng, interior);
        }
        CaseTag::Case4 => {
            let r1 = Radar::new("r1", point(rng), radius(rng));
            let route = crossing_route(rng, &r1);
            let (_, t_b) = route.entry_exit_times(&r1.threat, tol).expect("crossing");
            let t_c = t_b + rng.random_range(0.0..40.0) / route.speed;
            let r2_radius = radius(rng);
            let c = route.position_at(t_c);
            let r2 = Radar::new("r2", center_ahead(rng, c, route.direction, r2_radius), r2_radius);
            let policy = InformationPolicy::default()
                .with_radar("r1", RadarPolicy::TIMES)
                .with_radar("r2", RadarPolicy::TIMES);
            (vec![r1, r2], Route::Linear(route), policy)
        }
        CaseTag::Bonus => loop {
            let start = point(rng);
            let leg1 = heading(rng);
            let turn_angle = rng.random_range(0.1..2.8) * if rng.random_bool(0.5) { 1.0 } else { -1.0 };
            let route = TurnTrajectory::from_turn_distance(
                start,
                leg1,
                rng.random_range(1.0..50.0),
                leg1.rotated(turn_angle),
                rng.random_range(0.5..10.0),
                rng.random_range(-50.0..50.0),
            )
            .expect("valid turn route");
            let r = rng.random_range(1.0..20.0);
            let entry = route.turn_point + rng.random_range(0.5..50.0) * route.leg2_direction;
            let radar = Radar::new("r1", center_ahead(rng, entry, route.leg2_direction, r), r);
            // The first leg must not clip the circle before the turn.
            match route.entry_exit_times(&radar.threat, tol) {
                Some((t_in, _)) if t_in > route.turn_time() + 1e-6 => {}
                _ => continue,
            }
            let mut policy = InformationPolicy::default().with_radar("r1", RadarPolicy::TIMES);
            policy.speed = true;
            policy.heading = true;
            policy.waypoint_time = Some(route.start_time);
            break (vec![radar], Route::Turn(route), policy);
        },
    };
    finish(radars, truth, policy, case)
}

/// Single-radar scenario with a timed waypoint inside or outside the
/// jamming interval.
pub fn random_case3(rng: &mut impl Rng, interior: bool) -> ScenarioFile {
    let radar = Radar::new("r1", point(rng), radius(rng));
    let route = crossing_route(rng, &radar);
    let (t_in, t_out) = route
        .entry_exit_times(&radar.threat, Tolerance::default())
        .expect("crossing");
    let span = t_out - t_in;
    let t_wp = if interior {
        t_in + rng.random_range(0.05..0.95) * span
    } else if rng.random_bool(0.5) {
        t_in - rng.random_range(0.05..3.0) * span
    } else {
        t_out + rng.random_range(0.05..3.0) * span
    };
    let mut policy = InformationPolicy::default().with_radar("r1", RadarPolicy::TIMES);
    policy.waypoint_time = Some(t_wp);
    finish(vec![radar], Route::Linear(route), policy, CaseTag::Case3)
}

fn finish(radars: Vec<Radar>, truth: Route, policy: InformationPolicy, case: CaseTag) -> ScenarioFile {
    let mut scenario = ScenarioFile::new(radars);
    scenario.ground_truth = Some(truth);
    scenario.policy = policy;
    scenario.metadata.insert("case".into(), case.as_str().into());
    scenario
}

/// Reproducible scenario for `case` from `seed`.
pub fn generate(case: CaseTag, seed: u64) -> ScenarioFile {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut scenario = random_scenario(case, &mut rng);
    scenario.metadata.insert("seed".into(), seed.to_string());
    scenario
}
