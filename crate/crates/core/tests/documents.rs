//! Scenario, observation and candidate documents survive a write/read cycle
//! exactly and serialize deterministically.

use proptest::collection::{btree_map, vec};
use proptest::option;
use proptest::prelude::*;
use trajectory_oracle::reconstruct::CandidateRoute;
use trajectory_oracle::scenario::{from_json, to_json, CandidateFile, ObservationFile, ScenarioFile};
use trajectory_oracle::{
    Candidate, CandidateSet, CaseTag, Circle, DirectedLine, InformationPolicy, LinearTrajectory,
    NoSolutionReason, ObservationSet, Point2, Radar, RadarObservation, RadarPolicy, Route,
    TimedWaypoint, TurnTrajectory, UnitVec2,
};

/// Any finite double, from subnormals to the extremes.
fn real() -> impl Strategy<Value = f64> {
    prop_oneof![
        prop::num::f64::NORMAL | prop::num::f64::SUBNORMAL | prop::num::f64::ZERO,
        -1e4..1e4f64,
    ]
}

fn point() -> impl Strategy<Value = Point2> {
    (real(), real()).prop_map(|(x, y)| Point2::new(x, y))
}

fn unit() -> impl Strategy<Value = UnitVec2> {
    (0.0..std::f64::consts::TAU).prop_map(UnitVec2::from_angle)
}

fn id() -> impl Strategy<Value = String> {
    "[a-z0-9_\"\\\\ é-]{1,8}"
}

fn linear() -> impl Strategy<Value = LinearTrajectory> {
    (point(), unit(), real(), real()).prop_map(|(anchor, direction, speed, anchor_time)| {
        LinearTrajectory {
            anchor,
            direction,
            speed,
            anchor_time,
        }
    })
}

fn turn() -> impl Strategy<Value = TurnTrajectory> {
    (point(), unit(), point(), unit(), real(), real()).prop_map(
        |(start, leg1_direction, turn_point, leg2_direction, speed, start_time)| TurnTrajectory {
            start,
            leg1_direction,
            turn_point,
            leg2_direction,
            speed,
            start_time,
        },
    )
}

fn route() -> impl Strategy<Value = Route> {
    prop_oneof![linear().prop_map(Route::Linear), turn().prop_map(Route::Turn)]
}

fn observations() -> impl Strategy<Value = ObservationSet> {
    let radar = (id(), option::of(real()), option::of(real()), option::of(real())).prop_map(
        |(radar_id, entry_time, exit_time, closest_distance)| RadarObservation {
            radar_id,
            entry_time,
            exit_time,
            closest_distance,
        },
    );
    let waypoint = (point(), real()).prop_map(|(position, time)| TimedWaypoint { position, time });
    (vec(radar, 0..4), option::of(real()), option::of(waypoint), option::of(unit())).prop_map(
        |(radars, speed, waypoint, heading)| ObservationSet {
            radars,
            speed,
            waypoint,
            heading,
        },
    )
}

fn policy() -> impl Strategy<Value = InformationPolicy> {
    let flags = (any::<bool>(), any::<bool>(), any::<bool>()).prop_map(|(entry, exit, closest)| {
        RadarPolicy {
            entry,
            exit,
            closest,
        }
    });
    (btree_map(id(), flags, 0..4), any::<bool>(), option::of(real()), any::<bool>()).prop_map(
        |(radars, speed, waypoint_time, heading)| InformationPolicy {
            radars,
            speed,
            waypoint_time,
            heading,
        },
    )
}

fn scenario() -> impl Strategy<Value = ScenarioFile> {
    let radar = (id(), point(), real()).prop_map(|(id, c, r)| Radar::new(id, c, r));
    (
        vec(radar, 0..4),
        option::of(route()),
        option::of(observations()),
        policy(),
        btree_map(id(), id(), 0..3),
    )
        .prop_map(|(radars, truth, obs, policy, metadata)| {
            let mut s = ScenarioFile::new(radars);
            s.ground_truth = truth;
            s.observations = obs;
            s.policy = policy;
            s.metadata = metadata;
            s
        })
}

fn case() -> impl Strategy<Value = CaseTag> {
    prop_oneof![
        Just(CaseTag::Case1),
        Just(CaseTag::Case2),
        Just(CaseTag::Case3),
        Just(CaseTag::Case4),
        Just(CaseTag::Bonus),
    ]
}

fn candidates() -> impl Strategy<Value = CandidateFile> {
    let line = (point(), unit()).prop_map(|(o, d)| CandidateRoute::Line(DirectedLine::new(o, d)));
    let any_route = prop_oneof![
        line,
        linear().prop_map(CandidateRoute::Linear),
        turn().prop_map(CandidateRoute::Turn),
    ];
    let candidate = (any_route, real()).prop_map(|(route, residual)| Candidate { route, residual });
    let reason = option::of(prop_oneof![
        Just(NoSolutionReason::NoSolution),
        Just(NoSolutionReason::InconsistentInput),
        Just(NoSolutionReason::ContinuumDegenerate),
    ]);
    let circle = (point(), real()).prop_map(|(c, r)| Circle::new(c, r));
    (case(), vec(candidate, 0..5), reason, vec(circle, 0..3)).prop_map(
        |(case, candidates, reason, construction)| {
            CandidateFile::from(CandidateSet {
                case,
                candidates,
                reason,
                construction,
            })
        },
    )
}

proptest! {
    #[test]
    fn scenario_round_trips(s in scenario()) {
        let text = to_json(&s);
        let back: ScenarioFile = from_json(&text).unwrap();
        prop_assert_eq!(&back, &s);
        prop_assert_eq!(to_json(&back), text);
    }

    #[test]
    fn observations_round_trip(o in observations()) {
        let file = ObservationFile::new(o);
        let text = to_json(&file);
        let back: ObservationFile = from_json(&text).unwrap();
        prop_assert_eq!(&back, &file);
        prop_assert_eq!(to_json(&back), text);
    }

    #[test]
    fn candidates_round_trip(c in candidates()) {
        let text = to_json(&c);
        let back: CandidateFile = from_json(&text).unwrap();
        prop_assert_eq!(&back, &c);
        prop_assert_eq!(to_json(&back), text);
        let set: CandidateSet<CandidateRoute> = back.into();
        prop_assert_eq!(CandidateFile::from(set), c);
    }
}
