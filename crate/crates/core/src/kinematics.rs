//! Routes, radars and the observations an adversary extracts from jamming.
//!
//! A [`LinearTrajectory`] is an infinite straight line traversed at constant
//! speed. A [`TurnTrajectory`] starts at a known point and time, flies one
//! leg, turns once and keeps the same speed. [`simulate_observations`] turns
//! either into the four classes of leaked information: entry time, exit time,
//! closest distance and speed (plus an optional timed waypoint and initial
//! heading).

use std::collections::BTreeMap;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::geom::{
    circle_line_intersections, point_line_distance, Circle, DirectedLine, Point2, Tolerance,
    UnitVec2,
};

#[derive(Debug, Clone, Copy, PartialEq, Error)]
pub enum KinematicsError {
    #[error("closest distance {closest} outside [0, {radius}]")]
    OutOfRange { radius: f64, closest: f64 },
    #[error("entry and exit coincide; a tangent pass carries no speed information")]
    ZeroDuration,
    #[error("speed must be finite and positive, got {0}")]
    InvalidSpeed(f64),
    #[error("interval start {start} is after its end {end}")]
    InvalidInterval { start: f64, end: f64 },
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct LinearTrajectory {
    pub anchor: Point2,
    pub direction: UnitVec2,
    pub speed: f64,
    pub anchor_time: f64,
}

impl LinearTrajectory {
    pub fn new(
        anchor: Point2,
        direction: UnitVec2,
        speed: f64,
        anchor_time: f64,
    ) -> Result<Self, KinematicsError> {
        check_speed(speed)?;
        Ok(Self {
            anchor,
            direction,
            speed,
            anchor_time,
        })
    }

    pub fn line(&self) -> DirectedLine {
        DirectedLine::new(self.anchor, self.direction)
    }

    pub fn position_at(&self, t: f64) -> Point2 {
        self.anchor + (self.speed * (t - self.anchor_time)) * self.direction
    }

    /// Time at which the route passes the orthogonal projection of `p`.
    pub fn time_at_foot(&self, p: Point2) -> f64 {
        self.anchor_time + self.line().parameter_of(p) / self.speed
    }

    /// Distance from `p` to the route's line and the time the foot is reached.
    pub fn closest_approach(&self, p: Point2) -> (f64, f64) {
        (point_line_distance(p, &self.line()), self.time_at_foot(p))
    }

    /// Boundary crossing times of `c`; a tangent pass gives `(t, t)`.
    pub fn entry_exit_times(&self, c: &Circle, tol: Tolerance) -> Option<(f64, f64)> {
        let line = self.line();
        let pts = circle_line_intersections(c, &line, tol);
        let time = |p: Point2| self.anchor_time + line.parameter_of(p) / self.speed;
        match pts.as_slice() {
            [] => None,
            [p] => {
                let t = time(*p);
                Some((t, t))
            }
            [a, b, ..] => Some((time(*a), time(*b))),
        }
    }

    /// Same route re-anchored at another reference time.
    pub fn reanchored(&self, t: f64) -> Self {
        Self {
            anchor: self.position_at(t),
            anchor_time: t,
            ..*self
        }
    }
}

fn check_speed(speed: f64) -> Result<(), KinematicsError> {
    if speed.is_finite() && speed > 0.0 {
        Ok(())
    } else {
        Err(KinematicsError::InvalidSpeed(speed))
    }
}

/// Two-leg route: straight from `start` to `turn_point`, then along
/// `leg2_direction` at the same speed. Undefined before `start_time`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct TurnTrajectory {
    pub start: Point2,
    pub leg1_direction: UnitVec2,
    pub turn_point: Point2,
    pub leg2_direction: UnitVec2,
    pub speed: f64,
    pub start_time: f64,
}

impl TurnTrajectory {
    /// Builds the route from the distance flown before turning.
    pub fn from_turn_distance(
        start: Point2,
        leg1_direction: UnitVec2,
        turn_distance: f64,
        leg2_direction: UnitVec2,
        speed: f64,
        start_time: f64,
    ) -> Result<Self, KinematicsError> {
        check_speed(speed)?;
        Ok(Self {
            start,
            leg1_direction,
            turn_point: start + turn_distance * leg1_direction,
            leg2_direction,
            speed,
            start_time,
        })
    }

    pub fn turn_distance(&self) -> f64 {
        self.start.distance(self.turn_point)
    }

    pub fn turn_time(&self) -> f64 {
        self.start_time + self.turn_distance() / self.speed
    }

    pub fn position_at(&self, t: f64) -> Point2 {
        let tt = self.turn_time();
        if t <= tt {
            self.start + (self.speed * (t - self.start_time)) * self.leg1_direction
        } else {
            self.turn_point + (self.speed * (t - tt)) * self.leg2_direction
        }
    }

    /// The two legs as linear trajectories with their valid time windows.
    fn legs(&self) -> [(LinearTrajectory, f64, f64); 2] {
        let tt = self.turn_time();
        [
            (
                LinearTrajectory {
                    anchor: self.start,
                    direction: self.leg1_direction,
                    speed: self.speed,
                    anchor_time: self.start_time,
                },
                self.start_time,
                tt,
            ),
            (
                LinearTrajectory {
                    anchor: self.turn_point,
                    direction: self.leg2_direction,
                    speed: self.speed,
                    anchor_time: tt,
                },
                tt,
                f64::INFINITY,
            ),
        ]
    }

    /// First stay inside `c` after `start_time`, as `(entry, exit)`.
    pub fn entry_exit_times(&self, c: &Circle, tol: Tolerance) -> Option<(f64, f64)> {
        let inside: Vec<JammingInterval> = self
            .legs()
            .iter()
            .filter_map(|(leg, lo, hi)| {
                let (a, b) = leg.entry_exit_times(c, tol)?;
                let (a, b) = (a.max(*lo), b.min(*hi));
                (a <= b).then_some(JammingInterval { start: a, end: b })
            })
            .collect();
        merge_jamming_intervals(&inside)
            .first()
            .map(|iv| (iv.start, iv.end))
    }

    /// Minimum distance from `p` to the flown path.
    pub fn closest_approach(&self, p: Point2) -> (f64, f64) {
        self.legs()
            .iter()
            .map(|(leg, lo, hi)| {
                let t = leg.time_at_foot(p).clamp(*lo, *hi);
                (leg.position_at(t).distance(p), t)
            })
            .min_by(|a, b| a.0.total_cmp(&b.0))
            .expect("two legs")
    }
}

/// Ground-truth or candidate route of either shape.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum Route {
    Linear(LinearTrajectory),
    Turn(TurnTrajectory),
}

impl Route {
    pub fn position_at(&self, t: f64) -> Point2 {
        match self {
            Route::Linear(l) => l.position_at(t),
            Route::Turn(r) => r.position_at(t),
        }
    }

    pub fn entry_exit_times(&self, c: &Circle, tol: Tolerance) -> Option<(f64, f64)> {
        match self {
            Route::Linear(l) => l.entry_exit_times(c, tol),
            Route::Turn(r) => r.entry_exit_times(c, tol),
        }
    }

    pub fn closest_distance(&self, p: Point2) -> f64 {
        match self {
            Route::Linear(l) => l.closest_approach(p).0,
            Route::Turn(r) => r.closest_approach(p).0,
        }
    }

    pub fn speed(&self) -> f64 {
        match self {
            Route::Linear(l) => l.speed,
            Route::Turn(r) => r.speed,
        }
    }

    pub fn initial_heading(&self) -> UnitVec2 {
        match self {
            Route::Linear(l) => l.direction,
            Route::Turn(r) => r.leg1_direction,
        }
    }
}

impl From<LinearTrajectory> for Route {
    fn from(l: LinearTrajectory) -> Self {
        Route::Linear(l)
    }
}

impl From<TurnTrajectory> for Route {
    fn from(r: TurnTrajectory) -> Self {
        Route::Turn(r)
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Radar {
    pub id: String,
    #[serde(flatten)]
    pub threat: Circle,
}

impl Radar {
    pub fn new(id: impl Into<String>, center: Point2, radius: f64) -> Self {
        Self {
            id: id.into(),
            threat: Circle::new(center, radius),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Default, Serialize, Deserialize)]
pub struct RadarObservation {
    pub radar_id: String,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub entry_time: Option<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub exit_time: Option<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub closest_distance: Option<f64>,
}

impl RadarObservation {
    pub fn empty(radar_id: impl Into<String>) -> Self {
        Self {
            radar_id: radar_id.into(),
            ..Self::default()
        }
    }

    pub fn is_empty(&self) -> bool {
        self.entry_time.is_none() && self.exit_time.is_none() && self.closest_distance.is_none()
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct TimedWaypoint {
    pub position: Point2,
    pub time: f64,
}

#[derive(Debug, Clone, PartialEq, Default, Serialize, Deserialize)]
pub struct ObservationSet {
    pub radars: Vec<RadarObservation>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub speed: Option<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub waypoint: Option<TimedWaypoint>,
    /// Direction of flight at the waypoint, when known.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub heading: Option<UnitVec2>,
}

impl ObservationSet {
    pub fn get(&self, radar_id: &str) -> Option<&RadarObservation> {
        self.radars.iter().find(|o| o.radar_id == radar_id)
    }

    /// True when no information at all was leaked.
    pub fn is_empty(&self) -> bool {
        self.radars.iter().all(RadarObservation::is_empty)
            && self.speed.is_none()
            && self.waypoint.is_none()
            && self.heading.is_none()
    }
}

/// Which observation classes leak for one radar.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
pub struct RadarPolicy {
    #[serde(default)]
    pub entry: bool,
    #[serde(default)]
    pub exit: bool,
    #[serde(default)]
    pub closest: bool,
}

impl RadarPolicy {
    pub const ALL: RadarPolicy = RadarPolicy {
        entry: true,
        exit: true,
        closest: true,
    };
    pub const TIMES: RadarPolicy = RadarPolicy {
        entry: true,
        exit: true,
        closest: false,
    };
    pub const ENTRY: RadarPolicy = RadarPolicy {
        entry: true,
        exit: false,
        closest: false,
    };
    pub const CLOSEST: RadarPolicy = RadarPolicy {
        entry: false,
        exit: false,
        closest: true,
    };
}

/// Explicit information policy: per-radar flags plus global ones. Radars not
/// listed leak nothing.
#[derive(Debug, Clone, PartialEq, Default, Serialize, Deserialize)]
pub struct InformationPolicy {
    #[serde(default)]
    pub radars: BTreeMap<String, RadarPolicy>,
    #[serde(default)]
    pub speed: bool,
    /// Reveal the route position at this time.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub waypoint_time: Option<f64>,
    #[serde(default)]
    pub heading: bool,
}

impl InformationPolicy {
    pub fn with_radar(mut self, id: impl Into<String>, policy: RadarPolicy) -> Self {
        self.radars.insert(id.into(), policy);
        self
    }
}

/// Chord cut from a circle by a line at a given distance from the center.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ChordGeometry {
    pub radius: f64,
    pub center_distance: f64,
    pub chord_length: f64,
}

impl ChordGeometry {
    pub fn new(radius: f64, center_distance: f64) -> Result<Self, KinematicsError> {
        Ok(Self {
            radius,
            center_distance,
            chord_length: chord_length_from_distance(radius, center_distance)?,
        })
    }

    pub fn half_chord(&self) -> f64 {
        0.5 * self.chord_length
    }
}

/// Length of every chord at distance `closest` from the center.
pub fn chord_length_from_distance(radius: f64, closest: f64) -> Result<f64, KinematicsError> {
    if !(radius >= 0.0 && closest >= 0.0 && closest <= radius) {
        return Err(KinematicsError::OutOfRange { radius, closest });
    }
    Ok(2.0 * ((radius - closest) * (radius + closest)).sqrt())
}

/// Speed implied by the chord length and the time spent inside.
pub fn speed_from_times(
    radius: f64,
    closest: f64,
    t_in: f64,
    t_out: f64,
) -> Result<f64, KinematicsError> {
    if t_out <= t_in {
        return Err(KinematicsError::ZeroDuration);
    }
    Ok(chord_length_from_distance(radius, closest)? / (t_out - t_in))
}

/// Exit time implied by the entry time, closest distance and speed.
pub fn exit_time_from_entry(
    t_in: f64,
    radius: f64,
    closest: f64,
    speed: f64,
) -> Result<f64, KinematicsError> {
    check_speed(speed)?;
    Ok(t_in + chord_length_from_distance(radius, closest)? / speed)
}

/// Observations leaked by `route` under `policy`.
///
/// Closest distance leaks only while jamming, so a radar whose circle is never
/// crossed yields an empty observation whatever the policy. Tangent passes
/// count as crossings.
pub fn simulate_observations(
    route: &Route,
    radars: &[Radar],
    policy: &InformationPolicy,
    tol: Tolerance,
) -> ObservationSet {
    let observations = radars
        .iter()
        .map(|radar| {
            let mut obs = RadarObservation::empty(&radar.id);
            let flags = policy.radars.get(&radar.id).copied().unwrap_or_default();
            if let Some((t_in, t_out)) = route.entry_exit_times(&radar.threat, tol) {
                obs.entry_time = flags.entry.then_some(t_in);
                obs.exit_time = flags.exit.then_some(t_out);
                obs.closest_distance = flags
                    .closest
                    .then(|| route.closest_distance(radar.threat.center).min(radar.threat.radius));
            }
            obs
        })
        .collect();
    ObservationSet {
        radars: observations,
        speed: policy.speed.then(|| route.speed()),
        waypoint: policy.waypoint_time.map(|t| TimedWaypoint {
            position: route.position_at(t),
            time: t,
        }),
        heading: policy.heading.then(|| route.initial_heading()),
    }
}

/// Closed time interval during which jamming is on.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct JammingInterval {
    pub start: f64,
    pub end: f64,
}

impl JammingInterval {
    pub fn new(start: f64, end: f64) -> Result<Self, KinematicsError> {
        if start <= end {
            Ok(Self { start, end })
        } else {
            Err(KinematicsError::InvalidInterval { start, end })
        }
    }

    pub fn contains(&self, t: f64) -> bool {
        self.start <= t && t <= self.end
    }

    pub fn length(&self) -> f64 {
        self.end - self.start
    }
}

/// Union of jamming windows as a sorted list of disjoint intervals. Touching
/// intervals merge.
pub fn merge_jamming_intervals(intervals: &[JammingInterval]) -> Vec<JammingInterval> {
    let mut sorted = intervals.to_vec();
    sorted.sort_by(|a, b| a.start.total_cmp(&b.start));
    let mut out: Vec<JammingInterval> = Vec::with_capacity(sorted.len());
    for iv in sorted {
        match out.last_mut() {
            Some(last) if iv.start <= last.end => last.end = last.end.max(iv.end),
            _ => out.push(iv),
        }
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_abs_diff_eq;
    use proptest::prelude::*;

    const TOL: Tolerance = Tolerance::DEFAULT;

    fn pt(x: f64, y: f64) -> Point2 {
        Point2::new(x, y)
    }

    fn horizontal() -> LinearTrajectory {
        LinearTrajectory::new(pt(-4.0, 3.0), UnitVec2::X, 1.0, 0.0).unwrap()
    }

    #[test]
    fn positions() {
        assert_eq!(horizontal().position_at(4.0), pt(0.0, 3.0));
        assert_eq!(horizontal().position_at(0.0), pt(-4.0, 3.0));
        let up = LinearTrajectory::new(Point2::ORIGIN, UnitVec2::Y, 2.0, 1.0).unwrap();
        assert_eq!(up.position_at(3.0), pt(0.0, 4.0));
    }

    #[test]
    fn closest_approach_examples() {
        assert_eq!(horizontal().closest_approach(Point2::ORIGIN), (3.0, 4.0));
        let (d, t) = horizontal().closest_approach(pt(2.0, 3.0));
        assert_eq!(d, 0.0);
        assert_eq!(t, 6.0);
        let traj = LinearTrajectory::new(Point2::ORIGIN, UnitVec2::X, 3.0, 7.5).unwrap();
        assert_eq!(traj.closest_approach(pt(0.0, 5.0)), (5.0, 7.5));
    }

    #[test]
    fn entry_exit_examples() {
        let t = horizontal();
        let (a, b) = t.entry_exit_times(&Circle::new(Point2::ORIGIN, 5.0), TOL).unwrap();
        assert_abs_diff_eq!(a, 0.0, epsilon = 1e-12);
        assert_abs_diff_eq!(b, 8.0, epsilon = 1e-12);
        assert!(t.entry_exit_times(&Circle::new(Point2::ORIGIN, 1.0), TOL).is_none());
        // Distance from (0,8) to y = 3 is 5: the circle is touched at (0,3), t = 4.
        let (a, b) = t.entry_exit_times(&Circle::new(pt(0.0, 8.0), 5.0), TOL).unwrap();
        assert_eq!((a, b), (4.0, 4.0));
    }

    #[test]
    fn invalid_speed_rejected() {
        assert!(LinearTrajectory::new(Point2::ORIGIN, UnitVec2::X, 0.0, 0.0).is_err());
        assert!(LinearTrajectory::new(Point2::ORIGIN, UnitVec2::X, f64::NAN, 0.0).is_err());
    }

    #[test]
    fn chord_examples() {
        assert_eq!(chord_length_from_distance(5.0, 3.0).unwrap(), 8.0);
        assert_eq!(chord_length_from_distance(5.0, 5.0).unwrap(), 0.0);
        assert_eq!(chord_length_from_distance(1.0, 0.0).unwrap(), 2.0);
        assert!(matches!(
            chord_length_from_distance(1.0, 2.0),
            Err(KinematicsError::OutOfRange { .. })
        ));
        assert!(chord_length_from_distance(1.0, -0.5).is_err());
        let g = ChordGeometry::new(5.0, 3.0).unwrap();
        assert_eq!(g.half_chord(), 4.0);
    }

    #[test]
    fn speed_examples() {
        assert_eq!(speed_from_times(5.0, 3.0, 0.0, 8.0).unwrap(), 1.0);
        assert_eq!(speed_from_times(5.0, 3.0, 0.0, 4.0).unwrap(), 2.0);
        assert_eq!(
            speed_from_times(5.0, 5.0, 0.0, 0.0),
            Err(KinematicsError::ZeroDuration)
        );
    }

    #[test]
    fn exit_time_examples() {
        assert_eq!(exit_time_from_entry(0.0, 5.0, 3.0, 1.0).unwrap(), 8.0);
        assert_eq!(exit_time_from_entry(10.0, 1.0, 0.0, 2.0).unwrap(), 11.0);
        assert_eq!(exit_time_from_entry(0.0, 5.0, 5.0, 3.0).unwrap(), 0.0);
        assert!(exit_time_from_entry(0.0, 5.0, 6.0, 3.0).is_err());
    }

    fn case2_radars() -> Vec<Radar> {
        vec![
            Radar::new("r1", Point2::ORIGIN, 5.0),
            Radar::new("r2", pt(10.0, 3.0), 5.0),
        ]
    }

    #[test]
    fn simulate_case2_fixture() {
        let policy = InformationPolicy::default()
            .with_radar("r1", RadarPolicy::ALL)
            .with_radar("r2", RadarPolicy::ENTRY);
        let obs = simulate_observations(&horizontal().into(), &case2_radars(), &policy, TOL);
        let r1 = obs.get("r1").unwrap();
        assert_abs_diff_eq!(r1.closest_distance.unwrap(), 3.0);
        assert_abs_diff_eq!(r1.entry_time.unwrap(), 0.0, epsilon = 1e-12);
        assert_abs_diff_eq!(r1.exit_time.unwrap(), 8.0, epsilon = 1e-12);
        let r2 = obs.get("r2").unwrap();
        assert_abs_diff_eq!(r2.entry_time.unwrap(), 9.0, epsilon = 1e-12);
        assert!(r2.exit_time.is_none() && r2.closest_distance.is_none());
        assert!(obs.speed.is_none() && obs.waypoint.is_none());
    }

    #[test]
    fn simulate_miss_and_nothing_granted() {
        let far = LinearTrajectory::new(pt(0.0, 100.0), UnitVec2::X, 1.0, 0.0).unwrap();
        let policy = InformationPolicy::default()
            .with_radar("r1", RadarPolicy::ALL)
            .with_radar("r2", RadarPolicy::ALL);
        let obs = simulate_observations(&far.into(), &case2_radars(), &policy, TOL);
        assert_eq!(obs.radars.len(), 2);
        assert!(obs.radars.iter().all(RadarObservation::is_empty));

        let obs = simulate_observations(
            &horizontal().into(),
            &case2_radars(),
            &InformationPolicy::default(),
            TOL,
        );
        assert!(obs.is_empty());
    }

    #[test]
    fn simulate_global_flags() {
        let policy = InformationPolicy {
            speed: true,
            waypoint_time: Some(2.0),
            heading: true,
            ..Default::default()
        };
        let obs = simulate_observations(&horizontal().into(), &case2_radars(), &policy, TOL);
        assert_eq!(obs.speed, Some(1.0));
        assert_eq!(obs.waypoint.unwrap().position, pt(-2.0, 3.0));
        assert_eq!(obs.heading, Some(UnitVec2::X));
    }

    #[test]
    fn turn_route_crossing() {
        // Fly east 4 units, turn north, enter ((4,8),2) at (4,6).
        let route =
            TurnTrajectory::from_turn_distance(Point2::ORIGIN, UnitVec2::X, 4.0, UnitVec2::Y, 1.0, 0.0)
                .unwrap();
        assert_eq!(route.turn_time(), 4.0);
        assert_eq!(route.position_at(7.0), pt(4.0, 3.0));
        let (a, b) = route
            .entry_exit_times(&Circle::new(pt(4.0, 8.0), 2.0), TOL)
            .unwrap();
        assert_abs_diff_eq!(a, 10.0, epsilon = 1e-12);
        assert_abs_diff_eq!(b, 14.0, epsilon = 1e-12);
        // The unturned continuation would have crossed this circle; the route does not.
        assert!(route
            .entry_exit_times(&Circle::new(pt(12.0, 0.0), 2.0), TOL)
            .is_none());
        let (d, _) = route.closest_approach(pt(0.0, -3.0));
        assert_abs_diff_eq!(d, 3.0);
    }

    #[test]
    fn merge_examples() {
        let iv = |a, b| JammingInterval::new(a, b).unwrap();
        assert_eq!(merge_jamming_intervals(&[iv(1.0, 3.0), iv(2.0, 4.0)]), vec![iv(1.0, 4.0)]);
        assert_eq!(
            merge_jamming_intervals(&[iv(2.0, 3.0), iv(0.0, 1.0)]),
            vec![iv(0.0, 1.0), iv(2.0, 3.0)]
        );
        assert!(merge_jamming_intervals(&[]).is_empty());
        // Second bomber exits first: the window is the first bomber's.
        assert_eq!(merge_jamming_intervals(&[iv(1.0, 5.0), iv(2.0, 4.0)]), vec![iv(1.0, 5.0)]);
        assert!(JammingInterval::new(2.0, 1.0).is_err());
    }

    fn crossing_route() -> impl Strategy<Value = (LinearTrajectory, Circle)> {
        (
            -100.0..100.0f64,
            -100.0..100.0f64,
            0.0..std::f64::consts::TAU,
            0.1..10.0f64,
            -50.0..50.0f64,
            1.0..40.0f64,
            0.0..0.999f64,
            -100.0..100.0f64,
        )
            .prop_map(|(cx, cy, ang, speed, t0, r, frac, along)| {
                let dir = UnitVec2::from_angle(ang);
                let center = pt(cx, cy);
                let anchor = center + (frac * r) * dir.perp() + along * dir;
                (
                    LinearTrajectory::new(anchor, dir, speed, t0).unwrap(),
                    Circle::new(center, r),
                )
            })
    }

    proptest! {
        #[test]
        fn speed_and_chord_compose(radius in 0.1..1e3f64, frac in 0.0..0.999f64, duration in 1e-3..1e3f64) {
            let closest = frac * radius;
            let speed = speed_from_times(radius, closest, 0.0, duration).unwrap();
            let back = chord_length_from_distance(radius, closest).unwrap() / speed;
            prop_assert!((back - duration).abs() <= 1e-9 * duration);
        }

        #[test]
        fn predicted_exit_matches_simulation((traj, c) in crossing_route()) {
            let (t_in, t_out) = traj.entry_exit_times(&c, TOL).unwrap();
            let (closest, _) = traj.closest_approach(c.center);
            let predicted = exit_time_from_entry(t_in, c.radius, closest, traj.speed).unwrap();
            prop_assert!((predicted - t_out).abs() <= 1e-9 * (1.0 + t_out.abs()));
        }

        #[test]
        fn crossing_points_on_circle((traj, c) in crossing_route()) {
            let (t_in, t_out) = traj.entry_exit_times(&c, TOL).unwrap();
            prop_assert!(t_in <= t_out);
            let eps = TOL.eps(c.scale().max(traj.anchor.magnitude()) * 2.0);
            for t in [t_in, t_out] {
                prop_assert!((traj.position_at(t).distance(c.center) - c.radius).abs() < eps);
            }
        }

        #[test]
        fn closest_matches_sampled_minimum((traj, c) in crossing_route()) {
            let (d, t_star) = traj.closest_approach(c.center);
            // Dense sampling on a window around the foot.
            let half_window = 2.0 * c.radius / traj.speed;
            let n = 10_000;
            let sampled = (0..=n)
                .map(|i| {
                    let t = t_star - half_window + 2.0 * half_window * i as f64 / n as f64;
                    traj.position_at(t).distance(c.center)
                })
                .fold(f64::INFINITY, f64::min);
            let eps = TOL.eps(c.scale().max(traj.anchor.magnitude()) * 2.0);
            prop_assert!(d <= sampled + eps);
            // The nearest sample is at most half a spacing from the foot.
            let spacing = 2.0 * half_window * traj.speed / n as f64;
            prop_assert!(sampled - d <= 0.5 * spacing + eps);
        }

        #[test]
        fn merged_intervals_are_sorted_disjoint(raw in prop::collection::vec((-50.0..50.0f64, 0.0..10.0f64), 0..20)) {
            let input: Vec<_> = raw.iter().map(|&(s, l)| JammingInterval::new(s, s + l).unwrap()).collect();
            let out = merge_jamming_intervals(&input);
            for w in out.windows(2) {
                prop_assert!(w[0].end < w[1].start);
            }
            let total_in: f64 = input.iter().map(JammingInterval::length).sum();
            let total_out: f64 = out.iter().map(JammingInterval::length).sum();
            prop_assert!(total_out <= total_in + 1e-9);
        }
    }
}
