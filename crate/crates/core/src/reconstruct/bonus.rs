//! One turn at constant speed.
//!
//! Known: the start point and time, the initial heading, the speed, the total
//! distance `d` flown until the threat circle is entered (on the second leg)
//! and the length of the path inside it. Place a reference circle of the same
//! radius so that the *unturned* route enters it after `d` and cuts the same
//! chord. The actual route is the unturned one rotated about the turn point
//! `B`, and that rotation carries the reference center onto the radar, so `B`
//! lies on their perpendicular bisector.

use serde::{Deserialize, Serialize};

use super::{
    require_finite, require_point, same_turn_within, CandidateSet, CaseTag, ReconstructError,
};
use crate::geom::{
    line_line_intersection, perpendicular_bisector, rotate_about, Circle, DirectedLine, Point2,
    Tolerance, UnitVec2,
};
use crate::kinematics::TurnTrajectory;

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct BonusInput {
    pub start: Point2,
    pub leg1_direction: UnitVec2,
    /// Path length from the start to the entrance point.
    pub total_distance_to_entry: f64,
    /// Path length inside the threat circle.
    pub inner_chord: f64,
    pub threat: Circle,
}

impl BonusInput {
    fn validate(&self) -> Result<(), ReconstructError> {
        require_point(self.start, "start")?;
        require_point(self.threat.center, "threat center")?;
        require_finite(
            &[self.total_distance_to_entry, self.inner_chord, self.threat.radius],
            "distances",
        )?;
        if self.total_distance_to_entry <= 0.0 {
            return Err(ReconstructError::InvalidInput(
                "distance to entry must be positive".into(),
            ));
        }
        if self.threat.radius <= 0.0 || self.inner_chord < 0.0 {
            return Err(ReconstructError::InvalidInput(
                "radius must be positive and chord non-negative".into(),
            ));
        }
        if self.inner_chord > 2.0 * self.threat.radius {
            return Err(ReconstructError::ChordTooLong);
        }
        Ok(())
    }

    /// Where the unturned route would enter the reference circle.
    pub fn reference_entrance(&self) -> Point2 {
        self.start + self.total_distance_to_entry * self.leg1_direction
    }
}

/// Circles of the threat radius that the unturned route enters after exactly
/// `d` and crosses along a chord of the observed length. Two mirror-image
/// circles, merged into one when the chord is a diameter.
pub fn construct_reference_circle(
    input: &BonusInput,
    tol: Tolerance,
) -> Result<Vec<Circle>, ReconstructError> {
    input.validate()?;
    let radius = input.threat.radius;
    let half = 0.5 * input.inner_chord;
    let offset = ((radius - half) * (radius + half)).max(0.0).sqrt();
    let mid = input.reference_entrance() + half * input.leg1_direction;
    let normal = input.leg1_direction.perp();
    let scale = mid.magnitude().max(radius);
    if offset <= tol.eps(scale) {
        return Ok(vec![Circle::new(mid, radius)]);
    }
    Ok(vec![
        Circle::new(mid + offset * normal, radius),
        Circle::new(mid - offset * normal, radius),
    ])
}

pub fn solve_bonus(
    input: &BonusInput,
    speed: f64,
    start_time: f64,
    tol: Tolerance,
) -> Result<CandidateSet<TurnTrajectory>, ReconstructError> {
    require_finite(&[speed, start_time], "speed and start time")?;
    if speed <= 0.0 {
        return Err(ReconstructError::InvalidInput("speed must be positive".into()));
    }
    let references = construct_reference_circle(input, tol)?;
    let d = input.total_distance_to_entry;
    let radar = input.threat.center;
    let ray = DirectedLine::new(input.start, input.leg1_direction);
    let scale = input.start.magnitude().max(input.threat.scale()).max(d);
    let eps = tol.eps(scale);

    let mut set = CandidateSet::new(CaseTag::Bonus);
    set.construction = references.clone();
    let same = |a: &TurnTrajectory, b: &TurnTrajectory| same_turn_within(a, b, tol.relative);
    for reference in references {
        let (turn_distance, angle) = if reference.center.distance(radar) <= eps {
            // The radar already sits where the unturned route needs it.
            (0.0, 0.0)
        } else {
            let bisector = perpendicular_bisector(radar, reference.center, tol)?;
            let Some(turn) = line_line_intersection(&ray, &bisector) else {
                continue;
            };
            let along = ray.parameter_of(turn);
            if along < -eps || along >= d {
                continue;
            }
            let angle = (radar - turn).angle() - (reference.center - turn).angle();
            (along.max(0.0), angle)
        };
        let route = TurnTrajectory::from_turn_distance(
            input.start,
            input.leg1_direction,
            turn_distance,
            input.leg1_direction.rotated(angle),
            speed,
            start_time,
        )?;
        let residual = residual(&route, input, tol);
        set.offer(route, residual, same);
    }
    Ok(set.finish(|r| (r.turn_point.x, r.turn_point.y, r.leg2_direction.angle())))
}

/// Entrance point on the second leg of a solved route.
pub fn entrance_point(route: &TurnTrajectory, input: &BonusInput) -> Point2 {
    let reference = input.reference_entrance();
    let angle = route.leg2_direction.angle() - route.leg1_direction.angle();
    rotate_about(reference, route.turn_point, angle)
}

/// Mismatch of the flown distances to entry and through the circle.
fn residual(route: &TurnTrajectory, input: &BonusInput, tol: Tolerance) -> f64 {
    let Some((t_in, t_out)) = route.entry_exit_times(&input.threat, tol) else {
        return f64::INFINITY;
    };
    // The entrance has to happen on the second leg.
    if t_in < route.turn_time() {
        return f64::INFINITY;
    }
    let to_entry = (t_in - route.start_time) * route.speed;
    let inside = (t_out - t_in) * route.speed;
    (to_entry - input.total_distance_to_entry)
        .abs()
        .max((inside - input.inner_chord).abs())
}
