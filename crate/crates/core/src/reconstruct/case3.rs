//! Entry and exit times for one radar plus one timed point on the route.
//!
//! With `x` and `y` the times from the waypoint `A` to entry and exit, the
//! exit point `Y` is the image of the entry point `X` under the homothety
//! centered at `A` with ratio `y/x` (or `-y/x` when `A` lies between them).
//! So `Y` is an intersection of the threat circle with its own image, and `X`
//! is the second intersection of line `AY` with the threat circle.

use serde::{Deserialize, Serialize};

use super::{
    duplicate_trajectory, require_finite, require_point, trajectory_key, CandidateSet, CaseTag,
    NoSolutionReason, ReconstructError,
};
use crate::geom::{
    circle_circle_intersections, circle_line_intersections, homothety_circle, DirectedLine,
    GeomError, Tolerance, UnitVec2,
};
use crate::kinematics::{LinearTrajectory, Radar, TimedWaypoint};

/// Times from the waypoint to the entry (`x`) and to the exit (`y`), both
/// non-negative, plus whether the waypoint lies between the crossings.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct WaypointTiming {
    pub x: f64,
    pub y: f64,
    pub interior: bool,
}

impl WaypointTiming {
    pub fn new(t_in: f64, t_out: f64, waypoint_time: f64) -> Result<Self, ReconstructError> {
        if !(t_in < t_out) {
            return Err(ReconstructError::InvalidTimes(
                "exit must follow entry".into(),
            ));
        }
        if waypoint_time == t_in || waypoint_time == t_out {
            return Err(ReconstructError::DegenerateWaypoint);
        }
        Ok(Self {
            x: (waypoint_time - t_in).abs(),
            y: (t_out - waypoint_time).abs(),
            interior: t_in < waypoint_time && waypoint_time < t_out,
        })
    }

    /// Signed homothety ratio mapping the entry point to the exit point.
    pub fn ratio(&self) -> f64 {
        let r = self.y / self.x;
        if self.interior {
            -r
        } else {
            r
        }
    }
}

pub fn solve_case3(
    radar: &Radar,
    t_in: f64,
    t_out: f64,
    waypoint: &TimedWaypoint,
    tol: Tolerance,
) -> Result<CandidateSet<LinearTrajectory>, ReconstructError> {
    require_finite(&[t_in, t_out, waypoint.time], "times")?;
    require_point(waypoint.position, "waypoint")?;
    let timing = WaypointTiming::new(t_in, t_out, waypoint.time)?;
    let a = waypoint.position;
    let threat = radar.threat;
    let image = homothety_circle(&threat, a, timing.ratio())?;

    let mut set = CandidateSet::new(CaseTag::Case3);
    set.construction = vec![image];
    let exits = match circle_circle_intersections(&threat, &image, tol) {
        Ok(pts) => pts,
        Err(GeomError::CoincidentCircles) => {
            // Waypoint at the center with x = y: every diameter fits.
            set.reason = Some(NoSolutionReason::ContinuumDegenerate);
            return Ok(set);
        }
        Err(e) => return Err(e.into()),
    };

    let same = duplicate_trajectory(tol);
    for y_pt in exits {
        let Ok(line) = DirectedLine::through(a, y_pt) else {
            continue;
        };
        let pts = circle_line_intersections(&threat, &line, tol);
        // The entry is whichever crossing is not the exit.
        let Some(x_pt) = pts
            .iter()
            .copied()
            .max_by(|p, q| p.distance(y_pt).total_cmp(&q.distance(y_pt)))
        else {
            continue;
        };
        let chord = x_pt.distance(y_pt);
        let Ok(direction) = UnitVec2::from_vec(y_pt - x_pt) else {
            continue;
        };
        let speed = chord / (t_out - t_in);
        let Ok(traj) = LinearTrajectory::new(a, direction, speed, waypoint.time) else {
            continue;
        };
        let residual = match traj.entry_exit_times(&threat, tol) {
            Some((s_in, s_out)) => (s_in - t_in).abs().max((s_out - t_out).abs()),
            None => f64::INFINITY,
        };
        set.offer(traj, residual, &same);
    }
    Ok(set.finish(trajectory_key))
}
