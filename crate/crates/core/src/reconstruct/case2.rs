//! Closest distance plus entry/exit times for one radar and the entry time of
//! a second radar.
//!
//! The first radar fixes the chord length and hence the speed; the gap between
//! the two entry times fixes the distance between the entrance points. All
//! chords of that length are rotations of one another about the first center,
//! so the second entrance point lies on a circle around that center. Its
//! intersections with the second threat circle give the second entrance, and
//! the first entrance is then recovered by measuring the known distance back
//! onto the first threat circle.

use super::{
    duplicate_trajectory, require_finite, trajectory_key, CandidateSet, CaseTag, NoSolutionReason,
    ReconstructError,
};
use crate::geom::{circle_circle_intersections, Circle, GeomError, Tolerance, UnitVec2};
use crate::kinematics::{chord_length_from_distance, LinearTrajectory, Radar};

pub fn solve_case2(
    r1: &Radar,
    d1: f64,
    t_in1: f64,
    t_out1: f64,
    r2: &Radar,
    t_in2: f64,
    tol: Tolerance,
) -> Result<CandidateSet<LinearTrajectory>, ReconstructError> {
    require_finite(&[d1, t_in1, t_out1, t_in2], "observations")?;
    if t_out1 <= t_in1 {
        return Err(ReconstructError::InvalidTimes(
            "first exit must follow first entry".into(),
        ));
    }
    if t_in2 <= t_in1 {
        return Err(ReconstructError::InvalidTimes(
            "second entry must follow first entry".into(),
        ));
    }
    let o1 = r1.threat.center;
    let radius1 = r1.threat.radius;
    if !(d1 >= 0.0 && d1 < radius1) {
        return Err(ReconstructError::InvalidInput(format!(
            "closest distance {d1} must lie in [0, {radius1})"
        )));
    }

    let chord = chord_length_from_distance(radius1, d1)?;
    let speed = chord / (t_out1 - t_in1);
    let gap = speed * (t_in2 - t_in1);
    // Canonical chord: entrance at (-L/2, d1) relative to the center, flying +x.
    let rho = (gap - 0.5 * chord).hypot(d1);
    let locus = Circle::new(o1, rho);

    let mut set = CandidateSet::new(CaseTag::Case2);
    set.construction = vec![locus];

    let scale = r1.threat.scale().max(r2.threat.scale());
    let centers = o1.distance(r2.threat.center);
    if rho + r2.threat.radius < centers - tol.eps(scale) {
        set.reason = Some(NoSolutionReason::InconsistentInput);
        return Ok(set);
    }
    let second_entries = match circle_circle_intersections(&locus, &r2.threat, tol) {
        Ok(pts) => pts,
        Err(GeomError::CoincidentCircles) => {
            set.reason = Some(NoSolutionReason::ContinuumDegenerate);
            return Ok(set);
        }
        Err(e) => return Err(e.into()),
    };

    let same = duplicate_trajectory(tol);
    for e2 in second_entries {
        let reach = Circle::new(e2, gap);
        let first_entries = match circle_circle_intersections(&r1.threat, &reach, tol) {
            Ok(pts) => pts,
            Err(GeomError::CoincidentCircles) => {
                set.reason = Some(NoSolutionReason::ContinuumDegenerate);
                continue;
            }
            Err(e) => return Err(e.into()),
        };
        for a in first_entries {
            let Ok(direction) = UnitVec2::from_vec(e2 - a) else {
                continue;
            };
            let traj = LinearTrajectory::new(a, direction, speed, t_in1)?;
            let residual = residual(&traj, r1, d1, t_in1, t_out1, r2, t_in2, tol);
            set.offer(traj, residual, &same);
        }
    }
    if !set.is_empty() {
        set.reason = None;
    }
    Ok(set.finish(trajectory_key))
}

#[allow(clippy::too_many_arguments)]
fn residual(
    traj: &LinearTrajectory,
    r1: &Radar,
    d1: f64,
    t_in1: f64,
    t_out1: f64,
    r2: &Radar,
    t_in2: f64,
    tol: Tolerance,
) -> f64 {
    let (Some((a, b)), Some((c, _))) = (
        traj.entry_exit_times(&r1.threat, tol),
        traj.entry_exit_times(&r2.threat, tol),
    ) else {
        return f64::INFINITY;
    };
    let (closest, _) = traj.closest_approach(r1.threat.center);
    [
        (closest - d1).abs(),
        (a - t_in1).abs(),
        (b - t_out1).abs(),
        (c - t_in2).abs(),
    ]
    .into_iter()
    .fold(0.0, f64::max)
}
