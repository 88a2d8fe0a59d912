//! Closest distances to two radars: the route is a common tangent of the two
//! closest-distance circles.

use super::{line_key, require_finite, require_point, CandidateSet, CaseTag, ReconstructError};
use crate::geom::{common_tangents, point_line_distance, Circle, DirectedLine, Point2, Tolerance};

/// Lines at distance `d1` from `c1_center` and `d2` from `c2_center`.
///
/// At most four; the set is symmetric under reflection across the line
/// through the two centers.
pub fn solve_case1(
    c1_center: Point2,
    d1: f64,
    c2_center: Point2,
    d2: f64,
    tol: Tolerance,
) -> Result<CandidateSet<DirectedLine>, ReconstructError> {
    require_point(c1_center, "radar center")?;
    require_point(c2_center, "radar center")?;
    require_finite(&[d1, d2], "closest distances")?;
    if d1 < 0.0 || d2 < 0.0 {
        return Err(ReconstructError::InvalidInput(
            "closest distances must be non-negative".into(),
        ));
    }
    let scale = c1_center.magnitude().max(c2_center.magnitude());
    if c1_center.distance(c2_center) <= tol.eps(scale) {
        return Err(ReconstructError::CoincidentCenters);
    }

    let c1 = Circle::new(c1_center, d1);
    let c2 = Circle::new(c2_center, d2);
    let mut set = CandidateSet::new(CaseTag::Case1);
    set.construction = vec![
        c1,
        c2,
        Circle::new(c2_center, (d2 - d1).abs()),
        Circle::new(c2_center, d1 + d2),
    ];
    for t in common_tangents(&c1, &c2, tol)? {
        let residual = (point_line_distance(c1_center, &t.line) - d1)
            .abs()
            .max((point_line_distance(c2_center, &t.line) - d2).abs());
        set.offer(t.line, residual, |a, b| a.same_undirected(b, tol));
    }
    Ok(set.finish(line_key))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::geom::UnitVec2;

    const TOL: Tolerance = Tolerance::DEFAULT;

    #[test]
    fn four_lines_for_separated_unit_circles() {
        let set = solve_case1(Point2::ORIGIN, 1.0, Point2::new(4.0, 0.0), 1.0, TOL).unwrap();
        assert_eq!(set.len(), 4);
        assert!(set.reason.is_none());
        let s = 1.0 / 3f64.sqrt();
        let expected = [
            DirectedLine::new(Point2::new(0.0, 1.0), UnitVec2::X),
            DirectedLine::new(Point2::new(0.0, -1.0), UnitVec2::X),
            DirectedLine::new(Point2::new(2.0, 0.0), UnitVec2::new(1.0, s).unwrap()),
            DirectedLine::new(Point2::new(2.0, 0.0), UnitVec2::new(1.0, -s).unwrap()),
        ];
        for want in expected {
            assert!(set.routes().any(|l| l.same_undirected(&want, TOL)));
        }
        assert!(set.max_residual() < 1e-12);
    }

    #[test]
    fn zero_distances_give_line_through_centers() {
        let set = solve_case1(Point2::ORIGIN, 0.0, Point2::new(3.0, 4.0), 0.0, TOL).unwrap();
        assert_eq!(set.len(), 1);
        let l = set.candidates[0].route;
        assert!(point_line_distance(Point2::new(3.0, 4.0), &l) < 1e-12);
        assert!(point_line_distance(Point2::ORIGIN, &l) < 1e-12);
    }

    #[test]
    fn nested_circles_have_no_solution() {
        let set = solve_case1(Point2::ORIGIN, 5.0, Point2::new(1.0, 0.0), 1.0, TOL).unwrap();
        assert!(set.is_empty());
        assert_eq!(set.reason, Some(super::super::NoSolutionReason::NoSolution));
    }

    #[test]
    fn coincident_centers_rejected() {
        assert_eq!(
            solve_case1(Point2::ORIGIN, 1.0, Point2::ORIGIN, 2.0, TOL),
            Err(ReconstructError::CoincidentCenters)
        );
        assert!(solve_case1(Point2::ORIGIN, -1.0, Point2::new(1.0, 0.0), 2.0, TOL).is_err());
    }
}
