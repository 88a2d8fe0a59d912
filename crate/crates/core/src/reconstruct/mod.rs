//! Inverse solvers: from a fragment of leaked observations back to the finite
//! set of routes consistent with it.
//!
//! Every solver forward-simulates each candidate it builds and stores the
//! largest observation mismatch as the candidate's residual; candidates whose
//! residual reaches [`ACCEPT_RESIDUAL`] are discarded. Precondition violations
//! are errors. Geometric infeasibility is not: it yields an empty
//! [`CandidateSet`] carrying a [`NoSolutionReason`].

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::geom::{Circle, DirectedLine, GeomError, Point2, Tolerance};
use crate::kinematics::{KinematicsError, LinearTrajectory, TurnTrajectory};

mod bonus;
mod case1;
mod case2;
mod case3;
mod case4;
pub mod oracle;

pub use bonus::{construct_reference_circle, entrance_point, solve_bonus, BonusInput};
pub use case1::solve_case1;
pub use case2::solve_case2;
pub use case3::{solve_case3, WaypointTiming};
pub use case4::{solve_case4, solve_case4_with_samples, Case4Branch, Case4Ratios, CASE4_SAMPLES};
pub use oracle::case4_oracle;

/// Largest forward-simulation mismatch a candidate may have.
pub const ACCEPT_RESIDUAL: f64 = 1e-6;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum ReconstructError {
    #[error("radar centers coincide")]
    CoincidentCenters,
    #[error("invalid times: {0}")]
    InvalidTimes(String),
    #[error("waypoint time coincides with a boundary crossing")]
    DegenerateWaypoint,
    #[error("inner chord longer than the threat circle's diameter")]
    ChordTooLong,
    #[error("invalid input: {0}")]
    InvalidInput(String),
    #[error(transparent)]
    Geometry(#[from] GeomError),
    #[error(transparent)]
    Kinematics(#[from] KinematicsError),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum CaseTag {
    #[serde(rename = "1")]
    Case1,
    #[serde(rename = "2")]
    Case2,
    #[serde(rename = "3")]
    Case3,
    #[serde(rename = "4")]
    Case4,
    Bonus,
}

impl CaseTag {
    pub const ALL: [CaseTag; 5] = [
        CaseTag::Case1,
        CaseTag::Case2,
        CaseTag::Case3,
        CaseTag::Case4,
        CaseTag::Bonus,
    ];

    pub fn as_str(&self) -> &'static str {
        match self {
            CaseTag::Case1 => "1",
            CaseTag::Case2 => "2",
            CaseTag::Case3 => "3",
            CaseTag::Case4 => "4",
            CaseTag::Bonus => "bonus",
        }
    }
}

impl std::fmt::Display for CaseTag {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(self.as_str())
    }
}

impl std::str::FromStr for CaseTag {
    type Err = String;
    fn from_str(s: &str) -> Result<Self, String> {
        match s.to_ascii_lowercase().as_str() {
            "1" | "case1" => Ok(CaseTag::Case1),
            "2" | "case2" => Ok(CaseTag::Case2),
            "3" | "case3" => Ok(CaseTag::Case3),
            "4" | "case4" => Ok(CaseTag::Case4),
            "bonus" => Ok(CaseTag::Bonus),
            other => Err(format!("unknown case '{other}' (expected 1, 2, 3, 4 or bonus)")),
        }
    }
}

/// Why a candidate set is empty (or not a finite set).
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum NoSolutionReason {
    /// The construction has no real solution.
    NoSolution,
    /// The observations cannot come from one constant-velocity route.
    InconsistentInput,
    /// A one-parameter family of routes fits; no finite set is reported.
    ContinuumDegenerate,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Candidate<T> {
    pub route: T,
    pub residual: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CandidateSet<T> {
    pub case: CaseTag,
    pub candidates: Vec<Candidate<T>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub reason: Option<NoSolutionReason>,
    /// Auxiliary circles of the construction, for diagrams.
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub construction: Vec<Circle>,
}

impl<T> CandidateSet<T> {
    pub fn new(case: CaseTag) -> Self {
        Self {
            case,
            candidates: Vec::new(),
            reason: None,
            construction: Vec::new(),
        }
    }

    pub fn empty(case: CaseTag, reason: NoSolutionReason) -> Self {
        Self {
            reason: Some(reason),
            ..Self::new(case)
        }
    }

    pub fn len(&self) -> usize {
        self.candidates.len()
    }

    pub fn is_empty(&self) -> bool {
        self.candidates.is_empty()
    }

    pub fn routes(&self) -> impl Iterator<Item = &T> {
        self.candidates.iter().map(|c| &c.route)
    }

    pub fn max_residual(&self) -> f64 {
        self.candidates.iter().map(|c| c.residual).fold(0.0, f64::max)
    }

    pub fn map<U>(self, f: impl Fn(T) -> U) -> CandidateSet<U> {
        CandidateSet {
            case: self.case,
            candidates: self
                .candidates
                .into_iter()
                .map(|c| Candidate {
                    route: f(c.route),
                    residual: c.residual,
                })
                .collect(),
            reason: self.reason,
            construction: self.construction,
        }
    }

    /// Adds `route` if it verifies and is not a duplicate. Sets `NoSolution`
    /// when the set ends up empty without another reason.
    fn offer(&mut self, route: T, residual: f64, same: impl Fn(&T, &T) -> bool) {
        if !(residual < ACCEPT_RESIDUAL) {
            return;
        }
        match self.candidates.iter_mut().find(|c| same(&c.route, &route)) {
            Some(existing) if residual < existing.residual => {
                existing.route = route;
                existing.residual = residual;
            }
            Some(_) => {}
            None => self.candidates.push(Candidate { route, residual }),
        }
    }

    fn finish(mut self, key: impl Fn(&T) -> (f64, f64, f64)) -> Self {
        self.candidates.sort_by(|a, b| {
            let (ka, kb) = (key(&a.route), key(&b.route));
            ka.0.total_cmp(&kb.0)
                .then(ka.1.total_cmp(&kb.1))
                .then(ka.2.total_cmp(&kb.2))
        });
        if self.candidates.is_empty() && self.reason.is_none() {
            self.reason = Some(NoSolutionReason::NoSolution);
        }
        self
    }
}

/// Any solver output, for serialization and diagrams.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum CandidateRoute {
    Line(DirectedLine),
    Linear(LinearTrajectory),
    Turn(TurnTrajectory),
}

impl From<DirectedLine> for CandidateRoute {
    fn from(l: DirectedLine) -> Self {
        CandidateRoute::Line(l)
    }
}

impl From<LinearTrajectory> for CandidateRoute {
    fn from(l: LinearTrajectory) -> Self {
        CandidateRoute::Linear(l)
    }
}

impl From<TurnTrajectory> for CandidateRoute {
    fn from(t: TurnTrajectory) -> Self {
        CandidateRoute::Turn(t)
    }
}

impl<T: Into<CandidateRoute>> CandidateSet<T> {
    pub fn erased(self) -> CandidateSet<CandidateRoute> {
        self.map(Into::into)
    }
}

/// Undirected lines within `tol` in angle (sine) and offset.
pub fn same_line_within(a: &DirectedLine, b: &DirectedLine, tol: f64) -> bool {
    a.same_undirected_within(b, tol, tol)
}

/// Timed routes agree on line, speed (relative) and position at `a`'s anchor time.
pub fn same_trajectory_within(a: &LinearTrajectory, b: &LinearTrajectory, tol: f64) -> bool {
    a.direction.vec().dot(b.direction.vec()) > 0.0
        && same_line_within(&a.line(), &b.line(), tol)
        && (a.speed - b.speed).abs() <= tol * a.speed.max(b.speed)
        && a.anchor.distance(b.position_at(a.anchor_time)) <= tol * (1.0 + a.anchor.magnitude())
}

pub fn same_turn_within(a: &TurnTrajectory, b: &TurnTrajectory, tol: f64) -> bool {
    let scale = 1.0 + a.turn_point.magnitude().max(a.start.magnitude());
    a.start.distance(b.start) <= tol * scale
        && a.turn_point.distance(b.turn_point) <= tol * scale
        && (a.leg1_direction.vec() - b.leg1_direction.vec()).norm() <= tol
        && (a.leg2_direction.vec() - b.leg2_direction.vec()).norm() <= tol
        && (a.speed - b.speed).abs() <= tol * a.speed.max(b.speed)
        && (a.start_time - b.start_time).abs() <= tol * (1.0 + a.start_time.abs())
}

pub(crate) fn line_key(l: &DirectedLine) -> (f64, f64, f64) {
    let (angle, offset) = l.normal_form();
    (angle, offset, 0.0)
}

pub(crate) fn trajectory_key(t: &LinearTrajectory) -> (f64, f64, f64) {
    (t.anchor.x, t.anchor.y, t.direction.angle())
}

/// Dedup predicate for timed candidates produced by one solver call.
pub(crate) fn duplicate_trajectory(tol: Tolerance) -> impl Fn(&LinearTrajectory, &LinearTrajectory) -> bool {
    move |a, b| {
        let scale = a.anchor.magnitude().max(b.anchor.magnitude());
        a.direction.vec().dot(b.direction.vec()) > 0.0
            && a.line().same_undirected(&b.line(), tol)
            && (a.speed - b.speed).abs() <= 1e-9 * a.speed.max(b.speed)
            && a.anchor.distance(b.position_at(a.anchor_time)) <= tol.eps(scale)
    }
}

/// Finite, with the scene's scale used for tolerance decisions.
pub(crate) fn require_finite(values: &[f64], what: &str) -> Result<(), ReconstructError> {
    if values.iter().all(|v| v.is_finite()) {
        Ok(())
    } else {
        Err(ReconstructError::InvalidInput(format!("{what} must be finite")))
    }
}

pub(crate) fn require_point(p: Point2, what: &str) -> Result<(), ReconstructError> {
    require_finite(&[p.x, p.y], what)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::geom::UnitVec2;

    #[test]
    fn case_tag_parses_cli_spellings() {
        for tag in CaseTag::ALL {
            assert_eq!(tag.as_str().parse::<CaseTag>().unwrap(), tag);
        }
        assert!("5".parse::<CaseTag>().is_err());
        assert_eq!(serde_json::to_string(&CaseTag::Case3).unwrap(), "\"3\"");
        assert_eq!(serde_json::to_string(&CaseTag::Bonus).unwrap(), "\"bonus\"");
    }

    #[test]
    fn offer_rejects_high_residual_and_duplicates() {
        let mut set: CandidateSet<DirectedLine> = CandidateSet::new(CaseTag::Case1);
        let l = DirectedLine::new(Point2::ORIGIN, UnitVec2::X);
        let same = |a: &DirectedLine, b: &DirectedLine| a.same_undirected(b, Tolerance::DEFAULT);
        set.offer(l, 1e-3, same);
        assert!(set.is_empty());
        set.offer(l, 1e-9, same);
        set.offer(l.reversed(), 1e-12, same);
        assert_eq!(set.len(), 1);
        assert_eq!(set.candidates[0].residual, 1e-12);
        let set = set.finish(line_key);
        assert!(set.reason.is_none());
        let empty: CandidateSet<DirectedLine> = CandidateSet::new(CaseTag::Case1).finish(line_key);
        assert_eq!(empty.reason, Some(NoSolutionReason::NoSolution));
    }

    #[test]
    fn trajectory_match_compares_at_common_time() {
        let a = LinearTrajectory::new(Point2::new(-4.0, 3.0), UnitVec2::X, 1.0, 0.0).unwrap();
        let b = a.reanchored(17.0);
        assert!(same_trajectory_within(&a, &b, 1e-9));
        let slower = LinearTrajectory { speed: 1.1, ..a };
        assert!(!same_trajectory_within(&a, &slower, 1e-6));
        let reversed = LinearTrajectory {
            direction: UnitVec2::X.reversed(),
            ..a
        };
        assert!(!same_trajectory_within(&a, &reversed, 1e-6));
    }
}
