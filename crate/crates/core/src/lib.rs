//! Forward simulation and inversion of the information a constant-velocity
//! vehicle leaks through threat-circle crossings.
//!
//! * [`geom`]: planar primitives, tangent and homothety constructions.
//! * [`kinematics`]: routes, observations, chord/speed/exit-time identities.
//! * [`reconstruct`]: inverse solvers returning finite candidate route sets.
//! * [`scenario`]: versioned JSON documents for scenarios and results.
//! * [`svg`]: construction diagrams.

pub mod geom;
pub mod kinematics;
pub mod reconstruct;
pub mod scenario;
pub mod svg;

pub use geom::{Circle, DirectedLine, GeomError, Point2, Tolerance, UnitVec2, Vec2};
pub use kinematics::{
    InformationPolicy, JammingInterval, KinematicsError, LinearTrajectory, ObservationSet, Radar,
    RadarObservation, RadarPolicy, Route, TimedWaypoint, TurnTrajectory,
};
pub use reconstruct::{Candidate, CandidateSet, CaseTag, NoSolutionReason, ReconstructError};
