//! Python bindings: geometry values, routes, the five solvers and scenario
//! documents.

use pyo3::exceptions::PyValueError;
use pyo3::prelude::*;
use trajectory_oracle::kinematics::simulate_observations;
use trajectory_oracle::reconstruct::{
    solve_bonus as core_bonus, solve_case1 as core_case1, solve_case2 as core_case2,
    solve_case3 as core_case3, solve_case4 as core_case4, BonusInput, CandidateRoute,
};
use trajectory_oracle::scenario::{from_json, to_json, CandidateFile, ObservationFile, ScenarioFile};
use trajectory_oracle::{
    CandidateSet as CoreSet, Circle as CoreCircle, DirectedLine as CoreLine,
    LinearTrajectory as CoreLinear, Point2 as CorePoint, Radar as CoreRadar, Route, TimedWaypoint,
    Tolerance, TurnTrajectory as CoreTurn, UnitVec2,
};

fn value_error(e: impl std::fmt::Display) -> PyErr {
    PyValueError::new_err(e.to_string())
}

fn unit((x, y): (f64, f64)) -> PyResult<UnitVec2> {
    UnitVec2::new(x, y).map_err(value_error)
}

fn pair(u: UnitVec2) -> (f64, f64) {
    (u.x(), u.y())
}

fn tolerance(relative: f64) -> PyResult<Tolerance> {
    if relative > 0.0 && relative < 1.0 {
        Ok(Tolerance::new(relative))
    } else {
        Err(PyValueError::new_err("tolerance must lie in (0, 1)"))
    }
}

#[pyclass(name = "Point2", module = "trajoracle", frozen, eq, from_py_object)]
#[derive(Clone, Copy, PartialEq)]
struct Point2(CorePoint);

#[pymethods]
impl Point2 {
    #[new]
    fn new(x: f64, y: f64) -> Self {
        Self(CorePoint::new(x, y))
    }

    #[getter]
    fn x(&self) -> f64 {
        self.0.x
    }

    #[getter]
    fn y(&self) -> f64 {
        self.0.y
    }

    fn distance(&self, other: Point2) -> f64 {
        self.0.distance(other.0)
    }

    fn __repr__(&self) -> String {
        format!("Point2({}, {})", self.0.x, self.0.y)
    }
}

#[pyclass(name = "Circle", module = "trajoracle", frozen, from_py_object)]
#[derive(Clone, Copy)]
struct Circle(CoreCircle);

#[pymethods]
impl Circle {
    #[new]
    fn new(center: Point2, radius: f64) -> PyResult<Self> {
        if !(radius >= 0.0) {
            return Err(PyValueError::new_err("radius must be non-negative"));
        }
        Ok(Self(CoreCircle::new(center.0, radius)))
    }

    #[getter]
    fn center(&self) -> Point2 {
        Point2(self.0.center)
    }

    #[getter]
    fn radius(&self) -> f64 {
        self.0.radius
    }

    fn __repr__(&self) -> String {
        format!("Circle(({}, {}), {})", self.0.center.x, self.0.center.y, self.0.radius)
    }
}

#[pyclass(name = "Radar", module = "trajoracle", frozen, from_py_object)]
#[derive(Clone)]
struct Radar(CoreRadar);

#[pymethods]
impl Radar {
    #[new]
    fn new(id: String, center: Point2, radius: f64) -> PyResult<Self> {
        if !(radius > 0.0) {
            return Err(PyValueError::new_err("threat radius must be positive"));
        }
        Ok(Self(CoreRadar::new(id, center.0, radius)))
    }

    #[getter]
    fn id(&self) -> &str {
        &self.0.id
    }

    #[getter]
    fn threat(&self) -> Circle {
        Circle(self.0.threat)
    }

    fn __repr__(&self) -> String {
        let c = self.0.threat;
        format!("Radar({:?}, ({}, {}), {})", self.0.id, c.center.x, c.center.y, c.radius)
    }
}

#[pyclass(name = "DirectedLine", module = "trajoracle", frozen, from_py_object)]
#[derive(Clone, Copy)]
struct DirectedLine(CoreLine);

#[pymethods]
impl DirectedLine {
    #[new]
    fn new(origin: Point2, direction: (f64, f64)) -> PyResult<Self> {
        Ok(Self(CoreLine::new(origin.0, unit(direction)?)))
    }

    #[getter]
    fn origin(&self) -> Point2 {
        Point2(self.0.origin)
    }

    #[getter]
    fn direction(&self) -> (f64, f64) {
        pair(self.0.direction)
    }

    fn distance_to(&self, p: Point2) -> f64 {
        self.0.signed_distance(p.0).abs()
    }

    fn __repr__(&self) -> String {
        let (o, d) = (self.0.origin, self.0.direction);
        format!("DirectedLine(({}, {}), ({}, {}))", o.x, o.y, d.x(), d.y())
    }
}

#[pyclass(name = "LinearTrajectory", module = "trajoracle", frozen, from_py_object)]
#[derive(Clone, Copy)]
struct LinearTrajectory(CoreLinear);

#[pymethods]
impl LinearTrajectory {
    #[new]
    #[pyo3(signature = (anchor, direction, speed, anchor_time = 0.0))]
    fn new(anchor: Point2, direction: (f64, f64), speed: f64, anchor_time: f64) -> PyResult<Self> {
        CoreLinear::new(anchor.0, unit(direction)?, speed, anchor_time)
            .map(Self)
            .map_err(value_error)
    }

    #[getter]
    fn anchor(&self) -> Point2 {
        Point2(self.0.anchor)
    }

    #[getter]
    fn direction(&self) -> (f64, f64) {
        pair(self.0.direction)
    }

    #[getter]
    fn speed(&self) -> f64 {
        self.0.speed
    }

    #[getter]
    fn anchor_time(&self) -> f64 {
        self.0.anchor_time
    }

    fn line(&self) -> DirectedLine {
        DirectedLine(self.0.line())
    }

    fn position_at(&self, t: f64) -> Point2 {
        Point2(self.0.position_at(t))
    }

    /// `(distance, time)` of closest approach to `p`.
    fn closest_approach(&self, p: Point2) -> (f64, f64) {
        self.0.closest_approach(p.0)
    }

    #[pyo3(signature = (circle, tolerance = 1e-9))]
    fn entry_exit_times(&self, circle: Circle, tolerance: f64) -> PyResult<Option<(f64, f64)>> {
        Ok(self.0.entry_exit_times(&circle.0, self::tolerance(tolerance)?))
    }

    fn __repr__(&self) -> String {
        let t = self.0;
        format!(
            "LinearTrajectory(({}, {}), ({}, {}), speed={}, anchor_time={})",
            t.anchor.x,
            t.anchor.y,
            t.direction.x(),
            t.direction.y(),
            t.speed,
            t.anchor_time
        )
    }
}

#[pyclass(name = "TurnTrajectory", module = "trajoracle", frozen, from_py_object)]
#[derive(Clone, Copy)]
struct TurnTrajectory(CoreTurn);

#[pymethods]
impl TurnTrajectory {
    #[new]
    #[pyo3(signature = (start, leg1_direction, turn_distance, leg2_direction, speed, start_time = 0.0))]
    fn new(
        start: Point2,
        leg1_direction: (f64, f64),
        turn_distance: f64,
        leg2_direction: (f64, f64),
        speed: f64,
        start_time: f64,
    ) -> PyResult<Self> {
        CoreTurn::from_turn_distance(
            start.0,
            unit(leg1_direction)?,
            turn_distance,
            unit(leg2_direction)?,
            speed,
            start_time,
        )
        .map(Self)
        .map_err(value_error)
    }

    #[getter]
    fn start(&self) -> Point2 {
        Point2(self.0.start)
    }

    #[getter]
    fn turn_point(&self) -> Point2 {
        Point2(self.0.turn_point)
    }

    #[getter]
    fn leg1_direction(&self) -> (f64, f64) {
        pair(self.0.leg1_direction)
    }

    #[getter]
    fn leg2_direction(&self) -> (f64, f64) {
        pair(self.0.leg2_direction)
    }

    #[getter]
    fn speed(&self) -> f64 {
        self.0.speed
    }

    #[getter]
    fn start_time(&self) -> f64 {
        self.0.start_time
    }

    fn turn_time(&self) -> f64 {
        self.0.turn_time()
    }

    fn position_at(&self, t: f64) -> Point2 {
        Point2(self.0.position_at(t))
    }

    #[pyo3(signature = (circle, tolerance = 1e-9))]
    fn entry_exit_times(&self, circle: Circle, tolerance: f64) -> PyResult<Option<(f64, f64)>> {
        Ok(self.0.entry_exit_times(&circle.0, self::tolerance(tolerance)?))
    }

    fn __repr__(&self) -> String {
        let t = self.0;
        format!(
            "TurnTrajectory(start=({}, {}), turn=({}, {}), speed={})",
            t.start.x, t.start.y, t.turn_point.x, t.turn_point.y, t.speed
        )
    }
}

fn route_object(py: Python<'_>, route: CandidateRoute) -> PyResult<Py<PyAny>> {
    Ok(match route {
        CandidateRoute::Line(l) => Py::new(py, DirectedLine(l))?.into_any(),
        CandidateRoute::Linear(l) => Py::new(py, LinearTrajectory(l))?.into_any(),
        CandidateRoute::Turn(t) => Py::new(py, TurnTrajectory(t))?.into_any(),
    })
}

/// Solver output: routes with their verification residuals.
#[pyclass(name = "CandidateSet", module = "trajoracle", frozen, from_py_object)]
#[derive(Clone)]
struct CandidateSet(CoreSet<CandidateRoute>);

#[pymethods]
impl CandidateSet {
    #[getter]
    fn case(&self) -> &'static str {
        self.0.case.as_str()
    }

    /// Why the set is empty, if it is.
    #[getter]
    fn reason(&self) -> PyResult<Option<String>> {
        self.0
            .reason
            .map(|r| serde_json::to_value(r).map(|v| v.as_str().unwrap_or_default().to_string()))
            .transpose()
            .map_err(value_error)
    }

    #[getter]
    fn routes(&self, py: Python<'_>) -> PyResult<Vec<Py<PyAny>>> {
        self.0.routes().map(|r| route_object(py, *r)).collect()
    }

    #[getter]
    fn residuals(&self) -> Vec<f64> {
        self.0.candidates.iter().map(|c| c.residual).collect()
    }

    #[getter]
    fn construction(&self) -> Vec<Circle> {
        self.0.construction.iter().map(|c| Circle(*c)).collect()
    }

    fn to_json(&self) -> String {
        to_json(&CandidateFile::from(self.0.clone()))
    }

    #[staticmethod]
    fn from_json(text: &str) -> PyResult<Self> {
        let file: CandidateFile = from_json(text).map_err(value_error)?;
        Ok(Self(file.into()))
    }

    fn __len__(&self) -> usize {
        self.0.len()
    }

    fn __repr__(&self) -> String {
        format!("CandidateSet(case={}, {} candidates)", self.0.case, self.0.len())
    }
}

/// A scenario document: radars, ground truth or observations, leak policy.
#[pyclass(name = "Scenario", module = "trajoracle", frozen, from_py_object)]
#[derive(Clone)]
struct Scenario(ScenarioFile);

#[pymethods]
impl Scenario {
    #[staticmethod]
    fn from_json(text: &str) -> PyResult<Self> {
        let s: ScenarioFile = from_json(text).map_err(value_error)?;
        s.validate().map_err(value_error)?;
        Ok(Self(s))
    }

    #[staticmethod]
    fn read(path: std::path::PathBuf) -> PyResult<Self> {
        trajectory_oracle::scenario::read_scenario(&path)
            .map(Self)
            .map_err(value_error)
    }

    fn to_json(&self) -> String {
        to_json(&self.0)
    }

    #[getter]
    fn radars(&self) -> Vec<Radar> {
        self.0.radars.iter().cloned().map(Radar).collect()
    }

    #[getter]
    fn ground_truth(&self, py: Python<'_>) -> PyResult<Option<Py<PyAny>>> {
        self.0
            .ground_truth
            .map(|r| match r {
                Route::Linear(l) => route_object(py, l.into()),
                Route::Turn(t) => route_object(py, t.into()),
            })
            .transpose()
    }

    /// Declared case from the `case` metadata entry.
    #[getter]
    fn case(&self) -> Option<&'static str> {
        self.0.declared_case().map(|c| c.as_str())
    }

    /// Observation document leaked by the ground truth under the policy.
    #[pyo3(signature = (tolerance = 1e-9))]
    fn simulate(&self, tolerance: f64) -> PyResult<String> {
        let truth = self
            .0
            .ground_truth
            .as_ref()
            .ok_or_else(|| PyValueError::new_err("scenario has no ground truth"))?;
        let obs = simulate_observations(truth, &self.0.radars, &self.0.policy, self::tolerance(tolerance)?);
        Ok(to_json(&ObservationFile::new(obs)))
    }

    #[pyo3(signature = (candidates = None, construction = false))]
    fn render_svg(&self, candidates: Option<CandidateSet>, construction: bool) -> String {
        trajectory_oracle::svg::render_svg(&self.0, candidates.as_ref().map(|c| &c.0), construction)
    }
}

#[pyfunction]
#[pyo3(signature = (c1, d1, c2, d2, tolerance = 1e-9))]
fn solve_case1(c1: Point2, d1: f64, c2: Point2, d2: f64, tolerance: f64) -> PyResult<CandidateSet> {
    let set = core_case1(c1.0, d1, c2.0, d2, self::tolerance(tolerance)?).map_err(value_error)?;
    Ok(CandidateSet(set.erased()))
}

#[pyfunction]
#[pyo3(signature = (r1, d1, t_in1, t_out1, r2, t_in2, tolerance = 1e-9))]
#[allow(clippy::too_many_arguments)]
fn solve_case2(
    r1: Radar,
    d1: f64,
    t_in1: f64,
    t_out1: f64,
    r2: Radar,
    t_in2: f64,
    tolerance: f64,
) -> PyResult<CandidateSet> {
    let set = core_case2(&r1.0, d1, t_in1, t_out1, &r2.0, t_in2, self::tolerance(tolerance)?)
        .map_err(value_error)?;
    Ok(CandidateSet(set.erased()))
}

#[pyfunction]
#[pyo3(signature = (radar, t_in, t_out, waypoint, waypoint_time, tolerance = 1e-9))]
fn solve_case3(
    radar: Radar,
    t_in: f64,
    t_out: f64,
    waypoint: Point2,
    waypoint_time: f64,
    tolerance: f64,
) -> PyResult<CandidateSet> {
    let wp = TimedWaypoint {
        position: waypoint.0,
        time: waypoint_time,
    };
    let set = core_case3(&radar.0, t_in, t_out, &wp, self::tolerance(tolerance)?).map_err(value_error)?;
    Ok(CandidateSet(set.erased()))
}

#[pyfunction]
#[pyo3(signature = (r1, t_a, t_b, r2, t_c, t_d, tolerance = 1e-9))]
#[allow(clippy::too_many_arguments)]
fn solve_case4(
    r1: Radar,
    t_a: f64,
    t_b: f64,
    r2: Radar,
    t_c: f64,
    t_d: f64,
    tolerance: f64,
) -> PyResult<CandidateSet> {
    let set = core_case4(&r1.0, t_a, t_b, &r2.0, t_c, t_d, self::tolerance(tolerance)?)
        .map_err(value_error)?;
    Ok(CandidateSet(set.erased()))
}

/// One-turn route from its start, heading, flown distance to the entrance,
/// chord length through `threat`, and speed.
#[pyfunction]
#[pyo3(signature = (start, heading, distance_to_entry, inner_chord, threat, speed, start_time = 0.0, tolerance = 1e-9))]
#[allow(clippy::too_many_arguments)]
fn solve_bonus(
    start: Point2,
    heading: (f64, f64),
    distance_to_entry: f64,
    inner_chord: f64,
    threat: Circle,
    speed: f64,
    start_time: f64,
    tolerance: f64,
) -> PyResult<CandidateSet> {
    let input = BonusInput {
        start: start.0,
        leg1_direction: unit(heading)?,
        total_distance_to_entry: distance_to_entry,
        inner_chord,
        threat: threat.0,
    };
    let set = core_bonus(&input, speed, start_time, self::tolerance(tolerance)?).map_err(value_error)?;
    Ok(CandidateSet(set.erased()))
}

#[pymodule]
fn trajoracle(m: &Bound<'_, PyModule>) -> PyResult<()> {
    m.add("FORMAT_VERSION", trajectory_oracle::scenario::FORMAT_VERSION)?;
    m.add_class::<Point2>()?;
    m.add_class::<Circle>()?;
    m.add_class::<Radar>()?;
    m.add_class::<DirectedLine>()?;
    m.add_class::<LinearTrajectory>()?;
    m.add_class::<TurnTrajectory>()?;
    m.add_class::<CandidateSet>()?;
    m.add_class::<Scenario>()?;
    m.add_function(wrap_pyfunction!(solve_case1, m)?)?;
    m.add_function(wrap_pyfunction!(solve_case2, m)?)?;
    m.add_function(wrap_pyfunction!(solve_case3, m)?)?;
    m.add_function(wrap_pyfunction!(solve_case4, m)?)?;
    m.add_function(wrap_pyfunction!(solve_bonus, m)?)?;
    Ok(())
}
