//! Observation fragments to solver calls, and ground-truth containment.

use trajectory_oracle::kinematics::simulate_observations;
use trajectory_oracle::reconstruct::{
    same_line_within, same_trajectory_within, same_turn_within, solve_bonus, solve_case1,
    solve_case2, solve_case3, solve_case4, BonusInput, CandidateRoute,
};
use trajectory_oracle::scenario::ScenarioFile;
use trajectory_oracle::{
    CandidateSet, CaseTag, Circle, ObservationSet, Point2, Radar, RadarObservation, Route,
    TimedWaypoint, Tolerance,
};

use crate::error::CliError;

/// Distance within which a candidate counts as the ground truth.
pub const MATCH_TOLERANCE: f64 = 1e-6;

/// Solver arguments pulled out of an observation set.
#[derive(Debug, Clone, PartialEq)]
pub enum CaseInputs {
    Case1 {
        c1: Point2,
        d1: f64,
        c2: Point2,
        d2: f64,
    },
    Case2 {
        r1: Radar,
        d1: f64,
        t_in1: f64,
        t_out1: f64,
        r2: Radar,
        t_in2: f64,
    },
    Case3 {
        radar: Radar,
        t_in: f64,
        t_out: f64,
        waypoint: TimedWaypoint,
    },
    Case4 {
        r1: Radar,
        t_a: f64,
        t_b: f64,
        r2: Radar,
        t_c: f64,
        t_d: f64,
    },
    Bonus {
        input: BonusInput,
        speed: f64,
        start_time: f64,
    },
}

/// Observed radars in scenario order, paired with their observation.
fn observed<'a>(
    radars: &'a [Radar],
    obs: &'a ObservationSet,
) -> Result<Vec<(&'a Radar, &'a RadarObservation)>, CliError> {
    obs.radars
        .iter()
        .filter(|o| !o.is_empty())
        .map(|o| {
            radars
                .iter()
                .find(|r| r.id == o.radar_id)
                .map(|r| (r, o))
                .ok_or_else(|| CliError::Invariant(format!("unknown radar '{}'", o.radar_id)))
        })
        .collect()
}

fn insufficient(case: CaseTag, missing: &[&str]) -> CliError {
    CliError::Insufficient {
        case,
        missing: missing.iter().map(|s| s.to_string()).collect(),
    }
}

pub fn extract_inputs(
    case: CaseTag,
    radars: &[Radar],
    obs: &ObservationSet,
) -> Result<CaseInputs, CliError> {
    let seen = observed(radars, obs)?;
    let times = |o: &RadarObservation| o.entry_time.zip(o.exit_time);
    match case {
        CaseTag::Case1 => {
            let with_d: Vec<_> = seen
                .iter()
                .filter_map(|(r, o)| o.closest_distance.map(|d| (*r, d)))
                .collect();
            match with_d.as_slice() {
                [(r1, d1), (r2, d2), ..] => Ok(CaseInputs::Case1 {
                    c1: r1.threat.center,
                    d1: *d1,
                    c2: r2.threat.center,
                    d2: *d2,
                }),
                [_] => Err(insufficient(case, &["closest_distance for a second radar"])),
                [] => Err(insufficient(
                    case,
                    &["closest_distance for a first radar", "closest_distance for a second radar"],
                )),
            }
        }
        CaseTag::Case2 => {
            let full: Vec<_> = seen
                .iter()
                .filter_map(|(r, o)| Some((*r, o.closest_distance?, times(o)?)))
                .collect();
            if full.is_empty() {
                let mut missing = Vec::new();
                if !seen.iter().any(|(_, o)| o.closest_distance.is_some()) {
                    missing.push("closest_distance for the first radar");
                }
                if !seen.iter().any(|(_, o)| times(o).is_some()) {
                    missing.push("entry_time and exit_time for the first radar");
                }
                if missing.is_empty() {
                    missing.push("closest_distance, entry_time and exit_time on one radar");
                }
                return Err(insufficient(case, &missing));
            }
            for (r1, d1, (t_in1, t_out1)) in &full {
                let second = seen
                    .iter()
                    .filter(|(r, _)| r.id != r1.id)
                    .find_map(|(r, o)| o.entry_time.filter(|t| *t > *t_in1).map(|t| (*r, t)));
                if let Some((r2, t_in2)) = second {
                    return Ok(CaseInputs::Case2 {
                        r1: (*r1).clone(),
                        d1: *d1,
                        t_in1: *t_in1,
                        t_out1: *t_out1,
                        r2: r2.clone(),
                        t_in2,
                    });
                }
            }
            Err(insufficient(case, &["entry_time for a second radar, later than the first entry"]))
        }
        CaseTag::Case3 => {
            let radar = seen.iter().find_map(|(r, o)| times(o).map(|t| (*r, t)));
            match (radar, obs.waypoint) {
                (Some((radar, (t_in, t_out))), Some(waypoint)) => Ok(CaseInputs::Case3 {
                    radar: radar.clone(),
                    t_in,
                    t_out,
                    waypoint,
                }),
                (r, w) => {
                    let mut missing = Vec::new();
                    if r.is_none() {
                        missing.push("entry_time and exit_time for one radar");
                    }
                    if w.is_none() {
                        missing.push("timed waypoint");
                    }
                    Err(insufficient(case, &missing))
                }
            }
        }
        CaseTag::Case4 => {
            let mut timed: Vec<_> = seen
                .iter()
                .filter_map(|(r, o)| times(o).map(|t| (*r, t)))
                .collect();
            if timed.len() < 2 {
                let missing: &[&str] = if timed.is_empty() {
                    &["entry_time and exit_time for a first radar", "entry_time and exit_time for a second radar"]
                } else {
                    &["entry_time and exit_time for a second radar"]
                };
                return Err(insufficient(case, missing));
            }
            timed.sort_by(|a, b| a.1 .0.total_cmp(&b.1 .0));
            for (i, (r1, (t_a, t_b))) in timed.iter().enumerate() {
                if let Some((r2, (t_c, t_d))) = timed[i + 1..].iter().find(|(_, (t_c, _))| t_c >= t_b) {
                    return Ok(CaseInputs::Case4 {
                        r1: (*r1).clone(),
                        t_a: *t_a,
                        t_b: *t_b,
                        r2: (*r2).clone(),
                        t_c: *t_c,
                        t_d: *t_d,
                    });
                }
            }
            Err(CliError::Invariant(
                "no pair of radars with disjoint jamming intervals".into(),
            ))
        }
        CaseTag::Bonus => {
            let radar = seen.iter().find_map(|(r, o)| times(o).map(|t| (*r, t)));
            let mut missing = Vec::new();
            if radar.is_none() {
                missing.push("entry_time and exit_time for one radar");
            }
            if obs.speed.is_none() {
                missing.push("speed");
            }
            if obs.waypoint.is_none() {
                missing.push("start waypoint");
            }
            if obs.heading.is_none() {
                missing.push("initial heading");
            }
            let (Some((radar, (t_in, t_out))), Some(speed), Some(start), Some(heading)) =
                (radar, obs.speed, obs.waypoint, obs.heading)
            else {
                return Err(insufficient(case, &missing));
            };
            Ok(CaseInputs::Bonus {
                input: BonusInput {
                    start: start.position,
                    leg1_direction: heading,
                    total_distance_to_entry: speed * (t_in - start.time),
                    inner_chord: speed * (t_out - t_in),
                    threat: Circle::new(radar.threat.center, radar.threat.radius),
                },
                speed,
                start_time: start.time,
            })
        }
    }
}

pub fn solve(inputs: &CaseInputs, tol: Tolerance) -> Result<CandidateSet<CandidateRoute>, CliError> {
    Ok(match inputs {
        CaseInputs::Case1 { c1, d1, c2, d2 } => solve_case1(*c1, *d1, *c2, *d2, tol)?.erased(),
        CaseInputs::Case2 {
            r1,
            d1,
            t_in1,
            t_out1,
            r2,
            t_in2,
        } => solve_case2(r1, *d1, *t_in1, *t_out1, r2, *t_in2, tol)?.erased(),
        CaseInputs::Case3 {
            radar,
            t_in,
            t_out,
            waypoint,
        } => solve_case3(radar, *t_in, *t_out, waypoint, tol)?.erased(),
        CaseInputs::Case4 {
            r1,
            t_a,
            t_b,
            r2,
            t_c,
            t_d,
        } => solve_case4(r1, *t_a, *t_b, r2, *t_c, *t_d, tol)?.erased(),
        CaseInputs::Bonus {
            input,
            speed,
            start_time,
        } => solve_bonus(input, *speed, *start_time, tol)?.erased(),
    })
}

/// Observations carried by the scenario, or simulated from its ground truth.
pub fn scenario_observations(scenario: &ScenarioFile, tol: Tolerance) -> Result<ObservationSet, CliError> {
    if let Some(obs) = &scenario.observations {
        return Ok(obs.clone());
    }
    let truth = scenario
        .ground_truth
        .as_ref()
        .ok_or_else(|| CliError::Invariant("scenario has neither observations nor ground truth".into()))?;
    Ok(simulate_observations(truth, &scenario.radars, &scenario.policy, tol))
}

pub fn reconstruct(
    case: CaseTag,
    radars: &[Radar],
    obs: &ObservationSet,
    tol: Tolerance,
) -> Result<CandidateSet<CandidateRoute>, CliError> {
    solve(&extract_inputs(case, radars, obs)?, tol)
}

/// Whether `candidate` reproduces `truth`: the line for undirected
/// candidates, the full timed route otherwise.
pub fn matches_truth(candidate: &CandidateRoute, truth: &Route, tol: f64) -> bool {
    match (candidate, truth) {
        (CandidateRoute::Line(l), Route::Linear(t)) => same_line_within(l, &t.line(), tol),
        (CandidateRoute::Linear(c), Route::Linear(t)) => same_trajectory_within(t, c, tol),
        (CandidateRoute::Turn(c), Route::Turn(t)) => same_turn_within(t, c, tol),
        _ => false,
    }
}

/// Index of the first candidate matching `truth`.
pub fn find_truth(set: &CandidateSet<CandidateRoute>, truth: &Route, tol: f64) -> Option<usize> {
    set.candidates
        .iter()
        .position(|c| matches_truth(&c.route, truth, tol))
}

#[derive(Debug, Clone)]
pub struct RoundtripReport {
    pub case: CaseTag,
    pub candidates: usize,
    pub best_residual: Option<f64>,
    pub matched: Option<usize>,
    pub reason: Option<String>,
}

impl RoundtripReport {
    pub fn passed(&self) -> bool {
        self.matched.is_some()
    }
}

impl std::fmt::Display for RoundtripReport {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(f, "case {}: {} candidate(s)", self.case, self.candidates)?;
        if let Some(r) = self.best_residual {
            write!(f, ", best residual {r:.3e}")?;
        }
        if let Some(reason) = &self.reason {
            write!(f, ", reason {reason}")?;
        }
        match self.matched {
            Some(i) => write!(f, ", ground truth matched by candidate {i}"),
            None => write!(f, ", ground truth NOT matched"),
        }
    }
}

pub fn roundtrip(scenario: &ScenarioFile, case: CaseTag, tol: Tolerance) -> Result<RoundtripReport, CliError> {
    let truth = scenario
        .ground_truth
        .as_ref()
        .ok_or_else(|| CliError::Invariant("roundtrip needs a ground truth".into()))?;
    let obs = scenario_observations(scenario, tol)?;
    let set = reconstruct(case, &scenario.radars, &obs, tol)?;
    Ok(RoundtripReport {
        case,
        candidates: set.len(),
        best_residual: set
            .candidates
            .iter()
            .map(|c| c.residual)
            .min_by(f64::total_cmp),
        matched: find_truth(&set, truth, MATCH_TOLERANCE),
        reason: set.reason.map(|r| format!("{r:?}")),
    })
}
