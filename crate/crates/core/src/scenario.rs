//! Versioned JSON documents: scenarios, observation files and candidate files.
//!
//! Output is deterministic: struct fields keep declaration order, maps are
//! sorted, and every float is written with 17 significant digits (the shortest
//! fixed width that round-trips any `f64`).

use std::collections::{BTreeMap, HashSet};
use std::io;
use std::path::Path;

use serde::de::DeserializeOwned;
use serde::{Deserialize, Serialize};
use serde_json::ser::{Formatter, PrettyFormatter};
use thiserror::Error;

use crate::geom::Circle;
use crate::kinematics::{InformationPolicy, ObservationSet, Radar, Route};
use crate::reconstruct::{Candidate, CandidateRoute, CandidateSet, CaseTag, NoSolutionReason};

pub const FORMAT_VERSION: &str = "trajectory-oracle/1";

#[derive(Debug, Error)]
pub enum DocumentError {
    #[error("cannot read {path}: {source}")]
    Io { path: String, source: io::Error },
    #[error("parse error: {0}")]
    Parse(#[from] serde_json::Error),
    #[error("invalid document: {0}")]
    Invariant(String),
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ScenarioFile {
    pub version: String,
    pub radars: Vec<Radar>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub ground_truth: Option<Route>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub observations: Option<ObservationSet>,
    #[serde(default)]
    pub policy: InformationPolicy,
    #[serde(default, skip_serializing_if = "BTreeMap::is_empty")]
    pub metadata: BTreeMap<String, String>,
}

impl ScenarioFile {
    pub fn new(radars: Vec<Radar>) -> Self {
        Self {
            version: FORMAT_VERSION.to_string(),
            radars,
            ground_truth: None,
            observations: None,
            policy: InformationPolicy::default(),
            metadata: BTreeMap::new(),
        }
    }

    pub fn radar(&self, id: &str) -> Option<&Radar> {
        self.radars.iter().find(|r| r.id == id)
    }

    /// Case named in the metadata under `case`, if any.
    pub fn declared_case(&self) -> Option<CaseTag> {
        self.metadata.get("case").and_then(|c| c.parse().ok())
    }

    pub fn validate(&self) -> Result<(), DocumentError> {
        check_version(&self.version)?;
        if self.ground_truth.is_none() && self.observations.is_none() {
            return Err(invariant("scenario needs ground_truth or observations"));
        }
        let mut seen = HashSet::new();
        for r in &self.radars {
            if !seen.insert(r.id.as_str()) {
                return Err(invariant(format!("duplicate radar id '{}'", r.id)));
            }
            let c = r.threat;
            if !(c.radius > 0.0 && c.radius.is_finite() && c.center.is_finite()) {
                return Err(invariant(format!("radar '{}' has an invalid threat circle", r.id)));
            }
        }
        for id in self.policy.radars.keys() {
            if !seen.contains(id.as_str()) {
                return Err(invariant(format!("policy names unknown radar '{id}'")));
            }
        }
        if let Some(obs) = &self.observations {
            validate_observations(obs, &seen)?;
        }
        if let Some(route) = &self.ground_truth {
            if !(route.speed() > 0.0 && route.speed().is_finite()) {
                return Err(invariant("ground truth speed must be positive"));
            }
        }
        Ok(())
    }
}

fn validate_observations(obs: &ObservationSet, ids: &HashSet<&str>) -> Result<(), DocumentError> {
    for o in &obs.radars {
        if !ids.contains(o.radar_id.as_str()) {
            return Err(invariant(format!(
                "observation for unknown radar '{}'",
                o.radar_id
            )));
        }
        if let (Some(a), Some(b)) = (o.entry_time, o.exit_time) {
            if a > b {
                return Err(invariant(format!("radar '{}': entry after exit", o.radar_id)));
            }
        }
        if o.closest_distance.is_some_and(|d| d < 0.0) {
            return Err(invariant(format!(
                "radar '{}': negative closest distance",
                o.radar_id
            )));
        }
    }
    if obs.speed.is_some_and(|s| s <= 0.0) {
        return Err(invariant("observed speed must be positive"));
    }
    Ok(())
}

/// Output of `simulate`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ObservationFile {
    pub version: String,
    pub observations: ObservationSet,
}

impl ObservationFile {
    pub fn new(observations: ObservationSet) -> Self {
        Self {
            version: FORMAT_VERSION.to_string(),
            observations,
        }
    }
}

/// Output of `reconstruct`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct CandidateFile {
    pub version: String,
    pub case: CaseTag,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub reason: Option<NoSolutionReason>,
    pub candidates: Vec<Candidate<CandidateRoute>>,
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub construction: Vec<Circle>,
}

impl From<CandidateSet<CandidateRoute>> for CandidateFile {
    fn from(set: CandidateSet<CandidateRoute>) -> Self {
        Self {
            version: FORMAT_VERSION.to_string(),
            case: set.case,
            reason: set.reason,
            candidates: set.candidates,
            construction: set.construction,
        }
    }
}

impl From<CandidateFile> for CandidateSet<CandidateRoute> {
    fn from(file: CandidateFile) -> Self {
        CandidateSet {
            case: file.case,
            candidates: file.candidates,
            reason: file.reason,
            construction: file.construction,
        }
    }
}

fn invariant(msg: impl Into<String>) -> DocumentError {
    DocumentError::Invariant(msg.into())
}

fn check_version(v: &str) -> Result<(), DocumentError> {
    if v == FORMAT_VERSION {
        Ok(())
    } else {
        Err(invariant(format!(
            "unsupported version '{v}', expected '{FORMAT_VERSION}'"
        )))
    }
}

/// Parses a document; version and invariants are checked by the caller.
pub fn from_json<T: DeserializeOwned>(text: &str) -> Result<T, DocumentError> {
    Ok(serde_json::from_str(text)?)
}

pub fn read_document<T: DeserializeOwned>(path: &Path) -> Result<T, DocumentError> {
    let text = std::fs::read_to_string(path).map_err(|source| DocumentError::Io {
        path: path.display().to_string(),
        source,
    })?;
    from_json(&text)
}

pub fn read_scenario(path: &Path) -> Result<ScenarioFile, DocumentError> {
    let s: ScenarioFile = read_document(path)?;
    s.validate()?;
    Ok(s)
}

pub fn read_observations(path: &Path) -> Result<ObservationFile, DocumentError> {
    let o: ObservationFile = read_document(path)?;
    check_version(&o.version)?;
    Ok(o)
}

pub fn read_candidates(path: &Path) -> Result<CandidateFile, DocumentError> {
    let c: CandidateFile = read_document(path)?;
    check_version(&c.version)?;
    Ok(c)
}

/// Pretty JSON with 17-significant-digit floats and a trailing newline.
pub fn to_json<T: Serialize>(value: &T) -> String {
    let mut buf = Vec::new();
    let mut ser = serde_json::Serializer::with_formatter(&mut buf, FixedDigits::default());
    value
        .serialize(&mut ser)
        .expect("in-memory serialization of plain data");
    buf.push(b'\n');
    String::from_utf8(buf).expect("serde_json writes UTF-8")
}

/// `%.17g`-style rendering: positional for exponents in `[-5, 17)`,
/// scientific otherwise, trailing zeros trimmed.
pub fn format_float(v: f64) -> String {
    if !v.is_finite() {
        return "null".to_string();
    }
    if v == 0.0 {
        return if v.is_sign_negative() { "-0.0" } else { "0.0" }.to_string();
    }
    let sci = format!("{:.16e}", v);
    let (mantissa, exp) = sci.split_once('e').expect("exponent present");
    let exp: i32 = exp.parse().expect("integer exponent");
    let (sign, mantissa) = match mantissa.strip_prefix('-') {
        Some(m) => ("-", m),
        None => ("", mantissa),
    };
    let digits: String = mantissa.chars().filter(|c| *c != '.').collect();
    let digits = digits.trim_end_matches('0');
    let digits = if digits.is_empty() { "0" } else { digits };
    if (-5..17).contains(&exp) {
        let point = exp + 1;
        let body = if point <= 0 {
            format!("0.{}{}", "0".repeat((-point) as usize), digits)
        } else if point as usize >= digits.len() {
            format!("{}{}.0", digits, "0".repeat(point as usize - digits.len()))
        } else {
            let (int, frac) = digits.split_at(point as usize);
            format!("{int}.{frac}")
        };
        format!("{sign}{body}")
    } else {
        let (lead, rest) = digits.split_at(1);
        if rest.is_empty() {
            format!("{sign}{lead}e{exp}")
        } else {
            format!("{sign}{lead}.{rest}e{exp}")
        }
    }
}

#[derive(Default)]
struct FixedDigits {
    pretty: PrettyFormatter<'static>,
}

impl Formatter for FixedDigits {
    fn write_f64<W: ?Sized + io::Write>(&mut self, writer: &mut W, value: f64) -> io::Result<()> {
        writer.write_all(format_float(value).as_bytes())
    }

    fn begin_array<W: ?Sized + io::Write>(&mut self, w: &mut W) -> io::Result<()> {
        self.pretty.begin_array(w)
    }

    fn end_array<W: ?Sized + io::Write>(&mut self, w: &mut W) -> io::Result<()> {
        self.pretty.end_array(w)
    }

    fn begin_array_value<W: ?Sized + io::Write>(&mut self, w: &mut W, first: bool) -> io::Result<()> {
        self.pretty.begin_array_value(w, first)
    }

    fn end_array_value<W: ?Sized + io::Write>(&mut self, w: &mut W) -> io::Result<()> {
        self.pretty.end_array_value(w)
    }

    fn begin_object<W: ?Sized + io::Write>(&mut self, w: &mut W) -> io::Result<()> {
        self.pretty.begin_object(w)
    }

    fn end_object<W: ?Sized + io::Write>(&mut self, w: &mut W) -> io::Result<()> {
        self.pretty.end_object(w)
    }

    fn begin_object_key<W: ?Sized + io::Write>(&mut self, w: &mut W, first: bool) -> io::Result<()> {
        self.pretty.begin_object_key(w, first)
    }

    fn begin_object_value<W: ?Sized + io::Write>(&mut self, w: &mut W) -> io::Result<()> {
        self.pretty.begin_object_value(w)
    }

    fn end_object_value<W: ?Sized + io::Write>(&mut self, w: &mut W) -> io::Result<()> {
        self.pretty.end_object_value(w)
    }
}
