//! Construction diagrams as standalone SVG.
//!
//! World coordinates are used directly with the y axis flipped. Infinite lines
//! are clipped to the view box; strokes do not scale with the drawing.

use std::fmt::Write;

use crate::geom::{Circle, DirectedLine, Point2};
use crate::kinematics::Route;
use crate::reconstruct::{CandidateRoute, CandidateSet, CaseTag};
use crate::scenario::ScenarioFile;

#[derive(Debug, Clone, Copy)]
struct Bounds {
    min_x: f64,
    min_y: f64,
    max_x: f64,
    max_y: f64,
}

impl Bounds {
    fn empty() -> Self {
        Self {
            min_x: f64::INFINITY,
            min_y: f64::INFINITY,
            max_x: f64::NEG_INFINITY,
            max_y: f64::NEG_INFINITY,
        }
    }

    fn add(&mut self, p: Point2) {
        if p.is_finite() {
            self.min_x = self.min_x.min(p.x);
            self.min_y = self.min_y.min(p.y);
            self.max_x = self.max_x.max(p.x);
            self.max_y = self.max_y.max(p.y);
        }
    }

    fn add_circle(&mut self, c: &Circle) {
        self.add(Point2::new(c.center.x - c.radius, c.center.y - c.radius));
        self.add(Point2::new(c.center.x + c.radius, c.center.y + c.radius));
    }

    /// Grows by `fraction` of the larger side on every edge.
    fn padded(self, fraction: f64) -> Self {
        if !self.min_x.is_finite() {
            return Self {
                min_x: -1.0,
                min_y: -1.0,
                max_x: 1.0,
                max_y: 1.0,
            };
        }
        let side = (self.max_x - self.min_x).max(self.max_y - self.min_y).max(1e-6);
        let m = fraction * side;
        Self {
            min_x: self.min_x - m,
            min_y: self.min_y - m,
            max_x: self.max_x + m,
            max_y: self.max_y + m,
        }
    }

    fn size(&self) -> f64 {
        (self.max_x - self.min_x).max(self.max_y - self.min_y)
    }

    /// Liang-Barsky clip of `origin + s * dir` for `s` in `[s0, s1]`.
    fn clip(&self, line: &DirectedLine, s0: f64, s1: f64) -> Option<(Point2, Point2)> {
        let (px, py) = (line.origin.x, line.origin.y);
        let (dx, dy) = (line.direction.x(), line.direction.y());
        let mut lo = s0;
        let mut hi = s1;
        for (p, q) in [
            (-dx, px - self.min_x),
            (dx, self.max_x - px),
            (-dy, py - self.min_y),
            (dy, self.max_y - py),
        ] {
            if p == 0.0 {
                if q < 0.0 {
                    return None;
                }
                continue;
            }
            let r = q / p;
            if p < 0.0 {
                lo = lo.max(r);
            } else {
                hi = hi.min(r);
            }
        }
        (lo < hi).then(|| (line.point_at(lo), line.point_at(hi)))
    }
}

fn case_color(case: CaseTag) -> &'static str {
    match case {
        CaseTag::Case1 => "#1f77b4",
        CaseTag::Case2 => "#2ca02c",
        CaseTag::Case3 => "#9467bd",
        CaseTag::Case4 => "#ff7f0e",
        CaseTag::Bonus => "#d62728",
    }
}

fn escape(text: &str) -> String {
    let mut out = String::with_capacity(text.len());
    for ch in text.chars() {
        match ch {
            '&' => out.push_str("&amp;"),
            '<' => out.push_str("&lt;"),
            '>' => out.push_str("&gt;"),
            '"' => out.push_str("&quot;"),
            '\'' => out.push_str("&apos;"),
            c => out.push(c),
        }
    }
    out
}

fn num(v: f64) -> String {
    let s = format!("{v:.6}");
    let s = s.trim_end_matches('0').trim_end_matches('.');
    if s == "-0" {
        "0".to_string()
    } else {
        s.to_string()
    }
}

struct Canvas {
    out: String,
    bounds: Bounds,
}

impl Canvas {
    fn circle(&mut self, c: &Circle, class: &str, extra: &str) {
        let _ = writeln!(
            self.out,
            r#"  <circle class="{class}" cx="{}" cy="{}" r="{}"{extra}/>"#,
            num(c.center.x),
            num(-c.center.y),
            num(c.radius)
        );
    }

    fn segment(&mut self, a: Point2, b: Point2, class: &str, extra: &str) {
        let _ = writeln!(
            self.out,
            r#"  <line class="{class}" x1="{}" y1="{}" x2="{}" y2="{}"{extra}/>"#,
            num(a.x),
            num(-a.y),
            num(b.x),
            num(-b.y)
        );
    }

    fn clipped(&mut self, line: &DirectedLine, s0: f64, s1: f64, class: &str, extra: &str) {
        if let Some((a, b)) = self.bounds.clip(line, s0, s1) {
            self.segment(a, b, class, extra);
        }
    }

    fn polyline(&mut self, points: &[Point2], class: &str, extra: &str) {
        let pts: Vec<String> = points
            .iter()
            .map(|p| format!("{},{}", num(p.x), num(-p.y)))
            .collect();
        let _ = writeln!(
            self.out,
            r#"  <polyline class="{class}" points="{}"{extra}/>"#,
            pts.join(" ")
        );
    }

    /// Start, turn point, then the second leg out to the edge of the view.
    fn turn_route(&mut self, start: Point2, turn: Point2, leg2: &DirectedLine, class: &str, extra: &str) {
        let mut points = vec![start, turn];
        if let Some((_, far)) = self.bounds.clip(leg2, 0.0, f64::INFINITY) {
            points.push(far);
        }
        self.polyline(&points, class, extra);
    }

    fn route(&mut self, route: &Route, class: &str, extra: &str) {
        match route {
            Route::Linear(l) => self.clipped(&l.line(), f64::NEG_INFINITY, f64::INFINITY, class, extra),
            Route::Turn(t) => {
                let leg2 = DirectedLine::new(t.turn_point, t.leg2_direction);
                self.turn_route(t.start, t.turn_point, &leg2, class, extra);
            }
        }
    }
}

/// Renders the scenario's radars and ground truth, optionally overlaid with a
/// candidate set and the auxiliary circles of its construction.
pub fn render_svg(
    scenario: &ScenarioFile,
    candidates: Option<&CandidateSet<CandidateRoute>>,
    show_construction: bool,
) -> String {
    let mut bounds = Bounds::empty();
    for r in &scenario.radars {
        bounds.add_circle(&r.threat);
    }
    match &scenario.ground_truth {
        Some(Route::Linear(l)) => bounds.add(l.anchor),
        Some(Route::Turn(t)) => {
            bounds.add(t.start);
            bounds.add(t.turn_point);
        }
        None => {}
    }
    if let Some(wp) = scenario.observations.as_ref().and_then(|o| o.waypoint) {
        bounds.add(wp.position);
    }
    if let Some(set) = candidates {
        for c in &set.candidates {
            match c.route {
                CandidateRoute::Line(l) => bounds.add(l.origin),
                CandidateRoute::Linear(l) => bounds.add(l.anchor),
                CandidateRoute::Turn(t) => {
                    bounds.add(t.start);
                    bounds.add(t.turn_point);
                }
            }
        }
        if show_construction {
            for c in &set.construction {
                bounds.add_circle(c);
            }
        }
    }
    let bounds = bounds.padded(0.1);
    let label_size = bounds.size() * 0.03;
    let marker = bounds.size() * 0.006;

    let mut canvas = Canvas {
        out: String::new(),
        bounds,
    };
    let _ = writeln!(
        canvas.out,
        r#"<svg xmlns="http://www.w3.org/2000/svg" viewBox="{} {} {} {}">"#,
        num(bounds.min_x),
        num(-bounds.max_y),
        num(bounds.max_x - bounds.min_x),
        num(bounds.max_y - bounds.min_y)
    );
    canvas.out.push_str(concat!(
        "  <style>\n",
        "    * { vector-effect: non-scaling-stroke; }\n",
        "    .threat { fill: none; stroke: #555; stroke-width: 1.5; stroke-dasharray: 6 4; }\n",
        "    .radar { fill: #555; }\n",
        "    .construction { fill: none; stroke: #aaa; stroke-width: 1; stroke-dasharray: 2 3; }\n",
        "    .ground-truth { fill: none; stroke: #000; stroke-width: 2.5; }\n",
        "    .candidate { fill: none; stroke-width: 1.5; }\n",
        "    .waypoint { fill: #000; }\n",
        "    text { font-family: sans-serif; fill: #333; }\n",
        "  </style>\n",
    ));

    if show_construction {
        if let Some(set) = candidates {
            for c in &set.construction {
                canvas.circle(c, "construction", "");
            }
        }
    }

    for r in &scenario.radars {
        canvas.circle(&r.threat, "threat", "");
        canvas.circle(&Circle::new(r.threat.center, marker), "radar", "");
        let _ = writeln!(
            canvas.out,
            r#"  <text x="{}" y="{}" font-size="{}">{}</text>"#,
            num(r.threat.center.x + marker * 2.0),
            num(-(r.threat.center.y + marker * 2.0)),
            num(label_size),
            escape(&r.id)
        );
    }

    if let Some(wp) = scenario.observations.as_ref().and_then(|o| o.waypoint) {
        canvas.circle(&Circle::new(wp.position, marker * 1.5), "waypoint", "");
    }

    if let Some(route) = &scenario.ground_truth {
        canvas.route(route, "ground-truth", "");
    }

    if let Some(set) = candidates {
        let class = format!("candidate case-{}", set.case.as_str());
        let stroke = format!(r#" stroke="{}""#, case_color(set.case));
        for c in &set.candidates {
            match c.route {
                CandidateRoute::Line(l) => {
                    canvas.clipped(&l, f64::NEG_INFINITY, f64::INFINITY, &class, &stroke)
                }
                CandidateRoute::Linear(l) => {
                    canvas.clipped(&l.line(), f64::NEG_INFINITY, f64::INFINITY, &class, &stroke)
                }
                CandidateRoute::Turn(t) => {
                    let leg2 = DirectedLine::new(t.turn_point, t.leg2_direction);
                    canvas.turn_route(t.start, t.turn_point, &leg2, &class, &stroke);
                }
            }
        }
    }

    canvas.out.push_str("</svg>\n");
    canvas.out
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::geom::{Tolerance, UnitVec2};
    use crate::kinematics::{LinearTrajectory, Radar};
    use crate::reconstruct::solve_case1;

    fn scenario() -> ScenarioFile {
        let mut s = ScenarioFile::new(vec![
            Radar::new("r1", Point2::ORIGIN, 5.0),
            Radar::new("r<2>", Point2::new(10.0, 0.0), 5.0),
        ]);
        s.ground_truth = Some(Route::Linear(
            LinearTrajectory::new(Point2::new(-4.0, 3.0), UnitVec2::X, 1.0, 0.0).unwrap(),
        ));
        s
    }

    #[test]
    fn draws_radars_truth_and_candidates() {
        let s = scenario();
        let set = solve_case1(Point2::ORIGIN, 3.0, Point2::new(10.0, 0.0), 3.0, Tolerance::DEFAULT)
            .unwrap()
            .erased();
        let svg = render_svg(&s, Some(&set), false);
        assert!(svg.starts_with("<svg"));
        assert!(svg.trim_end().ends_with("</svg>"));
        assert_eq!(svg.matches(r#"class="threat""#).count(), 2);
        assert_eq!(svg.matches("class=\"candidate case-1\"").count(), set.len());
        assert_eq!(svg.matches(r#"class="ground-truth""#).count(), 1);
        assert!(svg.contains("r&lt;2&gt;"));
        assert!(!svg.contains("class=\"construction\""));
        let with = render_svg(&s, Some(&set), true);
        assert_eq!(with.matches("class=\"construction\"").count(), set.construction.len());
    }

    #[test]
    fn clipping_stays_inside_bounds() {
        let b = Bounds {
            min_x: -1.0,
            min_y: -1.0,
            max_x: 1.0,
            max_y: 1.0,
        };
        let l = DirectedLine::new(Point2::new(0.0, 0.5), UnitVec2::X);
        let (a, c) = b.clip(&l, f64::NEG_INFINITY, f64::INFINITY).unwrap();
        assert_eq!((a.x, c.x), (-1.0, 1.0));
        let outside = DirectedLine::new(Point2::new(0.0, 5.0), UnitVec2::X);
        assert!(b.clip(&outside, f64::NEG_INFINITY, f64::INFINITY).is_none());
        let ray = DirectedLine::new(Point2::ORIGIN, UnitVec2::Y);
        let (a, c) = b.clip(&ray, 0.0, f64::INFINITY).unwrap();
        assert_eq!((a.y, c.y), (0.0, 1.0));
    }
}
