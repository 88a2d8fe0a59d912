//! Planar primitives and the ruler-and-compass constructions used by the
//! reconstruction solvers.
//!
//! Every coincidence or tangency decision goes through [`Tolerance`], a single
//! hybrid epsilon `relative * (1 + scene scale)` where the scene scale is the
//! largest coordinate or radius magnitude among the operands.

use std::ops::{Add, Mul, Neg, Sub};

use serde::{Deserialize, Serialize};
use thiserror::Error;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Error)]
pub enum GeomError {
    #[error("circles coincide; infinitely many intersections or tangents")]
    CoincidentCircles,
    #[error("point coincides with the center of a zero-radius circle")]
    DegeneratePoint,
    #[error("homothety ratio must be finite and nonzero")]
    ZeroRatio,
    #[error("points coincide")]
    CoincidentPoints,
    #[error("direction vector has zero or non-finite length")]
    ZeroDirection,
}

/// Hybrid absolute/relative tolerance for geometric predicates.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Tolerance {
    pub relative: f64,
}

impl Tolerance {
    pub const DEFAULT: Tolerance = Tolerance { relative: 1e-9 };

    pub const fn new(relative: f64) -> Self {
        Self { relative }
    }

    /// Epsilon for a scene whose largest coordinate magnitude is `scale`.
    pub fn eps(&self, scale: f64) -> f64 {
        self.relative * (1.0 + scale.abs())
    }
}

impl Default for Tolerance {
    fn default() -> Self {
        Self::DEFAULT
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Default, Serialize, Deserialize)]
#[serde(from = "[f64; 2]", into = "[f64; 2]")]
pub struct Point2 {
    pub x: f64,
    pub y: f64,
}

impl From<[f64; 2]> for Point2 {
    fn from([x, y]: [f64; 2]) -> Self {
        Self { x, y }
    }
}

impl From<Point2> for [f64; 2] {
    fn from(p: Point2) -> Self {
        [p.x, p.y]
    }
}

impl Point2 {
    pub const ORIGIN: Point2 = Point2 { x: 0.0, y: 0.0 };

    pub const fn new(x: f64, y: f64) -> Self {
        Self { x, y }
    }

    pub fn is_finite(&self) -> bool {
        self.x.is_finite() && self.y.is_finite()
    }

    pub fn to_vec(self) -> Vec2 {
        Vec2::new(self.x, self.y)
    }

    pub fn distance(&self, other: Point2) -> f64 {
        (other - *self).norm()
    }

    pub fn midpoint(&self, other: Point2) -> Point2 {
        Point2::new(0.5 * (self.x + other.x), 0.5 * (self.y + other.y))
    }

    /// Largest coordinate magnitude; feeds [`Tolerance::eps`].
    pub fn magnitude(&self) -> f64 {
        self.x.abs().max(self.y.abs())
    }

    /// Lexicographic comparison by `(x, y)`.
    pub fn lex_cmp(&self, other: &Point2) -> std::cmp::Ordering {
        self.x.total_cmp(&other.x).then(self.y.total_cmp(&other.y))
    }
}

/// Free vector (displacement) in the plane.
#[derive(Debug, Clone, Copy, PartialEq, Default)]
pub struct Vec2 {
    pub x: f64,
    pub y: f64,
}

impl Vec2 {
    pub const fn new(x: f64, y: f64) -> Self {
        Self { x, y }
    }

    pub fn dot(self, other: Vec2) -> f64 {
        self.x * other.x + self.y * other.y
    }

    /// z-component of the 3D cross product.
    pub fn cross(self, other: Vec2) -> f64 {
        self.x * other.y - self.y * other.x
    }

    pub fn norm(self) -> f64 {
        self.x.hypot(self.y)
    }

    /// Counter-clockwise quarter turn.
    pub fn perp(self) -> Vec2 {
        Vec2::new(-self.y, self.x)
    }

    pub fn rotated(self, angle: f64) -> Vec2 {
        let (s, c) = angle.sin_cos();
        Vec2::new(c * self.x - s * self.y, s * self.x + c * self.y)
    }

    pub fn angle(self) -> f64 {
        self.y.atan2(self.x)
    }
}

impl Add<Vec2> for Point2 {
    type Output = Point2;
    fn add(self, v: Vec2) -> Point2 {
        Point2::new(self.x + v.x, self.y + v.y)
    }
}

impl Sub<Vec2> for Point2 {
    type Output = Point2;
    fn sub(self, v: Vec2) -> Point2 {
        Point2::new(self.x - v.x, self.y - v.y)
    }
}

impl Sub for Point2 {
    type Output = Vec2;
    fn sub(self, other: Point2) -> Vec2 {
        Vec2::new(self.x - other.x, self.y - other.y)
    }
}

impl Add for Vec2 {
    type Output = Vec2;
    fn add(self, v: Vec2) -> Vec2 {
        Vec2::new(self.x + v.x, self.y + v.y)
    }
}

impl Sub for Vec2 {
    type Output = Vec2;
    fn sub(self, v: Vec2) -> Vec2 {
        Vec2::new(self.x - v.x, self.y - v.y)
    }
}

impl Neg for Vec2 {
    type Output = Vec2;
    fn neg(self) -> Vec2 {
        Vec2::new(-self.x, -self.y)
    }
}

impl Mul<Vec2> for f64 {
    type Output = Vec2;
    fn mul(self, v: Vec2) -> Vec2 {
        Vec2::new(self * v.x, self * v.y)
    }
}

/// Unit-length direction. Construction normalizes; the fields stay private so
/// the invariant cannot be broken from outside.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(try_from = "[f64; 2]", into = "[f64; 2]")]
pub struct UnitVec2 {
    ux: f64,
    uy: f64,
}

impl UnitVec2 {
    pub const X: UnitVec2 = UnitVec2 { ux: 1.0, uy: 0.0 };
    pub const Y: UnitVec2 = UnitVec2 { ux: 0.0, uy: 1.0 };

    pub fn new(x: f64, y: f64) -> Result<Self, GeomError> {
        Self::from_vec(Vec2::new(x, y))
    }

    pub fn from_vec(v: Vec2) -> Result<Self, GeomError> {
        let n = v.norm();
        if !(n.is_finite() && n > 0.0) {
            return Err(GeomError::ZeroDirection);
        }
        Ok(Self {
            ux: v.x / n,
            uy: v.y / n,
        })
    }

    pub fn from_angle(angle: f64) -> Self {
        let (s, c) = angle.sin_cos();
        Self { ux: c, uy: s }
    }

    pub fn x(&self) -> f64 {
        self.ux
    }

    pub fn y(&self) -> f64 {
        self.uy
    }

    pub fn vec(&self) -> Vec2 {
        Vec2::new(self.ux, self.uy)
    }

    pub fn perp(&self) -> UnitVec2 {
        UnitVec2 {
            ux: -self.uy,
            uy: self.ux,
        }
    }

    pub fn reversed(&self) -> UnitVec2 {
        UnitVec2 {
            ux: -self.ux,
            uy: -self.uy,
        }
    }

    pub fn rotated(&self, angle: f64) -> UnitVec2 {
        let v = self.vec().rotated(angle);
        UnitVec2 { ux: v.x, uy: v.y }
    }

    pub fn angle(&self) -> f64 {
        self.uy.atan2(self.ux)
    }
}

impl TryFrom<[f64; 2]> for UnitVec2 {
    type Error = GeomError;
    fn try_from([x, y]: [f64; 2]) -> Result<Self, GeomError> {
        // Already-unit input is kept bit-for-bit so files round-trip exactly.
        if ((x * x + y * y) - 1.0).abs() <= 1e-12 {
            return Ok(Self { ux: x, uy: y });
        }
        UnitVec2::new(x, y)
    }
}

impl From<UnitVec2> for [f64; 2] {
    fn from(u: UnitVec2) -> Self {
        [u.ux, u.uy]
    }
}

impl Mul<UnitVec2> for f64 {
    type Output = Vec2;
    fn mul(self, u: UnitVec2) -> Vec2 {
        Vec2::new(self * u.ux, self * u.uy)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct DirectedLine {
    pub origin: Point2,
    pub direction: UnitVec2,
}

impl DirectedLine {
    pub fn new(origin: Point2, direction: UnitVec2) -> Self {
        Self { origin, direction }
    }

    pub fn through(p: Point2, q: Point2) -> Result<Self, GeomError> {
        Ok(Self::new(p, UnitVec2::from_vec(q - p)?))
    }

    pub fn point_at(&self, s: f64) -> Point2 {
        self.origin + s * self.direction
    }

    /// Signed position of the orthogonal projection of `p` along the line.
    pub fn parameter_of(&self, p: Point2) -> f64 {
        (p - self.origin).dot(self.direction.vec())
    }

    /// Signed distance, positive on the left of the direction of travel.
    pub fn signed_distance(&self, p: Point2) -> f64 {
        self.direction.vec().cross(p - self.origin)
    }

    pub fn foot_of(&self, p: Point2) -> Point2 {
        self.point_at(self.parameter_of(p))
    }

    pub fn shifted(&self, offset: Vec2) -> Self {
        Self::new(self.origin + offset, self.direction)
    }

    pub fn reversed(&self) -> Self {
        Self::new(self.origin, self.direction.reversed())
    }

    /// Same undirected line: directions parallel modulo pi within `1e-9` and
    /// each origin within `eps` of the other line.
    pub fn same_undirected(&self, other: &DirectedLine, tol: Tolerance) -> bool {
        let scale = self.origin.magnitude().max(other.origin.magnitude());
        self.same_undirected_within(other, 1e-9, tol.eps(scale))
    }

    pub fn same_undirected_within(&self, other: &DirectedLine, angle: f64, offset: f64) -> bool {
        self.direction.vec().cross(other.direction.vec()).abs() <= angle
            && point_line_distance(other.origin, self) <= offset
            && point_line_distance(self.origin, other) <= offset
    }

    /// Canonical `(angle in [0, pi), signed offset)` pair of the undirected line.
    pub fn normal_form(&self) -> (f64, f64) {
        let mut u = self.direction;
        let mut a = u.angle();
        if a < 0.0 {
            a += std::f64::consts::PI;
            u = u.reversed();
        }
        if a >= std::f64::consts::PI {
            a -= std::f64::consts::PI;
            u = u.reversed();
        }
        let offset = u.vec().cross(self.origin.to_vec());
        (a, offset)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Circle {
    pub center: Point2,
    pub radius: f64,
}

impl Circle {
    pub const fn new(center: Point2, radius: f64) -> Self {
        Self { center, radius }
    }

    pub fn scale(&self) -> f64 {
        self.center.magnitude().max(self.radius.abs())
    }

    pub fn contains_on_boundary(&self, p: Point2, tol: Tolerance) -> bool {
        let scale = self.scale().max(p.magnitude());
        (self.center.distance(p) - self.radius).abs() <= tol.eps(scale)
    }
}

/// Which family a common tangent belongs to.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum TangentKind {
    /// Both centers on the same side.
    External,
    /// Centers on opposite sides.
    Internal,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct CommonTangent {
    pub kind: TangentKind,
    pub line: DirectedLine,
}

pub fn point_line_distance(p: Point2, l: &DirectedLine) -> f64 {
    l.signed_distance(p).abs()
}

/// Intersections of a circle with a line, ordered along the line's direction.
/// A line within tolerance of tangency yields the single perpendicular foot.
pub fn circle_line_intersections(c: &Circle, l: &DirectedLine, tol: Tolerance) -> Vec<Point2> {
    let eps = tol.eps(c.scale().max(l.origin.magnitude()));
    let t0 = l.parameter_of(c.center);
    let h = point_line_distance(c.center, l);
    if h > c.radius + eps {
        return Vec::new();
    }
    if (h - c.radius).abs() <= eps {
        return vec![l.point_at(t0)];
    }
    let half = (c.radius * c.radius - h * h).max(0.0).sqrt();
    vec![l.point_at(t0 - half), l.point_at(t0 + half)]
}

/// Intersections of two circles, sorted lexicographically by `(x, y)`.
pub fn circle_circle_intersections(
    c1: &Circle,
    c2: &Circle,
    tol: Tolerance,
) -> Result<Vec<Point2>, GeomError> {
    let eps = tol.eps(c1.scale().max(c2.scale()));
    let delta = c2.center - c1.center;
    let d = delta.norm();
    if d <= eps {
        if (c1.radius - c2.radius).abs() <= eps {
            return Err(GeomError::CoincidentCircles);
        }
        return Ok(Vec::new());
    }
    let (r1, r2) = (c1.radius, c2.radius);
    if d > r1 + r2 + eps || d < (r1 - r2).abs() - eps {
        return Ok(Vec::new());
    }
    let u = (1.0 / d) * delta;
    let a = ((d * d + r1 * r1 - r2 * r2) / (2.0 * d)).clamp(-r1, r1);
    let base = c1.center + a * u;
    // Tangency is judged on the half-chord, since near-tangent circles still
    // have two distinct intersections well above eps apart. A radial gap at
    // rounding level also counts, or exact tangencies would split in two.
    let h = ((r1 - a) * (r1 + a)).max(0.0).sqrt();
    let gap = (d - (r1 + r2)).abs().min((d - (r1 - r2).abs()).abs());
    let rounding = 16.0 * f64::EPSILON * (1.0 + c1.scale().max(c2.scale()));
    if h <= eps || gap <= rounding {
        return Ok(vec![base]);
    }
    let mut pts = vec![base + h * u.perp(), base - h * u.perp()];
    pts.sort_by(Point2::lex_cmp);
    Ok(pts)
}

/// Lines through `p` tangent to `c`.
///
/// A point on the circle gives one line, a point strictly inside gives none.
/// A zero-radius circle gives the single line through `p` and the center.
pub fn tangent_lines_from_point(
    p: Point2,
    c: &Circle,
    tol: Tolerance,
) -> Result<Vec<DirectedLine>, GeomError> {
    let eps = tol.eps(c.scale().max(p.magnitude()));
    let to_center = c.center - p;
    let dist = to_center.norm();
    if c.radius <= eps {
        if dist <= eps {
            return Err(GeomError::DegeneratePoint);
        }
        return Ok(vec![DirectedLine::new(p, UnitVec2::from_vec(to_center)?)]);
    }
    if dist < c.radius - eps {
        return Ok(Vec::new());
    }
    // As with two circles, tangency is judged on how far apart the two
    // touching points would be, not on the radial gap.
    let reach = ((dist - c.radius) * (dist + c.radius)).max(0.0).sqrt();
    let rounding = 16.0 * f64::EPSILON * (1.0 + c.scale().max(p.magnitude()));
    if c.radius * reach / dist <= eps || (dist - c.radius).abs() <= rounding {
        let dir = UnitVec2::from_vec(to_center.perp())?;
        return Ok(vec![DirectedLine::new(p, dir)]);
    }
    // Rotate the bearing to the center by +/- the half-angle subtended by the circle.
    let sin_a = c.radius / dist;
    let cos_a = reach / dist;
    let w = (1.0 / dist) * to_center;
    let rot = |s: f64| Vec2::new(cos_a * w.x - s * w.y, s * w.x + cos_a * w.y);
    Ok(vec![
        DirectedLine::new(p, UnitVec2::from_vec(rot(sin_a))?),
        DirectedLine::new(p, UnitVec2::from_vec(rot(-sin_a))?),
    ])
}

/// Common tangents of two circles, external family first.
///
/// Externals come from tangents drawn from the smaller circle's center to a
/// circle of radius `|r2 - r1|` around the larger one, shifted outward by the
/// smaller radius. Internals use the radius `r1 + r2` and shift inward. Equal
/// radii use the parallel-line formula directly.
pub fn common_tangents(
    c1: &Circle,
    c2: &Circle,
    tol: Tolerance,
) -> Result<Vec<CommonTangent>, GeomError> {
    let eps = tol.eps(c1.scale().max(c2.scale()));
    let d = c1.center.distance(c2.center);
    if d <= eps {
        if (c1.radius - c2.radius).abs() <= eps {
            return Err(GeomError::CoincidentCircles);
        }
        return Ok(Vec::new());
    }

    let mut out: Vec<CommonTangent> = Vec::new();
    let mut push = |kind: TangentKind, line: DirectedLine| {
        if !out.iter().any(|t| t.line.same_undirected(&line, tol)) {
            out.push(CommonTangent { kind, line });
        }
    };

    if (c1.radius - c2.radius).abs() <= eps {
        let u = UnitVec2::from_vec(c2.center - c1.center)?;
        let n = u.perp().vec();
        let r = 0.5 * (c1.radius + c2.radius);
        push(TangentKind::External, DirectedLine::new(c1.center + r * n, u));
        push(TangentKind::External, DirectedLine::new(c1.center - r * n, u));
    } else {
        let (small, large) = if c1.radius < c2.radius { (c1, c2) } else { (c2, c1) };
        let shrunk = Circle::new(large.center, large.radius - small.radius);
        for l in tangent_lines_from_point(small.center, &shrunk, tol)? {
            let side = l.signed_distance(large.center).signum();
            let n = l.direction.perp().vec();
            push(TangentKind::External, l.shifted(-(side * small.radius) * n));
        }
    }

    let grown = Circle::new(c2.center, c1.radius + c2.radius);
    for l in tangent_lines_from_point(c1.center, &grown, tol)? {
        let side = l.signed_distance(c2.center).signum();
        let n = l.direction.perp().vec();
        push(TangentKind::Internal, l.shifted((side * c1.radius) * n));
    }
    Ok(out)
}

pub fn homothety_point(p: Point2, center: Point2, ratio: f64) -> Point2 {
    center + ratio * (p - center)
}

/// Image of `c` under the homothety with the given center and signed ratio.
pub fn homothety_circle(c: &Circle, center: Point2, ratio: f64) -> Result<Circle, GeomError> {
    if !ratio.is_finite() || ratio == 0.0 {
        return Err(GeomError::ZeroRatio);
    }
    Ok(Circle::new(
        homothety_point(c.center, center, ratio),
        ratio.abs() * c.radius,
    ))
}

/// Perpendicular bisector of `pq`, directed by the left normal of `q - p`.
pub fn perpendicular_bisector(
    p: Point2,
    q: Point2,
    tol: Tolerance,
) -> Result<DirectedLine, GeomError> {
    let eps = tol.eps(p.magnitude().max(q.magnitude()));
    let v = q - p;
    if v.norm() <= eps {
        return Err(GeomError::CoincidentPoints);
    }
    Ok(DirectedLine::new(p.midpoint(q), UnitVec2::from_vec(v.perp())?))
}

pub fn rotate_about(p: Point2, center: Point2, angle: f64) -> Point2 {
    center + (p - center).rotated(angle)
}

/// Intersection of two lines, `None` when parallel within `1e-12`.
pub fn line_line_intersection(a: &DirectedLine, b: &DirectedLine) -> Option<Point2> {
    let denom = a.direction.vec().cross(b.direction.vec());
    if denom.abs() <= 1e-12 {
        return None;
    }
    let s = (b.origin - a.origin).cross(b.direction.vec()) / denom;
    Some(a.point_at(s))
}
