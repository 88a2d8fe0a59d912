//! Entry and exit times for two radars, nothing else.
//!
//! Along the route the four crossings `A, B` (first circle) and `C, D`
//! (second circle) are spaced in the ratios `BC/AB = x`, `CD/AB = y` given by
//! the times. Parametrize by the distance `p` from the first center to the
//! route. Then the half-chord is `a = sqrt(R1^2 - p^2)`, the second half-chord
//! is `y a`, its distance from the second center is
//! `q = sqrt(R2^2 - (y a)^2)` and the chord midpoints are `s = a (1 + 2x + y)`
//! apart. The known center distance `D` then gives one equation in `p`:
//!
//! ```text
//! f(p) = s^2 + (p -/+ q)^2 - D^2 = 0
//! ```
//!
//! with `-` when both centers sit on the same side of the route. Roots are
//! bracketed on a uniform grid and refined by bisection; tangential (double)
//! roots are caught by minimizing `|f|` around grid-local minima.

use serde::{Deserialize, Serialize};

use super::{
    duplicate_trajectory, require_finite, trajectory_key, CandidateSet, CaseTag, ReconstructError,
};
use crate::geom::{Point2, Tolerance, UnitVec2, Vec2};
use crate::kinematics::{LinearTrajectory, Radar};

/// Grid size used to bracket roots of the center-distance equation.
pub const CASE4_SAMPLES: usize = 2048;

const BISECTION_WIDTH: f64 = 1e-12;
const MAX_BISECTIONS: usize = 200;

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Case4Ratios {
    /// `BC / AB`
    pub x: f64,
    /// `CD / AB`
    pub y: f64,
}

impl Case4Ratios {
    pub fn from_times(t_a: f64, t_b: f64, t_c: f64, t_d: f64) -> Result<Self, ReconstructError> {
        require_finite(&[t_a, t_b, t_c, t_d], "times")?;
        if !(t_a < t_b && t_b <= t_c && t_c < t_d) {
            return Err(ReconstructError::InvalidTimes(format!(
                "need t_A < t_B <= t_C < t_D, got {t_a}, {t_b}, {t_c}, {t_d}"
            )));
        }
        let ab = t_b - t_a;
        Ok(Self {
            x: (t_c - t_b) / ab,
            y: (t_d - t_c) / ab,
        })
    }
}

/// One placement of the route relative to the two centers.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Case4Branch {
    /// Distance from the first center to chord `AB`.
    pub p: f64,
    /// Distance from the second center to chord `CD`.
    pub q: f64,
    /// Distance between the chord midpoints.
    pub s: f64,
    pub same_side: bool,
    /// Mirror the placement across the line through the centers.
    pub direction_flip: bool,
}

/// Chord quantities for a given `p`, `None` where the second chord would not fit.
fn chords(p: f64, r1: f64, r2: f64, ratios: Case4Ratios) -> Option<(f64, f64, f64)> {
    let a = ((r1 - p) * (r1 + p)).max(0.0).sqrt();
    // Rounding may push the feasibility edge itself a few ulps past `r2`.
    let half_cd = ratios.y * a;
    if half_cd > r2 * (1.0 + 8.0 * f64::EPSILON) {
        return None;
    }
    let half_cd = half_cd.min(r2);
    let q = ((r2 - half_cd) * (r2 + half_cd)).max(0.0).sqrt();
    let s = a * (1.0 + 2.0 * ratios.x + ratios.y);
    Some((a, q, s))
}

fn residual_fn(
    r1: f64,
    r2: f64,
    centers: f64,
    ratios: Case4Ratios,
    same_side: bool,
) -> impl Fn(f64) -> f64 {
    move |p| match chords(p, r1, r2, ratios) {
        Some((_, q, s)) => {
            let lateral = if same_side { p - q } else { p + q };
            s * s + lateral * lateral - centers * centers
        }
        None => f64::NAN,
    }
}

fn bisect(f: &impl Fn(f64) -> f64, mut lo: f64, mut hi: f64) -> f64 {
    let mut f_lo = f(lo);
    for _ in 0..MAX_BISECTIONS {
        if hi - lo <= BISECTION_WIDTH {
            break;
        }
        let mid = 0.5 * (lo + hi);
        let f_mid = f(mid);
        if f_mid == 0.0 {
            return mid;
        }
        if (f_mid < 0.0) == (f_lo < 0.0) {
            lo = mid;
            f_lo = f_mid;
        } else {
            hi = mid;
        }
    }
    0.5 * (lo + hi)
}

/// Minimizes `g` on `[lo, hi]` by golden-section search.
fn golden_min(g: &impl Fn(f64) -> f64, mut lo: f64, mut hi: f64) -> f64 {
    const INV_PHI: f64 = 0.618_033_988_749_894_9;
    let mut c = hi - INV_PHI * (hi - lo);
    let mut d = lo + INV_PHI * (hi - lo);
    let (mut gc, mut gd) = (g(c), g(d));
    for _ in 0..200 {
        if hi - lo <= BISECTION_WIDTH {
            break;
        }
        if gc < gd {
            hi = d;
            d = c;
            gd = gc;
            c = hi - INV_PHI * (hi - lo);
            gc = g(c);
        } else {
            lo = c;
            c = d;
            gc = gd;
            d = lo + INV_PHI * (hi - lo);
            gd = g(d);
        }
    }
    0.5 * (lo + hi)
}

/// All roots of `f` on `[lo, hi]` found from `samples` uniform evaluations.
/// `f` may be NaN where undefined; such samples break brackets.
fn find_roots(f: &impl Fn(f64) -> f64, lo: f64, hi: f64, samples: usize, zero_tol: f64) -> Vec<f64> {
    let n = samples.max(3);
    let ps: Vec<f64> = (0..n)
        .map(|i| lo + (hi - lo) * i as f64 / (n - 1) as f64)
        .collect();
    let fs: Vec<f64> = ps.iter().map(|&p| f(p)).collect();
    let mut roots = Vec::new();
    for i in 0..n {
        if fs[i] == 0.0 {
            roots.push(ps[i]);
        }
    }
    for i in 0..n - 1 {
        let (a, b) = (fs[i], fs[i + 1]);
        if a.is_finite() && b.is_finite() && a != 0.0 && b != 0.0 && (a < 0.0) != (b < 0.0) {
            roots.push(bisect(f, ps[i], ps[i + 1]));
        }
    }
    // Where |f| dips toward zero without a sign change, a double root or a
    // close pair of roots may hide between samples.
    let mut probe = |lo: usize, hi: usize, sign: f64| {
        let g = |p: f64| sign * f(p);
        let p_min = golden_min(&g, ps[lo], ps[hi]);
        let g_min = g(p_min);
        if g_min < 0.0 {
            roots.push(bisect(f, ps[lo], p_min));
            roots.push(bisect(f, p_min, ps[hi]));
        } else if g_min <= zero_tol {
            roots.push(p_min);
        }
    };
    for i in 1..n - 1 {
        let (a, b, c) = (fs[i - 1], fs[i], fs[i + 1]);
        if !(a.is_finite() && b.is_finite() && c.is_finite()) || b == 0.0 {
            continue;
        }
        let sign = b.signum();
        if a * sign <= 0.0 || c * sign <= 0.0 {
            continue;
        }
        if b.abs() > a.abs() || b.abs() > c.abs() {
            continue;
        }
        probe(i - 1, i + 1, sign);
    }
    // At the interval ends q or a behaves like a square root, so a peak can
    // sit inside the first or last cell with no dip visible at the samples.
    for (lo, hi) in [(0, 1), (n - 2, n - 1)] {
        let (a, b) = (fs[lo], fs[hi]);
        if a.is_finite() && b.is_finite() && a != 0.0 && b != 0.0 && (a < 0.0) == (b < 0.0) {
            probe(lo, hi, a.signum());
        }
    }
    roots
}

/// Rigid placement of a solved branch onto the actual centers. Returns the
/// entry point `A` and the direction of travel.
fn place(branch: &Case4Branch, a: f64, o1: Point2, o2: Point2) -> Option<(Point2, UnitVec2)> {
    // Local frame: route on the x-axis flying +x, chord AB centered at 0.
    let side = if branch.direction_flip { -1.0 } else { 1.0 };
    let second_side = if branch.same_side { side } else { -side };
    let o1_local = Vec2::new(0.0, side * branch.p);
    let o2_local = Vec2::new(branch.s, second_side * branch.q);
    let rotation = (o2 - o1).angle() - (o2_local - o1_local).angle();
    let a_local = Vec2::new(-a, 0.0);
    let entry = o1 + (a_local - o1_local).rotated(rotation);
    let direction = UnitVec2::from_angle(rotation);
    entry.is_finite().then_some((entry, direction))
}

pub fn solve_case4(
    r1: &Radar,
    t_a: f64,
    t_b: f64,
    r2: &Radar,
    t_c: f64,
    t_d: f64,
    tol: Tolerance,
) -> Result<CandidateSet<LinearTrajectory>, ReconstructError> {
    solve_case4_with_samples(r1, t_a, t_b, r2, t_c, t_d, CASE4_SAMPLES, tol)
}

#[allow(clippy::too_many_arguments)]
pub fn solve_case4_with_samples(
    r1: &Radar,
    t_a: f64,
    t_b: f64,
    r2: &Radar,
    t_c: f64,
    t_d: f64,
    samples: usize,
    tol: Tolerance,
) -> Result<CandidateSet<LinearTrajectory>, ReconstructError> {
    let ratios = Case4Ratios::from_times(t_a, t_b, t_c, t_d)?;
    let (o1, o2) = (r1.threat.center, r2.threat.center);
    let (rad1, rad2) = (r1.threat.radius, r2.threat.radius);
    if !(rad1 > 0.0 && rad2 > 0.0) {
        return Err(ReconstructError::InvalidInput(
            "threat radii must be positive".into(),
        ));
    }
    let scale = r1.threat.scale().max(r2.threat.scale());
    let centers = o1.distance(o2);
    if centers <= tol.eps(scale) {
        return Err(ReconstructError::CoincidentCenters);
    }

    // The second chord fits only while y a <= R2.
    let a_max = (rad2 / ratios.y).min(rad1);
    let p_lo = ((rad1 - a_max) * (rad1 + a_max)).max(0.0).sqrt();
    let zero_tol = tol.eps(scale) * centers;

    let mut set = CandidateSet::new(CaseTag::Case4);
    let same = duplicate_trajectory(tol);
    for same_side in [true, false] {
        let f = residual_fn(rad1, rad2, centers, ratios, same_side);
        for p in find_roots(&f, p_lo, rad1, samples, zero_tol) {
            let Some((a, q, s)) = chords(p, rad1, rad2, ratios) else {
                continue;
            };
            if a <= tol.eps(scale) {
                continue;
            }
            let speed = 2.0 * a / (t_b - t_a);
            for direction_flip in [false, true] {
                let branch = Case4Branch {
                    p,
                    q,
                    s,
                    same_side,
                    direction_flip,
                };
                let Some((entry, direction)) = place(&branch, a, o1, o2) else {
                    continue;
                };
                let traj = LinearTrajectory::new(entry, direction, speed, t_a)?;
                let residual = residual(&traj, r1, r2, [t_a, t_b, t_c, t_d], tol);
                set.offer(traj, residual, &same);
            }
        }
    }
    Ok(set.finish(trajectory_key))
}

fn residual(traj: &LinearTrajectory, r1: &Radar, r2: &Radar, times: [f64; 4], tol: Tolerance) -> f64 {
    match (
        traj.entry_exit_times(&r1.threat, tol),
        traj.entry_exit_times(&r2.threat, tol),
    ) {
        (Some((a, b)), Some((c, d))) => [a, b, c, d]
            .iter()
            .zip(times)
            .map(|(sim, obs)| (sim - obs).abs())
            .fold(0.0, f64::max),
        _ => f64::INFINITY,
    }
}
