//! Brute-force reference for [`super::solve_case4`].
//!
//! Lines are parametrized directly by their direction angle and their signed
//! offset from the first center, the four crossing points are computed by
//! line/circle intersection, and the two crossing ratios are matched by a grid
//! scan followed by damped Gauss-Newton refinement. Nothing here shares code
//! with the chord-distance equation used by the solver.

use super::Case4Ratios;
use crate::geom::{DirectedLine, Point2, UnitVec2};
use crate::kinematics::Radar;

/// Smallest grid the oracle accepts per parameter.
pub const MIN_RESOLUTION: usize = 64;

/// Ratio mismatch allowed for an accepted line.
pub const RATIO_TOLERANCE: f64 = 1e-4;

/// Subdivision applied around each coarse minimum.
const ZOOM: usize = 8;

/// Coarse cells resampled on each side of a coarse minimum.
const REACH: usize = 1;

struct Scene {
    o1: Point2,
    r1: f64,
    o2: Point2,
    r2: f64,
    x: f64,
    y: f64,
}

impl Scene {
    /// Line through `o1 + offset * r1 * n(theta)` heading `theta`.
    fn line(&self, theta: f64, offset: f64) -> DirectedLine {
        let dir = UnitVec2::from_angle(theta);
        DirectedLine::new(self.o1 + (offset * self.r1) * dir.perp(), dir)
    }

    /// Crossing parameters `(s_a, s_b, s_c, s_d)` along the line.
    fn crossings(&self, theta: f64, offset: f64) -> Option<[f64; 4]> {
        let l = self.line(theta, offset);
        let hit = |c: Point2, r: f64| {
            let mid = l.parameter_of(c);
            let h = l.signed_distance(c);
            let disc = r * r - h * h;
            (disc >= 0.0).then(|| (mid - disc.sqrt(), mid + disc.sqrt()))
        };
        let (a, b) = hit(self.o1, self.r1)?;
        let (c, d) = hit(self.o2, self.r2)?;
        Some([a, b, c, d])
    }

    fn mismatch(&self, theta: f64, offset: f64) -> Option<[f64; 2]> {
        let [a, b, c, d] = self.crossings(theta, offset)?;
        let ab = b - a;
        if ab <= 0.0 {
            return None;
        }
        Some([(c - b) / ab - self.x, (d - c) / ab - self.y])
    }

    fn cost(&self, theta: f64, offset: f64) -> f64 {
        self.mismatch(theta, offset)
            .map(|[u, v]| u * u + v * v)
            .unwrap_or(f64::INFINITY)
    }

    /// Mismatch scaled up near each point of `known`, so that iterations
    /// are pushed away from roots already found.
    fn deflated(&self, theta: f64, offset: f64, known: &[(f64, f64)]) -> Option<[f64; 2]> {
        let [u, v] = self.mismatch(theta, offset)?;
        let scale: f64 = known
            .iter()
            .map(|&(t, o)| 1.0 + 1.0 / ((theta - t).powi(2) + (offset - o).powi(2)))
            .product();
        Some([u * scale, v * scale])
    }

    /// Damped Gauss-Newton with a forward-difference Jacobian, deflated by
    /// `known`.
    fn refine(&self, mut theta: f64, mut offset: f64, known: &[(f64, f64)]) -> (f64, f64, f64) {
        let residual = |t: f64, o: f64| self.deflated(t, o, known);
        let cost_at = |t: f64, o: f64| residual(t, o).map(|[u, v]| u * u + v * v).unwrap_or(f64::INFINITY);
        let mut cost = cost_at(theta, offset);
        let mut damping = 1e-3;
        let h = 1e-7;
        for _ in 0..200 {
            let Some(g) = residual(theta, offset) else {
                break;
            };
            // Forward difference, backward near the feasibility boundary.
            let column = |dt: f64, doff: f64| {
                if let Some(m) = residual(theta + dt, offset + doff) {
                    Some([(m[0] - g[0]) / h, (m[1] - g[1]) / h])
                } else {
                    let m = residual(theta - dt, offset - doff)?;
                    Some([(g[0] - m[0]) / h, (g[1] - m[1]) / h])
                }
            };
            let (Some(jt), Some(jo)) = (column(h, 0.0), column(0.0, h)) else {
                break;
            };
            let j = [[jt[0], jo[0]], [jt[1], jo[1]]];
            // Normal equations (J^T J + damping I) step = -J^T g.
            let jtj = [
                [j[0][0] * j[0][0] + j[1][0] * j[1][0], j[0][0] * j[0][1] + j[1][0] * j[1][1]],
                [j[0][1] * j[0][0] + j[1][1] * j[1][0], j[0][1] * j[0][1] + j[1][1] * j[1][1]],
            ];
            let jtg = [
                j[0][0] * g[0] + j[1][0] * g[1],
                j[0][1] * g[0] + j[1][1] * g[1],
            ];
            let mut improved = false;
            for _ in 0..20 {
                let m00 = jtj[0][0] + damping;
                let m11 = jtj[1][1] + damping;
                let det = m00 * m11 - jtj[0][1] * jtj[1][0];
                if det == 0.0 || !det.is_finite() {
                    damping *= 10.0;
                    continue;
                }
                let dt = -(m11 * jtg[0] - jtj[0][1] * jtg[1]) / det;
                let doff = -(m00 * jtg[1] - jtj[1][0] * jtg[0]) / det;
                let trial = cost_at(theta + dt, offset + doff);
                if trial < cost {
                    theta += dt;
                    offset += doff;
                    cost = trial;
                    damping = (damping * 0.3).max(1e-15);
                    improved = true;
                    break;
                }
                damping *= 10.0;
            }
            if !improved || cost < 1e-28 {
                break;
            }
        }
        (theta, offset, cost)
    }
}

/// Lines whose crossings with the two threat circles occur in the order
/// `A, B, C, D` with `BC/AB` and `CD/AB` matching `ratios`.
///
/// Scans direction angle over `[0, 2 pi)` and offset over the first circle's
/// diameter on a `resolution x resolution` grid (clamped to at least
/// [`MIN_RESOLUTION`]), then resamples around every grid-local minimum and refines the minima
/// found there. Each accepted root seeds further deflated restarts.
pub fn case4_oracle(r1: &Radar, r2: &Radar, ratios: Case4Ratios, resolution: usize) -> Vec<DirectedLine> {
    let n = resolution.max(MIN_RESOLUTION);
    let scene = Scene {
        o1: r1.threat.center,
        r1: r1.threat.radius,
        o2: r2.threat.center,
        r2: r2.threat.radius,
        x: ratios.x,
        y: ratios.y,
    };
    let tau = std::f64::consts::TAU;
    let theta_at = |i: usize| tau * i as f64 / n as f64;
    let offset_at = |j: usize| -1.0 + 2.0 * (j as f64 + 0.5) / n as f64;
    let grid: Vec<f64> = (0..n * n)
        .map(|k| scene.cost(theta_at(k / n), offset_at(k % n)))
        .collect();
    let at = |i: usize, j: usize| grid[(i % n) * n + j];

    let mut found: Vec<DirectedLine> = Vec::new();
    let mut roots: Vec<(f64, f64)> = Vec::new();
    let mut accept = |theta: f64, offset: f64, known: &[(f64, f64)]| -> Option<(f64, f64)> {
        let (theta, offset, _) = scene.refine(theta, offset, known);
        let (theta, offset, _) = scene.refine(theta, offset, &[]);
        let [a, b, cc, d] = scene.crossings(theta, offset)?;
        let [u, v] = scene.mismatch(theta, offset)?;
        let ordered = a < b && b <= cc + 1e-9 * (1.0 + cc.abs()) && cc < d;
        if !ordered || u.abs() > RATIO_TOLERANCE || v.abs() > RATIO_TOLERANCE {
            return None;
        }
        let line = scene.line(theta, offset);
        let line = DirectedLine::new(line.point_at(a), line.direction);
        let dup = found.iter().any(|f| {
            f.direction.vec().dot(line.direction.vec()) > 0.0
                && f.same_undirected_within(&line, 1e-7, 1e-7 * (1.0 + scene.r1))
        });
        if dup {
            return None;
        }
        found.push(line);
        Some((theta, offset))
    };
    let (dt, doff) = (tau / n as f64, 2.0 / n as f64);
    for i in 0..n {
        for j in 0..n {
            if !is_local_min(n, n, true, |i, j| at(i, j), i, j) {
                continue;
            }
            // Nearby roots can share a coarse cell, so each coarse minimum
            // is resampled finer over its neighbourhood.
            let m = (2 * REACH + 1) * ZOOM;
            let (t0, o0) = (theta_at(i) - REACH as f64 * dt, offset_at(j) - REACH as f64 * doff);
            let sub = |a: usize, b: usize| {
                (t0 + dt * (a as f64 + 0.5) / ZOOM as f64, o0 + doff * (b as f64 + 0.5) / ZOOM as f64)
            };
            let fine: Vec<f64> = (0..m * m)
                .map(|k| {
                    let (t, o) = sub(k / m, k % m);
                    scene.cost(t, o)
                })
                .collect();
            let mut seeds = vec![(theta_at(i), offset_at(j))];
            for a in 0..m {
                for b in 0..m {
                    if is_local_min(m, m, false, |a, b| fine[a * m + b], a, b) {
                        seeds.push(sub(a, b));
                    }
                }
            }
            for (t, o) in seeds {
                roots.extend(accept(t, o, &[]));
            }
        }
    }
    // Roots closer together than the grid can resolve are recovered by
    // restarting next to each known root with all known roots deflated.
    let mut next = 0;
    while next < roots.len() {
        let (t, o) = roots[next];
        next += 1;
        for k in 0..8 {
            let phi = std::f64::consts::FRAC_PI_4 * k as f64;
            let seed = (t + dt * phi.cos(), o + doff * phi.sin());
            let known = roots.clone();
            roots.extend(accept(seed.0, seed.1, &known));
        }
    }
    found.sort_by(|p, q| {
        let (pa, po) = p.normal_form();
        let (qa, qo) = q.normal_form();
        pa.total_cmp(&qa).then(po.total_cmp(&qo))
    });
    found
}

/// Whether cell `(i, j)` is finite and no larger than its eight neighbours.
/// The first axis wraps when `wrap` is set.
fn is_local_min(rows: usize, cols: usize, wrap: bool, at: impl Fn(usize, usize) -> f64, i: usize, j: usize) -> bool {
    let c = at(i, j);
    if !c.is_finite() {
        return false;
    }
    (-1i64..=1).all(|di| {
        (-1i64..=1).all(|dj| {
            let (ii, jj) = (i as i64 + di, j as i64 + dj);
            if (di == 0 && dj == 0) || jj < 0 || jj >= cols as i64 {
                return true;
            }
            let ii = if wrap {
                ii.rem_euclid(rows as i64)
            } else if ii < 0 || ii >= rows as i64 {
                return true;
            } else {
                ii
            };
            c <= at(ii as usize, jj as usize)
        })
    })
}
