//! Orientation predicates and the pseudotriangle test for quadrilaterals.

use core::f64::consts::PI;

use crate::error::{Error, Result};
use crate::math;

pub type Point = [f64; 2];

/// Relative collinearity threshold for three consecutive vertices.
pub const DEFAULT_ANGLE_TOL: f64 = 1e-12;

/// Twice the signed area of triangle `pqr`; positive when counterclockwise.
#[inline]
pub fn orient(p: Point, q: Point, r: Point) -> f64 {
    (q[0] - p[0]) * (r[1] - p[1]) - (q[1] - p[1]) * (r[0] - p[0])
}

#[inline]
pub fn cross(u: Point, v: Point) -> f64 {
    u[0] * v[1] - u[1] * v[0]
}

#[inline]
pub fn sub(a: Point, b: Point) -> Point {
    [a[0] - b[0], a[1] - b[1]]
}

#[inline]
pub fn dist(a: Point, b: Point) -> f64 {
    math::hypot(a[0] - b[0], a[1] - b[1])
}

fn on_segment(p: Point, q: Point, r: Point) -> bool {
    r[0] >= p[0].min(q[0]) && r[0] <= p[0].max(q[0]) && r[1] >= p[1].min(q[1]) && r[1] <= p[1].max(q[1])
}

/// Closed-segment intersection test from exact orientation signs.
pub fn segments_intersect(p1: Point, p2: Point, p3: Point, p4: Point) -> bool {
    let d1 = orient(p3, p4, p1);
    let d2 = orient(p3, p4, p2);
    let d3 = orient(p1, p2, p3);
    let d4 = orient(p1, p2, p4);
    if ((d1 > 0.0 && d2 < 0.0) || (d1 < 0.0 && d2 > 0.0)) && ((d3 > 0.0 && d4 < 0.0) || (d3 < 0.0 && d4 > 0.0)) {
        return true;
    }
    (d1 == 0.0 && on_segment(p3, p4, p1))
        || (d2 == 0.0 && on_segment(p3, p4, p2))
        || (d3 == 0.0 && on_segment(p1, p2, p3))
        || (d4 == 0.0 && on_segment(p1, p2, p4))
}

/// A 4-gon is simple iff neither pair of opposite edges meets.
pub fn is_simple_quad(quad: &[Point; 4]) -> bool {
    !segments_intersect(quad[0], quad[1], quad[2], quad[3]) && !segments_intersect(quad[1], quad[2], quad[3], quad[0])
}

fn check_angles(quad: &[Point; 4], tol: f64) -> Result<[f64; 4]> {
    if quad.iter().flatten().any(|x| !x.is_finite()) {
        return Err(Error::NonFinite);
    }
    for i in 0..4 {
        for j in (i + 1)..4 {
            if quad[i] == quad[j] {
                return Err(Error::InvalidInput("quadrilateral vertices must be distinct"));
            }
        }
    }
    let mut turns = [0.0; 4];
    for i in 0..4 {
        let prev = quad[(i + 3) % 4];
        let next = quad[(i + 1) % 4];
        let o = orient(prev, quad[i], next);
        if o.abs() <= tol * dist(prev, quad[i]) * dist(next, quad[i]) {
            return Err(Error::DegenerateAngle { vertex: i });
        }
        turns[i] = o;
    }
    Ok(turns)
}

/// True iff the quadrilateral (vertices in cyclic order) is simple and has
/// exactly three interior angles below π, i.e. it is simple and non-convex.
pub fn is_pseudotriangle(quad: &[Point; 4]) -> Result<bool> {
    is_pseudotriangle_with_tol(quad, DEFAULT_ANGLE_TOL)
}

pub fn is_pseudotriangle_with_tol(quad: &[Point; 4], tol: f64) -> Result<bool> {
    let turns = check_angles(quad, tol)?;
    if !is_simple_quad(quad) {
        return Ok(false);
    }
    let positive = turns.iter().filter(|&&o| o > 0.0).count();
    Ok(positive == 1 || positive == 3)
}

/// Interior angles of a simple quadrilateral, or `None` when it self-intersects.
pub fn interior_angles(quad: &[Point; 4]) -> Result<Option<[f64; 4]>> {
    check_angles(quad, DEFAULT_ANGLE_TOL)?;
    if !is_simple_quad(quad) {
        return Ok(None);
    }
    let area2: f64 = (0..4).map(|i| cross(quad[i], quad[(i + 1) % 4])).sum();
    let ccw = if area2 > 0.0 { 1.0 } else { -1.0 };
    let mut angles = [0.0; 4];
    for i in 0..4 {
        let ein = sub(quad[i], quad[(i + 3) % 4]);
        let eout = sub(quad[(i + 1) % 4], quad[i]);
        let turn = math::atan2(cross(ein, eout), ein[0] * eout[0] + ein[1] * eout[1]);
        angles[i] = PI - ccw * turn;
    }
    Ok(Some(angles))
}
