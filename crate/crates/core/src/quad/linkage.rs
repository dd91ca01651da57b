//! Four-bar assembly: bar lengths, Grashof type and coupler placement.

use crate::error::{Error, Result};
use crate::geom::polygon::{dist, Point};
use crate::math;

/// Bar lengths `AB, BC, CD, DA`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct LinkLengths {
    l: [f64; 4],
}

impl LinkLengths {
    /// Checks positivity and that every bar is shorter than the other three
    /// together.
    pub fn new(l: [f64; 4]) -> Result<Self> {
        if l.iter().any(|x| !x.is_finite()) {
            return Err(Error::NonFinite);
        }
        if l.iter().any(|&x| x <= 0.0) {
            return Err(Error::InvalidInput("bar lengths must be positive"));
        }
        let total: f64 = l.iter().sum();
        if l.iter().any(|&x| x >= total - x) {
            return Err(Error::NoAssembly);
        }
        Ok(LinkLengths { l })
    }

    pub fn as_array(&self) -> [f64; 4] {
        self.l
    }

    pub fn ab(&self) -> f64 {
        self.l[0]
    }

    pub fn bc(&self) -> f64 {
        self.l[1]
    }

    pub fn cd(&self) -> f64 {
        self.l[2]
    }

    pub fn da(&self) -> f64 {
        self.l[3]
    }

    pub fn total(&self) -> f64 {
        self.l.iter().sum()
    }

    /// Bounds `(c_min, c_max)` on `cos θ` for which the coupler circles meet.
    /// Values outside `[-1, 1]` mean the bound is never active.
    pub fn crank_cos_range(&self) -> (f64, f64) {
        let [l1, l2, l3, l4] = self.l;
        let den = 2.0 * l1 * l4;
        let base = l1 * l1 + l4 * l4;
        ((base - (l2 + l3) * (l2 + l3)) / den, (base - (l2 - l3) * (l2 - l3)) / den)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum GrashofClass {
    /// Longest plus shortest exceeds the other two: one oriented loop.
    SingleLoop,
    /// Longest plus shortest is below the other two: two loops.
    TwoLoops,
    NonGeneric,
}

impl GrashofClass {
    pub fn name(self) -> &'static str {
        match self {
            GrashofClass::SingleLoop => "SingleLoop",
            GrashofClass::TwoLoops => "TwoLoops",
            GrashofClass::NonGeneric => "NonGeneric",
        }
    }

    pub fn branch_count(self) -> usize {
        match self {
            GrashofClass::SingleLoop => 1,
            GrashofClass::TwoLoops => 2,
            GrashofClass::NonGeneric => 0,
        }
    }
}

/// Grashof type of the linkage.
///
/// Lengths count as non-generic when any signed sum `l₁ ± l₂ ± l₃ ± l₄`
/// vanishes within `tol · Σl`. That covers the Grashof equality, the other
/// two pairings and a tight quadrilateral inequality, i.e. every case in
/// which the linkage can fold flat.
pub fn grashof_class(l: &LinkLengths, tol: f64) -> Result<GrashofClass> {
    let x = l.as_array();
    let band = tol * l.total();
    for mask in 1..8u32 {
        let mut s = x[0];
        for (k, &v) in x[1..].iter().enumerate() {
            s += if mask & (1 << k) != 0 { -v } else { v };
        }
        if s.abs() <= band {
            return Ok(GrashofClass::NonGeneric);
        }
    }
    let mut sorted = x;
    sorted.sort_by(f64::total_cmp);
    let gap = sorted[0] + sorted[3] - sorted[1] - sorted[2];
    Ok(if gap > 0.0 { GrashofClass::SingleLoop } else { GrashofClass::TwoLoops })
}

/// A placed four-bar `ABCD`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Quadrilateral {
    pub a: Point,
    pub b: Point,
    pub c: Point,
    pub d: Point,
}

impl Quadrilateral {
    pub fn new(a: Point, b: Point, c: Point, d: Point) -> Self {
        Quadrilateral { a, b, c, d }
    }

    pub fn vertices(&self) -> [Point; 4] {
        [self.a, self.b, self.c, self.d]
    }

    /// Diagonal `C − A`.
    pub fn ac(&self) -> Point {
        [self.c[0] - self.a[0], self.c[1] - self.a[1]]
    }

    /// Diagonal `D − B`.
    pub fn bd(&self) -> Point {
        [self.d[0] - self.b[0], self.d[1] - self.b[1]]
    }

    /// `|AB|, |BC|, |CD|, |DA|`.
    pub fn edge_lengths(&self) -> [f64; 4] {
        [dist(self.a, self.b), dist(self.b, self.c), dist(self.c, self.d), dist(self.d, self.a)]
    }

    /// Mirror image in the x-axis.
    pub fn reflected(&self) -> Self {
        let r = |p: Point| [p[0], -p[1]];
        Quadrilateral { a: r(self.a), b: r(self.b), c: r(self.c), d: r(self.d) }
    }

    pub fn max_distance(&self, other: &Quadrilateral) -> f64 {
        self.vertices().iter().zip(other.vertices()).map(|(p, q)| dist(*p, q)).fold(0.0, f64::max)
    }
}

/// Result of [`solve_coupler`].
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct CouplerSolution {
    pub quad: Quadrilateral,
    /// The coupler circles are tangent: both assembly branches coincide.
    pub dead_point: bool,
}

/// Relative half-chord below which a placement is reported as a dead point.
pub const DEAD_POINT_TOL: f64 = 1e-9;

/// Places `A` at the origin, `B = (l₁, 0)`, `D = l₄(cos θ, sin θ)` and `C` on
/// the circles about `B` and `D`. Branch `+1` puts `C` on the right of the
/// directed line from `B` to `D`.
pub fn solve_coupler(l: &LinkLengths, theta: f64, branch: i32) -> Result<CouplerSolution> {
    if !theta.is_finite() {
        return Err(Error::NonFinite);
    }
    if branch != 1 && branch != -1 {
        return Err(Error::InvalidInput("branch must be +1 or -1"));
    }
    let (cmin, cmax) = l.crank_cos_range();
    let c = math::cos(theta);
    let slack = 1e-12;
    if c < cmin - slack || c > cmax + slack {
        return Err(Error::OutOfRange);
    }
    place(l, theta, c - cmin, cmax - c, branch as f64)
}

/// Coupler placement from the crank angle and the gaps `cos θ − c_min` and
/// `c_max − cos θ`, which callers near a dead point can supply without
/// cancellation. `side` scales the half-chord (`±1`, or `0` at a dead point).
pub(crate) fn place(l: &LinkLengths, theta: f64, gap_low: f64, gap_high: f64, side: f64) -> Result<CouplerSolution> {
    let [l1, l2, l3, l4] = l.as_array();
    let c = math::cos(theta);
    let b = [l1, 0.0];
    let d = [l4 * c, l4 * math::sin(theta)];
    let r2 = l1 * l1 + l4 * l4 - 2.0 * l1 * l4 * c;
    let r = math::sqrt(r2);
    if r <= 1e-12 * l.total() {
        return Err(Error::NonGeneric);
    }
    let u = [(d[0] - b[0]) / r, (d[1] - b[1]) / r];
    let along = (r2 + l2 * l2 - l3 * l3) / (2.0 * r);
    // Product form avoids cancellation near the dead points.
    let h2 = (l1 * l4) * (l1 * l4) * gap_low.max(0.0) * gap_high.max(0.0) / r2;
    let h = math::sqrt(h2);
    let perp = [u[1], -u[0]];
    let pc = [b[0] + along * u[0] + side * h * perp[0], b[1] + along * u[1] + side * h * perp[1]];
    Ok(CouplerSolution { quad: Quadrilateral::new([0.0, 0.0], b, pc, d), dead_point: h <= DEAD_POINT_TOL * (l2 + l3) })
}

#[cfg(test)]
mod tests {
    use super::*;
    use core::f64::consts::FRAC_PI_2;

    fn lengths(l: [f64; 4]) -> LinkLengths {
        LinkLengths::new(l).unwrap()
    }

    #[test]
    fn grashof_examples() {
        assert_eq!(grashof_class(&lengths([1.0, 2.0, 3.0, 3.5]), 1e-9).unwrap(), GrashofClass::TwoLoops);
        assert_eq!(grashof_class(&lengths([1.0, 2.0, 2.2, 3.0]), 1e-9).unwrap(), GrashofClass::TwoLoops);
        assert_eq!(grashof_class(&lengths([3.0, 1.0, 1.5, 2.0]), 1e-9).unwrap(), GrashofClass::SingleLoop);
        assert_eq!(grashof_class(&lengths([2.0, 1.0, 2.0, 1.0]), 1e-9).unwrap(), GrashofClass::NonGeneric);
        assert_eq!(grashof_class(&lengths([1.0, 2.0, 4.0, 3.0]), 1e-9).unwrap(), GrashofClass::NonGeneric);
    }

    #[test]
    fn non_assemblable() {
        assert_eq!(LinkLengths::new([1.0, 1.0, 1.0, 10.0]), Err(Error::NoAssembly));
        assert!(LinkLengths::new([1.0, -1.0, 1.0, 1.0]).is_err());
    }

    #[test]
    fn parallelogram_assembly() {
        let q = solve_coupler(&lengths([2.0, 1.0, 2.0, 1.0]), FRAC_PI_2, 1).unwrap().quad;
        let expect = Quadrilateral::new([0.0, 0.0], [2.0, 0.0], [2.0, 1.0], [0.0, 1.0]);
        assert!(q.max_distance(&expect) < 1e-14);
    }

    #[test]
    fn coupler_lands_on_both_circles() {
        let l = lengths([1.0, 2.0, 3.0, 3.5]);
        for branch in [1, -1] {
            let q = solve_coupler(&l, FRAC_PI_2, branch).unwrap().quad;
            let e = q.edge_lengths();
            assert!((e[1] - 2.0).abs() < 1e-10 && (e[2] - 3.0).abs() < 1e-10);
        }
    }

    #[test]
    fn crank_outside_range() {
        // Both cosine bounds active for these lengths.
        let l = lengths([2.0, 1.0, 3.0, 2.5]);
        let (cmin, cmax) = l.crank_cos_range();
        assert!(cmin > -1.0 && cmax < 1.0);
        assert_eq!(solve_coupler(&l, 0.0, 1), Err(Error::OutOfRange));
        assert_eq!(solve_coupler(&l, core::f64::consts::PI, 1), Err(Error::OutOfRange));
    }

    #[test]
    fn dead_point_flag() {
        let l = lengths([3.0, 1.0, 1.5, 2.0]);
        let (cmin, _) = l.crank_cos_range();
        let sol = solve_coupler(&l, math::acos(cmin), 1).unwrap();
        assert!(sol.dead_point);
        assert!(!solve_coupler(&l, 0.3, 1).unwrap().dead_point);
    }
}
