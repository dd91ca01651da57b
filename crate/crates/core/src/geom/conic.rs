//! Conic through five points and its affine classification.

use crate::error::{Error, Result};
use crate::geom::dense::Mat;
use crate::geom::sym::SymMatrix;
use crate::math;

/// Coefficients of `a·x² + b·xy + c·y² + dd·x + e·y + f = 0`.
///
/// Normalized to unit Euclidean norm, with the first nonzero coefficient
/// (in `a, b, c, dd, e, f` order) positive.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ConicCoeffs {
    pub a: f64,
    pub b: f64,
    pub c: f64,
    pub dd: f64,
    pub e: f64,
    pub f: f64,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum ConicClass {
    Ellipse,
    Parabola,
    Hyperbola,
    Degenerate,
}

impl ConicClass {
    pub fn name(self) -> &'static str {
        match self {
            ConicClass::Ellipse => "Ellipse",
            ConicClass::Parabola => "Parabola",
            ConicClass::Hyperbola => "Hyperbola",
            ConicClass::Degenerate => "Degenerate",
        }
    }
}

impl core::fmt::Display for ConicClass {
    fn fmt(&self, f: &mut core::fmt::Formatter<'_>) -> core::fmt::Result {
        f.write_str(self.name())
    }
}

/// Coefficients below this magnitude do not decide the sign convention.
const SIGN_EPS: f64 = 1e-12;

/// Relative singular-value cutoff used to count null directions of the
/// incidence matrix.
const NULLITY_RTOL: f64 = 1e-9;

impl ConicCoeffs {
    /// Normalizes an arbitrary nonzero coefficient vector.
    pub fn from_raw(raw: [f64; 6]) -> Result<Self> {
        if raw.iter().any(|x| !x.is_finite()) {
            return Err(Error::NonFinite);
        }
        let n = math::norm(&raw);
        if n == 0.0 {
            return Err(Error::InvalidInput("conic coefficients are all zero"));
        }
        let mut v = raw.map(|x| x / n);
        if let Some(first) = v.iter().find(|x| x.abs() > SIGN_EPS) {
            if *first < 0.0 {
                v = v.map(|x| -x);
            }
        }
        Ok(ConicCoeffs { a: v[0], b: v[1], c: v[2], dd: v[3], e: v[4], f: v[5] })
    }

    pub fn as_array(&self) -> [f64; 6] {
        [self.a, self.b, self.c, self.dd, self.e, self.f]
    }

    pub fn eval(&self, x: f64, y: f64) -> f64 {
        self.a * x * x + self.b * x * y + self.c * y * y + self.dd * x + self.e * y + self.f
    }

    /// `b² − 4ac`.
    pub fn discriminant(&self) -> f64 {
        self.b * self.b - 4.0 * self.a * self.c
    }

    /// The symmetric 3×3 matrix of the homogenized quadratic form.
    pub fn full_matrix(&self) -> SymMatrix {
        let mut m = SymMatrix::zeros(3);
        m.set(0, 0, self.a);
        m.set(0, 1, 0.5 * self.b);
        m.set(1, 1, self.c);
        m.set(0, 2, 0.5 * self.dd);
        m.set(1, 2, 0.5 * self.e);
        m.set(2, 2, self.f);
        m
    }
}

/// Fits the conic through five pairwise distinct points as the null vector of
/// the 5×6 incidence matrix.
///
/// Points are centered and scaled before the decomposition and the result is
/// mapped back, so the fit does not depend on where the points sit.
pub fn fit_conic(points: &[[f64; 2]; 5]) -> Result<ConicCoeffs> {
    if points.iter().flatten().any(|x| !x.is_finite()) {
        return Err(Error::NonFinite);
    }
    for i in 0..5 {
        for j in (i + 1)..5 {
            if points[i] == points[j] {
                return Err(Error::InvalidInput("conic fit needs pairwise distinct points"));
            }
        }
    }
    let cx = points.iter().map(|p| p[0]).sum::<f64>() / 5.0;
    let cy = points.iter().map(|p| p[1]).sum::<f64>() / 5.0;
    let s = points.iter().map(|p| math::hypot(p[0] - cx, p[1] - cy)).fold(0.0, f64::max);
    let rows: [[f64; 6]; 5] = points.map(|p| {
        let x = (p[0] - cx) / s;
        let y = (p[1] - cy) / s;
        [x * x, x * y, y * y, x, y, 1.0]
    });
    let svd = Mat::from_rows(&rows).svd();
    let nullity = svd.null_space(NULLITY_RTOL).len();
    if nullity >= 2 {
        return Err(Error::DegeneratePencil { nullity });
    }
    let v = svd.v.column(5);
    let (ca, cb, cc, cd, ce, cf) = (v[0], v[1], v[2], v[3], v[4], v[5]);
    let s2 = s * s;
    let raw = [
        ca / s2,
        cb / s2,
        cc / s2,
        (-2.0 * ca * cx - cb * cy) / s2 + cd / s,
        (-cb * cx - 2.0 * cc * cy) / s2 + ce / s,
        (ca * cx * cx + cb * cx * cy + cc * cy * cy) / s2 - (cd * cx + ce * cy) / s + cf,
    ];
    ConicCoeffs::from_raw(raw)
}

/// Affine type of a normalized conic.
///
/// Degenerate when the smallest singular value of the 3×3 conic matrix is at
/// most `tol`; otherwise the sign of `b² − 4ac` with a `±tol` parabola band.
pub fn classify_conic(c: &ConicCoeffs, tol: f64) -> Result<ConicClass> {
    if c.as_array().iter().any(|x| !x.is_finite()) || !tol.is_finite() {
        return Err(Error::NonFinite);
    }
    let smallest = c.full_matrix().eigenvalues().iter().fold(f64::INFINITY, |m, x| m.min(x.abs()));
    if smallest <= tol {
        return Ok(ConicClass::Degenerate);
    }
    let disc = c.discriminant();
    Ok(if disc < -tol {
        ConicClass::Ellipse
    } else if disc > tol {
        ConicClass::Hyperbola
    } else {
        ConicClass::Parabola
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use core::f64::consts::PI;

    fn assert_proportional(c: &ConicCoeffs, expect: [f64; 6]) {
        let e = ConicCoeffs::from_raw(expect).unwrap();
        for (x, y) in c.as_array().iter().zip(e.as_array()) {
            assert!((x - y).abs() < 1e-10, "{c:?} vs {e:?}");
        }
    }

    #[test]
    fn recovers_unit_circle() {
        let pts = core::array::from_fn(|k| {
            let t = 2.0 * PI * k as f64 / 5.0;
            [math::cos(t), math::sin(t)]
        });
        let c = fit_conic(&pts).unwrap();
        assert_proportional(&c, [1.0, 0.0, 1.0, 0.0, 0.0, -1.0]);
        assert_eq!(classify_conic(&c, 1e-9).unwrap(), ConicClass::Ellipse);
    }

    #[test]
    fn recovers_axis_pair() {
        let pts = [[0.0, 0.0], [1.0, 0.0], [2.0, 0.0], [0.0, 1.0], [0.0, 2.0]];
        let c = fit_conic(&pts).unwrap();
        assert_proportional(&c, [0.0, 1.0, 0.0, 0.0, 0.0, 0.0]);
        assert_eq!(classify_conic(&c, 1e-9).unwrap(), ConicClass::Degenerate);
    }

    #[test]
    fn recovers_parabola() {
        let pts = [-2.0, -1.0, 0.0, 0.5, 3.0].map(|x| [x, x * x]);
        let c = fit_conic(&pts).unwrap();
        assert_proportional(&c, [1.0, 0.0, 0.0, 0.0, -1.0, 0.0]);
        assert_eq!(classify_conic(&c, 1e-9).unwrap(), ConicClass::Parabola);
    }

    #[test]
    fn four_collinear_points_are_a_pencil() {
        let pts = [[0.0, 0.0], [1.0, 0.0], [2.0, 0.0], [3.0, 0.0], [0.0, 1.0]];
        assert!(matches!(fit_conic(&pts), Err(Error::DegeneratePencil { nullity: 2 })));
    }

    #[test]
    fn classification_examples() {
        let circle = ConicCoeffs::from_raw([1.0, 0.0, 1.0, 0.0, 0.0, -1.0]).unwrap();
        let parabola = ConicCoeffs::from_raw([1.0, 0.0, 0.0, 0.0, -1.0, 0.0]).unwrap();
        let hyperbola = ConicCoeffs::from_raw([1.0, 0.0, -1.0, 0.0, 0.0, -1.0]).unwrap();
        assert_eq!(classify_conic(&circle, 1e-9).unwrap(), ConicClass::Ellipse);
        assert_eq!(classify_conic(&parabola, 1e-9).unwrap(), ConicClass::Parabola);
        assert_eq!(classify_conic(&hyperbola, 1e-9).unwrap(), ConicClass::Hyperbola);
    }

    #[test]
    fn sign_convention() {
        let c = ConicCoeffs::from_raw([0.0, -2.0, 0.0, 1.0, 0.0, 0.0]).unwrap();
        assert!(c.b > 0.0 && c.dd < 0.0);
        assert!((math::norm(&c.as_array()) - 1.0).abs() < 1e-15);
    }
}
