//! Independent reference computations shared by the integration tests.
#![allow(dead_code, clippy::needless_range_loop)]

use auxetic_core::geom::SymMatrix;
use auxetic_core::quad::{traversal, GrashofClass, LinkLengths, Quadrilateral, Traversal};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use std::f64::consts::TAU;

pub fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

/// Smallest `|l₁ ± l₂ ± l₃ ± l₄|` relative to the perimeter.
pub fn genericity_margin(l: [f64; 4]) -> f64 {
    let mut m = f64::INFINITY;
    for mask in 1..8u32 {
        let mut s = l[0];
        for k in 0..3 {
            s += if mask & (1 << k) != 0 { -l[k + 1] } else { l[k + 1] };
        }
        m = m.min(s.abs());
    }
    m / l.iter().sum::<f64>()
}

/// Grashof type straight from the inequality on sorted lengths.
pub fn grashof_oracle(l: [f64; 4]) -> GrashofClass {
    let mut s = l;
    s.sort_by(f64::total_cmp);
    if s[0] + s[3] > s[1] + s[2] {
        GrashofClass::SingleLoop
    } else {
        GrashofClass::TwoLoops
    }
}

/// Random assemblable lengths in `[0.5, 4]` of the requested type, at least
/// `margin` away from every folding equality.
pub fn random_lengths(rng: &mut ChaCha8Rng, class: GrashofClass, margin: f64) -> [f64; 4] {
    loop {
        let l: [f64; 4] = std::array::from_fn(|_| rng.gen_range(0.5..4.0));
        if LinkLengths::new(l).is_err() || genericity_margin(l) < margin {
            continue;
        }
        if grashof_oracle(l) == class {
            return l;
        }
    }
}

pub fn orient(p: [f64; 2], q: [f64; 2], r: [f64; 2]) -> f64 {
    (q[0] - p[0]) * (r[1] - p[1]) - (q[1] - p[1]) * (r[0] - p[0])
}

/// A quadrilateral is a pseudotriangle exactly when one vertex lies strictly
/// inside the triangle of the other three.
pub fn pseudotriangle_oracle(v: [[f64; 2]; 4]) -> bool {
    (0..4).any(|i| {
        let t: Vec<[f64; 2]> = (0..4).filter(|&j| j != i).map(|j| v[j]).collect();
        let s = [orient(t[0], t[1], v[i]), orient(t[1], t[2], v[i]), orient(t[2], t[0], v[i])];
        s.iter().all(|&x| x > 0.0) || s.iter().all(|&x| x < 0.0)
    })
}

fn det(mut a: Vec<Vec<f64>>) -> f64 {
    let n = a.len();
    let mut d = 1.0;
    for k in 0..n {
        let p = (k..n).max_by(|&i, &j| a[i][k].abs().total_cmp(&a[j][k].abs())).unwrap();
        if a[p][k] == 0.0 {
            return 0.0;
        }
        if p != k {
            a.swap(p, k);
            d = -d;
        }
        d *= a[k][k];
        for i in k + 1..n {
            let f = a[i][k] / a[k][k];
            for j in k..n {
                a[i][j] -= f * a[k][j];
            }
        }
    }
    d
}

/// Conic through five points from the signed 5×5 minors of the incidence
/// matrix, normalized to unit length.
pub fn conic_oracle(p: [[f64; 2]; 5]) -> [f64; 6] {
    let rows: Vec<[f64; 6]> = p.iter().map(|&[x, y]| [x * x, x * y, y * y, x, y, 1.0]).collect();
    let mut c = [0.0; 6];
    for (k, ck) in c.iter_mut().enumerate() {
        let minor: Vec<Vec<f64>> = rows.iter().map(|r| (0..6).filter(|&j| j != k).map(|j| r[j]).collect()).collect();
        *ck = if k % 2 == 0 { det(minor) } else { -det(minor) };
    }
    let n = c.iter().map(|x| x * x).sum::<f64>().sqrt();
    c.map(|x| x / n)
}

/// `b² − 4ac` of a normalized coefficient vector.
pub fn discriminant(c: [f64; 6]) -> f64 {
    c[1] * c[1] - 4.0 * c[0] * c[2]
}

/// The vertex `A` and the far ends of its four bars.
pub fn five_points(q: &Quadrilateral) -> [[f64; 2]; 5] {
    let ac = [q.c[0] - q.a[0], q.c[1] - q.a[1]];
    [q.a, q.b, q.d, [q.b[0] - ac[0], q.b[1] - ac[1]], [q.d[0] - ac[0], q.d[1] - ac[1]]]
}

/// `dθ/dτ` of the crank sweep.
pub fn crank_rate(tr: &Traversal, tau: f64) -> f64 {
    match *tr {
        Traversal::FullTurn { .. } => TAU,
        Traversal::Swing { half, .. } => half * TAU * (TAU * tau).sin(),
    }
}

/// `dω/dτ` from implicit differentiation of `|C − B|² = l₂²`,
/// `|C − D|² = l₃²` with `D = l₄(cos θ, sin θ)`.
pub fn analytic_velocity(l: &LinkLengths, branch: i32, q: &Quadrilateral, tau: f64) -> SymMatrix {
    let tr = traversal(l, branch).unwrap();
    let rate = crank_rate(&tr, tau);
    let theta = q.d[1].atan2(q.d[0]);
    let dd = [-l.da() * theta.sin() * rate, l.da() * theta.cos() * rate];
    let u = [q.c[0] - q.b[0], q.c[1] - q.b[1]];
    let w = [q.c[0] - q.d[0], q.c[1] - q.d[1]];
    // u · C' = 0, w · C' = w · D'.
    let rhs = w[0] * dd[0] + w[1] * dd[1];
    let den = u[0] * w[1] - u[1] * w[0];
    let dc = [-u[1] * rhs / den, u[0] * rhs / den];
    let ac = [q.c[0] - q.a[0], q.c[1] - q.a[1]];
    let bd = [q.d[0] - q.b[0], q.d[1] - q.b[1]];
    let dot = |a: [f64; 2], b: [f64; 2]| a[0] * b[0] + a[1] * b[1];
    SymMatrix::from_rows(&[
        &[2.0 * dot(ac, dc), dot(dc, bd) + dot(ac, dd)],
        &[dot(dc, bd) + dot(ac, dd), 2.0 * dot(bd, dd)],
    ])
    .unwrap()
}

/// PSD test on a 2×2 symmetric matrix through trace and determinant.
pub fn psd2_oracle(m: &SymMatrix) -> Option<i32> {
    let (a, b, c) = (m.get(0, 0), m.get(0, 1), m.get(1, 1));
    let det = a * c - b * b;
    if det > 0.0 {
        Some(if a > 0.0 { 1 } else { -1 })
    } else {
        None
    }
}

/// Random symmetric positive definite matrix `LLᵗ + εI`.
pub fn random_spd(rng: &mut ChaCha8Rng, d: usize) -> SymMatrix {
    let l: Vec<Vec<f64>> = (0..d).map(|_| (0..d).map(|_| rng.gen_range(-1.0..1.0)).collect()).collect();
    let mut m = SymMatrix::zeros(d);
    for i in 0..d {
        for j in i..d {
            let v: f64 = (0..d).map(|k| l[i][k] * l[j][k]).sum();
            m.set(i, j, v + if i == j { 0.5 } else { 0.0 });
        }
    }
    m
}

/// Cholesky factor columns: `Λ` with `ΛᵗΛ = ω`, returned column-wise.
pub fn factor_gram(omega: &SymMatrix) -> Vec<Vec<f64>> {
    let d = omega.dim();
    let mut r = vec![vec![0.0; d]; d];
    for j in 0..d {
        for i in 0..=j {
            let s: f64 = omega.get(i, j) - (0..i).map(|k| r[k][i] * r[k][j]).sum::<f64>();
            r[i][j] = if i == j { s.sqrt() } else { s / r[i][i] };
        }
    }
    (0..d).map(|j| (0..d).map(|i| r[i][j]).collect()).collect()
}
