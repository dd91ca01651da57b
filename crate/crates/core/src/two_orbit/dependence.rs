//! Exact rational expressions of the dependent periods in the period basis.

use alloc::vec::Vec;

use num_rational::Ratio;

use super::spec::{gcd, FrameworkSpec};

/// Coefficients `a_{k,i}` with `n_k = Σᵢ a_{k,i} nᵢ` for every dependent
/// offset `k > d`; row `r` of the table belongs to offset `k = d + 1 + r`.
///
/// Periods are measured from `n₀`, which validation pins to the origin.
#[derive(Debug, Clone, PartialEq)]
pub struct DependenceTable {
    dim: usize,
    rows: Vec<Vec<Ratio<i64>>>,
}

impl DependenceTable {
    pub fn rows(&self) -> &[Vec<Ratio<i64>>] {
        &self.rows
    }

    pub fn len(&self) -> usize {
        self.rows.len()
    }

    pub fn is_empty(&self) -> bool {
        self.rows.is_empty()
    }

    /// Coefficients of the dependent offset with spec index `k`.
    pub fn coefficients(&self, k: usize) -> Option<&[Ratio<i64>]> {
        k.checked_sub(self.dim + 1).and_then(|r| self.rows.get(r)).map(|v| v.as_slice())
    }

    pub fn as_f64(&self) -> Vec<Vec<f64>> {
        self.rows.iter().map(|row| row.iter().map(|a| *a.numer() as f64 / *a.denom() as f64).collect()).collect()
    }

    /// Checks `den · n_k = Σᵢ (den · a_{k,i}) nᵢ` exactly in integers.
    pub fn verify(&self, spec: &FrameworkSpec) -> bool {
        self.rows.iter().enumerate().all(|(r, row)| {
            let k = self.dim + 1 + r;
            let den = row.iter().fold(1i128, |l, a| lcm(l, *a.denom() as i128));
            (0..self.dim).all(|c| {
                let lhs = den * spec.offset(k)[c] as i128;
                let rhs: i128 = row
                    .iter()
                    .enumerate()
                    .map(|(i, a)| den / *a.denom() as i128 * *a.numer() as i128 * spec.offset(i + 1)[c] as i128)
                    .sum();
                lhs == rhs
            })
        })
    }
}

fn lcm(a: i128, b: i128) -> i128 {
    a / gcd(a, b) * b
}

/// Determinant of a small integer matrix (Bareiss fraction-free elimination).
fn det_i128(mut a: Vec<Vec<i128>>) -> i128 {
    let n = a.len();
    let mut sign = 1;
    let mut prev = 1i128;
    for k in 0..n {
        if a[k][k] == 0 {
            let Some(p) = ((k + 1)..n).find(|&r| a[r][k] != 0) else { return 0 };
            a.swap(k, p);
            sign = -sign;
        }
        for i in (k + 1)..n {
            for j in (k + 1)..n {
                a[i][j] = (a[i][j] * a[k][k] - a[i][k] * a[k][j]) / prev;
            }
        }
        prev = a[k][k];
    }
    sign * a[n - 1][n - 1]
}

/// Solves the integer systems `[n₁ … n_d] a = n_k` exactly by Cramer's rule.
pub fn dependence_coeffs(spec: &FrameworkSpec) -> DependenceTable {
    let d = spec.dim();
    // Column i of the basis matrix is n_{i+1}.
    let basis: Vec<Vec<i128>> = (0..d).map(|r| (0..d).map(|c| spec.offset(c + 1)[r] as i128).collect()).collect();
    let det = det_i128(basis.clone());
    debug_assert!(det != 0, "validated spec has an independent basis");
    let rows = ((d + 1)..spec.edge_count())
        .map(|k| {
            (0..d)
                .map(|i| {
                    let mut m = basis.clone();
                    for (r, row) in m.iter_mut().enumerate() {
                        row[i] = spec.offset(k)[r] as i128;
                    }
                    let num = det_i128(m);
                    let g = gcd(num, det).max(1);
                    let (mut p, mut q) = (num / g, det / g);
                    if q < 0 {
                        p = -p;
                        q = -q;
                    }
                    Ratio::new(p as i64, q as i64)
                })
                .collect()
        })
        .collect();
    DependenceTable { dim: d, rows }
}
