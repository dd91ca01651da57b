use alloc::vec::Vec;

use crate::error::{Error, Result};
use crate::geom::sym::packed_len;

/// Combinatorial and metric data of a connected periodic framework with two
/// vertex orbits.
///
/// The orbit-1 representative sits at lattice coordinates `q`; its neighbours
/// are the orbit-2 vertices at integer offsets `n₀, …, n_{m−1}`, and the edge
/// to neighbour `i` has squared length `sᵢ`.
///
/// A validated spec always has `n₀ = 0` and `n₁, …, n_d` linearly independent.
#[derive(Debug, Clone, PartialEq)]
pub struct FrameworkSpec {
    dim: usize,
    offsets: Vec<Vec<i64>>,
    squared_lengths: Vec<f64>,
    original_index: Vec<usize>,
}

impl FrameworkSpec {
    /// Validates and normalizes raw framework data; see [`validate_spec`].
    pub fn new(dim: usize, offsets: Vec<Vec<i64>>, squared_lengths: Vec<f64>) -> Result<Self> {
        validate_spec(dim, offsets, squared_lengths)
    }

    #[inline]
    pub fn dim(&self) -> usize {
        self.dim
    }

    /// Number of edge orbits `m`.
    #[inline]
    pub fn edge_count(&self) -> usize {
        self.offsets.len()
    }

    pub fn offsets(&self) -> &[Vec<i64>] {
        &self.offsets
    }

    pub fn offset(&self, i: usize) -> &[i64] {
        &self.offsets[i]
    }

    pub fn squared_lengths(&self) -> &[f64] {
        &self.squared_lengths
    }

    /// Position of each normalized edge in the caller's original ordering.
    pub fn original_index(&self) -> &[usize] {
        &self.original_index
    }

    /// Number of unknowns `d + d(d+1)/2` in `(q, ω)`.
    #[inline]
    pub fn unknowns(&self) -> usize {
        self.dim + packed_len(self.dim)
    }

    /// Expected local deformation dimension `d + d(d+1)/2 − m`.
    pub fn flexibility(&self) -> i64 {
        self.unknowns() as i64 - self.edge_count() as i64
    }

    pub fn max_squared_length(&self) -> f64 {
        self.squared_lengths.iter().fold(0.0, |m, &s| m.max(s))
    }

    /// Same combinatorics with all squared lengths multiplied by `factor`.
    pub fn scaled(&self, factor: f64) -> Result<Self> {
        if !(factor.is_finite() && factor > 0.0) {
            return Err(Error::InvalidInput("scale factor must be positive"));
        }
        let mut out = self.clone();
        out.squared_lengths.iter_mut().for_each(|s| *s *= factor);
        Ok(out)
    }
}

/// Checks the framework invariants and normalizes the offsets.
///
/// All offsets are translated so that `n₀ = 0`. If `n₁, …, n_d` are not
/// independent, the first independent offsets (in input order) are moved to
/// those slots; the remaining edges keep their relative order.
pub fn validate_spec(dim: usize, offsets: Vec<Vec<i64>>, squared_lengths: Vec<f64>) -> Result<FrameworkSpec> {
    if dim < 2 {
        return Err(Error::InvalidInput("framework dimension must be at least 2"));
    }
    let m = offsets.len();
    if squared_lengths.len() != m {
        return Err(Error::DimensionMismatch { expected: m, found: squared_lengths.len() });
    }
    for n in &offsets {
        if n.len() != dim {
            return Err(Error::DimensionMismatch { expected: dim, found: n.len() });
        }
    }
    if squared_lengths.iter().any(|s| !s.is_finite()) {
        return Err(Error::NonFinite);
    }
    if squared_lengths.iter().any(|&s| s <= 0.0) {
        return Err(Error::InvalidInput("squared lengths must be positive"));
    }
    if m < dim + 1 {
        return Err(Error::Underconnected { m, d: dim });
    }
    for i in 0..m {
        for j in (i + 1)..m {
            if offsets[i] == offsets[j] {
                return Err(Error::DuplicateEdge { first: i, second: j });
            }
        }
    }

    let base = offsets[0].clone();
    let shifted: Vec<Vec<i64>> = offsets.iter().map(|n| n.iter().zip(&base).map(|(a, b)| a - b).collect()).collect();

    let mut basis: Vec<usize> = Vec::with_capacity(dim);
    for k in 1..m {
        if basis.len() == dim {
            break;
        }
        let mut trial: Vec<&[i64]> = basis.iter().map(|&i| shifted[i].as_slice()).collect();
        trial.push(&shifted[k]);
        if integer_rank(&trial) == trial.len() {
            basis.push(k);
        }
    }
    if basis.len() < dim {
        return Err(Error::BadBasis);
    }
    let mut order = Vec::with_capacity(m);
    order.push(0);
    order.extend_from_slice(&basis);
    order.extend((1..m).filter(|k| !basis.contains(k)));

    Ok(FrameworkSpec {
        dim,
        offsets: order.iter().map(|&k| shifted[k].clone()).collect(),
        squared_lengths: order.iter().map(|&k| squared_lengths[k]).collect(),
        original_index: order,
    })
}

/// Rank of a small integer matrix by fraction-free elimination.
pub(crate) fn integer_rank(rows: &[&[i64]]) -> usize {
    let mut a: Vec<Vec<i128>> = rows.iter().map(|r| r.iter().map(|&x| x as i128).collect()).collect();
    let cols = a.first().map_or(0, |r| r.len());
    let mut rank = 0;
    for c in 0..cols {
        let Some(p) = (rank..a.len()).find(|&r| a[r][c] != 0) else { continue };
        a.swap(rank, p);
        for r in (rank + 1)..a.len() {
            if a[r][c] == 0 {
                continue;
            }
            let (pv, rv) = (a[rank][c], a[r][c]);
            for k in 0..cols {
                a[r][k] = a[r][k] * pv - a[rank][k] * rv;
            }
            let g = a[r].iter().fold(0i128, |g, &x| gcd(g, x));
            if g > 1 {
                a[r].iter_mut().for_each(|x| *x /= g);
            }
        }
        rank += 1;
    }
    rank
}

pub(crate) fn gcd(a: i128, b: i128) -> i128 {
    let (mut a, mut b) = (a.abs(), b.abs());
    while b != 0 {
        let t = a % b;
        a = b;
        b = t;
    }
    a
}

#[cfg(test)]
mod tests {
    use super::*;
    use alloc::vec;

    #[test]
    fn quadrilateral_encoding_is_valid() {
        let spec = FrameworkSpec::new(2, vec![vec![0, 0], vec![0, 1], vec![-1, 0], vec![-1, 1]], vec![1.0; 4]).unwrap();
        assert_eq!(spec.flexibility(), 1);
        assert_eq!(spec.original_index(), &[0, 1, 2, 3]);
    }

    #[test]
    fn too_few_edges() {
        let err = FrameworkSpec::new(2, vec![vec![0, 0], vec![1, 0]], vec![1.0, 1.0]).unwrap_err();
        assert_eq!(err, Error::Underconnected { m: 2, d: 2 });
    }

    #[test]
    fn collinear_prefix_is_reordered() {
        let spec =
            FrameworkSpec::new(2, vec![vec![0, 0], vec![1, 0], vec![2, 0], vec![0, 1]], vec![1.0, 2.0, 3.0, 4.0])
                .unwrap();
        assert_eq!(spec.offsets(), &[vec![0, 0], vec![1, 0], vec![0, 1], vec![2, 0]]);
        assert_eq!(spec.squared_lengths(), &[1.0, 2.0, 4.0, 3.0]);
        assert_eq!(spec.original_index(), &[0, 1, 3, 2]);
    }

    #[test]
    fn all_collinear_is_bad_basis() {
        let err =
            FrameworkSpec::new(2, vec![vec![0, 0], vec![1, 0], vec![2, 0], vec![-3, 0]], vec![1.0; 4]).unwrap_err();
        assert_eq!(err, Error::BadBasis);
    }

    #[test]
    fn duplicates_and_lengths() {
        let dup = FrameworkSpec::new(2, vec![vec![0, 0], vec![1, 0], vec![0, 1], vec![1, 0]], vec![1.0; 4]);
        assert_eq!(dup.unwrap_err(), Error::DuplicateEdge { first: 1, second: 3 });
        let neg = FrameworkSpec::new(2, vec![vec![0, 0], vec![1, 0], vec![0, 1]], vec![1.0, -1.0, 1.0]);
        assert!(matches!(neg, Err(Error::InvalidInput(_))));
    }

    #[test]
    fn offsets_are_normalized_to_first() {
        let spec = FrameworkSpec::new(2, vec![vec![3, 4], vec![4, 4], vec![3, 5]], vec![1.0; 3]).unwrap();
        assert_eq!(spec.offsets(), &[vec![0, 0], vec![1, 0], vec![0, 1]]);
        assert_eq!(spec.flexibility(), 2);
    }
}
