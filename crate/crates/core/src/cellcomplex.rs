//! Cell counts of spherical conjugation complexes and the series they force.

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::algebra::HilbertSeries;
use crate::report::CheckResult;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum CellError {
    #[error("cell dimension {0} is odd")]
    OddDimension(u32),
    #[error("stage in dimension {0} has zero cells")]
    EmptyStage(u32),
    #[error("q = {0} is odd")]
    OddQ(i64),
}

/// `count` conjugation cells of dimension `dim` (even).
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Stage {
    pub dim: u32,
    pub count: u64,
}

/// Stages in attaching order; dimensions need not increase.
#[derive(Clone, Debug, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(transparent)]
pub struct CellSpec(pub Vec<Stage>);

impl CellSpec {
    pub fn new(stages: Vec<Stage>) -> Result<Self, CellError> {
        let spec = CellSpec(stages);
        spec.validate()?;
        Ok(spec)
    }

    pub fn from_counts(pairs: &[(u32, u64)]) -> Result<Self, CellError> {
        Self::new(pairs.iter().map(|&(dim, count)| Stage { dim, count }).collect())
    }

    pub fn validate(&self) -> Result<(), CellError> {
        for s in &self.0 {
            if s.dim % 2 == 1 {
                return Err(CellError::OddDimension(s.dim));
            }
            if s.count == 0 {
                return Err(CellError::EmptyStage(s.dim));
            }
        }
        Ok(())
    }

    pub fn stages(&self) -> &[Stage] {
        &self.0
    }

    pub fn top_dimension(&self) -> Option<u32> {
        self.0.iter().map(|s| s.dim).max()
    }

    pub fn point() -> Self {
        CellSpec(vec![Stage { dim: 0, count: 1 }])
    }

    pub fn sphere(k: u32) -> Self {
        CellSpec(vec![Stage { dim: 0, count: 1 }, Stage { dim: 2 * k, count: 1 }])
    }

    pub fn projective(n: u32) -> Self {
        CellSpec((0..=n).map(|i| Stage { dim: 2 * i, count: 1 }).collect())
    }

    /// Schubert cells of `Gr(k, n)`: partitions in a `k × (n-k)` box.
    pub fn grassmannian(k: u32, n: u32) -> Self {
        let counts = partitions_in_box(k, n.saturating_sub(k));
        CellSpec(
            counts
                .iter()
                .enumerate()
                .filter(|(_, c)| **c > 0)
                .map(|(size, c)| Stage { dim: 2 * size as u32, count: *c })
                .collect(),
        )
    }
}

/// Number of partitions of each size fitting in a `rows × cols` box.
pub fn partitions_in_box(rows: u32, cols: u32) -> Vec<u64> {
    // Gaussian binomial coefficient via the recursion on the first row.
    fn go(rows: u32, cols: u32, memo: &mut std::collections::HashMap<(u32, u32), Vec<u64>>) -> Vec<u64> {
        if rows == 0 || cols == 0 {
            return vec![1];
        }
        if let Some(v) = memo.get(&(rows, cols)) {
            return v.clone();
        }
        // Either the first column has fewer than `rows` boxes, or it is full.
        let a = go(rows - 1, cols, memo);
        let b = go(rows, cols - 1, memo);
        let mut v = vec![0u64; (rows * cols + 1) as usize];
        for (i, x) in a.iter().enumerate() {
            v[i] += x;
        }
        for (i, x) in b.iter().enumerate() {
            v[i + rows as usize] += x;
        }
        memo.insert((rows, cols), v.clone());
        v
    }
    go(rows, cols, &mut Default::default())
}

/// `(P_X, P_{X^τ})`: a `2k`-cell contributes `t^{2k}` to the first and `t^k`
/// to the second.
pub fn poincare_series(spec: &CellSpec) -> Result<(HilbertSeries, HilbertSeries), CellError> {
    spec.validate()?;
    let Some(top) = spec.top_dimension() else {
        return Ok((HilbertSeries::default(), HilbertSeries::default()));
    };
    let mut x = vec![0u64; top as usize + 1];
    let mut y = vec![0u64; (top / 2) as usize + 1];
    for s in spec.stages() {
        x[s.dim as usize] += s.count;
        y[(s.dim / 2) as usize] += s.count;
    }
    Ok((HilbertSeries::new(x), HilbertSeries::new(y)))
}

/// Product cells `e × f`, ordered by `(total dimension, first factor index)`;
/// consecutive stages of equal dimension are merged.
pub fn product_complex(a: &CellSpec, b: &CellSpec) -> CellSpec {
    let mut cells: Vec<(u32, usize, usize, u64)> = Vec::new();
    for (i, s) in a.stages().iter().enumerate() {
        for (j, t) in b.stages().iter().enumerate() {
            cells.push((s.dim + t.dim, i, j, s.count * t.count));
        }
    }
    cells.sort();
    let mut out: Vec<Stage> = Vec::new();
    for (dim, _, _, count) in cells {
        match out.last_mut() {
            Some(last) if last.dim == dim => last.count += count,
            _ => out.push(Stage { dim, count }),
        }
    }
    CellSpec(out)
}

/// The integer pair `(p, q)` classifying a three-cell conjugation complex
/// `S^0 ∪ e^2 ∪ e^4`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct ThreeCellInvariant {
    pub p: i64,
    pub q: i64,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct ThreeCellReport {
    pub invariant: ThreeCellInvariant,
    /// Mod 2, `a^2 = (p mod 2) b`.
    pub a_squared_is_b: bool,
    /// Order of `H^1` of the real locus with integer coefficients.
    pub h1_real_order: u64,
    pub check: CheckResult,
}

pub fn validate_three_cell(inv: ThreeCellInvariant) -> Result<ThreeCellReport, CellError> {
    if inv.q % 2 != 0 {
        return Err(CellError::OddQ(inv.q));
    }
    Ok(ThreeCellReport {
        invariant: inv,
        a_squared_is_b: inv.p.rem_euclid(2) == 1,
        h1_real_order: inv.q.unsigned_abs(),
        check: CheckResult::pass("three-cell"),
    })
}

/// Different invariants give different equivariant homotopy types.
pub fn distinct_three_cell(a: ThreeCellInvariant, b: ThreeCellInvariant) -> bool {
    a != b
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn projective_cells() {
        let (x, y) = poincare_series(&CellSpec::projective(3)).unwrap();
        assert_eq!(x.coefficients(), &[1, 0, 1, 0, 1, 0, 1]);
        assert_eq!(y.coefficients(), &[1, 1, 1, 1]);
    }

    #[test]
    fn empty_spec_is_zero() {
        let (x, y) = poincare_series(&CellSpec::default()).unwrap();
        assert_eq!(x.total() + y.total(), 0);
    }

    #[test]
    fn odd_dimension_rejected() {
        assert_eq!(CellSpec::from_counts(&[(3, 1)]), Err(CellError::OddDimension(3)));
    }

    #[test]
    fn grassmannian_cells_count_partitions() {
        let (_, y) = poincare_series(&CellSpec::grassmannian(2, 4)).unwrap();
        assert_eq!(y.coefficients(), &[1, 1, 2, 1, 1]);
        assert_eq!(partitions_in_box(2, 3), vec![1, 1, 2, 2, 2, 1, 1]);
    }

    #[test]
    fn product_multiplies_series() {
        let p = product_complex(&CellSpec::projective(2), &CellSpec::projective(1));
        let (x, _) = poincare_series(&p).unwrap();
        assert_eq!(x.coefficients(), &[1, 0, 2, 0, 2, 0, 1]);
        let q = product_complex(&CellSpec::projective(1), &CellSpec::projective(1));
        assert_eq!(q.stages().iter().map(|s| (s.dim, s.count)).collect::<Vec<_>>(), vec![(0, 1), (2, 2), (4, 1)]);
    }

    #[test]
    fn three_cell_invariants() {
        assert!(validate_three_cell(ThreeCellInvariant { p: 1, q: 2 }).unwrap().a_squared_is_b);
        assert!(distinct_three_cell(ThreeCellInvariant { p: 0, q: 2 }, ThreeCellInvariant { p: 1, q: 2 }));
        assert_eq!(validate_three_cell(ThreeCellInvariant { p: 1, q: 3 }), Err(CellError::OddQ(3)));
    }
}
