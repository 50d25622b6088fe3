use std::sync::Arc;

use serde::{Deserialize, Serialize};

use super::basic::line_rule;
use crate::algebra::{Generator, GradedAlgebra, Polynomial};
use crate::frames::{ConjugationFrame, FrameError};

/// Combinatorics of a simple `n`-polytope with a characteristic function:
/// each vertex is the set of the `n` facets meeting there, and each facet
/// carries an integer label in `Z^n`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct ToricData {
    pub dim: usize,
    pub vertices: Vec<Vec<usize>>,
    pub labels: Vec<Vec<i64>>,
}

const MAX_FACETS: usize = 20;

/// Exact integer determinant by fraction-free elimination.
pub fn bareiss_determinant(m: &[Vec<i64>]) -> i128 {
    let n = m.len();
    let mut a: Vec<Vec<i128>> = m.iter().map(|r| r.iter().map(|x| *x as i128).collect()).collect();
    let mut sign = 1;
    let mut prev = 1i128;
    for k in 0..n {
        if a[k][k] == 0 {
            match (k + 1..n).find(|i| a[*i][k] != 0) {
                Some(i) => {
                    a.swap(k, i);
                    sign = -sign;
                }
                None => return 0,
            }
        }
        for i in k + 1..n {
            for j in k + 1..n {
                a[i][j] = (a[i][j] * a[k][k] - a[i][k] * a[k][j]) / prev;
            }
        }
        prev = a[k][k];
    }
    if n == 0 {
        1
    } else {
        sign * a[n - 1][n - 1]
    }
}

impl ToricData {
    pub fn facets(&self) -> usize {
        self.labels.len()
    }

    /// Checks shapes and smoothness: labels at every vertex form a basis of `Z^n`.
    pub fn validate(&self) -> Result<(), FrameError> {
        let m = self.facets();
        let bad = |s: String| Err(FrameError::Invalid(s));
        if m > MAX_FACETS {
            return bad(format!("{m} facets exceeds the supported {MAX_FACETS}"));
        }
        if let Some(l) = self.labels.iter().position(|l| l.len() != self.dim) {
            return bad(format!("label of facet {l} has length {}, expected {}", self.labels[l].len(), self.dim));
        }
        for (v, fs) in self.vertices.iter().enumerate() {
            let mut sorted = fs.clone();
            sorted.sort_unstable();
            sorted.dedup();
            if sorted.len() != self.dim || sorted.iter().any(|f| *f >= m) {
                return bad(format!("vertex {v} must meet {} distinct facets out of {m}", self.dim));
            }
            let mat: Vec<Vec<i64>> = fs.iter().map(|f| self.labels[*f].clone()).collect();
            let det = bareiss_determinant(&mat);
            if det.abs() != 1 {
                return bad(format!("non-smooth at vertex {v}: determinant {det}"));
            }
        }
        if let Some(f) = (0..m).find(|f| !self.vertices.iter().any(|v| v.contains(f))) {
            return bad(format!("facet {f} meets no vertex"));
        }
        Ok(())
    }

    fn vertex_masks(&self) -> Vec<u32> {
        self.vertices.iter().map(|v| v.iter().fold(0u32, |acc, f| acc | (1 << f))).collect()
    }

    /// Minimal sets of facets with empty intersection.
    pub fn minimal_non_faces(&self) -> Vec<u32> {
        let verts = self.vertex_masks();
        let is_face = |s: u32| verts.iter().any(|v| s & v == s);
        let m = self.facets();
        let mut out: Vec<u32> = (1u32..(1 << m))
            .filter(|s| s.count_ones() as usize <= self.dim + 1)
            .filter(|s| !is_face(*s) && (0..m).filter(|i| s & (1 << i) != 0).all(|i| is_face(s & !(1 << i))))
            .collect();
        out.sort_by_key(|s| (s.count_ones(), *s));
        out
    }

    pub fn square() -> Self {
        ToricData {
            dim: 2,
            vertices: vec![vec![0, 1], vec![1, 2], vec![2, 3], vec![3, 0]],
            labels: vec![vec![1, 0], vec![0, 1], vec![-1, 0], vec![0, -1]],
        }
    }

    /// Hirzebruch surface with twist `k`.
    pub fn hirzebruch(k: i64) -> Self {
        ToricData {
            dim: 2,
            vertices: vec![vec![0, 1], vec![1, 2], vec![2, 3], vec![3, 0]],
            labels: vec![vec![1, 0], vec![0, 1], vec![-1, k], vec![0, -1]],
        }
    }

    /// The `n`-simplex with the standard fan of `CP^n`.
    pub fn simplex(n: usize) -> Self {
        let mut labels: Vec<Vec<i64>> = (0..n).map(|i| (0..n).map(|j| i64::from(i == j)).collect()).collect();
        labels.push(vec![-1; n]);
        let vertices = (0..=n).map(|skip| (0..=n).filter(|f| *f != skip).collect()).collect();
        ToricData { dim: n, vertices, labels }
    }
}

/// Stanley-Reisner ring modulo the linear relations from the labels, in
/// degree 2 (`x_F`) and degree 1 (`y_F`); `r∘σ(x_F) = y_F u + y_F^2`.
pub fn toric_frame(data: &ToricData, cutoff: u32) -> Result<ConjugationFrame, FrameError> {
    data.validate()?;
    let m = data.facets();
    let ring = |var: &str, deg: u32| -> Result<Arc<GradedAlgebra>, FrameError> {
        let gens: Vec<Generator> = (1..=m).map(|i| Generator::new(format!("{var}{i}"), deg)).collect();
        let skeleton = GradedAlgebra::polynomial_ring(gens.clone(), cutoff)?;
        let mut rels = Vec::new();
        for s in data.minimal_non_faces() {
            let exps = (0..m).map(|i| ((s >> i) & 1) as u16).collect();
            rels.push(Polynomial::from_monomial(skeleton.monomial(exps)));
        }
        for i in 0..data.dim {
            let mut lin = Polynomial::zero();
            for (f, l) in data.labels.iter().enumerate() {
                if l[i].rem_euclid(2) == 1 {
                    lin += &skeleton.gen(f);
                }
            }
            if !lin.is_zero() {
                rels.push(lin);
            }
        }
        Ok(Arc::new(GradedAlgebra::new(gens, rels, cutoff)?))
    };
    let even = ring("x", 2)?;
    let fixed = ring("y", 1)?;
    let kappa: Vec<Polynomial> = (0..m).map(|i| fixed.gen(i)).collect();
    let rsigma = kappa.iter().map(|y| line_rule(&fixed, y)).collect();
    ConjugationFrame::new(format!("toric({m} facets)"), even, fixed, kappa, rsigma)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::constructors::{product_frame, projective_frame, Extent};
    use crate::frames::{canonical_frame, halving_series, verify_frame};

    #[test]
    fn determinants() {
        assert_eq!(bareiss_determinant(&[vec![1, 0], vec![0, 1]]), 1);
        assert_eq!(bareiss_determinant(&[vec![0, 1], vec![1, 0]]), -1);
        assert_eq!(bareiss_determinant(&[vec![2, 1, 0], vec![1, 3, 1], vec![0, 1, 4]]), 18);
        assert_eq!(bareiss_determinant(&[vec![1, 2], vec![2, 4]]), 0);
    }

    #[test]
    fn square_is_product_of_lines() {
        let t = toric_frame(&ToricData::square(), 24).unwrap();
        let cp1 = projective_frame(Extent::Finite(1), 24).unwrap();
        let p = product_frame(&cp1, &cp1).unwrap();
        assert_eq!(canonical_frame(&t).unwrap().to_spec(), canonical_frame(&p).unwrap().to_spec());
    }

    #[test]
    fn simplex_is_projective_plane() {
        let t = toric_frame(&ToricData::simplex(2), 24).unwrap();
        let cp2 = projective_frame(Extent::Finite(2), 24).unwrap();
        assert_eq!(canonical_frame(&t).unwrap().to_spec(), canonical_frame(&cp2).unwrap().to_spec());
    }

    #[test]
    fn hirzebruch_passes() {
        for k in 0..=3 {
            let t = toric_frame(&ToricData::hirzebruch(k), 24).unwrap();
            assert!(verify_frame(&t).passed());
            assert!(halving_series(&t).holds);
        }
    }

    #[test]
    fn non_smooth_rejected() {
        let mut d = ToricData::square();
        d.labels[2] = vec![-1, 2];
        d.labels[1] = vec![1, 2];
        let err = toric_frame(&d, 24).unwrap_err();
        assert!(err.to_string().contains("non-smooth at vertex 0"), "{err}");
    }
}
