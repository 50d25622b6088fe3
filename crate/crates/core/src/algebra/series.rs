use std::fmt;

use serde::{Deserialize, Serialize};

/// Truncated power series with nonnegative integer coefficients: `c_d` is the
/// dimension of the degree-`d` piece.
#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize, Deserialize, Default)]
#[serde(transparent)]
pub struct HilbertSeries(Vec<u64>);

impl HilbertSeries {
    pub fn new(coefficients: Vec<u64>) -> Self {
        HilbertSeries(coefficients)
    }

    pub fn zero(len: usize) -> Self {
        HilbertSeries(vec![0; len])
    }

    /// Series of a single class in degree 0, i.e. the constant 1.
    pub fn one(len: usize) -> Self {
        let mut v = vec![0; len.max(1)];
        v[0] = 1;
        HilbertSeries(v)
    }

    pub fn coefficients(&self) -> &[u64] {
        &self.0
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    /// Highest degree represented.
    pub fn reach(&self) -> u32 {
        self.0.len().saturating_sub(1) as u32
    }

    pub fn coefficient(&self, d: u32) -> u64 {
        self.0.get(d as usize).copied().unwrap_or(0)
    }

    pub fn truncated(&self, reach: u32) -> HilbertSeries {
        let mut v = self.0.clone();
        v.resize(reach as usize + 1, 0);
        HilbertSeries(v)
    }

    /// Product of series, truncated to the shorter reach.
    pub fn convolve(&self, other: &HilbertSeries) -> HilbertSeries {
        let n = self.len().min(other.len());
        let mut v = vec![0u64; n];
        for (i, a) in self.0.iter().enumerate().take(n) {
            if *a == 0 {
                continue;
            }
            for (j, b) in other.0.iter().enumerate().take(n - i) {
                v[i + j] += a * b;
            }
        }
        HilbertSeries(v)
    }

    pub fn add(&self, other: &HilbertSeries) -> HilbertSeries {
        let n = self.len().max(other.len());
        HilbertSeries((0..n as u32).map(|d| self.coefficient(d) + other.coefficient(d)).collect())
    }

    /// Coefficientwise difference; `None` if any coefficient would go negative.
    pub fn checked_sub(&self, other: &HilbertSeries) -> Option<HilbertSeries> {
        let n = self.len().max(other.len());
        (0..n as u32).map(|d| self.coefficient(d).checked_sub(other.coefficient(d))).collect::<Option<Vec<_>>>().map(HilbertSeries)
    }

    /// Multiplies by `t^k`, keeping the reach.
    pub fn shift(&self, k: u32) -> HilbertSeries {
        let mut v = vec![0u64; self.len()];
        for (d, c) in self.0.iter().enumerate() {
            if d + (k as usize) < v.len() {
                v[d + k as usize] = *c;
            }
        }
        HilbertSeries(v)
    }

    /// Expansion of `1/(1 - t^k)^r` up to `reach`.
    pub fn geometric_power(k: u32, r: u32, reach: u32) -> HilbertSeries {
        let mut acc = HilbertSeries::one(reach as usize + 1);
        let geo = HilbertSeries((0..=reach).map(|d| u64::from(d % k == 0)).collect());
        for _ in 0..r {
            acc = acc.convolve(&geo);
        }
        acc
    }

    /// `P(t^2)`, within the given reach.
    pub fn double_degrees(&self, reach: u32) -> HilbertSeries {
        HilbertSeries((0..=reach).map(|d| if d % 2 == 0 { self.coefficient(d / 2) } else { 0 }).collect())
    }

    /// First degree `d ≤ reach` where `self(t)` and `half(t^2)` disagree, if
    /// any: the halving identity `P_X(t) = P_{X^τ}(t^2)`.
    pub fn halving_defect(&self, half: &HilbertSeries, reach: u32) -> Option<u32> {
        (0..=reach).find(|d| {
            let expected = if d % 2 == 0 { half.coefficient(d / 2) } else { 0 };
            self.coefficient(*d) != expected
        })
    }

    pub fn total(&self) -> u64 {
        self.0.iter().sum()
    }
}

impl fmt::Display for HilbertSeries {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let terms: Vec<String> = self
            .0
            .iter()
            .enumerate()
            .filter(|(_, c)| **c != 0)
            .map(|(d, c)| match (d, c) {
                (0, c) => c.to_string(),
                (1, 1) => "t".to_string(),
                (1, c) => format!("{c}t"),
                (d, 1) => format!("t^{d}"),
                (d, c) => format!("{c}t^{d}"),
            })
            .collect();
        if terms.is_empty() {
            write!(f, "0")
        } else {
            write!(f, "{}", terms.join(" + "))
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn geometric_series_matches_stars_and_bars() {
        let s = HilbertSeries::geometric_power(1, 3, 10);
        for d in 0..=10u64 {
            assert_eq!(s.coefficient(d as u32), (d + 2) * (d + 1) / 2);
        }
    }

    #[test]
    fn halving_defect_detects_mismatch() {
        let even = HilbertSeries::new(vec![1, 0, 1, 0, 1]);
        let half = HilbertSeries::new(vec![1, 1, 1]);
        assert_eq!(even.halving_defect(&half, 4), None);
        let bad = HilbertSeries::new(vec![1, 0, 1]);
        assert_eq!(bad.halving_defect(&HilbertSeries::one(3), 2), Some(2));
    }

    #[test]
    fn display_is_readable() {
        assert_eq!(HilbertSeries::new(vec![1, 2, 0, 1]).to_string(), "1 + 2t + t^3");
    }
}
