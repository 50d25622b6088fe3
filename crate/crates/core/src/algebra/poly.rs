use std::cmp::Ordering;
use std::collections::BTreeSet;
use std::ops::{Add, AddAssign};

/// A monomial as a dense exponent vector together with its weighted degree.
///
/// Ordering is graded reverse-lexicographic: weighted degree first, then the
/// monomial with the smaller exponent in the last differing generator wins.
#[derive(Clone, PartialEq, Eq, Hash, Debug)]
pub struct Monomial {
    degree: u32,
    exps: Vec<u16>,
}

impl Monomial {
    pub fn new(exps: Vec<u16>, weights: &[u32]) -> Self {
        debug_assert_eq!(exps.len(), weights.len());
        let degree = exps.iter().zip(weights).map(|(e, w)| *e as u32 * w).sum();
        Monomial { degree, exps }
    }

    pub fn one(nvars: usize) -> Self {
        Monomial { degree: 0, exps: vec![0; nvars] }
    }

    pub fn degree(&self) -> u32 {
        self.degree
    }

    pub fn exponents(&self) -> &[u16] {
        &self.exps
    }

    pub fn nvars(&self) -> usize {
        self.exps.len()
    }

    pub fn is_one(&self) -> bool {
        self.degree == 0 && self.exps.iter().all(|e| *e == 0)
    }

    pub fn mul(&self, other: &Monomial) -> Monomial {
        Monomial {
            degree: self.degree + other.degree,
            exps: self.exps.iter().zip(&other.exps).map(|(a, b)| a + b).collect(),
        }
    }

    pub fn divides(&self, other: &Monomial) -> bool {
        self.degree <= other.degree && self.exps.iter().zip(&other.exps).all(|(a, b)| a <= b)
    }

    /// `other / self`, assuming `self` divides `other`.
    pub fn quotient_of(&self, other: &Monomial) -> Monomial {
        Monomial {
            degree: other.degree - self.degree,
            exps: other.exps.iter().zip(&self.exps).map(|(a, b)| a - b).collect(),
        }
    }

    pub fn lcm(&self, other: &Monomial, weights: &[u32]) -> Monomial {
        let exps = self.exps.iter().zip(&other.exps).map(|(a, b)| *a.max(b)).collect();
        Monomial::new(exps, weights)
    }

    pub fn is_coprime(&self, other: &Monomial) -> bool {
        self.exps.iter().zip(&other.exps).all(|(a, b)| *a == 0 || *b == 0)
    }

    /// Places this monomial into a larger variable set starting at `offset`.
    pub fn embed(&self, offset: usize, nvars: usize) -> Monomial {
        let mut exps = vec![0; nvars];
        exps[offset..offset + self.exps.len()].copy_from_slice(&self.exps);
        Monomial { degree: self.degree, exps }
    }
}

impl Ord for Monomial {
    fn cmp(&self, other: &Self) -> Ordering {
        self.degree.cmp(&other.degree).then_with(|| {
            for (a, b) in self.exps.iter().zip(&other.exps).rev() {
                if a != b {
                    return b.cmp(a);
                }
            }
            Ordering::Equal
        })
    }
}

impl PartialOrd for Monomial {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

/// A polynomial with coefficients in the two-element field: a set of monomials.
#[derive(Clone, PartialEq, Eq, Hash, Debug, Default)]
pub struct Polynomial {
    terms: BTreeSet<Monomial>,
}

impl Polynomial {
    pub fn zero() -> Self {
        Polynomial::default()
    }

    pub fn one(nvars: usize) -> Self {
        Polynomial::from_monomial(Monomial::one(nvars))
    }

    pub fn from_monomial(m: Monomial) -> Self {
        let mut terms = BTreeSet::new();
        terms.insert(m);
        Polynomial { terms }
    }

    pub fn from_terms(terms: impl IntoIterator<Item = Monomial>) -> Self {
        let mut p = Polynomial::zero();
        for t in terms {
            p.toggle(t);
        }
        p
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }

    /// Terms in increasing monomial order.
    pub fn terms(&self) -> impl DoubleEndedIterator<Item = &Monomial> {
        self.terms.iter()
    }

    pub fn leading(&self) -> Option<&Monomial> {
        self.terms.last()
    }

    pub fn contains(&self, m: &Monomial) -> bool {
        self.terms.contains(m)
    }

    pub fn toggle(&mut self, m: Monomial) {
        if !self.terms.remove(&m) {
            self.terms.insert(m);
        }
    }

    pub(crate) fn remove(&mut self, m: &Monomial) -> bool {
        self.terms.remove(m)
    }

    /// The common degree of all terms, if the polynomial is homogeneous and nonzero.
    pub fn degree(&self) -> Option<u32> {
        let first = self.terms.first()?.degree;
        self.terms.iter().all(|m| m.degree == first).then_some(first)
    }

    pub fn is_homogeneous(&self) -> bool {
        self.is_zero() || self.degree().is_some()
    }

    pub fn max_degree(&self) -> Option<u32> {
        self.terms.last().map(|m| m.degree)
    }

    pub fn mul_monomial(&self, m: &Monomial) -> Polynomial {
        Polynomial { terms: self.terms.iter().map(|t| t.mul(m)).collect() }
    }

    /// Plain polynomial product, without reduction modulo any ideal.
    pub fn mul(&self, other: &Polynomial) -> Polynomial {
        let mut out = Polynomial::zero();
        for a in &self.terms {
            for b in &other.terms {
                out.toggle(a.mul(b));
            }
        }
        out
    }

    /// Homogeneous component of the given degree.
    pub fn component(&self, degree: u32) -> Polynomial {
        Polynomial { terms: self.terms.iter().filter(|m| m.degree == degree).cloned().collect() }
    }

    /// Drops every term of degree above `cutoff`.
    pub fn truncate(&self, cutoff: u32) -> Polynomial {
        Polynomial { terms: self.terms.iter().filter(|m| m.degree <= cutoff).cloned().collect() }
    }

    pub fn embed(&self, offset: usize, nvars: usize) -> Polynomial {
        Polynomial { terms: self.terms.iter().map(|m| m.embed(offset, nvars)).collect() }
    }
}

impl AddAssign<&Polynomial> for Polynomial {
    fn add_assign(&mut self, rhs: &Polynomial) {
        for m in &rhs.terms {
            self.toggle(m.clone());
        }
    }
}

impl Add<&Polynomial> for &Polynomial {
    type Output = Polynomial;

    fn add(self, rhs: &Polynomial) -> Polynomial {
        Polynomial { terms: self.terms.symmetric_difference(&rhs.terms).cloned().collect() }
    }
}

impl Add for Polynomial {
    type Output = Polynomial;

    fn add(mut self, rhs: Polynomial) -> Polynomial {
        self += &rhs;
        self
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn grevlex_breaks_ties_on_last_generator() {
        let w = [1, 1, 1];
        let xy = Monomial::new(vec![1, 1, 0], &w);
        let xz = Monomial::new(vec![1, 0, 1], &w);
        let y2 = Monomial::new(vec![0, 2, 0], &w);
        assert!(xy > xz);
        assert!(y2 > xz);
        assert!(Monomial::new(vec![2, 0, 0], &w) > xy);
    }

    #[test]
    fn weighted_degree_dominates() {
        let w = [2, 1];
        assert!(Monomial::new(vec![1, 0], &w) > Monomial::new(vec![0, 1], &w));
        assert!(Monomial::new(vec![0, 2], &w) < Monomial::new(vec![1, 0], &w));
    }

    #[test]
    fn characteristic_two_addition() {
        let w = [1];
        let p = Polynomial::from_monomial(Monomial::new(vec![2], &w));
        assert!((&p + &p).is_zero());
    }
}
