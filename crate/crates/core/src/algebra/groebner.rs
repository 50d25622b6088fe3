//! Degree-by-degree Buchberger algorithm for homogeneous ideals over the
//! two-element field, truncated at a degree cutoff.

use std::collections::BTreeMap;

use super::poly::{Monomial, Polynomial};
use super::AlgebraError;

/// Resource limits for the truncated Buchberger loop.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct Limits {
    pub max_pairs: usize,
    pub max_basis: usize,
}

impl Default for Limits {
    fn default() -> Self {
        Limits { max_pairs: 2_000_000, max_basis: 50_000 }
    }
}

/// Fully reduces `p` against `basis`. Every term of the result is standard.
pub fn reduce(p: &Polynomial, basis: &[Polynomial]) -> Polynomial {
    let mut work = p.clone();
    let mut out = Polynomial::zero();
    while let Some(t) = work.leading().cloned() {
        let reducer = basis.iter().find(|g| g.leading().is_some_and(|lm| lm.divides(&t)));
        match reducer {
            Some(g) => {
                let q = g.leading().unwrap().quotient_of(&t);
                work += &g.mul_monomial(&q);
            }
            None => {
                work.remove(&t);
                out.toggle(t);
            }
        }
    }
    out
}

fn s_polynomial(f: &Polynomial, g: &Polynomial, weights: &[u32]) -> Polynomial {
    let lf = f.leading().unwrap();
    let lg = g.leading().unwrap();
    let l = lf.lcm(lg, weights);
    f.mul_monomial(&lf.quotient_of(&l)) + g.mul_monomial(&lg.quotient_of(&l))
}

/// Reduced Gröbner basis of the ideal generated by `relations`, valid in all
/// degrees up to `cutoff`. Relations must be homogeneous.
pub fn groebner_basis(
    relations: &[Polynomial],
    weights: &[u32],
    cutoff: u32,
    limits: Limits,
) -> Result<Vec<Polynomial>, AlgebraError> {
    let mut inputs: BTreeMap<u32, Vec<Polynomial>> = BTreeMap::new();
    for r in relations {
        if let Some(d) = r.degree() {
            if d <= cutoff {
                inputs.entry(d).or_default().push(r.clone());
            }
        }
    }
    let mut pairs: BTreeMap<u32, Vec<(usize, usize)>> = BTreeMap::new();
    let mut basis: Vec<Polynomial> = Vec::new();
    let mut pair_count = 0usize;

    for d in 0..=cutoff {
        let mut todo: Vec<Polynomial> = inputs.remove(&d).unwrap_or_default();
        if let Some(ps) = pairs.remove(&d) {
            todo.extend(ps.into_iter().map(|(i, j)| s_polynomial(&basis[i], &basis[j], weights)));
        }
        for p in todo {
            let r = reduce(&p, &basis);
            if r.is_zero() {
                continue;
            }
            let new_idx = basis.len();
            let lm = r.leading().unwrap().clone();
            for (i, g) in basis.iter().enumerate() {
                let lg = g.leading().unwrap();
                if lg.is_coprime(&lm) {
                    continue;
                }
                let ld = lg.lcm(&lm, weights).degree();
                if ld <= cutoff {
                    pairs.entry(ld).or_default().push((i, new_idx));
                    pair_count += 1;
                }
            }
            basis.push(r);
            if pair_count > limits.max_pairs || basis.len() > limits.max_basis {
                return Err(AlgebraError::CutoffOverflow { degree: d, pairs: pair_count, basis: basis.len() });
            }
        }
    }
    Ok(interreduce(basis))
}

fn interreduce(mut basis: Vec<Polynomial>) -> Vec<Polynomial> {
    // drop elements whose leading monomial is divisible by another's
    let leads: Vec<Monomial> = basis.iter().map(|g| g.leading().unwrap().clone()).collect();
    let keep: Vec<bool> = (0..basis.len())
        .map(|i| !(0..basis.len()).any(|j| j != i && leads[j].divides(&leads[i]) && (leads[j] != leads[i] || j < i)))
        .collect();
    basis = basis.into_iter().zip(keep).filter(|(_, k)| *k).map(|(g, _)| g).collect();
    for i in 0..basis.len() {
        let lead = basis[i].leading().unwrap().clone();
        let mut tail = basis[i].clone();
        tail.remove(&lead);
        let others: Vec<Polynomial> =
            basis.iter().enumerate().filter(|(j, _)| *j != i).map(|(_, g)| g.clone()).collect();
        let mut reduced = reduce(&tail, &others);
        reduced.toggle(lead);
        basis[i] = reduced;
    }
    basis.sort_by(|a, b| a.leading().cmp(&b.leading()));
    basis
}

#[cfg(test)]
mod tests {
    use super::*;

    fn mono(e: &[u16], w: &[u32]) -> Monomial {
        Monomial::new(e.to_vec(), w)
    }

    #[test]
    fn principal_ideal_is_its_own_basis() {
        let w = [2];
        let a3 = Polynomial::from_monomial(mono(&[3], &w));
        let gb = groebner_basis(&[a3.clone()], &w, 24, Limits::default()).unwrap();
        assert_eq!(gb, vec![a3]);
    }

    #[test]
    fn empty_relations_give_empty_basis() {
        let gb = groebner_basis(&[], &[2, 2], 24, Limits::default()).unwrap();
        assert!(gb.is_empty());
    }

    #[test]
    fn overflow_is_reported() {
        let w = [1, 1, 1];
        let rels = vec![
            Polynomial::from_terms([mono(&[2, 0, 0], &w), mono(&[0, 1, 1], &w)]),
            Polynomial::from_terms([mono(&[0, 2, 0], &w), mono(&[1, 0, 1], &w)]),
            Polynomial::from_terms([mono(&[0, 0, 2], &w), mono(&[1, 1, 0], &w)]),
        ];
        let tight = Limits { max_pairs: 1, max_basis: 50 };
        assert!(matches!(groebner_basis(&rels, &w, 10, tight), Err(AlgebraError::CutoffOverflow { .. })));
        assert!(groebner_basis(&rels, &w, 10, Limits::default()).is_ok());
    }
}
