//! Minimal presentations: drop generators that are expressible through
//! earlier ones and recompute the relation ideal on the survivors.

use std::sync::Arc;

use super::poly::{Monomial, Polynomial};
use super::{AlgebraError, AlgebraMap, DegreeScale, GradedAlgebra};
use crate::linalg::{BitVec, Echelon};

/// An algebra on a minimal generating set, with inverse isomorphisms to the
/// original presentation.
#[derive(Clone, Debug)]
pub struct MinimalPresentation {
    pub algebra: Arc<GradedAlgebra>,
    /// Original generators kept, by original index, in original order.
    pub kept: Vec<usize>,
    pub to_minimal: AlgebraMap,
    pub from_minimal: AlgebraMap,
}

/// Generators are scanned in order of (degree, list position); a generator is
/// kept iff it is not in the span of monomials in already-kept generators.
pub fn minimal_presentation(alg: &Arc<GradedAlgebra>) -> Result<MinimalPresentation, AlgebraError> {
    let n = alg.ngens();
    let mut order: Vec<usize> = (0..n).collect();
    order.sort_by_key(|i| (alg.weights()[*i], *i));

    let mut kept_mask = vec![false; n];
    // expressions of dropped generators, as polynomials in the original variables
    let mut expressions: Vec<Option<Polynomial>> = vec![None; n];
    for &g in &order {
        let d = alg.weights()[g];
        if d > alg.cutoff() {
            expressions[g] = Some(Polynomial::zero());
            continue;
        }
        let candidates: Vec<Monomial> =
            alg.all_monomials(d).into_iter().filter(|m| m.exponents().iter().enumerate().all(|(i, e)| *e == 0 || kept_mask[i])).collect();
        let dim = alg.dim(d);
        let mut ech = Echelon::new(dim, candidates.len());
        for m in &candidates {
            let _ = ech.insert(&alg.coordinates(&Polynomial::from_monomial(m.clone()), d));
        }
        match ech.solve(&alg.coordinates(&alg.gen(g), d)) {
            Some(combo) => {
                expressions[g] = Some(Polynomial::from_terms(combo.ones().map(|k| candidates[k].clone())));
            }
            None => kept_mask[g] = true,
        }
    }

    let kept: Vec<usize> = (0..n).filter(|i| kept_mask[*i]).collect();
    let gens: Vec<_> = kept.iter().map(|i| alg.generators()[*i].clone()).collect();
    let free = GradedAlgebra::polynomial_ring(gens.clone(), alg.cutoff())?;
    let lift = |m: &Monomial| -> Polynomial {
        let mut exps = vec![0u16; n];
        for (k, i) in kept.iter().enumerate() {
            exps[*i] = m.exponents()[k];
        }
        Polynomial::from_monomial(alg.monomial(exps))
    };

    let mut relations: Vec<Polynomial> = Vec::new();
    for d in 1..=alg.cutoff() {
        let monos = free.all_monomials(d);
        if monos.is_empty() {
            continue;
        }
        let coords_of = |p: &Polynomial| -> BitVec {
            BitVec::from_indices(monos.len(), p.terms().map(|m| monos.binary_search(m).expect("monomial of degree d")))
        };
        // span of the ideal already generated, in degree d
        let mut ideal_vectors = Vec::new();
        for r in &relations {
            let e = r.degree().unwrap();
            for m in free.all_monomials(d - e) {
                ideal_vectors.push(coords_of(&r.mul_monomial(&m)));
            }
        }
        let images: Vec<BitVec> = monos.iter().map(|m| alg.coordinates(&lift(m), d)).collect();
        let kernel = crate::linalg::kernel(&images, alg.dim(d));
        let mut known = Echelon::new(monos.len(), ideal_vectors.len() + kernel.len());
        for v in &ideal_vectors {
            let _ = known.insert(v);
        }
        for v in kernel {
            if known.insert(&v).is_ok() {
                relations.push(Polynomial::from_terms(v.ones().map(|k| monos[k].clone())));
            }
        }
    }
    let minimal = Arc::new(GradedAlgebra::new(gens, relations, alg.cutoff())?);

    let to_images = (0..n)
        .map(|i| match kept.iter().position(|k| *k == i) {
            Some(k) => minimal.gen(k),
            None => {
                let expr = expressions[i].as_ref().expect("dropped generator has an expression");
                let terms = expr.terms().map(|m| {
                    let exps = kept.iter().map(|k| m.exponents()[*k]).collect();
                    minimal.monomial(exps)
                });
                Polynomial::from_terms(terms)
            }
        })
        .collect();
    let to_minimal = AlgebraMap::new(alg.clone(), minimal.clone(), DegreeScale::One, to_images)?;
    let from_images = kept.iter().map(|i| alg.gen(*i)).collect();
    let from_minimal = AlgebraMap::new(minimal.clone(), alg.clone(), DegreeScale::One, from_images)?;
    Ok(MinimalPresentation { algebra: minimal, kept, to_minimal, from_minimal })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn projective_line_of_grassmannian_type_collapses() {
        // Gr(1,4): c1 + cb1, c1*cb1 + cb2, c1*cb2 + cb3, c1*cb3
        let g = Arc::new(
            GradedAlgebra::from_strs(
                &[("c1", 2), ("cb1", 2), ("cb2", 4), ("cb3", 6)],
                &["c1 + cb1", "c1*cb1 + cb2", "c1*cb2 + cb3", "c1*cb3"],
                20,
            )
            .unwrap(),
        );
        let mp = minimal_presentation(&g).unwrap();
        assert_eq!(mp.kept, vec![0]);
        let spec = mp.algebra.to_canonical_spec();
        assert_eq!(spec.relations, vec!["c1^4".to_string()]);
        assert!(mp.to_minimal.check().passed());
        assert!(mp.from_minimal.check().passed());
        assert!(mp.to_minimal.is_iso_up_to().iso);
        assert_eq!(mp.algebra.hilbert(), g.hilbert());
    }

    #[test]
    fn free_algebra_is_already_minimal() {
        let g = Arc::new(GradedAlgebra::from_strs(&[("a", 2), ("b", 2)], &["a^2", "b^3"], 16).unwrap());
        let mp = minimal_presentation(&g).unwrap();
        assert_eq!(mp.kept, vec![0, 1]);
        assert_eq!(mp.algebra.groebner_basis(), g.groebner_basis());
    }
}
