use std::sync::{Arc, OnceLock};

use proptest::prelude::*;

use conjspace::algebra::{GradedAlgebra, Polynomial};
use conjspace::cellcomplex::{poincare_series, product_complex, CellSpec};
use conjspace::constructors::{grassmannian_frame, product_frame, projective_frame, sphere_frame, Extent, TauBundle};
use conjspace::frames::{verify_frame, ConjugationFrame};
use conjspace::hamiltonian::{morse_series, HamiltonianData};

fn gr25() -> &'static ConjugationFrame {
    static F: OnceLock<ConjugationFrame> = OnceLock::new();
    F.get_or_init(|| grassmannian_frame(2, Extent::Finite(5), 20).unwrap())
}

fn cp3_cp2() -> &'static Arc<ConjugationFrame> {
    static F: OnceLock<Arc<ConjugationFrame>> = OnceLock::new();
    F.get_or_init(|| {
        let a = projective_frame(Extent::Finite(3), 16).unwrap();
        let b = projective_frame(Extent::Finite(2), 16).unwrap();
        Arc::new(product_frame(&a, &b).unwrap())
    })
}

/// A homogeneous polynomial of degree `d` in the ambient polynomial ring,
/// picked by a bitmask over all monomials.
fn poly(ring: &GradedAlgebra, d: u32, mask: u64) -> Polynomial {
    let monos = ring.all_monomials(d);
    Polynomial::from_terms(monos.into_iter().enumerate().filter(|(i, _)| mask >> (i % 64) & 1 == 1).map(|(_, m)| m))
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(48))]

    #[test]
    fn normal_form_is_idempotent(d in 0u32..=10, mask in any::<u64>()) {
        let ring = gr25().even();
        let p = poly(ring, 2 * d, mask);
        let nf = ring.normal_form(&p).unwrap();
        prop_assert_eq!(ring.normal_form(&nf).unwrap(), nf);
    }

    #[test]
    fn squaring_is_additive(d in 0u32..=5, m1 in any::<u64>(), m2 in any::<u64>()) {
        let ring = gr25().fixed();
        let (p, q) = (poly(ring, d, m1), poly(ring, d, m2));
        let sum = ring.reduce(&{ let mut s = p.clone(); s += &q; s });
        let mut rhs = ring.square(&p);
        rhs += &ring.square(&q);
        prop_assert_eq!(ring.square(&sum), rhs);
    }

    #[test]
    fn tensor_series_is_convolution(n in 1u32..=5, m in 1u32..=5, k in 1u32..=3) {
        let a = projective_frame(Extent::Finite(n), 18).unwrap();
        let s = sphere_frame(k, 18).unwrap();
        let t = a.even().tensor(s.even()).unwrap();
        prop_assert_eq!(t.hilbert(), a.even().hilbert().convolve(&s.even().hilbert()).truncated(18));
        let b = projective_frame(Extent::Finite(m), 18).unwrap();
        let u = a.fixed().tensor(b.fixed()).unwrap();
        prop_assert_eq!(u.hilbert(), a.fixed().hilbert().convolve(&b.fixed().hilbert()).truncated(18));
    }

    #[test]
    fn restriction_is_multiplicative(d1 in 1u32..=3, d2 in 1u32..=3, m1 in any::<u64>(), m2 in any::<u64>()) {
        let f = gr25();
        let (p, q) = (poly(f.even(), 2 * d1, m1), poly(f.even(), 2 * d2, m2));
        let lhs = f.restrict(&f.even().mul(&p, &q), 0).unwrap();
        let rhs = f.restrict(&p, 0).unwrap().mul(&f.restrict(&q, 0).unwrap(), f.fixed());
        for i in 0..=2 * (d1 + d2) {
            prop_assert_eq!(lhs.coeff(i), rhs.coeff(i), "u^{}", i);
        }
    }

    #[test]
    fn conjugation_equation_closes_under_products(d in 1u32..=5, mask in any::<u64>()) {
        let f = gr25();
        let p = f.even().normal_form(&poly(f.even(), 2 * d, mask)).unwrap();
        let r = f.restrict(&p, 0).unwrap();
        prop_assert!(r.u_degree().map_or(true, |k| k <= d));
        prop_assert_eq!(r.coeff(d), &f.kappa_of(&p));
    }

    #[test]
    fn products_are_symmetric(n in 1u32..=3, k in 1u32..=3) {
        let a = projective_frame(Extent::Finite(n), 12).unwrap();
        let s = sphere_frame(k, 12).unwrap();
        let ab = product_frame(&a, &s).unwrap();
        let ba = product_frame(&s, &a).unwrap();
        prop_assert!(verify_frame(&ab).passed());
        prop_assert!(verify_frame(&ba).passed());
        prop_assert_eq!(ab.even().hilbert(), ba.even().hilbert());
        prop_assert_eq!(ab.fixed().hilbert(), ba.fixed().hilbert());
    }

    #[test]
    fn whitney_formula(m1 in any::<u64>(), m2 in any::<u64>(), m3 in any::<u64>()) {
        let base = cp3_cp2();
        let line = |mask: u64| TauBundle::new(base.clone(), vec![poly(base.even(), 2, mask)]).unwrap();
        let (x, y, z) = (line(m1), line(m2), line(m3));
        let xy = x.whitney_sum(&y).unwrap();
        let xyz = xy.whitney_sum(&z).unwrap();
        let fixed = base.fixed();
        prop_assert_eq!(xy.total_sw(), fixed.mul(&x.total_sw(), &y.total_sw()));
        prop_assert_eq!(xyz.total_chern(), base.even().mul(&xy.total_chern(), &z.total_chern()));
        prop_assert_eq!(base.kappa_of(&xyz.total_chern()), xyz.total_sw());
    }

    #[test]
    fn cell_products_commute(a in prop::collection::vec((0u32..=4, 1u64..=3), 1..4),
                             b in prop::collection::vec((0u32..=4, 1u64..=3), 1..4)) {
        let spec = |v: &[(u32, u64)]| {
            let mut v: Vec<(u32, u64)> = v.iter().map(|(d, c)| (2 * d, *c)).collect();
            v.sort_unstable();
            v.dedup_by_key(|x| x.0);
            CellSpec::from_counts(&v).unwrap()
        };
        let (x, y) = (spec(&a), spec(&b));
        let xy = product_complex(&x, &y);
        prop_assert_eq!(&xy, &product_complex(&y, &x));
        let (p, q) = (poincare_series(&x).unwrap(), poincare_series(&y).unwrap());
        let (pq, _) = poincare_series(&xy).unwrap();
        let reach = pq.reach();
        prop_assert_eq!(pq, p.0.truncated(reach).convolve(&q.0.truncated(reach)));
    }

    #[test]
    fn morse_series_ignore_component_order(n in 1u32..=6, seed in any::<u64>()) {
        use rand::{seq::SliceRandom, SeedableRng};
        let data = HamiltonianData::projective_circle(n, 16);
        let mut shuffled = data.clone();
        shuffled.components.shuffle(&mut rand::rngs::StdRng::seed_from_u64(seed));
        let (a, b) = (morse_series(&data, &[1]).unwrap(), morse_series(&shuffled, &[1]).unwrap());
        prop_assert_eq!(a.total, b.total);
        prop_assert_eq!(a.real, b.real);
    }
}
