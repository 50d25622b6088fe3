use std::sync::Arc;

use super::Extent;
use crate::algebra::{Generator, GradedAlgebra, Polynomial};
use crate::frames::{ConjugationFrame, FrameError, UPoly};

/// Parity of `C(n, j)`, with `C(-1, 0) = 1`.
fn binomial_odd(n: i64, j: u32) -> bool {
    if n < 0 {
        return j == 0;
    }
    let n = n as u64;
    n & u64::from(j) == u64::from(j)
}

/// `Sq^t(w_i)` by the Wu formula, as a polynomial in `w_1..w_k` (generator
/// indices `0..k` of `fixed`).
pub(crate) fn wu_square(fixed: &GradedAlgebra, k: u32, i: u32, t: u32) -> Polynomial {
    let w = |m: u32| -> Option<Polynomial> {
        match m {
            0 => Some(fixed.one()),
            m if m <= k => Some(fixed.gen(m as usize - 1)),
            _ => None,
        }
    };
    let mut out = Polynomial::zero();
    for j in 0..=t {
        if !binomial_odd(i as i64 - t as i64 + j as i64 - 1, j) {
            continue;
        }
        if let (Some(a), Some(b)) = (w(t - j), w(i + j)) {
            out += &fixed.mul(&a, &b);
        }
    }
    out
}

/// `r∘σ(c_i) = Σ_t Sq^t(w_i) u^{i-t}`: the degree-`2i` piece of
/// `Π_j (1 + x_j u + x_j^2)` written in `w_i = e_i(x)`.
pub(crate) fn chern_restriction(fixed: &GradedAlgebra, k: u32, i: u32) -> UPoly {
    UPoly::from_terms(2 * i, (0..=i).map(|t| (i - t, wu_square(fixed, k, i, t)))).reduce(fixed)
}

/// `Gr(k, C^n)` with real locus `Gr(k, R^n)`: Chern classes `c1..ck` of the
/// tautological bundle and `cb1..cb{n-k}` of its complement, subject to
/// `c · cb = 1`; the fixed ring uses `w`, `wb` in half the degree.
pub fn grassmannian_frame(k: u32, n: Extent, cutoff: u32) -> Result<ConjugationFrame, FrameError> {
    let q = match n {
        Extent::Finite(n) if k >= 1 && k < n => Some(n - k),
        Extent::Infinite if k >= 1 => None,
        _ => return Err(FrameError::Invalid(format!("Gr({k}, {n}) needs 1 <= k < n"))),
    };
    let ring = |c: &str, cb: &str, scale: u32| -> Result<Arc<GradedAlgebra>, FrameError> {
        let mut gens: Vec<Generator> = (1..=k).map(|i| Generator::new(format!("{c}{i}"), scale * i)).collect();
        gens.extend((1..=q.unwrap_or(0)).map(|j| Generator::new(format!("{cb}{j}"), scale * j)));
        let skeleton = GradedAlgebra::polynomial_ring(gens.clone(), cutoff)?;
        let mut rels = Vec::new();
        if let Some(q) = q {
            let cls = |i: u32| if i == 0 { Some(skeleton.one()) } else if i <= k { Some(skeleton.gen(i as usize - 1)) } else { None };
            let bar = |j: u32| {
                if j == 0 {
                    Some(skeleton.one())
                } else if j <= q {
                    Some(skeleton.gen((k + j) as usize - 1))
                } else {
                    None
                }
            };
            for d in 1..=k + q {
                let mut r = Polynomial::zero();
                for i in 0..=d {
                    if let (Some(a), Some(b)) = (cls(i), bar(d - i)) {
                        r += &a.mul(&b);
                    }
                }
                rels.push(r);
            }
        }
        Ok(Arc::new(GradedAlgebra::new(gens, rels, cutoff)?))
    };
    let even = ring("c", "cb", 2)?;
    let fixed = ring("w", "wb", 1)?;
    let kappa: Vec<Polynomial> = (0..fixed.ngens()).map(|i| fixed.gen(i)).collect();
    let mut rsigma: Vec<UPoly> = (1..=k).map(|i| chern_restriction(&fixed, k, i)).collect();
    // cb = c^{-1}: r(cb_d) = Σ_{i>=1} r(c_i) r(cb_{d-i}).
    let mut bars = vec![UPoly::u_power(0, &fixed)];
    for d in 1..=q.unwrap_or(0) {
        let mut acc = UPoly::zero(2 * d);
        for i in 1..=d.min(k) {
            acc = acc.add(&rsigma[i as usize - 1].mul(&bars[(d - i) as usize], &fixed));
        }
        bars.push(acc);
    }
    rsigma.extend(bars.into_iter().skip(1));
    ConjugationFrame::new(format!("Gr({k},{n})"), even, fixed, kappa, rsigma)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::algebra::Monomial;
    use crate::frames::verify_frame;

    /// Expands `Π (1 + x_j u + x_j^2)` in `Z2[x_1..x_k]` and compares each
    /// graded piece with the Wu-formula image under `w_i ↦ e_i(x)`.
    #[test]
    fn wu_formula_matches_splitting_principle() {
        for k in 1..=3u32 {
            let xs: Vec<Generator> = (1..=k).map(|j| Generator::new(format!("x{j}"), 1)).collect();
            let ring = GradedAlgebra::polynomial_ring(xs, 12).unwrap();
            let ws: Vec<Generator> = (1..=k).map(|j| Generator::new(format!("w{j}"), j)).collect();
            let fixed = GradedAlgebra::polynomial_ring(ws, 12).unwrap();
            // e_i(x) by subset enumeration.
            let e = |i: u32| -> Polynomial {
                let mut p = Polynomial::zero();
                for mask in 0u32..(1 << k) {
                    if mask.count_ones() == i {
                        let exps = (0..k).map(|j| ((mask >> j) & 1) as u16).collect();
                        p.toggle(ring.monomial(exps));
                    }
                }
                p
            };
            let subst = |p: &Polynomial| -> Polynomial {
                let mut out = Polynomial::zero();
                for m in p.terms() {
                    let mut acc = ring.one();
                    for (i, ex) in m.exponents().iter().enumerate() {
                        acc = ring.mul(&acc, &ring.pow(&e(i as u32 + 1), u32::from(*ex)));
                    }
                    out += &acc;
                }
                out
            };
            // coefficient of u^s in the degree-2i piece: Σ_{|S|=i} Σ_{T⊆S,|T|=i-s} x^S x^T
            for i in 1..=k {
                let r = chern_restriction(&fixed, k, i);
                for s in 0..=i {
                    let mut want = Polynomial::zero();
                    for mask in 0u32..(1 << k) {
                        if mask.count_ones() != i {
                            continue;
                        }
                        for sub in 0u32..(1 << k) {
                            if sub & mask == sub && sub.count_ones() == i - s {
                                let exps = (0..k).map(|j| (((mask >> j) & 1) + ((sub >> j) & 1)) as u16).collect();
                                want.toggle(Monomial::new(exps, ring.weights()));
                            }
                        }
                    }
                    assert_eq!(subst(r.coeff(s)), want, "k={k} i={i} u^{s}");
                }
            }
        }
    }

    #[test]
    fn low_chern_restrictions() {
        let g = grassmannian_frame(2, Extent::Finite(4), 24).unwrap();
        let f = g.fixed();
        let up = |deg: u32, terms: &[(u32, &str)]| {
            UPoly::from_terms(deg, terms.iter().map(|(i, c)| (*i, f.parse(c).unwrap()))).reduce(f)
        };
        assert_eq!(g.rsigma()[0], up(2, &[(1, "w1"), (0, "w1^2")]));
        assert_eq!(g.rsigma()[1], up(4, &[(2, "w2"), (1, "w1*w2"), (0, "w2^2")]));
    }

    #[test]
    fn gr24_passes_axioms() {
        let g = grassmannian_frame(2, Extent::Finite(4), 24).unwrap();
        let rep = verify_frame(&g);
        assert!(rep.passed(), "{:?}", rep.first_failure());
        assert_eq!(g.fixed().hilbert().truncated(4).coefficients(), &[1, 1, 2, 1, 1]);
    }

    #[test]
    fn rejects_bad_dimensions() {
        assert!(grassmannian_frame(3, Extent::Finite(3), 24).is_err());
        assert!(grassmannian_frame(0, Extent::Infinite, 24).is_err());
    }
}
