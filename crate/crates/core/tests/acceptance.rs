//! Acceptance criteria, one line per criterion. Exact arithmetic throughout.

use std::sync::Arc;
use std::time::{Duration, Instant};

use num_rational::Rational64;

use conjspace::algebra::GradedAlgebra;
use conjspace::constructors::{
    bt_frame, connected_sum_frame, grassmannian_frame, point_frame, product_frame, projective_bundle_frame, projective_frame,
    sphere_frame, thom_space_frame, toric_frame, Extent, TauBundle, ToricData,
};
use conjspace::frames::{
    canonical_frame, check_injectivity_r, halving_series, localize_check, verify_frame, verify_naturality, ConjugationFrame,
    FrameMorphism, UPoly,
};
use conjspace::hamiltonian::{
    morse_series, mt2_check, tw_kernel, two_torsion_scan, xi_independence, EquivariantPresentation, HamiltonianData,
};

type Outcome = Result<String, String>;

fn ensure(cond: bool, msg: impl FnOnce() -> String) -> Result<(), String> {
    if cond {
        Ok(())
    } else {
        Err(msg())
    }
}

fn within(start: Instant, limit: Duration) -> Result<(), String> {
    let t = start.elapsed();
    ensure(t < limit, || format!("took {t:?}, limit {limit:?}"))
}

fn e<E: std::fmt::Display>(x: E) -> String {
    x.to_string()
}

fn cp(n: u32, cutoff: u32) -> Result<ConjugationFrame, String> {
    projective_frame(Extent::Finite(n), cutoff).map_err(e)
}

fn restrict_str(f: &ConjugationFrame, class: &str) -> Result<String, String> {
    let a = f.even().parse(class).map_err(e)?;
    Ok(f.restrict(&a, 0).map_err(e)?.display(f.fixed()).to_string())
}

fn c1_golden() -> Outcome {
    let start = Instant::now();
    for n in 6..=8 {
        let f = cp(n, 24)?;
        let sq = restrict_str(&f, "a^2")?;
        let cube = restrict_str(&f, "a^3")?;
        ensure(sq == "b^2*u^2 + b^4", || format!("CP^{n}: restrict(a^2) = {sq}"))?;
        ensure(cube == "b^3*u^3 + b^4*u^2 + b^5*u + b^6", || format!("CP^{n}: restrict(a^3) = {cube}"))?;
    }
    within(start, Duration::from_secs(1))?;
    Ok("CP^6..CP^8: a^2 and a^3 restrict to the printed formulas".into())
}

/// `C(k, i) mod 2` by Lucas: the product of `C(k_j, i_j)` over base-2 digits.
fn lucas_odd(mut k: u32, mut i: u32) -> bool {
    let small = [[1u32, 0], [1, 1]];
    let mut prod = 1;
    while k > 0 || i > 0 {
        prod *= small[(k % 2) as usize][(i % 2) as usize];
        k /= 2;
        i /= 2;
    }
    prod % 2 == 1
}

fn c2_lucas() -> Outcome {
    let start = Instant::now();
    let f = projective_frame(Extent::Infinite, 40).map_err(e)?;
    let b = f.fixed().parse("b").map_err(e)?;
    let mut checked = 0;
    for k in 1..=16u32 {
        let r = f.restrict(&f.even().parse(&format!("a^{k}")).map_err(e)?, 0).map_err(e)?;
        for i in 0..=k {
            let want = if lucas_odd(k, i) { f.fixed().pow(&b, 2 * k - i) } else { conjspace::algebra::Polynomial::zero() };
            ensure(r.coeff(i) == &want, || format!("k={k}: u^{i} coefficient is {}", f.fixed().format(r.coeff(i))))?;
            checked += 1;
        }
        ensure(r.u_degree() == Some(k), || format!("k={k}: u-degree {:?}", r.u_degree()))?;
    }
    within(start, Duration::from_secs(5))?;
    Ok(format!("{checked} coefficients of restrict(a^k), k <= 16, agree with Lucas parity"))
}

fn catalog(cutoff: u32) -> Result<Vec<ConjugationFrame>, String> {
    let mut v = vec![point_frame(cutoff)];
    for k in 1..=4 {
        v.push(sphere_frame(k, cutoff).map_err(e)?);
    }
    for n in 1..=8 {
        v.push(cp(n, cutoff)?);
    }
    for r in 1..=3 {
        v.push(bt_frame(r, cutoff).map_err(e)?);
    }
    v.push(grassmannian_frame(2, Extent::Finite(4), cutoff).map_err(e)?);
    v.push(grassmannian_frame(2, Extent::Finite(5), cutoff).map_err(e)?);
    v.push(grassmannian_frame(3, Extent::Finite(6), cutoff).map_err(e)?);
    let cp1 = cp(1, cutoff)?;
    let cp2 = cp(2, cutoff)?;
    v.push(product_frame(&cp1, &cp1).map_err(e)?);
    v.push(product_frame(&cp2, &sphere_frame(2, cutoff).map_err(e)?).map_err(e)?);
    v.push(connected_sum_frame(&cp2, &cp2, 4).map_err(e)?);
    v.push(toric_frame(&ToricData::square(), cutoff).map_err(e)?);
    v.push(toric_frame(&ToricData::simplex(3), cutoff).map_err(e)?);
    v.push(toric_frame(&ToricData::hirzebruch(1), cutoff).map_err(e)?);
    let base2 = Arc::new(cp2.clone());
    let base3 = Arc::new(cp(3, cutoff)?);
    let hopf2 = TauBundle::line(base2.clone(), "a").map_err(e)?;
    v.push(projective_bundle_frame(&hopf2.whitney_sum(&TauBundle::trivial(base2.clone(), 1)).map_err(e)?).map_err(e)?.frame);
    let hopf3 = TauBundle::line(base3.clone(), "a").map_err(e)?;
    v.push(projective_bundle_frame(&hopf3.whitney_sum(&hopf3).map_err(e)?).map_err(e)?.frame);
    v.push(thom_space_frame(&hopf2).map_err(e)?);
    v.push(thom_space_frame(&TauBundle::from_strs(base3, &["a", "0"]).map_err(e)?).map_err(e)?);
    Ok(v)
}

fn c3_catalog() -> Outcome {
    let start = Instant::now();
    let frames = catalog(16)?;
    ensure(frames.len() >= 20, || format!("only {} frames", frames.len()))?;
    for f in &frames {
        let rep = verify_frame(f);
        ensure(rep.passed(), || format!("{}: {:?}", f.name(), rep.first_failure()))?;
        let inj = check_injectivity_r(f).map_err(e)?;
        ensure(inj.injective, || format!("{}: r not injective in degree {:?}", f.name(), inj.failing_degree))?;
        let h = halving_series(f);
        ensure(h.holds, || format!("{}: halving fails in degree {:?}", f.name(), h.first_defect))?;
    }
    within(start, Duration::from_secs(60))?;
    Ok(format!("{} frames pass axioms, injectivity of r and halving", frames.len()))
}

fn canonical_json(f: &ConjugationFrame) -> Result<String, String> {
    serde_json::to_string(&canonical_frame(f).map_err(e)?.to_spec()).map_err(e)
}

fn c4_grassmannian() -> Outcome {
    for n in 2..=8 {
        let g = canonical_json(&grassmannian_frame(1, Extent::Finite(n), 24).map_err(e)?)?;
        let p = canonical_json(&cp(n - 1, 24)?)?;
        ensure(g == p, || format!("Gr(1,{n}) vs CP^{}: {g} != {p}", n - 1))?;
    }
    Ok("Gr(1,n) and CP^(n-1) serialize identically for n <= 8".into())
}

fn c5_thom() -> Outcome {
    for n in 2..=6 {
        let base = Arc::new(cp(n - 1, 24)?);
        let t = thom_space_frame(&TauBundle::line(base, "a").map_err(e)?).map_err(e)?;
        let lhs = canonical_frame(&t).map_err(e)?;
        let rhs = canonical_frame(&cp(n, 24)?).map_err(e)?;
        ensure(lhs.even().relations() == rhs.even().relations(), || format!("n={n}: even rings differ"))?;
        ensure(lhs.fixed().relations() == rhs.fixed().relations(), || format!("n={n}: fixed rings differ"))?;
        ensure(lhs.kappa().images() == rhs.kappa().images(), || format!("n={n}: kappa differs"))?;
        ensure(lhs.rsigma() == rhs.rsigma(), || format!("n={n}: r∘σ differs"))?;
    }
    Ok("Thom space of the Hopf line over CP^(n-1) is CP^n for n <= 6".into())
}

fn c6_localization() -> Outcome {
    let f = projective_frame(Extent::Infinite, 16).map_err(e)?;
    let rep = localize_check(&f).map_err(e)?;
    ensure(rep.counterexample(), || format!("evaluation at ones: {:?}", rep.evaluation_at_ones))?;
    // r∘σ(a) = b u + b^2 evaluated at u = b = 1 is 1 + 1
    let r = &f.rsigma()[0];
    let ones: u32 = r.terms().map(|(_, c)| c.terms().count() as u32).sum();
    ensure(ones % 2 == 0, || "r∘σ(a) has an odd number of terms".into())?;
    Ok("evaluating r∘σ(a) at u = b = 1 on CP^inf gives 0".into())
}

fn c7_naturality() -> Outcome {
    let mut n_pairs = 0;
    for n in 2..=8 {
        let big = Arc::new(cp(n, 24)?);
        for k in 1..n {
            let small = Arc::new(cp(k, 24)?);
            let m = FrameMorphism::new(big.clone(), small, &[("a", "a")], &[("b", "b")]).map_err(e)?;
            let rep = verify_naturality(&m);
            ensure(rep.passed(), || format!("CP^{k} -> CP^{n}: {:?}", rep.checks()))?;
            n_pairs += 1;
        }
    }
    let big = Arc::new(cp(4, 24)?);
    let small = Arc::new(cp(2, 24)?);
    let bad = FrameMorphism::new(big, small, &[("a", "0")], &[("b", "b")]).map_err(e)?;
    let rep = verify_naturality(&bad);
    ensure(!rep.passed(), || "corrupted morphism a -> 0 passed".into())?;
    let w = rep.checks().into_iter().find(|c| !c.passed()).and_then(|c| c.witness).unwrap_or_default();
    ensure(w.starts_with("degree 2:"), || format!("witness {w:?}"))?;
    Ok(format!("{n_pairs} inclusions natural; a -> 0 rejected ({w})"))
}

fn c8_morse() -> Outcome {
    for n in 1..=6u32 {
        let data = HamiltonianData::projective_circle(n, 24);
        let rep = morse_series(&data, &[1]).map_err(e)?;
        let reach = data.cutoff() as usize;
        let total: Vec<u64> = (0..=reach).map(|d| u64::from(d % 2 == 0 && d <= 2 * n as usize)).collect();
        let real: Vec<u64> = (0..=reach).map(|d| u64::from(d <= n as usize)).collect();
        ensure(rep.total.truncated(reach as u32).coefficients() == total.as_slice(), || {
            format!("CP^{n}: P = {:?}", rep.total.coefficients())
        })?;
        ensure(rep.real.truncated(reach as u32).coefficients() == real.as_slice(), || {
            format!("CP^{n}: real P = {:?}", rep.real.coefficients())
        })?;
        ensure(rep.halving, || format!("CP^{n}: halving verdict false"))?;
        ensure(xi_independence(&data, &[1], &[-1]).map_err(e)?, || format!("CP^{n}: depends on xi"))?;
    }
    Ok("CP^1..CP^6 circle actions: Morse series, halving, xi = +-1 agree".into())
}

fn c9_two_torsion() -> Outcome {
    let doubled = HamiltonianData::doubled_circle(8);
    let flags = two_torsion_scan(&doubled);
    ensure(!flags.is_empty(), || "weight 2 not flagged".into())?;
    ensure(!mt2_check(&doubled), || "mt2_check true for weight 2".into())?;
    let square = HamiltonianData::toric_square(8);
    ensure(two_torsion_scan(&square).is_empty(), || "toric square flagged".into())?;
    ensure(mt2_check(&square), || "mt2_check false on toric square".into())?;
    Ok(format!("weight 2 flagged ({} flag), toric CP^1 x CP^1 clean", flags.len()))
}

/// Gaussian elimination on bitmask rows; returns the rank.
fn rank(rows: &[u64]) -> usize {
    let mut basis: Vec<u64> = Vec::new();
    for &r in rows {
        let mut v = r;
        for b in &basis {
            v = v.min(v ^ b);
        }
        if v != 0 {
            basis.push(v);
            basis.sort_unstable_by(|a, b| b.cmp(a));
        }
    }
    basis.len()
}

/// Kernel ranks of the Kirwan map on `Z2[a, t]` in weight `d` (degree `2d`),
/// with monomial `a^i t^(d-i)` at bit `i`. Below the level along `+1` sits the
/// point with `a -> 0`; along `-1` sits `CP^1` with `a -> x + t`, `x^2 = 0`.
fn kirwan_oracle(d: u32) -> (usize, usize) {
    let n = d + 1;
    let point = |c: u64| c & 1;
    // (t + x)^i t^(d-i) = t^d + i x t^(d-1)
    let line = |c: u64| ((c.count_ones() % 2) as u64, (0..n).filter(|i| i % 2 == 1 && c >> i & 1 == 1).count() as u64 % 2);
    let mut kernel = Vec::new();
    for c in 1u64..(1 << n) {
        if point(c) == 0 || line(c) == (0, 0) {
            kernel.push(c);
        }
    }
    // the ideal (a, (a + t)^2) = (a, a^2 + t^2)
    let mut ideal = Vec::new();
    for i in 1..n {
        ideal.push(1u64 << i);
    }
    if d >= 2 {
        for i in 0..d - 1 {
            ideal.push((1u64 << (i + 2)) | (1u64 << i));
        }
    }
    (rank(&kernel), rank(&ideal))
}

fn c10_tolman_weitsman() -> Outcome {
    let start = Instant::now();
    let cutoff = 16;
    let pres = EquivariantPresentation::projectivized_sum(&[0, 1, 1], cutoff).map_err(e)?;
    let mu = [Rational64::new(1, 2)];
    let rep = tw_kernel(&pres, &[vec![1], vec![-1]], &mu, None).map_err(e)?;
    let relations = GradedAlgebra::from_strs(&[("a", 2), ("t", 2)], &["a^3 + a*t^2"], cutoff).map_err(e)?;
    for d in 0..=cutoff / 2 {
        let (kernel, ideal) = kirwan_oracle(d);
        ensure(kernel == ideal, || format!("weight {d}: kernel rank {kernel}, ideal rank {ideal}"))?;
        let reduced = (d + 1) as usize - kernel;
        let got = rep.reduced_series.coefficient(2 * d) as usize;
        ensure(got == reduced, || format!("degree {}: reduced {got}, oracle {reduced}", 2 * d))?;
        let ring_dim = relations.dim(2 * d);
        let got_k = rep.kernel_series.coefficient(2 * d) as usize;
        ensure(got_k + reduced == ring_dim, || format!("degree {}: kernel {got_k} + {reduced} != {ring_dim}", 2 * d))?;
    }
    let want: Vec<u64> = (0..=cutoff).map(|d| u64::from(d == 0 || d == 2)).collect();
    ensure(rep.reduced_series.coefficients() == want.as_slice(), || format!("reduced {:?}", rep.reduced_series))?;
    ensure(rep.generators.len() == 2, || format!("generators {:?}", rep.generators))?;
    within(start, Duration::from_secs(1))?;
    Ok(format!("kernel (a, (a+t)^2), generators {:?}, reduced series 1 + t^2", rep.generators))
}

fn negative(name: &str, f: &ConjugationFrame, check: &str, needle: &str) -> Result<String, String> {
    let rep = verify_frame(f);
    let first = rep.first_failure().ok_or_else(|| format!("{name}: accepted"))?;
    ensure(first.check_id == check, || format!("{name}: first failure is {first:?}"))?;
    let w = first.witness.clone().unwrap_or_default();
    ensure(w.contains(needle), || format!("{name}: witness {w:?} lacks {needle:?}"))?;
    Ok(w)
}

fn c11_negative() -> Outcome {
    let ring = |gens: &[(&str, u32)], rels: &[&str]| GradedAlgebra::from_strs(gens, rels, 16).map(Arc::new).map_err(e);

    let a = ring(&[("a", 2)], &["a^3"])?;
    let small = ring(&[("b", 1)], &["b^2"])?;
    let rs = UPoly::from_terms(2, [(1, small.parse("b").map_err(e)?)]);
    let dim = ConjugationFrame::new("bad-dim", a.clone(), small.clone(), vec![small.parse("b").map_err(e)?], vec![rs])
        .map_err(e)?;
    let w1 = negative("wrong dimension", &dim, "kappa-isomorphism", "even degree 4")?;

    let b = ring(&[("b", 1)], &["b^3"])?;
    let rs = UPoly::from_terms(2, [(1, b.parse("b").map_err(e)?), (0, b.parse("b^2").map_err(e)?)]);
    let deg = ConjugationFrame::new("bad-kappa", a, b.clone(), vec![b.parse("b^2").map_err(e)?], vec![rs]).map_err(e)?;
    let w2 = negative("kappa degree", &deg, "kappa-well-defined", "generator a maps to degree 2, expected 1")?;

    let a = ring(&[("a", 2), ("c", 4)], &["c + a^2", "a^5"])?;
    let b = ring(&[("b", 1), ("e", 2)], &["e + b^2", "b^5"])?;
    let rs_a = UPoly::from_terms(2, [(1, b.parse("b").map_err(e)?), (0, b.parse("b^2").map_err(e)?)]);
    let rs_c = UPoly::from_terms(4, [(2, b.parse("e").map_err(e)?)]);
    let kappa = vec![b.parse("b").map_err(e)?, b.parse("e").map_err(e)?];
    let rel = ConjugationFrame::new("bad-rsigma", a, b, kappa, vec![rs_a, rs_c]).map_err(e)?;
    let w3 = negative("broken relation", &rel, "rsigma-relations", "`a^2 + c` maps to e^2")?;
    Ok(format!("rejected: [{w1}] [{w2}] [{w3}]"))
}

fn main() {
    let criteria: [(&str, fn() -> Outcome); 11] = [
        ("CP^n golden formulas", c1_golden),
        ("Lucas pattern on CP^inf", c2_lucas),
        ("blanket axiom suite", c3_catalog),
        ("Gr(1,n) = CP^(n-1)", c4_grassmannian),
        ("Thom/Hopf ladder", c5_thom),
        ("localization counterexample", c6_localization),
        ("naturality", c7_naturality),
        ("Morse assembly", c8_morse),
        ("two-torsion", c9_two_torsion),
        ("Tolman-Weitsman reduction", c10_tolman_weitsman),
        ("negative frames", c11_negative),
    ];
    let mut failed = 0;
    for (i, (name, run)) in criteria.iter().enumerate() {
        let start = Instant::now();
        match run() {
            Ok(msg) => println!("criterion {:>2} PASS  {name}: {msg} [{:?}]", i + 1, start.elapsed()),
            Err(msg) => {
                failed += 1;
                println!("criterion {:>2} FAIL  {name}: {msg}", i + 1);
            }
        }
    }
    println!("acceptance: {} of {} criteria pass", criteria.len() - failed, criteria.len());
    if failed > 0 {
        std::process::exit(1);
    }
}
