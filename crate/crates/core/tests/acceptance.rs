//! Acceptance suite: one PASS/FAIL line per criterion, with wall time
//! against its limit. Exits nonzero if any criterion fails.

mod common;

use std::panic::{catch_unwind, AssertUnwindSafe};
use std::sync::Arc;
use std::time::{Duration, Instant};

use gerbes::cech::{
    connecting_hom, three_arc_cover, vertex_star_cover, CechCochain, ExactSequence, TotalShape,
};
use gerbes::cochain::{
    cochain_classes_equal, cohomology, cup, integral_cycles, pair, Cochain, CoefficientGroup, FundamentalCycle, Integers,
    Rationals, RationalsModOne,
};
use gerbes::exact::{frac, int, is_integer};
use gerbes::gerbe::{
    curving_pipeline, dd_cocycle, deligne_validate, lifting_gerbe_cocycle, three_curvature, trivialize_deligne, CentralExtension,
    DeligneTriple, GerbePresentation, GroupCochain, Partition, Trivialization,
};
use gerbes::simplicial::{nerve_bar_and_projection, nerve_of_group, verify_simplicial_identities, FiniteGroup, SimplicialComplex};
use gerbes::standard;
use gerbes::two_gerbe::{
    bockstein_lift_class, coherence_check, deligne2_validate, four_cocycle, four_cocycle_via_rho, four_form,
    trivialize_two_gerbe, DeligneQuadruple, TwoGerbePresentation,
};
use gerbes::words::{bg_inv, bg_mul, classify_cocycle, eg_inv, eg_mul, project_p, random_sample, section_s, EgWord};
use gerbes::Rational;
use itertools::Itertools;
use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, ToPrimitive, Zero};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

type Check = std::result::Result<(), String>;

macro_rules! ensure {
    ($cond:expr, $($msg:tt)+) => {
        if !$cond {
            return Err(format!($($msg)+));
        }
    };
}

fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

fn arc(k: SimplicialComplex) -> Arc<SimplicialComplex> {
    Arc::new(k)
}

/// Evaluation of a cochain on an integral cycle, done by hand.
fn evaluate(c: &Cochain, z: &FundamentalCycle) -> Rational {
    z.weights().iter().map(|(i, w)| c.get(*i) * Rational::from_integer(w.clone())).sum()
}

fn nonzero_in(coeff: CoefficientGroup, x: &Rational) -> bool {
    match coeff {
        CoefficientGroup::Cyclic(n) => !x.to_integer().is_multiple_of(&BigInt::from(n)),
        RationalsModOne => !is_integer(x),
        _ => !x.is_zero(),
    }
}

/// Cocycles spanning `H^p(nerve; coeff)`; for `Q/Z`, integral generators
/// scaled by random fractions.
fn class_representatives(k: &Arc<SimplicialComplex>, p: usize, coeff: CoefficientGroup, r: &mut ChaCha8Rng) -> Vec<Cochain> {
    match coeff {
        RationalsModOne => {
            let scale = frac(r.gen_range(0..6), 6);
            cohomology(k, p, Integers)
                .unwrap()
                .generators
                .iter()
                .map(|g| g.map_values(coeff, |v| coeff.reduce(&(v * &scale))))
                .collect()
        }
        _ => cohomology(k, p, coeff).unwrap().generators,
    }
}

// 1 ------------------------------------------------------------------------

fn simplicial_identities() -> Check {
    let mut r = rng(1);
    for g in [FiniteGroup::cyclic(2), FiniteGroup::cyclic(3), FiniteGroup::cyclic(4), FiniteGroup::symmetric(3)] {
        let nerve = nerve_of_group(&g, 4);
        let bp = nerve_bar_and_projection(&g, 4);
        ensure!(verify_simplicial_identities(&nerve).is_empty(), "nerve of a group of order {} fails", g.order());
        ensure!(verify_simplicial_identities(&bp.bar).is_empty(), "bar construction fails");
        ensure!(bp.violations.is_empty(), "projection is not simplicial");
        for x in [&nerve, &bp.bar] {
            for _ in 0..6 {
                let mut y = x.clone();
                let face = r.gen_bool(0.5);
                let p = if face { r.gen_range(1..=y.top()) } else { r.gen_range(0..y.top()) };
                let target = if face { p - 1 } else { p + 1 };
                if y.size(target) == 1 {
                    continue;
                }
                let i = r.gen_range(0..=p);
                let e = r.gen_range(0..y.size(p));
                let size = y.size(target);
                let map = if face { &mut y.faces[p][i] } else { &mut y.degeneracies[p][i] };
                map[e] = (map[e] + r.gen_range(1..size)) % size;
                let v = verify_simplicial_identities(&y);
                ensure!(!v.is_empty(), "perturbation at level {p} map {i} element {e} undetected");
                ensure!(!v[0].witness.is_empty(), "violation without witness");
            }
        }
    }
    Ok(())
}

// 2 ------------------------------------------------------------------------

/// Value just left of `t` (or at `0+` when `t = 0`): words are products
/// `h_0 h_1 ⋯ h_i` on `(t_i, t_{i+1}]`.
fn eval_word(w: &EgWord, t: &Rational) -> usize {
    let g = w.group();
    let mut v = w.base();
    for (ti, &h) in w.times().iter().zip(w.letters()) {
        if ti < t {
            v = g.mul(v, h);
        }
    }
    v
}

/// Agreement as functions on `(0, 1]`, sampled at every breakpoint and
/// every midpoint between consecutive breakpoints.
fn same_function(x: &EgWord, f: impl Fn(&Rational) -> usize, extra: &[&EgWord]) -> bool {
    let mut pts: Vec<Rational> = vec![Rational::zero(), Rational::one()];
    for w in std::iter::once(x).chain(extra.iter().copied()) {
        pts.extend(w.times().iter().cloned());
    }
    pts.sort();
    pts.dedup();
    let mids: Vec<Rational> = pts.windows(2).map(|w| (&w[0] + &w[1]) / int(2)).collect();
    pts.iter().skip(1).chain(&mids).all(|t| eval_word(x, t) == f(t))
}

fn eg_group_law() -> Check {
    let mut r = rng(2);
    for g in [FiniteGroup::cyclic(2), FiniteGroup::cyclic(6), FiniteGroup::symmetric(3)] {
        let g = Arc::new(g);
        for _ in 0..1000 {
            let (a, b, c) = (common::eg_word(&g, &mut r), common::eg_word(&g, &mut r), common::eg_word(&g, &mut r));
            let ab = eg_mul(&a, &b).map_err(|e| e.to_string())?;
            ensure!(
                same_function(&ab, |t| g.mul(eval_word(&a, t), eval_word(&b, t)), &[&a, &b]),
                "{a} * {b} = {ab} disagrees with the pointwise product"
            );
            ensure!(ab.to_step() == a.to_step().mul(&b.to_step()).unwrap(), "step oracle mismatch for {a} * {b}");
            let l = eg_mul(&ab, &c).unwrap();
            let rr = eg_mul(&a, &eg_mul(&b, &c).unwrap()).unwrap();
            ensure!(l == rr, "not associative on {a}, {b}, {c}");
            ensure!(eg_mul(&a, &eg_inv(&a)).unwrap().is_identity(), "{a} times its inverse");
            ensure!(eg_mul(&EgWord::identity(&g), &a).unwrap() == a, "identity is not neutral");
        }
    }
    Ok(())
}

// 3 ------------------------------------------------------------------------

fn abelian_structure() -> Check {
    let mut r = rng(3);
    for n in [4, 6] {
        let g = Arc::new(FiniteGroup::cyclic(n));
        for _ in 0..1000 {
            let (x, y) = (common::bg_word(&g, &mut r), common::bg_word(&g, &mut r));
            let sx = section_s(&x).unwrap();
            ensure!(project_p(&sx) == x, "p(s({x})) != {x}");
            let sxy = section_s(&bg_mul(&x, &y).unwrap()).unwrap();
            ensure!(sxy == eg_mul(&sx, &section_s(&y).unwrap()).unwrap(), "s is not multiplicative on {x}, {y}");
            let (a, b) = (common::eg_word(&g, &mut r), common::eg_word(&g, &mut r));
            let pab = project_p(&eg_mul(&a, &b).unwrap());
            ensure!(pab == bg_mul(&project_p(&a), &project_p(&b)).unwrap(), "p is not multiplicative on {a}, {b}");
        }
    }
    Ok(())
}

// 4 ------------------------------------------------------------------------

fn classifying_construction() -> Check {
    let cover = vertex_star_cover(&standard::boundary_simplex(3)).unwrap();
    let nerve = cover.nerve();
    let gen = cohomology(nerve, 2, CoefficientGroup::Cyclic(2)).unwrap().generators[0].clone();
    let mut r = rng(4);
    let samples: Vec<_> = (0..40).map(|_| random_sample(nerve, &mut r)).collect();
    let c = classify_cocycle(&gen, &samples).map_err(|e| e.to_string())?;
    ensure!(c.holds(), "cocycle or lift condition fails");
    let g = c.group.clone();
    for s in &c.samples {
        let bg = |i: u32, j: u32| s.transitions.iter().find(|(k, _)| *k == (i, j)).map(|(_, w)| w.clone());
        let eg = |i: u32, j: u32| s.lifts.iter().find(|(k, _)| *k == (i, j)).map(|(_, w)| w.clone());
        for (i, j, k) in s.support.iter().copied().tuple_combinations() {
            let (Some(ij), Some(ik), Some(jk)) = (bg(i, j), bg(i, k), bg(j, k)) else {
                return Err("missing transition word".into());
            };
            let w = bg_mul(&bg_mul(&jk, &bg_inv(&ik).unwrap()).unwrap(), &ij).unwrap();
            ensure!(w.is_point(), "g_jk g_ik^-1 g_ij = {w} at {:?}", (i, j, k));
            let (ij, ik, jk) = (eg(i, j).unwrap(), eg(i, k).unwrap(), eg(j, k).unwrap());
            let w = eg_mul(&eg_mul(&jk, &eg_inv(&ik)).unwrap(), &ij).unwrap();
            let expected = gen.get_ordered(&[i, j, k]).to_usize().unwrap();
            ensure!(w == EgWord::constant(&g, expected), "lift coboundary {w} at {:?}", (i, j, k));
        }
    }
    ensure!(c.samples.len() >= 20, "too few samples");
    Ok(())
}

// 5 ------------------------------------------------------------------------

/// Coboundary `C^p → C^{p+1}` built directly from vertex lists.
fn coboundary_rows(k: &SimplicialComplex, p: usize) -> Vec<Vec<i64>> {
    (0..k.count(p + 1))
        .map(|t| {
            let s = k.simplex(p + 1, t);
            let mut row = vec![0i64; k.count(p)];
            for j in 0..s.len() {
                let face: Vec<u32> = s.iter().enumerate().filter(|(i, _)| *i != j).map(|(_, v)| *v).collect();
                row[k.index_of(&face).unwrap()] += if j % 2 == 0 { 1 } else { -1 };
            }
            row
        })
        .collect()
}

fn rank_rational(rows: &[Vec<i64>]) -> usize {
    let mut m: Vec<Vec<Rational>> = rows.iter().map(|r| r.iter().map(|&x| int(x)).collect()).collect();
    let cols = m.first().map_or(0, Vec::len);
    let mut rank = 0;
    for c in 0..cols {
        let Some(piv) = (rank..m.len()).find(|&i| !m[i][c].is_zero()) else { continue };
        m.swap(rank, piv);
        for i in 0..m.len() {
            if i != rank && !m[i][c].is_zero() {
                let f = &m[i][c] / &m[rank][c];
                for j in c..cols {
                    let d = &f * &m[rank][j];
                    m[i][j] -= d;
                }
            }
        }
        rank += 1;
    }
    rank
}

fn rank_mod(rows: &[Vec<i64>], l: i64) -> usize {
    let mut m: Vec<Vec<i64>> = rows.iter().map(|r| r.iter().map(|&x| x.rem_euclid(l)).collect()).collect();
    let cols = m.first().map_or(0, Vec::len);
    let inv = |a: i64| (1..l).find(|b| a * b % l == 1).unwrap();
    let mut rank = 0;
    for c in 0..cols {
        let Some(piv) = (rank..m.len()).find(|&i| m[i][c] != 0) else { continue };
        m.swap(rank, piv);
        let ip = inv(m[rank][c]);
        for i in 0..m.len() {
            if i != rank && m[i][c] != 0 {
                let f = m[i][c] * ip % l;
                for j in c..cols {
                    m[i][j] = (m[i][j] - f * m[rank][j]).rem_euclid(l);
                }
            }
        }
        rank += 1;
    }
    rank
}

/// Free rank of `H^p(K; Z)`, and for each small prime the number of
/// invariant factors of the incoming coboundary it divides.
fn brute_force(k: &SimplicialComplex, p: usize) -> (usize, Vec<(i64, usize)>) {
    let out = if p < k.dim() { coboundary_rows(k, p) } else { vec![] };
    let inc = if p > 0 { coboundary_rows(k, p - 1) } else { vec![] };
    let free = k.count(p) - rank_rational(&out) - rank_rational(&inc);
    let rq = rank_rational(&inc);
    let torsion = [2, 3, 5, 7, 11].iter().map(|&l| (l, rq - rank_mod(&inc, l))).collect();
    (free, torsion)
}

fn cohomology_engine() -> Check {
    let cases: [(&str, SimplicialComplex, Vec<(usize, usize, Vec<i64>)>); 3] = [
        ("s2", standard::boundary_simplex(3), vec![(0, 1, vec![]), (1, 0, vec![]), (2, 1, vec![])]),
        ("rp2", standard::rp2(), vec![(0, 1, vec![]), (1, 0, vec![]), (2, 0, vec![2])]),
        ("s4", standard::boundary_simplex(5), vec![(4, 1, vec![])]),
    ];
    for (name, k, expected) in cases {
        let k = arc(k);
        for (p, rank, torsion) in expected {
            let h = cohomology(&k, p, Integers).unwrap();
            let torsion: Vec<BigInt> = torsion.into_iter().map(BigInt::from).collect();
            ensure!(h.free_rank == rank && h.torsion == torsion, "H^{p}({name}) = {}", h.summary());
            let (free, counts) = brute_force(&k, p);
            ensure!(free == h.free_rank, "brute-force rank {free} for H^{p}({name})");
            for (l, count) in counts {
                let snf = h.torsion.iter().filter(|t| t.is_multiple_of(&BigInt::from(l))).count();
                ensure!(snf == count, "{l}-torsion count {count} vs {snf} for H^{p}({name})");
            }
        }
    }
    Ok(())
}

// 6 ------------------------------------------------------------------------

fn differentials() -> Check {
    let mut r = rng(6);
    let complexes = [arc(standard::rp2()), arc(standard::boundary_simplex(3)), arc(standard::boundary_simplex(4))];
    let coeffs = [Integers, Rationals, RationalsModOne, CoefficientGroup::Cyclic(4)];
    for _ in 0..500 {
        let k = &complexes[r.gen_range(0..complexes.len())];
        let p = r.gen_range(0..k.dim().saturating_sub(1).max(1));
        let c = common::cochain(k, p, coeffs[r.gen_range(0..4)], &mut r);
        ensure!(c.d().d().is_zero(), "d² ≠ 0 in degree {p}");
    }
    let covers = [three_arc_cover(), vertex_star_cover(&standard::boundary_simplex(3)).unwrap()];
    for i in 0..500 {
        let cover = &covers[i % 2];
        let p = r.gen_range(0..cover.nerve().dim());
        let q = r.gen_range(0..=cover.base().dim());
        let x = common::forms(cover, p, q, Rationals, &mut r);
        ensure!(x.delta().delta().is_zero(), "δ² ≠ 0");
        let e = CechCochain::from_nerve_cochain(cover, common::cochain(cover.nerve(), p, coeffs[i % 4], &mut r)).unwrap();
        ensure!(e.delta().delta().is_zero(), "δ² ≠ 0 on elements");
    }
    for i in 0..500 {
        let cover = &covers[i % 2];
        let shape = if i % 3 == 0 { TotalShape::deligne(cover, 2) } else { TotalShape::plain(cover, Rationals) };
        let n = r.gen_range(0..3);
        let x = common::total(&shape, n, &mut r);
        ensure!(x.differential().differential().is_zero(), "D² ≠ 0 in degree {n}");
    }
    for _ in 0..500 {
        let k = &complexes[r.gen_range(0..complexes.len())];
        let p = r.gen_range(0..k.dim());
        let q = r.gen_range(0..k.dim() - p);
        let coeff = if r.gen_bool(0.5) { Integers } else { Rationals };
        let a = common::cochain(k, p, coeff, &mut r);
        let b = common::cochain(k, q, coeff, &mut r);
        let lhs = cup(&a, &b).unwrap().d();
        let sign = if p % 2 == 0 { int(1) } else { int(-1) };
        let rhs = cup(&a.d(), &b).unwrap().add(&cup(&a, &b.d()).unwrap().scale(&sign)).unwrap();
        ensure!(lhs == rhs, "Leibniz fails for degrees {p}, {q}");
    }
    let cycles: Vec<(Arc<SimplicialComplex>, Vec<FundamentalCycle>)> = complexes
        .iter()
        .flat_map(|k| (1..=k.dim()).map(move |p| (k.clone(), integral_cycles(k, p))))
        .collect();
    for i in 0..500 {
        let (k, zs) = &cycles[i % cycles.len()];
        let Some(z) = zs.get(i % zs.len().max(1)) else { continue };
        let c = common::cochain(k, z.degree() - 1, Rationals, &mut r);
        ensure!(pair(&c.d(), z).unwrap().is_zero(), "pair(dc, z) ≠ 0");
        ensure!(evaluate(&c.d(), z).is_zero(), "hand evaluation of dc on z ≠ 0");
    }
    Ok(())
}

// 7 ------------------------------------------------------------------------

fn dd_invariance() -> Check {
    let small = vertex_star_cover(&standard::boundary_simplex(3)).unwrap();
    let z2 = CoefficientGroup::Cyclic(2);
    let nerve = small.nerve().clone();
    let fundamental = FundamentalCycle::orientation(&nerve).unwrap();
    for cover in [three_arc_cover(), small.clone()] {
        let nerve = cover.nerve().clone();
        let (n1, n2) = (nerve.count(1), nerve.count(2));
        for pbits in 0..1u32 << n2 {
            let p = Cochain::from_values(&nerve, 2, z2, (0..n2).map(|i| (i, int((pbits >> i & 1) as i64)))).unwrap();
            let base = dd_cocycle(&GerbePresentation::new(&cover, p.clone(), Cochain::zero(&nerve, 1, z2)).unwrap()).unwrap();
            for sbits in 0..1u32 << n1 {
                let s = Cochain::from_values(&nerve, 1, z2, (0..n1).map(|i| (i, int((sbits >> i & 1) as i64)))).unwrap();
                let g = dd_cocycle(&GerbePresentation::new(&cover, p.clone(), s).unwrap()).unwrap();
                ensure!(cochain_classes_equal(&g, &base).unwrap(), "class moved under section change");
                if Arc::ptr_eq(&cover, &small) {
                    let (x, y) = (evaluate(&g, &fundamental), evaluate(&base, &fundamental));
                    ensure!((x - y).to_integer().is_even(), "fundamental-class pairing moved");
                }
            }
        }
    }
    let large = [
        vertex_star_cover(&standard::rp2()).unwrap(),
        vertex_star_cover(&standard::boundary_simplex(4)).unwrap(),
    ];
    let mut r = rng(7);
    for i in 0..200 {
        let cover = &large[i % 2];
        let nerve = cover.nerve();
        let coeff = if i % 5 == 4 { RationalsModOne } else { CoefficientGroup::Cyclic(r.gen_range(2..7)) };
        let mut p = common::cochain(nerve, 1, coeff, &mut r).d();
        for gen in &class_representatives(nerve, 2, coeff, &mut r) {
            p = p.add(&gen.scale(&int(r.gen_range(0..3)))).unwrap();
        }
        let s0 = common::cochain(nerve, 1, coeff, &mut r);
        let s1 = common::cochain(nerve, 1, coeff, &mut r);
        let a = dd_cocycle(&GerbePresentation::new(cover, p.clone(), s0).unwrap()).unwrap();
        let b = dd_cocycle(&GerbePresentation::new(cover, p, s1).unwrap()).unwrap();
        ensure!(cochain_classes_equal(&a, &b).unwrap(), "class moved under section change (case {i})");
    }
    Ok(())
}

// 8 ------------------------------------------------------------------------

/// Sum of all top-simplex values mod 2: evaluation on the mod-2 fundamental class.
fn mod2_fundamental(c: &Cochain) -> bool {
    let k = c.complex();
    let total: Rational = (0..k.count(k.dim())).map(|i| c.get(i)).sum();
    total.to_integer().is_odd()
}

fn lifting_obstruction() -> Check {
    let cover = vertex_star_cover(&standard::rp2()).unwrap();
    let nerve = cover.nerve();
    let tau = cohomology(nerve, 1, CoefficientGroup::Cyclic(2)).unwrap().generators[0].clone();
    let tau = GroupCochain::from_cyclic(&tau).unwrap();
    let ext = CentralExtension::cyclic(2, 2);
    let sections = ext.all_sections();
    ensure!(sections.len() == 4, "expected 2^|G| section tables, got {}", sections.len());
    let mut first: Option<Cochain> = None;
    for s in sections {
        let c = lifting_gerbe_cocycle(&ext.with_section(s).unwrap(), &tau).map_err(|e| e.to_string())?;
        ensure!(!c.is_zero, "nonsplit extension gave the zero class");
        ensure!(mod2_fundamental(&c.cocycle), "class does not evaluate to 1 on the mod-2 fundamental class");
        if let Some(f) = &first {
            ensure!(cochain_classes_equal(f, &c.cocycle).unwrap(), "class depends on the section");
        }
        first = Some(c.cocycle);
    }
    let split = CentralExtension::split(2, Arc::new(FiniteGroup::cyclic(2)));
    for s in split.all_sections() {
        let c = lifting_gerbe_cocycle(&split.with_section(s).unwrap(), &tau).unwrap();
        ensure!(c.is_zero && !mod2_fundamental(&c.cocycle), "split extension gave a nonzero class");
    }
    Ok(())
}

// 9 ------------------------------------------------------------------------

fn deligne_triples() -> Check {
    let cover = vertex_star_cover(&standard::boundary_simplex(4)).unwrap();
    let gen = cohomology(cover.nerve(), 3, Integers).unwrap().generators[0].clone();
    let t = DeligneTriple::from_integral_class(&cover, &gen).map_err(|e| e.to_string())?;
    ensure!(deligne_validate(&t).is_valid(), "generator triple does not validate");
    let w = three_curvature(&t).unwrap();
    ensure!(w.closed && w.form.d().is_zero(), "ω is not closed");
    let z = FundamentalCycle::orientation(cover.base()).unwrap();
    let period = evaluate(&w.form, &z);
    ensure!(period.abs() == int(1), "ω pairs to {period}");
    ensure!(w.orientation_pairing == Some(period), "reported pairing disagrees");
    ensure!(!trivialize_deligne(&t).unwrap().is_trivial(), "generator triple trivialized");
    let mut r = rng(9);
    for _ in 0..3 {
        let h = common::forms(&cover, 1, 0, RationalsModOne, &mut r);
        let k = common::forms(&cover, 0, 1, Rationals, &mut r);
        let x = DeligneTriple::coboundary(&cover, &h, &k).unwrap();
        ensure!(deligne_validate(&x).is_valid(), "coboundary triple does not validate");
        let Trivialization::Trivial(tr) = trivialize_deligne(&x).unwrap() else {
            return Err("coboundary triple obstructed".into());
        };
        ensure!(x.g == tr.h.delta() && x.f == tr.k.d().unwrap(), "g = δh or f = dk fails");
        let y = DeligneTriple::coboundary(&cover, &tr.h, &tr.k).unwrap();
        let slack = x.a.sub(&y.a).unwrap();
        for (i, c) in slack.form_values().unwrap() {
            let closed = c.d_within(cover.intersection(1, *i)).is_zero();
            ensure!(c.values().values().all(is_integer) && closed, "A differs by a non-integral or non-closed term");
        }
        ensure!(deligne_validate(&y).is_valid(), "re-validation fails");
    }
    Ok(())
}

// 10 -----------------------------------------------------------------------

fn curving_pipeline_equations() -> Check {
    let covers = [three_arc_cover(), vertex_star_cover(&standard::boundary_simplex(3)).unwrap()];
    let parts: Vec<Partition> = covers.iter().map(Partition::uniform).collect();
    let mut r = rng(10);
    for i in 0..120 {
        let (cover, psi) = (&covers[i % 2], &parts[i % 2]);
        let c = common::forms(cover, 1, 1, Rationals, &mut r);
        let e = common::forms(cover, 0, 1, Rationals, &mut r).d().unwrap();
        let a = c.delta();
        let f = c.d().unwrap().add(&e.delta()).unwrap();
        let p = curving_pipeline(&a, &f, psi).map_err(|e| e.to_string())?;
        ensure!(p.equations.iter().all(|&x| x), "equations {:?} on instance {i}", p.equations);
        ensure!(p.b.delta() == a && p.mu.delta() == p.f_hat, "δB = A or δμ = F̂ fails");
        ensure!(p.overlaps_agree && p.omega.is_some(), "dμ does not glue although dF = 0");
    }
    Ok(())
}

// 11 -----------------------------------------------------------------------

fn four_class() -> Check {
    let covers = [
        vertex_star_cover(&standard::boundary_simplex(4)).unwrap(),
        vertex_star_cover(&standard::boundary_simplex(5)).unwrap(),
    ];
    let mut r = rng(11);
    for i in 0..200 {
        let cover = &covers[i % 2];
        let nerve = cover.nerve();
        let coeff = if i % 4 == 3 { RationalsModOne } else { CoefficientGroup::Cyclic(r.gen_range(2..7)) };
        let mut a = common::cochain(nerve, 2, coeff, &mut r).d();
        for gen in &class_representatives(nerve, 3, coeff, &mut r) {
            a = a.add(&gen.scale(&int(r.gen_range(0..4)))).unwrap();
        }
        let lambda = common::cochain(nerve, 2, coeff, &mut r);
        let rho = common::cochain(nerve, 2, coeff, &mut r);
        let p = TwoGerbePresentation::new(cover, lambda, a.clone()).map_err(|e| e.to_string())?;
        let g = four_cocycle(&p).unwrap();
        ensure!(g.d().is_zero(), "four-cocycle not closed");
        let p0 = TwoGerbePresentation::new(cover, Cochain::zero(nerve, 2, coeff), a.clone()).unwrap();
        ensure!(cochain_classes_equal(&g, &four_cocycle(&p0).unwrap()).unwrap(), "class depends on λ");
        ensure!(four_cocycle_via_rho(&p, &rho).unwrap().same_class, "ρ-construction changes the class");
        if nerve.dim() >= 4 {
            for j in 0..nerve.count(3) {
                let mut bad = a.clone();
                let bump = loop {
                    let x = common::value(coeff, &mut r);
                    if nonzero_in(coeff, &x) {
                        break x;
                    }
                };
                bad.add_at(j, &bump);
                ensure!(!coherence_check(&bad).holds(), "perturbation of entry {j} passes coherence");
            }
        }
    }
    Ok(())
}

// 12 -----------------------------------------------------------------------

fn bockstein_consistency() -> Check {
    let mut r = rng(12);
    for k in [arc(standard::rp2()), arc(standard::rp3())] {
        for (kernel, m) in [(2usize, 2u64), (2, 4), (4, 2)] {
            let ext = CentralExtension::cyclic(kernel, m as usize);
            let seq = ExactSequence::Cyclic { kernel: kernel as u64, quotient: m };
            for p in 0..k.dim() {
                let h = cohomology(&k, p, CoefficientGroup::Cyclic(m)).unwrap();
                let mut inputs = vec![Cochain::zero(&k, p, CoefficientGroup::Cyclic(m))];
                for gen in &h.generators {
                    inputs.push(gen.clone());
                    if p > 0 {
                        inputs.push(gen.add(&common::cochain(&k, p - 1, CoefficientGroup::Cyclic(m), &mut r).d()).unwrap());
                    }
                }
                for g in inputs {
                    let b = bockstein_lift_class(&g, &ext).map_err(|e| e.to_string())?;
                    let c = connecting_hom(&g, seq).unwrap();
                    ensure!(cochain_classes_equal(&b.cocycle, &c.cocycle).unwrap(), "bockstein ≠ connecting in degree {p}");
                    ensure!(b.is_zero == c.is_zero, "zero flags disagree");
                }
            }
        }
    }
    let k = arc(standard::rp2());
    let tau = cohomology(&k, 1, CoefficientGroup::Cyclic(2)).unwrap().generators[0].clone();
    let b = bockstein_lift_class(&tau, &CentralExtension::cyclic(2, 2)).unwrap();
    ensure!(!b.is_zero && mod2_fundamental(&b.cocycle), "degree-1 Bockstein on RP² is zero");
    Ok(())
}

// 13 -----------------------------------------------------------------------

fn four_form_on_s4() -> Check {
    let cover = vertex_star_cover(&standard::boundary_simplex(5)).unwrap();
    let gen = cohomology(cover.nerve(), 4, Integers).unwrap().generators[0].clone();
    let q = DeligneQuadruple::from_integral_class(&cover, &gen).map_err(|e| e.to_string())?;
    ensure!(deligne2_validate(&q).is_valid(), "quadruple does not validate");
    let f = four_form(&q).unwrap();
    ensure!(f.theta.closed && f.theta.form.d().is_zero(), "Θ is not closed");
    let z = FundamentalCycle::orientation(cover.base()).unwrap();
    let period = evaluate(&f.theta.form, &z);
    ensure!(period.abs() == int(1), "Θ pairs to {period}");
    ensure!(f.class_matches, "zig-zag class of Θ differs from the connecting class");
    let c = q.connecting_class().unwrap();
    let nz = FundamentalCycle::orientation(cover.nerve()).unwrap();
    ensure!(evaluate(&c, &nz).abs() == int(1), "connecting class is not a generator");
    Ok(())
}

// 14 -----------------------------------------------------------------------

fn triviality_criterion() -> Check {
    let covers = [
        vertex_star_cover(&standard::boundary_simplex(4)).unwrap(),
        vertex_star_cover(&standard::rp3()).unwrap(),
    ];
    let fundamentals: Vec<FundamentalCycle> = covers.iter().map(|c| FundamentalCycle::orientation(c.nerve()).unwrap()).collect();
    let integral: Vec<Cochain> = covers.iter().map(|c| cohomology(c.nerve(), 3, Integers).unwrap().generators[0].clone()).collect();
    let mut r = rng(14);
    let (mut trivial, mut obstructed) = (0, 0);
    for i in 0..200 {
        let w = if i % 5 == 4 { 1 } else { 0 };
        let (cover, z) = (&covers[w], &fundamentals[w]);
        let nerve = cover.nerve();
        let coeff = match i % 3 {
            0 => RationalsModOne,
            1 => CoefficientGroup::Cyclic(2),
            _ => CoefficientGroup::Cyclic(r.gen_range(3..7)),
        };
        let scale = match coeff {
            RationalsModOne => frac(r.gen_range(0..4), *[1, 2, 3].iter().nth(r.gen_range(0..3)).unwrap()),
            _ => int(r.gen_range(0..4)),
        };
        let gen = integral[w].map_values(coeff, |v| coeff.reduce(&(v * &scale)));
        let a = gen.add(&common::cochain(nerve, 2, coeff, &mut r).d()).unwrap();
        let lambda = common::cochain(nerve, 2, coeff, &mut r);
        let p = TwoGerbePresentation::new(cover, lambda, a).unwrap();
        let g = four_cocycle(&p).unwrap();
        let expect_trivial = !nonzero_in(coeff, &evaluate(&g, z));
        match trivialize_two_gerbe(&p).map_err(|e| e.to_string())? {
            Trivialization::Trivial(h) => {
                ensure!(expect_trivial, "nonzero class trivialized (case {i})");
                ensure!(h.d() == g, "δh ≠ g");
                trivial += 1;
            }
            Trivialization::Obstructed(cert) => {
                ensure!(!expect_trivial, "zero class reported obstructed (case {i})");
                ensure!(nonzero_in(coeff, &evaluate(&cert.cocycle, z)), "certificate evaluates to zero");
                ensure!(cert.class.is_empty() || cert.class.iter().any(|x| !x.is_zero()), "certificate class is zero");
                obstructed += 1;
            }
        }
    }
    ensure!(trivial >= 20 && obstructed >= 20, "unbalanced trials: {trivial} trivial, {obstructed} obstructed");
    Ok(())
}

// ---------------------------------------------------------------------------

fn main() {
    let criteria: [(&str, u64, fn() -> Check); 14] = [
        ("simplicial identities and perturbations", 5, simplicial_identities),
        ("EG group law", 10, eg_group_law),
        ("abelian projection and section", 5, abelian_structure),
        ("classifying construction", 5, classifying_construction),
        ("cohomology engine against brute force", 30, cohomology_engine),
        ("δ² = 0, D² = 0, Leibniz, pairing", 10, differentials),
        ("DD class invariance", 20, dd_invariance),
        ("lifting obstruction", 20, lifting_obstruction),
        ("Deligne triple pipeline", 30, deligne_triples),
        ("curving pipeline equations", 10, curving_pipeline_equations),
        ("two-gerbe four-class", 20, four_class),
        ("Bockstein consistency", 30, bockstein_consistency),
        ("four-form on S⁴", 60, four_form_on_s4),
        ("triviality criterion", 30, triviality_criterion),
    ];
    let only: Vec<usize> = std::env::args().skip(1).filter_map(|a| a.parse().ok()).collect();
    let mut failed = 0;
    for (n, (name, limit, f)) in criteria.iter().enumerate() {
        let n = n + 1;
        if !only.is_empty() && !only.contains(&n) {
            continue;
        }
        let start = Instant::now();
        let result = catch_unwind(AssertUnwindSafe(f)).unwrap_or_else(|e| {
            Err(e
                .downcast_ref::<String>()
                .cloned()
                .or_else(|| e.downcast_ref::<&str>().map(|s| s.to_string()))
                .unwrap_or_else(|| "panic".into()))
        });
        let t = start.elapsed();
        let result = result.and_then(|()| {
            if t > Duration::from_secs(*limit) {
                Err(format!("over the {limit} s limit"))
            } else {
                Ok(())
            }
        });
        match result {
            Ok(()) => println!("PASS {n:>2} {name} ({:.2} s, limit {limit} s)", t.as_secs_f64()),
            Err(e) => {
                failed += 1;
                println!("FAIL {n:>2} {name} ({:.2} s, limit {limit} s): {e}", t.as_secs_f64());
            }
        }
    }
    if failed > 0 {
        std::process::exit(1);
    }
}
