mod common;

use gerbes::cech::{connecting_hom, total_classes_equal, vertex_star_cover, ExactSequence};
use gerbes::cochain::{cochain_classes_equal, cohomology, Cochain, CoefficientGroup, FundamentalCycle, Integers, Rationals, RationalsModOne};
use gerbes::gerbe::{deligne_validate, three_curvature, trivialize_deligne, zigzag_matches, CentralExtension, DeligneTriple, Trivialization};
use gerbes::standard;
use gerbes::two_gerbe::{bockstein_lift_class, deligne2_validate, four_form, trivialize_two_gerbe, DeligneQuadruple, TwoGerbePresentation};
use gerbes::exact::int;
use num_traits::Signed;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use std::sync::Arc;

#[test]
fn shifted_triple_keeps_its_class_and_period() {
    let cover = vertex_star_cover(&standard::boundary_simplex(4)).unwrap();
    let gen = cohomology(cover.nerve(), 3, Integers).unwrap().generators[0].clone();
    let t = DeligneTriple::from_integral_class(&cover, &gen).unwrap();
    let mut rng = ChaCha8Rng::seed_from_u64(21);
    let h = common::forms(&cover, 1, 0, RationalsModOne, &mut rng);
    let k = common::forms(&cover, 0, 1, Rationals, &mut rng);
    let s = t.shifted(&h, &k).unwrap();
    assert!(deligne_validate(&s).is_valid());
    assert!(total_classes_equal(&t.to_total().unwrap(), &s.to_total().unwrap()).unwrap());
    let (a, b) = (three_curvature(&t).unwrap(), three_curvature(&s).unwrap());
    assert_eq!(a.orientation_pairing, b.orientation_pairing);
    assert!(zigzag_matches(&cover, &b.form, &gen).unwrap());
    assert!(!trivialize_deligne(&s).unwrap().is_trivial());
}

#[test]
fn doubled_generator_is_not_the_generator() {
    let cover = vertex_star_cover(&standard::boundary_simplex(4)).unwrap();
    let gen = cohomology(cover.nerve(), 3, Integers).unwrap().generators[0].clone();
    let t1 = DeligneTriple::from_integral_class(&cover, &gen).unwrap();
    let t2 = DeligneTriple::from_integral_class(&cover, &gen.scale(&int(2))).unwrap();
    assert!(!total_classes_equal(&t1.to_total().unwrap(), &t2.to_total().unwrap()).unwrap());
    let w = three_curvature(&t2).unwrap();
    assert_eq!(w.orientation_pairing.unwrap().abs(), int(2));
}

#[test]
fn quadruple_stokes_shift() {
    let cover = vertex_star_cover(&standard::boundary_simplex(5)).unwrap();
    let gen = cohomology(cover.nerve(), 4, Integers).unwrap().generators[0].clone();
    let q = DeligneQuadruple::from_integral_class(&cover, &gen).unwrap();
    let mut rng = ChaCha8Rng::seed_from_u64(22);
    let h = common::forms(&cover, 2, 0, RationalsModOne, &mut rng);
    let b = common::forms(&cover, 1, 1, Rationals, &mut rng);
    let e = common::forms(&cover, 0, 2, Rationals, &mut rng);
    let s = q.shifted(&h, &b, &e).unwrap();
    assert!(deligne2_validate(&s).is_valid());
    let (x, y) = (four_form(&q).unwrap(), four_form(&s).unwrap());
    assert_eq!(x.theta.orientation_pairing, y.theta.orientation_pairing);
    assert!(y.class_matches);
    assert!(cochain_classes_equal(&q.connecting_class().unwrap(), &s.connecting_class().unwrap()).unwrap());
}

#[test]
fn rp3_two_gerbes() {
    let cover = vertex_star_cover(&standard::rp3()).unwrap();
    let nerve = cover.nerve();
    let z2 = CoefficientGroup::Cyclic(2);
    let gen = cohomology(nerve, 3, z2).unwrap().generators[0].clone();
    let zero = Cochain::zero(nerve, 2, z2);
    let p = TwoGerbePresentation::new(&cover, zero.clone(), gen.clone()).unwrap();
    match trivialize_two_gerbe(&p).unwrap() {
        Trivialization::Obstructed(c) => assert_eq!(c.class, vec![int(1)]),
        Trivialization::Trivial(_) => panic!("generator trivialized"),
    }
    let mut rng = ChaCha8Rng::seed_from_u64(23);
    let a = common::cochain(nerve, 2, z2, &mut rng).d();
    let p = TwoGerbePresentation::new(&cover, zero, a.clone()).unwrap();
    match trivialize_two_gerbe(&p).unwrap() {
        Trivialization::Trivial(h) => assert_eq!(h.d(), a),
        Trivialization::Obstructed(_) => panic!("coboundary obstructed"),
    }
}

#[test]
fn rp3_bockstein_in_degrees_one_and_two() {
    // Sq¹ on RP³: x ↦ x² is nonzero, x² ↦ 2x³ = 0
    let k = Arc::new(standard::rp3());
    let z2 = CoefficientGroup::Cyclic(2);
    let ext = CentralExtension::cyclic(2, 2);
    let seq = ExactSequence::Cyclic { kernel: 2, quotient: 2 };
    let x = cohomology(&k, 1, z2).unwrap().generators[0].clone();
    let b1 = bockstein_lift_class(&x, &ext).unwrap();
    assert!(!b1.is_zero);
    let x2 = cohomology(&k, 2, z2).unwrap().generators[0].clone();
    let b2 = bockstein_lift_class(&x2, &ext).unwrap();
    assert!(b2.is_zero);
    for (g, b) in [(x, b1), (x2, b2)] {
        assert!(cochain_classes_equal(&b.cocycle, &connecting_hom(&g, seq).unwrap().cocycle).unwrap());
    }
    // the square of x, taken on integer lifts, is the Bockstein image
    let x = cohomology(&k, 1, z2).unwrap().generators[0].with_coeff(Integers);
    let sq = gerbes::cochain::cup(&x, &x).unwrap().with_coeff(z2);
    assert!(cochain_classes_equal(&sq, &bockstein_lift_class(&x.with_coeff(z2), &ext).unwrap().cocycle).unwrap());
}

#[test]
fn fundamental_cycles() {
    for name in ["s2", "s3", "rp3", "hexagon"] {
        let k = Arc::new(standard::named(name).unwrap());
        let z = FundamentalCycle::orientation(&k).unwrap();
        assert_eq!(z.weights().len(), k.count(k.dim()), "{name}");
    }
    assert!(FundamentalCycle::orientation(&Arc::new(standard::rp2())).is_err());
}
