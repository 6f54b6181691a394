//! Bundle 2-gerbes: coherence, the four-class and its second construction,
//! the triviality test on RP³, and the four-form of the generator on S⁴.
//!
//! `cargo run --release --example two_gerbes`

use gerbes::cech::vertex_star_cover;
use gerbes::cochain::{cohomology, Cochain, CoefficientGroup, Integers};
use gerbes::exact::int;
use gerbes::gerbe::Trivialization;
use gerbes::standard;
use gerbes::two_gerbe::{
    coherence_check, four_cocycle, four_cocycle_via_rho, four_form, trivialize_two_gerbe, DeligneQuadruple,
    TwoGerbePresentation,
};

fn main() -> gerbes::Result<()> {
    let z2 = CoefficientGroup::Cyclic(2);
    let cover = vertex_star_cover(&standard::rp3())?;
    let nerve = cover.nerve();
    let a = cohomology(nerve, 3, z2)?.generators[0].clone();
    let lambda = Cochain::from_values(nerve, 2, z2, [(0, int(1)), (5, int(1))])?;
    let p = TwoGerbePresentation::new(&cover, lambda.clone(), a)?;
    let g = four_cocycle(&p)?;
    println!("RP³: four-cocycle has {} nonzero entries", g.values().len());
    println!("ρ-construction in the same class: {}", four_cocycle_via_rho(&p, &lambda)?.same_class);
    match trivialize_two_gerbe(&p)? {
        Trivialization::Trivial(_) => println!("trivial"),
        Trivialization::Obstructed(c) => println!("obstructed, class {:?}", c.class.iter().map(|r| r.to_string()).collect::<Vec<_>>()),
    }

    let s4 = vertex_star_cover(&standard::boundary_simplex(5))?;
    let mut bad = Cochain::zero(s4.nerve(), 3, z2);
    bad.add_at(0, &int(1));
    println!("one-entry associator on S⁴ fails coherence at {:?}", coherence_check(&bad).witnesses);

    let c = cohomology(s4.nerve(), 4, Integers)?.generators[0].clone();
    let q = DeligneQuadruple::from_integral_class(&s4, &c)?;
    let f = four_form(&q)?;
    let period = f.theta.orientation_pairing.map(|r| r.to_string()).unwrap_or_default();
    println!("Θ closed {}, period {period}, class matches {}", f.theta.closed, f.class_matches);
    Ok(())
}
