//! A Deligne triple for the generator of H³(S³; Z): validation, its
//! three-curvature and period, the failed trivialization, and the curving
//! pipeline with a partition of unity.
//!
//! `cargo run --example deligne_triples`

use gerbes::cech::vertex_star_cover;
use gerbes::cochain::{cohomology, Integers};
use gerbes::gerbe::{
    curving_pipeline, deligne_validate, three_curvature, trivialize_deligne, DeligneTriple, Partition, Trivialization,
};
use gerbes::standard;

fn main() -> gerbes::Result<()> {
    let cover = vertex_star_cover(&standard::boundary_simplex(4))?;
    let c = cohomology(cover.nerve(), 3, Integers)?.generators[0].clone();
    let t = DeligneTriple::from_integral_class(&cover, &c)?;
    println!("valid: {}", deligne_validate(&t).is_valid());

    let w = three_curvature(&t)?;
    let period = w.orientation_pairing.map(|r| r.to_string()).unwrap_or_default();
    println!("ω closed {}, integral {}, period {period}", w.closed, w.integral);

    match trivialize_deligne(&t)? {
        Trivialization::Trivial(_) => println!("trivial"),
        Trivialization::Obstructed(cert) => println!("obstructed: {}", cert.note),
    }

    let p = curving_pipeline(&t.a.delta(), &t.a.d()?, &Partition::uniform(&cover))?;
    println!("pipeline equations {:?}, glued ω present {}", p.equations, p.omega.is_some());
    Ok(())
}
