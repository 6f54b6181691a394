//! Word arithmetic in EG and BG, and the classifying-map words of a Z2
//! gerbe cocycle at a few sample points.
//!
//! `cargo run --example eg_words`

use std::sync::Arc;

use gerbes::cech::vertex_star_cover;
use gerbes::cochain::{cohomology, CoefficientGroup};
use gerbes::simplicial::FiniteGroup;
use gerbes::standard;
use gerbes::words::{classify_cocycle, eg_inv, eg_mul, parse_bg, parse_eg, project_p, random_sample, section_s};
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

fn main() -> gerbes::Result<()> {
    let s3 = Arc::new(FiniteGroup::symmetric(3));
    let a = parse_eg(&s3, "1/3,2/3;102;[021|120]")?;
    let b = parse_eg(&s3, "1/2;012;[210]")?;
    println!("a·b = {}", eg_mul(&a, &b)?);
    println!("a⁻¹ = {}, a·a⁻¹ = {}", eg_inv(&a), eg_mul(&a, &eg_inv(&a))?);

    let z4 = Arc::new(FiniteGroup::cyclic(4));
    let w = parse_bg(&z4, "1/4,1/2;[1|3]")?;
    let s = section_s(&w)?;
    println!("s({w}) = {s}, p(s(w)) = {}", project_p(&s));

    let cover = vertex_star_cover(&standard::boundary_simplex(3))?;
    let g = cohomology(cover.nerve(), 2, CoefficientGroup::Cyclic(2))?.generators[0].clone();
    let mut rng = ChaCha8Rng::seed_from_u64(1);
    let samples: Vec<_> = (0..3).map(|_| random_sample(cover.nerve(), &mut rng)).collect();
    let c = classify_cocycle(&g, &samples)?;
    for s in &c.samples {
        let words: Vec<String> = s.transitions.iter().map(|((i, j), w)| format!("g{i}{j} = {w}")).collect();
        println!("support {:?}: {}", s.support, words.join(", "));
    }
    println!("cocycle and lift conditions hold: {}", c.holds());
    Ok(())
}
