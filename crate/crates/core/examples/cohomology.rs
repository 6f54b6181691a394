//! Integral and mod-n cohomology of the bundled complexes, a cup product
//! and a pairing with the fundamental cycle.
//!
//! `cargo run --example cohomology`

use std::sync::Arc;

use itertools::Itertools;

use gerbes::cochain::{cohomology, cup, pair, CoefficientGroup, FundamentalCycle, Integers};
use gerbes::standard;

fn main() -> gerbes::Result<()> {
    for name in ["s2", "rp2", "s3", "rp3"] {
        let k = Arc::new(standard::named(name).unwrap());
        let line: Vec<String> = (0..=k.dim())
            .map(|p| cohomology(&k, p, Integers).map(|h| format!("H^{p} {}", h.summary())))
            .collect::<gerbes::Result<_>>()?;
        println!("{name:>4} f={:?}: {}", k.f_vector(), line.join("; "));
    }

    // x² ≠ 0 in H²(RP²; Z2), computed on integer lifts
    let k = Arc::new(standard::rp2());
    let z2 = CoefficientGroup::Cyclic(2);
    let x = cohomology(&k, 1, z2)?.generators[0].with_coeff(Integers);
    let sq = cup(&x, &x)?.with_coeff(z2);
    println!("x ∪ x on RP² has class {}", cohomology(&k, 2, z2)?.coordinates(&sq)?.iter().join(","));

    let s3 = Arc::new(standard::boundary_simplex(4));
    let gen = &cohomology(&s3, 3, Integers)?.generators[0];
    println!("generator of H³(S³) pairs to {}", pair(gen, &FundamentalCycle::orientation(&s3)?)?);
    Ok(())
}
