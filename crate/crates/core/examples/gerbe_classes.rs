//! Dixmier-Douady classes: from a gerbe presentation, and from lifting a
//! Z2 principal bundle on RP² through Z2 → Z4 → Z2.
//!
//! `cargo run --example gerbe_classes`

use std::sync::Arc;

use itertools::Itertools;

use gerbes::cech::vertex_star_cover;
use gerbes::cochain::{cohomology, Cochain, CoefficientGroup};
use gerbes::exact::int;
use gerbes::gerbe::{dd_class, dd_cocycle, lifting_gerbe_cocycle, CentralExtension, GerbePresentation, GroupCochain};
use gerbes::simplicial::FiniteGroup;
use gerbes::standard;

fn main() -> gerbes::Result<()> {
    let z3 = CoefficientGroup::Cyclic(3);
    let cover = vertex_star_cover(&standard::boundary_simplex(3))?;
    let nerve = cover.nerve();
    let p = Cochain::from_values(nerve, 2, z3, [(0, int(1))])?;
    let s = Cochain::from_values(nerve, 1, z3, [(0, int(2)), (3, int(1))])?;
    let g = dd_cocycle(&GerbePresentation::new(&cover, p, s)?)?;
    println!("DD cocycle {}, class {}", show(g.values()), dd_class(&g)?.class.iter().join(","));

    let cover = vertex_star_cover(&standard::rp2())?;
    let tau = cohomology(cover.nerve(), 1, CoefficientGroup::Cyclic(2))?.generators[0].clone();
    let tau = GroupCochain::from_cyclic(&tau)?;
    let ext = CentralExtension::cyclic(2, 2);
    for section in ext.all_sections() {
        let c = lifting_gerbe_cocycle(&ext.with_section(section.clone())?, &tau)?;
        println!("Z4 lift, section {section:?}: class {}", c.class.iter().join(","));
    }
    let split = CentralExtension::split(2, Arc::new(FiniteGroup::cyclic(2)));
    println!("split lift: zero = {}", lifting_gerbe_cocycle(&split, &tau)?.is_zero);
    Ok(())
}

fn show(values: &std::collections::BTreeMap<usize, gerbes::exact::Rational>) -> String {
    values.iter().map(|(i, v)| format!("{i}:{v}")).join(" ")
}
