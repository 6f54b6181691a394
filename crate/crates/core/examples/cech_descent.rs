//! Čech machinery on a cover: nerve, the two differentials, and solving
//! in the total complex. A closed form on the circle that is not exact
//! comes back with a certificate naming its Čech class.
//!
//! `cargo run --example cech_descent`

use itertools::Itertools;

use gerbes::cech::{solve_total, three_arc_cover, vertex_star_cover, zigzag, Solution, TotalCochain, TotalShape};
use gerbes::cochain::{Cochain, Rationals};
use gerbes::exact::int;
use gerbes::standard;

fn main() -> gerbes::Result<()> {
    let cover = three_arc_cover();
    println!("three arcs: nerve f-vector {:?}, good {}", cover.nerve().f_vector(), cover.is_good());

    // one unit of flux across the edge 0-1 of the hexagon
    let base = cover.base();
    let e = base.index_of(&[0, 1]).unwrap();
    let omega = Cochain::from_values(base, 1, Rationals, [(e, int(1))])?;
    let zz = zigzag(&cover, &omega)?;
    println!("zig-zag constants on the nerve: {}", zz.constants.values().iter().map(|(i, v)| format!("{i}:{v}")).join(" "));

    let local = gerbes::cech::localize(&cover, &omega);
    let x = TotalCochain::zero(&TotalShape::plain(&cover, Rationals), 1).with_piece(local)?;
    match solve_total(&x)? {
        Solution::Solved(_) => println!("exact"),
        Solution::NotExact(c) => println!("not exact: {} (class {:?})", c.note, c.class),
    }

    let s2 = vertex_star_cover(&standard::boundary_simplex(3))?;
    println!("vertex stars of ∂Δ³: base f-vector {:?}, nerve {:?}", s2.base().f_vector(), s2.nerve().f_vector());
    Ok(())
}
