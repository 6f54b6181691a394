//! Nerve and bar construction of a finite group, and what a broken face
//! map looks like to the identity checker.
//!
//! `cargo run --example simplicial_nerves`

use gerbes::simplicial::{nerve_bar_and_projection, nerve_of_group, verify_simplicial_identities, FiniteGroup};

fn main() {
    let g = FiniteGroup::symmetric(3);
    let nerve = nerve_of_group(&g, 3);
    let sizes: Vec<usize> = (0..=nerve.top()).map(|p| nerve.size(p)).collect();
    println!("NS3 level sizes: {sizes:?}");
    println!("violations: {}", verify_simplicial_identities(&nerve).len());

    let bp = nerve_bar_and_projection(&g, 3);
    println!("bar level sizes: {:?}", (0..=bp.bar.top()).map(|p| bp.bar.size(p)).collect::<Vec<_>>());
    println!("projection commutes: {}", bp.violations.is_empty());

    let mut broken = nerve.clone();
    broken.faces[2][1][7] = (broken.faces[2][1][7] + 1) % broken.size(1);
    let v = verify_simplicial_identities(&broken);
    println!("after changing d_1 on one 2-simplex: {} violations, first {:?}", v.len(), v[0]);
}
