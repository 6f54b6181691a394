//! Small named triangulations used by tests, examples and the CLI.

use itertools::Itertools;

use crate::simplicial::SimplicialComplex;

/// Boundary of the `n`-simplex (a triangulated `S^{n-1}`).
pub fn boundary_simplex(n: usize) -> SimplicialComplex {
    let facets: Vec<Vec<usize>> = (0..=n).combinations(n).collect();
    SimplicialComplex::from_facets(n + 1, &facets).expect("boundary of a simplex")
}

/// The full 2-simplex.
pub fn triangle() -> SimplicialComplex {
    SimplicialComplex::from_facets(3, &[vec![0, 1, 2]]).expect("triangle")
}

/// Hexagonal circle on vertices `0..6`.
pub fn hexagon() -> SimplicialComplex {
    let facets: Vec<Vec<usize>> = (0..6).map(|i| vec![i, (i + 1) % 6]).collect();
    SimplicialComplex::from_facets(6, &facets).expect("hexagon")
}

/// Minimal 6-vertex real projective plane.
pub fn rp2() -> SimplicialComplex {
    let facets = [
        [0, 1, 2],
        [0, 2, 3],
        [0, 3, 4],
        [0, 4, 5],
        [0, 5, 1],
        [1, 2, 4],
        [2, 3, 5],
        [3, 4, 1],
        [4, 5, 2],
        [5, 1, 3],
    ];
    let facets: Vec<Vec<usize>> = facets.iter().map(|f| f.to_vec()).collect();
    SimplicialComplex::from_facets(6, &facets).expect("rp2")
}

/// A 40-vertex `RP³`: the antipodal quotient of the barycentric subdivision
/// of the boundary of the 4-dimensional cross-polytope. Vertices are faces
/// of the cross-polytope up to sign, written as sign strings such as `+0-0`.
pub fn rp3() -> SimplicialComplex {
    let canon = |v: [i8; 4]| -> [i8; 4] {
        let first = v.iter().find(|&&x| x != 0).copied().unwrap_or(1);
        v.map(|x| x * first)
    };
    let mut verts: Vec<[i8; 4]> = (0..81)
        .map(|mut k| {
            let mut v = [0i8; 4];
            for slot in v.iter_mut() {
                *slot = (k % 3) as i8 - 1;
                k /= 3;
            }
            v
        })
        .filter(|v| v.iter().any(|&x| x != 0))
        .map(canon)
        .unique()
        .collect();
    verts.sort_by_key(|v| (v.iter().filter(|&&x| x != 0).count(), *v));
    let index = |v: [i8; 4]| verts.iter().position(|w| *w == canon(v)).unwrap();
    let mut facets = Vec::new();
    for signs in 0..16u32 {
        let full: [i8; 4] = std::array::from_fn(|i| if signs >> i & 1 == 1 { -1 } else { 1 });
        for perm in (0..4).permutations(4) {
            let mut face = [0i8; 4];
            let mut chain = Vec::new();
            for &c in &perm {
                face[c] = full[c];
                chain.push(index(face));
            }
            facets.push(chain);
        }
    }
    let labels = verts
        .iter()
        .map(|v| v.iter().map(|&x| match x { 1 => '+', -1 => '-', _ => '0' }).collect())
        .collect();
    SimplicialComplex::new(labels, &facets).expect("rp3")
}

/// Looks up a built-in complex by name.
pub fn named(name: &str) -> Option<SimplicialComplex> {
    Some(match name {
        "point" => SimplicialComplex::from_facets(1, &[]).ok()?,
        "triangle" => triangle(),
        "circle6" | "hexagon" => hexagon(),
        "s1" => boundary_simplex(2),
        "s2" => boundary_simplex(3),
        "s3" => boundary_simplex(4),
        "s4" => boundary_simplex(5),
        "rp2" => rp2(),
        "rp3" => rp3(),
        _ => return None,
    })
}

pub const NAMED: &[&str] = &["point", "triangle", "circle6", "s1", "s2", "s3", "s4", "rp2", "rp3"];
