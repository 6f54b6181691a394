//! Finite simplicial complexes, subcomplexes, truncated simplicial objects
//! and the nerve constructions for finite groups.

use std::collections::{HashMap, HashSet};
use std::fmt;
use std::sync::{Arc, OnceLock};

use itertools::Itertools;
use num_bigint::BigInt;

use crate::error::{Error, Result};
use crate::linalg::{self, IntMatrix, Smith, Transforms};

/// A simplex as a strictly increasing list of vertex indices.
pub type Simplex = Vec<u32>;

/// A finite ordered-vertex simplicial complex.
///
/// Vertices are `0..labels.len()` ordered by index; simplices of each
/// dimension are kept in lexicographic order, and that order is the
/// coordinate order of every cochain and coboundary matrix.
pub struct SimplicialComplex {
    labels: Vec<String>,
    simplices: Vec<Vec<Simplex>>,
    index: Vec<HashMap<Simplex, usize>>,
    faces: Vec<Vec<Vec<usize>>>,
    cofaces: Vec<Vec<Vec<(usize, usize)>>>,
    smith_cache: Vec<OnceLock<Arc<Smith>>>,
}

impl fmt::Debug for SimplicialComplex {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("SimplicialComplex")
            .field("f_vector", &self.f_vector())
            .finish()
    }
}

impl SimplicialComplex {
    /// Downward closure of `facets` (vertex indices into `labels`). Every
    /// declared vertex is a 0-simplex even when no facet mentions it.
    pub fn new(labels: Vec<String>, facets: &[Vec<usize>]) -> Result<Self> {
        let n = labels.len();
        let mut seen = HashSet::new();
        for l in &labels {
            if !seen.insert(l.as_str()) {
                return Err(Error::MalformedFacet {
                    facet: vec![l.clone()],
                    reason: "vertex label declared twice".into(),
                });
            }
        }
        let mut all: Vec<HashSet<Simplex>> = vec![(0..n as u32).map(|v| vec![v]).collect()];
        for facet in facets {
            let names = || {
                facet
                    .iter()
                    .map(|&v| labels.get(v).cloned().unwrap_or_else(|| format!("#{v}")))
                    .collect::<Vec<_>>()
            };
            if facet.is_empty() {
                return Err(Error::MalformedFacet {
                    facet: vec![],
                    reason: "empty facet".into(),
                });
            }
            if let Some(&v) = facet.iter().find(|&&v| v >= n) {
                return Err(Error::MalformedFacet {
                    facet: names(),
                    reason: format!("vertex #{v} is not declared"),
                });
            }
            let mut s: Simplex = facet.iter().map(|&v| v as u32).collect();
            s.sort_unstable();
            if s.windows(2).any(|w| w[0] == w[1]) {
                return Err(Error::MalformedFacet {
                    facet: names(),
                    reason: "duplicate vertex".into(),
                });
            }
            if all.len() < s.len() {
                all.resize_with(s.len(), HashSet::new);
            }
            if all[s.len() - 1].contains(&s) {
                continue;
            }
            for k in 1..=s.len() {
                for sub in s.iter().copied().combinations(k) {
                    all[k - 1].insert(sub);
                }
            }
        }
        Ok(Self::from_closed(labels, all))
    }

    /// Builds a complex from vertex labels and facets given by label.
    pub fn from_labels<S: AsRef<str>>(vertices: &[S], facets: &[Vec<S>]) -> Result<Self> {
        let labels: Vec<String> = vertices.iter().map(|v| v.as_ref().to_string()).collect();
        let pos: HashMap<&str, usize> = labels.iter().enumerate().map(|(i, l)| (l.as_str(), i)).collect();
        let mut idx = Vec::new();
        for f in facets {
            let mut out = Vec::new();
            for v in f {
                match pos.get(v.as_ref()) {
                    Some(&i) => out.push(i),
                    None => {
                        return Err(Error::MalformedFacet {
                            facet: f.iter().map(|s| s.as_ref().to_string()).collect(),
                            reason: format!("vertex {} is not declared", v.as_ref()),
                        })
                    }
                }
            }
            idx.push(out);
        }
        Self::new(labels, &idx)
    }

    /// Complex on `0..n` with integer labels.
    pub fn from_facets(n: usize, facets: &[Vec<usize>]) -> Result<Self> {
        Self::new((0..n).map(|i| i.to_string()).collect(), facets)
    }

    fn from_closed(labels: Vec<String>, all: Vec<HashSet<Simplex>>) -> Self {
        let mut simplices: Vec<Vec<Simplex>> = all
            .into_iter()
            .map(|s| {
                let mut v: Vec<Simplex> = s.into_iter().collect();
                v.sort_unstable();
                v
            })
            .collect();
        while simplices.last().is_some_and(|s| s.is_empty()) && simplices.len() > 1 {
            simplices.pop();
        }
        let index: Vec<HashMap<Simplex, usize>> = simplices
            .iter()
            .map(|l| l.iter().enumerate().map(|(i, s)| (s.clone(), i)).collect())
            .collect();
        let mut faces = vec![vec![]; simplices.len()];
        let mut cofaces: Vec<Vec<Vec<(usize, usize)>>> =
            simplices.iter().map(|l| vec![vec![]; l.len()]).collect();
        for p in 1..simplices.len() {
            faces[p] = simplices[p]
                .iter()
                .enumerate()
                .map(|(i, s)| {
                    (0..s.len())
                        .map(|j| {
                            let mut f = s.clone();
                            f.remove(j);
                            let fi = index[p - 1][&f];
                            cofaces[p - 1][fi].push((i, j));
                            fi
                        })
                        .collect()
                })
                .collect();
        }
        let smith_cache = (0..simplices.len()).map(|_| OnceLock::new()).collect();
        SimplicialComplex {
            labels,
            simplices,
            index,
            faces,
            cofaces,
            smith_cache,
        }
    }

    /// Dimension; an empty complex reports 0.
    pub fn dim(&self) -> usize {
        self.simplices.len() - 1
    }

    pub fn num_vertices(&self) -> usize {
        self.labels.len()
    }

    pub fn labels(&self) -> &[String] {
        &self.labels
    }

    pub fn label(&self, v: u32) -> &str {
        &self.labels[v as usize]
    }

    pub fn vertex_index(&self, label: &str) -> Option<u32> {
        self.labels.iter().position(|l| l == label).map(|i| i as u32)
    }

    pub fn simplices(&self, p: usize) -> &[Simplex] {
        self.simplices.get(p).map(|v| v.as_slice()).unwrap_or(&[])
    }

    pub fn count(&self, p: usize) -> usize {
        self.simplices(p).len()
    }

    pub fn simplex(&self, p: usize, i: usize) -> &Simplex {
        &self.simplices[p][i]
    }

    pub fn f_vector(&self) -> Vec<usize> {
        self.simplices.iter().map(Vec::len).collect()
    }

    pub fn total_count(&self) -> usize {
        self.simplices.iter().map(Vec::len).sum()
    }

    pub fn index_of(&self, s: &[u32]) -> Option<usize> {
        if s.is_empty() {
            return None;
        }
        self.index.get(s.len() - 1)?.get(s).copied()
    }

    pub fn contains(&self, s: &[u32]) -> bool {
        self.index_of(s).is_some()
    }

    /// `faces(p, i)[j]` is the index of the face deleting vertex `j`.
    pub fn faces(&self, p: usize, i: usize) -> &[usize] {
        if p == 0 {
            &[]
        } else {
            &self.faces[p][i]
        }
    }

    /// `(coface index, j)` where the coface has the extra vertex at position `j`.
    pub fn cofaces(&self, p: usize, i: usize) -> &[(usize, usize)] {
        self.cofaces.get(p).map(|c| c[i].as_slice()).unwrap_or(&[])
    }

    pub fn simplex_labels(&self, p: usize, i: usize) -> Vec<String> {
        self.simplices[p][i].iter().map(|&v| self.labels[v as usize].clone()).collect()
    }

    pub fn labels_of(&self, s: &[u32]) -> Vec<String> {
        s.iter().map(|&v| self.labels[v as usize].clone()).collect()
    }

    /// Matrix of `d : C^p → C^{p+1}`, rows indexed by `(p+1)`-simplices.
    pub fn coboundary_matrix(&self, p: usize) -> IntMatrix {
        let rows = self.count(p + 1);
        let cols = self.count(p);
        let mut m = vec![vec![BigInt::from(0); cols]; rows];
        for (r, row) in m.iter_mut().enumerate() {
            for (j, &f) in self.faces(p + 1, r).iter().enumerate() {
                row[f] = BigInt::from(if j % 2 == 0 { 1 } else { -1 });
            }
        }
        m
    }

    /// Cached Smith form of `d : C^p → C^{p+1}` with `U`, `V`, `V⁻¹`.
    pub fn coboundary_smith(&self, p: usize) -> Arc<Smith> {
        let compute = || {
            let m = self.coboundary_matrix(p);
            Arc::new(linalg::smith(
                &m,
                self.count(p + 1),
                self.count(p),
                Transforms {
                    u: true,
                    u_inv: false,
                    v: true,
                    v_inv: true,
                },
            ))
        };
        match self.smith_cache.get(p) {
            Some(cell) => cell.get_or_init(compute).clone(),
            None => compute(),
        }
    }

    /// Barycentric subdivision. Vertex `k` of the result is the `k`-th face
    /// of `self` in (dimension, lexicographic) order; the returned table maps
    /// it back to `(dim, index)`.
    pub fn barycentric_subdivision(&self) -> (SimplicialComplex, Vec<(usize, usize)>) {
        let mut vert = Vec::new();
        let mut offset = vec![0usize; self.simplices.len()];
        for p in 0..self.simplices.len() {
            offset[p] = vert.len();
            for i in 0..self.count(p) {
                vert.push((p, i));
            }
        }
        let labels: Vec<String> = vert
            .iter()
            .map(|&(p, i)| format!("{{{}}}", self.simplex_labels(p, i).join(",")))
            .collect();
        // chains of faces ending in each simplex
        let mut chains: Vec<Vec<Vec<Vec<u32>>>> = Vec::with_capacity(self.simplices.len());
        for p in 0..self.simplices.len() {
            let mut level = Vec::with_capacity(self.count(p));
            for i in 0..self.count(p) {
                let me = (offset[p] + i) as u32;
                let mut cs = vec![vec![me]];
                if p > 0 {
                    let mut below = HashSet::new();
                    collect_faces(self, p, i, &mut below);
                    for (q, k) in below {
                        for c in &chains[q][k] {
                            let mut c: Vec<u32> = c.clone();
                            c.push(me);
                            cs.push(c);
                        }
                    }
                }
                level.push(cs);
            }
            chains.push(level);
        }
        let mut all: Vec<HashSet<Simplex>> = vec![HashSet::new(); self.simplices.len()];
        for level in &chains {
            for cs in level {
                for c in cs {
                    all[c.len() - 1].insert(c.clone());
                }
            }
        }
        (SimplicialComplex::from_closed(labels, all), vert)
    }
}

fn collect_faces(k: &SimplicialComplex, p: usize, i: usize, out: &mut HashSet<(usize, usize)>) {
    for &f in k.faces(p, i) {
        if out.insert((p - 1, f)) && p > 1 {
            collect_faces(k, p - 1, f, out);
        }
    }
}

/// Convenience constructor taking label-valued facets.
pub fn build_complex<S: AsRef<str>>(vertices: &[S], facets: &[Vec<S>]) -> Result<SimplicialComplex> {
    SimplicialComplex::from_labels(vertices, facets)
}

/// A subcomplex given by sorted simplex indices per dimension.
#[derive(Debug, Clone, PartialEq, Eq, Default)]
pub struct Subcomplex {
    sets: Vec<Vec<usize>>,
}

impl Subcomplex {
    pub fn empty() -> Self {
        Subcomplex { sets: vec![] }
    }

    /// Downward closure of the given `(dim, index)` simplices.
    pub fn closure(k: &SimplicialComplex, gens: &[(usize, usize)]) -> Self {
        let mut sets: Vec<HashSet<usize>> = vec![HashSet::new(); k.simplices.len()];
        let mut stack: Vec<(usize, usize)> = gens.to_vec();
        while let Some((p, i)) = stack.pop() {
            if sets[p].insert(i) && p > 0 {
                for &f in k.faces(p, i) {
                    stack.push((p - 1, f));
                }
            }
        }
        Self::from_sets(sets)
    }

    /// Takes explicit index sets; the caller guarantees closure.
    pub fn from_sets(sets: Vec<HashSet<usize>>) -> Self {
        let mut sets: Vec<Vec<usize>> = sets
            .into_iter()
            .map(|s| s.into_iter().sorted_unstable().collect())
            .collect();
        while sets.last().is_some_and(|s: &Vec<usize>| s.is_empty()) {
            sets.pop();
        }
        Subcomplex { sets }
    }

    pub fn whole(k: &SimplicialComplex) -> Self {
        Subcomplex {
            sets: (0..k.simplices.len()).map(|p| (0..k.count(p)).collect()).collect(),
        }
    }

    pub fn contains(&self, p: usize, i: usize) -> bool {
        self.sets.get(p).is_some_and(|s| s.binary_search(&i).is_ok())
    }

    /// Local position of simplex `(p, i)` within this subcomplex.
    pub fn position(&self, p: usize, i: usize) -> Option<usize> {
        self.sets.get(p)?.binary_search(&i).ok()
    }

    pub fn simplices(&self, p: usize) -> &[usize] {
        self.sets.get(p).map(|v| v.as_slice()).unwrap_or(&[])
    }

    pub fn count(&self, p: usize) -> usize {
        self.simplices(p).len()
    }

    pub fn is_empty(&self) -> bool {
        self.sets.is_empty()
    }

    pub fn dim(&self) -> Option<usize> {
        self.sets.len().checked_sub(1)
    }

    /// Closed under faces inside `k`.
    pub fn is_closed_in(&self, k: &SimplicialComplex) -> bool {
        (1..self.sets.len()).all(|p| {
            self.sets[p]
                .iter()
                .all(|&i| k.faces(p, i).iter().all(|&f| self.contains(p - 1, f)))
        })
    }

    /// Sparse rows of `d : C^q(U) → C^{q+1}(U)` in local coordinates.
    pub fn coboundary_rows(&self, k: &SimplicialComplex, q: usize) -> Vec<Vec<(usize, i64)>> {
        self.simplices(q + 1)
            .iter()
            .map(|&t| {
                let mut row: Vec<(usize, i64)> = k
                    .faces(q + 1, t)
                    .iter()
                    .enumerate()
                    .map(|(j, &f)| {
                        let local = self.position(q, f).expect("subcomplex is closed");
                        (local, if j % 2 == 0 { 1 } else { -1 })
                    })
                    .collect();
                row.sort_unstable();
                row
            })
            .collect()
    }

    /// Connected components of the 1-skeleton, as local vertex labels.
    pub fn components(&self, k: &SimplicialComplex) -> Vec<usize> {
        let n = self.count(0);
        let mut comp: Vec<usize> = (0..n).collect();
        fn find(c: &mut [usize], x: usize) -> usize {
            let mut r = x;
            while c[r] != r {
                r = c[r];
            }
            let mut y = x;
            while c[y] != r {
                let nx = c[y];
                c[y] = r;
                y = nx;
            }
            r
        }
        for &e in self.simplices(1) {
            let f = k.faces(1, e);
            let a = self.position(0, f[0]).unwrap();
            let b = self.position(0, f[1]).unwrap();
            let (ra, rb) = (find(&mut comp, a), find(&mut comp, b));
            if ra != rb {
                comp[ra.max(rb)] = ra.min(rb);
            }
        }
        (0..n).map(|i| find(&mut comp, i)).collect()
    }

    /// Vanishing reduced integral cohomology (the discrete "contractible").
    pub fn is_acyclic(&self, k: &SimplicialComplex) -> bool {
        if self.is_empty() {
            return false;
        }
        let top = self.sets.len();
        let mut ranks = vec![0usize; top + 1];
        for q in 0..top {
            let rows = self.coboundary_rows(k, q);
            if rows.is_empty() {
                continue;
            }
            let cols = self.count(q);
            let mut m = vec![vec![BigInt::from(0); cols]; rows.len()];
            for (r, row) in rows.iter().enumerate() {
                for &(c, v) in row {
                    m[r][c] = BigInt::from(v);
                }
            }
            let s = linalg::smith(&m, rows.len(), cols, Transforms::NONE);
            if !s.torsion().is_empty() {
                return false;
            }
            ranks[q] = s.rank();
        }
        (0..top).all(|q| {
            let prev = if q == 0 { 0 } else { ranks[q - 1] };
            let h = self.count(q) - ranks[q] - prev;
            h == usize::from(q == 0)
        })
    }
}

/// A finite group given by its multiplication table.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct FiniteGroup {
    names: Vec<String>,
    table: Vec<usize>,
    identity: usize,
    inverse: Vec<usize>,
    abelian: bool,
}

impl FiniteGroup {
    /// Validates closure, identity, inverses and associativity.
    pub fn from_table(names: Vec<String>, table: Vec<Vec<usize>>) -> Result<Self> {
        let n = names.len();
        if n == 0 {
            return Err(Error::GroupAxiom("empty element set".into()));
        }
        if table.len() != n || table.iter().any(|r| r.len() != n) {
            return Err(Error::GroupAxiom("table is not n × n".into()));
        }
        if table.iter().flatten().any(|&x| x >= n) {
            return Err(Error::GroupAxiom("table entry outside the element set".into()));
        }
        let flat: Vec<usize> = table.concat();
        let mul = |a: usize, b: usize| flat[a * n + b];
        let identity = (0..n)
            .find(|&e| (0..n).all(|x| mul(e, x) == x && mul(x, e) == x))
            .ok_or_else(|| Error::GroupAxiom("no identity element".into()))?;
        let mut inverse = vec![0; n];
        for x in 0..n {
            inverse[x] = (0..n)
                .find(|&y| mul(x, y) == identity && mul(y, x) == identity)
                .ok_or_else(|| Error::GroupAxiom(format!("{} has no inverse", names[x])))?;
        }
        for (a, b, c) in itertools::iproduct!(0..n, 0..n, 0..n) {
            if mul(mul(a, b), c) != mul(a, mul(b, c)) {
                return Err(Error::GroupAxiom(format!(
                    "associativity fails at ({}, {}, {})",
                    names[a], names[b], names[c]
                )));
            }
        }
        let abelian = (0..n).all(|a| (0..n).all(|b| mul(a, b) == mul(b, a)));
        Ok(FiniteGroup {
            names,
            table: flat,
            identity,
            inverse,
            abelian,
        })
    }

    /// `Z_n` written additively with elements named `0..n-1`.
    pub fn cyclic(n: usize) -> Self {
        let names = (0..n).map(|i| i.to_string()).collect();
        let table = (0..n).map(|a| (0..n).map(|b| (a + b) % n).collect()).collect();
        Self::from_table(names, table).expect("cyclic group")
    }

    /// Symmetric group on `k` letters; elements are permutations in
    /// one-line notation (`"012"` is the identity), composed as functions:
    /// `(a·b)(i) = a(b(i))`.
    pub fn symmetric(k: usize) -> Self {
        let perms: Vec<Vec<usize>> = (0..k).permutations(k).collect();
        let pos: HashMap<Vec<usize>, usize> =
            perms.iter().enumerate().map(|(i, p)| (p.clone(), i)).collect();
        let names = perms.iter().map(|p| p.iter().map(|d| d.to_string()).collect()).collect();
        let table = perms
            .iter()
            .map(|a| {
                perms
                    .iter()
                    .map(|b| pos[&(0..k).map(|i| a[b[i]]).collect::<Vec<_>>()])
                    .collect()
            })
            .collect();
        Self::from_table(names, table).expect("symmetric group")
    }

    /// Direct product with componentwise multiplication; names are `(a,b)`.
    pub fn product(&self, other: &FiniteGroup) -> Self {
        let (n, m) = (self.order(), other.order());
        let names = iproduct_names(self, other);
        let table = (0..n * m)
            .map(|x| {
                (0..n * m)
                    .map(|y| self.mul(x / m, y / m) * m + other.mul(x % m, y % m))
                    .collect()
            })
            .collect();
        Self::from_table(names, table).expect("product group")
    }

    pub fn order(&self) -> usize {
        self.names.len()
    }

    pub fn identity(&self) -> usize {
        self.identity
    }

    pub fn mul(&self, a: usize, b: usize) -> usize {
        self.table[a * self.names.len() + b]
    }

    pub fn inv(&self, a: usize) -> usize {
        self.inverse[a]
    }

    pub fn is_abelian(&self) -> bool {
        self.abelian
    }

    pub fn name(&self, a: usize) -> &str {
        &self.names[a]
    }

    pub fn names(&self) -> &[String] {
        &self.names
    }

    pub fn element(&self, name: &str) -> Option<usize> {
        self.names.iter().position(|n| n == name)
    }

    pub fn table(&self) -> Vec<Vec<usize>> {
        self.table.chunks(self.order()).map(|r| r.to_vec()).collect()
    }

    /// Product of a sequence, left to right.
    pub fn prod<I: IntoIterator<Item = usize>>(&self, xs: I) -> usize {
        xs.into_iter().fold(self.identity, |acc, x| self.mul(acc, x))
    }
}

fn iproduct_names(a: &FiniteGroup, b: &FiniteGroup) -> Vec<String> {
    itertools::iproduct!(a.names(), b.names())
        .map(|(x, y)| format!("({x},{y})"))
        .collect()
}

/// Levels `0..=n` of a simplicial set, with face and degeneracy maps stored
/// as lookup tables on element indices.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct TruncatedSimplicialObject {
    /// `names[p][x]` describes element `x` of `X_p`.
    pub names: Vec<Vec<String>>,
    /// `faces[p][i][x] = d_i(x)` for `x ∈ X_p`, `p ≥ 1`; `faces[0]` is empty.
    pub faces: Vec<Vec<Vec<usize>>>,
    /// `degeneracies[p][i][x] = s_i(x)` for `x ∈ X_p`, `p < n`.
    pub degeneracies: Vec<Vec<Vec<usize>>>,
}

impl TruncatedSimplicialObject {
    pub fn top(&self) -> usize {
        self.names.len() - 1
    }

    pub fn size(&self, p: usize) -> usize {
        self.names[p].len()
    }

    pub fn d(&self, p: usize, i: usize, x: usize) -> usize {
        self.faces[p][i][x]
    }

    pub fn s(&self, p: usize, i: usize, x: usize) -> usize {
        self.degeneracies[p][i][x]
    }
}

/// A failed identity instance with one witness element.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Violation {
    pub identity: String,
    pub level: usize,
    pub witness: String,
}

/// Checks the three families of simplicial identities on every element
/// within the truncation. One witness is kept per violated instance.
pub fn verify_simplicial_identities(x: &TruncatedSimplicialObject) -> Vec<Violation> {
    let n = x.top();
    let mut out = Vec::new();
    let mut report = |identity: String, level: usize, el: usize| {
        out.push(Violation {
            identity,
            level,
            witness: x.names[level][el].clone(),
        })
    };
    for p in 2..=n {
        for j in 1..=p {
            for i in 0..j {
                let bad = (0..x.size(p)).find(|&e| x.d(p - 1, i, x.d(p, j, e)) != x.d(p - 1, j - 1, x.d(p, i, e)));
                if let Some(e) = bad {
                    report(format!("d{i} d{j} = d{} d{i}", j - 1), p, e);
                }
            }
        }
    }
    for p in 0..n.saturating_sub(1) {
        for j in 0..=p {
            for i in 0..=j {
                let bad = (0..x.size(p)).find(|&e| x.s(p + 1, i, x.s(p, j, e)) != x.s(p + 1, j + 1, x.s(p, i, e)));
                if let Some(e) = bad {
                    report(format!("s{i} s{j} = s{} s{i}", j + 1), p, e);
                }
            }
        }
    }
    for p in 0..n {
        for j in 0..=p {
            for i in 0..=p + 1 {
                let bad = (0..x.size(p)).find(|&e| {
                    let lhs = x.d(p + 1, i, x.s(p, j, e));
                    let rhs = if i < j {
                        x.s(p - 1, j - 1, x.d(p, i, e))
                    } else if i == j || i == j + 1 {
                        e
                    } else {
                        x.s(p - 1, j, x.d(p, i - 1, e))
                    };
                    lhs != rhs
                });
                if let Some(e) = bad {
                    let rhs = if i < j {
                        format!("s{} d{i}", j - 1)
                    } else if i == j || i == j + 1 {
                        "id".to_string()
                    } else {
                        format!("s{j} d{}", i - 1)
                    };
                    report(format!("d{i} s{j} = {rhs}"), p, e);
                }
            }
        }
    }
    out
}

/// Level-wise map between truncated simplicial objects.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SimplicialMap {
    pub levels: Vec<Vec<usize>>,
}

/// Checks `f d_i = d_i f` and `f s_i = s_i f` on every element.
pub fn check_simplicial_map(
    f: &SimplicialMap,
    src: &TruncatedSimplicialObject,
    dst: &TruncatedSimplicialObject,
) -> Vec<Violation> {
    let mut out = Vec::new();
    let n = src.top().min(dst.top());
    for p in 0..=n {
        for e in 0..src.size(p) {
            if p >= 1 {
                for i in 0..=p {
                    if f.levels[p - 1][src.d(p, i, e)] != dst.d(p, i, f.levels[p][e]) {
                        out.push(Violation {
                            identity: format!("f d{i} = d{i} f"),
                            level: p,
                            witness: src.names[p][e].clone(),
                        });
                    }
                }
            }
            if p < n {
                for i in 0..=p {
                    if f.levels[p + 1][src.s(p, i, e)] != dst.s(p, i, f.levels[p][e]) {
                        out.push(Violation {
                            identity: format!("f s{i} = s{i} f"),
                            level: p,
                            witness: src.names[p][e].clone(),
                        });
                    }
                }
            }
        }
    }
    out.dedup_by(|a, b| a.identity == b.identity && a.level == b.level);
    out
}

fn encode(tuple: &[usize], base: usize) -> usize {
    tuple.iter().fold(0, |acc, &g| acc * base + g)
}

fn decode(mut x: usize, len: usize, base: usize) -> Vec<usize> {
    let mut v = vec![0; len];
    for slot in v.iter_mut().rev() {
        *slot = x % base;
        x /= base;
    }
    v
}

fn tuple_name(g: &FiniteGroup, t: &[usize]) -> String {
    format!("({})", t.iter().map(|&x| g.name(x)).join(","))
}

/// `NG` truncated at level `n`: `NG_p = G^p`, inner faces multiply adjacent
/// letters, `s_i` inserts the identity after position `i`.
pub fn nerve_of_group(g: &FiniteGroup, n: usize) -> TruncatedSimplicialObject {
    let q = g.order();
    let tuples = |p: usize| (0..q.pow(p as u32)).map(move |x| decode(x, p, q));
    let names = (0..=n).map(|p| tuples(p).map(|t| tuple_name(g, &t)).collect()).collect();
    let mut faces = vec![vec![]];
    for p in 1..=n {
        let mut level = Vec::new();
        for i in 0..=p {
            level.push(
                tuples(p)
                    .map(|t| {
                        let mut r = t.clone();
                        if i == 0 {
                            r.remove(0);
                        } else if i == p {
                            r.pop();
                        } else {
                            r[i - 1] = g.mul(t[i - 1], t[i]);
                            r.remove(i);
                        }
                        encode(&r, q)
                    })
                    .collect(),
            );
        }
        faces.push(level);
    }
    let degeneracies = (0..n)
        .map(|p| {
            (0..=p)
                .map(|i| {
                    tuples(p)
                        .map(|t| {
                            let mut r = t.clone();
                            r.insert(i, g.identity());
                            encode(&r, q)
                        })
                        .collect()
                })
                .collect()
        })
        .collect();
    TruncatedSimplicialObject {
        names,
        faces,
        degeneracies,
    }
}

/// `N̄G` together with its projection to `NG`.
#[derive(Debug, Clone)]
pub struct BarProjection {
    pub bar: TruncatedSimplicialObject,
    pub nerve: TruncatedSimplicialObject,
    pub projection: SimplicialMap,
    /// Commuting-square failures of the projection (empty when it is simplicial).
    pub violations: Vec<Violation>,
}

/// `N̄G_p = G^{p+1}` with `d_i` omitting and `s_i` repeating coordinate `i`,
/// and `p(g_0,…,g_p) = (g_0⁻¹g_1, …, g_{p-1}⁻¹g_p)`.
pub fn nerve_bar_and_projection(g: &FiniteGroup, n: usize) -> BarProjection {
    let q = g.order();
    let tuples = |p: usize| (0..q.pow(p as u32 + 1)).map(move |x| decode(x, p + 1, q));
    let names = (0..=n).map(|p| tuples(p).map(|t| tuple_name(g, &t)).collect()).collect();
    let mut faces = vec![vec![]];
    for p in 1..=n {
        faces.push(
            (0..=p)
                .map(|i| {
                    tuples(p)
                        .map(|mut t| {
                            t.remove(i);
                            encode(&t, q)
                        })
                        .collect()
                })
                .collect(),
        );
    }
    let degeneracies = (0..n)
        .map(|p| {
            (0..=p)
                .map(|i| {
                    tuples(p)
                        .map(|mut t| {
                            t.insert(i, t[i]);
                            encode(&t, q)
                        })
                        .collect()
                })
                .collect()
        })
        .collect();
    let bar = TruncatedSimplicialObject {
        names,
        faces,
        degeneracies,
    };
    let nerve = nerve_of_group(g, n);
    let projection = SimplicialMap {
        levels: (0..=n)
            .map(|p| {
                tuples(p)
                    .map(|t| {
                        let r: Vec<usize> = t.windows(2).map(|w| g.mul(g.inv(w[0]), w[1])).collect();
                        encode(&r, q)
                    })
                    .collect()
            })
            .collect(),
    };
    let violations = check_simplicial_map(&projection, &bar, &nerve);
    BarProjection {
        bar,
        nerve,
        projection,
        violations,
    }
}

/// Index of a tuple of group elements inside a nerve level.
pub fn tuple_index(g: &FiniteGroup, t: &[usize]) -> usize {
    encode(t, g.order())
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn closure_counts() {
        let k = SimplicialComplex::from_facets(3, &[vec![0, 1, 2]]).unwrap();
        assert_eq!(k.f_vector(), vec![3, 3, 1]);
        let s2 = SimplicialComplex::from_facets(4, &[vec![0, 1, 2], vec![0, 1, 3], vec![0, 2, 3], vec![1, 2, 3]]).unwrap();
        assert_eq!(s2.total_count(), 14);
        let pt = SimplicialComplex::from_facets(1, &[]).unwrap();
        assert_eq!(pt.f_vector(), vec![1]);
    }

    #[test]
    fn malformed_facets() {
        assert!(matches!(
            SimplicialComplex::from_facets(3, &[vec![0, 1, 1]]),
            Err(Error::MalformedFacet { .. })
        ));
        assert!(matches!(
            build_complex(&["a", "b"], &[vec!["a", "c"]]),
            Err(Error::MalformedFacet { .. })
        ));
    }

    #[test]
    fn faces_and_cofaces_agree() {
        let k = SimplicialComplex::from_facets(4, &[vec![0, 1, 2, 3]]).unwrap();
        for p in 1..=3 {
            for i in 0..k.count(p) {
                for (j, &f) in k.faces(p, i).iter().enumerate() {
                    assert!(k.cofaces(p - 1, f).contains(&(i, j)));
                }
            }
        }
    }

    #[test]
    fn subdivision_of_triangle() {
        let k = SimplicialComplex::from_facets(3, &[vec![0, 1, 2]]).unwrap();
        let (sd, map) = k.barycentric_subdivision();
        assert_eq!(sd.f_vector(), vec![7, 12, 6]);
        assert_eq!(map.len(), 7);
        assert!(Subcomplex::whole(&sd).is_acyclic(&sd));
    }

    #[test]
    fn acyclicity() {
        let circle = SimplicialComplex::from_facets(3, &[vec![0, 1], vec![1, 2], vec![0, 2]]).unwrap();
        assert!(!Subcomplex::whole(&circle).is_acyclic(&circle));
        let arc = Subcomplex::closure(&circle, &[(1, 0), (1, 2)]);
        assert!(arc.is_acyclic(&circle));
        assert!(arc.is_closed_in(&circle));
    }

    #[test]
    fn groups() {
        let s3 = FiniteGroup::symmetric(3);
        assert_eq!(s3.order(), 6);
        assert!(!s3.is_abelian());
        assert_eq!(s3.name(s3.identity()), "012");
        let z2 = FiniteGroup::cyclic(2);
        assert!(z2.product(&z2).is_abelian());
        let bad = FiniteGroup::from_table(vec!["a".into(), "b".into()], vec![vec![0, 0], vec![0, 1]]);
        assert!(bad.is_err());
    }

    #[test]
    fn nerve_formulas() {
        let z2 = FiniteGroup::cyclic(2);
        assert_eq!(nerve_of_group(&z2, 2).size(2), 4);
        let z3 = FiniteGroup::cyclic(3);
        let ng = nerve_of_group(&z3, 2);
        assert_eq!(ng.d(2, 1, tuple_index(&z3, &[1, 2])), tuple_index(&z3, &[0]));
        for g in 0..3 {
            assert_eq!(ng.s(1, 0, tuple_index(&z3, &[g])), tuple_index(&z3, &[0, g]));
        }
        let bp = nerve_bar_and_projection(&z2, 2);
        assert_eq!(bp.projection.levels[1][tuple_index(&z2, &[1, 1])], tuple_index(&z2, &[0]));
        assert!(bp.violations.is_empty());
    }

    #[test]
    fn identities_and_perturbation() {
        let z2 = FiniteGroup::cyclic(2);
        let x = nerve_of_group(&z2, 3);
        assert!(verify_simplicial_identities(&x).is_empty());
        let mut bad = x.clone();
        bad.faces[2].swap(0, 1);
        let v = verify_simplicial_identities(&bad);
        assert!(v.iter().any(|v| v.identity.starts_with('d') && v.identity.contains(" d")));
        let point = nerve_of_group(&z2, 0);
        assert!(verify_simplicial_identities(&point).is_empty());
    }

    #[test]
    fn s3_bar_projection_commutes() {
        let s3 = FiniteGroup::symmetric(3);
        let bp = nerve_bar_and_projection(&s3, 3);
        assert!(bp.violations.is_empty());
        assert!(verify_simplicial_identities(&bp.bar).is_empty());
    }
}
