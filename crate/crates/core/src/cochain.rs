//! Simplicial cochains with abelian coefficients: coboundary, cup product,
//! cohomology by Smith normal form, and pairing with fundamental cycles.

use std::collections::{BTreeMap, VecDeque};
use std::fmt;
use std::sync::Arc;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Zero};

use crate::error::{Error, Result};
use crate::exact::{big, fract, is_integer, mod_inverse, Rational};
use crate::linalg::{self, Smith, SparseRow, Transforms};
use crate::simplicial::{SimplicialComplex, Subcomplex};

/// Coefficient groups; values of every group are stored as rationals in a
/// canonical range (`[0, 1)` for `Q/Z`, `0..n` for `Z_n`).
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum CoefficientGroup {
    Integers,
    Rationals,
    RationalsModOne,
    Cyclic(u64),
}

pub use CoefficientGroup::{Cyclic, Integers, Rationals, RationalsModOne};

impl CoefficientGroup {
    pub fn name(&self) -> String {
        match self {
            Integers => "Z".into(),
            Rationals => "Q".into(),
            RationalsModOne => "Q/Z".into(),
            Cyclic(n) => format!("Z{n}"),
        }
    }

    pub fn has_ring(&self) -> bool {
        matches!(self, Integers | Rationals)
    }

    /// Whether `x` names an element (integrality for `Z` and `Z_n`).
    pub fn admits(&self, x: &Rational) -> bool {
        match self {
            Integers | Cyclic(_) => is_integer(x),
            _ => true,
        }
    }

    /// Canonical representative; `x` must be admitted.
    pub fn reduce(&self, x: &Rational) -> Rational {
        match self {
            Integers | Rationals => x.clone(),
            RationalsModOne => fract(x),
            Cyclic(n) => big(x.to_integer().mod_floor(&BigInt::from(*n))),
        }
    }

    pub fn element(&self, x: &Rational) -> Result<Rational> {
        if self.admits(x) {
            Ok(self.reduce(x))
        } else {
            Err(Error::Mismatch(format!("{} is not an element of {}", crate::exact::fmt_rational(x), self.name())))
        }
    }

    pub fn is_zero(&self, x: &Rational) -> bool {
        self.reduce(x).is_zero()
    }

    /// Modulus for torsion groups (`1` for `Q/Z`).
    fn modulus(&self) -> Option<BigInt> {
        match self {
            Cyclic(n) => Some(BigInt::from(*n)),
            RationalsModOne => Some(BigInt::one()),
            _ => None,
        }
    }

    /// Solves `s · z = c` for `z`; `s > 0`.
    fn divide(&self, s: &BigInt, c: &Rational) -> Option<Rational> {
        match self {
            Rationals | RationalsModOne => Some(c / big(s.clone())),
            Integers => {
                let c = c.to_integer();
                c.is_multiple_of(s).then(|| big(c / s))
            }
            Cyclic(n) => {
                let n = BigInt::from(*n);
                let c = c.to_integer().mod_floor(&n);
                let g = s.gcd(&n);
                if !c.is_multiple_of(&g) {
                    return None;
                }
                let m = &n / &g;
                if m.is_one() {
                    return Some(Rational::zero());
                }
                let inv = mod_inverse(&(s / &g), &m);
                Some(big(((c / &g) * inv).mod_floor(&m)))
            }
        }
    }
}

impl fmt::Display for CoefficientGroup {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.name())
    }
}

/// A degree-`p` cochain; missing keys are zero.
#[derive(Clone)]
pub struct Cochain {
    complex: Arc<SimplicialComplex>,
    degree: usize,
    coeff: CoefficientGroup,
    values: BTreeMap<usize, Rational>,
}

impl PartialEq for Cochain {
    fn eq(&self, other: &Self) -> bool {
        Arc::ptr_eq(&self.complex, &other.complex)
            && self.degree == other.degree
            && self.coeff == other.coeff
            && self.values == other.values
    }
}

impl fmt::Debug for Cochain {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let vals: Vec<String> = self
            .values
            .iter()
            .map(|(i, v)| {
                format!(
                    "{}: {}",
                    self.complex.simplex_labels(self.degree, *i).join(""),
                    crate::exact::fmt_rational(v)
                )
            })
            .collect();
        write!(f, "Cochain<{}, deg {}>{{{}}}", self.coeff, self.degree, vals.join(", "))
    }
}

impl Cochain {
    pub fn zero(complex: &Arc<SimplicialComplex>, degree: usize, coeff: CoefficientGroup) -> Self {
        Cochain {
            complex: complex.clone(),
            degree,
            coeff,
            values: BTreeMap::new(),
        }
    }

    /// Values keyed by simplex index; rejects bad keys and non-elements.
    pub fn from_values<I>(complex: &Arc<SimplicialComplex>, degree: usize, coeff: CoefficientGroup, vals: I) -> Result<Self>
    where
        I: IntoIterator<Item = (usize, Rational)>,
    {
        let mut c = Self::zero(complex, degree, coeff);
        for (i, v) in vals {
            if i >= complex.count(degree) {
                return Err(Error::Mismatch(format!("no {degree}-simplex with index {i}")));
            }
            let v = coeff.element(&v)?;
            c.add_at(i, &v);
        }
        Ok(c)
    }

    /// Values keyed by vertex lists.
    pub fn from_simplices(
        complex: &Arc<SimplicialComplex>,
        degree: usize,
        coeff: CoefficientGroup,
        vals: &[(Vec<u32>, Rational)],
    ) -> Result<Self> {
        let mut out = Vec::new();
        for (s, v) in vals {
            if s.len() != degree + 1 {
                return Err(Error::DegreeMismatch {
                    expected: degree,
                    found: s.len().saturating_sub(1),
                });
            }
            let mut s = s.clone();
            s.sort_unstable();
            let i = complex
                .index_of(&s)
                .ok_or_else(|| Error::Mismatch(format!("{:?} is not a simplex", complex.labels_of(&s))))?;
            out.push((i, v.clone()));
        }
        Self::from_values(complex, degree, coeff, out)
    }

    /// Indicator of one simplex (value one).
    pub fn indicator(complex: &Arc<SimplicialComplex>, simplex: &[u32], coeff: CoefficientGroup) -> Result<Self> {
        Self::from_simplices(complex, simplex.len() - 1, coeff, &[(simplex.to_vec(), Rational::one())])
    }

    /// Constant 0-cochain.
    pub fn constant(complex: &Arc<SimplicialComplex>, coeff: CoefficientGroup, value: &Rational) -> Result<Self> {
        Self::from_values(complex, 0, coeff, (0..complex.count(0)).map(|i| (i, value.clone())))
    }

    /// Dense coordinate vector (length = number of `p`-simplices).
    pub fn from_dense(complex: &Arc<SimplicialComplex>, degree: usize, coeff: CoefficientGroup, dense: &[Rational]) -> Self {
        let mut c = Self::zero(complex, degree, coeff);
        for (i, v) in dense.iter().enumerate() {
            c.add_at(i, v);
        }
        c
    }

    pub fn complex(&self) -> &Arc<SimplicialComplex> {
        &self.complex
    }

    pub fn degree(&self) -> usize {
        self.degree
    }

    pub fn coeff(&self) -> CoefficientGroup {
        self.coeff
    }

    pub fn values(&self) -> &BTreeMap<usize, Rational> {
        &self.values
    }

    pub fn get(&self, i: usize) -> Rational {
        self.values.get(&i).cloned().unwrap_or_else(Rational::zero)
    }

    pub fn get_simplex(&self, s: &[u32]) -> Rational {
        self.complex.index_of(s).map(|i| self.get(i)).unwrap_or_else(Rational::zero)
    }

    /// Value on an ordered vertex tuple, extended alternatingly: zero on
    /// repeated vertices, the sign of the sorting permutation otherwise.
    pub fn get_ordered(&self, t: &[u32]) -> Rational {
        let mut s = t.to_vec();
        let mut odd = false;
        for i in 0..s.len() {
            for j in 0..s.len() - 1 - i {
                match s[j].cmp(&s[j + 1]) {
                    std::cmp::Ordering::Equal => return Rational::zero(),
                    std::cmp::Ordering::Greater => {
                        s.swap(j, j + 1);
                        odd = !odd;
                    }
                    std::cmp::Ordering::Less => {}
                }
            }
        }
        if s.windows(2).any(|w| w[0] == w[1]) {
            return Rational::zero();
        }
        let v = self.get_simplex(&s);
        if odd {
            self.coeff.reduce(&-v)
        } else {
            v
        }
    }

    pub fn dense(&self) -> Vec<Rational> {
        (0..self.complex.count(self.degree)).map(|i| self.get(i)).collect()
    }

    pub fn is_zero(&self) -> bool {
        self.values.is_empty()
    }

    /// Adds `v` at simplex `i`, keeping the map canonical.
    pub fn add_at(&mut self, i: usize, v: &Rational) {
        if v.is_zero() {
            return;
        }
        let cur = self.values.remove(&i).unwrap_or_else(Rational::zero);
        let nv = self.coeff.reduce(&(cur + v));
        if !nv.is_zero() {
            self.values.insert(i, nv);
        }
    }

    pub fn set(&mut self, i: usize, v: &Rational) {
        self.values.remove(&i);
        self.add_at(i, v);
    }

    fn same_space(&self, other: &Cochain) -> Result<()> {
        if !Arc::ptr_eq(&self.complex, &other.complex) {
            return Err(Error::Mismatch("cochains live on different complexes".into()));
        }
        if self.degree != other.degree {
            return Err(Error::DegreeMismatch {
                expected: self.degree,
                found: other.degree,
            });
        }
        if self.coeff != other.coeff {
            return Err(Error::Mismatch(format!("coefficients {} vs {}", self.coeff, other.coeff)));
        }
        Ok(())
    }

    pub fn add(&self, other: &Cochain) -> Result<Cochain> {
        self.same_space(other)?;
        let mut out = self.clone();
        for (i, v) in &other.values {
            out.add_at(*i, v);
        }
        Ok(out)
    }

    pub fn sub(&self, other: &Cochain) -> Result<Cochain> {
        self.add(&other.neg())
    }

    pub fn neg(&self) -> Cochain {
        self.scale(&-Rational::one())
    }

    /// Multiplies by `k`; `k` must be an integer unless the group is `Q`.
    pub fn scale(&self, k: &Rational) -> Cochain {
        let mut out = Self::zero(&self.complex, self.degree, self.coeff);
        for (i, v) in &self.values {
            out.add_at(*i, &(v * k));
        }
        out
    }

    /// Reinterprets values in another group through `f`.
    pub fn map_values(&self, coeff: CoefficientGroup, f: impl Fn(&Rational) -> Rational) -> Cochain {
        let mut out = Self::zero(&self.complex, self.degree, coeff);
        for (i, v) in &self.values {
            out.add_at(*i, &f(v));
        }
        out
    }

    /// Same values regarded in `coeff` (inclusion `Z → Q`, projection
    /// `Q → Q/Z`, reduction `Z → Z_n`, canonical lift `Q/Z → Q`).
    pub fn with_coeff(&self, coeff: CoefficientGroup) -> Cochain {
        self.map_values(coeff, |v| v.clone())
    }

    /// Keeps the values on simplices of `sub`.
    pub fn restrict(&self, sub: &Subcomplex) -> Cochain {
        let mut out = Self::zero(&self.complex, self.degree, self.coeff);
        out.values = self
            .values
            .iter()
            .filter(|(i, _)| sub.contains(self.degree, **i))
            .map(|(i, v)| (*i, v.clone()))
            .collect();
        out
    }

    pub fn supported_in(&self, sub: &Subcomplex) -> bool {
        self.values.keys().all(|&i| sub.contains(self.degree, i))
    }

    /// The simplicial coboundary `d`.
    pub fn d(&self) -> Cochain {
        coboundary_d(self)
    }

    /// `d` computed inside `sub`; `self` must be supported in `sub`.
    pub fn d_within(&self, sub: &Subcomplex) -> Cochain {
        let mut out = Self::zero(&self.complex, self.degree + 1, self.coeff);
        for (i, v) in &self.values {
            for &(t, j) in self.complex.cofaces(self.degree, *i) {
                if sub.contains(self.degree + 1, t) {
                    out.add_at(t, &sign(j, v));
                }
            }
        }
        out
    }

    pub fn witness(&self, i: usize) -> Vec<String> {
        self.complex.simplex_labels(self.degree, i)
    }

    /// First nonzero simplex, as labels.
    pub fn first_witness(&self) -> Option<Vec<String>> {
        self.values.keys().next().map(|&i| self.witness(i))
    }
}

fn sign(j: usize, v: &Rational) -> Rational {
    if j % 2 == 0 {
        v.clone()
    } else {
        -v
    }
}

/// `(dc)(σ) = Σ_j (-1)^j c(σ with vertex j deleted)`.
pub fn coboundary_d(c: &Cochain) -> Cochain {
    let mut out = Cochain::zero(&c.complex, c.degree + 1, c.coeff);
    for (i, v) in &c.values {
        for &(t, j) in c.complex.cofaces(c.degree, *i) {
            out.add_at(t, &sign(j, v));
        }
    }
    out
}

/// Alexander–Whitney cup product over `Z` or `Q`.
pub fn cup(a: &Cochain, b: &Cochain) -> Result<Cochain> {
    if !Arc::ptr_eq(&a.complex, &b.complex) {
        return Err(Error::Mismatch("cochains live on different complexes".into()));
    }
    for c in [a.coeff, b.coeff] {
        if !c.has_ring() {
            return Err(Error::NoRingStructure(c.name()));
        }
    }
    let coeff = if a.coeff == Rationals || b.coeff == Rationals { Rationals } else { Integers };
    let (p, q) = (a.degree, b.degree);
    let k = &a.complex;
    let mut out = Cochain::zero(k, p + q, coeff);
    if a.is_zero() || b.is_zero() {
        return Ok(out);
    }
    for (ti, t) in k.simplices(p + q).iter().enumerate() {
        let fa = a.get_simplex(&t[..=p]);
        if fa.is_zero() {
            continue;
        }
        let fb = b.get_simplex(&t[p..]);
        if !fb.is_zero() {
            out.add_at(ti, &(fa * fb));
        }
    }
    Ok(out)
}

/// Integer weights on top simplices whose boundary vanishes.
#[derive(Clone)]
pub struct FundamentalCycle {
    complex: Arc<SimplicialComplex>,
    degree: usize,
    weights: BTreeMap<usize, BigInt>,
}

impl fmt::Debug for FundamentalCycle {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "FundamentalCycle(deg {}, {} simplices)", self.degree, self.weights.len())
    }
}

impl FundamentalCycle {
    pub fn new(complex: &Arc<SimplicialComplex>, degree: usize, weights: BTreeMap<usize, BigInt>) -> Result<Self> {
        let mut bd: BTreeMap<usize, BigInt> = BTreeMap::new();
        if degree > 0 {
            for (i, w) in &weights {
                for (j, &f) in complex.faces(degree, *i).iter().enumerate() {
                    let e = bd.entry(f).or_default();
                    if j % 2 == 0 {
                        *e += w;
                    } else {
                        *e -= w;
                    }
                }
            }
        }
        if let Some((&f, _)) = bd.iter().find(|(_, v)| !v.is_zero()) {
            return Err(Error::NotClosed {
                witness: complex.simplex_labels(degree - 1, f),
            });
        }
        let weights = weights.into_iter().filter(|(_, w)| !w.is_zero()).collect();
        Ok(FundamentalCycle {
            complex: complex.clone(),
            degree,
            weights,
        })
    }

    /// Orientation cycle of a connected closed orientable pseudomanifold of
    /// dimension `dim K`, normalised so that the first top simplex has `+1`.
    pub fn orientation(complex: &Arc<SimplicialComplex>) -> Result<Self> {
        let n = complex.dim();
        let top = complex.count(n);
        if n == 0 || top == 0 {
            return Err(Error::Mismatch("no top-dimensional simplices".into()));
        }
        let mut eps: Vec<i8> = vec![0; top];
        eps[0] = 1;
        let mut queue = VecDeque::from([0usize]);
        while let Some(s) = queue.pop_front() {
            for (j, &r) in complex.faces(n, s).iter().enumerate() {
                let co = complex.cofaces(n - 1, r);
                if co.len() != 2 {
                    return Err(Error::Mismatch(format!(
                        "ridge {:?} lies in {} top simplices",
                        complex.simplex_labels(n - 1, r),
                        co.len()
                    )));
                }
                let &(t, k) = co.iter().find(|&&(t, _)| t != s).unwrap();
                let want = if (j + k) % 2 == 0 { -eps[s] } else { eps[s] };
                if eps[t] == 0 {
                    eps[t] = want;
                    queue.push_back(t);
                } else if eps[t] != want {
                    return Err(Error::Mismatch("complex is not orientable".into()));
                }
            }
        }
        if eps.contains(&0) {
            return Err(Error::Mismatch("complex is not strongly connected".into()));
        }
        let weights = eps.iter().enumerate().map(|(i, &e)| (i, BigInt::from(e))).collect();
        Self::new(complex, n, weights)
    }

    pub fn degree(&self) -> usize {
        self.degree
    }

    pub fn weights(&self) -> &BTreeMap<usize, BigInt> {
        &self.weights
    }

    pub fn complex(&self) -> &Arc<SimplicialComplex> {
        &self.complex
    }
}

/// A basis of the integral `p`-cycles: rows of `U` past the rank in the
/// Smith form of `d : C^{p-1} → C^p`.
pub fn integral_cycles(k: &Arc<SimplicialComplex>, p: usize) -> Vec<FundamentalCycle> {
    let unit = |i: usize| BTreeMap::from([(i, BigInt::one())]);
    if p == 0 {
        return (0..k.count(0))
            .map(|i| FundamentalCycle::new(k, 0, unit(i)).expect("vertices are cycles"))
            .collect();
    }
    if p > k.dim() {
        return vec![];
    }
    let smith = k.coboundary_smith(p - 1);
    let u = smith.u.as_ref().expect("U is kept");
    (smith.rank()..k.count(p))
        .map(|r| {
            let w = u[r].iter().enumerate().filter(|(_, x)| !x.is_zero()).map(|(i, x)| (i, x.clone())).collect();
            FundamentalCycle::new(k, p, w).expect("left kernel rows are cycles")
        })
        .collect()
}

/// A closed rational cochain pairs integrally with every integral cycle.
pub fn has_integral_periods(c: &Cochain) -> Result<bool> {
    if !c.d().is_zero() {
        return Ok(false);
    }
    for z in integral_cycles(&c.complex, c.degree) {
        if !is_integer(&pair(c, &z)?) {
            return Ok(false);
        }
    }
    Ok(true)
}

/// `Σ_σ weight(σ) · c(σ)` in the coefficient group of `c`.
pub fn pair(c: &Cochain, z: &FundamentalCycle) -> Result<Rational> {
    if c.degree != z.degree {
        return Err(Error::DegreeMismatch {
            expected: z.degree,
            found: c.degree,
        });
    }
    if !Arc::ptr_eq(&c.complex, &z.complex) {
        return Err(Error::Mismatch("cochain and cycle live on different complexes".into()));
    }
    let s = z
        .weights
        .iter()
        .fold(Rational::zero(), |acc, (i, w)| acc + c.get(*i) * big(w.clone()));
    Ok(c.coeff.reduce(&s))
}

/// Solves `s_i z_i = (U x)_i` from a Smith form of the map; `None` when
/// inconsistent. Returns `V z`.
fn solve_with_smith(sm: &Smith, x: &[Rational], coeff: CoefficientGroup) -> Option<Vec<Rational>> {
    let u = sm.u.as_ref().expect("U recorded");
    let v = sm.v.as_ref().expect("V recorded");
    let c = linalg::mat_vec(u, x);
    let r = sm.rank();
    let mut z = vec![Rational::zero(); sm.cols];
    for i in 0..sm.rows {
        if i < r {
            z[i] = coeff.divide(&sm.diag[i], &c[i])?;
        } else if !coeff.is_zero(&c[i]) {
            return None;
        }
    }
    Some(linalg::mat_vec(v, &z).iter().map(|y| coeff.reduce(y)).collect())
}

/// Finds `y` with `dy = x` on the whole complex, or `None`.
///
/// `x` must have degree at least one.
pub fn solve_coboundary(x: &Cochain) -> Result<Option<Cochain>> {
    if x.degree == 0 {
        return Err(Error::DegreeMismatch { expected: 1, found: 0 });
    }
    let k = &x.complex;
    if x.is_zero() {
        return Ok(Some(Cochain::zero(k, x.degree - 1, x.coeff)));
    }
    let sol = if x.coeff == Rationals {
        let rows: Vec<SparseRow> = (0..k.count(x.degree))
            .map(|t| {
                let mut r: SparseRow = k
                    .faces(x.degree, t)
                    .iter()
                    .enumerate()
                    .map(|(j, &f)| (f, sign(j, &Rational::one())))
                    .collect();
                r.sort_by_key(|e| e.0);
                r
            })
            .collect();
        linalg::solve_sparse(k.count(x.degree - 1), &rows, &x.dense())
    } else {
        let sm = k.coboundary_smith(x.degree - 1);
        solve_with_smith(&sm, &x.dense(), x.coeff)
    };
    Ok(sol.map(|y| Cochain::from_dense(k, x.degree - 1, x.coeff, &y)))
}

/// Finds `y` supported in `sub` with `d y = x` computed inside `sub`.
pub fn solve_coboundary_within(x: &Cochain, sub: &Subcomplex) -> Result<Option<Cochain>> {
    if x.degree == 0 {
        return Err(Error::DegreeMismatch { expected: 1, found: 0 });
    }
    let k = &x.complex;
    let q = x.degree - 1;
    if x.is_zero() {
        return Ok(Some(Cochain::zero(k, q, x.coeff)));
    }
    let rows = sub.coboundary_rows(k, q);
    let ncols = sub.count(q);
    let rhs: Vec<Rational> = sub.simplices(q + 1).iter().map(|&t| x.get(t)).collect();
    let sol = if x.coeff == Rationals {
        let rows: Vec<SparseRow> = rows
            .iter()
            .map(|r| r.iter().map(|&(c, v)| (c, crate::exact::int(v))).collect())
            .collect();
        linalg::solve_sparse(ncols, &rows, &rhs)
    } else {
        let mut m = vec![vec![BigInt::zero(); ncols]; rows.len()];
        for (r, row) in rows.iter().enumerate() {
            for &(c, v) in row {
                m[r][c] = BigInt::from(v);
            }
        }
        let sm = linalg::smith(
            &m,
            rows.len(),
            ncols,
            Transforms {
                u: true,
                u_inv: false,
                v: true,
                v_inv: false,
            },
        );
        solve_with_smith(&sm, &rhs, x.coeff)
    };
    Ok(sol.map(|y| {
        let mut out = Cochain::zero(k, q, x.coeff);
        for (l, v) in y.iter().enumerate() {
            out.add_at(sub.simplices(q)[l], v);
        }
        out
    }))
}

/// `H^p(K; coeff)` for `coeff ∈ {Z, Q, Z_n}` with explicit generators.
///
/// Generators are listed free part first, then torsion in increasing order
/// of invariant factor; `coordinates` expresses a cocycle in that basis.
#[derive(Clone)]
pub struct Cohomology {
    pub degree: usize,
    pub coeff: CoefficientGroup,
    pub free_rank: usize,
    pub torsion: Vec<BigInt>,
    pub generators: Vec<Cochain>,
    complex: Arc<SimplicialComplex>,
    smith: Arc<Smith>,
    basis: Vec<(usize, BigInt)>,
    rel_u: linalg::IntMatrix,
    /// `(row of rel_u, order)` per generator, order `None` for free.
    slots: Vec<(usize, Option<BigInt>)>,
}

impl fmt::Debug for Cohomology {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "H^{}(;{}) = rank {}, torsion {:?}", self.degree, self.coeff, self.free_rank, self.torsion)
    }
}

impl Cohomology {
    /// Short description, e.g. `rank 1, torsion []`.
    pub fn summary(&self) -> String {
        format!(
            "rank {}, torsion [{}]",
            self.free_rank,
            self.torsion.iter().map(|t| t.to_string()).collect::<Vec<_>>().join(", ")
        )
    }

    /// Class coordinates of a cocycle; torsion entries are reduced.
    pub fn coordinates(&self, x: &Cochain) -> Result<Vec<Rational>> {
        if !Arc::ptr_eq(&x.complex, &self.complex) || x.degree != self.degree {
            return Err(Error::Mismatch("cocycle does not belong to this cohomology group".into()));
        }
        if x.coeff != self.coeff {
            return Err(Error::Mismatch(format!("coefficients {} vs {}", x.coeff, self.coeff)));
        }
        let dx = x.d();
        if let Some(w) = dx.first_witness() {
            return Err(Error::NotClosed { witness: w });
        }
        let vi = self.smith.v_inv.as_ref().unwrap();
        let z = linalg::mat_vec(vi, &x.dense());
        let w: Vec<Rational> = self
            .basis
            .iter()
            .map(|(i, s)| &z[*i] / big(s.clone()))
            .collect();
        let cls = linalg::mat_vec(&self.rel_u, &w);
        Ok(self
            .slots
            .iter()
            .map(|(row, ord)| match ord {
                Some(t) => big(cls[*row].to_integer().mod_floor(t)),
                None => cls[*row].clone(),
            })
            .collect())
    }

    pub fn is_trivial(&self, x: &Cochain) -> Result<bool> {
        Ok(self.coordinates(x)?.iter().all(Zero::is_zero))
    }
}

/// Cohomology by Smith normal form of the coboundary matrices.
pub fn cohomology(k: &Arc<SimplicialComplex>, p: usize, coeff: CoefficientGroup) -> Result<Cohomology> {
    if coeff == RationalsModOne {
        return Err(Error::Mismatch("Q/Z cohomology is handled through the exact sequence".into()));
    }
    let np = k.count(p);
    let sm = k.coboundary_smith(p);
    let r = sm.rank();
    let modulus = coeff.modulus();
    let mut basis: Vec<(usize, BigInt)> = Vec::new();
    if let Some(n) = &modulus {
        for i in 0..r {
            basis.push((i, n / sm.diag[i].gcd(n)));
        }
    }
    basis.extend((r..np).map(|i| (i, BigInt::one())));

    // relations: image of d_{p-1} (and n·e_i) in kernel-basis coordinates
    let vi = sm.v_inv.as_ref().unwrap();
    let mut rels: Vec<Vec<BigInt>> = Vec::new();
    if p > 0 {
        for s in 0..k.count(p - 1) {
            let mut col = vec![BigInt::zero(); np];
            for &(t, j) in k.cofaces(p - 1, s) {
                for (row, c) in col.iter_mut().enumerate() {
                    let e = &vi[row][t];
                    if !e.is_zero() {
                        if j % 2 == 0 {
                            *c += e;
                        } else {
                            *c -= e;
                        }
                    }
                }
            }
            rels.push(basis.iter().map(|(i, s)| &col[*i] / s).collect());
        }
    }
    if let Some(n) = &modulus {
        for (k_idx, (_, s)) in basis.iter().enumerate() {
            let mut col = vec![BigInt::zero(); basis.len()];
            col[k_idx] = n / s;
            rels.push(col);
        }
    }
    let dk = basis.len();
    let mut rmat = vec![vec![BigInt::zero(); rels.len()]; dk];
    for (c, col) in rels.iter().enumerate() {
        for (row, v) in col.iter().enumerate() {
            rmat[row][c] = v.clone();
        }
    }
    let rs = linalg::smith(
        &rmat,
        dk,
        rels.len(),
        Transforms {
            u: true,
            u_inv: true,
            v: false,
            v_inv: false,
        },
    );
    let s = rs.rank();
    let mut slots: Vec<(usize, Option<BigInt>)> = (s..dk).map(|j| (j, None)).collect();
    let mut torsion = Vec::new();
    if coeff != Rationals {
        for j in 0..s {
            if !rs.diag[j].is_one() {
                slots.push((j, Some(rs.diag[j].clone())));
                torsion.push(rs.diag[j].clone());
            }
        }
    }
    let free_rank = if modulus.is_some() { 0 } else { dk - s };
    let uinv = rs.u_inv.as_ref().unwrap();
    let v = sm.v.as_ref().unwrap();
    let generators = slots
        .iter()
        .map(|(j, _)| {
            let mut z = vec![Rational::zero(); np];
            for (kk, (i, sc)) in basis.iter().enumerate() {
                z[*i] = big(&uinv[kk][*j] * sc);
            }
            let y = linalg::mat_vec(v, &z);
            Cochain::from_dense(k, p, coeff, &y)
        })
        .collect();
    Ok(Cohomology {
        degree: p,
        coeff,
        free_rank,
        torsion,
        generators,
        complex: k.clone(),
        smith: sm,
        basis,
        rel_u: rs.u.unwrap(),
        slots,
    })
}

/// Whether `a - b` is a coboundary on the whole complex.
pub fn cochain_classes_equal(a: &Cochain, b: &Cochain) -> Result<bool> {
    a.same_space(b)?;
    for c in [a, b] {
        if let Some(w) = c.d().first_witness() {
            return Err(Error::NotClosed { witness: w });
        }
    }
    let diff = a.sub(b)?;
    if diff.degree == 0 {
        return Ok(diff.is_zero());
    }
    Ok(solve_coboundary(&diff)?.is_some())
}
