//! Covers, Čech cochains valued in group elements or in simplicial cochains
//! on intersections, the total complex, and exactness solving.

use std::collections::{BTreeMap, HashMap, HashSet};
use std::fmt;
use std::sync::{Arc, OnceLock};

use itertools::Itertools;
use num_traits::{One, Zero};

use crate::cochain::{
    cochain_classes_equal, cohomology, solve_coboundary, solve_coboundary_within, Cochain, CoefficientGroup,
    Integers, Rationals, RationalsModOne,
};
use crate::error::{Error, Result};
use crate::exact::{big, fract, Rational};
use crate::simplicial::{SimplicialComplex, Subcomplex};

/// An ordered family of named subcomplexes covering a base complex.
pub struct Cover {
    base: Arc<SimplicialComplex>,
    names: Vec<String>,
    members: Vec<Subcomplex>,
    nerve: Arc<SimplicialComplex>,
    intersections: Vec<Vec<Subcomplex>>,
    memberships: Vec<Vec<Vec<u32>>>,
    good: OnceLock<std::result::Result<(), String>>,
}

impl fmt::Debug for Cover {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Cover({} members, nerve {:?})", self.names.len(), self.nerve.f_vector())
    }
}

impl Cover {
    /// Validates the members and computes the nerve and all intersections.
    pub fn new(base: Arc<SimplicialComplex>, names: Vec<String>, members: Vec<Subcomplex>) -> Result<Arc<Cover>> {
        if names.len() != members.len() {
            return Err(Error::Mismatch("one name per cover member".into()));
        }
        if names.iter().duplicates().next().is_some() {
            return Err(Error::Mismatch("cover member names repeat".into()));
        }
        for (n, m) in names.iter().zip(&members) {
            if m.is_empty() {
                return Err(Error::NotSubcomplex {
                    member: n.clone(),
                    reason: "member is empty".into(),
                });
            }
            if (0..=m.dim().unwrap_or(0)).any(|p| m.simplices(p).iter().any(|&i| i >= base.count(p))) || !m.is_closed_in(&base) {
                return Err(Error::NotSubcomplex {
                    member: n.clone(),
                    reason: "not closed under faces".into(),
                });
            }
        }
        let mut memberships = Vec::with_capacity(base.dim() + 1);
        for q in 0..=base.dim() {
            let mut level = Vec::with_capacity(base.count(q));
            for i in 0..base.count(q) {
                let s: Vec<u32> = (0..members.len() as u32)
                    .filter(|&m| members[m as usize].contains(q, i))
                    .collect();
                if s.is_empty() {
                    return Err(Error::IncompleteCover {
                        simplex: base.simplex_labels(q, i),
                    });
                }
                level.push(s);
            }
            memberships.push(level);
        }
        let facets: Vec<Vec<usize>> = memberships[0]
            .iter()
            .map(|s| s.iter().map(|&m| m as usize).collect())
            .unique()
            .collect();
        let nerve = Arc::new(SimplicialComplex::new(names.clone(), &facets)?);
        let mut sets: HashMap<Vec<u32>, Vec<HashSet<usize>>> = HashMap::new();
        for (q, level) in memberships.iter().enumerate() {
            for (i, s) in level.iter().enumerate() {
                for k in 1..=s.len() {
                    for sub in s.iter().copied().combinations(k) {
                        let e = sets.entry(sub).or_insert_with(|| vec![HashSet::new(); base.dim() + 1]);
                        e[q].insert(i);
                    }
                }
            }
        }
        let intersections = (0..=nerve.dim())
            .map(|p| {
                nerve
                    .simplices(p)
                    .iter()
                    .map(|s| Subcomplex::from_sets(sets.remove(s).expect("nerve simplex has an intersection")))
                    .collect()
            })
            .collect();
        Ok(Arc::new(Cover {
            base,
            names,
            members,
            nerve,
            intersections,
            memberships,
            good: OnceLock::new(),
        }))
    }

    /// The one-member cover.
    pub fn trivial(base: Arc<SimplicialComplex>) -> Result<Arc<Cover>> {
        let whole = Subcomplex::whole(&base);
        Cover::new(base, vec!["U".into()], vec![whole])
    }

    pub fn base(&self) -> &Arc<SimplicialComplex> {
        &self.base
    }

    pub fn nerve(&self) -> &Arc<SimplicialComplex> {
        &self.nerve
    }

    pub fn names(&self) -> &[String] {
        &self.names
    }

    pub fn members(&self) -> &[Subcomplex] {
        &self.members
    }

    pub fn len(&self) -> usize {
        self.names.len()
    }

    pub fn is_empty(&self) -> bool {
        self.names.is_empty()
    }

    /// `U_I` for the nerve simplex `(p, i)`.
    pub fn intersection(&self, p: usize, i: usize) -> &Subcomplex {
        &self.intersections[p][i]
    }

    /// Members containing the base simplex `(q, i)`.
    pub fn members_containing(&self, q: usize, i: usize) -> &[u32] {
        &self.memberships[q][i]
    }

    pub fn tuple_labels(&self, p: usize, i: usize) -> Vec<String> {
        self.nerve.simplex_labels(p, i)
    }

    /// Every intersection has the integral cohomology of a point.
    pub fn check_good(&self) -> Result<()> {
        let res = self.good.get_or_init(|| {
            for p in 0..=self.nerve.dim() {
                for (i, u) in self.intersections[p].iter().enumerate() {
                    if !u.is_acyclic(&self.base) {
                        return Err(format!("intersection {:?} is not acyclic", self.tuple_labels(p, i)));
                    }
                }
            }
            Ok(())
        });
        res.clone().map_err(Error::NotGood)
    }

    pub fn is_good(&self) -> bool {
        self.check_good().is_ok()
    }
}

/// The hexagon covered by the arcs `{0,1,2}`, `{2,3,4}`, `{4,5,0}`.
pub fn three_arc_cover() -> Arc<Cover> {
    let base = Arc::new(crate::standard::hexagon());
    let arc = |a: u32, b: u32, c: u32| {
        let e1 = base.index_of(&[a.min(b), a.max(b)]).unwrap();
        let e2 = base.index_of(&[b.min(c), b.max(c)]).unwrap();
        Subcomplex::closure(&base, &[(1, e1), (1, e2)])
    };
    let members = vec![arc(0, 1, 2), arc(2, 3, 4), arc(4, 5, 0)];
    Cover::new(base.clone(), vec!["U0".into(), "U1".into(), "U2".into()], members).expect("three arcs cover the hexagon")
}

/// Nerve of an explicit cover.
pub fn cech_nerve(base: Arc<SimplicialComplex>, names: Vec<String>, members: Vec<Subcomplex>) -> Result<Arc<SimplicialComplex>> {
    Ok(Cover::new(base, names, members)?.nerve.clone())
}

/// Cover of `sd(K)` by the dual blocks of the vertices of `K`: `U_v` holds
/// the chains of faces that all contain `v`. The nerve is `K` itself and
/// every intersection is a cone, so the cover is good.
pub fn vertex_star_cover(k: &SimplicialComplex) -> Result<Arc<Cover>> {
    let (sd, map) = k.barycentric_subdivision();
    let mut sets: Vec<Vec<HashSet<usize>>> = vec![vec![HashSet::new(); sd.dim() + 1]; k.num_vertices()];
    for q in 0..=sd.dim() {
        for (i, chain) in sd.simplices(q).iter().enumerate() {
            let (p, j) = map[chain[0] as usize];
            for &v in k.simplex(p, j) {
                sets[v as usize][q].insert(i);
            }
        }
    }
    let members = sets.into_iter().map(Subcomplex::from_sets).collect();
    Cover::new(Arc::new(sd), k.labels().to_vec(), members)
}

/// Values of a Čech cochain.
#[derive(Clone, PartialEq)]
pub enum CechValues {
    /// A cochain on the nerve.
    Element(Cochain),
    /// Base cochains of simplicial degree `q`, one per nerve simplex,
    /// supported in the corresponding intersection.
    Form { q: usize, values: BTreeMap<usize, Cochain> },
}

/// Inner value type of a Čech cochain.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Inner {
    Element,
    Form(usize),
}

#[derive(Clone)]
pub struct CechCochain {
    cover: Arc<Cover>,
    degree: usize,
    coeff: CoefficientGroup,
    values: CechValues,
}

impl PartialEq for CechCochain {
    fn eq(&self, other: &Self) -> bool {
        Arc::ptr_eq(&self.cover, &other.cover)
            && self.degree == other.degree
            && self.coeff == other.coeff
            && self.values == other.values
    }
}

impl fmt::Debug for CechCochain {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match &self.values {
            CechValues::Element(c) => write!(f, "Cech({}; {:?})", self.degree, c),
            CechValues::Form { q, values } => {
                write!(f, "Cech({}, form {}; ", self.degree, q)?;
                for (i, c) in values {
                    write!(f, "{}: {:?}; ", self.cover.tuple_labels(self.degree, *i).join(""), c)?;
                }
                write!(f, ")")
            }
        }
    }
}

pub(crate) fn sign(j: usize) -> Rational {
    if j % 2 == 0 {
        Rational::one()
    } else {
        -Rational::one()
    }
}

impl CechCochain {
    pub fn zero(cover: &Arc<Cover>, degree: usize, inner: Inner, coeff: CoefficientGroup) -> Self {
        let values = match inner {
            Inner::Element => CechValues::Element(Cochain::zero(&cover.nerve, degree, coeff)),
            Inner::Form(q) => CechValues::Form {
                q,
                values: BTreeMap::new(),
            },
        };
        CechCochain {
            cover: cover.clone(),
            degree,
            coeff,
            values,
        }
    }

    /// Element-valued cochain from a nerve cochain.
    pub fn from_nerve_cochain(cover: &Arc<Cover>, c: Cochain) -> Result<Self> {
        if !Arc::ptr_eq(c.complex(), &cover.nerve) {
            return Err(Error::Mismatch("cochain does not live on the nerve".into()));
        }
        Ok(CechCochain {
            cover: cover.clone(),
            degree: c.degree(),
            coeff: c.coeff(),
            values: CechValues::Element(c),
        })
    }

    /// Element-valued cochain from `(tuple, value)` pairs, tuples given as
    /// member indices.
    pub fn elements(cover: &Arc<Cover>, degree: usize, coeff: CoefficientGroup, vals: &[(Vec<u32>, Rational)]) -> Result<Self> {
        let c = Cochain::from_simplices(&cover.nerve, degree, coeff, vals)?;
        Self::from_nerve_cochain(cover, c)
    }

    /// Form-valued cochain; each value must be supported in its intersection.
    pub fn forms(cover: &Arc<Cover>, degree: usize, q: usize, coeff: CoefficientGroup, vals: BTreeMap<usize, Cochain>) -> Result<Self> {
        let mut out = Self::zero(cover, degree, Inner::Form(q), coeff);
        for (i, c) in vals {
            out.set_form(i, c)?;
        }
        Ok(out)
    }

    pub fn cover(&self) -> &Arc<Cover> {
        &self.cover
    }

    pub fn degree(&self) -> usize {
        self.degree
    }

    pub fn coeff(&self) -> CoefficientGroup {
        self.coeff
    }

    pub fn inner(&self) -> Inner {
        match &self.values {
            CechValues::Element(_) => Inner::Element,
            CechValues::Form { q, .. } => Inner::Form(*q),
        }
    }

    pub fn values(&self) -> &CechValues {
        &self.values
    }

    /// The underlying nerve cochain of an element-valued cochain.
    pub fn as_nerve_cochain(&self) -> Option<&Cochain> {
        match &self.values {
            CechValues::Element(c) => Some(c),
            _ => None,
        }
    }

    pub fn form_values(&self) -> Option<&BTreeMap<usize, Cochain>> {
        match &self.values {
            CechValues::Form { values, .. } => Some(values),
            _ => None,
        }
    }

    fn form_degree(&self) -> Result<usize> {
        match self.values {
            CechValues::Form { q, .. } => Ok(q),
            _ => Err(Error::Mismatch("expected form-valued Čech cochain".into())),
        }
    }

    /// Element value at nerve simplex `i`.
    pub fn element(&self, i: usize) -> Rational {
        match &self.values {
            CechValues::Element(c) => c.get(i),
            _ => Rational::zero(),
        }
    }

    /// Form value at nerve simplex `i` (zero when absent).
    pub fn form(&self, i: usize) -> Cochain {
        match &self.values {
            CechValues::Form { q, values } => values
                .get(&i)
                .cloned()
                .unwrap_or_else(|| Cochain::zero(&self.cover.base, *q, self.coeff)),
            _ => panic!("form() on an element-valued Čech cochain"),
        }
    }

    pub fn set_form(&mut self, i: usize, c: Cochain) -> Result<()> {
        let deg = self.degree;
        let cover = self.cover.clone();
        let coeff = self.coeff;
        let CechValues::Form { q, values } = &mut self.values else {
            return Err(Error::Mismatch("expected form-valued Čech cochain".into()));
        };
        if i >= cover.nerve.count(deg) {
            return Err(Error::Mismatch(format!("no nerve {deg}-simplex with index {i}")));
        }
        if c.degree() != *q || c.coeff() != coeff || !Arc::ptr_eq(c.complex(), &cover.base) {
            return Err(Error::Mismatch("form value of the wrong shape".into()));
        }
        if !c.supported_in(cover.intersection(deg, i)) {
            return Err(Error::BadSupport(format!(
                "value at {:?} leaves its intersection",
                cover.tuple_labels(deg, i)
            )));
        }
        if c.is_zero() {
            values.remove(&i);
        } else {
            values.insert(i, c);
        }
        Ok(())
    }

    fn add_form(&mut self, i: usize, c: &Cochain) {
        if c.is_zero() {
            return;
        }
        if let CechValues::Form { values, .. } = &mut self.values {
            let cur = values.remove(&i);
            let nv = match cur {
                Some(cur) => cur.add(c).expect("same space"),
                None => c.clone(),
            };
            if !nv.is_zero() {
                values.insert(i, nv);
            }
        }
    }

    pub fn is_zero(&self) -> bool {
        match &self.values {
            CechValues::Element(c) => c.is_zero(),
            CechValues::Form { values, .. } => values.is_empty(),
        }
    }

    fn check_same(&self, other: &CechCochain) -> Result<()> {
        if !Arc::ptr_eq(&self.cover, &other.cover) {
            return Err(Error::Mismatch("different covers".into()));
        }
        if self.degree != other.degree {
            return Err(Error::DegreeMismatch {
                expected: self.degree,
                found: other.degree,
            });
        }
        if self.inner() != other.inner() || self.coeff != other.coeff {
            return Err(Error::Mismatch("different value types".into()));
        }
        Ok(())
    }

    pub fn add(&self, other: &CechCochain) -> Result<CechCochain> {
        self.check_same(other)?;
        let mut out = self.clone();
        match (&mut out.values, &other.values) {
            (CechValues::Element(a), CechValues::Element(b)) => *a = a.add(b)?,
            (CechValues::Form { .. }, CechValues::Form { values, .. }) => {
                for (i, c) in values {
                    out.add_form(*i, c);
                }
            }
            _ => unreachable!(),
        }
        Ok(out)
    }

    pub fn sub(&self, other: &CechCochain) -> Result<CechCochain> {
        self.add(&other.neg())
    }

    pub fn neg(&self) -> CechCochain {
        self.scale(&-Rational::one())
    }

    pub fn scale(&self, k: &Rational) -> CechCochain {
        let mut out = self.clone();
        match &mut out.values {
            CechValues::Element(c) => *c = c.scale(k),
            CechValues::Form { values, .. } => {
                *values = values
                    .iter()
                    .map(|(i, c)| (*i, c.scale(k)))
                    .filter(|(_, c)| !c.is_zero())
                    .collect()
            }
        }
        out
    }

    /// Same values regarded in another coefficient group.
    pub fn with_coeff(&self, coeff: CoefficientGroup) -> CechCochain {
        let mut out = self.clone();
        out.coeff = coeff;
        match &mut out.values {
            CechValues::Element(c) => *c = c.with_coeff(coeff),
            CechValues::Form { values, .. } => {
                *values = values
                    .iter()
                    .map(|(i, c)| (*i, c.with_coeff(coeff)))
                    .filter(|(_, c)| !c.is_zero())
                    .collect()
            }
        }
        out
    }

    /// Čech coboundary `δ`.
    pub fn delta(&self) -> CechCochain {
        cech_delta(self)
    }

    /// Simplicial `d` applied inside each intersection.
    pub fn d(&self) -> Result<CechCochain> {
        let q = self.form_degree()?;
        let mut out = Self::zero(&self.cover, self.degree, Inner::Form(q + 1), self.coeff);
        if let CechValues::Form { values, .. } = &self.values {
            for (i, c) in values {
                let dc = c.d_within(self.cover.intersection(self.degree, *i));
                out.add_form(*i, &dc);
            }
        }
        Ok(out)
    }

    /// Witness labels for a nonzero entry (tuple, and simplex for forms).
    pub fn first_witness(&self) -> Option<Vec<String>> {
        match &self.values {
            CechValues::Element(c) => c.first_witness(),
            CechValues::Form { values, .. } => values.iter().next().map(|(i, c)| {
                let mut w = self.cover.tuple_labels(self.degree, *i);
                w.push("@".into());
                w.extend(c.first_witness().unwrap_or_default());
                w
            }),
        }
    }

    /// Contracting homotopy for form-valued cochains:
    /// `(K y)_I(σ) = y_{γ(σ) I}(σ)` with `γ(σ)` the first member containing `σ`.
    /// For Čech degree at least one, `δK + Kδ = id`.
    pub fn homotopy(&self) -> Result<CechCochain> {
        self.homotopy_with(HomotopyWeights::First)
    }

    /// Contracting homotopy averaging over members with the given weights.
    pub fn homotopy_with(&self, weights: HomotopyWeights) -> Result<CechCochain> {
        let q = self.form_degree()?;
        if self.degree == 0 {
            return Err(Error::DegreeMismatch { expected: 1, found: 0 });
        }
        let cover = &self.cover;
        let nerve = &cover.nerve;
        let mut acc: BTreeMap<usize, BTreeMap<usize, Rational>> = BTreeMap::new();
        if let CechValues::Form { values, .. } = &self.values {
            for (j, c) in values {
                let tuple = nerve.simplex(self.degree, *j);
                for (s, v) in c.values() {
                    let members = &cover.memberships[q][*s];
                    let share = match weights {
                        HomotopyWeights::First => None,
                        HomotopyWeights::Uniform => Some(Rational::from_integer(members.len().into())),
                    };
                    for (pos, m) in tuple.iter().enumerate() {
                        let w = match &share {
                            None if *m != members[0] => continue,
                            None => v.clone(),
                            Some(n) => v / n,
                        };
                        let mut face = tuple.clone();
                        face.remove(pos);
                        let fi = nerve.index_of(&face).expect("faces of nerve simplices");
                        let e = acc.entry(fi).or_default().entry(*s).or_insert_with(Rational::zero);
                        *e += sign(pos) * w;
                    }
                }
            }
        }
        let mut out = Self::zero(cover, self.degree - 1, Inner::Form(q), self.coeff);
        for (i, vals) in acc {
            let c = Cochain::from_values(&cover.base, q, self.coeff, vals)?;
            out.add_form(i, &c);
        }
        Ok(out)
    }

    /// Form value on an ordered member tuple, extended alternatingly.
    pub fn form_at(&self, tuple: &[u32]) -> Cochain {
        let q = self.form_degree().expect("form-valued cochain");
        let zero = || Cochain::zero(&self.cover.base, q, self.coeff);
        let mut sorted = tuple.to_vec();
        sorted.sort();
        if sorted.windows(2).any(|w| w[0] == w[1]) {
            return zero();
        }
        let Some(i) = self.cover.nerve.index_of(&sorted) else {
            return zero();
        };
        let inversions = tuple.iter().tuple_combinations().filter(|(a, b)| a > b).count();
        self.form(i).scale(&sign(inversions))
    }
}

/// Weights of the contracting homotopy.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum HomotopyWeights {
    /// All weight on the first member containing the simplex.
    First,
    /// Equal weight on every member containing the simplex.
    Uniform,
}

/// `(δc)_{i0…ip+1} = Σ_j (-1)^j c_{i0…îj…ip+1}`, restricted to the smaller
/// intersection for form values.
pub fn cech_delta(c: &CechCochain) -> CechCochain {
    match &c.values {
        CechValues::Element(x) => CechCochain {
            cover: c.cover.clone(),
            degree: c.degree + 1,
            coeff: c.coeff,
            values: CechValues::Element(x.d()),
        },
        CechValues::Form { q, values } => {
            let mut out = CechCochain::zero(&c.cover, c.degree + 1, Inner::Form(*q), c.coeff);
            for (i, v) in values {
                for &(t, j) in c.cover.nerve.cofaces(c.degree, *i) {
                    let r = v.restrict(c.cover.intersection(c.degree + 1, t)).scale(&sign(j));
                    out.add_form(t, &r);
                }
            }
            out
        }
    }
}

/// Shape of a total complex: form rows `0..=top` in a coefficient group,
/// optionally preceded by a row of constants `q = -1` mapped into `Ω⁰`.
#[derive(Clone)]
pub struct TotalShape {
    pub cover: Arc<Cover>,
    pub coeff: CoefficientGroup,
    pub constants: Option<CoefficientGroup>,
    pub top: Option<usize>,
}

impl fmt::Debug for TotalShape {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "TotalShape({}, constants {:?}, top {:?})", self.coeff, self.constants, self.top)
    }
}

impl TotalShape {
    /// Čech × simplicial with form rows in `coeff`, untruncated.
    pub fn plain(cover: &Arc<Cover>, coeff: CoefficientGroup) -> Self {
        TotalShape {
            cover: cover.clone(),
            coeff,
            constants: None,
            top: None,
        }
    }

    /// Deligne shape `Z → Ω⁰ → … → Ω^top` over `Q`.
    pub fn deligne(cover: &Arc<Cover>, top: usize) -> Self {
        TotalShape {
            cover: cover.clone(),
            coeff: Rationals,
            constants: Some(Integers),
            top: Some(top),
        }
    }

    fn has_row(&self, q: usize) -> bool {
        self.top.is_none_or(|t| q <= t)
    }
}

/// A total cochain of degree `n`: pieces `(n-q, q)` plus an optional
/// constant piece of Čech degree `n+1`.
#[derive(Clone)]
pub struct TotalCochain {
    shape: TotalShape,
    degree: usize,
    constant: Option<Cochain>,
    pieces: BTreeMap<usize, CechCochain>,
}

impl PartialEq for TotalCochain {
    fn eq(&self, other: &Self) -> bool {
        self.degree == other.degree && self.constant == other.constant && self.pieces == other.pieces
    }
}

impl fmt::Debug for TotalCochain {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("TotalCochain")
            .field("degree", &self.degree)
            .field("constant", &self.constant)
            .field("pieces", &self.pieces)
            .finish()
    }
}

impl TotalCochain {
    pub fn zero(shape: &TotalShape, degree: usize) -> Self {
        TotalCochain {
            shape: shape.clone(),
            degree,
            constant: None,
            pieces: BTreeMap::new(),
        }
    }

    pub fn shape(&self) -> &TotalShape {
        &self.shape
    }

    pub fn degree(&self) -> usize {
        self.degree
    }

    /// Adds a form piece of bidegree `(degree - q, q)`.
    pub fn with_piece(mut self, piece: CechCochain) -> Result<Self> {
        let q = piece.form_degree()?;
        if piece.degree + q != self.degree || piece.coeff != self.shape.coeff || !self.shape.has_row(q) {
            return Err(Error::Mismatch(format!(
                "piece ({}, {q}) does not fit a degree-{} total cochain",
                piece.degree, self.degree
            )));
        }
        if !Arc::ptr_eq(&piece.cover, &self.shape.cover) {
            return Err(Error::Mismatch("different covers".into()));
        }
        let cur = self.pieces.remove(&q);
        let nv = match cur {
            Some(c) => c.add(&piece)?,
            None => piece,
        };
        if !nv.is_zero() {
            self.pieces.insert(q, nv);
        }
        Ok(self)
    }

    /// Adds a constant piece (nerve cochain of degree `degree + 1`).
    pub fn with_constant(mut self, c: Cochain) -> Result<Self> {
        let Some(cc) = self.shape.constants else {
            return Err(Error::Mismatch("shape has no constant row".into()));
        };
        if c.degree() != self.degree + 1 || c.coeff() != cc || !Arc::ptr_eq(c.complex(), &self.shape.cover.nerve) {
            return Err(Error::Mismatch("constant piece of the wrong shape".into()));
        }
        let nv = match self.constant.take() {
            Some(cur) => cur.add(&c)?,
            None => c,
        };
        self.constant = (!nv.is_zero()).then_some(nv);
        Ok(self)
    }

    pub fn piece(&self, q: usize) -> CechCochain {
        self.pieces.get(&q).cloned().unwrap_or_else(|| {
            CechCochain::zero(&self.shape.cover, self.degree - q, Inner::Form(q), self.shape.coeff)
        })
    }

    pub fn pieces(&self) -> &BTreeMap<usize, CechCochain> {
        &self.pieces
    }

    pub fn constant(&self) -> Option<&Cochain> {
        self.constant.as_ref()
    }

    pub fn is_zero(&self) -> bool {
        self.constant.is_none() && self.pieces.is_empty()
    }

    pub fn add(&self, other: &TotalCochain) -> Result<TotalCochain> {
        if self.degree != other.degree {
            return Err(Error::DegreeMismatch {
                expected: self.degree,
                found: other.degree,
            });
        }
        let mut out = self.clone();
        if let Some(c) = &other.constant {
            out = out.with_constant(c.clone())?;
        }
        for p in other.pieces.values() {
            out = out.with_piece(p.clone())?;
        }
        Ok(out)
    }

    pub fn neg(&self) -> TotalCochain {
        TotalCochain {
            shape: self.shape.clone(),
            degree: self.degree,
            constant: self.constant.as_ref().map(Cochain::neg),
            pieces: self.pieces.iter().map(|(q, c)| (*q, c.neg())).collect(),
        }
    }

    pub fn sub(&self, other: &TotalCochain) -> Result<TotalCochain> {
        self.add(&other.neg())
    }

    /// `D = δ + (-1)^p d`, with `(-1)^p ι` out of the constant row.
    pub fn differential(&self) -> TotalCochain {
        total_differential(self)
    }

    pub fn first_witness(&self) -> Option<Vec<String>> {
        if let Some(c) = &self.constant {
            return c.first_witness();
        }
        self.pieces.values().find_map(|p| p.first_witness())
    }
}

/// Constants on the nerve as constant 0-cochains on each intersection.
pub fn iota(cover: &Arc<Cover>, c: &Cochain, coeff: CoefficientGroup) -> CechCochain {
    let mut out = CechCochain::zero(cover, c.degree(), Inner::Form(0), coeff);
    for (i, v) in c.values() {
        let u = cover.intersection(c.degree(), *i);
        let vals = u.simplices(0).iter().map(|&s| (s, v.clone()));
        let f = Cochain::from_values(&cover.base, 0, coeff, vals).expect("constant in the form group");
        out.add_form(*i, &f);
    }
    out
}

pub fn total_differential(x: &TotalCochain) -> TotalCochain {
    let shape = &x.shape;
    let mut out = TotalCochain::zero(shape, x.degree + 1);
    if let Some(c) = &x.constant {
        let p = x.degree + 1;
        out = out.with_constant(c.d()).expect("shape");
        let i = iota(&shape.cover, c, shape.coeff).scale(&sign(p));
        out = out.with_piece(i).expect("shape");
    }
    for (q, piece) in &x.pieces {
        let p = piece.degree;
        out = out.with_piece(piece.delta()).expect("shape");
        if shape.has_row(q + 1) {
            out = out.with_piece(piece.d().expect("form").scale(&sign(p))).expect("shape");
        }
    }
    out
}

/// Where a certificate lives.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Location {
    Nerve,
    Base,
    Intersection(Vec<String>),
}

/// A cocycle whose class obstructs solving.
#[derive(Debug, Clone)]
pub struct Certificate {
    pub location: Location,
    pub cocycle: Cochain,
    /// Class coordinates when the relevant cohomology group was computed.
    pub class: Vec<Rational>,
    pub note: String,
}

#[derive(Debug, Clone)]
pub enum Solution<T> {
    Solved(T),
    NotExact(Box<Certificate>),
}

impl<T> Solution<T> {
    pub fn solved(self) -> Option<T> {
        match self {
            Solution::Solved(t) => Some(t),
            Solution::NotExact(_) => None,
        }
    }

    pub fn is_solved(&self) -> bool {
        matches!(self, Solution::Solved(_))
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum SolveMode {
    Cech,
    Simplicial,
    Total,
}

fn nerve_certificate(c: &Cochain, note: &str) -> Certificate {
    let class = match c.coeff() {
        RationalsModOne => vec![],
        coeff => cohomology(c.complex(), c.degree(), coeff)
            .and_then(|h| h.coordinates(c))
            .unwrap_or_default(),
    };
    Certificate {
        location: Location::Nerve,
        cocycle: c.clone(),
        class,
        note: note.into(),
    }
}

/// Solves `δ y = x` (Čech), `d y = x` (simplicial, per intersection), or
/// `D y = x` in the untruncated total complex of forms over `x`'s group.
pub fn solve_delta(x: &CechCochain, mode: SolveMode) -> Result<Solution<CechSolution>> {
    Ok(match mode {
        SolveMode::Cech => match solve_cech(x)? {
            Solution::Solved(y) => Solution::Solved(CechSolution::Cech(y)),
            Solution::NotExact(c) => Solution::NotExact(c),
        },
        SolveMode::Simplicial => match solve_simplicial(x)? {
            Solution::Solved(y) => Solution::Solved(CechSolution::Cech(y)),
            Solution::NotExact(c) => Solution::NotExact(c),
        },
        SolveMode::Total => {
            let shape = TotalShape::plain(&x.cover, x.coeff);
            let t = TotalCochain::zero(&shape, x.degree + x.form_degree()?).with_piece(x.clone())?;
            match solve_total(&t)? {
                Solution::Solved(y) => Solution::Solved(CechSolution::Total(y)),
                Solution::NotExact(c) => Solution::NotExact(c),
            }
        }
    })
}

#[derive(Debug, Clone)]
pub enum CechSolution {
    Cech(CechCochain),
    Total(TotalCochain),
}

/// `δ y = x` in the Čech direction.
pub fn solve_cech(x: &CechCochain) -> Result<Solution<CechCochain>> {
    let dx = x.delta();
    if let Some(w) = dx.first_witness() {
        return Err(Error::NotClosed { witness: w });
    }
    if x.degree == 0 {
        return Err(Error::DegreeMismatch { expected: 1, found: 0 });
    }
    let y = match &x.values {
        CechValues::Element(c) => match solve_coboundary(c)? {
            Some(y) => CechCochain::from_nerve_cochain(&x.cover, y)?,
            None => return Ok(Solution::NotExact(Box::new(nerve_certificate(c, "Čech class is nonzero")))),
        },
        CechValues::Form { .. } => x.homotopy()?,
    };
    debug_assert!(y.delta() == *x);
    if y.delta() != *x {
        return Err(Error::Invariant {
            kind: "solve_delta".into(),
            witness: "δy ≠ x after solving".into(),
        });
    }
    Ok(Solution::Solved(y))
}

/// `d y = x` inside every intersection.
pub fn solve_simplicial(x: &CechCochain) -> Result<Solution<CechCochain>> {
    let q = x.form_degree()?;
    let dx = x.d()?;
    if let Some(w) = dx.first_witness() {
        return Err(Error::NotClosed { witness: w });
    }
    if q == 0 {
        return Err(Error::DegreeMismatch { expected: 1, found: 0 });
    }
    let mut out = CechCochain::zero(&x.cover, x.degree, Inner::Form(q - 1), x.coeff);
    if let CechValues::Form { values, .. } = &x.values {
        for (i, c) in values {
            let u = x.cover.intersection(x.degree, *i);
            match solve_coboundary_within(c, u)? {
                Some(y) => out.add_form(*i, &y),
                None => {
                    return Ok(Solution::NotExact(Box::new(Certificate {
                        location: Location::Intersection(x.cover.tuple_labels(x.degree, *i)),
                        cocycle: c.clone(),
                        class: vec![],
                        note: "not exact on the intersection".into(),
                    })))
                }
            }
        }
    }
    Ok(Solution::Solved(out))
}

/// Glues a Čech 0-cochain of forms that agrees on overlaps.
pub fn glue(x: &CechCochain) -> Result<Cochain> {
    let q = x.form_degree()?;
    if x.degree != 0 {
        return Err(Error::DegreeMismatch {
            expected: 0,
            found: x.degree,
        });
    }
    if let Some(w) = x.delta().first_witness() {
        return Err(Error::NotClosed { witness: w });
    }
    let mut out = Cochain::zero(&x.cover.base, q, x.coeff);
    for i in 0..x.cover.base.count(q) {
        let m = x.cover.memberships[q][i][0];
        let mi = x.cover.nerve.index_of(&[m]).unwrap();
        out.set(i, &x.form(mi).get(i));
    }
    Ok(out)
}

/// Restriction of a global cochain to every member.
pub fn localize(cover: &Arc<Cover>, c: &Cochain) -> CechCochain {
    let mut out = CechCochain::zero(cover, 0, Inner::Form(c.degree()), c.coeff());
    for i in 0..cover.len() {
        out.add_form(i, &c.restrict(&cover.members[i]));
    }
    out
}

/// Reads constants off 0-form cochains that are a single constant on each
/// intersection.
pub fn constants_of(x: &CechCochain) -> Result<Cochain> {
    let cover = &x.cover;
    let mut vals = Vec::new();
    for i in 0..cover.nerve.count(x.degree) {
        let f = x.form(i);
        let u = cover.intersection(x.degree, i);
        let vs: Vec<Rational> = u.simplices(0).iter().map(|&s| f.get(s)).unique().collect();
        if vs.len() != 1 || !f.d_within(u).is_zero() {
            return Err(Error::NotGood(format!(
                "0-form on {:?} is not a single constant",
                cover.tuple_labels(x.degree, i)
            )));
        }
        vals.push((i, vs[0].clone()));
    }
    Cochain::from_values(&cover.nerve, x.degree, x.coeff, vals)
}

/// The chain of local primitives from a closed global `n`-form down to a
/// Čech `n`-cocycle of constants: `ω_0 = ω|U_i`, `dβ_p = ω_p`, `ω_{p+1} = δβ_p`.
#[derive(Debug, Clone)]
pub struct ZigZag {
    pub primitives: Vec<CechCochain>,
    pub constants: Cochain,
}

pub fn zigzag(cover: &Arc<Cover>, omega: &Cochain) -> Result<ZigZag> {
    cover.check_good()?;
    if let Some(w) = omega.d().first_witness() {
        return Err(Error::NotClosed { witness: w });
    }
    let n = omega.degree();
    let mut cur = localize(cover, omega);
    let mut primitives = Vec::new();
    for _ in 0..n {
        let beta = solve_simplicial(&cur)?
            .solved()
            .ok_or_else(|| Error::NotGood("local primitive missing".into()))?;
        cur = beta.delta();
        primitives.push(beta);
    }
    let constants = constants_of(&cur)?;
    Ok(ZigZag { primitives, constants })
}

/// Solves `D y = x` in the total complex of `x`'s shape.
pub fn solve_total(x: &TotalCochain) -> Result<Solution<TotalCochain>> {
    if let Some(w) = x.differential().first_witness() {
        return Err(Error::NotClosed { witness: w });
    }
    let n = x.degree;
    if n == 0 {
        return Err(Error::DegreeMismatch { expected: 1, found: 0 });
    }
    let shape = x.shape.clone();
    let cover = shape.cover.clone();
    let mut y = TotalCochain::zero(&shape, n - 1);
    let mut r = x.clone();
    let step = |y: &mut TotalCochain, r: &mut TotalCochain, t: TotalCochain| -> Result<()> {
        *r = r.sub(&t.differential())?;
        *y = y.add(&t)?;
        Ok(())
    };

    if let Some(c) = r.constant.clone() {
        match solve_coboundary(&c)? {
            Some(m) => step(&mut y, &mut r, TotalCochain::zero(&shape, n - 1).with_constant(m)?)?,
            None => return Ok(Solution::NotExact(Box::new(nerve_certificate(&c, "integral class is nonzero")))),
        }
    }
    for q in 0..n {
        if !shape.has_row(q) {
            break;
        }
        let piece = r.piece(q);
        if piece.is_zero() {
            continue;
        }
        let z = piece.homotopy()?;
        step(&mut y, &mut r, TotalCochain::zero(&shape, n - 1).with_piece(z)?)?;
    }
    if shape.has_row(n) && !r.piece(n).is_zero() {
        let omega = glue(&r.piece(n))?;
        let domega = omega.d();
        if shape.top == Some(n) && !domega.is_zero() {
            return Ok(Solution::NotExact(Box::new(Certificate {
                location: Location::Base,
                cocycle: domega,
                class: vec![],
                note: "curvature is nonzero".into(),
            })));
        }
        if let Some(beta) = solve_coboundary(&omega)? {
            step(&mut y, &mut r, TotalCochain::zero(&shape, n - 1).with_piece(localize(&cover, &beta))?)?;
        } else if let Some(cc) = shape.constants {
            cover.check_good()?;
            for p in 0..n {
                let piece = r.piece(n - p).scale(&sign(p));
                let beta = solve_simplicial(&piece)?
                    .solved()
                    .ok_or_else(|| Error::NotGood("local primitive missing".into()))?;
                step(&mut y, &mut r, TotalCochain::zero(&shape, n - 1).with_piece(beta)?)?;
            }
            let zeta = constants_of(&r.piece(0))?;
            let target = if cc == Integers { RationalsModOne } else { cc };
            let frac_part = zeta.with_coeff(target);
            let qq = if frac_part.is_zero() {
                Some(Cochain::zero(&cover.nerve, n - 1, target))
            } else if n >= 1 {
                solve_coboundary(&frac_part)?
            } else {
                None
            };
            let Some(qq) = qq else {
                return Ok(Solution::NotExact(Box::new(Certificate {
                    location: Location::Nerve,
                    cocycle: frac_part,
                    class: vec![],
                    note: "periods are not integral".into(),
                })));
            };
            let lift = qq.with_coeff(shape.coeff);
            step(&mut y, &mut r, TotalCochain::zero(&shape, n - 1).with_piece(iota(&cover, &lift, shape.coeff))?)?;
            let rest = constants_of(&r.piece(0))?;
            let m = rest.with_coeff(cc).scale(&sign(n));
            step(&mut y, &mut r, TotalCochain::zero(&shape, n - 1).with_constant(m)?)?;
        } else {
            return Ok(Solution::NotExact(Box::new(Certificate {
                location: Location::Base,
                cocycle: omega,
                class: vec![],
                note: "global closed form is not exact".into(),
            })));
        }
    }
    if !r.is_zero() || y.differential() != *x {
        return Err(Error::Invariant {
            kind: "solve_total".into(),
            witness: format!("residual {:?}", r.first_witness()),
        });
    }
    Ok(Solution::Solved(y))
}

/// Exact sequences for the connecting homomorphism.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ExactSequence {
    /// `0 → Z → Q → Q/Z → 0`.
    RationalsModOne,
    /// `0 → Z_k → Z_{k·q} → Z_q → 0` with inclusion `x ↦ q·x`.
    Cyclic { kernel: u64, quotient: u64 },
}

impl ExactSequence {
    pub fn kernel(&self) -> CoefficientGroup {
        match self {
            ExactSequence::RationalsModOne => Integers,
            ExactSequence::Cyclic { kernel, .. } => CoefficientGroup::Cyclic(*kernel),
        }
    }

    pub fn quotient(&self) -> CoefficientGroup {
        match self {
            ExactSequence::RationalsModOne => RationalsModOne,
            ExactSequence::Cyclic { quotient, .. } => CoefficientGroup::Cyclic(*quotient),
        }
    }
}

/// Image of a cocycle under the connecting homomorphism, with its class.
#[derive(Debug, Clone)]
pub struct CocycleClass {
    pub cocycle: Cochain,
    pub class: Vec<Rational>,
    pub is_zero: bool,
}

/// Lifts canonically (to `[0,1)` or `0..q`), applies `d` over the middle
/// group and divides into the kernel.
pub fn connecting_hom(c: &Cochain, seq: ExactSequence) -> Result<CocycleClass> {
    if c.coeff() != seq.quotient() {
        return Err(Error::Mismatch(format!("expected {} values, found {}", seq.quotient(), c.coeff())));
    }
    if let Some(w) = c.d().first_witness() {
        return Err(Error::NotClosed { witness: w });
    }
    let lifted = c.with_coeff(Rationals).d();
    let out = match seq {
        ExactSequence::RationalsModOne => lifted.with_coeff(Integers),
        ExactSequence::Cyclic { quotient, .. } => {
            lifted.map_values(seq.kernel(), |v| v / big(quotient.into()))
        }
    };
    class_of(out)
}

pub(crate) fn class_of(cocycle: Cochain) -> Result<CocycleClass> {
    let h = cohomology(cocycle.complex(), cocycle.degree(), cocycle.coeff())?;
    let class = h.coordinates(&cocycle)?;
    let is_zero = class.iter().all(Zero::is_zero);
    Ok(CocycleClass { cocycle, class, is_zero })
}

/// `a - b` is exact in the Čech direction (element values) or in the
/// untruncated total complex (form values).
pub fn classes_equal(a: &CechCochain, b: &CechCochain) -> Result<bool> {
    a.check_same(b).map_err(|e| Error::Mismatch(e.to_string()))?;
    match (&a.values, &b.values) {
        (CechValues::Element(x), CechValues::Element(y)) => cochain_classes_equal(x, y),
        _ => {
            for c in [a, b] {
                if let Some(w) = c.delta().first_witness() {
                    return Err(Error::NotClosed { witness: w });
                }
            }
            let diff = a.sub(b)?;
            if diff.is_zero() {
                return Ok(true);
            }
            if diff.degree == 0 {
                return Ok(false);
            }
            Ok(solve_cech(&diff)?.is_solved())
        }
    }
}

/// `a - b` is `D`-exact.
pub fn total_classes_equal(a: &TotalCochain, b: &TotalCochain) -> Result<bool> {
    let diff = a.sub(b)?;
    if diff.is_zero() {
        return Ok(true);
    }
    Ok(solve_total(&diff)?.is_solved())
}

/// Canonical `[0,1)` lift of a `Q/Z` value.
pub fn lift(x: &Rational) -> Rational {
    fract(x)
}
