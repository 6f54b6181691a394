//! Bundle gerbes at cocycle level: Dixmier–Douady cocycles, the lifting
//! gerbe of a central extension, Deligne triples `(g, A, f)` with their
//! 3-curvature and trivializations, and the curving pipeline on open covers.

use std::collections::BTreeMap;
use std::sync::Arc;

use itertools::Itertools;
use num_traits::{One, Zero};

use crate::cech::{
    class_of, constants_of, glue, solve_total, CechCochain, Certificate, CocycleClass, Cover, HomotopyWeights, Inner,
    Solution, TotalCochain, TotalShape,
};
use crate::cochain::{
    cochain_classes_equal, has_integral_periods, pair, solve_coboundary_within, Cochain, CoefficientGroup,
    FundamentalCycle, Integers, Rationals, RationalsModOne,
};
use crate::error::{Error, Result};
use crate::exact::{is_integer, Rational};
use crate::simplicial::{FiniteGroup, SimplicialComplex};

fn nerve_cochain(cover: &Cover, c: &Cochain, degree: usize, what: &str) -> Result<()> {
    if !Arc::ptr_eq(c.complex(), cover.nerve()) {
        return Err(Error::Mismatch(format!("{what} must live on the cover's nerve")));
    }
    if c.degree() != degree {
        return Err(Error::DegreeMismatch {
            expected: degree,
            found: c.degree(),
        });
    }
    Ok(())
}

/// Product constants `p_ijk` and section offsets `s_ij` in an abelian group,
/// both relative to fixed reference trivializations.
#[derive(Debug, Clone)]
pub struct GerbePresentation {
    pub cover: Arc<Cover>,
    pub p: Cochain,
    pub s: Cochain,
}

impl GerbePresentation {
    /// Checks shapes and associativity `δp = 0`.
    pub fn new(cover: &Arc<Cover>, p: Cochain, s: Cochain) -> Result<Self> {
        nerve_cochain(cover, &p, 2, "p")?;
        nerve_cochain(cover, &s, 1, "s")?;
        if p.coeff() != s.coeff() {
            return Err(Error::Mismatch("p and s use different groups".into()));
        }
        if let Some(w) = p.d().first_witness() {
            return Err(Error::NonAssociativeProduct { witness: w });
        }
        Ok(GerbePresentation {
            cover: cover.clone(),
            p,
            s,
        })
    }

    pub fn coeff(&self) -> CoefficientGroup {
        self.p.coeff()
    }
}

/// `g_ijk = p_ijk + s_jk − s_ik + s_ij`.
pub fn dd_cocycle(pres: &GerbePresentation) -> Result<Cochain> {
    if let Some(w) = pres.p.d().first_witness() {
        return Err(Error::NonAssociativeProduct { witness: w });
    }
    pres.p.add(&pres.s.d())
}

/// Class of a Dixmier–Douady cocycle: coordinates in `H²(nerve; A)` for
/// `A = Z_n`, or the image under `Q/Z → Z[1]` for `A = Q/Z`.
pub fn dd_class(g: &Cochain) -> Result<CocycleClass> {
    match g.coeff() {
        RationalsModOne => crate::cech::connecting_hom(g, crate::cech::ExactSequence::RationalsModOne),
        _ => class_of(g.clone()),
    }
}

/// `A ⊂ Ĝ → G` with `A` central and cyclic, plus a set-theoretic section.
#[derive(Debug, Clone)]
pub struct CentralExtension {
    ghat: Arc<FiniteGroup>,
    g: Arc<FiniteGroup>,
    projection: Vec<usize>,
    generator: usize,
    kernel: Vec<usize>,
    section: Vec<usize>,
}

impl CentralExtension {
    /// `generator` spans the kernel of `projection`; `section[x]` lifts `x`.
    pub fn new(
        ghat: Arc<FiniteGroup>,
        g: Arc<FiniteGroup>,
        projection: Vec<usize>,
        generator: usize,
        section: Vec<usize>,
    ) -> Result<Self> {
        let bad = |m: String| Err(Error::InvalidExtension(m));
        if projection.len() != ghat.order() || projection.iter().any(|&x| x >= g.order()) {
            return bad("projection table has the wrong shape".into());
        }
        for (a, b) in (0..ghat.order()).cartesian_product(0..ghat.order()) {
            if projection[ghat.mul(a, b)] != g.mul(projection[a], projection[b]) {
                return bad(format!("projection is not a homomorphism at ({}, {})", ghat.name(a), ghat.name(b)));
            }
        }
        if (0..g.order()).any(|x| !projection.contains(&x)) {
            return bad("projection is not onto".into());
        }
        if generator >= ghat.order() {
            return bad("kernel generator is not an element".into());
        }
        let mut kernel = vec![ghat.identity()];
        loop {
            let next = ghat.mul(*kernel.last().unwrap(), generator);
            if next == ghat.identity() {
                break;
            }
            kernel.push(next);
        }
        let ker_size = projection.iter().filter(|&&x| x == g.identity()).count();
        if kernel.len() != ker_size || kernel.iter().any(|&k| projection[k] != g.identity()) {
            return bad("generator does not span the kernel".into());
        }
        if let Some(&k) = kernel.iter().find(|&&k| (0..ghat.order()).any(|x| ghat.mul(k, x) != ghat.mul(x, k))) {
            return bad(format!("kernel element {} is not central", ghat.name(k)));
        }
        let mut ext = CentralExtension {
            ghat,
            g,
            projection,
            generator,
            kernel,
            section: vec![],
        };
        ext.set_section(section)?;
        Ok(ext)
    }

    /// `Z_n → Z_{nm} → Z_m`, `x ↦ m·x`, with the section `x ↦ x`.
    pub fn cyclic(n: usize, m: usize) -> Self {
        let ghat = Arc::new(FiniteGroup::cyclic(n * m));
        let g = Arc::new(FiniteGroup::cyclic(m));
        let projection = (0..n * m).map(|x| x % m).collect();
        let section = (0..m).collect();
        Self::new(ghat, g, projection, m % (n * m), section).expect("cyclic extension")
    }

    /// `Z_n → Z_n × G → G` with the homomorphic section.
    pub fn split(n: usize, g: Arc<FiniteGroup>) -> Self {
        let a = FiniteGroup::cyclic(n);
        let m = g.order();
        let ghat = Arc::new(a.product(&g));
        let projection = (0..n * m).map(|x| x % m).collect();
        let section = (0..m).collect();
        Self::new(ghat, g, projection, m % (n * m), section).expect("split extension")
    }

    pub fn set_section(&mut self, section: Vec<usize>) -> Result<()> {
        if section.len() != self.g.order()
            || section.iter().enumerate().any(|(x, &y)| y >= self.ghat.order() || self.projection[y] != x)
        {
            return Err(Error::InvalidExtension("section does not split the projection".into()));
        }
        self.section = section;
        Ok(())
    }

    pub fn with_section(&self, section: Vec<usize>) -> Result<Self> {
        let mut e = self.clone();
        e.set_section(section)?;
        Ok(e)
    }

    /// Every section of the projection.
    pub fn all_sections(&self) -> Vec<Vec<usize>> {
        (0..self.g.order())
            .map(|x| (0..self.ghat.order()).filter(|&y| self.projection[y] == x).collect::<Vec<_>>())
            .multi_cartesian_product()
            .collect()
    }

    pub fn total(&self) -> &Arc<FiniteGroup> {
        &self.ghat
    }

    pub fn quotient(&self) -> &Arc<FiniteGroup> {
        &self.g
    }

    pub fn section(&self) -> &[usize] {
        &self.section
    }

    pub fn projection(&self) -> &[usize] {
        &self.projection
    }

    pub fn generator(&self) -> usize {
        self.generator
    }

    /// Order of the kernel.
    pub fn kernel_order(&self) -> usize {
        self.kernel.len()
    }

    pub fn kernel_coeff(&self) -> CoefficientGroup {
        CoefficientGroup::Cyclic(self.kernel.len() as u64)
    }

    /// `k` with `x = generator^k`, for `x` in the kernel.
    pub fn log(&self, x: usize) -> Option<usize> {
        self.kernel.iter().position(|&k| k == x)
    }
}

/// `G`-valued Čech 1-cochain on a nerve, one element per edge.
#[derive(Debug, Clone)]
pub struct GroupCochain {
    pub nerve: Arc<SimplicialComplex>,
    pub values: Vec<usize>,
}

impl GroupCochain {
    /// Reads a `Z_m` cochain as elements of `Z_m`.
    pub fn from_cyclic(c: &Cochain) -> Result<Self> {
        if !matches!(c.coeff(), CoefficientGroup::Cyclic(_)) || c.degree() != 1 {
            return Err(Error::Mismatch("expected a Z_m-valued 1-cochain".into()));
        }
        let values = c.dense().iter().map(|v| v.to_integer().try_into().expect("Z_m value")).collect();
        Ok(GroupCochain {
            nerve: c.complex().clone(),
            values,
        })
    }

    /// Checks `τ_jk τ_ij = τ_ik` on every 2-simplex.
    pub fn check_cocycle(&self, g: &FiniteGroup) -> Result<()> {
        for t in 0..self.nerve.count(2) {
            let f = self.nerve.faces(2, t);
            let (jk, ik, ij) = (self.values[f[0]], self.values[f[1]], self.values[f[2]]);
            if g.mul(jk, ij) != ik {
                return Err(Error::NotClosed {
                    witness: self.nerve.simplex_labels(2, t),
                });
            }
        }
        Ok(())
    }
}

/// `g_ijk = ŝ(τ_jk)·ŝ(τ_ij)·ŝ(τ_ik)⁻¹`, read in the cyclic kernel.
pub fn lifting_gerbe_cocycle(ext: &CentralExtension, tau: &GroupCochain) -> Result<CocycleClass> {
    if tau.values.len() != tau.nerve.count(1) || tau.values.iter().any(|&x| x >= ext.g.order()) {
        return Err(Error::Mismatch("τ must assign a group element to every edge".into()));
    }
    tau.check_cocycle(&ext.g)?;
    let h = &ext.ghat;
    let s = |x: usize| ext.section[x];
    let mut vals = Vec::new();
    for t in 0..tau.nerve.count(2) {
        let f = tau.nerve.faces(2, t);
        let (jk, ik, ij) = (tau.values[f[0]], tau.values[f[1]], tau.values[f[2]]);
        let x = h.prod([s(jk), s(ij), h.inv(s(ik))]);
        let k = ext.log(x).ok_or_else(|| Error::Invariant {
            kind: "lifting gerbe".into(),
            witness: format!("value off the kernel at {:?}", tau.nerve.simplex_labels(2, t)),
        })?;
        vals.push((t, Rational::from_integer(k.into())));
    }
    let g = Cochain::from_values(&tau.nerve, 2, ext.kernel_coeff(), vals)?;
    if let Some(w) = g.d().first_witness() {
        return Err(Error::Invariant {
            kind: "lifting gerbe".into(),
            witness: format!("cocycle condition fails at {w:?}"),
        });
    }
    class_of(g)
}

/// Kinds of checks in a Deligne validation report.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Condition {
    /// `δg = 0` in `Q/Z`.
    Cocycle,
    /// `δA − d(lift g)` is `d` of an integer function.
    Dlog,
    /// `δf = dA` (triples), `δγ = dA` (quadruples).
    Curving,
    /// `δK = dγ` (quadruples).
    TopForm,
}

#[derive(Debug, Clone)]
pub struct Failure {
    pub condition: Condition,
    pub witness: Vec<String>,
}

#[derive(Debug, Clone)]
pub struct ValidationReport {
    pub failures: Vec<Failure>,
    /// Integer functions `n` with `δA − d(lift g) = dn`, when found.
    pub slack: Option<CechCochain>,
}

impl ValidationReport {
    pub fn is_valid(&self) -> bool {
        self.failures.is_empty()
    }
}

fn shape_check(c: &CechCochain, cover: &Arc<Cover>, degree: usize, inner: Inner, coeff: CoefficientGroup, what: &str) -> Result<()> {
    if !Arc::ptr_eq(c.cover(), cover) || c.degree() != degree || c.inner() != inner || c.coeff() != coeff {
        return Err(Error::Mismatch(format!(
            "{what} must be a degree-{degree} {inner:?} Čech cochain over {coeff}"
        )));
    }
    Ok(())
}

/// Canonical `[0,1)` lift of a `Q/Z`-valued Čech cochain.
pub fn lift_q(g: &CechCochain) -> CechCochain {
    g.with_coeff(Rationals)
}

/// Shared check `δA − d(lift g) = dn` with `n` integer on every intersection.
pub(crate) fn dlog_check(g: &CechCochain, a: &CechCochain, failures: &mut Vec<Failure>) -> Option<CechCochain> {
    let cover = g.cover();
    let r = a.delta().sub(&lift_q(g).d().expect("form")).expect("same shape");
    let mut slack = CechCochain::zero(cover, g.degree(), Inner::Form(0), Integers);
    let mut ok = true;
    for (i, c) in r.form_values().expect("form").iter() {
        let u = cover.intersection(g.degree(), *i);
        let mut w = cover.tuple_labels(g.degree(), *i);
        if !c.values().values().all(is_integer) {
            w.push("@".into());
            w.extend(c.values().iter().find(|(_, v)| !is_integer(v)).map(|(s, _)| c.witness(*s)).unwrap_or_default());
            failures.push(Failure {
                condition: Condition::Dlog,
                witness: w,
            });
            ok = false;
            continue;
        }
        match solve_coboundary_within(&c.with_coeff(Integers), u) {
            Ok(Some(n)) => slack.set_form(*i, n).expect("supported in the intersection"),
            _ => {
                failures.push(Failure {
                    condition: Condition::Dlog,
                    witness: w,
                });
                ok = false;
            }
        }
    }
    ok.then_some(slack)
}

fn push_witness(failures: &mut Vec<Failure>, condition: Condition, c: &CechCochain) {
    if let Some(w) = c.first_witness() {
        failures.push(Failure { condition, witness: w });
    }
}

/// `g`: `Q/Z` functions on triple intersections; `A`: 1-forms on double
/// intersections; `f`: 2-forms on members.
#[derive(Debug, Clone)]
pub struct DeligneTriple {
    pub cover: Arc<Cover>,
    pub g: CechCochain,
    pub a: CechCochain,
    pub f: CechCochain,
}

impl DeligneTriple {
    pub fn new(cover: &Arc<Cover>, g: CechCochain, a: CechCochain, f: CechCochain) -> Result<Self> {
        shape_check(&g, cover, 2, Inner::Form(0), RationalsModOne, "g")?;
        shape_check(&a, cover, 1, Inner::Form(1), Rationals, "A")?;
        shape_check(&f, cover, 0, Inner::Form(2), Rationals, "f")?;
        Ok(DeligneTriple {
            cover: cover.clone(),
            g,
            a,
            f,
        })
    }

    pub fn zero(cover: &Arc<Cover>) -> Self {
        DeligneTriple {
            cover: cover.clone(),
            g: CechCochain::zero(cover, 2, Inner::Form(0), RationalsModOne),
            a: CechCochain::zero(cover, 1, Inner::Form(1), Rationals),
            f: CechCochain::zero(cover, 0, Inner::Form(2), Rationals),
        }
    }

    /// `(δh, d(lift h) + δk, dk)`: a triple with trivial class.
    pub fn coboundary(cover: &Arc<Cover>, h: &CechCochain, k: &CechCochain) -> Result<Self> {
        shape_check(h, cover, 1, Inner::Form(0), RationalsModOne, "h")?;
        shape_check(k, cover, 0, Inner::Form(1), Rationals, "k")?;
        let a = lift_q(h).d()?.add(&k.delta())?;
        Self::new(cover, h.delta(), a, k.d()?)
    }

    /// Back-solves a triple whose total class is the image of the integral
    /// Čech 3-cocycle `c` on the nerve.
    pub fn from_integral_class(cover: &Arc<Cover>, c: &Cochain) -> Result<Self> {
        let [g, a, f] = back_solve::<3>(cover, c)?;
        Self::new(cover, g, a, f)
    }

    /// The triple with total class equal to another's plus `x`, where `x`
    /// is `(h, k)` as in [`DeligneTriple::coboundary`].
    pub fn shifted(&self, h: &CechCochain, k: &CechCochain) -> Result<Self> {
        let t = Self::coboundary(&self.cover, h, k)?;
        Self::new(&self.cover, self.g.add(&t.g)?, self.a.add(&t.a)?, self.f.add(&t.f)?)
    }

    /// Total cochain of degree 2 in `Z → Ω⁰ → Ω¹ → Ω²`:
    /// `(δG, G, −A, −f)` with `G = lift g + n`.
    pub fn to_total(&self) -> Result<TotalCochain> {
        let report = deligne_validate(self);
        if !report.is_valid() {
            return Err(Error::InvalidTriple(format!("{:?}", report.failures[0])));
        }
        let big_g = lift_q(&self.g).add(&report.slack.unwrap().with_coeff(Rationals))?;
        let c = constants_of(&big_g.delta())?.with_coeff(Integers);
        let shape = TotalShape::deligne(&self.cover, 2);
        let x = TotalCochain::zero(&shape, 2)
            .with_constant(c)?
            .with_piece(big_g)?
            .with_piece(self.a.neg())?
            .with_piece(self.f.neg())?;
        debug_assert!(x.differential().is_zero());
        Ok(x)
    }
}

/// Builds `G = K ι(c)`, then successive form pieces with `δ(next) = d(prev)`,
/// and returns `[G mod 1, pieces…]`.
pub(crate) fn back_solve<const N: usize>(cover: &Arc<Cover>, c: &Cochain) -> Result<[CechCochain; N]> {
    cover.check_good()?;
    nerve_cochain(cover, c, N, "c")?;
    if c.coeff() != Integers {
        return Err(Error::Mismatch("expected an integral cocycle".into()));
    }
    if let Some(w) = c.d().first_witness() {
        return Err(Error::NotClosed { witness: w });
    }
    let w = HomotopyWeights::Uniform;
    let mut cur = crate::cech::iota(cover, c, Rationals).homotopy_with(w)?;
    let mut out = vec![cur.with_coeff(RationalsModOne)];
    for _ in 1..N {
        cur = cur.d()?.homotopy_with(w)?;
        out.push(cur.clone());
    }
    Ok(out.try_into().expect("N pieces"))
}

/// Checks `δg = 0`, the integer-exact `dlog` condition and `δf = dA`.
pub fn deligne_validate(t: &DeligneTriple) -> ValidationReport {
    let mut failures = Vec::new();
    push_witness(&mut failures, Condition::Cocycle, &t.g.delta());
    let slack = dlog_check(&t.g, &t.a, &mut failures);
    push_witness(&mut failures, Condition::Curving, &t.f.delta().sub(&t.a.d().expect("form")).expect("shape"));
    ValidationReport { failures, slack }
}

/// A closed global form glued from local top pieces, with its periods.
#[derive(Debug, Clone)]
pub struct GlobalForm {
    pub form: Cochain,
    pub closed: bool,
    pub integral: bool,
    /// Pairing with the orientation cycle of the base, when it is a closed
    /// orientable pseudomanifold of matching dimension.
    pub orientation_pairing: Option<Rational>,
}

pub(crate) fn global_form(local: &CechCochain) -> Result<GlobalForm> {
    let form = glue(local)?;
    let closed = form.d().is_zero();
    let integral = has_integral_periods(&form)?;
    let base = local.cover().base();
    let orientation_pairing = if base.dim() == form.degree() {
        FundamentalCycle::orientation(base).ok().map(|z| pair(&form, &z)).transpose()?
    } else {
        None
    };
    Ok(GlobalForm {
        form,
        closed,
        integral,
        orientation_pairing,
    })
}

/// `ω` with `ω|U_α = df_α`.
pub fn three_curvature(t: &DeligneTriple) -> Result<GlobalForm> {
    let report = deligne_validate(t);
    if let Some(f) = report.failures.first() {
        return Err(Error::InvalidTriple(format!("{:?} fails at {:?}", f.condition, f.witness)));
    }
    global_form(&t.f.d()?)
}

/// Outcome of trivializing a Deligne class.
#[derive(Debug, Clone)]
pub enum Trivialization<T> {
    Trivial(T),
    Obstructed(Box<Certificate>),
}

impl<T> Trivialization<T> {
    pub fn is_trivial(&self) -> bool {
        matches!(self, Trivialization::Trivial(_))
    }
}

/// `h` in `Q/Z` on double intersections, `k` 1-forms on members with
/// `g = δh`, `A = δk + d(lift h) + dn`, `f = dk`.
#[derive(Debug, Clone)]
pub struct TripleTrivialization {
    pub h: CechCochain,
    pub k: CechCochain,
}

/// Verifies the three trivialization equations exactly.
pub fn verify_triple_trivialization(t: &DeligneTriple, tr: &TripleTrivialization) -> bool {
    if t.g != tr.h.delta() {
        return false;
    }
    let Ok(dk) = tr.k.d() else { return false };
    if t.f != dk {
        return false;
    }
    // A − δk against h, with the same integer slack convention
    let rest = t.a.sub(&tr.k.delta()).expect("shape");
    let mut failures = Vec::new();
    dlog_check_degree(&tr.h, &rest, &mut failures);
    failures.is_empty()
}

/// `B − d(lift h) = dn` with `n` integer, one Čech degree lower than
/// [`dlog_check`].
fn dlog_check_degree(h: &CechCochain, b: &CechCochain, failures: &mut Vec<Failure>) {
    let cover = h.cover();
    let r = b.sub(&lift_q(h).d().expect("form")).expect("shape");
    for (i, c) in r.form_values().expect("form") {
        let u = cover.intersection(h.degree(), *i);
        let ok = c.values().values().all(is_integer)
            && matches!(solve_coboundary_within(&c.with_coeff(Integers), u), Ok(Some(_)));
        if !ok {
            failures.push(Failure {
                condition: Condition::Dlog,
                witness: cover.tuple_labels(h.degree(), *i),
            });
        }
    }
}

/// Solves `D y = x` for the triple's total cochain.
pub fn trivialize_deligne(t: &DeligneTriple) -> Result<Trivialization<TripleTrivialization>> {
    let x = t.to_total()?;
    match solve_total(&x)? {
        Solution::NotExact(c) => Ok(Trivialization::Obstructed(c)),
        Solution::Solved(y) => {
            let h = y.piece(0).with_coeff(RationalsModOne);
            let k = y.piece(1).neg();
            let tr = TripleTrivialization { h, k };
            if !verify_triple_trivialization(t, &tr) {
                return Err(Error::Invariant {
                    kind: "trivialize_deligne".into(),
                    witness: "trivialization fails re-verification".into(),
                });
            }
            Ok(Trivialization::Trivial(tr))
        }
    }
}

/// Rational weights `ψ_γ(σ)` on every simplex of the base, summing to one
/// on each simplex and vanishing off `U_γ`.
#[derive(Debug, Clone)]
pub struct Partition {
    cover: Arc<Cover>,
    /// `weights[γ][q]`: simplex index → weight.
    weights: Vec<Vec<BTreeMap<usize, Rational>>>,
}

impl Partition {
    pub fn new(cover: &Arc<Cover>, weight: impl Fn(u32, usize, usize) -> Rational) -> Result<Self> {
        let base = cover.base();
        let mut weights = vec![vec![BTreeMap::new(); base.dim() + 1]; cover.len()];
        for q in 0..=base.dim() {
            for s in 0..base.count(q) {
                let mut total = Rational::zero();
                for m in 0..cover.len() as u32 {
                    let w = weight(m, q, s);
                    if w.is_zero() {
                        continue;
                    }
                    if !cover.members()[m as usize].contains(q, s) {
                        return Err(Error::BadPartition(format!(
                            "ψ_{} is nonzero on {:?} outside its member",
                            cover.names()[m as usize],
                            base.simplex_labels(q, s)
                        )));
                    }
                    total += &w;
                    weights[m as usize][q].insert(s, w);
                }
                if !total.is_one() {
                    return Err(Error::BadPartition(format!(
                        "weights sum to {} on {:?}",
                        crate::exact::fmt_rational(&total),
                        base.simplex_labels(q, s)
                    )));
                }
            }
        }
        Ok(Partition {
            cover: cover.clone(),
            weights,
        })
    }

    /// Equal weights on the members containing each simplex.
    pub fn uniform(cover: &Arc<Cover>) -> Self {
        Self::new(cover, |m, q, s| {
            let ms = cover.members_containing(q, s);
            if ms.contains(&m) {
                Rational::new(1.into(), ms.len().into())
            } else {
                Rational::zero()
            }
        })
        .expect("uniform weights")
    }

    pub fn weight(&self, m: u32, q: usize, s: usize) -> Rational {
        self.weights[m as usize][q].get(&s).cloned().unwrap_or_else(Rational::zero)
    }

    /// `ψ_γ · c`, simplexwise.
    pub fn weigh(&self, m: u32, c: &Cochain) -> Cochain {
        let q = c.degree();
        let vals = c.values().iter().filter_map(|(s, v)| self.weights[m as usize][q].get(s).map(|w| (*s, w * v)));
        Cochain::from_values(self.cover.base(), q, c.coeff(), vals).expect("same group")
    }
}

/// Outputs of the curving pipeline and the five identities.
#[derive(Debug, Clone)]
pub struct Pipeline {
    pub b: CechCochain,
    pub f_hat: CechCochain,
    pub mu: CechCochain,
    /// `dμ_α` glued, when the `dμ_α` agree on overlaps.
    pub omega: Option<Cochain>,
    /// (1) `δA = 0`, (2) `δB = A`, (3) `δF = dA`, (4) `δF̂ = 0`, (5) `δμ = F̂`.
    pub equations: [bool; 5],
    pub overlaps_agree: bool,
}

impl Pipeline {
    pub fn holds(&self) -> bool {
        self.equations.iter().all(|&e| e) && self.overlaps_agree
    }
}

/// `B_αβ = Σ_γ ψ_γ A_αβγ`, `F̂ = F − dB`, `μ_α = −Σ_β ψ_β F̂_αβ`, `ω|U_α = dμ_α`.
pub fn curving_pipeline(a: &CechCochain, f: &CechCochain, psi: &Partition) -> Result<Pipeline> {
    let cover = a.cover();
    shape_check(a, cover, 2, Inner::Form(1), Rationals, "A")?;
    shape_check(f, cover, 1, Inner::Form(2), Rationals, "F")?;
    if !Arc::ptr_eq(&psi.cover, cover) {
        return Err(Error::BadPartition("partition belongs to another cover".into()));
    }
    let nerve = cover.nerve();
    let members = cover.len() as u32;
    let mut b = CechCochain::zero(cover, 1, Inner::Form(1), Rationals);
    for e in 0..nerve.count(1) {
        let (x, y) = (nerve.simplex(1, e)[0], nerve.simplex(1, e)[1]);
        let mut sum = Cochain::zero(cover.base(), 1, Rationals);
        for m in (0..members).filter(|&m| m != x && m != y) {
            sum = sum.add(&psi.weigh(m, &a.form_at(&[x, y, m])))?;
        }
        b.set_form(e, sum)?;
    }
    let f_hat = f.sub(&b.d()?)?;
    let mut mu = CechCochain::zero(cover, 0, Inner::Form(2), Rationals);
    for v in 0..nerve.count(0) {
        let x = nerve.simplex(0, v)[0];
        let mut sum = Cochain::zero(cover.base(), 2, Rationals);
        for m in (0..members).filter(|&m| m != x) {
            sum = sum.sub(&psi.weigh(m, &f_hat.form_at(&[x, m])))?;
        }
        mu.set_form(v, sum)?;
    }
    let equations = [
        a.delta().is_zero(),
        b.delta() == *a,
        f.delta() == a.d()?,
        f_hat.delta().is_zero(),
        mu.delta() == f_hat,
    ];
    let dmu = mu.d()?;
    let overlaps_agree = dmu.delta().is_zero();
    let omega = if overlaps_agree { Some(glue(&dmu)?) } else { None };
    Ok(Pipeline {
        b,
        f_hat,
        mu,
        omega,
        equations,
        overlaps_agree,
    })
}

/// Compares a global form's class with an integral Čech cocycle through the
/// zig-zag `ω|U_i = dβ_0`, `δβ_p = dβ_{p+1}`, ending in constants.
pub fn zigzag_matches(cover: &Arc<Cover>, form: &Cochain, c: &Cochain) -> Result<bool> {
    let zz = crate::cech::zigzag(cover, form)?;
    cochain_classes_equal(&zz.constants, &c.with_coeff(Rationals))
}

#[cfg(test)]
pub(crate) mod tests {
    use super::*;
    use crate::cech::{vertex_star_cover, Cover};
    use crate::cochain::{cohomology, Cyclic};
    use crate::exact::{frac, int};
    use crate::standard;
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    pub(crate) fn random_forms(cover: &Arc<Cover>, p: usize, q: usize, coeff: CoefficientGroup, rng: &mut ChaCha8Rng) -> CechCochain {
        let mut out = CechCochain::zero(cover, p, Inner::Form(q), coeff);
        for i in 0..cover.nerve().count(p) {
            let u = cover.intersection(p, i);
            let vals: Vec<(usize, Rational)> = u
                .simplices(q)
                .iter()
                .filter_map(|&s| rng.gen_bool(0.5).then(|| (s, frac(rng.gen_range(-5..6), rng.gen_range(1..5)))))
                .collect();
            out.set_form(i, Cochain::from_values(cover.base(), q, coeff, vals).unwrap()).unwrap();
        }
        out
    }

    #[test]
    fn dd_examples() {
        let cover = vertex_star_cover(&standard::boundary_simplex(3)).unwrap();
        let n = cover.nerve().clone();
        let gen = cohomology(&n, 2, Cyclic(2)).unwrap().generators[0].clone();
        let s0 = Cochain::zero(&n, 1, Cyclic(2));
        let p = GerbePresentation::new(&cover, gen.clone(), s0).unwrap();
        assert_eq!(dd_cocycle(&p).unwrap(), gen);
        let s = Cochain::from_values(&n, 1, Cyclic(2), [(0, int(1)), (3, int(1))]).unwrap();
        let p2 = GerbePresentation::new(&cover, gen.clone(), s).unwrap();
        assert!(cochain_classes_equal(&dd_cocycle(&p).unwrap(), &dd_cocycle(&p2).unwrap()).unwrap());
        assert!(!dd_class(&gen).unwrap().is_zero);
        let big = vertex_star_cover(&standard::boundary_simplex(4)).unwrap();
        let mut bad = Cochain::zero(big.nerve(), 2, Cyclic(2));
        bad.add_at(0, &int(1));
        assert!(matches!(
            GerbePresentation::new(&big, bad, Cochain::zero(big.nerve(), 1, Cyclic(2))),
            Err(Error::NonAssociativeProduct { .. })
        ));
    }

    #[test]
    fn lifting_obstruction_on_rp2() {
        let rp2 = standard::rp2();
        let cover = vertex_star_cover(&rp2).unwrap();
        let n = cover.nerve().clone();
        let tau = GroupCochain::from_cyclic(&cohomology(&n, 1, Cyclic(2)).unwrap().generators[0]).unwrap();
        let ext = CentralExtension::cyclic(2, 2);
        let mut first = None;
        for sec in ext.all_sections() {
            let e = ext.with_section(sec).unwrap();
            let r = lifting_gerbe_cocycle(&e, &tau).unwrap();
            assert!(!r.is_zero);
            let f = first.get_or_insert(r.cocycle.clone());
            assert!(cochain_classes_equal(f, &r.cocycle).unwrap());
        }
        let split = CentralExtension::split(2, Arc::new(FiniteGroup::cyclic(2)));
        assert!(lifting_gerbe_cocycle(&split, &tau).unwrap().is_zero);
    }

    #[test]
    fn extension_validation() {
        let z4 = Arc::new(FiniteGroup::cyclic(4));
        let z2 = Arc::new(FiniteGroup::cyclic(2));
        assert!(CentralExtension::new(z4.clone(), z2.clone(), vec![0, 1, 0, 1], 2, vec![0, 1]).is_ok());
        assert!(CentralExtension::new(z4.clone(), z2.clone(), vec![0, 1, 0, 1], 1, vec![0, 1]).is_err());
        assert!(CentralExtension::new(z4.clone(), z2.clone(), vec![0, 1, 0, 1], 2, vec![0, 0]).is_err());
        assert!(CentralExtension::new(z4, z2, vec![0, 1, 1, 0], 3, vec![0, 1]).is_err());
    }

    #[test]
    fn zero_and_perturbed_triples() {
        let cover = vertex_star_cover(&standard::boundary_simplex(4)).unwrap();
        let z = DeligneTriple::zero(&cover);
        assert!(deligne_validate(&z).is_valid());
        assert!(three_curvature(&z).unwrap().form.is_zero());
        match trivialize_deligne(&z).unwrap() {
            Trivialization::Trivial(t) => {
                assert!(t.h.is_zero());
                assert!(t.k.is_zero());
            }
            _ => panic!(),
        }
        let mut rng = ChaCha8Rng::seed_from_u64(1);
        let h = random_forms(&cover, 1, 0, RationalsModOne, &mut rng);
        let k = random_forms(&cover, 0, 1, Rationals, &mut rng);
        let t = DeligneTriple::coboundary(&cover, &h, &k).unwrap();
        assert!(deligne_validate(&t).is_valid());
        // perturb f_0 on a 2-simplex shared with another member
        let mut f = t.f.clone();
        let s = cover.intersection(1, 0).simplices(2)[0];
        let mut c = f.form(0);
        c.add_at(s, &int(1));
        f.set_form(0, c).unwrap();
        let bad = DeligneTriple::new(&cover, t.g.clone(), t.a.clone(), f).unwrap();
        let rep = deligne_validate(&bad);
        assert_eq!(rep.failures.len(), 1);
        assert_eq!(rep.failures[0].condition, Condition::Curving);
        assert!(matches!(three_curvature(&bad), Err(Error::InvalidTriple(_))));
    }

    #[test]
    fn generator_triple_on_s3() {
        let cover = vertex_star_cover(&standard::boundary_simplex(4)).unwrap();
        let c = cohomology(cover.nerve(), 3, Integers).unwrap().generators[0].clone();
        let t = DeligneTriple::from_integral_class(&cover, &c).unwrap();
        assert!(!t.g.is_zero());
        assert!(deligne_validate(&t).is_valid());
        let w = three_curvature(&t).unwrap();
        assert!(w.closed && w.integral);
        let p = w.orientation_pairing.unwrap();
        assert!(p == int(1) || p == int(-1));
        assert!(zigzag_matches(&cover, &w.form, &c).unwrap());
        match trivialize_deligne(&t).unwrap() {
            Trivialization::Obstructed(cert) => assert!(cert.class.iter().any(|x| !x.is_zero())),
            _ => panic!("generator trivialized"),
        }
    }

    #[test]
    fn flat_triple_on_s2() {
        // constant Q/Z class on the 2-sphere: valid, flat, nontrivial
        let cover = vertex_star_cover(&standard::boundary_simplex(3)).unwrap();
        let gen = cohomology(cover.nerve(), 2, Integers).unwrap().generators[0].clone();
        let g = crate::cech::iota(&cover, &gen.scale(&frac(1, 3)).with_coeff(RationalsModOne), RationalsModOne);
        let t = DeligneTriple::new(
            &cover,
            g,
            CechCochain::zero(&cover, 1, Inner::Form(1), Rationals),
            CechCochain::zero(&cover, 0, Inner::Form(2), Rationals),
        )
        .unwrap();
        assert!(deligne_validate(&t).is_valid());
        assert!(!trivialize_deligne(&t).unwrap().is_trivial());
    }

    #[test]
    fn three_arc_pipeline() {
        let cover = crate::cech::three_arc_cover();
        let mut rng = ChaCha8Rng::seed_from_u64(5);
        for _ in 0..10 {
            let c = random_forms(&cover, 1, 1, Rationals, &mut rng);
            let a = c.delta();
            let f = c.d().unwrap();
            let p = curving_pipeline(&a, &f, &Partition::uniform(&cover)).unwrap();
            assert!(p.holds(), "{:?}", p.equations);
        }
        let z = curving_pipeline(
            &CechCochain::zero(&cover, 2, Inner::Form(1), Rationals),
            &CechCochain::zero(&cover, 1, Inner::Form(2), Rationals),
            &Partition::uniform(&cover),
        )
        .unwrap();
        assert!(z.b.is_zero() && z.mu.is_zero() && z.omega.unwrap().is_zero());
        assert!(matches!(Partition::new(&cover, |_, _, _| frac(1, 3)), Err(Error::BadPartition(_))));
    }

    #[test]
    fn concentrated_partition() {
        let base = Arc::new(standard::hexagon());
        let whole = crate::simplicial::Subcomplex::whole(&base);
        let e = base.index_of(&[0, 1]).unwrap();
        let small = crate::simplicial::Subcomplex::closure(&base, &[(1, e)]);
        let cover = Cover::new(base, vec!["W".into(), "S".into(), "T".into()], vec![whole, small.clone(), small]).unwrap();
        let psi = Partition::new(&cover, |m, _, _| if m == 0 { int(1) } else { int(0) }).unwrap();
        let mut rng = ChaCha8Rng::seed_from_u64(9);
        let a = random_forms(&cover, 1, 1, Rationals, &mut rng).delta();
        let f = CechCochain::zero(&cover, 1, Inner::Form(2), Rationals);
        let p = curving_pipeline(&a, &f, &psi).unwrap();
        // B_12 = A_120 since only member 0 carries weight
        let i = cover.nerve().index_of(&[1, 2]).unwrap();
        assert_eq!(p.b.form(i), a.form_at(&[1, 2, 0]));
    }
}
