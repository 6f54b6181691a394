//! Bundle 2-gerbes at cocycle level: associator coherence, the four-class
//! by both constructions, lifts through cyclic extensions, Deligne
//! quadruples with their four-form, and the triviality criterion.

use std::sync::Arc;

use crate::cech::{
    class_of, constants_of, Certificate, CechCochain, CocycleClass, Cover, Inner, Location, TotalCochain, TotalShape,
};
use crate::cochain::{
    cochain_classes_equal, cohomology, solve_coboundary, Cochain, CoefficientGroup, Integers, Rationals,
    RationalsModOne,
};
use crate::error::{Error, Result};
use crate::exact::Rational;
use crate::gerbe::{
    global_form, lift_q, CentralExtension, Condition, Failure, GlobalForm, Trivialization, ValidationReport,
};

/// Section offsets `λ_ijk` and associator `a_ijkl` in an abelian group.
#[derive(Debug, Clone)]
pub struct TwoGerbePresentation {
    pub cover: Arc<Cover>,
    pub lambda: Cochain,
    pub a: Cochain,
}

/// Result of checking `δa = 0`.
#[derive(Debug, Clone)]
pub struct CoherenceReport {
    /// Every nerve 4-simplex on which the five-term sum is nonzero.
    pub witnesses: Vec<Vec<String>>,
}

impl CoherenceReport {
    pub fn holds(&self) -> bool {
        self.witnesses.is_empty()
    }
}

pub fn coherence_check(a: &Cochain) -> CoherenceReport {
    let da = a.d();
    let witnesses = da.values().keys().map(|&i| da.witness(i)).collect();
    CoherenceReport { witnesses }
}

impl TwoGerbePresentation {
    pub fn new(cover: &Arc<Cover>, lambda: Cochain, a: Cochain) -> Result<Self> {
        for (c, deg, what) in [(&lambda, 2, "λ"), (&a, 3, "a")] {
            if !Arc::ptr_eq(c.complex(), cover.nerve()) {
                return Err(Error::Mismatch(format!("{what} must live on the cover's nerve")));
            }
            if c.degree() != deg {
                return Err(Error::DegreeMismatch {
                    expected: deg,
                    found: c.degree(),
                });
            }
        }
        if lambda.coeff() != a.coeff() {
            return Err(Error::Mismatch("λ and a use different groups".into()));
        }
        let rep = coherence_check(&a);
        if let Some(w) = rep.witnesses.into_iter().next() {
            return Err(Error::IncoherentAssociator { witness: w });
        }
        Ok(TwoGerbePresentation {
            cover: cover.clone(),
            lambda,
            a,
        })
    }

    pub fn coeff(&self) -> CoefficientGroup {
        self.a.coeff()
    }
}

/// `g = a − δλ`.
pub fn four_cocycle(p: &TwoGerbePresentation) -> Result<Cochain> {
    if let Some(w) = coherence_check(&p.a).witnesses.into_iter().next() {
        return Err(Error::IncoherentAssociator { witness: w });
    }
    p.a.sub(&p.lambda.d())
}

#[derive(Debug, Clone)]
pub struct ViaRho {
    pub epsilon: Cochain,
    /// `ε` and `four_cocycle(P)` are cohomologous.
    pub same_class: bool,
}

/// Second construction: with `s = ρ_jkl + ρ_ijl` and `t = ρ_ijk + ρ_ikl`,
/// `ε_ijkl = t − s + a_ijkl`.
pub fn four_cocycle_via_rho(p: &TwoGerbePresentation, rho: &Cochain) -> Result<ViaRho> {
    let g = four_cocycle(p)?;
    if rho.degree() != 2 || !Arc::ptr_eq(rho.complex(), p.cover.nerve()) || rho.coeff() != p.coeff() {
        return Err(Error::Mismatch("ρ must be a 2-cochain on the nerve in the same group".into()));
    }
    let nerve = p.cover.nerve();
    let mut vals = Vec::with_capacity(nerve.count(3));
    for i in 0..nerve.count(3) {
        let f = nerve.faces(3, i);
        let s = rho.get(f[0]) + rho.get(f[2]);
        let t = rho.get(f[3]) + rho.get(f[1]);
        vals.push((i, t - s + p.a.get(i)));
    }
    let epsilon = Cochain::from_values(nerve, 3, p.coeff(), vals)?;
    let same_class = cochain_classes_equal(&epsilon, &g)?;
    Ok(ViaRho { epsilon, same_class })
}

/// Lifts each value of a `Z_m` cocycle through the extension's section,
/// applies `δ` in `Ĝ`, and reads the result in the cyclic kernel.
pub fn bockstein_lift_class(g: &Cochain, ext: &CentralExtension) -> Result<CocycleClass> {
    let m = ext.quotient().order();
    if g.coeff() != CoefficientGroup::Cyclic(m as u64) {
        return Err(Error::Mismatch(format!("expected Z_{m} values, found {}", g.coeff())));
    }
    if !ext.total().is_abelian() {
        return Err(Error::RequiresAbelian);
    }
    if let Some(w) = g.d().first_witness() {
        return Err(Error::NotClosed { witness: w });
    }
    let k = g.complex();
    let p = g.degree();
    let h = ext.total();
    let lifted: Vec<usize> = g
        .dense()
        .iter()
        .map(|v| ext.section()[usize::try_from(v.to_integer()).expect("Z_m value")])
        .collect();
    let mut vals = Vec::new();
    for t in 0..k.count(p + 1) {
        let mut x = h.identity();
        for (j, &f) in k.faces(p + 1, t).iter().enumerate() {
            let y = if j % 2 == 0 { lifted[f] } else { h.inv(lifted[f]) };
            x = h.mul(x, y);
        }
        let e = ext.log(x).ok_or_else(|| Error::Invariant {
            kind: "bockstein".into(),
            witness: format!("δ of the lift leaves the kernel at {:?}", k.simplex_labels(p + 1, t)),
        })?;
        vals.push((t, Rational::from_integer(e.into())));
    }
    class_of(Cochain::from_values(k, p + 1, ext.kernel_coeff(), vals)?)
}

/// `g`: `Q/Z` functions on 4-fold intersections; `A`, `γ`, `K`: 1-, 2- and
/// 3-forms on triple, double and single intersections.
#[derive(Debug, Clone)]
pub struct DeligneQuadruple {
    pub cover: Arc<Cover>,
    pub g: CechCochain,
    pub a: CechCochain,
    pub gamma: CechCochain,
    pub k: CechCochain,
}

fn shape(c: &CechCochain, cover: &Arc<Cover>, degree: usize, q: usize, coeff: CoefficientGroup, what: &str) -> Result<()> {
    if !Arc::ptr_eq(c.cover(), cover) || c.degree() != degree || c.inner() != Inner::Form(q) || c.coeff() != coeff {
        return Err(Error::Mismatch(format!("{what} must be a degree-{degree} Čech cochain of {q}-forms over {coeff}")));
    }
    Ok(())
}

impl DeligneQuadruple {
    pub fn new(cover: &Arc<Cover>, g: CechCochain, a: CechCochain, gamma: CechCochain, k: CechCochain) -> Result<Self> {
        shape(&g, cover, 3, 0, RationalsModOne, "g")?;
        shape(&a, cover, 2, 1, Rationals, "A")?;
        shape(&gamma, cover, 1, 2, Rationals, "γ")?;
        shape(&k, cover, 0, 3, Rationals, "K")?;
        Ok(DeligneQuadruple {
            cover: cover.clone(),
            g,
            a,
            gamma,
            k,
        })
    }

    pub fn zero(cover: &Arc<Cover>) -> Self {
        DeligneQuadruple {
            cover: cover.clone(),
            g: CechCochain::zero(cover, 3, Inner::Form(0), RationalsModOne),
            a: CechCochain::zero(cover, 2, Inner::Form(1), Rationals),
            gamma: CechCochain::zero(cover, 1, Inner::Form(2), Rationals),
            k: CechCochain::zero(cover, 0, Inner::Form(3), Rationals),
        }
    }

    /// Back-solves a quadruple representing the integral Čech 4-cocycle `c`.
    pub fn from_integral_class(cover: &Arc<Cover>, c: &Cochain) -> Result<Self> {
        let [g, a, gamma, k] = crate::gerbe::back_solve::<4>(cover, c)?;
        Self::new(cover, g, a, gamma, k)
    }

    /// Adds the total coboundary of `(h, b, e)`: `h` in `Q/Z` on triple
    /// intersections, `b` 1-forms on double, `e` 2-forms on single ones.
    pub fn shifted(&self, h: &CechCochain, b: &CechCochain, e: &CechCochain) -> Result<Self> {
        let cover = &self.cover;
        shape(h, cover, 2, 0, RationalsModOne, "h")?;
        shape(b, cover, 1, 1, Rationals, "b")?;
        shape(e, cover, 0, 2, Rationals, "e")?;
        let g = self.g.add(&h.delta())?;
        let a = self.a.add(&lift_q(h).d()?)?.add(&b.delta())?;
        let gamma = self.gamma.add(&b.d()?)?.add(&e.delta())?;
        let k = self.k.add(&e.d()?)?;
        Self::new(cover, g, a, gamma, k)
    }

    /// Total cochain of degree 3 in `Z → Ω⁰ → … → Ω³`:
    /// `(−δG, G, A, −γ, −K)` with `G = lift g + n`.
    pub fn to_total(&self) -> Result<TotalCochain> {
        let report = deligne2_validate(self);
        if let Some(f) = report.failures.first() {
            return Err(Error::InvalidQuadruple(format!("{:?} fails at {:?}", f.condition, f.witness)));
        }
        let big_g = self.integral_lift(&report)?;
        let c = constants_of(&big_g.delta())?.with_coeff(Integers).neg();
        let x = TotalCochain::zero(&TotalShape::deligne(&self.cover, 3), 3)
            .with_constant(c)?
            .with_piece(big_g)?
            .with_piece(self.a.clone())?
            .with_piece(self.gamma.neg())?
            .with_piece(self.k.neg())?;
        debug_assert!(x.differential().is_zero());
        Ok(x)
    }

    fn integral_lift(&self, report: &ValidationReport) -> Result<CechCochain> {
        let n = report.slack.as_ref().expect("valid report carries slack");
        lift_q(&self.g).add(&n.with_coeff(Rationals))
    }

    /// The integral Čech 4-cocycle `δ(lift g + n)`: the image of `g` under
    /// the connecting map of `Z → Q → Q/Z`.
    pub fn connecting_class(&self) -> Result<Cochain> {
        let report = deligne2_validate(self);
        if !report.is_valid() {
            return Err(Error::InvalidQuadruple(format!("{:?}", report.failures[0])));
        }
        Ok(constants_of(&self.integral_lift(&report)?.delta())?.with_coeff(Integers))
    }
}

/// Checks `δg = 0`, `δA − d(lift g)` integer-exact, `dA = δγ`, `dγ = δK`.
pub fn deligne2_validate(q: &DeligneQuadruple) -> ValidationReport {
    let mut failures = Vec::new();
    let push = |failures: &mut Vec<Failure>, condition, c: CechCochain| {
        if let Some(w) = c.first_witness() {
            failures.push(Failure { condition, witness: w });
        }
    };
    push(&mut failures, Condition::Cocycle, q.g.delta());
    let slack = crate::gerbe::dlog_check(&q.g, &q.a, &mut failures);
    push(&mut failures, Condition::Curving, q.a.d().expect("form").sub(&q.gamma.delta()).expect("shape"));
    push(&mut failures, Condition::TopForm, q.gamma.d().expect("form").sub(&q.k.delta()).expect("shape"));
    ValidationReport { failures, slack }
}

#[derive(Debug, Clone)]
pub struct FourForm {
    pub theta: GlobalForm,
    /// The zig-zag of `Θ` lands in the class of the connecting image of `g`.
    pub class_matches: bool,
}

/// `Θ` with `Θ|U_i = dK_i`, its periods, and the class comparison.
pub fn four_form(q: &DeligneQuadruple) -> Result<FourForm> {
    let report = deligne2_validate(q);
    if let Some(f) = report.failures.first() {
        return Err(Error::InvalidQuadruple(format!("{:?} fails at {:?}", f.condition, f.witness)));
    }
    let theta = global_form(&q.k.d()?)?;
    let c = q.connecting_class()?;
    let class_matches = crate::gerbe::zigzag_matches(&q.cover, &theta.form, &c)?;
    Ok(FourForm { theta, class_matches })
}

/// `h` with `δh = g` for `g = four_cocycle(P)`, or the nonzero class.
pub fn trivialize_two_gerbe(p: &TwoGerbePresentation) -> Result<Trivialization<Cochain>> {
    let g = four_cocycle(p)?;
    match solve_coboundary(&g)? {
        Some(h) => {
            if h.d() != g {
                return Err(Error::Invariant {
                    kind: "trivialize_two_gerbe".into(),
                    witness: "δh ≠ g".into(),
                });
            }
            Ok(Trivialization::Trivial(h))
        }
        None => {
            let class = match g.coeff() {
                RationalsModOne => vec![],
                coeff => cohomology(g.complex(), 3, coeff)?.coordinates(&g)?,
            };
            Ok(Trivialization::Obstructed(Box::new(Certificate {
                location: Location::Nerve,
                cocycle: g,
                class,
                note: "four-class is nonzero".into(),
            })))
        }
    }
}
