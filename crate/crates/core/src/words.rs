//! Non-homogeneous coordinates on `EG` and `BG`, the step-function model,
//! the projection `p`, the section `s`, and the classifying-map words built
//! from a Čech 2-cocycle and partition-of-unity weights.

use std::fmt;
use std::sync::Arc;

use itertools::Itertools;
use num_traits::{One, Zero};

use crate::cochain::{Cochain, CoefficientGroup};
use crate::error::{Error, Result};
use crate::exact::{fmt_rational, parse_rational, Rational};
use crate::simplicial::{FiniteGroup, SimplicialComplex};

/// `|t_1,…,t_p, h_0[h_1|…|h_p]|`, always normalized.
#[derive(Clone, PartialEq, Eq)]
pub struct EgWord {
    group: Arc<FiniteGroup>,
    times: Vec<Rational>,
    base: usize,
    letters: Vec<usize>,
}

/// `|t_1,…,t_p, [h_1|…|h_p]|`, always normalized.
#[derive(Clone, PartialEq, Eq)]
pub struct BgWord {
    group: Arc<FiniteGroup>,
    times: Vec<Rational>,
    letters: Vec<usize>,
}

/// A `G`-valued function on `(0,1]`, constant on each `(τ_i, τ_{i+1}]`.
/// `breaks` holds the interior breakpoints; `values` has one more entry.
#[derive(Clone, PartialEq, Eq)]
pub struct StepFunction {
    group: Arc<FiniteGroup>,
    breaks: Vec<Rational>,
    values: Vec<usize>,
}

fn check_times(times: &[Rational], letters: usize) -> Result<()> {
    if times.len() != letters {
        return Err(Error::MalformedWord(format!("{} times but {letters} letters", times.len())));
    }
    if let Some(t) = times.iter().find(|t| **t < Rational::zero() || **t > Rational::one()) {
        return Err(Error::MalformedWord(format!("time {} outside [0,1]", fmt_rational(t))));
    }
    if times.windows(2).any(|w| w[0] > w[1]) {
        return Err(Error::MalformedWord("times must be non-decreasing".into()));
    }
    Ok(())
}

fn check_letters(g: &FiniteGroup, letters: &[usize]) -> Result<()> {
    match letters.iter().find(|&&h| h >= g.order()) {
        Some(h) => Err(Error::MalformedWord(format!("letter {h} is not a group element"))),
        None => Ok(()),
    }
}

/// Merges equal adjacent times by multiplying their letters in order.
fn merge_ties(g: &FiniteGroup, times: Vec<Rational>, letters: Vec<usize>) -> (Vec<Rational>, Vec<usize>) {
    let mut ts: Vec<Rational> = Vec::with_capacity(times.len());
    let mut hs: Vec<usize> = Vec::with_capacity(letters.len());
    for (t, h) in times.into_iter().zip(letters) {
        if ts.last() == Some(&t) {
            let last = hs.last_mut().unwrap();
            *last = g.mul(*last, h);
        } else {
            ts.push(t);
            hs.push(h);
        }
    }
    (ts, hs)
}

impl EgWord {
    /// Normalizes a raw word with weakly increasing times in `[0,1]`:
    /// equal times merge, a letter at `0` is absorbed into `h_0`, a letter at
    /// `1` is dropped, identity letters are deleted.
    pub fn new(group: &Arc<FiniteGroup>, times: Vec<Rational>, base: usize, letters: Vec<usize>) -> Result<Self> {
        check_times(&times, letters.len())?;
        check_letters(group, &letters)?;
        check_letters(group, &[base])?;
        Ok(Self::normalized(group, times, base, letters))
    }

    fn normalized(group: &Arc<FiniteGroup>, times: Vec<Rational>, mut base: usize, letters: Vec<usize>) -> Self {
        let (times, letters) = merge_ties(group, times, letters);
        let mut ts = Vec::new();
        let mut hs = Vec::new();
        for (t, h) in times.into_iter().zip(letters) {
            if t.is_zero() {
                base = group.mul(base, h);
            } else if t.is_one() || h == group.identity() {
                continue;
            } else {
                ts.push(t);
                hs.push(h);
            }
        }
        EgWord {
            group: group.clone(),
            times: ts,
            base,
            letters: hs,
        }
    }

    pub fn identity(group: &Arc<FiniteGroup>) -> Self {
        Self::constant(group, group.identity())
    }

    /// The constant word `|h[ ]|`, the image of `h` under `G → EG`.
    pub fn constant(group: &Arc<FiniteGroup>, h: usize) -> Self {
        EgWord {
            group: group.clone(),
            times: vec![],
            base: h,
            letters: vec![],
        }
    }

    pub fn group(&self) -> &Arc<FiniteGroup> {
        &self.group
    }

    pub fn times(&self) -> &[Rational] {
        &self.times
    }

    pub fn base(&self) -> usize {
        self.base
    }

    pub fn letters(&self) -> &[usize] {
        &self.letters
    }

    pub fn len(&self) -> usize {
        self.letters.len()
    }

    pub fn is_empty(&self) -> bool {
        self.letters.is_empty()
    }

    pub fn is_identity(&self) -> bool {
        self.letters.is_empty() && self.base == self.group.identity()
    }

    /// Step function taking the value `h_0 h_1 ⋯ h_i` on `(t_i, t_{i+1}]`.
    pub fn to_step(&self) -> StepFunction {
        let mut values = vec![self.base];
        for &h in &self.letters {
            values.push(self.group.mul(*values.last().unwrap(), h));
        }
        StepFunction {
            group: self.group.clone(),
            breaks: self.times.clone(),
            values,
        }
    }

    pub fn from_step(f: &StepFunction) -> Self {
        let g = &f.group;
        let letters = f.values.windows(2).map(|w| g.mul(g.inv(w[0]), w[1])).collect();
        EgWord {
            group: g.clone(),
            times: f.breaks.clone(),
            base: f.values[0],
            letters,
        }
    }
}

/// Normalizes a raw `EG` word.
pub fn normalize_eg(group: &Arc<FiniteGroup>, times: Vec<Rational>, base: usize, letters: Vec<usize>) -> Result<EgWord> {
    EgWord::new(group, times, base, letters)
}

/// Normalizes a raw `BG` word.
pub fn normalize_bg(group: &Arc<FiniteGroup>, times: Vec<Rational>, letters: Vec<usize>) -> Result<BgWord> {
    BgWord::new(group, times, letters)
}

impl BgWord {
    /// Normalizes: equal times merge, entries at `0` or `1` and identity
    /// letters are dropped.
    pub fn new(group: &Arc<FiniteGroup>, times: Vec<Rational>, letters: Vec<usize>) -> Result<Self> {
        check_times(&times, letters.len())?;
        check_letters(group, &letters)?;
        Ok(Self::normalized(group, times, letters))
    }

    fn normalized(group: &Arc<FiniteGroup>, times: Vec<Rational>, letters: Vec<usize>) -> Self {
        let (times, letters) = merge_ties(group, times, letters);
        let (times, letters) = times
            .into_iter()
            .zip(letters)
            .filter(|(t, h)| !t.is_zero() && !t.is_one() && *h != group.identity())
            .unzip();
        BgWord {
            group: group.clone(),
            times,
            letters,
        }
    }

    pub fn point(group: &Arc<FiniteGroup>) -> Self {
        BgWord {
            group: group.clone(),
            times: vec![],
            letters: vec![],
        }
    }

    pub fn group(&self) -> &Arc<FiniteGroup> {
        &self.group
    }

    pub fn times(&self) -> &[Rational] {
        &self.times
    }

    pub fn letters(&self) -> &[usize] {
        &self.letters
    }

    pub fn is_point(&self) -> bool {
        self.letters.is_empty()
    }
}

impl StepFunction {
    /// Adjacent equal values are merged.
    pub fn new(group: &Arc<FiniteGroup>, breaks: Vec<Rational>, values: Vec<usize>) -> Result<Self> {
        if values.len() != breaks.len() + 1 {
            return Err(Error::MalformedWord("need one more value than breakpoints".into()));
        }
        if breaks.iter().any(|t| *t <= Rational::zero() || *t >= Rational::one()) || breaks.windows(2).any(|w| w[0] >= w[1]) {
            return Err(Error::MalformedWord("breakpoints must increase strictly inside (0,1)".into()));
        }
        check_letters(group, &values)?;
        Ok(Self::normalized(group, breaks, values))
    }

    fn normalized(group: &Arc<FiniteGroup>, breaks: Vec<Rational>, values: Vec<usize>) -> Self {
        let mut bs = Vec::new();
        let mut vs = vec![values[0]];
        for (t, v) in breaks.into_iter().zip(values.into_iter().skip(1)) {
            if *vs.last().unwrap() != v {
                bs.push(t);
                vs.push(v);
            }
        }
        StepFunction {
            group: group.clone(),
            breaks: bs,
            values: vs,
        }
    }

    pub fn breaks(&self) -> &[Rational] {
        &self.breaks
    }

    pub fn values(&self) -> &[usize] {
        &self.values
    }

    /// Value on the interval just to the right of `t` (`0 ≤ t < 1`).
    pub fn right_of(&self, t: &Rational) -> usize {
        self.values[self.breaks.iter().take_while(|b| *b <= t).count()]
    }

    /// Pointwise product.
    pub fn mul(&self, other: &StepFunction) -> Result<StepFunction> {
        if self.group != other.group {
            return Err(Error::Mismatch("step functions over different groups".into()));
        }
        let breaks: Vec<Rational> = self.breaks.iter().merge(&other.breaks).dedup().cloned().collect();
        let values = std::iter::once(Rational::zero())
            .chain(breaks.iter().cloned())
            .map(|t| self.group.mul(self.right_of(&t), other.right_of(&t)))
            .collect();
        Ok(Self::normalized(&self.group, breaks, values))
    }

    /// Pointwise inverse.
    pub fn inv(&self) -> StepFunction {
        StepFunction {
            group: self.group.clone(),
            breaks: self.breaks.clone(),
            values: self.values.iter().map(|&v| self.group.inv(v)).collect(),
        }
    }
}

/// Group law in non-homogeneous coordinates: combined times are sorted by a
/// permutation `σ`, letters of `b` pass through, and a letter of `a` is
/// conjugated by `h_0'` followed by the `b` letters already passed.
pub fn eg_mul(a: &EgWord, b: &EgWord) -> Result<EgWord> {
    if a.group != b.group {
        return Err(Error::Mismatch("words over different groups".into()));
    }
    let g = &a.group;
    let h0p = b.base;
    let mut entries: Vec<(&Rational, bool, usize)> = a
        .times
        .iter()
        .zip(&a.letters)
        .map(|(t, &h)| (t, true, h))
        .chain(b.times.iter().zip(&b.letters).map(|(t, &h)| (t, false, h)))
        .collect();
    entries.sort_by(|x, y| x.0.cmp(y.0));
    let mut passed = g.identity();
    let mut times = Vec::with_capacity(entries.len());
    let mut letters = Vec::with_capacity(entries.len());
    for (t, from_a, h) in entries {
        let k = if from_a {
            let c = g.mul(h0p, passed);
            g.prod([g.inv(c), h, c])
        } else {
            passed = g.mul(passed, h);
            h
        };
        times.push(t.clone());
        letters.push(k);
    }
    Ok(EgWord::normalized(g, times, g.mul(a.base, h0p), letters))
}

/// Inverse through the step-function model (pointwise inverse).
pub fn eg_inv(a: &EgWord) -> EgWord {
    EgWord::from_step(&a.to_step().inv())
}

/// Abelian `BG` product: merge and sort times, carry letters.
pub fn bg_mul(a: &BgWord, b: &BgWord) -> Result<BgWord> {
    if a.group != b.group {
        return Err(Error::Mismatch("words over different groups".into()));
    }
    if !a.group.is_abelian() {
        return Err(Error::RequiresAbelian);
    }
    let (times, letters) = a
        .times
        .iter()
        .zip(&a.letters)
        .merge_by(b.times.iter().zip(&b.letters), |x, y| x.0 <= y.0)
        .map(|(t, &h)| (t.clone(), h))
        .unzip();
    Ok(BgWord::normalized(&a.group, times, letters))
}

/// Abelian `BG` inverse: invert every letter.
pub fn bg_inv(a: &BgWord) -> Result<BgWord> {
    if !a.group.is_abelian() {
        return Err(Error::RequiresAbelian);
    }
    let letters = a.letters.iter().map(|&h| a.group.inv(h)).collect();
    Ok(BgWord::normalized(&a.group, a.times.clone(), letters))
}

/// `p: EG → BG` drops `h_0`.
pub fn project_p(a: &EgWord) -> BgWord {
    BgWord::normalized(&a.group, a.times.clone(), a.letters.clone())
}

/// `s: BG → EG` for abelian `G`, with base letter the identity.
pub fn section_s(b: &BgWord) -> Result<EgWord> {
    if !b.group.is_abelian() {
        return Err(Error::RequiresAbelian);
    }
    Ok(EgWord {
        group: b.group.clone(),
        times: b.times.clone(),
        base: b.group.identity(),
        letters: b.letters.clone(),
    })
}

fn fmt_parts(f: &mut fmt::Formatter<'_>, g: &FiniteGroup, times: &[Rational], base: Option<usize>, letters: &[usize]) -> fmt::Result {
    write!(f, "{};", times.iter().map(fmt_rational).join(","))?;
    if let Some(b) = base {
        write!(f, "{};", g.name(b))?;
    }
    write!(f, "[{}]", letters.iter().map(|&h| g.name(h)).join("|"))
}

/// Word literal: `t1,...,tp;h0;[h1|...|hp]`.
impl fmt::Display for EgWord {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt_parts(f, &self.group, &self.times, Some(self.base), &self.letters)
    }
}

impl fmt::Debug for EgWord {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "EG({self})")
    }
}

/// Word literal: `t1,...,tp;[h1|...|hp]`.
impl fmt::Display for BgWord {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt_parts(f, &self.group, &self.times, None, &self.letters)
    }
}

impl fmt::Debug for BgWord {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "BG({self})")
    }
}

impl fmt::Debug for StepFunction {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Step({}", self.group.name(self.values[0]))?;
        for (t, v) in self.breaks.iter().zip(&self.values[1..]) {
            write!(f, " |{}| {}", fmt_rational(t), self.group.name(*v))?;
        }
        write!(f, ")")
    }
}

type RawParts = (Vec<Rational>, Option<usize>, Vec<usize>);

fn parse_parts(g: &FiniteGroup, s: &str, with_base: bool) -> Result<RawParts> {
    let fields: Vec<&str> = s.split(';').map(str::trim).collect();
    let expected = if with_base { 3 } else { 2 };
    if fields.len() != expected {
        return Err(Error::MalformedWord(format!("expected {expected} ';'-separated fields in {s:?}")));
    }
    let times = if fields[0].is_empty() {
        vec![]
    } else {
        fields[0]
            .split(',')
            .map(|t| parse_rational(t.trim()).ok_or_else(|| Error::MalformedWord(format!("bad time {t:?}"))))
            .collect::<Result<_>>()?
    };
    let elem = |name: &str| g.element(name.trim()).ok_or_else(|| Error::MalformedWord(format!("unknown element {name:?}")));
    let base = if with_base { Some(elem(fields[1])?) } else { None };
    let bar = fields[expected - 1];
    let inner = bar
        .strip_prefix('[')
        .and_then(|b| b.strip_suffix(']'))
        .ok_or_else(|| Error::MalformedWord(format!("letters must be bracketed in {bar:?}")))?;
    let letters = if inner.trim().is_empty() {
        vec![]
    } else {
        inner.split('|').map(elem).collect::<Result<_>>()?
    };
    Ok((times, base, letters))
}

pub fn parse_eg(group: &Arc<FiniteGroup>, s: &str) -> Result<EgWord> {
    let (times, base, letters) = parse_parts(group, s, true)?;
    EgWord::new(group, times, base.unwrap(), letters)
}

pub fn parse_bg(group: &Arc<FiniteGroup>, s: &str) -> Result<BgWord> {
    let (times, _, letters) = parse_parts(group, s, false)?;
    BgWord::new(group, times, letters)
}

/// Partition-of-unity weights at one sample point. `locus` is the set of
/// members whose intersection contains the point; it defaults to the
/// support of the weights.
#[derive(Debug, Clone)]
pub struct Sample {
    pub weights: Vec<(u32, Rational)>,
    pub locus: Option<Vec<u32>>,
}

impl Sample {
    pub fn new(weights: Vec<(u32, Rational)>) -> Self {
        Sample { weights, locus: None }
    }
}

#[derive(Debug, Clone)]
pub struct SampleReport {
    /// Ordered support `i_0 < … < i_n` and cumulative times `ψ_1,…,ψ_n`.
    pub support: Vec<u32>,
    pub psi: Vec<Rational>,
    pub transitions: Vec<((u32, u32), BgWord)>,
    pub lifts: Vec<((u32, u32), EgWord)>,
    /// `g_jk · g_ik⁻¹ · g_ij` is the point word for every triple.
    pub cocycle_holds: bool,
    /// `ĝ_jk · ĝ_ik⁻¹ · ĝ_ij = i(g_ijk)` for every triple.
    pub lift_holds: bool,
}

#[derive(Debug, Clone)]
pub struct Classification {
    pub group: Arc<FiniteGroup>,
    pub samples: Vec<SampleReport>,
}

impl Classification {
    pub fn holds(&self) -> bool {
        self.samples.iter().all(|s| s.cocycle_holds && s.lift_holds)
    }
}

/// A random sample: positive weights on a nonempty face of a random
/// top-dimensional nerve simplex, which serves as the locus.
pub fn random_sample(nerve: &SimplicialComplex, rng: &mut impl rand::Rng) -> Sample {
    let d = nerve.dim();
    let locus = nerve.simplex(d, rng.gen_range(0..nerve.count(d))).to_vec();
    let mut support: Vec<u32> = locus.iter().copied().filter(|_| rng.gen_bool(0.6)).collect();
    if support.is_empty() {
        support.push(locus[rng.gen_range(0..locus.len())]);
    }
    let raw: Vec<i64> = support.iter().map(|_| rng.gen_range(1..10)).collect();
    let total: i64 = raw.iter().sum();
    let weights = support.iter().zip(&raw).map(|(&v, &w)| (v, Rational::new(w.into(), total.into()))).collect();
    Sample {
        weights,
        locus: Some(locus),
    }
}

/// Builds the `BG`-valued transition words `g_ij` and their canonical `EG`
/// lifts `ĝ_ij` from a `Z_n`-valued Čech 2-cocycle on a nerve, and checks
/// the 1-cocycle condition and `δĝ = i(g)` at every sample.
pub fn classify_cocycle(g: &Cochain, samples: &[Sample]) -> Result<Classification> {
    let CoefficientGroup::Cyclic(n) = g.coeff() else {
        return Err(Error::Mismatch(format!("expected Z_n values, found {}", g.coeff())));
    };
    if g.degree() != 2 {
        return Err(Error::DegreeMismatch {
            expected: 2,
            found: g.degree(),
        });
    }
    if let Some(w) = g.d().first_witness() {
        return Err(Error::NotClosed { witness: w });
    }
    let group = Arc::new(FiniteGroup::cyclic(n as usize));
    let nerve = g.complex();
    let elem = |t: &[u32]| -> usize { g.get_ordered(t).to_integer().try_into().expect("Z_n representative") };
    let mut reports = Vec::with_capacity(samples.len());
    for sample in samples {
        let mut ws: Vec<(u32, Rational)> = sample.weights.iter().filter(|(_, w)| !w.is_zero()).cloned().collect();
        ws.sort_by_key(|(i, _)| *i);
        if ws.iter().any(|(_, w)| *w < Rational::zero()) {
            return Err(Error::BadSupport("negative weight".into()));
        }
        if ws.iter().map(|(_, w)| w).sum::<Rational>() != Rational::one() {
            return Err(Error::BadSupport("weights do not sum to 1".into()));
        }
        let support: Vec<u32> = ws.iter().map(|(i, _)| *i).collect();
        if support.iter().duplicates().next().is_some() || !nerve.contains(&support) {
            return Err(Error::BadSupport(format!("support {:?} is not a nerve simplex", nerve.labels_of(&support))));
        }
        let mut locus = sample.locus.clone().unwrap_or_else(|| support.clone());
        locus.sort();
        locus.dedup();
        if !nerve.contains(&locus) || support.iter().any(|i| !locus.contains(i)) {
            return Err(Error::BadSupport("locus must be a nerve simplex containing the support".into()));
        }
        let mut psi = Vec::new();
        let mut acc = Rational::zero();
        for (_, w) in &ws[..ws.len() - 1] {
            acc += w;
            psi.push(acc.clone());
        }
        let word = |i: u32, j: u32| -> (BgWord, EgWord) {
            let vals: Vec<usize> = support.iter().map(|&r| elem(&[i, j, r])).collect();
            let letters: Vec<usize> = vals.windows(2).map(|w| group.mul(group.inv(w[0]), w[1])).collect();
            let bg = BgWord::normalized(&group, psi.clone(), letters.clone());
            let eg = EgWord::normalized(&group, psi.clone(), vals[0], letters);
            (bg, eg)
        };
        let mut transitions = Vec::new();
        let mut lifts = Vec::new();
        for (&i, &j) in locus.iter().tuple_combinations() {
            let (b, e) = word(i, j);
            transitions.push(((i, j), b));
            lifts.push(((i, j), e));
        }
        let find = |i: u32, j: u32| transitions.iter().position(|(k, _)| *k == (i, j)).unwrap();
        let mut cocycle_holds = true;
        let mut lift_holds = true;
        for (&i, &j, &k) in locus.iter().tuple_combinations() {
            let (ij, ik, jk) = (find(i, j), find(i, k), find(j, k));
            let b = bg_mul(&bg_mul(&transitions[jk].1, &bg_inv(&transitions[ik].1)?)?, &transitions[ij].1)?;
            cocycle_holds &= b.is_point();
            let e = eg_mul(&eg_mul(&lifts[jk].1, &eg_inv(&lifts[ik].1))?, &lifts[ij].1)?;
            lift_holds &= e == EgWord::constant(&group, elem(&[i, j, k]));
        }
        reports.push(SampleReport {
            support,
            psi,
            transitions,
            lifts,
            cocycle_holds,
            lift_holds,
        });
    }
    Ok(Classification { group, samples: reports })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::cech::vertex_star_cover;
    use crate::cochain::{cohomology, Cyclic};
    use crate::exact::frac;
    use crate::standard;
    use proptest::prelude::*;

    fn z(n: usize) -> Arc<FiniteGroup> {
        Arc::new(FiniteGroup::cyclic(n))
    }

    fn s3() -> Arc<FiniteGroup> {
        Arc::new(FiniteGroup::symmetric(3))
    }

    fn arb_word(order: usize) -> impl Strategy<Value = (Vec<(i64, usize)>, usize)> {
        (prop::collection::vec((0i64..=12, 0..order), 0..6), 0..order)
    }

    fn build(g: &Arc<FiniteGroup>, raw: (Vec<(i64, usize)>, usize)) -> EgWord {
        let (mut entries, base) = raw;
        entries.sort_by_key(|e| e.0);
        let (times, letters) = entries.into_iter().map(|(t, h)| (frac(t, 12), h)).unzip();
        EgWord::new(g, times, base, letters).unwrap()
    }

    #[test]
    fn normalization_examples() {
        let g = s3();
        let (h0, h1, h2) = (1, 2, 3);
        let w = EgWord::new(&g, vec![frac(0, 1), frac(1, 3)], h0, vec![h1, h2]).unwrap();
        assert_eq!(w, EgWord::new(&g, vec![frac(1, 3)], g.mul(h0, h1), vec![h2]).unwrap());
        assert_eq!(w.letters(), &[h2]);
        let w = EgWord::new(&g, vec![frac(1, 2), frac(1, 2)], h0, vec![h1, h2]).unwrap();
        assert_eq!(w.times(), &[frac(1, 2)]);
        assert_eq!(w.letters(), &[g.mul(h1, h2)]);
        let w = EgWord::new(&g, vec![frac(1, 3)], h0, vec![g.identity()]).unwrap();
        assert!(w.is_empty());
        assert_eq!(w.base(), h0);
        let w = EgWord::new(&g, vec![frac(1, 2), frac(1, 1)], h0, vec![h1, h2]).unwrap();
        assert_eq!(w.letters(), &[h1]);
        assert!(matches!(EgWord::new(&g, vec![frac(3, 2)], 0, vec![1]), Err(Error::MalformedWord(_))));
        assert!(matches!(EgWord::new(&g, vec![frac(2, 3), frac(1, 3)], 0, vec![1, 1]), Err(Error::MalformedWord(_))));
    }

    #[test]
    fn abelian_product_example() {
        let g = z(3);
        let a = EgWord::new(&g, vec![frac(1, 3)], 1, vec![2]).unwrap();
        let b = EgWord::new(&g, vec![frac(2, 3)], 1, vec![1]).unwrap();
        let ab = eg_mul(&a, &b).unwrap();
        assert_eq!(ab, EgWord::new(&g, vec![frac(1, 3), frac(2, 3)], 2, vec![2, 1]).unwrap());
        assert_eq!(eg_mul(&EgWord::identity(&g), &b).unwrap(), b);
        let inv = eg_inv(&a);
        assert_eq!(inv, EgWord::new(&g, vec![frac(1, 3)], 2, vec![1]).unwrap());
    }

    #[test]
    fn bg_examples() {
        let g = z(2);
        let a = BgWord::new(&g, vec![frac(1, 2)], vec![1]).unwrap();
        assert!(bg_mul(&a, &a).unwrap().is_point());
        assert_eq!(bg_mul(&BgWord::point(&g), &a).unwrap(), a);
        let e = EgWord::new(&g, vec![frac(1, 2)], 1, vec![1]).unwrap();
        assert_eq!(project_p(&e), a);
        let s = section_s(&a).unwrap();
        assert_eq!(s, EgWord::new(&g, vec![frac(1, 2)], 0, vec![1]).unwrap());
        assert_eq!(project_p(&s), a);
        assert!(matches!(bg_mul(&BgWord::point(&s3()), &BgWord::point(&s3())), Err(Error::RequiresAbelian)));
        assert!(matches!(section_s(&BgWord::point(&s3())), Err(Error::RequiresAbelian)));
    }

    #[test]
    fn word_literals_round_trip() {
        let g = s3();
        let w = parse_eg(&g, "1/3,1/2;120;[102|021]").unwrap();
        assert_eq!(w.to_string(), "1/3,1/2;120;[102|021]");
        assert_eq!(parse_eg(&g, ";012;[]").unwrap(), EgWord::identity(&g));
        let b = parse_bg(&z(4), "1/4;[3]").unwrap();
        assert_eq!(b.to_string(), "1/4;[3]");
        assert!(parse_eg(&g, "1/3;[102]").is_err());
        assert!(parse_bg(&z(4), "1/4;[7]").is_err());
    }

    #[test]
    fn step_round_trip() {
        let g = s3();
        let w = parse_eg(&g, "1/4,1/2,3/4;120;[102|021|201]").unwrap();
        assert_eq!(EgWord::from_step(&w.to_step()), w);
        let f = StepFunction::new(&g, vec![frac(1, 3), frac(2, 3)], vec![1, 1, 4]).unwrap();
        assert_eq!(f.breaks(), &[frac(2, 3)]);
        assert_eq!(EgWord::from_step(&f).to_step(), f);
    }

    #[test]
    fn classify_zero_and_generator() {
        let cover = vertex_star_cover(&standard::boundary_simplex(3)).unwrap();
        let nerve = cover.nerve().clone();
        let zero = Cochain::zero(&nerve, 2, Cyclic(2));
        let s = Sample::new(vec![(0, frac(1, 3)), (1, frac(1, 3)), (2, frac(1, 3))]);
        let r = classify_cocycle(&zero, &[s.clone()]).unwrap();
        assert!(r.holds());
        assert!(r.samples[0].transitions.iter().all(|(_, w)| w.is_point()));
        let gen = cohomology(&nerve, 2, Cyclic(2)).unwrap().generators[0].clone();
        let r = classify_cocycle(&gen, &[s]).unwrap();
        assert!(r.holds());
        let bad = Sample::new(vec![(0, frac(1, 2)), (1, frac(1, 4)), (2, frac(1, 8)), (3, frac(1, 8))]);
        assert!(matches!(classify_cocycle(&gen, &[bad]), Err(Error::BadSupport(_))));
    }

    proptest! {
        #[test]
        fn product_matches_step_oracle(a in arb_word(6), b in arb_word(6), c in arb_word(6)) {
            for g in [s3(), z(6)] {
                let (a, b, c) = (build(&g, a.clone()), build(&g, b.clone()), build(&g, c.clone()));
                let ab = eg_mul(&a, &b).unwrap();
                prop_assert_eq!(ab.to_step(), a.to_step().mul(&b.to_step()).unwrap());
                prop_assert_eq!(eg_mul(&ab, &c).unwrap(), eg_mul(&a, &eg_mul(&b, &c).unwrap()).unwrap());
                prop_assert!(eg_mul(&a, &eg_inv(&a)).unwrap().is_identity());
                prop_assert!(eg_mul(&eg_inv(&a), &a).unwrap().is_identity());
                let re = EgWord::new(&g, a.times().to_vec(), a.base(), a.letters().to_vec()).unwrap();
                prop_assert_eq!(re, a);
            }
        }

        #[test]
        fn abelian_projection_and_section(a in arb_word(4), b in arb_word(4)) {
            let g = z(4);
            let (a, b) = (build(&g, a), build(&g, b));
            let (pa, pb) = (project_p(&a), project_p(&b));
            prop_assert_eq!(project_p(&eg_mul(&a, &b).unwrap()), bg_mul(&pa, &pb).unwrap());
            prop_assert_eq!(project_p(&section_s(&pa).unwrap()), pa.clone());
            prop_assert_eq!(
                section_s(&bg_mul(&pa, &pb).unwrap()).unwrap(),
                eg_mul(&section_s(&pa).unwrap(), &section_s(&pb).unwrap()).unwrap()
            );
            prop_assert_eq!(bg_mul(&pa, &pb).unwrap(), bg_mul(&pb, &pa).unwrap());
        }
    }
}
