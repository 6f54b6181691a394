//! JSON documents: parsing, cross-reference resolution and rendering.
//!
//! A file holds one document or an array of documents, each an object
//! `{kind, name, body}`. Rationals are written `"p/q"` or as JSON integers;
//! floating point is rejected.

use std::collections::BTreeMap;
use std::sync::Arc;

use serde_json::{json, Map, Value};

use crate::cech::{vertex_star_cover, CechCochain, Cover, Inner};
use crate::cochain::{Cochain, CoefficientGroup, Integers, Rationals, RationalsModOne};
use crate::error::{Error, Result};
use crate::exact::{fmt_rational, parse_rational, Rational};
use crate::gerbe::{CentralExtension, DeligneTriple, GerbePresentation};
use crate::simplicial::{FiniteGroup, SimplicialComplex, Subcomplex};
use crate::standard;
use crate::two_gerbe::{DeligneQuadruple, TwoGerbePresentation};
use crate::words::{parse_bg, parse_eg, BgWord, EgWord};

const KINDS: &[&str] = &[
    "group",
    "complex",
    "cover",
    "extension",
    "word",
    "cochain",
    "cech-cochain",
    "gerbe",
    "two-gerbe",
    "deligne3",
    "deligne4",
];

#[derive(Debug, Clone)]
pub enum Word {
    Eg(EgWord),
    Bg(BgWord),
}

/// A resolved bundle of documents.
#[derive(Debug, Default)]
pub struct Registry {
    pub groups: BTreeMap<String, Arc<FiniteGroup>>,
    pub complexes: BTreeMap<String, Arc<SimplicialComplex>>,
    pub covers: BTreeMap<String, Arc<Cover>>,
    pub extensions: BTreeMap<String, CentralExtension>,
    pub words: BTreeMap<String, Word>,
    pub cochains: BTreeMap<String, Cochain>,
    pub cech: BTreeMap<String, CechCochain>,
    pub gerbes: BTreeMap<String, GerbePresentation>,
    pub two_gerbes: BTreeMap<String, TwoGerbePresentation>,
    pub triples: BTreeMap<String, DeligneTriple>,
    pub quadruples: BTreeMap<String, DeligneQuadruple>,
    /// Raw associator of every two-gerbe document, coherent or not.
    pub associators: BTreeMap<String, Cochain>,
    lenient: bool,
}

struct Doc {
    kind: String,
    name: String,
    body: Value,
    path: String,
    loc: String,
}

struct Ctx<'a> {
    path: &'a str,
    loc: String,
}

impl Ctx<'_> {
    fn at(&self, key: impl std::fmt::Display) -> Ctx<'_> {
        Ctx {
            path: self.path,
            loc: format!("{}/{}", self.loc, key),
        }
    }

    fn err<T>(&self, message: impl Into<String>) -> Result<T> {
        Err(Error::Parse {
            path: self.path.into(),
            location: if self.loc.is_empty() { "/".into() } else { self.loc.clone() },
            message: message.into(),
        })
    }

    fn field<'v>(&self, v: &'v Value, key: &str) -> Result<&'v Value> {
        match v.get(key) {
            Some(x) => Ok(x),
            None => self.err(format!("missing field {key:?}")),
        }
    }

    fn str<'v>(&self, v: &'v Value) -> Result<&'v str> {
        v.as_str().map_or_else(|| self.err("expected a string"), Ok)
    }

    fn usize(&self, v: &Value) -> Result<usize> {
        v.as_u64().map_or_else(|| self.err("expected a non-negative integer"), |n| Ok(n as usize))
    }

    fn array<'v>(&self, v: &'v Value) -> Result<&'v Vec<Value>> {
        v.as_array().map_or_else(|| self.err("expected an array"), Ok)
    }

    fn object<'v>(&self, v: &'v Value) -> Result<&'v Map<String, Value>> {
        v.as_object().map_or_else(|| self.err("expected an object"), Ok)
    }

    fn label(&self, v: &Value) -> Result<String> {
        match v {
            Value::String(s) => Ok(s.clone()),
            Value::Number(n) if n.is_u64() || n.is_i64() => Ok(n.to_string()),
            _ => self.err("expected a label (string or integer)"),
        }
    }

    fn rational(&self, v: &Value) -> Result<Rational> {
        match v {
            Value::String(s) => parse_rational(s).map_or_else(|| self.err(format!("bad rational {s:?}")), Ok),
            Value::Number(n) => match n.as_i64() {
                Some(i) => Ok(Rational::from_integer(i.into())),
                None => self.err("floating point values are not accepted"),
            },
            _ => self.err("expected a rational"),
        }
    }
}

fn invariant(e: Error) -> Error {
    let (kind, witness) = match &e {
        Error::NonAssociativeProduct { witness } => ("NonAssociativeProduct", format!("{witness:?}")),
        Error::IncoherentAssociator { witness } => ("IncoherentAssociator", format!("{witness:?}")),
        Error::IncompleteCover { simplex } => ("IncompleteCover", format!("{simplex:?}")),
        Error::NotSubcomplex { member, reason } => ("NotSubcomplex", format!("{member}: {reason}")),
        Error::GroupAxiom(m) => ("GroupAxiom", m.clone()),
        Error::InvalidExtension(m) => ("InvalidExtension", m.clone()),
        Error::MalformedFacet { facet, reason } => ("MalformedFacet", format!("{facet:?}: {reason}")),
        Error::MalformedWord(m) => ("MalformedWord", m.clone()),
        Error::BadSupport(m) => ("BadSupport", m.clone()),
        _ => return e,
    };
    Error::Invariant {
        kind: kind.into(),
        witness,
    }
}

/// `"Z"`, `"Q"`, `"Q/Z"` or `{"Zn": n}`.
pub fn parse_coeff(v: &Value) -> Option<CoefficientGroup> {
    match v {
        Value::String(s) => coeff_from_str(s),
        Value::Object(m) => m.get("Zn").and_then(Value::as_u64).filter(|&n| n >= 2).map(CoefficientGroup::Cyclic),
        _ => None,
    }
}

/// `Z`, `Q`, `Q/Z`, `Z2`, `Z_2`.
pub fn coeff_from_str(s: &str) -> Option<CoefficientGroup> {
    match s {
        "Z" => Some(Integers),
        "Q" => Some(Rationals),
        "Q/Z" => Some(RationalsModOne),
        _ => s
            .strip_prefix('Z')
            .map(|r| r.trim_start_matches('_'))
            .and_then(|r| r.parse::<u64>().ok())
            .filter(|&n| n >= 2)
            .map(CoefficientGroup::Cyclic),
    }
}

pub fn coeff_json(c: CoefficientGroup) -> Value {
    match c {
        CoefficientGroup::Cyclic(n) => json!({ "Zn": n }),
        other => json!(other.name()),
    }
}

/// Built-in groups: `Z<n>` and `S<k>`.
pub fn builtin_group(name: &str) -> Option<FiniteGroup> {
    let (head, n) = name.split_at(1.min(name.len()));
    let n: usize = n.trim_start_matches('_').parse().ok()?;
    match head {
        "Z" if n >= 1 => Some(FiniteGroup::cyclic(n)),
        "S" if (1..=5).contains(&n) => Some(FiniteGroup::symmetric(n)),
        _ => None,
    }
}

impl Registry {
    /// Parses and resolves `(path, text)` pairs.
    pub fn load(sources: &[(String, String)]) -> Result<Registry> {
        Self::load_with(sources, false)
    }

    /// With `lenient`, an incoherent two-gerbe is kept as a raw associator
    /// instead of failing the load, so that it can be inspected.
    pub fn load_with(sources: &[(String, String)], lenient: bool) -> Result<Registry> {
        let mut docs = Vec::new();
        for (path, text) in sources {
            let v: Value = serde_json::from_str(text).map_err(|e| Error::Parse {
                path: path.clone(),
                location: format!("line {} column {}", e.line(), e.column()),
                message: e.to_string(),
            })?;
            let items: Vec<(String, Value)> = match v {
                Value::Array(a) => a.into_iter().enumerate().map(|(i, d)| (format!("/{i}"), d)).collect(),
                d => vec![(String::new(), d)],
            };
            for (loc, d) in items {
                let cx = Ctx { path, loc: loc.clone() };
                let kind = cx.at("kind").str(cx.field(&d, "kind")?)?.to_string();
                if !KINDS.contains(&kind.as_str()) {
                    return cx.at("kind").err(format!("unknown kind {kind:?}"));
                }
                let name = cx.at("name").str(cx.field(&d, "name")?)?.to_string();
                let body = cx.field(&d, "body")?.clone();
                docs.push(Doc {
                    kind,
                    name,
                    body,
                    path: path.clone(),
                    loc,
                });
            }
        }
        let mut reg = Registry {
            lenient,
            ..Registry::default()
        };
        for kind in KINDS {
            for d in docs.iter().filter(|d| d.kind == *kind) {
                let cx = Ctx {
                    path: &d.path,
                    loc: format!("{}/body", d.loc),
                };
                reg.resolve(d, &cx)?;
            }
        }
        Ok(reg)
    }

    fn resolve(&mut self, d: &Doc, cx: &Ctx) -> Result<()> {
        let b = &d.body;
        let name = d.name.clone();
        match d.kind.as_str() {
            "group" => {
                let g = self.parse_group(b, cx)?;
                self.groups.insert(name, Arc::new(g));
            }
            "complex" => {
                let verts: Vec<String> = cx
                    .at("vertices")
                    .array(cx.field(b, "vertices")?)?
                    .iter()
                    .enumerate()
                    .map(|(i, v)| cx.at("vertices").at(i).label(v))
                    .collect::<Result<_>>()?;
                let fcx = cx.at("facets");
                let facets: Vec<Vec<String>> = fcx
                    .array(cx.field(b, "facets")?)?
                    .iter()
                    .enumerate()
                    .map(|(i, f)| {
                        let c = fcx.at(i);
                        c.array(f)?.iter().map(|v| c.label(v)).collect()
                    })
                    .collect::<Result<_>>()?;
                let k = SimplicialComplex::from_labels(&verts, &facets).map_err(invariant)?;
                self.complexes.insert(name, Arc::new(k));
            }
            "cover" => {
                let kname = cx.at("complex").str(cx.field(b, "complex")?)?;
                let k = self.complex_or(kname, &cx.at("complex"))?;
                let cover = if b.get("vertex-stars").and_then(Value::as_bool) == Some(true) {
                    vertex_star_cover(&k).map_err(invariant)?
                } else {
                    let mcx = cx.at("members");
                    let members = mcx.object(cx.field(b, "members")?)?;
                    let mut names = Vec::new();
                    let mut subs = Vec::new();
                    for (m, sims) in members {
                        let c = mcx.at(m);
                        let gens = c
                            .array(sims)?
                            .iter()
                            .enumerate()
                            .map(|(i, s)| {
                                let sc = c.at(i);
                                let simplex = parse_simplex(&k, s, &sc)?;
                                Ok((simplex.len() - 1, k.index_of(&simplex).unwrap()))
                            })
                            .collect::<Result<Vec<_>>>()?;
                        names.push(m.clone());
                        subs.push(Subcomplex::closure(&k, &gens));
                    }
                    Cover::new(k, names, subs).map_err(invariant)?
                };
                self.covers.insert(name, cover);
            }
            "extension" => {
                let total = self.group_ref(cx.field(b, "total")?, &cx.at("total"))?;
                let quotient = self.group_ref(cx.field(b, "quotient")?, &cx.at("quotient"))?;
                let elem = |g: &FiniteGroup, v: &Value, c: &Ctx| -> Result<usize> {
                    let l = c.label(v)?;
                    g.element(&l).map_or_else(|| c.err(format!("unknown element {l:?}")), Ok)
                };
                let table = |key: &str, from: &FiniteGroup, to: &FiniteGroup| -> Result<Vec<usize>> {
                    let c = cx.at(key);
                    let m = c.object(cx.field(b, key)?)?;
                    let mut out = vec![usize::MAX; from.order()];
                    for (k, v) in m {
                        let x = from.element(k).map_or_else(|| c.err(format!("unknown element {k:?}")), Ok)?;
                        out[x] = elem(to, v, &c.at(k))?;
                    }
                    if out.contains(&usize::MAX) {
                        return c.err("table must list every element");
                    }
                    Ok(out)
                };
                let projection = table("projection", &total, &quotient)?;
                let section = table("section", &quotient, &total)?;
                let generator = elem(&total, cx.field(b, "generator")?, &cx.at("generator"))?;
                let e = CentralExtension::new(total, quotient, projection, generator, section).map_err(invariant)?;
                self.extensions.insert(name, e);
            }
            "word" => {
                let g = self.group_ref(cx.field(b, "group")?, &cx.at("group"))?;
                let w = if let Some(s) = b.get("eg") {
                    Word::Eg(parse_eg(&g, cx.at("eg").str(s)?).map_err(invariant)?)
                } else if let Some(s) = b.get("bg") {
                    Word::Bg(parse_bg(&g, cx.at("bg").str(s)?).map_err(invariant)?)
                } else {
                    return cx.err("word body needs an \"eg\" or \"bg\" literal");
                };
                self.words.insert(name, w);
            }
            "cochain" => {
                // `nerve: cover` places the cochain on a cover's nerve
                let k = match b.get("nerve") {
                    Some(v) => {
                        let n = cx.at("nerve").str(v)?;
                        match self.covers.get(n) {
                            Some(c) => c.nerve().clone(),
                            None => return cx.at("nerve").err(format!("unknown cover {n:?}")),
                        }
                    }
                    None => {
                        let kname = cx.at("complex").str(cx.field(b, "complex")?)?;
                        self.complex_or(kname, &cx.at("complex"))?
                    }
                };
                let degree = cx.at("degree").usize(cx.field(b, "degree")?)?;
                let coeff = coeff_at(cx, b)?;
                let c = parse_values(&k, degree, coeff, cx.field(b, "values")?, &cx.at("values"))?;
                self.cochains.insert(name, c);
            }
            "cech-cochain" => {
                let cover = self.cover_at(b, cx)?;
                let degree = cx.at("degree").usize(cx.field(b, "degree")?)?;
                let coeff = coeff_at(cx, b)?;
                let inner = match cx.field(b, "inner")? {
                    Value::String(s) if s == "element" => Inner::Element,
                    v => match v.get("form").and_then(Value::as_u64) {
                        Some(q) => Inner::Form(q as usize),
                        None => return cx.at("inner").err("expected \"element\" or {\"form\": q}"),
                    },
                };
                let c = parse_cech(&cover, degree, inner, coeff, cx.field(b, "values")?, &cx.at("values"))?;
                self.cech.insert(name, c);
            }
            "gerbe" => {
                let cover = self.cover_at(b, cx)?;
                let coeff = coeff_at(cx, b)?;
                let p = parse_tuple_map(&cover, 2, coeff, cx.field(b, "p")?, &cx.at("p"))?;
                let s = parse_tuple_map(&cover, 1, coeff, b.get("s").unwrap_or(&json!({})), &cx.at("s"))?;
                let g = GerbePresentation::new(&cover, p, s).map_err(invariant)?;
                self.gerbes.insert(name, g);
            }
            "two-gerbe" => {
                let cover = self.cover_at(b, cx)?;
                let coeff = coeff_at(cx, b)?;
                let lambda = parse_tuple_map(&cover, 2, coeff, b.get("lambda").unwrap_or(&json!({})), &cx.at("lambda"))?;
                let a = parse_tuple_map(&cover, 3, coeff, cx.field(b, "a")?, &cx.at("a"))?;
                self.associators.insert(name.clone(), a.clone());
                match TwoGerbePresentation::new(&cover, lambda, a) {
                    Ok(p) => {
                        self.two_gerbes.insert(name, p);
                    }
                    Err(Error::IncoherentAssociator { .. }) if self.lenient => {}
                    Err(e) => return Err(invariant(e)),
                }
            }
            "deligne3" => {
                let cover = self.cover_at(b, cx)?;
                let part = |key: &str, deg, q, coeff| -> Result<CechCochain> {
                    match b.get(key) {
                        Some(v) => parse_cech(&cover, deg, Inner::Form(q), coeff, v, &cx.at(key)),
                        None => Ok(CechCochain::zero(&cover, deg, Inner::Form(q), coeff)),
                    }
                };
                let t = DeligneTriple::new(
                    &cover,
                    part("g", 2, 0, RationalsModOne)?,
                    part("A", 1, 1, Rationals)?,
                    part("f", 0, 2, Rationals)?,
                )?;
                self.triples.insert(name, t);
            }
            "deligne4" => {
                let cover = self.cover_at(b, cx)?;
                let part = |key: &str, deg, q, coeff| -> Result<CechCochain> {
                    match b.get(key) {
                        Some(v) => parse_cech(&cover, deg, Inner::Form(q), coeff, v, &cx.at(key)),
                        None => Ok(CechCochain::zero(&cover, deg, Inner::Form(q), coeff)),
                    }
                };
                let q = DeligneQuadruple::new(
                    &cover,
                    part("g", 3, 0, RationalsModOne)?,
                    part("A", 2, 1, Rationals)?,
                    part("gamma", 1, 2, Rationals)?,
                    part("K", 0, 3, Rationals)?,
                )?;
                self.quadruples.insert(name, q);
            }
            _ => unreachable!(),
        }
        Ok(())
    }

    fn parse_group(&self, b: &Value, cx: &Ctx) -> Result<FiniteGroup> {
        if let Some(n) = b.get("cyclic") {
            let n = cx.at("cyclic").usize(n)?;
            if n == 0 {
                return cx.at("cyclic").err("order must be positive");
            }
            return Ok(FiniteGroup::cyclic(n));
        }
        if let Some(k) = b.get("symmetric") {
            let k = cx.at("symmetric").usize(k)?;
            if !(1..=5).contains(&k) {
                return cx.at("symmetric").err("supported degrees are 1..=5");
            }
            return Ok(FiniteGroup::symmetric(k));
        }
        let ecx = cx.at("elements");
        let names: Vec<String> = ecx
            .array(cx.field(b, "elements")?)?
            .iter()
            .enumerate()
            .map(|(i, v)| ecx.at(i).label(v))
            .collect::<Result<_>>()?;
        let tcx = cx.at("table");
        let table = tcx
            .array(cx.field(b, "table")?)?
            .iter()
            .enumerate()
            .map(|(i, row)| {
                let rc = tcx.at(i);
                rc.array(row)?
                    .iter()
                    .enumerate()
                    .map(|(j, v)| {
                        let l = rc.at(j).label(v)?;
                        names.iter().position(|n| *n == l).map_or_else(|| rc.at(j).err(format!("unknown element {l:?}")), Ok)
                    })
                    .collect::<Result<Vec<usize>>>()
            })
            .collect::<Result<Vec<_>>>()?;
        FiniteGroup::from_table(names, table).map_err(invariant)
    }

    fn group_ref(&self, v: &Value, cx: &Ctx) -> Result<Arc<FiniteGroup>> {
        match v {
            Value::String(s) => self.group(s).map_or_else(|| cx.err(format!("unknown group {s:?}")), Ok),
            Value::Object(_) => Ok(Arc::new(self.parse_group(v, cx)?)),
            _ => cx.err("expected a group name or an inline group"),
        }
    }

    fn complex_or(&self, name: &str, cx: &Ctx) -> Result<Arc<SimplicialComplex>> {
        self.complex(name).map_or_else(|| cx.err(format!("unknown complex {name:?}")), Ok)
    }

    fn cover_at(&self, b: &Value, cx: &Ctx) -> Result<Arc<Cover>> {
        let n = cx.at("cover").str(cx.field(b, "cover")?)?;
        self.covers.get(n).cloned().map_or_else(|| cx.at("cover").err(format!("unknown cover {n:?}")), Ok)
    }

    /// A declared group, or a built-in `Z<n>` / `S<k>`.
    pub fn group(&self, name: &str) -> Option<Arc<FiniteGroup>> {
        self.groups.get(name).cloned().or_else(|| builtin_group(name).map(Arc::new))
    }

    /// A declared complex, or a standard one by name.
    pub fn complex(&self, name: &str) -> Option<Arc<SimplicialComplex>> {
        self.complexes.get(name).cloned().or_else(|| standard::named(name).map(Arc::new))
    }

    /// A plain cochain, or the nerve cochain of an element-valued Čech cochain.
    pub fn nerve_cochain(&self, name: &str) -> Option<Cochain> {
        self.cochains
            .get(name)
            .cloned()
            .or_else(|| self.cech.get(name).and_then(|c| c.as_nerve_cochain().cloned()))
    }
}

fn coeff_at(cx: &Ctx, b: &Value) -> Result<CoefficientGroup> {
    let v = cx.field(b, "coeff")?;
    parse_coeff(v).map_or_else(|| cx.at("coeff").err("expected \"Z\", \"Q\", \"Q/Z\" or {\"Zn\": n}"), Ok)
}

fn parse_simplex(k: &SimplicialComplex, v: &Value, cx: &Ctx) -> Result<Vec<u32>> {
    let mut s = Vec::new();
    for (i, x) in cx.array(v)?.iter().enumerate() {
        let l = cx.at(i).label(x)?;
        match k.vertex_index(&l) {
            Some(j) => s.push(j),
            None => return cx.at(i).err(format!("unknown vertex {l:?}")),
        }
    }
    s.sort();
    if s.is_empty() || !k.contains(&s) {
        return cx.err("not a simplex of the complex");
    }
    Ok(s)
}

fn value_in(coeff: CoefficientGroup, v: &Value, cx: &Ctx) -> Result<Rational> {
    let x = cx.rational(v)?;
    coeff.element(&x).map_or_else(|e| cx.err(e.to_string()), Ok)
}

/// `[[simplex], value]` pairs on a complex.
fn parse_values(k: &Arc<SimplicialComplex>, degree: usize, coeff: CoefficientGroup, v: &Value, cx: &Ctx) -> Result<Cochain> {
    let mut c = Cochain::zero(k, degree, coeff);
    for (i, entry) in cx.array(v)?.iter().enumerate() {
        let ec = cx.at(i);
        let pair = ec.array(entry)?;
        if pair.len() != 2 {
            return ec.err("expected [simplex, value]");
        }
        let s = parse_simplex(k, &pair[0], &ec.at(0))?;
        if s.len() != degree + 1 {
            return ec.at(0).err(format!("expected a {degree}-simplex"));
        }
        let x = value_in(coeff, &pair[1], &ec.at(1))?;
        c.add_at(k.index_of(&s).unwrap(), &x);
    }
    Ok(c)
}

fn parse_tuple(cover: &Cover, v: &Value, cx: &Ctx) -> Result<Vec<u32>> {
    let mut t = Vec::new();
    for (i, x) in cx.array(v)?.iter().enumerate() {
        let m = match x {
            Value::String(s) => cover.names().iter().position(|n| n == s),
            Value::Number(n) => n.as_u64().map(|n| n as usize).filter(|&n| n < cover.len()),
            _ => None,
        };
        match m {
            Some(m) => t.push(m as u32),
            None => return cx.at(i).err(format!("unknown cover member {x}")),
        }
    }
    Ok(t)
}

/// Sign of the sorting permutation, or `None` on repeats.
fn sort_sign(t: &mut [u32]) -> Option<bool> {
    let mut odd = false;
    for i in 0..t.len() {
        for j in 0..t.len().saturating_sub(i + 1) {
            if t[j] > t[j + 1] {
                t.swap(j, j + 1);
                odd = !odd;
            }
        }
    }
    (!t.windows(2).any(|w| w[0] == w[1])).then_some(odd)
}

fn nerve_index(cover: &Cover, degree: usize, v: &Value, cx: &Ctx) -> Result<(usize, bool)> {
    let mut t = parse_tuple(cover, v, cx)?;
    if t.len() != degree + 1 {
        return cx.err(format!("expected {} members", degree + 1));
    }
    let odd = sort_sign(&mut t).map_or_else(|| cx.err("repeated member"), Ok)?;
    match cover.nerve().index_of(&t) {
        Some(i) => Ok((i, odd)),
        None => cx.err("members do not intersect"),
    }
}

fn parse_cech(cover: &Arc<Cover>, degree: usize, inner: Inner, coeff: CoefficientGroup, v: &Value, cx: &Ctx) -> Result<CechCochain> {
    let mut out = CechCochain::zero(cover, degree, inner, coeff);
    let mut elems = Cochain::zero(cover.nerve(), degree, coeff);
    for (i, entry) in cx.array(v)?.iter().enumerate() {
        let ec = cx.at(i);
        let pair = ec.array(entry)?;
        if pair.len() != 2 {
            return ec.err("expected [tuple, value]");
        }
        let (idx, odd) = nerve_index(cover, degree, &pair[0], &ec.at(0))?;
        match inner {
            Inner::Element => {
                let x = value_in(coeff, &pair[1], &ec.at(1))?;
                elems.add_at(idx, &if odd { -x } else { x });
            }
            Inner::Form(q) => {
                let c = parse_values(cover.base(), q, coeff, &pair[1], &ec.at(1))?;
                let c = if odd { c.neg() } else { c };
                let cur = out.form(idx).add(&c)?;
                out.set_form(idx, cur).map_err(|e| Error::Parse {
                    path: ec.path.into(),
                    location: ec.loc.clone(),
                    message: e.to_string(),
                })?;
            }
        }
    }
    if inner == Inner::Element {
        out = CechCochain::from_nerve_cochain(cover, elems)?;
    }
    Ok(out)
}

/// `{"U0,U1,U2": value}` maps on nerve simplices.
fn parse_tuple_map(cover: &Arc<Cover>, degree: usize, coeff: CoefficientGroup, v: &Value, cx: &Ctx) -> Result<Cochain> {
    let mut c = Cochain::zero(cover.nerve(), degree, coeff);
    for (key, val) in cx.object(v)? {
        let kc = cx.at(key);
        let tuple = Value::Array(key.split(',').map(|s| Value::String(s.trim().into())).collect());
        let (idx, odd) = nerve_index(cover, degree, &tuple, &kc)?;
        let x = value_in(coeff, val, &kc)?;
        c.add_at(idx, &if odd { -x } else { x });
    }
    Ok(c)
}

pub fn rational_json(x: &Rational) -> Value {
    Value::String(fmt_rational(x))
}

/// `[[labels], value]` pairs in simplex order.
pub fn cochain_json(c: &Cochain) -> Value {
    Value::Array(
        c.values()
            .iter()
            .map(|(i, v)| json!([c.complex().simplex_labels(c.degree(), *i), rational_json(v)]))
            .collect(),
    )
}

pub fn cech_json(c: &CechCochain) -> Value {
    let nerve = c.cover().nerve();
    match c.inner() {
        Inner::Element => cochain_json(c.as_nerve_cochain().unwrap()),
        Inner::Form(_) => Value::Array(
            c.form_values()
                .unwrap()
                .iter()
                .map(|(i, f)| json!([nerve.simplex_labels(c.degree(), *i), cochain_json(f)]))
                .collect(),
        ),
    }
}

pub fn class_json(class: &[Rational]) -> Value {
    Value::Array(class.iter().map(rational_json).collect())
}
