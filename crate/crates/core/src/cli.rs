//! Command-line front end. Exit codes: 0 computed or verified, 1 violation
//! or obstruction found (with a certificate), 2 input or usage error.

use std::sync::Arc;

use clap::{Parser, Subcommand, ValueEnum};
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde_json::{json, Map, Value};

use crate::cech::{
    class_of, classes_equal, connecting_hom, solve_delta, three_arc_cover, vertex_star_cover, CechCochain, CechSolution,
    Certificate, CocycleClass, ExactSequence, Inner, Location, Solution, SolveMode,
};
use crate::cochain::{cochain_classes_equal, cohomology, solve_coboundary, Cochain, CoefficientGroup, Integers};
use crate::error::{Error, Result};
use crate::gerbe::{
    curving_pipeline, dd_class, dd_cocycle, deligne_validate, lifting_gerbe_cocycle, three_curvature, trivialize_deligne,
    CentralExtension, DeligneTriple, GlobalForm, GroupCochain, Partition, Trivialization, ValidationReport,
};
use crate::io::{cech_json, class_json, coeff_from_str, cochain_json, rational_json, Registry, Word};
use crate::simplicial::{nerve_bar_and_projection, nerve_of_group, verify_simplicial_identities, Violation};
use crate::two_gerbe::{
    bockstein_lift_class, coherence_check, deligne2_validate, four_cocycle, four_cocycle_via_rho, four_form,
    trivialize_two_gerbe, DeligneQuadruple,
};
use crate::words::{classify_cocycle, eg_inv, eg_mul, parse_bg, parse_eg, project_p, random_sample, section_s};

#[derive(Debug, Parser)]
#[command(name = "gerbes", version, about = "Exact cocycle computations for gerbes and 2-gerbes")]
struct Cli {
    /// JSON document files (repeatable).
    #[arg(short, long = "input", global = true)]
    input: Vec<String>,
    /// Emit a JSON report instead of text.
    #[arg(long, global = true)]
    json: bool,
    /// Seed for randomized commands.
    #[arg(long, global = true, default_value_t = 0)]
    seed: u64,
    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Nerve of a cover.
    Nerve {
        #[arg(long)]
        cover: String,
    },
    /// Simplicial identities for the nerve and bar construction of a group.
    VerifySimplicial {
        #[arg(long)]
        group: String,
        #[arg(long, default_value_t = 4)]
        levels: usize,
    },
    Cohomology {
        #[arg(long)]
        complex: String,
        #[arg(long)]
        deg: usize,
        #[arg(long, default_value = "Z")]
        coeff: String,
    },
    VerifyCocycle {
        #[arg(long)]
        cochain: String,
    },
    /// Primitive of a cocycle, or a certificate that none exists.
    Solve {
        #[arg(long)]
        cochain: String,
        #[arg(long, value_enum, default_value_t = Mode::Cech)]
        mode: Mode,
    },
    /// Connecting homomorphism of `Z → Q → Q/Z` or `Z_k → Z_kn → Z_n`.
    Connect {
        #[arg(long)]
        cochain: String,
        #[arg(long)]
        kernel: Option<u64>,
    },
    ClassesEqual {
        #[arg(long)]
        a: String,
        #[arg(long)]
        b: String,
    },
    /// EG/BG word arithmetic.
    Eg {
        #[command(subcommand)]
        op: EgOp,
    },
    /// Transition words and lifts of a Z_n 2-cocycle at random samples.
    Classify {
        #[arg(long)]
        cochain: String,
        #[arg(long, default_value_t = 20)]
        samples: usize,
    },
    DdClass {
        #[arg(long)]
        gerbe: String,
    },
    LiftingClass {
        #[arg(long)]
        extension: String,
        #[arg(long)]
        tau: String,
    },
    Deligne3 {
        #[command(subcommand)]
        op: D3Op,
    },
    Coherence {
        #[arg(long)]
        two_gerbe: String,
    },
    FourClass {
        #[arg(long)]
        two_gerbe: String,
    },
    FourClassRho {
        #[arg(long)]
        two_gerbe: String,
        #[arg(long)]
        rho: String,
    },
    /// Bockstein of a Z_m cocycle through an extension, compared with the connecting map.
    Bockstein {
        #[arg(long)]
        cochain: String,
        #[arg(long, conflicts_with = "kernel")]
        extension: Option<String>,
        #[arg(long)]
        kernel: Option<usize>,
    },
    Deligne4 {
        #[command(subcommand)]
        op: D4Op,
    },
    #[command(name = "trivialize-2g")]
    Trivialize2g {
        #[arg(long)]
        two_gerbe: String,
    },
}

#[derive(Debug, Clone, Copy, ValueEnum)]
enum Mode {
    Cech,
    Simplicial,
    Total,
}

#[derive(Debug, Subcommand)]
enum EgOp {
    Mul {
        #[arg(long)]
        group: Option<String>,
        #[arg(long)]
        a: String,
        #[arg(long)]
        b: String,
    },
    Inv {
        #[arg(long)]
        group: Option<String>,
        #[arg(long)]
        a: String,
    },
    /// EG word to its BG image.
    Proj {
        #[arg(long)]
        group: Option<String>,
        #[arg(long)]
        a: String,
    },
    /// BG word to its EG section (abelian groups).
    Section {
        #[arg(long)]
        group: Option<String>,
        #[arg(long)]
        a: String,
    },
}

#[derive(Debug, Subcommand)]
enum D3Op {
    Validate {
        #[arg(long)]
        triple: String,
    },
    Curvature {
        #[arg(long)]
        triple: String,
    },
    Trivialize {
        #[arg(long)]
        triple: String,
    },
    /// Curving pipeline with uniform weights, on `(δA, dA)` of a triple or on explicit inputs.
    Pipeline {
        #[arg(long, required_unless_present = "a")]
        triple: Option<String>,
        #[arg(long, requires = "f", conflicts_with = "triple")]
        a: Option<String>,
        #[arg(long)]
        f: Option<String>,
    },
}

#[derive(Debug, Subcommand)]
enum D4Op {
    Validate {
        #[arg(long)]
        quadruple: String,
    },
    FourForm {
        #[arg(long)]
        quadruple: String,
    },
}

/// Result of one invocation.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Outcome {
    pub code: i32,
    pub stdout: String,
    pub stderr: String,
}

/// Ordered report fields, rendered as text or JSON.
struct Report {
    code: i32,
    fields: Vec<(String, Value, String)>,
}

impl Report {
    fn new() -> Self {
        Report { code: 0, fields: Vec::new() }
    }

    fn add(&mut self, key: &str, v: Value, text: impl Into<String>) -> &mut Self {
        self.fields.push((key.into(), v, text.into()));
        self
    }

    fn put(&mut self, key: &str, v: Value) -> &mut Self {
        let text = plain(&v);
        self.add(key, v, text)
    }

    fn fail(&mut self) -> &mut Self {
        self.code = 1;
        self
    }

    fn render(&self, as_json: bool) -> String {
        if as_json {
            let mut m = Map::new();
            m.insert("status".into(), json!(if self.code == 0 { "ok" } else { "violation" }));
            for (k, v, _) in &self.fields {
                m.insert(k.clone(), v.clone());
            }
            serde_json::to_string_pretty(&Value::Object(m)).unwrap() + "\n"
        } else {
            self.fields.iter().map(|(k, _, t)| format!("{k}: {t}\n")).collect()
        }
    }
}

/// Compact text for a JSON value: strings bare, arrays comma-separated.
fn plain(v: &Value) -> String {
    match v {
        Value::String(s) => s.clone(),
        Value::Array(a) => format!("[{}]", a.iter().map(plain).collect::<Vec<_>>().join(", ")),
        Value::Null => "none".into(),
        Value::Object(m) => format!("{{{}}}", m.iter().map(|(k, v)| format!("{k}: {}", plain(v))).collect::<Vec<_>>().join(", ")),
        other => other.to_string(),
    }
}

/// Runs the command line (including the program name) and captures output.
pub fn run<I, T>(args: I) -> Outcome
where
    I: IntoIterator<Item = T>,
    T: Into<std::ffi::OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(c) => c,
        Err(e) => {
            let code = if e.use_stderr() { 2 } else { 0 };
            let text = e.render().to_string();
            return if code == 0 {
                Outcome { code, stdout: text, stderr: String::new() }
            } else {
                Outcome { code, stdout: String::new(), stderr: text }
            };
        }
    };
    match execute(&cli) {
        Ok(r) => Outcome {
            code: r.code,
            stdout: r.render(cli.json),
            stderr: String::new(),
        },
        Err(e) => Outcome {
            code: 2,
            stdout: String::new(),
            stderr: format!("error: {e}\n"),
        },
    }
}

fn load(paths: &[String], lenient: bool) -> Result<Registry> {
    let sources = paths
        .iter()
        .map(|p| {
            std::fs::read_to_string(p).map(|t| (p.clone(), t)).map_err(|e| Error::Parse {
                path: p.clone(),
                location: "/".into(),
                message: e.to_string(),
            })
        })
        .collect::<Result<Vec<_>>>()?;
    Registry::load_with(&sources, lenient)
}

fn usage<T>(msg: impl Into<String>) -> Result<T> {
    Err(Error::Usage(msg.into()))
}

enum AnyCochain {
    Plain(Cochain),
    Cech(CechCochain),
}

impl AnyCochain {
    fn nerve(&self) -> Result<Cochain> {
        match self {
            AnyCochain::Plain(c) => Ok(c.clone()),
            AnyCochain::Cech(c) => match c.as_nerve_cochain() {
                Some(x) => Ok(x.clone()),
                None => usage("expected element values, found form values"),
            },
        }
    }
}

struct Env {
    reg: Registry,
    seed: u64,
}

impl Env {
    fn cochain(&self, name: &str) -> Result<AnyCochain> {
        if let Some(c) = self.reg.cochains.get(name) {
            return Ok(AnyCochain::Plain(c.clone()));
        }
        match self.reg.cech.get(name) {
            Some(c) => Ok(AnyCochain::Cech(c.clone())),
            None => usage(format!("no cochain named {name:?}")),
        }
    }

    fn cech(&self, name: &str) -> Result<CechCochain> {
        self.reg.cech.get(name).cloned().map_or_else(|| usage(format!("no Čech cochain named {name:?}")), Ok)
    }

    /// A declared cover, `three-arc`, or the vertex-star cover of a complex.
    fn cover(&self, name: &str) -> Result<Arc<crate::cech::Cover>> {
        if let Some(c) = self.reg.covers.get(name) {
            return Ok(c.clone());
        }
        if name == "three-arc" {
            return Ok(three_arc_cover());
        }
        match self.reg.complex(name) {
            Some(k) => vertex_star_cover(&k),
            None => usage(format!("no cover or complex named {name:?}")),
        }
    }

    /// `generator:<complex>` back-solves from the first integral generator
    /// of the vertex-star cover's nerve in degree `deg`.
    fn generator(&self, name: &str, deg: usize) -> Result<Option<(Arc<crate::cech::Cover>, Cochain)>> {
        let Some(k) = name.strip_prefix("generator:") else {
            return Ok(None);
        };
        let cover = self.cover(k)?;
        let h = cohomology(cover.nerve(), deg, Integers)?;
        match h.generators.first() {
            Some(g) => Ok(Some((cover.clone(), g.clone()))),
            None => usage(format!("H^{deg} of the nerve of {k:?} is zero")),
        }
    }

    fn triple(&self, name: &str) -> Result<DeligneTriple> {
        if let Some((cover, c)) = self.generator(name, 3)? {
            return DeligneTriple::from_integral_class(&cover, &c);
        }
        self.reg.triples.get(name).cloned().map_or_else(|| usage(format!("no triple named {name:?}")), Ok)
    }

    fn quadruple(&self, name: &str) -> Result<DeligneQuadruple> {
        if let Some((cover, c)) = self.generator(name, 4)? {
            return DeligneQuadruple::from_integral_class(&cover, &c);
        }
        self.reg.quadruples.get(name).cloned().map_or_else(|| usage(format!("no quadruple named {name:?}")), Ok)
    }

    fn two_gerbe(&self, name: &str) -> Result<&crate::two_gerbe::TwoGerbePresentation> {
        self.reg.two_gerbes.get(name).map_or_else(|| usage(format!("no two-gerbe named {name:?}")), Ok)
    }

    fn extension(&self, name: &str) -> Result<CentralExtension> {
        self.reg.extensions.get(name).cloned().map_or_else(|| usage(format!("no extension named {name:?}")), Ok)
    }

    fn word(&self, group: Option<&str>, w: &str, bg: bool) -> Result<Word> {
        if let Some(x) = self.reg.words.get(w) {
            return Ok(x.clone());
        }
        let Some(gname) = group else {
            return usage(format!("{w:?} is not a declared word; pass --group to parse it as a literal"));
        };
        let g = self.reg.group(gname).map_or_else(|| usage(format!("unknown group {gname:?}")), Ok)?;
        Ok(if bg { Word::Bg(parse_bg(&g, w)?) } else { Word::Eg(parse_eg(&g, w)?) })
    }
}

fn eg_of(w: Word) -> Result<crate::words::EgWord> {
    match w {
        Word::Eg(x) => Ok(x),
        Word::Bg(_) => usage("expected an EG word"),
    }
}

fn certificate_json(c: &Certificate) -> Value {
    let location = match &c.location {
        Location::Nerve => json!("nerve"),
        Location::Base => json!("base"),
        Location::Intersection(t) => json!({ "intersection": t }),
    };
    json!({
        "location": location,
        "cocycle": cochain_json(&c.cocycle),
        "class": class_json(&c.class),
        "note": c.note,
    })
}

fn class_fields(r: &mut Report, c: &CocycleClass) {
    r.put("cocycle", cochain_json(&c.cocycle))
        .put("class", class_json(&c.class))
        .put("zero", json!(c.is_zero));
}

fn validation(r: &mut Report, v: &ValidationReport) {
    let failures: Vec<Value> = v
        .failures
        .iter()
        .map(|f| json!({ "condition": format!("{:?}", f.condition), "witness": f.witness }))
        .collect();
    r.put("valid", json!(v.is_valid()));
    if !v.is_valid() {
        r.put("failures", Value::Array(failures)).fail();
    }
}

fn form_fields(r: &mut Report, g: &GlobalForm) {
    r.put("closed", json!(g.closed))
        .put("integral", json!(g.integral))
        .put("orientation_pairing", g.orientation_pairing.as_ref().map_or(Value::Null, rational_json))
        .put("form", cochain_json(&g.form));
}

fn violations(r: &mut Report, key: &str, vs: &[Violation]) {
    let v: Vec<Value> = vs
        .iter()
        .map(|v| json!({ "identity": v.identity, "level": v.level, "witness": v.witness }))
        .collect();
    r.add(key, Value::Array(v), if vs.is_empty() { "none".into() } else { format!("{} violations", vs.len()) });
    if !vs.is_empty() {
        r.fail();
    }
}

fn execute(cli: &Cli) -> Result<Report> {
    let env = Env {
        reg: load(&cli.input, matches!(cli.command, Command::Coherence { .. }))?,
        seed: cli.seed,
    };
    let mut r = Report::new();
    match &cli.command {
        Command::Nerve { cover } => {
            let cover = env.cover(cover)?;
            let nerve = cover.nerve();
            r.put("members", json!(cover.names()));
            r.put("f_vector", json!(nerve.f_vector()));
            let simplices: Vec<Value> = (0..=nerve.dim())
                .flat_map(|p| (0..nerve.count(p)).map(move |i| (p, i)))
                .map(|(p, i)| json!(cover.tuple_labels(p, i)))
                .collect();
            r.put("simplices", Value::Array(simplices));
            r.put("good", json!(cover.is_good()));
        }
        Command::VerifySimplicial { group, levels } => {
            let g = env.reg.group(group).map_or_else(|| usage(format!("unknown group {group:?}")), Ok)?;
            violations(&mut r, "nerve", &verify_simplicial_identities(&nerve_of_group(&g, *levels)));
            let bar = nerve_bar_and_projection(&g, *levels);
            violations(&mut r, "bar", &verify_simplicial_identities(&bar.bar));
            violations(&mut r, "projection", &bar.violations);
        }
        Command::Cohomology { complex, deg, coeff } => {
            let k = env.reg.complex(complex).map_or_else(|| usage(format!("unknown complex {complex:?}")), Ok)?;
            let coeff = coeff_from_str(coeff).map_or_else(|| usage(format!("unknown coefficients {coeff:?}")), Ok)?;
            let h = cohomology(&k, *deg, coeff)?;
            let torsion: Vec<String> = h.torsion.iter().map(|t| t.to_string()).collect();
            r.add(
                "cohomology",
                json!({
                    "degree": deg,
                    "coeff": coeff.name(),
                    "rank": h.free_rank,
                    "torsion": torsion,
                    "generators": h.generators.iter().map(cochain_json).collect::<Vec<_>>(),
                }),
                h.summary(),
            );
        }
        Command::VerifyCocycle { cochain } => {
            let witness = match env.cochain(cochain)? {
                AnyCochain::Plain(c) => c.d().first_witness(),
                AnyCochain::Cech(c) => c.delta().first_witness(),
            };
            r.put("closed", json!(witness.is_none()));
            if let Some(w) = witness {
                r.put("witness", json!(w)).fail();
            }
        }
        Command::Solve { cochain, mode } => match env.cochain(cochain)? {
            AnyCochain::Plain(c) => match solve_coboundary(&c)? {
                Some(y) => {
                    r.put("solved", json!(true)).put("primitive", cochain_json(&y));
                }
                None => {
                    let h = cohomology(c.complex(), c.degree(), c.coeff())?;
                    r.put("solved", json!(false)).put("class", class_json(&h.coordinates(&c)?)).fail();
                }
            },
            AnyCochain::Cech(c) => {
                let mode = match mode {
                    Mode::Cech => SolveMode::Cech,
                    Mode::Simplicial => SolveMode::Simplicial,
                    Mode::Total => SolveMode::Total,
                };
                match solve_delta(&c, mode)? {
                    Solution::Solved(CechSolution::Cech(y)) => {
                        r.put("solved", json!(true)).put("primitive", cech_json(&y));
                    }
                    Solution::Solved(CechSolution::Total(t)) => {
                        let pieces: Map<String, Value> = t.pieces().iter().map(|(q, p)| (q.to_string(), cech_json(p))).collect();
                        r.put("solved", json!(true)).put("primitive", Value::Object(pieces));
                    }
                    Solution::NotExact(cert) => {
                        r.put("solved", json!(false)).put("certificate", certificate_json(&cert)).fail();
                    }
                }
            }
        },
        Command::Connect { cochain, kernel } => {
            let c = env.cochain(cochain)?.nerve()?;
            let seq = match (c.coeff(), kernel) {
                (CoefficientGroup::RationalsModOne, _) => ExactSequence::RationalsModOne,
                (CoefficientGroup::Cyclic(n), k) => ExactSequence::Cyclic {
                    kernel: k.unwrap_or(n),
                    quotient: n,
                },
                (other, _) => return usage(format!("no connecting map out of {other} coefficients")),
            };
            class_fields(&mut r, &connecting_hom(&c, seq)?);
        }
        Command::ClassesEqual { a, b } => {
            let equal = match (env.cochain(a)?, env.cochain(b)?) {
                (AnyCochain::Cech(x), AnyCochain::Cech(y)) => classes_equal(&x, &y)?,
                (x, y) => cochain_classes_equal(&x.nerve()?, &y.nerve()?)?,
            };
            r.put("equal", json!(equal));
            if !equal {
                r.fail();
            }
        }
        Command::Eg { op } => match op {
            EgOp::Mul { group, a, b } => {
                let x = eg_of(env.word(group.as_deref(), a, false)?)?;
                let y = eg_of(env.word(group.as_deref(), b, false)?)?;
                r.put("word", json!(eg_mul(&x, &y)?.to_string()));
            }
            EgOp::Inv { group, a } => {
                let x = eg_of(env.word(group.as_deref(), a, false)?)?;
                r.put("word", json!(eg_inv(&x).to_string()));
            }
            EgOp::Proj { group, a } => {
                let x = eg_of(env.word(group.as_deref(), a, false)?)?;
                r.put("word", json!(project_p(&x).to_string()));
            }
            EgOp::Section { group, a } => match env.word(group.as_deref(), a, true)? {
                Word::Bg(x) => {
                    r.put("word", json!(section_s(&x)?.to_string()));
                }
                Word::Eg(_) => return usage("expected a BG word"),
            },
        },
        Command::Classify { cochain, samples } => {
            let g = env.cochain(cochain)?.nerve()?;
            let mut rng = ChaCha8Rng::seed_from_u64(env.seed);
            let ss: Vec<_> = (0..*samples).map(|_| random_sample(g.complex(), &mut rng)).collect();
            let c = classify_cocycle(&g, &ss)?;
            let reports: Vec<Value> = c
                .samples
                .iter()
                .map(|s| {
                    json!({
                        "support": g.complex().labels_of(&s.support),
                        "psi": s.psi.iter().map(rational_json).collect::<Vec<_>>(),
                        "transitions": s.transitions.iter().map(|((i, j), w)| json!([i, j, w.to_string()])).collect::<Vec<_>>(),
                        "lifts": s.lifts.iter().map(|((i, j), w)| json!([i, j, w.to_string()])).collect::<Vec<_>>(),
                        "cocycle_holds": s.cocycle_holds,
                        "lift_holds": s.lift_holds,
                    })
                })
                .collect();
            r.add("samples", Value::Array(reports), samples.to_string());
            r.put("holds", json!(c.holds()));
            if !c.holds() {
                r.fail();
            }
        }
        Command::DdClass { gerbe } => {
            let p = env.reg.gerbes.get(gerbe).map_or_else(|| usage(format!("no gerbe named {gerbe:?}")), Ok)?;
            let g = dd_cocycle(p)?;
            class_fields(&mut r, &dd_class(&g)?);
        }
        Command::LiftingClass { extension, tau } => {
            let ext = env.extension(extension)?;
            let tau = GroupCochain::from_cyclic(&env.cochain(tau)?.nerve()?)?;
            class_fields(&mut r, &lifting_gerbe_cocycle(&ext, &tau)?);
        }
        Command::Deligne3 { op } => match op {
            D3Op::Validate { triple } => validation(&mut r, &deligne_validate(&env.triple(triple)?)),
            D3Op::Curvature { triple } => form_fields(&mut r, &three_curvature(&env.triple(triple)?)?),
            D3Op::Trivialize { triple } => match trivialize_deligne(&env.triple(triple)?)? {
                Trivialization::Trivial(t) => {
                    r.put("trivial", json!(true)).put("h", cech_json(&t.h)).put("k", cech_json(&t.k));
                }
                Trivialization::Obstructed(c) => {
                    r.put("trivial", json!(false)).put("certificate", certificate_json(&c)).fail();
                }
            },
            D3Op::Pipeline { triple, a, f } => {
                let (a, f) = match (triple, a, f) {
                    (Some(t), _, _) => {
                        let t = env.triple(t)?;
                        (t.a.delta(), t.a.d()?)
                    }
                    (None, Some(a), Some(f)) => (env.cech(a)?, env.cech(f)?),
                    _ => return usage("pass --triple or both --a and --f"),
                };
                if a.inner() != Inner::Form(1) {
                    return usage("A must be 1-form valued");
                }
                let p = curving_pipeline(&a, &f, &Partition::uniform(a.cover()))?;
                r.put("equations", json!(p.equations));
                r.put("overlaps_agree", json!(p.overlaps_agree));
                r.put("B", cech_json(&p.b)).put("F_hat", cech_json(&p.f_hat)).put("mu", cech_json(&p.mu));
                r.put("omega", p.omega.as_ref().map_or(Value::Null, cochain_json));
                if !p.holds() {
                    r.fail();
                }
            }
        },
        Command::Coherence { two_gerbe } => {
            let a = env.reg.associators.get(two_gerbe).map_or_else(|| usage(format!("no two-gerbe named {two_gerbe:?}")), Ok)?;
            let rep = coherence_check(a);
            r.put("coherent", json!(rep.holds()));
            if !rep.holds() {
                r.put("witnesses", json!(rep.witnesses)).fail();
            }
        }
        Command::FourClass { two_gerbe } => {
            let g = four_cocycle(env.two_gerbe(two_gerbe)?)?;
            class_fields(&mut r, &class_of(g)?);
        }
        Command::FourClassRho { two_gerbe, rho } => {
            let p = env.two_gerbe(two_gerbe)?;
            let v = four_cocycle_via_rho(p, &env.cochain(rho)?.nerve()?)?;
            r.put("epsilon", cochain_json(&v.epsilon)).put("same_class", json!(v.same_class));
            if !v.same_class {
                r.fail();
            }
        }
        Command::Bockstein { cochain, extension, kernel } => {
            let g = env.cochain(cochain)?.nerve()?;
            let CoefficientGroup::Cyclic(m) = g.coeff() else {
                return usage("expected Z_m coefficients");
            };
            let ext = match (extension, kernel) {
                (Some(e), _) => env.extension(e)?,
                (None, Some(k)) => CentralExtension::cyclic(*k, m as usize),
                (None, None) => CentralExtension::cyclic(m as usize, m as usize),
            };
            let b = bockstein_lift_class(&g, &ext)?;
            class_fields(&mut r, &b);
            if extension.is_none() {
                let seq = ExactSequence::Cyclic {
                    kernel: ext.kernel_order() as u64,
                    quotient: m,
                };
                let c = connecting_hom(&g, seq)?;
                let agrees = cochain_classes_equal(&b.cocycle, &c.cocycle)?;
                r.put("agrees_with_connecting", json!(agrees));
                if !agrees {
                    r.fail();
                }
            }
        }
        Command::Deligne4 { op } => match op {
            D4Op::Validate { quadruple } => validation(&mut r, &deligne2_validate(&env.quadruple(quadruple)?)),
            D4Op::FourForm { quadruple } => {
                let f = four_form(&env.quadruple(quadruple)?)?;
                form_fields(&mut r, &f.theta);
                r.put("class_matches", json!(f.class_matches));
                if !f.class_matches {
                    r.fail();
                }
            }
        },
        Command::Trivialize2g { two_gerbe } => match trivialize_two_gerbe(env.two_gerbe(two_gerbe)?)? {
            Trivialization::Trivial(h) => {
                r.put("trivial", json!(true)).put("h", cochain_json(&h));
            }
            Trivialization::Obstructed(c) => {
                r.put("trivial", json!(false)).put("certificate", certificate_json(&c)).fail();
            }
        },
    }
    Ok(r)
}
