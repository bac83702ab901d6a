//! The `eqalg` command line. Exit status 1 means a verification failed,
//! 2 an input error, 3 a size cap.

use std::ffi::OsString;
use std::fmt::Write as _;
use std::path::Path;
use std::sync::Arc;

use clap::{Args, Parser, Subcommand, ValueEnum};
use num_bigint::BigInt;
use rayon::prelude::*;

use crate::bispan::{check_functoriality, compose_bispans, evaluate_bispan, sample_values, Bispan, RewriteOrder};
use crate::doc::{self, BispanDoc, DocWorld, MapFileDoc, SpanDoc};
use crate::error::{Caps, Error, Result};
use crate::freealg::{free_tambara_census, free_underlying};
use crate::group::{FiniteGroup, GroupHom};
use crate::groupoid::{iso_comma_pullback, verify_pullback_up, FiniteGroupoid, GroupoidMap};
use crate::gset::{dependent_product, sigma_classes, verify_distributivity_diagram, GSet, GSetMap};
use crate::spancat::{compose_spans, decompose_span, factor_span, hom_enumerate, AdequateTripleSpec, GSetWorld, GroupoidWorld, Span};
use crate::tambara::{
    as_tambara_oracle, burnside_class, marks_table_text, norm_effective, norm_virtual, BurnsideElement, CorruptedNormOracle,
    TerminalOracle,
};
use crate::verify::{run_criterion, Battery};

pub const DEFAULT_SEED: u64 = 0x5eed;

#[derive(Debug, Parser)]
#[command(name = "eqalg", version, about = "Finite spans, bispans and Burnside Tambara functors")]
pub struct CommandRequest {
    #[command(flatten)]
    pub options: Options,
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Clone, Args)]
pub struct Options {
    /// Object cap for groupoids.
    #[arg(long, global = true, env = "EQALG_CAP_OBJECTS", default_value_t = 64)]
    pub cap_objects: usize,
    /// Point cap for G-sets and section sets.
    #[arg(long, global = true, env = "EQALG_CAP_POINTS", default_value_t = 1 << 16)]
    pub cap_points: usize,
    #[arg(long, global = true, env = "EQALG_SEED", default_value_t = DEFAULT_SEED)]
    pub seed: u64,
    #[arg(long, global = true, env = "EQALG_FORMAT", value_enum, default_value_t = Format::Table)]
    pub format: Format,
}

impl Options {
    pub fn caps(&self) -> Caps {
        Caps { objects: self.cap_objects, points: self.cap_points, ..Caps::default() }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Table,
    Doc,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum BatteryArg {
    Small,
    Full,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum OracleArg {
    Burnside,
    Terminal,
    Corrupted,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum OrderArg {
    Direct,
    NormFirst,
    GeneratorwiseLeft,
    GeneratorwiseRight,
}

impl From<OrderArg> for RewriteOrder {
    fn from(o: OrderArg) -> Self {
        match o {
            OrderArg::Direct => RewriteOrder::Direct,
            OrderArg::NormFirst => RewriteOrder::NormFirst,
            OrderArg::GeneratorwiseLeft => RewriteOrder::GeneratorwiseLeft,
            OrderArg::GeneratorwiseRight => RewriteOrder::GeneratorwiseRight,
        }
    }
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Pullbacks and factorizations of functors into BG
    #[command(subcommand, after_help = FUNCTOR_FORMAT)]
    Groupoid(GroupoidCmd),
    /// Orbits, dependent products and census of G-sets
    #[command(subcommand, after_help = GSET_FORMAT)]
    Gset(GsetCmd),
    /// Spans of G-sets or groupoids
    #[command(subcommand)]
    Span(SpanCmd),
    /// Bispans and Tambara functoriality
    #[command(subcommand)]
    Bispan(BispanCmd),
    /// Marks, norms and evaluation of the Burnside functor
    #[command(subcommand)]
    Tambara(TambaraCmd),
    /// Free commutative algebras on a G-set
    #[command(subcommand)]
    Free(FreeCmd),
    /// The acceptance battery
    #[command(subcommand)]
    Verify(VerifyCmd),
}

const FUNCTOR_FORMAT: &str = "Functors into BG are point, id, sub:K, action:K, quot:K or proj, where K is a subgroup class \
index and proj is B(G x C2) -> BG. A path reads a map/1 document.";

const GSET_FORMAT: &str = "G-sets are orbit-type counts such as 2,0,1, or point, regular, empty, or a gset/1 path. \
Maps are id:X, point:X, fold:X or a map/1 path.";

#[derive(Debug, Subcommand)]
pub enum GroupoidCmd {
    /// Iso-comma pullback of two functors with a common target.
    Pullback {
        #[arg(long)]
        group: String,
        #[arg(long)]
        left: String,
        #[arg(long)]
        right: String,
    },
    /// Full-surjective / faithful factorization of a functor.
    Factor {
        #[arg(long)]
        group: String,
        #[arg(long)]
        map: String,
    },
}

#[derive(Debug, Subcommand)]
pub enum GsetCmd {
    Orbits {
        #[arg(long)]
        group: String,
        #[arg(long)]
        gset: String,
    },
    /// Dependent product of `--sum` along `--norm`.
    Depprod {
        #[arg(long)]
        group: String,
        #[arg(long)]
        sum: String,
        #[arg(long)]
        norm: String,
        #[arg(long, default_value_t = 2)]
        test_cap: usize,
    },
    /// n-element G-sets against conjugacy classes of maps G → Σn.
    Sigma {
        #[arg(long)]
        group: String,
        #[arg(long)]
        n: usize,
    },
}

#[derive(Debug, Subcommand)]
pub enum SpanCmd {
    /// `second ∘ first` of two `span/1` documents.
    Compose {
        first: String,
        second: String,
    },
    /// Span classes between two G-sets.
    Homs {
        #[arg(long)]
        group: String,
        #[arg(long)]
        from: String,
        #[arg(long)]
        to: String,
        #[arg(long, default_value_t = 4)]
        cap: usize,
    },
    Factor {
        span: String,
    },
}

#[derive(Debug, Subcommand)]
pub enum BispanCmd {
    /// `second ∘ first` of two `bispan/1` documents.
    Compose {
        first: String,
        second: String,
        #[arg(long, value_enum, default_value_t = OrderArg::Direct)]
        order: OrderArg,
    },
    /// Functoriality of a Tambara functor on bispans between orbits.
    CheckTambara {
        #[arg(long)]
        group: String,
        #[arg(long, default_value_t = 2)]
        cap: usize,
        #[arg(long, value_enum, default_value_t = OracleArg::Burnside)]
        oracle: OracleArg,
    },
}

#[derive(Debug, Subcommand)]
pub enum TambaraCmd {
    /// Table of marks.
    Marks {
        #[arg(long)]
        group: String,
        #[arg(long, default_value = ",")]
        delimiter: String,
    },
    /// Norm of an H-set from subgroup class `--subgroup` up to the group.
    Norm {
        #[arg(long)]
        group: String,
        #[arg(long)]
        subgroup: usize,
        /// Orbit-type counts over the subgroup.
        #[arg(long)]
        gset: String,
    },
    /// The Burnside functor on a G-set bispan, at sample values or at
    /// `--value` (one semicolon-separated coefficient list per orbit).
    Eval {
        bispan: String,
        #[arg(long)]
        value: Option<String>,
    },
}

#[derive(Debug, Subcommand)]
pub enum FreeCmd {
    Check {
        #[arg(long)]
        group: String,
        #[arg(long)]
        gset: String,
        #[arg(long, env = "EQALG_MAX_DEGREE", default_value_t = 3)]
        max_degree: usize,
    },
    Census {
        #[arg(long)]
        group: String,
        /// Subgroup class of the generator.
        #[arg(long)]
        level: Option<usize>,
        /// Subgroup class of the endpoint.
        #[arg(long)]
        endpoint: Option<usize>,
        #[arg(long, default_value_t = 2)]
        cap: usize,
    },
}

#[derive(Debug, Subcommand)]
pub enum VerifyCmd {
    All {
        #[arg(long, env = "EQALG_BATTERY", value_enum, default_value_t = BatteryArg::Small)]
        battery: BatteryArg,
        /// Run only these criteria.
        #[arg(long, value_delimiter = ',')]
        only: Vec<usize>,
    },
}

/// Output text and exit status of one command.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Response {
    pub status: i32,
    pub stdout: String,
    pub stderr: String,
}

pub fn exit_status(e: &Error) -> i32 {
    match e {
        Error::Capacity { .. } => 3,
        Error::NonIntegral { .. } => 1,
        _ => 2,
    }
}

/// Parses and runs a command line.
pub fn run_args<I, T>(args: I) -> Response
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    match CommandRequest::try_parse_from(args) {
        Ok(req) => run(&req),
        Err(e) => {
            let status = if e.use_stderr() { 2 } else { 0 };
            let text = e.render().to_string();
            if status == 0 {
                Response { status, stdout: text, stderr: String::new() }
            } else {
                Response { status, stdout: String::new(), stderr: text }
            }
        }
    }
}

pub fn run(req: &CommandRequest) -> Response {
    if let Command::Verify(VerifyCmd::All { battery, only }) = &req.command {
        return verify_all(&req.options, *battery, only);
    }
    let mut out = String::new();
    match execute(req, &mut out) {
        Ok(true) => Response { status: 0, stdout: out, stderr: String::new() },
        Ok(false) => Response { status: 1, stdout: out, stderr: String::new() },
        Err(e) => Response { status: exit_status(&e), stdout: out, stderr: format!("error: {e}\n") },
    }
}

/// Groups by name: `trivial`, `C<n>`, `S<n>`, `V4`, products `AxB`, or a
/// path to a `group/1` document.
pub fn parse_group(spec: &str) -> Result<Arc<FiniteGroup>> {
    if Path::new(spec).is_file() {
        let text = std::fs::read_to_string(spec).map_err(|e| Error::invalid(format!("{spec}: {e}")))?;
        return Ok(Arc::new(doc::group_from_doc(&doc::from_text(&text)?)?));
    }
    fn one(s: &str) -> Result<FiniteGroup> {
        let num = |t: &str| t.parse::<usize>().map_err(|_| Error::invalid(format!("bad group name {s}")));
        match s {
            "trivial" | "1" => Ok(FiniteGroup::trivial()),
            "V4" => Ok(FiniteGroup::direct_product(&FiniteGroup::cyclic(2), &FiniteGroup::cyclic(2))),
            _ if s.starts_with('C') => {
                let n = num(&s[1..])?;
                if n == 0 || n > 64 {
                    return Err(Error::invalid(format!("cyclic order out of range in {s}")));
                }
                Ok(FiniteGroup::cyclic(n))
            }
            _ if s.starts_with('S') => {
                let n = num(&s[1..])?;
                if n == 0 || n > 5 {
                    return Err(Error::invalid(format!("symmetric degree out of range in {s}")));
                }
                Ok(FiniteGroup::symmetric(n))
            }
            _ => Err(Error::invalid(format!("unknown group {s}"))),
        }
    }
    let mut parts = spec.split('x');
    let mut g = one(parts.next().unwrap_or_default())?;
    for p in parts {
        g = FiniteGroup::direct_product(&g, &one(p)?);
        if g.order() > 256 {
            return Err(Error::capacity("group order", g.order() as u128, 256));
        }
    }
    Ok(Arc::new(g))
}

fn read(path: &str) -> Result<String> {
    std::fs::read_to_string(path).map_err(|e| Error::invalid(format!("{path}: {e}")))
}

pub fn parse_gset(g: &Arc<FiniteGroup>, spec: &str) -> Result<GSet> {
    match spec {
        "point" => return Ok(GSet::point(g)),
        "regular" => return Ok(GSet::regular(g)),
        "empty" => return Ok(GSet::empty(g)),
        _ => {}
    }
    if Path::new(spec).is_file() {
        let x = doc::gset_from_doc(&doc::from_text(&read(spec)?)?, Some(g))?;
        if !Arc::ptr_eq(x.group(), g) {
            return Err(Error::Mismatch("G-set document over a different group".into()));
        }
        return Ok(x);
    }
    let counts = spec
        .split(',')
        .map(|t| t.trim().parse::<usize>().map_err(|_| Error::invalid(format!("bad orbit type {spec}"))))
        .collect::<Result<Vec<_>>>()?;
    if counts.len() != g.lattice().len() {
        return Err(Error::invalid(format!("{} has {} subgroup classes, orbit type {spec} lists {}", g.name(), g.lattice().len(), counts.len())));
    }
    let size: usize = counts
        .iter()
        .enumerate()
        .map(|(c, k)| k * (g.order() / g.lattice().representative(c).order()))
        .sum();
    Caps::default().check_points("G-set points", size as u128)?;
    Ok(GSet::from_orbit_type(g, &counts))
}

pub fn parse_gset_map(g: &Arc<FiniteGroup>, spec: &str, caps: &Caps) -> Result<GSetMap> {
    if let Some((kind, x)) = spec.split_once(':') {
        let x = parse_gset(g, x)?;
        return match kind {
            "id" => Ok(GSetMap::identity(&x)),
            "point" => Ok(GSetMap::to_point(&x)),
            "fold" => Ok(GSetMap::fold(&x)),
            _ => Err(Error::invalid(format!("unknown map {spec}"))),
        };
    }
    doc::map_from_doc(&GSetWorld::new(g.clone()), &doc::from_text(&read(spec)?)?, caps)
}

fn class_index(g: &FiniteGroup, k: &str) -> Result<usize> {
    let k: usize = k.parse().map_err(|_| Error::invalid(format!("bad subgroup class {k}")))?;
    if k >= g.lattice().len() {
        return Err(Error::invalid(format!("{} has only {} subgroup classes", g.name(), g.lattice().len())));
    }
    Ok(k)
}

pub fn parse_functor(g: &Arc<FiniteGroup>, spec: &str, caps: &Caps) -> Result<GroupoidMap> {
    let bg = Arc::new(FiniteGroupoid::delooping(g));
    let (kind, arg) = spec.split_once(':').unwrap_or((spec, ""));
    match kind {
        "point" => {
            let one = Arc::new(FiniteGroupoid::terminal());
            GroupoidMap::new(one, bg.clone(), vec![0], vec![bg.identity(0)])
        }
        "id" => Ok(GroupoidMap::identity(&bg)),
        "sub" => Ok(GroupoidMap::delooping(&g.embed(g.lattice().representative(class_index(g, arg)?)))),
        "quot" => {
            let n = g.lattice().representative(class_index(g, arg)?);
            Ok(GroupoidMap::delooping(&GroupHom::quotient(g, n)?))
        }
        "action" => {
            let h = g.lattice().representative(class_index(g, arg)?);
            let act = Arc::new(FiniteGroupoid::action(&GSet::coset_space(g, h)));
            let objects = vec![0; act.object_count()];
            let morphisms = act.morphisms().map(|m| m % g.order()).collect();
            GroupoidMap::new(act, bg, objects, morphisms)
        }
        "proj" => {
            let wide = Arc::new(FiniteGroup::direct_product(g, &FiniteGroup::cyclic(2)));
            let proj = GroupHom::new(wide.clone(), g.clone(), wide.elements().map(|e| e / 2).collect())?;
            Ok(GroupoidMap::delooping(&proj))
        }
        _ if Path::new(spec).is_file() => doc::map_from_doc(&GroupoidWorld, &doc::from_text(&read(spec)?)?, caps),
        _ => Err(Error::invalid(format!("unknown functor {spec}"))),
    }
}

fn header(out: &mut String, what: &str, seed: Option<u64>) {
    match seed {
        Some(s) => writeln!(out, "# eqalg table/1 {what} seed={s}"),
        None => writeln!(out, "# eqalg table/1 {what}"),
    }
    .expect("writing to a string");
}

fn groupoid_summary(x: &FiniteGroupoid) -> String {
    let comps: Vec<String> = x.components().iter().map(|c| c.group.order().to_string()).collect();
    format!("{} objects, {} morphisms, component groups of order [{}]", x.object_count(), x.morphism_count(), comps.join(", "))
}

fn classes_line(x: &GSet) -> String {
    let labels = x.group().lattice().labels();
    x.orbit_type()
        .iter()
        .zip(&labels)
        .filter(|(k, _)| **k > 0)
        .map(|(k, l)| format!("{k}·[G/{l}]"))
        .collect::<Vec<_>>()
        .join(" + ")
}

fn span_table<W: DocWorld>(w: &W, s: &Span<W>, out: &mut String) -> Result<()> {
    for (class, mult) in decompose_span(w, s)? {
        writeln!(out, "{mult} × piece of size {} with {} automorphisms", w.size(&class.span.apex(w)), class.automorphisms)
            .expect("writing to a string");
    }
    Ok(())
}

fn load_span_docs(first: &str, second: &str) -> Result<(SpanDoc, SpanDoc)> {
    Ok((doc::from_text(&read(first)?)?, doc::from_text(&read(second)?)?))
}

/// Runs the request, writing to `out`; `Ok(false)` is a verification failure.
pub fn execute(req: &CommandRequest, out: &mut String) -> Result<bool> {
    let o = &req.options;
    let caps = o.caps();
    match &req.command {
        Command::Groupoid(GroupoidCmd::Pullback { group, left, right }) => {
            let g = parse_group(group)?;
            let f = parse_functor(&g, left, &caps)?;
            let h = parse_functor(&g, right, &caps)?;
            let sq = iso_comma_pullback(&f, &h, &caps)?;
            if o.format == Format::Doc {
                let s = Span { back: sq.left.clone(), forward: sq.right.clone(), spec: AdequateTripleSpec::ALL };
                out.push_str(&doc::to_text(&doc::span_doc(&GroupoidWorld, &s)));
                return Ok(true);
            }
            let cert = verify_pullback_up(&sq, &caps);
            header(out, "groupoid pullback", None);
            writeln!(out, "apex: {}", groupoid_summary(&sq.apex)).ok();
            writeln!(out, "left projection faithful: {}", sq.left.is_faithful()).ok();
            writeln!(out, "right projection faithful: {}", sq.right.is_faithful()).ok();
            writeln!(out, "universal property: {} ({} test functors)", if cert.passed { "pass" } else { "FAIL" }, cert.checked).ok();
            if let Some(why) = &cert.failure {
                writeln!(out, "first violation: {why}").ok();
            }
            Ok(cert.passed)
        }
        Command::Groupoid(GroupoidCmd::Factor { group, map }) => {
            let g = parse_group(group)?;
            let f = parse_functor(&g, map, &caps)?;
            let (e, m) = f.em_factorize();
            if o.format == Format::Doc {
                let s = Span { back: e.clone(), forward: m.clone(), spec: AdequateTripleSpec::ALL };
                out.push_str(&doc::to_text(&doc::span_doc(&GroupoidWorld, &s)));
                return Ok(true);
            }
            let ok = e.then(&m)?.is_naturally_isomorphic(&f) && e.is_full() && m.is_faithful();
            header(out, "groupoid factor", None);
            writeln!(out, "map faithful: {}", f.is_faithful()).ok();
            writeln!(out, "middle: {}", groupoid_summary(m.source())).ok();
            writeln!(out, "left factor full: {}, equivalence: {}", e.is_full(), e.is_equivalence()).ok();
            writeln!(out, "right factor faithful: {}, equivalence: {}", m.is_faithful(), m.is_equivalence()).ok();
            writeln!(out, "recomposes: {ok}").ok();
            Ok(ok)
        }
        Command::Gset(GsetCmd::Orbits { group, gset }) => {
            let g = parse_group(group)?;
            let x = parse_gset(&g, gset)?;
            if o.format == Format::Doc {
                out.push_str(&doc::to_text(&doc::gset_doc(&x)));
                return Ok(true);
            }
            header(out, "gset orbits", None);
            writeln!(out, "points: {}", x.size()).ok();
            let labels = g.lattice().labels();
            writeln!(out, "class,stabilizer,orbit size,multiplicity").ok();
            for s in x.orbits() {
                writeln!(out, "{},{},{},{}", s.class, labels[s.class], s.orbit.size(), s.multiplicity).ok();
            }
            writeln!(out, "marks: {:?}", x.marks()).ok();
            Ok(true)
        }
        Command::Gset(GsetCmd::Depprod { group, sum, norm, test_cap }) => {
            let g = parse_group(group)?;
            let m = parse_gset_map(&g, sum, &caps)?;
            let n = parse_gset_map(&g, norm, &caps)?;
            let d = dependent_product(&n, &m, &caps)?;
            if o.format == Format::Doc {
                let b = Bispan {
                    restriction: d.counit.clone(),
                    norm: d.pulled_norm.clone(),
                    sum: d.pushed_sum.clone(),
                    spec: crate::bispan::BispanTripleSpec::ALL,
                };
                out.push_str(&doc::to_text(&doc::bispan_doc(&GSetWorld::new(g), &b)));
                return Ok(true);
            }
            let cert = verify_distributivity_diagram(&d, *test_cap);
            header(out, "gset depprod", None);
            writeln!(out, "pushed sum source: {} points, {}", d.pushed_sum.source().size(), classes_line(d.pushed_sum.source())).ok();
            writeln!(out, "pullback: {} points, {}", d.counit.source().size(), classes_line(d.counit.source())).ok();
            writeln!(out, "marks of pushed sum source: {:?}", d.pushed_sum.source().marks()).ok();
            writeln!(out, "universal property (test cap {test_cap}): {} ({} instances)", if cert.passed { "pass" } else { "FAIL" }, cert.checked).ok();
            if let Some(why) = &cert.failure {
                writeln!(out, "first violation: {why}").ok();
            }
            Ok(cert.passed)
        }
        Command::Gset(GsetCmd::Sigma { group, n }) => {
            let g = parse_group(group)?;
            let c = sigma_classes(&g, *n, &caps)?;
            header(out, "gset sigma", None);
            writeln!(out, "{}-element G-sets: {}", n, c.gset_classes.len()).ok();
            writeln!(out, "conjugacy classes of maps to S{n}: {}", c.homomorphism_classes.len()).ok();
            for t in &c.gset_classes {
                writeln!(out, "orbit type {t:?}").ok();
            }
            writeln!(out, "agree: {}", c.agrees()).ok();
            Ok(c.agrees())
        }
        Command::Span(SpanCmd::Compose { first, second }) => {
            let (a, b) = load_span_docs(first, second)?;
            match a.world.as_str() {
                "gset" => {
                    let w = GSetWorld::new(doc::group_of_objects(&a.objects)?);
                    span_compose(&w, &a, &b, o.format, &caps, out)
                }
                "groupoid" => span_compose(&GroupoidWorld, &a, &b, o.format, &caps, out),
                other => Err(Error::Document(format!("unknown world {other}"))),
            }
        }
        Command::Span(SpanCmd::Homs { group, from, to, cap }) => {
            let g = parse_group(group)?;
            let w = GSetWorld::new(g.clone());
            let (x, y) = (parse_gset(&g, from)?, parse_gset(&g, to)?);
            let classes = hom_enumerate(&w, &x, &y, AdequateTripleSpec::ALL, *cap, &caps)?;
            if o.format == Format::Doc {
                let docs: Vec<SpanDoc> = classes.iter().map(|c| doc::span_doc(&w, &c.span)).collect();
                out.push_str(&doc::to_text(&docs));
                return Ok(true);
            }
            header(out, "span homs", None);
            writeln!(out, "index,apex points,apex classes,automorphisms").ok();
            for (i, c) in classes.iter().enumerate() {
                let apex = c.span.apex(&w);
                writeln!(out, "{i},{},{},{}", apex.size(), classes_line(&apex), c.automorphisms).ok();
            }
            writeln!(out, "classes: {}", classes.len()).ok();
            Ok(true)
        }
        Command::Span(SpanCmd::Factor { span }) => {
            let d: SpanDoc = doc::from_text(&read(span)?)?;
            match d.world.as_str() {
                "gset" => {
                    let w = GSetWorld::new(doc::group_of_objects(&d.objects)?);
                    span_factor(&w, &d, o.format, &caps, out)
                }
                "groupoid" => span_factor(&GroupoidWorld, &d, o.format, &caps, out),
                other => Err(Error::Document(format!("unknown world {other}"))),
            }
        }
        Command::Bispan(BispanCmd::Compose { first, second, order }) => {
            let a: BispanDoc = doc::from_text(&read(first)?)?;
            let b: BispanDoc = doc::from_text(&read(second)?)?;
            match a.world.as_str() {
                "gset" => {
                    let w = GSetWorld::new(doc::group_of_objects(&a.objects)?);
                    bispan_compose(&w, &a, &b, (*order).into(), o.format, &caps, out)
                }
                "groupoid" => bispan_compose(&GroupoidWorld, &a, &b, (*order).into(), o.format, &caps, out),
                other => Err(Error::Document(format!("unknown world {other}"))),
            }
        }
        Command::Bispan(BispanCmd::CheckTambara { group, cap, oracle }) => {
            let g = parse_group(group)?;
            let lattice = g.lattice();
            let ends: Vec<GSet> = (0..lattice.len()).map(|c| GSet::coset_space(&g, lattice.representative(c))).collect();
            let report = match oracle {
                OracleArg::Burnside => check_functoriality(&as_tambara_oracle(&g), &ends, *cap, o.seed, &caps)?,
                OracleArg::Terminal => check_functoriality(&TerminalOracle { group: g.clone() }, &ends, *cap, o.seed, &caps)?,
                OracleArg::Corrupted => {
                    check_functoriality(&CorruptedNormOracle { inner: as_tambara_oracle(&g) }, &ends, *cap, o.seed, &caps)?
                }
            };
            header(out, "bispan check-tambara", Some(o.seed));
            writeln!(out, "composable pairs: {}", report.pairs).ok();
            writeln!(out, "rewrite orders agree: {}", report.confluent).ok();
            writeln!(out, "functoriality: {}", if report.certificate.passed { "pass" } else { "FAIL" }).ok();
            if let Some(why) = &report.certificate.failure {
                writeln!(out, "first violation: {why}").ok();
            }
            Ok(report.certificate.passed)
        }
        Command::Tambara(TambaraCmd::Marks { group, delimiter }) => {
            let g = parse_group(group)?;
            out.push_str(&marks_table_text(&g, delimiter));
            Ok(true)
        }
        Command::Tambara(TambaraCmd::Norm { group, subgroup, gset }) => {
            let g = parse_group(group)?;
            let incl = g.embed(g.lattice().representative(class_index(&g, &subgroup.to_string())?));
            let x = parse_gset(incl.source(), gset)?;
            let eff = norm_effective(&incl, &x, &caps)?;
            let virt = norm_virtual(&incl, &burnside_class(&x))?;
            if o.format == Format::Doc {
                out.push_str(&doc::to_text(&doc::gset_doc(&eff)));
                return Ok(true);
            }
            let agree = burnside_class(&eff).coeffs() == virt.coeffs();
            header(out, "tambara norm", None);
            writeln!(out, "class,{}", g.lattice().labels().join(",")).ok();
            writeln!(out, "effective,{}", join(burnside_class(&eff).coeffs())).ok();
            writeln!(out, "virtual,{}", join(virt.coeffs())).ok();
            writeln!(out, "marks,{}", join(&virt.marks().values)).ok();
            writeln!(out, "agree: {agree}").ok();
            Ok(agree)
        }
        Command::Tambara(TambaraCmd::Eval { bispan, value }) => {
            let d: BispanDoc = doc::from_text(&read(bispan)?)?;
            let w = GSetWorld::new(doc::group_of_objects(&d.objects)?);
            let u = doc::bispan_from_doc(&w, &d, &caps)?;
            let oracle = as_tambara_oracle(&w.group);
            let left = u.left(&w);
            let inputs = match value {
                Some(v) => vec![parse_value(&oracle, &left, v)?],
                None => sample_values(&oracle, &left, o.seed, 8),
            };
            header(out, "tambara eval", Some(o.seed));
            for input in inputs {
                let output = evaluate_bispan(&oracle, &u, &input);
                writeln!(out, "{} -> {}", show_value(&input), show_value(&output)).ok();
            }
            Ok(true)
        }
        Command::Free(FreeCmd::Check { group, gset, max_degree }) => {
            let g = parse_group(group)?;
            let x = parse_gset(&g, gset)?;
            let r = free_underlying(&x, *max_degree, &caps)?;
            header(out, "free check", None);
            writeln!(out, "degree,symmetric power marks,pipeline marks,isomorphic").ok();
            for d in &r.degrees {
                writeln!(out, "{},{:?},{:?},{}", d.degree, d.symmetric.marks(), d.pipeline.marks(), d.isomorphic).ok();
            }
            writeln!(out, "result: {}", if r.passed() { "pass" } else { "FAIL" }).ok();
            Ok(r.passed())
        }
        Command::Free(FreeCmd::Census { group, level, endpoint, cap }) => {
            let g = parse_group(group)?;
            let top = g.lattice().len() - 1;
            let h = g.lattice().representative(level.unwrap_or(top)).clone();
            let k = g.lattice().representative(endpoint.unwrap_or(top)).clone();
            let r = free_tambara_census(&g, &h, &k, *cap, &caps)?;
            header(out, "free census", None);
            writeln!(out, "sum points,norm points,classes").ok();
            for ((b, a), n) in &r.counts {
                writeln!(out, "{b},{a},{n}").ok();
            }
            writeln!(out, "total: {}", r.total).ok();
            for (n, found, want) in &r.point_fibers {
                writeln!(out, "degree {n} over a point: {found} classes, {want} maps to S{n} up to conjugacy").ok();
            }
            writeln!(out, "consistent: {}", r.consistent()).ok();
            Ok(r.consistent())
        }
        Command::Verify(_) => unreachable!("handled by run"),
    }
}

fn verify_all(o: &Options, battery: BatteryArg, only: &[usize]) -> Response {
    let battery = match battery {
        BatteryArg::Small => Battery::Small,
        BatteryArg::Full => Battery::Full,
    };
    let which: Vec<usize> = if only.is_empty() { (1..=10).collect() } else { only.to_vec() };
    if let Some(bad) = which.iter().find(|i| !(1..=10).contains(*i)) {
        return Response { status: 2, stdout: String::new(), stderr: format!("error: no criterion {bad}\n") };
    }
    let mut out = String::new();
    let name = if battery == Battery::Small { "small" } else { "full" };
    header(&mut out, &format!("verify all battery={name}"), Some(o.seed));
    let outcomes: Vec<_> = which.par_iter().map(|&i| run_criterion(i, battery, &o.caps(), o.seed)).collect();
    let mut status = 0;
    for r in outcomes {
        // timings vary between runs, so they stay out of the output
        writeln!(out, "criterion {:>2} {} ({}): {} instances", r.index, if r.passed { "PASS" } else { "FAIL" }, r.title, r.checked).ok();
        if !r.detail.is_empty() {
            writeln!(out, "  {}", r.detail).ok();
        }
        match (r.passed, r.capacity) {
            (true, _) => {}
            (false, true) if status == 0 => status = 3,
            (false, true) => {}
            (false, false) => status = 1,
        }
    }
    Response { status, stdout: out, stderr: String::new() }
}

fn join<T: ToString>(xs: &[T]) -> String {
    xs.iter().map(|x| x.to_string()).collect::<Vec<_>>().join(",")
}

fn show_value(v: &[BurnsideElement]) -> String {
    v.iter().map(|e| format!("[{}]", join(e.coeffs()))).collect::<Vec<_>>().join(" ")
}

fn parse_value(oracle: &crate::tambara::BurnsideOracle, x: &GSet, text: &str) -> Result<Vec<BurnsideElement>> {
    let reps = x.orbit_representatives();
    let parts: Vec<&str> = text.split(';').collect();
    if parts.len() != reps.len() {
        return Err(Error::invalid(format!("expected {} orbit values, found {}", reps.len(), parts.len())));
    }
    reps.iter()
        .zip(parts)
        .map(|(&r, p)| {
            let level = oracle.level(&x.stabilizer(r));
            let coeffs = p
                .split(',')
                .map(|t| t.trim().parse::<BigInt>().map_err(|_| Error::invalid(format!("bad coefficient {t}"))))
                .collect::<Result<Vec<_>>>()?;
            BurnsideElement::new(level, coeffs)
        })
        .collect()
}

fn span_compose<W: DocWorld>(w: &W, a: &SpanDoc, b: &SpanDoc, format: Format, caps: &Caps, out: &mut String) -> Result<bool> {
    let s = doc::span_from_doc(w, a, caps)?;
    let t = doc::span_from_doc(w, b, caps)?;
    let c = compose_spans(w, &s, &t, caps)?;
    if format == Format::Doc {
        out.push_str(&doc::to_text(&doc::span_doc(w, &c)));
        return Ok(true);
    }
    header(out, "span compose", None);
    writeln!(out, "apex size: {}", w.size(&c.apex(w))).ok();
    span_table(w, &c, out)?;
    Ok(true)
}

fn span_factor<W: DocWorld>(w: &W, d: &SpanDoc, format: Format, caps: &Caps, out: &mut String) -> Result<bool> {
    let s = doc::span_from_doc(w, d, caps)?;
    let (backwards, forwards) = factor_span(w, &s);
    if format == Format::Doc {
        out.push_str(&doc::to_text(&vec![doc::span_doc(w, &backwards), doc::span_doc(w, &forwards)]));
        return Ok(true);
    }
    let again = compose_spans(w, &backwards, &forwards, caps)?;
    let ok = crate::spancat::span_iso(w, &again, &s);
    header(out, "span factor", None);
    writeln!(out, "backwards part:").ok();
    span_table(w, &backwards, out)?;
    writeln!(out, "forwards part:").ok();
    span_table(w, &forwards, out)?;
    writeln!(out, "recomposes: {ok}").ok();
    Ok(ok)
}

fn bispan_compose<W: DocWorld + crate::bispan::DistributiveWorld>(
    w: &W,
    a: &BispanDoc,
    b: &BispanDoc,
    order: RewriteOrder,
    format: Format,
    caps: &Caps,
    out: &mut String,
) -> Result<bool> {
    let u = doc::bispan_from_doc(w, a, caps)?;
    let v = doc::bispan_from_doc(w, b, caps)?;
    let c = compose_bispans(w, &u, &v, order, caps)?;
    if format == Format::Doc {
        out.push_str(&doc::to_text(&doc::bispan_doc(w, &c)));
        return Ok(true);
    }
    let mut confluent = true;
    for other in RewriteOrder::ALL {
        confluent &= crate::bispan::bispan_iso(w, &c, &compose_bispans(w, &u, &v, other, caps)?, caps);
    }
    header(out, "bispan compose", None);
    writeln!(out, "restriction source size: {}", w.size(&w.source(&c.restriction))).ok();
    writeln!(out, "norm target size: {}", w.size(&w.target(&c.norm))).ok();
    writeln!(out, "rewrite orders agree: {confluent}").ok();
    Ok(confluent)
}

/// Used by `map/1` producers in examples and tests.
pub fn gset_map_doc(g: &Arc<FiniteGroup>, f: &GSetMap) -> MapFileDoc {
    doc::map_doc(&GSetWorld::new(g.clone()), f)
}
