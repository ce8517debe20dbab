//! The `catml` command line: argument parsing and one function per
//! subcommand. Each command returns an [`Outcome`] holding both the text
//! lines and the JSON report, so output is identical whichever is printed.

pub mod specs;
pub mod workspace;

use std::fs;
use std::path::{Path, PathBuf};
use std::sync::Arc;

use clap::{Parser, Subcommand};
use serde::de::DeserializeOwned;
use serde::Serialize;
use serde_json::{json, Value};

use crate::adjmonad::builtin::check_upath_laws;
use crate::adjmonad::{beck_comparison, check_adjunction, check_monad_laws, coslice, eilenberg_moore, slice};
use crate::category::{Budget, Category};
use crate::error::{Error, Result};
use crate::fincat::{check_category_laws, free_category, CategoryJson, Certification, ExplicitJson, FinCat, PathJson};
use crate::finset::{colimit, limit, verify_colimit_cocone, verify_limit_cone, DiagramJson};
use crate::foundations::{quotient_graph, DiGraph, EquivRelation, GraphHom};
use crate::functcat::{check_functor, Functor};
use crate::mlsys::{check_compatible, check_transformation, quotient_system, Structure, SystemJson};
use crate::presheaf::{
    check_presheaf, graph_from_corpus, word2fun_pipeline, yoneda_check, yoneda_embed, PipelineTarget, Presheaf,
    PresheafJson,
};
use crate::report::{Coverage, LawReport};
use crate::with_adjunction;

use specs::{AdjunctionSpec, BuiltMonad, CatRef, FunctorFile, MonadSpec, PresheafFile, TransformationFile};
use workspace::{Artifact, Workspace};

#[derive(Debug, Parser)]
#[command(name = "catml", version, about = "Finite category theory for ML systems")]
pub struct Cli {
    /// Artifact store directory.
    #[arg(long, global = true, default_value = ".catml")]
    pub workspace: PathBuf,
    /// Path-length bound for free categories built from graphs.
    #[arg(long, global = true, default_value_t = 8)]
    pub bound: usize,
    /// Maximum number of candidates any enumeration may examine.
    #[arg(long, global = true)]
    pub budget: Option<u64>,
    /// Print the JSON report instead of text.
    #[arg(long, global = true)]
    pub json: bool,
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Read a corpus (or graph JSON) into a word graph artifact.
    Ingest {
        input: PathBuf,
        #[arg(long)]
        name: Option<String>,
    },
    /// Path category, quotient by a congruence, and Yoneda embedding.
    Pipeline {
        graph: String,
        /// JSON list of path pairs.
        #[arg(long)]
        congruence: Option<String>,
        /// A second graph with a graph map, for the naturality square.
        #[arg(long)]
        target: Option<String>,
        /// `X,Y` pairs to report hom counts for (default: every pair with a path).
        #[arg(long)]
        pair: Vec<String>,
        #[arg(long)]
        dot: Option<PathBuf>,
        #[arg(long)]
        name: Option<String>,
    },
    /// Quotient of an ML system by a partition of its carrier.
    Quotient {
        system: String,
        partition: String,
        /// Merge parallel edges of a relation quotient.
        #[arg(long)]
        collapse_parallel: bool,
        /// Print why an incompatible partition fails.
        #[arg(long)]
        witness: bool,
        #[arg(long)]
        name: Option<String>,
    },
    /// Slice (or coslice) of a finite category at an object.
    Slice {
        category: String,
        object: String,
        #[arg(long)]
        co: bool,
        #[arg(long)]
        name: Option<String>,
    },
    /// Yoneda embedding, or the Yoneda bijection for one presheaf.
    Yoneda {
        category: String,
        #[arg(long, requires = "at")]
        presheaf: Option<String>,
        #[arg(long)]
        at: Option<String>,
    },
    /// Limit or colimit of a finite-set diagram, with verification.
    Limit {
        diagram: String,
        #[arg(long)]
        colimit: bool,
        #[arg(long)]
        name: Option<String>,
    },
    /// Left adjoint of an explicit functor, by universal arrows.
    Adjoint {
        functor: String,
        #[arg(long)]
        name: Option<String>,
    },
    /// Check the laws of a built-in monad.
    Monad { spec: String },
    /// Enumerate Eilenberg–Moore algebras of a built-in monad.
    Em {
        spec: String,
        /// Carrier sizes (default: the monad's universe).
        #[arg(long, value_delimiter = ',')]
        carriers: Vec<usize>,
    },
    /// Comparison functor into the Eilenberg–Moore category.
    Beck { spec: String },
    /// Run a law suite on an artifact.
    Verify { suite: String, artifact: String },
    /// Write a graph or category as DOT.
    ExportDot {
        artifact: String,
        #[arg(long)]
        out: Option<PathBuf>,
        #[arg(long)]
        identities: bool,
    },
}

pub const SUITES: &[&str] =
    &["category", "functor", "presheaf", "transformation", "yoneda", "limit", "adjunction", "monad", "workspace"];

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Status {
    Pass,
    Violation,
}

#[derive(Debug, Clone)]
pub struct Outcome {
    pub status: Status,
    pub lines: Vec<String>,
    pub json: Value,
}

impl Outcome {
    fn new(ok: bool, lines: Vec<String>, json: Value) -> Self {
        Outcome { status: if ok { Status::Pass } else { Status::Violation }, lines, json }
    }

    pub fn render(&self, as_json: bool) -> String {
        if as_json {
            let mut s = serde_json::to_string_pretty(&self.json).expect("report serializes");
            s.push('\n');
            s
        } else {
            self.lines.iter().map(|l| format!("{l}\n")).collect()
        }
    }
}

/// 0 pass, 1 law violation, 2 input error, 3 bound or budget exceeded.
pub fn exit_code(r: &Result<Outcome>) -> i32 {
    match r {
        Ok(o) if o.status == Status::Pass => 0,
        Ok(_) => 1,
        Err(e) if e.is_resource_limit() => 3,
        Err(Error::Law(_)) | Err(Error::Incompatible(_)) => 1,
        Err(_) => 2,
    }
}

fn to_value<T: Serialize>(x: &T) -> Value {
    serde_json::to_value(x).expect("report serializes")
}

pub fn coverage_text(c: &Coverage) -> String {
    match c {
        Coverage::Exhaustive => "exhaustive".into(),
        Coverage::Sampled { samples, seed } => format!("sampled, {samples} samples, seed {seed:#x}"),
        Coverage::Truncated { bound } => format!("truncated at path length {bound}"),
    }
}

pub fn report_lines(r: &LawReport) -> Vec<String> {
    let verdict = if r.passed() { "pass" } else { "FAIL" };
    let mut out = vec![format!("{}: {verdict} ({} checks, {})", r.subject, r.checked, coverage_text(&r.coverage))];
    out.extend(r.violations.iter().map(|v| format!("  violation [{}] at {}: {}", v.law, v.at, v.detail)));
    out
}

fn reports_outcome(reports: Vec<LawReport>, mut lines: Vec<String>, extra: Value) -> Outcome {
    let ok = reports.iter().all(LawReport::passed);
    for r in &reports {
        lines.extend(report_lines(r));
    }
    let mut json = json!({ "passed": ok, "reports": reports });
    if let (Value::Object(m), Value::Object(e)) = (&mut json, extra) {
        m.extend(e);
    }
    Outcome::new(ok, lines, json)
}

fn certification_text(c: Certification) -> String {
    match c {
        Certification::Exact => "exact".into(),
        Certification::BoundCertified(k) => format!("bound-certified at {k}"),
    }
}

/// Loads inputs from files or the workspace.
pub struct Ctx {
    pub ws: Workspace,
    pub budget: Budget,
    pub bound: usize,
}

impl Ctx {
    /// A file path is read directly (an `{"kind", "data"}` envelope is
    /// unwrapped); anything else is looked up in the workspace.
    pub fn load(&self, reference: &str, kinds: &[&str]) -> Result<Value> {
        let p = Path::new(reference);
        let art = if p.is_file() {
            let text = fs::read_to_string(p)?;
            let v: Value = serde_json::from_str(&text).map_err(|e| Error::invalid(format!("{reference}: {e}")))?;
            match v.as_object() {
                Some(m) if m.len() == 2 && m.contains_key("kind") && m.contains_key("data") => {
                    serde_json::from_value::<Artifact>(v).map_err(|e| Error::invalid(format!("{reference}: {e}")))?
                }
                _ => return Ok(v),
            }
        } else {
            self.ws.get(reference)?
        };
        if !kinds.contains(&art.kind.as_str()) {
            return Err(Error::invalid(format!("{reference} is a {}, expected {}", art.kind, kinds.join(" or "))));
        }
        Ok(art.data)
    }

    pub fn parse<T: DeserializeOwned>(&self, reference: &str, kinds: &[&str]) -> Result<T> {
        serde_json::from_value(self.load(reference, kinds)?).map_err(|e| Error::invalid(format!("{reference}: {e}")))
    }

    /// A category, or the free category (at `--bound`) on a graph.
    pub fn category(&self, reference: &str) -> Result<Arc<FinCat>> {
        let v = self.load(reference, &["category", "graph"])?;
        if let Ok(c) = serde_json::from_value::<CategoryJson>(v.clone()) {
            return c.build();
        }
        match serde_json::from_value::<DiGraph>(v) {
            Ok(g) => Ok(Arc::new(free_category(&g, self.bound)?)),
            Err(e) => Err(Error::invalid(format!("{reference} is neither a category nor a graph: {e}"))),
        }
    }

    /// `r` as named inside the file `from`: a path relative to that file
    /// when such a file exists, otherwise unchanged.
    fn relative(from: &str, r: &str) -> String {
        match Path::new(from).parent() {
            Some(dir) if Path::new(from).is_file() && dir.join(r).is_file() => dir.join(r).to_string_lossy().to_string(),
            _ => r.to_string(),
        }
    }

    /// A category referenced from inside the input `from`.
    pub fn cat_ref(&self, from: &str, r: &CatRef) -> Result<Arc<FinCat>> {
        match r {
            CatRef::Ref(name) => self.category(&Self::relative(from, name)),
            CatRef::Inline(c) => c.build(),
        }
    }

    pub fn functor(&self, reference: &str) -> Result<Functor> {
        let f: FunctorFile = self.parse(reference, &["functor"])?;
        Functor::from_json(&self.cat_ref(reference, &f.source)?, &self.cat_ref(reference, &f.target)?, &f.functor)
    }

    fn store(&self, name: Option<&str>, kind: &str, data: Value) -> Result<String> {
        self.ws.put(name, kind, data)
    }
}

pub fn run(cli: &Cli) -> Result<Outcome> {
    let budget = cli.budget.map(Budget::with_candidates).unwrap_or_default();
    let ctx = Ctx { ws: Workspace::open(&cli.workspace)?, budget, bound: cli.bound };
    match &cli.command {
        Command::Ingest { input, name } => ingest(&ctx, input, name.as_deref()),
        Command::Pipeline { graph, congruence, target, pair, dot, name } => {
            pipeline(&ctx, graph, congruence.as_deref(), target.as_deref(), pair, dot.as_deref(), name.as_deref())
        }
        Command::Quotient { system, partition, collapse_parallel, witness, name } => {
            quotient(&ctx, system, partition, *collapse_parallel, *witness, name.as_deref())
        }
        Command::Slice { category, object, co, name } => slice_cmd(&ctx, category, object, *co, name.as_deref()),
        Command::Yoneda { category, presheaf, at } => yoneda(&ctx, category, presheaf.as_deref(), at.as_deref()),
        Command::Limit { diagram, colimit, name } => limit_cmd(&ctx, diagram, *colimit, name.as_deref()),
        Command::Adjoint { functor, name } => adjoint(&ctx, functor, name.as_deref()),
        Command::Monad { spec } => monad(&ctx, spec),
        Command::Em { spec, carriers } => em(&ctx, spec, carriers),
        Command::Beck { spec } => beck(&ctx, spec),
        Command::Verify { suite, artifact } => verify(&ctx, suite, artifact),
        Command::ExportDot { artifact, out, identities } => export_dot(&ctx, artifact, out.as_deref(), *identities),
    }
}

fn ingest(ctx: &Ctx, input: &Path, name: Option<&str>) -> Result<Outcome> {
    let text = fs::read_to_string(input)?;
    let parsed: Option<Value> = serde_json::from_str(&text).ok();
    let graph = match parsed {
        Some(v) => {
            let v = match v.get("kind").and_then(Value::as_str) {
                Some("graph") => v.get("data").cloned().unwrap_or(Value::Null),
                _ => v,
            };
            serde_json::from_value::<DiGraph>(v).map_err(|e| Error::invalid(format!("graph JSON: {e}")))?
        }
        None => graph_from_corpus(&text)?,
    };
    let hash = ctx.store(name, "graph", to_value(&graph))?;
    let (n, m) = (graph.nodes().len(), graph.edges().len());
    Ok(Outcome::new(
        true,
        vec![format!("graph {}: {n} nodes, {m} edges", name.unwrap_or(&hash[..12]))],
        json!({ "artifact": hash, "nodes": n, "edges": m }),
    ))
}

fn write_dot(dir: &Path, file: &str, text: &str) -> Result<()> {
    fs::create_dir_all(dir)?;
    fs::write(dir.join(file), text)?;
    Ok(())
}

fn pipeline(
    ctx: &Ctx,
    graph: &str,
    congruence: Option<&str>,
    target: Option<&str>,
    pairs: &[String],
    dot: Option<&Path>,
    name: Option<&str>,
) -> Result<Outcome> {
    let g: DiGraph = ctx.parse(graph, &["graph"])?;
    let rels: Vec<(PathJson, PathJson)> = match congruence {
        Some(c) => ctx.parse(c, &["congruence"])?,
        None => Vec::new(),
    };
    let relations = rels.iter().map(|(a, b)| Ok((a.resolve(&g)?, b.resolve(&g)?))).collect::<Result<Vec<_>>>()?;
    let target = match target {
        None => None,
        Some(t) => {
            #[derive(serde::Deserialize)]
            struct TargetJson {
                graph: DiGraph,
                #[serde(default)]
                relations: Vec<(PathJson, PathJson)>,
                map: GraphHom,
            }
            let t: TargetJson = ctx.parse(t, &["pipeline-target"])?;
            let relations =
                t.relations.iter().map(|(a, b)| Ok((a.resolve(&t.graph)?, b.resolve(&t.graph)?))).collect::<Result<_>>()?;
            Some(PipelineTarget { graph: t.graph, relations, map: t.map })
        }
    };
    let b = word2fun_pipeline(&g, &relations, ctx.bound, target.as_ref(), ctx.budget)?;

    let mut lines = vec![
        format!(
            "path category: {} objects, {} morphisms ({})",
            b.path.num_objects(),
            b.path.num_morphisms(),
            certification_text(b.path.certification())
        ),
        format!("quotient category: {} objects, {} morphisms", b.quotient.num_objects(), b.quotient.num_morphisms()),
    ];
    let identified = b.path.num_morphisms() - b.quotient.num_morphisms();
    lines.push(if b.quotient_is_iso() {
        "quotient: isomorphism".to_string()
    } else {
        format!("quotient: {identified} morphism(s) identified")
    });
    let wanted: Vec<(String, String)> = if pairs.is_empty() {
        let mut all = Vec::new();
        for x in b.path.object_ids() {
            for y in b.path.object_ids() {
                if x != y && !b.path.hom_set(x, y)?.is_empty() {
                    all.push((b.path.obj_name(x).to_string(), b.path.obj_name(y).to_string()));
                }
            }
        }
        all
    } else {
        pairs
            .iter()
            .map(|p| match p.split_once(',') {
                Some((x, y)) => Ok((x.trim().to_string(), y.trim().to_string())),
                None => Err(Error::invalid(format!("pair `{p}` is not X,Y"))),
            })
            .collect::<Result<_>>()?
    };
    let mut counts = Vec::new();
    for (x, y) in &wanted {
        let (p, q, yv) = b.hom_counts(x, y)?;
        lines.push(format!("hom({x}, {y}): {p} → {q}"));
        counts.push(json!({ "source": x, "target": y, "path": p, "quotient": q, "yoneda": yv }));
    }
    let e = &b.embed;
    lines.push(format!(
        "yoneda: faithful {}, full {}, functorial {}, reflects isos {}",
        e.faithful, e.full, e.functorial, e.reflects_isos
    ));
    for r in b.stages.iter().chain(b.square.iter()) {
        lines.extend(report_lines(r));
    }
    if let Some(dir) = dot {
        write_dot(dir, "graph.dot", &g.to_dot("graph"))?;
        write_dot(dir, "path.dot", &b.path.to_dot("path", false))?;
        write_dot(dir, "quotient.dot", &b.quotient.to_dot("quotient", false))?;
    }
    let quotient_hash = ctx.store(name, "category", to_value(&CategoryJson::Explicit(ExplicitJson::from(b.quotient.as_ref()))))?;
    let json = json!({
        "passed": b.passed(),
        "path": { "objects": b.path.num_objects(), "morphisms": b.path.num_morphisms(), "certification": b.path.certification() },
        "quotient": { "objects": b.quotient.num_objects(), "morphisms": b.quotient.num_morphisms(), "artifact": quotient_hash },
        "isomorphism": b.quotient_is_iso(),
        "hom_counts": counts,
        "yoneda": e,
        "stages": b.stages,
        "square": b.square,
    });
    Ok(Outcome::new(b.passed(), lines, json))
}

fn quotient(
    ctx: &Ctx,
    system: &str,
    partition: &str,
    collapse: bool,
    witness: bool,
    name: Option<&str>,
) -> Result<Outcome> {
    let sj: SystemJson = ctx.parse(system, &["system"])?;
    let s = Arc::new(sj.build()?);
    let rho: EquivRelation = ctx.parse(partition, &["partition"])?;
    let compat = check_compatible(&s, &rho)?;
    if !compat.compatible {
        let mut lines = vec![format!("incompatible: the partition does not induce a {} on the classes", s.flavor())];
        if witness {
            lines.push(format!("witness: {}", compat.witness.clone().unwrap_or_default()));
        }
        return Ok(Outcome::new(false, lines, json!({ "compatible": false, "witness": compat.witness })));
    }
    let (out, map, report) = match (s.structure(), collapse) {
        (Structure::Relation(g), false) => {
            let (qg, hom) = quotient_graph(g, &rho, false)?;
            (SystemJson::Relation { graph: qg }, to_value(&hom), None)
        }
        _ => {
            let q = quotient_system(&s, &rho)?;
            let report = check_transformation(&q.q)?;
            (SystemJson::from(q.system.as_ref()), to_value(&q.q.element_map()), Some(report))
        }
    };
    let hash = ctx.store(name, "system", to_value(&out))?;
    let size = match &out {
        SystemJson::PartialOp { carrier, .. } => carrier.len(),
        SystemJson::Relation { graph } => graph.nodes().len(),
        SystemJson::Category { .. } => rho.labels().len(),
    };
    let lines = vec![format!("quotient {}: {} classes of {} elements", name.unwrap_or(&hash[..12]), size, s.carrier().len())];
    Ok(reports_outcome(
        report.into_iter().collect(),
        lines,
        json!({ "compatible": true, "artifact": hash, "system": out, "map": map }),
    ))
}

fn slice_cmd(ctx: &Ctx, category: &str, object: &str, co: bool, name: Option<&str>) -> Result<Outcome> {
    let c = ctx.category(category)?;
    let n = c.obj(object)?;
    let s = if co { coslice(&c, n, ctx.budget)? } else { slice(&c, n, ctx.budget)? };
    let js = CategoryJson::Explicit(ExplicitJson::from(s.as_ref()));
    let hash = ctx.store(name, "category", to_value(&js))?;
    let title = if co { format!("{object}/C") } else { format!("C/{object}") };
    let lines = vec![
        format!("{title}: {} objects, {} morphisms", s.num_objects(), s.num_morphisms()),
        format!("objects: {}", s.objects().join(", ")),
    ];
    Ok(reports_outcome(vec![check_category_laws(&s)], lines, json!({ "artifact": hash, "category": js })))
}

fn yoneda(ctx: &Ctx, category: &str, presheaf: Option<&str>, at: Option<&str>) -> Result<Outcome> {
    let c = ctx.category(category)?;
    if let (Some(p), Some(x)) = (presheaf, at) {
        let pj: PresheafJson = ctx.parse(p, &["presheaf"])?;
        let s = Presheaf::from_json(&c, &pj)?;
        let chk = yoneda_check(&c, c.obj(x)?, &s, ctx.budget)?;
        let lines = vec![format!(
            "Nat(Y {x}, S) = {}, S({x}) = {}: {}",
            chk.nat_count,
            chk.value_count,
            if chk.passed() { "bijection" } else { "FAIL" }
        )];
        return Ok(Outcome::new(chk.passed(), lines, to_value(&chk)));
    }
    let (_, rep) = yoneda_embed(&c, ctx.budget)?;
    let mut lines: Vec<String> =
        rep.pairs.iter().map(|p| format!("Nat(Y {}, Y {}) = {}, hom = {}", p.a, p.b, p.nat, p.hom)).collect();
    lines.push(format!(
        "yoneda: faithful {}, full {}, functorial {}, reflects isos {}",
        rep.faithful, rep.full, rep.functorial, rep.reflects_isos
    ));
    let ok = rep.passed() && rep.pairs.iter().all(|p| p.nat == p.hom);
    Ok(Outcome::new(ok, lines, to_value(&rep)))
}

fn limit_cmd(ctx: &Ctx, diagram: &str, co: bool, name: Option<&str>) -> Result<Outcome> {
    let dj: DiagramJson = ctx.parse(diagram, &["diagram"])?;
    let d = dj.build()?;
    let (cone, report) = if co {
        let c = colimit(&d, ctx.budget)?;
        let r = verify_colimit_cocone(&d, &c, ctx.budget)?;
        (c, r)
    } else {
        let c = limit(&d, ctx.budget)?;
        let r = verify_limit_cone(&d, &c, ctx.budget)?;
        (c, r)
    };
    let cj = cone.to_json(&d);
    let hash = ctx.store(name, "cone", to_value(&cj))?;
    let lines = vec![format!(
        "{}: {} ({} elements)",
        if co { "colimit" } else { "limit" },
        cone.apex,
        cone.apex.len()
    )];
    Ok(reports_outcome(vec![report], lines, json!({ "artifact": hash, "cone": cj })))
}

fn adjoint(ctx: &Ctx, functor: &str, name: Option<&str>) -> Result<Outcome> {
    let f: FunctorFile = ctx.parse(functor, &["functor"])?;
    let g = Functor::from_json(&ctx.cat_ref(functor, &f.source)?, &ctx.cat_ref(functor, &f.target)?, &f.functor)?;
    let a = crate::adjmonad::left_adjoint(&g, ctx.budget)?;
    let (c, d) = (a.c.clone(), a.d.clone());
    let objects = c.object_ids().map(|x| a.left.obj(&x)).collect::<Result<Vec<_>>>()?;
    let morphisms = c.morphism_ids().map(|m| a.left.mor(&m)).collect::<Result<Vec<_>>>()?;
    let left = Functor::new(c.clone(), d.clone(), objects, morphisms)?;
    let mut lines = Vec::new();
    for x in c.object_ids() {
        lines.push(format!(
            "F({}) = {}, unit {}",
            c.obj_name(x),
            d.obj_name(left.obj(x)),
            c.label(a.unit.at(&x)?)
        ));
    }
    for y in d.object_ids() {
        lines.push(format!("counit at {}: {}", d.obj_name(y), d.label(a.counit.at(&y)?)));
    }
    let file = FunctorFile {
        source: CatRef::Inline(CategoryJson::Explicit(ExplicitJson::from(c.as_ref()))),
        target: f.source.clone(),
        functor: left.to_json(),
    };
    let hash = ctx.store(name, "functor", to_value(&file))?;
    Ok(reports_outcome(vec![check_adjunction(&a)?], lines, json!({ "artifact": hash, "left": left.to_json() })))
}

fn monad_reports(m: &BuiltMonad) -> Result<LawReport> {
    match m {
        BuiltMonad::Sets(m) => check_monad_laws(m),
        BuiltMonad::Paths(u, universe) => check_upath_laws(u, universe),
    }
}

fn monad(ctx: &Ctx, spec: &str) -> Result<Outcome> {
    let s: MonadSpec = ctx.parse(spec, &["monad"])?;
    let m = s.build(ctx.budget)?;
    Ok(reports_outcome(vec![monad_reports(&m)?], Vec::new(), json!({ "spec": s })))
}

fn em(ctx: &Ctx, spec: &str, carriers: &[usize]) -> Result<Outcome> {
    let s: MonadSpec = ctx.parse(spec, &["monad"])?;
    let mut lines = Vec::new();
    let mut counts = Vec::new();
    let report = match s.build(ctx.budget)? {
        BuiltMonad::Sets(mut m) => {
            // explicit carriers replace the monad's universe, so that the
            // free/forgetful check stays within them
            if !carriers.is_empty() {
                let cs = carriers.iter().map(|&n| crate::finset::FinSetObj::range(n)).collect();
                m.universe = crate::category::Universe::full(&crate::finset::FinSetCat, cs, ctx.budget)?;
            }
            let cs = m.universe.objects.clone();
            let e = eilenberg_moore(&m, &cs, ctx.budget)?;
            for x in &cs {
                let algs: Vec<String> =
                    e.algebras.iter().filter(|a| a.carrier == *x).map(|a| a.structure.show()).collect();
                lines.push(format!("carrier {x}: {} algebras", algs.len()));
                counts.push(json!({ "carrier": x.to_vec(), "algebras": algs }));
            }
            check_adjunction(&e.adjunction)?
        }
        BuiltMonad::Paths(u, universe) => {
            let m = u.as_monad(universe);
            let cs = m.universe.objects.clone();
            let e = eilenberg_moore(&m, &cs, ctx.budget)?;
            for x in &cs {
                let n = e.algebras.iter().filter(|a| a.carrier == *x).count();
                let shown = crate::adjmonad::concrete::GrphCat.show_obj(x);
                lines.push(format!("carrier {shown}: {n} algebras"));
                counts.push(json!({ "carrier": shown, "algebras": n }));
            }
            check_adjunction(&e.adjunction)?
        }
    };
    Ok(reports_outcome(vec![report], lines, json!({ "carriers": counts })))
}

fn beck(ctx: &Ctx, spec: &str) -> Result<Outcome> {
    let s: AdjunctionSpec = ctx.parse(spec, &["adjunction"])?;
    let built = s.build(&|r| ctx.cat_ref(spec, r), ctx.budget)?;
    let report = with_adjunction!(built, a => beck_comparison(&a, ctx.budget)?.report);
    let mut lines = vec![
        format!("verdict: {}", serde_json::to_value(report.verdict).unwrap().as_str().unwrap_or("?")),
        format!("algebras: {}", report.algebras),
        format!(
            "K: faithful {}, full {}, essentially surjective {}",
            report.faithful, report.full, report.essentially_surjective
        ),
    ];
    if let Some(d) = &report.detail {
        lines.push(format!("detail: {d}"));
    }
    for r in [&report.equations, &report.round_trip, &report.em_adjunction] {
        lines.extend(report_lines(r));
    }
    Ok(Outcome::new(report.consistent(), lines, to_value(&report)))
}

fn verify(ctx: &Ctx, suite: &str, artifact: &str) -> Result<Outcome> {
    let reports = match suite {
        "category" => vec![check_category_laws(&*ctx.category(artifact)?)],
        "functor" => vec![check_functor(&ctx.functor(artifact)?)],
        "presheaf" => {
            let p: PresheafFile = ctx.parse(artifact, &["presheaf"])?;
            vec![check_presheaf(&Presheaf::from_json(&ctx.cat_ref(artifact, &p.category)?, &p.presheaf)?)]
        }
        "transformation" => {
            let t: TransformationFile = ctx.parse(artifact, &["transformation"])?;
            vec![check_transformation(&t.build()?)?]
        }
        "yoneda" => {
            let c = ctx.category(artifact)?;
            let (_, rep) = yoneda_embed(&c, ctx.budget)?;
            let mut r = LawReport::new("yoneda embedding");
            for p in &rep.pairs {
                r.expect(p.nat == p.hom, "nat = hom", || format!("({}, {})", p.a, p.b), || {
                    format!("{} transformations, {} morphisms", p.nat, p.hom)
                });
            }
            r.expect(rep.passed(), "embedding", || "Y".into(), || format!("{rep:?}"));
            vec![r]
        }
        "limit" => {
            let d = ctx.parse::<DiagramJson>(artifact, &["diagram"])?.build()?;
            let (l, c) = (limit(&d, ctx.budget)?, colimit(&d, ctx.budget)?);
            vec![verify_limit_cone(&d, &l, ctx.budget)?, verify_colimit_cocone(&d, &c, ctx.budget)?]
        }
        "adjunction" => {
            let s: AdjunctionSpec = ctx.parse(artifact, &["adjunction"])?;
            let built = s.build(&|r| ctx.cat_ref(artifact, r), ctx.budget)?;
            vec![with_adjunction!(built, a => check_adjunction(&a)?)]
        }
        "monad" => {
            let s: MonadSpec = ctx.parse(artifact, &["monad"])?;
            vec![monad_reports(&s.build(ctx.budget)?)?]
        }
        "workspace" => {
            if !Path::new(artifact).join("objects").is_dir() {
                return Err(Error::unknown("workspace", artifact));
            }
            let ws = Workspace::open(artifact)?;
            let mut r = LawReport::new("workspace hashes");
            for bad in ws.check()? {
                r.violate("content hash", bad, "object does not match its address");
            }
            r.checked = (ws.hashes()?.len() + ws.names()?.len()) as u64;
            vec![r]
        }
        other => return Err(Error::invalid(format!("unknown suite `{other}` (known: {})", SUITES.join(", ")))),
    };
    Ok(reports_outcome(reports, Vec::new(), json!({ "suite": suite, "artifact": artifact })))
}

fn export_dot(ctx: &Ctx, artifact: &str, out: Option<&Path>, identities: bool) -> Result<Outcome> {
    let v = ctx.load(artifact, &["graph", "category", "system"])?;
    let name = Path::new(artifact).file_stem().map(|s| s.to_string_lossy().to_string()).unwrap_or_else(|| "g".into());
    let text = if let Ok(g) = serde_json::from_value::<DiGraph>(v.clone()) {
        g.to_dot(&name)
    } else if let Ok(c) = serde_json::from_value::<CategoryJson>(v.clone()) {
        c.build()?.to_dot(&name, identities)
    } else {
        match serde_json::from_value::<SystemJson>(v)
            .map_err(|_| Error::invalid(format!("{artifact} is not a graph, category or system")))?
        {
            SystemJson::Relation { graph } => graph.to_dot(&name),
            SystemJson::Category { category } => category.build()?.to_dot(&name, identities),
            SystemJson::PartialOp { .. } => return Err(Error::invalid("partial operations have no DOT form")),
        }
    };
    match out {
        Some(p) => {
            fs::write(p, &text)?;
            Ok(Outcome::new(true, vec![format!("wrote {}", p.display())], json!({ "out": p })))
        }
        None => Ok(Outcome::new(true, text.lines().map(str::to_string).collect(), json!({ "dot": text }))),
    }
}
