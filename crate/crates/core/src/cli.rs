//! Command-line front end. Every command builds a [`Report`], printed either
//! as aligned text tables or as a TOML document with one array of tables per
//! section.

use std::path::{Path, PathBuf};

use clap::{Args, Parser, Subcommand, ValueEnum};
use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::Zero;
use toml::Value;

use crate::analysis::{
    adjunction_genus, facet_interior_total, intersection_table, moduli_dimension, resolve_pipeline,
    DiscriminantShape,
};
use crate::bundle::{fibred_form, fibred_homogeneous_form, sections_basis, FibredOptions, LaurentSection};
use crate::dataset::{Job, ELLIPTIC_FOURFOLD};
use crate::error::{Error, Result};
use crate::fan::{identify_surface, Fan, SurfaceLabel};
use crate::io::{parse, serialize, Coefficient, Document, FanSpec, SectionSpec};
use crate::lattice::{LatticeVector, Matrix};
use crate::morphism::{cone_by_label, FanMap};
use crate::polytope::{restriction_polytope, NormalFanRelation, Polytope};

#[derive(Parser, Debug)]
#[command(name = "toricfib", version, about = "Exact analysis of toric morphisms and their fibers")]
pub struct Cli {
    /// Input document; the bundled elliptic fourfold job when omitted.
    #[arg(long, global = true)]
    pub input: Option<PathBuf>,
    #[arg(long, global = true, value_enum, default_value_t = Format::Table)]
    pub format: Format,
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Table,
    Structured,
}

#[derive(Subcommand, Debug)]
pub enum Command {
    /// Fans: validation, smoothness, singular cones, star subdivision.
    #[command(subcommand)]
    Fan(FanCmd),
    /// Maps of fans and their fibers.
    #[command(subcommand)]
    Morphism(MorphismCmd),
    /// Lattice polytopes.
    #[command(subcommand)]
    Polytope(PolytopeCmd),
    /// Sections of the line bundle of a polytope.
    #[command(subcommand)]
    Bundle(BundleCmd),
    /// Discriminants, intersection numbers, genus, moduli, resolution.
    #[command(subcommand)]
    Analysis(AnalysisCmd),
    /// Combined reports.
    #[command(subcommand)]
    Pipeline(PipelineCmd),
}

#[derive(Subcommand, Debug)]
pub enum FanCmd {
    /// Validate the source fan and summarise it.
    Check,
    /// Smoothness and simpliciality.
    Smooth,
    /// Singular cones with their multiplicities.
    Singular,
    /// Star-subdivide at a new ray.
    Subdivide {
        /// Primitive vector, comma separated.
        #[arg(long, allow_hyphen_values = true)]
        ray: String,
        /// Name of the new ray.
        #[arg(long, default_value = "new")]
        name: String,
    },
}

#[derive(Args, Debug)]
pub struct SigmaArg {
    /// Target cone by ray names, e.g. `d4,r1`; `0` is the zero cone.
    #[arg(long)]
    pub sigma: String,
}

#[derive(Args, Debug)]
pub struct TauArg {
    /// Source cone by ray names, e.g. `v1',e2'`.
    #[arg(long)]
    pub tau: String,
}

#[derive(Subcommand, Debug)]
pub enum MorphismCmd {
    /// Validate the map of fans and its lattice index.
    Check,
    /// The image fan.
    Image,
    /// Fiber components over one target cone.
    Fibers(SigmaArg),
    /// Index and primitive cones over every target cone.
    Stratify,
    /// Equidimensionality certificate.
    Fibration,
}

#[derive(Subcommand, Debug)]
pub enum PolytopeCmd {
    /// Lattice points.
    Points,
    /// Facets with their vertex incidences.
    Facets,
    /// The dual polytope.
    Dual,
    /// Whether the polytope is reflexive.
    Reflexive,
    /// The face polytope of a source cone.
    Restrict(TauArg),
    /// The face polytope projected to a fiber component.
    Project {
        #[command(flatten)]
        tau: TauArg,
        #[command(flatten)]
        sigma: SigmaArg,
    },
}

#[derive(Args, Debug)]
pub struct SectionArg {
    /// Section document; the generic section with symbolic coefficients when omitted.
    #[arg(long)]
    pub section: Option<PathBuf>,
}

#[derive(Subcommand, Debug)]
pub enum BundleCmd {
    /// Basis of global sections.
    Sections,
    /// Restrict a section to an orbit closure.
    Restrict {
        #[command(flatten)]
        tau: TauArg,
        #[command(flatten)]
        section: SectionArg,
    },
    /// Split a restricted section into base and fiber monomials.
    Fibred {
        #[command(flatten)]
        tau: TauArg,
        #[command(flatten)]
        sigma: SigmaArg,
        #[command(flatten)]
        section: SectionArg,
        /// `auto` or a lattice_map document holding the splitting matrix.
        #[arg(long, default_value = "auto")]
        xi: String,
    },
    /// A section in homogeneous coordinates, grouped by fiber rays.
    Homogeneous {
        #[command(flatten)]
        section: SectionArg,
    },
}

#[derive(Subcommand, Debug)]
pub enum AnalysisCmd {
    /// Evaluate a fiber discriminant.
    Discriminant {
        /// One of WCP2_123, X4, CP2_conic, X5, WCP2_113, F2.
        #[arg(long)]
        shape: String,
        /// Comma separated rationals in the order of the shape's coefficients.
        #[arg(long, allow_hyphen_values = true)]
        coefficients: Option<String>,
    },
    /// Intersection numbers of boundary curves on a complete surface.
    Intersections {
        /// Catalog surface instead of the input fan, e.g. `F2`.
        #[arg(long)]
        surface: Option<String>,
    },
    /// Arithmetic genus of a curve class by adjunction.
    Genus {
        /// Catalog surface instead of the input fan.
        #[arg(long)]
        surface: Option<String>,
        /// Ray coefficients of the curve class; the anticanonical class when omitted.
        #[arg(long, allow_hyphen_values = true)]
        divisor: Option<String>,
    },
    /// Number of complex structure moduli of the anticanonical hypersurface.
    Moduli,
    /// Subdivide at the job's resolution rays and re-analyse.
    Resolve,
}

#[derive(Subcommand, Debug)]
pub enum PipelineCmd {
    /// Strata, face polytopes and fiber polytopes in one report.
    Report,
}

/// A titled table of values.
#[derive(Clone, Debug, PartialEq)]
pub struct Section {
    pub name: String,
    pub columns: Vec<String>,
    pub rows: Vec<Vec<Value>>,
    /// Key/value pairs, emitted as a single table in structured output.
    pub facts: bool,
}

#[derive(Clone, Debug, Default, PartialEq)]
pub struct Report {
    pub command: String,
    pub sections: Vec<Section>,
}

impl Report {
    fn new(command: &str) -> Report {
        Report { command: command.into(), sections: Vec::new() }
    }

    fn section(&mut self, name: &str, columns: &[&str]) -> &mut Vec<Vec<Value>> {
        self.sections.push(Section {
            name: name.into(),
            columns: columns.iter().map(|c| c.to_string()).collect(),
            rows: Vec::new(),
            facts: false,
        });
        &mut self.sections.last_mut().expect("just pushed").rows
    }

    /// A two-column key/value section.
    fn facts(&mut self, name: &str, facts: Vec<(&str, Value)>) {
        let rows = self.section(name, &["key", "value"]);
        for (k, v) in facts {
            rows.push(vec![s(k), v]);
        }
        self.sections.last_mut().expect("just pushed").facts = true;
    }

    pub fn render(&self, format: Format) -> String {
        match format {
            Format::Table => self.render_table(),
            Format::Structured => self.render_structured(),
        }
    }

    fn render_table(&self) -> String {
        let mut out = String::new();
        for sec in &self.sections {
            out.push_str(&format!("== {} ==\n", sec.name));
            let cells: Vec<Vec<String>> = sec.rows.iter().map(|r| r.iter().map(show).collect()).collect();
            let mut width: Vec<usize> = sec.columns.iter().map(|c| c.chars().count()).collect();
            for r in &cells {
                for (w, c) in width.iter_mut().zip(r) {
                    *w = (*w).max(c.chars().count());
                }
            }
            let line = |r: &[String]| {
                let padded: Vec<String> = r.iter().zip(&width).map(|(c, w)| format!("{c:<w$}")).collect();
                padded.join("  ").trim_end().to_string() + "\n"
            };
            out.push_str(&line(&sec.columns));
            for r in &cells {
                out.push_str(&line(r));
            }
        }
        out
    }

    fn render_structured(&self) -> String {
        let mut top = toml::Table::new();
        top.insert("version".into(), s(crate::io::FORMAT_VERSION));
        top.insert("command".into(), s(&self.command));
        for sec in &self.sections {
            if sec.facts {
                let t: toml::Table =
                    sec.rows.iter().map(|r| (show(&r[0]), r[1].clone())).collect();
                top.insert(sec.name.clone(), Value::Table(t));
                continue;
            }
            let rows: Vec<Value> = sec
                .rows
                .iter()
                .map(|r| {
                    let t: toml::Table = sec.columns.iter().cloned().zip(r.iter().cloned()).collect();
                    Value::Table(t)
                })
                .collect();
            top.insert(sec.name.clone(), Value::Array(rows));
        }
        toml::to_string(&top).expect("reports serialize")
    }
}

fn show(v: &Value) -> String {
    match v {
        Value::String(x) => x.clone(),
        Value::Integer(i) => i.to_string(),
        Value::Boolean(b) => if *b { "yes" } else { "no" }.into(),
        Value::Array(a) if a.iter().all(|x| matches!(x, Value::Integer(_) | Value::String(_)))
            && a.iter().any(|x| matches!(x, Value::Integer(_))) =>
        {
            format!("({})", a.iter().map(show).collect::<Vec<_>>().join(","))
        }
        Value::Array(a) => format!("[{}]", a.iter().map(show).collect::<Vec<_>>().join(" ")),
        other => other.to_string(),
    }
}

fn s(x: &str) -> Value {
    Value::String(x.into())
}

fn int(x: &BigInt) -> Value {
    i64::try_from(x).map(Value::Integer).unwrap_or_else(|_| Value::String(x.to_string()))
}

fn num(x: usize) -> Value {
    Value::Integer(x as i64)
}

fn rat(x: &BigRational) -> Value {
    if x.is_integer() {
        int(x.numer())
    } else {
        s(&x.to_string())
    }
}

fn vector(v: &LatticeVector) -> Value {
    Value::Array(v.coords().iter().map(int).collect())
}

fn names(v: impl IntoIterator<Item = String>) -> Value {
    Value::Array(v.into_iter().map(Value::String).collect())
}

fn surface(l: Option<SurfaceLabel>) -> Value {
    s(l.map(|l| l.name()).unwrap_or("-"))
}

fn relation(r: NormalFanRelation) -> Value {
    s(match r {
        NormalFanRelation::Equal => "equal",
        NormalFanRelation::Refines => "refines",
        NormalFanRelation::Neither => "neither",
    })
}

/// Exit status for an error: 2 for internal invariant violations, 1 otherwise.
pub fn exit_code(e: &Error) -> i32 {
    match e.root() {
        Error::Invariant(_) => 2,
        _ => 1,
    }
}

fn read(path: &Path) -> Result<String> {
    std::fs::read_to_string(path).map_err(|e| Error::Syntax(format!("{}: {e}", path.display())))
}

fn load(input: Option<&Path>) -> Result<Document> {
    match input {
        Some(p) => parse(&read(p)?).map_err(|e| e.at(p.display().to_string())),
        None => parse(ELLIPTIC_FOURFOLD),
    }
}

fn parse_ints(text: &str) -> Result<Vec<BigInt>> {
    text.split(',')
        .map(|x| x.trim().parse::<BigInt>().map_err(|_| Error::Syntax(format!("not an integer: {x}"))))
        .collect()
}

fn parse_rationals(text: &str) -> Result<Vec<BigRational>> {
    text.split(',')
        .map(|x| x.trim().parse::<BigRational>().map_err(|_| Error::Syntax(format!("not a rational: {x}"))))
        .collect()
}

struct Ctx {
    doc: Document,
}

impl Ctx {
    fn job(&self) -> Result<Job> {
        Job::from_document(&self.doc)
    }

    fn fan(&self) -> Result<Fan> {
        self.doc.fan()
    }

    fn polytope(&self) -> Result<Polytope> {
        self.doc.polytope()
    }
}

fn point_name(job: &Job, v: &LatticeVector) -> String {
    job.points
        .iter()
        .find(|(_, q)| q == v)
        .and_then(|(n, _)| n.clone())
        .unwrap_or_else(|| v.to_string())
}

/// Parses the arguments and runs the command, returning the rendered report.
pub fn run<I, T>(args: I) -> Result<String>
where
    I: IntoIterator<Item = T>,
    T: Into<std::ffi::OsString> + Clone,
{
    let cli = Cli::try_parse_from(args).map_err(|e| Error::Syntax(e.to_string()))?;
    execute(&cli)
}

pub fn execute(cli: &Cli) -> Result<String> {
    let ctx = Ctx { doc: load(cli.input.as_deref())? };
    if let Command::Fan(FanCmd::Subdivide { ray, name }) = &cli.command {
        let fan = ctx.fan()?.star_subdivide(&LatticeVector::new(parse_ints(ray)?), name)?;
        if cli.format == Format::Structured {
            return serialize(&Document::of_fan(FanSpec::from_fan(&fan)));
        }
        return Ok(fan_report("fan subdivide", &fan)?.render(cli.format));
    }
    let report = match &cli.command {
        Command::Fan(c) => fan_cmd(&ctx, c)?,
        Command::Morphism(c) => morphism_cmd(&ctx, c)?,
        Command::Polytope(c) => polytope_cmd(&ctx, c)?,
        Command::Bundle(c) => bundle_cmd(&ctx, c)?,
        Command::Analysis(c) => analysis_cmd(&ctx, c)?,
        Command::Pipeline(PipelineCmd::Report) => pipeline_report(&ctx.job()?)?,
    };
    Ok(report.render(cli.format))
}

fn same_cones(a: &Fan, b: &Fan) -> bool {
    let key = |f: &Fan| -> std::collections::BTreeSet<std::collections::BTreeSet<LatticeVector>> {
        f.maximal_cones().map(|c| c.generators.iter().cloned().collect()).collect()
    };
    a.rank() == b.rank() && key(a) == key(b)
}

fn fan_report(command: &str, fan: &Fan) -> Result<Report> {
    let mut r = Report::new(command);
    r.facts(
        "summary",
        vec![
            ("rank", num(fan.rank())),
            ("rays", num(fan.rays().len())),
            ("cones", num(fan.cones().len())),
            ("maximal_cones", num(fan.maximal_indices().len())),
            ("complete", Value::Boolean(fan.is_complete())),
            ("simplicial", Value::Boolean(fan.is_simplicial())),
            ("smooth", Value::Boolean(fan.is_smooth()?)),
        ],
    );
    let rows = r.section("rays", &["name", "ray"]);
    for (n, v) in fan.ray_names().iter().zip(fan.rays()) {
        rows.push(vec![s(n), vector(v)]);
    }
    let rows = r.section("maximal_cones", &["cone", "dim"]);
    for &m in fan.maximal_indices() {
        rows.push(vec![s(&fan.label(m)), num(fan.cone(m).dim)]);
    }
    Ok(r)
}

fn fan_cmd(ctx: &Ctx, c: &FanCmd) -> Result<Report> {
    let fan = ctx.fan()?;
    match c {
        FanCmd::Check => fan_report("fan check", &fan),
        FanCmd::Smooth => {
            let mut r = Report::new("fan smooth");
            r.facts("summary", vec![("smooth", Value::Boolean(fan.is_smooth()?))]);
            Ok(r)
        }
        FanCmd::Singular => {
            let mut r = Report::new("fan singular");
            let rows = r.section("singular_cones", &["cone", "dim", "multiplicity"]);
            for i in fan.singular_locus_cones()? {
                rows.push(vec![s(&fan.label(i)), num(fan.cone(i).dim), int(&fan.cone(i).multiplicity()?)]);
            }
            Ok(r)
        }
        FanCmd::Subdivide { .. } => unreachable!("handled before dispatch"),
    }
}

fn fiber_rows(r: &mut Report, map: &FanMap, sigma: usize) -> Result<()> {
    let src = map.source();
    let rep = map.fiber_report(sigma)?;
    let index = rep.index.as_ref().map(|i| i.to_string()).unwrap_or_else(|| "-".into());
    r.facts(
        "fiber",
        vec![
            ("sigma", s(&map.target().label(sigma))),
            ("cones_over_sigma", num(rep.sigma_prime_set.len())),
            ("primitive_cones", num(rep.primitive.len())),
            ("index", s(&index)),
        ],
    );
    let rows = r.section("components", &["tau", "dim", "label", "rays"]);
    for c in &rep.components {
        rows.push(vec![
            s(&src.label(c.primitive_cone)),
            num(c.dim),
            surface(c.label),
            Value::Array(c.relative_star.fan.rays().iter().map(vector).collect()),
        ]);
    }
    let rows = r.section("intersections", &["members", "cone", "dim"]);
    for x in rep.intersections.iter().filter(|x| x.members.len() > 1) {
        rows.push(vec![
            names(x.members.iter().map(|&m| src.label(m))),
            s(&x.cone.map(|c| src.label(c)).unwrap_or_else(|| "-".into())),
            x.relative_star.as_ref().map(|st| num(st.fan.rank())).unwrap_or_else(|| s("-")),
        ]);
    }
    Ok(())
}

fn morphism_cmd(ctx: &Ctx, c: &MorphismCmd) -> Result<Report> {
    let job = ctx.job()?;
    let map = &job.map;
    let (src, tgt) = (map.source(), map.target());
    match c {
        MorphismCmd::Check => {
            let mut r = Report::new("morphism check");
            r.facts(
                "summary",
                vec![
                    ("map_of_fans", Value::Boolean(true)),
                    ("source_rank", num(src.rank())),
                    ("target_rank", num(tgt.rank())),
                    ("image_rank", num(map.image_rank())),
                    ("lattice_index", s(&map.lattice_index().to_string())),
                    ("index_identity", Value::Boolean(map.check_index_identity()?)),
                ],
            );
            Ok(r)
        }
        MorphismCmd::Image => {
            let image = map.image_fan()?;
            let mut r = fan_report("morphism image", &image)?;
            r.facts("comparison", vec![("equals_target", Value::Boolean(same_cones(&image, tgt)))]);
            Ok(r)
        }
        MorphismCmd::Fibers(a) => {
            let mut r = Report::new("morphism fibers");
            fiber_rows(&mut r, map, cone_by_label(tgt, &a.sigma)?)?;
            Ok(r)
        }
        MorphismCmd::Stratify => {
            let mut r = Report::new("morphism stratify");
            let strata = map.flattening_stratification()?;
            let rows = r.section("strata", &["sigma", "dim", "index", "primitive", "labels"]);
            for rep in &strata {
                rows.push(vec![
                    s(&tgt.label(rep.sigma)),
                    num(tgt.cone(rep.sigma).dim),
                    s(&rep.index.as_ref().map(|i| i.to_string()).unwrap_or_else(|| "-".into())),
                    names(rep.primitive.iter().map(|&t| src.label(t))),
                    names(rep.components.iter().map(|c| c.label.map(|l| l.name()).unwrap_or("-").to_string())),
                ]);
            }
            let total: usize = strata.iter().map(|x| x.primitive.len()).sum();
            let branch = map.branch_locus()?;
            r.facts(
                "summary",
                vec![
                    ("strata", num(strata.len())),
                    ("primitive_cones", num(total)),
                    ("branch_locus", names(branch.iter().map(|&b| tgt.label(b)))),
                ],
            );
            Ok(r)
        }
        MorphismCmd::Fibration => {
            let cert = map.is_fibration()?;
            let mut r = Report::new("morphism fibration");
            r.facts(
                "summary",
                vec![
                    ("fibration", Value::Boolean(cert.holds)),
                    ("dimensions_match", Value::Boolean(cert.dimensions_match)),
                    ("rays_onto_rays", Value::Boolean(cert.rays_onto_rays)),
                ],
            );
            let rows = r.section("violations", &["sigma", "tau"]);
            for (sg, t) in &cert.violations {
                rows.push(vec![s(&tgt.label(*sg)), s(&src.label(*t))]);
            }
            Ok(r)
        }
    }
}

fn polytope_summary(r: &mut Report, p: &Polytope) {
    r.facts(
        "summary",
        vec![
            ("ambient_rank", num(p.ambient_rank())),
            ("dim", num(p.dim())),
            ("vertices", num(p.vertices().len())),
            ("facets", num(p.facets().len())),
            ("lattice_points", num(p.lattice_points().len())),
        ],
    );
}

fn vertex_rows(r: &mut Report, name: &str, vs: &[LatticeVector]) {
    let rows = r.section(name, &["index", "vertex"]);
    for (i, v) in vs.iter().enumerate() {
        rows.push(vec![num(i + 1), vector(v)]);
    }
}

fn polytope_cmd(ctx: &Ctx, c: &PolytopeCmd) -> Result<Report> {
    match c {
        PolytopeCmd::Points => {
            let p = ctx.polytope()?;
            let pts = p.lattice_points();
            let mut r = Report::new("polytope points");
            r.facts("summary", vec![("lattice_points", num(pts.len())), ("interior_points", num(p.relative_interior_points().len()))]);
            vertex_rows(&mut r, "points", &pts);
            Ok(r)
        }
        PolytopeCmd::Facets => {
            let p = ctx.polytope()?;
            let mut r = Report::new("polytope facets");
            polytope_summary(&mut r, &p);
            vertex_rows(&mut r, "vertices", p.vertices());
            let inc = p.facet_vertex_incidence()?;
            let rows = r.section("facets", &["normal", "offset", "vertices", "interior_points"]);
            for (f, vs) in p.facets().iter().zip(&inc) {
                rows.push(vec![
                    vector(&f.normal),
                    int(&f.offset),
                    Value::Array(vs.iter().map(|&i| num(i + 1)).collect()),
                    num(p.face_interior_points(vs).len()),
                ]);
            }
            Ok(r)
        }
        PolytopeCmd::Dual => {
            let d = ctx.polytope()?.dual()?;
            let mut r = Report::new("polytope dual");
            polytope_summary(&mut r, &d);
            vertex_rows(&mut r, "vertices", d.vertices());
            Ok(r)
        }
        PolytopeCmd::Reflexive => {
            let p = ctx.polytope()?;
            let mut r = Report::new("polytope reflexive");
            let v = match p.is_reflexive() {
                Ok(b) => Value::Boolean(b),
                Err(Error::OriginNotInterior | Error::Degenerate) => Value::Boolean(false),
                Err(e) => return Err(e),
            };
            r.facts("summary", vec![("reflexive", v)]);
            Ok(r)
        }
        PolytopeCmd::Restrict(t) => {
            let job = ctx.job()?;
            let src = job.source();
            let p = job.polytope()?;
            let tau = cone_by_label(src, &t.tau)?;
            let res = restriction_polytope(p, tau, src)?;
            let mut r = Report::new("polytope restrict");
            r.facts(
                "summary",
                vec![
                    ("tau", s(&src.label(tau))),
                    ("dim", num(res.polytope.dim())),
                    ("lattice_points", num(res.polytope.lattice_points().len())),
                    ("anchor", vector(&res.anchor)),
                    ("basis", Value::Array(res.basis.iter().map(vector).collect())),
                ],
            );
            let rows = r.section("vertices", &["name", "ambient", "local"]);
            for v in res.polytope.vertices() {
                let amb = res.to_ambient(v);
                rows.push(vec![s(&point_name(&job, &amb)), vector(&amb), vector(v)]);
            }
            Ok(r)
        }
        PolytopeCmd::Project { tau, sigma } => {
            let job = ctx.job()?;
            let (src, tgt) = (job.source(), job.target());
            let t = cone_by_label(src, &tau.tau)?;
            let sg = cone_by_label(tgt, &sigma.sigma)?;
            let fp = job.map.fiber_polytope(job.polytope()?, t, sg)?;
            let q = &fp.projection.polytope;
            let reflexive = match q.is_reflexive() {
                Ok(b) => Value::Boolean(b),
                Err(_) => Value::Boolean(false),
            };
            let label = if fp.star.fan.rank() == 2 && fp.star.fan.is_complete() {
                Some(identify_surface(&fp.star.fan)?)
            } else {
                None
            };
            let mut r = Report::new("polytope project");
            r.facts(
                "summary",
                vec![
                    ("tau", s(&src.label(t))),
                    ("sigma", s(&tgt.label(sg))),
                    ("restriction_points", num(fp.restriction.polytope.lattice_points().len())),
                    ("projected_dim", num(q.dim())),
                    ("projected_points", num(q.lattice_points().len())),
                    ("projected_reflexive", reflexive),
                    ("relative_star", surface(label)),
                    ("normal_fan_vs_star", relation(fp.relation)),
                ],
            );
            vertex_rows(&mut r, "projected_vertices", q.vertices());
            Ok(r)
        }
    }
}

fn section_arg(job: &Job, arg: &SectionArg) -> Result<LaurentSection<Coefficient>> {
    match &arg.section {
        Some(path) => {
            let doc = parse(&read(path)?).map_err(|e| e.at(path.display().to_string()))?;
            let spec: &SectionSpec = doc.section.as_ref().ok_or_else(|| Error::Syntax("not a section document".into()))?;
            spec.to_section().map_err(|e| e.at("section"))
        }
        None => generic_section(job.polytope()?),
    }
}

/// Every lattice point of `p` with coefficient `a<i>`, numbered in lexicographic order from 1.
pub fn generic_section(p: &Polytope) -> Result<LaurentSection<Coefficient>> {
    LaurentSection::from_terms(
        p.ambient_rank(),
        p.lattice_points().into_iter().enumerate().map(|(i, m)| (m, Coefficient::Text(format!("a{}", i + 1)))),
    )
}

fn xi_arg(text: &str) -> Result<Option<Matrix>> {
    if text == "auto" {
        return Ok(None);
    }
    let path = Path::new(text);
    let doc = parse(&read(path)?).map_err(|e| e.at(text.to_string()))?;
    let spec = doc.lattice_map.as_ref().ok_or_else(|| Error::Syntax("xi must be a lattice_map document".into()))?;
    Ok(Some(spec.to_matrix().map_err(|e| e.at("lattice_map"))?))
}

fn bundle_cmd(ctx: &Ctx, c: &BundleCmd) -> Result<Report> {
    match c {
        BundleCmd::Sections => {
            let p = ctx.polytope()?;
            let basis = sections_basis(&p);
            let mut r = Report::new("bundle sections");
            r.facts("summary", vec![("dimension", num(basis.len()))]);
            let rows = r.section("basis", &["index", "exponent"]);
            for (i, b) in basis.iter().enumerate() {
                rows.push(vec![num(i + 1), vector(&b.exponent)]);
            }
            Ok(r)
        }
        BundleCmd::Restrict { tau, section } => {
            let job = ctx.job()?;
            let src = job.source();
            let t = cone_by_label(src, &tau.tau)?;
            let sec = section_arg(&job, section)?;
            let res = crate::bundle::restrict_section_to_orbit_closure(&sec, t, job.polytope()?, src)?;
            let mut r = Report::new("bundle restrict");
            r.facts("summary", vec![("tau", s(&src.label(t))), ("terms", num(res.section.len()))]);
            let rows = r.section("terms", &["local", "exponent", "coefficient"]);
            for (m, coef) in res.section.terms() {
                rows.push(vec![vector(m), vector(&res.restriction.to_ambient(m)), s(&coef.to_string())]);
            }
            Ok(r)
        }
        BundleCmd::Fibred { tau, sigma, section, xi } => {
            let job = ctx.job()?;
            let (src, tgt) = (job.source(), job.target());
            let t = cone_by_label(src, &tau.tau)?;
            let sg = cone_by_label(tgt, &sigma.sigma)?;
            let sec = section_arg(&job, section)?;
            let opts = FibredOptions { xi: xi_arg(xi)?, ..FibredOptions::default() };
            let form = fibred_form(&sec, t, sg, &job.map, job.polytope()?, &opts)?;
            form.verify()?;
            let mut r = Report::new("bundle fibred");
            r.facts(
                "summary",
                vec![
                    ("tau", s(&src.label(t))),
                    ("sigma", s(&tgt.label(sg))),
                    ("terms", num(form.term_count())),
                    ("fiber_exponents", num(form.groups.len())),
                    ("xi", Value::Array(form.xi.row_vectors().iter().map(vector).collect())),
                ],
            );
            let rows = r.section("groups", &["fiber", "base", "coefficient", "exponent"]);
            for (q, terms) in &form.groups {
                for term in terms {
                    rows.push(vec![vector(q), vector(&term.base), s(&term.coefficient.to_string()), vector(&term.exponent)]);
                }
            }
            Ok(r)
        }
        BundleCmd::Homogeneous { section } => {
            let job = ctx.job()?;
            let p = job.polytope()?;
            let src = job.source();
            let sec = section_arg(&job, section)?;
            // a_i = -min_P <m, v_i>
            let a: Vec<BigInt> = src
                .rays()
                .iter()
                .map(|v| -p.vertices().iter().map(|m| m.dot(v)).min().unwrap_or_else(BigInt::zero))
                .collect();
            let form = fibred_homogeneous_form(&sec, &job.map, &a, None)?;
            let mut r = Report::new("bundle homogeneous");
            r.facts(
                "summary",
                vec![
                    ("fiber_rays", names(form.fiber_rays.iter().map(|&i| src.ray_names()[i].clone()))),
                    ("other_rays", names(form.other_rays.iter().map(|&i| src.ray_names()[i].clone()))),
                    ("groups", num(form.groups.len())),
                ],
            );
            let rows = r.section("groups", &["fiber_exponents", "coefficient", "ray_exponents"]);
            for (key, terms) in &form.groups {
                for t in terms {
                    rows.push(vec![
                        Value::Array(key.iter().map(int).collect()),
                        s(&t.term.coefficient.to_string()),
                        Value::Array(t.term.ray_exponents.iter().map(int).collect()),
                    ]);
                }
            }
            Ok(r)
        }
    }
}

fn surface_or_input(ctx: &Ctx, name: &Option<String>) -> Result<Fan> {
    match name {
        Some(n) => SurfaceLabel::from_name(n)
            .map(SurfaceLabel::catalog_fan)
            .ok_or_else(|| Error::Syntax(format!("unknown surface {n}"))),
        None => ctx.fan(),
    }
}

fn analysis_cmd(ctx: &Ctx, c: &AnalysisCmd) -> Result<Report> {
    match c {
        AnalysisCmd::Discriminant { shape, coefficients } => {
            let d = DiscriminantShape::from_name(shape).ok_or_else(|| Error::Syntax(format!("unknown shape {shape}")))?;
            let mut r = Report::new("analysis discriminant");
            let mut facts = vec![
                ("shape", s(d.name())),
                ("surface", s(d.surface().name())),
                ("coefficients", names(d.coefficient_names())),
                ("terms", num(d.term_count())),
                ("degree", d.degree().map(|x| Value::Integer(x.into())).unwrap_or_else(|| s("-"))),
            ];
            if let Some(text) = coefficients {
                facts.push(("value", rat(&d.evaluate(&parse_rationals(text)?)?)));
            }
            r.facts("summary", facts);
            Ok(r)
        }
        AnalysisCmd::Intersections { surface } => {
            let fan = surface_or_input(ctx, surface)?;
            let t = intersection_table(&fan)?;
            let mut r = Report::new("analysis intersections");
            let k = t.canonical();
            r.facts(
                "summary",
                vec![("canonical_square", rat(&t.intersect(&k, &k)?)), ("relations_hold", Value::Boolean(t.relations_hold()))],
            );
            let rows = r.section("table", &["ray", "vector", "products"]);
            for &i in t.counterclockwise() {
                rows.push(vec![
                    s(&t.names()[i]),
                    vector(&t.rays()[i]),
                    Value::Array(t.counterclockwise().iter().map(|&j| rat(t.entry(i, j))).collect()),
                ]);
            }
            Ok(r)
        }
        AnalysisCmd::Genus { surface, divisor } => {
            let fan = surface_or_input(ctx, surface)?;
            let c = match divisor {
                Some(text) => parse_ints(text)?,
                None => vec![BigInt::from(1); fan.rays().len()],
            };
            let g = adjunction_genus(&fan, &c)?;
            let mut r = Report::new("analysis genus");
            r.facts("summary", vec![("divisor", Value::Array(c.iter().map(int).collect())), ("genus", rat(&g))]);
            Ok(r)
        }
        AnalysisCmd::Moduli => {
            let p = ctx.polytope()?;
            let m = moduli_dimension(&p)?;
            let mut r = Report::new("analysis moduli");
            r.facts(
                "summary",
                vec![
                    ("lattice_points", num(p.lattice_points().len())),
                    ("automorphism_correction", num(p.ambient_rank() + 1)),
                    ("facet_interior_points", num(facet_interior_total(&p)?)),
                    ("moduli_dimension", int(&m)),
                ],
            );
            Ok(r)
        }
        AnalysisCmd::Resolve => {
            let job = ctx.job()?;
            if job.resolution.is_empty() {
                return Err(Error::Syntax("job has no resolution rays".into()));
            }
            let res = resolve_pipeline(&job.map, &job.resolution)?;
            let (src, tgt) = (res.map.source(), res.map.target());
            let mut r = Report::new("analysis resolve");
            r.facts(
                "summary",
                vec![
                    ("rays_added", names(job.resolution.iter().map(|(n, _)| n.clone()))),
                    ("smooth", Value::Boolean(res.smooth)),
                    ("maximal_cones", num(src.maximal_indices().len())),
                    ("new_maximal_cones", num(res.new_cone_multiplicities.len())),
                    ("generic_fiber_rays", Value::Array(res.generic_fiber.fan.rays().iter().map(vector).collect())),
                ],
            );
            let rows = r.section("strata", &["sigma", "primitive"]);
            for st in &res.strata {
                rows.push(vec![s(&tgt.label(st.sigma)), names(st.primitive.iter().map(|&t| src.label(t)))]);
            }
            Ok(r)
        }
    }
}

/// The per-orbit fiber table and the per-primitive-cone polytope table of a job.
pub fn pipeline_report(job: &Job) -> Result<Report> {
    let map = &job.map;
    let (src, tgt) = (map.source(), map.target());
    let p = job.polytope()?;
    let strata = map.flattening_stratification()?;
    let fib = map.is_fibration()?;
    let mut r = Report::new("pipeline report");
    r.facts(
        "summary",
        vec![
            ("source_cones", num(src.cones().len())),
            ("target_cones", num(tgt.cones().len())),
            ("target_smooth", Value::Boolean(tgt.is_smooth()?)),
            ("fibration", Value::Boolean(fib.holds)),
            ("primitive_cones", num(strata.iter().map(|x| x.primitive.len()).sum())),
            ("lattice_points", num(p.lattice_points().len())),
            ("reflexive", Value::Boolean(p.is_reflexive()?)),
        ],
    );
    let rows = r.section("fibers", &["sigma", "index", "primitive", "labels"]);
    for rep in &strata {
        rows.push(vec![
            s(&tgt.label(rep.sigma)),
            s(&rep.index.as_ref().map(|i| i.to_string()).unwrap_or_else(|| "-".into())),
            names(rep.primitive.iter().map(|&t| src.label(t))),
            names(rep.components.iter().map(|c| c.label.map(|l| l.name()).unwrap_or("-").to_string())),
        ]);
    }
    let rows = r.section("restrictions", &["tau", "maximal_cones", "vertices", "lattice_points"]);
    for rep in &strata {
        for &t in &rep.primitive {
            let res = restriction_polytope(p, t, src)?;
            let mut vs: Vec<String> = res.polytope.vertices().iter().map(|v| point_name(job, &res.to_ambient(v))).collect();
            vs.sort_by_key(|n| (n.len(), n.clone()));
            rows.push(vec![
                s(&src.label(t)),
                num(src.star(t)?.maximal_indices().len()),
                names(vs),
                num(res.polytope.lattice_points().len()),
            ]);
        }
    }
    let rows = r.section("fiber_polytopes", &["tau", "sigma", "label", "projected_points", "relation"]);
    for rep in &strata {
        for c in &rep.components {
            let fp = map.fiber_polytope(p, c.primitive_cone, rep.sigma)?;
            rows.push(vec![
                s(&src.label(c.primitive_cone)),
                s(&tgt.label(rep.sigma)),
                surface(c.label),
                num(fp.projection.polytope.lattice_points().len()),
                relation(fp.relation),
            ]);
        }
    }
    Ok(r)
}
