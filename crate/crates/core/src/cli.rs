//! Command-line front end. Every subcommand reads its inputs, calls one
//! library operation (or a short fixed pipeline of them) and renders the
//! result as `key: value` lines, or as a JSON object with `--json`.

use std::ffi::OsString;
use std::fs;
use std::path::{Path, PathBuf};
use std::time::Duration;

use clap::{Args, Parser, Subcommand};
use num_bigint::BigInt;
use serde_json::{json, Map, Value};
use thiserror::Error;

use crate::belyi::{self, BelyiError};
use crate::catalog::{self, Catalog, CatalogError, Lookup};
use crate::dessin::{self, Constellation, CosetGraph, DessinError};
use crate::modular::{self, ModularError};
use crate::perm::Partition;
use crate::search::{self, CensusTask, SearchError, SearchOptions, Status};
use crate::{RatFunc, RationalPoly};

#[derive(Debug, Parser)]
#[command(
    name = "dessins",
    version,
    about = "Dessins, modular subgroups and Belyi maps"
)]
pub struct Cli {
    /// Print a JSON object instead of key: value lines.
    #[arg(long, global = true)]
    pub json: bool,
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// List the built-in classes, or look up a class name or partition.
    Catalog {
        key: Option<String>,
        #[arg(long)]
        index: Option<usize>,
    },
    /// Check product identity and transitivity of a triple file.
    Validate { file: PathBuf },
    /// Ramification data and genus of a constellation.
    Genus(ConstellationSource),
    /// Schreier coset graph of a constellation.
    CosetGraph(ConstellationSource),
    /// Constellation of a coset graph file.
    Dessin { file: PathBuf },
    /// Free generators of the subgroup fixing coset 1.
    Generators(GeneratorArgs),
    /// Generators plus the stabilizer and unimodularity checks.
    Verify(GeneratorArgs),
    /// Critical profile of a j-map.
    Belyi(MapSource),
    /// N, P, D with j = N^3/D and j - 1728 = P^2/D.
    Weierstrass(MapSource),
    /// Bivariate forms of the Weierstrass pair, or of --f/--g.
    Homogenize(HomogenizeArgs),
    /// Realizability of every partition of n into k cusp widths.
    Census(CensusArgs),
    /// Distinct constellations with the given cusp widths.
    Enumerate {
        #[arg(long)]
        cusps: Partition,
        #[arg(long, default_value_t = 100)]
        limit: usize,
    },
    /// Graphviz text of the bipartite map.
    Export(ConstellationSource),
}

#[derive(Debug, Args)]
pub struct ConstellationSource {
    /// Constellation file.
    #[arg(required_unless_present = "catalog", conflicts_with = "catalog")]
    pub file: Option<PathBuf>,
    /// Built-in class name; classes without stored permutations use a
    /// search witness with the same ramification.
    #[arg(long)]
    pub catalog: Option<String>,
}

#[derive(Debug, Args)]
pub struct GeneratorArgs {
    #[command(flatten)]
    pub source: ConstellationSource,
    /// Also reduce each matrix modulo m.
    #[arg(long)]
    pub modulus: Option<BigInt>,
}

#[derive(Debug, Args)]
pub struct MapSource {
    /// Rational function in t.
    #[arg(conflicts_with_all = ["check", "catalog"])]
    pub expr: Option<String>,
    /// File holding the function, optionally as `name | expression`.
    #[arg(long, conflicts_with = "catalog")]
    pub check: Option<PathBuf>,
    /// Name of a built-in j-map.
    #[arg(long)]
    pub catalog: Option<String>,
}

#[derive(Debug, Args)]
pub struct HomogenizeArgs {
    #[command(flatten)]
    pub map: MapSource,
    #[arg(long, requires = "g")]
    pub f: Option<String>,
    #[arg(long, requires = "f")]
    pub g: Option<String>,
}

#[derive(Debug, Args)]
pub struct CensusArgs {
    #[arg(long, default_value_t = 24)]
    pub n: usize,
    #[arg(long, default_value_t = 6)]
    pub k: usize,
    /// Directory for census.txt and witnesses/; an existing census there
    /// is resumed.
    #[arg(long)]
    pub out: Option<PathBuf>,
    #[arg(long)]
    pub no_symmetry: bool,
    /// Node limit per partition.
    #[arg(long)]
    pub node_budget: Option<u64>,
    /// Seconds per partition.
    #[arg(long)]
    pub time_budget: Option<f64>,
    /// Include one line per partition.
    #[arg(long)]
    pub rows: bool,
}

#[derive(Debug, Error)]
pub enum CliError {
    #[error("io: {path}: {source}")]
    Io {
        path: PathBuf,
        source: std::io::Error,
    },
    #[error("input: {0}")]
    Input(String),
    #[error("dessin: {0}")]
    Dessin(#[from] DessinError),
    #[error("modular: {0}")]
    Modular(#[from] ModularError),
    #[error("belyi: {0}")]
    Belyi(#[from] BelyiError),
    #[error("catalog: {0}")]
    Catalog(#[from] CatalogError),
    #[error("search: {0}")]
    Search(#[from] SearchError),
}

/// Rendered outcome of one subcommand.
#[derive(Debug, Clone, Default, PartialEq)]
pub struct Report {
    /// One-line summary printed first.
    pub headline: Option<String>,
    pub fields: Vec<(String, Value)>,
    /// Verbatim text printed after the fields (graph files, dot output).
    pub body: Option<String>,
}

impl Report {
    fn field(mut self, key: &str, value: impl Into<Value>) -> Self {
        self.fields.push((key.to_string(), value.into()));
        self
    }

    fn headline(mut self, h: String) -> Self {
        self.headline = Some(h);
        self
    }

    fn body(mut self, b: String) -> Self {
        self.body = Some(b);
        self
    }

    pub fn render_text(&self) -> String {
        let mut out = String::new();
        if let Some(h) = &self.headline {
            out.push_str(h);
            out.push('\n');
        }
        for (key, value) in &self.fields {
            match value {
                Value::Array(items) => {
                    for (i, item) in items.iter().enumerate() {
                        out.push_str(&format!("{key}[{}]: {}\n", i + 1, plain(item)));
                    }
                }
                v => out.push_str(&format!("{key}: {}\n", plain(v))),
            }
        }
        if let Some(b) = &self.body {
            out.push_str(b);
            if !b.ends_with('\n') {
                out.push('\n');
            }
        }
        out
    }

    pub fn render_json(&self) -> String {
        let mut m = Map::new();
        if let Some(h) = &self.headline {
            m.insert("summary".into(), Value::String(h.clone()));
        }
        for (k, v) in &self.fields {
            m.insert(k.clone(), v.clone());
        }
        if let Some(b) = &self.body {
            m.insert("text".into(), Value::String(b.clone()));
        }
        let mut s = serde_json::to_string_pretty(&Value::Object(m)).expect("json");
        s.push('\n');
        s
    }
}

fn plain(v: &Value) -> String {
    match v {
        Value::String(s) => s.clone(),
        other => other.to_string(),
    }
}

fn read(path: &Path) -> Result<String, CliError> {
    fs::read_to_string(path).map_err(|source| CliError::Io {
        path: path.to_path_buf(),
        source,
    })
}

fn strings<T: ToString>(items: impl IntoIterator<Item = T>) -> Value {
    Value::Array(
        items
            .into_iter()
            .map(|i| Value::String(i.to_string()))
            .collect(),
    )
}

/// Constellation from a file or a catalog class.
pub fn load_constellation(src: &ConstellationSource) -> Result<Constellation, CliError> {
    if let Some(path) = &src.file {
        return Ok(read(path)?.parse()?);
    }
    let name = src
        .catalog
        .as_deref()
        .expect("clap requires file or --catalog");
    if name == "Gamma(4)" {
        return Ok(catalog::gamma4_constellation());
    }
    let cat = Catalog::load()?;
    let entry = cat.entry(name)?;
    let result = search::find_triple(&CensusTask::new(entry.ramification.cusps.clone()))?;
    result
        .witness
        .ok_or_else(|| CliError::Input(format!("no constellation found for {name}")))
}

/// Text of a j-map file: the first non-comment line, after `|` if present.
pub fn parse_map_file(text: &str) -> Result<RatFunc, CliError> {
    let line = text
        .lines()
        .map(str::trim)
        .find(|l| !l.is_empty() && !l.starts_with('#'))
        .ok_or_else(|| CliError::Input("empty map file".into()))?;
    let expr = line.split_once('|').map_or(line, |(_, e)| e.trim());
    Ok(belyi::parse_ratfunc(expr)?)
}

pub fn load_map(src: &MapSource) -> Result<RatFunc, CliError> {
    if let Some(e) = &src.expr {
        Ok(belyi::parse_ratfunc(e)?)
    } else if let Some(path) = &src.check {
        parse_map_file(&read(path)?)
    } else if let Some(name) = &src.catalog {
        Ok(Catalog::load()?.jmap(name)?)
    } else {
        Err(CliError::Input(
            "give an expression, --check FILE or --catalog NAME".into(),
        ))
    }
}

fn ramification_fields(r: Report, c: &Constellation) -> Report {
    let ram = dessin::ramification(c);
    r.field("degree", c.degree())
        .field("over0", ram.over0.to_exponent_string())
        .field("over1", ram.over1.to_exponent_string())
        .field("cusps", ram.cusps.to_string())
        .field("nu_inf", ram.nu_inf())
}

pub fn catalog_report(
    cat: &Catalog,
    key: Option<&str>,
    index: Option<usize>,
) -> Result<Report, CliError> {
    let entry_line =
        |e: &catalog::CatalogEntry| format!("{} | {} | {}", e.name, e.index, e.ramification.cusps);
    match key {
        Some(k) => match cat.lookup(k)? {
            Lookup::Class(e) => Ok(Report::default()
                .field("name", e.name.clone())
                .field("index", e.index)
                .field("ramification", e.ramification.to_string())
                .field("cusps", e.ramification.cusps.to_string())
                .field("congruence", e.congruence)),
            Lookup::Partitions(es) => Ok(Report::default()
                .field("partition", k)
                .field("dessins", es.len())
                .field(
                    "entry",
                    strings(
                        es.iter()
                            .map(|e| format!("{} {}", e.dessin_ordinal, e.field_label)),
                    ),
                )),
        },
        None => {
            let rows: Vec<_> = match index {
                Some(i) => cat.by_index(i),
                None => cat.entries.iter().collect(),
            };
            let report = cat.validate();
            Ok(Report::default()
                .field("classes", rows.len())
                .field("appendix_partitions", report.mp_partitions)
                .field("appendix_dessins", report.mp_entries)
                .field("consistent", report.is_clean())
                .field("class", strings(rows.into_iter().map(entry_line))))
        }
    }
}

pub fn validate_report(text: &str) -> Result<Report, CliError> {
    let t = dessin::parse_triple(text)?;
    let sinf = match t.sigma_inf {
        Some(s) => s,
        None => crate::perm::compose(&t.sigma0, &t.sigma1)
            .map_err(DessinError::from)?
            .inverse(),
    };
    let v = dessin::validate(&t.sigma0, &t.sigma1, &sinf)?;
    Ok(Report::default()
        .field("valid", v.is_valid())
        .field("degree", v.degree)
        .field("product_identity", v.product_identity)
        .field("transitive", v.transitive))
}

pub fn genus_report(c: &Constellation) -> Result<Report, CliError> {
    let g = dessin::genus(c)?;
    let r = ramification_fields(Report::default(), c);
    Ok(r.field("genus", g.genus_euler)
        .field("genus_rh", g.genus_rh.map_or(Value::Null, Value::from))
        .field("nu2", g.nu2)
        .field("nu3", g.nu3)
        .field("torsion_free", dessin::is_torsion_free_profile(c)))
}

/// Fields follow the coset graph file format, so the output can be read
/// back by `dessin`.
pub fn coset_graph_report(c: &Constellation) -> Result<Report, CliError> {
    Ok(text_fields(&dessin::coset_graph_of(c)?.to_text()))
}

/// Fields follow the constellation file format.
pub fn dessin_report(g: &CosetGraph) -> Result<Report, CliError> {
    Ok(text_fields(&dessin::dessin_of(g)?.to_text()))
}

fn text_fields(text: &str) -> Report {
    text.lines()
        .filter_map(|l| l.split_once(": "))
        .fold(Report::default(), |r, (k, v)| r.field(k, v))
}

pub fn generators_report(c: &Constellation, modulus: Option<&BigInt>) -> Result<Report, CliError> {
    let g = modular::subgroup_generators(c)?;
    let mut r = Report::default()
        .field("rank", g.rank())
        .field("expected_rank", 1 + c.degree() / 6)
        .field("word", strings(&g.words))
        .field("matrix", strings(&g.matrices));
    if let Some(m) = modulus {
        let mut residues = Vec::new();
        let mut all = true;
        for a in &g.matrices {
            let rep = modular::matrix_mod(a, m)?;
            all &= rep.congruent_to_identity;
            residues.push(rep.congruent_to_identity);
        }
        r = r
            .field("modulus", m.to_string())
            .field(
                "congruent_to_identity",
                Value::Array(residues.into_iter().map(Value::from).collect()),
            )
            .field("all_congruent_to_identity", all);
    }
    let v = modular::verify_generators(&g, c)?;
    Ok(r.field("verified", v.passed()))
}

pub fn verify_report(c: &Constellation, modulus: Option<&BigInt>) -> Result<Report, CliError> {
    let g = modular::subgroup_generators(c)?;
    let v = modular::verify_generators(&g, c)?;
    let fixes: Vec<Value> = g
        .words
        .iter()
        .map(|w| Value::from(modular::word_action(w, c).image(1) == 1))
        .collect();
    let mut r = Report::default()
        .field("rank", g.rank())
        .field("fixes_coset_1", Value::Array(fixes))
        .field("unimodular", g.matrices.iter().all(|m| m.is_unimodular()))
        .field("cartographic_order", v.cartographic_order.to_string())
        .field("stabilizer_order", v.stabilizer_order.to_string())
        .field("generated_order", v.generated_order.to_string());
    if let Some(m) = modulus {
        let mut all = true;
        for a in &g.matrices {
            all &= modular::matrix_mod(a, m)?.congruent_to_identity;
        }
        r = r
            .field("modulus", m.to_string())
            .field("all_congruent_to_identity", all);
    }
    Ok(r.field("failures", strings(&v.failures))
        .field("passed", v.passed()))
}

pub fn belyi_report(j: &RatFunc, cat: &Catalog) -> Result<Report, CliError> {
    let p = belyi::critical_profile(j)?;
    let belyi = p.is_belyi();
    let matches: Vec<String> = if belyi {
        cat.classes_with(&p.ramification())
            .iter()
            .map(|e| e.name.clone())
            .collect()
    } else {
        Vec::new()
    };
    let mut headline = format!("belyi: {belyi}, lambda = {}", p.lambda);
    if !matches.is_empty() {
        headline.push_str(&format!(", profile matches {}", matches.join(", ")));
    }
    Ok(Report::default()
        .headline(headline)
        .field("degree", p.degree)
        .field("lambda", p.lambda.to_string())
        .field("over0", p.over0.to_exponent_string())
        .field("over_lambda", p.over_lambda.to_exponent_string())
        .field("over_inf", p.over_inf.to_string())
        .field("extra_critical_values", p.leftover.render("v"))
        .field("matches", strings(matches)))
}

pub fn weierstrass_report(j: &RatFunc) -> Result<Report, CliError> {
    let w = belyi::weierstrass_from_j(j)?;
    Ok(Report::default()
        .field("mu", w.mu)
        .field("N", w.n.to_string())
        .field("P", w.p.to_string())
        .field("D", w.d.to_string())
        .field("identity", w.identity_holds()))
}

pub fn homogenize_report(f: &RationalPoly, g: &RationalPoly) -> Result<Report, CliError> {
    let h = belyi::homogenize(f, g)?;
    let f_ok = h.f.substitute(&h.a, &h.b) == f.scale(&h.f_scale);
    let g_ok = h.g.substitute(&h.a, &h.b) == g.scale(&h.g_scale);
    Ok(Report::default()
        .field("a", h.a.to_string())
        .field("b", h.b.to_string())
        .field("F", h.f.to_string())
        .field("G", h.g.to_string())
        .field("f_scale", h.f_scale.to_string())
        .field("g_scale", h.g_scale.to_string())
        .field("F_check", f_ok)
        .field("G_check", g_ok))
}

pub fn census_report(args: &CensusArgs) -> Result<Report, CliError> {
    let options = SearchOptions {
        symmetry_reduction: !args.no_symmetry,
        node_budget: args.node_budget,
        time_budget: args.time_budget.map(Duration::from_secs_f64),
    };
    let table = search::classify_all(args.n, args.k, &options, args.out.as_deref())?;
    let mut r = Report::default()
        .headline(table.summary())
        .field("partitions", table.rows.len())
        .field("realizable", table.count(Status::Realizable))
        .field("not_realizable", table.count(Status::NotRealizable))
        .field("unknown", table.count(Status::Unknown));
    if let Some(dir) = &args.out {
        r = r.field(
            "census_file",
            dir.join(search::CENSUS_FILE).display().to_string(),
        );
    }
    if args.rows {
        let rows = table.rows.iter().map(|row| {
            json!(format!(
                "{} | {} | {}",
                row.partition, row.status, row.nodes
            ))
        });
        r = r.field("row", Value::Array(rows.collect()));
    }
    Ok(r)
}

pub fn enumerate_report(cusps: &Partition, limit: usize) -> Result<Report, CliError> {
    let e = search::enumerate_triples(&CensusTask::new(cusps.clone()), limit)?;
    Ok(Report::default()
        .field("cusps", cusps.to_string())
        .field("oriented", e.oriented.len())
        .field("up_to_reflection", e.up_to_reflection)
        .field("truncated", e.truncated)
        .field(
            "s1",
            strings(e.oriented.iter().map(|c| c.sigma1().to_string())),
        ))
}

pub fn export_report(c: &Constellation) -> Result<Report, CliError> {
    Ok(Report::default().body(dessin::export_map(c)?))
}

/// Runs one parsed command.
pub fn run(cli: &Cli) -> Result<Report, CliError> {
    match &cli.command {
        Command::Catalog { key, index } => {
            catalog_report(&Catalog::load()?, key.as_deref(), *index)
        }
        Command::Validate { file } => validate_report(&read(file)?),
        Command::Genus(src) => genus_report(&load_constellation(src)?),
        Command::CosetGraph(src) => coset_graph_report(&load_constellation(src)?),
        Command::Dessin { file } => dessin_report(&read(file)?.parse()?),
        Command::Generators(a) => {
            generators_report(&load_constellation(&a.source)?, a.modulus.as_ref())
        }
        Command::Verify(a) => verify_report(&load_constellation(&a.source)?, a.modulus.as_ref()),
        Command::Belyi(src) => belyi_report(&load_map(src)?, &Catalog::load()?),
        Command::Weierstrass(src) => weierstrass_report(&load_map(src)?),
        Command::Homogenize(a) => match (&a.f, &a.g) {
            (Some(f), Some(g)) => homogenize_report(&belyi::parse_poly(f)?, &belyi::parse_poly(g)?),
            _ => {
                let w = belyi::weierstrass_from_j(&load_map(&a.map)?)?;
                homogenize_report(&w.n, &w.p)
            }
        },
        Command::Census(a) => census_report(a),
        Command::Enumerate { cusps, limit } => enumerate_report(cusps, *limit),
        Command::Export(src) => export_report(&load_constellation(src)?),
    }
}

/// Parses `args`, runs the command and prints the report. Returns the
/// process exit status: 0 on success, 1 when the operation fails, 2 on a
/// usage error.
pub fn main_with<I, T>(args: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(c) => c,
        Err(e) => {
            let code = if e.use_stderr() { 2 } else { 0 };
            let _ = e.print();
            return code;
        }
    };
    match run(&cli) {
        Ok(report) => {
            let out = if cli.json {
                report.render_json()
            } else {
                report.render_text()
            };
            print!("{out}");
            0
        }
        Err(e) => {
            eprintln!("error: {e}");
            1
        }
    }
}
