//! Command-line front end. [`run`] parses arguments, prints a one-line
//! config echo and dispatches to the library; the binary only forwards
//! `std::env::args` and the exit code.
//!
//! Exit codes: 0 success or accept, 1 reject or negative verdict, 2 usage
//! error or malformed input.

use std::collections::BTreeMap;
use std::fs;
use std::io::Write;
use std::path::{Path, PathBuf};
use std::time::Instant;

use clap::{Args, Parser, Subcommand, ValueEnum};
use num_bigint::BigInt;
use num_rational::BigRational;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::certify::{self, verify_package, verify_rank_certificate, CertificatePackage, FailureCode, MatrixId};
use crate::graphs::{
    automorphism_orbits, canonical_form, clique_number, delete_vertices, destroy_vertex, graph6_decode, graph6_encode,
    is_bipartite, is_connected, is_perfect_small, is_vertex_transitive, parse_graph_collection, stability_number,
    stretch_vertex, Graph, StretchSpec,
};
use crate::numerics::{denominator_lcm, IntMatrix};
use crate::polytope::{
    enumerate_facets, enumerate_stable_sets, frac_max_all_ones, full_support_facets, is_facet, is_valid_for_stab,
    max_over_stab, stable_set_bitstring, Inequality,
};
use crate::rankbounds::{alpha_ls1_bound, classify_vt_candidates, rank_upper_bound, vt_degree_filter, AlphaCase};
use crate::search::{
    edge_subgraph_closure, facet_pair_extraction, generate_stretch_candidates, generate_stretched_cliques,
    minimal_elements, pairs_per_graph, read_graph_stage, read_pair_stage, run_pipeline, write_graph_stage,
    write_pair_stage, FacetSource, HullFacets, JoinMode, SmallCoefficientFacets, StretchedCliqueOptions,
};
use crate::synthesize::{assemble_package, parse_float_csv, rationalize, uvw_synthesize, SynthesisOptions};

/// Exit code for success or an accepting verdict.
pub const EXIT_OK: i32 = 0;
/// Exit code for a rejecting verdict.
pub const EXIT_REJECT: i32 = 1;
/// Exit code for usage errors and malformed input.
pub const EXIT_MALFORMED: i32 = 2;

#[derive(Debug, Parser)]
#[command(name = "lsplus", version, about = "Exact LS+ certificate and rank tools for stable set polytopes")]
struct Cli {
    /// Worker threads (default: all cores). Results do not depend on it.
    #[arg(long, global = true)]
    jobs: Option<usize>,
    /// Print an elapsed-time line at the end (off by default so output is byte-stable).
    #[arg(long, global = true)]
    timing: bool,
    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// graph6 and graph operations.
    #[command(subcommand)]
    Graph(GraphCmd),
    /// Stable sets, facets and validity.
    #[command(subcommand)]
    Polytope(PolytopeCmd),
    /// Certificate verification and synthesis.
    #[command(subcommand)]
    Cert(CertCmd),
    /// Rank upper bounds.
    #[command(subcommand)]
    Rank(RankCmd),
    /// Candidate search stages.
    #[command(subcommand)]
    Search(SearchCmd),
}

#[derive(Debug, Subcommand)]
enum GraphCmd {
    /// Decode a graph6 string and print the edge list.
    Decode { graph6: String },
    /// Encode an edge-list file as graph6.
    Encode { file: PathBuf },
    /// Canonical graph6 form.
    Canon { graph6: String },
    /// Basic invariants.
    Info { graph6: String },
    /// Apply operations in order: complement, delete, destroy, stretch.
    Ops(GraphOps),
}

#[derive(Debug, Args)]
struct GraphOps {
    graph6: String,
    /// Take the complement first.
    #[arg(long)]
    complement: bool,
    /// Delete these vertices (1-based, comma separated).
    #[arg(long, value_delimiter = ',')]
    delete: Vec<usize>,
    /// Destroy this vertex (1-based): remove it with its neighborhood.
    #[arg(long)]
    destroy: Option<usize>,
    /// Stretch a vertex: `v:a,b;c,d` (1-based), one `;`-separated part per new vertex.
    #[arg(long)]
    stretch: Option<String>,
}

#[derive(Debug, Subcommand)]
enum PolytopeCmd {
    /// All stable sets as bitstrings.
    StableSets { graph6: String },
    /// Facets of STAB(G).
    Facets {
        graph6: String,
        /// Only full-support facets with nonnegative coefficients.
        #[arg(long)]
        full_support: bool,
    },
    /// Validity and facethood of `a_1,…,a_n,beta`.
    Valid {
        graph6: String,
        #[arg(long)]
        ineq: String,
    },
    /// max ēᵀx over FRAC(G).
    FracMax { graph6: String },
}

#[derive(Debug, Subcommand)]
enum CertCmd {
    /// Verify a certificate bundle directory.
    Verify {
        bundle: PathBuf,
        /// Inequality `a_1,…,a_n,beta` to check against (overrides the manifest).
        #[arg(long)]
        ineq: Option<String>,
        /// Graph6 of the graph (overrides the manifest).
        #[arg(long)]
        graph: Option<String>,
        /// Print the report as JSON.
        #[arg(long)]
        json: bool,
    },
    /// Synthesize every UVW certificate of a skeleton bundle (matrices without UVW files).
    Synth {
        skeleton: PathBuf,
        #[arg(long)]
        out: PathBuf,
        #[command(flatten)]
        synth: SynthFlags,
    },
    /// Build a level-1 bundle from a floating-point Y (CSV of decimals).
    SynthFloat {
        #[arg(long)]
        graph: String,
        #[arg(long)]
        y: PathBuf,
        #[arg(long)]
        out: PathBuf,
        #[arg(long)]
        ineq: Option<String>,
        #[command(flatten)]
        synth: SynthFlags,
    },
    /// Round-trip random Gram matrices through synthesis and verification.
    Fuzz {
        /// Seed for the random generator (required for reproducibility).
        #[arg(long)]
        seed: u64,
        #[arg(long, default_value_t = 20)]
        count: usize,
        #[arg(long, default_value_t = 6)]
        max_dim: usize,
    },
}

#[derive(Debug, Args)]
struct SynthFlags {
    /// Largest denominator accepted when rationalizing floats.
    #[arg(long, default_value_t = 1_000_000)]
    denominator_bound: u64,
    /// Largest binary exponent for dyadic square roots.
    #[arg(long, default_value_t = 256)]
    max_exponent: u32,
}

impl SynthFlags {
    fn options(&self) -> SynthesisOptions {
        SynthesisOptions {
            denominator_bound: self.denominator_bound,
            max_exponent: self.max_exponent,
            ..Default::default()
        }
    }
}

#[derive(Debug, Subcommand)]
enum RankCmd {
    /// Rule-based upper bound for one graph or a catalog.
    Bound {
        graph6: Option<String>,
        /// Newline-separated graph6 catalog.
        #[arg(long)]
        catalog: Option<PathBuf>,
        /// Rank level used for the degree filter column.
        #[arg(long, default_value_t = 2)]
        ell: usize,
        #[arg(long, default_value_t = crate::rankbounds::DEFAULT_DEPTH)]
        depth: u32,
        /// Write `bounds.csv` and one trace file per graph here.
        #[arg(long)]
        out: Option<PathBuf>,
        /// Print the full trace for a single graph.
        #[arg(long)]
        trace: bool,
    },
    /// Bounds on α of the LS+ relaxation from the minimum degree.
    Alpha { graph6: String },
    /// Admissible degree range for vertex-transitive graphs of rank ℓ.
    DegreeFilter { n: usize, ell: usize },
}

#[derive(Debug, Clone, Copy, ValueEnum)]
enum ModeArg {
    Any,
    Full,
}

#[derive(Debug, Clone, Copy, ValueEnum)]
enum SourceArg {
    Hull,
    Small,
}

#[derive(Debug, Subcommand)]
enum SearchCmd {
    /// 1-join plus proper 2-stretch candidates from seed graphs.
    Candidates {
        #[arg(long)]
        seeds: PathBuf,
        #[arg(long)]
        out: PathBuf,
        #[arg(long, value_enum, default_value = "any")]
        mode: ModeArg,
    },
    /// Full-support facet pairs of a graph stage file.
    Pairs {
        #[arg(long)]
        input: PathBuf,
        #[arg(long)]
        out: PathBuf,
        #[arg(long, value_enum, default_value = "hull")]
        source: SourceArg,
        /// Bumped coefficients tried by the small-coefficient source.
        #[arg(long, default_value_t = 2)]
        max_twos: usize,
    },
    /// Minimal pairs under the edge-subgraph order.
    Minimal {
        #[arg(long)]
        input: PathBuf,
        #[arg(long)]
        out: PathBuf,
    },
    /// Edge subgraphs on which an inequality stays valid.
    Closure {
        #[arg(long)]
        graph: String,
        #[arg(long)]
        ineq: String,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Members of the stretched-clique family.
    Cliques {
        #[arg(long)]
        n: usize,
        #[arg(long)]
        d: usize,
        #[arg(long)]
        hat: bool,
        #[arg(long)]
        improper: bool,
        #[arg(long)]
        sparse: bool,
        #[arg(long)]
        omega_max: Option<usize>,
        #[arg(long)]
        omega_min: Option<usize>,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Candidates, pairs and minimal pairs in one run.
    Pipeline {
        #[arg(long)]
        seeds: PathBuf,
        #[arg(long)]
        out: PathBuf,
        #[arg(long, value_enum, default_value = "any")]
        mode: ModeArg,
    },
}

/// Result of a command that ran to completion.
enum Outcome {
    Ok,
    Reject,
}

type CmdResult = Result<Outcome, String>;

/// Parses `args` (including the program name), runs the command and
/// returns the exit code. Normal output goes to `out`, diagnostics to `err`.
pub fn run<I, S>(args: I, out: &mut dyn Write, err: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = S>,
    S: Into<std::ffi::OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(c) => c,
        Err(e) => {
            let code = if e.use_stderr() { EXIT_MALFORMED } else { EXIT_OK };
            let _ = if e.use_stderr() { write!(err, "{e}") } else { write!(out, "{e}") };
            return code;
        }
    };
    let _ = writeln!(out, "config: {:?}", cli);
    let start = Instant::now();
    let result = match cli.jobs {
        Some(j) => match rayon::ThreadPoolBuilder::new().num_threads(j.max(1)).build() {
            Ok(pool) => {
                let (result, buffer) = pool.install(|| {
                    let mut buffer = Vec::new();
                    (dispatch(&cli.command, &mut buffer), buffer)
                });
                let _ = out.write_all(&buffer);
                result
            }
            Err(e) => Err(e.to_string()),
        },
        None => dispatch(&cli.command, out),
    };
    if cli.timing {
        let _ = writeln!(out, "elapsed_ms: {}", start.elapsed().as_millis());
    }
    match result {
        Ok(Outcome::Ok) => EXIT_OK,
        Ok(Outcome::Reject) => EXIT_REJECT,
        Err(message) => {
            let _ = writeln!(err, "error: {message}");
            EXIT_MALFORMED
        }
    }
}

fn dispatch(cmd: &Command, out: &mut dyn Write) -> CmdResult {
    match cmd {
        Command::Graph(c) => graph_cmd(c, out),
        Command::Polytope(c) => polytope_cmd(c, out),
        Command::Cert(c) => cert_cmd(c, out),
        Command::Rank(c) => rank_cmd(c, out),
        Command::Search(c) => search_cmd(c, out),
    }
}

macro_rules! w {
    ($out:expr, $($arg:tt)*) => {
        writeln!($out, $($arg)*).map_err(|e| e.to_string())?
    };
}

fn decode(s: &str) -> Result<Graph, String> {
    graph6_decode(s.trim()).map_err(|e| e.to_string())
}

fn read_text(path: &Path) -> Result<String, String> {
    fs::read_to_string(path).map_err(|e| format!("{}: {e}", path.display()))
}

/// Reads graphs from a graph6-per-line file or a `graph <name> <n>` collection.
fn read_graphs(path: &Path) -> Result<Vec<Graph>, String> {
    let text = read_text(path)?;
    if text.lines().any(|l| l.trim_start().starts_with("graph ")) {
        return Ok(parse_graph_collection(&text).map_err(|e| e.to_string())?.into_iter().map(|g| g.graph).collect());
    }
    text.lines().filter(|l| !l.trim().is_empty() && !l.starts_with('#')).map(decode).collect()
}

fn parse_ineq(s: &str, n: usize) -> Result<Inequality, String> {
    let ineq = Inequality::parse_csv_row(s).map_err(|e| e.to_string())?;
    if ineq.a.len() != n {
        return Err(format!("inequality has {} coefficients for {n} vertices", ineq.a.len()));
    }
    Ok(ineq)
}

fn one_based(vs: &[usize], n: usize) -> Result<Vec<usize>, String> {
    vs.iter()
        .map(|&v| if (1..=n).contains(&v) { Ok(v - 1) } else { Err(format!("vertex {v} out of range 1..={n}")) })
        .collect()
}

fn parse_stretch(spec: &str, g: &Graph) -> Result<StretchSpec, String> {
    let (v, parts) = spec.split_once(':').ok_or("stretch spec must look like v:a,b;c,d")?;
    let v: usize = v.trim().parse().map_err(|e| format!("stretch vertex: {e}"))?;
    let v = one_based(&[v], g.n())?[0];
    let mut masks = Vec::new();
    for part in parts.split(';') {
        let vs: Vec<usize> = part
            .split(',')
            .filter(|x| !x.trim().is_empty())
            .map(|x| x.trim().parse::<usize>().map_err(|e| e.to_string()))
            .collect::<Result<_, _>>()?;
        masks.push(one_based(&vs, g.n())?.iter().fold(0u64, |m, &x| m | 1 << x));
    }
    Ok(StretchSpec { vertex: v, parts: masks })
}

fn graph_cmd(cmd: &GraphCmd, out: &mut dyn Write) -> CmdResult {
    match cmd {
        GraphCmd::Decode { graph6 } => {
            let g = decode(graph6)?;
            w!(out, "n = {}", g.n());
            w!(out, "m = {}", g.edge_count());
            for (a, b) in g.edges_1based() {
                w!(out, "{a} {b}");
            }
        }
        GraphCmd::Encode { file } => {
            let g = Graph::parse_edge_list(&read_text(file)?).map_err(|e| e.to_string())?;
            w!(out, "{}", graph6_encode(&g));
        }
        GraphCmd::Canon { graph6 } => w!(out, "{}", canonical_form(&decode(graph6)?)),
        GraphCmd::Info { graph6 } => {
            let g = decode(graph6)?;
            let orbits = automorphism_orbits(&g);
            let mut reps = orbits.clone();
            reps.sort_unstable();
            reps.dedup();
            w!(out, "n = {}", g.n());
            w!(out, "m = {}", g.edge_count());
            w!(out, "degrees = {:?}", g.degrees());
            w!(out, "connected = {}", is_connected(&g));
            w!(out, "bipartite = {}", is_bipartite(&g));
            w!(out, "perfect = {}", is_perfect_small(&g));
            w!(out, "vertex_transitive = {}", is_vertex_transitive(&g));
            w!(out, "vertex_orbits = {}", reps.len());
            w!(out, "alpha = {}", stability_number(&g));
            w!(out, "omega = {}", clique_number(&g));
            w!(out, "canonical = {}", canonical_form(&g));
        }
        GraphCmd::Ops(ops) => {
            let mut g = decode(&ops.graph6)?;
            if ops.complement {
                g = g.complement();
            }
            if !ops.delete.is_empty() {
                g = delete_vertices(&g, &one_based(&ops.delete, g.n())?).map_err(|e| e.to_string())?;
            }
            if let Some(v) = ops.destroy {
                g = destroy_vertex(&g, one_based(&[v], g.n())?[0]).map_err(|e| e.to_string())?;
            }
            if let Some(s) = &ops.stretch {
                let spec = parse_stretch(s, &g)?;
                g = stretch_vertex(&g, &spec).map_err(|e| e.to_string())?.0;
            }
            w!(out, "{}", graph6_encode(&g));
        }
    }
    Ok(Outcome::Ok)
}

fn polytope_cmd(cmd: &PolytopeCmd, out: &mut dyn Write) -> CmdResult {
    match cmd {
        PolytopeCmd::StableSets { graph6 } => {
            let g = decode(graph6)?;
            let sets = enumerate_stable_sets(&g);
            w!(out, "count = {}", sets.len());
            for s in sets {
                w!(out, "{}", stable_set_bitstring(s, g.n()));
            }
        }
        PolytopeCmd::Facets { graph6, full_support } => {
            let g = decode(graph6)?;
            if g.n() > 12 {
                return Err(format!("facet enumeration supports at most 12 vertices, got {}", g.n()));
            }
            let facets = if *full_support { full_support_facets(&g) } else { enumerate_facets(&g) };
            w!(out, "count = {}", facets.len());
            for f in facets {
                w!(out, "{}", f.to_csv_row());
            }
        }
        PolytopeCmd::Valid { graph6, ineq } => {
            let g = decode(graph6)?;
            let ineq = parse_ineq(ineq, g.n())?;
            let attained = max_over_stab(&g, &ineq.a);
            w!(out, "max over STAB = {attained}");
            if !is_valid_for_stab(&g, &ineq) {
                w!(out, "valid = false");
                return Ok(Outcome::Reject);
            }
            w!(out, "valid = true");
            w!(out, "facet = {}", is_facet(&g, &ineq).map_err(|e| e.to_string())?);
        }
        PolytopeCmd::FracMax { graph6 } => {
            let g = decode(graph6)?;
            w!(out, "{}", frac_max_all_ones(&g).map_err(|e| e.to_string())?);
        }
    }
    Ok(Outcome::Ok)
}

fn cert_cmd(cmd: &CertCmd, out: &mut dyn Write) -> CmdResult {
    match cmd {
        CertCmd::Verify { bundle, ineq, graph, json } => {
            let pkg = certify::load_package(bundle).map_err(|e| e.to_string())?;
            let g = match graph {
                Some(s) => decode(s)?,
                None => certify::package_graph(&pkg)
                    .map_err(|e| e.to_string())?
                    .ok_or("the bundle names no graph; pass --graph")?,
            };
            let ineq = match ineq {
                Some(s) => Some(parse_ineq(s, g.n())?),
                None => pkg.inequality.clone(),
            };
            let report = match &ineq {
                Some(i) => verify_rank_certificate(&g, i, &pkg),
                None => verify_package(&g, &pkg),
            }
            .map_err(|e| e.to_string())?;
            if *json {
                w!(out, "{}", serde_json::to_string_pretty(&report.to_json()).map_err(|e| e.to_string())?);
            } else {
                write!(out, "{report}").map_err(|e| e.to_string())?;
            }
            if report.has_code(FailureCode::Dimension) {
                return Err("malformed bundle: matrix dimensions do not match the graph".into());
            }
            return Ok(if report.accepted { Outcome::Ok } else { Outcome::Reject });
        }
        CertCmd::Synth { skeleton, out: dir, synth } => {
            let skel = certify::load_package(skeleton).map_err(|e| e.to_string())?;
            let g = certify::package_graph(&skel).map_err(|e| e.to_string())?.ok_or("the skeleton names no graph")?;
            let result =
                assemble_package(&g, skel.level, skel.y.clone(), skel.m1.clone(), skel.m2.clone(), &synth.options());
            match result {
                Ok(mut pkg) => {
                    pkg.graph6 = skel.graph6.clone();
                    pkg.inequality = skel.inequality.clone();
                    certify::save_package(&pkg, dir).map_err(|e| e.to_string())?;
                    report_k(&pkg, out)?;
                    w!(out, "wrote {}", dir.display());
                }
                Err(e) => {
                    w!(out, "synthesis failed: {} ({e})", e.code());
                    return Ok(Outcome::Reject);
                }
            }
        }
        CertCmd::SynthFloat { graph, y, out: dir, ineq, synth } => {
            let g = decode(graph)?;
            let opts = synth.options();
            let floats = parse_float_csv(&read_text(y)?)?;
            let rat = rationalize(&floats, &opts).map_err(|e| e.to_string())?;
            if rat.rows() != g.n() + 1 {
                return Err(format!("Y is {}×{}, expected {}×{}", rat.rows(), rat.cols(), g.n() + 1, g.n() + 1));
            }
            let scale = BigRational::from_integer(denominator_lcm(rat.entries()));
            let entries: Vec<BigInt> = rat.entries().iter().map(|x| (x * &scale).to_integer()).collect();
            let yi = IntMatrix::from_entries(rat.rows(), rat.cols(), entries).map_err(|e| e.to_string())?;
            match assemble_package(&g, 1, yi, BTreeMap::new(), BTreeMap::new(), &opts) {
                Ok(mut pkg) => {
                    certify::attach_graph(&mut pkg, &g);
                    pkg.inequality = ineq.as_deref().map(|s| parse_ineq(s, g.n())).transpose()?;
                    certify::save_package(&pkg, dir).map_err(|e| e.to_string())?;
                    report_k(&pkg, out)?;
                    w!(out, "wrote {}", dir.display());
                }
                Err(e) => {
                    w!(out, "synthesis failed: {} ({e})", e.code());
                    return Ok(Outcome::Reject);
                }
            }
        }
        CertCmd::Fuzz { seed, count, max_dim } => {
            let mut rng = ChaCha8Rng::seed_from_u64(*seed);
            let opts = SynthesisOptions::default();
            let mut accepted = 0;
            for i in 0..*count {
                let d = rng.gen_range(1..=(*max_dim).max(1));
                let r = rng.gen_range(1..=d);
                let b: Vec<Vec<i64>> = (0..r).map(|_| (0..d).map(|_| rng.gen_range(-3..=3)).collect()).collect();
                let rows: Vec<Vec<i64>> =
                    (0..d).map(|p| (0..d).map(|q| (0..r).map(|k| b[k][p] * b[k][q]).sum()).collect()).collect();
                let y = IntMatrix::from_i64_rows(&rows).map_err(|e| e.to_string())?;
                let ok = uvw_synthesize(&y, &opts)
                    .ok()
                    .and_then(|c| certify::verify_uvw(&y, &c).ok())
                    .is_some_and(|v| v.is_accept());
                accepted += usize::from(ok);
                w!(out, "case {i}: dim {d} rank<={r} {}", if ok { "accept" } else { "FAIL" });
            }
            w!(out, "accepted {accepted}/{count}");
            if accepted != *count {
                return Ok(Outcome::Reject);
            }
        }
    }
    Ok(Outcome::Ok)
}

fn report_k(pkg: &CertificatePackage, out: &mut dyn Write) -> Result<(), String> {
    let mut ids: Vec<&MatrixId> = pkg.uvw.keys().collect();
    ids.sort();
    for id in ids {
        let y = pkg.matrix(*id).expect("certified matrix exists");
        if let Ok(certify::UvwVerdict::Accept { k }) = certify::verify_uvw(y, &pkg.uvw[id]) {
            w!(out, "k[{id}] = {k}");
        }
    }
    Ok(())
}

fn rank_cmd(cmd: &RankCmd, out: &mut dyn Write) -> CmdResult {
    match cmd {
        RankCmd::Bound { graph6, catalog, ell, depth, out: dir, trace } => match (graph6, catalog) {
            (Some(s), None) => {
                let g = decode(s)?;
                let (b, t) = rank_upper_bound(&g, *depth);
                w!(out, "bound = {b}");
                w!(out, "rule = {}", t.rule);
                if *trace {
                    write!(out, "{}", t.render()).map_err(|e| e.to_string())?;
                }
            }
            (None, Some(path)) => {
                let c = classify_vt_candidates(&read_text(path)?, *ell, *depth);
                let mut csv = String::from("index,graph6,n,degree,degree_admissible,bound,rule,trace_id\n");
                for r in &c.rows {
                    let degree = r.degree.map_or(String::new(), |d| d.to_string());
                    csv.push_str(&format!(
                        "{},{},{},{},{},{},{},trace_{:03}.txt\n",
                        r.index, r.graph6, r.n, degree, r.degree_admissible, r.bound, r.rule, r.index
                    ));
                }
                write!(out, "{csv}").map_err(|e| e.to_string())?;
                for (line, msg) in &c.errors {
                    w!(out, "unparseable line {line}: {msg}");
                }
                for (rule, n) in &c.rule_counts {
                    w!(out, "rule {rule}: {n}");
                }
                if let Some(dir) = dir {
                    fs::create_dir_all(dir).map_err(|e| format!("{}: {e}", dir.display()))?;
                    fs::write(dir.join("bounds.csv"), &csv).map_err(|e| e.to_string())?;
                    for r in &c.rows {
                        let t = r.trace.as_ref().expect("classified rows carry traces");
                        fs::write(dir.join(format!("trace_{:03}.txt", r.index)), t.render())
                            .map_err(|e| e.to_string())?;
                    }
                }
                if !c.errors.is_empty() {
                    return Err(format!("{} unparseable catalog lines", c.errors.len()));
                }
            }
            _ => return Err("pass exactly one of a graph6 argument or --catalog".into()),
        },
        RankCmd::Alpha { graph6 } => {
            let b = alpha_ls1_bound(&decode(graph6)?);
            w!(out, "min degree = {}", b.min_degree);
            w!(out, "case (i) bound = {}", b.case_i);
            match &b.case_ii {
                Some(v) => w!(out, "case (ii) bound = {v}"),
                None => w!(out, "case (ii) does not apply"),
            }
            let case = match b.case {
                AlphaCase::MinDegree => "i",
                AlphaCase::Destruction => "ii",
            };
            w!(out, "best = {} (case {case})", b.best);
        }
        RankCmd::DegreeFilter { n, ell } => {
            if *ell < 2 {
                return Err("the degree filter needs ell >= 2".into());
            }
            match vt_degree_filter(*n, *ell) {
                Some((lo, hi)) => w!(out, "[{lo},{hi}]"),
                None => w!(out, "empty"),
            }
        }
    }
    Ok(Outcome::Ok)
}

fn facet_source(source: SourceArg, max_twos: usize) -> Box<dyn FacetSource> {
    match source {
        SourceArg::Hull => Box::new(HullFacets),
        SourceArg::Small => Box::new(SmallCoefficientFacets { max_twos }),
    }
}

fn join_mode(m: ModeArg) -> JoinMode {
    match m {
        ModeArg::Any => JoinMode::AnySubset,
        ModeArg::Full => JoinMode::FullSet,
    }
}

fn search_cmd(cmd: &SearchCmd, out: &mut dyn Write) -> CmdResult {
    let e2s = |e: crate::search::SearchError| e.to_string();
    match cmd {
        SearchCmd::Candidates { seeds, out: path, mode } => {
            let seeds = read_graphs(seeds)?;
            let cands = generate_stretch_candidates(&seeds, join_mode(*mode));
            let graphs: Vec<Graph> = cands.into_iter().map(|c| c.graph).collect();
            write_graph_stage(path, &graphs).map_err(e2s)?;
            w!(out, "candidates = {}", graphs.len());
        }
        SearchCmd::Pairs { input, out: path, source, max_twos } => {
            let graphs = read_graph_stage(input).map_err(e2s)?;
            let pairs =
                facet_pair_extraction(&graphs, facet_source(*source, *max_twos).as_ref()).map_err(|e| e.to_string())?;
            write_pair_stage(path, &pairs).map_err(e2s)?;
            let per = pairs_per_graph(&pairs);
            w!(out, "pairs = {}", pairs.len());
            w!(out, "graphs with pairs = {}", per.len());
            w!(out, "graphs with two pairs = {}", per.values().filter(|&&c| c == 2).count());
        }
        SearchCmd::Minimal { input, out: path } => {
            let pairs = read_pair_stage(input).map_err(e2s)?;
            let minimal = minimal_elements(&pairs);
            write_pair_stage(path, &minimal).map_err(e2s)?;
            w!(out, "minimal = {}", minimal.len());
        }
        SearchCmd::Closure { graph, ineq, out: path } => {
            let g = decode(graph)?;
            let ineq = parse_ineq(ineq, g.n())?;
            if !is_valid_for_stab(&g, &ineq) {
                w!(out, "inequality is not valid for STAB(G)");
                return Ok(Outcome::Reject);
            }
            let closure = edge_subgraph_closure(&g, &ineq);
            w!(out, "closure = {}", closure.len());
            match path {
                Some(p) => fs::write(p, closure.join("\n") + "\n").map_err(|e| e.to_string())?,
                None => {
                    for c in closure {
                        w!(out, "{c}");
                    }
                }
            }
        }
        SearchCmd::Cliques { n, d, hat, improper, sparse, omega_max, omega_min, out: path } => {
            if d > n {
                return Err(format!("d = {d} exceeds n = {n}"));
            }
            let opts = StretchedCliqueOptions {
                hat: *hat,
                proper: !*improper,
                sparse: *sparse,
                omega_max: *omega_max,
                omega_min: *omega_min,
            };
            let members = generate_stretched_cliques(*n, *d, &opts);
            w!(out, "members = {}", members.len());
            let graphs: Vec<Graph> = members.into_iter().map(|s| s.graph).collect();
            match path {
                Some(p) => write_graph_stage(p, &graphs).map_err(e2s)?,
                None => {
                    for g in &graphs {
                        w!(out, "{}", graph6_encode(g));
                    }
                }
            }
        }
        SearchCmd::Pipeline { seeds, out: dir, mode } => {
            let seeds = read_graphs(seeds)?;
            let (s, _) = run_pipeline(&seeds, join_mode(*mode), &HullFacets, Some(dir)).map_err(e2s)?;
            w!(out, "candidates = {}", s.candidates);
            w!(out, "pairs = {}", s.pairs);
            w!(out, "graphs with two pairs = {}", s.graphs_with_two_pairs);
            w!(out, "minimal = {}", s.minimal);
        }
    }
    Ok(Outcome::Ok)
}
