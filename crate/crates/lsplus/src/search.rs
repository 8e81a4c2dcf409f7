//! The ℓ-minimal candidate pipeline: 1-join plus proper 2-stretch generation,
//! full-support facet extraction, minimal elements under the edge-subgraph
//! order, edge-subgraph closure, and stretched-clique enumeration.

use std::collections::{BTreeMap, BTreeSet, HashSet};
use std::fs;
use std::io;
use std::path::Path;

use rayon::prelude::*;
use thiserror::Error;

use crate::graphs::{
    bits, canonical_form, canonical_form_colored, canonical_labeling, clique_number, graph6_decode, graph6_encode,
    stretch_vertex, Graph, GraphError, StretchSpec, StretchedCliqueSpec,
};
use crate::polytope::{full_support_facets, is_facet, is_valid_for_stab, max_over_stab, Inequality, PolytopeError};

/// Errors raised while reading or writing stage files.
#[derive(Debug, Error)]
pub enum SearchError {
    #[error("{path}: {source}")]
    Io { path: String, source: io::Error },
    #[error("{path} line {line}: {message}")]
    Parse { path: String, line: usize, message: String },
    #[error(transparent)]
    Graph(#[from] GraphError),
    #[error(transparent)]
    Polytope(#[from] PolytopeError),
}

/// Which vertex sets the new vertex may be joined to before it is stretched.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum JoinMode {
    /// Any subset of the seed with at least two vertices.
    AnySubset,
    /// The full seed vertex set only.
    FullSet,
}

/// Generation record of a candidate graph.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Provenance {
    /// Index of the seed in the input list.
    pub seed: usize,
    /// Seed vertices joined to the new vertex.
    pub join_mask: u64,
    /// Stretching of the new vertex (index `n_seed`).
    pub stretch: StretchSpec,
}

/// A generated candidate in canonical labeling.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Candidate {
    pub graph: Graph,
    /// Canonical graph6 (equal to the graph6 of `graph`).
    pub graph6: String,
    pub provenance: Provenance,
}

fn canonical_relabel(g: &Graph) -> (Graph, Vec<usize>) {
    let perm = canonical_labeling(g, None);
    (g.permute(&perm), perm)
}

/// Unordered pairs `{A₁, A₂}` with `A₁ ∪ A₂ = nb`; with `proper`, both
/// parts are nonempty proper subsets of `nb`.
pub fn two_covers(nb: u64, proper: bool) -> Vec<(u64, u64)> {
    let verts: Vec<usize> = bits(nb).collect();
    let mut out = BTreeSet::new();
    let total = 3usize.pow(verts.len() as u32);
    for code in 0..total {
        let (mut a1, mut a2, mut c) = (0u64, 0u64, code);
        for &v in &verts {
            match c % 3 {
                0 => a1 |= 1 << v,
                1 => a2 |= 1 << v,
                _ => {
                    a1 |= 1 << v;
                    a2 |= 1 << v;
                }
            }
            c /= 3;
        }
        if proper && (a1 == 0 || a2 == 0 || a1 == nb || a2 == nb) {
            continue;
        }
        out.insert((a1.min(a2), a1.max(a2)));
    }
    out.into_iter().collect()
}

/// All non-isomorphic graphs obtained from a seed by adding one vertex joined
/// to some of its vertices and properly 2-stretching that vertex. The output
/// is sorted by canonical graph6; the first construction found is kept as
/// provenance.
pub fn generate_stretch_candidates(seeds: &[Graph], mode: JoinMode) -> Vec<Candidate> {
    let jobs: Vec<(usize, u64)> = seeds
        .iter()
        .enumerate()
        .flat_map(|(s, g)| {
            let full = g.vertex_mask();
            let masks: Vec<u64> = match mode {
                JoinMode::FullSet => vec![full],
                JoinMode::AnySubset => (1..=full).filter(|m| m.count_ones() >= 2).collect(),
            };
            masks.into_iter().map(move |m| (s, m))
        })
        .collect();
    let found: Vec<Vec<Candidate>> = jobs
        .par_iter()
        .map(|&(s, mask)| {
            let seed = &seeds[s];
            let v = seed.n();
            let joined = seed.join_vertex(mask).expect("seed within size limit");
            two_covers(mask, true)
                .into_iter()
                .map(|(a1, a2)| {
                    let spec = StretchSpec { vertex: v, parts: vec![a1, a2] };
                    let (g, _) = stretch_vertex(&joined, &spec).expect("parts cover the neighborhood");
                    let (graph, _) = canonical_relabel(&g);
                    let graph6 = graph6_encode(&graph);
                    Candidate { graph, graph6, provenance: Provenance { seed: s, join_mask: mask, stretch: spec } }
                })
                .collect()
        })
        .collect();
    let mut seen = HashSet::new();
    let mut out: Vec<Candidate> = found.into_iter().flatten().filter(|c| seen.insert(c.graph6.clone())).collect();
    out.sort_by(|a, b| a.graph6.cmp(&b.graph6));
    out
}

/// A graph paired with one of its full-support facets, both in the
/// canonical labeling of the pair.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CandidatePair {
    pub graph: Graph,
    pub inequality: Inequality,
    /// Key identifying the pair up to weight-preserving isomorphism.
    pub key: String,
    /// Canonical graph6 of the underlying graph.
    pub graph6: String,
}

impl CandidatePair {
    /// Pair in the canonical labeling of the weighted graph `(g, a)`.
    pub fn new(g: &Graph, ineq: &Inequality) -> Self {
        let colors: Vec<usize> = ineq.a.iter().map(|&c| c as usize).collect();
        let perm = canonical_labeling(g, Some(&colors));
        let graph = g.permute(&perm);
        let mut a = vec![0; g.n()];
        for (v, &p) in perm.iter().enumerate() {
            a[p] = ineq.a[v];
        }
        let key = canonical_form_colored(g, &colors);
        let graph6 = canonical_form(g);
        Self { graph, inequality: Inequality::new(a, ineq.beta), key, graph6 }
    }

    /// CSV row `graph6,a_1,…,a_n,beta` (pair labeling).
    pub fn to_csv_row(&self) -> String {
        format!("{},{}", graph6_encode(&self.graph), self.inequality.to_csv_row())
    }
}

/// Source of full-support facets for a graph.
pub trait FacetSource: Sync {
    fn full_support_facets(&self, g: &Graph) -> Result<Vec<Inequality>, PolytopeError>;
}

/// Complete enumeration by double description; practical for `n ≤ 10`.
#[derive(Debug, Clone, Copy, Default)]
pub struct HullFacets;

impl FacetSource for HullFacets {
    fn full_support_facets(&self, g: &Graph) -> Result<Vec<Inequality>, PolytopeError> {
        Ok(full_support_facets(g))
    }
}

/// Tests the candidates `ē + Σ_{j∈T} e_j` for every `|T| ≤ max_twos`, each
/// with its tight right-hand side, for facethood. Exact at any size but
/// incomplete: facets with other coefficients are not found.
#[derive(Debug, Clone, Copy)]
pub struct SmallCoefficientFacets {
    pub max_twos: usize,
}

impl FacetSource for SmallCoefficientFacets {
    fn full_support_facets(&self, g: &Graph) -> Result<Vec<Inequality>, PolytopeError> {
        let n = g.n();
        let mut out = Vec::new();
        let mut stack: Vec<(u64, usize)> = vec![(0, 0)];
        while let Some((twos, next)) = stack.pop() {
            let a: Vec<i64> = (0..n).map(|v| 1 + (twos >> v & 1) as i64).collect();
            let beta = max_over_stab(g, &a);
            let ineq = Inequality::new(a, beta);
            if is_facet(g, &ineq)? {
                out.push(ineq);
            }
            if (twos.count_ones() as usize) < self.max_twos {
                for v in next..n {
                    stack.push((twos | 1 << v, v + 1));
                }
            }
        }
        out.sort();
        Ok(out)
    }
}

/// One pair per graph and full-support facet, counted up to
/// weight-preserving isomorphism. Sorted by key.
pub fn facet_pair_extraction(graphs: &[Graph], source: &dyn FacetSource) -> Result<Vec<CandidatePair>, PolytopeError> {
    let per_graph: Vec<Result<Vec<CandidatePair>, PolytopeError>> = graphs
        .par_iter()
        .map(|g| {
            let mut pairs: Vec<CandidatePair> =
                source.full_support_facets(g)?.iter().map(|f| CandidatePair::new(g, f)).collect();
            pairs.sort_by(|a, b| a.key.cmp(&b.key));
            pairs.dedup_by(|a, b| a.key == b.key);
            Ok(pairs)
        })
        .collect();
    let mut out = Vec::new();
    for r in per_graph {
        out.extend(r?);
    }
    out.sort_by(|a, b| a.key.cmp(&b.key));
    out.dedup_by(|a, b| a.key == b.key);
    Ok(out)
}

/// Number of pairs contributed by each canonical graph.
pub fn pairs_per_graph(pairs: &[CandidatePair]) -> BTreeMap<String, usize> {
    let mut m = BTreeMap::new();
    for p in pairs {
        *m.entry(p.graph6.clone()).or_insert(0) += 1;
    }
    m
}

/// True iff some bijection `φ` maps edges of `small` to edges of `big` with
/// `wa[v] = wb[φ(v)]` for every vertex.
pub fn weighted_spanning_embeds(small: &Graph, wa: &[i64], big: &Graph, wb: &[i64]) -> bool {
    let n = small.n();
    if n != big.n() || small.edge_count() > big.edge_count() {
        return false;
    }
    let mut sa = wa.to_vec();
    let mut sb = wb.to_vec();
    sa.sort_unstable();
    sb.sort_unstable();
    if sa != sb {
        return false;
    }
    let mut order: Vec<usize> = (0..n).collect();
    order.sort_by_key(|&v| std::cmp::Reverse(small.degree(v)));
    #[allow(clippy::too_many_arguments)]
    fn go(
        k: usize,
        order: &[usize],
        small: &Graph,
        wa: &[i64],
        big: &Graph,
        wb: &[i64],
        map: &mut Vec<usize>,
        used: u64,
    ) -> bool {
        if k == order.len() {
            return true;
        }
        let v = order[k];
        for w in bits(big.vertex_mask() & !used) {
            if wb[w] != wa[v] || big.degree(w) < small.degree(v) {
                continue;
            }
            let ok = order[..k].iter().all(|&u| !small.has_edge(u, v) || big.has_edge(map[u], w));
            if ok {
                map[v] = w;
                if go(k + 1, order, small, wa, big, wb, map, used | 1 << w) {
                    return true;
                }
            }
        }
        false
    }
    let mut map = vec![usize::MAX; n];
    go(0, &order, small, wa, big, wb, &mut map, 0)
}

/// Pairs with no strictly smaller pair: `(G, a) < (G′, a′)` when, under some
/// relabeling, `a = a′` and `E(G) ⊊ E(G′)`.
pub fn minimal_elements(pairs: &[CandidatePair]) -> Vec<CandidatePair> {
    let keep: Vec<bool> = pairs
        .par_iter()
        .map(|big| {
            !pairs.iter().any(|small| {
                small.graph.edge_count() < big.graph.edge_count()
                    && weighted_spanning_embeds(&small.graph, &small.inequality.a, &big.graph, &big.inequality.a)
            })
        })
        .collect();
    pairs.iter().zip(keep).filter(|(_, k)| *k).map(|(p, _)| p.clone()).collect()
}

/// Every edge subgraph `H` of `g` (same vertices, `E(H) ⊆ E(G)`) for which
/// `ineq` stays valid for STAB(H), as sorted canonical graph6 strings.
/// Validity is inherited by supergraphs, so the search only descends from
/// valid graphs.
pub fn edge_subgraph_closure(g: &Graph, ineq: &Inequality) -> Vec<String> {
    let colors: Vec<usize> = ineq.a.iter().map(|&c| c as usize).collect();
    let mut seen: HashSet<String> = HashSet::new();
    let mut frontier: Vec<Graph> = Vec::new();
    if is_valid_for_stab(g, ineq) {
        seen.insert(canonical_form_colored(g, &colors));
        frontier.push(g.clone());
    }
    let mut out: BTreeSet<String> = frontier.iter().map(canonical_form).collect();
    while !frontier.is_empty() {
        let children: Vec<(String, Graph)> = frontier
            .par_iter()
            .flat_map_iter(|h| {
                h.edges()
                    .into_iter()
                    .filter_map(|(u, v)| {
                        let mut c = h.clone();
                        c.remove_edge(u, v);
                        is_valid_for_stab(&c, ineq).then(|| (canonical_form_colored(&c, &colors), c))
                    })
                    .collect::<Vec<_>>()
            })
            .collect();
        frontier = Vec::new();
        for (key, c) in children {
            if seen.insert(key) {
                out.insert(canonical_form(&c));
                frontier.push(c);
            }
        }
    }
    out.into_iter().collect()
}

/// Filters for stretched-clique enumeration.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct StretchedCliqueOptions {
    /// Require exactly one edge between the associated vertices of every
    /// two stretched originals.
    pub hat: bool,
    /// Require every 2-stretching to be proper.
    pub proper: bool,
    /// Keep only members with `n(n−1)/2 + 2d` edges.
    pub sparse: bool,
    pub omega_max: Option<usize>,
    pub omega_min: Option<usize>,
}

impl Default for StretchedCliqueOptions {
    fn default() -> Self {
        Self { hat: false, proper: true, sparse: false, omega_max: None, omega_min: None }
    }
}

const UNSTRETCHED: usize = 0;
const HUB: usize = 1;
const COPY: usize = 2;

fn spec_from_colored(n: usize, g: Graph, colors: &[usize]) -> StretchedCliqueSpec {
    let originals: Vec<usize> = (0..g.n()).filter(|&v| colors[v] != COPY).collect();
    debug_assert_eq!(originals.len(), n);
    let mut stretched = Vec::new();
    let associated: Vec<Vec<usize>> = originals
        .iter()
        .enumerate()
        .map(|(i, &v)| {
            if colors[v] == HUB {
                stretched.push(i);
                std::iter::once(v).chain(bits(g.neighbors(v))).collect()
            } else {
                vec![v]
            }
        })
        .collect();
    StretchedCliqueSpec { n, stretched, graph: g, associated }
}

/// True iff the copies of `u` and of `v` (both hubs) share exactly one edge.
fn single_cross_edge(g: &Graph, u: usize, v: usize) -> bool {
    bits(g.neighbors(u)).map(|a| (g.neighbors(a) & g.neighbors(v)).count_ones()).sum::<u32>() == 1
}

/// All members of `𝒦_{n,d}` (graphs from `K_n` by 2-stretching `d` of its
/// vertices) passing the filters, deduplicated up to isomorphism and sorted
/// by canonical graph6.
pub fn generate_stretched_cliques(n: usize, d: usize, opts: &StretchedCliqueOptions) -> Vec<StretchedCliqueSpec> {
    assert!(d <= n, "cannot stretch more vertices than the clique has");
    let mut level: Vec<(Graph, Vec<usize>)> = vec![(Graph::complete(n), vec![UNSTRETCHED; n])];
    for _ in 0..d {
        let next: Vec<(String, Graph, Vec<usize>)> = level
            .par_iter()
            .flat_map_iter(|(g, colors)| {
                let hubs: Vec<usize> = (0..g.n()).filter(|&v| colors[v] == HUB).collect();
                let mut out = Vec::new();
                for u in (0..g.n()).filter(|&v| colors[v] == UNSTRETCHED) {
                    for (a1, a2) in two_covers(g.neighbors(u), opts.proper) {
                        let spec = StretchSpec { vertex: u, parts: vec![a1, a2] };
                        let (h, _) = stretch_vertex(g, &spec).expect("parts cover the neighborhood");
                        if opts.hat && !hubs.iter().all(|&w| single_cross_edge(&h, u, w)) {
                            continue;
                        }
                        let mut c = colors.clone();
                        c[u] = HUB;
                        c.extend([COPY, COPY]);
                        out.push((canonical_form_colored(&h, &c), h, c));
                    }
                }
                out
            })
            .collect();
        let mut seen = HashSet::new();
        let mut uniq: Vec<(String, Graph, Vec<usize>)> =
            next.into_iter().filter(|(k, _, _)| seen.insert(k.clone())).collect();
        uniq.sort_by(|a, b| a.0.cmp(&b.0));
        level = uniq.into_iter().map(|(_, g, c)| (g, c)).collect();
    }
    let kept: Vec<(String, Graph, Vec<usize>)> = level
        .into_par_iter()
        .filter(|(g, _)| {
            let omega = clique_number(g);
            (!opts.sparse || g.edge_count() == n * (n - 1) / 2 + 2 * d)
                && opts.omega_max.is_none_or(|m| omega <= m)
                && opts.omega_min.is_none_or(|m| omega >= m)
        })
        .map(|(g, c)| {
            let perm = canonical_labeling(&g, None);
            let h = g.permute(&perm);
            let mut cc = vec![0; c.len()];
            for (v, &p) in perm.iter().enumerate() {
                cc[p] = c[v];
            }
            (graph6_encode(&h), h, cc)
        })
        .collect();
    let mut by_form: BTreeMap<String, (Graph, Vec<usize>)> = BTreeMap::new();
    for (k, g, c) in kept {
        by_form.entry(k).or_insert((g, c));
    }
    by_form.into_values().map(|(g, c)| spec_from_colored(n, g, &c)).collect()
}

fn io_err(path: &Path) -> impl FnOnce(io::Error) -> SearchError + '_ {
    move |source| SearchError::Io { path: path.display().to_string(), source }
}

/// Writes graphs as sorted, deduplicated canonical graph6 lines.
pub fn write_graph_stage(path: &Path, graphs: &[Graph]) -> Result<(), SearchError> {
    let forms: BTreeSet<String> = graphs.iter().map(canonical_form).collect();
    let mut text = String::new();
    for f in forms {
        text.push_str(&f);
        text.push('\n');
    }
    fs::write(path, text).map_err(io_err(path))
}

/// Reads a newline-separated graph6 stage file.
pub fn read_graph_stage(path: &Path) -> Result<Vec<Graph>, SearchError> {
    let text = fs::read_to_string(path).map_err(io_err(path))?;
    text.lines()
        .enumerate()
        .filter(|(_, l)| !l.trim().is_empty())
        .map(|(i, l)| {
            graph6_decode(l.trim()).map_err(|e| SearchError::Parse {
                path: path.display().to_string(),
                line: i + 1,
                message: e.to_string(),
            })
        })
        .collect()
}

/// Writes pairs as CSV rows `graph6,a_1,…,a_n,beta` in key order.
pub fn write_pair_stage(path: &Path, pairs: &[CandidatePair]) -> Result<(), SearchError> {
    let mut sorted: Vec<&CandidatePair> = pairs.iter().collect();
    sorted.sort_by(|a, b| a.key.cmp(&b.key));
    let mut text = String::new();
    for p in sorted {
        text.push_str(&p.to_csv_row());
        text.push('\n');
    }
    fs::write(path, text).map_err(io_err(path))
}

/// Reads a pair stage file.
pub fn read_pair_stage(path: &Path) -> Result<Vec<CandidatePair>, SearchError> {
    let text = fs::read_to_string(path).map_err(io_err(path))?;
    let mut out = Vec::new();
    for (i, line) in text.lines().enumerate() {
        if line.trim().is_empty() {
            continue;
        }
        let err = |message: String| SearchError::Parse { path: path.display().to_string(), line: i + 1, message };
        let (g6, rest) = line.split_once(',').ok_or_else(|| err("expected graph6,a...,beta".into()))?;
        let g = graph6_decode(g6).map_err(|e| err(e.to_string()))?;
        let ineq = Inequality::parse_csv_row(rest).map_err(|e| err(e.to_string()))?;
        if ineq.a.len() != g.n() {
            return Err(err(format!("{} coefficients for {} vertices", ineq.a.len(), g.n())));
        }
        out.push(CandidatePair::new(&g, &ineq));
    }
    Ok(out)
}

/// Counts produced by the level-ℓ candidate pipeline.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PipelineSummary {
    pub candidates: usize,
    pub pairs: usize,
    /// Graphs contributing exactly two pairs.
    pub graphs_with_two_pairs: usize,
    /// Graphs contributing at least one pair.
    pub graphs_with_pairs: usize,
    pub minimal: usize,
}

/// Generation, facet extraction and minimal elements in one call, writing
/// `candidates.g6`, `pairs.csv` and `minimal.csv` to `out_dir` when given.
pub fn run_pipeline(
    seeds: &[Graph],
    mode: JoinMode,
    source: &dyn FacetSource,
    out_dir: Option<&Path>,
) -> Result<(PipelineSummary, Vec<CandidatePair>), SearchError> {
    let candidates = generate_stretch_candidates(seeds, mode);
    let graphs: Vec<Graph> = candidates.into_iter().map(|c| c.graph).collect();
    let pairs = facet_pair_extraction(&graphs, source)?;
    let counts = pairs_per_graph(&pairs);
    let minimal = minimal_elements(&pairs);
    if let Some(dir) = out_dir {
        fs::create_dir_all(dir).map_err(io_err(dir))?;
        write_graph_stage(&dir.join("candidates.g6"), &graphs)?;
        write_pair_stage(&dir.join("pairs.csv"), &pairs)?;
        write_pair_stage(&dir.join("minimal.csv"), &minimal)?;
    }
    let summary = PipelineSummary {
        candidates: graphs.len(),
        pairs: pairs.len(),
        graphs_with_two_pairs: counts.values().filter(|&&c| c == 2).count(),
        graphs_with_pairs: counts.len(),
        minimal: minimal.len(),
    };
    Ok((summary, minimal))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn covers_of_two_vertices() {
        assert_eq!(two_covers(0b11, true), vec![(0b01, 0b10)]);
        assert_eq!(two_covers(0b11, false).len(), 5);
        assert!(two_covers(0b1, true).is_empty());
    }

    #[test]
    fn triangle_seed_gives_both_two_minimal_graphs() {
        let cands = generate_stretch_candidates(&[Graph::complete(3)], JoinMode::AnySubset);
        let forms: Vec<String> = cands.iter().map(|c| c.graph6.clone()).collect();
        for g in crate::rankbounds::two_minimal_graphs() {
            assert!(forms.contains(&canonical_form(&g)));
        }
        assert!(cands.iter().all(|c| c.graph.n() == 6));
    }

    #[test]
    fn closure_of_triangle() {
        let k3 = Graph::complete(3);
        assert_eq!(edge_subgraph_closure(&k3, &Inequality::all_ones(3, 1)), vec![canonical_form(&k3)]);
    }

    #[test]
    fn minimal_keeps_sparser() {
        let c5 = Graph::cycle(5);
        let mut chord = c5.clone();
        chord.add_edge(0, 2);
        let a = Inequality::all_ones(5, 2);
        let pairs = vec![CandidatePair::new(&chord, &a), CandidatePair::new(&c5, &a)];
        let min = minimal_elements(&pairs);
        assert_eq!(min.len(), 1);
        assert_eq!(min[0].graph.edge_count(), 5);
        assert_eq!(minimal_elements(&pairs[..1]).len(), 1);
    }
}
