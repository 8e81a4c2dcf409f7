//! Rule-based upper bounds on the LS+-rank with replayable proof traces.
//!
//! Axioms: the empty and bipartite graphs have rank 0, perfect graphs rank
//! at most 1, and every graph rank at most `⌊n/3⌋`. Composite rules:
//! a clique separator reduces to the larger side, destroying every vertex
//! gives `max_i r(G ⊖ i) + 1`, and deleting some vertex gives
//! `min_i r(G − i) + 1`. Two named auxiliary rules encode the facts that a
//! `3ℓ`-vertex graph of minimum degree at least 3 is not ℓ-minimal and that
//! the only 6-vertex graphs of rank 2 are the two known 2-minimal graphs.
//! Callers may register further assumptions `r(H) ≤ b`.

use std::collections::{BTreeMap, HashMap};
use std::fmt;
use std::sync::{Arc, Mutex};

use num_rational::BigRational;
use rayon::prelude::*;
use serde::Serialize;

use crate::graphs::{
    bits, canonical_form, canonical_labeling, destroy_vertex, graph6_decode, graph6_encode, has_cut_clique,
    induced_subgraph, is_bipartite, is_perfect_small, is_vertex_transitive, Graph,
};
use crate::polytope::frac_max_all_ones;

/// Default recursion budget through destruction and deletion.
pub const DEFAULT_DEPTH: u32 = 3;

/// Names of the deduction rules.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize)]
#[serde(rename_all = "SCREAMING_SNAKE_CASE")]
pub enum Rule {
    Bipartite,
    Perfect,
    VertexCount,
    CutClique,
    Destruction,
    Deletion,
    MinDegreeNotMinimal,
    NotTwoMinimal,
    Assumed,
}

impl Rule {
    /// Printable rule name.
    pub fn as_str(self) -> &'static str {
        match self {
            Rule::Bipartite => "BIPARTITE",
            Rule::Perfect => "PERFECT",
            Rule::VertexCount => "VERTEX_COUNT",
            Rule::CutClique => "CUT_CLIQUE",
            Rule::Destruction => "DESTRUCTION",
            Rule::Deletion => "DELETION",
            Rule::MinDegreeNotMinimal => "MIN_DEGREE_NOT_MINIMAL",
            Rule::NotTwoMinimal => "NOT_TWO_MINIMAL",
            Rule::Assumed => "ASSUMED",
        }
    }

    /// True for rules whose bound needs no children.
    pub fn is_leaf(self) -> bool {
        !matches!(self, Rule::CutClique | Rule::Destruction | Rule::Deletion)
    }
}

impl fmt::Display for Rule {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

/// One node of a derivation, on the canonically relabeled graph.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct ProofTrace {
    pub rule: Rule,
    /// Canonical graph6 of the graph this node bounds.
    pub graph6: String,
    pub n: usize,
    pub bound: usize,
    /// Deleted vertex (deletion) or clique (cut clique), 1-based canonical labels.
    pub vertices: Vec<usize>,
    /// Free-form note (assumption name).
    #[serde(skip_serializing_if = "String::is_empty")]
    pub note: String,
    pub children: Vec<Arc<ProofTrace>>,
}

impl ProofTrace {
    fn leaf(rule: Rule, g: &Graph, bound: usize) -> Self {
        Self {
            rule,
            graph6: graph6_encode(g),
            n: g.n(),
            bound,
            vertices: Vec::new(),
            note: String::new(),
            children: Vec::new(),
        }
    }

    /// Number of nodes in the tree.
    pub fn size(&self) -> usize {
        1 + self.children.iter().map(|c| c.size()).sum::<usize>()
    }

    /// Number of destruction and deletion steps on the deepest branch.
    pub fn depth_used(&self) -> u32 {
        let own = u32::from(matches!(self.rule, Rule::Destruction | Rule::Deletion));
        own + self.children.iter().map(|c| c.depth_used()).max().unwrap_or(0)
    }

    /// Indented human-readable rendering.
    pub fn render(&self) -> String {
        let mut out = String::new();
        self.render_into(0, &mut out);
        out
    }

    fn render_into(&self, indent: usize, out: &mut String) {
        let extra = match self.rule {
            Rule::Deletion => format!(" delete {:?}", self.vertices),
            Rule::CutClique => format!(" clique {:?}", self.vertices),
            Rule::Assumed => format!(" [{}]", self.note),
            _ => String::new(),
        };
        out.push_str(&format!(
            "{}r+ <= {} by {}{} on {} (n={})\n",
            "  ".repeat(indent),
            self.bound,
            self.rule,
            extra,
            self.graph6,
            self.n
        ));
        for c in &self.children {
            c.render_into(indent + 1, out);
        }
    }
}

/// The two 6-vertex graphs of LS+-rank 2.
pub fn two_minimal_graphs() -> [Graph; 2] {
    let base = [(1, 2), (2, 3), (1, 3), (4, 5), (5, 6), (3, 4), (1, 6), (2, 6)];
    let first = Graph::from_edges_1based(6, &base).expect("valid edges");
    let mut second = first.clone();
    second.add_edge(1, 3);
    [first, second]
}

fn relabel_canonically(g: &Graph) -> Graph {
    g.permute(&canonical_labeling(g, None))
}

/// Memoized deduction engine with an optional set of assumptions.
pub struct RankEngine {
    depth: u32,
    assumptions: HashMap<String, (usize, String)>,
    two_minimal: [String; 2],
    memo: Mutex<HashMap<(String, u32), Arc<ProofTrace>>>,
}

impl RankEngine {
    /// Engine with the given destruction/deletion budget.
    pub fn new(depth: u32) -> Self {
        let [a, b] = two_minimal_graphs();
        Self {
            depth,
            assumptions: HashMap::new(),
            two_minimal: [canonical_form(&a), canonical_form(&b)],
            memo: Mutex::new(HashMap::new()),
        }
    }

    /// Registers `r(H) ≤ bound` for every graph isomorphic to `h`.
    pub fn assume(&mut self, h: &Graph, bound: usize, name: &str) {
        self.assumptions.insert(canonical_form(h), (bound, name.to_string()));
        self.memo.get_mut().expect("memo lock").clear();
    }

    /// The least bound the rules derive for `g` within the budget.
    pub fn bound(&self, g: &Graph) -> Arc<ProofTrace> {
        self.bound_at(&relabel_canonically(g), self.depth)
    }

    fn bound_at(&self, g: &Graph, depth: u32) -> Arc<ProofTrace> {
        let g6 = graph6_encode(g);
        if let Some(t) = self.memo.lock().expect("memo lock").get(&(g6.clone(), depth)) {
            return t.clone();
        }
        let t = Arc::new(self.derive(g, depth));
        self.memo.lock().expect("memo lock").insert((g6, depth), t.clone());
        t
    }

    fn child(&self, h: &Graph, depth: u32) -> Arc<ProofTrace> {
        self.bound_at(&relabel_canonically(h), depth)
    }

    fn derive(&self, g: &Graph, depth: u32) -> ProofTrace {
        let n = g.n();
        if is_bipartite(g) {
            return ProofTrace::leaf(Rule::Bipartite, g, 0);
        }
        // every non-bipartite graph has rank at least 1, so 1 cannot be improved
        if is_perfect_small(g) {
            return ProofTrace::leaf(Rule::Perfect, g, 1);
        }
        let mut best = ProofTrace::leaf(Rule::VertexCount, g, n / 3);
        let g6 = graph6_encode(g);
        if let Some((b, name)) = self.assumptions.get(&g6) {
            if *b < best.bound {
                best = ProofTrace { note: name.clone(), ..ProofTrace::leaf(Rule::Assumed, g, *b) };
            }
        }
        if let Some(b) = self.aux_bound(g) {
            if b.1 < best.bound {
                best = ProofTrace::leaf(b.0, g, b.1);
            }
        }
        if best.bound <= 1 {
            return best;
        }
        if let Some(cut) = has_cut_clique(g) {
            let side = |s: &[usize]| {
                let mut vs: Vec<usize> = s.iter().chain(&cut.clique).copied().collect();
                vs.sort_unstable();
                induced_subgraph(g, &vs).expect("vertices in range")
            };
            let a = self.child(&side(&cut.s1), depth);
            let b = self.child(&side(&cut.s2), depth);
            let bound = a.bound.max(b.bound);
            if bound < best.bound {
                best = ProofTrace {
                    vertices: cut.clique.iter().map(|v| v + 1).collect(),
                    children: vec![a, b],
                    ..ProofTrace::leaf(Rule::CutClique, g, bound)
                };
            }
            if best.bound <= 1 {
                return best;
            }
        }
        if depth == 0 {
            return best;
        }
        // destruction: every vertex must be covered, so abort once a child is too large
        let mut children: BTreeMap<String, Arc<ProofTrace>> = BTreeMap::new();
        let mut worst = 0;
        let mut feasible = true;
        for v in 0..n {
            let t = self.child(&destroy_vertex(g, v).expect("vertex in range"), depth - 1);
            worst = worst.max(t.bound);
            if worst + 1 >= best.bound {
                feasible = false;
                break;
            }
            children.entry(t.graph6.clone()).or_insert(t);
        }
        if feasible {
            best = ProofTrace {
                children: children.into_values().collect(),
                ..ProofTrace::leaf(Rule::Destruction, g, worst + 1)
            };
            if best.bound <= 1 {
                return best;
            }
        }
        for v in 0..n {
            let rest: Vec<usize> = (0..n).filter(|&w| w != v).collect();
            let t = self.child(&induced_subgraph(g, &rest).expect("vertices in range"), depth - 1);
            if t.bound + 1 < best.bound {
                best =
                    ProofTrace { vertices: vec![v + 1], children: vec![t], ..ProofTrace::leaf(Rule::Deletion, g, 0) };
                best.bound = best.children[0].bound + 1;
                if best.bound <= 1 {
                    break;
                }
            }
        }
        best
    }

    /// Auxiliary structural rules.
    fn aux_bound(&self, g: &Graph) -> Option<(Rule, usize)> {
        let n = g.n();
        if n == 6 && !self.two_minimal.contains(&graph6_encode(g)) {
            return Some((Rule::NotTwoMinimal, 1));
        }
        if n.is_multiple_of(3) && n >= 6 && g.min_degree() >= 3 {
            return Some((Rule::MinDegreeNotMinimal, n / 3 - 1));
        }
        None
    }
}

/// Convenience wrapper: least derivable bound and its trace.
pub fn rank_upper_bound(g: &Graph, depth: u32) -> (usize, Arc<ProofTrace>) {
    let t = RankEngine::new(depth).bound(g);
    (t.bound, t)
}

/// A trace node whose recorded bound does not follow from its rule.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ReplayError {
    pub graph6: String,
    pub message: String,
}

impl fmt::Display for ReplayError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}: {}", self.graph6, self.message)
    }
}

/// Re-checks every node of a trace against its recorded graph. Assumption
/// leaves are accepted when `assumptions` maps their canonical form to a
/// bound no larger than recorded.
pub fn replay(trace: &ProofTrace, assumptions: &HashMap<String, usize>) -> Result<(), ReplayError> {
    let err = |m: String| Err(ReplayError { graph6: trace.graph6.clone(), message: m });
    let g = match graph6_decode(&trace.graph6) {
        Ok(g) => g,
        Err(e) => return err(e.to_string()),
    };
    if g.n() != trace.n {
        return err("vertex count mismatch".into());
    }
    let child_forms: Vec<String> =
        trace.children.iter().map(|c| canonical_form(&graph6_decode(&c.graph6).expect("child graph6"))).collect();
    let max_child = trace.children.iter().map(|c| c.bound).max().unwrap_or(0);
    let ok = match trace.rule {
        Rule::Bipartite => is_bipartite(&g) && trace.bound == 0,
        Rule::Perfect => is_perfect_small(&g) && trace.bound == 1,
        Rule::VertexCount => trace.bound == g.n() / 3,
        Rule::NotTwoMinimal => {
            let [a, b] = two_minimal_graphs();
            let c = canonical_form(&g);
            g.n() == 6 && c != canonical_form(&a) && c != canonical_form(&b) && trace.bound == 1
        }
        Rule::MinDegreeNotMinimal => {
            g.n() % 3 == 0 && g.n() >= 6 && g.min_degree() >= 3 && trace.bound == g.n() / 3 - 1
        }
        Rule::Assumed => assumptions.get(&canonical_form(&g)).is_some_and(|&b| b <= trace.bound),
        Rule::CutClique => {
            let k: Vec<usize> = trace.vertices.iter().map(|v| v - 1).collect();
            let kmask = k.iter().fold(0u64, |m, v| m | 1 << v);
            let comps = crate::graphs::components(&g, g.vertex_mask() & !kmask);
            trace.children.len() == 2
                && g.is_clique(kmask)
                && comps.len() >= 2
                && {
                    let s1: Vec<usize> = bits(comps[0] | kmask).collect();
                    let s2: Vec<usize> = bits((g.vertex_mask() & !comps[0]) | kmask).collect();
                    let f1 = canonical_form(&induced_subgraph(&g, &s1).expect("range"));
                    let f2 = canonical_form(&induced_subgraph(&g, &s2).expect("range"));
                    f1 == child_forms[0] && f2 == child_forms[1]
                }
                && trace.bound == max_child
        }
        Rule::Destruction => {
            (0..g.n()).all(|v| child_forms.contains(&canonical_form(&destroy_vertex(&g, v).expect("range"))))
                && trace.bound == max_child + 1
        }
        Rule::Deletion => {
            trace.vertices.len() == 1
                && trace.children.len() == 1
                && {
                    let v = trace.vertices[0] - 1;
                    let rest: Vec<usize> = (0..g.n()).filter(|&w| w != v).collect();
                    canonical_form(&induced_subgraph(&g, &rest).expect("range")) == child_forms[0]
                }
                && trace.bound == max_child + 1
        }
    };
    if !ok {
        return err(format!("rule {} does not yield bound {}", trace.rule, trace.bound));
    }
    for c in &trace.children {
        replay(c, assumptions)?;
    }
    Ok(())
}

/// Bounds on `r₊(G)` gathered from certificates (lower) and rules (upper).
#[derive(Debug, Clone, Default, PartialEq, Eq, Serialize)]
pub struct RankInterval {
    pub lower: Option<usize>,
    pub upper: Option<usize>,
    /// Short labels of where each bound came from.
    pub sources: Vec<String>,
}

impl RankInterval {
    /// Interval with only a rule-derived upper bound.
    pub fn from_trace(t: &ProofTrace) -> Self {
        Self { lower: None, upper: Some(t.bound), sources: vec![format!("upper: {}", t.rule)] }
    }

    /// Records a certificate-implied lower bound.
    pub fn with_lower(mut self, lower: usize, source: &str) -> Self {
        self.lower = Some(self.lower.map_or(lower, |l| l.max(lower)));
        self.sources.push(format!("lower: {source}"));
        self
    }

    /// False when a lower bound exceeds the upper bound.
    pub fn is_consistent(&self) -> bool {
        match (self.lower, self.upper) {
            (Some(l), Some(u)) => l <= u,
            _ => true,
        }
    }
}

/// The one-step argument that settles a vertex-transitive graph, checked on vertex 0.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize)]
#[serde(rename_all = "SCREAMING_SNAKE_CASE")]
pub enum VtBucket {
    /// `G` is bipartite: rank 0.
    Bipartite,
    /// `G ⊖ v` is bipartite: rank at most 1.
    DestructionBipartite,
    /// `G ⊖ v` is perfect: rank at most 2.
    DestructionPerfect,
    /// None of the above.
    Other,
}

/// The first applicable one-step argument for `g`, testing vertex 0.
pub fn vt_bucket(g: &Graph) -> VtBucket {
    if is_bipartite(g) {
        return VtBucket::Bipartite;
    }
    if g.n() == 0 {
        return VtBucket::Other;
    }
    let h = destroy_vertex(g, 0).expect("vertex in range");
    if is_bipartite(&h) {
        return VtBucket::DestructionBipartite;
    }
    if is_perfect_small(&h) {
        return VtBucket::DestructionPerfect;
    }
    VtBucket::Other
}

/// Admissible degrees `[3, n + 2 − 3ℓ]` of a `k`-regular vertex-transitive
/// graph on `n` vertices with rank `ℓ ≥ 2`; `None` when the range is empty.
pub fn vt_degree_filter(n: usize, ell: usize) -> Option<(usize, usize)> {
    assert!(ell >= 2, "the degree filter needs ℓ ≥ 2");
    let hi = (n + 2).checked_sub(3 * ell)?;
    (hi >= 3).then_some((3, hi))
}

/// One classified catalog entry.
#[derive(Debug, Clone, Serialize)]
pub struct VtRow {
    /// 1-based position in the catalog.
    pub index: usize,
    pub graph6: String,
    pub n: usize,
    pub degree: Option<usize>,
    pub vertex_transitive: bool,
    /// Whether the degree lies in the admissible range for rank ℓ.
    pub degree_admissible: bool,
    pub bound: usize,
    pub rule: Rule,
    #[serde(skip)]
    pub trace: Option<Arc<ProofTrace>>,
}

/// Classification of a whole catalog.
#[derive(Debug, Clone, Serialize)]
pub struct VtClassification {
    pub rows: Vec<VtRow>,
    /// Unparseable lines as (line number, message).
    pub errors: Vec<(usize, String)>,
    /// Count of rows per root rule.
    pub rule_counts: BTreeMap<String, usize>,
}

/// Bounds every graph of a newline-separated graph6 catalog.
pub fn classify_vt_candidates(catalog: &str, ell: usize, depth: u32) -> VtClassification {
    let engine = RankEngine::new(depth);
    let mut errors = Vec::new();
    let mut parsed = Vec::new();
    for (i, line) in catalog.lines().enumerate() {
        let s = line.trim();
        if s.is_empty() || s.starts_with('#') {
            continue;
        }
        match graph6_decode(s) {
            Ok(g) => parsed.push((i + 1, s.to_string(), g)),
            Err(e) => errors.push((i + 1, e.to_string())),
        }
    }
    let rows: Vec<VtRow> = parsed
        .par_iter()
        .enumerate()
        .map(|(k, (_, s, g))| {
            let t = engine.bound(g);
            let degree = (g.n() > 0 && g.is_regular()).then(|| g.degree(0));
            let admissible = match (degree, vt_degree_filter(g.n(), ell.max(2))) {
                (Some(d), Some((lo, hi))) => (lo..=hi).contains(&d),
                _ => false,
            };
            VtRow {
                index: k + 1,
                graph6: s.clone(),
                n: g.n(),
                degree,
                vertex_transitive: is_vertex_transitive(g),
                degree_admissible: admissible,
                bound: t.bound,
                rule: t.rule,
                trace: Some(t),
            }
        })
        .collect();
    let mut rule_counts = BTreeMap::new();
    for r in &rows {
        *rule_counts.entry(r.rule.as_str().to_string()).or_insert(0) += 1;
    }
    VtClassification { rows, errors, rule_counts }
}

/// Which case of the α-bound fired.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub enum AlphaCase {
    /// `α_{LS+}(G) ≤ n − k`.
    MinDegree,
    /// `α_{LS+}(G) ≤ (n − k + 1)/2`, valid when `max{ēᵀx : x ∈ FRAC(G ⊖ i)} ≤ |V(G ⊖ i)|/2` for all `i`.
    Destruction,
}

/// Bounds on `α_{LS+}(G)` from the minimum degree `k`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct AlphaBound {
    pub min_degree: usize,
    /// `n − k`.
    pub case_i: BigRational,
    /// `(n − k + 1)/2` when its premise holds.
    pub case_ii: Option<BigRational>,
    /// The smaller applicable value.
    pub best: BigRational,
    pub case: AlphaCase,
}

/// Tightest applicable bound on `α_{LS+}(G)`.
pub fn alpha_ls1_bound(g: &Graph) -> AlphaBound {
    let n = g.n();
    let k = g.min_degree();
    let case_i = BigRational::from_integer(((n - k) as i64).into());
    let premise = (0..n).all(|i| {
        let h = destroy_vertex(g, i).expect("vertex in range");
        let half = BigRational::new((h.n() as i64).into(), 2.into());
        frac_max_all_ones(&h).expect("FRAC is bounded") <= half
    });
    let case_ii = premise.then(|| BigRational::new(((n - k + 1) as i64).into(), 2.into()));
    let (best, case) = match &case_ii {
        Some(v) if *v < case_i => (v.clone(), AlphaCase::Destruction),
        _ => (case_i.clone(), AlphaCase::MinDegree),
    };
    AlphaBound { min_degree: k, case_i, case_ii, best, case }
}
