//! Simple undirected graphs on at most 62 vertices and the operations used on
//! them: graph6 coding, deletion, destruction, stretching, canonical labeling
//! and structural predicates.
//!
//! Vertices are 0-based internally. Every text format (edge lists, traces,
//! reports) uses 1-based labels; [`Graph::from_edges_1based`] and
//! [`Graph::edges_1based`] perform the shift.

mod canon;
mod graph6;
mod structure;

use std::fmt;

use thiserror::Error;

pub use canon::{
    automorphism_orbits, canonical_form, canonical_form_colored, canonical_labeling, isomorphic, orbit_of,
};
pub use graph6::{graph6_decode, graph6_encode};
pub use structure::{
    all_cut_cliques, clique_number, components, has_cut_clique, is_bipartite, is_connected, is_perfect_small,
    is_vertex_transitive, max_weight_stable_set, stability_number, CutClique,
};

/// Largest supported vertex count (graph6 short form).
pub const MAX_VERTICES: usize = 62;

/// Errors raised by graph construction and graph operations.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum GraphError {
    /// A graph6 string is malformed.
    #[error("invalid graph6 string: {0}")]
    Graph6(String),
    /// Vertex index outside the graph.
    #[error("vertex {vertex} out of range for a graph on {n} vertices")]
    InvalidVertex { vertex: usize, n: usize },
    /// The graph is larger than the supported maximum.
    #[error("{0} vertices exceed the supported maximum of 62")]
    TooLarge(usize),
    /// A self-loop was requested.
    #[error("self-loop at vertex {0}")]
    SelfLoop(usize),
    /// Stretching parts do not cover the neighborhood.
    #[error("invalid stretch: {0}")]
    InvalidStretch(String),
    /// An edge-list text could not be parsed.
    #[error("malformed edge list at line {line}: {message}")]
    EdgeList { line: usize, message: String },
}

/// Simple undirected graph on vertices `0..n` stored as adjacency bit rows.
#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Graph {
    n: usize,
    adj: Vec<u64>,
}

/// Bit mask with the lowest `n` bits set.
pub fn full_mask(n: usize) -> u64 {
    if n >= 64 {
        u64::MAX
    } else {
        (1u64 << n) - 1
    }
}

/// Iterates over the set bits of a mask in increasing order.
pub fn bits(mut mask: u64) -> impl Iterator<Item = usize> {
    std::iter::from_fn(move || {
        if mask == 0 {
            None
        } else {
            let b = mask.trailing_zeros() as usize;
            mask &= mask - 1;
            Some(b)
        }
    })
}

/// Mask with the given vertices set.
pub fn mask_of(vertices: &[usize]) -> u64 {
    vertices.iter().fold(0, |m, &v| m | (1u64 << v))
}

impl Graph {
    /// Edgeless graph on `n` vertices.
    pub fn empty(n: usize) -> Self {
        assert!(n <= MAX_VERTICES, "at most {MAX_VERTICES} vertices are supported");
        Self { n, adj: vec![0; n] }
    }

    /// Complete graph on `n` vertices.
    pub fn complete(n: usize) -> Self {
        let mut g = Self::empty(n);
        for i in 0..n {
            g.adj[i] = full_mask(n) & !(1u64 << i);
        }
        g
    }

    /// Chordless cycle `1-2-…-n-1`.
    pub fn cycle(n: usize) -> Self {
        circulant(n, &[1])
    }

    /// Graph from 0-based edges.
    pub fn from_edges(n: usize, edges: &[(usize, usize)]) -> Result<Self, GraphError> {
        if n > MAX_VERTICES {
            return Err(GraphError::TooLarge(n));
        }
        let mut g = Self::empty(n);
        for &(u, v) in edges {
            g.try_add_edge(u, v)?;
        }
        Ok(g)
    }

    /// Graph from 1-based edges, for transcribed fixtures.
    pub fn from_edges_1based(n: usize, edges: &[(usize, usize)]) -> Result<Self, GraphError> {
        let shifted: Result<Vec<_>, _> =
            edges
                .iter()
                .map(|&(u, v)| {
                    if u == 0 || v == 0 {
                        Err(GraphError::InvalidVertex { vertex: 0, n })
                    } else {
                        Ok((u - 1, v - 1))
                    }
                })
                .collect();
        Self::from_edges(n, &shifted?)
    }

    /// Graph from an adjacency bit-row vector; rows must be symmetric and loop-free.
    pub fn from_adjacency(adj: Vec<u64>) -> Result<Self, GraphError> {
        let n = adj.len();
        if n > MAX_VERTICES {
            return Err(GraphError::TooLarge(n));
        }
        for (i, &row) in adj.iter().enumerate() {
            if row >> i & 1 == 1 {
                return Err(GraphError::SelfLoop(i));
            }
            if row & !full_mask(n) != 0 {
                return Err(GraphError::InvalidVertex { vertex: 63 - row.leading_zeros() as usize, n });
            }
            for j in bits(row) {
                if adj[j] >> i & 1 == 0 {
                    return Err(GraphError::EdgeList {
                        line: 0,
                        message: format!("adjacency not symmetric at ({i},{j})"),
                    });
                }
            }
        }
        Ok(Self { n, adj })
    }

    fn check_vertex(&self, v: usize) -> Result<(), GraphError> {
        if v < self.n {
            Ok(())
        } else {
            Err(GraphError::InvalidVertex { vertex: v, n: self.n })
        }
    }

    /// Adds the edge `{u, v}` (0-based), rejecting loops and bad vertices.
    pub fn try_add_edge(&mut self, u: usize, v: usize) -> Result<(), GraphError> {
        self.check_vertex(u)?;
        self.check_vertex(v)?;
        if u == v {
            return Err(GraphError::SelfLoop(u));
        }
        self.adj[u] |= 1 << v;
        self.adj[v] |= 1 << u;
        Ok(())
    }

    /// Adds the edge `{u, v}` (0-based); panics on invalid input.
    pub fn add_edge(&mut self, u: usize, v: usize) {
        self.try_add_edge(u, v).expect("valid edge");
    }

    /// Removes the edge `{u, v}` if present.
    pub fn remove_edge(&mut self, u: usize, v: usize) {
        self.adj[u] &= !(1 << v);
        self.adj[v] &= !(1 << u);
    }

    /// Vertex count.
    pub fn n(&self) -> usize {
        self.n
    }

    /// Mask of all vertices.
    pub fn vertex_mask(&self) -> u64 {
        full_mask(self.n)
    }

    /// True iff `{u, v}` is an edge.
    pub fn has_edge(&self, u: usize, v: usize) -> bool {
        self.adj[u] >> v & 1 == 1
    }

    /// Neighborhood of `v` as a bit mask.
    pub fn neighbors(&self, v: usize) -> u64 {
        self.adj[v]
    }

    /// Neighborhood of `v` as a sorted vertex list.
    pub fn neighbor_list(&self, v: usize) -> Vec<usize> {
        bits(self.adj[v]).collect()
    }

    /// Adjacency bit rows.
    pub fn adjacency(&self) -> &[u64] {
        &self.adj
    }

    /// Degree of `v`.
    pub fn degree(&self, v: usize) -> usize {
        self.adj[v].count_ones() as usize
    }

    /// Sorted degree list.
    pub fn degrees(&self) -> Vec<usize> {
        (0..self.n).map(|v| self.degree(v)).collect()
    }

    /// Minimum degree (0 for the null graph).
    pub fn min_degree(&self) -> usize {
        (0..self.n).map(|v| self.degree(v)).min().unwrap_or(0)
    }

    /// True iff every vertex has the same degree.
    pub fn is_regular(&self) -> bool {
        let d = self.degrees();
        d.windows(2).all(|w| w[0] == w[1])
    }

    /// Edge count.
    pub fn edge_count(&self) -> usize {
        self.adj.iter().map(|r| r.count_ones() as usize).sum::<usize>() / 2
    }

    /// Edges `(u, v)` with `u < v`, sorted lexicographically (0-based).
    pub fn edges(&self) -> Vec<(usize, usize)> {
        let mut out = Vec::with_capacity(self.edge_count());
        for u in 0..self.n {
            for v in bits(self.adj[u] >> (u + 1)) {
                out.push((u, u + 1 + v));
            }
        }
        out
    }

    /// Edges with 1-based labels.
    pub fn edges_1based(&self) -> Vec<(usize, usize)> {
        self.edges().into_iter().map(|(u, v)| (u + 1, v + 1)).collect()
    }

    /// True iff the vertex set in `mask` is a stable set.
    pub fn is_stable(&self, mask: u64) -> bool {
        bits(mask).all(|v| self.adj[v] & mask == 0)
    }

    /// True iff the vertex set in `mask` is a clique.
    pub fn is_clique(&self, mask: u64) -> bool {
        bits(mask).all(|v| (self.adj[v] | (1 << v)) & mask == mask)
    }

    /// Complement graph.
    pub fn complement(&self) -> Self {
        let full = self.vertex_mask();
        Self { n: self.n, adj: (0..self.n).map(|i| full & !self.adj[i] & !(1 << i)).collect() }
    }

    /// Relabeled copy where old vertex `v` becomes `perm[v]`.
    pub fn permute(&self, perm: &[usize]) -> Self {
        let mut adj = vec![0u64; self.n];
        for u in 0..self.n {
            let row = bits(self.adj[u]).fold(0u64, |m, v| m | (1 << perm[v]));
            adj[perm[u]] = row;
        }
        Self { n: self.n, adj }
    }

    /// Subgraph induced by the vertices of `mask`, relabeled in increasing order.
    pub fn induced_by_mask(&self, mask: u64) -> Self {
        let keep: Vec<usize> = bits(mask & self.vertex_mask()).collect();
        let mut pos = [usize::MAX; 64];
        for (i, &v) in keep.iter().enumerate() {
            pos[v] = i;
        }
        let adj = keep.iter().map(|&v| bits(self.adj[v] & mask).fold(0u64, |m, w| m | (1 << pos[w]))).collect();
        Self { n: keep.len(), adj }
    }

    /// Adds a new vertex adjacent to the vertices of `mask` (a 1-join).
    pub fn join_vertex(&self, mask: u64) -> Result<Self, GraphError> {
        if self.n + 1 > MAX_VERTICES {
            return Err(GraphError::TooLarge(self.n + 1));
        }
        if mask & !self.vertex_mask() != 0 {
            return Err(GraphError::InvalidVertex { vertex: 63 - mask.leading_zeros() as usize, n: self.n });
        }
        let mut g = self.clone();
        g.adj.push(0);
        g.n += 1;
        let new = self.n;
        for v in bits(mask) {
            g.add_edge(new, v);
        }
        Ok(g)
    }

    /// Parses the single-graph edge-list text format: `i j` per line (1-based),
    /// `#` comments allowed. The vertex count is the largest label unless an
    /// explicit `n <count>` line is present.
    pub fn parse_edge_list(text: &str) -> Result<Self, GraphError> {
        let mut edges = Vec::new();
        let mut n = None;
        for (lineno, raw) in text.lines().enumerate() {
            let line = raw.split('#').next().unwrap_or("").trim();
            if line.is_empty() {
                continue;
            }
            let fields: Vec<&str> = line.split_whitespace().collect();
            let err = |message: String| GraphError::EdgeList { line: lineno + 1, message };
            match fields.as_slice() {
                ["n", count] => n = Some(count.parse::<usize>().map_err(|e| err(e.to_string()))?),
                [a, b] => {
                    let a = a.parse::<usize>().map_err(|e| err(e.to_string()))?;
                    let b = b.parse::<usize>().map_err(|e| err(e.to_string()))?;
                    edges.push((a, b));
                }
                _ => return Err(err(format!("expected two labels, found {line:?}"))),
            }
        }
        let n = n.unwrap_or_else(|| edges.iter().map(|&(a, b)| a.max(b)).max().unwrap_or(0));
        Self::from_edges_1based(n, &edges)
    }

    /// Edge-list text for this graph (1-based, with an explicit `n` line).
    pub fn to_edge_list(&self) -> String {
        let mut out = format!("n {}\n", self.n);
        for (u, v) in self.edges_1based() {
            out.push_str(&format!("{u} {v}\n"));
        }
        out
    }
}

impl fmt::Debug for Graph {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let edges: Vec<String> = self.edges_1based().iter().map(|(u, v)| format!("{u}-{v}")).collect();
        write!(f, "Graph(n={}, [{}])", self.n, edges.join(" "))
    }
}

/// A named graph read from a collection file, with optional attached lines.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct NamedGraph {
    /// Name from the `graph <name> <n>` header.
    pub name: String,
    /// The graph.
    pub graph: Graph,
    /// Non-edge lines following the header (for example `ineq ...`).
    pub attributes: Vec<String>,
}

/// Parses a collection file: blocks introduced by `graph <name> <n>` followed
/// by `i j` edge lines (1-based); other non-numeric lines are kept as
/// attributes of the current block.
pub fn parse_graph_collection(text: &str) -> Result<Vec<NamedGraph>, GraphError> {
    type Block = (String, usize, Vec<(usize, usize)>, Vec<String>);
    let mut out: Vec<Block> = Vec::new();
    for (lineno, raw) in text.lines().enumerate() {
        let line = raw.split('#').next().unwrap_or("").trim();
        if line.is_empty() {
            continue;
        }
        let err = |message: String| GraphError::EdgeList { line: lineno + 1, message };
        let fields: Vec<&str> = line.split_whitespace().collect();
        if fields[0] == "graph" {
            if fields.len() != 3 {
                return Err(err("expected `graph <name> <n>`".into()));
            }
            let n = fields[2].parse::<usize>().map_err(|e| err(e.to_string()))?;
            out.push((fields[1].to_string(), n, Vec::new(), Vec::new()));
            continue;
        }
        let Some(current) = out.last_mut() else {
            return Err(err("edge line before any graph header".into()));
        };
        match (fields.len(), fields[0].parse::<usize>(), fields.get(1).map(|f| f.parse::<usize>())) {
            (2, Ok(a), Some(Ok(b))) => current.2.push((a, b)),
            _ => current.3.push(line.to_string()),
        }
    }
    out.into_iter()
        .map(|(name, n, edges, attributes)| {
            Ok(NamedGraph { name, graph: Graph::from_edges_1based(n, &edges)?, attributes })
        })
        .collect()
}

/// Circulant graph `C_n^S` on vertices `1..n` (0-based internally): `i ~ j`
/// iff `(j − i) mod n` or `(i − j) mod n` lies in `offsets`.
pub fn circulant(n: usize, offsets: &[usize]) -> Graph {
    let mut g = Graph::empty(n);
    for i in 0..n {
        for &s in offsets {
            let j = (i + s) % n;
            if j != i {
                g.add_edge(i, j);
            }
        }
    }
    g
}

/// Subgraph induced by `vertices` (0-based), relabeled compactly in order.
pub fn induced_subgraph(g: &Graph, vertices: &[usize]) -> Result<Graph, GraphError> {
    for &v in vertices {
        g.check_vertex(v)?;
    }
    Ok(g.induced_by_mask(mask_of(vertices)))
}

/// Deletes `vertices` (0-based); equal to the subgraph induced by the rest.
pub fn delete_vertices(g: &Graph, vertices: &[usize]) -> Result<Graph, GraphError> {
    for &v in vertices {
        g.check_vertex(v)?;
    }
    Ok(g.induced_by_mask(g.vertex_mask() & !mask_of(vertices)))
}

/// Destroys `v`: deletes `v` together with its whole neighborhood.
pub fn destroy_vertex(g: &Graph, v: usize) -> Result<Graph, GraphError> {
    g.check_vertex(v)?;
    Ok(g.induced_by_mask(g.vertex_mask() & !(g.neighbors(v) | (1 << v))))
}

/// A `k`-stretching of vertex `vertex` with parts `A_1..A_k` of its neighborhood.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct StretchSpec {
    /// The stretched vertex (0-based).
    pub vertex: usize,
    /// Neighborhood parts as bit masks over the original vertex set.
    pub parts: Vec<u64>,
}

impl StretchSpec {
    /// Spec from parts given as 0-based vertex lists.
    pub fn new(vertex: usize, parts: &[&[usize]]) -> Self {
        Self { vertex, parts: parts.iter().map(|p| mask_of(p)).collect() }
    }

    /// Number of parts `k`.
    pub fn k(&self) -> usize {
        self.parts.len()
    }

    /// True iff every part is nonempty and a proper subset of `Γ(v)`.
    pub fn is_proper(&self, g: &Graph) -> bool {
        let nb = g.neighbors(self.vertex);
        self.parts.iter().all(|&p| p != 0 && p != nb && p & !nb == 0)
    }
}

/// Correspondence between the vertices of a stretched graph and the original.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct StretchProvenance {
    /// Index of `v_0` (it keeps the original index of `v`).
    pub v0: usize,
    /// Indices of `v_1..v_k` (appended after the original vertices).
    pub copies: Vec<usize>,
}

/// Replaces `v` by `v_0, v_1, …, v_k`: `v_0` keeps `v`'s index and is adjacent
/// only to `v_1..v_k`; `v_j` is appended as vertex `n − 1 + j` and is adjacent
/// to `v_0` and to `A_j`.
pub fn stretch_vertex(g: &Graph, spec: &StretchSpec) -> Result<(Graph, StretchProvenance), GraphError> {
    g.check_vertex(spec.vertex)?;
    let v = spec.vertex;
    let nb = g.neighbors(v);
    let union = spec.parts.iter().fold(0u64, |m, &p| m | p);
    if union != nb {
        return Err(GraphError::InvalidStretch(format!(
            "parts cover {:?}, neighborhood is {:?}",
            bits(union).map(|x| x + 1).collect::<Vec<_>>(),
            bits(nb).map(|x| x + 1).collect::<Vec<_>>()
        )));
    }
    let k = spec.k();
    if g.n() + k > MAX_VERTICES {
        return Err(GraphError::TooLarge(g.n() + k));
    }
    let mut adj = g.adjacency().to_vec();
    for u in bits(nb) {
        adj[u] &= !(1 << v);
    }
    adj[v] = 0;
    adj.resize(g.n() + k, 0);
    let mut out = Graph { n: g.n() + k, adj };
    let mut copies = Vec::with_capacity(k);
    for (j, &part) in spec.parts.iter().enumerate() {
        let c = g.n() + j;
        copies.push(c);
        out.add_edge(v, c);
        for u in bits(part) {
            out.add_edge(c, u);
        }
    }
    Ok((out, StretchProvenance { v0: v, copies }))
}

/// Bookkeeping for a member of a stretched-clique family.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct StretchedCliqueSpec {
    /// Base clique size.
    pub n: usize,
    /// Stretched original vertices (0-based, in stretching order).
    pub stretched: Vec<usize>,
    /// The resulting graph.
    pub graph: Graph,
    /// For each original vertex, its associated vertices in `graph`:
    /// `[v]` if unstretched, `[v0, v1, v2]` if 2-stretched.
    pub associated: Vec<Vec<usize>>,
}

impl StretchedCliqueSpec {
    /// Number of stretched vertices `d`.
    pub fn d(&self) -> usize {
        self.stretched.len()
    }

    /// Edges between the non-hub associated vertices of originals `i` and `j`.
    pub fn cross_edges(&self, i: usize, j: usize) -> usize {
        let side = |v: usize| -> Vec<usize> {
            let a = &self.associated[v];
            if a.len() == 1 {
                a.clone()
            } else {
                a[1..].to_vec()
            }
        };
        let (si, sj) = (side(i), side(j));
        si.iter().flat_map(|&a| sj.iter().map(move |&b| (a, b))).filter(|&(a, b)| self.graph.has_edge(a, b)).count()
    }

    /// True iff every pair of stretched vertices has exactly one cross edge.
    pub fn is_hat(&self) -> bool {
        let d = &self.stretched;
        (0..d.len()).all(|a| (a + 1..d.len()).all(|b| self.cross_edges(d[a], d[b]) == 1))
    }

    /// True iff the member has the minimum possible edge count `n(n−1)/2 + 2d`.
    pub fn is_sparse(&self) -> bool {
        self.graph.edge_count() == self.n * (self.n - 1) / 2 + 2 * self.d()
    }
}
