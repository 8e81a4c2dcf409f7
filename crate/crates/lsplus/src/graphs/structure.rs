//! Structural predicates and invariants: bipartiteness, connectivity,
//! stability and clique numbers, perfection, vertex-transitivity and clique
//! separators.

use super::{bits, orbit_of, Graph};

/// True iff `g` has a proper 2-coloring (BFS over each component).
pub fn is_bipartite(g: &Graph) -> bool {
    let n = g.n();
    let mut color = vec![u8::MAX; n];
    for s in 0..n {
        if color[s] != u8::MAX {
            continue;
        }
        color[s] = 0;
        let mut queue = vec![s];
        while let Some(v) = queue.pop() {
            for w in bits(g.neighbors(v)) {
                if color[w] == u8::MAX {
                    color[w] = 1 - color[v];
                    queue.push(w);
                } else if color[w] == color[v] {
                    return false;
                }
            }
        }
    }
    true
}

/// Connected components of the subgraph induced by `mask`, each as a mask,
/// ordered by their smallest vertex.
pub fn components(g: &Graph, mask: u64) -> Vec<u64> {
    let mut left = mask;
    let mut out = Vec::new();
    while left != 0 {
        let start = left & left.wrapping_neg();
        let mut comp = start;
        let mut frontier = start;
        while frontier != 0 {
            let mut next = 0;
            for v in bits(frontier) {
                next |= g.neighbors(v) & mask;
            }
            frontier = next & !comp;
            comp |= next;
        }
        out.push(comp);
        left &= !comp;
    }
    out
}

/// True iff `g` is connected (the null graph counts as connected).
pub fn is_connected(g: &Graph) -> bool {
    components(g, g.vertex_mask()).len() <= 1
}

/// Largest clique contained in `cand`, by branch and bound on bit rows.
fn max_clique_in(adj: &[u64], cand: u64, current: u32, best: &mut u32) {
    if cand == 0 {
        *best = (*best).max(current);
        return;
    }
    if current + cand.count_ones() <= *best {
        return;
    }
    let mut p = cand;
    while p != 0 {
        if current + p.count_ones() <= *best {
            return;
        }
        let v = p.trailing_zeros() as usize;
        p &= !(1 << v);
        max_clique_in(adj, p & adj[v], current + 1, best);
    }
}

/// Clique number ω(G).
pub fn clique_number(g: &Graph) -> usize {
    let mut best = 0;
    max_clique_in(g.adjacency(), g.vertex_mask(), 0, &mut best);
    best as usize
}

/// Stability number α(G).
pub fn stability_number(g: &Graph) -> usize {
    clique_number(&g.complement())
}

/// Maximum of `Σ_{v∈S} weights[v]` over stable sets `S` (the empty set counts),
/// with a maximizing set as a mask.
pub fn max_weight_stable_set(g: &Graph, weights: &[i64]) -> (i64, u64) {
    assert_eq!(weights.len(), g.n(), "one weight per vertex");
    let positive = bits(g.vertex_mask()).filter(|&v| weights[v] > 0).fold(0u64, |m, v| m | 1 << v);
    let mut best = (0i64, 0u64);
    fn go(g: &Graph, w: &[i64], cand: u64, acc: i64, set: u64, best: &mut (i64, u64)) {
        if acc > best.0 {
            *best = (acc, set);
        }
        if cand == 0 {
            return;
        }
        let bound: i64 = bits(cand).map(|v| w[v]).sum();
        if acc + bound <= best.0 {
            return;
        }
        let v = cand.trailing_zeros() as usize;
        go(g, w, cand & !(1 << v) & !g.neighbors(v), acc + w[v], set | 1 << v, best);
        go(g, w, cand & !(1 << v), acc, set, best);
    }
    go(g, weights, positive, 0, 0, &mut best);
    best
}

/// True iff the graph given by `adj` has an induced odd cycle of length ≥ 5.
fn has_odd_hole(adj: &[u64]) -> bool {
    let n = adj.len();
    fn extend(adj: &[u64], path: &mut Vec<usize>, blocked: u64, allowed: u64) -> bool {
        let k = path.len() - 1;
        let last = path[k];
        let p0 = path[0];
        for w in bits(adj[last] & allowed & !blocked) {
            if adj[p0] >> w & 1 == 1 {
                if k >= 3 && k % 2 == 1 {
                    return true;
                }
                continue;
            }
            // `last` becomes interior, so its other neighbors would be chords
            let next_blocked = blocked | adj[last] | 1 << w;
            path.push(w);
            let found = extend(adj, path, next_blocked, allowed);
            path.pop();
            if found {
                return true;
            }
        }
        false
    }
    for s in 0..n {
        let allowed = !((1u64 << (s + 1)) - 1) & ((1u64 << n) - 1);
        for p1 in bits(adj[s] & allowed) {
            let mut path = vec![s, p1];
            let blocked = (1 << s) | (1 << p1);
            if extend(adj, &mut path, blocked, allowed) {
                return true;
            }
        }
    }
    false
}

/// Perfection test by exhaustive search for odd holes in `G` and its complement.
pub fn is_perfect_small(g: &Graph) -> bool {
    !has_odd_hole(g.adjacency()) && !has_odd_hole(g.complement().adjacency())
}

/// True iff Aut(G) acts transitively on the vertices.
pub fn is_vertex_transitive(g: &Graph) -> bool {
    g.n() == 0 || (g.is_regular() && orbit_of(g, 0) == g.vertex_mask())
}

/// A clique separator `K` with the two sides of the split.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CutClique {
    /// The clique (0-based, sorted).
    pub clique: Vec<usize>,
    /// The component of `G − K` containing its smallest vertex.
    pub s1: Vec<usize>,
    /// All remaining vertices of `G − K`.
    pub s2: Vec<usize>,
}

fn cut_for(g: &Graph, clique: u64) -> Option<CutClique> {
    let rest = g.vertex_mask() & !clique;
    let comps = components(g, rest);
    if comps.len() < 2 {
        return None;
    }
    Some(CutClique {
        clique: bits(clique).collect(),
        s1: bits(comps[0]).collect(),
        s2: bits(rest & !comps[0]).collect(),
    })
}

/// Visits cliques of exactly `size` vertices in lexicographic order until `f` returns true.
fn cliques_of_size(g: &Graph, size: usize, f: &mut dyn FnMut(u64) -> bool) -> bool {
    fn go(g: &Graph, cand: u64, cur: u64, left: usize, f: &mut dyn FnMut(u64) -> bool) -> bool {
        if left == 0 {
            return f(cur);
        }
        if (cand.count_ones() as usize) < left {
            return false;
        }
        for v in bits(cand) {
            let higher = cand & !((1u64 << (v + 1)) - 1);
            if go(g, higher & g.neighbors(v), cur | 1 << v, left - 1, f) {
                return true;
            }
        }
        false
    }
    go(g, g.vertex_mask(), 0, size, f)
}

/// A clique separator with the fewest vertices, ties broken lexicographically
/// on the sorted vertex list. The empty clique separates a disconnected graph.
pub fn has_cut_clique(g: &Graph) -> Option<CutClique> {
    for size in 0..g.n() {
        let mut found = None;
        cliques_of_size(g, size, &mut |k| {
            found = cut_for(g, k);
            found.is_some()
        });
        if found.is_some() {
            return found;
        }
    }
    None
}

/// Every clique separator, ordered by size and then lexicographically.
pub fn all_cut_cliques(g: &Graph) -> Vec<CutClique> {
    let mut out = Vec::new();
    for size in 0..g.n() {
        cliques_of_size(g, size, &mut |k| {
            if let Some(c) = cut_for(g, k) {
                out.push(c);
            }
            false
        });
    }
    out
}
