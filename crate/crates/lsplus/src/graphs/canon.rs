//! Canonical labeling by partition refinement and backtracking.
//!
//! The search individualizes vertices of the first smallest non-singleton
//! cell, refines to an equitable partition, and keeps the leaf whose relabeled
//! adjacency rows are lexicographically largest. Automorphisms discovered as
//! equal leaves prune siblings lying in a common orbit of the automorphisms
//! that fix the current individualization path.

use super::{bits, graph6_encode, Graph};

type Cells = Vec<Vec<usize>>;

/// Refines an ordered partition until every cell is equitable with respect to
/// every other cell. Fragments are ordered by neighbor count, so the result
/// depends only on the graph and the input partition, not on vertex names.
fn refine(g: &Graph, mut cells: Cells) -> Cells {
    let mut s = 0;
    while s < cells.len() {
        let splitter: u64 = cells[s].iter().fold(0, |m, &v| m | 1 << v);
        let mut changed = false;
        let mut c = 0;
        while c < cells.len() {
            if cells[c].len() > 1 {
                let mut keyed: Vec<(u32, usize)> =
                    cells[c].iter().map(|&v| ((g.neighbors(v) & splitter).count_ones(), v)).collect();
                keyed.sort_unstable();
                if keyed.first().map(|k| k.0) != keyed.last().map(|k| k.0) {
                    let mut groups: Cells = Vec::new();
                    let mut last = None;
                    for (k, v) in keyed {
                        if last != Some(k) {
                            groups.push(Vec::new());
                            last = Some(k);
                        }
                        groups.last_mut().expect("group").push(v);
                    }
                    let added = groups.len();
                    cells.splice(c..=c, groups);
                    c += added;
                    changed = true;
                    continue;
                }
            }
            c += 1;
        }
        s = if changed { 0 } else { s + 1 };
    }
    cells
}

struct Search<'a> {
    g: &'a Graph,
    best: Option<(Vec<u64>, Vec<usize>)>,
    autos: Vec<Vec<usize>>,
}

impl Search<'_> {
    fn run(&mut self, cells: Cells, path: &mut Vec<usize>) {
        let cells = refine(self.g, cells);
        if cells.iter().all(|c| c.len() == 1) {
            let mut perm = vec![0; self.g.n()];
            for (i, c) in cells.iter().enumerate() {
                perm[c[0]] = i;
            }
            let key = self.g.permute(&perm).adjacency().to_vec();
            match &self.best {
                None => self.best = Some((key, perm)),
                Some((bk, bp)) => {
                    if key > *bk {
                        self.best = Some((key, perm));
                    } else if key == *bk {
                        let mut inv = vec![0; bp.len()];
                        for (v, &p) in bp.iter().enumerate() {
                            inv[p] = v;
                        }
                        let aut: Vec<usize> = (0..perm.len()).map(|v| inv[perm[v]]).collect();
                        if aut.iter().enumerate().any(|(v, &w)| v != w) {
                            self.autos.push(aut);
                        }
                    }
                }
            }
            return;
        }
        let (ti, _) = cells
            .iter()
            .enumerate()
            .filter(|(_, c)| c.len() > 1)
            .min_by_key(|(i, c)| (c.len(), *i))
            .expect("non-singleton cell");
        let target = cells[ti].clone();
        let mut explored: Vec<usize> = Vec::new();
        for &v in &target {
            if !explored.is_empty() && self.same_orbit_as_explored(v, &explored, path) {
                continue;
            }
            let mut next = cells.clone();
            let rest: Vec<usize> = target.iter().copied().filter(|&w| w != v).collect();
            next.splice(ti..=ti, [vec![v], rest]);
            path.push(v);
            self.run(next, path);
            path.pop();
            explored.push(v);
        }
    }

    fn same_orbit_as_explored(&self, v: usize, explored: &[usize], path: &[usize]) -> bool {
        let n = self.g.n();
        let mut parent: Vec<usize> = (0..n).collect();
        fn find(p: &mut [usize], x: usize) -> usize {
            let mut r = x;
            while p[r] != r {
                r = p[r];
            }
            let mut y = x;
            while p[y] != r {
                let nx = p[y];
                p[y] = r;
                y = nx;
            }
            r
        }
        for aut in &self.autos {
            if path.iter().all(|&p| aut[p] == p) {
                for x in 0..n {
                    let (a, b) = (find(&mut parent, x), find(&mut parent, aut[x]));
                    if a != b {
                        parent[a] = b;
                    }
                }
            }
        }
        let rv = find(&mut parent, v);
        explored.iter().any(|&e| find(&mut parent, e) == rv)
    }
}

/// Canonical relabeling: vertex `v` of `g` becomes `perm[v]`. Vertices with
/// distinct `colors` are never mapped onto each other; colored canonical forms
/// of two graphs agree iff a color-preserving isomorphism exists.
pub fn canonical_labeling(g: &Graph, colors: Option<&[usize]>) -> Vec<usize> {
    let n = g.n();
    if n == 0 {
        return Vec::new();
    }
    let cells: Cells = match colors {
        None => vec![(0..n).collect()],
        Some(cols) => {
            let mut keys: Vec<usize> = cols.to_vec();
            keys.sort_unstable();
            keys.dedup();
            keys.iter().map(|&k| (0..n).filter(|&v| cols[v] == k).collect()).collect()
        }
    };
    let mut search = Search { g, best: None, autos: Vec::new() };
    search.run(cells, &mut Vec::new());
    search.best.expect("at least one leaf").1
}

/// Canonical form: the graph6 string of the canonically relabeled graph.
pub fn canonical_form(g: &Graph) -> String {
    graph6_encode(&g.permute(&canonical_labeling(g, None)))
}

/// Colored canonical form, with the color sequence appended after the graph6.
pub fn canonical_form_colored(g: &Graph, colors: &[usize]) -> String {
    let perm = canonical_labeling(g, Some(colors));
    let mut relabeled = vec![0; colors.len()];
    for (v, &p) in perm.iter().enumerate() {
        relabeled[p] = colors[v];
    }
    let tail: Vec<String> = relabeled.iter().map(usize::to_string).collect();
    format!("{}|{}", graph6_encode(&g.permute(&perm)), tail.join(","))
}

/// True iff the graphs are isomorphic.
pub fn isomorphic(a: &Graph, b: &Graph) -> bool {
    a.n() == b.n()
        && a.edge_count() == b.edge_count()
        && {
            let mut da = a.degrees();
            let mut db = b.degrees();
            da.sort_unstable();
            db.sort_unstable();
            da == db
        }
        && canonical_form(a) == canonical_form(b)
}

/// Orbit representative (smallest member) of every vertex under Aut(g).
/// Two vertices share an orbit iff individualizing either gives the same
/// colored canonical form.
pub fn automorphism_orbits(g: &Graph) -> Vec<usize> {
    let n = g.n();
    let forms: Vec<String> = (0..n)
        .map(|v| {
            let colors: Vec<usize> = (0..n).map(|w| usize::from(w == v)).collect();
            canonical_form_colored(g, &colors)
        })
        .collect();
    (0..n).map(|v| (0..=v).find(|&w| forms[w] == forms[v]).expect("self")).collect()
}

/// Orbit of `v` under Aut(g) as a vertex mask.
pub fn orbit_of(g: &Graph, v: usize) -> u64 {
    let orbits = automorphism_orbits(g);
    bits(g.vertex_mask()).filter(|&w| orbits[w] == orbits[v]).fold(0, |m, w| m | 1 << w)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::graphs::circulant;

    #[test]
    fn canonical_form_is_label_invariant() {
        let g = circulant(9, &[1, 3]);
        let perm = [3, 7, 1, 0, 8, 2, 6, 5, 4];
        assert_eq!(canonical_form(&g), canonical_form(&g.permute(&perm)));
        let p3 = Graph::from_edges(3, &[(0, 1), (1, 2)]).unwrap();
        assert!(!isomorphic(&Graph::complete(3), &p3));
    }

    #[test]
    fn orbits() {
        let p3 = Graph::from_edges(3, &[(0, 1), (1, 2)]).unwrap();
        assert_eq!(automorphism_orbits(&p3), vec![0, 1, 0]);
        assert_eq!(orbit_of(&circulant(8, &[1, 2]), 3), 0xff);
    }
}
