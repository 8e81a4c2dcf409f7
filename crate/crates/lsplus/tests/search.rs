use std::collections::{BTreeSet, HashSet};

use lsplus::graphs::{
    bits, canonical_form, clique_number, induced_subgraph, isomorphic, parse_graph_collection, Graph,
};
use lsplus::polytope::{is_facet, is_valid_for_stab, Inequality};
use lsplus::rankbounds::two_minimal_graphs;
use lsplus::search::{
    edge_subgraph_closure, facet_pair_extraction, generate_stretch_candidates, generate_stretched_cliques,
    minimal_elements, pairs_per_graph, read_graph_stage, read_pair_stage, run_pipeline, weighted_spanning_embeds,
    CandidatePair, HullFacets, JoinMode, SmallCoefficientFacets, StretchedCliqueOptions,
};

fn data(name: &str) -> String {
    std::fs::read_to_string(format!("{}/tests/data/{name}", env!("CARGO_MANIFEST_DIR"))).unwrap()
}

fn parse_ineq(line: &str) -> Inequality {
    let f: Vec<&str> = line.split_whitespace().collect();
    assert_eq!((f[0], f[f.len() - 2]), ("ineq", "<="));
    Inequality::new(f[1..f.len() - 2].iter().map(|x| x.parse().unwrap()).collect(), f[f.len() - 1].parse().unwrap())
}

/// Graphs on six vertices where {0,1,2} is a triangle, 4 has neighbors {3,5}
/// only, 3 and 5 are nonadjacent, and their other neighborhoods are
/// nonempty incomparable subsets of the triangle.
fn brute_force_triangle_candidates() -> BTreeSet<String> {
    let mut out = BTreeSet::new();
    for a in 1u64..8 {
        for b in 1u64..8 {
            if a & b == a || a & b == b {
                continue;
            }
            let mut g = Graph::complete(3);
            g = g.join_vertex(0).unwrap().join_vertex(0).unwrap().join_vertex(0).unwrap();
            g.add_edge(3, 4);
            g.add_edge(4, 5);
            for v in bits(a) {
                g.add_edge(3, v);
            }
            for v in bits(b) {
                g.add_edge(5, v);
            }
            out.insert(canonical_form(&g));
        }
    }
    out
}

#[test]
fn triangle_seed_matches_brute_force() {
    let gen: BTreeSet<String> =
        generate_stretch_candidates(&[Graph::complete(3)], JoinMode::AnySubset).into_iter().map(|c| c.graph6).collect();
    assert_eq!(gen, brute_force_triangle_candidates());
    let forms: Vec<String> = two_minimal_graphs().iter().map(canonical_form).collect();
    assert!(forms.iter().all(|f| gen.contains(f)));
}

#[test]
fn three_minimal_pipeline_counts() {
    let seeds = two_minimal_graphs().to_vec();
    let cands = generate_stretch_candidates(&seeds, JoinMode::AnySubset);
    assert_eq!(cands.len(), 1115);
    assert_eq!(generate_stretch_candidates(&seeds, JoinMode::FullSet).len(), 275);
    for c in cands.iter().step_by(37) {
        assert_eq!(c.graph.n(), 9);
        let contains_seed = (0u64..512).filter(|m| m.count_ones() == 6).any(|m| {
            let h = induced_subgraph(&c.graph, &bits(m).collect::<Vec<_>>()).unwrap();
            seeds.iter().any(|s| isomorphic(s, &h))
        });
        assert!(contains_seed);
    }
    let graphs: Vec<Graph> = cands.into_iter().map(|c| c.graph).collect();
    let pairs = facet_pair_extraction(&graphs, &HullFacets).unwrap();
    assert_eq!(pairs.len(), 540);
    let per = pairs_per_graph(&pairs);
    assert_eq!(per.values().filter(|&&c| c == 2).count(), 9);
    assert!(per.values().all(|&c| c <= 2));
    for p in &pairs {
        assert!(p.inequality.is_full_support_nonnegative());
        assert!(is_facet(&p.graph, &p.inequality).unwrap());
    }
    let minimal = minimal_elements(&pairs);
    for a in &minimal {
        for b in &minimal {
            if a.key != b.key {
                assert!(!weighted_spanning_embeds(&a.graph, &a.inequality.a, &b.graph, &b.inequality.a));
            }
        }
    }
}

#[test]
fn bipartite_candidate_has_no_pairs() {
    let pairs = facet_pair_extraction(&[Graph::cycle(8)], &HullFacets).unwrap();
    assert!(pairs.is_empty());
}

#[test]
fn small_coefficient_source_agrees_with_hull_on_small_graphs() {
    let graphs: Vec<Graph> =
        generate_stretch_candidates(&[Graph::complete(3)], JoinMode::AnySubset).into_iter().map(|c| c.graph).collect();
    let hull = facet_pair_extraction(&graphs, &HullFacets).unwrap();
    let small = facet_pair_extraction(&graphs, &SmallCoefficientFacets { max_twos: 2 }).unwrap();
    let hk: HashSet<&str> = hull.iter().map(|p| p.key.as_str()).collect();
    assert!(small.iter().all(|p| hk.contains(p.key.as_str())));
    let c5 = facet_pair_extraction(&[Graph::cycle(5)], &SmallCoefficientFacets { max_twos: 1 }).unwrap();
    assert_eq!(c5.len(), 1);
    assert_eq!(c5[0].inequality, Inequality::all_ones(5, 2));
}

#[test]
fn closure_of_maximal_three_minimal_graphs() {
    let maximal = parse_graph_collection(&data("three_minimal_maximal.txt")).unwrap();
    assert_eq!(maximal.len(), 8);
    let mut union = BTreeSet::new();
    for m in &maximal {
        let ineq = parse_ineq(m.attributes.iter().find(|a| a.starts_with("ineq")).unwrap());
        let closure = edge_subgraph_closure(&m.graph, &ineq);
        assert!(closure.contains(&canonical_form(&m.graph)));
        union.extend(closure);
    }
    let listed: BTreeSet<String> = parse_graph_collection(&data("three_minimal_all.txt"))
        .unwrap()
        .iter()
        .map(|g| canonical_form(&g.graph))
        .collect();
    assert_eq!(listed.len(), 49);
    assert_eq!(union, listed);
}

#[test]
fn closure_members_keep_validity() {
    let m = &parse_graph_collection(&data("three_minimal_maximal.txt")).unwrap()[3];
    let ineq = parse_ineq(&m.attributes[0]);
    let edges = m.graph.edges();
    let mut valid = BTreeSet::new();
    for mask in 0u32..(1 << edges.len()) {
        let kept: Vec<(usize, usize)> =
            edges.iter().enumerate().filter(|(i, _)| mask >> i & 1 == 1).map(|(_, &e)| e).collect();
        let h = Graph::from_edges(9, &kept).unwrap();
        if is_valid_for_stab(&h, &ineq) {
            valid.insert(canonical_form(&h));
        }
    }
    let closure: BTreeSet<String> = edge_subgraph_closure(&m.graph, &ineq).into_iter().collect();
    assert_eq!(closure, valid);
}

#[test]
fn hat_family_counts() {
    let hat =
        |omega_max, omega_min, sparse| StretchedCliqueOptions { hat: true, proper: true, sparse, omega_max, omega_min };
    let k52 = generate_stretched_cliques(5, 2, &hat(Some(3), None, false));
    assert_eq!(k52.len(), 13);
    let listed: BTreeSet<String> =
        parse_graph_collection(&data("hat_k52_omega3.txt")).unwrap().iter().map(|g| canonical_form(&g.graph)).collect();
    let got: BTreeSet<String> = k52.iter().map(|s| canonical_form(&s.graph)).collect();
    // the fixture lists one graph twice, up to swapping the copies 5_1 and 5_2
    assert_eq!(listed.len(), 12);
    assert!(listed.is_subset(&got));
    for s in &k52 {
        assert!(s.is_hat());
        assert_eq!(s.d(), 2);
    }
    let sparse: Vec<_> = generate_stretched_cliques(5, 2, &hat(None, Some(4), true))
        .into_iter()
        .filter(|s| is_facet(&s.graph, &Inequality::all_ones(9, 3)).unwrap())
        .collect();
    let fig: BTreeSet<String> = parse_graph_collection(&data("sparse_k52_omega4.txt"))
        .unwrap()
        .iter()
        .map(|g| canonical_form(&g.graph))
        .collect();
    assert_eq!(sparse.iter().map(|s| canonical_form(&s.graph)).collect::<BTreeSet<_>>(), fig);
}

/// Direct enumeration of the hat family for `(6, 3)`: every choice of
/// which copies of each stretched vertex see each unstretched vertex, and
/// of the single cross edge between each pair of stretched vertices.
fn brute_force_hat_63(omega_max: usize) -> BTreeSet<String> {
    let copies = |i: usize| [6 + 2 * i, 7 + 2 * i];
    let du: Vec<(usize, usize)> = (0..3).flat_map(|i| (3..6).map(move |u| (i, u))).collect();
    let mut out = BTreeSet::new();
    for code in 0..3usize.pow(9) {
        for cross in 0..64usize {
            let mut g = Graph::empty(12);
            for (a, b) in [(3, 4), (3, 5), (4, 5)] {
                g.add_edge(a, b);
            }
            for i in 0..3 {
                for c in copies(i) {
                    g.add_edge(i, c);
                }
            }
            let mut x = code;
            for &(i, u) in &du {
                let pick = x % 3;
                x /= 3;
                for (k, c) in copies(i).into_iter().enumerate() {
                    if pick == 2 || pick == k {
                        g.add_edge(c, u);
                    }
                }
            }
            let mut y = cross;
            for (i, j) in [(0, 1), (0, 2), (1, 2)] {
                let e = y % 4;
                y /= 4;
                g.add_edge(copies(i)[e / 2], copies(j)[e % 2]);
            }
            if clique_number(&g) <= omega_max {
                out.insert(canonical_form(&g));
            }
        }
    }
    out
}

#[test]
fn hat_family_63_matches_direct_enumeration() {
    let opts = StretchedCliqueOptions { hat: true, proper: false, omega_max: Some(3), ..Default::default() };
    let gen: BTreeSet<String> =
        generate_stretched_cliques(6, 3, &opts).iter().map(|s| canonical_form(&s.graph)).collect();
    assert_eq!(gen, brute_force_hat_63(3));
    assert_eq!(gen.len(), 216);
    let sparse = generate_stretched_cliques(6, 3, &StretchedCliqueOptions { sparse: true, ..opts });
    assert_eq!(sparse.len(), 40);
}

#[test]
fn stretched_cliques_have_enough_edges() {
    for s in generate_stretched_cliques(5, 2, &StretchedCliqueOptions::default()) {
        assert!(s.graph.edge_count() >= 10 + 4);
        for i in 0..5 {
            for j in i + 1..5 {
                assert!(s.cross_edges(i, j) >= 1 || s.associated[i].len() == 1 && s.associated[j].len() == 1);
            }
        }
    }
}

#[test]
fn pipeline_is_deterministic() {
    let seeds = vec![Graph::complete(3)];
    let a = tempfile::tempdir().unwrap();
    let b = tempfile::tempdir().unwrap();
    let (sa, _) = run_pipeline(&seeds, JoinMode::AnySubset, &HullFacets, Some(a.path())).unwrap();
    let (sb, _) = run_pipeline(&seeds, JoinMode::AnySubset, &HullFacets, Some(b.path())).unwrap();
    assert_eq!(sa, sb);
    for f in ["candidates.g6", "pairs.csv", "minimal.csv"] {
        assert_eq!(std::fs::read(a.path().join(f)).unwrap(), std::fs::read(b.path().join(f)).unwrap());
    }
    assert_eq!(read_graph_stage(&a.path().join("candidates.g6")).unwrap().len(), sa.candidates);
    let pairs: Vec<CandidatePair> = read_pair_stage(&a.path().join("pairs.csv")).unwrap();
    assert_eq!(pairs.len(), sa.pairs);
}
