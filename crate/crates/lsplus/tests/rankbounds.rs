use std::collections::HashMap;

use lsplus::graphs::{circulant, graph6_decode, parse_graph_collection, Graph};
use lsplus::numerics::rat;
use lsplus::rankbounds::{
    alpha_ls1_bound, classify_vt_candidates, rank_upper_bound, replay, vt_bucket, vt_degree_filter, AlphaCase,
    RankEngine, RankInterval, Rule, VtBucket,
};

fn data(name: &str) -> String {
    std::fs::read_to_string(format!("{}/tests/data/{name}", env!("CARGO_MANIFEST_DIR"))).unwrap()
}

fn named(file: &str, name: &str) -> Graph {
    parse_graph_collection(&data(file)).unwrap().into_iter().find(|g| g.name == name).unwrap().graph
}

fn catalog(file: &str) -> Vec<Graph> {
    data(file).lines().filter(|l| !l.trim().is_empty()).map(|l| graph6_decode(l.trim()).unwrap()).collect()
}

fn bucket_indices(graphs: &[Graph], bucket: VtBucket) -> Vec<usize> {
    graphs.iter().enumerate().filter(|(_, g)| vt_bucket(g) == bucket).map(|(i, _)| i + 1).collect()
}

#[test]
fn small_examples() {
    let (b, t) = rank_upper_bound(&Graph::complete(3), 3);
    assert_eq!((b, t.rule), (1, Rule::Perfect));
    let (b, _) = rank_upper_bound(&named("claw7.txt", "claw7"), 3);
    assert_eq!(b, 2);
    let (b, t) = rank_upper_bound(&circulant(8, &[1, 4]), 3);
    assert_eq!((b, t.rule), (1, Rule::Destruction));
    assert!(t.children.iter().all(|c| c.rule == Rule::Bipartite));
}

#[test]
fn eight_vertex_vertex_transitive_graphs() {
    let graphs = parse_graph_collection(&data("vt8.txt")).unwrap();
    let bounds: Vec<(usize, Rule)> = graphs
        .iter()
        .map(|g| {
            let (b, t) = rank_upper_bound(&g.graph, 3);
            (b, t.rule)
        })
        .collect();
    assert_eq!(bounds.iter().map(|b| b.0).collect::<Vec<_>>(), vec![1, 0, 0, 1, 2]);
    assert_eq!(bounds[4].1, Rule::VertexCount);
}

#[test]
fn table_buckets_match_proof_lists() {
    let t3 = catalog("vt_n10_13.g6");
    assert_eq!(bucket_indices(&t3, VtBucket::Bipartite), vec![1, 6, 8, 10, 11, 12, 20]);
    assert_eq!(bucket_indices(&t3, VtBucket::DestructionBipartite), vec![2, 3, 4, 7, 21, 26, 32, 35]);
    assert_eq!(
        bucket_indices(&t3, VtBucket::DestructionPerfect),
        vec![5, 9, 14, 15, 17, 18, 19, 22, 23, 24, 25, 27, 28, 29, 30, 34, 36, 37, 38]
    );
    let t4 = catalog("vt_n14_16.g6");
    assert_eq!(
        bucket_indices(&t4, VtBucket::Bipartite),
        vec![1, 2, 4, 5, 16, 18, 19, 20, 21, 22, 26, 29, 33, 34, 35, 36, 58, 59, 60]
    );
    assert_eq!(bucket_indices(&t4, VtBucket::DestructionBipartite), vec![3, 6, 11, 17, 37, 38, 61]);
    assert_eq!(
        bucket_indices(&t4, VtBucket::DestructionPerfect),
        vec![
            8, 12, 13, 15, 31, 32, 42, 45, 46, 53, 57, 65, 66, 67, 69, 73, 74, 75, 76, 77, 78, 79, 80, 81, 83, 84, 86,
            88, 89, 90, 92, 96
        ]
    );
    let t5 = catalog("vt_n17_19.g6");
    assert_eq!(bucket_indices(&t5, VtBucket::Bipartite), vec![5, 6, 7, 10, 11, 12, 13, 15, 22, 23, 24, 25, 26]);
    assert_eq!(bucket_indices(&t5, VtBucket::DestructionBipartite), vec![1, 8, 16, 27, 46, 49]);
    assert_eq!(
        bucket_indices(&t5, VtBucket::DestructionPerfect),
        vec![4, 9, 19, 20, 21, 30, 34, 42, 43, 44, 48, 52, 55, 56]
    );
}

#[test]
fn catalog_bounds() {
    let c3 = classify_vt_candidates(&data("vt_n10_13.g6"), 3, 3);
    assert!(c3.errors.is_empty());
    assert_eq!(c3.rows.len(), 38);
    let above: Vec<usize> = c3.rows.iter().filter(|r| r.bound > 2).map(|r| r.index).collect();
    assert_eq!(above, vec![33]);
    let c4 = classify_vt_candidates(&data("vt_n14_16.g6"), 4, 3);
    assert_eq!(c4.rows.len(), 96);
    let above: Vec<usize> = c4.rows.iter().filter(|r| r.bound > 3).map(|r| r.index).collect();
    assert_eq!(above, vec![30]);
    assert!(c4.rows[40].bound <= 2, "Clebsch graph");
    let c5 = classify_vt_candidates(&data("vt_n17_19.g6"), 5, 3);
    assert_eq!(c5.rows.len(), 58);
    assert!(c5.rows.iter().all(|r| r.bound <= 4));
    for row in c3.rows.iter().chain(&c4.rows).chain(&c5.rows) {
        assert!(row.vertex_transitive);
        replay(row.trace.as_ref().unwrap(), &HashMap::new()).unwrap();
    }
}

#[test]
fn unparseable_catalog_lines_are_reported() {
    let c = classify_vt_candidates("Bw\n!!\nGhdGKC\n", 2, 2);
    assert_eq!(c.rows.len(), 2);
    assert_eq!(c.errors.len(), 1);
    assert_eq!(c.errors[0].0, 2);
}

#[test]
fn depth_budget_is_monotone() {
    for g in catalog("vt_n10_13.g6").iter().take(20) {
        let mut last = usize::MAX;
        for d in 0..=3 {
            let (b, _) = rank_upper_bound(g, d);
            assert!(b <= last);
            last = b;
        }
    }
}

#[test]
fn assumptions_and_replay() {
    let g = circulant(13, &[1, 5]);
    let mut engine = RankEngine::new(0);
    assert_eq!(engine.bound(&g).bound, 4);
    engine.assume(&g, 3, "certificate");
    let t = engine.bound(&g);
    assert_eq!((t.bound, t.rule), (3, Rule::Assumed));
    assert!(replay(&t, &HashMap::new()).is_err());
    let mut known = HashMap::new();
    known.insert(lsplus::graphs::canonical_form(&g), 3);
    replay(&t, &known).unwrap();
    let mut forged = (*rank_upper_bound(&g, 3).1).clone();
    forged.bound -= 1;
    assert!(replay(&forged, &HashMap::new()).is_err());
}

#[test]
fn interval_consistency() {
    let (_, t) = rank_upper_bound(&circulant(13, &[1, 5]), 3);
    let iv = RankInterval::from_trace(&t).with_lower(3, "level-2 package");
    assert_eq!((iv.lower, iv.upper), (Some(3), Some(3)));
    assert!(iv.is_consistent());
    assert!(!RankInterval::from_trace(&t).with_lower(4, "bogus").is_consistent());
}

#[test]
fn degree_filter_examples() {
    assert_eq!(vt_degree_filter(8, 2), Some((3, 4)));
    assert_eq!(vt_degree_filter(13, 4), Some((3, 3)));
    assert_eq!(vt_degree_filter(9, 3), None);
    assert_eq!(vt_degree_filter(4, 2), None);
}

#[test]
fn alpha_bounds() {
    for n in 2..7 {
        assert_eq!(alpha_ls1_bound(&Graph::complete(n)).best, rat(1, 1));
    }
    let dc = alpha_ls1_bound(&named("double_circulant.txt", "double_circulant_16"));
    assert_eq!(dc.min_degree, 9);
    assert_eq!((dc.best.clone(), dc.case), (rat(4, 1), AlphaCase::Destruction));
    let c8 = alpha_ls1_bound(&circulant(8, &[1, 2]));
    assert_eq!(c8.case_i, rat(4, 1));
}
