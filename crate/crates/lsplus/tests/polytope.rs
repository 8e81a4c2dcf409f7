use num_rational::BigRational;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use lsplus::graphs::{circulant, Graph};
use lsplus::numerics::{lp_max_exact, rat, LpOutcome};
use lsplus::polytope::{
    cone_frac_member, dominates, enumerate_facets, enumerate_stable_sets, frac_lp_max, frac_max_all_ones,
    full_support_facets, is_facet, is_valid_for_stab, max_over_stab, stable_set_bitstring, Inequality,
};

fn random_graph(rng: &mut ChaCha8Rng, n: usize, p: f64) -> Graph {
    let mut g = Graph::empty(n);
    for j in 1..n {
        for i in 0..j {
            if rng.gen_bool(p) {
                g.add_edge(i, j);
            }
        }
    }
    g
}

/// max ēᵀx over the half-integral points of FRAC(G), which include every vertex.
fn half_integral_max(g: &Graph) -> BigRational {
    let n = g.n();
    let mut best = 0i64;
    let mut code = vec![0u8; n];
    loop {
        let ok = g.edges().iter().all(|&(u, v)| code[u] + code[v] <= 2);
        if ok {
            best = best.max(code.iter().map(|&c| c as i64).sum());
        }
        let mut i = 0;
        while i < n && code[i] == 2 {
            code[i] = 0;
            i += 1;
        }
        if i == n {
            break;
        }
        code[i] += 1;
    }
    rat(best, 2)
}

#[test]
fn five_cycle_facets() {
    let facets = enumerate_facets(&Graph::cycle(5));
    assert_eq!(facets.len(), 11);
    assert!(facets.contains(&Inequality::all_ones(5, 2)));
    assert_eq!(facets.iter().filter(|f| f.is_nonnegativity()).count(), 5);
    assert_eq!(full_support_facets(&Graph::cycle(5)), vec![Inequality::all_ones(5, 2)]);
}

#[test]
fn facet_counts_of_small_families() {
    assert_eq!(enumerate_facets(&Graph::complete(4)).len(), 5);
    assert_eq!(enumerate_facets(&Graph::empty(3)).len(), 6);
    // C7: 7 nonnegativity, 7 edges, one rank inequality
    assert_eq!(enumerate_facets(&Graph::cycle(7)).len(), 15);
    // the complement of C7 has α = 2 and its rank inequality is a facet
    let antihole = Graph::cycle(7).complement();
    assert!(enumerate_facets(&antihole).contains(&Inequality::all_ones(7, 2)));
}

#[test]
fn stable_set_counts_follow_lucas_numbers() {
    let lucas = [0, 0, 0, 4, 7, 11, 18, 29, 47, 76];
    for (n, &count) in lucas.iter().enumerate().skip(3) {
        assert_eq!(enumerate_stable_sets(&Graph::cycle(n)).len(), count, "C{n}");
    }
    assert_eq!(stable_set_bitstring(0b101, 4), "1010");
}

/// Every listed facet is a valid facet, and the facet system reproduces the
/// stable-set optimum for random objectives (so no facet is missing).
#[test]
fn facet_lists_describe_stab() {
    let mut rng = ChaCha8Rng::seed_from_u64(5);
    for _ in 0..25 {
        let n = rng.gen_range(2..=7);
        let g = random_graph(&mut rng, n, 0.45);
        let facets = enumerate_facets(&g);
        let cons: Vec<(Vec<BigRational>, BigRational)> =
            facets.iter().map(|f| (f.a.iter().map(|&v| rat(v, 1)).collect(), rat(f.beta, 1))).collect();
        for f in &facets {
            assert!(is_valid_for_stab(&g, f));
            assert!(is_facet(&g, f).unwrap());
        }
        for _ in 0..5 {
            let c: Vec<i64> = (0..n).map(|_| rng.gen_range(-3..=5)).collect();
            let obj: Vec<BigRational> = c.iter().map(|&v| rat(v, 1)).collect();
            let lp = lp_max_exact(&cons, &obj).unwrap();
            assert_eq!(lp, LpOutcome::Optimal(rat(max_over_stab(&g, &c), 1)));
        }
    }
}

#[test]
fn frac_lp_agrees_with_half_integral_brute_force() {
    let mut rng = ChaCha8Rng::seed_from_u64(2026);
    for _ in 0..50 {
        let n = rng.gen_range(1..=8);
        let p = rng.gen_range(0.1..0.9);
        let g = random_graph(&mut rng, n, p);
        assert_eq!(frac_max_all_ones(&g).unwrap(), half_integral_max(&g));
    }
    assert_eq!(frac_max_all_ones(&Graph::complete(4)).unwrap(), rat(2, 1));
    let w = [rat(2, 1), rat(1, 1), rat(1, 1)];
    assert_eq!(frac_lp_max(&Graph::complete(3), &w).unwrap(), rat(2, 1));
}

#[test]
fn facet_checks_reject_bad_input() {
    let c5 = Graph::cycle(5);
    assert!(is_facet(&c5, &Inequality::all_ones(5, 1)).is_err());
    assert!(is_facet(&c5, &Inequality::all_ones(4, 2)).is_err());
    assert!(!is_facet(&c5, &Inequality::all_ones(5, 3)).unwrap());
    assert!(!is_valid_for_stab(&c5, &Inequality::all_ones(5, 1)));
    let row = Inequality::parse_csv_row("1,1,1,1,1,2").unwrap();
    assert_eq!(row, Inequality::all_ones(5, 2));
    assert_eq!(Inequality::parse_csv_row(&row.to_csv_row()).unwrap(), row);
    assert!(Inequality::parse_csv_row("1,a,2").is_err());
}

#[test]
fn cone_and_domination_predicates() {
    let c5 = Graph::cycle(5);
    assert!(cone_frac_member(&c5, &[2i64, 1, 1, 1, 1, 1]));
    assert!(cone_frac_member(&c5, &[0i64; 6]));
    assert!(!cone_frac_member(&c5, &[2i64, 2, 1, 0, 0, 0]));
    assert!(!cone_frac_member(&c5, &[0i64, 1, 0, 0, 0, 0]));
    assert!(dominates(&[2i64, 2, 2], &[1, 1, 0]));
    assert!(!dominates(&[2i64, 1, 2], &[1, 1, 0]));
    assert!(dominates(&[0i64, 0, 0], &[0, 0, 0]));
}

#[test]
fn circulant_full_support_facets() {
    // C8^{1,4} (the Wagner graph) has α = 3 and ēᵀx ≤ 3 is a facet
    let g = circulant(8, &[1, 4]);
    assert!(full_support_facets(&g).contains(&Inequality::all_ones(8, 3)));
}
