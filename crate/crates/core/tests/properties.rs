mod common;

use proptest::prelude::*;
use spectral_forge::baselines::{dcsbm_config_from, dcsbm_generate};
use spectral_forge::eval::{compare, dv_attack, AttackConfig};
use spectral_forge::spectral::spectral_norm;
use spectral_forge::*;

fn graph_of_order(n: usize) -> impl Strategy<Value = Graph> {
    let pairs = n * (n - 1) / 2;
    proptest::collection::vec(any::<bool>(), pairs).prop_map(move |bits| {
        let mut it = bits.into_iter();
        let mut edges = Vec::new();
        for i in 0..n {
            for j in (i + 1)..n {
                if it.next().unwrap() {
                    edges.push((i, j));
                }
            }
        }
        Graph::from_edges(n, edges).unwrap()
    })
}

fn graph_strategy(max_n: usize) -> impl Strategy<Value = Graph> {
    (2..=max_n).prop_flat_map(graph_of_order)
}

fn graph_pair(max_n: usize) -> impl Strategy<Value = (Graph, Graph)> {
    (2..=max_n).prop_flat_map(|n| (graph_of_order(n), graph_of_order(n)))
}

fn symmetric_strategy(max_n: usize) -> impl Strategy<Value = RealMatrix> {
    (1..=max_n).prop_flat_map(|n| {
        proptest::collection::vec(-5.0f64..5.0, n * n)
            .prop_map(move |v| RealMatrix::from_symmetric_fn(n, |i, j| v[i.min(j) * n + i.max(j)]))
    })
}

proptest! {
    #![proptest_config(ProptestConfig { cases: 256, failure_persistence: None, ..ProptestConfig::default() })]

    #[test]
    fn edge_list_round_trip(g in graph_strategy(20)) {
        let text = write_edge_list(&g);
        let back = load_edge_list(&text).unwrap();
        prop_assert_eq!(&back, &g);
        prop_assert_eq!(write_edge_list(&back), text);
    }

    #[test]
    fn degree_total_is_twice_edges(g in graph_strategy(25)) {
        let dv = degree_vector(&g);
        prop_assert_eq!(dv.total(), 2 * g.edge_count());
    }

    #[test]
    fn clustering_in_unit_interval(g in graph_strategy(20)) {
        let c = average_clustering(&g);
        prop_assert!((0.0..=1.0).contains(&c));
    }

    #[test]
    fn modularity_matrix_rows_sum_to_zero(g in graph_strategy(20)) {
        prop_assume!(g.edge_count() > 0);
        let b = modularity_matrix(&g).unwrap();
        for i in 0..b.order() {
            let row: f64 = (0..b.order()).map(|j| b.get(i, j)).sum();
            prop_assert!(row.abs() < 1e-12);
        }
    }

    #[test]
    fn low_rank_error_matches_dropped_eigenvalue(m in symmetric_strategy(16), alpha in 0.0f64..=1.0) {
        let alpha = Alpha::new(alpha).unwrap();
        let eig = eigendecompose(&m).unwrap();
        let approx = eig.low_rank_approx(alpha);
        let err = spectral_norm(&(m.as_matrix() - approx.as_matrix()));
        let scale = m.as_matrix().abs().max().max(1.0);
        prop_assert!((err - eig.approx_error_bound(alpha)).abs() < 1e-9 * scale);
    }

    #[test]
    fn eigenvalues_sorted_by_modulus(m in symmetric_strategy(16)) {
        let eig = eigendecompose(&m).unwrap();
        let v = eig.eigenvalues();
        for w in v.windows(2) {
            prop_assert!(w[0].abs() >= w[1].abs() - 1e-12);
        }
        let oracle = common::jacobi_eigenvalues(&common::dense(m.as_matrix()));
        let mut a: Vec<f64> = v.to_vec();
        let mut b = oracle;
        a.sort_by(f64::total_cmp);
        b.sort_by(f64::total_cmp);
        for (x, y) in a.iter().zip(&b) {
            prop_assert!((x - y).abs() < 1e-9);
        }
    }

    #[test]
    fn modularity_is_relabel_invariant(g in graph_strategy(10), labels in proptest::collection::vec(0usize..4, 10), shift in 1usize..4) {
        prop_assume!(g.edge_count() > 0);
        let labels = &labels[..g.node_count()];
        let p = Partition::from_labels(labels);
        let relabeled: Vec<usize> = labels.iter().map(|l| (l + shift) * 7).collect();
        let q1 = modularity(&g, &p).unwrap();
        let q2 = modularity(&g, &Partition::from_labels(&relabeled)).unwrap();
        prop_assert!((q1 - q2).abs() < 1e-12);
        prop_assert!((q1 - common::modularity_double_sum(&g, p.assignment())).abs() < 1e-12);
        prop_assert!((-0.5 - 1e-12..=1.0).contains(&q1));
    }

    #[test]
    fn normalized_matrices_are_probabilities(g in graph_strategy(14), alpha in 0.0f64..=1.0, rule in 0usize..3) {
        prop_assume!(g.edge_count() > 0);
        let rule = [NormalizationRule::Truncate, NormalizationRule::Scale, NormalizationRule::logistic(6.0).unwrap()][rule];
        let forge = Forge::new(&g, Transformation::Modularity).unwrap();
        match forge.expected(Alpha::new(alpha).unwrap(), rule) {
            Ok(p) => {
                let n = p.order();
                for i in 0..n {
                    prop_assert_eq!(p.get(i, i), 0.0);
                    for j in 0..n {
                        prop_assert!((0.0..=1.0).contains(&p.get(i, j)));
                        prop_assert_eq!(p.get(i, j), p.get(j, i));
                    }
                }
                let e = normalized_entropy(&p);
                prop_assert!(e.normalized >= 0.0 && e.normalized.is_finite());
            }
            Err(Error::DegenerateRange(_)) => prop_assert_eq!(rule, NormalizationRule::Scale),
            Err(e) => prop_assert!(false, "unexpected error {e}"),
        }
    }

    #[test]
    fn full_rank_generation_is_identity(g in graph_strategy(16), seed in any::<u64>(), adjacency in any::<bool>()) {
        prop_assume!(g.edge_count() > 0);
        let t = if adjacency { Transformation::Adjacency } else { Transformation::Modularity };
        let out = sgf(&g, &SgfConfig::new(Alpha::ONE).with_seed(seed).with_transformation(t)).unwrap();
        prop_assert_eq!(out, g);
    }

    #[test]
    fn louvain_partition_scores_its_reported_value(g in graph_strategy(16), seed in any::<u64>()) {
        prop_assume!(g.edge_count() > 0);
        let (p, q) = louvain_maximize(&g, seed).unwrap();
        prop_assert_eq!(p.len(), g.node_count());
        prop_assert!((q - common::modularity_double_sum(&g, p.assignment())).abs() < 1e-12);
        prop_assert!(q >= modularity(&g, &Partition::single(g.node_count())).unwrap() - 1e-12);
    }

    #[test]
    fn dcsbm_preserves_block_counts(g in graph_strategy(16), labels in proptest::collection::vec(0usize..3, 16), seed in any::<u64>()) {
        let p = Partition::from_labels(&labels[..g.node_count()]);
        let cfg = dcsbm_config_from(&g, &p).unwrap().with_seed(seed);
        if let Ok(out) = dcsbm_generate(&cfg) {
            let realized = dcsbm_config_from(&out, &p).unwrap();
            prop_assert_eq!(realized.block_edges(), cfg.block_edges());
        }
    }

    #[test]
    fn attack_rate_in_unit_interval((g, h) in graph_pair(16), seed in any::<u64>()) {
        let rate = dv_attack(&g, &h, &AttackConfig { seed_fraction: 0.2, rng_seed: seed }).unwrap();
        prop_assert!((0.0..=1.0).contains(&rate));
    }

    #[test]
    fn self_comparison_ratios_are_one(g in graph_strategy(14), seed in any::<u64>()) {
        prop_assume!(g.edge_count() > 0);
        let r = compare(&g, &g, seed).unwrap();
        let (_, q) = louvain_maximize(&g, seed).unwrap();
        // a zero maximum leaves the ratio undefined
        let expected = (q != 0.0).then_some(1.0);
        prop_assert_eq!(r.modularity_ratio, expected);
        prop_assert_eq!(r.partition_number_ratio, Some(1.0));
        for v in [r.clustering_ratio, r.degree_correlation].into_iter().flatten() {
            prop_assert!((v - 1.0).abs() < 1e-12);
        }
    }
}

#[test]
fn identical_graphs_are_easier_to_attack_than_resampled_ones() {
    let (g, _) = spectral_forge::generators::planted_partition(&spectral_forge::generators::PlantedPartitionConfig {
        n: 120,
        communities: 4,
        p_in: 0.2,
        p_out: 0.02,
        rng_seed: 5,
    })
    .unwrap();
    let forge = Forge::new(&g, Transformation::Modularity).unwrap();
    let (mut same, mut resampled) = (0.0, 0.0);
    for trial in 0..20 {
        let cfg = AttackConfig {
            seed_fraction: 0.05,
            rng_seed: trial,
        };
        same += dv_attack(&g, &g, &cfg).unwrap();
        let other = forge
            .sample(Alpha::new(0.3).unwrap(), NormalizationRule::Truncate, 1000 + trial)
            .unwrap();
        resampled += dv_attack(&g, &other, &cfg).unwrap();
    }
    assert!(same > resampled, "identical {same} vs resampled {resampled}");
}
