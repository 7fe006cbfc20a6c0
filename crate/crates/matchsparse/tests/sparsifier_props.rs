//! Estimation and partition properties of the two-phase sparsifier.

mod common;

use std::cmp::Ordering;

use common::arb_graph;
use matchsparse::rng::RngStream;
use matchsparse::sparsifier::{
    build_q, compare_to_threshold, estimate_edge_stats, greedy_subgraph, lambda_fn,
    sampling_subgraph, verify_partition, SparsifierConfig,
};
use matchsparse::weight::{ceil_inverse, ratio, ratio_int, ratio_pow, Ratio};
use proptest::prelude::*;

fn small_config(epsilon: Ratio) -> SparsifierConfig {
    let mut cfg = SparsifierConfig::new(epsilon, ratio(1, 2)).unwrap();
    cfg.n_q = 40;
    cfg.r_override = Some(4);
    cfg
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn estimated_chi_mass_equals_estimated_opt(g in arb_graph(8, 12), seed in any::<u64>()) {
        let stream = RngStream::from_root(seed);
        let stats = estimate_edge_stats(&g, &ratio(1, 2), 40, &stream).unwrap();
        let full = g.full_edge_set();
        // Both sides average the same realizations, so the identity is exact.
        prop_assert_eq!(&stats.chi_of_set(&full), stats.opt_hat());
        for e in 0..g.m() {
            let q = stats.q_hat(e);
            prop_assert!(*q >= ratio_int(0) && *q <= ratio_int(1));
            prop_assert_eq!(&(q * g.weight(e)), stats.chi_hat(e));
        }
        for v in 0..g.n() {
            prop_assert!(stats.vertex_q_sum(&g, v, &full) <= ratio_int(1));
        }
    }

    #[test]
    fn partition_is_a_disjoint_cover_with_bounded_iterations(
        g in arb_graph(9, 14),
        seed in any::<u64>(),
        eps_decile in 1i64..=9,
    ) {
        let cfg = small_config(ratio(eps_decile, 10));
        let stream = RngStream::from_root(seed);
        let stats = estimate_edge_stats(&g, &cfg.p, cfg.n_q, &stream).unwrap();
        let part = greedy_subgraph(&g, &stats, &cfg).unwrap();

        prop_assert!(part.p_set.is_disjoint(&part.i_prime));
        prop_assert!(part.p_set.is_disjoint(&part.n_set));
        prop_assert!(part.i_prime.is_disjoint(&part.n_set));
        prop_assert_eq!(
            part.p_set.len() + part.i_prime.len() + part.n_set.len(),
            g.m()
        );
        prop_assert!(part.iterations <= cfg.max_growth_rounds());
        prop_assert_eq!(
            part.delta,
            g.max_degree_in(&part.p_set).max(1) as u64
        );
        let violations = verify_partition(&g, &stats, &cfg, &part);
        prop_assert!(violations.is_empty(), "{:?}", violations);
    }

    #[test]
    fn sampling_unions_rounds_and_bounds_degrees(
        g in arb_graph(9, 14),
        seed in any::<u64>(),
        rounds in 1u64..=8,
    ) {
        let mut cfg = small_config(ratio(3, 10));
        cfg.r_override = Some(rounds);
        let stream = RngStream::from_root(seed);
        let sampling = sampling_subgraph(&g, &cfg, 1, &stream).unwrap();

        prop_assert_eq!(sampling.r_used, rounds);
        prop_assert_eq!(sampling.rounds.len() as u64, rounds);
        let mut union = g.empty_edge_set();
        for m in &sampling.rounds {
            union.union_with(&m.to_edge_set(&g));
        }
        prop_assert_eq!(union.to_vec(), sampling.s_set.to_vec());
        for v in 0..g.n() {
            prop_assert!(g.degree_in(v, &sampling.s_set) <= rounds as usize);
        }
    }

    #[test]
    fn sampled_edge_sets_grow_with_rounds_under_a_shared_root(
        g in arb_graph(9, 14),
        seed in any::<u64>(),
    ) {
        let stream = RngStream::from_root(seed);
        let mut previous = g.empty_edge_set();
        for rounds in [1u64, 4, 8] {
            let mut cfg = small_config(ratio(3, 10));
            cfg.r_override = Some(rounds);
            let sampling = sampling_subgraph(&g, &cfg, 1, &stream).unwrap();
            prop_assert!(previous.is_subset_of(&sampling.s_set));
            previous = sampling.s_set;
        }
    }

    #[test]
    fn sparsifier_degree_stays_within_rounds_plus_protected_degree(
        g in arb_graph(9, 14),
        seed in any::<u64>(),
    ) {
        let cfg = small_config(ratio(3, 10));
        let stream = RngStream::from_root(seed);
        let stats = estimate_edge_stats(&g, &cfg.p, cfg.n_q, &stream).unwrap();
        let part = greedy_subgraph(&g, &stats, &cfg).unwrap();
        let sampling = sampling_subgraph(&g, &cfg, part.delta, &stream).unwrap();
        let q = build_q(&g, &part, &sampling);

        prop_assert!(part.p_set.is_subset_of(&q));
        prop_assert!(sampling.s_set.is_subset_of(&q));
        for v in 0..g.n() {
            prop_assert!(
                g.degree_in(v, &q)
                    <= sampling.r_used as usize + g.degree_in(v, &part.p_set)
            );
        }
    }

    #[test]
    fn hop_threshold_stays_clamped(
        delta in 1u64..=10_000,
        eps_decile in 1i64..=9,
        c in 0u32..=3,
        cap in 1u32..=12,
    ) {
        let lambda = lambda_fn(delta, &ratio(eps_decile, 10), c, cap);
        prop_assert!(lambda >= 1 && lambda <= cap);
    }

    #[test]
    fn threshold_comparison_matches_direct_rational_arithmetic(
        num in 0i64..=40,
        eps_decile in 1i64..=9,
        delta in 1u64..=6,
        lambda in 1u32..=6,
    ) {
        let value = ratio(num, 40);
        let p = ratio(1, 2);
        let epsilon = ratio(eps_decile, 10);
        // Independent route: build p^2 * eps^10 / delta^lambda directly.
        let threshold = ratio_pow(&p, 2) * ratio_pow(&epsilon, 10)
            / ratio_pow(&ratio_int(delta as i64), lambda);
        let expect = match (&value, &threshold) {
            (v, t) if v < t => Ordering::Less,
            (v, t) if v == t => Ordering::Equal,
            _ => Ordering::Greater,
        };
        prop_assert_eq!(
            compare_to_threshold(&value, &p, &epsilon, 10, delta, lambda),
            expect
        );
    }
}

#[test]
fn zero_probability_keeps_the_greedy_empty() {
    let stream = RngStream::from_root(3);
    let g = matchsparse::graph::gen::erdos_renyi(8, 12, 1, 10, 0, &stream).unwrap();
    let mut cfg = SparsifierConfig::new(ratio(3, 10), ratio_int(0)).unwrap();
    cfg.n_q = 20;
    cfg.r_override = Some(2);
    let stats = estimate_edge_stats(&g, &cfg.p, cfg.n_q, &stream).unwrap();
    assert_eq!(stats.opt_hat(), &ratio_int(0));
    let part = greedy_subgraph(&g, &stats, &cfg).unwrap();
    assert!(part.p_set.is_empty());
    assert_eq!(part.i_prime.len() + part.n_set.len(), g.m());
}

#[test]
fn growth_round_budget_follows_the_inverse_accuracy() {
    for (eps, want) in [(ratio(1, 2), 2), (ratio(3, 10), 4), (ratio(9, 10), 2)] {
        let cfg = SparsifierConfig::new(eps.clone(), ratio(1, 2)).unwrap();
        assert_eq!(cfg.max_growth_rounds(), want);
        assert_eq!(ceil_inverse(&eps), want);
    }
}
