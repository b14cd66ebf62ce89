//! Property tests for the library's structural invariants: nested-model monotonicity,
//! scale and rank invariances, scoring symmetry, aggregation monotonicity,
//! and quantile round trips.

mod common;

use proptest::prelude::*;

use ccd::bench::format_sig;
use ccd::detectors::{select_order_ic, transfer_entropy, OrderCriterion};
use ccd::graphs::{detection_window, score, summarize, SummaryGraph, WindowGraph};
use ccd::numerics::{
    f_cdf, f_quantile, ols_fit, regularized_incomplete_beta, shannon_entropy, DesignMatrix,
    Regressor,
};
use ccd::signals::{SignalSet, SplitMix64};

fn labels(p: usize) -> Vec<Regressor> {
    (0..p)
        .map(|j| Regressor::Lag {
            series: 0,
            lag: j + 1,
        })
        .collect()
}

fn graph_from_bits(d: usize, bits: &[bool]) -> SummaryGraph {
    let mut g = SummaryGraph::new(d);
    let mut idx = 0;
    for from in 0..d {
        for to in 0..d {
            if from != to {
                g.set(from, to, bits[idx]);
                idx += 1;
            }
        }
    }
    g
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    // Appending a regressor column never increases the residual.
    #[test]
    fn rss_is_monotone_in_columns(seed in any::<u64>(), n in 12usize..48, p in 1usize..5) {
        let mut rng = SplitMix64::new(seed);
        let cols: Vec<Vec<f64>> = (0..p)
            .map(|_| (0..n).map(|_| rng.next_gaussian()).collect())
            .collect();
        let y: Vec<f64> = (0..n).map(|_| rng.next_gaussian()).collect();
        let base = ols_fit(&DesignMatrix::from_columns(cols.clone(), labels(p)).unwrap(), &y).unwrap();

        let mut wider = cols;
        wider.push((0..n).map(|_| rng.next_gaussian()).collect());
        let aug = ols_fit(&DesignMatrix::from_columns(wider, labels(p + 1)).unwrap(), &y).unwrap();
        prop_assert!(aug.rss <= base.rss + 1e-9 * (1.0 + base.rss));
    }

    // Entropy ignores histogram order and peaks at the uniform histogram.
    #[test]
    fn entropy_permutation_and_maximum(counts in prop::collection::vec(0u64..60, 2..12), rot in 0usize..12) {
        prop_assume!(counts.iter().any(|&c| c > 0));
        let h = shannon_entropy(&counts).unwrap();
        let mut rotated = counts.clone();
        rotated.rotate_left(rot % counts.len());
        prop_assert!((h - shannon_entropy(&rotated).unwrap()).abs() < 1e-12);
        let uniform = vec![1u64; counts.len()];
        prop_assert!(h <= shannon_entropy(&uniform).unwrap() + 1e-12);
    }

    // Swapping prediction and truth swaps precision and recall; F1 is
    // invariant under the swap.
    #[test]
    fn score_swap_symmetry(d in 2usize..5, bits in prop::collection::vec(any::<bool>(), 20), bits2 in prop::collection::vec(any::<bool>(), 20)) {
        let pred = graph_from_bits(d, &bits);
        let truth = graph_from_bits(d, &bits2);
        let ab = score(&pred, &truth).unwrap();
        let ba = score(&truth, &pred).unwrap();
        prop_assert_eq!(ab.false_positives, ba.false_negatives);
        prop_assert_eq!(ab.false_negatives, ba.false_positives);
        prop_assert!((ab.precision - ba.recall).abs() < 1e-15);
        prop_assert!((ab.recall - ba.precision).abs() < 1e-15);
        prop_assert!((ab.f1 - ba.f1).abs() < 1e-15);
    }

    // F1 bounds and the zero-F1 condition.
    #[test]
    fn f1_range_and_zero_condition(d in 2usize..5, bits in prop::collection::vec(any::<bool>(), 20), bits2 in prop::collection::vec(any::<bool>(), 20)) {
        let pred = graph_from_bits(d, &bits);
        let truth = graph_from_bits(d, &bits2);
        let m = score(&pred, &truth).unwrap();
        prop_assert!((0.0..=1.0).contains(&m.f1));
        if pred.edge_count() + truth.edge_count() > 0 {
            prop_assert_eq!(m.f1 == 0.0, m.true_positives == 0);
        }
    }

    // Adding a window-graph edge never removes a summary edge.
    #[test]
    fn summarize_is_monotone(d in 2usize..4, q_max in 1usize..6, edges in prop::collection::vec((0usize..4, 0usize..4, 1usize..6), 0..8), extra in (0usize..4, 0usize..4, 1usize..6)) {
        let mut w = WindowGraph::new(d, q_max);
        for (f, t, q) in edges {
            if f < d && t < d && q <= q_max {
                w.set_lagged(f, t, q, true);
            }
        }
        let before = summarize(&w);
        let (f, t, q) = extra;
        if f < d && t < d && q <= q_max {
            w.set_lagged(f, t, q, true);
        }
        let after = summarize(&w);
        for from in 0..d {
            for to in 0..d {
                prop_assert!(!before.has(from, to) || after.has(from, to));
            }
        }
    }

    // The detection window always contains both endpoints.
    #[test]
    fn detection_window_contains_endpoints(delay in 1.0f64..200.0, q in 1usize..100) {
        let w = detection_window(delay, q);
        prop_assert!(w.contains(delay));
        prop_assert!(w.contains(delay / q as f64));
        prop_assert!(w.k_min <= w.k_max);
    }

    // Incomplete beta is monotone in x and hits a quadrature spot check.
    #[test]
    fn beta_monotone_in_x(a in 1.0f64..20.0, b in 1.0f64..20.0, x1 in 0.0f64..1.0, x2 in 0.0f64..1.0) {
        let (lo, hi) = if x1 <= x2 { (x1, x2) } else { (x2, x1) };
        let vlo = regularized_incomplete_beta(lo, a, b).unwrap();
        let vhi = regularized_incomplete_beta(hi, a, b).unwrap();
        prop_assert!(vlo <= vhi + 1e-12);
    }

    // Quantile round trip over random degrees of freedom.
    #[test]
    fn f_quantile_round_trip(p in 0.001f64..0.999, d1 in 1usize..30, d2 in 1usize..2000) {
        let q = f_quantile(p, d1, d2).unwrap();
        let back = f_cdf(q, d1, d2).unwrap();
        prop_assert!((back - p).abs() < 1e-9);
    }

    // 9-significant-digit rendering parses back to within rounding.
    #[test]
    fn format_sig_parses_back(x in prop::num::f64::NORMAL) {
        let s = format_sig(x);
        let back: f64 = s.parse().unwrap();
        prop_assert!((back - x).abs() <= 5e-9 * x.abs(), "{x} -> {s} -> {back}");
    }
}

// Spot checks against the independent oracles, frozen at spec tolerances.
#[test]
fn beta_matches_quadrature_spot_check() {
    let got = regularized_incomplete_beta(0.3, 2.0, 5.0).unwrap();
    let want = common::beta_quadrature(0.3, 2.0, 5.0);
    assert!((got - want).abs() < 1e-10, "{got} vs quadrature {want}");
}

#[test]
fn f_quantile_matches_bisection_oracle() {
    let got = f_quantile(0.999, 5, 100).unwrap();
    let want = common::f_quantile_bisection(0.999, 5, 100);
    assert!((got - want).abs() < 1e-6, "{got} vs bisection {want}");
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(16))]

    // TE depends only on ranks: positive affine + exp transforms change
    // nothing with quantile binning.
    #[test]
    fn te_is_rank_invariant(seed in any::<u64>(), scale in 0.05f64..2.0, offset in -3.0f64..3.0) {
        let mut rng = SplitMix64::new(seed);
        let x: Vec<f64> = (0..800).map(|_| rng.next_gaussian()).collect();
        let y: Vec<f64> = (0..800).map(|_| rng.next_gaussian()).collect();
        let transformed: Vec<f64> = x.iter().map(|v| (scale * v + offset).exp()).collect();
        let a = transfer_entropy(&x, &y, 3, 2, 9, 7).unwrap();
        let b = transfer_entropy(&transformed, &y, 3, 2, 9, 7).unwrap();
        prop_assert!((a.statistic - b.statistic).abs() < 1e-12);
        prop_assert_eq!(a.decision, b.decision);
    }

    // Larger penalty never selects a larger window.
    #[test]
    fn bic_selection_never_exceeds_aic(seed in any::<u64>()) {
        let mut rng = SplitMix64::new(seed);
        let x: Vec<f64> = {
            let mut v = vec![0.0f64; 1500];
            for i in 1..1500 {
                v[i] = 0.6 * v[i - 1] + rng.next_gaussian();
            }
            v
        };
        let s = SignalSet::new(vec![x], 1.0, vec!["x".into()]).unwrap();
        let aic = select_order_ic(&s, 0, 8, OrderCriterion::Aic).unwrap();
        let bic = select_order_ic(&s, 0, 8, OrderCriterion::Bic).unwrap();
        prop_assert!(bic.selected <= aic.selected);
    }
}
