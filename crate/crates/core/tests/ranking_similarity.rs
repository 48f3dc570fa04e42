mod common;

use common::{brute_force_aj, list};
use proptest::prelude::*;
use topic_stability::ranking::{average_jaccard, jaccard_at_depth, jaccard_profile, running_average_jaccard};
use topic_stability::RankedList;

fn table1() -> (RankedList, RankedList) {
    let terms = ["album", "music", "best", "award", "win", "sport", "medal"];
    let idx = |w: &str| terms.iter().position(|t| *t == w).unwrap();
    let r1 = ["album", "music", "best", "award", "win"].map(idx);
    let r2 = ["sport", "best", "win", "medal", "award"].map(idx);
    (list(&r1), list(&r2))
}

fn round3(x: f64) -> f64 {
    (x * 1000.0).round() / 1000.0
}

#[test]
fn table1_per_depth_jaccard() {
    let (r1, r2) = table1();
    let got: Vec<f64> = jaccard_profile(&r1, &r2, 5).into_iter().map(round3).collect();
    assert_eq!(got, vec![0.000, 0.000, 0.200, 0.143, 0.429]);
    assert_eq!(round3(jaccard_at_depth(&r1, &r2, 3)), 0.200);
    assert_eq!(round3(jaccard_at_depth(&r1, &r2, 5)), 0.429);
}

#[test]
fn table1_running_average() {
    let (r1, r2) = table1();
    let got: Vec<f64> = running_average_jaccard(&r1, &r2, 5).into_iter().map(round3).collect();
    assert_eq!(got, vec![0.000, 0.000, 0.067, 0.086, 0.154]);
    assert_eq!(round3(average_jaccard(&r1, &r2, 5)), 0.154);
}

#[test]
fn swapped_pair_hand_value() {
    assert_eq!(average_jaccard(&list(&[0, 1]), &list(&[1, 0]), 2), 0.5);
}

fn distinct_list(universe: usize, max_len: usize) -> impl Strategy<Value = Vec<usize>> {
    Just((0..universe).collect::<Vec<_>>())
        .prop_shuffle()
        .prop_flat_map(move |v| (0..=max_len).prop_map(move |len| v[..len].to_vec()))
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(1000))]

    #[test]
    fn matches_brute_force(r1 in distinct_list(12, 8), r2 in distinct_list(12, 8), t in 1usize..=8) {
        let got = average_jaccard(&list(&r1), &list(&r2), t);
        prop_assert!((got - brute_force_aj(&r1, &r2, t)).abs() < 1e-12);
    }

    #[test]
    fn symmetric_bounded_and_reflexive(r1 in distinct_list(30, 20), r2 in distinct_list(30, 20), t in 1usize..=20) {
        let (a, b) = (list(&r1), list(&r2));
        let x = average_jaccard(&a, &b, t);
        prop_assert_eq!(x, average_jaccard(&b, &a, t));
        prop_assert!((0.0..=1.0).contains(&x));
        if !r1.is_empty() {
            prop_assert_eq!(average_jaccard(&a, &a, t), 1.0);
        }
    }

    #[test]
    fn disjoint_lists_score_zero(r in distinct_list(20, 10), t in 1usize..=10) {
        let other: Vec<usize> = r.iter().map(|&i| i + 100).collect();
        prop_assert_eq!(average_jaccard(&list(&r), &list(&other), t), 0.0);
    }

    #[test]
    fn disagreement_at_the_top_costs_more(r in distinct_list(40, 20).prop_filter("t >= 3", |v| v.len() >= 3)) {
        let t = r.len();
        let base = list(&r);
        let mut top = r.clone();
        top.swap(0, t - 1);
        let mut bottom = r.clone();
        bottom.swap(t - 2, t - 1);
        let a = average_jaccard(&list(&top), &base, t);
        let b = average_jaccard(&list(&bottom), &base, t);
        prop_assert!(1.0 - a > 1.0 - b);
    }
}
