mod common;

use common::matrix;
use topic_stability::consensus::Linkage;
use topic_stability::stability::{
    consensus_for_k, factorize_all, generate_samples, reference_model, stability_for_k, KRuns, SampleRun,
};
use topic_stability::synthetic::{synthetic_corpus, PlantedTopics};
use topic_stability::{run_protocol, Analysis, DocTermMatrix, StabilityConfig};

fn small_planted() -> DocTermMatrix {
    PlantedTopics { docs: 120, topics: 3, terms_per_topic: 15, background_terms: 40, purity: 0.8, seed: 4 }
        .corpus()
        .unwrap()
        .0
}

fn quick(k_min: usize, k_max: usize) -> StabilityConfig {
    StabilityConfig { k_min, k_max, tau: 4, t: 10, max_iter: 30, seed: 12, ..Default::default() }
}

#[test]
fn full_ratio_samples_are_copies() {
    let m = small_planted();
    let samples = generate_samples(&m, 3, 1.0, 0).unwrap();
    assert_eq!(samples.len(), 3);
    for s in &samples {
        assert_eq!(s.to_dense(), m.to_dense());
        assert_eq!(s.origin(), m.origin());
    }
}

#[test]
fn samples_hold_eighty_percent_and_are_reproducible() {
    let m = synthetic_corpus(100, 300, 1).unwrap();
    let a = generate_samples(&m, 5, 0.8, 42).unwrap();
    let b = generate_samples(&m, 5, 0.8, 42).unwrap();
    for (x, y) in a.iter().zip(&b) {
        assert_eq!(x.n_docs(), 80);
        assert_eq!(x.origin(), y.origin());
    }
    assert_ne!(a[0].origin(), a[1].origin());
}

#[test]
fn reference_model_is_deterministic_and_separates_blocks() {
    let rows = vec![
        vec![1.0, 1.0, 0.0, 0.0],
        vec![1.0, 1.0, 0.0, 0.0],
        vec![0.0, 0.0, 1.0, 1.0],
        vec![0.0, 0.0, 1.0, 1.0],
    ];
    let a = matrix(&rows);
    let r1 = reference_model(&a, 2, 2, 50).unwrap();
    assert_eq!(r1, reference_model(&a, 2, 2, 50).unwrap());
    let mut blocks: Vec<Vec<usize>> = r1
        .topics()
        .iter()
        .map(|t| {
            let mut v = t.items().to_vec();
            v.sort();
            v
        })
        .collect();
    blocks.sort();
    assert_eq!(blocks, vec![vec![0, 1], vec![2, 3]]);
}

#[test]
fn reference_against_itself_is_perfectly_stable() {
    let m = small_planted();
    let runs = factorize_all(&m, &[], &[3], &quick(3, 3), None).unwrap().remove(0);
    let copies = KRuns {
        k: 3,
        runs: (0..4)
            .map(|i| SampleRun { sample: i, seed: 0, factorization: runs.reference.clone(), fingerprint: String::new() })
            .collect(),
        reference: runs.reference,
    };
    let (_, scores) = copies.stability(10).unwrap();
    assert_eq!(scores, vec![1.0; 4]);
}

#[test]
fn report_invariants() {
    let m = small_planted();
    let report = run_protocol(&m, &quick(2, 5)).unwrap();
    assert_eq!(report.records.len(), 4);
    let fp = &report.records[0].samples_fingerprint;
    for r in &report.records {
        assert_eq!(&r.samples_fingerprint, fp);
        assert_eq!(r.scores.len(), 4);
        let mean = r.scores.iter().sum::<f64>() / r.scores.len() as f64;
        assert!((r.stability - mean).abs() < 1e-12);
        assert!((0.0..=1.0).contains(&r.stability));
        assert_eq!(r.reference_topics.len(), r.k);
    }
    assert_eq!(report.corpus.documents, 120);
}

#[test]
fn single_k_gives_one_record() {
    let report = run_protocol(&small_planted(), &quick(3, 3)).unwrap();
    assert_eq!(report.records.len(), 1);
    assert_eq!(report.peaks, vec![3]);
}

#[test]
fn reports_do_not_depend_on_workers_or_reruns() {
    let m = small_planted();
    let config = quick(2, 4);
    let one = Analysis::run(&m, &config, Some(1)).unwrap().report().unwrap().to_json().unwrap();
    let three = Analysis::run(&m, &config, Some(3)).unwrap().report().unwrap().to_json().unwrap();
    let default = run_protocol(&m, &config).unwrap().to_json().unwrap();
    assert_eq!(one, three);
    assert_eq!(one, default);
}

#[test]
fn widening_the_range_keeps_existing_runs() {
    let m = small_planted();
    let narrow = Analysis::run(&m, &quick(2, 3), None).unwrap();
    let wide = Analysis::run(&m, &quick(3, 5), None).unwrap();
    let a = narrow.runs().iter().find(|r| r.k == 3).unwrap();
    let b = wide.runs().iter().find(|r| r.k == 3).unwrap();
    for (x, y) in a.runs.iter().zip(&b.runs) {
        assert_eq!(x.fingerprint, y.fingerprint);
    }
}

#[test]
fn per_k_entry_points_reuse_the_same_factorizations() {
    let m = small_planted();
    let config = quick(2, 4);
    let analysis = Analysis::run(&m, &config, None).unwrap();
    let curve = analysis.curve(config.t).unwrap();
    let consensus = analysis.consensus_scores(Linkage::Average).unwrap();
    let samples = generate_samples(&m, config.tau, config.beta, config.seed).unwrap();
    for (i, k) in config.k_values().into_iter().enumerate() {
        let (s, scores) = stability_for_k(&m, &samples, k, &config).unwrap();
        assert_eq!(s, curve.points[i].1);
        assert_eq!(scores, curve.points[i].2);
        assert_eq!(consensus_for_k(&m, &samples, k, &config, Linkage::Average).unwrap(), consensus[i]);
        let again = factorize_all(&m, &samples, &[k], &config, None).unwrap().remove(0);
        for (x, y) in again.runs.iter().zip(&analysis.runs()[i].runs) {
            assert_eq!(x.fingerprint, y.fingerprint);
        }
    }
}

#[test]
fn planted_topics_are_found() {
    let (m, _) = PlantedTopics::default().corpus().unwrap();
    let config = StabilityConfig { k_min: 2, k_max: 8, tau: 10, seed: 3, ..Default::default() };
    let analysis = Analysis::run(&m, &config, None).unwrap();
    let report = analysis.report().unwrap();
    assert_eq!(report.argmax(), Some(5), "curve {:?}", report.curve());
    assert_eq!(report.peaks.first(), Some(&5));
    assert!(!report.no_clustering_tendency);

    let consensus = analysis.consensus_scores(Linkage::Average).unwrap();
    let i = config.k_values().iter().position(|&k| k == 5).unwrap();
    assert!(consensus[i] > consensus[i - 1] && consensus[i] > consensus[i + 1], "consensus {consensus:?}");
}
