//! Acceptance criteria, one line each.
//!
//! Criteria 3, 4 and 6 need the published preprocessed bbc corpus; point
//! `BBC_CORPUS` at its `.mtx` file (with `.terms`/`.docs` alongside) or place it at
//! `tests/data/bbc/bbc.mtx`. Without it those criteria print FAIL with the reason.
//! Criterion 8 is optional and reads `GUARDIAN_CORPUS` the same way.
//!
//! The process exits non-zero when a criterion fails on data that was present.

mod common;

use std::path::PathBuf;
use std::time::Instant;

use ndarray::Array2;
use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use topic_stability::cli::{curve_correlations, load_for_analysis};
use topic_stability::consensus::{accumulate_consensus, ConnectivityMatrix};
use topic_stability::factorization::nndsvd_init;
use topic_stability::hungarian::max_weight_matching;
use topic_stability::ranking::{jaccard_profile, running_average_jaccard};
use topic_stability::stability::find_peaks_in;
use topic_stability::synthetic::synthetic_corpus;
use topic_stability::{
    agree, average_jaccard, cophenetic_score, nmf, run_protocol, Analysis, ConsensusMatrix, DocTermMatrix,
    InitStrategy, Linkage, NmfOptions, RankedList, RankingSet, StabilityConfig,
};

enum Outcome {
    Pass(String),
    Fail(String),
    /// Required input missing: reported as FAIL, not an implementation defect.
    Missing(String),
    /// Optional criterion without its input.
    Skip(String),
}

use Outcome::*;

fn check(ok: bool, detail: String) -> Outcome {
    if ok {
        Pass(detail)
    } else {
        Fail(detail)
    }
}

fn locate(var: &str, fallback: &str) -> Option<PathBuf> {
    if let Ok(p) = std::env::var(var) {
        return Some(PathBuf::from(p));
    }
    let p = PathBuf::from(env!("CARGO_MANIFEST_DIR")).join(fallback);
    p.exists().then_some(p)
}

fn desk_config() -> StabilityConfig {
    StabilityConfig { k_min: 2, k_max: 12, tau: 20, t: 20, max_iter: 50, seed: 1, ..Default::default() }
}

fn criterion1() -> Outcome {
    let terms = ["album", "music", "best", "award", "win", "sport", "medal"];
    let idx = |w: &str| terms.iter().position(|t| *t == w).unwrap();
    let r1 = RankedList::new(["album", "music", "best", "award", "win"].map(idx).to_vec()).unwrap();
    let r2 = RankedList::new(["sport", "best", "win", "medal", "award"].map(idx).to_vec()).unwrap();
    let r3 = |v: Vec<f64>| v.into_iter().map(|x| (x * 1000.0).round() / 1000.0).collect::<Vec<_>>();
    let jac = r3(jaccard_profile(&r1, &r2, 5));
    let aj = r3(running_average_jaccard(&r1, &r2, 5));
    check(
        jac == [0.0, 0.0, 0.2, 0.143, 0.429] && aj == [0.0, 0.0, 0.067, 0.086, 0.154],
        format!("Jaccard {jac:?}, running AJ {aj:?}"),
    )
}

fn criterion2() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(2);
    let mut hits = 0;
    for _ in 0..100 {
        let m: Vec<Vec<f64>> = (0..6).map(|_| (0..6).map(|_| rng.gen::<f64>()).collect()).collect();
        let p = max_weight_matching(&m);
        let got: f64 = p.iter().enumerate().map(|(i, &j)| m[i][j]).sum();
        if (got - common::brute_force_max(&m)).abs() < 1e-12 {
            hits += 1;
        }
    }
    check(hits == 100, format!("{hits}/100 optimal against 720-permutation search"))
}

struct Bbc {
    analysis: Analysis,
    curve: Vec<f64>,
}

fn bbc() -> Result<Bbc, String> {
    let path = locate("BBC_CORPUS", "tests/data/bbc/bbc.mtx")
        .ok_or("bbc corpus not found (set BBC_CORPUS=/path/to/bbc.mtx)")?;
    let matrix = load_for_analysis(&path).map_err(|e| format!("cannot load {}: {e}", path.display()))?;
    let analysis = Analysis::run(&matrix, &desk_config(), None).map_err(|e| e.to_string())?;
    let curve = analysis.curve(20).map_err(|e| e.to_string())?.values();
    Ok(Bbc { analysis, curve })
}

fn criterion3(bbc: &Result<Bbc, String>) -> Outcome {
    match bbc {
        Err(e) => Missing(e.clone()),
        Ok(b) => {
            let ks = desk_config().k_values();
            let best = (0..ks.len()).fold(0, |a, i| if b.curve[i] > b.curve[a] { i } else { a });
            check(ks[best] == 5, format!("argmax k={}, curve {:.3?}", ks[best], b.curve))
        }
    }
}

fn criterion4(bbc: &Result<Bbc, String>) -> Outcome {
    match bbc {
        Err(e) => Missing(e.clone()),
        Ok(b) => match b.analysis.consensus_scores(Linkage::Average) {
            Err(e) => Fail(e.to_string()),
            Ok(scores) => {
                let i = 5 - desk_config().k_min;
                let peak = scores[i] > scores[i - 1] && scores[i] > scores[i + 1];
                check(peak, format!("consensus curve {scores:.3?}"))
            }
        },
    }
}

fn criterion5() -> Outcome {
    let run = || -> topic_stability::Result<(bool, f64, f64)> {
        let m = synthetic_corpus(500, 1500, 7)?;
        let report = run_protocol(&m, &StabilityConfig { seed: 7, ..desk_config() })?;
        let c = report.curve();
        let max = c.iter().copied().fold(f64::MIN, f64::max);
        let min = c.iter().copied().fold(f64::MAX, f64::min);
        Ok((report.no_clustering_tendency, max, max - min))
    };
    match run() {
        Err(e) => Fail(e.to_string()),
        Ok((flag, max, range)) => check(
            flag && max < 0.5 && range < 0.1,
            format!("flag={flag}, max={max:.3}, range={range:.3}"),
        ),
    }
}

fn criterion6(bbc: &Result<Bbc, String>) -> Outcome {
    match bbc {
        Err(e) => Missing(e.clone()),
        Ok(b) => {
            let curves: Result<Vec<Vec<f64>>, _> =
                [10, 20, 50, 100].iter().map(|&t| b.analysis.curve(t).map(|c| c.values())).collect();
            match curves {
                Err(e) => Fail(e.to_string()),
                Ok(curves) => {
                    let corr = curve_correlations(&curves);
                    let min = corr.iter().flatten().map(|r| r.unwrap_or(f64::NAN)).fold(f64::INFINITY, f64::min);
                    check(min > 0.9, format!("minimum pairwise correlation {min:.3}"))
                }
            }
        }
    }
}

fn random_list(rng: &mut ChaCha8Rng) -> Vec<usize> {
    let mut v: Vec<usize> = (0..30).collect();
    v.shuffle(rng);
    v.truncate(rng.gen_range(1..=20));
    v
}

fn criterion7() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(7);
    let mut failures = Vec::new();

    let aj_ok = (0..1000).all(|_| {
        let (a, b) = (random_list(&mut rng), random_list(&mut rng));
        let t = rng.gen_range(1..=20);
        let (ra, rb) = (RankedList::new(a).unwrap(), RankedList::new(b).unwrap());
        let x = average_jaccard(&ra, &rb, t);
        x == average_jaccard(&rb, &ra, t) && (0.0..=1.0).contains(&x) && average_jaccard(&ra, &ra, t) == 1.0
    });
    if !aj_ok {
        failures.push("AJ symmetry/bounds/identity");
    }

    let agree_ok = (0..200).all(|_| {
        let k = rng.gen_range(1..=6);
        let topics = |rng: &mut ChaCha8Rng| -> Vec<RankedList> {
            (0..k)
                .map(|_| {
                    let mut v: Vec<usize> = (0..25).collect();
                    v.shuffle(rng);
                    RankedList::new(v[..5].to_vec()).unwrap()
                })
                .collect()
        };
        let (x, y) = (topics(&mut rng), topics(&mut rng));
        let mut xs = x.clone();
        xs.shuffle(&mut rng);
        let a = agree(&RankingSet::new(x, 5).unwrap(), &RankingSet::new(y.clone(), 5).unwrap()).unwrap().score;
        let b = agree(&RankingSet::new(xs, 5).unwrap(), &RankingSet::new(y, 5).unwrap()).unwrap().score;
        (a - b).abs() < 1e-12
    });
    if !agree_ok {
        failures.push("agree permutation invariance");
    }

    let nmf_ok = (0..50).all(|_| {
        let (m, n) = (rng.gen_range(3..20), rng.gen_range(3..20));
        let rows: Vec<Vec<f64>> =
            (0..m).map(|_| (0..n).map(|_| if rng.gen_bool(0.4) { 0.0 } else { rng.gen() }).collect()).collect();
        let a = common::matrix(&rows);
        let k = rng.gen_range(1..=3);
        let f = nmf(&a, k, InitStrategy::Random { seed: rng.gen() }, &NmfOptions::default()).unwrap();
        let tol = 1e-10 * a.frobenius_sq().sqrt().max(1.0);
        f.error_trace.windows(2).all(|p| p[1] <= p[0] + tol)
    });
    if !nmf_ok {
        failures.push("NMF error monotonicity");
    }

    let base = synthetic_corpus(80, 300, 3).unwrap();
    let nndsvd_ok = {
        let runs: Vec<(Array2<f64>, Array2<f64>)> = (0..3).map(|_| nndsvd_init(&base, 6).unwrap()).collect();
        let bits = |r: &(Array2<f64>, Array2<f64>)| r.0.iter().chain(r.1.iter()).map(|x| x.to_bits()).collect::<Vec<_>>();
        bits(&runs[0]) == bits(&runs[1]) && bits(&runs[1]) == bits(&runs[2])
    };
    if !nndsvd_ok {
        failures.push("NNDSVD determinism");
    }

    let config = StabilityConfig { k_min: 2, k_max: 4, tau: 3, seed: 11, ..Default::default() };
    let e2e_ok = run_protocol(&base, &config).unwrap().to_json().unwrap()
        == run_protocol(&base, &config).unwrap().to_json().unwrap();
    if !e2e_ok {
        failures.push("end-to-end report determinism");
    }

    let consensus_ok = (0..50).all(|_| {
        let n = rng.gen_range(3..20);
        let runs: Vec<(Vec<usize>, ConnectivityMatrix)> = (0..rng.gen_range(1..6))
            .map(|_| {
                let docs: Vec<usize> = (0..n).filter(|_| rng.gen_bool(0.8)).collect();
                let labels = docs.iter().map(|_| rng.gen_range(0..3)).collect();
                (docs, ConnectivityMatrix::from_labels(labels))
            })
            .collect();
        let c = accumulate_consensus(n, &runs).unwrap().to_dense();
        (0..n).all(|i| (0..n).all(|j| c[[i, j]] == c[[j, i]] && (0.0..=1.0).contains(&c[[i, j]])))
    });
    if !consensus_ok {
        failures.push("consensus symmetry/bounds");
    }

    let block_ok = [vec![3, 4], vec![2, 2, 5], vec![6, 1, 3]].iter().all(|sizes: &Vec<usize>| {
        let labels: Vec<usize> = sizes.iter().enumerate().flat_map(|(b, &s)| std::iter::repeat_n(b, s)).collect();
        let n = labels.len();
        let c = Array2::from_shape_fn((n, n), |(i, j)| f64::from(u8::from(labels[i] == labels[j])));
        let score = cophenetic_score(&ConsensusMatrix::from_dense(&c).unwrap(), Linkage::Average).unwrap();
        (score - 1.0).abs() < 1e-12
    });
    if !block_ok {
        failures.push("cophenetic score on block-diagonal consensus");
    }

    check(failures.is_empty(), if failures.is_empty() { "all seven suites hold".into() } else { failures.join(", ") })
}

fn criterion8() -> Outcome {
    let Some(path) = locate("GUARDIAN_CORPUS", "tests/data/guardian2013/guardian2013.mtx") else {
        return Skip("optional; GUARDIAN_CORPUS not set".into());
    };
    let run = || -> topic_stability::Result<(Vec<usize>, Vec<f64>)> {
        let m: DocTermMatrix = load_for_analysis(&path)?;
        let report = run_protocol(&m, &desk_config())?;
        Ok((find_peaks_in(&report.k_values(), &report.curve()), report.curve()))
    };
    match run() {
        Err(e) => Fail(e.to_string()),
        Ok((peaks, curve)) => check(
            peaks.contains(&3) && peaks.contains(&6),
            format!("peaks {peaks:?}, curve {curve:.3?}"),
        ),
    }
}

fn main() {
    let mut defects = 0;
    let mut report = |n: usize, name: &str, job: &dyn Fn() -> Outcome| {
        let start = Instant::now();
        let outcome = job();
        let secs = start.elapsed().as_secs_f64();
        let (status, detail) = match outcome {
            Pass(d) => ("PASS", d),
            Fail(d) => {
                defects += 1;
                ("FAIL", d)
            }
            Missing(d) => ("FAIL", format!("input unavailable: {d}")),
            Skip(d) => ("SKIP", d),
        };
        println!("criterion {n} [{name}]: {status} ({secs:.1}s) {detail}");
    };

    report(1, "average jaccard golden values", &criterion1);
    report(2, "hungarian vs exhaustive search", &criterion2);
    let corpus = bbc();
    report(3, "bbc stability argmax", &|| criterion3(&corpus));
    report(4, "bbc consensus peak", &|| criterion4(&corpus));
    report(5, "synthetic negative control", &criterion5);
    report(6, "t-sensitivity on bbc", &|| criterion6(&corpus));
    report(7, "property suites", &criterion7);
    report(8, "guardian-2013 peaks", &criterion8);

    if defects > 0 {
        std::process::exit(1);
    }
}
