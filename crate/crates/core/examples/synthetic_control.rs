//! Negative control: a random corpus of 500 documents over 1,500 terms has no
//! topics, so its stability curve stays flat and low.
//!
//!     cargo run --release --example synthetic_control

use topic_stability::stability::{Analysis, StabilityConfig};
use topic_stability::synthetic::synthetic_corpus;

fn main() -> topic_stability::Result<()> {
    let matrix = synthetic_corpus(500, 1500, 7)?;
    println!("{} terms x {} documents", matrix.n_terms(), matrix.n_docs());

    let config = StabilityConfig { tau: 20, seed: 7, ..Default::default() };
    let report = Analysis::run(&matrix, &config, None)?.report()?;
    let curve = report.curve();
    for (k, s) in report.k_values().iter().zip(&curve) {
        println!("k={k:2}  stability={s:.3}");
    }
    let max = curve.iter().copied().fold(f64::MIN, f64::max);
    let min = curve.iter().copied().fold(f64::MAX, f64::min);
    println!("max={max:.3} range={:.3} no clustering tendency: {}", max - min, report.no_clustering_tendency);
    Ok(())
}
