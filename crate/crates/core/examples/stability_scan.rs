//! Stability curve over k for a corpus with five planted topics, or for a corpus
//! given on the command line.
//!
//!     cargo run --release --example stability_scan [corpus.mtx] [tau]

use topic_stability::cli::load_for_analysis;
use topic_stability::stability::{Analysis, StabilityConfig};
use topic_stability::synthetic::PlantedTopics;

fn main() -> topic_stability::Result<()> {
    let mut args = std::env::args().skip(1);
    let matrix = match args.next() {
        Some(path) => load_for_analysis(path.as_ref())?,
        None => PlantedTopics::default().corpus()?.0,
    };
    let tau = args.next().and_then(|s| s.parse().ok()).unwrap_or(20);
    let config = StabilityConfig { k_min: 2, k_max: 10, tau, seed: 1, ..Default::default() };

    let analysis = Analysis::run(&matrix, &config, None)?;
    let report = analysis.report()?;
    for r in &report.records {
        println!("k={:2}  stability={:.3}  {}", r.k, r.stability, "#".repeat((r.stability * 50.0) as usize));
    }
    println!("peaks: {:?}", report.peaks);
    println!("no clustering tendency: {}", report.no_clustering_tendency);

    if let Some(&k) = report.peaks.first() {
        let record = report.records.iter().find(|r| r.k == k).unwrap();
        for (i, topic) in record.reference_topics.iter().enumerate() {
            println!("topic {}: {}", i + 1, topic[..topic.len().min(8)].join(", "));
        }
    }
    Ok(())
}
