//! Fit NMF with an NNDSVD start and print the top terms of each topic.
//!
//!     cargo run --release --example nmf_topics [k]

use topic_stability::factorization::rank_column;
use topic_stability::synthetic::PlantedTopics;
use topic_stability::{nmf, InitStrategy, NmfOptions};

fn main() -> topic_stability::Result<()> {
    let k = std::env::args().nth(1).and_then(|s| s.parse().ok()).unwrap_or(5);
    let (matrix, _) = PlantedTopics::default().corpus()?;
    let f = nmf(&matrix, k, InitStrategy::Nndsvd, &NmfOptions::default())?;
    println!(
        "{} iterations, error {:.4} -> {:.4}",
        f.iterations(),
        f.error_trace[0],
        f.final_error()
    );
    for c in 0..k {
        let top: Vec<String> = rank_column(&f.w, c, 6)
            .into_iter()
            .map(|(i, w)| format!("{} ({w:.3})", matrix.vocabulary().term(i)))
            .collect();
        println!("topic {}: {}", c + 1, top.join(", "));
    }
    Ok(())
}
