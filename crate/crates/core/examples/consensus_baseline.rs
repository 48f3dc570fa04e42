//! The consensus-matrix baseline next to term stability, computed from the same
//! sample factorizations.
//!
//!     cargo run --release --example consensus_baseline

use topic_stability::consensus::{rescale_consensus, DEFAULT_CONSENSUS_FLOOR};
use topic_stability::synthetic::PlantedTopics;
use topic_stability::{Analysis, Linkage, StabilityConfig};

fn main() -> topic_stability::Result<()> {
    let (matrix, _) = PlantedTopics { docs: 200, topics: 4, ..Default::default() }.corpus()?;
    let config = StabilityConfig { k_min: 2, k_max: 7, tau: 10, seed: 2, ..Default::default() };
    let analysis = Analysis::run(&matrix, &config, None)?;

    let stability = analysis.curve(config.t)?.values();
    let consensus = analysis.consensus_scores(Linkage::Average)?;
    let rescaled = rescale_consensus(&consensus, DEFAULT_CONSENSUS_FLOOR);
    println!("  k  stability  cophenetic  rescaled");
    for (i, k) in config.k_values().into_iter().enumerate() {
        println!("{k:3}  {:9.3}  {:10.3}  {:8.3}", stability[i], consensus[i], rescaled[i]);
    }

    let c = analysis.consensus_matrix(4)?;
    println!("k=4: {} of {} document pairs never sampled together", c.unobserved_pairs(), c.condensed().len());
    Ok(())
}
