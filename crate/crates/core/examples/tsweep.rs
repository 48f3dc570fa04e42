//! How much the stability curve depends on the number of top terms `t`. One set
//! of factorizations serves every depth.
//!
//!     cargo run --release --example tsweep

use topic_stability::cli::curve_correlations;
use topic_stability::synthetic::PlantedTopics;
use topic_stability::{Analysis, StabilityConfig};

fn main() -> topic_stability::Result<()> {
    let (matrix, _) = PlantedTopics::default().corpus()?;
    let config = StabilityConfig { k_min: 2, k_max: 9, tau: 10, seed: 4, ..Default::default() };
    let analysis = Analysis::run(&matrix, &config, None)?;

    let depths = [5, 10, 20, 40];
    let curves = depths
        .iter()
        .map(|&t| Ok(analysis.curve(t)?.values()))
        .collect::<topic_stability::Result<Vec<_>>>()?;
    print!("  k");
    for t in depths {
        print!("  t={t:<4}");
    }
    println!();
    for (i, k) in config.k_values().into_iter().enumerate() {
        print!("{k:3}");
        for c in &curves {
            print!("  {:6.3}", c[i]);
        }
        println!();
    }

    println!("pairwise correlation");
    for row in curve_correlations(&curves) {
        println!("  {}", row.iter().map(|r| r.map_or("   NA".into(), |v| format!("{v:5.3}"))).collect::<Vec<_>>().join("  "));
    }
    Ok(())
}
