//! Agreement between two topic models given as ranked term lists. Topics are
//! matched one-to-one so that the summed similarity is maximal.
//!
//!     cargo run --example agreement

use topic_stability::{agree, RankedList, RankingSet, Vocabulary};

fn model(vocab: &Vocabulary, topics: &[&[&str]]) -> topic_stability::Result<RankingSet> {
    let lists = topics
        .iter()
        .map(|t| RankedList::new(t.iter().map(|w| vocab.index_of(w).expect("known term")).collect()))
        .collect::<topic_stability::Result<Vec<_>>>()?;
    RankingSet::new(lists, 4)
}

fn main() -> topic_stability::Result<()> {
    let vocab = Vocabulary::new(
        ["bank", "market", "shares", "rates", "match", "goal", "striker", "league", "vote", "party", "election", "seats"]
            .map(String::from)
            .to_vec(),
    )?;
    let a = model(
        &vocab,
        &[&["bank", "market", "shares", "rates"], &["match", "goal", "striker", "league"], &["vote", "party", "election", "seats"]],
    )?;
    let b = model(
        &vocab,
        &[&["party", "election", "vote", "rates"], &["market", "bank", "rates", "shares"], &["goal", "match", "league", "seats"]],
    )?;

    let result = agree(&a, &b)?;
    println!("similarity matrix (rows: model A, columns: model B)");
    for row in result.similarity.rows() {
        println!("  {}", row.iter().map(|v| format!("{v:.3}")).collect::<Vec<_>>().join("  "));
    }
    for (i, &j) in result.permutation.iter().enumerate() {
        println!("A topic {} <-> B topic {}", i + 1, j + 1);
    }
    println!("agreement = {:.3}", result.score);
    println!("{}", serde_json::to_string(&result)?);
    Ok(())
}
