//! Raw text to a weighted document-term matrix, written in Matrix Market form
//! and read back.
//!
//!     cargo run --example preprocess [dir-or-file] [min_df]

use topic_stability::corpus::{english_stopwords, read_raw_corpus};
use topic_stability::{apply_tfidf, build_matrix, load_corpus, save_corpus, RawCorpus};

const DOCS: [&str; 8] = [
    "The striker scored twice as the home side won the league match.",
    "Shares in the bank fell after it reported weaker profits.",
    "A late goal from the striker settled the cup match.",
    "The central bank held interest rates and markets rallied.",
    "The party won the election with a clear majority of seats.",
    "Voters returned the party to power in a close election.",
    "Markets fell as bank shares slid on profit fears.",
    "The league leaders lost their first match of the season.",
];

fn main() -> topic_stability::Result<()> {
    let mut args = std::env::args().skip(1);
    let raw = match args.next() {
        Some(path) => read_raw_corpus(path)?,
        None => RawCorpus::new(DOCS.iter().enumerate().map(|(i, d)| ((i + 1).to_string(), d.to_string())).collect())?,
    };
    let min_df = args.next().and_then(|s| s.parse().ok()).unwrap_or(2);

    let counts = build_matrix(&raw, &english_stopwords(), min_df)?;
    let weighted = apply_tfidf(&counts)?.prune_empty_terms()?;
    println!("{} documents, {} terms, {} non-zeros", weighted.n_docs(), weighted.n_terms(), weighted.nnz());
    println!("vocabulary: {}", weighted.vocabulary().terms().join(" "));

    let dir = std::env::temp_dir().join("topic-stability-preprocess");
    let paths = save_corpus(&dir, "corpus", &weighted)?;
    let back = load_corpus(&paths.mtx)?;
    println!("wrote {}; reload identical: {}", paths.mtx.display(), back.fingerprint() == weighted.fingerprint());
    Ok(())
}
