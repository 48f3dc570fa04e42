//! Term-centric stability analysis for choosing the number of topics `k` in
//! NMF topic models.
//!
//! Topics are compared by their top-ranked terms. A reference model fitted to the
//! full corpus is matched against models fitted to random document samples, and
//! the mean agreement across samples gives `stability(k)`. Peaks in the curve
//! suggest good values of `k`.

pub mod agreement;
pub mod cli;
pub mod consensus;
pub mod corpus;
pub mod error;
pub mod factorization;
pub mod hungarian;
pub mod ranking;
pub mod seed;
pub mod stability;
pub mod stats;
pub mod synthetic;

pub use agreement::{agree, best_match, similarity_matrix, AgreementResult};
pub use consensus::{cophenetic_score, ConsensusMatrix, Linkage};
pub use corpus::{apply_tfidf, build_matrix, load_corpus, save_corpus, DocTermMatrix, RawCorpus, Vocabulary};
pub use error::{Error, Result};
pub use factorization::{extract_ranking_set, nmf, Factorization, InitStrategy, NmfOptions, RankingSet};
pub use ranking::{average_jaccard, RankedList};
pub use stability::{find_peaks, run_protocol, Analysis, StabilityConfig, StabilityReport};
