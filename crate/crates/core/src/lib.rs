//! Unsupervised extractive summarization over heterogeneous text graphs.
//!
//! A document is turned into a graph of word and sentence nodes joined by
//! word-word, word-sentence, and sentence-sentence edges. Metapath-guided
//! random walks over that graph feed a heterogeneous skip-gram model with
//! per-type negative sampling, and the learned sentence vectors are ranked
//! with a thresholded directed-centrality score to pick summary sentences.
//!
//! The crate also ships LEAD / TextRank / greedy-oracle baselines and a
//! ROUGE-1/2/L evaluator so experiments are self-contained.

pub mod baselines;
pub mod config;
pub mod corpus;
pub mod embed;
pub mod error;
pub mod graph;
pub mod keywords;
pub mod pipeline;
pub mod rank;
pub mod rouge;
pub mod walks;

mod seeding;

pub use error::{Error, Result};
