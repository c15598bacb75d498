//! Identification of similar test steps and test cases written in natural
//! language.
//!
//! The pipeline has three stages:
//!
//! 1. [`corpus`]: load raw test cases and turn every step into a list of
//!    normalized tokens.
//! 2. [`embedding`], [`similarity`] and [`clustering`]: embed the steps,
//!    build a pairwise distance matrix (Word Mover's Distance or cosine) and
//!    group similar steps with average-linkage HAC, K-means, or a
//!    majority-vote ensemble.
//! 3. [`casesim`]: describe every test case by the step clusters it touches
//!    and score case pairs (cluster overlap, Jaccard, cosine over counts, or
//!    counts combined with a name similarity).
//!
//! [`eval`] implements the pairwise precision/recall/F-score protocol used to
//! pick the number of clusters and the similarity thresholds.

pub mod casesim;
pub mod clustering;
pub mod config;
pub mod corpus;
pub mod embedding;
pub mod error;
pub mod eval;
pub mod similarity;

mod components;

pub use error::{Error, Result};
