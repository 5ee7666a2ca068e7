//! Sentiment-aware word and document embeddings.
//!
//! Word vectors come from three channels built over one vocabulary:
//! corpus cooccurrence statistics (PPMI + SVD, or fuzzy clustering),
//! dictionary definitions scaled by supervised polarity, and contextual
//! polarity scores. Documents are averaged word vectors, optionally extended
//! with polarity summary features, and are classified by a linear SVM under
//! stratified cross-validation.

pub mod classify;
pub mod compose;
pub mod corpus_embed;
pub mod dict_embed;
pub mod error;
pub mod fingerprint;
pub mod io;
pub mod neighbors;
pub mod pipeline;
pub mod polarity;
pub mod synthetic;
pub mod text;

pub use error::{Error, Result};
