//! Corpus-based embedding channels.
//!
//! Two routes start from the same window cooccurrence matrix:
//!
//! * clustering: row-max normalization, PCA, row cosine similarity,
//!   dissimilarity `1 - cos`, then fuzzy c-means; the membership matrix is
//!   the embedding.
//! * SVD: PPMI weighting followed by a truncated SVD; the rows of `U` are the
//!   embedding.

mod cooccurrence;
mod decomposition;
mod fuzzy;
mod similarity;

use nalgebra::DMatrix;

pub use cooccurrence::{ppmi, row_max_normalize, CooccurrenceMatrix};
pub use decomposition::{
    exact_svd, pca, pca_reduce, randomized_svd, truncated_svd, PcaResult, SvdResult, EXACT_SVD_LIMIT,
};
pub use fuzzy::{fuzzy_cmeans, fuzzy_cmeans_from, random_memberships, FuzzyConfig, FuzzyMembership};
pub use similarity::{cosine, cosine_similarity_matrix, dissimilarity};

use crate::error::Result;

/// Default embedding width for every reduced channel.
pub const DEFAULT_DIMS: usize = 200;

/// PPMI followed by truncated SVD; returns the `U` rows (`V x k`).
pub fn corpus_svd_embedding(cooc: &CooccurrenceMatrix, dims: usize) -> Result<DMatrix<f64>> {
    let weighted = ppmi(cooc.counts())?;
    Ok(truncated_svd(&weighted, dims)?.u)
}

/// Row-max normalization, PCA to `dims`, cosine dissimilarity, fuzzy
/// c-means. Returns the membership matrix (`V x clusters`).
pub fn corpus_cluster_embedding(cooc: &CooccurrenceMatrix, dims: usize, fuzzy: &FuzzyConfig) -> Result<DMatrix<f64>> {
    let normalized = row_max_normalize(cooc.counts())?;
    let reduced = pca_reduce(&normalized, dims)?;
    let distances = dissimilarity(&cosine_similarity_matrix(&reduced));
    Ok(fuzzy_cmeans(&distances, fuzzy)?.memberships)
}
