//! Trait analytics over the category-by-trait boolean matrix: signal series,
//! Pearson correlation, Euclidean distance and a Kruskal minimum spanning
//! tree.

mod correlation;
mod distance;
mod matrix;
mod mst;

pub use correlation::{pearson_correlation, CorrelationMatrix};
pub use distance::{euclidean_distance, DistanceMatrix};
pub use matrix::{build_trait_matrix, signal_series, NullMode, SignalSeries, TraitMatrix, NULL_POLICY_ID, NULL_POLICY_NAME};
pub use mst::{kruskal_mst, MstEdge, MstResult, UnionFind};
