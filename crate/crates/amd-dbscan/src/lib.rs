//! Adaptive multi-density DBSCAN.
//!
//! Classic DBSCAN needs a hand-picked `(Eps, MinPts)` pair and a single pair
//! cannot fit datasets whose clusters differ wildly in density. This crate
//! adapts both parameters from the dataset's own distance distribution and
//! clusters in layers, one `(Eps, MinPts)` pair per density regime:
//!
//! 1. [`param_adapt`] — build the paired Eps/MinPts candidate lists, find
//!    the first stable DBSCAN cluster count, and binary-search the largest
//!    index still producing it; the MinPts there becomes the adaptive k.
//! 2. [`eps_candidates`] — histogram the k-dis values (distance to the k-th
//!    nearest neighbor), count the peaks, and run 1-D K-means with that K;
//!    the centers are the candidate Eps list.
//! 3. [`multi_density`] — run DBSCAN once per candidate Eps in ascending
//!    order, freezing clustered points between layers; leftovers are noise.
//!
//! [`metrics`] provides the evaluation stack (VNN density measure, NMI,
//! assignment-matched accuracy) and [`cli`] the benchmark command-line
//! surface. See the `examples/` directory for one runnable example per
//! capability; `amd_dbscan::multi_density::amd_dbscan` is the end-to-end
//! entry point.

pub mod cli;
pub mod dataset;
pub mod dbscan;
pub mod distance;
pub mod eps_candidates;
pub mod error;
pub mod metrics;
pub mod multi_density;
pub mod param_adapt;
pub mod report;
pub mod svg;

pub use dataset::{generate_blobs, load_dataset, BlobsSpec, Dataset, LabelHint, NOISE_LABEL};
pub use dbscan::{count_clusters, dbscan, Clustering, DbscanParams};
pub use distance::SortedNeighborDistances;
pub use error::{Error, Result};
pub use multi_density::{amd_dbscan, PipelineOptions, PipelineResult};
pub use param_adapt::{adapt_k, AdaptationResult, ParameterTable};
