//! Stage 3: layered clustering, one DBSCAN pass per candidate Eps.
//!
//! Runs the full pipeline on a generated multi-density blob dataset and
//! prints what each layer contributed: its (Eps, MinPts) pair, how many
//! clusters it found, and how many points it claimed. Dense clusters are
//! picked up by the small-Eps layers, sparse ones by the later layers.
//!
//! Run with: `cargo run --example multi_density_layers [path/to/spec.toml]`

use amd_dbscan::dataset::{generate_blobs, BlobsSpec};
use amd_dbscan::distance::SortedNeighborDistances;
use amd_dbscan::metrics::{accuracy, nmi};
use amd_dbscan::multi_density::{amd_dbscan, PipelineOptions};
use amd_dbscan::NOISE_LABEL;
use std::path::PathBuf;

fn main() -> Result<(), Box<dyn std::error::Error>> {
    let path = std::env::args()
        .nth(1)
        .map(PathBuf::from)
        .unwrap_or_else(|| {
            PathBuf::from(concat!(env!("CARGO_MANIFEST_DIR"), "/../../data/specs/blobs1.spec"))
        });
    let spec = BlobsSpec::load(&path)?;
    let ds = generate_blobs(&spec)?;
    println!("dataset: {} (n = {})", ds.name(), ds.len());

    let snd = SortedNeighborDistances::compute(&ds)?;
    let result = amd_dbscan(&snd, PipelineOptions::default())?;

    println!("k = {}, {} candidate Eps value(s)", result.k_used(), result.candidates.eps_values.len());
    for layer in &result.layers {
        println!(
            "layer {}: Eps = {:.4}, MinPts = {}, clusters = {}, points claimed = {}",
            layer.layer_index + 1,
            layer.eps,
            layer.min_pts,
            layer.clusters_found,
            layer.points_clustered
        );
    }
    let noise = result
        .clustering
        .labels
        .iter()
        .filter(|&&l| l == NOISE_LABEL)
        .count();
    println!(
        "total: {} clusters, {} noise points",
        result.clustering.num_clusters, noise
    );
    if let Some(truth) = ds.truth_labels() {
        println!(
            "accuracy = {:.4}, NMI = {:.4}",
            accuracy(truth, &result.clustering.labels)?,
            nmi(truth, &result.clustering.labels)?
        );
    }
    Ok(())
}
