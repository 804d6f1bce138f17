//! Evaluation stack: VNN density measure, NMI, and matched accuracy.
//!
//! Prints the variance-of-neighbor-counts (VNN) score and density class for
//! every bundled dataset, then scores the pipeline's labeling of one of them
//! against its ground truth with NMI and assignment-matched accuracy.
//!
//! Run with: `cargo run --example density_metrics`

use amd_dbscan::dataset::{load_dataset, LabelHint};
use amd_dbscan::distance::SortedNeighborDistances;
use amd_dbscan::metrics::{accuracy, nmi, vnn};
use amd_dbscan::multi_density::{amd_dbscan, PipelineOptions};
use std::path::PathBuf;

const BUNDLED: [&str; 6] = [
    "aggregation.txt",
    "compound.txt",
    "d31.txt",
    "flame.txt",
    "r15.txt",
    "unbalance.txt",
];

fn main() -> Result<(), Box<dyn std::error::Error>> {
    let data_dir = PathBuf::from(concat!(env!("CARGO_MANIFEST_DIR"), "/../../data"));
    println!("{:<16} {:>6} {:>10}  class", "dataset", "size", "VNN");
    for file in BUNDLED {
        let ds = load_dataset(data_dir.join(file), LabelHint::Auto)?;
        let snd = SortedNeighborDistances::compute(&ds)?;
        let r = vnn(&snd)?;
        println!("{:<16} {:>6} {:>10.3}  {:?}", ds.name(), ds.len(), r.vnn, r.density_class);
    }

    let ds = load_dataset(data_dir.join("r15.txt"), LabelHint::Auto)?;
    let snd = SortedNeighborDistances::compute(&ds)?;
    let result = amd_dbscan(&snd, PipelineOptions::default())?;
    let truth = ds.truth_labels().expect("r15 ships with labels");
    println!(
        "\nr15 pipeline run: {} clusters, NMI = {:.4}, accuracy = {:.4}",
        result.clustering.num_clusters,
        nmi(truth, &result.clustering.labels)?,
        accuracy(truth, &result.clustering.labels)?
    );
    Ok(())
}
