//! Stage 1: adapt k from the dataset's distance distribution.
//!
//! Builds the paired Eps/MinPts candidate table, finds the first stable
//! DBSCAN cluster count, binary-searches the rightmost index still producing
//! it, and prints the resulting adaptive k next to the exhaustive-sweep
//! answer for comparison.
//!
//! Run with: `cargo run --example adapt_parameters [path/to/dataset.txt]`

use amd_dbscan::dataset::{load_dataset, LabelHint};
use amd_dbscan::distance::SortedNeighborDistances;
use amd_dbscan::param_adapt::{adapt_k_linear, adapt_k_with_table, build_parameter_table};
use std::path::PathBuf;

fn main() -> Result<(), Box<dyn std::error::Error>> {
    let path = std::env::args()
        .nth(1)
        .map(PathBuf::from)
        .unwrap_or_else(|| PathBuf::from(concat!(env!("CARGO_MANIFEST_DIR"), "/../../data/flame.txt")));
    let ds = load_dataset(&path, LabelHint::Auto)?;
    println!("dataset: {} (n = {}, dim = {})", ds.name(), ds.len(), ds.dim());

    let snd = SortedNeighborDistances::compute(&ds)?;
    let table = build_parameter_table(&snd)?;
    println!(
        "parameter table: {} (Eps, MinPts) pairs, Eps range [{:.4}, {:.4}]",
        table.len(),
        table.eps_list.first().unwrap(),
        table.eps_list.last().unwrap()
    );

    let fast = adapt_k_with_table(&snd, &table)?;
    println!(
        "binary search: best_index = {}, adaptive k = {}, stable cluster count = {}, \
         {} DBSCAN calls (fallback used: {})",
        fast.best_index,
        fast.adaptive_k,
        fast.stable_cluster_count,
        fast.dbscan_invocations,
        fast.used_fallback
    );

    let slow = adapt_k_linear(&snd, &table)?;
    println!(
        "linear sweep:  best_index = {}, adaptive k = {}, {} DBSCAN calls",
        slow.best_index, slow.adaptive_k, slow.dbscan_invocations
    );
    Ok(())
}
