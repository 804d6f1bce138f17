//! Stage 2: derive the candidate Eps list from the k-dis histogram.
//!
//! Computes each point's distance to its k-th nearest neighbor, histograms
//! those values, counts the peaks of the smoothed histogram, and runs exact
//! 1-D K-means with that many centers; the centers become the candidate Eps
//! values used by the layered clustering stage.
//!
//! Run with: `cargo run --example candidate_eps [path/to/dataset.txt] [k]`

use amd_dbscan::dataset::{load_dataset, LabelHint};
use amd_dbscan::distance::SortedNeighborDistances;
use amd_dbscan::eps_candidates::{build_histogram, candidate_eps, compute_kdis};
use amd_dbscan::param_adapt::adapt_k;
use std::path::PathBuf;

fn main() -> Result<(), Box<dyn std::error::Error>> {
    let mut args = std::env::args().skip(1);
    let path = args
        .next()
        .map(PathBuf::from)
        .unwrap_or_else(|| PathBuf::from(concat!(env!("CARGO_MANIFEST_DIR"), "/../../data/aggregation.txt")));
    let ds = load_dataset(&path, LabelHint::Auto)?;
    let snd = SortedNeighborDistances::compute(&ds)?;

    let k = match args.next() {
        Some(s) => s.parse()?,
        None => adapt_k(&snd)?.adaptive_k,
    };
    println!("dataset: {} (n = {}), k = {}", ds.name(), ds.len(), k);

    let kdis = compute_kdis(&snd, k)?;
    let hist = build_histogram(&kdis, None);
    println!(
        "histogram: {} bins over [{:.4}, {:.4}], {} peak(s) at bin(s) {:?}",
        hist.counts.len(),
        hist.bin_edges.first().unwrap(),
        hist.bin_edges.last().unwrap(),
        hist.n_peaks,
        hist.peaks
    );

    let cands = candidate_eps(&kdis, &hist, None)?;
    for (i, eps) in cands.eps_values.iter().enumerate() {
        let members = cands.assignment.iter().filter(|&&a| a == i).count();
        println!("candidate Eps {}: {:.4} ({} k-dis values assigned)", i + 1, eps, members);
    }
    Ok(())
}
