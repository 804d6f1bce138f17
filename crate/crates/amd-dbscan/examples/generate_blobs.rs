//! Deterministic synthetic dataset generation from a blob spec.
//!
//! Loads a TOML blob spec (Gaussian clusters plus optional uniform noise),
//! generates the dataset with its fixed seed, writes it to a file, and shows
//! that regeneration is bit-for-bit reproducible.
//!
//! Run with: `cargo run --example generate_blobs [path/to/spec.toml] [out.txt]`

use amd_dbscan::dataset::{generate_blobs, write_dataset, BlobsSpec};
use std::path::PathBuf;

fn main() -> Result<(), Box<dyn std::error::Error>> {
    let mut args = std::env::args().skip(1);
    let spec_path = args.next().map(PathBuf::from).unwrap_or_else(|| {
        PathBuf::from(concat!(env!("CARGO_MANIFEST_DIR"), "/../../data/specs/blobs2.spec"))
    });
    let out_path = args
        .next()
        .map(PathBuf::from)
        .unwrap_or_else(|| std::env::temp_dir().join("generated_blobs.txt"));

    let spec = BlobsSpec::load(&spec_path)?;
    println!(
        "spec: {} — {} cluster(s), seed {}",
        spec.name,
        spec.clusters.len(),
        spec.seed
    );
    for (i, c) in spec.clusters.iter().enumerate() {
        println!(
            "  cluster {}: center {:?}, std {}, count {}",
            i + 1,
            c.center,
            c.std,
            c.count
        );
    }
    if let Some(noise) = &spec.noise {
        println!("  noise: {} points in {:?} x {:?}", noise.count, noise.min, noise.max);
    }

    let ds = generate_blobs(&spec)?;
    write_dataset(&ds, &out_path)?;
    println!("wrote {} points to {}", ds.len(), out_path.display());

    let again = generate_blobs(&spec)?;
    let identical = (0..ds.len()).all(|i| ds.point(i) == again.point(i));
    println!("regeneration identical: {identical}");
    Ok(())
}
