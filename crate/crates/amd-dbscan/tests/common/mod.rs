//! Shared test helpers: an independently written DBSCAN oracle, random
//! dataset generators, and path resolution for the bundled data files.

#![allow(dead_code)]

use std::path::PathBuf;

use amd_dbscan::dataset::{Dataset, LabelHint};
use amd_dbscan::{load_dataset, NOISE_LABEL};
use rand::Rng;
use rand_chacha::ChaCha8Rng;

/// Path to a file under the workspace `data/` directory.
pub fn data_path(name: &str) -> PathBuf {
    PathBuf::from(env!("CARGO_MANIFEST_DIR"))
        .join("../../data")
        .join(name)
}

pub fn load_bundled(name: &str) -> Dataset {
    load_dataset(data_path(name), LabelHint::Auto).expect("bundled dataset loads")
}

fn dist(a: &[f64], b: &[f64]) -> f64 {
    a.iter()
        .zip(b)
        .map(|(x, y)| (x - y) * (x - y))
        .sum::<f64>()
        .sqrt()
}

/// Brute-force DBSCAN over raw points, written against the documented tie
/// rules rather than the library internals:
/// - a point is core iff its closed eps-ball holds at least `min_pts`
///   points including itself;
/// - core points within eps of each other share a cluster (connected
///   components of the core-core graph);
/// - clusters are numbered ascending by their smallest core point index;
/// - a non-core point within eps of a core joins the smallest-numbered such
///   cluster; everything else is noise.
pub fn oracle_dbscan(ds: &Dataset, eps: f64, min_pts: usize) -> (Vec<i64>, usize) {
    let n = ds.len();
    let mut within = vec![Vec::new(); n];
    for i in 0..n {
        for j in 0..n {
            if i != j && dist(ds.point(i), ds.point(j)) <= eps {
                within[i].push(j);
            }
        }
    }
    let is_core: Vec<bool> = (0..n).map(|i| within[i].len() + 1 >= min_pts).collect();

    // Connected components of the core-core graph via union-find.
    let mut parent: Vec<usize> = (0..n).collect();
    fn find(parent: &mut Vec<usize>, x: usize) -> usize {
        if parent[x] != x {
            let root = find(parent, parent[x]);
            parent[x] = root;
        }
        parent[x]
    }
    for i in 0..n {
        if !is_core[i] {
            continue;
        }
        for &j in &within[i] {
            if is_core[j] {
                let (a, b) = (find(&mut parent, i), find(&mut parent, j));
                if a != b {
                    parent[a.max(b)] = a.min(b);
                }
            }
        }
    }

    // Number components by their smallest core index (roots are minimal).
    let mut cluster_of_root = std::collections::HashMap::new();
    let mut labels = vec![NOISE_LABEL; n];
    let mut next = 0i64;
    for i in 0..n {
        if is_core[i] {
            let root = find(&mut parent, i);
            let id = *cluster_of_root.entry(root).or_insert_with(|| {
                let id = next;
                next += 1;
                id
            });
            labels[i] = id;
        }
    }
    for i in 0..n {
        if !is_core[i] {
            labels[i] = within[i]
                .iter()
                .filter(|&&j| is_core[j])
                .map(|&j| labels[j])
                .min()
                .unwrap_or(NOISE_LABEL);
        }
    }
    (labels, next as usize)
}

/// Random mixed dataset: a few clumps plus uniform scatter.
pub fn random_dataset(rng: &mut ChaCha8Rng, max_n: usize) -> Dataset {
    let dim = rng.gen_range(1..=3usize);
    let n = rng.gen_range(5..=max_n);
    let clumps = rng.gen_range(1..=3usize);
    let centers: Vec<Vec<f64>> = (0..clumps)
        .map(|_| (0..dim).map(|_| rng.gen_range(-10.0..10.0)).collect())
        .collect();
    let mut coords = Vec::with_capacity(n * dim);
    for _ in 0..n {
        if rng.gen_bool(0.8) {
            let c = &centers[rng.gen_range(0..clumps)];
            for d in 0..dim {
                coords.push(c[d] + rng.gen_range(-1.5..1.5));
            }
        } else {
            for _ in 0..dim {
                coords.push(rng.gen_range(-12.0..12.0));
            }
        }
    }
    Dataset::from_parts("random", dim, coords, None).expect("valid random dataset")
}

/// Best one-to-one label matching score by explicit enumeration, mirroring
/// the accuracy contract: noise pairs only with noise, and unmatched real
/// clusters score nothing.
pub fn oracle_accuracy(truth: &[i64], predicted: &[i64]) -> f64 {
    let n = truth.len();
    let noise_matches = truth
        .iter()
        .zip(predicted)
        .filter(|&(&t, &p)| t == NOISE_LABEL && p == NOISE_LABEL)
        .count();
    let mut t_ids: Vec<i64> = truth
        .iter()
        .copied()
        .filter(|&t| t != NOISE_LABEL)
        .collect();
    t_ids.sort_unstable();
    t_ids.dedup();
    let mut p_ids: Vec<i64> = predicted
        .iter()
        .copied()
        .filter(|&p| p != NOISE_LABEL)
        .collect();
    p_ids.sort_unstable();
    p_ids.dedup();
    let mut table = vec![vec![0usize; p_ids.len()]; t_ids.len()];
    for (&t, &p) in truth.iter().zip(predicted) {
        if t != NOISE_LABEL && p != NOISE_LABEL {
            let ti = t_ids.binary_search(&t).unwrap();
            let pi = p_ids.binary_search(&p).unwrap();
            table[ti][pi] += 1;
        }
    }
    fn best(table: &[Vec<usize>], row: usize, used: &mut Vec<bool>) -> usize {
        if row == table.len() {
            return 0;
        }
        // Leaving the row unmatched is allowed (more rows than columns).
        let mut best_score = best(table, row + 1, used);
        for col in 0..used.len() {
            if !used[col] {
                used[col] = true;
                let s = table[row][col] + best(table, row + 1, used);
                used[col] = false;
                best_score = best_score.max(s);
            }
        }
        best_score
    }
    let mut used = vec![false; p_ids.len()];
    let matched = best(&table, 0, &mut used);
    (matched + noise_matches) as f64 / n as f64
}

/// Canonical co-membership form of a labeling: for each point, the smallest
/// point index sharing its cluster, with noise mapped to itself.
pub fn partition_signature(labels: &[i64]) -> Vec<usize> {
    let mut first = std::collections::HashMap::new();
    labels
        .iter()
        .enumerate()
        .map(|(i, &l)| {
            if l == NOISE_LABEL {
                i
            } else {
                *first.entry(l).or_insert(i)
            }
        })
        .collect()
}
