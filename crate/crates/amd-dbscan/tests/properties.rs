//! Randomized invariant checks for the core algorithms.

mod common;

use amd_dbscan::dataset::Dataset;
use amd_dbscan::dbscan::{dbscan, DbscanParams};
use amd_dbscan::distance::SortedNeighborDistances;
use amd_dbscan::eps_candidates::{build_histogram, candidate_eps, compute_kdis, kmeans_1d};
use amd_dbscan::metrics::{accuracy, nmi};
use amd_dbscan::param_adapt::build_parameter_table;
use common::{oracle_accuracy, oracle_dbscan, partition_signature};
use proptest::prelude::*;

fn coords_strategy() -> impl Strategy<Value = (usize, Vec<f64>)> {
    (1usize..=3, 3usize..=40).prop_flat_map(|(dim, n)| {
        (
            Just(dim),
            prop::collection::vec(-100.0f64..100.0, dim * n),
        )
    })
}

fn dataset_from(dim: usize, coords: Vec<f64>) -> Dataset {
    Dataset::from_parts("prop", dim, coords, None).unwrap()
}

fn labels_strategy() -> impl Strategy<Value = Vec<i64>> {
    prop::collection::vec(-1i64..=5, 2..=40)
}

fn sse(values: &[f64], centers: &[f64], assignment: &[usize]) -> f64 {
    values
        .iter()
        .zip(assignment)
        .map(|(&v, &a)| (v - centers[a]).powi(2))
        .sum()
}

// Minimum SSE of splitting the sorted values into k contiguous runs, by
// exhaustive recursion. Reference for the DP in `kmeans_1d`.
fn best_contiguous_sse(sorted: &[f64], k: usize) -> f64 {
    fn seg(vals: &[f64]) -> f64 {
        let m = vals.iter().sum::<f64>() / vals.len() as f64;
        vals.iter().map(|v| (v - m).powi(2)).sum()
    }
    fn rec(vals: &[f64], k: usize) -> f64 {
        if k == 1 {
            return seg(vals);
        }
        let mut best = f64::INFINITY;
        for cut in 1..=(vals.len() - (k - 1)) {
            let rest = rec(&vals[cut..], k - 1);
            let total = seg(&vals[..cut]) + rest;
            if total < best {
                best = total;
            }
        }
        best
    }
    rec(sorted, k)
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn histogram_counts_sum_to_n((dim, coords) in coords_strategy(), k in 1usize..=4, bins in prop::option::of(1usize..=20)) {
        let ds = dataset_from(dim, coords);
        let k = k.min(ds.len() - 1).max(1);
        let snd = SortedNeighborDistances::compute(&ds).unwrap();
        let kdis = compute_kdis(&snd, k).unwrap();
        let hist = build_histogram(&kdis, bins);
        prop_assert_eq!(hist.counts.iter().sum::<usize>(), ds.len());
        prop_assert_eq!(hist.bin_edges.len(), hist.counts.len() + 1);
        prop_assert!(hist.bin_edges.windows(2).all(|w| w[0] <= w[1]));
        prop_assert_eq!(hist.n_peaks, hist.peaks.len());
        prop_assert!(hist.n_peaks >= 1);
    }

    #[test]
    fn histogram_peaks_are_local_maxima((dim, coords) in coords_strategy(), k in 1usize..=4) {
        let ds = dataset_from(dim, coords);
        let k = k.min(ds.len() - 1).max(1);
        let snd = SortedNeighborDistances::compute(&ds).unwrap();
        let kdis = compute_kdis(&snd, k).unwrap();
        let hist = build_histogram(&kdis, None);
        let s = &hist.smoothed_counts;
        for &p in &hist.peaks {
            let v = s[p];
            if p > 0 {
                prop_assert!(v >= s[p - 1], "peak {} below left neighbor", p);
            }
            if p + 1 < s.len() {
                prop_assert!(v >= s[p + 1], "peak {} below right neighbor", p);
            }
        }
    }

    #[test]
    fn kmeans_centers_sorted_and_fixed_point(values in prop::collection::vec(-50.0f64..50.0, 2..=30), k in 1usize..=4) {
        let mut distinct = values.clone();
        distinct.sort_by(f64::total_cmp);
        distinct.dedup();
        let k = k.min(distinct.len());
        let (centers, assignment) = kmeans_1d(&values, k).unwrap();
        prop_assert_eq!(centers.len(), k);
        prop_assert_eq!(assignment.len(), values.len());
        prop_assert!(centers.windows(2).all(|w| w[0] <= w[1]));
        // Each center equals the mean of the values assigned to it.
        for c in 0..k {
            let members: Vec<f64> = values
                .iter()
                .zip(&assignment)
                .filter(|(_, &a)| a == c)
                .map(|(&v, _)| v)
                .collect();
            prop_assert!(!members.is_empty(), "cluster {} is empty", c);
            let mean = members.iter().sum::<f64>() / members.len() as f64;
            prop_assert!((centers[c] - mean).abs() <= 1e-9 * (1.0 + mean.abs()));
        }
    }

    #[test]
    fn kmeans_matches_exhaustive_contiguous_split(values in prop::collection::vec(-20.0f64..20.0, 2..=12), k in 1usize..=3) {
        let mut sorted = values.clone();
        sorted.sort_by(f64::total_cmp);
        let mut distinct = sorted.clone();
        distinct.dedup();
        let k = k.min(distinct.len());
        let (centers, assignment) = kmeans_1d(&values, k).unwrap();
        let got = sse(&values, &centers, &assignment);
        let want = best_contiguous_sse(&sorted, k);
        prop_assert!((got - want).abs() <= 1e-9 * (1.0 + want));
    }

    #[test]
    fn single_candidate_eps_is_mean_kdis((dim, coords) in coords_strategy(), k in 1usize..=4) {
        let ds = dataset_from(dim, coords);
        let k = k.min(ds.len() - 1).max(1);
        let snd = SortedNeighborDistances::compute(&ds).unwrap();
        let kdis = compute_kdis(&snd, k).unwrap();
        let hist = build_histogram(&kdis, None);
        let cands = candidate_eps(&kdis, &hist, Some(1)).unwrap();
        prop_assert_eq!(cands.eps_values.len(), 1);
        let mean = kdis.values.iter().sum::<f64>() / kdis.values.len() as f64;
        prop_assert!((cands.eps_values[0] - mean).abs() <= 1e-9 * (1.0 + mean.abs()));
    }

    #[test]
    fn nmi_identities(truth in labels_strategy(), shift in 0i64..3) {
        // Self-comparison of a non-degenerate labeling is exactly 1.
        let self_score = nmi(&truth, &truth).unwrap();
        let classes: std::collections::HashSet<_> = truth.iter().collect();
        if classes.len() > 1 {
            prop_assert!((self_score - 1.0).abs() <= 1e-12);
        }
        // Symmetry and range, against an arbitrary second labeling.
        let other: Vec<i64> = truth.iter().map(|&l| (l + shift).rem_euclid(4)).collect();
        let a = nmi(&truth, &other).unwrap();
        let b = nmi(&other, &truth).unwrap();
        prop_assert!((a - b).abs() <= 1e-12);
        prop_assert!((-1e-12..=1.0 + 1e-12).contains(&a));
        // Relabeling invariance: permuting class ids changes nothing.
        let permuted: Vec<i64> = other.iter().map(|&l| if l < 0 { l } else { 17 - l }).collect();
        let c = nmi(&truth, &permuted).unwrap();
        prop_assert!((a - c).abs() <= 1e-12);
    }

    #[test]
    fn accuracy_matches_enumeration_oracle(truth in prop::collection::vec(-1i64..=3, 2..=16), pred in prop::collection::vec(-1i64..=3, 2..=16)) {
        let n = truth.len().min(pred.len());
        let truth = &truth[..n];
        let pred = &pred[..n];
        let got = accuracy(truth, pred).unwrap();
        let want = oracle_accuracy(truth, pred);
        prop_assert!((got - want).abs() <= 1e-12, "got {} want {}", got, want);
        prop_assert!((accuracy(truth, truth).unwrap() - 1.0).abs() <= 1e-12);
    }

    #[test]
    fn dbscan_matches_oracle((dim, coords) in coords_strategy(), eps in 1.0f64..120.0, min_pts in 1usize..=6) {
        let ds = dataset_from(dim, coords);
        let snd = SortedNeighborDistances::compute(&ds).unwrap();
        let got = dbscan(&snd, DbscanParams::new(eps, min_pts).unwrap());
        let (want_labels, want_count) = oracle_dbscan(&ds, eps, min_pts);
        prop_assert_eq!(got.labels, want_labels);
        prop_assert_eq!(got.num_clusters, want_count);
    }

    #[test]
    fn dbscan_partition_is_order_independent((dim, coords) in coords_strategy(), eps in 1.0f64..120.0, min_pts in 1usize..=6, seed in 0u64..1000) {
        let ds = dataset_from(dim, coords.clone());
        let n = ds.len();
        // Deterministic pseudo-shuffle of the point order.
        let mut perm: Vec<usize> = (0..n).collect();
        let mut state = seed.wrapping_mul(2654435761).wrapping_add(1);
        for i in (1..n).rev() {
            state = state.wrapping_mul(6364136223846793005).wrapping_add(1442695040888963407);
            perm.swap(i, (state >> 33) as usize % (i + 1));
        }
        let mut shuffled = Vec::with_capacity(coords.len());
        for &p in &perm {
            shuffled.extend_from_slice(&coords[p * dim..(p + 1) * dim]);
        }
        let ds2 = dataset_from(dim, shuffled);
        let params = DbscanParams::new(eps, min_pts).unwrap();
        let a = dbscan(&SortedNeighborDistances::compute(&ds).unwrap(), params);
        let b = dbscan(&SortedNeighborDistances::compute(&ds2).unwrap(), params);
        // Map b's labels back to original point order before comparing shapes.
        let mut b_orig = vec![0i64; n];
        for (pos, &orig) in perm.iter().enumerate() {
            b_orig[orig] = b.labels[pos];
        }
        prop_assert_eq!(a.num_clusters, b.num_clusters);
        prop_assert_eq!(partition_signature(&a.labels), partition_signature(&b_orig));
        let noise_a: Vec<bool> = a.labels.iter().map(|&l| l < 0).collect();
        let noise_b: Vec<bool> = b_orig.iter().map(|&l| l < 0).collect();
        prop_assert_eq!(noise_a, noise_b);
    }

    #[test]
    fn parameter_table_invariants((dim, coords) in coords_strategy()) {
        let ds = dataset_from(dim, coords);
        let snd = SortedNeighborDistances::compute(&ds).unwrap();
        let table = build_parameter_table(&snd).unwrap();
        prop_assert_eq!(table.eps_list.len(), ds.len() - 1);
        prop_assert_eq!(table.min_pts_list.len(), ds.len() - 1);
        prop_assert!(table.eps_list.windows(2).all(|w| w[0] <= w[1]));
        prop_assert!(table.eps_list.iter().all(|&e| e >= 0.0));
        prop_assert!(table.min_pts_list.iter().all(|&m| m >= 1));
    }
}
