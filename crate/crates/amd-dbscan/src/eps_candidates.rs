//! Stage 2: candidate Eps from the k-dis frequency histogram.
//!
//! The k-dis value of a point is its distance to the k-th nearest other
//! point, with k the adaptive value found by stage 1. The histogram of all
//! k-dis values shows one peak per density regime; 1-D K-means with K equal
//! to the peak count yields one candidate Eps per regime.
//!
//! Peak counting is automated (sqrt-rule bins, window-3 moving average,
//! peaks with prominence at least 5% of the histogram maximum), but the
//! count stays overridable as the pipeline's one hyperparameter for cases
//! where a human reading of the histogram disagrees.

use crate::distance::SortedNeighborDistances;
use crate::error::{Error, Result};

/// Relative prominence a smoothed local maximum needs to count as a peak.
const PEAK_PROMINENCE_FRACTION: f64 = 0.05;
const SMOOTHING_WINDOW: usize = 3;

#[derive(Debug, Clone)]
pub struct KdisValues {
    /// Per-point k-dis value, in point order.
    pub values: Vec<f64>,
    /// Ascending copy of `values`.
    pub sorted: Vec<f64>,
    pub k: usize,
}

pub fn compute_kdis(snd: &SortedNeighborDistances, k: usize) -> Result<KdisValues> {
    let n = snd.len();
    if k == 0 || k > n - 1 {
        return Err(Error::KOutOfRange { k, max: n - 1 });
    }
    let values: Vec<f64> = (0..n).map(|i| snd.kth_distance(i, k)).collect();
    let mut sorted = values.clone();
    sorted.sort_unstable_by(f64::total_cmp);
    Ok(KdisValues { values, sorted, k })
}

#[derive(Debug, Clone)]
pub struct KdisHistogram {
    /// `counts.len() + 1` ascending edges; the last bin is right-closed.
    pub bin_edges: Vec<f64>,
    pub counts: Vec<usize>,
    pub smoothed_counts: Vec<f64>,
    /// Bin indices of detected peaks (leftmost bin of a plateau).
    pub peaks: Vec<usize>,
    pub n_peaks: usize,
}

pub fn build_histogram(kdis: &KdisValues, bins: Option<usize>) -> KdisHistogram {
    let n = kdis.values.len();
    let min = kdis.sorted[0];
    let max = *kdis.sorted.last().unwrap();
    if max == min {
        // All k-dis values identical: one degenerate bin, one peak.
        return KdisHistogram {
            bin_edges: vec![min, max],
            counts: vec![n],
            smoothed_counts: vec![n as f64],
            peaks: vec![0],
            n_peaks: 1,
        };
    }
    let bins = bins.unwrap_or_else(|| (n as f64).sqrt().ceil() as usize).max(1);
    let width = (max - min) / bins as f64;
    let mut counts = vec![0usize; bins];
    for &v in &kdis.values {
        let idx = (((v - min) / width) as usize).min(bins - 1);
        counts[idx] += 1;
    }
    let bin_edges: Vec<f64> = (0..=bins).map(|i| min + i as f64 * width).collect();

    // Centered moving average, window clipped at the edges.
    let half = SMOOTHING_WINDOW / 2;
    let smoothed_counts: Vec<f64> = (0..bins)
        .map(|i| {
            let lo = i.saturating_sub(half);
            let hi = (i + half).min(bins - 1);
            counts[lo..=hi].iter().sum::<usize>() as f64 / (hi - lo + 1) as f64
        })
        .collect();

    let peaks = detect_peaks(&smoothed_counts);
    let n_peaks = peaks.len();
    KdisHistogram {
        bin_edges,
        counts,
        smoothed_counts,
        peaks,
        n_peaks,
    }
}

/// Local maxima of the smoothed curve (plateaus merged, endpoints allowed)
/// filtered by prominence. Falls back to the global maximum so at least one
/// peak always exists.
fn detect_peaks(smoothed: &[f64]) -> Vec<usize> {
    let bins = smoothed.len();
    let max = smoothed.iter().cloned().fold(f64::MIN, f64::max);
    let threshold = PEAK_PROMINENCE_FRACTION * max;

    let mut candidates = Vec::new();
    let mut i = 0;
    while i < bins {
        let mut j = i;
        while j + 1 < bins && smoothed[j + 1] == smoothed[i] {
            j += 1;
        }
        let rises = i == 0 || smoothed[i - 1] < smoothed[i];
        let falls = j == bins - 1 || smoothed[j + 1] < smoothed[i];
        if rises && falls {
            candidates.push(i);
        }
        i = j + 1;
    }

    let mut peaks: Vec<usize> = candidates
        .into_iter()
        .filter(|&p| prominence(smoothed, p) >= threshold)
        .collect();
    if peaks.is_empty() {
        let argmax = smoothed
            .iter()
            .enumerate()
            .max_by(|a, b| a.1.total_cmp(b.1))
            .map(|(i, _)| i)
            .unwrap_or(0);
        peaks.push(argmax);
    }
    peaks
}

/// Height of the peak above the higher of the two valley minima reached
/// before the next strictly higher bin on each side. A side cut off by the
/// histogram edge does not constrain the prominence.
fn prominence(smoothed: &[f64], peak: usize) -> f64 {
    let h = smoothed[peak];
    let side_min = |iter: &mut dyn Iterator<Item = usize>| -> Option<f64> {
        let mut min: Option<f64> = None;
        for i in iter {
            if smoothed[i] > h {
                break;
            }
            min = Some(min.map_or(smoothed[i], |m: f64| m.min(smoothed[i])));
        }
        min
    };
    let left = side_min(&mut (0..peak).rev());
    let right = side_min(&mut (peak + 1..smoothed.len()));
    match (left, right) {
        (Some(l), Some(r)) => h - l.max(r),
        (Some(l), None) => h - l,
        (None, Some(r)) => h - r,
        (None, None) => h,
    }
}

/// Exact 1-D K-means. In one dimension the optimal clusters are contiguous
/// runs of the sorted values, so the global SSE optimum is found by dynamic
/// programming over contiguous partitions, with prefix sums giving each
/// segment's SSE in O(1). Returns ascending centers (each the mean of its
/// assigned values) and the per-value center assignment.
pub fn kmeans_1d(values: &[f64], k: usize) -> Result<(Vec<f64>, Vec<usize>)> {
    if values.is_empty() || k == 0 {
        return Err(Error::InvalidParams("kmeans_1d needs values and K >= 1".into()));
    }
    let n = values.len();
    let mut order: Vec<usize> = (0..n).collect();
    order.sort_unstable_by(|&a, &b| values[a].total_cmp(&values[b]));
    let sorted: Vec<f64> = order.iter().map(|&i| values[i]).collect();
    let mut distinct = sorted.clone();
    distinct.dedup();
    if k > distinct.len() {
        return Err(Error::InvalidParams(format!(
            "K = {k} exceeds {} distinct values",
            distinct.len()
        )));
    }

    // Prefix sums of the sorted values and their squares; the SSE of the
    // half-open segment [a, b) is sum(x^2) - sum(x)^2 / len.
    let mut ps = vec![0.0f64; n + 1];
    let mut ps2 = vec![0.0f64; n + 1];
    for (i, &v) in sorted.iter().enumerate() {
        ps[i + 1] = ps[i] + v;
        ps2[i + 1] = ps2[i] + v * v;
    }
    let seg_sse = |a: usize, b: usize| -> f64 {
        let s = ps[b] - ps[a];
        ((ps2[b] - ps2[a]) - s * s / (b - a) as f64).max(0.0)
    };

    // dp[j][i]: minimal SSE splitting the first i sorted values into j
    // segments; cut[j][i] records where the last segment starts.
    let inf = f64::INFINITY;
    let mut dp = vec![vec![inf; n + 1]; k + 1];
    let mut cut = vec![vec![0usize; n + 1]; k + 1];
    dp[0][0] = 0.0;
    for j in 1..=k {
        for i in j..=n {
            for m in (j - 1)..i {
                if dp[j - 1][m].is_finite() {
                    let c = dp[j - 1][m] + seg_sse(m, i);
                    if c < dp[j][i] {
                        dp[j][i] = c;
                        cut[j][i] = m;
                    }
                }
            }
        }
    }

    // Recover the segment boundaries, then centers and assignments.
    let mut bounds = vec![n; k + 1];
    for j in (1..=k).rev() {
        bounds[j - 1] = cut[j][bounds[j]];
    }
    let mut centers = Vec::with_capacity(k);
    let mut assignment = vec![0usize; n];
    for j in 0..k {
        let (a, b) = (bounds[j], bounds[j + 1]);
        centers.push((ps[b] - ps[a]) / (b - a) as f64);
        for pos in a..b {
            assignment[order[pos]] = j;
        }
    }
    Ok((centers, assignment))
}

/// The candidate Eps values for multi-density clustering: one per detected
/// density regime, ascending.
#[derive(Debug, Clone)]
pub struct CandidateEpsList {
    pub eps_values: Vec<f64>,
    /// Per-point k-dis cluster membership (index into `eps_values`).
    pub assignment: Vec<usize>,
}

/// Runs 1-D K-means on the k-dis values with K equal to the detected peak
/// count, or to `override_n` when given (the override is the pipeline's one
/// hyperparameter).
pub fn candidate_eps(
    kdis: &KdisValues,
    hist: &KdisHistogram,
    override_n: Option<usize>,
) -> Result<CandidateEpsList> {
    let n_centers = override_n.unwrap_or(hist.n_peaks);
    if n_centers == 0 {
        return Err(Error::InvalidParams("candidate count must be >= 1".into()));
    }
    let (eps_values, assignment) = kmeans_1d(&kdis.values, n_centers)?;
    Ok(CandidateEpsList {
        eps_values,
        assignment,
    })
}
