//! Stage 1: adaptive selection of k.
//!
//! Builds the paired `EpsList` / `MinPtsList` from the dataset's own distance
//! distribution, scans for the first index where the DBSCAN cluster count is
//! stable (equal three times in a row), then binary-searches for the largest
//! index still producing that count. The `MinPts` at that index is the
//! adaptive k consumed by stage 2.

use rayon::prelude::*;

use crate::dbscan::{count_clusters, DbscanParams};
use crate::distance::SortedNeighborDistances;
use crate::error::{Error, Result};

/// Paired parameter candidates indexed by k: entry `k - 1` holds the mean
/// distance to the k-th nearest neighbor and the matching mean neighbor
/// count (rounded half-up, clamped to >= 1). Both lists are nondecreasing.
#[derive(Debug, Clone)]
pub struct ParameterTable {
    pub eps_list: Vec<f64>,
    pub min_pts_list: Vec<usize>,
}

impl ParameterTable {
    pub fn len(&self) -> usize {
        self.eps_list.len()
    }

    pub fn is_empty(&self) -> bool {
        self.eps_list.is_empty()
    }

    pub fn params(&self, index: usize) -> DbscanParams {
        DbscanParams {
            eps: self.eps_list[index],
            min_pts: self.min_pts_list[index],
        }
    }
}

pub fn build_parameter_table(snd: &SortedNeighborDistances) -> Result<ParameterTable> {
    let n = snd.len();
    if n < 3 {
        return Err(Error::DatasetTooSmall { n, required: 3 });
    }
    // Column means of the row-sorted distance matrix, accumulated in a fixed
    // row-major order so the result does not depend on thread count.
    let mut sums = vec![0.0f64; n - 1];
    for i in 0..n {
        for (k, d) in snd.row(i).iter().enumerate() {
            sums[k] += d;
        }
    }
    let eps_list: Vec<f64> = sums.iter().map(|s| s / n as f64).collect();

    // Neighbor counts exclude the point itself. eps_list is nondecreasing, so
    // each row is consumed with a single forward pointer. Integer sums make
    // the parallel reduction exact.
    let count_sums = (0..n)
        .into_par_iter()
        .fold(
            || vec![0u64; n - 1],
            |mut acc, i| {
                let row = snd.row(i);
                let mut ptr = 0usize;
                for (k, &eps) in eps_list.iter().enumerate() {
                    while ptr < row.len() && row[ptr] <= eps {
                        ptr += 1;
                    }
                    acc[k] += ptr as u64;
                }
                acc
            },
        )
        .reduce(
            || vec![0u64; n - 1],
            |mut a, b| {
                for (x, y) in a.iter_mut().zip(b) {
                    *x += y;
                }
                a
            },
        );
    let min_pts_list: Vec<usize> = count_sums
        .iter()
        .map(|&s| (((s as f64 / n as f64) + 0.5).floor() as usize).max(1))
        .collect();

    Ok(ParameterTable {
        eps_list,
        min_pts_list,
    })
}

/// Memoizing wrapper around [`count_clusters`] along one parameter table.
/// Records every fresh engine invocation in order.
pub struct SweepEvaluator<'a> {
    snd: &'a SortedNeighborDistances,
    table: &'a ParameterTable,
    cache: Vec<Option<usize>>,
    pub invocations: usize,
    pub trace: Vec<(usize, usize)>,
}

impl<'a> SweepEvaluator<'a> {
    pub fn new(snd: &'a SortedNeighborDistances, table: &'a ParameterTable) -> Self {
        Self {
            snd,
            table,
            cache: vec![None; table.len()],
            invocations: 0,
            trace: Vec::new(),
        }
    }

    pub fn count_at(&mut self, index: usize) -> usize {
        if let Some(c) = self.cache[index] {
            return c;
        }
        let c = count_clusters(self.snd, self.table.params(index));
        self.cache[index] = Some(c);
        self.invocations += 1;
        self.trace.push((index, c));
        c
    }

    fn known_counts(&self) -> Vec<usize> {
        self.trace.iter().map(|&(_, c)| c).collect()
    }
}

/// Output of stage 1: the chosen index, the adaptive k, and instrumentation
/// sufficient to reproduce the search.
#[derive(Debug, Clone)]
pub struct AdaptationResult {
    pub best_index: usize,
    pub adaptive_k: usize,
    pub stable_cluster_count: usize,
    pub dbscan_invocations: usize,
    /// `(index, cluster_count)` in evaluation order.
    pub trace: Vec<(usize, usize)>,
    /// True when the post-search verification failed and the answer came
    /// from the exhaustive linear fallback.
    pub used_fallback: bool,
}

/// Scans index 0, 1, 2, ... until three consecutive equal positive cluster
/// counts appear. Returns `(first_stable_index, n_true)`.
///
/// When no window of three exists the window is relaxed to two; if that also
/// fails the full count sequence is reported in the error.
pub fn find_stable_count(eval: &mut SweepEvaluator) -> Result<(usize, usize)> {
    for window in [3usize, 2] {
        let last = eval.table.len() - 1;
        let mut i = 0;
        while i + window - 1 <= last {
            let c0 = eval.count_at(i);
            if c0 > 0 && (1..window).all(|off| eval.count_at(i + off) == c0) {
                return Ok((i, c0));
            }
            i += 1;
        }
    }
    Err(Error::NoStablePlateau {
        counts: eval.known_counts(),
    })
}

/// Rightmost-match binary search over `[first_stable_index, table.len() - 1]`
/// for the largest index whose cluster count equals `n_true`, assuming the
/// count is nonincreasing in the index. The result is verified afterwards;
/// if the monotone assumption was violated the answer is recomputed by
/// exhaustive linear scan.
pub fn locate_best_index(
    eval: &mut SweepEvaluator,
    first_stable_index: usize,
    n_true: usize,
) -> AdaptationResult {
    let last = eval.table.len() - 1;
    let mut lo = first_stable_index;
    let mut hi = last;
    while lo < hi {
        let mid = lo + (hi - lo + 1) / 2;
        let c = eval.count_at(mid);
        if c == n_true {
            lo = mid;
        } else if c < n_true {
            hi = mid - 1;
        } else {
            lo = mid + 1;
        }
    }
    let mut best = lo;
    let mut used_fallback = false;
    let verified = eval.count_at(best) == n_true
        && (best == last || eval.count_at(best + 1) != n_true);
    if !verified {
        used_fallback = true;
        best = first_stable_index;
        for i in first_stable_index..=last {
            if eval.count_at(i) == n_true {
                best = i;
            }
        }
    }
    AdaptationResult {
        best_index: best,
        adaptive_k: eval.table.min_pts_list[best],
        stable_cluster_count: n_true,
        dbscan_invocations: eval.invocations,
        trace: eval.trace.clone(),
        used_fallback,
    }
}

/// Full stage 1 against a prebuilt table.
pub fn adapt_k_with_table(
    snd: &SortedNeighborDistances,
    table: &ParameterTable,
) -> Result<AdaptationResult> {
    let n = snd.len();
    if n < 5 {
        return Err(Error::DatasetTooSmall { n, required: 5 });
    }
    let mut eval = SweepEvaluator::new(snd, table);
    let (first_stable, n_true) = find_stable_count(&mut eval)?;
    Ok(locate_best_index(&mut eval, first_stable, n_true))
}

pub fn adapt_k(snd: &SortedNeighborDistances) -> Result<AdaptationResult> {
    let table = build_parameter_table(snd)?;
    adapt_k_with_table(snd, &table)
}

/// Reference path: evaluates *every* index (the exhaustive sweep the binary
/// search is benchmarked against) and picks the largest index whose count
/// equals the first stable plateau value.
pub fn adapt_k_linear(
    snd: &SortedNeighborDistances,
    table: &ParameterTable,
) -> Result<AdaptationResult> {
    let n = snd.len();
    if n < 5 {
        return Err(Error::DatasetTooSmall { n, required: 5 });
    }
    let mut eval = SweepEvaluator::new(snd, table);
    for i in 0..table.len() {
        eval.count_at(i);
    }
    let (first_stable, n_true) = find_stable_count(&mut eval)?;
    let mut best = first_stable;
    for i in first_stable..table.len() {
        if eval.count_at(i) == n_true {
            best = i;
        }
    }
    Ok(AdaptationResult {
        best_index: best,
        adaptive_k: table.min_pts_list[best],
        stable_cluster_count: n_true,
        dbscan_invocations: eval.invocations,
        trace: eval.trace.clone(),
        used_fallback: false,
    })
}
