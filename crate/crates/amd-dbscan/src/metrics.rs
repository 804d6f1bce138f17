//! Evaluation metrics: VNN, NMI, and assignment-matched accuracy.

use std::collections::HashMap;

use serde::Serialize;

use crate::dataset::NOISE_LABEL;
use crate::distance::SortedNeighborDistances;
use crate::error::{Error, Result};

/// Density regime classification by VNN value.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub enum DensityClass {
    /// VNN < 10
    Single,
    /// 10 <= VNN <= 100
    Multi,
    /// VNN > 100
    ExtremeMulti,
}

impl DensityClass {
    pub fn from_vnn(vnn: f64) -> Self {
        if vnn < 10.0 {
            DensityClass::Single
        } else if vnn > 100.0 {
            DensityClass::ExtremeMulti
        } else {
            DensityClass::Multi
        }
    }
}

#[derive(Debug, Clone, Serialize)]
pub struct VnnReport {
    /// Mean nearest-neighbor distance, the search radius for the counts.
    pub eps1: f64,
    #[serde(skip)]
    pub neighbor_counts: Vec<usize>,
    /// Population variance of the neighbor counts.
    pub vnn: f64,
    pub density_class: DensityClass,
}

/// Variance of the number of neighbors: counts other points within the mean
/// nearest-neighbor distance of each point and takes the population variance.
pub fn vnn(snd: &SortedNeighborDistances) -> Result<VnnReport> {
    let n = snd.len();
    if n < 2 {
        return Err(Error::DatasetTooSmall { n, required: 2 });
    }
    let eps1 = (0..n).map(|i| snd.row(i)[0]).sum::<f64>() / n as f64;
    let neighbor_counts: Vec<usize> = (0..n).map(|i| snd.count_within(i, eps1)).collect();
    let mean = neighbor_counts.iter().sum::<usize>() as f64 / n as f64;
    let vnn = neighbor_counts
        .iter()
        .map(|&c| {
            let d = c as f64 - mean;
            d * d
        })
        .sum::<f64>()
        / n as f64;
    Ok(VnnReport {
        eps1,
        neighbor_counts,
        vnn,
        density_class: DensityClass::from_vnn(vnn),
    })
}

fn contingency(truth: &[i64], predicted: &[i64]) -> Result<(Vec<Vec<usize>>, Vec<i64>, Vec<i64>)> {
    if truth.len() != predicted.len() {
        return Err(Error::LabelLengthMismatch {
            left: truth.len(),
            right: predicted.len(),
        });
    }
    if truth.is_empty() {
        return Err(Error::EmptyDataset);
    }
    let mut t_ids: Vec<i64> = truth.to_vec();
    t_ids.sort_unstable();
    t_ids.dedup();
    let mut p_ids: Vec<i64> = predicted.to_vec();
    p_ids.sort_unstable();
    p_ids.dedup();
    let t_idx: HashMap<i64, usize> = t_ids.iter().enumerate().map(|(i, &l)| (l, i)).collect();
    let p_idx: HashMap<i64, usize> = p_ids.iter().enumerate().map(|(i, &l)| (l, i)).collect();
    let mut table = vec![vec![0usize; p_ids.len()]; t_ids.len()];
    for (&t, &p) in truth.iter().zip(predicted) {
        table[t_idx[&t]][p_idx[&p]] += 1;
    }
    Ok((table, t_ids, p_ids))
}

fn entropy(marginals: &[usize], n: usize) -> f64 {
    marginals
        .iter()
        .filter(|&&c| c > 0)
        .map(|&c| {
            let p = c as f64 / n as f64;
            -p * p.ln()
        })
        .sum()
}

/// Normalized mutual information with arithmetic-mean normalization and
/// natural logarithms. Noise is treated as an ordinary label value in both
/// sequences. Two zero-entropy partitions (both a single cluster) score 1.0.
pub fn nmi(truth: &[i64], predicted: &[i64]) -> Result<f64> {
    let (table, _, _) = contingency(truth, predicted)?;
    let n = truth.len();
    let t_marg: Vec<usize> = table.iter().map(|row| row.iter().sum()).collect();
    let p_marg: Vec<usize> = (0..table[0].len())
        .map(|j| table.iter().map(|row| row[j]).sum())
        .collect();
    let ht = entropy(&t_marg, n);
    let hp = entropy(&p_marg, n);
    if ht + hp == 0.0 {
        // Both partitions are a single cluster: identical up to renaming.
        return Ok(1.0);
    }
    let mut mi = 0.0;
    for (i, row) in table.iter().enumerate() {
        for (j, &c) in row.iter().enumerate() {
            if c > 0 {
                let pij = c as f64 / n as f64;
                let pi = t_marg[i] as f64 / n as f64;
                let qj = p_marg[j] as f64 / n as f64;
                mi += pij * (pij / (pi * qj)).ln();
            }
        }
    }
    Ok((mi / ((ht + hp) / 2.0)).clamp(0.0, 1.0))
}

/// Maximum-weight one-to-one assignment on a rectangular score matrix
/// (Kuhn-Munkres with potentials, O(n^2 m)). Returns the total score of the
/// best matching; rows may stay unmatched when `rows > cols`.
fn assignment_max(scores: &[Vec<i64>]) -> i64 {
    let r = scores.len();
    let c = scores.first().map_or(0, |row| row.len());
    if r == 0 || c == 0 {
        return 0;
    }
    // Square cost matrix for minimization, padded with zeros.
    let dim = r.max(c);
    let max_score = scores
        .iter()
        .flat_map(|row| row.iter())
        .copied()
        .max()
        .unwrap_or(0);
    let cost = |i: usize, j: usize| -> i64 {
        if i < r && j < c {
            max_score - scores[i][j]
        } else {
            max_score
        }
    };

    // Standard Hungarian algorithm with row/column potentials.
    let mut u = vec![0i64; dim + 1];
    let mut v = vec![0i64; dim + 1];
    let mut p = vec![0usize; dim + 1]; // column -> assigned row (1-based rows)
    let mut way = vec![0usize; dim + 1];
    for i in 1..=dim {
        p[0] = i;
        let mut j0 = 0usize;
        let mut minv = vec![i64::MAX; dim + 1];
        let mut used = vec![false; dim + 1];
        loop {
            used[j0] = true;
            let i0 = p[j0];
            let mut delta = i64::MAX;
            let mut j1 = 0usize;
            for j in 1..=dim {
                if !used[j] {
                    let cur = cost(i0 - 1, j - 1) - u[i0] - v[j];
                    if cur < minv[j] {
                        minv[j] = cur;
                        way[j] = j0;
                    }
                    if minv[j] < delta {
                        delta = minv[j];
                        j1 = j;
                    }
                }
            }
            for j in 0..=dim {
                if used[j] {
                    u[p[j]] += delta;
                    v[j] -= delta;
                } else {
                    minv[j] -= delta;
                }
            }
            j0 = j1;
            if p[j0] == 0 {
                break;
            }
        }
        loop {
            let j1 = way[j0];
            p[j0] = p[j1];
            j0 = j1;
            if j0 == 0 {
                break;
            }
        }
    }
    let mut total = 0i64;
    for j in 1..=dim {
        let i = p[j];
        if i >= 1 && i <= r && j <= c {
            total += scores[i - 1][j - 1];
        }
    }
    total
}

/// Clustering accuracy: the best one-to-one mapping between predicted
/// cluster ids and truth ids, scored as the fraction of points whose mapped
/// label matches. Predicted noise only ever matches ground-truth noise;
/// unmatched predicted clusters count all their points as wrong.
pub fn accuracy(truth: &[i64], predicted: &[i64]) -> Result<f64> {
    accuracy_opts(truth, predicted, false)
}

/// Like [`accuracy`], but with `exclude_noise` the points predicted as noise
/// whose truth is not noise are dropped from both numerator and denominator
/// (sensitivity check for the noise-counting convention).
pub fn accuracy_opts(truth: &[i64], predicted: &[i64], exclude_noise: bool) -> Result<f64> {
    if truth.len() != predicted.len() {
        return Err(Error::LabelLengthMismatch {
            left: truth.len(),
            right: predicted.len(),
        });
    }
    if truth.is_empty() {
        return Err(Error::EmptyDataset);
    }
    let (truth, predicted): (Vec<i64>, Vec<i64>) = if exclude_noise {
        truth
            .iter()
            .zip(predicted)
            .filter(|&(&t, &p)| !(p == NOISE_LABEL && t != NOISE_LABEL))
            .map(|(&t, &p)| (t, p))
            .unzip()
    } else {
        (truth.to_vec(), predicted.to_vec())
    };
    if truth.is_empty() {
        return Ok(0.0);
    }
    let n = truth.len();

    // The noise labels pair only with each other; real clusters go through
    // the assignment solver.
    let noise_matches = truth
        .iter()
        .zip(&predicted)
        .filter(|&(&t, &p)| t == NOISE_LABEL && p == NOISE_LABEL)
        .count();
    let real: Vec<(i64, i64)> = truth
        .iter()
        .zip(&predicted)
        .filter(|&(&t, &p)| t != NOISE_LABEL && p != NOISE_LABEL)
        .map(|(&t, &p)| (t, p))
        .collect();
    let matched = if real.is_empty() {
        0
    } else {
        let (t_real, p_real): (Vec<i64>, Vec<i64>) = real.into_iter().unzip();
        let (table, _, _) = contingency(&t_real, &p_real)?;
        let scores: Vec<Vec<i64>> = table
            .iter()
            .map(|row| row.iter().map(|&c| c as i64).collect())
            .collect();
        assignment_max(&scores)
    };
    Ok((matched as f64 + noise_matches as f64) / n as f64)
}
