//! Exact pairwise distance engine.
//!
//! Every stage of the pipeline queries neighborhoods through
//! [`SortedNeighborDistances`]: per point, the ascending distances to all
//! other points together with the matching neighbor indices. Rows are
//! computed exactly (no approximate index) and sorted by `(distance, index)`
//! so results are fully deterministic; row construction is data-parallel and
//! bit-identical to a sequential run.

use rayon::prelude::*;

use crate::dataset::Dataset;
use crate::error::{Error, Result};

pub fn euclidean(a: &[f64], b: &[f64]) -> f64 {
    a.iter()
        .zip(b)
        .map(|(x, y)| (x - y) * (x - y))
        .sum::<f64>()
        .sqrt()
}

/// For each point, the sorted distances to every other point (self excluded)
/// and the neighbor index behind each distance.
#[derive(Debug, Clone)]
pub struct SortedNeighborDistances {
    dists: Vec<Vec<f64>>,
    neighbors: Vec<Vec<u32>>,
}

impl SortedNeighborDistances {
    pub fn compute(ds: &Dataset) -> Result<Self> {
        let n = ds.len();
        if n < 2 {
            return Err(Error::DatasetTooSmall { n, required: 2 });
        }
        let rows: Vec<(Vec<f64>, Vec<u32>)> = (0..n)
            .into_par_iter()
            .map(|i| {
                let pi = ds.point(i);
                let mut row: Vec<(f64, u32)> = (0..n)
                    .filter(|&j| j != i)
                    .map(|j| (euclidean(pi, ds.point(j)), j as u32))
                    .collect();
                row.sort_unstable_by(|a, b| a.0.total_cmp(&b.0).then(a.1.cmp(&b.1)));
                row.into_iter().unzip()
            })
            .collect();
        let (dists, neighbors) = rows.into_iter().unzip();
        Ok(Self { dists, neighbors })
    }

    /// Number of points `n` (rows have length `n - 1`).
    pub fn len(&self) -> usize {
        self.dists.len()
    }

    pub fn is_empty(&self) -> bool {
        self.dists.is_empty()
    }

    /// Ascending distances from point `i` to all other points.
    pub fn row(&self, i: usize) -> &[f64] {
        &self.dists[i]
    }

    /// Neighbor indices matching [`row`](Self::row) entry for entry.
    pub fn neighbor_row(&self, i: usize) -> &[u32] {
        &self.neighbors[i]
    }

    /// Distance from point `i` to its k-th nearest other point (1-based `k`).
    pub fn kth_distance(&self, i: usize, k: usize) -> f64 {
        self.dists[i][k - 1]
    }

    /// Number of other points within `eps` of point `i` (self excluded).
    pub fn count_within(&self, i: usize, eps: f64) -> usize {
        self.dists[i].partition_point(|&d| d <= eps)
    }

    /// Indices of the other points within `eps` of point `i`.
    pub fn neighbors_within(&self, i: usize, eps: f64) -> &[u32] {
        &self.neighbors[i][..self.count_within(i, eps)]
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::dataset::parse_dataset;
    use crate::dataset::LabelHint;

    fn snd_of(text: &str) -> SortedNeighborDistances {
        let ds = parse_dataset(text, "t", LabelHint::Unlabeled).unwrap();
        SortedNeighborDistances::compute(&ds).unwrap()
    }

    #[test]
    fn collinear_rows() {
        // points at x = 0, 1, 3
        let snd = snd_of("0\n1\n3\n");
        assert_eq!(snd.row(0), &[1.0, 3.0]);
        assert_eq!(snd.row(1), &[1.0, 2.0]);
        assert_eq!(snd.row(2), &[2.0, 3.0]);
        assert_eq!(snd.neighbor_row(0), &[1, 2]);
        assert_eq!(snd.neighbor_row(2), &[1, 0]);
    }

    #[test]
    fn duplicate_points() {
        let snd = snd_of("2 2\n2 2\n");
        assert_eq!(snd.row(0), &[0.0]);
        assert_eq!(snd.row(1), &[0.0]);
    }

    #[test]
    fn unit_square_rows() {
        let snd = snd_of("0 0\n0 1\n1 0\n1 1\n");
        let sqrt2 = 2.0_f64.sqrt();
        for i in 0..4 {
            let r = snd.row(i);
            assert_eq!(&r[..2], &[1.0, 1.0]);
            assert!((r[2] - sqrt2).abs() < 1e-15);
        }
    }

    #[test]
    fn count_within_is_prefix() {
        let snd = snd_of("0\n1\n3\n");
        assert_eq!(snd.count_within(0, 0.5), 0);
        assert_eq!(snd.count_within(0, 1.0), 1);
        assert_eq!(snd.count_within(0, 3.0), 2);
        assert_eq!(snd.neighbors_within(1, 1.5), &[0]);
    }

    #[test]
    fn rejects_single_point() {
        let ds = parse_dataset("1 2\n", "t", LabelHint::Unlabeled).unwrap();
        assert!(SortedNeighborDistances::compute(&ds).is_err());
    }
}
