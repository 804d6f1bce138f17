//! Classic DBSCAN over a precomputed distance structure.
//!
//! A point is core iff its eps-neighborhood, *including itself*, holds at
//! least `min_pts` points. Expansion is fully deterministic: seeds are tried
//! in ascending point index, clusters are numbered in order of their first
//! core point, and a border point keeps the cluster of the first core that
//! reaches it.

use crate::dataset::NOISE_LABEL;
use crate::distance::SortedNeighborDistances;
use crate::error::{Error, Result};

/// Internal marker for not-yet-visited points; never escapes this module.
const UNASSIGNED: i64 = -2;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct DbscanParams {
    pub eps: f64,
    pub min_pts: usize,
}

impl DbscanParams {
    pub fn new(eps: f64, min_pts: usize) -> Result<Self> {
        if !(eps > 0.0) {
            return Err(Error::InvalidParams(format!("eps must be > 0, got {eps}")));
        }
        if min_pts == 0 {
            return Err(Error::InvalidParams("min_pts must be >= 1".into()));
        }
        Ok(Self { eps, min_pts })
    }
}

/// Per-point cluster assignment. Cluster ids are `0..num_clusters`;
/// [`NOISE_LABEL`] marks noise. `layer_of` is filled by multi-density
/// clustering and records which layer assigned each point.
#[derive(Debug, Clone, PartialEq)]
pub struct Clustering {
    pub labels: Vec<i64>,
    pub num_clusters: usize,
    pub layer_of: Option<Vec<u32>>,
}

impl Clustering {
    pub fn noise_count(&self) -> usize {
        self.labels.iter().filter(|&&l| l == NOISE_LABEL).count()
    }
}

pub fn dbscan(snd: &SortedNeighborDistances, params: DbscanParams) -> Clustering {
    dbscan_masked(snd, params, None)
}

pub fn count_clusters(snd: &SortedNeighborDistances, params: DbscanParams) -> usize {
    dbscan_masked(snd, params, None).num_clusters
}

/// DBSCAN restricted to the points where `active` is true. Inactive points
/// are invisible: they are neither neighbors nor candidates, and come out
/// labeled [`NOISE_LABEL`].
pub fn dbscan_masked(
    snd: &SortedNeighborDistances,
    params: DbscanParams,
    active: Option<&[bool]>,
) -> Clustering {
    let n = snd.len();
    let is_active = |i: usize| active.map_or(true, |a| a[i]);
    let active_n = match active {
        Some(a) => a.iter().filter(|&&x| x).count(),
        None => n,
    };

    // Neighborhood size including the point itself.
    let core_size = |i: usize| -> usize {
        match active {
            None => snd.count_within(i, params.eps) + 1,
            Some(a) => {
                1 + snd
                    .neighbors_within(i, params.eps)
                    .iter()
                    .filter(|&&j| a[j as usize])
                    .count()
            }
        }
    };

    let mut labels = vec![UNASSIGNED; n];
    for i in 0..n {
        if !is_active(i) {
            labels[i] = NOISE_LABEL;
        }
    }
    // Points still relabelable: unassigned or provisionally noise.
    let mut open = active_n;
    let mut clusters = 0usize;
    let mut queue: Vec<u32> = Vec::new();

    'seeds: for seed in 0..n {
        if labels[seed] != UNASSIGNED {
            continue;
        }
        if core_size(seed) < params.min_pts {
            labels[seed] = NOISE_LABEL;
            continue;
        }
        let cluster = clusters as i64;
        clusters += 1;
        labels[seed] = cluster;
        open -= 1;
        queue.clear();
        queue.push(seed as u32);
        let mut head = 0;
        while head < queue.len() {
            let p = queue[head] as usize;
            head += 1;
            // Expansion can only touch still-open points.
            if open == 0 {
                break 'seeds;
            }
            for &q in snd.neighbors_within(p, params.eps) {
                let q = q as usize;
                if labels[q] == UNASSIGNED || (labels[q] == NOISE_LABEL && is_active(q)) {
                    labels[q] = cluster;
                    open -= 1;
                    if core_size(q) >= params.min_pts {
                        queue.push(q as u32);
                    }
                }
            }
        }
    }
    for l in &mut labels {
        if *l == UNASSIGNED {
            *l = NOISE_LABEL;
        }
    }
    Clustering {
        labels,
        num_clusters: clusters,
        layer_of: None,
    }
}
