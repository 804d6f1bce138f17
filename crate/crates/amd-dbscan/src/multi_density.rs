//! Stage 3: layered multi-density clustering, plus the end-to-end pipeline.
//!
//! Candidate Eps values are consumed in ascending order. Each layer derives
//! its MinPts from the points still unclustered, runs DBSCAN restricted to
//! those points, freezes everything that landed in a cluster, and hands the
//! rest to the next layer. Points no layer claims are noise.

use crate::dataset::NOISE_LABEL;
use crate::dbscan::{dbscan_masked, Clustering, DbscanParams};
use crate::distance::SortedNeighborDistances;
use crate::eps_candidates::{build_histogram, candidate_eps, compute_kdis, CandidateEpsList, KdisHistogram, KdisValues};
use crate::error::{Error, Result};
use crate::param_adapt::{adapt_k_with_table, build_parameter_table, AdaptationResult, ParameterTable};

/// Candidate Eps values closer than this relative tolerance are merged
/// before layering; degenerate K-means output would otherwise produce
/// empty layers.
const CANDIDATE_MERGE_REL_TOL: f64 = 1e-9;

#[derive(Debug, Clone, serde::Serialize)]
pub struct LayerReport {
    pub layer_index: usize,
    pub eps: f64,
    pub min_pts: usize,
    pub points_clustered: usize,
    pub clusters_found: usize,
}

/// Adaptive MinPts over the still-active points only: mean count of other
/// active points within `eps`, rounded half-up and clamped to >= 1.
pub fn obtain_min_pts(snd: &SortedNeighborDistances, active: &[bool], eps: f64) -> Result<usize> {
    let active_n = active.iter().filter(|&&a| a).count();
    if active_n < 2 {
        return Err(Error::DatasetTooSmall {
            n: active_n,
            required: 2,
        });
    }
    let mut total = 0u64;
    for i in 0..snd.len() {
        if !active[i] {
            continue;
        }
        total += snd
            .neighbors_within(i, eps)
            .iter()
            .filter(|&&j| active[j as usize])
            .count() as u64;
    }
    let mean = total as f64 / active_n as f64;
    Ok((((mean + 0.5).floor()) as usize).max(1))
}

pub fn multi_density_cluster(
    snd: &SortedNeighborDistances,
    candidates: &CandidateEpsList,
) -> Result<(Clustering, Vec<LayerReport>)> {
    if candidates.eps_values.is_empty() {
        return Err(Error::InvalidParams("empty candidate Eps list".into()));
    }
    let mut eps_values: Vec<f64> = candidates.eps_values.clone();
    eps_values.sort_unstable_by(f64::total_cmp);
    eps_values.dedup_by(|b, a| (*b - *a).abs() <= CANDIDATE_MERGE_REL_TOL * b.abs().max(a.abs()));

    let n = snd.len();
    let mut active = vec![true; n];
    let mut active_n = n;
    let mut labels = vec![NOISE_LABEL; n];
    let mut layer_of = vec![u32::MAX; n];
    let mut next_cluster = 0i64;
    let mut reports = Vec::new();

    for (layer_index, &eps) in eps_values.iter().enumerate() {
        if active_n < 2 {
            break;
        }
        let min_pts = obtain_min_pts(snd, &active, eps)?;
        let params = DbscanParams::new(eps, min_pts)?;
        let layer = dbscan_masked(snd, params, Some(&active));
        let mut points_clustered = 0usize;
        for i in 0..n {
            if layer.labels[i] >= 0 {
                labels[i] = next_cluster + layer.labels[i];
                layer_of[i] = layer_index as u32;
                active[i] = false;
                points_clustered += 1;
            }
        }
        active_n -= points_clustered;
        next_cluster += layer.num_clusters as i64;
        reports.push(LayerReport {
            layer_index,
            eps,
            min_pts,
            points_clustered,
            clusters_found: layer.num_clusters,
        });
    }

    Ok((
        Clustering {
            labels,
            num_clusters: next_cluster as usize,
            layer_of: Some(layer_of),
        },
        reports,
    ))
}

/// Knobs of the end-to-end pipeline. All default to the fully automatic
/// behavior; `k_override` skips stage 1 entirely (the ablation path).
#[derive(Debug, Clone, Copy, Default)]
pub struct PipelineOptions {
    pub k_override: Option<usize>,
    pub peaks_override: Option<usize>,
    pub bins_override: Option<usize>,
}

#[derive(Debug)]
pub struct PipelineResult {
    pub clustering: Clustering,
    /// Absent when stage 1 was skipped via `k_override`.
    pub adaptation: Option<AdaptationResult>,
    pub table: ParameterTable,
    pub kdis: KdisValues,
    pub histogram: KdisHistogram,
    pub candidates: CandidateEpsList,
    pub layers: Vec<LayerReport>,
}

impl PipelineResult {
    pub fn k_used(&self) -> usize {
        self.kdis.k
    }
}

/// The full pipeline: adapt k, derive candidate Eps from the k-dis
/// histogram, run layered clustering.
pub fn amd_dbscan(snd: &SortedNeighborDistances, opts: PipelineOptions) -> Result<PipelineResult> {
    let n = snd.len();
    if n < 5 {
        return Err(Error::DatasetTooSmall { n, required: 5 });
    }
    let table = build_parameter_table(snd)?;
    let (adaptation, k) = match opts.k_override {
        Some(k) => {
            if k == 0 || k > n - 1 {
                return Err(Error::KOutOfRange { k, max: n - 1 });
            }
            (None, k)
        }
        None => {
            let a = adapt_k_with_table(snd, &table)?;
            let k = a.adaptive_k.min(n - 1);
            (Some(a), k)
        }
    };
    let kdis = compute_kdis(snd, k)?;
    let histogram = build_histogram(&kdis, opts.bins_override);
    let candidates = candidate_eps(&kdis, &histogram, opts.peaks_override)?;
    let (clustering, layers) = multi_density_cluster(snd, &candidates)?;
    Ok(PipelineResult {
        clustering,
        adaptation,
        table,
        kdis,
        histogram,
        candidates,
        layers,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::dataset::{parse_dataset, Dataset, LabelHint};
    use crate::dbscan::dbscan;

    fn snd_of(ds: &Dataset) -> SortedNeighborDistances {
        SortedNeighborDistances::compute(ds).unwrap()
    }

    #[test]
    fn obtain_min_pts_examples() {
        // 4 points pairwise within eps: complete graph, mean 3.
        let ds = parse_dataset("0 0\n0 1\n1 0\n1 1\n", "t", LabelHint::Unlabeled).unwrap();
        let snd = snd_of(&ds);
        assert_eq!(obtain_min_pts(&snd, &[true; 4], 2.0).unwrap(), 3);

        // collinear 0, 1, 3 at eps 1.5: counts [1, 1, 0], mean 2/3, rounds to 1
        let ds = parse_dataset("0\n1\n3\n", "t", LabelHint::Unlabeled).unwrap();
        let snd = snd_of(&ds);
        assert_eq!(obtain_min_pts(&snd, &[true; 3], 1.5).unwrap(), 1);

        // two far pairs, eps covers only intra-pair distance: counts all 1
        let ds = parse_dataset("0\n1\n100\n101\n", "t", LabelHint::Unlabeled).unwrap();
        let snd = snd_of(&ds);
        assert_eq!(obtain_min_pts(&snd, &[true; 4], 1.5).unwrap(), 1);
        assert!(obtain_min_pts(&snd, &[true, false, false, false], 1.5).is_err());
    }

    #[test]
    fn single_candidate_reduces_to_plain_dbscan() {
        let ds = parse_dataset(
            "0 0\n0.1 0\n0.2 0.1\n5 5\n5.1 5\n5.2 5.1\n9 0\n",
            "t",
            LabelHint::Unlabeled,
        )
        .unwrap();
        let snd = snd_of(&ds);
        let eps = 0.3;
        let candidates = CandidateEpsList {
            eps_values: vec![eps],
            assignment: vec![0; ds.len()],
        };
        let (multi, layers) = multi_density_cluster(&snd, &candidates).unwrap();
        let min_pts = obtain_min_pts(&snd, &vec![true; ds.len()], eps).unwrap();
        let plain = dbscan(&snd, DbscanParams::new(eps, min_pts).unwrap());
        assert_eq!(multi.labels, plain.labels);
        assert_eq!(multi.num_clusters, plain.num_clusters);
        assert_eq!(layers.len(), 1);
    }

    #[test]
    fn dense_then_sparse_layering() {
        // Dense blob (spacing 0.05) + sparse blob (spacing 1.0), far apart.
        // The layer-0 MinPts (mean neighbor count at eps 0.15) is ~4, so the
        // sparse points stay noise until layer 1 reaches them.
        let mut text = String::new();
        for i in 0..16 {
            text.push_str(&format!("{} 0\n", i as f64 * 0.05));
        }
        for i in 0..8 {
            text.push_str(&format!("{} 50\n", i as f64 * 1.0));
        }
        let ds = parse_dataset(&text, "t", LabelHint::Unlabeled).unwrap();
        let snd = snd_of(&ds);
        let candidates = CandidateEpsList {
            eps_values: vec![0.15, 1.5],
            assignment: vec![0; 24],
        };
        let (c, layers) = multi_density_cluster(&snd, &candidates).unwrap();
        assert_eq!(c.num_clusters, 2);
        assert_eq!(c.noise_count(), 0);
        let layer_of = c.layer_of.as_ref().unwrap();
        // Dense blob assigned in layer 0, sparse in layer 1.
        assert!(layer_of[..16].iter().all(|&l| l == 0));
        assert!(layer_of[16..].iter().all(|&l| l == 1));
        assert_eq!(layers.len(), 2);
        assert_eq!(layers[0].points_clustered, 16);
    }

    #[test]
    fn duplicate_candidates_are_merged() {
        let ds = parse_dataset("0\n0.1\n0.2\n5\n5.1\n", "t", LabelHint::Unlabeled).unwrap();
        let snd = snd_of(&ds);
        let candidates = CandidateEpsList {
            eps_values: vec![0.15, 0.15 + 1e-13],
            assignment: vec![0; 5],
        };
        let (_, layers) = multi_density_cluster(&snd, &candidates).unwrap();
        assert_eq!(layers.len(), 1);
    }

    #[test]
    fn pipeline_two_separated_blobs() {
        let mut text = String::new();
        for i in 0..30 {
            text.push_str(&format!("{} {}\n", (i % 6) as f64 * 0.2, (i / 6) as f64 * 0.2));
        }
        for i in 0..30 {
            text.push_str(&format!("{} {}\n", 40.0 + (i % 6) as f64 * 0.2, (i / 6) as f64 * 0.2));
        }
        let ds = parse_dataset(&text, "t", LabelHint::Unlabeled).unwrap();
        let snd = snd_of(&ds);
        let r = amd_dbscan(&snd, PipelineOptions::default()).unwrap();
        assert_eq!(r.clustering.num_clusters, 2);
        assert_eq!(r.clustering.noise_count(), 0);
        assert_eq!(r.adaptation.as_ref().unwrap().stable_cluster_count, 2);
    }

    #[test]
    fn pipeline_rejects_tiny_dataset() {
        let ds = parse_dataset("0\n1\n9\n", "t", LabelHint::Unlabeled).unwrap();
        let snd = snd_of(&ds);
        assert!(matches!(
            amd_dbscan(&snd, PipelineOptions::default()),
            Err(Error::DatasetTooSmall { .. })
        ));
    }
}
