//! Run reports and CSV exports.

use std::fmt::Write as _;
use std::path::Path;

use serde::Serialize;

use crate::dataset::Dataset;
use crate::error::{Error, Result};
use crate::eps_candidates::KdisHistogram;
use crate::metrics::{DensityClass, VnnReport};
use crate::multi_density::{LayerReport, PipelineResult};

pub const SCHEMA_VERSION: u32 = 1;

#[derive(Debug, Serialize)]
pub struct MetricsBlock {
    pub vnn: f64,
    pub density_class: DensityClass,
    pub nmi: Option<f64>,
    pub accuracy: Option<f64>,
    pub clusters_found: usize,
    pub noise_count: usize,
}

#[derive(Debug, Serialize)]
pub struct AdaptationBlock {
    pub best_index: usize,
    pub adaptive_k: usize,
    pub stable_cluster_count: usize,
    pub dbscan_invocations: usize,
    pub used_fallback: bool,
    pub trace: Vec<(usize, usize)>,
}

#[derive(Debug, Serialize)]
pub struct RunReport {
    pub schema_version: u32,
    pub dataset: String,
    pub n: usize,
    pub dim: usize,
    pub k_used: usize,
    pub adaptation: Option<AdaptationBlock>,
    pub n_peaks: usize,
    pub candidate_eps: Vec<f64>,
    pub layers: Vec<LayerReport>,
    pub metrics: MetricsBlock,
}

impl RunReport {
    pub fn new(
        ds: &Dataset,
        result: &PipelineResult,
        vnn: &VnnReport,
        nmi: Option<f64>,
        accuracy: Option<f64>,
    ) -> Self {
        RunReport {
            schema_version: SCHEMA_VERSION,
            dataset: ds.name().to_string(),
            n: ds.len(),
            dim: ds.dim(),
            k_used: result.k_used(),
            adaptation: result.adaptation.as_ref().map(|a| AdaptationBlock {
                best_index: a.best_index,
                adaptive_k: a.adaptive_k,
                stable_cluster_count: a.stable_cluster_count,
                dbscan_invocations: a.dbscan_invocations,
                used_fallback: a.used_fallback,
                trace: a.trace.clone(),
            }),
            n_peaks: result.histogram.n_peaks,
            candidate_eps: result.candidates.eps_values.clone(),
            layers: result.layers.clone(),
            metrics: MetricsBlock {
                vnn: vnn.vnn,
                density_class: vnn.density_class,
                nmi,
                accuracy,
                clusters_found: result.clustering.num_clusters,
                noise_count: result.clustering.noise_count(),
            },
        }
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("report serialization cannot fail")
    }
}

fn write_file(path: &Path, content: &str) -> Result<()> {
    std::fs::write(path, content).map_err(|source| Error::Io {
        path: path.to_path_buf(),
        source,
    })
}

/// Per-point CSV: `index, x0..xd, truth_label (if any), predicted, layer`.
pub fn write_labels_csv(ds: &Dataset, result: &PipelineResult, path: &Path) -> Result<()> {
    let mut out = String::new();
    out.push_str("index");
    for d in 0..ds.dim() {
        write!(out, ",x{d}").unwrap();
    }
    if ds.truth_labels().is_some() {
        out.push_str(",truth");
    }
    out.push_str(",predicted,layer\n");
    let layer_of = result.clustering.layer_of.as_deref();
    for i in 0..ds.len() {
        write!(out, "{i}").unwrap();
        for c in ds.point(i) {
            write!(out, ",{c}").unwrap();
        }
        if let Some(truth) = ds.truth_labels() {
            write!(out, ",{}", truth[i]).unwrap();
        }
        let layer = layer_of
            .map(|l| l[i])
            .filter(|&l| l != u32::MAX)
            .map(|l| l.to_string())
            .unwrap_or_default();
        writeln!(out, ",{},{layer}", result.clustering.labels[i]).unwrap();
    }
    write_file(path, &out)
}

/// Adaptation trace CSV: `index, eps, min_pts, cluster_count` in evaluation
/// order (the data behind the cluster-count-vs-index sweep).
pub fn write_trace_csv(result: &PipelineResult, path: &Path) -> Result<()> {
    let mut out = String::from("index,eps,min_pts,cluster_count\n");
    if let Some(a) = &result.adaptation {
        for &(index, count) in &a.trace {
            writeln!(
                out,
                "{index},{},{},{count}",
                result.table.eps_list[index], result.table.min_pts_list[index]
            )
            .unwrap();
        }
    }
    write_file(path, &out)
}

/// Histogram CSV: `bin_left, bin_right, count, smoothed`.
pub fn write_histogram_csv(hist: &KdisHistogram, path: &Path) -> Result<()> {
    let mut out = String::from("bin_left,bin_right,count,smoothed\n");
    for i in 0..hist.counts.len() {
        writeln!(
            out,
            "{},{},{},{}",
            hist.bin_edges[i],
            hist.bin_edges[i + 1],
            hist.counts[i],
            hist.smoothed_counts[i]
        )
        .unwrap();
    }
    write_file(path, &out)
}

/// Histogram SVG bar chart with detected peaks marked.
pub fn histogram_svg(hist: &KdisHistogram) -> String {
    let bins = hist.counts.len();
    let (w, h, margin) = (640.0, 360.0, 40.0);
    let max = hist.counts.iter().copied().max().unwrap_or(1).max(1) as f64;
    let bar_w = (w - 2.0 * margin) / bins as f64;
    let mut svg = String::new();
    write!(
        svg,
        "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"{w}\" height=\"{h}\" viewBox=\"0 0 {w} {h}\">"
    )
    .unwrap();
    svg.push_str("<rect width=\"100%\" height=\"100%\" fill=\"white\"/>");
    for (i, &c) in hist.counts.iter().enumerate() {
        let bh = (h - 2.0 * margin) * c as f64 / max;
        let x = margin + i as f64 * bar_w;
        let y = h - margin - bh;
        let fill = if hist.peaks.contains(&i) { "#d62728" } else { "#4878a8" };
        write!(
            svg,
            "<rect x=\"{x:.2}\" y=\"{y:.2}\" width=\"{:.2}\" height=\"{bh:.2}\" fill=\"{fill}\"/>",
            bar_w.max(1.0) - 0.5
        )
        .unwrap();
    }
    write!(
        svg,
        "<text x=\"{margin}\" y=\"{:.2}\" font-size=\"12\" fill=\"black\">k-dis frequency histogram ({} peaks)</text>",
        margin - 10.0,
        hist.n_peaks
    )
    .unwrap();
    svg.push_str("</svg>");
    svg
}
