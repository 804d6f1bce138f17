//! Static SVG scatter plots of 2-D clustering results: one marker per
//! point, clusters colored from a fixed palette, noise in gray, accuracy
//! printed in the lower-left corner when available.

use std::fmt::Write as _;

use crate::dataset::{Dataset, NOISE_LABEL};

const PALETTE: [&str; 16] = [
    "#1f77b4", "#ff7f0e", "#2ca02c", "#d62728", "#9467bd", "#8c564b", "#e377c2", "#17becf",
    "#bcbd22", "#aec7e8", "#ffbb78", "#98df8a", "#ff9896", "#c5b0d5", "#c49c94", "#f7b6d2",
];
const NOISE_COLOR: &str = "#999999";

pub fn color_for(label: i64) -> &'static str {
    if label == NOISE_LABEL {
        NOISE_COLOR
    } else {
        PALETTE[(label as usize) % PALETTE.len()]
    }
}

/// Renders a scatter plot of the first two coordinates. `accuracy`, when
/// given, is stamped in the lower-left corner.
pub fn scatter_svg(ds: &Dataset, labels: &[i64], accuracy: Option<f64>) -> String {
    assert!(ds.dim() >= 2, "scatter plot needs at least two dimensions");
    assert_eq!(labels.len(), ds.len());
    let (w, h, margin) = (720.0, 720.0, 30.0);

    let (mut min_x, mut max_x) = (f64::MAX, f64::MIN);
    let (mut min_y, mut max_y) = (f64::MAX, f64::MIN);
    for p in ds.points() {
        min_x = min_x.min(p[0]);
        max_x = max_x.max(p[0]);
        min_y = min_y.min(p[1]);
        max_y = max_y.max(p[1]);
    }
    let span_x = (max_x - min_x).max(f64::MIN_POSITIVE);
    let span_y = (max_y - min_y).max(f64::MIN_POSITIVE);
    let sx = |x: f64| margin + (x - min_x) / span_x * (w - 2.0 * margin);
    let sy = |y: f64| h - margin - (y - min_y) / span_y * (h - 2.0 * margin);

    let mut svg = String::new();
    write!(
        svg,
        "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"{w}\" height=\"{h}\" viewBox=\"0 0 {w} {h}\">"
    )
    .unwrap();
    svg.push_str("<rect width=\"100%\" height=\"100%\" fill=\"white\"/>");
    for (i, p) in ds.points().enumerate() {
        write!(
            svg,
            "<circle cx=\"{:.2}\" cy=\"{:.2}\" r=\"2.2\" fill=\"{}\"/>",
            sx(p[0]),
            sy(p[1]),
            color_for(labels[i])
        )
        .unwrap();
    }
    if let Some(acc) = accuracy {
        write!(
            svg,
            "<text x=\"{:.0}\" y=\"{:.0}\" font-size=\"18\" fill=\"black\">{acc:.3}</text>",
            margin,
            h - 8.0
        )
        .unwrap();
    }
    svg.push_str("</svg>");
    svg
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::dataset::{parse_dataset, LabelHint};

    #[test]
    fn one_marker_per_point_and_balanced_tags() {
        let ds = parse_dataset("0 0\n1 0\n0.5 2\n", "t", LabelHint::Unlabeled).unwrap();
        let svg = scatter_svg(&ds, &[0, 0, NOISE_LABEL], Some(0.667));
        assert_eq!(svg.matches("<circle").count(), 3);
        assert!(svg.starts_with("<svg") && svg.ends_with("</svg>"));
        assert!(svg.contains(NOISE_COLOR));
        assert!(svg.contains("0.667"));
    }
}
