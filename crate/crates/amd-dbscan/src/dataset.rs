//! Dataset loading and synthetic multi-density blob generation.
//!
//! The on-disk dataset format is plain text: one point per line, numeric
//! columns separated by whitespace or commas, an optional trailing integer
//! column with the ground-truth label (`-1` marks ground-truth noise), and
//! `#` comment lines.

use std::path::Path;

use rand::distributions::Uniform;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::StandardNormal;
use serde::Deserialize;

use crate::error::{Error, Result};

/// Ground-truth and predicted label value reserved for noise.
pub const NOISE_LABEL: i64 = -1;

/// A set of `n` points in d-dimensional Euclidean space, with optional
/// ground-truth labels.
#[derive(Debug, Clone)]
pub struct Dataset {
    name: String,
    dim: usize,
    coords: Vec<f64>,
    truth_labels: Option<Vec<i64>>,
}

impl Dataset {
    pub fn from_parts(
        name: impl Into<String>,
        dim: usize,
        coords: Vec<f64>,
        truth_labels: Option<Vec<i64>>,
    ) -> Result<Self> {
        if dim == 0 || coords.is_empty() {
            return Err(Error::EmptyDataset);
        }
        if coords.len() % dim != 0 {
            return Err(Error::InvalidParams(format!(
                "coordinate buffer length {} is not a multiple of dim {}",
                coords.len(),
                dim
            )));
        }
        let n = coords.len() / dim;
        if coords.iter().any(|c| !c.is_finite()) {
            return Err(Error::InvalidParams("non-finite coordinate".into()));
        }
        if let Some(labels) = &truth_labels {
            if labels.len() != n {
                return Err(Error::LabelLengthMismatch {
                    left: n,
                    right: labels.len(),
                });
            }
        }
        Ok(Self {
            name: name.into(),
            dim,
            coords,
            truth_labels,
        })
    }

    pub fn name(&self) -> &str {
        &self.name
    }

    pub fn len(&self) -> usize {
        self.coords.len() / self.dim
    }

    pub fn is_empty(&self) -> bool {
        self.coords.is_empty()
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn point(&self, i: usize) -> &[f64] {
        &self.coords[i * self.dim..(i + 1) * self.dim]
    }

    pub fn points(&self) -> impl Iterator<Item = &[f64]> {
        self.coords.chunks_exact(self.dim)
    }

    pub fn truth_labels(&self) -> Option<&[i64]> {
        self.truth_labels.as_deref()
    }
}

/// Controls whether the loader treats the final column as ground-truth labels.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum LabelHint {
    /// Final column is labels iff every row ends in an integer token and the
    /// file has at least three columns (or a non-integer coordinate elsewhere).
    #[default]
    Auto,
    Labeled,
    Unlabeled,
}

pub fn load_dataset(path: impl AsRef<Path>, hint: LabelHint) -> Result<Dataset> {
    let path = path.as_ref();
    let text = std::fs::read_to_string(path).map_err(|source| Error::Io {
        path: path.to_path_buf(),
        source,
    })?;
    let name = path
        .file_stem()
        .map(|s| s.to_string_lossy().into_owned())
        .unwrap_or_else(|| "dataset".into());
    parse_dataset(&text, &name, hint).map_err(|e| match e {
        Error::Parse { line, msg, .. } => Error::Parse {
            path: path.to_path_buf(),
            line,
            msg,
        },
        other => other,
    })
}

pub fn parse_dataset(text: &str, name: &str, hint: LabelHint) -> Result<Dataset> {
    let mut rows: Vec<(usize, Vec<&str>)> = Vec::new();
    for (lineno, line) in text.lines().enumerate() {
        let line = line.trim();
        if line.is_empty() || line.starts_with('#') {
            continue;
        }
        let tokens: Vec<&str> = line
            .split(|c: char| c == ',' || c.is_whitespace())
            .filter(|t| !t.is_empty())
            .collect();
        rows.push((lineno + 1, tokens));
    }
    if rows.is_empty() {
        return Err(Error::EmptyDataset);
    }

    let cols = rows[0].1.len();
    for (lineno, tokens) in &rows {
        if tokens.len() != cols {
            return Err(Error::Parse {
                path: std::path::PathBuf::new(),
                line: *lineno,
                msg: format!("expected {} columns, found {}", cols, tokens.len()),
            });
        }
    }

    let is_int = |t: &str| t.parse::<i64>().is_ok();
    let labeled = match hint {
        LabelHint::Labeled => {
            if cols < 2 {
                return Err(Error::Parse {
                    path: std::path::PathBuf::new(),
                    line: rows[0].0,
                    msg: "labeled file needs at least two columns".into(),
                });
            }
            true
        }
        LabelHint::Unlabeled => false,
        LabelHint::Auto => {
            cols >= 2
                && rows.iter().all(|(_, t)| is_int(t[cols - 1]))
                && (cols >= 3
                    || rows.iter().any(|(_, t)| t[..cols - 1].iter().any(|x| !is_int(x))))
        }
    };

    let dim = if labeled { cols - 1 } else { cols };
    let mut coords = Vec::with_capacity(rows.len() * dim);
    let mut labels = if labeled {
        Some(Vec::with_capacity(rows.len()))
    } else {
        None
    };
    for (lineno, tokens) in &rows {
        for t in &tokens[..dim] {
            let v: f64 = t.parse().map_err(|_| Error::Parse {
                path: std::path::PathBuf::new(),
                line: *lineno,
                msg: format!("non-numeric token {t:?}"),
            })?;
            if !v.is_finite() {
                return Err(Error::Parse {
                    path: std::path::PathBuf::new(),
                    line: *lineno,
                    msg: format!("non-finite coordinate {t:?}"),
                });
            }
            coords.push(v);
        }
        if let Some(labels) = &mut labels {
            let l: i64 = tokens[dim].parse().map_err(|_| Error::Parse {
                path: std::path::PathBuf::new(),
                line: *lineno,
                msg: format!("non-integer label {:?}", tokens[dim]),
            })?;
            labels.push(l);
        }
    }
    Dataset::from_parts(name, dim, coords, labels)
}

/// Reads a plain label file: one integer per line, `#` comments allowed.
pub fn load_labels(path: impl AsRef<Path>) -> Result<Vec<i64>> {
    let path = path.as_ref();
    let text = std::fs::read_to_string(path).map_err(|source| Error::Io {
        path: path.to_path_buf(),
        source,
    })?;
    let mut labels = Vec::new();
    for (lineno, line) in text.lines().enumerate() {
        let line = line.trim();
        if line.is_empty() || line.starts_with('#') {
            continue;
        }
        labels.push(line.parse::<i64>().map_err(|_| Error::Parse {
            path: path.to_path_buf(),
            line: lineno + 1,
            msg: format!("non-integer label {line:?}"),
        })?);
    }
    if labels.is_empty() {
        return Err(Error::EmptyDataset);
    }
    Ok(labels)
}


/// One Gaussian cluster of a [`BlobsSpec`].
#[derive(Debug, Clone, Deserialize)]
pub struct BlobCluster {
    pub center: Vec<f64>,
    pub std: f64,
    pub count: usize,
}

/// Uniform background noise block of a [`BlobsSpec`].
#[derive(Debug, Clone, Deserialize)]
pub struct NoiseSpec {
    pub count: usize,
    pub min: Vec<f64>,
    pub max: Vec<f64>,
}

/// Declarative description of a synthetic multi-density dataset.
///
/// Generation is a pure function of the spec: the same spec (including its
/// seed) always produces the bit-identical dataset. The generator is a fixed,
/// portable ChaCha8 stream.
#[derive(Debug, Clone, Deserialize)]
pub struct BlobsSpec {
    #[serde(default = "default_blob_name")]
    pub name: String,
    pub seed: u64,
    pub clusters: Vec<BlobCluster>,
    pub noise: Option<NoiseSpec>,
}

fn default_blob_name() -> String {
    "blobs".into()
}

impl BlobsSpec {
    pub fn from_toml(text: &str) -> Result<Self> {
        let spec: BlobsSpec =
            toml::from_str(text).map_err(|e| Error::InvalidBlobSpec(e.to_string()))?;
        spec.validate()?;
        Ok(spec)
    }

    pub fn load(path: impl AsRef<Path>) -> Result<Self> {
        let path = path.as_ref();
        let text = std::fs::read_to_string(path).map_err(|source| Error::Io {
            path: path.to_path_buf(),
            source,
        })?;
        Self::from_toml(&text)
    }

    fn validate(&self) -> Result<()> {
        if self.clusters.is_empty() {
            return Err(Error::InvalidBlobSpec("no clusters".into()));
        }
        let dim = self.clusters[0].center.len();
        if dim == 0 {
            return Err(Error::InvalidBlobSpec("zero-dimensional center".into()));
        }
        for (i, c) in self.clusters.iter().enumerate() {
            if c.center.len() != dim {
                return Err(Error::InvalidBlobSpec(format!(
                    "cluster {i} has dimension {} but cluster 0 has {dim}",
                    c.center.len()
                )));
            }
            if !(c.std > 0.0) {
                return Err(Error::InvalidBlobSpec(format!("cluster {i} std must be > 0")));
            }
            if c.count == 0 {
                return Err(Error::InvalidBlobSpec(format!("cluster {i} count must be >= 1")));
            }
        }
        if let Some(noise) = &self.noise {
            if noise.min.len() != dim || noise.max.len() != dim {
                return Err(Error::InvalidBlobSpec("noise bounds dimension mismatch".into()));
            }
            if noise.count > 0 && noise.min.iter().zip(&noise.max).any(|(a, b)| a >= b) {
                return Err(Error::InvalidBlobSpec(
                    "degenerate noise bounds with noise count > 0".into(),
                ));
            }
        }
        Ok(())
    }

    pub fn dim(&self) -> usize {
        self.clusters[0].center.len()
    }

    pub fn total_points(&self) -> usize {
        self.clusters.iter().map(|c| c.count).sum::<usize>()
            + self.noise.as_ref().map_or(0, |n| n.count)
    }
}

/// Generates the dataset described by `spec`. Cluster points get their
/// cluster index as the truth label; noise points get [`NOISE_LABEL`].
pub fn generate_blobs(spec: &BlobsSpec) -> Result<Dataset> {
    spec.validate()?;
    let dim = spec.dim();
    let mut rng = ChaCha8Rng::seed_from_u64(spec.seed);
    let mut coords = Vec::with_capacity(spec.total_points() * dim);
    let mut labels = Vec::with_capacity(spec.total_points());

    for (cluster_id, c) in spec.clusters.iter().enumerate() {
        for _ in 0..c.count {
            for axis in 0..dim {
                let z: f64 = rng.sample(StandardNormal);
                coords.push(c.center[axis] + c.std * z);
            }
            labels.push(cluster_id as i64);
        }
    }
    if let Some(noise) = &spec.noise {
        let axes: Vec<Uniform<f64>> = noise
            .min
            .iter()
            .zip(&noise.max)
            .map(|(&a, &b)| Uniform::new_inclusive(a, b))
            .collect();
        for _ in 0..noise.count {
            for u in &axes {
                coords.push(rng.sample(u));
            }
            labels.push(NOISE_LABEL);
        }
    }

    Dataset::from_parts(spec.name.clone(), dim, coords, Some(labels))
}

/// Writes a dataset in the plain-text format understood by [`load_dataset`].
pub fn write_dataset(ds: &Dataset, path: impl AsRef<Path>) -> Result<()> {
    let path = path.as_ref();
    let mut out = String::new();
    for (i, p) in ds.points().enumerate() {
        for (j, c) in p.iter().enumerate() {
            if j > 0 {
                out.push(' ');
            }
            out.push_str(&format!("{c:.6}"));
        }
        if let Some(labels) = ds.truth_labels() {
            out.push_str(&format!(" {}", labels[i]));
        }
        out.push('\n');
    }
    std::fs::write(path, out).map_err(|source| Error::Io {
        path: path.to_path_buf(),
        source,
    })
}
