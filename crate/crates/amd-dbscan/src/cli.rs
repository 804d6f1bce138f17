//! Command-line surface: `cluster`, `ablate`, `bench`, `vnn`, `gen`, `eval`.
//!
//! Exit codes: 0 success, 2 input error, 3 pipeline failure (typically no
//! stable plateau during parameter adaptation). All commands are
//! deterministic given their inputs; reports carry no timestamps, so reruns
//! overwrite byte-identical artifacts.

use std::path::{Path, PathBuf};
use std::time::Instant;

use clap::{Args, Parser, Subcommand, ValueEnum};

use crate::dataset::{self, Dataset, LabelHint};
use crate::distance::SortedNeighborDistances;
use crate::error::Error;
use crate::metrics;
use crate::multi_density::{amd_dbscan, PipelineOptions, PipelineResult};
use crate::param_adapt::{adapt_k_linear, adapt_k_with_table, build_parameter_table};
use crate::report::{self, RunReport};
use crate::svg;

#[derive(Parser)]
#[command(
    name = "amd-dbscan",
    about = "Adaptive multi-density DBSCAN: parameter adaptation, candidate Eps discovery, layered clustering"
)]
pub struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Run the full pipeline on a dataset and report metrics.
    Cluster(ClusterArgs),
    /// Run the pipeline with a forced k (ablation of stage 1).
    Ablate(AblateArgs),
    /// Compare binary-search adaptation against the exhaustive linear sweep.
    Bench(BenchArgs),
    /// Print the variance-of-neighbor-counts density report per dataset.
    Vnn(VnnArgs),
    /// Generate a dataset file from a blob spec.
    Gen(GenArgs),
    /// Score a predicted label file against a ground-truth label file.
    Eval(EvalArgs),
}

#[derive(Args)]
struct InputArgs {
    /// Dataset file (plain text points, optional trailing label column).
    #[arg(long, conflicts_with = "spec")]
    data: Option<PathBuf>,
    /// Blob spec file (TOML); the dataset is generated in memory.
    #[arg(long)]
    spec: Option<PathBuf>,
}

impl InputArgs {
    fn load(&self) -> Result<Dataset, Error> {
        match (&self.data, &self.spec) {
            (Some(path), None) => dataset::load_dataset(path, LabelHint::Auto),
            (None, Some(path)) => dataset::generate_blobs(&dataset::BlobsSpec::load(path)?),
            _ => Err(Error::InvalidParams(
                "exactly one of --data and --spec is required".into(),
            )),
        }
    }
}

#[derive(Args)]
struct PipelineArgs {
    #[command(flatten)]
    input: InputArgs,
    /// Override the number of histogram peaks N (the candidate Eps count).
    #[arg(long)]
    peaks: Option<usize>,
    /// Force k, skipping parameter adaptation.
    #[arg(long)]
    k: Option<usize>,
    /// Override the histogram bin count (default: ceil(sqrt(n))).
    #[arg(long)]
    bins: Option<usize>,
    /// Directory for labels CSV, report JSON, trace/histogram CSV, and SVG.
    #[arg(long)]
    out: Option<PathBuf>,
    /// Drop points predicted as noise (with non-noise truth) from accuracy.
    #[arg(long)]
    exclude_noise_accuracy: bool,
}

#[derive(Args)]
struct ClusterArgs {
    #[command(flatten)]
    pipeline: PipelineArgs,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum AblateMode {
    /// Fixed k = 4.
    K4,
    /// k = n / 2.
    KHalf,
    /// Adaptive k (identical to `cluster`).
    Auto,
}

#[derive(Args)]
struct AblateArgs {
    #[command(flatten)]
    pipeline: PipelineArgs,
    #[arg(long, value_enum, default_value = "auto")]
    mode: AblateMode,
}

#[derive(Args)]
struct BenchArgs {
    #[command(flatten)]
    input: InputArgs,
    /// Timing repetitions per path.
    #[arg(long, default_value_t = 1)]
    repeats: usize,
}

#[derive(Args)]
struct VnnArgs {
    /// Dataset files; with several, a Table-style summary is printed.
    #[arg(long, required = true, num_args = 1..)]
    data: Vec<PathBuf>,
}

#[derive(Args)]
struct GenArgs {
    /// Blob spec file (TOML).
    #[arg(long)]
    spec: PathBuf,
    /// Output dataset file.
    #[arg(long)]
    out: PathBuf,
}

#[derive(Args)]
struct EvalArgs {
    /// Ground-truth label file (one integer per line, -1 = noise).
    #[arg(long)]
    truth: PathBuf,
    /// Predicted label file.
    #[arg(long)]
    pred: PathBuf,
    #[arg(long)]
    exclude_noise_accuracy: bool,
}

fn exit_code(err: &Error) -> i32 {
    match err {
        Error::NoStablePlateau { .. } => 3,
        _ => 2,
    }
}

pub fn run() -> i32 {
    let cli = Cli::parse();
    let result = match cli.command {
        Command::Cluster(args) => cmd_cluster(&args.pipeline),
        Command::Ablate(args) => cmd_ablate(&args),
        Command::Bench(args) => cmd_bench(&args),
        Command::Vnn(args) => cmd_vnn(&args),
        Command::Gen(args) => cmd_gen(&args),
        Command::Eval(args) => cmd_eval(&args),
    };
    match result {
        Ok(()) => 0,
        Err(err) => {
            eprintln!("error: {err}");
            exit_code(&err)
        }
    }
}

fn run_pipeline(args: &PipelineArgs) -> Result<(Dataset, SortedNeighborDistances, PipelineResult), Error> {
    let ds = args.input.load()?;
    if ds.len() < 5 {
        return Err(Error::DatasetTooSmall {
            n: ds.len(),
            required: 5,
        });
    }
    let snd = SortedNeighborDistances::compute(&ds)?;
    let opts = PipelineOptions {
        k_override: args.k,
        peaks_override: args.peaks,
        bins_override: args.bins,
    };
    let result = amd_dbscan(&snd, opts)?;
    Ok((ds, snd, result))
}

fn build_report(
    ds: &Dataset,
    snd: &SortedNeighborDistances,
    result: &PipelineResult,
    exclude_noise: bool,
) -> Result<RunReport, Error> {
    let vnn = metrics::vnn(snd)?;
    let (nmi, accuracy) = match ds.truth_labels() {
        Some(truth) => (
            Some(metrics::nmi(truth, &result.clustering.labels)?),
            Some(metrics::accuracy_opts(
                truth,
                &result.clustering.labels,
                exclude_noise,
            )?),
        ),
        None => (None, None),
    };
    Ok(RunReport::new(ds, result, &vnn, nmi, accuracy))
}

fn write_artifacts(
    out: &Path,
    ds: &Dataset,
    result: &PipelineResult,
    report: &RunReport,
) -> Result<(), Error> {
    std::fs::create_dir_all(out).map_err(|source| Error::Io {
        path: out.to_path_buf(),
        source,
    })?;
    let stem = ds.name();
    report::write_labels_csv(ds, result, &out.join(format!("{stem}_labels.csv")))?;
    report::write_trace_csv(result, &out.join(format!("{stem}_trace.csv")))?;
    report::write_histogram_csv(&result.histogram, &out.join(format!("{stem}_histogram.csv")))?;
    let write = |path: PathBuf, content: &str| -> Result<(), Error> {
        std::fs::write(&path, content).map_err(|source| Error::Io { path, source })
    };
    write(
        out.join(format!("{stem}_report.json")),
        &report.to_json(),
    )?;
    write(
        out.join(format!("{stem}_histogram.svg")),
        &report::histogram_svg(&result.histogram),
    )?;
    if ds.dim() == 2 {
        write(
            out.join(format!("{stem}_scatter.svg")),
            &svg::scatter_svg(ds, &result.clustering.labels, report.metrics.accuracy),
        )?;
    }
    Ok(())
}

fn cmd_cluster(args: &PipelineArgs) -> Result<(), Error> {
    let (ds, snd, result) = run_pipeline(args)?;
    let report = build_report(&ds, &snd, &result, args.exclude_noise_accuracy)?;
    if let Some(out) = &args.out {
        write_artifacts(out, &ds, &result, &report)?;
    }
    println!("{}", report.to_json());
    Ok(())
}

fn cmd_ablate(args: &AblateArgs) -> Result<(), Error> {
    let ds = args.pipeline.input.load()?;
    let forced_k = match args.mode {
        AblateMode::K4 => Some(4),
        AblateMode::KHalf => Some((ds.len() / 2).clamp(1, ds.len().saturating_sub(1))),
        AblateMode::Auto => None,
    };
    let mut pipeline_args = PipelineArgs {
        input: InputArgs {
            data: args.pipeline.input.data.clone(),
            spec: args.pipeline.input.spec.clone(),
        },
        peaks: args.pipeline.peaks,
        k: forced_k.or(args.pipeline.k),
        bins: args.pipeline.bins,
        out: args.pipeline.out.clone(),
        exclude_noise_accuracy: args.pipeline.exclude_noise_accuracy,
    };
    let (ds, snd, result) = run_pipeline(&pipeline_args)?;
    let report = build_report(&ds, &snd, &result, pipeline_args.exclude_noise_accuracy)?;
    if let Some(out) = &pipeline_args.out {
        write_artifacts(out, &ds, &result, &report)?;
    }
    println!("{}", report.to_json());

    if args.mode != AblateMode::Auto {
        // Comparison line against the fully adaptive run.
        pipeline_args.k = None;
        let (_, _, auto_result) = run_pipeline(&pipeline_args)?;
        println!(
            "clusters: {} with k={} vs {} with adaptive k={}",
            result.clustering.num_clusters,
            result.k_used(),
            auto_result.clustering.num_clusters,
            auto_result.k_used(),
        );
    }
    Ok(())
}

fn cmd_bench(args: &BenchArgs) -> Result<(), Error> {
    let repeats = args.repeats.max(1);
    let ds = args.input.load()?;
    let snd = SortedNeighborDistances::compute(&ds)?;
    let table = build_parameter_table(&snd)?;

    let mut binary_times = Vec::with_capacity(repeats);
    let mut linear_times = Vec::with_capacity(repeats);
    let mut binary = None;
    let mut linear = None;
    for _ in 0..repeats {
        let t = Instant::now();
        binary = Some(adapt_k_with_table(&snd, &table)?);
        binary_times.push(t.elapsed().as_secs_f64());
        let t = Instant::now();
        linear = Some(adapt_k_linear(&snd, &table)?);
        linear_times.push(t.elapsed().as_secs_f64());
    }
    let binary = binary.unwrap();
    let linear = linear.unwrap();

    let stats = |ts: &[f64]| {
        let min = ts.iter().cloned().fold(f64::MAX, f64::min);
        let mean = ts.iter().sum::<f64>() / ts.len() as f64;
        (min, mean)
    };
    let (bmin, bmean) = stats(&binary_times);
    let (lmin, lmean) = stats(&linear_times);
    println!("dataset: {} (n = {})", ds.name(), ds.len());
    println!("path    t_min      t_mean     dbscan_calls  best_index");
    println!(
        "binary  {bmin:<10.4} {bmean:<10.4} {:<13} {}",
        binary.dbscan_invocations, binary.best_index
    );
    println!(
        "linear  {lmin:<10.4} {lmean:<10.4} {:<13} {}",
        linear.dbscan_invocations, linear.best_index
    );
    if binary.best_index != linear.best_index {
        return Err(Error::InvalidParams(format!(
            "binary best_index {} != linear best_index {}",
            binary.best_index, linear.best_index
        )));
    }
    Ok(())
}

fn cmd_vnn(args: &VnnArgs) -> Result<(), Error> {
    println!("{:<20} {:>6} {:>12}  class", "dataset", "size", "VNN");
    for path in &args.data {
        let ds = dataset::load_dataset(path, LabelHint::Auto)?;
        let snd = SortedNeighborDistances::compute(&ds)?;
        let r = metrics::vnn(&snd)?;
        println!(
            "{:<20} {:>6} {:>12.3}  {:?}",
            ds.name(),
            ds.len(),
            r.vnn,
            r.density_class
        );
    }
    Ok(())
}

fn cmd_gen(args: &GenArgs) -> Result<(), Error> {
    let spec = dataset::BlobsSpec::load(&args.spec)?;
    let ds = dataset::generate_blobs(&spec)?;
    dataset::write_dataset(&ds, &args.out)?;
    println!(
        "wrote {} points (dim {}, {} clusters) to {}",
        ds.len(),
        ds.dim(),
        spec.clusters.len(),
        args.out.display()
    );
    Ok(())
}

fn cmd_eval(args: &EvalArgs) -> Result<(), Error> {
    let truth = dataset::load_labels(&args.truth)?;
    let pred = dataset::load_labels(&args.pred)?;
    let nmi = metrics::nmi(&truth, &pred)?;
    let accuracy = metrics::accuracy_opts(&truth, &pred, args.exclude_noise_accuracy)?;
    println!(
        "{}",
        serde_json::json!({
            "schema_version": report::SCHEMA_VERSION,
            "nmi": nmi,
            "accuracy": accuracy,
        })
    );
    Ok(())
}
