//! Command-line front end.
//!
//! Exit codes: 0 success, 2 usage or invalid values, 3 I/O failure,
//! 4 dataset or data-validation failure. Flags override values read from
//! `--config`. All output files are independent of the thread count.

use std::collections::BTreeMap;
use std::ffi::OsString;
use std::fs;
use std::path::{Path, PathBuf};

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde::{Deserialize, Serialize};

use crate::dataset::{
    blob_indices, generate_synthetic, load_dataset, save_dataset, synthetic_mask, DatasetBundle, Label,
    LabelLayout, SyntheticSpec,
};
use crate::ensemble::BoostConfig;
use crate::evaluation::{
    confusion_tsv, correlate_behavior, permutation_test, run_cv, table1_tsv, PipelineConfig, Scheme, Table1Row,
};
use crate::relieff::ReliefFConfig;
use crate::stability::{
    clusters_tsv, remove_small_clusters, selection_histogram, smooth_map, superimpose, threshold_top,
    write_map, Connectivity, ScalarMap,
};
use crate::Error;

pub const EXIT_OK: i32 = 0;
pub const EXIT_USAGE: i32 = 2;
pub const EXIT_IO: i32 = 3;
pub const EXIT_DATA: i32 = 4;

/// Map-building settings.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct StabilityConfig {
    pub n_folds: usize,
    pub fwhm_mm: f64,
    pub top_voxels: usize,
    pub min_cluster: usize,
    pub connectivity: Connectivity,
}

impl Default for StabilityConfig {
    fn default() -> Self {
        StabilityConfig {
            n_folds: 100,
            fwhm_mm: 6.0,
            top_voxels: 2500,
            min_cluster: 5,
            connectivity: Connectivity::Face6,
        }
    }
}

/// Contents of a `--config` JSON file. Missing keys take their defaults;
/// unknown keys are rejected.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct RunConfig {
    pub seed: u64,
    pub output_dir: Option<PathBuf>,
    /// Worker threads; 0 picks the number of cores.
    pub threads: usize,
    pub synthetic: SyntheticSpec,
    pub relieff: ReliefFConfig,
    pub boost: BoostConfig,
    pub train_fraction: f64,
    /// `None` uses 100 for within-participant and 20 for cross-participant runs.
    pub cycles: Option<usize>,
    pub n_perm: usize,
    pub stability: StabilityConfig,
}

impl Default for RunConfig {
    fn default() -> Self {
        RunConfig {
            seed: 0,
            output_dir: None,
            threads: 0,
            synthetic: SyntheticSpec::default(),
            relieff: ReliefFConfig::default(),
            boost: BoostConfig::default(),
            train_fraction: 0.7,
            cycles: None,
            n_perm: 999,
            stability: StabilityConfig::default(),
        }
    }
}

#[derive(Parser, Debug)]
#[command(name = "voxdecode", version, about = "Voxel selection and boosted-stump decoding")]
struct Cli {
    /// JSON run configuration; flags take precedence.
    #[arg(long, global = true)]
    config: Option<PathBuf>,
    /// Worker threads (0 = all cores).
    #[arg(long, global = true)]
    threads: Option<usize>,
    /// Print the machine-readable result to stdout.
    #[arg(long, global = true)]
    json: bool,
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Generate a synthetic dataset with a planted signal.
    Synth(SynthArgs),
    /// Monte Carlo cross-validation.
    Cv(CvArgs),
    /// Block-label permutation test.
    Permute(PermuteArgs),
    /// Selection-frequency map with smoothing and cluster filtering.
    Histomap(HistomapArgs),
    /// Correlate per-participant accuracy with a behavioural score.
    Correlate(CorrelateArgs),
    /// Summarise a dataset.
    Inspect(InspectArgs),
}

#[derive(Args, Debug)]
struct SynthArgs {
    #[arg(long)]
    out: Option<PathBuf>,
    #[arg(long)]
    participants: Option<u32>,
    #[arg(long)]
    features: Option<usize>,
    /// Size of the planted blob at the centre of the mask.
    #[arg(long)]
    planted: Option<usize>,
    #[arg(long, allow_negative_numbers = true)]
    effect: Option<f64>,
    #[arg(long, allow_negative_numbers = true)]
    offset_sigma: Option<f64>,
    #[arg(long, allow_negative_numbers = true)]
    noise: Option<f64>,
    #[arg(long)]
    sessions: Option<u32>,
    #[arg(long)]
    blocks_per_session: Option<u32>,
    #[arg(long)]
    scans_per_block: Option<u32>,
    #[arg(long, value_enum)]
    layout: Option<LayoutArg>,
    #[arg(long)]
    seed: Option<u64>,
}

#[derive(Clone, Copy, Debug, ValueEnum)]
enum LayoutArg {
    Halves,
    Alternating,
}

#[derive(Clone, Copy, Debug, ValueEnum)]
enum SchemeArg {
    Within,
    Cross,
}

#[derive(Args, Debug)]
struct PipelineArgs {
    /// Dataset directory or manifest path.
    #[arg(long)]
    data: PathBuf,
    #[arg(long)]
    out: Option<PathBuf>,
    #[arg(long)]
    seed: Option<u64>,
    #[arg(long)]
    k: Option<usize>,
    #[arg(long, allow_negative_numbers = true)]
    sample_fraction: Option<f64>,
    #[arg(long)]
    top_n: Option<usize>,
    #[arg(long)]
    rounds: Option<usize>,
    #[arg(long, allow_negative_numbers = true)]
    train_fraction: Option<f64>,
}

#[derive(Args, Debug)]
struct CvArgs {
    #[command(flatten)]
    common: PipelineArgs,
    #[arg(long, value_enum)]
    scheme: SchemeArg,
    /// Required for `--scheme within`.
    #[arg(long)]
    participant: Option<u32>,
    #[arg(long)]
    cycles: Option<usize>,
}

#[derive(Args, Debug)]
struct PermuteArgs {
    #[command(flatten)]
    cv: CvArgs,
    #[arg(long)]
    n_perm: Option<usize>,
}

#[derive(Args, Debug)]
struct HistomapArgs {
    #[command(flatten)]
    common: PipelineArgs,
    /// Participants to include (default: all).
    #[arg(long, value_delimiter = ',')]
    participants: Vec<u32>,
    #[arg(long)]
    folds: Option<usize>,
    #[arg(long, allow_negative_numbers = true)]
    fwhm: Option<f64>,
    #[arg(long)]
    top_voxels: Option<usize>,
    #[arg(long)]
    min_cluster: Option<usize>,
    /// 6, 18 or 26.
    #[arg(long)]
    connectivity: Option<u32>,
}

#[derive(Args, Debug)]
struct CorrelateArgs {
    /// TSV whose first two columns are participant and accuracy.
    #[arg(long)]
    accuracy: PathBuf,
    /// TSV whose first two columns are participant and score.
    #[arg(long)]
    behavior: PathBuf,
    /// Participant id to leave out; repeatable.
    #[arg(long)]
    omit: Vec<u32>,
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Args, Debug)]
struct InspectArgs {
    #[arg(long)]
    data: PathBuf,
}

/// Error carrying its exit code.
#[derive(Debug)]
pub struct CliError {
    pub code: i32,
    pub message: String,
}

impl CliError {
    fn usage(message: impl Into<String>) -> Self {
        CliError {
            code: EXIT_USAGE,
            message: message.into(),
        }
    }
}

impl From<Error> for CliError {
    fn from(e: Error) -> Self {
        let code = match &e {
            Error::Io { .. } => EXIT_IO,
            _ => EXIT_DATA,
        };
        CliError {
            code,
            message: e.to_string(),
        }
    }
}

type CliResult<T> = std::result::Result<T, CliError>;

/// Flag and config validation failures are usage errors.
fn usage_err(e: Error) -> CliError {
    match e {
        Error::Io { .. } => CliError::from(e),
        other => CliError::usage(other.to_string()),
    }
}

/// Parses `args` (including the program name), runs the command and
/// returns the process exit code.
pub fn run<I, T>(args: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(c) => c,
        Err(e) => {
            let _ = e.print();
            return if e.use_stderr() { EXIT_USAGE } else { EXIT_OK };
        }
    };
    match dispatch(cli) {
        Ok(()) => EXIT_OK,
        Err(e) => {
            eprintln!("error: {}", e.message);
            e.code
        }
    }
}

fn dispatch(cli: Cli) -> CliResult<()> {
    let mut cfg = match &cli.config {
        Some(path) => {
            let text = fs::read_to_string(path).map_err(|e| CliError::from(Error::io(path, e)))?;
            serde_json::from_str::<RunConfig>(&text)
                .map_err(|e| CliError::usage(format!("config {}: {e}", path.display())))?
        }
        None => RunConfig::default(),
    };
    if let Some(t) = cli.threads {
        cfg.threads = t;
    }
    let pool = rayon::ThreadPoolBuilder::new()
        .num_threads(cfg.threads)
        .build()
        .map_err(|e| CliError::usage(format!("--threads: {e}")))?;
    let json = cli.json;
    pool.install(|| match cli.command {
        Command::Synth(a) => cmd_synth(a, cfg, json),
        Command::Cv(a) => cmd_cv(a, cfg, json),
        Command::Permute(a) => cmd_permute(a, cfg, json),
        Command::Histomap(a) => cmd_histomap(a, cfg, json),
        Command::Correlate(a) => cmd_correlate(a, json),
        Command::Inspect(a) => cmd_inspect(a, json),
    })
}

fn write_text(path: &Path, text: &str) -> CliResult<()> {
    fs::write(path, text).map_err(|e| Error::io(path, e).into())
}

fn write_json<T: Serialize>(path: &Path, value: &T) -> CliResult<()> {
    let mut text = serde_json::to_string_pretty(value).map_err(Error::from)?;
    text.push('\n');
    write_text(path, &text)
}

fn out_dir(flag: Option<PathBuf>, cfg: &RunConfig) -> CliResult<PathBuf> {
    let dir = flag
        .or_else(|| cfg.output_dir.clone())
        .ok_or_else(|| CliError::usage("--out is required (or set output_dir in --config)"))?;
    fs::create_dir_all(&dir).map_err(|e| Error::io(&dir, e))?;
    Ok(dir)
}

fn emit<T: Serialize>(json: bool, value: &T, human: impl FnOnce() -> String) -> CliResult<()> {
    if json {
        println!("{}", serde_json::to_string_pretty(value).map_err(Error::from)?);
    } else {
        print!("{}", human());
    }
    Ok(())
}

#[derive(Serialize)]
struct GroundTruth<'a> {
    planted: &'a [usize],
    spec: &'a SyntheticSpec,
}

fn cmd_synth(a: SynthArgs, cfg: RunConfig, json: bool) -> CliResult<()> {
    let mut spec = cfg.synthetic.clone();
    if let Some(v) = a.effect {
        if !(v >= 0.0 && v.is_finite()) {
            return Err(CliError::usage(format!("--effect must be >= 0, got {v}")));
        }
        spec.effect_size = v;
    }
    for (flag, value, slot) in [
        ("--offset-sigma", a.offset_sigma, &mut spec.participant_offset_sigma),
        ("--noise", a.noise, &mut spec.noise_sigma),
    ] {
        if let Some(v) = value {
            if !(v >= 0.0 && v.is_finite()) {
                return Err(CliError::usage(format!("{flag} must be >= 0, got {v}")));
            }
            *slot = v;
        }
    }
    if let Some(v) = a.participants {
        spec.n_participants = v;
    }
    if let Some(v) = a.sessions {
        spec.sessions_per_participant = v;
    }
    if let Some(v) = a.blocks_per_session {
        spec.blocks_per_session_per_label = v;
    }
    if let Some(v) = a.scans_per_block {
        spec.scans_per_block = v;
    }
    if let Some(l) = a.layout {
        spec.label_layout = match l {
            LayoutArg::Halves => LabelLayout::SessionHalves,
            LayoutArg::Alternating => LabelLayout::AlternatingSessions,
        };
    }
    spec.seed = a.seed.unwrap_or(cfg.seed);
    if let Some(v) = a.features {
        if v == 0 {
            return Err(CliError::usage("--features must be >= 1"));
        }
        spec.n_features = v;
    }
    if let Some(n) = a.planted {
        if n > spec.n_features {
            return Err(CliError::usage(format!(
                "--planted {n} exceeds --features {}",
                spec.n_features
            )));
        }
        spec.planted = blob_indices(&synthetic_mask(spec.n_features), n);
    }
    spec.validate().map_err(usage_err)?;
    let dir = out_dir(a.out, &cfg)?;
    let (bundle, planted) = generate_synthetic(&spec)?;
    save_dataset(&bundle, &dir)?;
    let truth = GroundTruth {
        planted: &planted,
        spec: &spec,
    };
    write_json(&dir.join("ground_truth.json"), &truth)?;
    emit(json, &truth, || {
        format!(
            "wrote {} scans x {} features for {} participants to {} ({} planted)\n",
            bundle.scans().len(),
            bundle.n_features(),
            spec.n_participants,
            dir.display(),
            planted.len()
        )
    })
}

fn pipeline_config(common: &PipelineArgs, cfg: &RunConfig, cycles: usize) -> CliResult<PipelineConfig> {
    let mut p = PipelineConfig {
        relieff: cfg.relieff.clone(),
        boost: cfg.boost.clone(),
        train_fraction: cfg.train_fraction,
        cycles,
        seed: common.seed.unwrap_or(cfg.seed),
    };
    if let Some(v) = common.k {
        p.relieff.k_neighbors = v;
    }
    if let Some(v) = common.sample_fraction {
        p.relieff.sample_fraction = v;
    }
    if let Some(v) = common.top_n {
        p.relieff.top_n = v;
    }
    if let Some(v) = common.rounds {
        p.boost.rounds = v;
    }
    if let Some(v) = common.train_fraction {
        p.train_fraction = v;
    }
    p.validate().map_err(usage_err)?;
    Ok(p)
}

fn scheme_of(a: &CvArgs) -> CliResult<Scheme> {
    match (a.scheme, a.participant) {
        (SchemeArg::Within, Some(p)) => Ok(Scheme::Within(p)),
        (SchemeArg::Within, None) => Err(CliError::usage("--participant is required for --scheme within")),
        (SchemeArg::Cross, _) => Ok(Scheme::Cross),
    }
}

fn cv_setup(a: &CvArgs, cfg: &RunConfig) -> CliResult<(Scheme, PipelineConfig)> {
    let scheme = scheme_of(a)?;
    let default_cycles = match scheme {
        Scheme::Within(_) => PipelineConfig::within_default().cycles,
        Scheme::Cross => PipelineConfig::cross_default().cycles,
    };
    let cycles = a.cycles.or(cfg.cycles).unwrap_or(default_cycles);
    let pcfg = pipeline_config(&a.common, cfg, cycles)?;
    Ok((scheme, pcfg))
}

fn label_namer(bundle: &DatasetBundle) -> impl Fn(Label) -> String + '_ {
    move |l| bundle.label_name(l)
}

fn cmd_cv(a: CvArgs, cfg: RunConfig, json: bool) -> CliResult<()> {
    let (scheme, pcfg) = cv_setup(&a, &cfg)?;
    let dir = out_dir(a.common.out.clone(), &cfg)?;
    let bundle = load_dataset(&a.common.data)?;
    let report = run_cv(&bundle, scheme, &pcfg)?;
    write_json(&dir.join("cv_report.json"), &report)?;
    if let Scheme::Within(p) = scheme {
        let row = Table1Row {
            participant: p,
            accuracy: report.mean_accuracy,
            p_value: None,
        };
        write_text(&dir.join("table1.tsv"), &table1_tsv(&[row]))?;
    }
    let confusion = confusion_tsv(&report, label_namer(&bundle));
    write_text(&dir.join("confusion.tsv"), &confusion)?;
    emit(json, &report, || {
        format!(
            "mean accuracy {:.3} ± {:.3} over {} cycles\n{confusion}",
            report.mean_accuracy,
            report.std_accuracy,
            report.cycles.len()
        )
    })
}

fn cmd_permute(a: PermuteArgs, cfg: RunConfig, json: bool) -> CliResult<()> {
    let n_perm = a.n_perm.unwrap_or(cfg.n_perm);
    if n_perm == 0 {
        return Err(CliError::usage("--n-perm must be >= 1"));
    }
    let (scheme, pcfg) = cv_setup(&a.cv, &cfg)?;
    let dir = out_dir(a.cv.common.out.clone(), &cfg)?;
    let bundle = load_dataset(&a.cv.common.data)?;
    let report = permutation_test(&bundle, scheme, n_perm, &pcfg)?;
    write_json(&dir.join("permutation_report.json"), &report)?;
    if let Scheme::Within(p) = scheme {
        let row = Table1Row {
            participant: p,
            accuracy: report.observed,
            p_value: Some(report.p_value),
        };
        write_text(&dir.join("table1.tsv"), &table1_tsv(&[row]))?;
    }
    emit(json, &report, || {
        format!(
            "observed {:.3}, p = {:.4} ({} permutations)\n",
            report.observed, report.p_value, report.n_perm
        )
    })
}

#[derive(Serialize)]
struct HistomapSummary {
    participants: Vec<u32>,
    n_folds: usize,
    fwhm_mm: f64,
    top_voxels: usize,
    min_cluster: usize,
    connectivity: Connectivity,
    thresholded_voxels: usize,
    surviving_voxels: usize,
    cluster_sizes: Vec<usize>,
}

fn cmd_histomap(a: HistomapArgs, cfg: RunConfig, json: bool) -> CliResult<()> {
    let mut st = cfg.stability.clone();
    if let Some(v) = a.folds {
        st.n_folds = v;
    }
    if let Some(v) = a.fwhm {
        st.fwhm_mm = v;
    }
    if let Some(v) = a.top_voxels {
        st.top_voxels = v;
    }
    if let Some(v) = a.min_cluster {
        st.min_cluster = v;
    }
    if let Some(c) = a.connectivity {
        st.connectivity = Connectivity::from_count(c)
            .ok_or_else(|| CliError::usage(format!("--connectivity must be 6, 18 or 26, got {c}")))?;
    }
    if !(st.fwhm_mm > 0.0 && st.fwhm_mm.is_finite()) {
        return Err(CliError::usage(format!("--fwhm must be > 0, got {}", st.fwhm_mm)));
    }
    if st.n_folds == 0 {
        return Err(CliError::usage("--folds must be >= 1"));
    }
    let pcfg = pipeline_config(&a.common, &cfg, 1)?;
    let dir = out_dir(a.common.out.clone(), &cfg)?;
    let bundle = load_dataset(&a.common.data)?;
    let participants = if a.participants.is_empty() {
        bundle.participants()
    } else {
        a.participants.clone()
    };
    let histograms = participants
        .iter()
        .map(|&p| selection_histogram(&bundle, p, st.n_folds, &pcfg))
        .collect::<crate::Result<Vec<_>>>()?;
    let raw = superimpose(bundle.mask(), &histograms)?;
    let smoothed = smooth_map(&raw, st.fwhm_mm)?;
    let thresholded = threshold_top(&smoothed, st.top_voxels, st.connectivity);
    let kept = remove_small_clusters(&thresholded, st.min_cluster);
    let kept_map = ScalarMap {
        grid: smoothed.grid.clone(),
        values: smoothed
            .values
            .iter()
            .zip(&kept.member)
            .map(|(&v, &m)| if m { v } else { 0.0 })
            .collect(),
    };
    write_map(&smoothed, &dir.join("map.vol"), &dir.join("map.json"))?;
    write_map(&kept_map, &dir.join("thresholded.vol"), &dir.join("thresholded.json"))?;
    write_text(&dir.join("clusters.tsv"), &clusters_tsv(&kept, &smoothed))?;
    let summary = HistomapSummary {
        participants,
        n_folds: st.n_folds,
        fwhm_mm: st.fwhm_mm,
        top_voxels: st.top_voxels,
        min_cluster: st.min_cluster,
        connectivity: st.connectivity,
        thresholded_voxels: thresholded.n_selected(),
        surviving_voxels: kept.n_selected(),
        cluster_sizes: kept.clusters.iter().map(Vec::len).collect(),
    };
    write_json(&dir.join("histomap_summary.json"), &summary)?;
    emit(json, &summary, || {
        format!(
            "{} voxels above threshold, {} in {} clusters of >= {} voxels\n",
            summary.thresholded_voxels,
            summary.surviving_voxels,
            summary.cluster_sizes.len(),
            summary.min_cluster
        )
    })
}

/// Reads `participant<TAB>value` lines; a first line that does not parse
/// is taken as a header.
fn read_participant_values(path: &Path) -> CliResult<BTreeMap<u32, f64>> {
    let text = fs::read_to_string(path).map_err(|e| Error::io(path, e))?;
    let mut out = BTreeMap::new();
    for (i, line) in text.lines().enumerate() {
        if line.trim().is_empty() {
            continue;
        }
        let mut cols = line.split('\t');
        let parsed = (|| {
            let id = cols.next()?.trim().parse::<u32>().ok()?;
            let v = cols.next()?.trim().parse::<f64>().ok()?;
            Some((id, v))
        })();
        match parsed {
            Some((id, v)) => {
                if out.insert(id, v).is_some() {
                    return Err(CliError::usage(format!("{}: participant {id} repeated", path.display())));
                }
            }
            None if i == 0 => {}
            None => {
                return Err(CliError::usage(format!(
                    "{}:{}: expected participant<TAB>value",
                    path.display(),
                    i + 1
                )))
            }
        }
    }
    Ok(out)
}

#[derive(Serialize)]
struct CorrelationOutput {
    r: f64,
    omitted: Vec<u32>,
    pairs: Vec<CorrelationPair>,
}

#[derive(Serialize)]
struct CorrelationPair {
    participant: u32,
    accuracy: f64,
    behavior: f64,
}

fn cmd_correlate(a: CorrelateArgs, json: bool) -> CliResult<()> {
    let acc = read_participant_values(&a.accuracy)?;
    let beh = read_participant_values(&a.behavior)?;
    if acc.keys().ne(beh.keys()) {
        return Err(CliError::usage(format!(
            "accuracy lists {} participants and behaviour {}; the participant sets must match",
            acc.len(),
            beh.len()
        )));
    }
    let ids: Vec<u32> = acc.keys().copied().collect();
    let mut omit = Vec::new();
    for id in &a.omit {
        let pos = ids
            .iter()
            .position(|x| x == id)
            .ok_or_else(|| CliError::usage(format!("--omit {id}: no such participant")))?;
        omit.push(pos);
    }
    let accuracy: Vec<f64> = acc.values().copied().collect();
    let behavior: Vec<f64> = beh.values().copied().collect();
    let c = correlate_behavior(&accuracy, &behavior, &omit).map_err(usage_err)?;
    let output = CorrelationOutput {
        r: c.r,
        omitted: a.omit.clone(),
        pairs: c
            .pairs
            .iter()
            .map(|&(i, accuracy, behavior)| CorrelationPair {
                participant: ids[i],
                accuracy,
                behavior,
            })
            .collect(),
    };
    if let Some(dir) = &a.out {
        fs::create_dir_all(dir).map_err(|e| Error::io(dir, e))?;
        write_json(&dir.join("correlation.json"), &output)?;
    }
    emit(json, &output, || {
        let mut s = format!("r = {:.6} over {} participants\n", output.r, output.pairs.len());
        for p in &output.pairs {
            s.push_str(&format!("{}\t{}\t{}\n", p.participant, p.accuracy, p.behavior));
        }
        s
    })
}

#[derive(Serialize)]
struct ParticipantSummary {
    participant: u32,
    scans: usize,
    blocks: BTreeMap<String, usize>,
}

#[derive(Serialize)]
struct DatasetSummary {
    n_scans: usize,
    n_features: usize,
    dims: [usize; 3],
    voxel_size_mm: [f64; 3],
    mask_sha256: String,
    participants: Vec<ParticipantSummary>,
}

fn cmd_inspect(a: InspectArgs, json: bool) -> CliResult<()> {
    let bundle = load_dataset(&a.data)?;
    let participants = bundle
        .participants()
        .into_iter()
        .map(|p| {
            let mut blocks = BTreeMap::new();
            for (_, l) in bundle.blocks_of(p) {
                *blocks.entry(bundle.label_name(l)).or_insert(0) += 1;
            }
            ParticipantSummary {
                participant: p,
                scans: bundle.scans_of(p).len(),
                blocks,
            }
        })
        .collect();
    let summary = DatasetSummary {
        n_scans: bundle.scans().len(),
        n_features: bundle.n_features(),
        dims: bundle.grid().dims,
        voxel_size_mm: bundle.grid().voxel_size_mm,
        mask_sha256: bundle.mask().checksum(),
        participants,
    };
    emit(json, &summary, || {
        let mut s = format!(
            "{} scans, {} features, grid {:?}, mask sha256 {}\n",
            summary.n_scans, summary.n_features, summary.dims, summary.mask_sha256
        );
        for p in &summary.participants {
            s.push_str(&format!("participant {}: {} scans, blocks {:?}\n", p.participant, p.scans, p.blocks));
        }
        s
    })
}
