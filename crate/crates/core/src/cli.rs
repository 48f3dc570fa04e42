//! Command-line front end: `preprocess`, `analyze`, `synthetic`, `tsweep`.

use std::collections::BTreeMap;
use std::ffi::OsString;
use std::fmt::Write as _;
use std::fs;
use std::path::{Path, PathBuf};
use std::time::Instant;

use clap::{Args, Parser, Subcommand};
use log::info;
use serde::Serialize;
use sha2::{Digest, Sha256};

use crate::consensus::{Linkage, DEFAULT_CONSENSUS_FLOOR};
use crate::corpus::{
    apply_tfidf, build_matrix, english_stopwords, load_corpus, read_raw_corpus, read_stopwords,
    save_corpus, CorpusPaths, DocTermMatrix, Weighting, DEFAULT_MIN_DF,
};
use crate::error::{Error, Result};
use crate::factorization::rank_column;
use crate::stability::{find_peaks_in, Analysis, StabilityConfig};
use crate::stats::pearson;
use crate::synthetic::synthetic_corpus;

#[derive(Debug, Parser)]
#[command(name = "topic-stability", version, about = "Choose the number of NMF topics by term-ranking stability")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Tokenize raw text into a TF-IDF weighted, normalized corpus.
    Preprocess(PreprocessArgs),
    /// Compute the stability curve over a range of k.
    Analyze(AnalyzeArgs),
    /// Generate a random corpus with no topical structure.
    Synthetic(SyntheticArgs),
    /// Stability curves for several ranking depths from one set of factorizations.
    Tsweep(TsweepArgs),
}

#[derive(Debug, Args)]
pub struct PreprocessArgs {
    /// Directory of .txt files, or a file with one document per line.
    pub input: PathBuf,
    /// Stop-word file, one word per line. Defaults to the bundled English list.
    #[arg(long)]
    pub stopwords: Option<PathBuf>,
    #[arg(long, default_value_t = DEFAULT_MIN_DF)]
    pub min_df: usize,
    /// Base name of the written `.mtx`, `.terms` and `.docs` files.
    #[arg(long, default_value = "corpus")]
    pub name: String,
    #[arg(short, long)]
    pub output: PathBuf,
}

#[derive(Debug, Clone, Args)]
pub struct ProtocolArgs {
    #[arg(long, default_value_t = 2)]
    pub kmin: usize,
    #[arg(long, default_value_t = 12)]
    pub kmax: usize,
    /// Number of document samples.
    #[arg(long, default_value_t = 100)]
    pub tau: usize,
    /// Fraction of documents per sample.
    #[arg(long, default_value_t = 0.8)]
    pub beta: f64,
    #[arg(long, default_value_t = 50)]
    pub max_iter: usize,
    #[arg(long, default_value_t = 0)]
    pub seed: u64,
    /// Worker threads; defaults to the available parallelism.
    #[arg(long)]
    pub workers: Option<usize>,
}

impl ProtocolArgs {
    fn config(&self, t: usize) -> StabilityConfig {
        StabilityConfig {
            k_min: self.kmin,
            k_max: self.kmax,
            tau: self.tau,
            beta: self.beta,
            t,
            max_iter: self.max_iter,
            seed: self.seed,
            ..StabilityConfig::default()
        }
    }
}

#[derive(Debug, Args)]
pub struct AnalyzeArgs {
    /// Corpus `.mtx` file with `.terms` (and optionally `.docs`) alongside.
    pub matrix: PathBuf,
    #[command(flatten)]
    pub protocol: ProtocolArgs,
    /// Number of top terms per topic.
    #[arg(long, default_value_t = 20)]
    pub top_terms: usize,
    /// Also compute the consensus-matrix baseline.
    #[arg(long)]
    pub baseline: bool,
    #[arg(long, default_value = "average")]
    pub linkage: Linkage,
    #[arg(long, default_value_t = DEFAULT_CONSENSUS_FLOOR)]
    pub consensus_floor: f64,
    /// With --baseline, write the dense consensus matrix for every k.
    #[arg(long, requires = "baseline")]
    pub write_consensus: bool,
    #[arg(short, long)]
    pub output: PathBuf,
}

#[derive(Debug, Args)]
pub struct SyntheticArgs {
    #[arg(long, default_value_t = 500)]
    pub docs: usize,
    #[arg(long, default_value_t = 1500)]
    pub terms: usize,
    #[arg(long, default_value_t = 0)]
    pub seed: u64,
    #[arg(long, default_value = "synthetic")]
    pub name: String,
    #[arg(short, long)]
    pub output: PathBuf,
}

#[derive(Debug, Args)]
pub struct TsweepArgs {
    pub matrix: PathBuf,
    /// Comma-separated ranking depths.
    #[arg(long, value_delimiter = ',', default_value = "10,20,50,100")]
    pub t_values: Vec<usize>,
    #[command(flatten)]
    pub protocol: ProtocolArgs,
    #[arg(short, long)]
    pub output: PathBuf,
}

#[derive(Debug, Serialize)]
struct InputFile {
    path: String,
    sha256: String,
}

/// Written next to every command's outputs. Everything except `timings` is
/// determined by the inputs and arguments.
#[derive(Debug, Serialize)]
pub struct RunManifest {
    command: String,
    version: &'static str,
    config: serde_json::Value,
    inputs: Vec<InputFile>,
    outputs: Vec<String>,
    timings: BTreeMap<String, f64>,
}

impl RunManifest {
    fn new(command: &str, config: serde_json::Value) -> Self {
        RunManifest {
            command: command.into(),
            version: env!("CARGO_PKG_VERSION"),
            config,
            inputs: Vec::new(),
            outputs: Vec::new(),
            timings: BTreeMap::new(),
        }
    }

    fn input(&mut self, path: &Path) -> Result<()> {
        let bytes = fs::read(path).map_err(|e| Error::io(path, e))?;
        self.inputs.push(InputFile {
            path: path.display().to_string(),
            sha256: hex::encode(Sha256::digest(&bytes)),
        });
        Ok(())
    }

    fn time<T>(&mut self, phase: &str, job: impl FnOnce() -> Result<T>) -> Result<T> {
        let start = Instant::now();
        let out = job()?;
        let secs = start.elapsed().as_secs_f64();
        info!("{phase}: {secs:.2}s");
        self.timings.insert(phase.into(), secs);
        Ok(out)
    }

    fn write(mut self, dir: &Path, name: &str, contents: &str) -> Result<Self> {
        write_file(&dir.join(name), contents)?;
        self.outputs.push(name.into());
        Ok(self)
    }

    fn finish(self, dir: &Path) -> Result<()> {
        write_file(&dir.join("manifest.json"), &(serde_json::to_string_pretty(&self)? + "\n"))
    }
}

fn write_file(path: &Path, contents: &str) -> Result<()> {
    fs::write(path, contents).map_err(|e| Error::io(path, e))
}

fn create_dir(dir: &Path) -> Result<()> {
    fs::create_dir_all(dir).map_err(|e| Error::io(dir, e))
}

fn corpus_inputs(manifest: &mut RunManifest, paths: &CorpusPaths) -> Result<()> {
    manifest.input(&paths.mtx)?;
    manifest.input(&paths.terms)?;
    if paths.docs.exists() {
        manifest.input(&paths.docs)?;
    }
    Ok(())
}

/// Load a corpus for analysis. Raw counts are weighted with TF-IDF first; terms
/// with no remaining weight are dropped.
pub fn load_for_analysis(path: &Path) -> Result<DocTermMatrix> {
    let matrix = load_corpus(path)?;
    let matrix = match matrix.weighting() {
        Weighting::Counts => {
            info!("{} holds raw counts; applying TF-IDF", path.display());
            apply_tfidf(&matrix)?
        }
        _ => matrix,
    };
    let matrix = matrix.prune_empty_terms()?;
    info!("corpus: {} terms x {} documents", matrix.n_terms(), matrix.n_docs());
    Ok(matrix)
}

fn fmt6(x: f64) -> String {
    format!("{x:.6}")
}

fn fmt_opt(x: Option<f64>) -> String {
    x.map_or_else(|| "NA".into(), fmt6)
}

pub fn cmd_preprocess(args: &PreprocessArgs) -> Result<()> {
    let mut manifest = RunManifest::new(
        "preprocess",
        serde_json::json!({
            "input": args.input.display().to_string(),
            "stopwords": args.stopwords.as_ref().map(|p| p.display().to_string()),
            "min_df": args.min_df,
            "name": args.name,
        }),
    );
    let matrix = manifest.time("preprocess", || {
        let raw = read_raw_corpus(&args.input)?;
        let stopwords = match &args.stopwords {
            Some(p) => read_stopwords(p)?,
            None => english_stopwords(),
        };
        let counts = build_matrix(&raw, &stopwords, args.min_df)?;
        apply_tfidf(&counts)?.prune_empty_terms()
    })?;
    if let Some(p) = &args.stopwords {
        manifest.input(p)?;
    }
    save_corpus(&args.output, &args.name, &matrix)?;
    for ext in ["mtx", "terms", "docs"] {
        manifest.outputs.push(format!("{}.{ext}", args.name));
    }
    info!("wrote {} terms x {} documents", matrix.n_terms(), matrix.n_docs());
    manifest.finish(&args.output)
}

fn topics_listing(analysis: &Analysis, index: usize, t: usize) -> String {
    let kr = &analysis.runs()[index];
    let mut out = String::from("topic\trank\tterm\tweight\n");
    for c in 0..kr.k {
        for (r, (i, w)) in rank_column(&kr.reference.w, c, t).into_iter().enumerate() {
            let _ = writeln!(out, "{}\t{}\t{}\t{}", c + 1, r + 1, analysis.vocabulary().term(i), fmt6(w));
        }
    }
    out
}

fn consensus_csv(c: &crate::consensus::ConsensusMatrix) -> String {
    let n = c.n();
    let mut out = String::with_capacity(n * n * 9);
    for i in 0..n {
        for j in 0..n {
            if j > 0 {
                out.push(',');
            }
            out.push_str(&fmt6(c.get(i, j)));
        }
        out.push('\n');
    }
    out
}

pub fn cmd_analyze(args: &AnalyzeArgs) -> Result<()> {
    let config = args.protocol.config(args.top_terms);
    config.validate()?;
    let mut manifest = RunManifest::new(
        "analyze",
        serde_json::json!({
            "matrix": args.matrix.display().to_string(),
            "stability": config,
            "baseline": args.baseline,
            "linkage": args.linkage,
            "consensus_floor": args.consensus_floor,
        }),
    );
    corpus_inputs(&mut manifest, &CorpusPaths::from_mtx(&args.matrix))?;
    let matrix = manifest.time("load", || load_for_analysis(&args.matrix))?;
    let analysis = manifest.time("factorize", || Analysis::run(&matrix, &config, args.protocol.workers))?;
    let mut report = manifest.time("agreement", || analysis.report())?;
    let mut consensus_files = Vec::new();
    if args.baseline {
        let scores = manifest.time("consensus", || {
            let mut scores = Vec::new();
            for kr in analysis.runs() {
                let c = analysis.consensus_matrix(kr.k)?;
                scores.push(crate::consensus::cophenetic_score(&c, args.linkage)?);
                if args.write_consensus {
                    consensus_files.push((format!("consensus_k{}.csv", kr.k), consensus_csv(&c)));
                }
            }
            Ok(scores)
        })?;
        report.attach_consensus(&scores, args.consensus_floor);
    }

    create_dir(&args.output)?;
    let dir = &args.output;
    manifest = manifest.write(dir, "stability.csv", &report.to_csv())?;
    manifest = manifest.write(dir, "report.json", &report.to_json()?)?;
    for (i, kr) in analysis.runs().iter().enumerate() {
        manifest = manifest.write(dir, &format!("topics_k{}.txt", kr.k), &topics_listing(&analysis, i, config.t))?;
    }
    for (name, body) in consensus_files {
        manifest = manifest.write(dir, &name, &body)?;
    }
    if let Some(k) = report.peaks.first() {
        info!("highest stability peak at k={k}");
    }
    if report.no_clustering_tendency {
        info!("stability curve is flat and low: no clustering tendency");
    }
    manifest.finish(dir)
}

pub fn cmd_synthetic(args: &SyntheticArgs) -> Result<()> {
    let mut manifest = RunManifest::new(
        "synthetic",
        serde_json::json!({ "docs": args.docs, "terms": args.terms, "seed": args.seed, "name": args.name }),
    );
    let matrix = manifest.time("generate", || synthetic_corpus(args.docs, args.terms, args.seed))?;
    save_corpus(&args.output, &args.name, &matrix)?;
    for ext in ["mtx", "terms", "docs"] {
        manifest.outputs.push(format!("{}.{ext}", args.name));
    }
    manifest.finish(&args.output)
}

#[derive(Debug, Serialize)]
struct TsweepCurve {
    t: usize,
    stability: Vec<f64>,
    peaks: Vec<usize>,
}

#[derive(Debug, Serialize)]
struct TsweepReport {
    config: StabilityConfig,
    k: Vec<usize>,
    curves: Vec<TsweepCurve>,
    /// Pearson correlation between curves; null where a curve is constant.
    correlation: Vec<Vec<Option<f64>>>,
}

/// Pairwise Pearson correlation of curves.
pub fn curve_correlations(curves: &[Vec<f64>]) -> Vec<Vec<Option<f64>>> {
    curves
        .iter()
        .map(|a| curves.iter().map(|b| pearson(a, b)).collect())
        .collect()
}

pub fn cmd_tsweep(args: &TsweepArgs) -> Result<()> {
    if args.t_values.len() < 2 {
        return Err(Error::InvalidArgument("tsweep needs at least two t values".into()));
    }
    if args.t_values.contains(&0) {
        return Err(Error::InvalidArgument("t values must be at least 1".into()));
    }
    let config = args.protocol.config(args.t_values[0]);
    config.validate()?;
    let mut manifest = RunManifest::new(
        "tsweep",
        serde_json::json!({
            "matrix": args.matrix.display().to_string(),
            "stability": config,
            "t_values": args.t_values,
        }),
    );
    corpus_inputs(&mut manifest, &CorpusPaths::from_mtx(&args.matrix))?;
    let matrix = manifest.time("load", || load_for_analysis(&args.matrix))?;
    let analysis = manifest.time("factorize", || Analysis::run(&matrix, &config, args.protocol.workers))?;
    let curves = manifest.time("agreement", || {
        args.t_values
            .iter()
            .map(|&t| Ok(analysis.curve(t)?.values()))
            .collect::<Result<Vec<_>>>()
    })?;
    let ks = config.k_values();
    let correlation = curve_correlations(&curves);

    let mut table = String::from("k");
    for t in &args.t_values {
        let _ = write!(table, ",t{t}");
    }
    table.push('\n');
    for (row, k) in ks.iter().enumerate() {
        let _ = write!(table, "{k}");
        for c in &curves {
            let _ = write!(table, ",{}", fmt6(c[row]));
        }
        table.push('\n');
    }

    let mut corr = String::from("t");
    for t in &args.t_values {
        let _ = write!(corr, ",t{t}");
    }
    corr.push('\n');
    for (t, row) in args.t_values.iter().zip(&correlation) {
        let _ = write!(corr, "t{t}");
        for &r in row {
            let _ = write!(corr, ",{}", fmt_opt(r));
        }
        corr.push('\n');
    }

    let report = TsweepReport {
        config,
        curves: args
            .t_values
            .iter()
            .zip(&curves)
            .map(|(&t, c)| TsweepCurve { t, stability: c.clone(), peaks: find_peaks_in(&ks, c) })
            .collect(),
        k: ks,
        correlation,
    };

    create_dir(&args.output)?;
    let dir = &args.output;
    manifest = manifest.write(dir, "tsweep.csv", &table)?;
    manifest = manifest.write(dir, "correlation.csv", &corr)?;
    manifest = manifest.write(dir, "tsweep.json", &(serde_json::to_string_pretty(&report)? + "\n"))?;
    manifest.finish(dir)
}

pub fn run(cli: &Cli) -> Result<()> {
    match &cli.command {
        Command::Preprocess(a) => cmd_preprocess(a),
        Command::Analyze(a) => cmd_analyze(a),
        Command::Synthetic(a) => cmd_synthetic(a),
        Command::Tsweep(a) => cmd_tsweep(a),
    }
}

/// Parse `args`, run the command and return the process exit code.
pub fn main_with_args<I, T>(args: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            return if e.use_stderr() { 1 } else { 0 };
        }
    };
    match run(&cli) {
        Ok(()) => 0,
        Err(e) => {
            eprintln!("error: {e}");
            e.exit_code()
        }
    }
}
