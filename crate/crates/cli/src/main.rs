//! `skipsig` command line: extract → mine → signature/stats → attribute.

mod config;

use std::fs;
use std::io::{self, BufReader, BufWriter, Write};
use std::path::{Path, PathBuf};
use std::process::ExitCode;
use std::sync::Arc;

use anyhow::{anyhow, Context};
use clap::{Parser, Subcommand};
use log::{error, info, warn};
use rayon::prelude::*;
use tempfile::NamedTempFile;

use skipsig::attribution::{evaluate_mined, stratified_split, EvaluationConfig, SplitConfig};
use skipsig::extract::{extract_sequences, parse_annotated_xml, write_tagseq};
use skipsig::seqdb::{read_tagseq, spmf};
use skipsig::signature::{
    build_signatures, mine_corpus, report, write_signature, write_stats_table, ClassDocuments, ClassPatterns,
    ClassSignatures, Document, DocumentPatterns,
};
use skipsig::synthetic::{generate, SyntheticConfig};
use skipsig::{Dictionary, Gap};

use config::{ConfigError, RunConfig};

const EXIT_PIPELINE: u8 = 1;
const EXIT_CONFIG: u8 = 2;
const EXIT_PARTIAL: u8 = 3;

#[derive(Parser, Debug)]
#[command(name = "skipsig", version, about = "Stylometric signatures from POS skip-gram patterns")]
struct Cli {
    #[command(subcommand)]
    command: Command,
    /// Run configuration file (key = value lines).
    #[arg(long, global = true)]
    config: Option<PathBuf>,
    #[arg(long, global = true)]
    k: Option<usize>,
    /// Maximum number of skipped itemsets, or "unbounded".
    #[arg(long, global = true)]
    gap: Option<Gap>,
    #[arg(long, global = true)]
    minlen: Option<usize>,
    #[arg(long, global = true)]
    maxlen: Option<usize>,
    #[arg(long, global = true)]
    quorum: Option<f64>,
    #[arg(long, global = true)]
    seed: Option<u64>,
    /// Worker threads; 0 uses every core.
    #[arg(long, global = true)]
    jobs: Option<usize>,
    /// Output directory.
    #[arg(long, global = true)]
    out: Option<PathBuf>,
}

#[derive(Subcommand, Debug, Clone, Copy)]
enum Command {
    /// Annotated XML → one tag-sequence file per document.
    Extract,
    /// Tag sequences → top-k pattern file per document.
    Mine,
    /// Pattern files → initial/revised signatures and the stats table.
    Signature,
    /// Print the stats table and temporal patterns of the revised signatures.
    Stats,
    /// Train/test split, signatures from the training part, attribution of the rest.
    Attribute,
    /// Write a synthetic tag-sequence corpus and a matching config file.
    Synth {
        #[arg(long, default_value_t = 4)]
        classes: usize,
        #[arg(long, default_value_t = 40)]
        docs: usize,
        #[arg(long, default_value_t = 30)]
        sentences: usize,
    },
}

enum Failure {
    Config(String),
    Partial { failed: usize, total: usize },
    Pipeline(anyhow::Error),
}

impl From<ConfigError> for Failure {
    fn from(e: ConfigError) -> Self {
        Failure::Config(e.0)
    }
}

impl From<anyhow::Error> for Failure {
    fn from(e: anyhow::Error) -> Self {
        Failure::Pipeline(e)
    }
}

type Outcome<T = ()> = Result<T, Failure>;

fn config_error(msg: impl Into<String>) -> Failure {
    Failure::Config(msg.into())
}

fn resolve_config(cli: &Cli) -> Result<RunConfig, ConfigError> {
    let mut cfg = match &cli.config {
        Some(path) => RunConfig::load(path)?,
        None => RunConfig::default(),
    };
    if let Some(k) = cli.k {
        cfg.params.k = k;
    }
    if let Some(gap) = cli.gap {
        cfg.params.gap = gap;
    }
    if let Some(minlen) = cli.minlen {
        cfg.params.minlen = minlen;
    }
    if let Some(maxlen) = cli.maxlen {
        cfg.params.maxlen = maxlen;
    }
    if let Some(q) = cli.quorum {
        cfg.quorum = q;
    }
    if let Some(seed) = cli.seed {
        cfg.seed = seed;
    }
    if let Some(jobs) = cli.jobs {
        cfg.jobs = jobs;
    }
    if let Some(out) = &cli.out {
        cfg.out_dir = out.clone();
    }
    cfg.validate()?;
    Ok(cfg)
}

/// Writes through a temporary file in the target directory, then renames.
fn write_atomic(path: &Path, body: impl FnOnce(&mut dyn Write) -> io::Result<()>) -> anyhow::Result<()> {
    let dir = path.parent().filter(|p| !p.as_os_str().is_empty()).unwrap_or(Path::new("."));
    fs::create_dir_all(dir).with_context(|| format!("creating {}", dir.display()))?;
    let mut tmp = NamedTempFile::new_in(dir).with_context(|| format!("creating temporary file in {}", dir.display()))?;
    {
        let mut w = BufWriter::new(tmp.as_file_mut());
        body(&mut w).with_context(|| format!("writing {}", path.display()))?;
        w.flush()?;
    }
    tmp.persist(path).with_context(|| format!("renaming into {}", path.display()))?;
    Ok(())
}

fn stem(path: &Path) -> anyhow::Result<String> {
    path.file_stem()
        .and_then(|s| s.to_str())
        .map(str::to_owned)
        .ok_or_else(|| anyhow!("unusable file name {}", path.display()))
}

/// Leading path components of a glob that contain no wildcard.
fn glob_base(pattern: &Path) -> PathBuf {
    pattern
        .components()
        .take_while(|c| !c.as_os_str().to_string_lossy().contains(['*', '?', '[', '{']))
        .collect()
}

/// XML inputs per class. Every class directory is checked before anything
/// is returned.
fn extraction_inputs(cfg: &RunConfig) -> Outcome<Vec<(String, Vec<PathBuf>)>> {
    cfg.require_classes(1)?;
    for class in &cfg.classes {
        let full = cfg.corpus_root.join(&class.pattern);
        let base = glob_base(&full);
        let dir = if base == full { base.parent().map(Path::to_path_buf).unwrap_or_default() } else { base };
        if !dir.is_dir() {
            return Err(config_error(format!("class {}: directory {} does not exist", class.id, dir.display())));
        }
    }
    let mut out = Vec::new();
    for class in &cfg.classes {
        let pattern = cfg.corpus_root.join(&class.pattern);
        let pattern = pattern.to_str().ok_or_else(|| config_error("non-UTF-8 corpus path"))?;
        let mut files: Vec<PathBuf> = glob::glob(pattern)
            .map_err(|e| config_error(format!("class {}: bad glob: {e}", class.id)))?
            .filter_map(Result::ok)
            .filter(|p| p.is_file())
            .collect();
        files.sort();
        out.push((class.id.clone(), files));
    }
    Ok(out)
}

/// `(stem, path)` of every `.text` file in `dir`, sorted by stem.
fn stage_files(dir: &Path) -> anyhow::Result<Vec<(String, PathBuf)>> {
    let mut files = Vec::new();
    for entry in fs::read_dir(dir).with_context(|| format!("listing {}", dir.display()))? {
        let path = entry?.path();
        if path.is_file() && path.extension().is_some_and(|e| e == "text") {
            files.push((stem(&path)?, path));
        }
    }
    files.sort();
    Ok(files)
}

fn stage_dirs(cfg: &RunConfig, stage: &str, min_classes: usize) -> Outcome<Vec<(String, PathBuf)>> {
    cfg.require_classes(min_classes)?;
    let dirs: Vec<(String, PathBuf)> =
        cfg.classes.iter().map(|c| (c.id.clone(), cfg.out_dir.join(stage).join(&c.id))).collect();
    for (id, dir) in &dirs {
        if !dir.is_dir() {
            return Err(config_error(format!("class {id}: directory {} does not exist", dir.display())));
        }
    }
    Ok(dirs)
}

fn cmd_extract(cfg: &RunConfig) -> Outcome {
    let inputs = extraction_inputs(cfg)?;
    let mut total = 0;
    let mut failed = 0;
    for (class, files) in &inputs {
        if files.is_empty() {
            warn!("class {class}: no input files");
        }
        let out_dir = cfg.out_dir.join("sequences").join(class);
        let results: Vec<anyhow::Result<()>> = files
            .par_iter()
            .map(|path| {
                let bytes = fs::read(path).with_context(|| format!("reading {}", path.display()))?;
                let doc_id = stem(path)?;
                let doc = parse_annotated_xml(doc_id.clone(), &bytes).with_context(|| path.display().to_string())?;
                let seqs = extract_sequences(&doc);
                write_atomic(&out_dir.join(format!("{doc_id}.text")), |w| write_tagseq(&seqs, w).map(|_| ()))
            })
            .collect();
        for r in results {
            total += 1;
            if let Err(e) = r {
                failed += 1;
                error!("{e:#}");
            }
        }
        info!("class {class}: {} file(s)", files.len());
    }
    println!("extracted {} of {total} document(s)", total - failed);
    if failed > 0 {
        return Err(Failure::Partial { failed, total });
    }
    Ok(())
}

fn cmd_mine(cfg: &RunConfig) -> Outcome {
    let dirs = stage_dirs(cfg, "sequences", 1)?;
    let mut corpus = Vec::new();
    for (class, dir) in &dirs {
        let documents = stage_files(dir)?
            .into_iter()
            .map(|(doc_id, path)| {
                let file = fs::File::open(&path).with_context(|| format!("opening {}", path.display()))?;
                let sequences = read_tagseq(&doc_id, BufReader::new(file))?;
                Ok(Document { doc_id, sequences })
            })
            .collect::<anyhow::Result<Vec<_>>>()?;
        corpus.push(ClassDocuments { class_id: class.clone(), documents });
    }
    let mined = mine_corpus(&corpus, &cfg.params).map_err(anyhow::Error::from)?;
    let root = cfg.out_dir.join("patterns");
    write_atomic(&root.join("dictionary.tsv"), |w| mined.dictionary.write_tsv(w))?;
    let mut n_docs = 0;
    for class in &mined.classes {
        let dir = root.join(&class.class_id);
        class
            .documents
            .par_iter()
            .map(|doc| {
                write_atomic(&dir.join(format!("{}.text", doc.doc_id)), |w| spmf::write_patterns(&doc.to_patterns(), w))
            })
            .collect::<anyhow::Result<Vec<_>>>()?;
        n_docs += class.documents.len();
    }
    println!("mined {n_docs} document(s) with {}", describe_params(cfg));
    Ok(())
}

fn describe_params(cfg: &RunConfig) -> String {
    let p = &cfg.params;
    format!("k={} minlen={} maxlen={} gap={}", p.k, p.minlen, p.maxlen, p.gap)
}

fn load_patterns(cfg: &RunConfig, min_classes: usize) -> Outcome<(Arc<Dictionary>, Vec<ClassPatterns>)> {
    let dirs = stage_dirs(cfg, "patterns", min_classes)?;
    let dict_path = cfg.out_dir.join("patterns").join("dictionary.tsv");
    let file = fs::File::open(&dict_path).with_context(|| format!("opening {}", dict_path.display()))?;
    let dictionary = Dictionary::read_tsv(BufReader::new(file)).with_context(|| dict_path.display().to_string())?;
    let mut classes = Vec::new();
    for (class, dir) in dirs {
        let documents = stage_files(&dir)?
            .into_iter()
            .map(|(doc_id, path)| {
                let file = fs::File::open(&path).with_context(|| format!("opening {}", path.display()))?;
                let patterns = spmf::read_patterns(BufReader::new(file)).with_context(|| path.display().to_string())?;
                Ok(DocumentPatterns::from_patterns(doc_id, patterns))
            })
            .collect::<anyhow::Result<Vec<_>>>()?;
        classes.push(ClassPatterns { class_id: class, documents });
    }
    Ok((Arc::new(dictionary), classes))
}

fn split_config(cfg: &RunConfig) -> SplitConfig {
    SplitConfig { train_fraction: cfg.train_fraction, seed: cfg.seed }
}

/// Signatures from the training part of the seeded split, the same part the
/// attribute command trains on.
fn training_signatures(cfg: &RunConfig) -> Outcome<(Arc<Dictionary>, Vec<ClassSignatures>)> {
    let (dictionary, classes) = load_patterns(cfg, 2)?;
    let sizes: Vec<usize> = classes.iter().map(|c| c.documents.len()).collect();
    let splits = stratified_split(&sizes, split_config(cfg)).map_err(anyhow::Error::from)?;
    let training: Vec<ClassPatterns> = classes
        .into_iter()
        .zip(splits)
        .map(|(c, s)| ClassPatterns {
            class_id: c.class_id,
            documents: s.train.iter().map(|&i| c.documents[i].clone()).collect(),
        })
        .collect();
    let built = build_signatures(&training, &dictionary, cfg.quorum).map_err(anyhow::Error::from)?;
    Ok((dictionary, built))
}

fn cmd_signature(cfg: &RunConfig) -> Outcome {
    let (dictionary, built) = training_signatures(cfg)?;
    let dir = cfg.out_dir.join("signatures");
    for class in &built {
        let id = &class.initial.class_id;
        write_atomic(&dir.join(format!("{id}.initial.txt")), |w| write_signature(&class.initial, w))?;
        write_atomic(&dir.join(format!("{id}.revised.txt")), |w| write_signature(&class.revised, w))?;
    }
    let stats: Vec<_> = built.iter().map(|c| c.stats.clone()).collect();
    write_atomic(&dir.join("stats.tsv"), |w| write_stats_table(&stats, w))?;
    write_atomic(&dir.join("report.txt"), |w| report(&built, &dictionary, w))?;
    write_stats_table(&stats, io::stdout().lock()).map_err(anyhow::Error::from)?;
    Ok(())
}

fn cmd_stats(cfg: &RunConfig) -> Outcome {
    let (dictionary, built) = training_signatures(cfg)?;
    report(&built, &dictionary, io::stdout().lock()).map_err(anyhow::Error::from)?;
    Ok(())
}

fn cmd_attribute(cfg: &RunConfig) -> Outcome {
    let (dictionary, classes) = load_patterns(cfg, 2)?;
    let eval_cfg = EvaluationConfig { quorum: cfg.quorum, split: split_config(cfg), ..Default::default() };
    let report = evaluate_mined(&classes, &dictionary, &eval_cfg).map_err(anyhow::Error::from)?;
    let dir = cfg.out_dir.join("attribution");
    write_atomic(&dir.join("report.tsv"), |w| report.write_table(w))?;
    write_atomic(&dir.join("scores.tsv"), |w| report.write_scores(w))?;
    let mut out = io::stdout().lock();
    report.write_table(&mut out).map_err(anyhow::Error::from)?;
    writeln!(out, "mean accuracy {:.4}", report.mean_accuracy()).map_err(anyhow::Error::from)?;
    Ok(())
}

fn cmd_synth(cfg: &RunConfig, classes: usize, docs: usize, sentences: usize) -> Outcome {
    if classes == 0 || docs == 0 || sentences == 0 {
        return Err(config_error("--classes, --docs and --sentences must be positive"));
    }
    let synth = SyntheticConfig {
        n_classes: classes,
        docs_per_class: docs,
        sentences_per_doc: sentences,
        seed: cfg.seed,
        ..Default::default()
    };
    let corpus = generate(&synth);
    let root = cfg.out_dir.join("sequences");
    for class in &corpus.classes {
        let dir = root.join(&class.class_id);
        class
            .documents
            .par_iter()
            .map(|doc| {
                write_atomic(&dir.join(format!("{}.text", doc.doc_id)), |w| write_tagseq(&doc.sequences, w).map(|_| ()))
            })
            .collect::<anyhow::Result<Vec<_>>>()?;
    }
    let mut run = RunConfig { out_dir: PathBuf::from("."), corpus_root: PathBuf::from("."), ..cfg.clone() };
    run.classes = corpus
        .classes
        .iter()
        .map(|c| config::ClassSpec { id: c.class_id.clone(), pattern: format!("{}/*.xml", c.class_id) })
        .collect();
    let conf_path = cfg.out_dir.join("synthetic.conf");
    write_atomic(&conf_path, |w| w.write_all(run.to_text().as_bytes()))?;
    for p in &corpus.planted {
        println!("{}\t{} -1 {} -1", p.class_id, p.first, p.second);
    }
    println!("wrote {} document(s); config at {}", classes * docs, conf_path.display());
    Ok(())
}

fn run(cli: &Cli) -> Outcome {
    let cfg = resolve_config(cli)?;
    if cfg.jobs > 0 {
        rayon::ThreadPoolBuilder::new()
            .num_threads(cfg.jobs)
            .build_global()
            .map_err(|e| anyhow!("thread pool: {e}"))?;
    }
    match cli.command {
        Command::Extract => cmd_extract(&cfg),
        Command::Mine => cmd_mine(&cfg),
        Command::Signature => cmd_signature(&cfg),
        Command::Stats => cmd_stats(&cfg),
        Command::Attribute => cmd_attribute(&cfg),
        Command::Synth { classes, docs, sentences } => cmd_synth(&cfg, classes, docs, sentences),
    }
}

fn main() -> ExitCode {
    env_logger::Builder::from_env(env_logger::Env::default().default_filter_or("warn")).init();
    let cli = Cli::parse();
    match run(&cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(Failure::Config(msg)) => {
            eprintln!("config error: {msg}");
            ExitCode::from(EXIT_CONFIG)
        }
        Err(Failure::Partial { failed, total }) => {
            eprintln!("{failed} of {total} document(s) failed to extract");
            ExitCode::from(EXIT_PARTIAL)
        }
        Err(Failure::Pipeline(e)) => {
            eprintln!("error: {e:#}");
            ExitCode::from(EXIT_PIPELINE)
        }
    }
}
