//! Attribution of unseen documents by Pearson correlation with class
//! signatures, and train/test evaluation.
//!
//! A class is scored on its own signature keys only: `x` holds the
//! signature's mean supports and `y` the test document's supports for the same
//! keys (0 when the document lacks a pattern). The class with the largest
//! defined correlation wins; ties go to the class registered first.

use std::io::{self, Write};

use rand::seq::SliceRandom;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use thiserror::Error;

use crate::seqdb::{Dictionary, MiningParams, PatternKey};
use crate::signature::{
    build_signatures, mine_corpus, ClassDocuments, ClassPatterns, DocumentPatterns, Signature, SignatureError,
};
use crate::miner::MineError;

#[derive(Debug, Error)]
pub enum AttributionError {
    #[error("signature of class {0:?} is empty")]
    EmptySignature(String),
    #[error("at least two classes are required, got {0}")]
    TooFewClasses(usize),
    #[error("class {class:?} has {n} documents; at least {min} are required")]
    TooFewDocuments { class: String, n: usize, min: usize },
    #[error("train fraction must lie in (0, 1), got {0}")]
    InvalidSplit(f64),
    #[error(transparent)]
    Signature(#[from] SignatureError),
    #[error(transparent)]
    Mine(#[from] MineError),
}

#[derive(Debug, Error, Clone, Copy, PartialEq, Eq)]
pub enum PearsonError {
    #[error("vectors differ in length ({0} vs {1})")]
    LengthMismatch(usize, usize),
    #[error("correlation undefined: fewer than two values or zero variance")]
    Undefined,
}

#[derive(Debug, Clone, PartialEq)]
pub struct FeatureVector {
    pub keys: Vec<PatternKey>,
    pub values: Vec<f64>,
}

/// Signature supports `x` and test-document supports `y` over the signature
/// keys in canonical order.
pub fn vectorize(sig: &Signature, test: &DocumentPatterns) -> Result<(FeatureVector, FeatureVector), AttributionError> {
    if sig.is_empty() {
        return Err(AttributionError::EmptySignature(sig.class_id.clone()));
    }
    let keys: Vec<PatternKey> = sig.keys().cloned().collect();
    let x = sig.patterns.values().map(|e| e.mean_support).collect();
    let y = keys
        .iter()
        .map(|k| test.support(k).map_or(0.0, f64::from))
        .collect();
    Ok((FeatureVector { keys: keys.clone(), values: x }, FeatureVector { keys, values: y }))
}

/// Sample Pearson correlation.
pub fn pearson(x: &[f64], y: &[f64]) -> Result<f64, PearsonError> {
    if x.len() != y.len() {
        return Err(PearsonError::LengthMismatch(x.len(), y.len()));
    }
    if x.len() < 2 {
        return Err(PearsonError::Undefined);
    }
    let n = x.len() as f64;
    let mx = x.iter().sum::<f64>() / n;
    let my = y.iter().sum::<f64>() / n;
    let (mut sxy, mut sxx, mut syy) = (0.0, 0.0, 0.0);
    for (&a, &b) in x.iter().zip(y) {
        let (da, db) = (a - mx, b - my);
        sxy += da * db;
        sxx += da * da;
        syy += db * db;
    }
    if sxx <= 0.0 || syy <= 0.0 {
        return Err(PearsonError::Undefined);
    }
    Ok((sxy / (sxx.sqrt() * syy.sqrt())).clamp(-1.0, 1.0))
}

#[derive(Debug, Clone, PartialEq)]
pub struct AttributionResult {
    pub doc_id: String,
    /// One score per class in registration order; `None` when undefined.
    pub scores: Vec<(String, Option<f64>)>,
    /// `None` when every score is undefined.
    pub predicted: Option<String>,
}

/// Scores `test` against every signature and predicts the best class.
pub fn classify(test: &DocumentPatterns, signatures: &[&Signature]) -> Result<AttributionResult, AttributionError> {
    if signatures.len() < 2 {
        return Err(AttributionError::TooFewClasses(signatures.len()));
    }
    let scores: Vec<(String, Option<f64>)> = signatures
        .iter()
        .map(|sig| {
            let r = vectorize(sig, test)
                .ok()
                .and_then(|(x, y)| pearson(&x.values, &y.values).ok());
            (sig.class_id.clone(), r)
        })
        .collect();
    let mut best: Option<(usize, f64)> = None;
    for (idx, (_, r)) in scores.iter().enumerate() {
        if let Some(r) = *r {
            if best.is_none_or(|(_, b)| r > b) {
                best = Some((idx, r));
            }
        }
    }
    let predicted = best.map(|(idx, _)| scores[idx].0.clone());
    Ok(AttributionResult { doc_id: test.doc_id.clone(), scores, predicted })
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SplitConfig {
    pub train_fraction: f64,
    pub seed: u64,
}

impl Default for SplitConfig {
    fn default() -> Self {
        SplitConfig { train_fraction: 0.75, seed: 42 }
    }
}

pub const MIN_DOCUMENTS_PER_CLASS: usize = 4;

/// Train and test document indices of one class.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ClassSplit {
    pub train: Vec<usize>,
    pub test: Vec<usize>,
}

/// Seeded split stratified by class. Each class gets
/// `round(n * train_fraction)` training documents, at least one of each kind.
/// A class with fewer than two documents goes entirely to training.
pub fn stratified_split(class_sizes: &[usize], config: SplitConfig) -> Result<Vec<ClassSplit>, AttributionError> {
    if !(config.train_fraction > 0.0 && config.train_fraction < 1.0) {
        return Err(AttributionError::InvalidSplit(config.train_fraction));
    }
    let mut rng = ChaCha8Rng::seed_from_u64(config.seed);
    Ok(class_sizes
        .iter()
        .map(|&n| {
            let mut idx: Vec<usize> = (0..n).collect();
            idx.shuffle(&mut rng);
            let n_train = if n < 2 {
                n
            } else {
                ((n as f64 * config.train_fraction).round() as usize).clamp(1, n - 1)
            };
            let mut train = idx[..n_train].to_vec();
            let mut test = idx[n_train..].to_vec();
            train.sort_unstable();
            test.sort_unstable();
            ClassSplit { train, test }
        })
        .collect())
}

/// What to score a class against when its revised signature came out empty.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum EmptyRevisedPolicy {
    /// Fall back to the class's initial signature.
    #[default]
    UseInitial,
    /// Leave the class unscored.
    Abstain,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct EvaluationConfig {
    pub quorum: f64,
    pub split: SplitConfig,
    pub empty_revised: EmptyRevisedPolicy,
}

impl Default for EvaluationConfig {
    fn default() -> Self {
        EvaluationConfig { quorum: 1.0, split: SplitConfig::default(), empty_revised: EmptyRevisedPolicy::default() }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct ClassAccuracy {
    pub class_id: String,
    pub n_test: usize,
    pub n_correct: usize,
}

impl ClassAccuracy {
    pub fn accuracy(&self) -> f64 {
        if self.n_test == 0 {
            0.0
        } else {
            self.n_correct as f64 / self.n_test as f64
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct EvaluationReport {
    pub per_class: Vec<ClassAccuracy>,
    pub train_fraction: f64,
    pub test_fraction: f64,
    /// (true class, result) for every test document.
    pub results: Vec<(String, AttributionResult)>,
}

impl EvaluationReport {
    /// Unweighted mean of the per-class accuracies.
    pub fn mean_accuracy(&self) -> f64 {
        if self.per_class.is_empty() {
            return 0.0;
        }
        self.per_class.iter().map(ClassAccuracy::accuracy).sum::<f64>() / self.per_class.len() as f64
    }

    /// `class  n_test  n_correct  accuracy`, tab separated.
    pub fn write_table<W: Write>(&self, mut sink: W) -> io::Result<()> {
        writeln!(sink, "class\tn_test\tn_correct\taccuracy")?;
        for c in &self.per_class {
            writeln!(sink, "{}\t{}\t{}\t{:.4}", c.class_id, c.n_test, c.n_correct, c.accuracy())?;
        }
        Ok(())
    }

    /// One `doc_id  class  r  predicted` line per scored pair; `NA` marks an
    /// undefined score and `-` an abstention.
    pub fn write_scores<W: Write>(&self, mut sink: W) -> io::Result<()> {
        writeln!(sink, "doc_id\tclass\tr\tpredicted")?;
        for (_, res) in &self.results {
            let predicted = res.predicted.as_deref().unwrap_or("-");
            for (class, r) in &res.scores {
                let r = r.map_or_else(|| "NA".to_owned(), |r| format!("{r:.6}"));
                writeln!(sink, "{}\t{}\t{}\t{}", res.doc_id, class, r, predicted)?;
            }
        }
        Ok(())
    }
}

/// Evaluates already-mined documents: split, build signatures on the training
/// part, attribute every test document.
pub fn evaluate_mined(
    classes: &[ClassPatterns],
    dictionary: &Dictionary,
    config: &EvaluationConfig,
) -> Result<EvaluationReport, AttributionError> {
    if classes.len() < 2 {
        return Err(AttributionError::TooFewClasses(classes.len()));
    }
    for c in classes {
        if c.documents.len() < MIN_DOCUMENTS_PER_CLASS {
            return Err(AttributionError::TooFewDocuments {
                class: c.class_id.clone(),
                n: c.documents.len(),
                min: MIN_DOCUMENTS_PER_CLASS,
            });
        }
    }
    let sizes: Vec<usize> = classes.iter().map(|c| c.documents.len()).collect();
    let splits = stratified_split(&sizes, config.split)?;

    let training: Vec<ClassPatterns> = classes
        .iter()
        .zip(&splits)
        .map(|(c, s)| ClassPatterns {
            class_id: c.class_id.clone(),
            documents: s.train.iter().map(|&i| c.documents[i].clone()).collect(),
        })
        .collect();
    let built = build_signatures(&training, dictionary, config.quorum)?;
    let scoring: Vec<&Signature> = built
        .iter()
        .map(|b| match config.empty_revised {
            EmptyRevisedPolicy::UseInitial if b.revised.is_empty() => &b.initial,
            _ => &b.revised,
        })
        .collect();

    let mut per_class = Vec::with_capacity(classes.len());
    let mut results = Vec::new();
    for (class, split) in classes.iter().zip(&splits) {
        let mut n_correct = 0;
        for &i in &split.test {
            let res = classify(&class.documents[i], &scoring)?;
            if res.predicted.as_deref() == Some(class.class_id.as_str()) {
                n_correct += 1;
            }
            results.push((class.class_id.clone(), res));
        }
        per_class.push(ClassAccuracy { class_id: class.class_id.clone(), n_test: split.test.len(), n_correct });
    }
    Ok(EvaluationReport {
        per_class,
        train_fraction: config.split.train_fraction,
        test_fraction: 1.0 - config.split.train_fraction,
        results,
    })
}

/// Mines the corpus with `params` and evaluates it.
pub fn evaluate(
    corpus: &[ClassDocuments],
    params: &MiningParams,
    config: &EvaluationConfig,
) -> Result<EvaluationReport, AttributionError> {
    if corpus.len() < 2 {
        return Err(AttributionError::TooFewClasses(corpus.len()));
    }
    let mined = mine_corpus(corpus, params)?;
    evaluate_mined(&mined.classes, &mined.dictionary, config)
}
