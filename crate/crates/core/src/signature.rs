//! Class signatures built from per-document top-k patterns.
//!
//! Each document is mined on its own. A class's initial signature holds the
//! patterns found in at least a quorum of its training documents (all of them
//! by default). Its reference patterns are everything mined from the training
//! documents of the other classes, and the revised signature is the initial
//! one minus the reference patterns.

use std::collections::{BTreeMap, BTreeSet};
use std::fmt;
use std::io::{self, BufRead, Write};
use std::sync::Arc;

use log::warn;
use rayon::prelude::*;
use thiserror::Error;

use crate::extract::TagSequence;
use crate::miner::{MineError, Miner};
use crate::seqdb::spmf::{self, SpmfError};
use crate::seqdb::{Dictionary, MiningParams, Pattern, PatternKey, SequenceDatabase, TERMINATOR};

pub const TEMPORAL_SYMBOLS: [&str; 2] = ["EVENT", "TIMEX3"];

#[derive(Debug, Error)]
pub enum SignatureError {
    #[error("class {0:?} has no training documents")]
    EmptyCorpus(String),
    #[error("quorum must lie in (0, 1], got {0}")]
    InvalidQuorum(f64),
    #[error("signature file: {0}")]
    MalformedHeader(String),
    #[error(transparent)]
    Spmf(#[from] SpmfError),
    #[error(transparent)]
    Io(#[from] io::Error),
}

/// The deduplicated patterns mined from one document.
#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct DocumentPatterns {
    pub doc_id: String,
    pub patterns: BTreeMap<PatternKey, u32>,
}

impl DocumentPatterns {
    /// Keeps the largest support when a key repeats.
    pub fn from_patterns(doc_id: impl Into<String>, patterns: impl IntoIterator<Item = Pattern>) -> Self {
        let mut map: BTreeMap<PatternKey, u32> = BTreeMap::new();
        for p in patterns {
            let slot = map.entry(p.key).or_insert(0);
            *slot = (*slot).max(p.support);
        }
        DocumentPatterns { doc_id: doc_id.into(), patterns: map }
    }

    pub fn support(&self, key: &PatternKey) -> Option<u32> {
        self.patterns.get(key).copied()
    }

    pub fn len(&self) -> usize {
        self.patterns.len()
    }

    pub fn is_empty(&self) -> bool {
        self.patterns.is_empty()
    }

    /// Patterns in result order (support descending, then key).
    pub fn to_patterns(&self) -> Vec<Pattern> {
        let mut out: Vec<Pattern> = self
            .patterns
            .iter()
            .map(|(k, &s)| Pattern::new(k.clone(), s))
            .collect();
        out.sort_by(Pattern::rank_cmp);
        out
    }

    /// Multiplies every support by `factor`.
    pub fn scaled(&self, factor: u32) -> Self {
        DocumentPatterns {
            doc_id: self.doc_id.clone(),
            patterns: self.patterns.iter().map(|(k, &s)| (k.clone(), s * factor)).collect(),
        }
    }
}

/// Mines the top-k patterns of one document.
pub fn mine_document(doc_id: &str, db: &SequenceDatabase, params: &MiningParams) -> Result<DocumentPatterns, MineError> {
    let outcome = Miner::new(*params)?.mine(db);
    Ok(DocumentPatterns::from_patterns(doc_id, outcome.patterns))
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Stage {
    Initial,
    Revised,
}

impl fmt::Display for Stage {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Stage::Initial => "initial",
            Stage::Revised => "revised",
        })
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SignatureEntry {
    /// Mean support over the documents that contain the pattern.
    pub mean_support: f64,
    pub doc_frequency: usize,
}

#[derive(Debug, Clone, PartialEq)]
pub struct Signature {
    pub class_id: String,
    pub stage: Stage,
    pub patterns: BTreeMap<PatternKey, SignatureEntry>,
}

impl Signature {
    pub fn len(&self) -> usize {
        self.patterns.len()
    }

    pub fn is_empty(&self) -> bool {
        self.patterns.is_empty()
    }

    pub fn contains(&self, key: &PatternKey) -> bool {
        self.patterns.contains_key(key)
    }

    pub fn keys(&self) -> impl Iterator<Item = &PatternKey> {
        self.patterns.keys()
    }

    /// Patterns with their mean support rounded to an integer, in result
    /// order.
    pub fn ranked(&self) -> Vec<Pattern> {
        let mut out: Vec<Pattern> = self
            .patterns
            .iter()
            .map(|(k, e)| Pattern::new(k.clone(), e.mean_support.round() as u32))
            .collect();
        out.sort_by(Pattern::rank_cmp);
        out
    }
}

/// Patterns present in at least `ceil(quorum * docs.len())` documents.
pub fn initial_signature(class_id: &str, docs: &[DocumentPatterns], quorum: f64) -> Result<Signature, SignatureError> {
    if !(quorum > 0.0 && quorum <= 1.0) {
        return Err(SignatureError::InvalidQuorum(quorum));
    }
    if docs.is_empty() {
        return Err(SignatureError::EmptyCorpus(class_id.to_owned()));
    }
    // Tolerance keeps e.g. 0.75 * 4 at 3 rather than 3.0000000000000004.
    let needed = ((quorum * docs.len() as f64) - 1e-9).ceil().max(1.0) as usize;

    let mut tally: BTreeMap<&PatternKey, (usize, u64)> = BTreeMap::new();
    for doc in docs {
        for (key, &support) in &doc.patterns {
            let slot = tally.entry(key).or_insert((0, 0));
            slot.0 += 1;
            slot.1 += support as u64;
        }
    }
    let patterns = tally
        .into_iter()
        .filter(|(_, (df, _))| *df >= needed)
        .map(|(key, (df, total))| {
            (key.clone(), SignatureEntry { mean_support: total as f64 / df as f64, doc_frequency: df })
        })
        .collect();
    Ok(Signature { class_id: class_id.to_owned(), stage: Stage::Initial, patterns })
}

/// Pooled patterns of the other classes.
#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct ReferencePatterns {
    pub keys: BTreeSet<PatternKey>,
    /// Patterns counted with repetition across documents, as in a
    /// concatenation of all the per-document pattern files.
    pub total: usize,
}

impl ReferencePatterns {
    pub fn len(&self) -> usize {
        self.keys.len()
    }

    pub fn is_empty(&self) -> bool {
        self.keys.is_empty()
    }
}

pub fn reference_patterns(other_classes: &[&[DocumentPatterns]]) -> ReferencePatterns {
    let mut out = ReferencePatterns::default();
    for docs in other_classes {
        for doc in *docs {
            out.total += doc.len();
            out.keys.extend(doc.patterns.keys().cloned());
        }
    }
    out
}

pub fn revise_signature(initial: &Signature, reference: &ReferencePatterns) -> Signature {
    let patterns: BTreeMap<_, _> = initial
        .patterns
        .iter()
        .filter(|(k, _)| !reference.keys.contains(*k))
        .map(|(k, e)| (k.clone(), *e))
        .collect();
    if patterns.is_empty() && !initial.is_empty() {
        warn!(
            "revised signature of class {:?} is empty: all {} initial patterns occur in other classes",
            initial.class_id,
            initial.len()
        );
    }
    Signature { class_id: initial.class_id.clone(), stage: Stage::Revised, patterns }
}

/// Count of patterns mentioning EVENT or TIMEX3 out of a total.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct TemporalStats {
    pub n_temporal: usize,
    pub n_patterns: usize,
}

impl TemporalStats {
    pub fn ratio(&self) -> f64 {
        if self.n_patterns == 0 {
            0.0
        } else {
            self.n_temporal as f64 / self.n_patterns as f64
        }
    }

    /// Percentage in tenths, rounded half up with integer arithmetic.
    pub fn percent_tenths(&self) -> u64 {
        if self.n_patterns == 0 {
            return 0;
        }
        let (t, n) = (self.n_temporal as u64, self.n_patterns as u64);
        (2000 * t + n) / (2 * n)
    }

    /// One-decimal percentage such as `"35.5"`.
    pub fn percent(&self) -> String {
        let tenths = self.percent_tenths();
        format!("{}.{}", tenths / 10, tenths % 10)
    }
}

pub fn is_temporal(key: &PatternKey, dictionary: &Dictionary) -> bool {
    let codes: Vec<_> = TEMPORAL_SYMBOLS.iter().filter_map(|s| dictionary.code(s)).collect();
    key.items().any(|item| codes.contains(&item))
}

pub fn temporal_stats(sig: &Signature, dictionary: &Dictionary) -> TemporalStats {
    TemporalStats {
        n_temporal: sig.keys().filter(|k| is_temporal(k, dictionary)).count(),
        n_patterns: sig.len(),
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct SignatureStats {
    pub class_id: String,
    pub n_training_patterns: usize,
    pub n_reference: usize,
    pub n_initial: usize,
    pub n_revised: usize,
    pub temporal: TemporalStats,
}

/// Training documents of one class.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ClassPatterns {
    pub class_id: String,
    pub documents: Vec<DocumentPatterns>,
}

#[derive(Debug, Clone, PartialEq)]
pub struct ClassSignatures {
    pub initial: Signature,
    pub revised: Signature,
    pub stats: SignatureStats,
}

/// Initial and revised signatures plus statistics for every class, in
/// registration order.
pub fn build_signatures(
    classes: &[ClassPatterns],
    dictionary: &Dictionary,
    quorum: f64,
) -> Result<Vec<ClassSignatures>, SignatureError> {
    classes
        .iter()
        .enumerate()
        .map(|(idx, class)| {
            let initial = initial_signature(&class.class_id, &class.documents, quorum)?;
            let others: Vec<&[DocumentPatterns]> = classes
                .iter()
                .enumerate()
                .filter(|(j, _)| *j != idx)
                .map(|(_, c)| c.documents.as_slice())
                .collect();
            let reference = reference_patterns(&others);
            let revised = revise_signature(&initial, &reference);
            let stats = SignatureStats {
                class_id: class.class_id.clone(),
                n_training_patterns: class.documents.iter().map(DocumentPatterns::len).sum(),
                n_reference: reference.total,
                n_initial: initial.len(),
                n_revised: revised.len(),
                temporal: temporal_stats(&revised, dictionary),
            };
            Ok(ClassSignatures { initial, revised, stats })
        })
        .collect()
}

/// A document as a list of sentence tag sequences.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Document {
    pub doc_id: String,
    pub sequences: Vec<TagSequence>,
}

/// The documents of one class, before mining.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ClassDocuments {
    pub class_id: String,
    pub documents: Vec<Document>,
}

/// Dictionary over a whole corpus: classes in registration order, documents
/// in list order, codes by first appearance.
pub fn corpus_dictionary(corpus: &[ClassDocuments]) -> Dictionary {
    let mut dict = Dictionary::new();
    for doc in corpus.iter().flat_map(|c| &c.documents) {
        for token in doc.sequences.iter().flat_map(|s| &s.tokens) {
            if token != TERMINATOR {
                dict.intern(token);
            }
        }
    }
    dict
}

#[derive(Debug, Clone)]
pub struct MinedCorpus {
    pub dictionary: Arc<Dictionary>,
    pub classes: Vec<ClassPatterns>,
}

/// Mines every document against one shared dictionary. Documents are mined
/// in parallel; the output order follows the input.
pub fn mine_corpus(corpus: &[ClassDocuments], params: &MiningParams) -> Result<MinedCorpus, MineError> {
    let miner = Miner::new(*params)?;
    let dictionary = Arc::new(corpus_dictionary(corpus));
    let classes = corpus
        .iter()
        .map(|class| {
            let documents = class
                .documents
                .par_iter()
                .map(|doc| {
                    let db = SequenceDatabase::encode_shared(&doc.sequences, &dictionary)
                        .expect("dictionary covers the corpus");
                    DocumentPatterns::from_patterns(doc.doc_id.clone(), miner.mine(&db).patterns)
                })
                .collect();
            ClassPatterns { class_id: class.class_id.clone(), documents }
        })
        .collect();
    Ok(MinedCorpus { dictionary, classes })
}

pub const STATS_HEADER: &str = "class\ttraining_patterns\treference\tinitial\trevised\ttemporal\tratio";

pub fn write_stats_table<W: Write>(stats: &[SignatureStats], mut sink: W) -> io::Result<()> {
    writeln!(sink, "{STATS_HEADER}")?;
    for s in stats {
        writeln!(
            sink,
            "{}\t{}\t{}\t{}\t{}\t{}\t{}",
            s.class_id,
            s.n_training_patterns,
            s.n_reference,
            s.n_initial,
            s.n_revised,
            s.temporal.n_temporal,
            s.temporal.percent()
        )?;
    }
    Ok(())
}

/// SPMF-style line with symbols, e.g. `EVENT -1 vbd -1 #SUP: 37`.
pub fn format_symbolic(key: &PatternKey, support: u32, dictionary: &Dictionary) -> String {
    spmf::format_pattern_with(key, support, |item| {
        dictionary.symbol(item).map(str::to_owned).unwrap_or_else(|| item.to_string())
    })
}

/// Signature listing with symbols, optionally restricted to temporal patterns.
pub fn write_listing<W: Write>(sig: &Signature, dictionary: &Dictionary, temporal_only: bool, mut sink: W) -> io::Result<()> {
    for p in sig.ranked() {
        if temporal_only && !is_temporal(&p.key, dictionary) {
            continue;
        }
        writeln!(sink, "{}", format_symbolic(&p.key, p.support, dictionary))?;
    }
    Ok(())
}

/// Counts table followed by the temporal patterns of each revised signature.
pub fn report<W: Write>(classes: &[ClassSignatures], dictionary: &Dictionary, mut sink: W) -> io::Result<()> {
    let stats: Vec<SignatureStats> = classes.iter().map(|c| c.stats.clone()).collect();
    write_stats_table(&stats, &mut sink)?;
    for class in classes {
        writeln!(sink)?;
        writeln!(
            sink,
            "# {} revised signature: {} patterns, {} with temporal tags",
            class.revised.class_id, class.stats.n_revised, class.stats.temporal.n_temporal
        )?;
        write_listing(&class.revised, dictionary, true, &mut sink)?;
    }
    Ok(())
}

/// Header line `class <id> stage <initial|revised>` then one SPMF pattern
/// line per entry, support rounded to the nearest integer.
pub fn write_signature<W: Write>(sig: &Signature, mut sink: W) -> io::Result<()> {
    writeln!(sink, "class {} stage {}", sig.class_id, sig.stage)?;
    spmf::write_patterns(&sig.ranked(), sink)
}

pub fn read_signature<R: BufRead>(mut source: R) -> Result<Signature, SignatureError> {
    let mut header = String::new();
    source.read_line(&mut header)?;
    let parts: Vec<&str> = header.split_whitespace().collect();
    let (class_id, stage) = match parts.as_slice() {
        ["class", id, "stage", "initial"] => (id.to_string(), Stage::Initial),
        ["class", id, "stage", "revised"] => (id.to_string(), Stage::Revised),
        _ => return Err(SignatureError::MalformedHeader(header.trim_end().to_owned())),
    };
    let patterns = spmf::read_patterns(source)?
        .into_iter()
        .map(|p| (p.key, SignatureEntry { mean_support: p.support as f64, doc_frequency: 0 }))
        .collect();
    Ok(Signature { class_id, stage, patterns })
}
