//! Stylometric signatures from gap-constrained sequential patterns.
//!
//! The crate is organised as a pipeline:
//!
//! * [`extract`] turns TTK/TimeML-annotated XML into per-sentence tag sequences.
//! * [`seqdb`] integer-codes those sequences, builds the vertical index and
//!   defines gap-aware containment and support. It also reads and writes
//!   SPMF-style files.
//! * [`miner`] finds the top-k patterns of a database.
//! * [`oracle`] is a brute-force enumerator used to check the miner.
//! * [`signature`] intersects per-document patterns into class signatures and
//!   subtracts the patterns seen in other classes.
//! * [`attribution`] scores unseen documents against signatures with Pearson
//!   correlation and evaluates train/test splits.
//! * [`synthetic`] generates labelled tag corpora with planted patterns.

pub mod attribution;
pub mod extract;
pub mod miner;
pub mod oracle;
pub mod seqdb;
pub mod signature;
pub mod synthetic;

pub use attribution::{
    classify, evaluate, evaluate_mined, pearson, stratified_split, vectorize, AttributionError,
    AttributionResult, ClassAccuracy, EmptyRevisedPolicy, EvaluationConfig, EvaluationReport, FeatureVector,
    PearsonError, SplitConfig,
};
pub use extract::{extract_sequences, parse_annotated_xml, write_tagseq, AnnotatedDocument, TagSequence};
pub use miner::{mine_topk, MineError, Miner, MinerOptions};
pub use seqdb::{
    encode_corpus, Dictionary, Gap, Item, Itemset, MiningParams, Pattern, PatternKey, Sequence,
    SequenceDatabase, VerticalIndex,
};
pub use signature::{
    build_signatures, mine_corpus, ClassDocuments, ClassPatterns, ClassSignatures, Document, DocumentPatterns,
    Signature, SignatureError, SignatureStats, Stage,
};
