//! Labelled tag corpora with planted patterns.
//!
//! Every class shares one background distribution over POS/chunk/temporal
//! tags. Class `i` additionally owns two marker tags; in each of its documents
//! a fixed share of sentences carries the skip-gram `A_i · B_i` (one background
//! tag in between), and a second, disjoint share carries a lone `A_i`.

use rand::distr::weighted::WeightedIndex;
use rand::distr::Distribution;
use rand::seq::index::sample;
use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::extract::TagSequence;
use crate::seqdb::{Dictionary, Itemset, PatternKey};
use crate::signature::{ClassDocuments, Document};

/// Background tags, most frequent first.
pub const BACKGROUND_TAGS: [&str; 32] = [
    "ng", "vg", "AT0", "NN1", "PRP", "AJ0", "NN2", "EVENT", "VVD", "CJC", "PNP", "AV0", "VBZ", "NP0",
    "VVN", "TO0", "VVI", "DPS", "CRD", "PRF", "VVZ", "VBD", "TIMEX3", "VM0", "DT0", "PNQ", "VVG", "AJC",
    "VHD", "CJS", "XX0", "AVP",
];

#[derive(Debug, Clone, PartialEq)]
pub struct SyntheticConfig {
    pub n_classes: usize,
    pub docs_per_class: usize,
    pub sentences_per_doc: usize,
    /// Tokens per sentence including the leading `s`.
    pub sentence_len: usize,
    pub planted_fraction: f64,
    pub lone_fraction: f64,
    pub seed: u64,
}

impl Default for SyntheticConfig {
    fn default() -> Self {
        SyntheticConfig {
            n_classes: 4,
            docs_per_class: 40,
            sentences_per_doc: 30,
            sentence_len: 12,
            planted_fraction: 0.5,
            lone_fraction: 0.2,
            seed: 1,
        }
    }
}

impl SyntheticConfig {
    /// 225 documents of roughly 2,000 tokens each.
    pub fn desk_scale(seed: u64) -> Self {
        SyntheticConfig {
            n_classes: 3,
            docs_per_class: 75,
            sentences_per_doc: 167,
            sentence_len: 12,
            seed,
            ..Default::default()
        }
    }

    pub fn with_seed(mut self, seed: u64) -> Self {
        self.seed = seed;
        self
    }
}

/// The skip-gram planted in one class.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PlantedPattern {
    pub class_id: String,
    pub first: String,
    pub second: String,
}

impl PlantedPattern {
    /// `<first> -1 <second> -1` under `dictionary`, if both tags are coded.
    pub fn key(&self, dictionary: &Dictionary) -> Option<PatternKey> {
        let a = dictionary.code(&self.first)?;
        let b = dictionary.code(&self.second)?;
        Some(PatternKey::new(vec![Itemset::singleton(a), Itemset::singleton(b)]))
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SyntheticCorpus {
    pub classes: Vec<ClassDocuments>,
    pub planted: Vec<PlantedPattern>,
}

impl SyntheticCorpus {
    pub fn n_tokens(&self) -> usize {
        self.classes
            .iter()
            .flat_map(|c| &c.documents)
            .flat_map(|d| &d.sequences)
            .map(TagSequence::len)
            .sum()
    }
}

pub fn class_id(idx: usize) -> String {
    format!("c{idx}")
}

pub fn generate(config: &SyntheticConfig) -> SyntheticCorpus {
    assert!(config.sentence_len >= 4, "sentences need room for s, A, gap and B");
    let mut rng = ChaCha8Rng::seed_from_u64(config.seed);
    let weights: Vec<f64> = (1..=BACKGROUND_TAGS.len()).map(|r| 1.0 / r as f64).collect();
    let background = WeightedIndex::new(&weights).expect("positive weights");

    let n = config.sentences_per_doc;
    let n_planted = ((n as f64 * config.planted_fraction).round() as usize).min(n);
    let n_lone = ((n as f64 * config.lone_fraction).round() as usize).min(n - n_planted);

    let planted: Vec<PlantedPattern> = (0..config.n_classes)
        .map(|i| PlantedPattern { class_id: class_id(i), first: format!("XA{i}"), second: format!("XB{i}") })
        .collect();

    let classes = planted
        .iter()
        .map(|plant| {
            let documents = (0..config.docs_per_class)
                .map(|d| {
                    let doc_id = format!("{}_{d:03}", plant.class_id);
                    let mut sentences: Vec<Vec<String>> = (0..n)
                        .map(|_| {
                            std::iter::once("s".to_owned())
                                .chain(
                                    (1..config.sentence_len)
                                        .map(|_| BACKGROUND_TAGS[background.sample(&mut rng)].to_owned()),
                                )
                                .collect()
                        })
                        .collect();
                    let chosen = sample(&mut rng, n, n_planted + n_lone);
                    for (rank, idx) in chosen.into_iter().enumerate() {
                        let sentence = &mut sentences[idx];
                        if rank < n_planted {
                            let p = rng.random_range(1..config.sentence_len - 2);
                            sentence[p] = plant.first.clone();
                            sentence[p + 2] = plant.second.clone();
                        } else {
                            let p = rng.random_range(1..config.sentence_len);
                            sentence[p] = plant.first.clone();
                        }
                    }
                    let sequences = sentences.into_iter().map(|t| TagSequence::new(doc_id.clone(), t)).collect();
                    Document { doc_id, sequences }
                })
                .collect();
            ClassDocuments { class_id: plant.class_id.clone(), documents }
        })
        .collect();
    SyntheticCorpus { classes, planted }
}

/// Reassigns documents to classes uniformly at random, keeping class sizes.
pub fn shuffle_labels(corpus: &[ClassDocuments], seed: u64) -> Vec<ClassDocuments> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut pool: Vec<Document> = corpus.iter().flat_map(|c| c.documents.iter().cloned()).collect();
    pool.shuffle(&mut rng);
    let mut pool = pool.into_iter();
    corpus
        .iter()
        .map(|c| ClassDocuments {
            class_id: c.class_id.clone(),
            documents: pool.by_ref().take(c.documents.len()).collect(),
        })
        .collect()
}
