//! Integer-coded sequence databases.
//!
//! A [`SequenceDatabase`] is a list of sequences of itemsets. Every item is a
//! code into a shared [`Dictionary`]. The [`VerticalIndex`] is the dual,
//! per-item view (`sid -> itemset positions`) that the miner works on.
//!
//! Containment is gap-aware: a pattern `<e1, ..., en>` is contained in a
//! sequence when there are itemset positions `q1 < ... < qn` with
//! `ej ⊆ itemset[qj]` and at most `gap` itemsets skipped between consecutive
//! matched positions.

mod dictionary;
pub mod spmf;
mod tagseq;
mod vertical;

use std::cmp::Ordering;
use std::fmt;
use std::str::FromStr;
use std::sync::Arc;

use thiserror::Error;

use crate::extract::TagSequence;

pub use dictionary::{Dictionary, DictionaryError};
pub use tagseq::read_tagseq;
pub use vertical::{SidPositions, VerticalIndex};

/// Symbol that closes a sentence in tag-sequence files. Never encoded.
pub const TERMINATOR: &str = ".";

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum SeqDbError {
    #[error("itemset is empty")]
    EmptyItemset,
    #[error("itemset items are not strictly increasing: {0:?}")]
    UnsortedItemset(Vec<u32>),
    #[error("sequence {0} has no itemsets")]
    EmptySequence(usize),
    #[error("symbol {0:?} is not in the dictionary")]
    UnknownSymbol(String),
}

/// An item code.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Item(pub u32);

impl Item {
    pub fn code(self) -> u32 {
        self.0
    }
}

impl fmt::Display for Item {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.0)
    }
}

/// A non-empty set of items kept in strictly increasing order.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Itemset(Vec<Item>);

impl Itemset {
    pub fn singleton(item: Item) -> Self {
        Itemset(vec![item])
    }

    /// Builds an itemset from items that must already be strictly increasing.
    pub fn try_from_sorted(items: Vec<Item>) -> Result<Self, SeqDbError> {
        if items.is_empty() {
            return Err(SeqDbError::EmptyItemset);
        }
        if items.windows(2).any(|w| w[0] >= w[1]) {
            return Err(SeqDbError::UnsortedItemset(items.iter().map(|i| i.0).collect()));
        }
        Ok(Itemset(items))
    }

    /// Sorts and deduplicates; `None` when `items` is empty.
    pub fn from_unsorted(mut items: Vec<Item>) -> Option<Self> {
        if items.is_empty() {
            return None;
        }
        items.sort_unstable();
        items.dedup();
        Some(Itemset(items))
    }

    pub fn from_codes(codes: &[u32]) -> Option<Self> {
        Self::from_unsorted(codes.iter().copied().map(Item).collect())
    }

    pub fn items(&self) -> &[Item] {
        &self.0
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn last(&self) -> Item {
        *self.0.last().expect("itemsets are non-empty")
    }

    pub fn contains(&self, item: Item) -> bool {
        self.0.binary_search(&item).is_ok()
    }

    /// `self ⊆ other`, by a merge over the two sorted lists.
    pub fn is_subset_of(&self, other: &Itemset) -> bool {
        let mut theirs = other.0.iter();
        'outer: for mine in &self.0 {
            for t in theirs.by_ref() {
                match t.cmp(mine) {
                    Ordering::Less => continue,
                    Ordering::Equal => continue 'outer,
                    Ordering::Greater => return false,
                }
            }
            return false;
        }
        true
    }

    pub(crate) fn push_unchecked(&mut self, item: Item) {
        debug_assert!(item > self.last());
        self.0.push(item);
    }
}

/// One database sequence. `sid` is 1-based.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Sequence {
    pub sid: u32,
    pub itemsets: Vec<Itemset>,
}

impl Sequence {
    pub fn len(&self) -> usize {
        self.itemsets.len()
    }

    pub fn is_empty(&self) -> bool {
        self.itemsets.is_empty()
    }
}

/// Maximum number of itemsets that may be skipped between two consecutive
/// pattern elements. `Max(0)` means the elements must be adjacent.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Gap {
    Max(u32),
    Unbounded,
}

impl Gap {
    /// Whether an element matched at position `next` may follow one matched at
    /// `prev`.
    pub fn allows(self, prev: u32, next: u32) -> bool {
        next > prev
            && match self {
                Gap::Max(g) => next - prev - 1 <= g,
                Gap::Unbounded => true,
            }
    }

    /// Last position reachable from `prev`, or `None` when unbounded.
    pub fn window_end(self, prev: u32) -> Option<u32> {
        match self {
            Gap::Max(g) => Some(prev.saturating_add(g).saturating_add(1)),
            Gap::Unbounded => None,
        }
    }
}

impl Default for Gap {
    fn default() -> Self {
        Gap::Max(1)
    }
}

impl fmt::Display for Gap {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Gap::Max(g) => write!(f, "{g}"),
            Gap::Unbounded => f.write_str("unbounded"),
        }
    }
}

impl FromStr for Gap {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s.trim().to_ascii_lowercase().as_str() {
            "unbounded" | "inf" | "none" | "any" => Ok(Gap::Unbounded),
            other => other
                .parse::<u32>()
                .map(Gap::Max)
                .map_err(|_| format!("invalid gap {s:?}: expected a non-negative integer or \"unbounded\"")),
        }
    }
}

/// The ordered elements of a pattern, without its support.
///
/// Ordering is the canonical pattern order used for tie-breaking: fewer items
/// first, then lexicographic over the element lists.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct PatternKey(Vec<Itemset>);

impl PatternKey {
    pub fn new(elements: Vec<Itemset>) -> Self {
        assert!(!elements.is_empty(), "patterns have at least one element");
        PatternKey(elements)
    }

    pub fn single(item: Item) -> Self {
        PatternKey(vec![Itemset::singleton(item)])
    }

    /// Convenience for tests and fixtures: each inner slice is one itemset.
    pub fn from_codes(elements: &[&[u32]]) -> Self {
        Self::new(
            elements
                .iter()
                .map(|codes| Itemset::from_codes(codes).expect("non-empty itemset"))
                .collect(),
        )
    }

    pub fn elements(&self) -> &[Itemset] {
        &self.0
    }

    /// Number of items over all elements.
    pub fn item_count(&self) -> usize {
        self.0.iter().map(Itemset::len).sum()
    }

    pub fn last_item(&self) -> Item {
        self.0.last().expect("non-empty").last()
    }

    pub fn items(&self) -> impl Iterator<Item = Item> + '_ {
        self.0.iter().flat_map(|set| set.items().iter().copied())
    }

    pub(crate) fn elements_mut(&mut self) -> &mut Vec<Itemset> {
        &mut self.0
    }
}

impl Ord for PatternKey {
    fn cmp(&self, other: &Self) -> Ordering {
        self.item_count()
            .cmp(&other.item_count())
            .then_with(|| self.0.cmp(&other.0))
    }
}

impl PartialOrd for PatternKey {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

/// A pattern together with the number of sequences that contain it.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Pattern {
    pub key: PatternKey,
    pub support: u32,
}

impl Pattern {
    pub fn new(key: PatternKey, support: u32) -> Self {
        Pattern { key, support }
    }

    pub fn elements(&self) -> &[Itemset] {
        self.key.elements()
    }

    pub fn item_count(&self) -> usize {
        self.key.item_count()
    }

    /// Result order: support descending, then canonical key order.
    pub fn rank_cmp(&self, other: &Pattern) -> Ordering {
        other
            .support
            .cmp(&self.support)
            .then_with(|| self.key.cmp(&other.key))
    }
}

#[derive(Debug, Error, Clone, PartialEq, Eq)]
#[error("invalid mining parameters: {0}")]
pub struct ParamsError(pub String);

/// Top-k mining parameters. Lengths count items, not itemsets.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct MiningParams {
    pub k: usize,
    pub minlen: usize,
    pub maxlen: usize,
    pub gap: Gap,
}

impl MiningParams {
    pub fn new(k: usize, minlen: usize, maxlen: usize, gap: Gap) -> Result<Self, ParamsError> {
        let params = MiningParams { k, minlen, maxlen, gap };
        params.validate()?;
        Ok(params)
    }

    pub fn validate(&self) -> Result<(), ParamsError> {
        if self.k == 0 {
            return Err(ParamsError("k must be at least 1".into()));
        }
        if self.minlen == 0 {
            return Err(ParamsError("minlen must be at least 1".into()));
        }
        if self.minlen > self.maxlen {
            return Err(ParamsError(format!(
                "minlen ({}) exceeds maxlen ({})",
                self.minlen, self.maxlen
            )));
        }
        Ok(())
    }
}

impl Default for MiningParams {
    /// k = 250, minlen = 1, maxlen = 2, gap = 1.
    fn default() -> Self {
        MiningParams { k: 250, minlen: 1, maxlen: 2, gap: Gap::Max(1) }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SequenceDatabase {
    sequences: Vec<Sequence>,
    dictionary: Arc<Dictionary>,
}

impl SequenceDatabase {
    /// Assigns sids `1..=n` in the given order.
    pub fn new(itemsets: Vec<Vec<Itemset>>, dictionary: Arc<Dictionary>) -> Result<Self, SeqDbError> {
        let sequences = itemsets
            .into_iter()
            .enumerate()
            .map(|(i, sets)| {
                if sets.is_empty() {
                    Err(SeqDbError::EmptySequence(i + 1))
                } else {
                    Ok(Sequence { sid: i as u32 + 1, itemsets: sets })
                }
            })
            .collect::<Result<_, _>>()?;
        Ok(SequenceDatabase { sequences, dictionary })
    }

    /// Database over numeric codes, with a dictionary that names every code
    /// `0..=max` by its decimal string.
    pub fn from_codes(sequences: &[&[&[u32]]]) -> Result<Self, SeqDbError> {
        let mut sets = Vec::with_capacity(sequences.len());
        for seq in sequences {
            let mut row = Vec::with_capacity(seq.len());
            for codes in *seq {
                row.push(Itemset::from_codes(codes).ok_or(SeqDbError::EmptyItemset)?);
            }
            sets.push(row);
        }
        Self::with_numeric_dictionary(sets)
    }

    pub(crate) fn with_numeric_dictionary(itemsets: Vec<Vec<Itemset>>) -> Result<Self, SeqDbError> {
        let max = itemsets
            .iter()
            .flatten()
            .flat_map(|s| s.items().iter().map(|i| i.0))
            .max();
        Self::new(itemsets, Arc::new(Dictionary::numeric(max)))
    }

    /// Encodes tag sequences against an existing dictionary. Fails on symbols
    /// the dictionary does not know.
    pub fn encode_shared(sequences: &[TagSequence], dictionary: &Arc<Dictionary>) -> Result<Self, SeqDbError> {
        let rows = sequences
            .iter()
            .map(|seq| {
                seq.tokens
                    .iter()
                    .filter(|t| t.as_str() != TERMINATOR)
                    .map(|t| {
                        dictionary
                            .code(t)
                            .map(Itemset::singleton)
                            .ok_or_else(|| SeqDbError::UnknownSymbol(t.clone()))
                    })
                    .collect::<Result<Vec<_>, _>>()
            })
            .filter(|row| !matches!(row, Ok(r) if r.is_empty()))
            .collect::<Result<Vec<_>, _>>()?;
        Self::new(rows, Arc::clone(dictionary))
    }

    pub fn sequences(&self) -> &[Sequence] {
        &self.sequences
    }

    pub fn dictionary(&self) -> &Arc<Dictionary> {
        &self.dictionary
    }

    pub fn len(&self) -> usize {
        self.sequences.len()
    }

    pub fn is_empty(&self) -> bool {
        self.sequences.is_empty()
    }

    /// Distinct items occurring in the database, ascending.
    pub fn alphabet(&self) -> Vec<Item> {
        let mut items: Vec<Item> = self
            .sequences
            .iter()
            .flat_map(|s| s.itemsets.iter())
            .flat_map(|set| set.items().iter().copied())
            .collect();
        items.sort_unstable();
        items.dedup();
        items
    }
}

/// Encodes a corpus with a fresh dictionary. Codes follow first appearance;
/// every token becomes a singleton itemset and terminators are dropped.
pub fn encode_corpus(sequences: &[TagSequence]) -> SequenceDatabase {
    let mut dictionary = Dictionary::new();
    for seq in sequences {
        for token in &seq.tokens {
            if token != TERMINATOR {
                dictionary.intern(token);
            }
        }
    }
    SequenceDatabase::encode_shared(sequences, &Arc::new(dictionary))
        .expect("every symbol was interned")
}

/// Whether `seq` contains `pattern` under the gap constraint.
///
/// A direct search over position tuples; kept deliberately naive because the
/// brute-force oracle relies on it.
pub fn contains(seq: &Sequence, pattern: &PatternKey, gap: Gap) -> bool {
    fn search(sets: &[Itemset], elems: &[Itemset], from: usize, prev: Option<usize>, gap: Gap) -> bool {
        let Some((head, rest)) = elems.split_first() else {
            return true;
        };
        let upper = match (prev, gap) {
            (Some(p), Gap::Max(g)) => (p + 1 + g as usize).min(sets.len() - 1),
            _ => sets.len() - 1,
        };
        if sets.is_empty() || from > upper {
            return false;
        }
        (from..=upper).any(|q| head.is_subset_of(&sets[q]) && search(sets, rest, q + 1, Some(q), gap))
    }
    !seq.itemsets.is_empty() && search(&seq.itemsets, pattern.elements(), 0, None, gap)
}

/// Number of sequences of `db` that contain `pattern`.
pub fn support(db: &SequenceDatabase, pattern: &PatternKey, gap: Gap) -> u32 {
    db.sequences().iter().filter(|s| contains(s, pattern, gap)).count() as u32
}
