//! Brute-force reference for the miner.
//!
//! Generates every canonical pattern over the database alphabet up to
//! `maxlen` items and counts support with [`seqdb::contains`]. Exponential, so
//! only meant for small inputs.

use thiserror::Error;

use crate::seqdb::{self, Gap, Item, Itemset, MiningParams, Pattern, PatternKey, SequenceDatabase};

pub const DEFAULT_BUDGET: usize = 200_000;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum OracleError {
    #[error("enumeration would exceed the budget of {budget} candidate patterns")]
    SizeGuard { budget: usize },
    #[error(transparent)]
    InvalidParams(#[from] seqdb::ParamsError),
}

/// Every pattern with support ≥ 1 within the length constraints.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct OracleResult {
    pub patterns: Vec<Pattern>,
}

impl OracleResult {
    pub fn support_of(&self, key: &PatternKey) -> Option<u32> {
        self.patterns.iter().find(|p| &p.key == key).map(|p| p.support)
    }
}

pub fn enumerate_all(db: &SequenceDatabase, minlen: usize, maxlen: usize, gap: Gap) -> Result<OracleResult, OracleError> {
    enumerate_with_budget(db, minlen, maxlen, gap, DEFAULT_BUDGET)
}

pub fn enumerate_with_budget(
    db: &SequenceDatabase,
    minlen: usize,
    maxlen: usize,
    gap: Gap,
    budget: usize,
) -> Result<OracleResult, OracleError> {
    let alphabet = db.alphabet();
    let mut generated = Vec::new();
    let mut frontier: Vec<PatternKey> = alphabet.iter().map(|&i| PatternKey::single(i)).collect();
    let mut len = 1;
    while len <= maxlen && !frontier.is_empty() {
        if generated.len() + frontier.len() > budget {
            return Err(OracleError::SizeGuard { budget });
        }
        let mut next = Vec::new();
        for key in &frontier {
            if len < maxlen {
                for &item in &alphabet {
                    next.push(append_itemset(key, item));
                    if item > key.last_item() {
                        next.push(extend_last(key, item));
                    }
                }
            }
        }
        generated.extend(frontier.into_iter().filter(|_| len >= minlen));
        frontier = next;
        len += 1;
    }

    let mut patterns: Vec<Pattern> = generated
        .into_iter()
        .map(|key| {
            let support = seqdb::support(db, &key, gap);
            Pattern::new(key, support)
        })
        .filter(|p| p.support >= 1)
        .collect();
    patterns.sort_by(Pattern::rank_cmp);
    Ok(OracleResult { patterns })
}

// Built directly on the element lists so the oracle shares no code with the
// miner's extension functions.
fn append_itemset(key: &PatternKey, item: Item) -> PatternKey {
    let mut elements = key.elements().to_vec();
    elements.push(Itemset::singleton(item));
    PatternKey::new(elements)
}

fn extend_last(key: &PatternKey, item: Item) -> PatternKey {
    let mut elements = key.elements().to_vec();
    let last = elements.pop().expect("non-empty");
    let mut items = last.items().to_vec();
    items.push(item);
    elements.push(Itemset::try_from_sorted(items).expect("item exceeds the last one"));
    PatternKey::new(elements)
}

/// The first k patterns of [`enumerate_all`] in result order.
pub fn topk_oracle(db: &SequenceDatabase, params: &MiningParams) -> Result<Vec<Pattern>, OracleError> {
    params.validate()?;
    let mut all = enumerate_all(db, params.minlen, params.maxlen, params.gap)?.patterns;
    all.truncate(params.k);
    Ok(all)
}
