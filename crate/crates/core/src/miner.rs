//! Top-k sequential pattern mining over the vertical index.
//!
//! The search starts from single items and grows patterns by s-extension
//! (append a new itemset) and i-extension (add a larger item to the last
//! itemset). Three strategies keep it tight:
//!
//! * the support threshold starts at 0 and is raised to the k-th best support
//!   as soon as k patterns are held,
//! * the candidate with the highest support is always expanded next,
//! * items whose support falls below the threshold are discarded for good.
//!
//! A precedence map (PMAP) bounds the support of an extension by the number of
//! sequences in which the candidate item follows (or co-occurs with) the
//! pattern's last item, and prunes extensions that cannot reach the threshold.
//!
//! Supports are computed by joining per-sequence end positions with the
//! candidate item's occurrence list under the gap constraint.

use std::cmp::Ordering;
use std::collections::{BTreeSet, BinaryHeap, HashMap, HashSet};

use thiserror::Error;

use crate::seqdb::{
    Gap, Item, Itemset, MiningParams, ParamsError, Pattern, PatternKey, SequenceDatabase, SidPositions,
    VerticalIndex,
};

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum MineError {
    #[error(transparent)]
    InvalidParams(#[from] ParamsError),
    #[error("item {item} does not exceed the last itemset's largest item {last}")]
    NonCanonical { item: Item, last: Item },
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum ExtensionKind {
    /// New itemset after the last one.
    Sequence,
    /// New item inside the last itemset.
    Itemset,
}

/// `pattern + {item}` as a new trailing element.
pub fn s_extend(pattern: &PatternKey, item: Item) -> PatternKey {
    let mut key = pattern.clone();
    key.elements_mut().push(Itemset::singleton(item));
    key
}

/// `pattern` with `item` added to its last element. The item must be larger
/// than every item already there.
pub fn i_extend(pattern: &PatternKey, item: Item) -> Result<PatternKey, MineError> {
    let last = pattern.last_item();
    if item <= last {
        return Err(MineError::NonCanonical { item, last });
    }
    let mut key = pattern.clone();
    key.elements_mut()
        .last_mut()
        .expect("non-empty")
        .push_unchecked(item);
    Ok(key)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct PmapEntry {
    pub predecessor: Item,
    pub successor: Item,
    pub count: u32,
    pub kind: ExtensionKind,
}

/// Precedence map: for item pairs `(x, j)`, the number of sequences where `j`
/// follows `x` within the gap window (`Sequence`) or shares an itemset with
/// it, `j > x` (`Itemset`).
#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct Pmap {
    counts: HashMap<(Item, Item, ExtensionKind), u32>,
}

impl Pmap {
    pub fn count(&self, predecessor: Item, successor: Item, kind: ExtensionKind) -> u32 {
        self.counts.get(&(predecessor, successor, kind)).copied().unwrap_or(0)
    }

    /// Entries with the given predecessor, sorted by (kind, successor).
    pub fn entries(&self, predecessor: Item) -> Vec<PmapEntry> {
        let mut out: Vec<PmapEntry> = self
            .counts
            .iter()
            .filter(|((x, _, _), _)| *x == predecessor)
            .map(|(&(x, j, kind), &count)| PmapEntry { predecessor: x, successor: j, count, kind })
            .collect();
        out.sort_by_key(|e| (e.kind, e.successor));
        out
    }

    pub fn len(&self) -> usize {
        self.counts.len()
    }

    pub fn is_empty(&self) -> bool {
        self.counts.is_empty()
    }
}

pub fn build_pmap(db: &SequenceDatabase, vertical: &VerticalIndex, gap: Gap) -> Pmap {
    build_pmap_for(db, gap, |item| vertical.support(item) > 0)
}

/// PMAP restricted to items accepted by `keep`.
fn build_pmap_for(db: &SequenceDatabase, gap: Gap, keep: impl Fn(Item) -> bool) -> Pmap {
    // (count, last sid counted) so each sequence contributes at most once.
    let mut acc: HashMap<(Item, Item, ExtensionKind), (u32, u32)> = HashMap::new();
    let mut bump = |key: (Item, Item, ExtensionKind), sid: u32| {
        let slot = acc.entry(key).or_insert((0, 0));
        if slot.1 != sid {
            slot.0 += 1;
            slot.1 = sid;
        }
    };
    for seq in db.sequences() {
        let sets = &seq.itemsets;
        for (q, set) in sets.iter().enumerate() {
            let kept: Vec<Item> = set.items().iter().copied().filter(|&x| keep(x)).collect();
            for (a, &x) in kept.iter().enumerate() {
                for &j in &kept[a + 1..] {
                    bump((x, j, ExtensionKind::Itemset), seq.sid);
                }
            }
            let end = match gap.window_end(q as u32) {
                Some(e) => (e as usize).min(sets.len() - 1),
                None => sets.len() - 1,
            };
            for later in &sets[q + 1..=end.max(q)] {
                for &j in later.items().iter().filter(|&&j| keep(j)) {
                    for &x in &kept {
                        bump((x, j, ExtensionKind::Sequence), seq.sid);
                    }
                }
            }
        }
    }
    Pmap { counts: acc.into_iter().map(|(k, (n, _))| (k, n)).collect() }
}

/// `true` to keep the extension of `pattern` by `candidate`, `false` when the
/// PMAP count for the pattern's last item already falls below `threshold`.
pub fn prune_with_pmap(pattern: &PatternKey, candidate: Item, kind: ExtensionKind, pmap: &Pmap, threshold: u32) -> bool {
    pmap.count(pattern.last_item(), candidate, kind) >= threshold
}

/// Patterns by rank: best (highest support, then smallest key) first.
#[derive(Debug, Clone, PartialEq, Eq)]
struct Ranked(Pattern);

impl Ord for Ranked {
    fn cmp(&self, other: &Self) -> Ordering {
        self.0.rank_cmp(&other.0)
    }
}

impl PartialOrd for Ranked {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

/// The k best patterns found so far, the current threshold and the set of
/// discarded items.
#[derive(Debug, Clone)]
pub struct TopKState {
    k: usize,
    found: BTreeSet<Ranked>,
    threshold: u32,
    discarded: HashSet<Item>,
    thresholds: Vec<u32>,
}

impl TopKState {
    pub fn new(k: usize) -> Self {
        TopKState { k, found: BTreeSet::new(), threshold: 0, discarded: HashSet::new(), thresholds: vec![0] }
    }

    pub fn threshold(&self) -> u32 {
        self.threshold
    }

    /// Minimum support a new pattern needs to be worth generating.
    fn needed(&self) -> u32 {
        self.threshold.max(1)
    }

    pub fn len(&self) -> usize {
        self.found.len()
    }

    pub fn is_empty(&self) -> bool {
        self.found.is_empty()
    }

    /// Inserts `pattern`, evicts the worst patterns beyond k and, once k
    /// patterns are held, sets the threshold to the lowest retained support.
    pub fn raise_threshold(&mut self, pattern: Pattern) {
        self.found.insert(Ranked(pattern));
        while self.found.len() > self.k {
            self.found.pop_last();
        }
        if self.found.len() >= self.k {
            let lowest = self.found.last().expect("k >= 1").0.support;
            if lowest > self.threshold {
                self.threshold = lowest;
                self.thresholds.push(lowest);
            }
        }
    }

    /// Records `item` as discarded when its support is below the threshold.
    /// Returns whether the item is discarded afterwards.
    pub fn discard_infrequent(&mut self, item: Item, support: u32) -> bool {
        if support < self.threshold {
            self.discarded.insert(item);
        }
        self.discarded.contains(&item)
    }

    pub fn is_discarded(&self, item: Item) -> bool {
        self.discarded.contains(&item)
    }

    pub fn discarded(&self) -> &HashSet<Item> {
        &self.discarded
    }

    /// Retained patterns in result order.
    pub fn patterns(&self) -> Vec<Pattern> {
        self.found.iter().map(|r| r.0.clone()).collect()
    }

    pub fn into_patterns(self) -> Vec<Pattern> {
        self.found.into_iter().map(|r| r.0).collect()
    }
}

/// Switches for the pruning strategies; both are sound and only affect speed.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct MinerOptions {
    pub use_pmap: bool,
    pub discard_infrequent: bool,
}

impl Default for MinerOptions {
    fn default() -> Self {
        MinerOptions { use_pmap: true, discard_infrequent: true }
    }
}

/// What happened during one run.
#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct MiningTrace {
    /// Every value the threshold took, in order, starting at 0.
    pub thresholds: Vec<u32>,
    /// Support of each candidate at the moment it was expanded.
    pub expansions: Vec<u32>,
    /// Extensions whose support was actually computed.
    pub candidates_evaluated: usize,
    pub pmap_pruned: usize,
    pub discarded_items: usize,
}

impl MiningTrace {
    /// Line-oriented dump: `threshold <v>` and `expand <support>` lines,
    /// followed by the counters.
    pub fn to_text(&self) -> String {
        let mut out = String::new();
        for t in &self.thresholds {
            out.push_str(&format!("threshold {t}\n"));
        }
        for e in &self.expansions {
            out.push_str(&format!("expand {e}\n"));
        }
        out.push_str(&format!("candidates {}\n", self.candidates_evaluated));
        out.push_str(&format!("pmap_pruned {}\n", self.pmap_pruned));
        out.push_str(&format!("discarded {}\n", self.discarded_items));
        out
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct MiningOutcome {
    /// Sorted by support descending, then canonical order.
    pub patterns: Vec<Pattern>,
    pub trace: MiningTrace,
}

struct Candidate {
    pattern: Pattern,
    ends: Vec<SidPositions>,
}

impl PartialEq for Candidate {
    fn eq(&self, other: &Self) -> bool {
        self.pattern == other.pattern
    }
}

impl Eq for Candidate {}

impl Ord for Candidate {
    // Max-heap: higher support first, then the smaller key.
    fn cmp(&self, other: &Self) -> Ordering {
        other.pattern.rank_cmp(&self.pattern)
    }
}

impl PartialOrd for Candidate {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

/// End positions of `ends` followed, within the gap window, by an occurrence
/// in `occ`. `None` as soon as fewer than `need` sequences can still match.
fn join_sequence(ends: &[SidPositions], occ: &[SidPositions], gap: Gap, need: u32) -> Option<Vec<SidPositions>> {
    let mut out = Vec::new();
    let mut oi = 0;
    for (idx, e) in ends.iter().enumerate() {
        if (out.len() + ends.len() - idx) < need as usize {
            return None;
        }
        while oi < occ.len() && occ[oi].sid < e.sid {
            oi += 1;
        }
        if oi == occ.len() {
            break;
        }
        if occ[oi].sid != e.sid {
            continue;
        }
        let mut hits = Vec::new();
        match gap {
            Gap::Unbounded => {
                let first = e.positions[0];
                hits.extend(occ[oi].positions.iter().copied().filter(|&p| p > first));
            }
            Gap::Max(g) => {
                let mut ei = 0;
                for &p in &occ[oi].positions {
                    while ei < e.positions.len() && e.positions[ei] as u64 + g as u64 + 1 < p as u64 {
                        ei += 1;
                    }
                    if ei < e.positions.len() && e.positions[ei] < p {
                        hits.push(p);
                    }
                }
            }
        }
        if !hits.is_empty() {
            out.push(SidPositions { sid: e.sid, positions: hits });
        }
    }
    (out.len() >= need as usize).then_some(out)
}

/// End positions of `ends` whose itemset also holds the item of `occ`.
fn join_itemset(ends: &[SidPositions], occ: &[SidPositions], need: u32) -> Option<Vec<SidPositions>> {
    let mut out = Vec::new();
    let mut oi = 0;
    for (idx, e) in ends.iter().enumerate() {
        if (out.len() + ends.len() - idx) < need as usize {
            return None;
        }
        while oi < occ.len() && occ[oi].sid < e.sid {
            oi += 1;
        }
        if oi == occ.len() {
            break;
        }
        if occ[oi].sid != e.sid {
            continue;
        }
        let theirs = &occ[oi].positions;
        let hits: Vec<u32> = e
            .positions
            .iter()
            .copied()
            .filter(|p| theirs.binary_search(p).is_ok())
            .collect();
        if !hits.is_empty() {
            out.push(SidPositions { sid: e.sid, positions: hits });
        }
    }
    (out.len() >= need as usize).then_some(out)
}

#[derive(Debug, Clone, Copy)]
pub struct Miner {
    params: MiningParams,
    options: MinerOptions,
}

impl Miner {
    pub fn new(params: MiningParams) -> Result<Self, MineError> {
        params.validate()?;
        Ok(Miner { params, options: MinerOptions::default() })
    }

    pub fn with_options(mut self, options: MinerOptions) -> Self {
        self.options = options;
        self
    }

    pub fn params(&self) -> &MiningParams {
        &self.params
    }

    pub fn mine(&self, db: &SequenceDatabase) -> MiningOutcome {
        let MiningParams { k, minlen, maxlen, gap } = self.params;
        let mut trace = MiningTrace::default();
        let mut state = TopKState::new(k);
        let vertical = VerticalIndex::build(db);
        let mut heap: BinaryHeap<Candidate> = BinaryHeap::new();

        let save = |state: &mut TopKState, heap: &mut BinaryHeap<Candidate>, key: PatternKey, ends: Vec<SidPositions>| {
            let pattern = Pattern::new(key, ends.len() as u32);
            let len = pattern.item_count();
            if len < maxlen {
                heap.push(Candidate { pattern: pattern.clone(), ends });
            }
            if len >= minlen {
                state.raise_threshold(pattern);
            }
        };

        for item in vertical.items() {
            let occ = vertical.occurrences(item);
            if occ.len() as u32 >= state.needed() {
                save(&mut state, &mut heap, PatternKey::single(item), occ.to_vec());
            }
        }

        let mut live: Vec<Item> = vertical.items().collect();
        if self.options.discard_infrequent {
            live.retain(|&item| !state.discard_infrequent(item, vertical.support(item)));
        }
        let pmap = self
            .options
            .use_pmap
            .then(|| build_pmap_for(db, gap, |item| live.binary_search(&item).is_ok()));

        while let Some(cand) = heap.pop() {
            if cand.pattern.support < state.needed() {
                break;
            }
            trace.expansions.push(cand.pattern.support);
            if self.options.discard_infrequent {
                live.retain(|&item| !state.discard_infrequent(item, vertical.support(item)));
            }
            let key = &cand.pattern.key;
            let last = key.last_item();

            for &j in &live {
                let need = state.needed();
                if vertical.support(j) < need {
                    continue;
                }
                if let Some(pmap) = &pmap {
                    if !prune_with_pmap(key, j, ExtensionKind::Sequence, pmap, need) {
                        trace.pmap_pruned += 1;
                        continue;
                    }
                }
                trace.candidates_evaluated += 1;
                if let Some(ends) = join_sequence(&cand.ends, vertical.occurrences(j), gap, need) {
                    save(&mut state, &mut heap, s_extend(key, j), ends);
                }
            }

            for &j in live.iter().filter(|&&j| j > last) {
                let need = state.needed();
                if vertical.support(j) < need {
                    continue;
                }
                if let Some(pmap) = &pmap {
                    if !prune_with_pmap(key, j, ExtensionKind::Itemset, pmap, need) {
                        trace.pmap_pruned += 1;
                        continue;
                    }
                }
                trace.candidates_evaluated += 1;
                if let Some(ends) = join_itemset(&cand.ends, vertical.occurrences(j), need) {
                    let ext = i_extend(key, j).expect("j exceeds the last item");
                    save(&mut state, &mut heap, ext, ends);
                }
            }
        }

        trace.thresholds = state.thresholds.clone();
        trace.discarded_items = state.discarded().len();
        MiningOutcome { patterns: state.into_patterns(), trace }
    }
}

/// Top-k patterns of `db`, sorted by support descending then canonical order.
pub fn mine_topk(db: &SequenceDatabase, params: &MiningParams) -> Result<Vec<Pattern>, MineError> {
    Ok(Miner::new(*params)?.mine(db).patterns)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::seqdb::fixtures::{singleton_db, abcd_db};
    use crate::seqdb::support;

    const A: Item = Item(0);
    const B: Item = Item(1);
    const C: Item = Item(2);
    const D: Item = Item(3);

    fn params(k: usize, minlen: usize, maxlen: usize, gap: Gap) -> MiningParams {
        MiningParams::new(k, minlen, maxlen, gap).unwrap()
    }

    #[test]
    fn abcd_db_top3() {
        let got = mine_topk(&abcd_db(), &params(3, 1, 2, Gap::Unbounded)).unwrap();
        let summary: Vec<(PatternKey, u32)> = got.into_iter().map(|p| (p.key, p.support)).collect();
        assert_eq!(
            summary,
            vec![(PatternKey::single(C), 3), (PatternKey::single(A), 2), (PatternKey::single(D), 2)]
        );
    }

    #[test]
    fn rejects_bad_params() {
        let bad = MiningParams { k: 0, minlen: 1, maxlen: 2, gap: Gap::Max(1) };
        assert!(matches!(mine_topk(&abcd_db(), &bad), Err(MineError::InvalidParams(_))));
        let bad = MiningParams { k: 3, minlen: 3, maxlen: 2, gap: Gap::Max(1) };
        assert!(matches!(Miner::new(bad), Err(MineError::InvalidParams(_))));
    }

    #[test]
    fn empty_database() {
        let db = SequenceDatabase::from_codes(&[]).unwrap();
        assert!(mine_topk(&db, &MiningParams::default()).unwrap().is_empty());
    }

    #[test]
    fn extension_examples() {
        let abc = PatternKey::from_codes(&[&[0], &[1], &[2]]);
        let s2 = i_extend(&i_extend(&s_extend(&abc, D), Item(4)).unwrap(), Item(4)).unwrap_err();
        assert_eq!(s2, MineError::NonCanonical { item: Item(4), last: Item(4) });

        let s_ext = i_extend(&s_extend(&abc, D), Item(4)).unwrap();
        assert_eq!(s_ext, PatternKey::from_codes(&[&[0], &[1], &[2], &[3, 4]]));
        let i_ext = i_extend(&i_extend(&abc, D).unwrap(), Item(4)).unwrap();
        assert_eq!(i_ext, PatternKey::from_codes(&[&[0], &[1], &[2, 3, 4]]));

        let db = abcd_db();
        let ac = s_extend(&PatternKey::single(A), C);
        assert_eq!(support(&db, &ac, Gap::Unbounded), 1);
        let ab = i_extend(&PatternKey::single(A), B).unwrap();
        assert_eq!(ab, PatternKey::from_codes(&[&[0, 1]]));
        assert_eq!(support(&db, &ab, Gap::Unbounded), 1);
        assert!(matches!(
            i_extend(&PatternKey::single(B), A),
            Err(MineError::NonCanonical { item: A, last: B })
        ));
    }

    fn pattern(support: u32, code: u32) -> Pattern {
        Pattern::new(PatternKey::single(Item(code)), support)
    }

    #[test]
    fn threshold_rules() {
        let state = TopKState::new(3);
        assert_eq!(state.threshold(), 0);

        let mut state = TopKState::new(1);
        state.raise_threshold(pattern(5, 0));
        state.raise_threshold(pattern(7, 1));
        assert_eq!(state.patterns().iter().map(|p| p.support).collect::<Vec<_>>(), vec![7]);
        assert_eq!(state.threshold(), 7);

        let mut state = TopKState::new(2);
        state.raise_threshold(pattern(5, 0));
        state.raise_threshold(pattern(7, 1));
        state.raise_threshold(pattern(6, 2));
        assert_eq!(state.patterns().iter().map(|p| p.support).collect::<Vec<_>>(), vec![7, 6]);
        assert_eq!(state.threshold(), 6);
    }

    #[test]
    fn ties_at_rank_k_keep_smaller_keys() {
        let mut state = TopKState::new(2);
        state.raise_threshold(pattern(4, 9));
        state.raise_threshold(pattern(4, 3));
        state.raise_threshold(pattern(4, 5));
        let keys: Vec<u32> = state.patterns().iter().map(|p| p.key.last_item().0).collect();
        assert_eq!(keys, vec![3, 5]);
    }

    #[test]
    fn discard_rules() {
        let mut state = TopKState::new(1);
        assert!(!state.discard_infrequent(A, 0));
        state.raise_threshold(pattern(3, 0));
        assert!(state.discard_infrequent(B, 2));
        assert!(!state.discard_infrequent(C, 3));
        assert!(state.is_discarded(B));
    }

    #[test]
    fn pmap_on_abcd_db() {
        let db = abcd_db();
        let pmap = build_pmap(&db, &VerticalIndex::build(&db), Gap::Unbounded);
        let got: Vec<(Item, u32, ExtensionKind)> =
            pmap.entries(A).into_iter().map(|e| (e.successor, e.count, e.kind)).collect();
        assert_eq!(
            got,
            vec![
                (A, 1, ExtensionKind::Sequence),
                (C, 1, ExtensionKind::Sequence),
                (D, 1, ExtensionKind::Sequence),
                (B, 1, ExtensionKind::Itemset),
                (C, 1, ExtensionKind::Itemset),
                (D, 1, ExtensionKind::Itemset),
            ]
        );
        for x in [A, B, C, D] {
            for e in pmap.entries(x) {
                assert!(e.count >= 1 && e.count as usize <= db.len());
            }
        }
    }

    #[test]
    fn pmap_single_item_db_is_empty() {
        let db = SequenceDatabase::from_codes(&[&[&[0]]]).unwrap();
        assert!(build_pmap(&db, &VerticalIndex::build(&db), Gap::Unbounded).is_empty());
    }

    #[test]
    fn pmap_respects_gap() {
        let db = singleton_db(&[&["a", "x", "x", "b"]]);
        let a = db.dictionary().code("a").unwrap();
        let b = db.dictionary().code("b").unwrap();
        let vertical = VerticalIndex::build(&db);
        assert_eq!(build_pmap(&db, &vertical, Gap::Max(1)).count(a, b, ExtensionKind::Sequence), 0);
        assert_eq!(build_pmap(&db, &vertical, Gap::Max(2)).count(a, b, ExtensionKind::Sequence), 1);
    }

    #[test]
    fn prune_decisions() {
        let mut pmap = Pmap::default();
        pmap.counts.insert((A, Item(4), ExtensionKind::Sequence), 3);
        let p = PatternKey::single(A);
        assert!(prune_with_pmap(&p, Item(4), ExtensionKind::Sequence, &pmap, 2));
        assert!(!prune_with_pmap(&p, Item(4), ExtensionKind::Sequence, &pmap, 4));
        assert!(!prune_with_pmap(&p, Item(4), ExtensionKind::Itemset, &pmap, 1));
    }

    #[test]
    fn joins_follow_gap_window() {
        let ends = vec![SidPositions { sid: 1, positions: vec![2, 7] }];
        let occ = vec![SidPositions { sid: 1, positions: vec![1, 3, 4, 5, 9, 10] }];
        let got = join_sequence(&ends, &occ, Gap::Max(1), 1).unwrap();
        assert_eq!(got[0].positions, vec![3, 4, 9]);
        let got = join_sequence(&ends, &occ, Gap::Max(0), 1).unwrap();
        assert_eq!(got[0].positions, vec![3]);
        let got = join_sequence(&ends, &occ, Gap::Unbounded, 1).unwrap();
        assert_eq!(got[0].positions, vec![3, 4, 5, 9, 10]);
        assert!(join_sequence(&ends, &occ, Gap::Max(1), 2).is_none());
    }

    #[test]
    fn minlen_filters_short_patterns() {
        let got = mine_topk(&abcd_db(), &params(10, 2, 2, Gap::Unbounded)).unwrap();
        assert!(!got.is_empty());
        assert!(got.iter().all(|p| p.item_count() == 2));
    }

    #[test]
    fn trace_is_monotone() {
        let db = singleton_db(&[&["a", "b", "c", "a", "b"], &["b", "c", "a"], &["a", "a", "c"]]);
        let out = Miner::new(params(4, 1, 3, Gap::Max(1))).unwrap().mine(&db);
        assert!(out.trace.thresholds.windows(2).all(|w| w[0] <= w[1]));
        assert!(out.trace.expansions.windows(2).all(|w| w[0] >= w[1]));
        assert_eq!(out.patterns.len(), 4);
        assert!(out.trace.to_text().starts_with("threshold 0\n"));
    }
}
