use super::{Item, Itemset, Sequence, SequenceDatabase};

/// Occurrences of one item inside one sequence. Positions are 1-based and
/// strictly increasing.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SidPositions {
    pub sid: u32,
    pub positions: Vec<u32>,
}

/// Per-item view of a database: for each item, the sequences it occurs in and
/// the itemset positions within each of them.
#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct VerticalIndex {
    by_item: Vec<Vec<SidPositions>>,
    n_sequences: usize,
}

impl VerticalIndex {
    /// Single pass over the horizontal database.
    pub fn build(db: &SequenceDatabase) -> Self {
        let mut by_item: Vec<Vec<SidPositions>> = Vec::new();
        for seq in db.sequences() {
            for (idx, set) in seq.itemsets.iter().enumerate() {
                let pos = idx as u32 + 1;
                for item in set.items() {
                    let code = item.0 as usize;
                    if code >= by_item.len() {
                        by_item.resize_with(code + 1, Vec::new);
                    }
                    let lists = &mut by_item[code];
                    match lists.last_mut() {
                        Some(last) if last.sid == seq.sid => last.positions.push(pos),
                        _ => lists.push(SidPositions { sid: seq.sid, positions: vec![pos] }),
                    }
                }
            }
        }
        VerticalIndex { by_item, n_sequences: db.len() }
    }

    pub fn n_sequences(&self) -> usize {
        self.n_sequences
    }

    /// All occurrence lists of `item`, ordered by sid. Empty for unknown items.
    pub fn occurrences(&self, item: Item) -> &[SidPositions] {
        self.by_item.get(item.0 as usize).map(Vec::as_slice).unwrap_or(&[])
    }

    pub fn positions(&self, item: Item, sid: u32) -> Option<&[u32]> {
        let lists = self.occurrences(item);
        lists
            .binary_search_by_key(&sid, |sp| sp.sid)
            .ok()
            .map(|i| lists[i].positions.as_slice())
    }

    /// Number of sequences containing `item`.
    pub fn support(&self, item: Item) -> u32 {
        self.occurrences(item).len() as u32
    }

    /// Items with at least one occurrence, ascending.
    pub fn items(&self) -> impl Iterator<Item = Item> + '_ {
        self.by_item
            .iter()
            .enumerate()
            .filter(|(_, lists)| !lists.is_empty())
            .map(|(code, _)| Item(code as u32))
    }

    pub fn is_empty(&self) -> bool {
        self.by_item.iter().all(Vec::is_empty)
    }

    /// Rebuilds the horizontal sequences. Every itemset of a valid database is
    /// non-empty, so a sequence's length is its largest recorded position.
    pub fn to_horizontal(&self) -> Vec<Sequence> {
        let mut rows: Vec<Vec<Vec<Item>>> = vec![Vec::new(); self.n_sequences];
        for (code, lists) in self.by_item.iter().enumerate() {
            for sp in lists {
                let row = &mut rows[sp.sid as usize - 1];
                for &pos in &sp.positions {
                    let idx = pos as usize - 1;
                    if row.len() <= idx {
                        row.resize_with(idx + 1, Vec::new);
                    }
                    row[idx].push(Item(code as u32));
                }
            }
        }
        rows.into_iter()
            .enumerate()
            .map(|(i, row)| Sequence {
                sid: i as u32 + 1,
                itemsets: row
                    .into_iter()
                    .map(|items| Itemset::from_unsorted(items).expect("positions come from items"))
                    .collect(),
            })
            .collect()
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::seqdb::fixtures::abcd_db;

    fn as_pairs(index: &VerticalIndex, code: u32) -> Vec<(u32, Vec<u32>)> {
        index
            .occurrences(Item(code))
            .iter()
            .map(|sp| (sp.sid, sp.positions.clone()))
            .collect()
    }

    #[test]
    fn reproduces_vertical_tables() {
        let index = VerticalIndex::build(&abcd_db());
        assert_eq!(as_pairs(&index, 0), vec![(1, vec![1]), (2, vec![1, 2])]);
        assert_eq!(as_pairs(&index, 1), vec![(1, vec![1])]);
        assert_eq!(as_pairs(&index, 2), vec![(1, vec![2]), (2, vec![1]), (3, vec![1])]);
        assert_eq!(as_pairs(&index, 3), vec![(2, vec![2]), (3, vec![1])]);
        assert_eq!(index.positions(Item(0), 3), None);
        assert_eq!(index.support(Item(2)), 3);
    }

    #[test]
    fn round_trips_to_horizontal() {
        let db = abcd_db();
        assert_eq!(VerticalIndex::build(&db).to_horizontal(), db.sequences());
    }

    #[test]
    fn empty_database() {
        let db = SequenceDatabase::from_codes(&[]).unwrap();
        let index = VerticalIndex::build(&db);
        assert!(index.is_empty());
        assert_eq!(index.items().count(), 0);
        assert!(index.to_horizontal().is_empty());
    }
}
