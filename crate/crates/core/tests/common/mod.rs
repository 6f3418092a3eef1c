#![allow(dead_code)]

use std::sync::Arc;

use proptest::prelude::*;
use rand::Rng;
use skipsig::{Dictionary, Item, Itemset, SequenceDatabase};

/// Shape limits for random databases.
#[derive(Debug, Clone, Copy)]
pub struct Shape {
    pub max_sequences: usize,
    pub max_itemsets: usize,
    pub max_items: usize,
    pub alphabet: u32,
}

pub const SMALL: Shape = Shape { max_sequences: 10, max_itemsets: 8, max_items: 3, alphabet: 6 };

pub fn build(rows: Vec<Vec<Vec<u32>>>, alphabet: u32) -> SequenceDatabase {
    let sets = rows
        .into_iter()
        .map(|row| row.iter().map(|codes| Itemset::from_codes(codes).expect("non-empty")).collect())
        .collect();
    SequenceDatabase::new(sets, Arc::new(Dictionary::numeric(alphabet.checked_sub(1)))).expect("valid rows")
}

pub fn random_db<R: Rng>(rng: &mut R, shape: Shape) -> SequenceDatabase {
    let n = rng.random_range(1..=shape.max_sequences);
    let rows = (0..n)
        .map(|_| {
            (0..rng.random_range(1..=shape.max_itemsets))
                .map(|_| (0..rng.random_range(1..=shape.max_items)).map(|_| rng.random_range(0..shape.alphabet)).collect())
                .collect()
        })
        .collect();
    build(rows, shape.alphabet)
}

/// Database whose itemsets are all singletons, as produced from tag text.
pub fn random_singleton_db<R: Rng>(rng: &mut R, max_sequences: usize, max_len: usize, alphabet: u32) -> SequenceDatabase {
    random_db(rng, Shape { max_sequences, max_itemsets: max_len, max_items: 1, alphabet })
}

pub fn db_strategy(shape: Shape) -> impl Strategy<Value = SequenceDatabase> {
    let itemset = prop::collection::vec(0..shape.alphabet, 1..=shape.max_items);
    let row = prop::collection::vec(itemset, 1..=shape.max_itemsets);
    prop::collection::vec(row, 1..=shape.max_sequences).prop_map(move |rows| build(rows, shape.alphabet))
}

pub fn codes(db: &SequenceDatabase) -> Vec<Vec<Vec<u32>>> {
    db.sequences()
        .iter()
        .map(|s| s.itemsets.iter().map(|set| set.items().iter().map(|i: &Item| i.0).collect()).collect())
        .collect()
}
