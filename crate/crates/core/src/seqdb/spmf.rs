//! SPMF text formats.
//!
//! Sequences: items as decimal integers, `-1` closes an itemset, `-2` closes
//! the sequence, one sequence per line. Patterns: the same item/`-1` layout
//! followed by `#SUP: <n>`.

use std::fmt::Write as _;
use std::io::{self, BufRead, Write};
use std::sync::Arc;

use thiserror::Error;

use super::{Dictionary, Item, Itemset, Pattern, PatternKey, SeqDbError, SequenceDatabase};

const ITEMSET_END: &str = "-1";
const SEQUENCE_END: &str = "-2";
const SUPPORT_TAG: &str = "#SUP:";

#[derive(Debug, Error)]
pub enum SpmfError {
    #[error("line {line}: {reason}")]
    MalformedLine { line: usize, reason: String },
    #[error(transparent)]
    Database(#[from] SeqDbError),
    #[error(transparent)]
    Io(#[from] io::Error),
}

fn malformed(line: usize, reason: impl Into<String>) -> SpmfError {
    SpmfError::MalformedLine { line, reason: reason.into() }
}

fn push_itemsets<'a>(out: &mut String, sets: impl IntoIterator<Item = &'a Itemset>, name: impl Fn(Item) -> String) {
    for set in sets {
        for &item in set.items() {
            out.push_str(&name(item));
            out.push(' ');
        }
        out.push_str(ITEMSET_END);
        out.push(' ');
    }
}

/// `"2 -1 3 -1 #SUP: 5"` for `<{2},{3}>` with support 5.
pub fn format_pattern(key: &PatternKey, support: u32) -> String {
    format_pattern_with(key, support, |item| item.0.to_string())
}

/// Same layout as [`format_pattern`] with items rendered by `name`.
pub fn format_pattern_with(key: &PatternKey, support: u32, name: impl Fn(Item) -> String) -> String {
    let mut out = String::new();
    push_itemsets(&mut out, key.elements(), name);
    let _ = write!(out, "{SUPPORT_TAG} {support}");
    out
}

pub fn format_sequence(sets: &[Itemset]) -> String {
    let mut out = String::new();
    push_itemsets(&mut out, sets, |item| item.0.to_string());
    out.push_str(SEQUENCE_END);
    out
}

pub fn write_database<W: Write>(db: &SequenceDatabase, mut sink: W) -> io::Result<()> {
    for seq in db.sequences() {
        writeln!(sink, "{}", format_sequence(&seq.itemsets))?;
    }
    Ok(())
}

pub fn write_patterns<W: Write>(patterns: &[Pattern], mut sink: W) -> io::Result<()> {
    for p in patterns {
        writeln!(sink, "{}", format_pattern(&p.key, p.support))?;
    }
    Ok(())
}

fn parse_item(token: &str, line: usize) -> Result<Item, SpmfError> {
    token
        .parse::<u32>()
        .map(Item)
        .map_err(|_| malformed(line, format!("token {token:?} is not an item code")))
}

/// Parses item/`-1` tokens into itemsets. Every itemset must be closed.
fn parse_itemsets<'a>(tokens: impl Iterator<Item = &'a str>, line: usize) -> Result<Vec<Itemset>, SpmfError> {
    let mut sets = Vec::new();
    let mut current = Vec::new();
    for token in tokens {
        if token == ITEMSET_END {
            let set = Itemset::from_unsorted(std::mem::take(&mut current))
                .ok_or_else(|| malformed(line, "empty itemset"))?;
            sets.push(set);
        } else {
            current.push(parse_item(token, line)?);
        }
    }
    if !current.is_empty() {
        return Err(malformed(line, "itemset missing its -1 terminator"));
    }
    Ok(sets)
}

/// Lines that carry no sequence: blanks, `#` comments and `@` metadata.
fn is_skippable(line: &str) -> bool {
    let t = line.trim();
    t.is_empty() || t.starts_with('@') || (t.starts_with('#') && !t.starts_with(SUPPORT_TAG))
}

/// Reads a sequence database. Without a dictionary, codes are named by their
/// decimal strings.
pub fn read_database<R: BufRead>(source: R, dictionary: Option<Arc<Dictionary>>) -> Result<SequenceDatabase, SpmfError> {
    let mut rows = Vec::new();
    for (idx, line) in source.lines().enumerate() {
        let line = line?;
        let n = idx + 1;
        if is_skippable(&line) {
            continue;
        }
        let tokens: Vec<&str> = line.split_whitespace().collect();
        match tokens.split_last() {
            Some((&SEQUENCE_END, body)) => {
                let sets = parse_itemsets(body.iter().copied(), n)?;
                if sets.is_empty() {
                    return Err(malformed(n, "sequence has no itemsets"));
                }
                rows.push(sets);
            }
            _ => return Err(malformed(n, "sequence missing its -2 terminator")),
        }
    }
    let db = match dictionary {
        Some(dict) => SequenceDatabase::new(rows, dict)?,
        None => SequenceDatabase::with_numeric_dictionary(rows)?,
    };
    Ok(db)
}

pub fn parse_pattern_line(line: &str, n: usize) -> Result<Pattern, SpmfError> {
    let mut parts = line.splitn(2, SUPPORT_TAG);
    let body = parts.next().unwrap_or_default();
    let sup = parts
        .next()
        .ok_or_else(|| malformed(n, "missing #SUP: field"))?
        .trim();
    let support: u32 = sup
        .parse()
        .map_err(|_| malformed(n, format!("support {sup:?} is not a non-negative integer")))?;
    let sets = parse_itemsets(body.split_whitespace(), n)?;
    if sets.is_empty() {
        return Err(malformed(n, "pattern has no itemsets"));
    }
    Ok(Pattern::new(PatternKey::new(sets), support))
}

pub fn read_patterns<R: BufRead>(source: R) -> Result<Vec<Pattern>, SpmfError> {
    let mut out = Vec::new();
    for (idx, line) in source.lines().enumerate() {
        let line = line?;
        if is_skippable(&line) {
            continue;
        }
        out.push(parse_pattern_line(&line, idx + 1)?);
    }
    Ok(out)
}
