use std::collections::HashMap;
use std::io::{self, BufRead, Write};

use thiserror::Error;

use super::Item;

#[derive(Debug, Error)]
pub enum DictionaryError {
    #[error("duplicate symbol {0:?}")]
    DuplicateSymbol(String),
    #[error("line {line}: {reason}")]
    MalformedLine { line: usize, reason: String },
    #[error(transparent)]
    Io(#[from] io::Error),
}

/// Bijection between dense item codes and symbol strings.
#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct Dictionary {
    symbols: Vec<String>,
    codes: HashMap<String, Item>,
}

impl Dictionary {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn from_symbols<I, S>(symbols: I) -> Result<Self, DictionaryError>
    where
        I: IntoIterator<Item = S>,
        S: Into<String>,
    {
        let mut dict = Dictionary::new();
        for sym in symbols {
            let sym = sym.into();
            if dict.codes.contains_key(&sym) {
                return Err(DictionaryError::DuplicateSymbol(sym));
            }
            dict.intern(&sym);
        }
        Ok(dict)
    }

    /// Codes `0..=max` named by their decimal representation.
    pub fn numeric(max: Option<u32>) -> Self {
        match max {
            Some(max) => Self::from_symbols((0..=max).map(|c| c.to_string())).expect("distinct"),
            None => Self::new(),
        }
    }

    /// Returns the code of `symbol`, assigning the next free code if needed.
    pub fn intern(&mut self, symbol: &str) -> Item {
        if let Some(&item) = self.codes.get(symbol) {
            return item;
        }
        let item = Item(self.symbols.len() as u32);
        self.symbols.push(symbol.to_owned());
        self.codes.insert(symbol.to_owned(), item);
        item
    }

    pub fn code(&self, symbol: &str) -> Option<Item> {
        self.codes.get(symbol).copied()
    }

    pub fn symbol(&self, item: Item) -> Option<&str> {
        self.symbols.get(item.0 as usize).map(String::as_str)
    }

    pub fn len(&self) -> usize {
        self.symbols.len()
    }

    pub fn is_empty(&self) -> bool {
        self.symbols.is_empty()
    }

    pub fn iter(&self) -> impl Iterator<Item = (Item, &str)> {
        self.symbols
            .iter()
            .enumerate()
            .map(|(i, s)| (Item(i as u32), s.as_str()))
    }

    /// One `code<TAB>symbol` line per entry.
    pub fn write_tsv<W: Write>(&self, mut sink: W) -> io::Result<()> {
        for (item, sym) in self.iter() {
            writeln!(sink, "{}\t{}", item.0, sym)?;
        }
        Ok(())
    }

    pub fn read_tsv<R: BufRead>(source: R) -> Result<Self, DictionaryError> {
        let mut dict = Dictionary::new();
        for (idx, line) in source.lines().enumerate() {
            let line = line?;
            if line.is_empty() {
                continue;
            }
            let malformed = |reason: String| DictionaryError::MalformedLine { line: idx + 1, reason };
            let (code, sym) = line
                .split_once('\t')
                .ok_or_else(|| malformed("expected code<TAB>symbol".into()))?;
            let code: u32 = code
                .parse()
                .map_err(|_| malformed(format!("code {code:?} is not an integer")))?;
            if code as usize != dict.len() {
                return Err(malformed(format!("expected code {}, found {code}", dict.len())));
            }
            if dict.codes.contains_key(sym) {
                return Err(DictionaryError::DuplicateSymbol(sym.to_owned()));
            }
            dict.intern(sym);
        }
        Ok(dict)
    }
}
