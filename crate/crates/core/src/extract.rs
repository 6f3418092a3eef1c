//! Tag extraction from TTK/TimeML-annotated XML.
//!
//! Only the `tarsqi_tags` block is read. Tags are kept in document order and
//! turned into one token sequence per sentence:
//!
//! * `<s>`, `<ng>`, `<vg>` emit their own name; `<s>` also starts a sentence.
//! * `<lex>` emits its POS label, and a lex with POS `.` ends the sentence.
//! * `<EVENT>` emits `EVENT` followed by the POS of the token it annotates.
//!   That token's own `<lex>` still emits its POS where it occurs.
//! * `<TIMEX3>` emits `TIMEX3`; the lex tokens inside it are kept.
//!
//! Everything else (`docelement`, links, ...) is ignored.

use std::io::{self, Write};

use quick_xml::events::{BytesStart, Event};
use quick_xml::{Reader, XmlVersion};
use thiserror::Error;

use crate::seqdb::TERMINATOR;

#[derive(Debug, Error)]
pub enum ExtractError {
    #[error("malformed XML: {0}")]
    MalformedXml(String),
    #[error("lex tag at offset {begin} has no pos attribute")]
    MissingPos { begin: u64 },
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum TagKind {
    S,
    Lex,
    Ng,
    Vg,
    Event,
    Timex3,
}

impl TagKind {
    fn from_name(name: &str) -> Option<Self> {
        Some(match name {
            "s" => TagKind::S,
            "lex" => TagKind::Lex,
            "ng" => TagKind::Ng,
            "vg" => TagKind::Vg,
            "EVENT" => TagKind::Event,
            "TIMEX3" => TagKind::Timex3,
            _ => return None,
        })
    }

    pub fn symbol(self) -> &'static str {
        match self {
            TagKind::S => "s",
            TagKind::Lex => "lex",
            TagKind::Ng => "ng",
            TagKind::Vg => "vg",
            TagKind::Event => "EVENT",
            TagKind::Timex3 => "TIMEX3",
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct AnnotationTag {
    pub kind: TagKind,
    pub begin: u64,
    pub end: u64,
    /// Set for every lex tag.
    pub pos: Option<String>,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct AnnotatedDocument {
    pub doc_id: String,
    pub tags: Vec<AnnotationTag>,
}

/// One sentence worth of tag tokens, terminator excluded.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct TagSequence {
    pub doc_id: String,
    pub tokens: Vec<String>,
}

impl TagSequence {
    pub fn new(doc_id: impl Into<String>, tokens: Vec<String>) -> Self {
        TagSequence { doc_id: doc_id.into(), tokens }
    }

    pub fn from_tokens(doc_id: impl Into<String>, tokens: &[&str]) -> Self {
        Self::new(doc_id, tokens.iter().map(|t| t.to_string()).collect())
    }

    pub fn len(&self) -> usize {
        self.tokens.len()
    }

    pub fn is_empty(&self) -> bool {
        self.tokens.is_empty()
    }
}

fn attr(e: &BytesStart<'_>, key: &str) -> Result<Option<String>, ExtractError> {
    for a in e.attributes() {
        let a = a.map_err(|err| ExtractError::MalformedXml(err.to_string()))?;
        if a.key.as_ref() == key {
            let value = a
                .normalized_value(XmlVersion::Implicit1_0)
                .map_err(|err| ExtractError::MalformedXml(err.to_string()))?;
            return Ok(Some(value.into_owned()));
        }
    }
    Ok(None)
}

fn offset(e: &BytesStart<'_>, key: &str) -> Result<u64, ExtractError> {
    let name = e.name().as_ref().to_owned();
    let raw = attr(e, key)?
        .ok_or_else(|| ExtractError::MalformedXml(format!("<{name}> lacks a {key} attribute")))?;
    raw.trim()
        .parse()
        .map_err(|_| ExtractError::MalformedXml(format!("<{name}> has non-integer {key}={raw:?}")))
}

fn read_tag(kind: TagKind, e: &BytesStart<'_>) -> Result<AnnotationTag, ExtractError> {
    let begin = offset(e, "begin")?;
    let end = offset(e, "end")?;
    if begin > end {
        return Err(ExtractError::MalformedXml(format!(
            "<{}> span {begin}..{end} is reversed",
            kind.symbol()
        )));
    }
    let pos = match kind {
        TagKind::Lex => Some(attr(e, "pos")?.ok_or(ExtractError::MissingPos { begin })?),
        _ => None,
    };
    Ok(AnnotationTag { kind, begin, end, pos })
}

/// Parses a TTK output document and returns its consumable tags in document
/// order.
pub fn parse_annotated_xml(doc_id: impl Into<String>, bytes: &[u8]) -> Result<AnnotatedDocument, ExtractError> {
    let mut reader = Reader::from_reader(bytes);
    let mut buf = Vec::new();
    let mut tags = Vec::new();
    let mut depth = 0usize;
    let mut tags_depth: Option<usize> = None;
    let mut seen_tags_block = false;
    let mut seen_root = false;

    loop {
        let event = reader
            .read_event_into(&mut buf)
            .map_err(|err| ExtractError::MalformedXml(format!("at byte {}: {err}", reader.error_position())))?;
        match event {
            Event::Start(e) => {
                seen_root = true;
                depth += 1;
                if e.name().as_ref() == "tarsqi_tags" && tags_depth.is_none() {
                    tags_depth = Some(depth);
                    seen_tags_block = true;
                } else if tags_depth.is_some() {
                    if let Some(kind) = TagKind::from_name(e.name().as_ref()) {
                        tags.push(read_tag(kind, &e)?);
                    }
                }
            }
            Event::Empty(e) => {
                seen_root = true;
                if e.name().as_ref() == "tarsqi_tags" && tags_depth.is_none() {
                    seen_tags_block = true;
                } else if tags_depth.is_some() {
                    if let Some(kind) = TagKind::from_name(e.name().as_ref()) {
                        tags.push(read_tag(kind, &e)?);
                    }
                }
            }
            Event::End(_) => {
                if tags_depth == Some(depth) {
                    tags_depth = None;
                }
                depth = depth
                    .checked_sub(1)
                    .ok_or_else(|| ExtractError::MalformedXml("unbalanced closing tag".into()))?;
            }
            Event::Eof => break,
            _ => {}
        }
        buf.clear();
    }

    if depth != 0 {
        return Err(ExtractError::MalformedXml(format!("{depth} element(s) left unclosed")));
    }
    if !seen_root {
        return Err(ExtractError::MalformedXml("document has no elements".into()));
    }
    if !seen_tags_block {
        return Err(ExtractError::MalformedXml("no tarsqi_tags element".into()));
    }
    Ok(AnnotatedDocument { doc_id: doc_id.into(), tags })
}

/// POS of the token an EVENT annotates: the first lex starting inside the
/// event span, else a lex whose span covers the event's start.
fn annotated_pos<'a>(lexes: &[(u64, u64, &'a str)], begin: u64, end: u64) -> Option<&'a str> {
    let start = lexes.partition_point(|&(b, _, _)| b < begin);
    lexes[start..]
        .iter()
        .take_while(|&&(b, _, _)| b <= end)
        .find(|&&(_, e, _)| e <= end)
        .or_else(|| lexes[..start].iter().rev().find(|&&(b, e, _)| b <= begin && begin < e))
        .map(|&(_, _, pos)| pos)
}

pub fn extract_sequences(doc: &AnnotatedDocument) -> Vec<TagSequence> {
    let mut lexes: Vec<(u64, u64, &str)> = doc
        .tags
        .iter()
        .filter(|t| t.kind == TagKind::Lex)
        .map(|t| (t.begin, t.end, t.pos.as_deref().unwrap_or_default()))
        .collect();
    lexes.sort_by_key(|&(b, e, _)| (b, e));

    let mut out = Vec::new();
    let mut current: Vec<String> = Vec::new();
    let mut flush = |current: &mut Vec<String>| {
        if !current.is_empty() {
            out.push(TagSequence::new(doc.doc_id.clone(), std::mem::take(current)));
        }
    };

    for tag in &doc.tags {
        match tag.kind {
            TagKind::S => {
                flush(&mut current);
                current.push(TagKind::S.symbol().to_owned());
            }
            TagKind::Ng | TagKind::Vg | TagKind::Timex3 => current.push(tag.kind.symbol().to_owned()),
            TagKind::Event => {
                current.push(TagKind::Event.symbol().to_owned());
                if let Some(pos) = annotated_pos(&lexes, tag.begin, tag.end).filter(|&p| p != TERMINATOR) {
                    current.push(pos.to_owned());
                }
            }
            TagKind::Lex => match tag.pos.as_deref() {
                Some(TERMINATOR) => flush(&mut current),
                Some(pos) => current.push(pos.to_owned()),
                None => {}
            },
        }
    }
    flush(&mut current);
    out
}

/// Writes `a b . c .`: tokens separated by spaces and every sequence closed
/// by ` .`. Returns the number of bytes written.
pub fn write_tagseq<W: Write>(sequences: &[TagSequence], mut sink: W) -> io::Result<usize> {
    let mut text = String::new();
    for (i, seq) in sequences.iter().enumerate() {
        if i > 0 {
            text.push(' ');
        }
        for token in &seq.tokens {
            text.push_str(token);
            text.push(' ');
        }
        text.push_str(TERMINATOR);
    }
    sink.write_all(text.as_bytes())?;
    Ok(text.len())
}
