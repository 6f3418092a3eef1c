use std::io::{self, Read};

use super::TERMINATOR;
use crate::extract::TagSequence;

/// Reads a whitespace-separated tag file where `.` closes each sequence.
/// Trailing tokens without a terminator still form a final sequence.
pub fn read_tagseq<R: Read>(doc_id: &str, mut source: R) -> io::Result<Vec<TagSequence>> {
    let mut text = String::new();
    source.read_to_string(&mut text)?;
    Ok(parse_tagseq(doc_id, &text))
}

pub fn parse_tagseq(doc_id: &str, text: &str) -> Vec<TagSequence> {
    let mut out = Vec::new();
    let mut current = Vec::new();
    for token in text.split_whitespace() {
        if token == TERMINATOR {
            if !current.is_empty() {
                out.push(TagSequence::new(doc_id, std::mem::take(&mut current)));
            }
        } else {
            current.push(token.to_owned());
        }
    }
    if !current.is_empty() {
        out.push(TagSequence::new(doc_id, current));
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    fn tokens(seqs: &[TagSequence]) -> Vec<Vec<&str>> {
        seqs.iter().map(|s| s.tokens.iter().map(String::as_str).collect()).collect()
    }

    #[test]
    fn splits_on_terminators() {
        let seqs = parse_tagseq("d", "s NN1 . s VBZ .");
        assert_eq!(tokens(&seqs), vec![vec!["s", "NN1"], vec!["s", "VBZ"]]);
    }

    #[test]
    fn unterminated_tail() {
        assert_eq!(tokens(&parse_tagseq("d", "a b")), vec![vec!["a", "b"]]);
    }

    #[test]
    fn empty_input() {
        assert!(parse_tagseq("d", "").is_empty());
        assert!(read_tagseq("d", "  \n".as_bytes()).unwrap().is_empty());
    }
}
