use thiserror::Error;

use super::{Arrow, CausalRelation, Term};

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ParseErrorKind {
    MissingArrow,
    UnknownArrow,
    EmptyLabel,
    TrailingGarbage,
    UnbalancedParenthesis,
}

impl std::fmt::Display for ParseErrorKind {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(match self {
            ParseErrorKind::MissingArrow => "missing arrow",
            ParseErrorKind::UnknownArrow => "unknown arrow",
            ParseErrorKind::EmptyLabel => "empty label",
            ParseErrorKind::TrailingGarbage => "trailing garbage",
            ParseErrorKind::UnbalancedParenthesis => "unbalanced parenthesis",
        })
    }
}

/// A rejected relation; `offset` is a byte offset into the input.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
#[error("{kind} at offset {offset}")]
pub struct ParseError {
    pub kind: ParseErrorKind,
    pub offset: usize,
}

impl ParseError {
    fn at(kind: ParseErrorKind, offset: usize) -> Self {
        Self { kind, offset }
    }
}

/// Every accepted arrow spelling, longest first so that `<->=` wins over `->=`.
fn spellings() -> Vec<(&'static str, Arrow)> {
    let mut v: Vec<_> = Arrow::ALL
        .iter()
        .flat_map(|&a| [(a.token(), a), (a.unicode(), a)])
        .collect();
    v.sort_by_key(|(s, _)| std::cmp::Reverse(s.len()));
    v
}

/// `LABEL ARROW LABEL`, where the arrow ends at the first `=`.
pub fn parse_relation(text: &str) -> Result<CausalRelation, ParseError> {
    let eq = text
        .find('=')
        .ok_or_else(|| ParseError::at(ParseErrorKind::MissingArrow, text.len()))?;
    let head = &text[..=eq];
    let (token, arrow) = spellings()
        .into_iter()
        .find(|(s, _)| head.ends_with(s))
        .ok_or_else(|| {
            let start = head[..eq]
                .char_indices()
                .rev()
                .find(|(_, c)| c.is_whitespace())
                .map_or(0, |(i, c)| i + c.len_utf8());
            ParseError::at(ParseErrorKind::UnknownArrow, start)
        })?;
    let arrow_start = eq + 1 - token.len();
    let rest = eq + 1;
    if let Some(extra) = text[rest..].find('=') {
        return Err(ParseError::at(ParseErrorKind::TrailingGarbage, rest + extra));
    }
    let left = label(text, 0, arrow_start)?;
    let right = label(text, rest, text.len())?;
    Ok(CausalRelation {
        left: Term::new(left),
        arrow,
        right: Term::new(right),
    })
}

fn label(text: &str, start: usize, end: usize) -> Result<&str, ParseError> {
    let raw = &text[start..end];
    let trimmed = raw.trim();
    if trimmed.is_empty() {
        return Err(ParseError::at(ParseErrorKind::EmptyLabel, start));
    }
    let offset = start + (raw.len() - raw.trim_start().len());
    let mut open = Vec::new();
    for (i, c) in trimmed.char_indices() {
        match c {
            '(' => open.push(i),
            ')' if open.pop().is_none() => {
                return Err(ParseError::at(ParseErrorKind::UnbalancedParenthesis, offset + i));
            }
            _ => {}
        }
    }
    if let Some(i) = open.pop() {
        return Err(ParseError::at(ParseErrorKind::UnbalancedParenthesis, offset + i));
    }
    Ok(trimmed)
}
