//! Causal equalities: an equals sign annotated with the direction of
//! causation between its two sides.
//!
//! ```text
//! y ->= f     y causes f
//! y <-= f     f causes y
//! y <->= f    y and f cause each other
//! f ~corr= g  f and g share a common cause
//! f ~join= g  f and g act on a common effect
//! f ?= g      at least correlated, possibly more
//! ```
//!
//! Labels are opaque text; a trailing `_DIGITS` is read as a subscript index.

mod compose;
mod derive;
mod parse;

use std::fmt;

use serde::{Deserialize, Serialize};
use thiserror::Error;

pub use compose::{compose, invert, Composition, NoRelationReason, Rule};
pub use derive::{check_derivation, Conclusion, DerivationReport, LineError, ScriptError, Verdict};
pub use parse::{parse_relation, ParseError, ParseErrorKind};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Arrow {
    Forward,
    Backward,
    Bidirectional,
    Correlation,
    CommonEffect,
    Unknown,
}

impl Arrow {
    pub const ALL: [Arrow; 6] = [
        Arrow::Forward,
        Arrow::Backward,
        Arrow::Bidirectional,
        Arrow::Correlation,
        Arrow::CommonEffect,
        Arrow::Unknown,
    ];

    /// Canonical ASCII spelling, including the trailing `=`.
    pub fn token(self) -> &'static str {
        match self {
            Arrow::Forward => "->=",
            Arrow::Backward => "<-=",
            Arrow::Bidirectional => "<->=",
            Arrow::Correlation => "~corr=",
            Arrow::CommonEffect => "~join=",
            Arrow::Unknown => "?=",
        }
    }

    pub fn unicode(self) -> &'static str {
        match self {
            Arrow::Forward => "→=",
            Arrow::Backward => "←=",
            Arrow::Bidirectional => "↔=",
            Arrow::Correlation => "⌒⌒=",
            Arrow::CommonEffect => ">-<=",
            Arrow::Unknown => "⌒?⌒=",
        }
    }

    /// The arrow that states the same thing with the two sides exchanged.
    pub fn flipped(self) -> Arrow {
        match self {
            Arrow::Forward => Arrow::Backward,
            Arrow::Backward => Arrow::Forward,
            other => other,
        }
    }

    pub fn is_symmetric(self) -> bool {
        !matches!(self, Arrow::Forward | Arrow::Backward)
    }
}

impl fmt::Display for Arrow {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.token())
    }
}

/// One side of a relation: an opaque label and an optional subscript index.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct Term {
    pub label: String,
    pub index: Option<String>,
}

impl Term {
    /// Splits a trailing `_DIGITS` off as the index.
    pub fn new(text: &str) -> Self {
        if let Some((base, idx)) = text.rsplit_once('_') {
            if !base.is_empty() && !idx.is_empty() && idx.bytes().all(|b| b.is_ascii_digit()) {
                return Term {
                    label: base.to_string(),
                    index: Some(idx.to_string()),
                };
            }
        }
        Term {
            label: text.to_string(),
            index: None,
        }
    }
}

impl fmt::Display for Term {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match &self.index {
            Some(i) => write!(f, "{}_{}", self.label, i),
            None => f.write_str(&self.label),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct CausalRelation {
    pub left: Term,
    pub arrow: Arrow,
    pub right: Term,
}

impl CausalRelation {
    pub fn new(left: &str, arrow: Arrow, right: &str) -> Self {
        Self {
            left: Term::new(left),
            arrow,
            right: Term::new(right),
        }
    }

    /// The same statement written with the sides exchanged.
    pub fn flipped(&self) -> Self {
        Self {
            left: self.right.clone(),
            arrow: self.arrow.flipped(),
            right: self.left.clone(),
        }
    }

    /// True when both relations state the same thing, in either orientation.
    pub fn equivalent(&self, other: &CausalRelation) -> bool {
        self == other || self.flipped() == *other
    }

    /// Orientation-independent form: backward arrows become forward and
    /// symmetric relations list the smaller side first.
    pub fn normalized(&self) -> Self {
        let r = if self.arrow == Arrow::Backward {
            self.flipped()
        } else {
            self.clone()
        };
        if r.arrow.is_symmetric() && r.right < r.left {
            r.flipped()
        } else {
            r
        }
    }

    pub fn unicode(&self) -> String {
        format!("{} {} {}", self.left, self.arrow.unicode(), self.right)
    }
}

impl fmt::Display for CausalRelation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{} {} {}", self.left, self.arrow, self.right)
    }
}

impl std::str::FromStr for CausalRelation {
    type Err = ParseError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        parse_relation(s)
    }
}

#[derive(Debug, Clone, PartialEq, Error)]
pub enum CausalError {
    #[error(transparent)]
    Parse(#[from] ParseError),

    #[error("`{0}` and `{1}` share no variable")]
    NoSharedVariable(Box<CausalRelation>, Box<CausalRelation>),

    #[error("`{0}` is not invertible: only symmetric relations survive reversing the arrow")]
    NonInvertible(Box<CausalRelation>),
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn index_split() {
        assert_eq!(Term::new("y_1").index.as_deref(), Some("1"));
        assert_eq!(Term::new("y_1").label, "y");
        assert_eq!(Term::new("v_z").index, None);
        assert_eq!(Term::new("_1").index, None);
        assert_eq!(Term::new("x_").index, None);
        assert_eq!(Term::new("a_b_12").label, "a_b");
        assert_eq!(Term::new("y_007").to_string(), "y_007");
    }

    #[test]
    fn flip_preserves_meaning() {
        let r = CausalRelation::new("y", Arrow::Forward, "f");
        assert_eq!(r.flipped(), CausalRelation::new("f", Arrow::Backward, "y"));
        assert!(r.equivalent(&r.flipped()));
        assert_eq!(r.normalized(), r.flipped().normalized());
        assert!(!r.equivalent(&CausalRelation::new("y", Arrow::Backward, "f")));
    }

    #[test]
    fn symmetric_normal_form_is_sorted() {
        let a = CausalRelation::new("g", Arrow::Correlation, "f").normalized();
        assert_eq!(a.to_string(), "f ~corr= g");
    }
}
