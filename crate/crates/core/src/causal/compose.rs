use std::fmt;

use serde::{Deserialize, Serialize};

use super::{Arrow, CausalError, CausalRelation, Term};

/// Composition rules for two relations sharing a variable y, written
/// `y A f` and `y B g`. The number is the row in the notation table
/// (rows 1-3 define the single arrows, row 13 is the index mismatch).
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Rule {
    /// (→, →): y causes both; f and g are only correlated.
    CommonCause,
    /// (→, ←): g causes f through y.
    ForwardIntermediary,
    /// (←, →): f causes g through y.
    BackwardIntermediary,
    /// (←, ←): f and g both act on y.
    CommonEffect,
    /// (↔, →): f causes g.
    MutualThenForward,
    /// (↔, ←): g causes f.
    MutualThenBackward,
    /// (→, ↔): g causes f.
    ForwardThenMutual,
    /// (←, ↔): f causes g.
    BackwardThenMutual,
    /// (↔, ↔): f and g cause each other.
    Mutual,
}

impl Rule {
    pub const ALL: [Rule; 9] = [
        Rule::CommonCause,
        Rule::ForwardIntermediary,
        Rule::BackwardIntermediary,
        Rule::CommonEffect,
        Rule::MutualThenForward,
        Rule::MutualThenBackward,
        Rule::ForwardThenMutual,
        Rule::BackwardThenMutual,
        Rule::Mutual,
    ];

    pub fn row(self) -> u8 {
        4 + Rule::ALL.iter().position(|&r| r == self).unwrap() as u8
    }

    pub fn premises(self) -> (Arrow, Arrow) {
        use Arrow::*;
        match self {
            Rule::CommonCause => (Forward, Forward),
            Rule::ForwardIntermediary => (Forward, Backward),
            Rule::BackwardIntermediary => (Backward, Forward),
            Rule::CommonEffect => (Backward, Backward),
            Rule::MutualThenForward => (Bidirectional, Forward),
            Rule::MutualThenBackward => (Bidirectional, Backward),
            Rule::ForwardThenMutual => (Forward, Bidirectional),
            Rule::BackwardThenMutual => (Backward, Bidirectional),
            Rule::Mutual => (Bidirectional, Bidirectional),
        }
    }

    fn lookup(a: Arrow, b: Arrow) -> Option<Rule> {
        Rule::ALL.into_iter().find(|r| r.premises() == (a, b))
    }

    /// Conclusion for `y A f`, `y B g`.
    fn conclude(self, f: &Term, g: &Term) -> CausalRelation {
        let rel = |left: &Term, arrow, right: &Term| CausalRelation {
            left: left.clone(),
            arrow,
            right: right.clone(),
        };
        match self {
            Rule::CommonCause => rel(f, Arrow::Correlation, g),
            Rule::CommonEffect => rel(f, Arrow::CommonEffect, g),
            Rule::Mutual => rel(f, Arrow::Bidirectional, g),
            Rule::ForwardIntermediary | Rule::MutualThenBackward | Rule::ForwardThenMutual => {
                rel(g, Arrow::Forward, f)
            }
            Rule::BackwardIntermediary | Rule::MutualThenForward | Rule::BackwardThenMutual => {
                rel(g, Arrow::Backward, f)
            }
        }
    }

    pub fn description(self) -> &'static str {
        match self {
            Rule::CommonCause => "correlation: y causes both f and g",
            Rule::ForwardIntermediary => "g causes f via the intermediary y",
            Rule::BackwardIntermediary => "f causes g via the intermediary y",
            Rule::CommonEffect => "common effect: f or g can cause y",
            Rule::MutualThenForward => "y and f bidirectional, f causes g",
            Rule::MutualThenBackward => "y and f bidirectional, g causes f",
            Rule::ForwardThenMutual => "y and g bidirectional, g causes f",
            Rule::BackwardThenMutual => "y and g bidirectional, f causes g",
            Rule::Mutual => "f and g bidirectional",
        }
    }
}

impl fmt::Display for Rule {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "rule {} ({})", self.row(), self.description())
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum NoRelationReason {
    /// The shared variable carries different subscript indices.
    MismatchedIndices,
    /// The rule table has no entry for this arrow pair.
    UndefinedInTable,
}

impl fmt::Display for NoRelationReason {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            NoRelationReason::MismatchedIndices => "MISMATCHED-INDICES",
            NoRelationReason::UndefinedInTable => "UNDEFINED-IN-TABLE",
        })
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub enum Composition {
    Related {
        relation: CausalRelation,
        rule: Rule,
        /// A premise had to be rewritten with its sides exchanged to put the
        /// shared variable on the left.
        reoriented: bool,
    },
    NoRelation(NoRelationReason),
}

impl Composition {
    pub fn relation(&self) -> Option<&CausalRelation> {
        match self {
            Composition::Related { relation, .. } => Some(relation),
            Composition::NoRelation(_) => None,
        }
    }
}

impl fmt::Display for Composition {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Composition::Related { relation, rule, .. } => write!(f, "{relation}    [{rule}]"),
            Composition::NoRelation(reason) => write!(f, "no relation    [{reason}]"),
        }
    }
}

/// Puts `y` on the left of `r`; returns whether a flip was needed.
fn orient(r: &CausalRelation, y: &Term) -> (CausalRelation, bool) {
    if r.left == *y {
        (r.clone(), false)
    } else {
        (r.flipped(), true)
    }
}

fn sides(r: &CausalRelation) -> [&Term; 2] {
    [&r.left, &r.right]
}

pub fn compose(r1: &CausalRelation, r2: &CausalRelation) -> Result<Composition, CausalError> {
    let shared = sides(r1)
        .into_iter()
        .find(|t| sides(r2).contains(t))
        .cloned();
    let Some(y) = shared else {
        let same_base = sides(r1)
            .into_iter()
            .any(|a| sides(r2).into_iter().any(|b| a.label == b.label));
        if same_base {
            return Ok(Composition::NoRelation(NoRelationReason::MismatchedIndices));
        }
        return Err(CausalError::NoSharedVariable(Box::new(r1.clone()), Box::new(r2.clone())));
    };
    let (a, flip_a) = orient(r1, &y);
    let (b, flip_b) = orient(r2, &y);
    Ok(match Rule::lookup(a.arrow, b.arrow) {
        Some(rule) => Composition::Related {
            relation: rule.conclude(&a.right, &b.right),
            rule,
            reoriented: flip_a || flip_b,
        },
        None => Composition::NoRelation(NoRelationReason::UndefinedInTable),
    })
}

/// Reverses the arrow. Only symmetric relations survive this.
pub fn invert(r: &CausalRelation) -> Result<CausalRelation, CausalError> {
    if r.arrow.is_symmetric() {
        Ok(CausalRelation {
            left: r.right.clone(),
            arrow: r.arrow,
            right: r.left.clone(),
        })
    } else {
        Err(CausalError::NonInvertible(Box::new(r.clone())))
    }
}
