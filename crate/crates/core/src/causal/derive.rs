//! Checking claimed relations against the closure of a set of premises.
//!
//! Script lines:
//!
//! ```text
//! # comment
//! premise y ->= f      (the keyword is optional)
//! alias k*z := z       (both labels denote the same variable)
//! claim f ~corr= g
//! ```

use std::collections::{HashMap, HashSet};
use std::fmt::{self, Write as _};

use serde::Serialize;
use thiserror::Error;

use super::compose::{compose, Composition};
use super::{parse_relation, Arrow, CausalRelation, Term};

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct LineError {
    pub line: usize,
    pub offset: usize,
    pub message: String,
}

impl fmt::Display for LineError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "line {}, offset {}: {}", self.line, self.offset, self.message)
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
#[error("malformed script:\n  {}", .errors.iter().map(ToString::to_string).collect::<Vec<_>>().join("\n  "))]
pub struct ScriptError {
    pub errors: Vec<LineError>,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Conclusion {
    pub relation: CausalRelation,
    pub citation: String,
    pub from: (CausalRelation, CausalRelation),
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Verdict {
    pub line: usize,
    pub claim: CausalRelation,
    pub derivable: bool,
    pub citation: Option<String>,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct DerivationReport {
    pub premises: Vec<CausalRelation>,
    pub aliases: Vec<(Term, Term)>,
    pub conclusions: Vec<Conclusion>,
    pub verdicts: Vec<Verdict>,
}

impl DerivationReport {
    pub fn all_derivable(&self) -> bool {
        self.verdicts.iter().all(|v| v.derivable)
    }

    pub fn render_text(&self) -> String {
        let mut out = String::new();
        for p in &self.premises {
            let _ = writeln!(out, "premise        {p}");
        }
        for (a, b) in &self.aliases {
            let _ = writeln!(out, "alias          {a} := {b}");
        }
        for c in &self.conclusions {
            let _ = writeln!(out, "derived        {}    [{}]", c.relation, c.citation);
        }
        for v in &self.verdicts {
            let status = if v.derivable { "DERIVABLE" } else { "NOT-DERIVABLE" };
            match &v.citation {
                Some(c) => {
                    let _ = writeln!(out, "{status:<14} {}    [{c}]", v.claim);
                }
                None => {
                    let _ = writeln!(out, "{status:<14} {}", v.claim);
                }
            }
        }
        out
    }
}

enum Line {
    Premise(CausalRelation),
    Claim(CausalRelation),
    Alias(Term, Term),
}

fn parse_line(text: &str) -> Result<Option<Line>, (usize, String)> {
    let body = text.split('#').next().unwrap_or("");
    let indent = body.len() - body.trim_start().len();
    let trimmed = body.trim();
    if trimmed.is_empty() {
        return Ok(None);
    }
    let keyword = |k: &str| {
        trimmed
            .strip_prefix(k)
            .filter(|rest| rest.starts_with(char::is_whitespace))
            .map(|rest| (rest, indent + k.len()))
    };
    let relation = |rest: &str, at: usize| {
        parse_relation(rest).map_err(|e| (at + e.offset, e.kind.to_string()))
    };
    if let Some((rest, at)) = keyword("alias") {
        let Some((a, b)) = rest.split_once(":=") else {
            return Err((at, "alias needs `A := B`".into()));
        };
        let (a, b) = (a.trim(), b.trim());
        if a.is_empty() || b.is_empty() {
            return Err((at, "alias needs two non-empty labels".into()));
        }
        return Ok(Some(Line::Alias(Term::new(a), Term::new(b))));
    }
    if let Some((rest, at)) = keyword("claim") {
        return relation(rest, at).map(|r| Some(Line::Claim(r)));
    }
    if let Some((rest, at)) = keyword("premise") {
        return relation(rest, at).map(|r| Some(Line::Premise(r)));
    }
    relation(body, 0).map(|r| Some(Line::Premise(r)))
}

/// Union-find over labels declared equal by `alias`.
#[derive(Default)]
struct Aliases {
    parent: HashMap<Term, Term>,
}

impl Aliases {
    fn root(&self, t: &Term) -> Term {
        let mut cur = t;
        while let Some(p) = self.parent.get(cur) {
            cur = p;
        }
        cur.clone()
    }

    fn join(&mut self, a: &Term, b: &Term) {
        let (ra, rb) = (self.root(a), self.root(b));
        if ra != rb {
            self.parent.insert(ra, rb);
        }
    }

    fn resolve(&self, r: &CausalRelation) -> CausalRelation {
        CausalRelation {
            left: self.root(&r.left),
            arrow: r.arrow,
            right: self.root(&r.right),
        }
    }
}

enum Source {
    Premise,
    Derived(String, usize, usize),
}

struct Known {
    relation: CausalRelation,
    source: Source,
}

/// Parses the script, closes the premises under the composition rules and
/// marks each claim DERIVABLE or NOT-DERIVABLE.
///
/// A conclusion needing a premise rewritten with its sides exchanged (so the
/// shared variable sits on the left) is cited as an extension of the table;
/// for one-way results this is transitive chaining.
pub fn check_derivation(script: &str) -> Result<DerivationReport, ScriptError> {
    let mut errors = Vec::new();
    let mut premises = Vec::new();
    let mut claims = Vec::new();
    let mut alias_pairs = Vec::new();
    let mut aliases = Aliases::default();
    for (n, text) in script.lines().enumerate() {
        match parse_line(text) {
            Ok(None) => {}
            Ok(Some(Line::Premise(r))) => premises.push(r),
            Ok(Some(Line::Claim(r))) => claims.push((n + 1, r)),
            Ok(Some(Line::Alias(a, b))) => {
                aliases.join(&a, &b);
                alias_pairs.push((a, b));
            }
            Err((offset, message)) => errors.push(LineError {
                line: n + 1,
                offset,
                message,
            }),
        }
    }
    if !errors.is_empty() {
        return Err(ScriptError { errors });
    }

    let mut known: Vec<Known> = Vec::new();
    let mut seen = HashSet::new();
    for p in &premises {
        let r = aliases.resolve(p);
        if seen.insert(r.normalized()) {
            known.push(Known {
                relation: r,
                source: Source::Premise,
            });
        }
    }
    let mut j = 0;
    while j < known.len() {
        for i in 0..j {
            let Ok(Composition::Related {
                relation,
                rule,
                reoriented,
            }) = compose(&known[i].relation, &known[j].relation)
            else {
                continue;
            };
            if relation.left == relation.right || !seen.insert(relation.normalized()) {
                continue;
            }
            let citation = match (reoriented, relation.arrow) {
                (false, _) => rule.to_string(),
                (true, Arrow::Forward | Arrow::Backward) => {
                    format!("{rule}; EXTENDED: transitive chaining")
                }
                (true, _) => format!("{rule}; EXTENDED: reoriented premise"),
            };
            let relation = if relation.arrow == Arrow::Backward { relation.flipped() } else { relation };
            known.push(Known {
                relation,
                source: Source::Derived(citation, i, j),
            });
        }
        j += 1;
    }

    let lookup: HashMap<CausalRelation, usize> = known
        .iter()
        .enumerate()
        .map(|(i, k)| (k.relation.normalized(), i))
        .collect();
    let verdicts = claims
        .into_iter()
        .map(|(line, claim)| {
            let hit = lookup.get(&aliases.resolve(&claim).normalized());
            Verdict {
                line,
                derivable: hit.is_some(),
                citation: hit.map(|&i| match &known[i].source {
                    Source::Premise => "premise".to_string(),
                    Source::Derived(c, _, _) => c.clone(),
                }),
                claim,
            }
        })
        .collect();
    let conclusions = known
        .iter()
        .filter_map(|k| match &k.source {
            Source::Premise => None,
            Source::Derived(c, a, b) => Some(Conclusion {
                relation: k.relation.clone(),
                citation: c.clone(),
                from: (known[*a].relation.clone(), known[*b].relation.clone()),
            }),
        })
        .collect();
    Ok(DerivationReport {
        premises,
        aliases: alias_pairs,
        conclusions,
        verdicts,
    })
}
