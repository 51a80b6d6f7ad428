//! Boolean grammars and their conjunctive, linear and context-free subclasses.
//!
//! A rule `A -> α1 & ... & αm & ~β1 & ... & ~βn` holds for a string that
//! matches every `αi` and none of the `βj`. Languages are computed over
//! finite universes (all strings up to a length, or all substrings of one
//! input) by length-stratified fixpoint iteration; see [`solve_bounded`] and
//! [`recognize`].

mod builtin;
mod convert;
mod equation;
mod parse;
mod solve;

use std::fmt;

use thiserror::Error;

pub use builtin::{builtin, BUILTIN_NAMES};
pub use convert::{ta_to_grammar, Conversion};
pub use equation::{check_equation2, equation2_solution, Equation2Report};
pub use solve::{recognize, recognize_linear, solve_bounded, BoundedLanguage, MAX_UNIVERSE};

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum GrammarError {
    #[error("line {line}: {message}")]
    Parse { line: usize, message: String },
    #[error("invalid grammar: {0}")]
    Invalid(String),
    #[error("unknown builtin grammar `{0}`")]
    UnknownBuiltin(String),
    #[error("rule {rule} is not linear: a conjunct has more than one nonterminal")]
    NotLinear { rule: usize },
    #[error(
        "no stable membership for `{nonterminal}` on {string:?} (length {length}): \
         iteration oscillates through a negation"
    )]
    Unstable {
        nonterminal: String,
        length: usize,
        string: String,
    },
    #[error("universe of {strings} strings exceeds the limit of {limit}")]
    UniverseTooLarge { strings: u64, limit: u64 },
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Symbol {
    /// Index into [`BooleanGrammar::terminals`].
    Terminal(usize),
    /// Index into [`BooleanGrammar::nonterminals`].
    Nonterminal(usize),
}

/// One rule `head -> positive_1 & ... & ~negative_1 & ...`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Rule {
    pub head: usize,
    pub positive: Vec<Vec<Symbol>>,
    pub negative: Vec<Vec<Symbol>>,
}

impl Rule {
    pub fn conjuncts(&self) -> impl Iterator<Item = &[Symbol]> {
        self.positive
            .iter()
            .chain(&self.negative)
            .map(Vec::as_slice)
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct BooleanGrammar {
    terminals: Vec<char>,
    nonterminals: Vec<String>,
    rules: Vec<Rule>,
    start: usize,
}

impl BooleanGrammar {
    pub fn new(
        terminals: Vec<char>,
        nonterminals: Vec<String>,
        rules: Vec<Rule>,
        start: usize,
    ) -> Result<Self, GrammarError> {
        let invalid = |m: String| Err(GrammarError::Invalid(m));
        if nonterminals.is_empty() {
            return invalid("no nonterminals".into());
        }
        if start >= nonterminals.len() {
            return invalid(format!("start symbol index {start} out of range"));
        }
        for (i, name) in nonterminals.iter().enumerate() {
            if nonterminals[..i].contains(name) {
                return invalid(format!("nonterminal `{name}` declared twice"));
            }
            let mut chars = name.chars();
            if let (Some(c), None) = (chars.next(), chars.next()) {
                if terminals.contains(&c) {
                    return invalid(format!("`{name}` is both a terminal and a nonterminal"));
                }
            }
        }
        for (i, &c) in terminals.iter().enumerate() {
            if terminals[..i].contains(&c) {
                return invalid(format!("terminal {c:?} declared twice"));
            }
        }
        for (k, rule) in rules.iter().enumerate() {
            if rule.head >= nonterminals.len() {
                return invalid(format!("rule {k} has an unknown head"));
            }
            if rule.positive.is_empty() && rule.negative.is_empty() {
                return invalid(format!("rule {k} has no conjuncts"));
            }
            for sym in rule.conjuncts().flatten() {
                let ok = match *sym {
                    Symbol::Terminal(t) => t < terminals.len(),
                    Symbol::Nonterminal(n) => n < nonterminals.len(),
                };
                if !ok {
                    return invalid(format!("rule {k} uses an undeclared symbol"));
                }
            }
        }
        Ok(Self {
            terminals,
            nonterminals,
            rules,
            start,
        })
    }

    pub fn terminals(&self) -> &[char] {
        &self.terminals
    }

    pub fn nonterminals(&self) -> &[String] {
        &self.nonterminals
    }

    pub fn rules(&self) -> &[Rule] {
        &self.rules
    }

    pub fn start(&self) -> usize {
        self.start
    }

    pub fn start_name(&self) -> &str {
        &self.nonterminals[self.start]
    }

    pub fn nonterminal(&self, name: &str) -> Option<usize> {
        self.nonterminals.iter().position(|n| n == name)
    }

    pub fn terminal(&self, c: char) -> Option<usize> {
        self.terminals.iter().position(|&t| t == c)
    }

    /// Number of rules; every `|` alternative is a rule of its own.
    pub fn rule_count(&self) -> usize {
        self.rules.len()
    }

    /// No negative conjuncts.
    pub fn is_conjunctive(&self) -> bool {
        self.rules.iter().all(|r| r.negative.is_empty())
    }

    /// Exactly one positive and no negative conjunct per rule.
    pub fn is_context_free(&self) -> bool {
        self.rules
            .iter()
            .all(|r| r.positive.len() == 1 && r.negative.is_empty())
    }

    /// At most one nonterminal occurrence in every conjunct.
    pub fn is_linear(&self) -> bool {
        self.first_nonlinear_rule().is_none()
    }

    pub fn is_linear_conjunctive(&self) -> bool {
        self.is_linear() && self.is_conjunctive()
    }

    pub(crate) fn first_nonlinear_rule(&self) -> Option<usize> {
        self.rules.iter().position(|r| {
            r.conjuncts().any(|body| {
                body.iter()
                    .filter(|s| matches!(s, Symbol::Nonterminal(_)))
                    .count()
                    > 1
            })
        })
    }

    fn write_body(&self, out: &mut String, body: &[Symbol]) {
        if body.is_empty() {
            out.push('_');
            return;
        }
        let toks: Vec<String> = body
            .iter()
            .map(|s| match *s {
                Symbol::Terminal(t) => self.terminals[t].to_string(),
                Symbol::Nonterminal(n) => self.nonterminals[n].clone(),
            })
            .collect();
        out.push_str(&toks.join(" "));
    }

    /// Text in the grammar format: `start:` and `terminals:` headers, then
    /// one line per nonterminal with its rules separated by `|`.
    pub fn to_text(&self) -> String {
        let mut out = format!("start: {}\n", self.start_name());
        let terms: Vec<String> = self.terminals.iter().map(char::to_string).collect();
        out.push_str(&format!("terminals: {}\n", terms.join(" ")));
        for (head, name) in self.nonterminals.iter().enumerate() {
            let rules: Vec<&Rule> = self.rules.iter().filter(|r| r.head == head).collect();
            if rules.is_empty() {
                continue;
            }
            out.push_str(name);
            out.push_str(" ->");
            for (k, rule) in rules.iter().enumerate() {
                out.push_str(if k == 0 { " " } else { " | " });
                let mut first = true;
                for (neg, body) in rule
                    .positive
                    .iter()
                    .map(|b| (false, b))
                    .chain(rule.negative.iter().map(|b| (true, b)))
                {
                    if !first {
                        out.push_str(" & ");
                    }
                    first = false;
                    if neg {
                        out.push('~');
                    }
                    self.write_body(&mut out, body);
                }
            }
            out.push('\n');
        }
        out
    }
}

impl fmt::Display for BooleanGrammar {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.to_text())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn classification() {
        let abc = builtin("example-abc").unwrap();
        assert!(!abc.is_conjunctive());
        assert!(!abc.is_linear());
        let wcw = builtin("example-wcw").unwrap();
        assert!(wcw.is_linear_conjunctive());
        assert!(!wcw.is_context_free());
        let g: BooleanGrammar = "start: S\nS -> a S b | _\n".parse().unwrap();
        assert!(g.is_context_free());
        assert!(g.is_linear());
    }

    #[test]
    fn constructor_rejects_bad_grammars() {
        let empty_rule = Rule {
            head: 0,
            positive: vec![],
            negative: vec![],
        };
        assert!(BooleanGrammar::new(vec!['a'], vec!["S".into()], vec![empty_rule], 0).is_err());
        assert!(BooleanGrammar::new(vec!['a'], vec!["a".into()], vec![], 0).is_err());
        assert!(BooleanGrammar::new(vec!['a'], vec!["S".into()], vec![], 1).is_err());
        let bad_symbol = Rule {
            head: 0,
            positive: vec![vec![Symbol::Terminal(4)]],
            negative: vec![],
        };
        assert!(BooleanGrammar::new(vec!['a'], vec!["S".into()], vec![bad_symbol], 0).is_err());
    }
}
