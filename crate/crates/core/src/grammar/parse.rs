//! Text format:
//!
//! ```text
//! # comment
//! start: S
//! terminals: a b c
//! S -> A B & ~D C
//! A -> a A | _
//! ```
//!
//! Nonterminals are exactly the rule heads; any other token must be a single
//! character and is a terminal. `_` is the empty string, `~` negates a
//! conjunct. `start:` defaults to the first head; without `terminals:` the
//! alphabet is the set of terminals used, in order of appearance.

use std::str::FromStr;

use super::{BooleanGrammar, GrammarError, Rule, Symbol};

fn err(line: usize, message: impl Into<String>) -> GrammarError {
    GrammarError::Parse {
        line,
        message: message.into(),
    }
}

fn tokens(s: &str) -> Vec<String> {
    let mut spaced = String::with_capacity(s.len() * 2);
    for c in s.chars() {
        if matches!(c, '|' | '&' | '~') {
            spaced.push(' ');
            spaced.push(c);
            spaced.push(' ');
        } else {
            spaced.push(c);
        }
    }
    spaced.split_whitespace().map(str::to_owned).collect()
}

impl FromStr for BooleanGrammar {
    type Err = GrammarError;

    fn from_str(text: &str) -> Result<Self, Self::Err> {
        let mut start: Option<(usize, String)> = None;
        let mut declared: Option<Vec<char>> = None;
        let mut rule_lines: Vec<(usize, String, Vec<String>)> = Vec::new();
        let mut heads: Vec<String> = Vec::new();

        for (idx, raw) in text.lines().enumerate() {
            let line_no = idx + 1;
            let line = raw.split('#').next().unwrap_or("").trim();
            if line.is_empty() {
                continue;
            }
            if let Some(rest) = line.strip_prefix("start:") {
                let name = rest.trim();
                if name.is_empty() || name.contains(char::is_whitespace) {
                    return Err(err(line_no, "`start:` takes one nonterminal"));
                }
                start = Some((line_no, name.to_owned()));
            } else if let Some(rest) = line.strip_prefix("terminals:") {
                let mut ts = Vec::new();
                for tok in rest.split_whitespace() {
                    let mut cs = tok.chars();
                    match (cs.next(), cs.next()) {
                        (Some(c), None) if !matches!(c, '|' | '&' | '~' | '_') => {
                            if ts.contains(&c) {
                                return Err(err(line_no, format!("terminal {c:?} repeated")));
                            }
                            ts.push(c)
                        }
                        _ => {
                            return Err(err(line_no, format!("bad terminal `{tok}`")));
                        }
                    }
                }
                declared = Some(ts);
            } else if let Some((lhs, rhs)) = line.split_once("->") {
                let head = lhs.trim();
                if head.is_empty()
                    || head.contains(char::is_whitespace)
                    || head.contains(['|', '&', '~'])
                    || head == "_"
                {
                    return Err(err(line_no, format!("bad rule head `{head}`")));
                }
                if !heads.iter().any(|h| h == head) {
                    heads.push(head.to_owned());
                }
                rule_lines.push((line_no, head.to_owned(), tokens(rhs)));
            } else {
                return Err(err(line_no, "expected `start:`, `terminals:` or a rule"));
            }
        }

        if rule_lines.is_empty() {
            return Err(err(0, "no rules"));
        }

        let mut terminals = declared.clone().unwrap_or_default();
        let mut rules = Vec::new();
        for (line_no, head, toks) in &rule_lines {
            let head_idx = heads.iter().position(|h| h == head).unwrap();
            for alt in toks.split(|t| t == "|") {
                let mut rule = Rule {
                    head: head_idx,
                    positive: Vec::new(),
                    negative: Vec::new(),
                };
                for conj in alt.split(|t| t == "&") {
                    let (neg, body_toks) = match conj.split_first() {
                        Some((first, rest)) if first == "~" => (true, rest),
                        _ => (false, conj),
                    };
                    if body_toks.is_empty() {
                        return Err(err(
                            *line_no,
                            "empty conjunct (write `_` for the empty string)",
                        ));
                    }
                    let mut body = Vec::new();
                    if body_toks.len() == 1 && body_toks[0] == "_" {
                        // empty string
                    } else {
                        for tok in body_toks {
                            if let Some(n) = heads.iter().position(|h| h == tok) {
                                body.push(Symbol::Nonterminal(n));
                                continue;
                            }
                            let mut cs = tok.chars();
                            let c = match (cs.next(), cs.next()) {
                                (Some(c), None) if !matches!(c, '~' | '_') => c,
                                _ => {
                                    return Err(err(
                                        *line_no,
                                        format!("`{tok}` is neither a nonterminal nor a terminal"),
                                    ))
                                }
                            };
                            let t = match terminals.iter().position(|&x| x == c) {
                                Some(t) => t,
                                None if declared.is_some() => {
                                    return Err(err(
                                        *line_no,
                                        format!("terminal {c:?} not declared"),
                                    ))
                                }
                                None => {
                                    terminals.push(c);
                                    terminals.len() - 1
                                }
                            };
                            body.push(Symbol::Terminal(t));
                        }
                    }
                    if neg {
                        rule.negative.push(body);
                    } else {
                        rule.positive.push(body);
                    }
                }
                rules.push(rule);
            }
        }

        let start_idx = match start {
            None => 0,
            Some((line_no, name)) => heads
                .iter()
                .position(|h| *h == name)
                .ok_or_else(|| err(line_no, format!("start symbol `{name}` has no rules")))?,
        };
        BooleanGrammar::new(terminals, heads, rules, start_idx)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn parses_alternatives_and_negation() {
        let g: BooleanGrammar =
            "# demo\nstart: S\nS -> A B&~D C\nA -> a A | _\nB -> b\nC -> c\nD -> d\n"
                .parse()
                .unwrap();
        assert_eq!(g.rule_count(), 6);
        assert_eq!(g.start_name(), "S");
        assert_eq!(g.terminals(), &['a', 'b', 'c', 'd']);
        let s = &g.rules()[0];
        assert_eq!(s.positive.len(), 1);
        assert_eq!(s.negative.len(), 1);
        assert_eq!(g.rules()[2].positive, vec![Vec::<Symbol>::new()]);
    }

    #[test]
    fn text_round_trip() {
        for name in super::super::BUILTIN_NAMES {
            let g = super::super::builtin(name).unwrap();
            let again: BooleanGrammar = g.to_text().parse().unwrap();
            assert_eq!(g, again, "{name}");
        }
    }

    #[test]
    fn multi_character_nonterminals() {
        let g: BooleanGrammar = "start: Top\nTop -> a Inner\nInner -> b | _\n"
            .parse()
            .unwrap();
        assert_eq!(g.nonterminals(), &["Top".to_string(), "Inner".to_string()]);
    }

    #[test]
    fn errors_carry_line_numbers() {
        let e = "S -> a\nS -> xy\n".parse::<BooleanGrammar>().unwrap_err();
        assert!(matches!(e, GrammarError::Parse { line: 2, .. }));
        let e = "start: T\nS -> a\n".parse::<BooleanGrammar>().unwrap_err();
        assert!(matches!(e, GrammarError::Parse { line: 1, .. }));
        let e = "terminals: a\nS -> b\n"
            .parse::<BooleanGrammar>()
            .unwrap_err();
        assert!(matches!(e, GrammarError::Parse { line: 2, .. }));
        assert!("S -> a & \n".parse::<BooleanGrammar>().is_err());
        assert!("hello\n".parse::<BooleanGrammar>().is_err());
    }
}
