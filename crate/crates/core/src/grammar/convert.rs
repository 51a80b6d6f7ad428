//! Trellis automaton to linear conjunctive grammar: a nonterminal `A_q` per
//! state generating the strings the automaton maps to `q`.

use crate::automaton::{StateId, TrellisAutomaton};

use super::{BooleanGrammar, Rule, Symbol};

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq)]
pub enum Conversion {
    /// Rules `A_q -> b A_q'' & A_q' c` for every specified transition and
    /// every pair of letters.
    Literal,
    /// As [`Conversion::Literal`], minus rules that can never apply because
    /// no string of state `q'` begins with `b` or none of `q''` ends with `c`.
    #[default]
    Trimmed,
}

/// Letters that can begin (`first`) or end (`last`) a string evaluating to
/// each state. Over-approximate: left and right arguments are combined
/// independently.
fn edge_letters(m: &TrellisAutomaton) -> (Vec<Vec<bool>>, Vec<Vec<bool>>) {
    let k = m.alphabet().len();
    let n = m.state_count();
    let mut first = vec![vec![false; k]; n];
    let mut last = vec![vec![false; k]; n];
    for (i, &c) in m.alphabet().iter().enumerate() {
        let q = m.init(c).expect("symbol in alphabet").0;
        first[q][i] = true;
        last[q][i] = true;
    }
    let transitions: Vec<_> = m.transitions().collect();
    let mut changed = true;
    while changed {
        changed = false;
        for &(l, r, q) in &transitions {
            for i in 0..k {
                if first[l.0][i] && !first[q.0][i] && last[r.0].iter().any(|&x| x) {
                    first[q.0][i] = true;
                    changed = true;
                }
                if last[r.0][i] && !last[q.0][i] && first[l.0].iter().any(|&x| x) {
                    last[q.0][i] = true;
                    changed = true;
                }
            }
        }
    }
    (first, last)
}

/// Linear conjunctive grammar for the language of `m`. With one final state
/// its nonterminal is the start symbol; otherwise a fresh `S` derives each
/// final nonterminal.
pub fn ta_to_grammar(m: &TrellisAutomaton, conversion: Conversion) -> BooleanGrammar {
    let terminals = m.alphabet().to_vec();
    let mut nonterminals: Vec<String> = m.states().iter().map(|q| format!("A_{q}")).collect();
    let nt = |q: StateId| Symbol::Nonterminal(q.0);
    let mut rules = Vec::new();

    let (first, last) = edge_letters(m);
    for (l, r, q) in m.transitions() {
        for (b, &b_starts) in first[l.0].iter().enumerate() {
            for (c, &c_ends) in last[r.0].iter().enumerate() {
                if conversion == Conversion::Trimmed && !(b_starts && c_ends) {
                    continue;
                }
                rules.push(Rule {
                    head: q.0,
                    positive: vec![
                        vec![Symbol::Terminal(b), nt(r)],
                        vec![nt(l), Symbol::Terminal(c)],
                    ],
                    negative: vec![],
                });
            }
        }
    }
    for (i, &c) in terminals.iter().enumerate() {
        let q = m.init(c).expect("symbol in alphabet");
        rules.push(Rule {
            head: q.0,
            positive: vec![vec![Symbol::Terminal(i)]],
            negative: vec![],
        });
    }

    let start = match m.finals() {
        [only] => only.0,
        finals => {
            let s = nonterminals.len();
            nonterminals.push("S".to_owned());
            for &f in finals {
                rules.push(Rule {
                    head: s,
                    positive: vec![vec![nt(f)]],
                    negative: vec![],
                });
            }
            s
        }
    };
    BooleanGrammar::new(terminals, nonterminals, rules, start)
        .expect("conversion of a valid automaton is a valid grammar")
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::grammar::{recognize_linear, solve_bounded};

    fn one_state() -> TrellisAutomaton {
        "trellis-automaton v1\nalphabet: a\nstates: q\ninit: a -> q\ndelta: q q -> q\nfinal: q\n"
            .parse()
            .unwrap()
    }

    #[test]
    fn one_state_automaton_gives_a_plus() {
        let g = ta_to_grammar(&one_state(), Conversion::Literal);
        assert_eq!(g.nonterminals(), &["A_q".to_string()]);
        assert_eq!(g.rule_count(), 2);
        assert!(g.is_linear_conjunctive());
        let lang = solve_bounded(&g, 5).unwrap();
        assert_eq!(lang.members(), vec!["a", "aa", "aaa", "aaaa", "aaaaa"]);
    }

    #[test]
    fn several_finals_get_a_fresh_start() {
        let m: TrellisAutomaton = "trellis-automaton v1\nalphabet: a b\nstates: p q\n\
             init: a -> p\ninit: b -> q\ndelta: p q -> q\ndelta: q p -> p\nfinal: p q\n"
            .parse()
            .unwrap();
        for conv in [Conversion::Literal, Conversion::Trimmed] {
            let g = ta_to_grammar(&m, conv);
            assert_eq!(g.start_name(), "S");
            assert_eq!(g.nonterminals().len(), 3);
            for w in ["a", "b", "ab", "ba", "aa", "abab", "abba"] {
                assert_eq!(
                    recognize_linear(&g, w).unwrap(),
                    m.accepts(w).unwrap_or(false),
                    "{w}"
                );
            }
        }
    }

    #[test]
    fn size_bound() {
        let m = crate::eleven_state::build();
        let (n, k) = (m.state_count(), m.alphabet().len());
        for conv in [Conversion::Literal, Conversion::Trimmed] {
            let g = ta_to_grammar(&m, conv);
            assert!(g.is_linear_conjunctive());
            assert!(g.nonterminals().len() <= n + 1);
            assert!(g.rule_count() <= k * k * n * n + k + n);
        }
        assert_eq!(
            ta_to_grammar(&m, Conversion::Literal).rule_count(),
            4 * 50 + 2
        );
        let trimmed = ta_to_grammar(&m, Conversion::Trimmed);
        assert_eq!(trimmed.rule_count(), 172);
    }
}
