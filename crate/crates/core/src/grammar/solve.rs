//! Bounded fixpoint semantics.
//!
//! Membership of a string depends only on its substrings. Strata are
//! processed by increasing length; within a stratum the nonterminals are
//! iterated jointly from all-false until the vector repeats. A repeat that is
//! not a fixpoint means the negations have no stable solution, which is
//! reported as [`GrammarError::Unstable`].

use std::cell::Cell;

use super::{BooleanGrammar, GrammarError, Symbol};

/// Upper bound on the number of strings [`solve_bounded`] will enumerate.
pub const MAX_UNIVERSE: u64 = 1 << 25;

fn is_terminal(s: &Symbol) -> bool {
    matches!(s, Symbol::Terminal(_))
}

/// Does `body` derive `w[s..e]`, given nonterminal membership `look(a, s, e)`?
fn matches_body<F>(body: &[Symbol], w: &[usize], mut s: usize, mut e: usize, look: &F) -> bool
where
    F: Fn(usize, usize, usize) -> bool,
{
    let mut body = body;
    while let Some((&Symbol::Terminal(t), init)) = body.split_last() {
        if e <= s || w[e - 1] != t {
            return false;
        }
        e -= 1;
        body = init;
    }
    while let Some((&Symbol::Terminal(t), rest)) = body.split_first() {
        if e <= s || w[s] != t {
            return false;
        }
        s += 1;
        body = rest;
    }
    match body.split_first() {
        None => s == e,
        Some((&Symbol::Nonterminal(a), [])) => look(a, s, e),
        Some((&Symbol::Nonterminal(a), rest)) => {
            let need = rest.iter().filter(|x| is_terminal(x)).count();
            if e - s < need {
                return false;
            }
            (s..=e - need).any(|mid| look(a, s, mid) && matches_body(rest, w, mid, e, look))
        }
        Some((&Symbol::Terminal(_), _)) => unreachable!("leading terminals were stripped"),
    }
}

pub(crate) struct Engine<'g> {
    g: &'g BooleanGrammar,
    by_head: Vec<Vec<usize>>,
}

impl<'g> Engine<'g> {
    pub(crate) fn new(g: &'g BooleanGrammar) -> Self {
        let mut by_head = vec![Vec::new(); g.nonterminals.len()];
        for (k, r) in g.rules.iter().enumerate() {
            by_head[r.head].push(k);
        }
        Self { g, by_head }
    }

    fn eval<F>(&self, a: usize, w: &[usize], s: usize, e: usize, look: &F) -> bool
    where
        F: Fn(usize, usize, usize) -> bool,
    {
        self.by_head[a].iter().any(|&k| {
            let rule = &self.g.rules[k];
            rule.positive.iter().all(|b| matches_body(b, w, s, e, look))
                && !rule.negative.iter().any(|b| matches_body(b, w, s, e, look))
        })
    }

    /// Membership vector for the range `w[s..e]`, given `shorter` for every
    /// strictly shorter range. On oscillation returns the first nonterminal
    /// whose value keeps changing.
    pub(crate) fn solve_range<F>(
        &self,
        w: &[usize],
        s: usize,
        e: usize,
        shorter: &F,
    ) -> Result<Vec<bool>, usize>
    where
        F: Fn(usize, usize, usize) -> bool,
    {
        let n = self.by_head.len();
        let mut cur = vec![false; n];
        let mut seen: Vec<Vec<bool>> = Vec::new();
        loop {
            let same = Cell::new(false);
            let next: Vec<bool> = {
                let cur = &cur;
                let look = |b: usize, ss: usize, ee: usize| {
                    if ss == s && ee == e {
                        same.set(true);
                        cur[b]
                    } else {
                        shorter(b, ss, ee)
                    }
                };
                (0..n).map(|a| self.eval(a, w, s, e, &look)).collect()
            };
            if !same.get() || next == cur {
                return Ok(next);
            }
            if seen.contains(&next) {
                let a = (0..n).find(|&a| next[a] != cur[a]).unwrap_or(0);
                return Err(a);
            }
            seen.push(std::mem::replace(&mut cur, next));
        }
    }
}

fn unstable(g: &BooleanGrammar, a: usize, w: &[usize]) -> GrammarError {
    GrammarError::Unstable {
        nonterminal: g.nonterminals[a].clone(),
        length: w.len(),
        string: w.iter().map(|&t| g.terminals[t]).collect(),
    }
}

fn to_indices(g: &BooleanGrammar, input: &str) -> Option<Vec<usize>> {
    input.chars().map(|c| g.terminal(c)).collect()
}

/// Membership of every nonterminal on every substring of one input.
struct SubstringTable {
    n: usize,
    len: usize,
    data: Vec<bool>,
}

impl SubstringTable {
    fn slot(&self, a: usize, s: usize, e: usize) -> usize {
        ((e - s) * (self.len + 1) + s) * self.n + a
    }

    fn build(g: &BooleanGrammar, w: &[usize]) -> Result<Self, GrammarError> {
        let n = g.nonterminals.len();
        let len = w.len();
        let mut table = Self {
            n,
            len,
            data: vec![false; (len + 1) * (len + 1) * n],
        };
        let engine = Engine::new(g);
        for l in 0..=len {
            for s in 0..=len - l {
                let e = s + l;
                let row = {
                    let t = &table;
                    let shorter = |a: usize, ss: usize, ee: usize| t.data[t.slot(a, ss, ee)];
                    engine
                        .solve_range(w, s, e, &shorter)
                        .map_err(|a| unstable(g, a, &w[s..e]))?
                };
                let base = table.slot(0, s, e);
                table.data[base..base + n].copy_from_slice(&row);
            }
        }
        Ok(table)
    }
}

/// Whether the start symbol generates `input`. Symbols outside the grammar's
/// alphabet make the answer `false`.
pub fn recognize(g: &BooleanGrammar, input: &str) -> Result<bool, GrammarError> {
    let Some(w) = to_indices(g, input) else {
        return Ok(false);
    };
    let table = SubstringTable::build(g, &w)?;
    Ok(table.data[table.slot(g.start, 0, w.len())])
}

/// [`recognize`] restricted to linear grammars, where every conjunct is
/// matched in constant time per substring.
pub fn recognize_linear(g: &BooleanGrammar, input: &str) -> Result<bool, GrammarError> {
    if let Some(rule) = g.first_nonlinear_rule() {
        return Err(GrammarError::NotLinear { rule });
    }
    recognize(g, input)
}

/// Languages of all nonterminals, restricted to strings of length at most
/// `max_len`.
#[derive(Clone, Debug)]
pub struct BoundedLanguage {
    terminals: Vec<char>,
    nonterminals: Vec<String>,
    start: usize,
    max_len: usize,
    /// `levels[l][x * n + a]`: string number `x` of length `l` (base-|Σ|,
    /// most significant symbol first) belongs to nonterminal `a`.
    levels: Vec<Vec<bool>>,
}

fn universe_size(k: u64, max_len: usize) -> Option<u64> {
    let mut total: u64 = 1;
    let mut level: u64 = 1;
    for _ in 0..max_len.min(if k == 0 { 0 } else { usize::MAX }) {
        level = level.checked_mul(k)?;
        total = total.checked_add(level)?;
    }
    Some(total)
}

pub fn solve_bounded(g: &BooleanGrammar, max_len: usize) -> Result<BoundedLanguage, GrammarError> {
    let k = g.terminals.len();
    let n = g.nonterminals.len();
    match universe_size(k as u64, max_len) {
        Some(total) if total <= MAX_UNIVERSE => {}
        other => {
            return Err(GrammarError::UniverseTooLarge {
                strings: other.unwrap_or(u64::MAX),
                limit: MAX_UNIVERSE,
            })
        }
    }
    let engine = Engine::new(g);
    let mut levels: Vec<Vec<bool>> = Vec::with_capacity(max_len + 1);
    let mut pow = vec![1usize; max_len + 1];
    for l in 1..=max_len {
        pow[l] = pow[l - 1] * k;
    }
    let mut w = vec![0usize; max_len];
    let mut prefix = vec![0usize; max_len + 1];
    for l in 0..=max_len {
        let count = if k == 0 && l > 0 { 0 } else { pow[l] };
        let mut level = vec![false; count * n];
        for x in 0..count {
            let mut rest = x;
            for p in (0..l).rev() {
                w[p] = rest % k.max(1);
                rest /= k.max(1);
            }
            for p in 0..l {
                prefix[p + 1] = prefix[p] * k + w[p];
            }
            let row = {
                let levels = &levels;
                let pow = &pow;
                let prefix = &prefix;
                let shorter = |a: usize, s: usize, e: usize| {
                    let idx = prefix[e] - prefix[s] * pow[e - s];
                    levels[e - s][idx * n + a]
                };
                engine
                    .solve_range(&w[..l], 0, l, &shorter)
                    .map_err(|a| unstable(g, a, &w[..l]))?
            };
            level[x * n..(x + 1) * n].copy_from_slice(&row);
        }
        levels.push(level);
    }
    Ok(BoundedLanguage {
        terminals: g.terminals.clone(),
        nonterminals: g.nonterminals.clone(),
        start: g.start,
        max_len,
        levels,
    })
}

impl BoundedLanguage {
    pub fn max_len(&self) -> usize {
        self.max_len
    }

    pub fn nonterminals(&self) -> &[String] {
        &self.nonterminals
    }

    fn index_of(&self, w: &str) -> Option<(usize, usize)> {
        let k = self.terminals.len();
        let mut x = 0usize;
        let mut l = 0usize;
        for c in w.chars() {
            x = x * k + self.terminals.iter().position(|&t| t == c)?;
            l += 1;
        }
        (l <= self.max_len).then_some((l, x))
    }

    /// Membership of `w` in the language of nonterminal `a`; `None` if `w`
    /// is longer than the bound. Foreign symbols give `Some(false)`.
    pub fn contains_at(&self, a: usize, w: &str) -> Option<bool> {
        if w.chars().count() > self.max_len {
            return None;
        }
        Some(match self.index_of(w) {
            Some((l, x)) => self.levels[l][x * self.nonterminals.len() + a],
            None => false,
        })
    }

    pub fn contains(&self, nonterminal: &str, w: &str) -> Option<bool> {
        let a = self.nonterminals.iter().position(|n| n == nonterminal)?;
        self.contains_at(a, w)
    }

    pub fn accepts(&self, w: &str) -> Option<bool> {
        self.contains_at(self.start, w)
    }

    fn decode(&self, l: usize, mut x: usize) -> String {
        let k = self.terminals.len();
        let mut out = vec![' '; l];
        for p in (0..l).rev() {
            out[p] = self.terminals[x % k];
            x /= k;
        }
        out.into_iter().collect()
    }

    /// Members of nonterminal `a`, shortest first, then in alphabet order.
    pub fn members_at(&self, a: usize) -> Vec<String> {
        let n = self.nonterminals.len();
        let mut out = Vec::new();
        for (l, level) in self.levels.iter().enumerate() {
            for x in 0..level.len() / n {
                if level[x * n + a] {
                    out.push(self.decode(l, x));
                }
            }
        }
        out
    }

    pub fn members(&self) -> Vec<String> {
        self.members_at(self.start)
    }

    pub fn count_at(&self, a: usize) -> usize {
        let n = self.nonterminals.len();
        self.levels
            .iter()
            .map(|level| level.iter().skip(a).step_by(n).filter(|&&b| b).count())
            .sum()
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn g(text: &str) -> BooleanGrammar {
        text.parse().unwrap()
    }

    #[test]
    fn context_free_balanced() {
        let gr = g("S -> a S b | _\n");
        let lang = solve_bounded(&gr, 8).unwrap();
        assert_eq!(lang.members(), vec!["", "ab", "aabb", "aaabbb", "aaaabbbb"]);
        assert!(recognize(&gr, "aaabbb").unwrap());
        assert!(!recognize(&gr, "aabbb").unwrap());
        assert!(!recognize(&gr, "abx").unwrap());
        assert_eq!(lang.contains("S", "ab"), Some(true));
        assert_eq!(lang.accepts("aaaaabbbbb"), None);
    }

    #[test]
    fn positive_cycles_take_the_least_fixpoint() {
        let gr = g("S -> S | A\nA -> A a | a\n");
        let lang = solve_bounded(&gr, 4).unwrap();
        assert_eq!(lang.members(), vec!["a", "aa", "aaa", "aaaa"]);
    }

    #[test]
    fn same_length_dependencies_through_empty_parts() {
        // S matches A B with B empty, so S depends on A at the same length.
        let gr = g("S -> A B & ~C\nA -> a A | a\nB -> _\nC -> a a\n");
        let lang = solve_bounded(&gr, 4).unwrap();
        assert_eq!(lang.members(), vec!["a", "aaa", "aaaa"]);
    }

    #[test]
    fn self_negation_is_unstable() {
        let gr = g("terminals: a\nS -> ~S\n");
        let err = solve_bounded(&gr, 2).unwrap_err();
        assert_eq!(
            err,
            GrammarError::Unstable {
                nonterminal: "S".into(),
                length: 0,
                string: String::new()
            }
        );
        assert!(matches!(
            recognize(&gr, "a"),
            Err(GrammarError::Unstable { .. })
        ));
    }

    #[test]
    fn negation_of_shorter_strings_is_fine() {
        // S: strings of a whose length is not one more than a member.
        let gr = g("S -> ~a S\n");
        let lang = solve_bounded(&gr, 5).unwrap();
        assert_eq!(lang.members(), vec!["", "aa", "aaaa"]);
    }

    #[test]
    fn linear_precheck() {
        let gr = g("S -> A A\nA -> a\n");
        assert_eq!(
            recognize_linear(&gr, "aa"),
            Err(GrammarError::NotLinear { rule: 0 })
        );
        assert!(recognize(&gr, "aa").unwrap());
    }

    #[test]
    fn universe_guard() {
        let gr = g("terminals: a b c d\nS -> a\n");
        assert!(matches!(
            solve_bounded(&gr, 40),
            Err(GrammarError::UniverseTooLarge { .. })
        ));
    }

    #[test]
    fn bounded_and_substring_engines_agree() {
        let gr = g("S -> A b S & ~C S | _\nA -> a A | _\nC -> a C A b | b\n");
        let lang = solve_bounded(&gr, 8).unwrap();
        for w in lang.members() {
            assert!(recognize(&gr, &w).unwrap(), "{w}");
        }
        assert_eq!(
            lang.count_at(0),
            (0..=8usize)
                .flat_map(|l| (0..1usize << l).map(move |x| (l, x)))
                .filter(|&(l, x)| {
                    let w: String = (0..l)
                        .map(|p| if x >> (l - 1 - p) & 1 == 1 { 'b' } else { 'a' })
                        .collect();
                    recognize(&gr, &w).unwrap()
                })
                .count()
        );
    }
}
