//! The equation `X = complement(a*bX) ∩ complement(L0 X)` over `{a,b}`,
//! solved on a bounded universe.

use std::collections::HashSet;

use crate::encoding::in_l0_bytes;

use super::{builtin, solve_bounded};

fn in_a_star_b(p: &[u8]) -> bool {
    matches!(p.split_last(), Some((b'b', rest)) if rest.iter().all(|&c| c == b'a'))
}

fn strings_of_length(l: usize) -> impl Iterator<Item = Vec<u8>> {
    (0..1usize << l).map(move |x| {
        (0..l)
            .map(|p| {
                if x >> (l - 1 - p) & 1 == 1 {
                    b'b'
                } else {
                    b'a'
                }
            })
            .collect()
    })
}

/// Whether the right-hand side of the equation contains `w`, given
/// membership of its proper suffixes.
fn rhs(w: &[u8], member: impl Fn(&[u8]) -> bool) -> bool {
    (1..=w.len()).all(|cut| {
        let (p, s) = w.split_at(cut);
        !(member(s) && (in_a_star_b(p) || in_l0_bytes(p)))
    })
}

/// Members of the solution with length at most `max_len`, shortest first.
pub fn equation2_solution(max_len: usize) -> Vec<String> {
    // levels[l][x]: string number x of length l (a = 0, b = 1).
    let mut levels: Vec<Vec<bool>> = Vec::with_capacity(max_len + 1);
    for l in 0..=max_len {
        let level: Vec<bool> = strings_of_length(l)
            .map(|w| {
                rhs(&w, |s| {
                    let x = s
                        .iter()
                        .fold(0usize, |acc, &c| acc * 2 + usize::from(c == b'b'));
                    levels[s.len()][x]
                })
            })
            .collect();
        levels.push(level);
    }
    levels
        .iter()
        .enumerate()
        .flat_map(|(l, level)| {
            strings_of_length(l)
                .zip(level)
                .filter(|(_, &m)| m)
                .map(|(w, _)| String::from_utf8(w).unwrap())
        })
        .collect()
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Equation2Report {
    pub max_len: usize,
    pub members: usize,
    /// The computed set satisfies the equation on every string of the universe.
    pub fixpoint: bool,
    /// The computed set equals the start language of the `boolean-5rule` grammar.
    pub agrees: bool,
    /// First string, shortest first, where a check failed.
    pub counterexample: Option<String>,
}

impl Equation2Report {
    pub fn passed(&self) -> bool {
        self.fixpoint && self.agrees
    }
}

pub fn check_equation2(max_len: usize) -> Equation2Report {
    let solution = equation2_solution(max_len);
    let set: HashSet<&[u8]> = solution.iter().map(|w| w.as_bytes()).collect();
    let grammar = builtin("boolean-5rule").expect("builtin exists");
    let lang = solve_bounded(&grammar, max_len).expect("the 5-rule grammar is stable");

    let mut fixpoint = true;
    let mut agrees = true;
    let mut counterexample = None;
    for l in 0..=max_len {
        for w in strings_of_length(l) {
            let inside = set.contains(w.as_slice());
            let fix_ok = rhs(&w, |s| set.contains(s)) == inside;
            let text = String::from_utf8(w).unwrap();
            let agree_ok = lang.accepts(&text) == Some(inside);
            if !(fix_ok && agree_ok) {
                fixpoint &= fix_ok;
                agrees &= agree_ok;
                counterexample.get_or_insert(text);
            }
        }
    }
    Equation2Report {
        max_len,
        members: solution.len(),
        fixpoint,
        agrees,
        counterexample,
    }
}
