//! An 11-state trellis automaton over `{a, b}` deciding the value of a
//! sequential NOR circuit from its v2 encoding.
//!
//! On a valid description the work-space suffix `b^n` spawns one diagonal per
//! gate. Each diagonal starts as `?` and receives the gate value once the gate
//! description `b a^j` has been matched against the diagonal of gate `j`.
//! The states are
//!
//! | glyph | state         | meaning                                          |
//! |-------|---------------|--------------------------------------------------|
//! | `?`   | `Question`    | gate value not computed yet                      |
//! | `x`   | `Plain(x)`    | propagated gate value                            |
//! | `x<`  | `Left(x)`     | value on the vertical line that counts the `a`s  |
//! | `x>`  | `Right(x)`    | value left of that line                          |
//! | `xm`  | `Mem(x, m)`   | value `x` carrying the looked-up value `m`       |
//!
//! Inputs that are not valid descriptions carry no contract.

use std::fmt;

use crate::automaton::{Mode, StateId, TrellisAutomaton};
use crate::circuit::SequentialNorCircuit;
use crate::encoding::encode_v2;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum GateState {
    Question,
    Plain(bool),
    Left(bool),
    Right(bool),
    Mem(bool, bool),
}

use GateState::*;

/// States in transition-table order.
pub const STATES: [GateState; 11] = [
    Question,
    Plain(false),
    Plain(true),
    Right(false),
    Right(true),
    Left(false),
    Left(true),
    Mem(false, false),
    Mem(false, true),
    Mem(true, false),
    Mem(true, true),
];

fn bit(v: bool) -> char {
    if v {
        '1'
    } else {
        '0'
    }
}

impl GateState {
    /// Name used in the automaton text format; also the rendering glyph.
    pub fn name(self) -> String {
        match self {
            Question => "?".into(),
            Plain(v) => bit(v).to_string(),
            Left(v) => format!("{}<", bit(v)),
            Right(v) => format!("{}>", bit(v)),
            Mem(v, m) => format!("{}{}", bit(v), bit(m)),
        }
    }

    pub fn from_name(name: &str) -> Option<Self> {
        STATES.iter().copied().find(|s| s.name() == name)
    }

    pub fn id(self) -> StateId {
        StateId(STATES.iter().position(|&s| s == self).unwrap())
    }

    pub fn from_id(id: StateId) -> Option<Self> {
        STATES.get(id.0).copied()
    }

    /// One-line meaning, used in rendering legends.
    pub fn describe(self) -> String {
        match self {
            Question => "no gate value".into(),
            Plain(v) => format!("gate value {}", u8::from(v)),
            Left(v) => format!("gate value {}, left-moving", u8::from(v)),
            Right(v) => format!("gate value {}, right-moving", u8::from(v)),
            Mem(v, m) => format!("gate value {}, remembering {}", u8::from(v), u8::from(m)),
        }
    }

    /// The gate value carried by the state, if any.
    pub fn value(self) -> Option<bool> {
        match self {
            Question => None,
            Plain(v) | Left(v) | Right(v) | Mem(v, _) => Some(v),
        }
    }
}

impl fmt::Display for GateState {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.name())
    }
}

/// [`GateState::describe`] for every state, in [`STATES`] order.
pub fn descriptions() -> Vec<String> {
    STATES.iter().map(|s| s.describe()).collect()
}

/// The transition table, rows = left argument, columns = right argument,
/// both in [`STATES`] order. Empty cells are unspecified.
const TABLE: [[&str; 11]; 11] = [
    // ?     0     1     0>    1>    0<    1<    00    01    10    11
    ["?", "", "", "", "", "", "", "", "", "", ""],
    ["?", "0", "1", "0", "1", "00", "11", "0", "0", "1", "1"],
    ["?", "0", "", "0", "", "00", "", "0", "0", "", ""],
    ["1<", "0<", "1<", "0>", "1>", "0>", "1>", "", "", "", "1<"],
    ["", "0<", "", "0>", "", "0>", "", "", "", "", ""],
    ["?", "0", "1", "0<", "1", "?", "11", "", "", "", ""],
    ["?", "0", "", "", "", "", "", "0", "0", "", ""],
    ["1", "00", "10", "", "", "", "", "", "", "", ""],
    ["0", "01", "11", "", "", "", "", "", "", "", ""],
    ["0", "00", "", "", "", "", "", "", "", "", ""],
    ["0", "01", "", "", "", "", "", "", "", "", ""],
];

/// The transition table as `(left, right, target)` triples.
pub fn table() -> Vec<(GateState, GateState, GateState)> {
    let mut out = Vec::new();
    for (row, cells) in TABLE.iter().enumerate() {
        for (col, cell) in cells.iter().enumerate() {
            if !cell.is_empty() {
                let target = GateState::from_name(cell).expect("table cells name states");
                out.push((STATES[row], STATES[col], target));
            }
        }
    }
    out
}

/// States carrying value 1. No two of them ever meet in a transition on a
/// valid description, since no circuit has two consecutive gates with value 1.
pub const ONES: [GateState; 5] = [
    Plain(true),
    Right(true),
    Left(true),
    Mem(true, false),
    Mem(true, true),
];

/// All 25 pairs of value-1 states.
pub fn forbidden_pairs() -> Vec<(GateState, GateState)> {
    ONES.iter()
        .flat_map(|&l| ONES.iter().map(move |&r| (l, r)))
        .collect()
}

/// A named group of transitions sharing one rule shape.
#[derive(Clone, Debug)]
pub struct Family {
    pub rule: &'static str,
    pub entries: Vec<(GateState, GateState, GateState)>,
}

const BITS: [bool; 2] = [false, true];

fn family(
    rule: &'static str,
    entries: impl IntoIterator<Item = (GateState, GateState, GateState)>,
) -> Family {
    Family {
        rule,
        entries: entries.into_iter().collect(),
    }
}

fn pairs() -> impl Iterator<Item = (bool, bool)> + Clone {
    BITS.iter().flat_map(|&k| BITS.iter().map(move |&l| (k, l)))
}

/// The transitions grouped by the role they play, before removing the
/// combinations of two value-1 states.
pub fn transition_families() -> Vec<Family> {
    let triples = || {
        BITS.iter()
            .flat_map(|&k| pairs().map(move |(l, m)| (k, l, m)))
    };
    vec![
        // Vertical line counting the `a`s of a gate description.
        family(
            "(k>, l) -> l<",
            pairs().map(|(k, l)| (Right(k), Plain(l), Left(l))),
        ),
        family(
            "(0>, 11) -> 1<",
            [(Right(false), Mem(true, true), Left(true))],
        ),
        // Left of the vertical line.
        family(
            "(k>, l>) -> l>",
            pairs().map(|(k, l)| (Right(k), Right(l), Right(l))),
        ),
        family(
            "(k>, l<) -> l>",
            pairs().map(|(k, l)| (Right(k), Left(l), Right(l))),
        ),
        // Right of the vertical line.
        family(
            "(k<, l) -> l",
            pairs().map(|(k, l)| (Left(k), Plain(l), Plain(l))),
        ),
        family(
            "(k, l) -> l",
            pairs().map(|(k, l)| (Plain(k), Plain(l), Plain(l))),
        ),
        // Upper-left border of a gate computation.
        family("(0<, 1>) -> 1", [(Left(false), Right(true), Plain(true))]),
        family(
            "(k, l>) -> l",
            pairs().map(|(k, l)| (Plain(k), Right(l), Plain(l))),
        ),
        family(
            "(k, l<) -> ll",
            pairs().map(|(k, l)| (Plain(k), Left(l), Mem(l, l))),
        ),
        family(
            "(kl, m) -> ml",
            triples().map(|(k, l, m)| (Mem(k, l), Plain(m), Mem(m, l))),
        ),
        family(
            "(kl, ?) -> nor(k, l)",
            pairs().map(|(k, l)| (Mem(k, l), Question, Plain(!(k || l)))),
        ),
        family(
            "(0<, 1<) -> 11",
            [(Left(false), Left(true), Mem(true, true))],
        ),
        // Lower-right border.
        family(
            "(1<, 0k) -> 0",
            BITS.map(|k| (Left(true), Mem(false, k), Plain(false))),
        ),
        family(
            "(k, lm) -> l",
            triples().map(|(k, l, m)| (Plain(k), Mem(l, m), Plain(l))),
        ),
        // Initialisation: gate blocks, question marks, gates 1 and 2.
        family("(0<, 0>) -> 0<", [(Left(false), Right(false), Left(false))]),
        family("(0<, 0<) -> ?", [(Left(false), Left(false), Question)]),
        family(
            "(q, ?) -> ?",
            [Question, Plain(false), Plain(true)].map(|q| (q, Question, Question)),
        ),
        // Keeps the `?` diagonal alive across the block of a gate that
        // references its direct predecessor.
        family("(0<, ?) -> ?", [(Left(false), Question, Question)]),
        family("(0>, ?) -> 1<", [(Right(false), Question, Left(true))]),
        family("(1<, ?) -> ?", [(Left(true), Question, Question)]),
    ]
}

/// A disagreement between [`transition_families`] and the table.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum FamilyDiscrepancy {
    /// Two families assign different targets to one pair.
    Conflict {
        pair: (GateState, GateState),
        first: GateState,
        second: GateState,
    },
    /// A family entry outside the forbidden pairs that the table lacks or
    /// maps elsewhere.
    TableDiffers {
        pair: (GateState, GateState),
        family: GateState,
        table: Option<GateState>,
    },
    /// A table entry no family produces.
    Unexplained {
        pair: (GateState, GateState),
        table: GateState,
    },
}

/// Outcome of comparing the families with the table.
#[derive(Clone, Debug, Default)]
pub struct FamilyCheck {
    /// Distinct pairs defined by the families.
    pub family_pairs: usize,
    /// Family pairs dropped because both arguments carry value 1.
    pub removed: usize,
    pub discrepancies: Vec<FamilyDiscrepancy>,
}

pub fn cross_check_families() -> FamilyCheck {
    use std::collections::BTreeMap;
    let mut defined: BTreeMap<(GateState, GateState), GateState> = BTreeMap::new();
    let mut check = FamilyCheck::default();
    for fam in transition_families() {
        for (l, r, t) in fam.entries {
            if let Some(&prev) = defined.get(&(l, r)) {
                if prev != t {
                    check.discrepancies.push(FamilyDiscrepancy::Conflict {
                        pair: (l, r),
                        first: prev,
                        second: t,
                    });
                }
                continue;
            }
            defined.insert((l, r), t);
        }
    }
    check.family_pairs = defined.len();
    let forbidden = forbidden_pairs();
    let table: BTreeMap<_, _> = table().into_iter().map(|(l, r, t)| ((l, r), t)).collect();
    for (&pair, &t) in &defined {
        if forbidden.contains(&pair) {
            check.removed += 1;
            if table.contains_key(&pair) {
                check.discrepancies.push(FamilyDiscrepancy::TableDiffers {
                    pair,
                    family: t,
                    table: table.get(&pair).copied(),
                });
            }
            continue;
        }
        let entry = table.get(&pair).copied();
        if entry != Some(t) {
            check.discrepancies.push(FamilyDiscrepancy::TableDiffers {
                pair,
                family: t,
                table: entry,
            });
        }
    }
    for (&pair, &t) in &table {
        if !defined.contains_key(&pair) {
            check
                .discrepancies
                .push(FamilyDiscrepancy::Unexplained { pair, table: t });
        }
    }
    check
}

/// Builds the automaton from the transition table.
///
/// # Panics
///
/// If the table and the transition families disagree.
pub fn build() -> TrellisAutomaton {
    let check = cross_check_families();
    assert!(
        check.discrepancies.is_empty(),
        "transition table disagrees with its families: {:?}",
        check.discrepancies
    );
    let mut delta = vec![None; STATES.len() * STATES.len()];
    for (l, r, t) in table() {
        delta[l.id().0 * STATES.len() + r.id().0] = Some(t.id());
    }
    TrellisAutomaton::new(
        vec!['a', 'b'],
        STATES.iter().map(|s| s.name()).collect(),
        vec![Right(false).id(), Left(false).id()],
        delta,
        vec![Plain(true).id()],
    )
    .expect("the table is well-formed")
}

/// Which part of the correctness argument a violation refers to.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Claim {
    /// `Δ(w b^i)` carries `x_i`, and `Δ(w b^n) = x_n`.
    GateDiagonal,
    /// `Δ(u w b^n)` carries `x_n`.
    Propagation,
    /// `Δ(a^i w b^j)` is `x_j>`, `x_j<` or `x_j` as `j <, =, > i`.
    Seek,
    /// `Δ(b a^i w b^j)` is `x_j` for `j < i`, else `Mem(x_j, x_i)`.
    Lookup,
    /// An unspecified transition was consulted.
    Strict,
}

impl fmt::Display for Claim {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let s = match self {
            Claim::GateDiagonal => "i",
            Claim::Propagation => "ii",
            Claim::Seek => "iii",
            Claim::Lookup => "iv",
            Claim::Strict => "strict",
        };
        f.write_str(s)
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Violation {
    pub claim: Claim,
    pub start: usize,
    pub length: usize,
    pub expected: Vec<GateState>,
    pub actual: Option<GateState>,
}

/// Result of [`check_lemma`].
#[derive(Clone, Debug)]
pub struct LemmaReport {
    pub circuit: SequentialNorCircuit,
    pub encoding: String,
    /// Number of cells compared against an expected state set.
    pub checked: usize,
    pub apex: GateState,
    pub violations: Vec<Violation>,
}

impl LemmaReport {
    pub fn conforms(&self) -> bool {
        self.violations.is_empty()
    }
}

/// Runs the automaton on the encoding of `circuit` and checks the state of
/// every substring that has a prescribed value.
///
/// Every prefix circuit `C1..Ck` (`2 <= k <= n`) has its own description
/// `w_k b^k` inside the encoding: `w_k` runs from the block of gate `k` to the
/// `b a b` before the work space. For each `k` the checked substrings are
/// `w_k b^i`, `u w_k b^k` for every `u` preceding `w_k`, and `a^i w_k b^j`,
/// `b a^i w_k b^j` wherever these occur (`1 <= i < k`, `1 <= j <= k`).
pub fn check_lemma(automaton: &TrellisAutomaton, circuit: &SequentialNorCircuit) -> LemmaReport {
    let encoding = encode_v2(circuit);
    let trellis = automaton
        .run(&encoding, Mode::Lenient)
        .expect("a valid description is over the automaton's alphabet");
    let state =
        |start: usize, end: usize| trellis.get(start, end - start).and_then(GateState::from_id);
    let x = circuit.evaluate();
    let n = circuit.gates();
    let bytes = encoding.as_bytes();
    // End of the `bab` before the work space.
    let w_end = bytes.len() - n;

    let mut violations: Vec<Violation> = trellis
        .fired_unspecified()
        .iter()
        .map(|f| Violation {
            claim: Claim::Strict,
            start: f.start,
            length: f.length,
            expected: Vec::new(),
            actual: None,
        })
        .collect();
    let mut checked = 0;
    let mut expect = |claim: Claim, start: usize, end: usize, allowed: &[GateState]| {
        checked += 1;
        let actual = state(start, end);
        if !actual.is_some_and(|s| allowed.contains(&s)) {
            violations.push(Violation {
                claim,
                start,
                length: end - start,
                expected: allowed.to_vec(),
                actual,
            });
        }
    };

    // Start of w_k, for k = n down to 2.
    let mut w_start = 0;
    for k in (2..=n).rev() {
        if k < n {
            w_start += 1 + circuit.second_arg(k + 1).unwrap();
        }
        for i in 1..=k {
            let v = x.get(i);
            let allowed: &[GateState] = if i == k {
                &[Plain(v)]
            } else {
                &[Plain(v), Mem(v, false), Mem(v, true)]
            };
            expect(Claim::GateDiagonal, w_start, w_end + i, allowed);
        }
        let xk = x.get(k);
        let carriers = [
            Plain(xk),
            Mem(xk, false),
            Mem(xk, true),
            Left(xk),
            Right(xk),
        ];
        for u_start in 0..=w_start {
            expect(Claim::Propagation, u_start, w_end + k, &carriers);
        }
        let a_run = bytes[..w_start]
            .iter()
            .rev()
            .take_while(|&&c| c == b'a')
            .count();
        for i in 1..k.min(a_run + 1) {
            for j in 1..=k {
                let xj = x.get(j);
                let want = match j.cmp(&i) {
                    std::cmp::Ordering::Less => Right(xj),
                    std::cmp::Ordering::Equal => Left(xj),
                    std::cmp::Ordering::Greater => Plain(xj),
                };
                expect(Claim::Seek, w_start - i, w_end + j, &[want]);
            }
        }
        if a_run >= 1 && a_run < k && w_start > a_run {
            // Preceded by a complete block `b a^i`.
            let i = a_run;
            let xi = x.get(i);
            for j in 1..=k {
                let want = if j < i {
                    Plain(x.get(j))
                } else {
                    Mem(x.get(j), xi)
                };
                expect(Claim::Lookup, w_start - i - 1, w_end + j, &[want]);
            }
        }
    }

    let apex = GateState::from_id(trellis.apex()).expect("apex is a state of the automaton");
    LemmaReport {
        circuit: circuit.clone(),
        encoding,
        checked,
        apex,
        violations,
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::circuit::enumerate_circuits;

    #[test]
    fn eleven_states_fifty_transitions() {
        let m = build();
        assert_eq!(m.state_count(), 11);
        assert_eq!(m.specified_count(), 50);
        let v = m.validate();
        assert!(v.is_valid());
        assert_eq!(v.specified, 50);
    }

    #[test]
    fn families_agree_with_table() {
        let check = cross_check_families();
        assert!(check.discrepancies.is_empty(), "{:?}", check.discrepancies);
        assert_eq!(check.family_pairs, 61);
        assert_eq!(check.removed, 11);
    }

    #[test]
    fn representative_entries() {
        let m = build();
        let d = |l: GateState, r: GateState| m.delta(l.id(), r.id()).and_then(GateState::from_id);
        assert_eq!(d(Right(false), Question), Some(Left(true)));
        assert_eq!(d(Left(false), Left(false)), Some(Question));
        assert_eq!(d(Left(true), Question), Some(Question));
        assert_eq!(d(Left(false), Left(true)), Some(Mem(true, true)));
        assert_eq!(d(Mem(true, true), Question), Some(Plain(false)));
        for (k, l) in pairs() {
            assert_eq!(d(Mem(k, l), Question), Some(Plain(!(k || l))));
            if !(k && l) {
                assert_eq!(d(Right(k), Plain(l)), Some(Left(l)));
            }
        }
        for (l, r) in forbidden_pairs() {
            assert_eq!(d(l, r), None, "({l}, {r})");
        }
    }

    #[test]
    fn init_and_finals() {
        let m = build();
        assert_eq!(m.init('a'), Some(Right(false).id()));
        assert_eq!(m.init('b'), Some(Left(false).id()));
        assert_eq!(m.finals(), [Plain(true).id()]);
    }

    #[test]
    fn forbidden_pair_set() {
        let f = forbidden_pairs();
        assert_eq!(f.len(), 25);
        assert!(f.contains(&(Plain(true), Plain(true))));
        assert!(!f.contains(&(Plain(false), Plain(true))));
    }

    #[test]
    fn names_round_trip() {
        for (i, s) in STATES.iter().enumerate() {
            assert_eq!(GateState::from_name(&s.name()), Some(*s));
            assert_eq!(s.id(), StateId(i));
            assert!(s.name().len() <= 2);
        }
    }

    #[test]
    fn sample_runs() {
        let m = build();
        assert!(!m.accepts("babbb").unwrap());
        assert!(m.accepts("baabaaabaababbbbbb").unwrap());
        let t = m.run("baabaaabaababbbbbb", Mode::Strict).unwrap();
        assert_eq!(t.cell_count(), 171);
    }

    #[test]
    fn seek_cells_carry_their_own_diagonal() {
        // Circuit n=3, j3=1 (x = 1 0 0): `a bab bb` sits right of the seeking
        // line on diagonal 2, so it holds x_2, not x_1.
        let m = build();
        let t = m.run("ababbb", Mode::Strict).unwrap();
        assert_eq!(GateState::from_id(t.apex()), Some(Plain(false)));
        let t = m.run("ababb", Mode::Strict).unwrap();
        assert_eq!(GateState::from_id(t.apex()), Some(Left(true)));
    }

    #[test]
    fn lemma_on_small_circuits() {
        let m = build();
        let r = check_lemma(&m, &SequentialNorCircuit::minimal());
        assert!(r.conforms(), "{:?}", r.violations);
        assert_eq!(r.apex, Plain(false));
        let c = SequentialNorCircuit::new(5, vec![2, 3, 2]).unwrap();
        let r = check_lemma(&m, &c);
        assert!(r.conforms(), "{:?}", r.violations);
        assert_eq!(r.apex, Plain(true));
        for n in 2..=5 {
            for c in enumerate_circuits(n).unwrap() {
                let r = check_lemma(&m, &c);
                assert!(r.conforms(), "{c}: {:?}", r.violations);
            }
        }
    }
}
