//! Trellis automata and the triangular simulation engine.
//!
//! A trellis automaton over an alphabet `Σ` assigns a state to every nonempty
//! string: single symbols get `init(symbol)`, and a longer string `a w b` gets
//! `delta(Δ(a w), Δ(w b))`. A string is accepted when the state of the whole
//! string (the apex of the trellis) is final.

use std::collections::HashSet;
use std::fmt;
use std::str::FromStr;

use thiserror::Error;

/// Index of a state inside a [`TrellisAutomaton`].
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct StateId(pub usize);

impl fmt::Display for StateId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "#{}", self.0)
    }
}

/// How the simulator treats a transition that the automaton leaves unspecified.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Default)]
pub enum Mode {
    /// Consulting an unspecified transition is an error.
    #[default]
    Strict,
    /// Substitute the default state and record the event.
    Lenient,
}

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum RunError {
    #[error("empty input: trellis automata only process nonempty strings")]
    EmptyInput,
    #[error("symbol {symbol:?} at position {position} is not in the alphabet")]
    UnknownSymbol { symbol: char, position: usize },
    #[error(
        "unspecified transition ({left}, {right}) consulted at start {start}, length {length}"
    )]
    Unspecified {
        start: usize,
        length: usize,
        left: String,
        right: String,
    },
    #[error("automaton is malformed: {0}")]
    InvalidAutomaton(Defect),
}

/// A violated [`TrellisAutomaton`] invariant.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Defect {
    #[error("the state set is empty")]
    NoStates,
    #[error("the alphabet is empty")]
    NoSymbols,
    #[error("symbol {0:?} is listed twice")]
    DuplicateSymbol(char),
    #[error("state {0:?} is listed twice")]
    DuplicateState(String),
    #[error("init has {found} entries for {expected} symbols")]
    InitArity { expected: usize, found: usize },
    #[error("init({symbol:?}) refers to missing state {state}")]
    InitOutOfRange { symbol: char, state: StateId },
    #[error("transition table has {found} cells, expected {expected}")]
    DeltaShape { expected: usize, found: usize },
    #[error("delta({left}, {right}) refers to missing state {target}")]
    DeltaOutOfRange {
        left: StateId,
        right: StateId,
        target: StateId,
    },
    #[error("final state {0} is not a state")]
    FinalOutOfRange(StateId),
}

/// Result of [`TrellisAutomaton::validate`].
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Validation {
    pub defects: Vec<Defect>,
    /// Number of `(left, right)` pairs with a specified transition.
    pub specified: usize,
}

impl Validation {
    pub fn is_valid(&self) -> bool {
        self.defects.is_empty()
    }
}

/// The quintuple `(Σ, Q, I, δ, F)` with a partial transition function.
///
/// Immutable once built; share it freely between concurrent runs.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct TrellisAutomaton {
    alphabet: Vec<char>,
    states: Vec<String>,
    init: Vec<StateId>,
    delta: Vec<Option<StateId>>,
    finals: Vec<StateId>,
}

impl TrellisAutomaton {
    /// Assembles an automaton without checking it; see [`validate`](Self::validate).
    ///
    /// `init` is parallel to `alphabet` and `delta` is row-major over
    /// `(left, right)`, with `states.len()²` cells.
    pub fn from_parts(
        alphabet: Vec<char>,
        states: Vec<String>,
        init: Vec<StateId>,
        delta: Vec<Option<StateId>>,
        mut finals: Vec<StateId>,
    ) -> Self {
        finals.sort();
        finals.dedup();
        Self {
            alphabet,
            states,
            init,
            delta,
            finals,
        }
    }

    /// Like [`from_parts`](Self::from_parts) but rejects the first defect found.
    pub fn new(
        alphabet: Vec<char>,
        states: Vec<String>,
        init: Vec<StateId>,
        delta: Vec<Option<StateId>>,
        finals: Vec<StateId>,
    ) -> Result<Self, Defect> {
        let automaton = Self::from_parts(alphabet, states, init, delta, finals);
        match automaton.validate().defects.into_iter().next() {
            Some(defect) => Err(defect),
            None => Ok(automaton),
        }
    }

    pub fn alphabet(&self) -> &[char] {
        &self.alphabet
    }

    pub fn states(&self) -> &[String] {
        &self.states
    }

    pub fn state_count(&self) -> usize {
        self.states.len()
    }

    pub fn finals(&self) -> &[StateId] {
        &self.finals
    }

    pub fn is_final(&self, state: StateId) -> bool {
        self.finals.binary_search(&state).is_ok()
    }

    pub fn name(&self, state: StateId) -> &str {
        self.states.get(state.0).map_or("<invalid>", String::as_str)
    }

    pub fn state_by_name(&self, name: &str) -> Option<StateId> {
        self.states.iter().position(|s| s == name).map(StateId)
    }

    pub fn symbol_index(&self, symbol: char) -> Option<usize> {
        self.alphabet.iter().position(|&c| c == symbol)
    }

    pub fn init(&self, symbol: char) -> Option<StateId> {
        self.symbol_index(symbol)
            .and_then(|i| self.init.get(i).copied())
    }

    pub fn delta(&self, left: StateId, right: StateId) -> Option<StateId> {
        let n = self.states.len();
        if left.0 >= n || right.0 >= n {
            return None;
        }
        self.delta.get(left.0 * n + right.0).copied().flatten()
    }

    /// All specified transitions as `(left, right, target)`, row-major.
    pub fn transitions(&self) -> impl Iterator<Item = (StateId, StateId, StateId)> + '_ {
        let n = self.states.len().max(1);
        self.delta
            .iter()
            .enumerate()
            .filter_map(move |(i, t)| t.map(|t| (StateId(i / n), StateId(i % n), t)))
    }

    pub fn specified_count(&self) -> usize {
        self.delta.iter().filter(|t| t.is_some()).count()
    }

    /// State substituted for unspecified transitions in lenient mode: the
    /// state named `?` when there is one, otherwise the first state.
    pub fn default_state(&self) -> StateId {
        self.state_by_name("?").unwrap_or(StateId(0))
    }

    pub fn validate(&self) -> Validation {
        let mut defects = Vec::new();
        let n = self.states.len();
        if n == 0 {
            defects.push(Defect::NoStates);
        }
        if self.alphabet.is_empty() {
            defects.push(Defect::NoSymbols);
        }
        let mut seen = HashSet::new();
        for &c in &self.alphabet {
            if !seen.insert(c) {
                defects.push(Defect::DuplicateSymbol(c));
            }
        }
        let mut seen = HashSet::new();
        for s in &self.states {
            if !seen.insert(s.as_str()) {
                defects.push(Defect::DuplicateState(s.clone()));
            }
        }
        if self.init.len() != self.alphabet.len() {
            defects.push(Defect::InitArity {
                expected: self.alphabet.len(),
                found: self.init.len(),
            });
        }
        for (&symbol, &state) in self.alphabet.iter().zip(&self.init) {
            if state.0 >= n {
                defects.push(Defect::InitOutOfRange { symbol, state });
            }
        }
        if self.delta.len() != n * n {
            defects.push(Defect::DeltaShape {
                expected: n * n,
                found: self.delta.len(),
            });
        } else {
            for (left, right, target) in self.transitions() {
                if target.0 >= n {
                    defects.push(Defect::DeltaOutOfRange {
                        left,
                        right,
                        target,
                    });
                }
            }
        }
        for &f in &self.finals {
            if f.0 >= n {
                defects.push(Defect::FinalOutOfRange(f));
            }
        }
        Validation {
            defects,
            specified: self.specified_count(),
        }
    }

    /// Computes the full trellis of `input`.
    pub fn run(&self, input: &str, mode: Mode) -> Result<Trellis, RunError> {
        let symbols: Vec<char> = input.chars().collect();
        if symbols.is_empty() {
            return Err(RunError::EmptyInput);
        }
        let n = symbols.len();
        let state_count = self.states.len();
        if self.delta.len() != state_count * state_count {
            return Err(RunError::InvalidAutomaton(Defect::DeltaShape {
                expected: state_count * state_count,
                found: self.delta.len(),
            }));
        }

        let mut cells = Vec::with_capacity(n * (n + 1) / 2);
        for (position, &symbol) in symbols.iter().enumerate() {
            let state = self
                .init(symbol)
                .ok_or(RunError::UnknownSymbol { symbol, position })?;
            if state.0 >= state_count {
                return Err(RunError::InvalidAutomaton(Defect::InitOutOfRange {
                    symbol,
                    state,
                }));
            }
            cells.push(state);
        }

        let fallback = self.default_state();
        let mut fired_unspecified = Vec::new();
        let mut consultations = 0;
        let mut prev_row = 0;
        for length in 2..=n {
            let prev_width = n - length + 2;
            for start in 0..=(n - length) {
                let left = cells[prev_row + start];
                let right = cells[prev_row + start + 1];
                consultations += 1;
                let next = match self.delta[left.0 * state_count + right.0] {
                    Some(t) if t.0 < state_count => t,
                    Some(t) => {
                        return Err(RunError::InvalidAutomaton(Defect::DeltaOutOfRange {
                            left,
                            right,
                            target: t,
                        }))
                    }
                    None => match mode {
                        Mode::Strict => {
                            return Err(RunError::Unspecified {
                                start,
                                length,
                                left: self.name(left).to_owned(),
                                right: self.name(right).to_owned(),
                            })
                        }
                        Mode::Lenient => {
                            fired_unspecified.push(UnspecifiedFiring {
                                start,
                                length,
                                left,
                                right,
                            });
                            fallback
                        }
                    },
                };
                cells.push(next);
            }
            prev_row += prev_width;
        }

        Ok(Trellis {
            input: symbols,
            cells,
            fired_unspecified,
            consultations,
        })
    }

    /// Strict-mode acceptance: `Δ(input) ∈ F`.
    pub fn accepts(&self, input: &str) -> Result<bool, RunError> {
        let trellis = self.run(input, Mode::Strict)?;
        Ok(self.is_final(trellis.apex()))
    }

    /// Serializes to the line-oriented `trellis-automaton v1` format.
    pub fn to_text(&self) -> String {
        let mut out = String::from("trellis-automaton v1\n");
        let join = |it: &mut dyn Iterator<Item = String>| it.collect::<Vec<_>>().join(" ");
        out.push_str(&format!(
            "alphabet: {}\n",
            join(&mut self.alphabet.iter().map(char::to_string))
        ));
        out.push_str(&format!(
            "states: {}\n",
            join(&mut self.states.iter().cloned())
        ));
        for (&symbol, &state) in self.alphabet.iter().zip(&self.init) {
            out.push_str(&format!("init: {} -> {}\n", symbol, self.name(state)));
        }
        for (left, right, target) in self.transitions() {
            out.push_str(&format!(
                "delta: {} {} -> {}\n",
                self.name(left),
                self.name(right),
                self.name(target)
            ));
        }
        if !self.finals.is_empty() {
            out.push_str(&format!(
                "final: {}\n",
                join(&mut self.finals.iter().map(|&f| self.name(f).to_owned()))
            ));
        }
        out
    }
}

/// A transition lookup that fell back to the default state in lenient mode.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct UnspecifiedFiring {
    pub start: usize,
    pub length: usize,
    pub left: StateId,
    pub right: StateId,
}

/// States computed for every nonempty substring of an input.
///
/// Cells are addressed by `(start, length)` with a 0-based start.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Trellis {
    input: Vec<char>,
    // Rows by increasing length; row `length` holds `n - length + 1` cells.
    cells: Vec<StateId>,
    fired_unspecified: Vec<UnspecifiedFiring>,
    consultations: usize,
}

impl Trellis {
    pub fn input(&self) -> &[char] {
        &self.input
    }

    pub fn len(&self) -> usize {
        self.input.len()
    }

    pub fn is_empty(&self) -> bool {
        self.input.is_empty()
    }

    pub fn cell_count(&self) -> usize {
        self.cells.len()
    }

    fn row_offset(&self, length: usize) -> usize {
        // Sum of widths of rows 1..length.
        let n = self.input.len();
        (length - 1) * (n + 1) - length * (length - 1) / 2
    }

    /// `Δ(input[start .. start + length])`, or `None` outside the triangle.
    pub fn get(&self, start: usize, length: usize) -> Option<StateId> {
        let n = self.input.len();
        if length == 0 || start + length > n {
            return None;
        }
        self.cells.get(self.row_offset(length) + start).copied()
    }

    /// Cells of all substrings of the given length, by start.
    pub fn row(&self, length: usize) -> &[StateId] {
        let n = self.input.len();
        if length == 0 || length > n {
            return &[];
        }
        let offset = self.row_offset(length);
        &self.cells[offset..offset + n - length + 1]
    }

    pub fn apex(&self) -> StateId {
        *self.cells.last().expect("trellis is never empty")
    }

    pub fn fired_unspecified(&self) -> &[UnspecifiedFiring] {
        &self.fired_unspecified
    }

    /// Number of transition lookups performed, always `n(n-1)/2`.
    pub fn consultations(&self) -> usize {
        self.consultations
    }
}

#[derive(Debug, Error, Clone, PartialEq, Eq)]
#[error("line {line}: {message}")]
pub struct ParseAutomatonError {
    pub line: usize,
    pub message: String,
}

impl FromStr for TrellisAutomaton {
    type Err = ParseAutomatonError;

    fn from_str(text: &str) -> Result<Self, Self::Err> {
        let err = |line: usize, message: String| ParseAutomatonError { line, message };
        let mut lines = text
            .lines()
            .enumerate()
            .map(|(i, l)| (i + 1, l.split('#').next().unwrap_or("").trim()))
            .filter(|(_, l)| !l.is_empty());

        match lines.next() {
            Some((_, "trellis-automaton v1")) => {}
            Some((n, other)) => {
                return Err(err(
                    n,
                    format!("expected header `trellis-automaton v1`, found `{other}`"),
                ))
            }
            None => return Err(err(0, "empty automaton description".into())),
        }

        let mut alphabet: Option<Vec<char>> = None;
        let mut states: Option<Vec<String>> = None;
        let mut init_entries = Vec::new();
        let mut delta_entries = Vec::new();
        let mut final_names = Vec::new();

        for (n, line) in lines {
            let (key, rest) = line
                .split_once(':')
                .ok_or_else(|| err(n, format!("expected `key: value`, found `{line}`")))?;
            let rest = rest.trim();
            match key.trim() {
                "alphabet" => {
                    let mut symbols = Vec::new();
                    for tok in rest.split_whitespace() {
                        let mut chars = tok.chars();
                        match (chars.next(), chars.next()) {
                            (Some(c), None) => symbols.push(c),
                            _ => {
                                return Err(err(
                                    n,
                                    format!("symbol `{tok}` is not a single character"),
                                ))
                            }
                        }
                    }
                    alphabet = Some(symbols);
                }
                "states" => states = Some(rest.split_whitespace().map(str::to_owned).collect()),
                "init" => {
                    let (lhs, rhs) = rest
                        .split_once("->")
                        .ok_or_else(|| err(n, "init entry needs `->`".into()))?;
                    let lhs = lhs.trim();
                    let mut chars = lhs.chars();
                    let symbol = match (chars.next(), chars.next()) {
                        (Some(c), None) => c,
                        _ => {
                            return Err(err(n, format!("symbol `{lhs}` is not a single character")))
                        }
                    };
                    init_entries.push((n, symbol, rhs.trim().to_owned()));
                }
                "delta" => {
                    let (lhs, rhs) = rest
                        .split_once("->")
                        .ok_or_else(|| err(n, "delta entry needs `->`".into()))?;
                    let args: Vec<&str> = lhs.split_whitespace().collect();
                    if args.len() != 2 {
                        return Err(err(n, "delta entry needs exactly two source states".into()));
                    }
                    delta_entries.push((
                        n,
                        args[0].to_owned(),
                        args[1].to_owned(),
                        rhs.trim().to_owned(),
                    ));
                }
                "final" => final_names.extend(rest.split_whitespace().map(|s| (n, s.to_owned()))),
                other => return Err(err(n, format!("unknown key `{other}`"))),
            }
        }

        let alphabet = alphabet.ok_or_else(|| err(0, "missing `alphabet:` line".into()))?;
        let states = states.ok_or_else(|| err(0, "missing `states:` line".into()))?;
        let lookup = |line: usize, name: &str| {
            states
                .iter()
                .position(|s| s == name)
                .map(StateId)
                .ok_or_else(|| err(line, format!("unknown state `{name}`")))
        };

        let mut init = vec![None; alphabet.len()];
        for (n, symbol, target) in init_entries {
            let idx = alphabet
                .iter()
                .position(|&c| c == symbol)
                .ok_or_else(|| err(n, format!("init symbol {symbol:?} is not in the alphabet")))?;
            if init[idx].is_some() {
                return Err(err(n, format!("init({symbol:?}) given twice")));
            }
            init[idx] = Some(lookup(n, &target)?);
        }
        let init = init
            .into_iter()
            .zip(&alphabet)
            .map(|(s, c)| s.ok_or_else(|| err(0, format!("init({c:?}) is missing"))))
            .collect::<Result<Vec<_>, _>>()?;

        let count = states.len();
        let mut delta = vec![None; count * count];
        for (n, left, right, target) in delta_entries {
            let (l, r, t) = (lookup(n, &left)?, lookup(n, &right)?, lookup(n, &target)?);
            let cell = &mut delta[l.0 * count + r.0];
            if cell.is_some() {
                return Err(err(n, format!("delta({left}, {right}) given twice")));
            }
            *cell = Some(t);
        }
        let finals = final_names
            .into_iter()
            .map(|(n, name)| lookup(n, &name))
            .collect::<Result<Vec<_>, _>>()?;

        TrellisAutomaton::new(alphabet, states, init, delta, finals)
            .map_err(|d| err(0, d.to_string()))
    }
}
