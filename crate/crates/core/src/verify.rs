//! Exhaustive cross-checks of the eleven-state automaton against circuit
//! evaluation, for every sequential NOR circuit up to a size.

use std::fmt;

use crate::automaton::{Mode, RunError, TrellisAutomaton};
use crate::circuit::{circuit_count, enumerate_circuits, SequentialNorCircuit};
use crate::eleven_state::{check_lemma, Violation};
use crate::encoding::{decode_v1, decode_v2, encode_v1, encode_v2};

/// Largest circuit size accepted by [`sweep`]; the count grows as `(n-1)!`.
pub const MAX_SWEEP_N: usize = 10;

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Problem {
    Acceptance { expected: bool, accepted: bool },
    Strict(RunError),
    Lemma { violations: usize, first: Violation },
    RoundTripV1,
    RoundTripV2,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Mismatch {
    pub circuit: SequentialNorCircuit,
    pub problem: Problem,
}

impl fmt::Display for Mismatch {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}: ", self.circuit)?;
        match &self.problem {
            Problem::Acceptance { expected, accepted } => write!(
                f,
                "value {} but the automaton {}",
                u8::from(*expected),
                if *accepted { "accepts" } else { "rejects" }
            ),
            Problem::Strict(e) => write!(f, "strict run failed: {e}"),
            Problem::Lemma { violations, first } => write!(
                f,
                "{violations} lemma violation(s), first: claim {} at cell (start {}, length {}), \
                 expected {:?}, found {:?}",
                first.claim, first.start, first.length, first.expected, first.actual
            ),
            Problem::RoundTripV1 => f.write_str("v1 encoding does not round-trip"),
            Problem::RoundTripV2 => f.write_str("v2 encoding does not round-trip"),
        }
    }
}

/// All checks for one circuit; the lemma check only when `lemma` is set.
pub fn check_circuit(
    automaton: &TrellisAutomaton,
    circuit: &SequentialNorCircuit,
    lemma: bool,
) -> Vec<Mismatch> {
    let mut problems = Vec::new();
    let v2 = encode_v2(circuit);
    let expected = circuit.value();
    match automaton.run(&v2, Mode::Strict) {
        Ok(t) => {
            let accepted = automaton.is_final(t.apex());
            if accepted != expected {
                problems.push(Problem::Acceptance { expected, accepted });
            }
        }
        Err(e) => problems.push(Problem::Strict(e)),
    }
    if lemma {
        let report = check_lemma(automaton, circuit);
        if let Some(first) = report.violations.first() {
            problems.push(Problem::Lemma {
                violations: report.violations.len(),
                first: first.clone(),
            });
        }
    }
    if decode_v2(&v2).as_ref() != Ok(circuit) {
        problems.push(Problem::RoundTripV2);
    }
    if decode_v1(&encode_v1(circuit)).as_ref() != Ok(circuit) {
        problems.push(Problem::RoundTripV1);
    }
    problems
        .into_iter()
        .map(|problem| Mismatch {
            circuit: circuit.clone(),
            problem,
        })
        .collect()
}

#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct SweepReport {
    /// `(n, circuits checked)` for each size.
    pub per_size: Vec<(usize, u64)>,
    pub circuits: u64,
    pub lemma_checked: u64,
    pub accepted: u64,
    pub mismatches: Vec<Mismatch>,
}

impl SweepReport {
    pub fn is_clean(&self) -> bool {
        self.mismatches.is_empty()
    }

    /// Folds one circuit's outcome into the report.
    pub fn record(
        &mut self,
        circuit: &SequentialNorCircuit,
        lemma: bool,
        mismatches: Vec<Mismatch>,
    ) {
        let n = circuit.gates();
        match self.per_size.iter_mut().find(|(m, _)| *m == n) {
            Some((_, c)) => *c += 1,
            None => {
                self.per_size.push((n, 1));
                self.per_size.sort_unstable();
            }
        }
        self.circuits += 1;
        self.lemma_checked += u64::from(lemma);
        self.accepted += u64::from(circuit.value());
        self.mismatches.extend(mismatches);
    }
}

/// Number of circuits a sweep up to `max_n` visits.
pub fn sweep_size(max_n: usize) -> u64 {
    (2..=max_n).map(circuit_count).sum()
}

/// Checks every circuit with `2 <= n <= max_n`, running the lemma check for
/// `n <= lemma_max_n`. Panics if `max_n` is outside `2..=MAX_SWEEP_N`.
pub fn sweep(automaton: &TrellisAutomaton, max_n: usize, lemma_max_n: usize) -> SweepReport {
    assert!(
        (2..=MAX_SWEEP_N).contains(&max_n),
        "max_n must lie in 2..={MAX_SWEEP_N}"
    );
    let mut report = SweepReport::default();
    for n in 2..=max_n {
        for c in enumerate_circuits(n).expect("n >= 2") {
            let lemma = n <= lemma_max_n;
            let found = check_circuit(automaton, &c, lemma);
            report.record(&c, lemma, found);
        }
    }
    report
}
