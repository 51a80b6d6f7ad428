//! String encodings of sequential NOR circuits over `{a, b}`.
//!
//! * v1: gate `Ci` becomes `a^(i - j_i - 1) b`, concatenated from `Cn` down to
//!   `C2`; `C1` is the empty string.
//! * v2: gate `Ci` (`i >= 3`) becomes `b a^(j_i)`, concatenated from `Cn` down
//!   to `C3`, followed by `b` (for `C2`), `a` (for `C1`), one `b` and the
//!   work space `b^n`.

use std::fmt;

use thiserror::Error;

use crate::circuit::SequentialNorCircuit;

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum DecodeErrorKind {
    /// A character outside `{a, b}`.
    NotInAlphabet(char),
    /// The text does not end with `a b b^n` for some `n >= 2`.
    MissingWorkSpace,
    /// The `b` encoding gate 2 is absent before the `a` of gate 1.
    MissingGateTwo,
    /// A gate block does not start with `b`.
    ExpectedB,
    /// A v2 gate block `b a^j` with `j = 0`.
    EmptyGateBlock { gate: usize },
    /// `j_i` is outside `1..i`.
    BadReference { gate: usize, target: usize },
    /// The work-space length disagrees with the number of gate blocks.
    WorkSpaceMismatch { gates: usize, work_space: usize },
    /// A v1 text that does not end with `b`.
    UnterminatedBlock,
    /// A v1 block `a^m b` with `m > i - 2`.
    ExponentOutOfRange { gate: usize, exponent: usize },
}

impl fmt::Display for DecodeErrorKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        use DecodeErrorKind::*;
        match self {
            NotInAlphabet(c) => write!(f, "symbol {c:?} is not in {{a, b}}"),
            MissingWorkSpace => write!(f, "expected the text to end with `a b b^n`, n >= 2"),
            MissingGateTwo => write!(f, "expected `b` (gate 2) before the `a` of gate 1"),
            ExpectedB => write!(f, "expected `b` to start a gate block"),
            EmptyGateBlock { gate } => write!(f, "gate {gate} has j = 0, must be at least 1"),
            BadReference { gate, target } => {
                write!(f, "j{gate} = {target} violates j{gate} < {gate}")
            }
            WorkSpaceMismatch { gates, work_space } => write!(
                f,
                "{gates} gates need a work space of {gates} b's, found {work_space}"
            ),
            UnterminatedBlock => write!(f, "expected the text to end with `b`"),
            ExponentOutOfRange { gate, exponent } => write!(
                f,
                "gate {gate} block has exponent {exponent}, at most {} allowed",
                gate.saturating_sub(2)
            ),
        }
    }
}

/// A syntax error with the byte offset where it was detected.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
#[error("offset {offset}: {kind}")]
pub struct DecodeError {
    pub kind: DecodeErrorKind,
    pub offset: usize,
}

fn fail<T>(kind: DecodeErrorKind, offset: usize) -> Result<T, DecodeError> {
    Err(DecodeError { kind, offset })
}

fn check_alphabet(text: &str) -> Result<&[u8], DecodeError> {
    if let Some((offset, c)) = text.char_indices().find(|&(_, c)| c != 'a' && c != 'b') {
        return fail(DecodeErrorKind::NotInAlphabet(c), offset);
    }
    Ok(text.as_bytes())
}

/// # Panics
///
/// If the circuit has fewer than two gates.
pub fn encode_v2(circuit: &SequentialNorCircuit) -> String {
    let n = circuit.gates();
    assert!(n >= 2, "the v2 encoding needs at least two gates");
    let mut out = String::with_capacity(2 * n + 1 + circuit.refs().iter().sum::<usize>());
    for &j in circuit.refs().iter().rev() {
        out.push('b');
        out.extend(std::iter::repeat_n('a', j));
    }
    out.push_str("bab");
    out.extend(std::iter::repeat_n('b', n));
    out
}

/// Length of the v2 encoding of a circuit, `(n - 2) + Σ j_i + 3 + n`.
pub fn encoded_v2_len(circuit: &SequentialNorCircuit) -> usize {
    let n = circuit.gates();
    (n - 2) + circuit.refs().iter().sum::<usize>() + 3 + n
}

pub fn decode_v2(text: &str) -> Result<SequentialNorCircuit, DecodeError> {
    let bytes = check_alphabet(text)?;
    let len = bytes.len();
    let trailing = bytes.iter().rev().take_while(|&&c| c == b'b').count();
    // Need `a` followed by at least 1 + 2 b's.
    if trailing < 3 || trailing == len {
        return fail(DecodeErrorKind::MissingWorkSpace, len - trailing.min(len));
    }
    let work_space = trailing - 1;
    let a_pos = len - trailing - 1;
    if a_pos == 0 || bytes[a_pos - 1] != b'b' {
        return fail(DecodeErrorKind::MissingGateTwo, a_pos);
    }
    let prefix = &bytes[..a_pos - 1];

    // Blocks `b a^j`, in order C_n, ..., C_3.
    let mut blocks = Vec::new();
    let mut pos = 0;
    while pos < prefix.len() {
        if prefix[pos] != b'b' {
            return fail(DecodeErrorKind::ExpectedB, pos);
        }
        let run = prefix[pos + 1..].iter().take_while(|&&c| c == b'a').count();
        blocks.push((pos, run));
        pos += 1 + run;
    }
    let n = blocks.len() + 2;
    let mut refs = vec![0; blocks.len()];
    for (k, &(offset, j)) in blocks.iter().enumerate() {
        let gate = n - k;
        if j == 0 {
            return fail(DecodeErrorKind::EmptyGateBlock { gate }, offset);
        }
        if j >= gate {
            return fail(DecodeErrorKind::BadReference { gate, target: j }, offset);
        }
        refs[gate - 3] = j;
    }
    if work_space != n {
        return fail(
            DecodeErrorKind::WorkSpaceMismatch {
                gates: n,
                work_space,
            },
            a_pos + 2,
        );
    }
    Ok(SequentialNorCircuit::new(n, refs).expect("references were range-checked"))
}

/// Membership in the set of correct v2 descriptions.
pub fn in_l(text: &str) -> bool {
    decode_v2(text).is_ok()
}

/// Membership in the set of correct v2 descriptions of circuits with value 1.
pub fn in_l1(text: &str) -> bool {
    decode_v2(text).is_ok_and(|c| c.value())
}

pub fn encode_v1(circuit: &SequentialNorCircuit) -> String {
    let mut out = String::new();
    for i in (2..=circuit.gates()).rev() {
        let j = circuit
            .second_arg(i)
            .expect("gates 2..=n have a second argument");
        out.extend(std::iter::repeat_n('a', i - j - 1));
        out.push('b');
    }
    out
}

pub fn decode_v1(text: &str) -> Result<SequentialNorCircuit, DecodeError> {
    let bytes = check_alphabet(text)?;
    if bytes.last().is_some_and(|&c| c != b'b') {
        return fail(DecodeErrorKind::UnterminatedBlock, bytes.len() - 1);
    }
    // Blocks `a^m b`, in order C_n, ..., C_2.
    let mut blocks = Vec::new();
    let mut start = 0;
    for (pos, &c) in bytes.iter().enumerate() {
        if c == b'b' {
            blocks.push((start, pos - start));
            start = pos + 1;
        }
    }
    let n = blocks.len() + 1;
    let mut refs = vec![0; n.saturating_sub(2)];
    for (k, &(offset, exponent)) in blocks.iter().enumerate() {
        let gate = n - k;
        if exponent + 2 > gate {
            return fail(
                DecodeErrorKind::ExponentOutOfRange { gate, exponent },
                offset,
            );
        }
        if gate >= 3 {
            refs[gate - 3] = gate - exponent - 1;
        }
    }
    Ok(SequentialNorCircuit::new(n, refs).expect("exponents were range-checked"))
}

/// Membership in `⋃_{m >= 0} a^m b (a* b)^m`.
pub fn in_l0(text: &str) -> bool {
    in_l0_bytes(text.as_bytes())
}

pub(crate) fn in_l0_bytes(bytes: &[u8]) -> bool {
    let m = bytes.iter().take_while(|&&c| c == b'a').count();
    if bytes.get(m) != Some(&b'b') {
        return false;
    }
    let rest = &bytes[m + 1..];
    if rest.iter().any(|&c| c != b'a' && c != b'b') {
        return false;
    }
    let blocks = rest.iter().filter(|&&c| c == b'b').count();
    blocks == m && rest.last().is_none_or(|&c| c == b'b')
}
