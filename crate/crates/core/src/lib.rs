//! Trellis automata, sequential NOR circuits and Boolean grammars.
//!
//! The centrepiece is an eleven-state trellis automaton that accepts exactly
//! the encodings of sequential NOR circuits evaluating to 1
//! ([`eleven_state::build`]). Around it sit a simulator ([`automaton`]),
//! circuits and the gadgets compiling general circuits to NOR form
//! ([`circuit`]), the string encodings ([`encoding`]), grammars with
//! bounded-length semantics ([`grammar`]), text rendering ([`render`]) and an
//! exhaustive cross-check ([`verify`]).

pub mod automaton;
pub mod circuit;
pub mod eleven_state;
pub mod encoding;
pub mod grammar;
pub mod render;
pub mod verify;

pub use automaton::{
    Mode, ParseAutomatonError, RunError, StateId, Trellis, TrellisAutomaton, UnspecifiedFiring,
};
pub use circuit::{
    enumerate_circuits, random_circuit, random_general_circuit, CircuitError, GateValues,
    GeneralCircuit, NorBuilder, SequentialNorCircuit, SplitMix64,
};
pub use eleven_state::{check_lemma, GateState, LemmaReport};
pub use encoding::{decode_v1, decode_v2, encode_v1, encode_v2, DecodeError};
pub use grammar::{BooleanGrammar, BoundedLanguage, GrammarError};
pub use render::RenderedTrellis;
pub use verify::{sweep, SweepReport};

/// The eleven-state automaton in the `trellis-automaton v1` text format.
pub const ELEVEN_STATE_TEXT: &str = include_str!("../data/eleven-state.ta");
