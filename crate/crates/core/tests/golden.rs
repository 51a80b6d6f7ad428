use trellis::{eleven_state, TrellisAutomaton, ELEVEN_STATE_TEXT};

#[test]
fn exported_text_matches_the_data_file() {
    let built = eleven_state::build();
    if std::env::var_os("TRELLIS_BLESS").is_some() {
        let path = concat!(env!("CARGO_MANIFEST_DIR"), "/data/eleven-state.ta");
        std::fs::write(path, built.to_text()).unwrap();
        return;
    }
    assert_eq!(built.to_text(), ELEVEN_STATE_TEXT);
}

#[test]
fn data_file_parses_back_to_the_same_automaton() {
    let parsed: TrellisAutomaton = ELEVEN_STATE_TEXT.parse().unwrap();
    assert_eq!(parsed, eleven_state::build());
}
