use std::io::Write;
use std::process::{Command, Output, Stdio};

fn trellis(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_trellis"))
        .args(args)
        .output()
        .expect("binary runs")
}

fn trellis_stdin(args: &[&str], stdin: &str) -> Output {
    let mut child = Command::new(env!("CARGO_BIN_EXE_trellis"))
        .args(args)
        .stdin(Stdio::piped())
        .stdout(Stdio::piped())
        .stderr(Stdio::piped())
        .spawn()
        .expect("binary runs");
    child
        .stdin
        .take()
        .unwrap()
        .write_all(stdin.as_bytes())
        .unwrap();
    child.wait_with_output().unwrap()
}

fn stdout(o: &Output) -> String {
    String::from_utf8(o.stdout.clone()).unwrap()
}

fn temp_file(contents: &str) -> tempfile::NamedTempFile {
    let mut f = tempfile::NamedTempFile::new().unwrap();
    f.write_all(contents.as_bytes()).unwrap();
    f
}

#[test]
fn eval_sequential_circuits() {
    let f = temp_file("snc v1\nn 2\n");
    let o = trellis(&["eval", f.path().to_str().unwrap()]);
    assert_eq!(o.status.code(), Some(0));
    assert_eq!(stdout(&o), "1 0\nvalue: 0\n");

    let f = temp_file("snc v1\nn 5\nj 2 3 2\n");
    let o = trellis(&["eval", f.path().to_str().unwrap()]);
    assert_eq!(stdout(&o), "1 0 1 0 1\nvalue: 1\n");

    let f = temp_file("snc v1\nn 5\nj 2 x 2\n");
    let o = trellis(&["eval", f.path().to_str().unwrap()]);
    assert_ne!(o.status.code(), Some(0));
}

#[test]
fn eval_general_circuit() {
    let f = temp_file("gc v1\ninputs 2\ng1 = AND x1 x2\ng2 = NOT g1\noutput g2\n");
    let path = f.path().to_str().unwrap();
    for (inputs, value) in [("00", 1), ("01", 1), ("10", 1), ("11", 0)] {
        let o = trellis(&["eval", path, "--inputs", inputs]);
        assert_eq!(o.status.code(), Some(0));
        assert!(
            stdout(&o).ends_with(&format!("value: {value}\n")),
            "{inputs}"
        );
    }
    assert_eq!(trellis(&["eval", path]).status.code(), Some(2));
}

#[test]
fn run_exit_codes() {
    let o = trellis(&["run", "--input", "baabaaabaababbbbbb"]);
    assert_eq!((o.status.code(), stdout(&o)), (Some(0), "accept\n".into()));
    let o = trellis(&[
        "run",
        "--automaton",
        "builtin:eleven-state",
        "--input",
        "babbb",
        "--strict",
    ]);
    assert_eq!((o.status.code(), stdout(&o)), (Some(1), "reject\n".into()));
    assert_eq!(trellis(&["run", "--input", "abc"]).status.code(), Some(2));
}

#[test]
fn strict_mode_fails_on_unspecified_transitions() {
    let lenient = trellis(&["run", "--input", "bba"]);
    assert!(matches!(lenient.status.code(), Some(0 | 1)));
    assert!(String::from_utf8_lossy(&lenient.stderr).contains("unspecified"));
    let strict = trellis(&["run", "--input", "bba", "--strict"]);
    assert_eq!(strict.status.code(), Some(2));
}

#[test]
fn render_is_deterministic_and_has_a_legend() {
    let args = ["run", "--input", "baabaaabaababbbbbb", "--render"];
    let a = stdout(&trellis(&args));
    let b = stdout(&trellis(&args));
    assert_eq!(a, b);
    assert!(a.contains("legend:"));
    let rows: Vec<&str> = a.lines().take(18).collect();
    assert_eq!(rows[0].trim(), "1");
    assert_eq!(rows[17].split_whitespace().count(), 18);
}

#[test]
fn automaton_file_round_trip() {
    let f = temp_file(trellis::ELEVEN_STATE_TEXT);
    let o = trellis(&[
        "run",
        "--automaton",
        f.path().to_str().unwrap(),
        "--input",
        "baabaaabaababbbbbb",
    ]);
    assert_eq!(o.status.code(), Some(0));
}

#[test]
fn encode_and_decode() {
    let o = trellis_stdin(&["encode", "--scheme", "v2"], "snc v1\nn 2\n");
    assert_eq!(stdout(&o), "babbb\n");
    let o = trellis_stdin(&["encode", "--scheme", "v1"], "snc v1\nn 5\nj 2 3 2\n");
    assert_eq!(stdout(&o), "aabbbb\n");
    let o = trellis(&["decode", "--scheme", "v2", "baabaaabaababbbbbb"]);
    assert_eq!(stdout(&o), "snc v1\nn 5\nj 2 3 2\n");
    let o = trellis(&["decode", "--scheme", "v2", "ab"]);
    assert_eq!(o.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&o.stderr).contains("offset"));
}

#[test]
fn verify_counts() {
    let o = trellis(&["verify", "--max-n", "5", "--jobs", "2"]);
    assert_eq!(o.status.code(), Some(0));
    let out = stdout(&o);
    assert!(out.contains("circuits checked: 33\n"));
    assert!(out.contains("mismatches: 0\n"));
    let o = trellis(&["verify", "--max-n", "8"]);
    assert_eq!(o.status.code(), Some(0));
    assert!(stdout(&o).contains("circuits checked: 5913\n"));
    assert_eq!(trellis(&["verify", "--max-n", "1"]).status.code(), Some(2));
    assert_eq!(trellis(&["verify", "--max-n", "11"]).status.code(), Some(2));
}

#[test]
fn grammar_subcommands() {
    let o = trellis(&["grammar", "convert", "builtin:eleven-state"]);
    let out = stdout(&o);
    let summary = out.lines().last().unwrap();
    assert_eq!(summary, "# nonterminals: 11, rules: 172");
    // The printed grammar parses back.
    let g: trellis::BooleanGrammar = out.parse().unwrap();
    assert_eq!(g.rule_count(), 172);

    let o = trellis(&[
        "grammar",
        "solve",
        "builtin:boolean-5rule",
        "--max-len",
        "4",
    ]);
    let s_line = stdout(&o).lines().next().unwrap().to_owned();
    assert!(s_line.starts_with("S ("));
    assert!(s_line.contains(": ε "));

    let o = trellis(&[
        "grammar",
        "recognize",
        "builtin:example-wcw",
        "abcab",
        "abcba",
    ]);
    assert_eq!(stdout(&o), "abcab: member\nabcba: non-member\n");

    let f = temp_file("start: S\nterminals: a\nS -> ~S\n");
    let o = trellis(&[
        "grammar",
        "solve",
        f.path().to_str().unwrap(),
        "--max-len",
        "0",
    ]);
    assert_eq!(o.status.code(), Some(2));
    let err = String::from_utf8_lossy(&o.stderr).to_string();
    assert!(err.contains("`S`") && err.contains("length 0"), "{err}");
}
