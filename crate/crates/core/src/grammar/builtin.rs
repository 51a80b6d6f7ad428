use super::{BooleanGrammar, GrammarError};

pub const BUILTIN_NAMES: [&str; 4] = [
    "example-abc",
    "example-wcw",
    "boolean-5rule",
    "conjunctive-8rule",
];

/// `{ a^m b^n c^n : m != n }`.
const EXAMPLE_ABC: &str = "\
start: S
terminals: a b c
S -> A B & ~D C
A -> a A | _
B -> b B c | _
C -> c C | _
D -> a D b | _
";

/// `{ w c w : w in {a,b}* }`, linear conjunctive.
const EXAMPLE_WCW: &str = "\
start: S
terminals: a b c
S -> C & D
C -> a C a | a C b | b C a | b C b | c
D -> a A & a D | b B & b D | c E
A -> a A a | a A b | b A a | b A b | c E a
B -> a B a | a B b | b B a | b B b | c E b
E -> a E | b E | _
";

/// Circuits in the `a^{i-j_i-1} b` encoding with value 1.
const BOOLEAN_5RULE: &str = "\
start: S
terminals: a b
S -> ~A b S & ~C S
A -> a A | _
C -> a C A b | b
";

/// `T` and `F`: circuits with value 1 and 0, without negation.
const CONJUNCTIVE_8RULE: &str = "\
start: T
terminals: a b
T -> A b F & C F | _
F -> A b T | C T
A -> a A | _
C -> a C A b | b
";

pub fn builtin(name: &str) -> Result<BooleanGrammar, GrammarError> {
    let text = match name {
        "example-abc" => EXAMPLE_ABC,
        "example-wcw" => EXAMPLE_WCW,
        "boolean-5rule" => BOOLEAN_5RULE,
        "conjunctive-8rule" => CONJUNCTIVE_8RULE,
        _ => return Err(GrammarError::UnknownBuiltin(name.to_owned())),
    };
    Ok(text.parse().expect("builtin grammars parse"))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn rule_counts() {
        assert_eq!(builtin("boolean-5rule").unwrap().rule_count(), 5);
        let c8 = builtin("conjunctive-8rule").unwrap();
        assert_eq!(c8.rule_count(), 8);
        assert!(c8.is_conjunctive());
        assert!(builtin("example-wcw").unwrap().is_linear_conjunctive());
        assert_eq!(builtin("example-abc").unwrap().rule_count(), 9);
        assert!(builtin("nope").is_err());
    }
}
