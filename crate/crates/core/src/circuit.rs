//! Sequential NOR circuits and their reduction from NOT/AND circuits.
//!
//! A sequential NOR circuit has gates `C1 = 1`, `C2 = C1 ↓ C1` and
//! `Ci = C(i-1) ↓ C(j_i)` for `3 <= i <= n`, where `1 <= j_i < i` and
//! `x ↓ y = ¬(x ∨ y)`. Gate indices are 1-based everywhere in this module.

use std::fmt;
use std::str::FromStr;

use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum CircuitError {
    #[error("a circuit needs at least {min} gates, got {found}")]
    TooFewGates { min: usize, found: usize },
    #[error("expected {expected} second-argument indices, got {found}")]
    WrongArity { expected: usize, found: usize },
    #[error("gate {gate} refers to C{target}, but must refer to one of C1..C{}", .gate - 1)]
    BadReference { gate: usize, target: usize },
    #[error("gate C{position} cannot be placed: positions 1 and 2 are fixed")]
    BadPosition { position: usize },
    #[error("{0}")]
    Malformed(String),
}

/// A sequential NOR circuit, identified by its gate count and the second
/// argument `j_i` of every gate `i >= 3`.
///
/// `n = 1` (the lone constant gate) is admitted so the first string encoding,
/// which represents it by the empty string, round-trips.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct SequentialNorCircuit {
    n: usize,
    // j[k] is the second argument of gate k + 3.
    j: Vec<usize>,
}

impl SequentialNorCircuit {
    /// `refs` lists `j_3, ..., j_n`.
    pub fn new(n: usize, refs: Vec<usize>) -> Result<Self, CircuitError> {
        if n == 0 {
            return Err(CircuitError::TooFewGates { min: 1, found: 0 });
        }
        let expected = n.saturating_sub(2);
        if refs.len() != expected {
            return Err(CircuitError::WrongArity {
                expected,
                found: refs.len(),
            });
        }
        for (k, &target) in refs.iter().enumerate() {
            let gate = k + 3;
            if target == 0 || target >= gate {
                return Err(CircuitError::BadReference { gate, target });
            }
        }
        Ok(Self { n, j: refs })
    }

    /// The two-gate circuit `C1 = 1, C2 = C1 ↓ C1`.
    pub fn minimal() -> Self {
        Self {
            n: 2,
            j: Vec::new(),
        }
    }

    pub fn gates(&self) -> usize {
        self.n
    }

    /// `j_3, ..., j_n`.
    pub fn refs(&self) -> &[usize] {
        &self.j
    }

    /// Second argument of gate `i`. Gate 2 reads `C1`; gate 1 has none.
    pub fn second_arg(&self, i: usize) -> Option<usize> {
        match i {
            2 => Some(1),
            i if i >= 3 && i <= self.n => Some(self.j[i - 3]),
            _ => None,
        }
    }

    pub fn evaluate(&self) -> GateValues {
        let mut x = Vec::with_capacity(self.n);
        x.push(true);
        if self.n >= 2 {
            x.push(false);
        }
        for &j in &self.j {
            let prev = *x.last().unwrap();
            x.push(!(prev || x[j - 1]));
        }
        GateValues(x)
    }

    /// Value of the last gate.
    pub fn value(&self) -> bool {
        self.evaluate().output()
    }

    /// Text in the `snc v1` format.
    pub fn to_text(&self) -> String {
        let mut out = format!("snc v1\nn {}\n", self.n);
        if !self.j.is_empty() {
            let refs: Vec<String> = self.j.iter().map(usize::to_string).collect();
            out.push_str(&format!("j {}\n", refs.join(" ")));
        }
        out
    }
}

impl fmt::Display for SequentialNorCircuit {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "n={}", self.n)?;
        if !self.j.is_empty() {
            let refs: Vec<String> = self.j.iter().map(usize::to_string).collect();
            write!(f, " j=[{}]", refs.join(","))?;
        }
        Ok(())
    }
}

impl FromStr for SequentialNorCircuit {
    type Err = CircuitError;

    fn from_str(text: &str) -> Result<Self, Self::Err> {
        let bad = |m: String| CircuitError::Malformed(m);
        let mut lines = text
            .lines()
            .map(|l| l.split('#').next().unwrap_or("").trim())
            .filter(|l| !l.is_empty());
        if lines.next() != Some("snc v1") {
            return Err(bad("expected header `snc v1`".into()));
        }
        let n_line = lines.next().ok_or_else(|| bad("missing `n` line".into()))?;
        let n = match n_line.split_whitespace().collect::<Vec<_>>().as_slice() {
            ["n", count] => count
                .parse::<usize>()
                .map_err(|_| bad(format!("bad gate count `{count}`")))?,
            _ => return Err(bad(format!("expected `n <count>`, found `{n_line}`"))),
        };
        let refs = match lines.next() {
            None => Vec::new(),
            Some(line) => {
                let mut toks = line.split_whitespace();
                if toks.next() != Some("j") {
                    return Err(bad(format!("expected `j <j3> ... <jn>`, found `{line}`")));
                }
                toks.map(|t| {
                    t.parse::<usize>()
                        .map_err(|_| bad(format!("bad index `{t}`")))
                })
                .collect::<Result<Vec<_>, _>>()?
            }
        };
        if let Some(extra) = lines.next() {
            return Err(bad(format!("unexpected line `{extra}`")));
        }
        if n < 2 {
            return Err(CircuitError::TooFewGates { min: 2, found: n });
        }
        Self::new(n, refs)
    }
}

/// Gate values `x1..xn`, stored 0-based.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct GateValues(pub Vec<bool>);

impl GateValues {
    /// Value of gate `i` (1-based).
    pub fn get(&self, i: usize) -> bool {
        self.0[i - 1]
    }

    pub fn output(&self) -> bool {
        *self.0.last().expect("a circuit has at least one gate")
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn as_bits(&self) -> Vec<u8> {
        self.0.iter().map(|&b| b as u8).collect()
    }
}

/// Number of circuits with exactly `n` gates: `(n-1)!` for `n >= 2`.
pub fn circuit_count(n: usize) -> u64 {
    (3..=n).map(|i| (i - 1) as u64).product()
}

/// All circuits with exactly `n` gates, in lexicographic order of `(j_3, ..., j_n)`.
pub fn enumerate_circuits(n: usize) -> Result<CircuitIter, CircuitError> {
    if n < 2 {
        return Err(CircuitError::TooFewGates { min: 2, found: n });
    }
    Ok(CircuitIter {
        n,
        next: Some(vec![1; n - 2]),
    })
}

#[derive(Debug, Clone)]
pub struct CircuitIter {
    n: usize,
    next: Option<Vec<usize>>,
}

impl Iterator for CircuitIter {
    type Item = SequentialNorCircuit;

    fn next(&mut self) -> Option<Self::Item> {
        let current = self.next.take()?;
        let mut succ = current.clone();
        // Odometer: position k holds j_{k+3}, which ranges over 1..=k+2.
        let mut k = succ.len();
        while k > 0 {
            k -= 1;
            if succ[k] < k + 2 {
                succ[k] += 1;
                self.next = Some(succ);
                break;
            }
            succ[k] = 1;
        }
        Some(SequentialNorCircuit {
            n: self.n,
            j: current,
        })
    }
}

/// The splitmix64 generator.
///
/// `state += 0x9E3779B97F4A7C15`, then the output is `state` passed through
/// `z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9; z = (z ^ (z >> 27)) * 0x94D049BB133111EB;
/// z ^ (z >> 31)` with wrapping arithmetic. Seeding sets `state = seed`.
#[derive(Clone, Debug)]
pub struct SplitMix64 {
    state: u64,
}

impl SplitMix64 {
    pub fn new(seed: u64) -> Self {
        Self { state: seed }
    }

    pub fn next_u64(&mut self) -> u64 {
        self.state = self.state.wrapping_add(0x9E37_79B9_7F4A_7C15);
        let mut z = self.state;
        z = (z ^ (z >> 30)).wrapping_mul(0xBF58_476D_1CE4_E5B9);
        z = (z ^ (z >> 27)).wrapping_mul(0x94D0_49BB_1331_11EB);
        z ^ (z >> 31)
    }

    /// Uniform-ish draw from `lo..=hi` as `lo + next_u64() % (hi - lo + 1)`.
    pub fn range(&mut self, lo: usize, hi: usize) -> usize {
        let span = (hi - lo + 1) as u64;
        lo + (self.next_u64() % span) as usize
    }
}

/// A circuit with `n` gates whose `j_i` are drawn in order `i = 3..n` with
/// [`SplitMix64::range`]`(1, i - 1)` from a generator seeded with `seed`.
pub fn random_circuit(n: usize, seed: u64) -> Result<SequentialNorCircuit, CircuitError> {
    if n < 2 {
        return Err(CircuitError::TooFewGates { min: 2, found: n });
    }
    let mut rng = SplitMix64::new(seed);
    let j = (3..=n).map(|i| rng.range(1, i - 1)).collect();
    Ok(SequentialNorCircuit { n, j })
}

/// One restricted NOR gate `C[index] = C[index - 1] ↓ C[second]`.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct NorGate {
    pub index: usize,
    pub second: usize,
}

fn check_slot(position: usize, refs: &[usize]) -> Result<(), CircuitError> {
    if position < 3 {
        return Err(CircuitError::BadPosition { position });
    }
    for &target in refs {
        if target == 0 || target >= position {
            return Err(CircuitError::BadReference {
                gate: position,
                target,
            });
        }
    }
    Ok(())
}

/// Two gates starting at `position` whose second computes `¬C[target]`.
pub fn compile_not(position: usize, target: usize) -> Result<[NorGate; 2], CircuitError> {
    check_slot(position, &[target])?;
    Ok([
        NorGate {
            index: position,
            second: 1,
        },
        NorGate {
            index: position + 1,
            second: target,
        },
    ])
}

/// Five gates starting at `position` whose last computes `C[left] ∧ C[right]`.
pub fn compile_and(
    position: usize,
    left: usize,
    right: usize,
) -> Result<[NorGate; 5], CircuitError> {
    check_slot(position, &[left, right])?;
    let i = position;
    Ok([
        NorGate {
            index: i,
            second: 1,
        },
        NorGate {
            index: i + 1,
            second: left,
        },
        NorGate {
            index: i + 2,
            second: 1,
        },
        NorGate {
            index: i + 3,
            second: right,
        },
        NorGate {
            index: i + 4,
            second: i + 1,
        },
    ])
}

/// Incrementally grows a sequential NOR circuit, starting from `C1, C2`.
#[derive(Clone, Debug)]
pub struct NorBuilder {
    refs: Vec<usize>,
}

impl Default for NorBuilder {
    fn default() -> Self {
        Self::new()
    }
}

impl NorBuilder {
    pub fn new() -> Self {
        Self { refs: Vec::new() }
    }

    /// Starts from an existing circuit (`n >= 2`).
    pub fn from_circuit(circuit: &SequentialNorCircuit) -> Self {
        assert!(circuit.gates() >= 2, "builder needs the two fixed gates");
        Self {
            refs: circuit.refs().to_vec(),
        }
    }

    /// Index of the most recently added gate.
    pub fn last(&self) -> usize {
        self.refs.len() + 2
    }

    fn extend(&mut self, gates: &[NorGate]) -> usize {
        for g in gates {
            debug_assert_eq!(g.index, self.last() + 1);
            self.refs.push(g.second);
        }
        self.last()
    }

    /// Appends `C[k] = C[k-1] ↓ C[second]` and returns `k`.
    pub fn push(&mut self, second: usize) -> Result<usize, CircuitError> {
        let position = self.last() + 1;
        check_slot(position, &[second])?;
        self.refs.push(second);
        Ok(position)
    }

    /// Appends a gate that always evaluates to 0.
    pub fn push_zero(&mut self) -> usize {
        self.push(1).expect("C1 is always referable")
    }

    pub fn push_not(&mut self, target: usize) -> Result<usize, CircuitError> {
        let gates = compile_not(self.last() + 1, target)?;
        Ok(self.extend(&gates))
    }

    pub fn push_and(&mut self, left: usize, right: usize) -> Result<usize, CircuitError> {
        let gates = compile_and(self.last() + 1, left, right)?;
        Ok(self.extend(&gates))
    }

    /// Appends four gates whose last has the value of `target`.
    pub fn push_copy(&mut self, target: usize) -> Result<usize, CircuitError> {
        let negated = self.push_not(target)?;
        self.push_not(negated)
    }

    pub fn finish(self) -> SequentialNorCircuit {
        SequentialNorCircuit {
            n: self.refs.len() + 2,
            j: self.refs,
        }
    }
}

/// Reference to an input variable or an earlier gate (both 1-based).
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Ref {
    Input(usize),
    Gate(usize),
}

impl fmt::Display for Ref {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Ref::Input(i) => write!(f, "x{i}"),
            Ref::Gate(g) => write!(f, "g{g}"),
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Gate {
    Not(Ref),
    And(Ref, Ref),
}

/// A circuit over input variables with NOT and AND gates.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct GeneralCircuit {
    pub num_inputs: usize,
    pub gates: Vec<Gate>,
    pub output: Ref,
}

impl GeneralCircuit {
    /// Checks that every reference points to an input or a strictly earlier gate.
    pub fn check(&self) -> Result<(), CircuitError> {
        if self.num_inputs == 0 {
            return Err(CircuitError::Malformed(
                "a circuit needs at least one input".into(),
            ));
        }
        let ok = |r: Ref, before: usize| match r {
            Ref::Input(i) => (1..=self.num_inputs).contains(&i),
            Ref::Gate(g) => g >= 1 && g < before,
        };
        for (k, gate) in self.gates.iter().enumerate() {
            let index = k + 1;
            let refs: &[Ref] = match gate {
                Gate::Not(a) => &[*a],
                Gate::And(a, b) => &[*a, *b],
            };
            if let Some(bad) = refs.iter().find(|&&r| !ok(r, index)) {
                return Err(CircuitError::Malformed(format!(
                    "g{index} refers to {bad}, which is not an input or an earlier gate"
                )));
            }
        }
        if !ok(self.output, self.gates.len() + 1) {
            return Err(CircuitError::Malformed(format!(
                "output {} does not exist",
                self.output
            )));
        }
        Ok(())
    }

    fn check_inputs(&self, inputs: &[bool]) -> Result<(), CircuitError> {
        self.check()?;
        if inputs.len() != self.num_inputs {
            return Err(CircuitError::Malformed(format!(
                "expected {} input values, got {}",
                self.num_inputs,
                inputs.len()
            )));
        }
        Ok(())
    }

    /// Gate-by-gate evaluation on the given input vector.
    pub fn evaluate(&self, inputs: &[bool]) -> Result<bool, CircuitError> {
        self.check_inputs(inputs)?;
        let mut values = Vec::with_capacity(self.gates.len());
        let read = |r: Ref, values: &[bool]| match r {
            Ref::Input(i) => inputs[i - 1],
            Ref::Gate(g) => values[g - 1],
        };
        for gate in &self.gates {
            let v = match *gate {
                Gate::Not(a) => !read(a, &values),
                Gate::And(a, b) => read(a, &values) && read(b, &values),
            };
            values.push(v);
        }
        Ok(read(self.output, &values))
    }

    /// Compiles the circuit, specialised to `inputs`, into a sequential NOR
    /// circuit whose last gate carries the output value.
    ///
    /// Inputs with value 1 map to `C1`; each input with value 0 gets a fresh
    /// gate `C[k] = C[k-1] ↓ C1`. NOT and AND gates use the two- and
    /// five-gate gadgets of [`compile_not`] and [`compile_and`].
    pub fn compile(&self, inputs: &[bool]) -> Result<CompiledCircuit, CircuitError> {
        self.check_inputs(inputs)?;
        let mut builder = NorBuilder::new();
        let input_gates: Vec<usize> = inputs
            .iter()
            .map(|&v| if v { 1 } else { builder.push_zero() })
            .collect();
        let mut gate_map = Vec::with_capacity(self.gates.len());
        let locate = |r: Ref, gate_map: &[usize]| match r {
            Ref::Input(i) => input_gates[i - 1],
            Ref::Gate(g) => gate_map[g - 1],
        };
        for gate in &self.gates {
            let at = match *gate {
                Gate::Not(a) => builder.push_not(locate(a, &gate_map))?,
                Gate::And(a, b) => builder.push_and(locate(a, &gate_map), locate(b, &gate_map))?,
            };
            gate_map.push(at);
        }
        let out = locate(self.output, &gate_map);
        if out != builder.last() || out < 3 {
            builder.push_copy(out)?;
        }
        Ok(CompiledCircuit {
            circuit: builder.finish(),
            inputs: input_gates,
            gates: gate_map,
        })
    }

    /// Text in the `gc v1` format.
    pub fn to_text(&self) -> String {
        let mut out = format!("gc v1\ninputs {}\n", self.num_inputs);
        for (k, gate) in self.gates.iter().enumerate() {
            match gate {
                Gate::Not(a) => out.push_str(&format!("g{} = NOT {a}\n", k + 1)),
                Gate::And(a, b) => out.push_str(&format!("g{} = AND {a} {b}\n", k + 1)),
            }
        }
        out.push_str(&format!("output {}\n", self.output));
        out
    }
}

/// Output of [`GeneralCircuit::compile`], with the location of every
/// original input and gate in the compiled circuit.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CompiledCircuit {
    pub circuit: SequentialNorCircuit,
    pub inputs: Vec<usize>,
    pub gates: Vec<usize>,
}

fn parse_ref(tok: &str) -> Result<Ref, CircuitError> {
    let num = |s: &str| s.parse::<usize>().ok().filter(|&v| v > 0);
    if let Some(i) = tok.strip_prefix('x').and_then(num) {
        Ok(Ref::Input(i))
    } else if let Some(g) = tok.strip_prefix('g').and_then(num) {
        Ok(Ref::Gate(g))
    } else {
        Err(CircuitError::Malformed(format!("bad reference `{tok}`")))
    }
}

impl FromStr for GeneralCircuit {
    type Err = CircuitError;

    fn from_str(text: &str) -> Result<Self, Self::Err> {
        let bad = |m: String| CircuitError::Malformed(m);
        let mut lines = text
            .lines()
            .map(|l| l.split('#').next().unwrap_or("").trim())
            .filter(|l| !l.is_empty());
        if lines.next() != Some("gc v1") {
            return Err(bad("expected header `gc v1`".into()));
        }
        let num_inputs = match lines
            .next()
            .map(|l| l.split_whitespace().collect::<Vec<_>>())
        {
            Some(toks) if toks.len() == 2 && toks[0] == "inputs" => toks[1]
                .parse::<usize>()
                .map_err(|_| bad(format!("bad input count `{}`", toks[1])))?,
            _ => return Err(bad("expected `inputs <m>`".into())),
        };
        let mut gates = Vec::new();
        let mut output = None;
        for line in lines {
            let toks: Vec<&str> = line.split_whitespace().collect();
            match toks.as_slice() {
                ["output", r] => {
                    if output.replace(parse_ref(r)?).is_some() {
                        return Err(bad("more than one output line".into()));
                    }
                }
                [name, "=", op, args @ ..] => {
                    if output.is_some() {
                        return Err(bad("gate after the output line".into()));
                    }
                    let expected = format!("g{}", gates.len() + 1);
                    if *name != expected {
                        return Err(bad(format!("expected gate `{expected}`, found `{name}`")));
                    }
                    let gate = match (*op, args) {
                        ("NOT", [a]) => Gate::Not(parse_ref(a)?),
                        ("AND", [a, b]) => Gate::And(parse_ref(a)?, parse_ref(b)?),
                        _ => return Err(bad(format!("bad gate definition `{line}`"))),
                    };
                    gates.push(gate);
                }
                _ => return Err(bad(format!("unrecognised line `{line}`"))),
            }
        }
        let circuit = GeneralCircuit {
            num_inputs,
            gates,
            output: output.ok_or_else(|| bad("missing `output` line".into()))?,
        };
        circuit.check()?;
        Ok(circuit)
    }
}

/// A random valid circuit with `num_inputs` inputs and `num_gates` gates,
/// whose output is the last gate (or `x1` when there are no gates).
pub fn random_general_circuit(num_inputs: usize, num_gates: usize, seed: u64) -> GeneralCircuit {
    assert!(num_inputs >= 1);
    let mut rng = SplitMix64::new(seed);
    let pick = |rng: &mut SplitMix64, before: usize| {
        let choice = rng.range(0, num_inputs + before - 1);
        if choice < num_inputs {
            Ref::Input(choice + 1)
        } else {
            Ref::Gate(choice - num_inputs + 1)
        }
    };
    let mut gates = Vec::with_capacity(num_gates);
    for k in 0..num_gates {
        let gate = if rng.next_u64().is_multiple_of(3) {
            Gate::Not(pick(&mut rng, k))
        } else {
            Gate::And(pick(&mut rng, k), pick(&mut rng, k))
        };
        gates.push(gate);
    }
    let output = if num_gates == 0 {
        Ref::Input(1)
    } else {
        Ref::Gate(num_gates)
    };
    GeneralCircuit {
        num_inputs,
        gates,
        output,
    }
}
