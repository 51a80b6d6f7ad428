use std::fs;
use std::io::{self, Read};
use std::path::Path;
use std::process::ExitCode;

use anyhow::{anyhow, bail, Context, Result};
use clap::{Args, Parser, Subcommand, ValueEnum};
use rayon::prelude::*;

use trellis::circuit::{enumerate_circuits, GeneralCircuit, SequentialNorCircuit};
use trellis::grammar::{self, BooleanGrammar, Conversion};
use trellis::verify::{check_circuit, SweepReport, MAX_SWEEP_N};
use trellis::{eleven_state, encoding, Mode, RenderedTrellis, TrellisAutomaton};

/// Trellis automata, NOR circuits and Boolean grammars.
#[derive(Parser)]
#[command(name = "trellis", version)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Evaluate a circuit file (`snc v1`, or `gc v1` with --inputs).
    Eval {
        /// Circuit file, or `-` for stdin.
        file: String,
        /// Input bits for a `gc v1` circuit, e.g. `0110`.
        #[arg(long)]
        inputs: Option<String>,
    },
    /// Run a trellis automaton on a string.
    Run {
        /// `builtin:eleven-state` or a `trellis-automaton v1` file.
        #[arg(long, default_value = "builtin:eleven-state")]
        automaton: String,
        #[arg(long)]
        input: String,
        /// Print the whole trellis.
        #[arg(long)]
        render: bool,
        /// Fail instead of substituting a default state for unspecified transitions.
        #[arg(long)]
        strict: bool,
    },
    /// Encode an `snc v1` circuit as a string.
    Encode {
        #[arg(long, value_enum, default_value_t = Scheme::V2)]
        scheme: Scheme,
        /// Circuit file; stdin if omitted.
        file: Option<String>,
    },
    /// Decode a string into an `snc v1` circuit.
    Decode {
        #[arg(long, value_enum, default_value_t = Scheme::V2)]
        scheme: Scheme,
        /// Encoded string; stdin if omitted.
        text: Option<String>,
    },
    /// Check the eleven-state automaton against every circuit up to a size.
    Verify(VerifyArgs),
    /// Grammar conversion, bounded solving and recognition.
    #[command(subcommand)]
    Grammar(GrammarCommand),
}

#[derive(Clone, Copy, ValueEnum)]
enum Scheme {
    V1,
    V2,
}

#[derive(Args)]
struct VerifyArgs {
    /// Largest circuit size, 2 to 10.
    #[arg(long, value_parser = clap::value_parser!(u64).range(2..=MAX_SWEEP_N as u64))]
    max_n: u64,
    /// Worker threads; 0 uses every core.
    #[arg(long, default_value_t = 0)]
    jobs: usize,
    /// Largest size for the per-cell lemma check.
    #[arg(long, default_value_t = 6)]
    lemma_max_n: usize,
}

#[derive(Subcommand)]
enum GrammarCommand {
    /// Convert a trellis automaton to a linear conjunctive grammar.
    Convert {
        /// `builtin:eleven-state` or a `trellis-automaton v1` file.
        automaton: String,
        /// Keep rules that can never apply.
        #[arg(long)]
        literal: bool,
    },
    /// List the members of every nonterminal up to a length.
    Solve {
        /// `builtin:<name>` or a grammar file.
        grammar: String,
        #[arg(long)]
        max_len: usize,
    },
    /// Decide membership for each string (arguments, or stdin lines).
    Recognize {
        grammar: String,
        inputs: Vec<String>,
    },
}

fn read_source(path: &str) -> Result<String> {
    if path == "-" {
        let mut s = String::new();
        io::stdin().read_to_string(&mut s)?;
        Ok(s)
    } else {
        fs::read_to_string(Path::new(path)).with_context(|| format!("cannot read `{path}`"))
    }
}

fn load_automaton(spec: &str) -> Result<TrellisAutomaton> {
    match spec.strip_prefix("builtin:") {
        Some("eleven-state") => Ok(eleven_state::build()),
        Some(other) => bail!("unknown builtin automaton `{other}`"),
        None => read_source(spec)?
            .parse()
            .with_context(|| format!("cannot parse automaton `{spec}`")),
    }
}

fn load_grammar(spec: &str) -> Result<BooleanGrammar> {
    match spec.strip_prefix("builtin:") {
        Some(name) => Ok(grammar::builtin(name)?),
        None => read_source(spec)?
            .parse()
            .with_context(|| format!("cannot parse grammar `{spec}`")),
    }
}

fn bits(values: &[bool]) -> String {
    let v: Vec<&str> = values.iter().map(|&b| if b { "1" } else { "0" }).collect();
    v.join(" ")
}

fn eval(file: &str, inputs: Option<&str>) -> Result<ExitCode> {
    let text = read_source(file)?;
    let header = text
        .lines()
        .map(|l| l.split('#').next().unwrap_or("").trim())
        .find(|l| !l.is_empty())
        .unwrap_or("");
    if header == "gc v1" {
        let circuit: GeneralCircuit = text.parse()?;
        let raw = inputs.ok_or_else(|| anyhow!("a `gc v1` circuit needs --inputs"))?;
        let values = raw
            .chars()
            .filter(|c| !c.is_whitespace() && *c != ',')
            .map(|c| match c {
                '0' => Ok(false),
                '1' => Ok(true),
                _ => Err(anyhow!("input bits must be 0 or 1, found {c:?}")),
            })
            .collect::<Result<Vec<bool>>>()?;
        let compiled = circuit.compile(&values)?;
        let direct = circuit.evaluate(&values)?;
        let gates = compiled.circuit.evaluate();
        if gates.output() != direct {
            bail!("compiled circuit disagrees with direct evaluation");
        }
        println!("{}", bits(&gates.0));
        println!("compiled: {}", compiled.circuit);
        println!("value: {}", u8::from(direct));
    } else {
        if inputs.is_some() {
            bail!("--inputs only applies to `gc v1` circuits");
        }
        let circuit: SequentialNorCircuit = text.parse()?;
        let values = circuit.evaluate();
        println!("{}", bits(&values.0));
        println!("value: {}", u8::from(values.output()));
    }
    Ok(ExitCode::SUCCESS)
}

fn run(spec: &str, input: &str, render: bool, strict: bool) -> Result<ExitCode> {
    let automaton = load_automaton(spec)?;
    let mode = if strict { Mode::Strict } else { Mode::Lenient };
    let trellis = automaton.run(input, mode)?;
    let accepted = automaton.is_final(trellis.apex());
    if render {
        let descriptions = (spec.starts_with("builtin:")).then(eleven_state::descriptions);
        print!(
            "{}",
            RenderedTrellis::new(&automaton, &trellis, descriptions.as_deref())
        );
        println!();
    }
    let fired = trellis.fired_unspecified().len();
    if fired > 0 {
        eprintln!("note: {fired} unspecified transition(s) replaced by the default state");
    }
    println!("{}", if accepted { "accept" } else { "reject" });
    Ok(if accepted {
        ExitCode::SUCCESS
    } else {
        ExitCode::from(1)
    })
}

fn encode(scheme: Scheme, file: Option<&str>) -> Result<ExitCode> {
    let circuit: SequentialNorCircuit = read_source(file.unwrap_or("-"))?.parse()?;
    let text = match scheme {
        Scheme::V1 => encoding::encode_v1(&circuit),
        Scheme::V2 => encoding::encode_v2(&circuit),
    };
    println!("{text}");
    Ok(ExitCode::SUCCESS)
}

fn decode(scheme: Scheme, text: Option<&str>) -> Result<ExitCode> {
    let raw = match text {
        Some(t) => t.to_owned(),
        None => read_source("-")?,
    };
    let raw = raw.trim();
    let circuit = match scheme {
        Scheme::V1 => encoding::decode_v1(raw),
        Scheme::V2 => encoding::decode_v2(raw),
    }?;
    print!("{}", circuit.to_text());
    Ok(ExitCode::SUCCESS)
}

fn verify(args: &VerifyArgs) -> Result<ExitCode> {
    let max_n = args.max_n as usize;
    let automaton = eleven_state::build();
    let pool = rayon::ThreadPoolBuilder::new()
        .num_threads(args.jobs)
        .build()?;
    let mut report = SweepReport::default();
    for n in 2..=max_n {
        let circuits: Vec<SequentialNorCircuit> = enumerate_circuits(n)?.collect();
        let lemma = n <= args.lemma_max_n;
        let results: Vec<_> = pool.install(|| {
            circuits
                .par_iter()
                .map(|c| check_circuit(&automaton, c, lemma))
                .collect()
        });
        for (c, found) in circuits.iter().zip(results) {
            report.record(c, lemma, found);
        }
    }
    for (n, count) in &report.per_size {
        println!("n={n}: {count} circuits");
    }
    println!("circuits checked: {}", report.circuits);
    println!("lemma checked: {}", report.lemma_checked);
    println!("value 1: {}", report.accepted);
    println!("mismatches: {}", report.mismatches.len());
    for m in &report.mismatches {
        println!("  {m}");
    }
    Ok(if report.is_clean() {
        ExitCode::SUCCESS
    } else {
        ExitCode::from(1)
    })
}

fn show_string(w: &str) -> &str {
    if w.is_empty() {
        "ε"
    } else {
        w
    }
}

fn grammar_command(cmd: &GrammarCommand) -> Result<ExitCode> {
    match cmd {
        GrammarCommand::Convert { automaton, literal } => {
            let m = load_automaton(automaton)?;
            let conv = if *literal {
                Conversion::Literal
            } else {
                Conversion::Trimmed
            };
            let g = grammar::ta_to_grammar(&m, conv);
            print!("{g}");
            println!(
                "# nonterminals: {}, rules: {}",
                g.nonterminals().len(),
                g.rule_count()
            );
        }
        GrammarCommand::Solve {
            grammar: spec,
            max_len,
        } => {
            let g = load_grammar(spec)?;
            let lang = grammar::solve_bounded(&g, *max_len)?;
            for (a, name) in g.nonterminals().iter().enumerate() {
                let members: Vec<String> = lang
                    .members_at(a)
                    .iter()
                    .map(|w| show_string(w).to_owned())
                    .collect();
                println!("{name} ({}): {}", members.len(), members.join(" "));
            }
        }
        GrammarCommand::Recognize {
            grammar: spec,
            inputs,
        } => {
            let g = load_grammar(spec)?;
            let lines: Vec<String> = if inputs.is_empty() {
                read_source("-")?
                    .lines()
                    .map(|l| l.trim().to_owned())
                    .collect()
            } else {
                inputs.clone()
            };
            let linear = g.is_linear();
            for w in &lines {
                let member = if linear {
                    grammar::recognize_linear(&g, w)?
                } else {
                    grammar::recognize(&g, w)?
                };
                let verdict = if member { "member" } else { "non-member" };
                println!("{}: {verdict}", show_string(w));
            }
        }
    }
    Ok(ExitCode::SUCCESS)
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let outcome = match &cli.command {
        Command::Eval { file, inputs } => eval(file, inputs.as_deref()),
        Command::Run {
            automaton,
            input,
            render,
            strict,
        } => run(automaton, input, *render, *strict),
        Command::Encode { scheme, file } => encode(*scheme, file.as_deref()),
        Command::Decode { scheme, text } => decode(*scheme, text.as_deref()),
        Command::Verify(args) => verify(args),
        Command::Grammar(cmd) => grammar_command(cmd),
    };
    match outcome {
        Ok(code) => code,
        Err(e) => {
            eprintln!("error: {e:#}");
            ExitCode::from(2)
        }
    }
}
