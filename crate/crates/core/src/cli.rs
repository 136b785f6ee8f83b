//! Command-line front end.

use crate::engine::{synthesize, EngineError, Options};
use crate::explorer::Exploration;
use crate::extract::{
    encode, extract_mealy, portfolio, read_aiger, reduce_mealy, to_circuit, Circuit, Encoding, MealyMachine,
};
use crate::ltl::{parse, Alphabet};
use crate::solver::Player;
use crate::verify::{verify_controller, Completion};
use clap::{Parser, ValueEnum};
use std::io::Write;
use std::path::PathBuf;
use std::time::Instant;

pub const EXIT_REALIZABLE: i32 = 10;
pub const EXIT_UNREALIZABLE: i32 = 20;
pub const EXIT_ERROR: i32 = 1;
pub const EXIT_VERIFY_FAILED: i32 = 2;

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum Mode {
    Realizability,
    Synthesis,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum OutputFormat {
    Mealy,
    Aag,
    None,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum EncodingArg {
    Unstructured,
    Structured,
    Portfolio,
}

#[derive(Parser, Debug)]
#[command(name = "lsynth", version, about = "LTL reactive synthesis")]
pub struct Args {
    /// Input propositions, comma separated (may be empty).
    #[arg(long)]
    pub ins: Option<String>,
    /// Output propositions, comma separated.
    #[arg(long)]
    pub outs: Option<String>,
    /// The LTL formula.
    #[arg(long, conflicts_with = "file")]
    pub formula: Option<String>,
    /// Specification file with INPUTS:, OUTPUTS: and LTL: sections.
    #[arg(short = 'f', long = "file")]
    pub file: Option<PathBuf>,
    #[arg(long, value_enum, default_value_t = Mode::Realizability)]
    pub mode: Mode,
    /// Order of expansion: bfs, bfs+, pq or pq+.
    #[arg(long, default_value = "bfs", value_parser = clap::builder::ValueParser::new(parse_exploration))]
    pub exploration: Exploration,
    #[arg(long, value_enum, default_value_t = OutputFormat::Aag)]
    pub output: OutputFormat,
    #[arg(long, value_enum, default_value_t = EncodingArg::Portfolio)]
    pub encoding: EncodingArg,
    /// Merge compatible Mealy states before encoding.
    #[arg(long)]
    pub reduce: bool,
    /// Model-check the controller against the specification automaton.
    #[arg(long)]
    pub verify: bool,
    /// Give up after exploring this many environment nodes.
    #[arg(long, default_value_t = 1_000_000)]
    pub max_states: usize,
    /// Print statistics to standard error.
    #[arg(long)]
    pub stats: bool,
    /// Write the controller to this file instead of standard output.
    #[arg(short = 'o', long = "out-file")]
    pub out_file: Option<PathBuf>,
}

fn parse_exploration(s: &str) -> Result<Exploration, String> {
    s.parse()
}

/// Specification read from a file.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SpecFile {
    pub inputs: Vec<String>,
    pub outputs: Vec<String>,
    pub ltl: String,
}

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
#[error("specification file, line {line}: {msg}")]
pub struct SpecFileError {
    pub line: usize,
    pub msg: String,
}

/// Comma-separated names; blanks are skipped.
pub fn split_names(s: &str) -> Vec<String> {
    s.split(',').map(str::trim).filter(|n| !n.is_empty()).map(String::from).collect()
}

impl SpecFile {
    /// Sections `INPUTS:`, `OUTPUTS:` and `LTL:` in any order, each used once;
    /// a section's text runs until the next section. `#` starts a comment.
    pub fn parse(text: &str) -> Result<SpecFile, SpecFileError> {
        const KEYS: [&str; 3] = ["INPUTS:", "OUTPUTS:", "LTL:"];
        let mut bodies: [Option<String>; 3] = [None, None, None];
        let mut current: Option<usize> = None;
        for (k, raw) in text.lines().enumerate() {
            let line = raw.split('#').next().unwrap_or("").trim();
            if line.is_empty() {
                continue;
            }
            let mut rest = line;
            if let Some(s) = KEYS.iter().position(|key| line.starts_with(key)) {
                if bodies[s].is_some() {
                    return Err(SpecFileError { line: k + 1, msg: format!("duplicate section {}", KEYS[s]) });
                }
                bodies[s] = Some(String::new());
                current = Some(s);
                rest = line[KEYS[s].len()..].trim();
            }
            let Some(s) = current else {
                return Err(SpecFileError { line: k + 1, msg: "text outside of a section".into() });
            };
            let body = bodies[s].as_mut().expect("section opened");
            if !rest.is_empty() {
                if !body.is_empty() {
                    body.push(if s == 2 { ' ' } else { ',' });
                }
                body.push_str(rest);
            }
        }
        let [inputs, outputs, ltl] = bodies;
        let missing = |key: &str| SpecFileError { line: text.lines().count(), msg: format!("missing section {key}") };
        let ltl = ltl.ok_or_else(|| missing("LTL:"))?;
        if ltl.trim().is_empty() {
            return Err(missing("LTL:"));
        }
        Ok(SpecFile {
            inputs: split_names(&inputs.ok_or_else(|| missing("INPUTS:"))?),
            outputs: split_names(&outputs.ok_or_else(|| missing("OUTPUTS:"))?),
            ltl,
        })
    }
}

/// Failure of a run, with the exit code it maps to.
struct Failure {
    code: i32,
    msg: String,
}

fn fail(msg: impl Into<String>) -> Failure {
    Failure { code: EXIT_ERROR, msg: msg.into() }
}

fn load(args: &Args) -> Result<SpecFile, Failure> {
    let mut spec = match &args.file {
        Some(path) => {
            let text =
                std::fs::read_to_string(path).map_err(|e| fail(format!("cannot read {}: {e}", path.display())))?;
            SpecFile::parse(&text).map_err(|e| fail(e.to_string()))?
        }
        None => SpecFile {
            inputs: Vec::new(),
            outputs: Vec::new(),
            ltl: args.formula.clone().ok_or_else(|| fail("no formula given (use --formula or -f)"))?,
        },
    };
    if let Some(ins) = &args.ins {
        spec.inputs = split_names(ins);
    }
    if let Some(outs) = &args.outs {
        spec.outputs = split_names(outs);
    }
    Ok(spec)
}

fn emit(args: &Args, stdout: &mut dyn Write, text: &str) -> Result<(), Failure> {
    match &args.out_file {
        Some(path) => std::fs::write(path, text).map_err(|e| fail(format!("cannot write {}: {e}", path.display()))),
        None => stdout.write_all(text.as_bytes()).map_err(|e| fail(format!("cannot write output: {e}"))),
    }
}

fn circuit_for(args: &Args, m: &MealyMachine) -> Result<Circuit, Failure> {
    match args.encoding {
        EncodingArg::Portfolio => {
            let p = portfolio(m);
            log::info!("portfolio sizes {:?}, chose {:?}", p.sizes, p.best);
            Ok(p.circuit)
        }
        EncodingArg::Unstructured | EncodingArg::Structured => {
            let mode =
                if args.encoding == EncodingArg::Structured { Encoding::Structured } else { Encoding::Unstructured };
            let enc = encode(m, mode).map_err(|e| fail(format!("encoding failed: {e}")))?;
            Ok(to_circuit(m, &enc))
        }
    }
}

fn execute(args: &Args, stdout: &mut dyn Write) -> Result<i32, Failure> {
    let start = Instant::now();
    let spec = load(args)?;
    let alphabet =
        Alphabet::new(&spec.inputs, &spec.outputs).map_err(|e| fail(format!("invalid propositions: {e}")))?;
    let formula = parse(&spec.ltl, &alphabet).map_err(|e| fail(format!("parse error: {e}")))?;
    let options = Options { exploration: args.exploration, max_states: args.max_states, ..Options::default() };
    let outcome = synthesize(&formula, &alphabet, &options).map_err(|e| match e {
        EngineError::Build(e) => fail(format!("unsupported specification: {e}")),
        EngineError::StateLimit(n) => fail(format!("resource limit: more than {n} states explored")),
        EngineError::Internal(msg) => fail(format!("internal error: {msg}")),
    })?;
    let realizable = outcome.winner == Player::Controller;
    let verdict = if realizable { "REALIZABLE" } else { "UNREALIZABLE" };
    writeln!(stdout, "{verdict}").map_err(|e| fail(format!("cannot write output: {e}")))?;
    let code = if realizable { EXIT_REALIZABLE } else { EXIT_UNREALIZABLE };
    let mut verified = true;
    if realizable && (args.mode == Mode::Synthesis || args.verify) {
        let raw = extract_mealy(&outcome.arena, &outcome.strategy, &outcome.dpa)
            .map_err(|e| fail(format!("internal error: {e}")))?;
        let m = if args.reduce { reduce_mealy(&raw) } else { raw };
        if args.verify {
            verified &= verify_controller(&m, &outcome.dpa, Completion::All).unwrap_or(false);
        }
        if args.mode == Mode::Synthesis {
            match args.output {
                OutputFormat::Mealy => emit(args, stdout, &m.dump())?,
                OutputFormat::Aag => {
                    let text = circuit_for(args, &m)?.to_string();
                    if args.verify {
                        // Check what was written, not what was built.
                        verified &= read_aiger(&text).is_ok_and(|c| {
                            verify_controller(&c.to_mealy(&alphabet), &outcome.dpa, Completion::Default)
                                .unwrap_or(false)
                        });
                    }
                    emit(args, stdout, &text)?;
                }
                OutputFormat::None => {}
            }
        }
    }
    if args.stats {
        let s = &outcome.stats;
        eprintln!(
            "env nodes: {}\nnodes: {}\niterations: {}\nsolver calls: {}\nimprovements: {}\nwall time: {:.3}s",
            s.env_nodes,
            s.nodes,
            s.iterations,
            s.solver_calls,
            s.improvements,
            start.elapsed().as_secs_f64()
        );
    }
    if !verified {
        return Err(Failure { code: EXIT_VERIFY_FAILED, msg: "verification failed".into() });
    }
    Ok(code)
}

/// Run with command-line arguments (program name first) and return the exit code.
pub fn run<I, T>(argv: I, stdout: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<std::ffi::OsString> + Clone,
{
    let args = match Args::try_parse_from(argv) {
        Ok(a) => a,
        Err(e) => {
            let code = if e.use_stderr() { EXIT_ERROR } else { 0 };
            let _ = e.print();
            return code;
        }
    };
    match execute(&args, stdout) {
        Ok(code) => code,
        Err(f) => {
            eprintln!("error: {}", f.msg);
            f.code
        }
    }
}
