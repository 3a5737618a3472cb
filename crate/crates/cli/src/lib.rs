//! `qbn` subcommands.
//!
//! Every command takes a network document path or the name of a bundled
//! fixture (`oil4`, `bn3`, ...). Exit codes: 0 success, 1 validation or
//! acceptance failure, 2 usage error, 3 internal error.

use std::fmt::Write as _;
use std::fs;
use std::io::{self, Write};
use std::path::{Path, PathBuf};

use clap::{Args, Parser, Subcommand, ValueEnum};
use qbn_core::sim::{exact_marginals as circuit_marginals, NodeMarginal};
use qbn_core::{
    budget, check_coverage, compile, exact_marginals, parse_network, run_experiment, to_qasm,
    BayesianNetwork, CompileOptions, Error, ExperimentConfig, FixtureId, LoweringLevel,
    RegisterMap, RunReport,
};
use serde_json::json;

pub const EXIT_OK: i32 = 0;
pub const EXIT_FAILURE: i32 = 1;
pub const EXIT_USAGE: i32 = 2;
pub const EXIT_INTERNAL: i32 = 3;

#[derive(Debug, Parser)]
#[command(name = "qbn", version, about = "Compile Bayesian networks into quantum circuits")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Check a network document and list every violation.
    Validate(InputArgs),
    /// Compile a network and report its qubit budget and gate census.
    Compile(CompileArgs),
    /// Sample the compiled circuit and summarize node marginals.
    Simulate(SimulateArgs),
    /// Exact marginals by enumeration.
    Oracle(OutputArgs),
    /// Compare sampled confidence intervals with exact marginals.
    Report(ReportArgs),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum, Default)]
pub enum Format {
    #[default]
    Text,
    Structured,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Level {
    Mcry,
    Elementary,
    Full,
}

impl From<Level> for LoweringLevel {
    fn from(level: Level) -> Self {
        match level {
            Level::Mcry => LoweringLevel::Mcry,
            Level::Elementary => LoweringLevel::Elementary,
            Level::Full => LoweringLevel::Full,
        }
    }
}

#[derive(Debug, Args)]
pub struct InputArgs {
    /// Network document, or a bundled fixture name.
    pub input: String,
}

#[derive(Debug, Args)]
pub struct OutputArgs {
    #[command(flatten)]
    pub input: InputArgs,
    #[arg(long)]
    pub out: Option<PathBuf>,
    #[arg(long, value_enum, default_value_t)]
    pub format: Format,
}

#[derive(Debug, Args)]
pub struct CompileArgs {
    #[command(flatten)]
    pub output: OutputArgs,
    #[arg(long, value_enum, default_value_t = Level::Elementary)]
    pub level: Level,
}

#[derive(Debug, Args, Clone, Copy)]
pub struct SamplingArgs {
    #[arg(long, default_value_t = 8192)]
    pub shots: u64,
    #[arg(long, default_value_t = 10)]
    pub runs: usize,
    /// Base seed; run `i` uses `seed + i`.
    #[arg(long, env = "QBN_SEED", default_value_t = 1)]
    pub seed: u64,
    #[arg(long, default_value_t = 0.05)]
    pub alpha: f64,
    #[arg(long, value_enum, default_value_t = Level::Elementary)]
    pub level: Level,
}

impl SamplingArgs {
    fn config(&self) -> ExperimentConfig {
        ExperimentConfig {
            runs: self.runs,
            shots: self.shots,
            alpha: self.alpha,
            seed: self.seed,
        }
    }
}

#[derive(Debug, Args)]
pub struct SimulateArgs {
    #[command(flatten)]
    pub output: OutputArgs,
    #[command(flatten)]
    pub sampling: SamplingArgs,
    /// Read marginals off the exact statevector instead of sampling.
    #[arg(long)]
    pub exact: bool,
}

#[derive(Debug, Args)]
pub struct ReportArgs {
    #[command(flatten)]
    pub output: OutputArgs,
    #[command(flatten)]
    pub sampling: SamplingArgs,
    /// Take expected marginals from this network instead of the input.
    #[arg(long)]
    pub expected: Option<String>,
}

/// Failure of a command, carrying its exit code.
#[derive(Debug)]
pub struct Failure {
    pub code: i32,
    pub message: String,
}

impl Failure {
    fn usage(message: impl Into<String>) -> Self {
        Failure {
            code: EXIT_USAGE,
            message: message.into(),
        }
    }

    fn internal(message: impl Into<String>) -> Self {
        Failure {
            code: EXIT_INTERNAL,
            message: message.into(),
        }
    }
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        let code = match e {
            Error::TooFewRuns(_) | Error::InvalidAlpha(_) | Error::NoShots(_) => EXIT_USAGE,
            Error::Syntax { .. }
            | Error::Schema(_)
            | Error::Invalid(_)
            | Error::Cycle(_)
            | Error::UnknownNode(_)
            | Error::QubitLimit { .. }
            | Error::EnumerationTooLarge { .. }
            | Error::Circuit(_)
            | Error::Fixture(..) => EXIT_FAILURE,
            _ => EXIT_INTERNAL,
        };
        Failure {
            code,
            message: e.to_string(),
        }
    }
}

impl From<io::Error> for Failure {
    fn from(e: io::Error) -> Self {
        Failure::internal(e.to_string())
    }
}

type CmdResult = std::result::Result<i32, Failure>;

/// Runs a parsed command, writing results to `out`. Returns the exit code.
pub fn run(cli: Cli, out: &mut dyn Write, err: &mut dyn Write) -> i32 {
    let result = match cli.command {
        Command::Validate(a) => cmd_validate(&a, out),
        Command::Compile(a) => cmd_compile(&a, out),
        Command::Simulate(a) => cmd_simulate(&a, out),
        Command::Oracle(a) => cmd_oracle(&a, out),
        Command::Report(a) => cmd_report(&a, out),
    };
    match result {
        Ok(code) => code,
        Err(f) => {
            let _ = writeln!(err, "error: {}", f.message);
            f.code
        }
    }
}

fn read_input(input: &str) -> std::result::Result<String, Failure> {
    let path = Path::new(input);
    if path.exists() {
        return fs::read_to_string(path).map_err(|e| Failure::usage(format!("{input}: {e}")));
    }
    match input.parse::<FixtureId>() {
        Ok(id) => Ok(id.document().to_owned()),
        Err(_) => Err(Failure::usage(format!(
            "{input}: no such file or bundled fixture"
        ))),
    }
}

fn load(input: &str) -> std::result::Result<BayesianNetwork, Failure> {
    Ok(parse_network(&read_input(input)?)?)
}

fn write_file(path: &Path, text: &str) -> std::result::Result<(), Failure> {
    fs::write(path, text).map_err(|e| Failure::usage(format!("{}: {e}", path.display())))
}

fn json_text(value: &serde_json::Value) -> String {
    let mut s = serde_json::to_string_pretty(value).expect("json value");
    s.push('\n');
    s
}

pub fn cmd_validate(args: &InputArgs, out: &mut dyn Write) -> CmdResult {
    let text = read_input(&args.input)?;
    match parse_network(&text) {
        Ok(bn) => {
            writeln!(out, "ok: {} nodes", bn.len())?;
            Ok(EXIT_OK)
        }
        Err(Error::Invalid(violations)) => {
            for v in violations {
                writeln!(out, "violation: {v}")?;
            }
            Ok(EXIT_FAILURE)
        }
        Err(e) => {
            writeln!(out, "{e}")?;
            Ok(EXIT_FAILURE)
        }
    }
}

pub fn cmd_compile(args: &CompileArgs, out: &mut dyn Write) -> CmdResult {
    let bn = load(&args.output.input.input)?;
    let level = LoweringLevel::from(args.level);
    let circuit = compile(&bn, &CompileOptions::level(level))?;
    let map = RegisterMap::for_network(&bn)?;
    let qubits = budget(&bn);
    let census = circuit.census();

    match args.output.format {
        Format::Text => {
            writeln!(
                out,
                "{} qubits ({} node, {} ancilla)",
                qubits.total, qubits.node_qubits, qubits.ancilla_qubits
            )?;
            for reg in map.registers() {
                let qs: Vec<String> = reg.qubits.iter().map(|q| format!("q{q}")).collect();
                writeln!(out, "  {:<8} {}", reg.node.as_str(), qs.join(" "))?;
            }
            writeln!(out, "level {level}: {} gates ({census})", census.total())?;
        }
        Format::Structured => {
            let gates: serde_json::Map<_, _> = census
                .iter()
                .map(|(k, n)| (k.name().to_owned(), json!(n)))
                .collect();
            let value = json!({
                "level": level.to_string(),
                "budget": qubits,
                "registers": map.registers(),
                "ancillas": map.ancillas(),
                "census": gates,
            });
            out.write_all(json_text(&value).as_bytes())?;
        }
    }
    if let Some(path) = &args.output.out {
        write_file(path, &to_qasm(&circuit)?)?;
    }
    Ok(EXIT_OK)
}

fn experiment(
    bn: &BayesianNetwork,
    sampling: &SamplingArgs,
) -> std::result::Result<RunReport, Failure> {
    let circuit = compile(bn, &CompileOptions::level(sampling.level.into()))?;
    let map = RegisterMap::for_network(bn)?;
    Ok(run_experiment(&circuit, &map, &sampling.config())?)
}

fn state_label(node: &str, state: &str) -> String {
    format!("{node}={state}")
}

pub fn cmd_simulate(args: &SimulateArgs, out: &mut dyn Write) -> CmdResult {
    let bn = load(&args.output.input.input)?;
    if args.exact {
        let circuit = compile(
            &bn,
            &CompileOptions::level(args.sampling.level.into()).without_measurements(),
        )?;
        let map = RegisterMap::for_network(&bn)?;
        let marginals = circuit_marginals(&circuit, &map)?;
        let text = json_text(&json!({ "exact": true, "nodes": marginals }));
        match args.output.format {
            Format::Text => out.write_all(marginal_table(&marginals).as_bytes())?,
            Format::Structured => out.write_all(text.as_bytes())?,
        }
        if let Some(path) = &args.output.out {
            write_file(path, &text)?;
        }
        return Ok(EXIT_OK);
    }

    let report = experiment(&bn, &args.sampling)?;
    let text = report.to_json();
    match args.output.format {
        Format::Text => out.write_all(estimate_table(&report).as_bytes())?,
        Format::Structured => out.write_all(text.as_bytes())?,
    }
    if let Some(path) = &args.output.out {
        write_file(path, &text)?;
    }
    Ok(EXIT_OK)
}

fn marginal_table(marginals: &[NodeMarginal]) -> String {
    let mut s = format!("{:<16} {:>12}\n", "Value", "Probability");
    for m in marginals {
        for (state, p) in m.states.iter().zip(&m.probs) {
            let _ = writeln!(s, "{:<16} {:>12.6}", state_label(m.node.as_str(), state), p);
        }
    }
    s
}

fn estimate_table(report: &RunReport) -> String {
    let level = 100.0 * (1.0 - report.alpha);
    let mut s = format!(
        "{} runs x {} shots, seed {}, {}\n{:<16} {:>8} {:>8}   {level}% CI\n",
        report.runs, report.shots, report.seed, report.generator, "Value", "Mean", "SD"
    );
    for node in &report.nodes {
        for e in &node.estimates {
            let _ = writeln!(
                s,
                "{:<16} {:>8.4} {:>8.4}   [{:.4}, {:.4}]",
                state_label(node.node.as_str(), &e.state),
                e.mean,
                e.sd,
                e.ci[0],
                e.ci[1]
            );
        }
    }
    s
}

pub fn cmd_oracle(args: &OutputArgs, out: &mut dyn Write) -> CmdResult {
    let bn = load(&args.input.input)?;
    let marginals = exact_marginals(&bn)?;
    let nodes: Vec<_> = marginals
        .iter()
        .map(|(id, probs)| {
            let states = &bn.node(id.as_str()).expect("node from the same network").states;
            json!({ "node": id, "states": states, "probs": probs })
        })
        .collect();
    let text = json_text(&json!({ "nodes": nodes }));
    match args.format {
        Format::Text => {
            let mut s = format!("{:<16} {:>12}\n", "Value", "Probability");
            for (id, probs) in &marginals {
                let node = bn.node(id.as_str()).expect("node from the same network");
                for (state, p) in node.states.iter().zip(probs) {
                    let _ = writeln!(s, "{:<16} {:>12.6}", state_label(id.as_str(), state), p);
                }
            }
            out.write_all(s.as_bytes())?;
        }
        Format::Structured => out.write_all(text.as_bytes())?,
    }
    if let Some(path) = &args.out {
        write_file(path, &text)?;
    }
    Ok(EXIT_OK)
}

pub fn cmd_report(args: &ReportArgs, out: &mut dyn Write) -> CmdResult {
    let bn = load(&args.output.input.input)?;
    let reference = match &args.expected {
        Some(input) => load(input)?,
        None => bn.clone(),
    };
    let expected = exact_marginals(&reference)?;
    let report = experiment(&bn, &args.sampling)?;
    let coverage = check_coverage(&report, &expected);
    if coverage.rows.is_empty() {
        return Err(Failure {
            code: EXIT_FAILURE,
            message: "no expected marginal matches a node of the input".to_owned(),
        });
    }

    let value = json!({ "report": report, "coverage": coverage });
    let text = json_text(&value);
    match args.output.format {
        Format::Text => {
            let level = 100.0 * (1.0 - report.alpha);
            let mut s = format!(
                "{} runs x {} shots, seed {}\n{:<16} {:>8} {:>8} {:>8}   {:<18} {}\n",
                report.runs, report.shots, report.seed, "Value", "Oracle", "Mean", "SD",
                format!("{level}% CI"), "Covered"
            );
            for r in &coverage.rows {
                let _ = writeln!(
                    s,
                    "{:<16} {:>8.4} {:>8.4} {:>8.4}   [{:.4}, {:.4}]   {}",
                    state_label(r.node.as_str(), &r.state),
                    r.expected,
                    r.mean,
                    r.sd,
                    r.ci[0],
                    r.ci[1],
                    if r.covered { "yes" } else { "NO" }
                );
            }
            let _ = writeln!(s, "{}", if coverage.passed { "PASS" } else { "FAIL" });
            out.write_all(s.as_bytes())?;
        }
        Format::Structured => out.write_all(text.as_bytes())?,
    }
    if let Some(path) = &args.output.out {
        write_file(path, &text)?;
    }
    Ok(if coverage.passed { EXIT_OK } else { EXIT_FAILURE })
}
