//! Shared plumbing of the `ltlf2dfa`, `ltlfsynt` and `ltlfrand` commands.

use std::fmt;
use std::io::Write;
use std::path::{Path, PathBuf};

use clap::{Args, Parser, ValueEnum};

use ltlfsynt::game::{Mode, SolveOptions};
use ltlfsynt::ltlf::{parse, Formula, Partition, Semantics, Vocabulary};
use ltlfsynt::mtdfa::{Context, Mtdfa, Options};
use ltlfsynt::oracle::{random_formulas, seed_from_env};
use ltlfsynt::preprocess::{solve_decomposed, synthesize, PipelineOptions};
use ltlfsynt::Error;

/// Process exit statuses.
pub mod exit {
    pub const OK: i32 = 0;
    pub const FAILURE: i32 = 1;
    pub const USAGE: i32 = 2;
    pub const RESOURCE: i32 = 3;
    pub const INTERNAL: i32 = 4;
}

/// A failure with the exit status it maps to.
#[derive(Debug)]
pub struct CliError {
    pub code: i32,
    pub message: String,
}

impl CliError {
    fn usage(message: impl Into<String>) -> Self {
        CliError {
            code: exit::USAGE,
            message: message.into(),
        }
    }
}

impl fmt::Display for CliError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.message)
    }
}

impl From<Error> for CliError {
    fn from(e: Error) -> Self {
        let code = match e {
            Error::Parse(_)
            | Error::UnknownVariable(_)
            | Error::Partition(_)
            | Error::Dump { .. }
            | Error::InvalidOrder(_) => exit::USAGE,
            Error::Resource(_) => exit::RESOURCE,
            Error::Strategy(_) => exit::INTERNAL,
            _ => exit::FAILURE,
        };
        CliError {
            code,
            message: e.to_string(),
        }
    }
}

impl From<std::io::Error> for CliError {
    fn from(e: std::io::Error) -> Self {
        CliError {
            code: exit::FAILURE,
            message: e.to_string(),
        }
    }
}

pub type CliResult<T = ()> = Result<T, CliError>;

#[derive(Args, Debug, Clone)]
pub struct FormulaArgs {
    /// LTLf formula.
    #[arg(required_unless_present = "file", conflicts_with = "file")]
    pub formula: Option<String>,
    /// Read the formula from a file.
    #[arg(short = 'F', long, value_name = "FILE")]
    pub file: Option<PathBuf>,
}

impl FormulaArgs {
    pub fn load(&self) -> CliResult<Formula> {
        let text = match (&self.formula, &self.file) {
            (Some(f), _) => f.clone(),
            (None, Some(path)) => std::fs::read_to_string(path)
                .map_err(|e| CliError::usage(format!("{}: {e}", path.display())))?,
            (None, None) => return Err(CliError::usage("no formula given")),
        };
        Ok(parse(&text).map_err(Error::from)?)
    }
}

#[derive(Args, Debug, Clone, Default)]
pub struct PartitionArgs {
    /// Comma-separated input variables.
    #[arg(long, value_delimiter = ',', value_name = "VARS")]
    pub ins: Option<Vec<String>>,
    /// Comma-separated output variables.
    #[arg(long, value_delimiter = ',', value_name = "VARS")]
    pub outs: Option<Vec<String>>,
    /// Treat variables named `i...` as inputs and `o...` as outputs.
    #[arg(long, conflicts_with_all = ["ins", "outs"])]
    pub infer_partition: bool,
}

impl PartitionArgs {
    fn given(&self) -> bool {
        self.ins.is_some() || self.outs.is_some() || self.infer_partition
    }

    /// The partition of `f`'s variables. Variables of `f` missing from
    /// both lists are an error.
    pub fn partition(&self, f: Formula) -> CliResult<Partition> {
        let p = if self.infer_partition {
            Partition::infer_from_prefix(f)?
        } else {
            let clean = |v: &Option<Vec<String>>| -> Vec<String> {
                v.iter()
                    .flatten()
                    .map(|s| s.trim().to_owned())
                    .filter(|s| !s.is_empty())
                    .collect()
            };
            Partition::new(clean(&self.ins), clean(&self.outs))
        };
        p.validate(f)?;
        Ok(p)
    }
}

#[derive(Args, Debug, Clone, Default)]
pub struct TranslationArgs {
    /// Disable the absorption rewrites applied to state formulas.
    #[arg(long)]
    pub no_rewrites: bool,
    /// Give up after translating this many states.
    #[arg(long, value_name = "N")]
    pub max_states: Option<usize>,
    /// Give up once the node table holds this many nodes.
    #[arg(long, value_name = "N")]
    pub max_nodes: Option<usize>,
}

impl TranslationArgs {
    pub fn options(&self) -> Options {
        Options {
            rewrites: !self.no_rewrites,
            max_states: self.max_states,
            max_nodes: self.max_nodes,
            ..Options::default()
        }
    }
}

#[derive(Args, Debug, Clone, Default)]
pub struct ArtifactArgs {
    /// Write the automaton in Graphviz format (`-` for standard output).
    #[arg(long, value_name = "FILE")]
    pub dot: Option<PathBuf>,
    /// Write the automaton as a text dump (`-` for standard output).
    #[arg(long, value_name = "FILE")]
    pub text: Option<PathBuf>,
}

impl ArtifactArgs {
    fn wanted(&self) -> bool {
        self.dot.is_some() || self.text.is_some()
    }

    fn write(&self, aut: &Mtdfa, ctx: &Context, out: &mut dyn Write) -> CliResult {
        if let Some(path) = &self.dot {
            emit(path, &aut.to_dot(ctx), out)?;
        }
        if let Some(path) = &self.text {
            emit(path, &aut.to_text(ctx), out)?;
        }
        Ok(())
    }
}

fn emit(path: &Path, content: &str, out: &mut dyn Write) -> CliResult {
    if path == Path::new("-") {
        out.write_all(content.as_bytes())?;
    } else {
        std::fs::write(path, content).map_err(|e| CliError {
            code: exit::FAILURE,
            message: format!("{}: {e}", path.display()),
        })?;
    }
    Ok(())
}

#[derive(ValueEnum, Debug, Clone, Copy, Default, PartialEq, Eq)]
pub enum SemanticsArg {
    #[default]
    Mealy,
    Moore,
}

impl From<SemanticsArg> for Semantics {
    fn from(s: SemanticsArg) -> Self {
        match s {
            SemanticsArg::Mealy => Semantics::Mealy,
            SemanticsArg::Moore => Semantics::Moore,
        }
    }
}

#[derive(ValueEnum, Debug, Clone, Copy, Default, PartialEq, Eq)]
pub enum ModeArg {
    #[default]
    Bfs,
    Full,
}

impl From<ModeArg> for Mode {
    fn from(m: ModeArg) -> Self {
        match m {
            ModeArg::Bfs => Mode::Bfs,
            ModeArg::Full => Mode::Full,
        }
    }
}

/// Translate an LTLf formula into an automaton whose transitions are
/// stored as one decision diagram per state.
#[derive(Parser, Debug)]
#[command(name = "ltlf2dfa", version)]
pub struct Ltlf2Dfa {
    #[command(flatten)]
    pub formula: FormulaArgs,
    /// Optional partition; it fixes the variable order (inputs first for
    /// Mealy semantics, outputs first for Moore).
    #[command(flatten)]
    pub partition: PartitionArgs,
    #[arg(long, value_enum, default_value_t)]
    pub semantics: SemanticsArg,
    #[command(flatten)]
    pub translation: TranslationArgs,
    /// Merge states with identical transition diagrams.
    #[arg(long)]
    pub merge: bool,
    #[command(flatten)]
    pub artifacts: ArtifactArgs,
}

pub fn run_ltlf2dfa(cli: &Ltlf2Dfa, out: &mut dyn Write) -> CliResult {
    let f = cli.formula.load()?;
    let opts = cli.translation.options();
    let mut ctx = if cli.partition.given() {
        let part = cli.partition.partition(f)?;
        Context::for_partition(&part, cli.semantics.into(), opts)?
    } else {
        Context::for_formula(f, opts)?
    };
    let mut aut = Mtdfa::translate(&mut ctx, f)?;
    if cli.merge {
        aut = aut.merge_identical_states(&mut ctx)?;
    }
    writeln!(out, "states={}", aut.num_states())?;
    writeln!(out, "nodes={}", aut.node_count(&ctx))?;
    cli.artifacts.write(&aut, &ctx, out)
}

/// Decide whether an LTLf specification is realizable, and optionally
/// print a controller.
#[derive(Parser, Debug)]
#[command(name = "ltlfsynt", version)]
pub struct Ltlfsynt {
    #[command(flatten)]
    pub formula: FormulaArgs,
    #[command(flatten)]
    pub partition: PartitionArgs,
    #[arg(long, value_enum, default_value_t)]
    pub semantics: SemanticsArg,
    #[arg(long, value_enum, default_value_t)]
    pub mode: ModeArg,
    /// Skip simplification and polarity-based variable removal.
    #[arg(long)]
    pub no_preprocess: bool,
    /// Solve the specification as a whole instead of by output-disjoint
    /// parts.
    #[arg(long)]
    pub no_decompose: bool,
    /// Skip the propositional checks made before translating a state.
    #[arg(long)]
    pub no_onestep: bool,
    /// Keep exploring after the initial state is decided.
    #[arg(long)]
    pub no_early_exit: bool,
    #[command(flatten)]
    pub translation: TranslationArgs,
    /// Print solver statistics after the verdict.
    #[arg(long)]
    pub stats: bool,
    /// Print a controller when the specification is realizable.
    #[arg(long)]
    pub strategy: bool,
    /// Parts solved in parallel (default: available cores).
    #[arg(long, value_name = "N")]
    pub threads: Option<usize>,
    #[command(flatten)]
    pub artifacts: ArtifactArgs,
}

impl Ltlfsynt {
    pub fn pipeline_options(&self) -> PipelineOptions {
        PipelineOptions {
            solve: SolveOptions {
                mode: self.mode.into(),
                one_step: !self.no_onestep,
                early_exit: !self.no_early_exit,
                translation: self.translation.options(),
            },
            preprocess: !self.no_preprocess,
            decompose: !self.no_decompose,
            threads: self
                .threads
                .unwrap_or_else(|| std::thread::available_parallelism().map_or(1, |n| n.get())),
        }
    }
}

pub fn run_ltlfsynt(cli: &Ltlfsynt, out: &mut dyn Write) -> CliResult {
    let f = cli.formula.load()?;
    if !cli.partition.given() && !f.atoms().is_empty() {
        return Err(CliError::usage("give --ins and --outs, or --infer-partition"));
    }
    let part = cli.partition.partition(f)?;
    let sem: Semantics = cli.semantics.into();
    let opts = cli.pipeline_options();
    let (result, machine) = if cli.strategy {
        synthesize(f, &part, sem, &opts)?
    } else {
        (solve_decomposed(f, &part, sem, &opts)?, None)
    };
    writeln!(out, "{}", result.status)?;
    if cli.stats {
        writeln!(out, "{}", result.stats)?;
    }
    if let Some(m) = machine {
        m.check_terminates()?;
        write!(out, "{m}")?;
    }
    if cli.artifacts.wanted() {
        let mut ctx = Context::for_partition(&part, sem, opts.solve.translation)?;
        let aut = Mtdfa::translate(&mut ctx, f)?;
        cli.artifacts.write(&aut, &ctx, out)?;
    }
    Ok(())
}

/// Print seeded random LTLf formulas, one per line.
#[derive(Parser, Debug)]
#[command(name = "ltlfrand", version)]
pub struct Ltlfrand {
    /// Comma-separated variable names.
    #[arg(long, value_delimiter = ',', default_value = "a,b")]
    pub atoms: Vec<String>,
    /// Largest syntax tree size.
    #[arg(long, default_value_t = 10)]
    pub size: usize,
    #[arg(long, short = 'n', default_value_t = 10)]
    pub count: usize,
    /// Seed; defaults to LTLFSYNT_SEED, then 0.
    #[arg(long)]
    pub seed: Option<u64>,
}

pub fn run_ltlfrand(cli: &Ltlfrand, out: &mut dyn Write) -> CliResult {
    if cli.size == 0 {
        return Err(CliError::usage("--size must be at least 1"));
    }
    let atoms: Vec<&str> = cli.atoms.iter().map(|s| s.trim()).filter(|s| !s.is_empty()).collect();
    if atoms.is_empty() {
        return Err(CliError::usage("no atoms"));
    }
    Vocabulary::from_names(&atoms)?;
    let seed = cli.seed.unwrap_or_else(|| seed_from_env(0));
    for f in random_formulas(seed, &atoms, cli.size, cli.count) {
        writeln!(out, "{f}")?;
    }
    Ok(())
}

/// Parses the arguments, runs `body`, and turns its outcome (including a
/// panic) into an exit status.
pub fn main_with<C: Parser>(body: fn(&C, &mut dyn Write) -> CliResult) -> i32 {
    let cli = C::parse();
    let stdout = std::io::stdout();
    let outcome = std::panic::catch_unwind(std::panic::AssertUnwindSafe(|| {
        let mut lock = stdout.lock();
        let r = body(&cli, &mut lock);
        lock.flush().map_err(CliError::from).and(r)
    }));
    match outcome {
        Ok(Ok(())) => exit::OK,
        Ok(Err(e)) => {
            eprintln!("error: {e}");
            e.code
        }
        Err(_) => {
            eprintln!("error: internal failure");
            exit::INTERNAL
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn synt(args: &[&str]) -> (CliResult, String) {
        let cli = Ltlfsynt::try_parse_from(std::iter::once("ltlfsynt").chain(args.iter().copied())).unwrap();
        let mut out = Vec::new();
        let r = run_ltlfsynt(&cli, &mut out);
        (r, String::from_utf8(out).unwrap())
    }

    #[test]
    fn first_line_is_the_verdict() {
        let (r, out) = synt(&["G(i -> o)", "--ins", "i", "--outs", "o"]);
        assert!(r.is_ok());
        assert_eq!(out.lines().next(), Some("REALIZABLE"));
        let (_, out) = synt(&["ff"]);
        assert_eq!(out, "UNREALIZABLE\n");
    }

    #[test]
    fn errors_map_to_statuses() {
        let (r, _) = synt(&["G(i -> ", "--ins", "i"]);
        assert_eq!(r.unwrap_err().code, exit::USAGE);
        let (r, _) = synt(&["G(i -> o)", "--ins", "i"]);
        assert_eq!(r.unwrap_err().code, exit::USAGE);
        let (r, _) = synt(&["G(i -> o)"]);
        assert_eq!(r.unwrap_err().code, exit::USAGE);
        let (r, _) = synt(&[
            "X[!] X[!] X[!] o",
            "--ins",
            "i",
            "--outs",
            "o",
            "--no-onestep",
            "--no-early-exit",
            "--no-preprocess",
            "--max-states",
            "1",
        ]);
        assert_eq!(r.unwrap_err().code, exit::RESOURCE);
    }

    #[test]
    fn partition_inference_is_opt_in() {
        let (r, out) = synt(&["G(i1 -> X o1)", "--infer-partition"]);
        assert!(r.is_ok());
        assert_eq!(out, "REALIZABLE\n");
        let (r, _) = synt(&["G(a -> X o1)", "--infer-partition"]);
        assert_eq!(r.unwrap_err().code, exit::USAGE);
    }
}
