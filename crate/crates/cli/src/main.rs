use std::io::Read;
use std::path::PathBuf;
use std::process::ExitCode;
use std::time::Duration;

use clap::{Args, Parser, Subcommand};
use num_bigint::BigUint;
use wdtab::engine::{Config, EngineError, Termination};
use wdtab::formula::{parse, Formula};
use wdtab::saturation::LogicId;

mod bench;
mod output;
mod selftest;

use output::{Format, Verdict};

/// Decide satisfiability and validity in bimodal logics of weak density.
#[derive(Parser, Debug)]
#[command(name = "wdtab", version)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Decide satisfiability; a satisfiable answer carries a certified model.
    Sat(Single),
    /// Decide validity; an invalid answer carries a certified countermodel.
    Valid(Single),
    /// Print only the model of a satisfiable formula.
    Model(Single),
    /// Decide every formula of a file (one per line, `#` starts a comment).
    Bench(Bench),
    /// Run the built-in agreement and property suites.
    Selftest(selftest::Options),
}

#[derive(Args, Debug)]
struct Single {
    /// The formula; read from --file or standard input when absent.
    #[arg(conflicts_with = "file")]
    formula: Option<String>,
    #[arg(long, value_name = "PATH")]
    file: Option<PathBuf>,
    #[command(flatten)]
    engine: EngineArgs,
}

#[derive(Args, Debug)]
struct Bench {
    file: PathBuf,
    #[command(flatten)]
    engine: EngineArgs,
}

#[derive(Args, Debug, Clone)]
pub struct EngineArgs {
    /// One of kab, kab4a, kab4a4b, kde, kde4a, kde4a4b (or the experimental kde4b).
    #[arg(long, conflicts_with_all = ["de", "four_a", "four_b"])]
    logic: Option<LogicId>,
    /// Weak density of a over b.
    #[arg(long)]
    de: bool,
    /// Transitivity of a.
    #[arg(long = "4a")]
    four_a: bool,
    /// Transitivity of b.
    #[arg(long = "4b")]
    four_b: bool,
    /// Follow every window chain for exactly N windows.
    #[arg(long, value_name = "N", conflicts_with = "loop_detect")]
    fuel: Option<BigUint>,
    /// Stop window chains at the first repeated window (default).
    #[arg(long)]
    loop_detect: bool,
    #[arg(long, value_name = "N", default_value_t = 10_000_000)]
    budget_nodes: u64,
    #[arg(long, value_name = "MS")]
    time_limit_ms: Option<u64>,
    /// Refute, instead of accept, an obligation whose context repeats.
    #[arg(long)]
    literal_loop_rule: bool,
    #[arg(long, conflicts_with = "text")]
    json: bool,
    #[arg(long)]
    text: bool,
}

impl EngineArgs {
    fn logic(&self) -> anyhow::Result<LogicId> {
        match self.logic {
            Some(l) => Ok(l),
            None => Ok(LogicId::from_flags(self.de, self.four_a, self.four_b)?),
        }
    }

    fn config(&self) -> Config {
        Config {
            termination: match &self.fuel {
                Some(n) => Termination::Fuel(n.clone()),
                None => Termination::LoopDetect,
            },
            budget_nodes: self.budget_nodes,
            time_limit: self.time_limit_ms.map(Duration::from_millis),
            literal_loop_rule: self.literal_loop_rule,
        }
    }

    fn format(&self) -> Format {
        if self.text {
            Format::Text
        } else {
            Format::Json
        }
    }
}

pub const EXIT_OTHER: u8 = 1;
pub const EXIT_PARSE: u8 = 2;
pub const EXIT_BUDGET: u8 = 3;

pub fn engine_exit(e: &EngineError) -> u8 {
    if e.is_resource_limit() {
        EXIT_BUDGET
    } else {
        EXIT_OTHER
    }
}

fn read_input(s: &Single) -> anyhow::Result<String> {
    if let Some(f) = &s.formula {
        return Ok(f.clone());
    }
    if let Some(path) = &s.file {
        return Ok(std::fs::read_to_string(path)?);
    }
    let mut buf = String::new();
    std::io::stdin().read_to_string(&mut buf)?;
    Ok(buf)
}

#[derive(Clone, Copy, PartialEq, Eq)]
enum Mode {
    Sat,
    Valid,
    Model,
}

fn single(s: &Single, mode: Mode) -> ExitCode {
    let fail = |code: u8, msg: String| {
        eprintln!("wdtab: {msg}");
        ExitCode::from(code)
    };
    let logic = match s.engine.logic() {
        Ok(l) => l,
        Err(e) => return fail(EXIT_OTHER, e.to_string()),
    };
    let text = match read_input(s) {
        Ok(t) => t,
        Err(e) => return fail(EXIT_OTHER, format!("cannot read input: {e}")),
    };
    let f: Formula = match parse(text.trim()) {
        Ok(f) => f,
        Err(e) => return fail(EXIT_PARSE, e.to_string()),
    };
    let cfg = s.engine.config();
    let verdict = match mode {
        Mode::Sat | Mode::Model => Verdict::sat(&f, logic, &cfg),
        Mode::Valid => Verdict::valid(&f, logic, &cfg),
    };
    match verdict {
        Ok(v) => {
            let doc = if mode == Mode::Model { v.render_model(s.engine.format()) } else { v.render(s.engine.format()) };
            println!("{doc}");
            ExitCode::SUCCESS
        }
        Err(e) => fail(engine_exit(&e), e.to_string()),
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match cli.command {
        Command::Sat(s) => single(&s, Mode::Sat),
        Command::Valid(s) => single(&s, Mode::Valid),
        Command::Model(s) => single(&s, Mode::Model),
        Command::Bench(b) => bench::run(&b.file, &b.engine),
        Command::Selftest(o) => selftest::run(&o),
    }
}
