use std::fs;
use std::io::{self, Write};
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Parser, Subcommand, ValueEnum};
use serde_json::{json, Value};

use cohere::choice::DEFAULT_SELECTION_CAP;
use cohere::query::run_query;
use cohere::selftest::{self, SuiteSizes, DEFAULT_SEED};
use cohere::{Answer, Engine, EngineConfig, EngineError, ExecMode, Query, QueryFile};

const EXIT_OK: u8 = 0;
const EXIT_NEGATIVE: u8 = 1;
const EXIT_INPUT: u8 = 2;
const EXIT_VERIFY: u8 = 3;

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Format {
    Json,
    Text,
}

#[derive(Debug, Parser)]
#[command(
    name = "cohere",
    version,
    about = "Exact inference for sets of desirable gamble sets"
)]
struct Cli {
    /// Maximum number of selections the engine may enumerate.
    #[arg(long, global = true, default_value_t = DEFAULT_SELECTION_CAP)]
    cap: usize,

    #[arg(long, global = true, value_enum, default_value_t = Format::Json)]
    format: Format,

    /// Enumerate selections on one thread.
    #[arg(long, global = true)]
    sequential: bool,

    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Decide whether an assessment is consistent.
    Check { path: PathBuf },
    /// Answer the queries listed in a file, one report line per query.
    Query {
        path: PathBuf,
        /// Re-check every certificate and witness before printing.
        #[arg(long)]
        verify: bool,
    },
    /// Run the built-in corpus and the randomized law suites.
    Selftest {
        #[arg(long, default_value_t = DEFAULT_SEED)]
        seed: u64,
        /// Use this corpus file instead of the embedded one.
        #[arg(long)]
        corpus: Option<PathBuf>,
    },
}

struct Failure {
    code: u8,
    message: String,
}

impl Failure {
    fn input(message: impl Into<String>) -> Self {
        Self {
            code: EXIT_INPUT,
            message: message.into(),
        }
    }
}

impl From<EngineError> for Failure {
    fn from(e: EngineError) -> Self {
        let code = match e {
            EngineError::Inconsistent => EXIT_NEGATIVE,
            _ => EXIT_INPUT,
        };
        Self {
            code,
            message: e.to_string(),
        }
    }
}

fn read(path: &Path) -> Result<String, Failure> {
    fs::read_to_string(path).map_err(|e| Failure::input(format!("{}: {e}", path.display())))
}

fn load(path: &Path) -> Result<QueryFile, Failure> {
    QueryFile::parse(&read(path)?).map_err(|e| Failure::input(format!("{}: {e}", path.display())))
}

fn emit(out: &mut impl Write, format: Format, answer: &Answer, query: &Query) {
    let line = match format {
        Format::Json => answer.to_json(query).to_string(),
        Format::Text => answer.to_text(query),
    };
    writeln!(out, "{line}").expect("stdout");
}

fn emit_error(out: &mut impl Write, format: Format, query: &Query, error: &EngineError) {
    let line = match format {
        Format::Json => json!({"op": query.op(), "error": error.to_string()}).to_string(),
        Format::Text => format!("{}: error: {error}", query.op()),
    };
    writeln!(out, "{line}").expect("stdout");
}

fn check(engine: &Engine, format: Format, path: &Path) -> Result<u8, Failure> {
    let file = load(path)?;
    let verdict = engine.consistent(&file.assessment)?;
    let answer = verdict.answer;
    emit(
        &mut io::stdout().lock(),
        format,
        &Answer::Verdict(verdict),
        &Query::Consistent,
    );
    Ok(if answer { EXIT_OK } else { EXIT_NEGATIVE })
}

fn query(engine: &Engine, format: Format, path: &Path, verify: bool) -> Result<u8, Failure> {
    let file = load(path)?;
    let natex = match engine.extend(&file.assessment) {
        Ok(n) => Some(n),
        Err(EngineError::Inconsistent) => None,
        Err(e) => return Err(e.into()),
    };
    let mut out = io::stdout().lock();
    let mut code = EXIT_OK;
    for q in &file.queries {
        match run_query(engine, &file.assessment, natex.as_ref(), q) {
            Ok(answer) => {
                if verify {
                    if let Err(defect) = answer.verify(&file.assessment, q) {
                        return Err(Failure {
                            code: EXIT_VERIFY,
                            message: format!("{} query: evidence rejected: {defect}", q.op()),
                        });
                    }
                }
                emit(&mut out, format, &answer, q);
            }
            Err(e @ EngineError::Inconsistent) => {
                emit_error(&mut out, format, q, &e);
                code = EXIT_NEGATIVE;
            }
            Err(e) => return Err(e.into()),
        }
    }
    if natex.is_none() {
        code = EXIT_NEGATIVE;
    }
    Ok(code)
}

fn run_selftest(
    engine: &Engine,
    format: Format,
    seed: u64,
    corpus: Option<&Path>,
) -> Result<u8, Failure> {
    let text = corpus.map(read).transpose()?;
    let report = selftest::run(engine, seed, text.as_deref(), SuiteSizes::default());
    let mut out = io::stdout().lock();
    match format {
        Format::Text => write!(out, "{}", report.text()).expect("stdout"),
        Format::Json => {
            let doc: Value = json!({
                "seed": seed,
                "passed": report.passed(),
                "lines": report.lines,
            });
            writeln!(out, "{doc}").expect("stdout");
        }
    }
    if let Some(first) = report.failures.first() {
        eprintln!("first failure: {first}");
        return Ok(EXIT_NEGATIVE);
    }
    Ok(EXIT_OK)
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let engine = Engine::new(EngineConfig {
        cap: cli.cap,
        mode: if cli.sequential {
            ExecMode::Sequential
        } else {
            ExecMode::Parallel
        },
    });
    let result = match &cli.command {
        Command::Check { path } => check(&engine, cli.format, path),
        Command::Query { path, verify } => query(&engine, cli.format, path, *verify),
        Command::Selftest { seed, corpus } => {
            run_selftest(&engine, cli.format, *seed, corpus.as_deref())
        }
    };
    match result {
        Ok(code) => ExitCode::from(code),
        Err(f) => {
            eprintln!("cohere: {}", f.message);
            ExitCode::from(f.code)
        }
    }
}
