//! Batch and interactive front end for the tplog engines.

use std::io::{BufRead, Write};
use std::path::PathBuf;

use thiserror::Error;
use tplog::engine::{EngineConfig, EngineError, Solver};
use tplog::oracle::{bottomup_solve, sld_solve, OracleStatus, SldConfig};
use tplog::program::{parse, parse_query, ParseError, Program, Query};
use tplog::terms::{canonicalize_terms, Term};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Default)]
pub enum Engine {
    #[default]
    Tp,
    Sld,
    Bottomup,
}

#[derive(Clone, Debug)]
pub struct RunConfig {
    pub program: PathBuf,
    pub query: String,
    pub engine: Engine,
    /// Only used by the sld engine.
    pub depth_bound: usize,
    pub step_budget: u64,
    /// Trace events go to the error stream.
    pub trace: bool,
    pub dump_tables: bool,
    /// Only used by the tp engine.
    pub strict_alg2: bool,
    pub occurs_check: bool,
}

impl RunConfig {
    pub fn new(program: impl Into<PathBuf>, query: impl Into<String>) -> Self {
        RunConfig {
            program: program.into(),
            query: query.into(),
            engine: Engine::Tp,
            depth_bound: 1000,
            step_budget: EngineConfig::default().step_budget,
            trace: false,
            dump_tables: false,
            strict_alg2: false,
            occurs_check: false,
        }
    }

    fn engine_config(&self) -> EngineConfig {
        EngineConfig {
            step_budget: self.step_budget,
            occurs_check: self.occurs_check,
            strict_alg2: self.strict_alg2,
            trace: self.trace,
        }
    }
}

pub const EXIT_OK: i32 = 0;
pub const EXIT_USAGE: i32 = 1;
pub const EXIT_RESOURCE: i32 = 2;

#[derive(Debug, Error)]
pub enum CliError {
    #[error("{path}: {source}")]
    Io { path: String, source: std::io::Error },
    #[error("{path}:{source}")]
    Parse { path: String, source: ParseError },
    #[error("query:{0}")]
    Query(ParseError),
    #[error("{0}")]
    Engine(String),
}

fn load(config: &RunConfig) -> Result<(Program, Query), CliError> {
    let path = config.program.display().to_string();
    let text = std::fs::read_to_string(&config.program).map_err(|source| CliError::Io { path: path.clone(), source })?;
    let program = parse(&text).map_err(|source| CliError::Parse { path, source })?;
    let query = parse_query(&config.query).map_err(CliError::Query)?;
    Ok((program, query))
}

/// `X = a, Y = b` for one answer; `yes` when the query has no named variables.
pub fn format_answer(query: &Query, values: &[Term]) -> String {
    if query.names.is_empty() {
        return "yes".to_string();
    }
    let values = canonicalize_terms(values);
    let parts: Vec<String> = query.names.iter().zip(&values).map(|((n, _), v)| format!("{n} = {v}")).collect();
    parts.join(", ")
}

enum Outcome {
    Done,
    Stopped,
    Limit(&'static str),
}

/// How evaluation ended, plus the table dump when requested.
type Solved = (Outcome, Option<String>);

/// Streams answers to `out`; `more` decides after each answer whether to go on.
fn solve(
    config: &RunConfig,
    program: &Program,
    query: &Query,
    out: &mut dyn Write,
    err: &mut dyn Write,
    more: &mut dyn FnMut() -> bool,
) -> Result<Solved, CliError> {
    let io = |e: std::io::Error| CliError::Engine(e.to_string());
    let ground = query.names.is_empty();
    match config.engine {
        Engine::Tp => {
            let mut solver = Solver::new(program, query, config.engine_config());
            let outcome = loop {
                let next = solver.next_answer();
                for e in solver.take_trace() {
                    writeln!(err, "{e}").map_err(io)?;
                }
                match next {
                    Ok(Some(a)) => {
                        writeln!(out, "{}", format_answer(query, &a.values)).map_err(io)?;
                        if ground || !more() {
                            break Outcome::Stopped;
                        }
                    }
                    Ok(None) => break Outcome::Done,
                    Err(EngineError::StepBudgetExceeded(_)) => break Outcome::Limit("step budget exceeded"),
                    Err(e) => return Err(CliError::Engine(e.to_string())),
                }
            };
            Ok((outcome, config.dump_tables.then(|| solver.tables().dump())))
        }
        Engine::Sld => {
            let cfg = SldConfig { depth_bound: config.depth_bound, occurs_check: config.occurs_check };
            let result = sld_solve(program, query, &cfg);
            if result.status == OracleStatus::DepthExceeded {
                return Ok((Outcome::Limit("depth bound exceeded"), None));
            }
            Ok((emit_all(query, &result.ordered, out, more).map_err(io)?, None))
        }
        Engine::Bottomup => {
            let result = bottomup_solve(program, query).map_err(|e| CliError::Engine(e.to_string()))?;
            let answers: Vec<Vec<Term>> = result.answers.into_iter().collect();
            Ok((emit_all(query, &answers, out, more).map_err(io)?, None))
        }
    }
}

fn emit_all(
    query: &Query,
    answers: &[Vec<Term>],
    out: &mut dyn Write,
    more: &mut dyn FnMut() -> bool,
) -> std::io::Result<Outcome> {
    for a in answers {
        writeln!(out, "{}", format_answer(query, a))?;
        if query.names.is_empty() || !more() {
            return Ok(Outcome::Stopped);
        }
    }
    Ok(Outcome::Done)
}

fn finish(solved: Result<Solved, CliError>, out: &mut dyn Write, err: &mut dyn Write) -> i32 {
    let (outcome, dump) = match solved {
        Ok(s) => s,
        Err(e) => {
            let _ = writeln!(err, "error: {e}");
            return EXIT_USAGE;
        }
    };
    let code = match outcome {
        Outcome::Done => writeln!(out, "no").map(|_| EXIT_OK),
        Outcome::Stopped => Ok(EXIT_OK),
        Outcome::Limit(what) => writeln!(out, "resource-limit: {what}").map(|_| EXIT_RESOURCE),
    };
    let dumped = dump.map_or(Ok(()), |d| write!(out, "{d}"));
    code.and_then(|c| dumped.map(|_| c)).unwrap_or(EXIT_USAGE)
}

/// Runs one query to exhaustion and returns the process exit status.
pub fn run(config: &RunConfig, out: &mut dyn Write, err: &mut dyn Write) -> i32 {
    let outcome = load(config).and_then(|(p, q)| solve(config, &p, &q, out, err, &mut || true));
    finish(outcome, out, err)
}

/// Reads queries from `input`, one per line. After each answer a line
/// containing `;` asks for the next one; anything else stops the query.
pub fn run_interactive(config: &RunConfig, input: &mut dyn BufRead, out: &mut dyn Write, err: &mut dyn Write) -> i32 {
    let path = config.program.display().to_string();
    let program = match std::fs::read_to_string(&config.program) {
        Ok(text) => match parse(&text) {
            Ok(p) => p,
            Err(source) => return finish(Err(CliError::Parse { path, source }), out, err),
        },
        Err(source) => return finish(Err(CliError::Io { path, source }), out, err),
    };
    let mut lines = input.lines();
    let mut status = EXIT_OK;
    loop {
        if write!(out, "?- ").and_then(|_| out.flush()).is_err() {
            return EXIT_USAGE;
        }
        let Some(Ok(line)) = lines.next() else { break };
        let text = line.trim();
        if text.is_empty() {
            continue;
        }
        if text == "halt." || text == "halt" {
            break;
        }
        let query = match parse_query(text) {
            Ok(q) => q,
            Err(e) => {
                status = finish(Err(CliError::Query(e)), out, err);
                continue;
            }
        };
        let mut more = || matches!(lines.next(), Some(Ok(l)) if l.trim() == ";");
        let outcome = solve(config, &program, &query, out, err, &mut more);
        status = finish(outcome, out, err);
    }
    status
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn answers_use_query_names() {
        let q = parse_query("p(X,Y)").unwrap();
        assert_eq!(format_answer(&q, &[Term::constant("a"), Term::var(7)]), "X = a, Y = _0");
        let ground = parse_query("p(a)").unwrap();
        assert_eq!(format_answer(&ground, &[]), "yes");
    }
}
