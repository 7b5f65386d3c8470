//! Linear tabled resolution (TP-resolution) for positive logic programs with
//! cut, together with two reference evaluators used to cross-check it.
//!
//! ```
//! use tplog::{engine::{tp_solve, EngineConfig}, program::{parse, parse_query}};
//!
//! let program = parse("reach(X,Y) :- reach(X,Z), edge(Z,Y).\n\
//!                      reach(X,X).\n\
//!                      reach(X,d).\n\
//!                      edge(a,b).\n\
//!                      edge(d,e).").unwrap();
//! let query = parse_query("reach(a,X)").unwrap();
//! let run = tp_solve(&program, &query, &EngineConfig::default()).unwrap();
//! let xs: Vec<String> = run.answers.iter().map(|a| a.values[0].to_string()).collect();
//! assert_eq!(xs, ["a", "b", "d", "e"]);
//! ```

pub mod engine;
pub mod gen;
pub mod oracle;
pub mod program;
pub mod tables;
pub mod terms;

pub use engine::{tp_solve, Answer, EngineConfig, EngineError, Solver};
pub use program::{parse, parse_query, Program, Query};
pub use terms::{Atom, PredKey, Substitution, Term};
