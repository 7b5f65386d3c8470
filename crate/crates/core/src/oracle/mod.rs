//! Reference evaluators: depth-bounded SLD with cut, and a naive bottom-up
//! fixpoint for function-free programs.

mod bottomup;
mod sld;

use std::collections::BTreeSet;

pub use bottomup::{bottomup_solve, ground_over, universe, OracleError};
pub use sld::{sld_solve, SldConfig};

use crate::terms::{canonicalize_terms, Term};

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum OracleStatus {
    Complete,
    DepthExceeded,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct OracleResult {
    /// Canonicalized answer tuples.
    pub answers: BTreeSet<Vec<Term>>,
    /// Answers in the order they were found (with repetitions, for SLD).
    pub ordered: Vec<Vec<Term>>,
    pub status: OracleStatus,
}

impl OracleResult {
    fn from_ordered(ordered: Vec<Vec<Term>>, status: OracleStatus) -> Self {
        let answers = ordered.iter().map(|t| canonicalize_terms(t)).collect();
        OracleResult { answers, ordered, status }
    }

    pub fn is_complete(&self) -> bool {
        self.status == OracleStatus::Complete
    }
}
