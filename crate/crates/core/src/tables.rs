//! Answer tables, one per variant class of tabled subgoals.

use rustc_hash::{FxHashMap as HashMap, FxHashSet as HashSet};
use std::fmt;

use thiserror::Error;

use crate::terms::{
    canonicalize, canonicalize_terms, format_tuple, is_variable_tuple, rename_terms, Atom,
    Substitution, Term, VarGen, VarId,
};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct TableId(pub usize);

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum TableError {
    #[error("table for {0} already exists")]
    AlreadyExists(Atom),
}

/// `TB(p(X⃗))`: the canonical subgoal, its answers, per-clause status and
/// completion flag.
#[derive(Clone, Debug)]
pub struct Table {
    pub key: Atom,
    /// Canonical answer tuples in insertion order.
    pub answers: Vec<Vec<Term>>,
    seen: HashSet<Vec<Term>>,
    /// `true` = still available.
    pub clause_status: Vec<bool>,
    pub comp: bool,
}

impl Table {
    fn new(key: Atom, clauses: usize) -> Self {
        Table { key, answers: Vec::new(), seen: HashSet::default(), clause_status: vec![true; clauses], comp: false }
    }

    /// Status of the 1-based clause ordinal `j`.
    pub fn status(&self, j: usize) -> bool {
        self.clause_status[j - 1]
    }

    pub fn set_unavailable(&mut self, j: usize) {
        self.clause_status[j - 1] = false;
    }

    pub fn status_string(&self) -> String {
        let s: Vec<&str> = self.clause_status.iter().map(|b| if *b { "1" } else { "0" }).collect();
        format!("({})", s.join(","))
    }
}

impl fmt::Display for Table {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let answers: Vec<String> = self.answers.iter().map(|t| format_tuple(t)).collect();
        let status: Vec<&str> = self.clause_status.iter().map(|b| if *b { "1" } else { "0" }).collect();
        write!(
            f,
            "TB({}): answers=[{}] status=[{}] comp={}",
            self.key,
            answers.join(","),
            status.join(","),
            u8::from(self.comp)
        )
    }
}

/// All tables of one evaluation, plus the global `NEW` flag.
#[derive(Clone, Debug, Default)]
pub struct TableStore {
    tables: Vec<Table>,
    index: HashMap<Atom, TableId>,
    pub new_flag: bool,
}

impl TableStore {
    pub fn new() -> Self {
        Self::default()
    }

    /// The table of the variant class of `subgoal`, if one was created.
    pub fn find(&self, subgoal: &Atom) -> Option<TableId> {
        self.index.get(&canonicalize(subgoal)).copied()
    }

    /// Creates an empty table with `clauses` available clauses.
    pub fn create(&mut self, subgoal: &Atom, clauses: usize) -> Result<TableId, TableError> {
        let key = canonicalize(subgoal);
        if self.index.contains_key(&key) {
            return Err(TableError::AlreadyExists(key));
        }
        let id = TableId(self.tables.len());
        self.tables.push(Table::new(key.clone(), clauses));
        self.index.insert(key, id);
        Ok(id)
    }

    pub fn get(&self, id: TableId) -> &Table {
        &self.tables[id.0]
    }

    pub fn get_mut(&mut self, id: TableId) -> &mut Table {
        &mut self.tables[id.0]
    }

    /// Tables in creation order.
    pub fn tables(&self) -> &[Table] {
        &self.tables
    }

    pub fn len(&self) -> usize {
        self.tables.len()
    }

    pub fn is_empty(&self) -> bool {
        self.tables.is_empty()
    }

    /// Appends `tuple` unless a variant is already present. A new tuple sets
    /// `NEW`; a tuple of distinct variables also completes the table.
    pub fn memo(&mut self, id: TableId, tuple: &[Term]) -> bool {
        let table = &mut self.tables[id.0];
        let canon = canonicalize_terms(tuple);
        if !table.seen.insert(canon.clone()) {
            return false;
        }
        if is_variable_tuple(&canon) {
            table.comp = true;
        }
        table.answers.push(canon);
        self.new_flag = true;
        true
    }

    /// Next answer after `cursor`, advancing it.
    pub fn lookup(&self, id: TableId, cursor: &mut usize) -> Option<&[Term]> {
        let t = self.tables[id.0].answers.get(*cursor)?;
        *cursor += 1;
        Some(t)
    }

    /// `memo` followed by `lookup` through `cursor`. The fetched tuple is
    /// renamed apart and paired with `vars` (the index atom's variables).
    pub fn memo_look(
        &mut self,
        id: TableId,
        tuple: &[Term],
        cursor: &mut usize,
        vars: &[VarId],
        fresh: &mut VarGen,
    ) -> (bool, Option<Substitution>) {
        let added = self.memo(id, tuple);
        let theta = self.lookup(id, cursor).map(|f| {
            let f = rename_terms(f, fresh);
            Substitution::from_pairs(vars, &f)
        });
        (added, theta)
    }

    /// One line per table, in creation order.
    pub fn dump(&self) -> String {
        self.tables.iter().map(|t| format!("{t}\n")).collect()
    }
}
