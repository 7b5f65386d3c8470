//! TP-resolution: a single-stack tabled evaluator.

pub mod node;
pub mod resolvent;
pub mod trace;

use thiserror::Error;

use crate::program::{Clause, Program, Query};
use crate::tables::{TableError, TableId, TableStore};
use crate::terms::{
    canonicalize_terms, format_tuple, is_variant, rename_terms, shift_atom, unify, Atom, NodeId, Subgoal,
    Substitution, Term, VarGen,
};
use node::{ancestors, goal_from, Goal, GoalEntry, Node, Using};
use resolvent::rename_body;
pub use trace::{TraceEvent, Via};

#[derive(Clone, Debug)]
pub struct EngineConfig {
    /// Maximum number of resolution steps (child nodes registered).
    pub step_budget: u64,
    pub occurs_check: bool,
    /// Disables the completion shortcut for loop-free subgoals.
    pub strict_alg2: bool,
    pub trace: bool,
}

impl Default for EngineConfig {
    fn default() -> Self {
        EngineConfig { step_budget: 10_000_000, occurs_check: false, strict_alg2: false, trace: false }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum EngineError {
    #[error("step budget of {0} exceeded")]
    StepBudgetExceeded(u64),
    #[error(transparent)]
    Table(#[from] TableError),
    #[error("internal error: {0}")]
    Internal(String),
}

/// Bindings of the query's reported variables at one success leaf.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Answer {
    pub values: Vec<Term>,
}

impl Answer {
    /// Values with variables renumbered `_0, _1, …` within the answer.
    pub fn canonical(&self) -> Vec<Term> {
        canonicalize_terms(&self.values)
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
enum Ctl {
    Expand,
    Fail,
    Done,
}

/// Lazy evaluation of one query; call [`Solver::next_answer`] repeatedly.
pub struct Solver<'p> {
    program: &'p Program,
    config: EngineConfig,
    stack: Vec<Node>,
    tables: TableStore,
    gen: VarGen,
    next_id: usize,
    ctl: Ctl,
    steps: u64,
    trace: Vec<TraceEvent>,
}

impl<'p> Solver<'p> {
    pub fn new(program: &'p Program, query: &Query, config: EngineConfig) -> Self {
        let mut entries: Vec<GoalEntry> =
            query.atoms.iter().map(|a| GoalEntry::root(Subgoal::Atom(a.clone()))).collect();
        let ys = query.answer_vars().into_iter().map(Term::Var).collect();
        entries.push(GoalEntry::root(Subgoal::Return(ys)));
        let goal = goal_from(entries, None);
        let mut s = Solver {
            program,
            config,
            stack: Vec::new(),
            tables: TableStore::new(),
            gen: VarGen::starting_at(query.num_vars),
            next_id: 1,
            ctl: Ctl::Expand,
            steps: 0,
            trace: Vec::new(),
        };
        s.emit(|| TraceEvent::Expand { node: 0, parent: None, via: Via::Root, clause: None, anc: -1, pending: 0 });
        s.stack.push(Node::new(NodeId(0), goal));
        s
    }

    pub fn tables(&self) -> &TableStore {
        &self.tables
    }

    pub fn trace(&self) -> &[TraceEvent] {
        &self.trace
    }

    pub fn take_trace(&mut self) -> Vec<TraceEvent> {
        std::mem::take(&mut self.trace)
    }

    pub fn steps(&self) -> u64 {
        self.steps
    }

    pub fn is_done(&self) -> bool {
        self.ctl == Ctl::Done
    }

    /// The current derivation path, root first.
    pub fn stack(&self) -> &[Node] {
        &self.stack
    }

    fn emit(&mut self, event: impl FnOnce() -> TraceEvent) {
        if self.config.trace {
            self.trace.push(event());
        }
    }

    /// Runs until the next success leaf, or `None` once the root has failed.
    pub fn next_answer(&mut self) -> Result<Option<Answer>, EngineError> {
        loop {
            match self.ctl {
                Ctl::Done => return Ok(None),
                Ctl::Fail => self.ctl = self.backtrack()?,
                Ctl::Expand => {
                    if let Some(answer) = self.expand()? {
                        self.ctl = Ctl::Fail;
                        return Ok(Some(answer));
                    }
                }
            }
            if self.steps > self.config.step_budget {
                return Err(EngineError::StepBudgetExceeded(self.config.step_budget));
            }
        }
    }

    fn index_of(&self, id: NodeId) -> Result<usize, EngineError> {
        self.stack
            .binary_search_by_key(&id, |n| n.id)
            .map_err(|_| EngineError::Internal(format!("node {id} is not on the stack")))
    }

    fn push_child(&mut self, goal: Goal, via: Via, clause: Option<&Clause>) {
        let id = NodeId(self.next_id);
        self.next_id += 1;
        self.steps += 1;
        let parent = self.stack.last().expect("push onto empty stack");
        let (pid, anc) = (parent.id.0, parent.node_anc);
        let pending = match parent.table {
            Some(t) if via == Via::Clause => self.tables.get(t).answers.len().saturating_sub(parent.answer_cursor),
            _ => 0,
        };
        self.emit(|| TraceEvent::Expand { node: id.0, parent: Some(pid), via, clause: clause.map(Clause::label), anc, pending });
        self.stack.push(Node::new(id, goal));
    }

    /// Point 2: expands the latest node. Sets `ctl` to `Fail` when the node
    /// has no (further) child.
    fn expand(&mut self) -> Result<Option<Answer>, EngineError> {
        let top = self.stack.len() - 1;
        match self.stack[top].leftmost().clone() {
            Subgoal::Cut(h) => {
                let hi = self.index_of(h)?;
                self.stack[hi].clause_susp = false;
                let goal = self.stack[top].rest();
                self.stack[top].using = Using::Cut;
                self.push_child(goal, Via::Cut, None);
            }
            Subgoal::Return(values) => {
                let node = self.stack[top].id.0;
                self.emit(|| TraceEvent::Answer { node, values: format_tuple(&values) });
                return Ok(Some(Answer { values }));
            }
            Subgoal::MemoLook { origin, index, tuple } => self.expand_memo_look(top, origin, &index, &tuple)?,
            Subgoal::Atom(a) => {
                if self.program.is_tabled(&a.key()) {
                    self.expand_tabled(top, &a)?;
                } else {
                    self.expand_plain(top, &a);
                }
            }
        }
        Ok(None)
    }

    fn expand_memo_look(&mut self, top: usize, origin: NodeId, index: &Atom, tuple: &[Term]) -> Result<(), EngineError> {
        let oi = self.index_of(origin)?;
        let table = self.stack[oi]
            .table
            .ok_or_else(|| EngineError::Internal(format!("no table for {index}")))?;
        let mut cursor = self.stack[oi].answer_cursor;
        let vars = index.vars();
        let (added, theta) = self.tables.memo_look(table, tuple, &mut cursor, &vars, &mut self.gen);
        self.stack[oi].answer_cursor = cursor;
        let node = self.stack[top].id.0;
        let tb = self.tables.get(table);
        let key = || tb.key.to_string();
        if self.config.trace {
            self.trace.push(TraceEvent::Memo { node, table: key(), tuple: format_tuple(tuple), new: added });
        }
        match theta {
            Some(theta) => {
                if self.config.trace {
                    let fetched = format_tuple(&tb.answers[cursor - 1]);
                    self.trace.push(TraceEvent::Fetch { node: origin.0, table: key(), tuple: fetched });
                }
                let goal = resolvent::from_fetch(&self.stack[top].goal, &theta);
                self.stack[top].using = Using::Memo;
                self.push_child(goal, Via::Memo, None);
            }
            None => self.ctl = Ctl::Fail,
        }
        Ok(())
    }

    /// Case 3: SLD step on a non-tabled atom.
    fn expand_plain(&mut self, top: usize, a: &Atom) {
        let key = a.key();
        let n = self.program.clause_count(&key);
        while self.stack[top].clause_cursor < n {
            let k = self.stack[top].clause_cursor;
            self.stack[top].clause_cursor += 1;
            let clause = self.program.clause(&key, k).expect("clause index in range");
            let base = self.gen.reserve(clause.num_vars());
            if let Some(theta) = unify(a, &shift_atom(&clause.head, base), self.config.occurs_check) {
                let id = self.stack[top].id;
                let body = rename_body(clause, base);
                let goal = resolvent::from_clause_plain(&self.stack[top].goal, &body, &theta, id);
                self.stack[top].using = Using::Clause(k + 1);
                self.push_child(goal, Via::Clause, Some(clause));
                return;
            }
        }
        self.ctl = Ctl::Fail;
    }

    fn table_for(&mut self, top: usize, a: &Atom) -> Result<TableId, EngineError> {
        if let Some(t) = self.stack[top].table {
            return Ok(t);
        }
        let t = match self.tables.find(a) {
            Some(t) => t,
            None => self.tables.create(a, self.program.clause_count(&a.key()))?,
        };
        self.stack[top].table = Some(t);
        Ok(t)
    }

    /// Case 4 for a tabled atom.
    fn expand_tabled(&mut self, top: usize, a: &Atom) -> Result<(), EngineError> {
        let table = self.table_for(top, a)?;
        let mut cursor = self.stack[top].answer_cursor;
        if let Some(tuple) = self.tables.lookup(table, &mut cursor) {
            let renamed = rename_terms(tuple, &mut self.gen);
            self.stack[top].answer_cursor = cursor;
            if self.config.trace {
                let node = self.stack[top].id.0;
                let t = self.tables.get(table);
                let tuple = format_tuple(&t.answers[cursor - 1]);
                self.trace.push(TraceEvent::Fetch { node, table: t.key.to_string(), tuple });
            }
            let theta = Substitution::from_pairs(&a.vars(), &renamed);
            let goal = resolvent::from_tuple(&self.stack[top].goal, &theta);
            self.stack[top].using = Using::Tuple;
            self.push_child(goal, Via::Tuple, None);
            return Ok(());
        }
        if self.tables.get(table).comp {
            self.ctl = Ctl::Fail;
            return Ok(());
        }
        // Case 4.1
        if self.stack[top].node_anc == -1 {
            self.detect_loop(top, a)?;
        } else if let Some(h) = self.stack[top].loop_top {
            let hi = self.index_of(h)?;
            if self.nodetype_update(hi, top)? {
                let (node, clause) = (self.stack[top].id.0, self.stack[top].node_anc as usize);
                self.emit(|| TraceEvent::LoopDetected { node, top: h.0, clause, rerun: true });
            }
        }
        let anc = self.stack[top].node_anc;
        if anc > 0 {
            // Case 4.3
            if !self.try_clauses(top, a, table, anc as usize) {
                self.ctl = Ctl::Fail;
            }
            return Ok(());
        }
        // Case 4.2
        loop {
            if self.try_clauses(top, a, table, 0) {
                return Ok(());
            }
            let node = &self.stack[top];
            if !node.node_iter {
                if !node.node_loop && !self.config.strict_alg2 {
                    self.tables.get_mut(table).comp = true;
                }
                self.ctl = Ctl::Fail;
                return Ok(());
            }
            let (id, pass) = (node.id.0, node.pass);
            if !self.tables.new_flag {
                // Case 4.2.1
                self.tables.get_mut(table).comp = true;
                self.emit(|| TraceEvent::IterationEnd { node: id, pass, new: false, comp: true });
                self.ctl = Ctl::Fail;
                return Ok(());
            }
            // Case 4.2.2
            self.tables.new_flag = false;
            self.emit(|| TraceEvent::IterationEnd { node: id, pass, new: true, comp: false });
            let node = &mut self.stack[top];
            node.pass += 1;
            let pass = node.pass;
            let status = &self.tables.get(table).clause_status;
            node.clause_cursor = status.iter().position(|s| *s).unwrap_or(status.len());
            self.emit(|| TraceEvent::IterationStart { node: id, pass });
        }
    }

    /// Finds the next available clause with ordinal greater than `after`
    /// whose head unifies with `a`, and registers the Case 3 resolvent.
    fn try_clauses(&mut self, top: usize, a: &Atom, table: TableId, after: usize) -> bool {
        let key = a.key();
        let n = self.program.clause_count(&key);
        let limit = self.stack[top].cut_limit.unwrap_or(n).min(n);
        let start = self.stack[top].clause_cursor.max(after);
        for k in start..limit {
            self.stack[top].clause_cursor = k + 1;
            if !self.tables.get(table).status(k + 1) {
                continue;
            }
            let clause = self.program.clause(&key, k).expect("clause index in range");
            let base = self.gen.reserve(clause.num_vars());
            if let Some(theta) = unify(a, &shift_atom(&clause.head, base), self.config.occurs_check) {
                let id = self.stack[top].id;
                let body = rename_body(clause, base);
                let goal = resolvent::from_clause_tabled(&self.stack[top].goal, &body, &theta, id);
                self.stack[top].using = Using::Clause(k + 1);
                self.push_child(goal, Via::Clause, Some(clause));
                return true;
            }
        }
        self.stack[top].clause_cursor = self.stack[top].clause_cursor.max(limit);
        false
    }

    /// Case 4.1: looks for the closest ancestor variant of `a`.
    fn detect_loop(&mut self, top: usize, a: &Atom) -> Result<(), EngineError> {
        let found = ancestors(&self.stack[top].first().anc).find(|l| is_variant(&l.atom, a)).map(|l| l.node);
        match found {
            None => self.stack[top].node_anc = 0,
            Some(h) => {
                let hi = self.index_of(h)?;
                self.stack[top].loop_top = Some(h);
                self.nodetype_update(hi, top)?;
                let (node, clause) = (self.stack[top].id.0, self.stack[top].node_anc as usize);
                self.emit(|| TraceEvent::LoopDetected { node, top: h.0, clause, rerun: false });
            }
        }
        Ok(())
    }

    /// Stack positions of the loop nodes of `L(stack[hi], stack[mi])`, top first.
    fn loop_members(&self, hi: usize, mi: usize) -> Result<Vec<usize>, EngineError> {
        let top = self.stack[hi].id;
        let mut members = vec![mi];
        for link in ancestors(&self.stack[mi].first().anc) {
            if link.node <= top {
                break;
            }
            members.push(self.index_of(link.node)?);
        }
        members.push(hi);
        members.reverse();
        Ok(members)
    }

    /// Flags the loop nodes of `L(stack[hi], stack[mi])`. Returns whether
    /// any flag changed.
    fn nodetype_update(&mut self, hi: usize, mi: usize) -> Result<bool, EngineError> {
        let Using::Clause(j) = self.stack[hi].using else {
            return Err(EngineError::Internal(format!("loop top {} is not using a clause", self.stack[hi].id)));
        };
        let members = self.loop_members(hi, mi)?;
        let mut changed = false;
        let mut set = |flag: &mut bool, v: bool| {
            changed |= *flag != v;
            *flag = v;
        };
        for &k in &members[1..] {
            let n = &mut self.stack[k];
            set(&mut n.node_loop, true);
            set(&mut n.node_iter, false);
        }
        if !self.stack[hi].node_loop {
            let n = &mut self.stack[hi];
            set(&mut n.node_loop, true);
            set(&mut n.node_iter, true);
        }
        for &k in &members[..members.len() - 1] {
            set(&mut self.stack[k].clause_susp, true);
        }
        let bottom = &mut self.stack[mi];
        changed |= bottom.node_anc != j as i64;
        bottom.node_anc = j as i64;
        Ok(changed)
    }

    fn pop(&mut self, cut: bool) -> Node {
        let n = self.stack.pop().expect("pop from empty stack");
        let parent = self.stack.last().map(|p| p.id.0);
        self.emit(|| TraceEvent::Backtrack { node: n.id.0, parent, cut });
        n
    }

    /// Point 3: fails the latest node and decides where to resume.
    fn backtrack(&mut self) -> Result<Ctl, EngineError> {
        self.pop(false);
        let Some(f) = self.stack.last() else {
            return Ok(Ctl::Done);
        };
        match f.leftmost().clone() {
            Subgoal::Cut(h) => {
                // Case B0
                while self.stack.last().map(|n| n.id) != Some(h) {
                    if self.stack.is_empty() {
                        return Err(EngineError::Internal(format!("cut target {h} missing")));
                    }
                    self.pop(true);
                }
                let nh = self.stack.last_mut().expect("cut target on stack");
                let (Some(table), Using::Clause(i)) = (nh.table, nh.using) else {
                    return Ok(Ctl::Fail);
                };
                if nh.clause_susp {
                    nh.clause_susp = false;
                    nh.clause_cursor = usize::MAX;
                    nh.cut_limit = Some(i);
                } else {
                    let t = self.tables.get_mut(table);
                    for j in i..=t.clause_status.len() {
                        t.set_unavailable(j);
                    }
                }
                Ok(Ctl::Expand)
            }
            Subgoal::MemoLook { .. } => Ok(Ctl::Fail),
            Subgoal::Return(_) => Err(EngineError::Internal("return node has a child".into())),
            Subgoal::Atom(_) => {
                let f = self.stack.last_mut().expect("parent");
                if let Some(table) = f.table {
                    // Case B3
                    match f.using {
                        Using::Clause(j) if !f.clause_susp => self.tables.get_mut(table).set_unavailable(j),
                        _ => f.clause_susp = false,
                    }
                }
                Ok(Ctl::Expand)
            }
        }
    }
}

/// Everything produced by one complete evaluation.
#[derive(Debug, Clone)]
pub struct TpRun {
    pub answers: Vec<Answer>,
    pub tables: TableStore,
    pub trace: Vec<TraceEvent>,
    pub steps: u64,
}

/// Runs a query to exhaustion.
pub fn tp_solve(program: &Program, query: &Query, config: &EngineConfig) -> Result<TpRun, EngineError> {
    let mut solver = Solver::new(program, query, config.clone());
    let mut answers = Vec::new();
    while let Some(a) = solver.next_answer()? {
        answers.push(a);
    }
    Ok(TpRun { answers, steps: solver.steps, trace: solver.take_trace(), tables: solver.tables })
}
