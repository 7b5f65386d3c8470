//! Program text, clauses, and the tabled/non-tabled classification.

use std::collections::{BTreeMap, BTreeSet, HashMap};
use std::fmt;

use petgraph::algo::tarjan_scc;
use petgraph::graph::{DiGraph, NodeIndex};
use thiserror::Error;

use crate::terms::{Atom, PredKey, Sym, Term, VarId};

const RESERVED: &[&str] = &["memo_look", "return"];

#[derive(Debug, Clone, PartialEq, Eq, Error)]
#[error("{line}:{column}: {message}")]
pub struct ParseError {
    /// Byte offset into the source.
    pub offset: usize,
    pub line: usize,
    pub column: usize,
    pub message: String,
}

#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub enum Literal {
    Atom(Atom),
    Cut,
}

/// A program clause `head :- body`. Variables are numbered densely from 0.
#[derive(Clone, PartialEq, Eq)]
pub struct Clause {
    pub head: Atom,
    pub body: Vec<Literal>,
    /// 1-based ordinal among the clauses of the head predicate.
    pub index: usize,
    /// Source name of each variable id.
    pub var_names: Vec<String>,
}

impl Clause {
    pub fn num_vars(&self) -> u32 {
        self.var_names.len() as u32
    }

    pub fn is_fact(&self) -> bool {
        self.body.is_empty()
    }

    /// Label `name/arity#index` used in traces.
    pub fn label(&self) -> String {
        format!("{}#{}", self.head.key(), self.index)
    }
}

impl fmt::Display for Clause {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let names = &self.var_names;
        write!(f, "{}", Named(&self.head, names))?;
        if !self.body.is_empty() {
            f.write_str(" :- ")?;
            for (i, lit) in self.body.iter().enumerate() {
                if i > 0 {
                    f.write_str(", ")?;
                }
                match lit {
                    Literal::Atom(a) => write!(f, "{}", Named(a, names))?,
                    Literal::Cut => f.write_str("!")?,
                }
            }
        }
        f.write_str(".")
    }
}

impl fmt::Debug for Clause {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Display::fmt(self, f)
    }
}

/// Displays an atom with source variable names.
struct Named<'a>(&'a Atom, &'a [String]);

impl fmt::Display for Named<'_> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fn term(t: &Term, names: &[String], f: &mut fmt::Formatter<'_>) -> fmt::Result {
            match t {
                Term::Var(v) => match names.get(v.0 as usize) {
                    Some(n) => f.write_str(n),
                    None => write!(f, "_{}", v.0),
                },
                Term::Const(c) => write!(f, "{c}"),
                Term::Compound(name, args) => {
                    write!(f, "{name}(")?;
                    for (i, a) in args.iter().enumerate() {
                        if i > 0 {
                            f.write_str(",")?;
                        }
                        term(a, names, f)?;
                    }
                    f.write_str(")")
                }
            }
        }
        write!(f, "{}", self.0.pred)?;
        if !self.0.args.is_empty() {
            f.write_str("(")?;
            for (i, a) in self.0.args.iter().enumerate() {
                if i > 0 {
                    f.write_str(",")?;
                }
                term(a, self.1, f)?;
            }
            f.write_str(")")?;
        }
        Ok(())
    }
}

#[derive(Clone, Debug, Default)]
pub struct Program {
    pub clauses: Vec<Clause>,
    /// Positions into `clauses`, in textual order, per predicate.
    pub by_predicate: BTreeMap<PredKey, Vec<usize>>,
    pub tabled: BTreeSet<PredKey>,
    /// Predicates named by `:- table` directives.
    pub declared_tabled: BTreeSet<PredKey>,
}

impl Program {
    /// Builds a program from clauses in textual order; clause ordinals and
    /// the tabled set are (re)computed.
    pub fn from_clauses(clauses: Vec<Clause>, declared_tabled: BTreeSet<PredKey>) -> Self {
        let mut p = Program { clauses, declared_tabled, ..Program::default() };
        for (pos, c) in p.clauses.iter_mut().enumerate() {
            let list = p.by_predicate.entry(c.head.key()).or_default();
            list.push(pos);
            c.index = list.len();
        }
        let mut tabled = classify_tabled(&p);
        tabled.extend(p.declared_tabled.iter().cloned());
        p.tabled = tabled;
        p
    }

    pub fn clauses_for(&self, key: &PredKey) -> impl Iterator<Item = &Clause> + '_ {
        self.by_predicate
            .get(key)
            .map(|v| v.as_slice())
            .unwrap_or(&[])
            .iter()
            .map(move |&i| &self.clauses[i])
    }

    pub fn clause_count(&self, key: &PredKey) -> usize {
        self.by_predicate.get(key).map_or(0, Vec::len)
    }

    /// The `k`-th (0-based) clause of a predicate.
    pub fn clause(&self, key: &PredKey, k: usize) -> Option<&Clause> {
        self.by_predicate.get(key).and_then(|v| v.get(k)).map(|&i| &self.clauses[i])
    }

    pub fn is_tabled(&self, key: &PredKey) -> bool {
        self.tabled.contains(key)
    }

    pub fn has_cut(&self) -> bool {
        self.clauses.iter().any(|c| c.body.contains(&Literal::Cut))
    }

    pub fn has_compound_terms(&self) -> bool {
        let compound = |a: &Atom| a.args.iter().any(|t| matches!(t, Term::Compound(..)));
        self.clauses.iter().any(|c| {
            compound(&c.head)
                || c.body.iter().any(|l| matches!(l, Literal::Atom(a) if compound(a)))
        })
    }

    /// Every constant occurring in the program, sorted.
    pub fn constants(&self) -> BTreeSet<Term> {
        let mut out = BTreeSet::new();
        for c in &self.clauses {
            collect_constants(&c.head, &mut out);
            for l in &c.body {
                if let Literal::Atom(a) = l {
                    collect_constants(a, &mut out);
                }
            }
        }
        out
    }
}

pub(crate) fn collect_constants(a: &Atom, out: &mut BTreeSet<Term>) {
    fn walk(t: &Term, out: &mut BTreeSet<Term>) {
        match t {
            Term::Var(_) => {}
            Term::Const(_) => {
                out.insert(t.clone());
            }
            Term::Compound(_, args) => args.iter().for_each(|a| walk(a, out)),
        }
    }
    a.args.iter().for_each(|t| walk(t, out));
}

impl fmt::Display for Program {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for key in &self.declared_tabled {
            writeln!(f, ":- table {key}.")?;
        }
        for c in &self.clauses {
            writeln!(f, "{c}")?;
        }
        Ok(())
    }
}

/// A conjunctive query. Variables are numbered densely from 0; `names`
/// lists the reported (named, non-anonymous) variables in first-occurrence order.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Query {
    pub atoms: Vec<Atom>,
    pub names: Vec<(String, VarId)>,
    pub num_vars: u32,
}

impl Query {
    pub fn from_atom(atom: Atom) -> Self {
        let vars = atom.vars();
        let num_vars = atom.max_var().map_or(0, |m| m + 1);
        let names = vars.iter().map(|v| (format!("V{}", v.0), *v)).collect();
        Query { atoms: vec![atom], names, num_vars }
    }

    pub fn answer_vars(&self) -> Vec<VarId> {
        self.names.iter().map(|(_, v)| *v).collect()
    }
}

impl fmt::Display for Query {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        crate::terms::write_list(f, &self.atoms)
    }
}

/// Edges p → q for every clause `p(..) :- .., q(..), ..`; body-only and
/// head-only predicates become nodes too.
pub fn dependency_graph(p: &Program) -> DiGraph<PredKey, ()> {
    let mut g = DiGraph::new();
    let mut ix: HashMap<PredKey, NodeIndex> = HashMap::new();
    let mut node = |g: &mut DiGraph<PredKey, ()>, k: PredKey| {
        *ix.entry(k.clone()).or_insert_with(|| g.add_node(k))
    };
    for c in &p.clauses {
        let from = node(&mut g, c.head.key());
        for l in &c.body {
            if let Literal::Atom(a) = l {
                let to = node(&mut g, a.key());
                if g.find_edge(from, to).is_none() {
                    g.add_edge(from, to, ());
                }
            }
        }
    }
    g
}

/// Predicates on a cycle of the dependency graph (an SCC with two or more
/// members, or a self-edge).
pub fn classify_tabled(p: &Program) -> BTreeSet<PredKey> {
    let g = dependency_graph(p);
    let mut out = BTreeSet::new();
    for scc in tarjan_scc(&g) {
        let cyclic = scc.len() > 1 || g.find_edge(scc[0], scc[0]).is_some();
        if cyclic {
            out.extend(scc.iter().map(|&n| g[n].clone()));
        }
    }
    out
}

/// Parses program text.
pub fn parse(text: &str) -> Result<Program, ParseError> {
    let mut parser = Parser::new(text);
    let mut clauses = Vec::new();
    let mut declared = BTreeSet::new();
    loop {
        parser.skip_ws();
        if parser.at_end() {
            break;
        }
        if parser.eat(":-") {
            declared.extend(parser.directive()?);
        } else {
            clauses.push(parser.clause()?);
        }
    }
    Ok(Program::from_clauses(clauses, declared))
}

/// Parses a query such as `?- p(X), q(X, a).`; the `?-` and the final `.`
/// are optional. Cuts are not allowed in queries.
pub fn parse_query(text: &str) -> Result<Query, ParseError> {
    let mut parser = Parser::new(text);
    parser.skip_ws();
    parser.eat("?-");
    let mut atoms = Vec::new();
    loop {
        parser.skip_ws();
        if parser.peek() == Some('!') {
            return Err(parser.error("cut is not allowed in a query"));
        }
        atoms.push(parser.atom()?);
        parser.skip_ws();
        if !parser.eat(",") {
            break;
        }
    }
    parser.skip_ws();
    parser.eat(".");
    parser.skip_ws();
    if !parser.at_end() {
        return Err(parser.error("unexpected input after query"));
    }
    let names = parser
        .vars
        .names
        .iter()
        .enumerate()
        .filter(|(_, n)| n.as_str() != "_")
        .map(|(i, n)| (n.clone(), VarId(i as u32)))
        .collect();
    Ok(Query { atoms, names, num_vars: parser.vars.names.len() as u32 })
}

#[derive(Default)]
struct VarScope {
    names: Vec<String>,
    ids: HashMap<String, u32>,
}

impl VarScope {
    fn get(&mut self, name: &str) -> Term {
        if name == "_" {
            self.names.push("_".into());
            return Term::var(self.names.len() as u32 - 1);
        }
        if let Some(&id) = self.ids.get(name) {
            return Term::var(id);
        }
        let id = self.names.len() as u32;
        self.names.push(name.to_string());
        self.ids.insert(name.to_string(), id);
        Term::var(id)
    }
}

struct Parser<'a> {
    src: &'a str,
    pos: usize,
    vars: VarScope,
}

impl<'a> Parser<'a> {
    fn new(src: &'a str) -> Self {
        Parser { src, pos: 0, vars: VarScope::default() }
    }

    fn error(&self, message: impl Into<String>) -> ParseError {
        let before = &self.src[..self.pos];
        let line = before.matches('\n').count() + 1;
        let column = before.rfind('\n').map_or(before.chars().count(), |i| before[i + 1..].chars().count()) + 1;
        ParseError { offset: self.pos, line, column, message: message.into() }
    }

    fn rest(&self) -> &'a str {
        &self.src[self.pos..]
    }

    fn peek(&self) -> Option<char> {
        self.rest().chars().next()
    }

    fn at_end(&self) -> bool {
        self.pos >= self.src.len()
    }

    fn skip_ws(&mut self) {
        loop {
            let rest = self.rest();
            let trimmed = rest.trim_start();
            self.pos += rest.len() - trimmed.len();
            if trimmed.starts_with('%') {
                self.pos += trimmed.find('\n').unwrap_or(trimmed.len());
            } else {
                break;
            }
        }
    }

    fn eat(&mut self, tok: &str) -> bool {
        if self.rest().starts_with(tok) {
            self.pos += tok.len();
            true
        } else {
            false
        }
    }

    fn expect(&mut self, tok: &str) -> Result<(), ParseError> {
        self.skip_ws();
        if self.eat(tok) {
            Ok(())
        } else {
            Err(self.error(format!("expected `{tok}`")))
        }
    }

    fn ident(&mut self) -> Option<&'a str> {
        let rest = self.rest();
        let len = rest
            .char_indices()
            .find(|(_, c)| !(c.is_alphanumeric() || *c == '_'))
            .map_or(rest.len(), |(i, _)| i);
        if len == 0 {
            return None;
        }
        self.pos += len;
        Some(&rest[..len])
    }

    fn name(&mut self) -> Result<&'a str, ParseError> {
        self.skip_ws();
        match self.peek() {
            Some(c) if c.is_lowercase() || c.is_ascii_digit() => Ok(self.ident().unwrap()),
            Some(_) => Err(self.error("expected a name")),
            None => Err(self.error("unexpected end of input")),
        }
    }

    fn term(&mut self) -> Result<Term, ParseError> {
        self.skip_ws();
        match self.peek() {
            Some(c) if c.is_uppercase() || c == '_' => {
                let name = self.ident().unwrap();
                Ok(self.vars.get(name))
            }
            Some(c) if c.is_lowercase() || c.is_ascii_digit() => {
                let name = self.ident().unwrap();
                let args = self.args()?;
                Ok(Term::compound(name, args))
            }
            Some(_) => Err(self.error("expected a term")),
            None => Err(self.error("unexpected end of input")),
        }
    }

    fn args(&mut self) -> Result<Vec<Term>, ParseError> {
        if !self.eat("(") {
            return Ok(Vec::new());
        }
        let mut args = vec![self.term()?];
        loop {
            self.skip_ws();
            if self.eat(",") {
                args.push(self.term()?);
            } else if self.eat(")") {
                return Ok(args);
            } else {
                return Err(self.error("expected `,` or `)`"));
            }
        }
    }

    fn atom(&mut self) -> Result<Atom, ParseError> {
        self.skip_ws();
        let start = self.pos;
        let name = self.name()?;
        if RESERVED.contains(&name) {
            self.pos = start;
            return Err(self.error(format!("`{name}` is reserved")));
        }
        let args = self.args()?;
        Ok(Atom { pred: Sym::new(name), args })
    }

    fn literal(&mut self) -> Result<Literal, ParseError> {
        self.skip_ws();
        if self.eat("!") {
            Ok(Literal::Cut)
        } else {
            self.atom().map(Literal::Atom)
        }
    }

    fn clause(&mut self) -> Result<Clause, ParseError> {
        self.vars = VarScope::default();
        let head = self.atom()?;
        self.skip_ws();
        let mut body = Vec::new();
        if self.eat(":-") {
            loop {
                body.push(self.literal()?);
                self.skip_ws();
                if !self.eat(",") {
                    break;
                }
            }
        }
        self.expect(".")?;
        let var_names = std::mem::take(&mut self.vars.names);
        Ok(Clause { head, body, index: 0, var_names })
    }

    fn directive(&mut self) -> Result<Vec<PredKey>, ParseError> {
        self.skip_ws();
        if self.ident() != Some("table") {
            return Err(self.error("unknown directive"));
        }
        let mut keys = Vec::new();
        loop {
            let name = self.name()?;
            self.expect("/")?;
            self.skip_ws();
            let digits = self.ident().filter(|d| d.chars().all(|c| c.is_ascii_digit()));
            let arity = digits
                .and_then(|d| d.parse().ok())
                .ok_or_else(|| self.error("expected an arity"))?;
            keys.push(PredKey::new(name, arity));
            self.skip_ws();
            if !self.eat(",") {
                break;
            }
        }
        self.expect(".")?;
        Ok(keys)
    }
}
