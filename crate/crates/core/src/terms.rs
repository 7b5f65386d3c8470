//! Terms, atoms, substitutions and the unification algebra.
//!
//! Everything here is a plain value: no interior mutability, no global
//! state. Variables are integer ids; whoever owns an evaluation hands out
//! fresh ids through a [`VarGen`].

use std::collections::BTreeMap;

use rustc_hash::{FxHashMap as HashMap, FxHashSet as HashSet};
use std::fmt;
use std::sync::Arc;

/// An interned-by-value symbol (predicate, functor or constant name).
#[derive(Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Sym(Arc<str>);

impl Sym {
    pub fn new(name: &str) -> Self {
        Sym(Arc::from(name))
    }

    pub fn as_str(&self) -> &str {
        &self.0
    }
}

impl From<&str> for Sym {
    fn from(s: &str) -> Self {
        Sym::new(s)
    }
}

impl fmt::Display for Sym {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.0)
    }
}

impl fmt::Debug for Sym {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.0)
    }
}

#[derive(Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct VarId(pub u32);

impl fmt::Debug for VarId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "_{}", self.0)
    }
}

/// Source of fresh variable ids. Ids are never reused within one source.
#[derive(Debug, Clone, Default)]
pub struct VarGen {
    next: u32,
}

impl VarGen {
    /// A generator whose first id is `start`.
    pub fn starting_at(start: u32) -> Self {
        VarGen { next: start }
    }

    pub fn fresh(&mut self) -> VarId {
        let v = VarId(self.next);
        self.next += 1;
        v
    }

    /// Reserves `n` consecutive ids and returns the first.
    pub fn reserve(&mut self, n: u32) -> u32 {
        let base = self.next;
        self.next += n;
        base
    }

    pub fn peek(&self) -> u32 {
        self.next
    }
}

#[derive(Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Term {
    Var(VarId),
    Const(Sym),
    /// Always has at least one argument; a 0-ary functor is a `Const`.
    Compound(Sym, Vec<Term>),
}

impl Term {
    pub fn var(id: u32) -> Term {
        Term::Var(VarId(id))
    }

    pub fn constant(name: &str) -> Term {
        Term::Const(Sym::new(name))
    }

    /// Builds a compound term, collapsing the empty argument list to a constant.
    pub fn compound(functor: &str, args: Vec<Term>) -> Term {
        if args.is_empty() {
            Term::Const(Sym::new(functor))
        } else {
            Term::Compound(Sym::new(functor), args)
        }
    }

    pub fn is_ground(&self) -> bool {
        match self {
            Term::Var(_) => false,
            Term::Const(_) => true,
            Term::Compound(_, args) => args.iter().all(Term::is_ground),
        }
    }

    /// Number of symbol occurrences; used for bounded-term-size checks in tests.
    pub fn size(&self) -> usize {
        match self {
            Term::Var(_) | Term::Const(_) => 1,
            Term::Compound(_, args) => 1 + args.iter().map(Term::size).sum::<usize>(),
        }
    }

    /// Appends variables in left-to-right first-occurrence order.
    pub fn collect_vars(&self, out: &mut Vec<VarId>) {
        match self {
            Term::Var(v) => {
                if !out.contains(v) {
                    out.push(*v);
                }
            }
            Term::Const(_) => {}
            Term::Compound(_, args) => args.iter().for_each(|a| a.collect_vars(out)),
        }
    }

    fn max_var(&self) -> Option<u32> {
        match self {
            Term::Var(v) => Some(v.0),
            Term::Const(_) => None,
            Term::Compound(_, args) => args.iter().filter_map(Term::max_var).max(),
        }
    }

    fn map_vars(&self, f: &mut impl FnMut(VarId) -> Term) -> Term {
        match self {
            Term::Var(v) => f(*v),
            Term::Const(_) => self.clone(),
            Term::Compound(name, args) => {
                Term::Compound(name.clone(), args.iter().map(|a| a.map_vars(f)).collect())
            }
        }
    }
}

impl fmt::Display for Term {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Term::Var(v) => write!(f, "_{}", v.0),
            Term::Const(c) => write!(f, "{c}"),
            Term::Compound(name, args) => {
                write!(f, "{name}(")?;
                write_list(f, args)?;
                f.write_str(")")
            }
        }
    }
}

impl fmt::Debug for Term {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Display::fmt(self, f)
    }
}

pub(crate) fn write_list<T: fmt::Display>(f: &mut fmt::Formatter<'_>, items: &[T]) -> fmt::Result {
    for (i, item) in items.iter().enumerate() {
        if i > 0 {
            f.write_str(",")?;
        }
        write!(f, "{item}")?;
    }
    Ok(())
}

/// Writes a tuple as `(t1,...,tn)`; the empty tuple prints as `()`.
pub fn format_tuple(tuple: &[Term]) -> String {
    let inner: Vec<String> = tuple.iter().map(Term::to_string).collect();
    format!("({})", inner.join(","))
}

/// Predicate identity: name plus arity.
#[derive(Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct PredKey {
    pub name: Sym,
    pub arity: usize,
}

impl PredKey {
    pub fn new(name: &str, arity: usize) -> Self {
        PredKey { name: Sym::new(name), arity }
    }
}

impl fmt::Display for PredKey {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}/{}", self.name, self.arity)
    }
}

impl fmt::Debug for PredKey {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Display::fmt(self, f)
    }
}

/// An ordinary atom `p(t1,...,tn)`.
#[derive(Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Atom {
    pub pred: Sym,
    pub args: Vec<Term>,
}

impl Atom {
    pub fn new(pred: &str, args: Vec<Term>) -> Self {
        Atom { pred: Sym::new(pred), args }
    }

    pub fn key(&self) -> PredKey {
        PredKey { name: self.pred.clone(), arity: self.args.len() }
    }

    /// The distinct variables of the atom in first-occurrence order.
    pub fn vars(&self) -> Vec<VarId> {
        let mut out = Vec::new();
        self.args.iter().for_each(|a| a.collect_vars(&mut out));
        out
    }

    pub fn is_ground(&self) -> bool {
        self.args.iter().all(Term::is_ground)
    }

    pub(crate) fn max_var(&self) -> Option<u32> {
        self.args.iter().filter_map(Term::max_var).max()
    }

    fn map_vars(&self, f: &mut impl FnMut(VarId) -> Term) -> Atom {
        Atom { pred: self.pred.clone(), args: self.args.iter().map(|a| a.map_vars(f)).collect() }
    }
}

impl fmt::Display for Atom {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.pred)?;
        if !self.args.is_empty() {
            f.write_str("(")?;
            write_list(f, &self.args)?;
            f.write_str(")")?;
        }
        Ok(())
    }
}

impl fmt::Debug for Atom {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Display::fmt(self, f)
    }
}

/// Registration ordinal of an engine node; control subgoals point back at
/// the node that created them.
#[derive(Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Debug)]
pub struct NodeId(pub usize);

impl fmt::Display for NodeId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "N{}", self.0)
    }
}

/// One element of a goal: an ordinary atom or one of the control forms the
/// tabled engine threads through goals.
#[derive(Clone, PartialEq, Eq, Hash)]
pub enum Subgoal {
    Atom(Atom),
    /// Memorize `tuple` as an answer of `index` and fetch the next answer
    /// through the answer cursor of `origin`. `index` is never instantiated.
    MemoLook { origin: NodeId, index: Atom, tuple: Vec<Term> },
    /// Reports the query variables' bindings at a success leaf.
    Return(Vec<Term>),
    /// A cut whose backtracking target is the given node.
    Cut(NodeId),
}

impl Subgoal {
    pub fn is_control(&self) -> bool {
        !matches!(self, Subgoal::Atom(_))
    }

    pub fn as_atom(&self) -> Option<&Atom> {
        match self {
            Subgoal::Atom(a) => Some(a),
            _ => None,
        }
    }
}

impl fmt::Display for Subgoal {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Subgoal::Atom(a) => write!(f, "{a}"),
            Subgoal::MemoLook { origin, index, tuple } => {
                write!(f, "memo_look({origin},{index},{})", format_tuple(tuple))
            }
            Subgoal::Return(tuple) => write!(f, "return({})", format_tuple(tuple)),
            Subgoal::Cut(node) => write!(f, "!({node})"),
        }
    }
}

impl fmt::Debug for Subgoal {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Display::fmt(self, f)
    }
}

/// A finite map from variables to terms. Results of [`unify`] are
/// idempotent and never bind a variable to itself.
#[derive(Clone, Default, PartialEq, Eq)]
pub struct Substitution {
    bindings: BTreeMap<VarId, Term>,
}

impl Substitution {
    pub fn new() -> Self {
        Self::default()
    }

    /// Builds `X⃗/I⃗` from parallel lists. Identity pairs are dropped.
    pub fn from_pairs(vars: &[VarId], terms: &[Term]) -> Self {
        debug_assert_eq!(vars.len(), terms.len());
        let bindings = vars
            .iter()
            .zip(terms)
            .filter(|(v, t)| **t != Term::Var(**v))
            .map(|(v, t)| (*v, t.clone()))
            .collect();
        Substitution { bindings }
    }

    pub fn get(&self, v: VarId) -> Option<&Term> {
        self.bindings.get(&v)
    }

    pub fn len(&self) -> usize {
        self.bindings.len()
    }

    pub fn is_empty(&self) -> bool {
        self.bindings.is_empty()
    }

    pub fn iter(&self) -> impl Iterator<Item = (&VarId, &Term)> {
        self.bindings.iter()
    }

    /// Simultaneous replacement of every bound variable.
    pub fn apply(&self, t: &Term) -> Term {
        if self.bindings.is_empty() {
            return t.clone();
        }
        t.map_vars(&mut |v| self.bindings.get(&v).cloned().unwrap_or(Term::Var(v)))
    }

    pub fn apply_atom(&self, a: &Atom) -> Atom {
        Atom { pred: a.pred.clone(), args: self.apply_all(&a.args) }
    }

    pub fn apply_all(&self, ts: &[Term]) -> Vec<Term> {
        ts.iter().map(|t| self.apply(t)).collect()
    }

    /// Applies to a subgoal. Control subgoals only have their tuple
    /// instantiated; the index atom of a memo_look is left untouched.
    pub fn apply_subgoal(&self, g: &Subgoal) -> Subgoal {
        match g {
            Subgoal::Atom(a) => Subgoal::Atom(self.apply_atom(a)),
            Subgoal::MemoLook { origin, index, tuple } => Subgoal::MemoLook {
                origin: *origin,
                index: index.clone(),
                tuple: self.apply_all(tuple),
            },
            Subgoal::Return(tuple) => Subgoal::Return(self.apply_all(tuple)),
            Subgoal::Cut(n) => Subgoal::Cut(*n),
        }
    }

    pub fn apply_goal(&self, goal: &[Subgoal]) -> Vec<Subgoal> {
        goal.iter().map(|g| self.apply_subgoal(g)).collect()
    }

    /// `compose(s1, s2)` behaves as applying `s1` then `s2`.
    pub fn compose(&self, then: &Substitution) -> Substitution {
        let mut bindings: BTreeMap<VarId, Term> = self
            .bindings
            .iter()
            .map(|(v, t)| (*v, then.apply(t)))
            .filter(|(v, t)| *t != Term::Var(*v))
            .collect();
        for (v, t) in &then.bindings {
            bindings.entry(*v).or_insert_with(|| t.clone());
        }
        Substitution { bindings }
    }
}

impl fmt::Display for Substitution {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str("{")?;
        for (i, (v, t)) in self.bindings.iter().enumerate() {
            if i > 0 {
                f.write_str(", ")?;
            }
            write!(f, "_{}/{t}", v.0)?;
        }
        f.write_str("}")
    }
}

impl fmt::Debug for Substitution {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Display::fmt(self, f)
    }
}

/// Triangular binding store used while unifying.
struct Unifier {
    bindings: HashMap<VarId, Term>,
    occurs_check: bool,
}

impl Unifier {
    fn walk(&self, t: &Term) -> Term {
        let mut cur = t.clone();
        while let Term::Var(v) = cur {
            match self.bindings.get(&v) {
                Some(next) => cur = next.clone(),
                None => break,
            }
        }
        cur
    }

    fn occurs(&self, v: VarId, t: &Term) -> bool {
        match self.walk(t) {
            Term::Var(w) => v == w,
            Term::Const(_) => false,
            Term::Compound(_, args) => args.iter().any(|a| self.occurs(v, a)),
        }
    }

    fn bind(&mut self, v: VarId, t: Term) -> bool {
        if self.occurs_check && self.occurs(v, &t) {
            return false;
        }
        self.bindings.insert(v, t);
        true
    }

    fn unify(&mut self, a: &Term, b: &Term) -> bool {
        let a = self.walk(a);
        let b = self.walk(b);
        match (a, b) {
            (Term::Var(x), Term::Var(y)) if x == y => true,
            // The younger variable is bound to the older one, so goal
            // variables survive and renamed clause variables disappear.
            (Term::Var(x), Term::Var(y)) => {
                if x > y {
                    self.bind(x, Term::Var(y))
                } else {
                    self.bind(y, Term::Var(x))
                }
            }
            (Term::Var(x), t) | (t, Term::Var(x)) => self.bind(x, t),
            (Term::Const(c), Term::Const(d)) => c == d,
            (Term::Compound(f, xs), Term::Compound(g, ys)) => {
                f == g && xs.len() == ys.len() && xs.iter().zip(&ys).all(|(x, y)| self.unify(x, y))
            }
            _ => false,
        }
    }

    fn resolve(&self, t: &Term, visiting: &mut HashSet<VarId>) -> Term {
        match t {
            Term::Var(v) => match self.bindings.get(v) {
                // A cyclic binding (only possible without the occurs check)
                // is left unexpanded at the point where it closes.
                Some(next) if visiting.insert(*v) => {
                    let r = self.resolve(next, visiting);
                    visiting.remove(v);
                    r
                }
                _ => t.clone(),
            },
            Term::Const(_) => t.clone(),
            Term::Compound(f, args) => {
                Term::Compound(f.clone(), args.iter().map(|a| self.resolve(a, visiting)).collect())
            }
        }
    }

    fn finish(self) -> Substitution {
        let mut visiting = HashSet::default();
        let bindings = self
            .bindings
            .keys()
            .map(|v| (*v, self.resolve(&Term::Var(*v), &mut visiting)))
            .filter(|(v, t)| *t != Term::Var(*v))
            .collect();
        Substitution { bindings }
    }
}

/// Most general unifier of two term lists of equal length.
pub fn unify_terms(a: &[Term], b: &[Term], occurs_check: bool) -> Option<Substitution> {
    if a.len() != b.len() {
        return None;
    }
    let mut u = Unifier { bindings: HashMap::default(), occurs_check };
    a.iter().zip(b).all(|(x, y)| u.unify(x, y)).then(|| u.finish())
}

/// Most general unifier of two atoms, or `None` when none exists.
pub fn unify(a: &Atom, b: &Atom, occurs_check: bool) -> Option<Substitution> {
    if a.pred != b.pred {
        return None;
    }
    unify_terms(&a.args, &b.args, occurs_check)
}

/// True iff the two term lists are equal up to a bijective renaming.
pub fn is_variant_terms(a: &[Term], b: &[Term]) -> bool {
    fn walk(
        a: &Term,
        b: &Term,
        fwd: &mut HashMap<VarId, VarId>,
        back: &mut HashMap<VarId, VarId>,
    ) -> bool {
        match (a, b) {
            (Term::Var(x), Term::Var(y)) => {
                let f = *fwd.entry(*x).or_insert(*y);
                let g = *back.entry(*y).or_insert(*x);
                f == *y && g == *x
            }
            (Term::Const(c), Term::Const(d)) => c == d,
            (Term::Compound(f, xs), Term::Compound(g, ys)) => {
                f == g
                    && xs.len() == ys.len()
                    && xs.iter().zip(ys).all(|(x, y)| walk(x, y, fwd, back))
            }
            _ => false,
        }
    }
    let (mut fwd, mut back) = (HashMap::default(), HashMap::default());
    a.len() == b.len() && a.iter().zip(b).all(|(x, y)| walk(x, y, &mut fwd, &mut back))
}

pub fn is_variant(a: &Atom, b: &Atom) -> bool {
    a.pred == b.pred && is_variant_terms(&a.args, &b.args)
}

/// Renumbers variables `0,1,2,…` in order of first occurrence.
pub fn canonicalize_terms(ts: &[Term]) -> Vec<Term> {
    let mut map: HashMap<VarId, u32> = HashMap::default();
    ts.iter()
        .map(|t| {
            t.map_vars(&mut |v| {
                let n = map.len() as u32;
                Term::var(*map.entry(v).or_insert(n))
            })
        })
        .collect()
}

pub fn canonicalize(a: &Atom) -> Atom {
    Atom { pred: a.pred.clone(), args: canonicalize_terms(&a.args) }
}

/// True iff the tuple is a list of pairwise distinct variables, i.e. a
/// variant of the variable list it instantiates.
pub fn is_variable_tuple(ts: &[Term]) -> bool {
    let mut seen = HashSet::default();
    ts.iter().all(|t| matches!(t, Term::Var(v) if seen.insert(*v)))
}

/// Replaces every variable of `ts` by a fresh one (consistently).
pub fn rename_terms(ts: &[Term], fresh: &mut VarGen) -> Vec<Term> {
    let mut map: HashMap<VarId, VarId> = HashMap::default();
    ts.iter()
        .map(|t| t.map_vars(&mut |v| Term::Var(*map.entry(v).or_insert_with(|| fresh.fresh()))))
        .collect()
}

/// Shifts every variable id by `offset`; used to rename clauses whose
/// variables are numbered densely from zero.
pub(crate) fn shift_atom(a: &Atom, offset: u32) -> Atom {
    if offset == 0 {
        return a.clone();
    }
    a.map_vars(&mut |v| Term::var(v.0 + offset))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn v(n: u32) -> Term {
        Term::var(n)
    }
    fn c(s: &str) -> Term {
        Term::constant(s)
    }

    #[test]
    fn unify_binds_both_sides() {
        // p(X,b) = p(a,Y)
        let s = unify(&Atom::new("p", vec![v(0), c("b")]), &Atom::new("p", vec![c("a"), v(1)]), false)
            .unwrap();
        assert_eq!(s.get(VarId(0)), Some(&c("a")));
        assert_eq!(s.get(VarId(1)), Some(&c("b")));
        assert_eq!(s.len(), 2);
    }

    #[test]
    fn unify_rejects_distinct_predicates() {
        assert!(unify(&Atom::new("p", vec![v(0)]), &Atom::new("q", vec![v(0)]), false).is_none());
    }

    #[test]
    fn unify_goal_against_renamed_head_keeps_goal_variable() {
        // reach(a,X) against reach(X',Y'): X'/a, Y'/X
        let goal = Atom::new("reach", vec![c("a"), v(0)]);
        let head = Atom::new("reach", vec![v(10), v(11)]);
        let s = unify(&goal, &head, false).unwrap();
        assert_eq!(s.get(VarId(10)), Some(&c("a")));
        assert_eq!(s.get(VarId(11)), Some(&v(0)));
        assert_eq!(s.get(VarId(0)), None);
    }

    #[test]
    fn occurs_check_is_switchable() {
        let x = Atom::new("p", vec![v(0)]);
        let fx = Atom::new("p", vec![Term::compound("f", vec![v(0)])]);
        assert!(unify(&x, &fx, true).is_none());
        // Without the check the cyclic binding is accepted and stays finite.
        let s = unify(&x, &fx, false).unwrap();
        assert_eq!(s.get(VarId(0)), Some(&Term::compound("f", vec![v(0)])));
    }

    #[test]
    fn unify_result_is_idempotent() {
        // p(X, f(Y), Y) = p(f(Z), X, a)
        let a = Atom::new("p", vec![v(0), Term::compound("f", vec![v(1)]), v(1)]);
        let b = Atom::new("p", vec![Term::compound("f", vec![v(2)]), v(0), c("a")]);
        let s = unify(&a, &b, true).unwrap();
        let once = s.apply_atom(&a);
        assert_eq!(s.apply_atom(&once), once);
        assert_eq!(once, s.apply_atom(&b));
    }

    #[test]
    fn apply_identity_and_basic() {
        let t = Atom::new("p", vec![v(0), v(1)]);
        assert_eq!(Substitution::new().apply_atom(&t), t);
        let s = Substitution::from_pairs(&[VarId(0)], &[c("a")]);
        assert_eq!(s.apply_atom(&t), Atom::new("p", vec![c("a"), v(1)]));
    }

    #[test]
    fn apply_leaves_memo_look_index_alone() {
        let index = Atom::new("reach", vec![c("a"), v(0)]);
        let g = Subgoal::MemoLook { origin: NodeId(0), index: index.clone(), tuple: vec![v(0)] };
        let s = Substitution::from_pairs(&[VarId(0)], &[c("b")]);
        assert_eq!(
            s.apply_subgoal(&g),
            Subgoal::MemoLook { origin: NodeId(0), index, tuple: vec![c("b")] }
        );
    }

    #[test]
    fn variant_checks() {
        let reach_ax = Atom::new("reach", vec![c("a"), v(0)]);
        let reach_az = Atom::new("reach", vec![c("a"), v(7)]);
        assert!(is_variant(&reach_ax, &reach_az));
        assert!(is_variant(&reach_ax, &reach_ax));
        assert!(!is_variant(&Atom::new("p", vec![v(0), v(0)]), &Atom::new("p", vec![v(0), v(1)])));
        assert!(!is_variant(&Atom::new("p", vec![v(0), v(1)]), &Atom::new("p", vec![v(0), v(0)])));
    }

    #[test]
    fn canonical_form() {
        let a = Atom::new("p", vec![v(9), c("a"), v(9), v(4)]);
        assert_eq!(canonicalize(&a).to_string(), "p(_0,a,_0,_1)");
        let g = Atom::new("p", vec![c("a"), c("b")]);
        assert_eq!(canonicalize(&g), g);
        assert_eq!(
            canonicalize(&Atom::new("reach", vec![c("a"), v(3)])),
            canonicalize(&Atom::new("reach", vec![c("a"), v(8)]))
        );
    }

    #[test]
    fn atom_vars_in_first_occurrence_order() {
        // p(W, a, f(Y), W) has variables (W, Y)
        let a = Atom::new("p", vec![v(5), c("a"), Term::compound("f", vec![v(2)]), v(5)]);
        assert_eq!(a.vars(), vec![VarId(5), VarId(2)]);
    }

    #[test]
    fn variable_tuple_detection() {
        assert!(is_variable_tuple(&[v(3), v(1)]));
        assert!(is_variable_tuple(&[]));
        assert!(!is_variable_tuple(&[v(1), v(1)]));
        assert!(!is_variable_tuple(&[v(1), c("a")]));
    }

    #[test]
    fn compose_applies_left_then_right() {
        let s1 = Substitution::from_pairs(&[VarId(0)], &[Term::compound("f", vec![v(1)])]);
        let s2 = Substitution::from_pairs(&[VarId(1)], &[c("a")]);
        let t = Term::compound("g", vec![v(0), v(1)]);
        assert_eq!(s1.compose(&s2).apply(&t), s2.apply(&s1.apply(&t)));
    }

    #[test]
    fn renaming_uses_fresh_ids() {
        let mut gen = VarGen::starting_at(100);
        let r = rename_terms(&[v(0), v(1), v(0)], &mut gen);
        assert_eq!(r, vec![v(100), v(101), v(100)]);
        assert_eq!(gen.peek(), 102);
    }
}
