use std::collections::{BTreeSet, HashMap, HashSet};

use thiserror::Error;

use super::{OracleResult, OracleStatus};
use crate::program::{collect_constants, Literal, Program, Query};
use crate::terms::{Atom, PredKey, Term, VarId};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum OracleError {
    #[error("bottom-up evaluation needs a function-free program")]
    CompoundTerms,
    #[error("bottom-up evaluation does not support cut")]
    Cut,
}

/// Constants of the program and query; a single placeholder constant when
/// there are none.
pub fn universe(program: &Program, query: &Query) -> Vec<Term> {
    let mut consts = program.constants();
    for a in &query.atoms {
        collect_constants(a, &mut consts);
    }
    if consts.is_empty() {
        consts.insert(Term::constant("u0"));
    }
    consts.into_iter().collect()
}

/// All ground instances of the tuples over the universe.
pub fn ground_over(tuples: &[Vec<Term>], universe: &[Term]) -> BTreeSet<Vec<Term>> {
    let mut out = BTreeSet::new();
    for t in tuples {
        let mut vars = Vec::new();
        t.iter().for_each(|x| x.collect_vars(&mut vars));
        for_each_assignment(&vars, universe, &mut HashMap::new(), &mut |b| {
            out.insert(t.iter().map(|x| subst(x, b)).collect());
        });
    }
    out
}

type Binding = HashMap<VarId, Term>;

fn subst(t: &Term, b: &Binding) -> Term {
    match t {
        Term::Var(v) => b.get(v).cloned().unwrap_or_else(|| t.clone()),
        _ => t.clone(),
    }
}

fn for_each_assignment(vars: &[VarId], universe: &[Term], b: &mut Binding, f: &mut impl FnMut(&Binding)) {
    let Some((v, rest)) = vars.split_first() else {
        f(b);
        return;
    };
    if b.contains_key(v) {
        return for_each_assignment(rest, universe, b, f);
    }
    for c in universe {
        b.insert(*v, c.clone());
        for_each_assignment(rest, universe, b, f);
    }
    b.remove(v);
}

fn match_fact(pattern: &Atom, fact: &Atom, b: &mut Binding) -> Option<Vec<VarId>> {
    let mut bound = Vec::new();
    for (p, f) in pattern.args.iter().zip(&fact.args) {
        match p {
            Term::Var(v) => match b.get(v) {
                Some(t) if t != f => {
                    bound.iter().for_each(|v| {
                        b.remove(v);
                    });
                    return None;
                }
                Some(_) => {}
                None => {
                    b.insert(*v, f.clone());
                    bound.push(*v);
                }
            },
            _ if p != f => {
                bound.iter().for_each(|v| {
                    b.remove(v);
                });
                return None;
            }
            _ => {}
        }
    }
    Some(bound)
}

/// Enumerates bindings satisfying every body atom against `facts`.
fn join(body: &[&Atom], facts: &HashMap<PredKey, Vec<Atom>>, b: &mut Binding, f: &mut impl FnMut(&Binding)) {
    let Some((first, rest)) = body.split_first() else {
        f(b);
        return;
    };
    for fact in facts.get(&first.key()).map(Vec::as_slice).unwrap_or(&[]) {
        if let Some(bound) = match_fact(first, fact, b) {
            join(rest, facts, b, f);
            for v in bound {
                b.remove(&v);
            }
        }
    }
}

/// Naive fixpoint of the immediate-consequence operator, then the query's
/// answers read off the model.
pub fn bottomup_solve(program: &Program, query: &Query) -> Result<OracleResult, OracleError> {
    if program.has_cut() {
        return Err(OracleError::Cut);
    }
    let query_compound = query.atoms.iter().any(|a| a.args.iter().any(|t| matches!(t, Term::Compound(..))));
    if program.has_compound_terms() || query_compound {
        return Err(OracleError::CompoundTerms);
    }
    let universe = universe(program, query);
    let mut model: HashSet<Atom> = HashSet::new();
    let mut by_pred: HashMap<PredKey, Vec<Atom>> = HashMap::new();
    loop {
        let mut derived = Vec::new();
        for c in &program.clauses {
            let body: Vec<&Atom> = c
                .body
                .iter()
                .filter_map(|l| match l {
                    Literal::Atom(a) => Some(a),
                    Literal::Cut => None,
                })
                .collect();
            let head_vars = c.head.vars();
            join(&body, &by_pred, &mut HashMap::new(), &mut |b| {
                let mut b = b.clone();
                for_each_assignment(&head_vars, &universe, &mut b, &mut |b| {
                    derived.push(Atom { pred: c.head.pred.clone(), args: c.head.args.iter().map(|t| subst(t, b)).collect() });
                });
            });
        }
        let mut grew = false;
        for a in derived {
            if model.insert(a.clone()) {
                by_pred.entry(a.key()).or_default().push(a);
                grew = true;
            }
        }
        if !grew {
            break;
        }
    }
    let atoms: Vec<&Atom> = query.atoms.iter().collect();
    let vars = query.answer_vars();
    let mut found = BTreeSet::new();
    join(&atoms, &by_pred, &mut HashMap::new(), &mut |b| {
        let mut b = b.clone();
        for_each_assignment(&vars, &universe, &mut b, &mut |b| {
            found.insert(vars.iter().map(|v| subst(&Term::Var(*v), b)).collect::<Vec<_>>());
        });
    });
    Ok(OracleResult::from_ordered(found.into_iter().collect(), OracleStatus::Complete))
}
