//! The four resolvent forms of PMF-mode resolution.

use super::node::{extend_ancestors, goal_from, Goal, GoalEntry};
use crate::program::{Clause, Literal};
use crate::terms::{shift_atom, Atom, NodeId, Subgoal, Substitution, Term};

/// `(A2..Ak)θ, A(k+1)..Am` where `Ak` is the next memo_look (or the end),
/// with `out` prepended.
fn apply_to_boundary(goal: &Goal, theta: &Substitution, mut out: Vec<GoalEntry>) -> Goal {
    let mut cell = goal.as_deref().and_then(|c| c.next.as_deref());
    while let Some(c) = cell {
        out.push(c.entry.apply(theta));
        if matches!(c.entry.sub, Subgoal::MemoLook { .. }) {
            return goal_from(out, c.next.clone());
        }
        cell = c.next.as_deref();
    }
    goal_from(out, None)
}

/// Clause variables shifted to start at `base`.
pub struct Renamed {
    pub head: Atom,
    pub body: Vec<Option<Atom>>,
}

pub fn rename_clause(clause: &Clause, base: u32) -> Renamed {
    Renamed { head: shift_atom(&clause.head, base), body: rename_body(clause, base) }
}

/// Body literals shifted to start at `base`; `None` marks a cut.
pub fn rename_body(clause: &Clause, base: u32) -> Vec<Option<Atom>> {
    clause
        .body
        .iter()
        .map(|l| match l {
            Literal::Atom(a) => Some(shift_atom(a, base)),
            Literal::Cut => None,
        })
        .collect()
}

/// Case 1: the leftmost memo_look fetched `θ`.
pub fn from_fetch(goal: &Goal, theta: &Substitution) -> Goal {
    apply_to_boundary(goal, theta, Vec::new())
}

/// Case 2: a non-tabled leftmost atom resolved with a clause.
pub fn from_clause_plain(goal: &Goal, body: &[Option<Atom>], theta: &Substitution, at: NodeId) -> Goal {
    let mut out = Vec::with_capacity(body.len() + 2);
    for b in body {
        let sub = match b {
            Some(a) => Subgoal::Atom(theta.apply_atom(a)),
            None => Subgoal::Cut(at),
        };
        out.push(GoalEntry { sub, anc: None });
    }
    apply_to_boundary(goal, theta, out)
}

/// Case 3: a tabled leftmost atom resolved with a clause. The body is
/// followed by `memo_look(at, A1, X⃗θ)` and the untouched remainder.
pub fn from_clause_tabled(goal: &Goal, body: &[Option<Atom>], theta: &Substitution, at: NodeId) -> Goal {
    let cell = goal.as_deref().expect("nonempty goal");
    let first = &cell.entry;
    let Subgoal::Atom(a1) = &first.sub else { unreachable!("tabled resolution on a control subgoal") };
    let anc = extend_ancestors(&first.anc, at, a1.clone());
    let mut out = Vec::with_capacity(body.len() + 1);
    for b in body {
        let sub = match b {
            Some(a) => Subgoal::Atom(theta.apply_atom(a)),
            None => Subgoal::Cut(at),
        };
        out.push(GoalEntry { sub, anc: anc.clone() });
    }
    let tuple: Vec<Term> = a1.vars().into_iter().map(|v| theta.apply(&Term::Var(v))).collect();
    out.push(GoalEntry { sub: Subgoal::MemoLook { origin: at, index: a1.clone(), tuple }, anc: None });
    goal_from(out, cell.next.clone())
}

/// Case 4: a tabled leftmost atom resolved with an answer tuple (already
/// turned into `X⃗/I⃗`).
pub fn from_tuple(goal: &Goal, theta: &Substitution) -> Goal {
    from_fetch(goal, theta)
}
