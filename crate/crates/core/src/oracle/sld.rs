use super::{OracleResult, OracleStatus};
use crate::program::{Literal, Program, Query};
use crate::terms::{shift_atom, unify, Atom, Term, VarGen};

#[derive(Clone, Debug)]
pub struct SldConfig {
    /// Maximum number of nodes on a branch.
    pub depth_bound: usize,
    pub occurs_check: bool,
}

impl SldConfig {
    pub fn with_bound(depth_bound: usize) -> Self {
        SldConfig { depth_bound, occurs_check: false }
    }
}

#[derive(Clone, Debug)]
enum Goal {
    Atom(Atom),
    /// Cut back to the node at this stack position.
    Cut(usize),
    Return(Vec<Term>),
}

struct Frame {
    goal: Vec<Goal>,
    cursor: usize,
}

/// Prolog-strategy evaluation. Branches longer than the bound are pruned
/// and the result is flagged, but the search goes on.
pub fn sld_solve(program: &Program, query: &Query, config: &SldConfig) -> OracleResult {
    let mut goal: Vec<Goal> = query.atoms.iter().cloned().map(Goal::Atom).collect();
    goal.push(Goal::Return(query.answer_vars().into_iter().map(Term::Var).collect()));
    let mut stack = vec![Frame { goal, cursor: 0 }];
    let mut gen = VarGen::starting_at(query.num_vars);
    let mut answers = Vec::new();
    let mut exceeded = false;
    let mut expand = true;
    loop {
        if expand {
            expand = false;
            let depth = stack.len();
            let top = stack.len() - 1;
            if depth > config.depth_bound {
                exceeded = true;
                continue;
            }
            match stack[top].goal[0].clone() {
                Goal::Return(values) => answers.push(values),
                Goal::Cut(_) => {
                    let goal = stack[top].goal[1..].to_vec();
                    stack.push(Frame { goal, cursor: 0 });
                    expand = true;
                }
                Goal::Atom(a) => {
                    let key = a.key();
                    let n = program.clause_count(&key);
                    while stack[top].cursor < n {
                        let clause = program.clause(&key, stack[top].cursor).expect("clause in range");
                        stack[top].cursor += 1;
                        let base = gen.reserve(clause.num_vars());
                        let head = shift_atom(&clause.head, base);
                        let Some(theta) = unify(&a, &head, config.occurs_check) else { continue };
                        let mut goal: Vec<Goal> = clause
                            .body
                            .iter()
                            .map(|l| match l {
                                Literal::Atom(b) => Goal::Atom(theta.apply_atom(&shift_atom(b, base))),
                                Literal::Cut => Goal::Cut(top),
                            })
                            .collect();
                        goal.extend(stack[top].goal[1..].iter().map(|g| match g {
                            Goal::Atom(b) => Goal::Atom(theta.apply_atom(b)),
                            Goal::Return(t) => Goal::Return(theta.apply_all(t)),
                            Goal::Cut(h) => Goal::Cut(*h),
                        }));
                        stack.push(Frame { goal, cursor: 0 });
                        expand = true;
                        break;
                    }
                }
            }
            continue;
        }
        // Backtracking: fail the top node.
        stack.pop();
        let Some(parent) = stack.last() else { break };
        if let Goal::Cut(h) = parent.goal[0] {
            stack.truncate(h + 1);
            // The cut's clause was chosen at `h`; fail that node as well.
            continue;
        }
        expand = true;
    }
    let status = if exceeded { OracleStatus::DepthExceeded } else { OracleStatus::Complete };
    OracleResult::from_ordered(answers, status)
}
