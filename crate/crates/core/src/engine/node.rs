use std::sync::Arc;

use crate::tables::TableId;
use crate::terms::{Atom, NodeId, Substitution, Subgoal};

/// A persistent ancestor list, innermost pair first.
pub type AncList = Option<Arc<AncLink>>;

#[derive(Debug)]
pub struct AncLink {
    pub node: NodeId,
    pub atom: Atom,
    pub next: AncList,
}

/// Extends `base` with `(node, atom)` as the innermost pair.
pub fn extend_ancestors(base: &AncList, node: NodeId, atom: Atom) -> AncList {
    Some(Arc::new(AncLink { node, atom, next: base.clone() }))
}

/// Pairs of an ancestor list, innermost first.
pub fn ancestors(list: &AncList) -> impl Iterator<Item = &AncLink> {
    std::iter::successors(list.as_deref(), |l| l.next.as_deref())
}

/// One subgoal of a goal together with its ancestor list.
#[derive(Clone, Debug)]
pub struct GoalEntry {
    pub sub: Subgoal,
    pub anc: AncList,
}

impl GoalEntry {
    pub fn root(sub: Subgoal) -> Self {
        GoalEntry { sub, anc: None }
    }

    /// Instantiation keeps the ancestor list.
    pub fn apply(&self, theta: &Substitution) -> Self {
        GoalEntry { sub: theta.apply_subgoal(&self.sub), anc: self.anc.clone() }
    }
}

/// A goal as a persistent list of entries, leftmost first. Resolvents
/// share the untouched remainder with their parent.
pub type Goal = Option<Arc<GoalCell>>;

#[derive(Debug)]
pub struct GoalCell {
    pub entry: GoalEntry,
    pub next: Goal,
}

/// Prepends `entries` (in order) to `tail`.
pub fn goal_from(entries: Vec<GoalEntry>, tail: Goal) -> Goal {
    entries.into_iter().rev().fold(tail, |next, entry| Some(Arc::new(GoalCell { entry, next })))
}

/// Entries of a goal, leftmost first.
pub fn goal_entries(goal: &Goal) -> impl Iterator<Item = &GoalEntry> {
    std::iter::successors(goal.as_deref(), |c| c.next.as_deref()).map(|c| &c.entry)
}

/// How a node's current child was produced.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Using {
    Nothing,
    /// 1-based clause ordinal.
    Clause(usize),
    Tuple,
    Memo,
    Cut,
}

#[derive(Clone, Debug)]
pub struct Node {
    pub id: NodeId,
    pub goal: Goal,
    pub answer_cursor: usize,
    /// 0-based position of the next clause to try.
    pub clause_cursor: usize,
    /// Set when a cut nulled the clause cursor: no clause after this
    /// ordinal is ever selected again.
    pub cut_limit: Option<usize>,
    pub clause_susp: bool,
    pub node_loop: bool,
    pub node_iter: bool,
    pub node_anc: i64,
    pub loop_top: Option<NodeId>,
    pub table: Option<TableId>,
    pub using: Using,
    /// Answer-iteration pass counter (0 = the initial evaluation).
    pub pass: u32,
}

impl Node {
    pub fn new(id: NodeId, goal: Goal) -> Self {
        Node {
            id,
            goal,
            answer_cursor: 0,
            clause_cursor: 0,
            cut_limit: None,
            clause_susp: false,
            node_loop: false,
            node_iter: false,
            node_anc: -1,
            loop_top: None,
            table: None,
            using: Using::Nothing,
            pass: 0,
        }
    }

    pub fn first(&self) -> &GoalEntry {
        &self.goal.as_ref().expect("nonempty goal").entry
    }

    pub fn leftmost(&self) -> &Subgoal {
        &self.first().sub
    }

    /// The goal without its leftmost subgoal.
    pub fn rest(&self) -> Goal {
        self.goal.as_ref().expect("nonempty goal").next.clone()
    }

    pub fn goal_string(&self) -> String {
        let parts: Vec<String> = goal_entries(&self.goal).map(|g| g.sub.to_string()).collect();
        format!("<- {}", parts.join(","))
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::terms::Term;

    #[test]
    fn fresh_node_flags() {
        let n = Node::new(NodeId(0), goal_from(vec![GoalEntry::root(Subgoal::Return(vec![]))], None));
        assert_eq!(n.node_anc, -1);
        assert!(!n.clause_susp && !n.node_loop && !n.node_iter);
    }

    #[test]
    fn ancestor_lists_are_innermost_first() {
        let a = Atom::new("p", vec![Term::var(0)]);
        let b = Atom::new("q", vec![Term::var(0)]);
        let l1 = extend_ancestors(&None, NodeId(0), a);
        let l2 = extend_ancestors(&l1, NodeId(3), b);
        let ids: Vec<usize> = ancestors(&l2).map(|l| l.node.0).collect();
        assert_eq!(ids, [3, 0]);
        assert_eq!(ancestors(&l1).count(), 1);
    }
}
