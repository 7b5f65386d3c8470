//! Trace events, their line format, and invariant checkers over traces.

use std::collections::HashMap;
use std::fmt;

use thiserror::Error;

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Via {
    Root,
    Clause,
    Tuple,
    Memo,
    Cut,
}

impl Via {
    fn as_str(self) -> &'static str {
        match self {
            Via::Root => "root",
            Via::Clause => "clause",
            Via::Tuple => "tuple",
            Via::Memo => "memo",
            Via::Cut => "cut",
        }
    }

    fn parse(s: &str) -> Option<Via> {
        Some(match s {
            "root" => Via::Root,
            "clause" => Via::Clause,
            "tuple" => Via::Tuple,
            "memo" => Via::Memo,
            "cut" => Via::Cut,
            _ => return None,
        })
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum TraceEvent {
    /// `node` registered as a child of `parent` (the root has none).
    /// `anc` and `pending` describe the parent at expansion time: its
    /// node_ANC flag and its unconsumed table answers.
    Expand { node: usize, parent: Option<usize>, via: Via, clause: Option<String>, anc: i64, pending: usize },
    /// `node` popped off the stack; `cut` marks pops caused by a cut jump.
    Backtrack { node: usize, parent: Option<usize>, cut: bool },
    Memo { node: usize, table: String, tuple: String, new: bool },
    Fetch { node: usize, table: String, tuple: String },
    LoopDetected { node: usize, top: usize, clause: usize, rerun: bool },
    IterationStart { node: usize, pass: u32 },
    IterationEnd { node: usize, pass: u32, new: bool, comp: bool },
    Answer { node: usize, values: String },
}

impl TraceEvent {
    pub fn kind(&self) -> &'static str {
        match self {
            TraceEvent::Expand { .. } => "expand",
            TraceEvent::Backtrack { .. } => "backtrack",
            TraceEvent::Memo { .. } => "memo",
            TraceEvent::Fetch { .. } => "fetch",
            TraceEvent::LoopDetected { .. } => "loop-detected",
            TraceEvent::IterationStart { .. } => "iteration-start",
            TraceEvent::IterationEnd { .. } => "iteration-end",
            TraceEvent::Answer { .. } => "answer",
        }
    }

    pub fn node(&self) -> usize {
        match self {
            TraceEvent::Expand { node, .. }
            | TraceEvent::Backtrack { node, .. }
            | TraceEvent::Memo { node, .. }
            | TraceEvent::Fetch { node, .. }
            | TraceEvent::LoopDetected { node, .. }
            | TraceEvent::IterationStart { node, .. }
            | TraceEvent::IterationEnd { node, .. }
            | TraceEvent::Answer { node, .. } => *node,
        }
    }
}

fn opt(n: Option<usize>) -> String {
    n.map_or_else(|| "-".to_string(), |n| n.to_string())
}

fn bit(b: bool) -> u8 {
    u8::from(b)
}

impl fmt::Display for TraceEvent {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "EVENT kind={} node={}", self.kind(), self.node())?;
        match self {
            TraceEvent::Expand { parent, via, clause, anc, pending, .. } => {
                write!(f, " parent={} via={}", opt(*parent), via.as_str())?;
                if let Some(c) = clause {
                    write!(f, " clause={c}")?;
                }
                write!(f, " anc={anc} pending={pending}")
            }
            TraceEvent::Backtrack { parent, cut, .. } => write!(f, " parent={} cut={}", opt(*parent), bit(*cut)),
            TraceEvent::Memo { table, tuple, new, .. } => {
                write!(f, " table={table} tuple={tuple} new={}", bit(*new))
            }
            TraceEvent::Fetch { table, tuple, .. } => write!(f, " table={table} tuple={tuple}"),
            TraceEvent::LoopDetected { top, clause, rerun, .. } => {
                write!(f, " top={top} clause={clause} rerun={}", bit(*rerun))
            }
            TraceEvent::IterationStart { pass, .. } => write!(f, " pass={pass}"),
            TraceEvent::IterationEnd { pass, new, comp, .. } => {
                write!(f, " pass={pass} new={} comp={}", bit(*new), bit(*comp))
            }
            TraceEvent::Answer { values, .. } => write!(f, " values={values}"),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
#[error("bad trace line `{line}`: {reason}")]
pub struct TraceParseError {
    pub line: String,
    pub reason: String,
}

/// Parses one line produced by `Display`.
pub fn parse_event(line: &str) -> Result<TraceEvent, TraceParseError> {
    let err = |reason: &str| TraceParseError { line: line.to_string(), reason: reason.to_string() };
    let mut words = line.split_whitespace();
    if words.next() != Some("EVENT") {
        return Err(err("missing EVENT prefix"));
    }
    let fields: HashMap<&str, &str> = words.filter_map(|w| w.split_once('=')).collect();
    let get = |k: &str| fields.get(k).copied().ok_or_else(|| err(&format!("missing field {k}")));
    let num = |k: &str| get(k)?.parse::<usize>().map_err(|_| err(&format!("bad number in {k}")));
    let int = |k: &str| get(k)?.parse::<i64>().map_err(|_| err(&format!("bad number in {k}")));
    let flag = |k: &str| Ok::<bool, TraceParseError>(get(k)? == "1");
    let parent = || -> Result<Option<usize>, TraceParseError> {
        match get("parent")? {
            "-" => Ok(None),
            p => p.parse().map(Some).map_err(|_| err("bad parent")),
        }
    };
    let node = num("node")?;
    Ok(match get("kind")? {
        "expand" => TraceEvent::Expand {
            node,
            parent: parent()?,
            via: Via::parse(get("via")?).ok_or_else(|| err("bad via"))?,
            clause: fields.get("clause").map(|s| s.to_string()),
            anc: int("anc")?,
            pending: num("pending")?,
        },
        "backtrack" => TraceEvent::Backtrack { node, parent: parent()?, cut: flag("cut")? },
        "memo" => TraceEvent::Memo {
            node,
            table: get("table")?.to_string(),
            tuple: get("tuple")?.to_string(),
            new: flag("new")?,
        },
        "fetch" => TraceEvent::Fetch { node, table: get("table")?.to_string(), tuple: get("tuple")?.to_string() },
        "loop-detected" => TraceEvent::LoopDetected {
            node,
            top: num("top")?,
            clause: num("clause")?,
            rerun: flag("rerun")?,
        },
        "iteration-start" => TraceEvent::IterationStart { node, pass: num("pass")? as u32 },
        "iteration-end" => TraceEvent::IterationEnd {
            node,
            pass: num("pass")? as u32,
            new: flag("new")?,
            comp: flag("comp")?,
        },
        "answer" => TraceEvent::Answer { node, values: get("values")?.to_string() },
        other => return Err(err(&format!("unknown kind {other}"))),
    })
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Violation {
    #[error("event {index}: {message}")]
    Linearity { index: usize, message: String },
    #[error("event {index}: expansion of node {node} by clause before consuming {pending} table answers")]
    TableFirst { index: usize, node: usize, pending: usize },
    #[error("event {index}: node {node} has node_ANC={anc} but used clause {clause}")]
    ClauseSkip { index: usize, node: usize, anc: i64, clause: usize },
    #[error("event {index}: {message}")]
    Iteration { index: usize, message: String },
}

/// Expansions push onto the most recent node, backtracks pop the most
/// recent node, and the run ends with an empty stack when it is complete.
pub fn check_linearity(events: &[TraceEvent], complete: bool) -> Result<(), Violation> {
    let mut stack: Vec<usize> = Vec::new();
    let fail = |index: usize, message: String| Err(Violation::Linearity { index, message });
    for (i, e) in events.iter().enumerate() {
        match e {
            TraceEvent::Expand { node, parent, .. } => {
                if stack.last().copied() != *parent {
                    return fail(i, format!("node {node} expanded from {parent:?} but top is {:?}", stack.last()));
                }
                if stack.contains(node) {
                    return fail(i, format!("node {node} registered twice"));
                }
                stack.push(*node);
            }
            TraceEvent::Backtrack { node, parent, .. } => {
                if stack.last() != Some(node) {
                    return fail(i, format!("backtrack from {node} but top is {:?}", stack.last()));
                }
                stack.pop();
                if stack.last().copied() != *parent {
                    return fail(i, format!("backtrack from {node} lands on {:?}, not {parent:?}", stack.last()));
                }
            }
            _ => {}
        }
    }
    if complete && !stack.is_empty() {
        return fail(events.len(), format!("{} nodes left on the stack", stack.len()));
    }
    Ok(())
}

fn clause_ordinal(label: &str) -> Option<usize> {
    label.rsplit_once('#').and_then(|(_, n)| n.parse().ok())
}

/// A tabled parent expands by clause only once its answers are consumed.
pub fn check_table_first(events: &[TraceEvent]) -> Result<(), Violation> {
    for (index, e) in events.iter().enumerate() {
        if let TraceEvent::Expand { parent: Some(p), via: Via::Clause, pending, .. } = e {
            if *pending > 0 {
                return Err(Violation::TableFirst { index, node: *p, pending: *pending });
            }
        }
    }
    Ok(())
}

/// A parent with node_ANC=j>0 never expands with a clause ordinal ≤ j.
pub fn check_clause_skip(events: &[TraceEvent]) -> Result<(), Violation> {
    for (index, e) in events.iter().enumerate() {
        if let TraceEvent::Expand { parent: Some(p), via: Via::Clause, clause: Some(c), anc, .. } = e {
            let k = clause_ordinal(c).unwrap_or(0);
            if *anc > 0 && k as i64 <= *anc {
                return Err(Violation::ClauseSkip { index, node: *p, anc: *anc, clause: k });
            }
        }
    }
    Ok(())
}

/// Iteration passes repeat while NEW=1 and stop, completing the table,
/// exactly when a pass leaves NEW=0.
pub fn check_iteration(events: &[TraceEvent]) -> Result<(), Violation> {
    // Per node: the pass that must start next, if the last end had new=1.
    let mut expect_start: HashMap<usize, u32> = HashMap::new();
    let mut current: HashMap<usize, u32> = HashMap::new();
    for (index, e) in events.iter().enumerate() {
        let fail = |message: String| Err(Violation::Iteration { index, message });
        match e {
            TraceEvent::IterationEnd { node, pass, new, comp } => {
                if let Some(p) = expect_start.get(node) {
                    return fail(format!("node {node} ended pass {pass} without starting pass {p}"));
                }
                if *pass != current.get(node).copied().unwrap_or(0) {
                    return fail(format!("node {node} ended pass {pass} out of order"));
                }
                if *new {
                    if *comp {
                        return fail(format!("node {node} completed with NEW=1"));
                    }
                    expect_start.insert(*node, pass + 1);
                } else if !*comp {
                    return fail(format!("node {node} stopped iterating without completion"));
                }
            }
            TraceEvent::IterationStart { node, pass } => {
                if expect_start.remove(node) != Some(*pass) {
                    return fail(format!("node {node} started pass {pass} unexpectedly"));
                }
                current.insert(*node, *pass);
            }
            _ => {}
        }
    }
    if let Some((node, pass)) = expect_start.iter().next() {
        return Err(Violation::Iteration {
            index: events.len(),
            message: format!("node {node} never started pass {pass}"),
        });
    }
    Ok(())
}

/// All structural checks at once.
pub fn check_all(events: &[TraceEvent], complete: bool) -> Result<(), Violation> {
    check_linearity(events, complete)?;
    check_table_first(events)?;
    check_clause_skip(events)?;
    check_iteration(events)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn expand(node: usize, parent: Option<usize>) -> TraceEvent {
        TraceEvent::Expand { node, parent, via: Via::Clause, clause: Some("p/1#1".into()), anc: 0, pending: 0 }
    }

    fn back(node: usize, parent: Option<usize>) -> TraceEvent {
        TraceEvent::Backtrack { node, parent, cut: false }
    }

    #[test]
    fn line_format_roundtrip() {
        let events = vec![
            TraceEvent::Expand { node: 0, parent: None, via: Via::Root, clause: None, anc: -1, pending: 0 },
            TraceEvent::Expand {
                node: 4,
                parent: Some(3),
                via: Via::Clause,
                clause: Some("reach/2#1".into()),
                anc: 1,
                pending: 0,
            },
            TraceEvent::Backtrack { node: 4, parent: Some(3), cut: true },
            TraceEvent::Memo { node: 2, table: "reach(a,_0)".into(), tuple: "(a)".into(), new: true },
            TraceEvent::Fetch { node: 2, table: "reach(a,_0)".into(), tuple: "(a)".into() },
            TraceEvent::LoopDetected { node: 1, top: 0, clause: 1, rerun: false },
            TraceEvent::IterationStart { node: 0, pass: 1 },
            TraceEvent::IterationEnd { node: 0, pass: 1, new: false, comp: true },
            TraceEvent::Answer { node: 5, values: "(a)".into() },
        ];
        for e in events {
            assert_eq!(parse_event(&e.to_string()).unwrap(), e);
        }
        assert_eq!(
            TraceEvent::Expand { node: 4, parent: Some(3), via: Via::Clause, clause: Some("r/2#1".into()), anc: 1, pending: 0 }
                .to_string(),
            "EVENT kind=expand node=4 parent=3 via=clause clause=r/2#1 anc=1 pending=0"
        );
        assert!(parse_event("kind=expand").is_err());
    }

    #[test]
    fn linearity_accepts_stack_discipline() {
        let ok = [expand(0, None), expand(1, Some(0)), back(1, Some(0)), expand(2, Some(0)), back(2, Some(0)), back(0, None)];
        assert!(check_linearity(&ok, true).is_ok());
        let skip = [expand(0, None), expand(1, Some(0)), expand(2, Some(0))];
        assert!(check_linearity(&skip, false).is_err());
        let wrong_pop = [expand(0, None), expand(1, Some(0)), back(0, None)];
        assert!(check_linearity(&wrong_pop, false).is_err());
        assert!(check_linearity(&ok[..3], true).is_err());
    }

    #[test]
    fn clause_skip_and_table_first() {
        let bad = TraceEvent::Expand { node: 2, parent: Some(1), via: Via::Clause, clause: Some("p/1#1".into()), anc: 1, pending: 0 };
        assert!(check_clause_skip(&[bad]).is_err());
        let good = TraceEvent::Expand { node: 2, parent: Some(1), via: Via::Clause, clause: Some("p/1#2".into()), anc: 1, pending: 0 };
        assert!(check_clause_skip(&[good]).is_ok());
        let eager = TraceEvent::Expand { node: 2, parent: Some(1), via: Via::Clause, clause: Some("p/1#2".into()), anc: 0, pending: 2 };
        assert!(check_table_first(&[eager]).is_err());
    }

    #[test]
    fn iteration_protocol() {
        let ok = [
            TraceEvent::IterationEnd { node: 0, pass: 0, new: true, comp: false },
            TraceEvent::IterationStart { node: 0, pass: 1 },
            TraceEvent::IterationEnd { node: 0, pass: 1, new: false, comp: true },
        ];
        assert!(check_iteration(&ok).is_ok());
        assert!(check_iteration(&ok[..1]).is_err());
        let no_comp = [TraceEvent::IterationEnd { node: 0, pass: 0, new: false, comp: false }];
        assert!(check_iteration(&no_comp).is_err());
    }
}
