use std::fmt::Write;

use super::{NodeKind, ProcessModel};

fn quote(s: &str) -> String {
    format!("\"{}\"", s.replace('\\', "\\\\").replace('"', "\\\""))
}

/// Graphviz digraph with one node per model node. Boundary events hang off
/// their host task with a dashed edge.
pub fn export_dot(pm: &ProcessModel) -> String {
    let mut out = String::new();
    let _ = writeln!(out, "digraph {} {{", quote(&pm.id));
    let _ = writeln!(out, "  rankdir=LR;");
    for n in pm.nodes() {
        let (shape, extra) = match &n.kind {
            NodeKind::StartEvent => ("circle", String::new()),
            NodeKind::EndEvent => ("doublecircle", String::new()),
            NodeKind::Task { .. } => ("box", ", style=rounded".to_string()),
            NodeKind::ExclusiveGateway { .. } => ("diamond", ", xlabel=\"X\"".to_string()),
            NodeKind::ParallelGateway { .. } => ("diamond", ", xlabel=\"+\"".to_string()),
            NodeKind::BoundaryEvent { trigger, .. } => ("circle", format!(", style=bold, xlabel=\"{trigger}\"")),
        };
        let label = if n.label.is_empty() { &n.id } else { &n.label };
        let _ = writeln!(out, "  {} [label={}, shape={shape}{extra}];", quote(&n.id), quote(label));
    }
    for e in pm.edges() {
        match &e.guard {
            Some(g) => {
                let _ = writeln!(out, "  {} -> {} [label={}];", quote(&e.source), quote(&e.target), quote(g));
            }
            None => {
                let _ = writeln!(out, "  {} -> {};", quote(&e.source), quote(&e.target));
            }
        }
    }
    for n in pm.boundary_events() {
        if let NodeKind::BoundaryEvent { host, .. } = &n.kind {
            let _ = writeln!(out, "  {} -> {} [style=dashed, arrowhead=none];", quote(host), quote(&n.id));
        }
    }
    out.push_str("}\n");
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::model::{Node, SequenceFlow, Trigger};

    #[test]
    fn minimal_model_has_two_nodes_one_edge() {
        let pm = ProcessModel::new(
            "m",
            vec![Node::start("s", "start"), Node::end("e", "end")],
            vec![SequenceFlow::new("f", "s", "e")],
        )
        .unwrap();
        let dot = export_dot(&pm);
        assert_eq!(dot.lines().filter(|l| l.contains("shape=")).count(), 2);
        assert_eq!(dot.lines().filter(|l| l.contains("->")).count(), 1);
    }

    #[test]
    fn boundary_event_gets_dashed_edge_from_host() {
        let pm = ProcessModel::new(
            "m",
            vec![
                Node::start("s", ""),
                Node::task("t", "work", vec![]),
                Node::boundary("b", "late", Trigger::Timer, "t"),
                Node::end("e1", ""),
                Node::end("e2", ""),
            ],
            vec![
                SequenceFlow::new("f1", "s", "t"),
                SequenceFlow::new("f2", "t", "e1"),
                SequenceFlow::new("f3", "b", "e2"),
            ],
        )
        .unwrap();
        assert!(export_dot(&pm).contains("\"t\" -> \"b\" [style=dashed, arrowhead=none];"));
    }

    #[test]
    fn quotes_are_escaped() {
        assert_eq!(quote("say \"hi\""), "\"say \\\"hi\\\"\"");
    }
}
