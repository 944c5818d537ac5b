//! Scalable workloads for the benchmarks.

use olcvar::model::{GatewayDirection, Node, SequenceFlow};
use olcvar::olc::{OlcTransition, State};
use olcvar::sequence::{BreakCombinedFragment, FragmentKind, Message, MessageEffect, SequenceDiagram};
use olcvar::{Effect, Initiator, ObjectLifeCycle, ProcessModel};

/// Object `X` moving through `n` steps: `X_0 -> X_1 -> ... -> X_n`.
pub fn chain_olc(n: usize) -> ObjectLifeCycle {
    ObjectLifeCycle {
        object: "X".into(),
        states: (0..=n).map(|i| State::new(format!("X_{i}"), format!("s{i}"))).collect(),
        initial: "X_0".into(),
        finals: [format!("X_{n}")].into(),
        transitions: (0..n)
            .map(|i| OlcTransition {
                id: format!("t{i}"),
                name: format!("step {i}"),
                object: "X".into(),
                source: format!("X_{i}"),
                target: format!("X_{}", i + 1),
                initiator: None,
            })
            .collect(),
    }
}

/// One task per step of [`chain_olc`]. With `parallel_noise > 0` the chain
/// runs in parallel with that many effect-free tasks, which multiplies the
/// number of interleavings.
pub fn chain_model(n: usize, parallel_noise: usize) -> ProcessModel {
    let mut nodes = vec![Node::start("start", "")];
    let mut edges = Vec::new();
    let mut prev = "start".to_string();
    let mut flow = 0;
    let mut link = |edges: &mut Vec<SequenceFlow>, a: &str, b: &str| {
        flow += 1;
        edges.push(SequenceFlow::new(format!("f{flow}"), a, b));
    };
    if parallel_noise > 0 {
        nodes.push(Node::and("fork", "", GatewayDirection::Split));
        nodes.push(Node::and("join", "", GatewayDirection::Join));
        link(&mut edges, "start", "fork");
        for k in 0..parallel_noise {
            let id = format!("noise{k}");
            nodes.push(Node::task(&id, "noise", vec![]));
            link(&mut edges, "fork", &id);
            link(&mut edges, &id, "join");
        }
        prev = "chain_entry".into();
        nodes.push(Node::task(&prev, "entry", vec![]));
        link(&mut edges, "fork", &prev);
    }
    for i in 0..n {
        let id = format!("task{i}");
        nodes.push(Node::task(&id, format!("step {i}"), vec![Effect::new("X", format!("X_{i}"), format!("X_{}", i + 1))]));
        link(&mut edges, &prev, &id);
        prev = id;
    }
    if parallel_noise > 0 {
        link(&mut edges, &prev, "join");
        prev = "join".into();
    }
    nodes.push(Node::end("end", ""));
    link(&mut edges, &prev, "end");
    ProcessModel::new("chain", nodes, edges).expect("chain model is valid")
}

/// A diagram mirroring [`chain_olc`] with one break fragment after step `at`.
pub fn chain_sd(n: usize, at: usize) -> SequenceDiagram {
    let mut messages: Vec<Message> = (0..n)
        .map(|i| Message {
            id: format!("m{i}"),
            name: format!("step {i}"),
            from: "A".into(),
            to: "B".into(),
            effect: Some(Effect::new("X", format!("X_{i}"), format!("X_{}", i + 1)).into()),
            self_message: false,
        })
        .collect();
    messages.insert(
        at,
        Message {
            id: "abort".into(),
            name: "Abort".into(),
            from: "B".into(),
            to: "A".into(),
            effect: Some(MessageEffect {
                object: "X".into(),
                from: None,
                to: None,
            }),
            self_message: false,
        },
    );
    SequenceDiagram {
        id: "chain".into(),
        lifelines: vec!["A".into(), "B".into()],
        messages,
        fragments: vec![BreakCombinedFragment {
            id: "timeout".into(),
            kind: FragmentKind::Break,
            initiator: Initiator::Timeout,
            messages: vec!["abort".into()],
            guard: None,
        }],
    }
}
