//! Token-game semantics shared by trace enumeration and state-space checks.
//!
//! A marking counts tokens per sequence flow. Every token can only be
//! consumed by the target of its flow and firings only add tokens, so
//! firings never disable each other. Silent nodes (gateways, end events)
//! are therefore fired eagerly, one at a time, and only task and boundary
//! firings are interleaved. A run is complete when the marking is empty.

use std::collections::BTreeMap;

use super::{Node, NodeKind, ProcessModel};

pub(crate) type Marking = Vec<u16>;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub(crate) enum Fire {
    Silent,
    /// Task completed normally (node index).
    Task(usize),
    /// Host task interrupted by a boundary event (boundary node index).
    Boundary(usize),
}

#[derive(Debug, Clone)]
pub(crate) struct Move {
    pub fire: Fire,
    pub consumed: Vec<usize>,
    pub produced: Vec<usize>,
}

pub(crate) struct Net<'m> {
    pub nodes: Vec<&'m Node>,
    inputs: Vec<Vec<usize>>,
    outputs: Vec<Vec<usize>>,
    boundaries: Vec<Vec<usize>>,
    start_edge: usize,
    edge_count: usize,
}

impl<'m> Net<'m> {
    pub fn new(pm: &'m ProcessModel) -> Self {
        let nodes: Vec<&Node> = pm.nodes().collect();
        let node_ix: BTreeMap<&str, usize> = nodes.iter().enumerate().map(|(i, n)| (n.id.as_str(), i)).collect();
        let mut inputs = vec![Vec::new(); nodes.len()];
        let mut outputs = vec![Vec::new(); nodes.len()];
        let mut start_edge = 0;
        for (e, flow) in pm.edges().enumerate() {
            let (s, t) = (node_ix[flow.source.as_str()], node_ix[flow.target.as_str()]);
            outputs[s].push(e);
            inputs[t].push(e);
            if nodes[s].kind == NodeKind::StartEvent {
                start_edge = e;
            }
        }
        let mut boundaries = vec![Vec::new(); nodes.len()];
        for (b, n) in nodes.iter().enumerate() {
            if let NodeKind::BoundaryEvent { host, .. } = &n.kind {
                boundaries[node_ix[host.as_str()]].push(b);
            }
        }
        Net {
            nodes,
            inputs,
            outputs,
            boundaries,
            start_edge,
            edge_count: pm.edge_count(),
        }
    }

    pub fn initial(&self) -> Marking {
        let mut m = vec![0; self.edge_count];
        m[self.start_edge] = 1;
        m
    }

    pub fn start_edge(&self) -> usize {
        self.start_edge
    }

    /// Enabled moves under the eager-silent rule: if some silent node is
    /// enabled only its alternatives are returned.
    pub fn moves(&self, m: &Marking) -> Vec<Move> {
        let first_marked = |n: usize| self.inputs[n].iter().copied().find(|&e| m[e] > 0);
        for (n, node) in self.nodes.iter().enumerate() {
            match node.kind {
                NodeKind::EndEvent => {
                    if let Some(e) = first_marked(n) {
                        return vec![Move {
                            fire: Fire::Silent,
                            consumed: vec![e],
                            produced: vec![],
                        }];
                    }
                }
                NodeKind::ExclusiveGateway { .. } => {
                    if let Some(e) = first_marked(n) {
                        return self.outputs[n]
                            .iter()
                            .map(|&o| Move {
                                fire: Fire::Silent,
                                consumed: vec![e],
                                produced: vec![o],
                            })
                            .collect();
                    }
                }
                NodeKind::ParallelGateway { .. } => {
                    if self.inputs[n].iter().all(|&e| m[e] > 0) && !self.inputs[n].is_empty() {
                        return vec![Move {
                            fire: Fire::Silent,
                            consumed: self.inputs[n].clone(),
                            produced: self.outputs[n].clone(),
                        }];
                    }
                }
                _ => {}
            }
        }
        let mut moves = Vec::new();
        for (n, node) in self.nodes.iter().enumerate() {
            if !node.is_task() {
                continue;
            }
            let Some(e) = first_marked(n) else { continue };
            moves.push(Move {
                fire: Fire::Task(n),
                consumed: vec![e],
                produced: self.outputs[n].clone(),
            });
            for &b in &self.boundaries[n] {
                moves.push(Move {
                    fire: Fire::Boundary(b),
                    consumed: vec![e],
                    produced: self.outputs[b].clone(),
                });
            }
        }
        moves
    }

    pub fn apply(&self, m: &Marking, mv: &Move) -> Marking {
        let mut next = m.clone();
        for &e in &mv.consumed {
            next[e] -= 1;
        }
        for &e in &mv.produced {
            next[e] = next[e].saturating_add(1);
        }
        next
    }

    /// Node id recorded in a trace for a visible move.
    pub fn step_id(&self, fire: Fire) -> Option<&'m str> {
        match fire {
            Fire::Silent => None,
            Fire::Task(n) | Fire::Boundary(n) => Some(self.nodes[n].id.as_str()),
        }
    }
}

pub(crate) fn is_empty(m: &Marking) -> bool {
    m.iter().all(|&c| c == 0)
}
