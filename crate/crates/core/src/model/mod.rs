//! BPMN-subset process models whose tasks carry object-state effects.

mod bpmn;
mod dot;
mod json;
pub(crate) mod semantics;
mod traces;
mod xml;

use std::collections::{BTreeMap, BTreeSet, VecDeque};
use std::fmt;

use serde::{Deserialize, Serialize};

use crate::effect::Effect;
use crate::olc::Initiator;

pub use dot::export_dot;
pub use traces::{enumerate_traces, enumerate_traces_with, trace_cap_from_env, Trace, TraceOptions, DEFAULT_TRACE_CAP, TRACE_CAP_ENV};

#[derive(Debug, thiserror::Error)]
pub enum ModelError {
    #[error("syntax error: {0}")]
    Syntax(String),
    #[error("unsupported element: {0}")]
    UnsupportedElement(String),
    #[error("structure error at {node}: {detail}")]
    Structure { node: String, detail: String },
}

impl ModelError {
    pub(crate) fn structure(node: impl Into<String>, detail: impl Into<String>) -> Self {
        ModelError::Structure {
            node: node.into(),
            detail: detail.into(),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Trigger {
    Message,
    Error,
    Timer,
}

impl Trigger {
    /// Message is external, Error internal, Timer timeout.
    pub fn initiator(self) -> Initiator {
        match self {
            Trigger::Message => Initiator::External,
            Trigger::Error => Initiator::Internal,
            Trigger::Timer => Initiator::Timeout,
        }
    }

    pub fn for_initiator(initiator: Initiator) -> Self {
        match initiator {
            Initiator::External => Trigger::Message,
            Initiator::Internal => Trigger::Error,
            Initiator::Timeout => Trigger::Timer,
        }
    }
}

impl fmt::Display for Trigger {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Trigger::Message => "message",
            Trigger::Error => "error",
            Trigger::Timer => "timer",
        })
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum GatewayDirection {
    Split,
    Join,
}

#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub enum NodeKind {
    StartEvent,
    EndEvent,
    Task { effects: Vec<Effect> },
    ExclusiveGateway { direction: GatewayDirection },
    ParallelGateway { direction: GatewayDirection },
    BoundaryEvent { trigger: Trigger, interrupting: bool, host: String },
}

#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Node {
    pub id: String,
    pub label: String,
    pub kind: NodeKind,
}

impl Node {
    pub fn start(id: impl Into<String>, label: impl Into<String>) -> Self {
        Node::new(id, label, NodeKind::StartEvent)
    }

    pub fn end(id: impl Into<String>, label: impl Into<String>) -> Self {
        Node::new(id, label, NodeKind::EndEvent)
    }

    pub fn task(id: impl Into<String>, label: impl Into<String>, effects: Vec<Effect>) -> Self {
        Node::new(id, label, NodeKind::Task { effects })
    }

    pub fn xor(id: impl Into<String>, label: impl Into<String>, direction: GatewayDirection) -> Self {
        Node::new(id, label, NodeKind::ExclusiveGateway { direction })
    }

    pub fn and(id: impl Into<String>, label: impl Into<String>, direction: GatewayDirection) -> Self {
        Node::new(id, label, NodeKind::ParallelGateway { direction })
    }

    pub fn boundary(id: impl Into<String>, label: impl Into<String>, trigger: Trigger, host: impl Into<String>) -> Self {
        Node::new(
            id,
            label,
            NodeKind::BoundaryEvent {
                trigger,
                interrupting: true,
                host: host.into(),
            },
        )
    }

    pub fn new(id: impl Into<String>, label: impl Into<String>, kind: NodeKind) -> Self {
        Node {
            id: id.into(),
            label: label.into(),
            kind,
        }
    }

    pub fn effects(&self) -> &[Effect] {
        match &self.kind {
            NodeKind::Task { effects } => effects,
            _ => &[],
        }
    }

    pub fn is_task(&self) -> bool {
        matches!(self.kind, NodeKind::Task { .. })
    }

    pub fn is_boundary(&self) -> bool {
        matches!(self.kind, NodeKind::BoundaryEvent { .. })
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct SequenceFlow {
    pub id: String,
    pub source: String,
    pub target: String,
    /// Opaque guard label, required on XOR-split branches.
    pub guard: Option<String>,
}

impl SequenceFlow {
    pub fn new(id: impl Into<String>, source: impl Into<String>, target: impl Into<String>) -> Self {
        SequenceFlow {
            id: id.into(),
            source: source.into(),
            target: target.into(),
            guard: None,
        }
    }

    pub fn guarded(mut self, guard: impl Into<String>) -> Self {
        self.guard = Some(guard.into());
        self
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub enum PatternKind {
    #[serde(rename = "EEP")]
    External,
    #[serde(rename = "IEP")]
    Internal,
    #[serde(rename = "TEP")]
    Timeout,
}

impl PatternKind {
    pub fn for_initiator(initiator: Initiator) -> Self {
        match initiator {
            Initiator::External => PatternKind::External,
            Initiator::Internal => PatternKind::Internal,
            Initiator::Timeout => PatternKind::Timeout,
        }
    }

    pub fn initiator(self) -> Initiator {
        match self {
            PatternKind::External => Initiator::External,
            PatternKind::Internal => Initiator::Internal,
            PatternKind::Timeout => Initiator::Timeout,
        }
    }

    pub fn trigger(self) -> Trigger {
        Trigger::for_initiator(self.initiator())
    }

    pub fn code(self) -> &'static str {
        match self {
            PatternKind::External => "EEP",
            PatternKind::Internal => "IEP",
            PatternKind::Timeout => "TEP",
        }
    }
}

impl fmt::Display for PatternKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.code())
    }
}

/// One exception pattern instance added to a base model.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "camelCase", deny_unknown_fields)]
pub struct AppliedPattern {
    pub bcf: String,
    pub kind: PatternKind,
    pub host: String,
    pub boundary_event: String,
    pub handlers: Vec<String>,
    pub end_event: String,
    pub flows: Vec<String>,
}

/// Where a variant came from.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "camelCase", deny_unknown_fields)]
pub struct Provenance {
    pub base_model: String,
    pub aolc: String,
    pub patterns: Vec<AppliedPattern>,
}

/// A validated process graph. Nodes and edges are keyed by id, so
/// iteration order (and serialized output) is canonical.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ProcessModel {
    pub id: String,
    nodes: BTreeMap<String, Node>,
    edges: BTreeMap<String, SequenceFlow>,
    pub provenance: Option<Provenance>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ModelFormat {
    Json,
    BpmnXml,
}

/// Parses canonical JSON or the BPMN-XML subset; the format is sniffed.
pub fn parse_model(text: &str) -> Result<ProcessModel, ModelError> {
    if text.trim_start().starts_with('<') {
        bpmn::parse(text)
    } else {
        json::parse(text)
    }
}

pub fn serialize_model(pm: &ProcessModel, format: ModelFormat) -> String {
    match format {
        ModelFormat::Json => json::render(pm),
        ModelFormat::BpmnXml => bpmn::render(pm),
    }
}

impl ProcessModel {
    pub fn new(id: impl Into<String>, nodes: Vec<Node>, edges: Vec<SequenceFlow>) -> Result<Self, ModelError> {
        let mut pm = ProcessModel {
            id: id.into(),
            nodes: BTreeMap::new(),
            edges: BTreeMap::new(),
            provenance: None,
        };
        for n in nodes {
            if pm.nodes.contains_key(&n.id) {
                return Err(ModelError::structure(&n.id, "duplicate node id"));
            }
            pm.nodes.insert(n.id.clone(), n);
        }
        for mut e in edges {
            if e.guard.as_deref() == Some("") {
                e.guard = None;
            }
            if pm.edges.contains_key(&e.id) || pm.nodes.contains_key(&e.id) {
                return Err(ModelError::structure(&e.id, "duplicate flow id"));
            }
            pm.edges.insert(e.id.clone(), e);
        }
        pm.validate()?;
        Ok(pm)
    }

    pub fn with_provenance(mut self, provenance: Option<Provenance>) -> Self {
        self.provenance = provenance;
        self
    }

    pub fn nodes(&self) -> impl Iterator<Item = &Node> {
        self.nodes.values()
    }

    pub fn edges(&self) -> impl Iterator<Item = &SequenceFlow> {
        self.edges.values()
    }

    pub fn node(&self, id: &str) -> Option<&Node> {
        self.nodes.get(id)
    }

    pub fn edge(&self, id: &str) -> Option<&SequenceFlow> {
        self.edges.get(id)
    }

    pub fn node_count(&self) -> usize {
        self.nodes.len()
    }

    pub fn edge_count(&self) -> usize {
        self.edges.len()
    }

    pub fn contains_id(&self, id: &str) -> bool {
        self.nodes.contains_key(id) || self.edges.contains_key(id)
    }

    pub fn tasks(&self) -> impl Iterator<Item = &Node> {
        self.nodes.values().filter(|n| n.is_task())
    }

    pub fn boundary_events(&self) -> impl Iterator<Item = &Node> {
        self.nodes.values().filter(|n| n.is_boundary())
    }

    pub fn outgoing<'a>(&'a self, node: &'a str) -> impl Iterator<Item = &'a SequenceFlow> + 'a {
        self.edges.values().filter(move |e| e.source == node)
    }

    pub fn incoming<'a>(&'a self, node: &'a str) -> impl Iterator<Item = &'a SequenceFlow> + 'a {
        self.edges.values().filter(move |e| e.target == node)
    }

    /// Same id, nodes and edges; provenance is ignored.
    pub fn structurally_eq(&self, other: &ProcessModel) -> bool {
        self.id == other.id && self.nodes == other.nodes && self.edges == other.edges
    }

    /// Union of all task effects.
    pub fn induced_transitions(&self) -> BTreeSet<Effect> {
        self.tasks().flat_map(|t| t.effects().iter().cloned()).collect()
    }

    /// Returns a copy with extra nodes and edges, revalidated.
    pub fn extended(&self, nodes: Vec<Node>, edges: Vec<SequenceFlow>) -> Result<Self, ModelError> {
        let all_nodes = self.nodes.values().cloned().chain(nodes).collect();
        let all_edges = self.edges.values().cloned().chain(edges).collect();
        Ok(ProcessModel::new(self.id.clone(), all_nodes, all_edges)?.with_provenance(self.provenance.clone()))
    }

    /// Returns a copy without the given nodes and every edge touching them.
    pub fn without_nodes(&self, ids: &BTreeSet<&str>) -> Result<Self, ModelError> {
        let nodes = self.nodes.values().filter(|n| !ids.contains(n.id.as_str())).cloned().collect();
        let edges = self
            .edges
            .values()
            .filter(|e| !ids.contains(e.source.as_str()) && !ids.contains(e.target.as_str()))
            .cloned()
            .collect();
        ProcessModel::new(self.id.clone(), nodes, edges)
    }

    fn validate(&self) -> Result<(), ModelError> {
        for e in self.edges.values() {
            for end in [&e.source, &e.target] {
                if !self.nodes.contains_key(end) {
                    return Err(ModelError::structure(&e.id, format!("flow references unknown node {end}")));
                }
            }
        }
        let starts: Vec<&Node> = self.nodes.values().filter(|n| n.kind == NodeKind::StartEvent).collect();
        match starts.len() {
            1 => {}
            0 => return Err(ModelError::structure(&self.id, "model has no start event")),
            _ => return Err(ModelError::structure(&starts[1].id, "model has more than one start event")),
        }
        if !self.nodes.values().any(|n| n.kind == NodeKind::EndEvent) {
            return Err(ModelError::structure(&self.id, "model has no end event"));
        }

        for n in self.nodes.values() {
            let ins = self.incoming(&n.id).count();
            let outs: Vec<&SequenceFlow> = self.outgoing(&n.id).collect();
            let fail = |detail: &str| Err(ModelError::structure(&n.id, detail));
            match &n.kind {
                NodeKind::StartEvent => {
                    if ins != 0 {
                        return fail("start event has incoming flows");
                    }
                    if outs.len() != 1 {
                        return fail("start event needs exactly one outgoing flow");
                    }
                }
                NodeKind::EndEvent => {
                    if !outs.is_empty() {
                        return fail("end event has outgoing flows");
                    }
                }
                NodeKind::Task { effects } => {
                    if outs.len() > 1 {
                        return fail("task has more than one outgoing flow");
                    }
                    if let Some(e) = effects.iter().find(|e| !e.is_well_formed()) {
                        return Err(ModelError::structure(&n.id, format!("effect {e} is a self-loop without the selfLoop flag")));
                    }
                }
                NodeKind::ExclusiveGateway { direction } | NodeKind::ParallelGateway { direction } => {
                    let exclusive = matches!(n.kind, NodeKind::ExclusiveGateway { .. });
                    match direction {
                        GatewayDirection::Split => {
                            if ins != 1 {
                                return fail("split gateway needs exactly one incoming flow");
                            }
                            if outs.len() < 2 {
                                return fail("split gateway needs at least two outgoing flows");
                            }
                            if exclusive && outs.iter().any(|e| e.guard.as_deref().is_none_or(str::is_empty)) {
                                return fail("every branch of an exclusive split needs a guard label");
                            }
                        }
                        GatewayDirection::Join => {
                            if ins < 2 {
                                return fail("join gateway needs at least two incoming flows");
                            }
                            if outs.len() != 1 {
                                return fail("join gateway needs exactly one outgoing flow");
                            }
                        }
                    }
                }
                NodeKind::BoundaryEvent {
                    interrupting, host, ..
                } => {
                    if !interrupting {
                        return fail("non-interrupting boundary events are not supported");
                    }
                    if !self.nodes.get(host).is_some_and(Node::is_task) {
                        return fail("boundary event must be attached to a task");
                    }
                    if ins != 0 {
                        return fail("boundary event has incoming flows");
                    }
                    if outs.len() != 1 {
                        return fail("boundary event needs exactly one outgoing flow");
                    }
                }
            }
        }

        // every node lies on a path from the start to some end
        let succ = |id: &str| -> Vec<String> {
            let mut v: Vec<String> = self.outgoing(id).map(|e| e.target.clone()).collect();
            v.extend(
                self.boundary_events()
                    .filter(|b| matches!(&b.kind, NodeKind::BoundaryEvent { host, .. } if host == id))
                    .map(|b| b.id.clone()),
            );
            v
        };
        let mut forward = BTreeSet::new();
        let mut queue = VecDeque::from([starts[0].id.clone()]);
        forward.insert(starts[0].id.clone());
        while let Some(id) = queue.pop_front() {
            for next in succ(&id) {
                if forward.insert(next.clone()) {
                    queue.push_back(next);
                }
            }
        }
        let mut backward: BTreeSet<String> = self
            .nodes
            .values()
            .filter(|n| n.kind == NodeKind::EndEvent)
            .map(|n| n.id.clone())
            .collect();
        let mut queue: VecDeque<String> = backward.iter().cloned().collect();
        while let Some(id) = queue.pop_front() {
            let mut preds: Vec<String> = self.incoming(&id).map(|e| e.source.clone()).collect();
            if let Some(NodeKind::BoundaryEvent { host, .. }) = self.nodes.get(&id).map(|n| &n.kind) {
                preds.push(host.clone());
            }
            for p in preds {
                if backward.insert(p.clone()) {
                    queue.push_back(p);
                }
            }
        }
        for n in self.nodes.values() {
            if !forward.contains(&n.id) {
                return Err(ModelError::structure(&n.id, "node is not reachable from the start event"));
            }
            if !backward.contains(&n.id) {
                return Err(ModelError::structure(&n.id, "node cannot reach an end event"));
            }
        }
        Ok(())
    }
}
