use serde::{Deserialize, Serialize};

use super::{GatewayDirection, ModelError, Node, NodeKind, ProcessModel, Provenance, SequenceFlow, Trigger};
use crate::effect::Effect;

#[derive(Debug, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct ModelDoc {
    id: String,
    nodes: Vec<NodeDoc>,
    edges: Vec<EdgeDoc>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    provenance: Option<Provenance>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "camelCase")]
enum KindTag {
    StartEvent,
    EndEvent,
    Task,
    ExclusiveGateway,
    ParallelGateway,
    BoundaryEvent,
}

#[derive(Debug, Serialize, Deserialize)]
#[serde(rename_all = "camelCase", deny_unknown_fields)]
struct NodeDoc {
    id: String,
    kind: KindTag,
    #[serde(default)]
    label: String,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    effects: Option<Vec<Effect>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    direction: Option<GatewayDirection>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    trigger: Option<Trigger>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    interrupting: Option<bool>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    host: Option<String>,
}

#[derive(Debug, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct EdgeDoc {
    id: String,
    source: String,
    target: String,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    guard: Option<String>,
}

impl NodeDoc {
    fn into_node(self) -> Result<Node, ModelError> {
        let id = self.id;
        let stray = |field: &str| ModelError::structure(&id, format!("field `{field}` is not allowed on this node kind"));
        let needs = |field: &str| ModelError::structure(&id, format!("field `{field}` is required on this node kind"));
        if self.kind != KindTag::Task && self.effects.is_some() {
            return Err(stray("effects"));
        }
        let gateway = matches!(self.kind, KindTag::ExclusiveGateway | KindTag::ParallelGateway);
        if !gateway && self.direction.is_some() {
            return Err(stray("direction"));
        }
        let boundary = self.kind == KindTag::BoundaryEvent;
        if !boundary {
            if self.trigger.is_some() {
                return Err(stray("trigger"));
            }
            if self.interrupting.is_some() {
                return Err(stray("interrupting"));
            }
            if self.host.is_some() {
                return Err(stray("host"));
            }
        }
        let kind = match self.kind {
            KindTag::StartEvent => NodeKind::StartEvent,
            KindTag::EndEvent => NodeKind::EndEvent,
            KindTag::Task => NodeKind::Task {
                effects: self.effects.unwrap_or_default(),
            },
            KindTag::ExclusiveGateway => NodeKind::ExclusiveGateway {
                direction: self.direction.ok_or_else(|| needs("direction"))?,
            },
            KindTag::ParallelGateway => NodeKind::ParallelGateway {
                direction: self.direction.ok_or_else(|| needs("direction"))?,
            },
            KindTag::BoundaryEvent => NodeKind::BoundaryEvent {
                trigger: self.trigger.ok_or_else(|| needs("trigger"))?,
                interrupting: self.interrupting.unwrap_or(true),
                host: self.host.ok_or_else(|| needs("host"))?,
            },
        };
        Ok(Node::new(id, self.label, kind))
    }

    fn from_node(n: &Node) -> Self {
        let mut doc = NodeDoc {
            id: n.id.clone(),
            kind: KindTag::StartEvent,
            label: n.label.clone(),
            effects: None,
            direction: None,
            trigger: None,
            interrupting: None,
            host: None,
        };
        match &n.kind {
            NodeKind::StartEvent => {}
            NodeKind::EndEvent => doc.kind = KindTag::EndEvent,
            NodeKind::Task { effects } => {
                doc.kind = KindTag::Task;
                doc.effects = Some(effects.clone());
            }
            NodeKind::ExclusiveGateway { direction } => {
                doc.kind = KindTag::ExclusiveGateway;
                doc.direction = Some(*direction);
            }
            NodeKind::ParallelGateway { direction } => {
                doc.kind = KindTag::ParallelGateway;
                doc.direction = Some(*direction);
            }
            NodeKind::BoundaryEvent {
                trigger,
                interrupting,
                host,
            } => {
                doc.kind = KindTag::BoundaryEvent;
                doc.trigger = Some(*trigger);
                doc.interrupting = Some(*interrupting);
                doc.host = Some(host.clone());
            }
        }
        doc
    }
}

pub(super) fn parse(text: &str) -> Result<ProcessModel, ModelError> {
    let doc: ModelDoc = serde_json::from_str(text).map_err(|e| ModelError::Syntax(e.to_string()))?;
    let nodes = doc.nodes.into_iter().map(NodeDoc::into_node).collect::<Result<_, _>>()?;
    let edges = doc
        .edges
        .into_iter()
        .map(|e| SequenceFlow {
            id: e.id,
            source: e.source,
            target: e.target,
            guard: e.guard,
        })
        .collect();
    Ok(ProcessModel::new(doc.id, nodes, edges)?.with_provenance(doc.provenance))
}

pub(super) fn render(pm: &ProcessModel) -> String {
    let doc = ModelDoc {
        id: pm.id.clone(),
        nodes: pm.nodes().map(NodeDoc::from_node).collect(),
        edges: pm
            .edges()
            .map(|e| EdgeDoc {
                id: e.id.clone(),
                source: e.source.clone(),
                target: e.target.clone(),
                guard: e.guard.clone(),
            })
            .collect(),
        provenance: pm.provenance.clone(),
    };
    let mut s = serde_json::to_string_pretty(&doc).expect("model documents always serialize");
    s.push('\n');
    s
}
