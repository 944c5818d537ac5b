//! BPMN 2.0 XML interchange subset.
//!
//! Supported inside `process`: startEvent, endEvent, task, exclusiveGateway,
//! parallelGateway, sequenceFlow and boundaryEvent with a message, error or
//! timer event definition. Task effects and variant provenance live in
//! `extensionElements` under the [`EXT_NS`] namespace. Diagram interchange
//! (`BPMNDiagram`) is skipped.

use std::fmt::Write;

use quick_xml::escape::escape;

use super::xml::{self, Element};
use super::{
    AppliedPattern, GatewayDirection, ModelError, Node, NodeKind, PatternKind, ProcessModel, Provenance,
    SequenceFlow, Trigger,
};
use crate::effect::Effect;

pub const BPMN_NS: &str = "http://www.omg.org/spec/BPMN/20100524/MODEL";
pub const EXT_NS: &str = "urn:olcvar:bpmn-extensions";

/// Elements that may appear inside flow nodes and are not model data.
const PASSIVE: &[&str] = &["incoming", "outgoing", "documentation"];

pub(super) fn parse(text: &str) -> Result<ProcessModel, ModelError> {
    let root = xml::parse(text).map_err(ModelError::Syntax)?;
    if root.name != "definitions" {
        return Err(ModelError::UnsupportedElement(root.name));
    }
    let mut process = None;
    for child in &root.children {
        match child.name.as_str() {
            "process" if process.is_none() => process = Some(child),
            "process" => return Err(ModelError::UnsupportedElement("second process".into())),
            "BPMNDiagram" | "documentation" | "extensionElements" | "message" | "error" | "signal" => {}
            other => return Err(ModelError::UnsupportedElement(other.into())),
        }
    }
    let process = process.ok_or_else(|| ModelError::Syntax("no process element".into()))?;
    let id = required(process, "id")?;

    let mut nodes = Vec::new();
    let mut edges = Vec::new();
    let mut provenance = None;
    for el in &process.children {
        match el.name.as_str() {
            "sequenceFlow" => edges.push(parse_flow(el)?),
            "extensionElements" => {
                for ext in &el.children {
                    if ext.name == "provenance" {
                        provenance = Some(parse_provenance(ext)?);
                    }
                }
            }
            "documentation" => {}
            _ => nodes.push(parse_node(el)?),
        }
    }
    Ok(ProcessModel::new(id, nodes, edges)?.with_provenance(provenance))
}

fn required(el: &Element, key: &str) -> Result<String, ModelError> {
    el.attr(key)
        .map(str::to_string)
        .ok_or_else(|| ModelError::Syntax(format!("<{}> lacks attribute {key}", el.name)))
}

fn label(el: &Element) -> String {
    el.attr("name").unwrap_or_default().to_string()
}

fn direction(el: &Element, id: &str) -> Result<GatewayDirection, ModelError> {
    match el.attr("gatewayDirection") {
        Some("Diverging") => Ok(GatewayDirection::Split),
        Some("Converging") => Ok(GatewayDirection::Join),
        Some(other) => Err(ModelError::UnsupportedElement(format!("gatewayDirection={other}"))),
        None => Err(ModelError::structure(id, "gateway lacks gatewayDirection")),
    }
}

fn only_passive(el: &Element) -> Result<(), ModelError> {
    match el.children.iter().find(|c| !PASSIVE.contains(&c.name.as_str())) {
        Some(c) => Err(ModelError::UnsupportedElement(c.name.clone())),
        None => Ok(()),
    }
}

fn parse_node(el: &Element) -> Result<Node, ModelError> {
    let id = required(el, "id")?;
    let kind = match el.name.as_str() {
        "startEvent" => {
            only_passive(el)?;
            NodeKind::StartEvent
        }
        "endEvent" => {
            only_passive(el)?;
            NodeKind::EndEvent
        }
        "exclusiveGateway" => {
            only_passive(el)?;
            NodeKind::ExclusiveGateway {
                direction: direction(el, &id)?,
            }
        }
        "parallelGateway" => {
            only_passive(el)?;
            NodeKind::ParallelGateway {
                direction: direction(el, &id)?,
            }
        }
        "task" => {
            let mut effects = Vec::new();
            for c in &el.children {
                match c.name.as_str() {
                    "extensionElements" => {
                        for ext in c.children.iter().filter(|x| x.name == "effect") {
                            effects.push(Effect {
                                object: required(ext, "object")?,
                                from: required(ext, "from")?,
                                to: required(ext, "to")?,
                                self_loop: ext.attr("selfLoop") == Some("true"),
                            });
                        }
                    }
                    name if PASSIVE.contains(&name) => {}
                    other => return Err(ModelError::UnsupportedElement(other.into())),
                }
            }
            NodeKind::Task { effects }
        }
        "boundaryEvent" => {
            let mut trigger = None;
            for c in &el.children {
                let t = match c.name.as_str() {
                    "messageEventDefinition" => Trigger::Message,
                    "errorEventDefinition" => Trigger::Error,
                    "timerEventDefinition" => Trigger::Timer,
                    name if PASSIVE.contains(&name) => continue,
                    other => return Err(ModelError::UnsupportedElement(other.into())),
                };
                if trigger.replace(t).is_some() {
                    return Err(ModelError::structure(&id, "boundary event has more than one event definition"));
                }
            }
            NodeKind::BoundaryEvent {
                trigger: trigger.ok_or_else(|| ModelError::structure(&id, "boundary event lacks an event definition"))?,
                interrupting: el.attr("cancelActivity") != Some("false"),
                host: required(el, "attachedToRef")?,
            }
        }
        other => return Err(ModelError::UnsupportedElement(other.into())),
    };
    Ok(Node::new(id, label(el), kind))
}

fn parse_flow(el: &Element) -> Result<SequenceFlow, ModelError> {
    let condition = el
        .children
        .iter()
        .find(|c| c.name == "conditionExpression")
        .map(|c| c.text.trim().to_string());
    if let Some(c) = el
        .children
        .iter()
        .find(|c| c.name != "conditionExpression" && c.name != "documentation")
    {
        return Err(ModelError::UnsupportedElement(c.name.clone()));
    }
    Ok(SequenceFlow {
        id: required(el, "id")?,
        source: required(el, "sourceRef")?,
        target: required(el, "targetRef")?,
        guard: el.attr("name").map(str::to_string).or(condition),
    })
}

fn parse_provenance(el: &Element) -> Result<Provenance, ModelError> {
    let mut patterns = Vec::new();
    for p in el.children.iter().filter(|c| c.name == "pattern") {
        let kind = match required(p, "kind")?.as_str() {
            "EEP" => PatternKind::External,
            "IEP" => PatternKind::Internal,
            "TEP" => PatternKind::Timeout,
            other => return Err(ModelError::Syntax(format!("unknown pattern kind {other}"))),
        };
        let refs = |name: &str| -> Result<Vec<String>, ModelError> {
            p.children.iter().filter(|c| c.name == name).map(|c| required(c, "ref")).collect()
        };
        patterns.push(AppliedPattern {
            bcf: required(p, "bcf")?,
            kind,
            host: required(p, "host")?,
            boundary_event: required(p, "boundaryEvent")?,
            handlers: refs("handler")?,
            end_event: required(p, "endEvent")?,
            flows: refs("flow")?,
        });
    }
    Ok(Provenance {
        base_model: required(el, "baseModel")?,
        aolc: required(el, "aolc")?,
        patterns,
    })
}

fn name_attr(label: &str) -> String {
    if label.is_empty() {
        String::new()
    } else {
        format!(" name=\"{}\"", escape(label))
    }
}

pub(super) fn render(pm: &ProcessModel) -> String {
    let mut out = String::new();
    let w = &mut out;
    let _ = writeln!(w, r#"<?xml version="1.0" encoding="UTF-8"?>"#);
    let _ = writeln!(
        w,
        r#"<bpmn:definitions xmlns:bpmn="{BPMN_NS}" xmlns:olc="{EXT_NS}" id="definitions_{}" targetNamespace="{EXT_NS}">"#,
        escape(&pm.id)
    );
    let _ = writeln!(w, r#"  <bpmn:process id="{}" isExecutable="false">"#, escape(&pm.id));
    if let Some(p) = &pm.provenance {
        let _ = writeln!(w, "    <bpmn:extensionElements>");
        let _ = writeln!(
            w,
            r#"      <olc:provenance baseModel="{}" aolc="{}">"#,
            escape(&p.base_model),
            escape(&p.aolc)
        );
        for a in &p.patterns {
            let _ = writeln!(
                w,
                r#"        <olc:pattern bcf="{}" kind="{}" host="{}" boundaryEvent="{}" endEvent="{}">"#,
                escape(&a.bcf),
                a.kind,
                escape(&a.host),
                escape(&a.boundary_event),
                escape(&a.end_event)
            );
            for h in &a.handlers {
                let _ = writeln!(w, r#"          <olc:handler ref="{}"/>"#, escape(h));
            }
            for f in &a.flows {
                let _ = writeln!(w, r#"          <olc:flow ref="{}"/>"#, escape(f));
            }
            let _ = writeln!(w, "        </olc:pattern>");
        }
        let _ = writeln!(w, "      </olc:provenance>");
        let _ = writeln!(w, "    </bpmn:extensionElements>");
    }
    for n in pm.nodes() {
        let id = escape(&n.id);
        let name = name_attr(&n.label);
        match &n.kind {
            NodeKind::StartEvent => {
                let _ = writeln!(w, r#"    <bpmn:startEvent id="{id}"{name}/>"#);
            }
            NodeKind::EndEvent => {
                let _ = writeln!(w, r#"    <bpmn:endEvent id="{id}"{name}/>"#);
            }
            NodeKind::Task { effects } if effects.is_empty() => {
                let _ = writeln!(w, r#"    <bpmn:task id="{id}"{name}/>"#);
            }
            NodeKind::Task { effects } => {
                let _ = writeln!(w, r#"    <bpmn:task id="{id}"{name}>"#);
                let _ = writeln!(w, "      <bpmn:extensionElements>");
                for e in effects {
                    let flag = if e.self_loop { r#" selfLoop="true""# } else { "" };
                    let _ = writeln!(
                        w,
                        r#"        <olc:effect object="{}" from="{}" to="{}"{flag}/>"#,
                        escape(&e.object),
                        escape(&e.from),
                        escape(&e.to)
                    );
                }
                let _ = writeln!(w, "      </bpmn:extensionElements>");
                let _ = writeln!(w, "    </bpmn:task>");
            }
            NodeKind::ExclusiveGateway { direction } | NodeKind::ParallelGateway { direction } => {
                let tag = if matches!(n.kind, NodeKind::ExclusiveGateway { .. }) {
                    "exclusiveGateway"
                } else {
                    "parallelGateway"
                };
                let dir = match direction {
                    GatewayDirection::Split => "Diverging",
                    GatewayDirection::Join => "Converging",
                };
                let _ = writeln!(w, r#"    <bpmn:{tag} id="{id}"{name} gatewayDirection="{dir}"/>"#);
            }
            NodeKind::BoundaryEvent {
                trigger,
                interrupting,
                host,
            } => {
                let _ = writeln!(
                    w,
                    r#"    <bpmn:boundaryEvent id="{id}"{name} attachedToRef="{}" cancelActivity="{interrupting}">"#,
                    escape(host)
                );
                let _ = writeln!(w, "      <bpmn:{trigger}EventDefinition/>");
                let _ = writeln!(w, "    </bpmn:boundaryEvent>");
            }
        }
    }
    for e in pm.edges() {
        let guard = e.guard.as_deref().map(name_attr).unwrap_or_default();
        let _ = writeln!(
            w,
            r#"    <bpmn:sequenceFlow id="{}" sourceRef="{}" targetRef="{}"{guard}/>"#,
            escape(&e.id),
            escape(&e.source),
            escape(&e.target)
        );
    }
    let _ = writeln!(w, "  </bpmn:process>");
    let _ = writeln!(w, "</bpmn:definitions>");
    out
}
