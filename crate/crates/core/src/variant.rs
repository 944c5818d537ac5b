//! Exception patterns and variant generation.
//!
//! Every insertion recorded in an adapted OLC becomes one pattern instance:
//! an interrupting boundary event on the host task, one handler task per
//! inserted transition and a fresh end event. The host is the task that
//! performs the base work leaving the anchor state.

use std::collections::BTreeSet;

use crate::adaptation::{AdaptedOlc, Insertion, Position};
use crate::compliance::{self, coverage_findings, coverage_report, CheckOptions, ComplianceReport, ConformanceMode};
use crate::model::{
    enumerate_traces_with, AppliedPattern, ModelError, Node, NodeKind, ProcessModel, Provenance, SequenceFlow,
    TraceOptions, Trigger,
};
use crate::olc::{CompositeOlc, CompositeState, OlcTransition};
use crate::report::{Report, Violation, ViolationKind};
use crate::Explosion;

pub use crate::model::PatternKind;

#[derive(Debug, thiserror::Error)]
pub enum VariantError {
    #[error("fragment {bcf}: no task performs a base transition leaving {anchor}")]
    HostNotFound { bcf: String, anchor: String },
    #[error("fragment {bcf}: several host candidates at {anchor}: {}", .candidates.join(", "))]
    AmbiguousHost {
        bcf: String,
        anchor: String,
        candidates: Vec<String>,
    },
    #[error("fragment {bcf}: no inserted transitions")]
    EmptyInsertion { bcf: String },
    #[error("fragment {bcf}: pattern id {id} is already used in the model")]
    IdConflict { bcf: String, id: String },
    #[error("fragment {bcf}: inserted transition {transition} is missing from the adapted OLC")]
    MissingTransition { bcf: String, transition: String },
    #[error(transparent)]
    Model(#[from] ModelError),
}

/// Template for one exception class.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct ExceptionPattern {
    pub kind: PatternKind,
}

impl ExceptionPattern {
    pub fn new(kind: PatternKind) -> Self {
        ExceptionPattern { kind }
    }

    pub fn trigger(self) -> Trigger {
        self.kind.trigger()
    }

    /// Boundary event, handlers, end event and flows for one fragment.
    fn instantiate(self, bcf: &str, host: &str, label: &str, tagged: &[&OlcTransition], end_label: &str) -> Instance {
        let boundary = format!("{bcf}_boundary");
        let end = format!("{bcf}_end");
        let handlers: Vec<String> = (1..=tagged.len()).map(|k| format!("{bcf}_handler_{k}")).collect();
        let mut nodes = vec![Node::new(
            &boundary,
            label,
            NodeKind::BoundaryEvent {
                trigger: self.trigger(),
                interrupting: true,
                host: host.to_string(),
            },
        )];
        for (id, t) in handlers.iter().zip(tagged) {
            nodes.push(Node::task(id, &t.name, vec![t.effect()]));
        }
        nodes.push(Node::end(&end, end_label));

        let chain: Vec<&String> = std::iter::once(&boundary).chain(&handlers).chain([&end]).collect();
        let flows: Vec<SequenceFlow> = chain
            .windows(2)
            .enumerate()
            .map(|(k, w)| SequenceFlow::new(format!("{bcf}_flow_{}", k + 1), w[0], w[1]))
            .collect();
        let applied = AppliedPattern {
            bcf: bcf.to_string(),
            kind: self.kind,
            host: host.to_string(),
            boundary_event: boundary,
            handlers,
            end_event: end,
            flows: flows.iter().map(|f| f.id.clone()).collect(),
        };
        Instance { nodes, flows, applied }
    }
}

struct Instance {
    nodes: Vec<Node>,
    flows: Vec<SequenceFlow>,
    applied: AppliedPattern,
}

impl Instance {
    fn ids(&self) -> impl Iterator<Item = &str> {
        self.nodes.iter().map(|n| n.id.as_str()).chain(self.flows.iter().map(|f| f.id.as_str()))
    }
}

/// Tasks with an effect realizing part of a base transition leaving `anchor`.
pub fn host_candidates<'m>(pm: &'m ProcessModel, olc: &CompositeOlc, anchor: &CompositeState) -> Vec<&'m str> {
    let leaving: Vec<&OlcTransition> = olc
        .outgoing(anchor)
        .filter(|t| t.initiator.is_none())
        .flat_map(|t| olc.members_of(t))
        .collect();
    pm.tasks()
        .filter(|n| n.effects().iter().any(|e| leaving.iter().any(|t| t.matches(e))))
        .map(|n| n.id.as_str())
        .collect()
}

/// Attaches one pattern instance for fragment `bcf` to the host at `anchor`.
#[allow(clippy::too_many_arguments)]
pub fn insert_pattern(
    pm: &ProcessModel,
    olc: &CompositeOlc,
    bcf: &str,
    label: &str,
    anchor: &Position,
    tagged: &[&OlcTransition],
    pattern: ExceptionPattern,
) -> Result<(ProcessModel, AppliedPattern), VariantError> {
    if tagged.is_empty() {
        return Err(VariantError::EmptyInsertion { bcf: bcf.to_string() });
    }
    let host = match host_candidates(pm, olc, &anchor.anchor).as_slice() {
        [one] => one.to_string(),
        [] => {
            return Err(VariantError::HostNotFound {
                bcf: bcf.to_string(),
                anchor: anchor.anchor.id(),
            })
        }
        many => {
            return Err(VariantError::AmbiguousHost {
                bcf: bcf.to_string(),
                anchor: anchor.anchor.id(),
                candidates: many.iter().map(|s| s.to_string()).collect(),
            })
        }
    };
    let last = tagged[tagged.len() - 1];
    let end_label = olc
        .component(&last.object)
        .and_then(|c| c.state(&last.target))
        .map_or_else(|| last.target.clone(), |s| format!("{} {}", last.object, s.label));
    let inst = pattern.instantiate(bcf, &host, label, tagged, &end_label);
    if let Some(id) = inst.ids().find(|id| pm.contains_id(id)) {
        return Err(VariantError::IdConflict {
            bcf: bcf.to_string(),
            id: id.to_string(),
        });
    }
    let variant = pm.extended(inst.nodes, inst.flows)?;
    Ok((variant, inst.applied))
}

fn tagged_of<'a>(aolc: &'a AdaptedOlc, ins: &Insertion) -> Result<Vec<&'a OlcTransition>, VariantError> {
    let mut out = Vec::new();
    for id in &ins.transitions {
        let missing = || VariantError::MissingTransition {
            bcf: ins.bcf.clone(),
            transition: id.clone(),
        };
        let t = aolc.olc.transition(id).ok_or_else(missing)?;
        for m in &t.members {
            out.push(aolc.olc.member(m).ok_or_else(missing)?);
        }
    }
    Ok(out)
}

/// Applies one pattern per insertion, in insertion order.
pub fn generate_variant(bm: &ProcessModel, aolc: &AdaptedOlc) -> Result<ProcessModel, VariantError> {
    let mut vpm = bm.clone();
    let mut patterns = Vec::new();
    for ins in &aolc.insertions {
        let tagged = tagged_of(aolc, ins)?;
        let anchor = Position {
            anchor: CompositeState::parse(&ins.anchor),
        };
        let label = ins.guard.as_deref().unwrap_or(&ins.bcf);
        let pattern = ExceptionPattern::new(PatternKind::for_initiator(ins.initiator));
        let (next, applied) = insert_pattern(&vpm, &aolc.olc, &ins.bcf, label, &anchor, &tagged, pattern)?;
        vpm = next;
        patterns.push(applied);
    }
    Ok(vpm.with_provenance(Some(Provenance {
        base_model: bm.id.clone(),
        aolc: aolc.olc.object_id(),
        patterns,
    })))
}

/// Removes every pattern instance recorded in the provenance.
pub fn strip_patterns(vpm: &ProcessModel) -> Result<ProcessModel, ModelError> {
    let Some(p) = &vpm.provenance else {
        return Ok(vpm.clone());
    };
    let ids: BTreeSet<&str> = p
        .patterns
        .iter()
        .flat_map(|a| {
            std::iter::once(a.boundary_event.as_str())
                .chain(a.handlers.iter().map(String::as_str))
                .chain([a.end_event.as_str()])
        })
        .collect();
    vpm.without_nodes(&ids)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct VerifyOptions {
    /// Require coverage of the whole adapted OLC, not just the insertions.
    pub strict: bool,
    pub cap: usize,
}

impl Default for VerifyOptions {
    fn default() -> Self {
        VerifyOptions {
            strict: false,
            cap: crate::model::DEFAULT_TRACE_CAP,
        }
    }
}

/// Conformance to the adapted OLC, coverage of what was inserted, and
/// preservation of every base trace.
pub fn verify_variant(vpm: &ProcessModel, aolc: &AdaptedOlc) -> Result<ComplianceReport, Explosion> {
    verify_variant_with(vpm, aolc, &VerifyOptions::default())
}

pub fn verify_variant_with(vpm: &ProcessModel, aolc: &AdaptedOlc, opts: &VerifyOptions) -> Result<ComplianceReport, Explosion> {
    let check = CheckOptions {
        mode: ConformanceMode::Trace,
        cap: opts.cap,
    };
    let conformance = compliance::check_conformance_with(vpm, &aolc.olc, &check)?;
    let mut coverage = coverage_findings(vpm, &aolc.olc, opts.cap)?;
    if !opts.strict {
        let tagged: BTreeSet<(&str, &str)> = aolc.tagged_members().map(|t| (t.object.as_str(), t.id.as_str())).collect();
        let states: BTreeSet<(&str, &str)> = aolc
            .inserted_component_states()
            .into_iter()
            .map(|s| (s.object.as_str(), s.state.as_str()))
            .collect();
        coverage
            .uncovered_transitions
            .retain(|(o, t)| tagged.contains(&(o.as_str(), t.as_str())));
        coverage
            .uncovered_states
            .retain(|(o, s)| states.contains(&(o.as_str(), s.as_str())));
    }
    let coverage = coverage_report(&aolc.olc, &coverage);
    let preservation = base_trace_preservation(vpm, opts.cap)?;
    Ok(ComplianceReport::new(conformance, coverage).with_preservation(preservation))
}

/// Every trace of the stripped model must be a trace of the variant in
/// which no pattern boundary event fires, and vice versa.
fn base_trace_preservation(vpm: &ProcessModel, cap: usize) -> Result<Report, Explosion> {
    let opts = TraceOptions { loop_bound: 0, cap };
    let base = match strip_patterns(vpm) {
        Ok(b) => b,
        Err(e) => {
            return Ok(Report::from_violations(vec![Violation::new(
                ViolationKind::BaseTraceLost,
                &vpm.id,
                format!("removing the patterns does not leave a valid model: {e}"),
            )]))
        }
    };
    let boundaries: BTreeSet<&str> = vpm
        .provenance
        .iter()
        .flat_map(|p| &p.patterns)
        .map(|a| a.boundary_event.as_str())
        .collect();
    let normal: BTreeSet<Vec<String>> = enumerate_traces_with(vpm, &opts)?
        .into_iter()
        .filter(|t| !t.iter().any(|s| boundaries.contains(s.as_str())))
        .collect();
    let before = enumerate_traces_with(&base, &opts)?;
    let violations = before
        .symmetric_difference(&normal)
        .map(|t| {
            let detail = if before.contains(t) {
                "base trace is not a trace of the variant"
            } else {
                "variant admits a new trace without an exception"
            };
            Violation::new(ViolationKind::BaseTraceLost, format!("[{}]", t.join(", ")), detail)
        })
        .collect();
    Ok(Report::from_violations(violations))
}
