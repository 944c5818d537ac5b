//! Insertion of break fragments into an OLC.
//!
//! Each selected fragment is located in the OLC through the effects of the
//! messages around it (PT / NT). Its own effects become a chain of
//! initiator-tagged transitions from that anchor to an exceptional final
//! state. Base elements are never modified, so stripping the tagged part
//! gives back the input.

use std::collections::{BTreeSet, VecDeque};

use serde::{Deserialize, Serialize};

use crate::effect::Effect;
use crate::olc::json::OlcDoc;
use crate::olc::{
    CompositeOlc, CompositeState, CompositeTransition, Initiator, ObjectLifeCycle, OlcError, OlcTransition, State,
};
use crate::report::{ValidationReport, ViolationKind};
use crate::sequence::{context_of, extract_bcfs, BreakCombinedFragment, SdError, SequenceDiagram};

#[derive(Debug, thiserror::Error)]
pub enum AdaptError {
    #[error("no state lies between {} and {}", show(.pt), show(.nt))]
    NotAdjacent { pt: Option<Effect>, nt: Option<Effect> },
    #[error("position is ambiguous, candidates: {}", .0.join(", "))]
    Ambiguous(Vec<String>),
    #[error("a position needs a previous or a next transition")]
    MissingContext,
    #[error("fragment {0} has no effect-bearing message before or after it")]
    NoContext(String),
    #[error("unknown break fragment {0}")]
    UnknownBcf(String),
    #[error("nothing to insert: no fragment message carries an effect")]
    NoTransitions,
    #[error("transition {0} is already in the life cycle")]
    DuplicateTransition(String),
    #[error("{0} is not a state of the life cycle")]
    InvalidPosition(String),
    #[error("transition {transition}: object {object} has no life cycle")]
    UnknownObject { transition: String, object: String },
    #[error("transition {transition} leaves {given}, but {object} is in {current} at that point")]
    ChainMismatch {
        transition: String,
        object: String,
        given: String,
        current: String,
    },
    #[error("transition {transition} would re-enter base state {state}")]
    ReentryNotAllowed { transition: String, state: String },
    #[error("transition {0} does not change state")]
    SelfLoop(String),
    #[error("fragment {bcf}: {source}")]
    InBcf {
        bcf: String,
        #[source]
        source: Box<AdaptError>,
    },
    #[error(transparent)]
    Olc(#[from] OlcError),
}

fn show(e: &Option<Effect>) -> String {
    e.as_ref().map_or_else(|| "-".to_string(), Effect::to_string)
}

impl AdaptError {
    fn in_bcf(self, bcf: &str) -> Self {
        AdaptError::InBcf {
            bcf: bcf.to_string(),
            source: Box::new(self),
        }
    }

    /// The error without the fragment wrapper.
    pub fn root(&self) -> &AdaptError {
        match self {
            AdaptError::InBcf { source, .. } => source.root(),
            other => other,
        }
    }
}

/// Anchor state of a fragment: target of PT and source of NT.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Position {
    pub anchor: CompositeState,
}

/// One transition to insert; open states are filled in by [`insert_bcf`].
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct BcfTransition {
    pub id: String,
    pub name: String,
    pub object: String,
    pub from: Option<String>,
    pub to: Option<String>,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Selection {
    All,
    One(String),
}

#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ComponentState {
    pub object: String,
    pub state: String,
}

/// Record of one inserted fragment.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "camelCase", deny_unknown_fields)]
pub struct Insertion {
    pub bcf: String,
    pub initiator: Initiator,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub guard: Option<String>,
    /// Composite state id of the anchor.
    pub anchor: String,
    /// Inserted transition ids, in chain order.
    pub transitions: Vec<String>,
    /// Composite state ids created by this insertion.
    pub states: Vec<String>,
    /// Component states created by this insertion.
    pub component_states: Vec<ComponentState>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct ProvenanceDoc {
    insertions: Vec<Insertion>,
}

/// An OLC plus the fragments inserted into it.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct AdaptedOlc {
    pub olc: CompositeOlc,
    pub insertions: Vec<Insertion>,
}

impl From<CompositeOlc> for AdaptedOlc {
    fn from(olc: CompositeOlc) -> Self {
        AdaptedOlc {
            olc,
            insertions: Vec::new(),
        }
    }
}

impl From<ObjectLifeCycle> for AdaptedOlc {
    fn from(olc: ObjectLifeCycle) -> Self {
        CompositeOlc::from(olc).into()
    }
}

impl AdaptedOlc {
    /// Ids of initiator-tagged composite transitions.
    pub fn inserted_transitions(&self) -> BTreeSet<&str> {
        self.olc
            .transitions
            .iter()
            .filter(|t| t.initiator.is_some())
            .map(|t| t.id.as_str())
            .collect()
    }

    /// Initiator-tagged component transitions.
    pub fn tagged_members(&self) -> impl Iterator<Item = &OlcTransition> {
        self.olc
            .components
            .iter()
            .flat_map(|c| &c.transitions)
            .filter(|t| t.initiator.is_some())
    }

    pub fn inserted_component_states(&self) -> BTreeSet<&ComponentState> {
        self.insertions.iter().flat_map(|i| &i.component_states).collect()
    }

    /// Removes tagged transitions and every state reachable only through them.
    pub fn strip(&self) -> CompositeOlc {
        let olc = &self.olc;
        let all = olc.reachable_states();
        let base = olc.reachable_via(|t| t.initiator.is_none());
        let drop_state = |s: &CompositeState| all.contains(s) && !base.contains(s);
        CompositeOlc {
            components: olc.components.iter().map(strip_component).collect(),
            states: olc.states.iter().filter(|s| !drop_state(s)).cloned().collect(),
            initial: olc.initial.clone(),
            finals: olc.finals.iter().filter(|s| !drop_state(s)).cloned().collect(),
            transitions: olc.transitions.iter().filter(|t| t.initiator.is_none()).cloned().collect(),
        }
    }

    pub fn validate(&self) -> ValidationReport {
        let mut report = self.olc.validate();
        let mut recorded = BTreeSet::new();
        for ins in &self.insertions {
            if !self.olc.has_state(&CompositeState::parse(&ins.anchor)) {
                report.push(ViolationKind::DanglingReference, &ins.bcf, format!("anchor {} is not a state", ins.anchor));
            }
            for id in &ins.transitions {
                recorded.insert(id.as_str());
                match self.olc.transition(id) {
                    Some(t) if t.initiator == Some(ins.initiator) => {}
                    Some(_) => report.push(
                        ViolationKind::InvalidComposite,
                        id,
                        format!("inserted by {} but not tagged {}", ins.bcf, ins.initiator),
                    ),
                    None => report.push(
                        ViolationKind::DanglingReference,
                        id,
                        format!("inserted by {} but missing from the life cycle", ins.bcf),
                    ),
                }
            }
        }
        for id in self.inserted_transitions() {
            if !recorded.contains(id) {
                report.push(ViolationKind::InvalidComposite, id, "tagged transition has no provenance");
            }
        }
        let base = self.olc.reachable_via(|t| t.initiator.is_none());
        for t in self.olc.transitions.iter().filter(|t| t.initiator.is_some()) {
            if !base.contains(&t.source) && !self.olc.transitions.iter().any(|u| u.initiator.is_some() && u.target == t.source) {
                report.push(ViolationKind::Unreachable, &t.id, "source is not reachable in the base life cycle");
            }
        }
        report
    }

    pub fn from_json(text: &str) -> Result<Self, OlcError> {
        let mut doc = OlcDoc::parse(text)?;
        let provenance = doc.provenance.take();
        let olc = doc.into_composite()?;
        let insertions = match provenance {
            Some(v) => {
                serde_json::from_value::<ProvenanceDoc>(v)
                    .map_err(|e| OlcError::Syntax(format!("provenance: {e}")))?
                    .insertions
            }
            None => Vec::new(),
        };
        Ok(AdaptedOlc { olc, insertions })
    }

    /// OLC JSON plus a `provenance` block when something was inserted.
    pub fn to_json(&self) -> String {
        let mut doc = OlcDoc::from(&self.olc);
        if !self.insertions.is_empty() {
            let p = ProvenanceDoc {
                insertions: self.insertions.clone(),
            };
            doc.provenance = Some(serde_json::to_value(p).expect("provenance always serializes"));
        }
        doc.render()
    }
}

fn strip_component(c: &ObjectLifeCycle) -> ObjectLifeCycle {
    let reach = |allow: &dyn Fn(&OlcTransition) -> bool| {
        let mut seen = BTreeSet::from([c.initial.as_str()]);
        let mut queue = VecDeque::from([c.initial.as_str()]);
        while let Some(s) = queue.pop_front() {
            for t in c.outgoing(s).filter(|t| allow(t)) {
                if seen.insert(t.target.as_str()) {
                    queue.push_back(t.target.as_str());
                }
            }
        }
        seen
    };
    let all = reach(&|_| true);
    let base = reach(&|t| t.initiator.is_none());
    let drop_state = |s: &str| all.contains(s) && !base.contains(s);
    ObjectLifeCycle {
        object: c.object.clone(),
        states: c.states.iter().filter(|s| !drop_state(&s.id)).cloned().collect(),
        initial: c.initial.clone(),
        finals: c.finals.iter().filter(|s| !drop_state(s)).cloned().collect(),
        transitions: c.transitions.iter().filter(|t| t.initiator.is_none()).cloned().collect(),
    }
}

/// Finds the state entered by `pt` and left by `nt`, using base transitions only.
pub fn get_position(olc: &CompositeOlc, pt: Option<&Effect>, nt: Option<&Effect>) -> Result<Position, AdaptError> {
    if pt.is_none() && nt.is_none() {
        return Err(AdaptError::MissingContext);
    }
    let base_match = |t: &CompositeTransition, e: &Effect| t.initiator.is_none() && olc.transition_matches(t, e);
    let candidates: Vec<&CompositeState> = olc
        .states
        .iter()
        .filter(|s| pt.is_none_or(|e| olc.incoming(s).any(|t| base_match(t, e))))
        .filter(|s| nt.is_none_or(|e| olc.outgoing(s).any(|t| base_match(t, e))))
        .collect();
    match candidates.as_slice() {
        [one] => Ok(Position { anchor: (*one).clone() }),
        [] => Err(AdaptError::NotAdjacent {
            pt: pt.cloned(),
            nt: nt.cloned(),
        }),
        many => Err(AdaptError::Ambiguous(many.iter().map(|s| s.id()).collect())),
    }
}

/// Effect-bearing messages of a fragment as transitions to insert.
pub fn bcf_transitions(sd: &SequenceDiagram, bcf: &BreakCombinedFragment) -> Vec<BcfTransition> {
    sd.messages_of(bcf)
        .filter_map(|m| {
            let e = m.effect.as_ref()?;
            Some(BcfTransition {
                id: format!("{}.{}", bcf.id, m.id),
                name: m.name.clone(),
                object: e.object.clone(),
                from: e.from.clone(),
                to: e.to.clone(),
            })
        })
        .collect()
}

/// Label of an exceptional state: its id without the object prefix.
fn state_label(object: &str, id: &str) -> String {
    id.strip_prefix(object)
        .and_then(|s| s.strip_prefix('_'))
        .filter(|s| !s.is_empty())
        .unwrap_or(id)
        .to_string()
}

/// Appends a chain of tagged transitions starting at `p`.
///
/// Each transition moves its object from the chain's current state for
/// that object. An open target defaults to `<object>_cancelled` on the
/// object's last step and to a fresh `<object>_<bcf>_<n>` before that.
pub fn insert_bcf(
    aolc: &AdaptedOlc,
    bcf: &str,
    p: &Position,
    trans: &[BcfTransition],
    initiator: Initiator,
) -> Result<AdaptedOlc, AdaptError> {
    if trans.is_empty() {
        return Err(AdaptError::NoTransitions);
    }
    if !aolc.olc.has_state(&p.anchor) {
        return Err(AdaptError::InvalidPosition(p.anchor.id()));
    }
    let mut olc = aolc.olc.clone();
    let exceptional = aolc.inserted_component_states();
    let mut ins = Insertion {
        bcf: bcf.to_string(),
        initiator,
        guard: None,
        anchor: p.anchor.id(),
        transitions: Vec::new(),
        states: Vec::new(),
        component_states: Vec::new(),
    };
    let mut cur = p.anchor.clone();
    let mut fresh = vec![0usize; olc.components.len()];

    for (i, t) in trans.iter().enumerate() {
        if olc.transition(&t.id).is_some() || olc.member(&t.id).is_some() {
            return Err(AdaptError::DuplicateTransition(t.id.clone()));
        }
        let k = olc.component_index(&t.object).ok_or_else(|| AdaptError::UnknownObject {
            transition: t.id.clone(),
            object: t.object.clone(),
        })?;
        let current = cur.coordinate(k).to_string();
        let from = t.from.clone().unwrap_or_else(|| current.clone());
        if from != current {
            return Err(AdaptError::ChainMismatch {
                transition: t.id.clone(),
                object: t.object.clone(),
                given: from,
                current,
            });
        }
        let last = !trans[i + 1..].iter().any(|u| u.object == t.object);
        let to = t.to.clone().unwrap_or_else(|| {
            if last {
                format!("{}_cancelled", t.object)
            } else {
                fresh[k] += 1;
                format!("{}_{}_{}", t.object, bcf, fresh[k])
            }
        });
        if to == from {
            return Err(AdaptError::SelfLoop(t.id.clone()));
        }

        let comp = &mut olc.components[k];
        let cs = ComponentState {
            object: t.object.clone(),
            state: to.clone(),
        };
        if comp.has_state(&to) {
            if !exceptional.contains(&cs) && !ins.component_states.contains(&cs) {
                return Err(AdaptError::ReentryNotAllowed {
                    transition: t.id.clone(),
                    state: to,
                });
            }
        } else {
            comp.states.push(State::new(&to, state_label(&t.object, &to)));
            ins.component_states.push(cs);
        }
        if last {
            comp.finals.insert(to.clone());
        }
        comp.transitions.push(OlcTransition {
            id: t.id.clone(),
            name: t.name.clone(),
            object: t.object.clone(),
            source: from,
            target: to.clone(),
            initiator: Some(initiator),
        });

        let mut next = cur.clone();
        next.0[k] = to;
        if !olc.has_state(&next) {
            olc.states.push(next.clone());
            ins.states.push(next.id());
        }
        let duplicate = olc.transitions.iter().any(|u| {
            u.initiator == Some(initiator) && u.source == cur && u.target == next && u.name == t.name
        });
        if duplicate {
            return Err(AdaptError::DuplicateTransition(t.id.clone()));
        }
        olc.transitions.push(CompositeTransition {
            id: t.id.clone(),
            name: t.name.clone(),
            source: cur,
            target: next.clone(),
            members: vec![t.id.clone()],
            initiator: Some(initiator),
        });
        ins.transitions.push(t.id.clone());
        cur = next;
    }
    olc.finals.insert(cur);

    let mut insertions = aolc.insertions.clone();
    insertions.push(ins);
    Ok(AdaptedOlc { olc, insertions })
}

/// Inserts the selected fragments of `sd`, in diagram order.
pub fn adapt_olc(aolc: &AdaptedOlc, sd: &SequenceDiagram, selection: &Selection) -> Result<AdaptedOlc, AdaptError> {
    if let Selection::One(id) = selection {
        if sd.fragment(id).is_none() {
            return Err(AdaptError::UnknownBcf(id.clone()));
        }
    }
    let mut out = aolc.clone();
    for bcf in extract_bcfs(sd) {
        if matches!(selection, Selection::One(id) if *id != bcf.id) {
            continue;
        }
        out = adapt_one(&out, sd, &bcf).map_err(|e| e.in_bcf(&bcf.id))?;
    }
    Ok(out)
}

fn adapt_one(aolc: &AdaptedOlc, sd: &SequenceDiagram, bcf: &BreakCombinedFragment) -> Result<AdaptedOlc, AdaptError> {
    let ctx = context_of(sd, bcf).map_err(|e| match e {
        SdError::NoContext(id) => AdaptError::NoContext(id),
        other => AdaptError::Olc(OlcError::Structure(other.to_string())),
    })?;
    let p = get_position(&aolc.olc, ctx.pt.as_ref(), ctx.nt.as_ref())?;
    let mut out = insert_bcf(aolc, &bcf.id, &p, &bcf_transitions(sd, bcf), bcf.initiator)?;
    if let Some(ins) = out.insertions.last_mut() {
        ins.guard = bcf.guard.clone();
    }
    Ok(out)
}
