//! Object life cycles (OLCs) and their synchronized composition.
//!
//! A single-object life cycle is an [`ObjectLifeCycle`]. Everything
//! downstream (paths, compliance, adaptation) works on [`CompositeOlc`];
//! a single OLC is lifted into a one-component composite with `From`.

mod compose;
pub(crate) mod json;
mod paths;

use std::collections::{BTreeMap, BTreeSet, VecDeque};
use std::fmt;

use serde::{Deserialize, Serialize};

use crate::effect::Effect;
use crate::report::{ValidationReport, ViolationKind};

pub use compose::{compose, Composition, SyncSpec};
pub use paths::{olc_paths, OlcPath};

/// Separator for composite state ids and composite object ids.
pub const TUPLE_SEPARATOR: char = '+';
/// Separator for joint transition ids and names.
pub const JOINT_SEPARATOR: char = '|';

#[derive(Debug, thiserror::Error)]
pub enum OlcError {
    #[error("syntax error: {0}")]
    Syntax(String),
    #[error("invalid life cycle: {0}")]
    Structure(String),
    #[error("invalid sync spec: {0}")]
    InvalidSync(String),
}

/// Exception class of a break fragment, and the tag of exceptional transitions.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub enum Initiator {
    Internal,
    External,
    Timeout,
}

impl Initiator {
    pub const ALL: [Initiator; 3] = [Initiator::External, Initiator::Internal, Initiator::Timeout];
}

impl fmt::Display for Initiator {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Initiator::Internal => "Internal",
            Initiator::External => "External",
            Initiator::Timeout => "Timeout",
        })
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct State {
    pub id: String,
    pub label: String,
}

impl State {
    pub fn new(id: impl Into<String>, label: impl Into<String>) -> Self {
        State {
            id: id.into(),
            label: label.into(),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct OlcTransition {
    pub id: String,
    pub name: String,
    pub object: String,
    pub source: String,
    pub target: String,
    /// Absent on normal-flow transitions; only adaptation sets it.
    pub initiator: Option<Initiator>,
}

impl OlcTransition {
    pub fn matches(&self, effect: &Effect) -> bool {
        self.object == effect.object && self.source == effect.from && self.target == effect.to
    }

    pub fn effect(&self) -> Effect {
        Effect::new(&self.object, &self.source, &self.target)
    }
}

/// Labeled state machine of one business object.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ObjectLifeCycle {
    pub object: String,
    pub states: Vec<State>,
    pub initial: String,
    pub finals: BTreeSet<String>,
    pub transitions: Vec<OlcTransition>,
}

impl ObjectLifeCycle {
    pub fn state(&self, id: &str) -> Option<&State> {
        self.states.iter().find(|s| s.id == id)
    }

    pub fn has_state(&self, id: &str) -> bool {
        self.state(id).is_some()
    }

    pub fn transition(&self, id: &str) -> Option<&OlcTransition> {
        self.transitions.iter().find(|t| t.id == id)
    }

    pub fn outgoing<'a>(&'a self, state: &'a str) -> impl Iterator<Item = &'a OlcTransition> + 'a {
        self.transitions.iter().filter(move |t| t.source == state)
    }

    pub fn defines(&self, effect: &Effect) -> bool {
        self.transitions.iter().any(|t| t.matches(effect))
    }

    pub fn reachable_states(&self) -> BTreeSet<&str> {
        let mut seen = BTreeSet::new();
        if !self.has_state(&self.initial) {
            return seen;
        }
        let mut queue = VecDeque::from([self.initial.as_str()]);
        seen.insert(self.initial.as_str());
        while let Some(s) = queue.pop_front() {
            for t in self.outgoing(s) {
                if self.has_state(&t.target) && seen.insert(t.target.as_str()) {
                    queue.push_back(t.target.as_str());
                }
            }
        }
        seen
    }

    pub fn validate(&self) -> ValidationReport {
        let mut report = ValidationReport::default();
        let obj = &self.object;
        let mut ids = BTreeSet::new();
        for s in &self.states {
            if !ids.insert(s.id.as_str()) {
                report.push(ViolationKind::DuplicateId, format!("{obj}:{}", s.id), "duplicate state id");
            }
            if s.id.contains(TUPLE_SEPARATOR) {
                report.push(
                    ViolationKind::InvalidComposite,
                    format!("{obj}:{}", s.id),
                    format!("state ids must not contain '{TUPLE_SEPARATOR}'"),
                );
            }
        }
        if !self.has_state(&self.initial) {
            report.push(
                ViolationKind::DanglingReference,
                format!("{obj}:{}", self.initial),
                "initial state is not a declared state",
            );
        }
        for f in &self.finals {
            if !self.has_state(f) {
                report.push(ViolationKind::DanglingReference, format!("{obj}:{f}"), "final state is not a declared state");
            }
        }
        let mut tids = BTreeSet::new();
        for t in &self.transitions {
            if !tids.insert(t.id.as_str()) {
                report.push(ViolationKind::DuplicateId, format!("{obj}:{}", t.id), "duplicate transition id");
            }
            if t.id.contains(JOINT_SEPARATOR) {
                report.push(
                    ViolationKind::InvalidComposite,
                    format!("{obj}:{}", t.id),
                    format!("transition ids must not contain '{JOINT_SEPARATOR}'"),
                );
            }
            if t.object != self.object {
                report.push(
                    ViolationKind::InvalidComposite,
                    format!("{obj}:{}", t.id),
                    format!("transition belongs to object {}", t.object),
                );
            }
            for (end, s) in [("source", &t.source), ("target", &t.target)] {
                if !self.has_state(s) {
                    report.push(
                        ViolationKind::DanglingReference,
                        format!("{obj}:{}", t.id),
                        format!("{end} state {s} is not declared"),
                    );
                }
            }
        }
        let reachable = self.reachable_states();
        if !reachable.is_empty() {
            for s in &self.states {
                if !reachable.contains(s.id.as_str()) {
                    report.push(ViolationKind::Unreachable, format!("{obj}:{}", s.id), "not reachable from the initial state");
                }
            }
        }
        report
    }
}

/// A tuple of component states, one per component in composite order.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct CompositeState(pub Vec<String>);

impl CompositeState {
    pub fn id(&self) -> String {
        self.0.join(&TUPLE_SEPARATOR.to_string())
    }

    pub fn parse(id: &str) -> Self {
        CompositeState(id.split(TUPLE_SEPARATOR).map(str::to_string).collect())
    }

    pub fn coordinate(&self, component: usize) -> &str {
        &self.0[component]
    }
}

impl fmt::Display for CompositeState {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.id())
    }
}

/// A set of component transitions firing jointly (or a singleton).
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct CompositeTransition {
    pub id: String,
    pub name: String,
    pub source: CompositeState,
    pub target: CompositeState,
    /// Ids of the component transitions, in declaration order.
    pub members: Vec<String>,
    pub initiator: Option<Initiator>,
}

/// Synchronized product of one or more OLCs.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CompositeOlc {
    pub components: Vec<ObjectLifeCycle>,
    pub states: Vec<CompositeState>,
    pub initial: CompositeState,
    pub finals: BTreeSet<CompositeState>,
    pub transitions: Vec<CompositeTransition>,
}

impl From<ObjectLifeCycle> for CompositeOlc {
    fn from(olc: ObjectLifeCycle) -> Self {
        let lift = |s: &str| CompositeState(vec![s.to_string()]);
        CompositeOlc {
            states: olc.states.iter().map(|s| lift(&s.id)).collect(),
            initial: lift(&olc.initial),
            finals: olc.finals.iter().map(|s| lift(s)).collect(),
            transitions: olc
                .transitions
                .iter()
                .map(|t| CompositeTransition {
                    id: t.id.clone(),
                    name: t.name.clone(),
                    source: lift(&t.source),
                    target: lift(&t.target),
                    members: vec![t.id.clone()],
                    initiator: t.initiator,
                })
                .collect(),
            components: vec![olc],
        }
    }
}

impl CompositeOlc {
    /// Component object ids joined with `+`.
    pub fn object_id(&self) -> String {
        let ids: Vec<&str> = self.components.iter().map(|c| c.object.as_str()).collect();
        ids.join(&TUPLE_SEPARATOR.to_string())
    }

    pub fn is_single(&self) -> bool {
        self.components.len() == 1
    }

    pub fn component_index(&self, object: &str) -> Option<usize> {
        self.components.iter().position(|c| c.object == object)
    }

    pub fn component(&self, object: &str) -> Option<&ObjectLifeCycle> {
        self.components.iter().find(|c| c.object == object)
    }

    /// Looks up a component transition by id.
    pub fn member(&self, id: &str) -> Option<&OlcTransition> {
        self.components.iter().find_map(|c| c.transition(id))
    }

    pub fn members_of<'a>(&'a self, t: &'a CompositeTransition) -> impl Iterator<Item = &'a OlcTransition> + 'a {
        t.members.iter().filter_map(move |m| self.member(m))
    }

    pub fn transition(&self, id: &str) -> Option<&CompositeTransition> {
        self.transitions.iter().find(|t| t.id == id)
    }

    pub fn has_state(&self, s: &CompositeState) -> bool {
        self.states.contains(s)
    }

    pub fn outgoing<'a>(&'a self, s: &'a CompositeState) -> impl Iterator<Item = &'a CompositeTransition> + 'a {
        self.transitions.iter().filter(move |t| &t.source == s)
    }

    pub fn incoming<'a>(&'a self, s: &'a CompositeState) -> impl Iterator<Item = &'a CompositeTransition> + 'a {
        self.transitions.iter().filter(move |t| &t.target == s)
    }

    /// True when some member of `t` realizes `effect`.
    pub fn transition_matches(&self, t: &CompositeTransition, effect: &Effect) -> bool {
        self.members_of(t).any(|m| m.matches(effect))
    }

    /// True when some component defines `effect`.
    pub fn defines(&self, effect: &Effect) -> bool {
        self.component(&effect.object).is_some_and(|c| c.defines(effect))
    }

    pub fn state_label(&self, s: &CompositeState) -> String {
        let labels: Vec<&str> = self
            .components
            .iter()
            .zip(&s.0)
            .map(|(c, id)| c.state(id).map_or(id.as_str(), |st| st.label.as_str()))
            .collect();
        if labels.len() == 1 {
            labels[0].to_string()
        } else {
            format!("({})", labels.join(", "))
        }
    }

    pub fn reachable_states(&self) -> BTreeSet<&CompositeState> {
        self.reachable_via(|_| true)
    }

    pub(crate) fn reachable_via(&self, allow: impl Fn(&CompositeTransition) -> bool) -> BTreeSet<&CompositeState> {
        let mut seen = BTreeSet::new();
        let Some(init) = self.states.iter().find(|s| **s == self.initial) else {
            return seen;
        };
        seen.insert(init);
        let mut queue = VecDeque::from([init]);
        while let Some(s) = queue.pop_front() {
            for t in self.outgoing(s).filter(|t| allow(t)) {
                if let Some(target) = self.states.iter().find(|x| **x == t.target) {
                    if seen.insert(target) {
                        queue.push_back(target);
                    }
                }
            }
        }
        seen
    }

    pub fn validate(&self) -> ValidationReport {
        let mut report = ValidationReport::default();
        let mut objects = BTreeSet::new();
        for c in &self.components {
            if !objects.insert(c.object.as_str()) {
                report.push(ViolationKind::DuplicateId, &c.object, "duplicate component object");
            }
            report.issues.extend(c.validate().issues);
        }
        let mut owner: BTreeMap<&str, &str> = BTreeMap::new();
        for c in &self.components {
            for t in &c.transitions {
                if let Some(prev) = owner.insert(&t.id, &c.object) {
                    if prev != c.object {
                        report.push(
                            ViolationKind::DuplicateId,
                            &t.id,
                            format!("transition id used by both {prev} and {}", c.object),
                        );
                    }
                }
            }
        }

        let arity = self.components.len();
        let check_state = |report: &mut ValidationReport, s: &CompositeState, what: &str| {
            if s.0.len() != arity {
                report.push(
                    ViolationKind::InvalidComposite,
                    s.id(),
                    format!("{what} has {} coordinates, expected {arity}", s.0.len()),
                );
                return;
            }
            for (c, id) in self.components.iter().zip(&s.0) {
                if !c.has_state(id) {
                    report.push(
                        ViolationKind::DanglingReference,
                        s.id(),
                        format!("{what}: {id} is not a state of {}", c.object),
                    );
                }
            }
        };
        let mut seen = BTreeSet::new();
        for s in &self.states {
            if !seen.insert(s) {
                report.push(ViolationKind::DuplicateId, s.id(), "duplicate composite state");
            }
            check_state(&mut report, s, "state");
        }
        if !self.has_state(&self.initial) {
            report.push(ViolationKind::DanglingReference, self.initial.id(), "initial state is not a declared state");
        }
        for f in &self.finals {
            if !self.has_state(f) {
                report.push(ViolationKind::DanglingReference, f.id(), "final state is not a declared state");
            }
        }

        let mut tids = BTreeSet::new();
        for t in &self.transitions {
            if !tids.insert(t.id.as_str()) {
                report.push(ViolationKind::DuplicateId, &t.id, "duplicate composite transition id");
            }
            for (end, s) in [("source", &t.source), ("target", &t.target)] {
                if !self.has_state(s) {
                    report.push(
                        ViolationKind::DanglingReference,
                        &t.id,
                        format!("{end} {} is not a declared composite state", s.id()),
                    );
                }
            }
            if t.members.is_empty() {
                report.push(ViolationKind::InvalidComposite, &t.id, "transition has no members");
            }
            if t.source.0.len() != arity || t.target.0.len() != arity {
                continue;
            }
            let mut moved = vec![false; arity];
            for m in &t.members {
                let Some(mt) = self.member(m) else {
                    report.push(ViolationKind::DanglingReference, &t.id, format!("member {m} is not a component transition"));
                    continue;
                };
                let Some(k) = self.component_index(&mt.object) else {
                    continue;
                };
                if std::mem::replace(&mut moved[k], true) {
                    report.push(
                        ViolationKind::InvalidComposite,
                        &t.id,
                        format!("two members belong to object {}", mt.object),
                    );
                }
                if t.source.0[k] != mt.source || t.target.0[k] != mt.target {
                    report.push(
                        ViolationKind::InvalidComposite,
                        &t.id,
                        format!("member {m} does not match coordinate {}", mt.object),
                    );
                }
            }
            for k in 0..arity {
                if !moved[k] && t.source.0[k] != t.target.0[k] {
                    report.push(
                        ViolationKind::InvalidComposite,
                        &t.id,
                        format!("coordinate {} changes without a member", self.components[k].object),
                    );
                }
            }
        }

        // single components already reported their own unreachable states
        let reachable = self.reachable_states();
        if !reachable.is_empty() && !self.is_single() {
            for s in &self.states {
                if !reachable.contains(s) {
                    report.push(ViolationKind::Unreachable, s.id(), "not reachable from the initial state");
                }
            }
        }
        report
    }
}
