//! OLC JSON documents. A composite uses the same schema with `+`-joined
//! tuple state ids, `members` on transitions and the component OLCs
//! under `components`.

use std::collections::BTreeSet;

use serde::{Deserialize, Serialize};

use super::{
    CompositeOlc, CompositeState, CompositeTransition, Initiator, ObjectLifeCycle, OlcError, OlcTransition, State,
};

#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub(crate) struct OlcDoc {
    pub object: String,
    pub states: Vec<StateDoc>,
    pub initial: String,
    pub finals: Vec<String>,
    pub transitions: Vec<TransitionDoc>,
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub components: Vec<OlcDoc>,
    /// Owned by the adaptation module; opaque here.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub provenance: Option<serde_json::Value>,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub(crate) struct StateDoc {
    pub id: String,
    pub label: String,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub(crate) struct TransitionDoc {
    pub id: String,
    pub name: String,
    pub from: String,
    pub to: String,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub initiator: Option<Initiator>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub members: Option<Vec<String>>,
}

impl OlcDoc {
    pub(crate) fn parse(text: &str) -> Result<Self, OlcError> {
        serde_json::from_str(text).map_err(|e| OlcError::Syntax(e.to_string()))
    }

    pub(crate) fn render(&self) -> String {
        let mut s = serde_json::to_string_pretty(self).expect("OLC documents always serialize");
        s.push('\n');
        s
    }

    fn into_single(self) -> Result<ObjectLifeCycle, OlcError> {
        if !self.components.is_empty() {
            return Err(OlcError::Structure(format!(
                "{} is a composite life cycle, expected a single object",
                self.object
            )));
        }
        let olc = ObjectLifeCycle {
            states: self.states.into_iter().map(|s| State::new(s.id, s.label)).collect(),
            initial: self.initial,
            finals: self.finals.into_iter().collect(),
            transitions: self
                .transitions
                .into_iter()
                .map(|t| {
                    if t.members.is_some() {
                        return Err(OlcError::Structure(format!("transition {} has members but no components", t.id)));
                    }
                    Ok(OlcTransition {
                        id: t.id,
                        name: t.name,
                        object: self.object.clone(),
                        source: t.from,
                        target: t.to,
                        initiator: t.initiator,
                    })
                })
                .collect::<Result<_, _>>()?,
            object: self.object,
        };
        Ok(olc)
    }

    pub(crate) fn into_composite(self) -> Result<CompositeOlc, OlcError> {
        if self.components.is_empty() {
            return Ok(self.into_single()?.into());
        }
        let components = self
            .components
            .into_iter()
            .map(OlcDoc::into_single)
            .collect::<Result<Vec<_>, _>>()?;
        let arity = components.len();
        let tuple = |id: &str| -> Result<CompositeState, OlcError> {
            let s = CompositeState::parse(id);
            if s.0.len() != arity {
                return Err(OlcError::Structure(format!("state {id} does not have {arity} coordinates")));
            }
            Ok(s)
        };
        let olc = CompositeOlc {
            states: self.states.iter().map(|s| tuple(&s.id)).collect::<Result<_, _>>()?,
            initial: tuple(&self.initial)?,
            finals: self.finals.iter().map(|s| tuple(s)).collect::<Result<BTreeSet<_>, _>>()?,
            transitions: self
                .transitions
                .into_iter()
                .map(|t| {
                    Ok(CompositeTransition {
                        source: tuple(&t.from)?,
                        target: tuple(&t.to)?,
                        members: t
                            .members
                            .ok_or_else(|| OlcError::Structure(format!("composite transition {} lacks members", t.id)))?,
                        id: t.id,
                        name: t.name,
                        initiator: t.initiator,
                    })
                })
                .collect::<Result<_, OlcError>>()?,
            components,
        };
        Ok(olc)
    }
}

impl From<&ObjectLifeCycle> for OlcDoc {
    fn from(olc: &ObjectLifeCycle) -> Self {
        OlcDoc {
            object: olc.object.clone(),
            states: olc
                .states
                .iter()
                .map(|s| StateDoc {
                    id: s.id.clone(),
                    label: s.label.clone(),
                })
                .collect(),
            initial: olc.initial.clone(),
            finals: olc.finals.iter().cloned().collect(),
            transitions: olc
                .transitions
                .iter()
                .map(|t| TransitionDoc {
                    id: t.id.clone(),
                    name: t.name.clone(),
                    from: t.source.clone(),
                    to: t.target.clone(),
                    initiator: t.initiator,
                    members: None,
                })
                .collect(),
            components: Vec::new(),
            provenance: None,
        }
    }
}

impl From<&CompositeOlc> for OlcDoc {
    fn from(olc: &CompositeOlc) -> Self {
        if olc.is_single() {
            return OlcDoc::from(&olc.components[0]);
        }
        OlcDoc {
            object: olc.object_id(),
            states: olc
                .states
                .iter()
                .map(|s| StateDoc {
                    id: s.id(),
                    label: olc.state_label(s),
                })
                .collect(),
            initial: olc.initial.id(),
            finals: olc.finals.iter().map(CompositeState::id).collect(),
            transitions: olc
                .transitions
                .iter()
                .map(|t| TransitionDoc {
                    id: t.id.clone(),
                    name: t.name.clone(),
                    from: t.source.id(),
                    to: t.target.id(),
                    initiator: t.initiator,
                    members: Some(t.members.clone()),
                })
                .collect(),
            components: olc.components.iter().map(OlcDoc::from).collect(),
            provenance: None,
        }
    }
}

impl ObjectLifeCycle {
    /// Parses a single-object OLC document.
    pub fn from_json(text: &str) -> Result<Self, OlcError> {
        OlcDoc::parse(text)?.into_single()
    }

    pub fn to_json(&self) -> String {
        OlcDoc::from(self).render()
    }
}

impl CompositeOlc {
    /// Parses either a single OLC (lifted) or a composite document.
    pub fn from_json(text: &str) -> Result<Self, OlcError> {
        OlcDoc::parse(text)?.into_composite()
    }

    /// Single-component composites serialize as a plain OLC.
    pub fn to_json(&self) -> String {
        OlcDoc::from(self).render()
    }
}
