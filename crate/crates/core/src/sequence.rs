//! Sequence diagrams reduced to what adaptation needs: an ordered message
//! list, the object-state effects messages realize, and break fragments
//! over contiguous message blocks.

use std::collections::{BTreeMap, BTreeSet};

use serde::{Deserialize, Serialize};

use crate::effect::Effect;
use crate::olc::Initiator;

#[derive(Debug, thiserror::Error)]
pub enum SdError {
    #[error("syntax error: {0}")]
    Syntax(String),
    #[error("structure error at {at}: {detail}")]
    Structure { at: String, detail: String },
    #[error("fragment {0} has no effect-bearing message before or after it")]
    NoContext(String),
}

fn structure(at: impl Into<String>, detail: impl Into<String>) -> SdError {
    SdError::Structure {
        at: at.into(),
        detail: detail.into(),
    }
}

/// Effect carried by a message. Messages inside break fragments may leave
/// `from` / `to` open; adaptation fills them in.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct MessageEffect {
    pub object: String,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub from: Option<String>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub to: Option<String>,
}

impl MessageEffect {
    pub fn full(&self) -> Option<Effect> {
        match (&self.from, &self.to) {
            (Some(f), Some(t)) => Some(Effect::new(&self.object, f, t)),
            _ => None,
        }
    }
}

impl From<Effect> for MessageEffect {
    fn from(e: Effect) -> Self {
        MessageEffect {
            object: e.object,
            from: Some(e.from),
            to: Some(e.to),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "camelCase", deny_unknown_fields)]
pub struct Message {
    pub id: String,
    pub name: String,
    pub from: String,
    pub to: String,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub effect: Option<MessageEffect>,
    #[serde(default, skip_serializing_if = "std::ops::Not::not")]
    pub self_message: bool,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum FragmentKind {
    Break,
}

#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct BreakCombinedFragment {
    pub id: String,
    pub kind: FragmentKind,
    pub initiator: Initiator,
    /// Ids of a contiguous block of messages, in diagram order.
    pub messages: Vec<String>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub guard: Option<String>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SequenceDiagram {
    #[serde(default, skip_serializing_if = "String::is_empty")]
    pub id: String,
    pub lifelines: Vec<String>,
    pub messages: Vec<Message>,
    #[serde(default)]
    pub fragments: Vec<BreakCombinedFragment>,
}

/// Effects immediately around a fragment.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Context {
    /// Previous transition.
    pub pt: Option<Effect>,
    /// Next transition.
    pub nt: Option<Effect>,
}

pub fn parse_sd(text: &str) -> Result<SequenceDiagram, SdError> {
    let sd: SequenceDiagram = serde_json::from_str(text).map_err(|e| SdError::Syntax(e.to_string()))?;
    sd.validate()?;
    Ok(sd)
}

pub fn serialize_sd(sd: &SequenceDiagram) -> String {
    let mut s = serde_json::to_string_pretty(sd).expect("sequence diagrams always serialize");
    s.push('\n');
    s
}

/// All break fragments, ordered by the position of their message block.
pub fn extract_bcfs(sd: &SequenceDiagram) -> Vec<BreakCombinedFragment> {
    let mut out = sd.fragments.clone();
    out.sort_by_key(|f| sd.block(f).map(|(start, _)| start));
    out
}

/// Effects of the nearest effect-bearing messages outside every fragment
/// before and after `bcf`.
pub fn context_of(sd: &SequenceDiagram, bcf: &BreakCombinedFragment) -> Result<Context, SdError> {
    let (start, end) = sd
        .block(bcf)
        .ok_or_else(|| structure(&bcf.id, "fragment is not part of this diagram"))?;
    let fragmented = sd.fragment_indices();
    let effect_at = |i: &usize| {
        if fragmented.contains(i) {
            None
        } else {
            sd.messages[*i].effect.as_ref().and_then(MessageEffect::full)
        }
    };
    let pt = (0..start).rev().find_map(|i| effect_at(&i));
    let nt = (end + 1..sd.messages.len()).find_map(|i| effect_at(&i));
    if pt.is_none() && nt.is_none() {
        return Err(SdError::NoContext(bcf.id.clone()));
    }
    Ok(Context { pt, nt })
}

impl SequenceDiagram {
    pub fn fragment(&self, id: &str) -> Option<&BreakCombinedFragment> {
        self.fragments.iter().find(|f| f.id == id)
    }

    pub fn message(&self, id: &str) -> Option<&Message> {
        self.messages.iter().find(|m| m.id == id)
    }

    /// Messages of a fragment, in diagram order.
    pub fn messages_of<'a>(&'a self, bcf: &'a BreakCombinedFragment) -> impl Iterator<Item = &'a Message> + 'a {
        bcf.messages.iter().filter_map(move |id| self.message(id))
    }

    /// First and last message index of a fragment block.
    fn block(&self, bcf: &BreakCombinedFragment) -> Option<(usize, usize)> {
        let first = self.messages.iter().position(|m| Some(&m.id) == bcf.messages.first())?;
        Some((first, first + bcf.messages.len() - 1))
    }

    fn fragment_indices(&self) -> BTreeSet<usize> {
        self.fragments
            .iter()
            .filter_map(|f| self.block(f))
            .flat_map(|(s, e)| s..=e)
            .collect()
    }

    pub fn validate(&self) -> Result<(), SdError> {
        let lifelines: BTreeSet<&str> = self.lifelines.iter().map(String::as_str).collect();
        if lifelines.len() != self.lifelines.len() {
            return Err(structure(&self.id, "duplicate lifeline"));
        }
        let mut index = BTreeMap::new();
        for (i, m) in self.messages.iter().enumerate() {
            if index.insert(m.id.as_str(), i).is_some() {
                return Err(structure(&m.id, "duplicate message id"));
            }
            for end in [&m.from, &m.to] {
                if !lifelines.contains(end.as_str()) {
                    return Err(structure(&m.id, format!("unknown lifeline {end}")));
                }
            }
            if m.from == m.to && !m.self_message {
                return Err(structure(&m.id, "self message must be flagged selfMessage"));
            }
            if let Some(e) = &m.effect {
                if e.from.is_some() && e.from == e.to {
                    return Err(structure(&m.id, "effect does not change state"));
                }
            }
        }

        let mut owner: BTreeMap<usize, &str> = BTreeMap::new();
        let mut fids = BTreeSet::new();
        for f in &self.fragments {
            if !fids.insert(f.id.as_str()) || index.contains_key(f.id.as_str()) {
                return Err(structure(&f.id, "duplicate fragment id"));
            }
            if f.messages.is_empty() {
                return Err(structure(&f.id, "fragment has no messages"));
            }
            let mut positions = Vec::new();
            for id in &f.messages {
                let i = *index
                    .get(id.as_str())
                    .ok_or_else(|| structure(&f.id, format!("unknown message {id}")))?;
                positions.push(i);
            }
            if positions.windows(2).any(|w| w[1] != w[0] + 1) {
                return Err(structure(&f.id, "fragment messages are not a contiguous block in diagram order"));
            }
            for i in positions {
                if let Some(other) = owner.insert(i, &f.id) {
                    return Err(structure(
                        &f.id,
                        format!("message {} is also in fragment {other}", self.messages[i].id),
                    ));
                }
            }
        }
        for (i, m) in self.messages.iter().enumerate() {
            let partial = m.effect.as_ref().is_some_and(|e| e.full().is_none());
            if partial && !owner.contains_key(&i) {
                return Err(structure(&m.id, "only fragment messages may leave effect states open"));
            }
        }
        Ok(())
    }
}
