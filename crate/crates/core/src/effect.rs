use std::fmt;

use serde::{Deserialize, Serialize};

/// One object state transition induced by a task or realized by a message.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(rename_all = "camelCase", deny_unknown_fields)]
pub struct Effect {
    pub object: String,
    pub from: String,
    pub to: String,
    /// Required when `from == to`.
    #[serde(default, skip_serializing_if = "std::ops::Not::not")]
    pub self_loop: bool,
}

impl Effect {
    pub fn new(object: impl Into<String>, from: impl Into<String>, to: impl Into<String>) -> Self {
        let (from, to) = (from.into(), to.into());
        Effect {
            object: object.into(),
            self_loop: from == to,
            from,
            to,
        }
    }

    /// `from != to`, or the loop is flagged.
    pub fn is_well_formed(&self) -> bool {
        self.from != self.to || self.self_loop
    }
}

impl fmt::Display for Effect {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}:{}->{}", self.object, self.from, self.to)
    }
}
