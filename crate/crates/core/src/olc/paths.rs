use std::collections::BTreeSet;

use serde::Serialize;

use super::{CompositeOlc, CompositeState};

/// A transition-id sequence from the initial state.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize)]
pub struct OlcPath {
    pub transitions: Vec<String>,
    /// The path ends in a final state.
    pub complete: bool,
}

/// All paths from the initial state with at most `max_len` transitions.
pub fn olc_paths(olc: &CompositeOlc, max_len: usize) -> BTreeSet<OlcPath> {
    let mut out = BTreeSet::new();
    let mut prefix = Vec::new();
    walk(olc, &olc.initial, max_len, &mut prefix, &mut out);
    out
}

fn walk(
    olc: &CompositeOlc,
    at: &CompositeState,
    budget: usize,
    prefix: &mut Vec<String>,
    out: &mut BTreeSet<OlcPath>,
) {
    out.insert(OlcPath {
        transitions: prefix.clone(),
        complete: olc.finals.contains(at),
    });
    if budget == 0 {
        return;
    }
    for t in olc.outgoing(at) {
        prefix.push(t.id.clone());
        walk(olc, &t.target, budget - 1, prefix, out);
        prefix.pop();
    }
}
