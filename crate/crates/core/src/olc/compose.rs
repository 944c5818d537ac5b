use std::collections::{BTreeMap, BTreeSet, VecDeque};

use serde::{Deserialize, Serialize};

use super::{CompositeOlc, CompositeState, CompositeTransition, ObjectLifeCycle, OlcError, JOINT_SEPARATOR};

/// Groups of transition ids that fire jointly, e.g. `[["accept", "assemble"]]`.
#[derive(Debug, Clone, Default, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SyncSpec {
    pub groups: Vec<Vec<String>>,
}

impl SyncSpec {
    pub fn from_json(text: &str) -> Result<Self, OlcError> {
        serde_json::from_str(text).map_err(|e| OlcError::Syntax(e.to_string()))
    }
}

/// Result of [`compose`]: the reachable product plus non-fatal findings.
#[derive(Debug, Clone)]
pub struct Composition {
    pub olc: CompositeOlc,
    /// Sync groups whose members are never co-enabled.
    pub warnings: Vec<String>,
}

/// (component index, transition index) pairs firing together.
struct Move {
    members: Vec<(usize, usize)>,
}

/// Builds the reachable synchronized product of `olcs`.
///
/// Ungrouped transitions fire alone; a sync group fires only when every
/// member is enabled in its coordinate. A tuple is final when every
/// coordinate is final or still initial, and at least one is final.
pub fn compose(olcs: &[ObjectLifeCycle], sync: &SyncSpec) -> Result<Composition, OlcError> {
    if olcs.is_empty() {
        return Err(OlcError::Structure("nothing to compose".into()));
    }
    let mut objects = BTreeSet::new();
    for olc in olcs {
        if !objects.insert(olc.object.as_str()) {
            return Err(OlcError::Structure(format!("object {} appears twice", olc.object)));
        }
        if olc.validate().has_errors() {
            return Err(OlcError::Structure(format!("life cycle of {} is invalid", olc.object)));
        }
    }

    let mut index: BTreeMap<&str, (usize, usize)> = BTreeMap::new();
    for (c, olc) in olcs.iter().enumerate() {
        for (t, tr) in olc.transitions.iter().enumerate() {
            if index.insert(&tr.id, (c, t)).is_some() {
                return Err(OlcError::Structure(format!(
                    "transition id {} is used by more than one life cycle",
                    tr.id
                )));
            }
        }
    }

    let mut group_of: BTreeMap<(usize, usize), usize> = BTreeMap::new();
    for (g, group) in sync.groups.iter().enumerate() {
        if group.is_empty() {
            return Err(OlcError::InvalidSync(format!("group {g} is empty")));
        }
        let mut owners = BTreeSet::new();
        for id in group {
            let &loc = index
                .get(id.as_str())
                .ok_or_else(|| OlcError::InvalidSync(format!("unknown transition id {id}")))?;
            if !owners.insert(loc.0) {
                return Err(OlcError::InvalidSync(format!(
                    "group {g} has two transitions of object {}",
                    olcs[loc.0].object
                )));
            }
            if group_of.insert(loc, g).is_some() {
                return Err(OlcError::InvalidSync(format!("transition {id} appears in more than one group")));
            }
        }
    }

    // Deterministic move order: component order, then transition order; a
    // group is emitted where its first member is met.
    let mut moves = Vec::new();
    let mut emitted = BTreeSet::new();
    for (c, olc) in olcs.iter().enumerate() {
        for t in 0..olc.transitions.len() {
            match group_of.get(&(c, t)) {
                None => moves.push(Move { members: vec![(c, t)] }),
                Some(&g) if emitted.insert(g) => moves.push(Move {
                    members: sync.groups[g].iter().map(|id| index[id.as_str()]).collect(),
                }),
                Some(_) => {}
            }
        }
    }

    let initial = CompositeState(olcs.iter().map(|o| o.initial.clone()).collect());
    let mut states = vec![initial.clone()];
    let mut seen = BTreeSet::from([initial.clone()]);
    let mut transitions = Vec::new();
    let mut fired = vec![false; moves.len()];
    let mut queue = VecDeque::from([initial.clone()]);
    while let Some(state) = queue.pop_front() {
        for (m, mv) in moves.iter().enumerate() {
            let enabled = mv
                .members
                .iter()
                .all(|&(c, t)| olcs[c].transitions[t].source == state.0[c]);
            if !enabled {
                continue;
            }
            fired[m] = true;
            let mut target = state.clone();
            for &(c, t) in &mv.members {
                target.0[c] = olcs[c].transitions[t].target.clone();
            }
            let members: Vec<_> = mv.members.iter().map(|&(c, t)| &olcs[c].transitions[t]).collect();
            let join = |f: fn(&super::OlcTransition) -> &str| {
                members.iter().map(|t| f(t)).collect::<Vec<_>>().join(&JOINT_SEPARATOR.to_string())
            };
            transitions.push(CompositeTransition {
                id: join(|t| &t.id),
                name: join(|t| &t.name),
                source: state.clone(),
                target: target.clone(),
                members: members.iter().map(|t| t.id.clone()).collect(),
                initiator: None,
            });
            if seen.insert(target.clone()) {
                states.push(target.clone());
                queue.push_back(target);
            }
        }
    }

    let finals = states
        .iter()
        .filter(|s| {
            let mut any_final = false;
            let all = s.0.iter().zip(olcs).all(|(id, olc)| {
                let is_final = olc.finals.contains(id);
                any_final |= is_final;
                is_final || *id == olc.initial
            });
            all && any_final
        })
        .cloned()
        .collect();

    let warnings = moves
        .iter()
        .zip(&fired)
        .filter(|(mv, fired)| mv.members.len() > 1 && !**fired)
        .map(|(mv, _)| {
            let ids: Vec<&str> = mv.members.iter().map(|&(c, t)| olcs[c].transitions[t].id.as_str()).collect();
            format!("sync group {{{}}} is never co-enabled", ids.join(", "))
        })
        .collect();

    Ok(Composition {
        olc: CompositeOlc {
            components: olcs.to_vec(),
            states,
            initial,
            finals,
            transitions,
        },
        warnings,
    })
}
