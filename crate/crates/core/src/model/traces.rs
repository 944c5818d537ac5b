use std::collections::BTreeSet;

use super::semantics::{is_empty, Marking, Net};
use super::ProcessModel;
use crate::Explosion;

/// Visible steps of one complete run: task ids, or the id of the boundary
/// event that interrupted its host task.
pub type Trace = Vec<String>;

pub const DEFAULT_TRACE_CAP: usize = 100_000;
pub const TRACE_CAP_ENV: &str = "OLCVAR_TRACE_CAP";

/// Reads the cap override from `OLCVAR_TRACE_CAP`, falling back to the default.
pub fn trace_cap_from_env() -> usize {
    std::env::var(TRACE_CAP_ENV)
        .ok()
        .and_then(|v| v.trim().parse().ok())
        .unwrap_or(DEFAULT_TRACE_CAP)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct TraceOptions {
    /// Each flow may carry at most `loop_bound + 1` tokens per run.
    pub loop_bound: usize,
    pub cap: usize,
}

impl Default for TraceOptions {
    fn default() -> Self {
        TraceOptions {
            loop_bound: 0,
            cap: DEFAULT_TRACE_CAP,
        }
    }
}

pub fn enumerate_traces(pm: &ProcessModel, loop_bound: usize) -> Result<BTreeSet<Trace>, Explosion> {
    enumerate_traces_with(
        pm,
        &TraceOptions {
            loop_bound,
            ..TraceOptions::default()
        },
    )
}

pub fn enumerate_traces_with(pm: &ProcessModel, opts: &TraceOptions) -> Result<BTreeSet<Trace>, Explosion> {
    let net = Net::new(pm);
    let mut counts = vec![0usize; pm.edge_count()];
    counts[net.start_edge()] = 1;
    let mut search = Search {
        net: &net,
        limit: opts.loop_bound + 1,
        cap: opts.cap,
        work: 0,
        traces: BTreeSet::new(),
        trace: Vec::new(),
    };
    search.dfs(net.initial(), &mut counts)?;
    Ok(search.traces)
}

struct Search<'a, 'm> {
    net: &'a Net<'m>,
    limit: usize,
    cap: usize,
    work: usize,
    traces: BTreeSet<Trace>,
    trace: Trace,
}

impl Search<'_, '_> {
    fn dfs(&mut self, marking: Marking, counts: &mut Vec<usize>) -> Result<(), Explosion> {
        self.work += 1;
        if self.work > self.cap.saturating_mul(64) {
            return Err(Explosion { cap: self.cap });
        }
        if is_empty(&marking) {
            self.traces.insert(self.trace.clone());
            if self.traces.len() > self.cap {
                return Err(Explosion { cap: self.cap });
            }
            return Ok(());
        }
        for mv in self.net.moves(&marking) {
            if mv.produced.iter().any(|&e| counts[e] >= self.limit) {
                continue;
            }
            for &e in &mv.produced {
                counts[e] += 1;
            }
            let step = self.net.step_id(mv.fire);
            if let Some(id) = step {
                self.trace.push(id.to_string());
            }
            let next = self.net.apply(&marking, &mv);
            let result = self.dfs(next, counts);
            if step.is_some() {
                self.trace.pop();
            }
            for &e in &mv.produced {
                counts[e] -= 1;
            }
            result?;
        }
        Ok(())
    }
}
