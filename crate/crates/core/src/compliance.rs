//! OLC conformance and coverage of process models.
//!
//! Both checks explore the reachable state space of the model's token game
//! instead of enumerating traces. Markings that cannot reach completion are
//! pruned, so only steps of complete runs count. Conformance additionally
//! tracks, per object, the OLC state reached by the effects executed so far.
//! For a composite OLC the per-object checks run against the component
//! life cycles.

use std::collections::{BTreeMap, BTreeSet, HashMap, VecDeque};

use serde::{Deserialize, Serialize};

use crate::effect::Effect;
use crate::model::semantics::{is_empty, Fire, Marking, Net};
use crate::model::{ProcessModel, DEFAULT_TRACE_CAP};
use crate::olc::CompositeOlc;
use crate::report::{Report, Verdict, Violation, ViolationKind};
use crate::Explosion;

#[derive(Debug, Clone, Copy, Default, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum ConformanceMode {
    /// Effect membership plus per-object ordering along every run.
    #[default]
    Trace,
    /// Effect membership only.
    Structural,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct CheckOptions {
    pub mode: ConformanceMode,
    /// Maximum number of explored markings / configurations.
    pub cap: usize,
}

impl Default for CheckOptions {
    fn default() -> Self {
        CheckOptions {
            mode: ConformanceMode::Trace,
            cap: DEFAULT_TRACE_CAP,
        }
    }
}

pub type ConformanceReport = Report;
pub type CoverageReport = Report;

/// Conjunction of conformance and coverage.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct ComplianceReport {
    pub verdict: Verdict,
    pub violations: Vec<Violation>,
    pub conformance: ConformanceReport,
    pub coverage: CoverageReport,
    /// Base-trace preservation, only set when verifying a variant.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub preservation: Option<Report>,
}

impl ComplianceReport {
    pub fn new(conformance: ConformanceReport, coverage: CoverageReport) -> Self {
        let violations = conformance.violations.iter().chain(&coverage.violations).cloned().collect();
        ComplianceReport {
            verdict: Verdict::from_pass(conformance.is_pass() && coverage.is_pass()),
            violations,
            conformance,
            coverage,
            preservation: None,
        }
    }

    pub fn with_preservation(mut self, preservation: Report) -> Self {
        self.verdict = Verdict::from_pass(self.verdict.is_pass() && preservation.is_pass());
        self.violations.extend(preservation.violations.iter().cloned());
        self.preservation = Some(preservation);
        self
    }

    pub fn is_pass(&self) -> bool {
        self.verdict.is_pass()
    }
}

/// Raw conformance results keyed by (task id, effect).
#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct ConformanceFindings {
    /// Effects that match no OLC transition (or name an unknown object).
    pub undefined: BTreeSet<(String, Effect)>,
    /// Defined effects executed while their object is in another state,
    /// with a shortest witness prefix of visible steps.
    pub misordered: BTreeMap<(String, Effect), Misorder>,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Misorder {
    pub actual_state: String,
    pub witness: Vec<String>,
}

/// Raw coverage results: what no complete run reaches.
#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct CoverageFindings {
    /// (object, component transition id)
    pub uncovered_transitions: BTreeSet<(String, String)>,
    /// (object, state id)
    pub uncovered_states: BTreeSet<(String, String)>,
}

pub fn check_conformance(pm: &ProcessModel, olc: &CompositeOlc) -> Result<ConformanceReport, Explosion> {
    check_conformance_with(pm, olc, &CheckOptions::default())
}

pub fn check_conformance_with(
    pm: &ProcessModel,
    olc: &CompositeOlc,
    opts: &CheckOptions,
) -> Result<ConformanceReport, Explosion> {
    let findings = match opts.mode {
        ConformanceMode::Structural => ConformanceFindings {
            undefined: undefined_effects(pm, olc),
            misordered: BTreeMap::new(),
        },
        ConformanceMode::Trace => conformance_findings(pm, olc, opts.cap)?,
    };
    Ok(conformance_report(olc, &findings))
}

pub fn check_coverage(pm: &ProcessModel, olc: &CompositeOlc) -> Result<CoverageReport, Explosion> {
    check_coverage_with(pm, olc, DEFAULT_TRACE_CAP)
}

pub fn check_coverage_with(pm: &ProcessModel, olc: &CompositeOlc, cap: usize) -> Result<CoverageReport, Explosion> {
    Ok(coverage_report(olc, &coverage_findings(pm, olc, cap)?))
}

pub fn check_compliance(pm: &ProcessModel, olc: &CompositeOlc) -> Result<ComplianceReport, Explosion> {
    check_compliance_with(pm, olc, &CheckOptions::default())
}

pub fn check_compliance_with(
    pm: &ProcessModel,
    olc: &CompositeOlc,
    opts: &CheckOptions,
) -> Result<ComplianceReport, Explosion> {
    let conformance = check_conformance_with(pm, olc, opts)?;
    let coverage = check_coverage_with(pm, olc, opts.cap)?;
    Ok(ComplianceReport::new(conformance, coverage))
}

pub(crate) fn conformance_report(olc: &CompositeOlc, findings: &ConformanceFindings) -> Report {
    let mut violations = Vec::new();
    for (task, effect) in &findings.undefined {
        let why = if olc.component(&effect.object).is_none() {
            format!("task {task}: object {} has no life cycle", effect.object)
        } else {
            format!("task {task}: no such transition in the life cycle of {}", effect.object)
        };
        violations.push(Violation::new(ViolationKind::UndefinedTransition, effect.to_string(), why));
    }
    for ((task, effect), m) in &findings.misordered {
        violations.push(Violation::new(
            ViolationKind::InvalidOrder,
            effect.to_string(),
            format!(
                "task {task}: {} is in {} (run prefix: {})",
                effect.object,
                m.actual_state,
                m.witness.join(" > ")
            ),
        ));
    }
    Report::from_violations(violations)
}

pub(crate) fn coverage_report(olc: &CompositeOlc, findings: &CoverageFindings) -> Report {
    let mut violations = Vec::new();
    for (object, id) in &findings.uncovered_transitions {
        let detail = olc
            .member(id)
            .map(|t| format!("{} ({} -> {}) is never induced", t.name, t.source, t.target))
            .unwrap_or_default();
        violations.push(Violation::new(ViolationKind::UncoveredTransition, format!("{object}:{id}"), detail));
    }
    for (object, state) in &findings.uncovered_states {
        violations.push(Violation::new(
            ViolationKind::UncoveredState,
            format!("{object}:{state}"),
            "never visited by an induced transition",
        ));
    }
    Report::from_violations(violations)
}

/// Effects of any task that no OLC transition defines.
pub fn undefined_effects(pm: &ProcessModel, olc: &CompositeOlc) -> BTreeSet<(String, Effect)> {
    pm.tasks()
        .flat_map(|t| t.effects().iter().map(move |e| (t, e)))
        .filter(|(_, e)| !olc.defines(e))
        .map(|(t, e)| (t.id.clone(), e.clone()))
        .collect()
}

/// Reachable markings of the token game, with completion information.
struct StateSpace<'m> {
    net: Net<'m>,
    succ: Vec<Vec<(Fire, usize)>>,
    /// Marking can still reach the empty marking.
    live: Vec<bool>,
}

impl<'m> StateSpace<'m> {
    fn explore(pm: &'m ProcessModel, cap: usize) -> Result<Self, Explosion> {
        let net = Net::new(pm);
        let mut markings: Vec<Marking> = vec![net.initial()];
        let mut index: HashMap<Marking, usize> = HashMap::from([(net.initial(), 0)]);
        let mut succ: Vec<Vec<(Fire, usize)>> = vec![Vec::new()];
        let mut i = 0;
        while i < markings.len() {
            let m = markings[i].clone();
            for mv in net.moves(&m) {
                let next = net.apply(&m, &mv);
                let j = match index.get(&next) {
                    Some(&j) => j,
                    None => {
                        if markings.len() >= cap {
                            return Err(Explosion { cap });
                        }
                        markings.push(next.clone());
                        succ.push(Vec::new());
                        index.insert(next, markings.len() - 1);
                        markings.len() - 1
                    }
                };
                succ[i].push((mv.fire, j));
            }
            i += 1;
        }

        let mut pred = vec![Vec::new(); markings.len()];
        for (i, out) in succ.iter().enumerate() {
            for &(_, j) in out {
                pred[j].push(i);
            }
        }
        let mut live: Vec<bool> = markings.iter().map(is_empty).collect();
        let mut queue: VecDeque<usize> = (0..markings.len()).filter(|&i| live[i]).collect();
        while let Some(j) = queue.pop_front() {
            for &i in &pred[j] {
                if !live[i] {
                    live[i] = true;
                    queue.push_back(i);
                }
            }
        }
        Ok(StateSpace { net, succ, live })
    }

    /// Steps that lie on some complete run.
    fn live_steps(&self, from: usize) -> impl Iterator<Item = (Fire, usize)> + '_ {
        self.succ[from].iter().copied().filter(|&(_, j)| self.live[j])
    }
}

const BROKEN: u32 = u32::MAX;

/// What a task's effect does to the per-object state vector.
struct EffectAction<'a> {
    effect: &'a Effect,
    component: usize,
    defined: bool,
    from: Option<u32>,
    to: Option<u32>,
}

/// Conformance via exploration of (marking, per-object OLC state).
pub fn conformance_findings(pm: &ProcessModel, olc: &CompositeOlc, cap: usize) -> Result<ConformanceFindings, Explosion> {
    let space = StateSpace::explore(pm, cap)?;
    let state_ix: Vec<BTreeMap<&str, u32>> = olc
        .components
        .iter()
        .map(|c| c.states.iter().enumerate().map(|(i, s)| (s.id.as_str(), i as u32)).collect())
        .collect();
    let actions: Vec<Vec<EffectAction>> = space
        .net
        .nodes
        .iter()
        .map(|n| {
            n.effects()
                .iter()
                .filter_map(|e| {
                    let k = olc.component_index(&e.object)?;
                    Some(EffectAction {
                        effect: e,
                        component: k,
                        defined: olc.components[k].defines(e),
                        from: state_ix[k].get(e.from.as_str()).copied(),
                        to: state_ix[k].get(e.to.as_str()).copied(),
                    })
                })
                .collect()
        })
        .collect();
    let state_name = |k: usize, s: u32| olc.components[k].states[s as usize].id.clone();

    let initial: Vec<u32> = olc
        .components
        .iter()
        .enumerate()
        .map(|(k, c)| state_ix[k].get(c.initial.as_str()).copied().unwrap_or(BROKEN))
        .collect();
    let mut findings = ConformanceFindings {
        undefined: undefined_effects(pm, olc),
        misordered: BTreeMap::new(),
    };
    if !space.live[0] {
        return Ok(findings);
    }

    type Config = (usize, Vec<u32>);
    let mut configs: Vec<Config> = vec![(0, initial.clone())];
    let mut parent: Vec<(usize, Option<&str>)> = vec![(usize::MAX, None)];
    let mut seen: HashMap<Config, usize> = HashMap::from([((0, initial), 0)]);
    let witness = |parent: &[(usize, Option<&str>)], mut at: usize| {
        let mut steps = Vec::new();
        while at != usize::MAX {
            if let Some(s) = parent[at].1 {
                steps.push(s.to_string());
            }
            at = parent[at].0;
        }
        steps.reverse();
        steps
    };

    let mut i = 0;
    while i < configs.len() {
        let (m, objs) = configs[i].clone();
        for (fire, j) in space.live_steps(m) {
            let mut next = objs.clone();
            if let Fire::Task(n) = fire {
                let task = &space.net.nodes[n].id;
                for a in &actions[n] {
                    let cur = next[a.component];
                    if cur == BROKEN {
                        continue;
                    }
                    if a.defined && a.from == Some(cur) {
                        next[a.component] = a.to.unwrap_or(BROKEN);
                        continue;
                    }
                    next[a.component] = BROKEN;
                    if a.defined {
                        let key = (task.clone(), a.effect.clone());
                        if !findings.misordered.contains_key(&key) {
                            let mut w = witness(&parent, i);
                            w.push(task.clone());
                            findings.misordered.insert(
                                key,
                                Misorder {
                                    actual_state: state_name(a.component, cur),
                                    witness: w,
                                },
                            );
                        }
                    }
                }
            }
            let config = (j, next);
            if !seen.contains_key(&config) {
                if configs.len() >= cap {
                    return Err(Explosion { cap });
                }
                seen.insert(config.clone(), configs.len());
                configs.push(config);
                parent.push((i, space.net.step_id(fire)));
            }
        }
        i += 1;
    }
    Ok(findings)
}

/// Effects of tasks that fire on some complete run.
pub fn live_effects(pm: &ProcessModel, cap: usize) -> Result<BTreeSet<Effect>, Explosion> {
    let space = StateSpace::explore(pm, cap)?;
    let mut fired = BTreeSet::new();
    for m in 0..space.succ.len() {
        for (fire, _) in space.live_steps(m) {
            if let Fire::Task(n) = fire {
                fired.insert(n);
            }
        }
    }
    Ok(fired
        .into_iter()
        .flat_map(|n| space.net.nodes[n].effects().iter().cloned())
        .collect())
}

pub fn coverage_findings(pm: &ProcessModel, olc: &CompositeOlc, cap: usize) -> Result<CoverageFindings, Explosion> {
    Ok(coverage_of(olc, &live_effects(pm, cap)?))
}

/// Coverage of `olc` by a set of induced effects.
pub fn coverage_of(olc: &CompositeOlc, induced: &BTreeSet<Effect>) -> CoverageFindings {
    let mut findings = CoverageFindings::default();
    for c in &olc.components {
        let mut visited = BTreeSet::new();
        for t in &c.transitions {
            if induced.iter().any(|e| t.matches(e)) {
                visited.insert(t.source.as_str());
                visited.insert(t.target.as_str());
            } else {
                findings.uncovered_transitions.insert((c.object.clone(), t.id.clone()));
            }
        }
        for s in &c.states {
            if !visited.contains(s.id.as_str()) {
                findings.uncovered_states.insert((c.object.clone(), s.id.clone()));
            }
        }
    }
    findings
}
