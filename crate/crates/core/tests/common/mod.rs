//! Seeded generators and brute-force oracles shared by the integration tests.
//!
//! The oracles deliberately avoid the library's exploration code: traces
//! come from a full-interleaving token game written here, OLC validity
//! from `olc_paths` membership, and products from the cartesian product.
#![allow(dead_code)]

use std::collections::{BTreeMap, BTreeSet};

use olcvar::model::{GatewayDirection, Node, NodeKind, SequenceFlow, Trigger};
use olcvar::olc::{CompositeState, OlcTransition, State};
use olcvar::sequence::{BreakCombinedFragment, FragmentKind, Message, MessageEffect, SequenceDiagram};
use olcvar::{olc_paths, CompositeOlc, Effect, Initiator, ObjectLifeCycle, ProcessModel, SyncSpec};
use rand::rngs::StdRng;
use rand::seq::IndexedRandom;
use rand::{Rng, SeedableRng};

pub fn rng(seed: u64) -> StdRng {
    StdRng::seed_from_u64(seed)
}

// ---------------------------------------------------------------- OLCs

/// Random OLC over states `<object>_0 .. <object>_{n-1}`, every state
/// reachable from `<object>_0`.
pub fn random_olc(r: &mut StdRng, object: &str, max_states: usize, acyclic: bool) -> ObjectLifeCycle {
    let n = r.random_range(1..=max_states);
    let sid = |i: usize| format!("{object}_{i}");
    let mut pairs: Vec<(usize, usize)> = Vec::new();
    for i in 1..n {
        pairs.push((r.random_range(0..i), i));
    }
    for _ in 0..r.random_range(0..=n) {
        let (a, b) = (r.random_range(0..n), r.random_range(0..n));
        let ok = if acyclic { a < b } else { a != b || r.random_bool(0.2) };
        if ok && !pairs.contains(&(a, b)) {
            pairs.push((a, b));
        }
    }
    let transitions: Vec<OlcTransition> = pairs
        .iter()
        .enumerate()
        .map(|(k, &(a, b))| OlcTransition {
            id: format!("{object}{k}"),
            name: format!("{object} step {k}"),
            object: object.to_string(),
            source: sid(a),
            target: sid(b),
            initiator: None,
        })
        .collect();
    let mut finals: BTreeSet<String> = (0..n)
        .filter(|&i| !pairs.iter().any(|&(a, _)| a == i))
        .map(sid)
        .collect();
    for i in 0..n {
        if r.random_bool(0.2) {
            finals.insert(sid(i));
        }
    }
    if finals.is_empty() {
        finals.insert(sid(n - 1));
    }
    ObjectLifeCycle {
        object: object.to_string(),
        states: (0..n).map(|i| State::new(sid(i), format!("s{i}"))).collect(),
        initial: sid(0),
        finals,
        transitions,
    }
}

/// Random sync groups pairing transitions of distinct objects.
pub fn random_sync(r: &mut StdRng, olcs: &[ObjectLifeCycle]) -> SyncSpec {
    let mut used = BTreeSet::new();
    let mut groups = Vec::new();
    for _ in 0..r.random_range(0..=2) {
        if olcs.len() < 2 {
            break;
        }
        let i = r.random_range(0..olcs.len());
        let mut j = r.random_range(0..olcs.len());
        if i == j {
            j = (j + 1) % olcs.len();
        }
        let (Some(a), Some(b)) = (olcs[i].transitions.choose(r), olcs[j].transitions.choose(r)) else {
            continue;
        };
        if used.contains(&a.id) || used.contains(&b.id) {
            continue;
        }
        used.insert(a.id.clone());
        used.insert(b.id.clone());
        groups.push(vec![a.id.clone(), b.id.clone()]);
    }
    SyncSpec { groups }
}

/// Reachable product by brute force: materialize every tuple of the
/// cartesian product with all enabled moves, then keep what is reachable.
pub fn product_oracle(
    olcs: &[ObjectLifeCycle],
    sync: &SyncSpec,
) -> (BTreeSet<Vec<String>>, BTreeSet<(Vec<String>, Vec<String>, Vec<String>)>) {
    let mut tuples: Vec<Vec<String>> = vec![Vec::new()];
    for c in olcs {
        tuples = tuples
            .into_iter()
            .flat_map(|t| {
                c.states.iter().map(move |s| {
                    let mut t = t.clone();
                    t.push(s.id.clone());
                    t
                })
            })
            .collect();
    }
    let grouped: BTreeSet<&str> = sync.groups.iter().flatten().map(String::as_str).collect();
    let mut moves: Vec<Vec<&OlcTransition>> = Vec::new();
    for c in olcs {
        for t in &c.transitions {
            if !grouped.contains(t.id.as_str()) {
                moves.push(vec![t]);
            }
        }
    }
    for g in &sync.groups {
        moves.push(
            g.iter()
                .map(|id| olcs.iter().find_map(|c| c.transition(id)).expect("group member exists"))
                .collect(),
        );
    }
    let index = |object: &str| olcs.iter().position(|c| c.object == object).unwrap();
    let mut edges = BTreeSet::new();
    for t in &tuples {
        for m in &moves {
            if m.iter().all(|x| t[index(&x.object)] == x.source) {
                let mut next = t.clone();
                for x in m {
                    next[index(&x.object)] = x.target.clone();
                }
                let ids: Vec<String> = m.iter().map(|x| x.id.clone()).collect();
                edges.insert((t.clone(), ids, next));
            }
        }
    }
    let init: Vec<String> = olcs.iter().map(|c| c.initial.clone()).collect();
    let mut reach = BTreeSet::from([init]);
    loop {
        let before = reach.len();
        for (s, _, t) in &edges {
            if reach.contains(s) {
                reach.insert(t.clone());
            }
        }
        if reach.len() == before {
            break;
        }
    }
    let edges = edges.into_iter().filter(|(s, _, _)| reach.contains(s)).collect();
    (reach, edges)
}

// ---------------------------------------------------------------- models

/// Block-structured process fragment.
#[derive(Debug, Clone)]
pub enum Block {
    Task(Vec<Effect>),
    Seq(Vec<Block>),
    /// Branches; `true` marks a branch that ends in its own end event.
    Xor(Vec<(Block, bool)>),
    And(Vec<Block>),
}

impl Block {
    pub fn node_count(&self) -> usize {
        match self {
            Block::Task(_) => 1,
            Block::Seq(bs) => bs.iter().map(Block::node_count).sum(),
            Block::Xor(bs) => {
                let continuing = bs.iter().filter(|(_, end)| !end).count();
                let ends = bs.len() - continuing;
                bs.iter().map(|(b, _)| b.node_count()).sum::<usize>() + 1 + ends + usize::from(continuing > 1)
            }
            Block::And(bs) => bs.iter().map(Block::node_count).sum::<usize>() + 2,
        }
    }
}

#[derive(Debug, Clone)]
pub struct ModelShape {
    pub max_nodes: usize,
    pub parallel: bool,
    pub boundary: bool,
    /// Probability that a generated label contains XML-hostile characters.
    pub nasty_labels: f64,
}

impl Default for ModelShape {
    fn default() -> Self {
        ModelShape {
            max_nodes: 8,
            parallel: true,
            boundary: false,
            nasty_labels: 0.0,
        }
    }
}

fn random_effects(r: &mut StdRng, pool: &[Effect]) -> Vec<Effect> {
    if pool.is_empty() {
        return Vec::new();
    }
    let k = *[0usize, 1, 1, 1, 2].choose(r).unwrap();
    (0..k).map(|_| pool.choose(r).unwrap().clone()).collect()
}

fn random_block(r: &mut StdRng, pool: &[Effect], shape: &ModelShape, depth: usize) -> Block {
    let roll = r.random_range(0..10);
    if depth >= 3 || roll < 4 {
        return Block::Task(random_effects(r, pool));
    }
    let arity = r.random_range(2..=3);
    match roll {
        4..=6 => Block::Seq((0..arity).map(|_| random_block(r, pool, shape, depth + 1)).collect()),
        7 | 8 => {
            let mut branches: Vec<(Block, bool)> = (0..arity)
                .map(|_| (random_block(r, pool, shape, depth + 1), r.random_bool(0.3)))
                .collect();
            branches[0].1 = false;
            Block::Xor(branches)
        }
        _ if shape.parallel => Block::And((0..arity).map(|_| random_block(r, pool, shape, depth + 1)).collect()),
        _ => Block::Task(random_effects(r, pool)),
    }
}

/// Random block-structured model (start, block, end) within the node budget.
pub fn random_model(r: &mut StdRng, pool: &[Effect], shape: &ModelShape) -> ProcessModel {
    loop {
        let block = random_block(r, pool, shape, 0);
        let boundary = shape.boundary && r.random_bool(0.5);
        let extra = 2 + if boundary { 3 } else { 0 };
        if block.node_count() + extra > shape.max_nodes {
            continue;
        }
        let mut b = Builder::new(r.random(), shape.nasty_labels);
        b.build(block, boundary, r)
            .expect("generated models are valid by construction");
        return b.finish(r);
    }
}

struct Builder {
    nodes: Vec<Node>,
    edges: Vec<SequenceFlow>,
    next: usize,
    salt: u64,
    nasty: f64,
}

const NASTY: [&str; 6] = ["a & b", "<tag>", "say \"hi\"", "it's", "x > y", "caf\u{e9} \u{2713}"];

impl Builder {
    fn new(salt: u64, nasty: f64) -> Self {
        Builder {
            nodes: Vec::new(),
            edges: Vec::new(),
            next: 0,
            salt,
            nasty,
        }
    }

    fn id(&mut self, prefix: &str) -> String {
        self.next += 1;
        format!("{prefix}{}", self.next)
    }

    fn label(&self, r: &mut StdRng, base: &str) -> String {
        if self.nasty > 0.0 && r.random_bool(self.nasty) {
            NASTY.choose(r).unwrap().to_string()
        } else if r.random_bool(0.2) {
            String::new()
        } else {
            format!("{base} {}", self.salt % 97)
        }
    }

    fn link(&mut self, from: &str, to: &str, guard: Option<String>) {
        let id = self.id("e");
        let mut f = SequenceFlow::new(id, from, to);
        f.guard = guard;
        self.edges.push(f);
    }

    /// Emits `block` after `pred` and returns its exit node, if it continues.
    fn emit(&mut self, block: Block, pred: &str, guard: Option<String>, r: &mut StdRng) -> String {
        match block {
            Block::Task(effects) => {
                let id = self.id("t");
                let label = self.label(r, "task");
                self.nodes.push(Node::task(&id, label, effects));
                self.link(pred, &id, guard);
                id
            }
            Block::Seq(bs) => {
                let mut at = pred.to_string();
                let mut g = guard;
                for b in bs {
                    at = self.emit(b, &at, g.take(), r);
                }
                at
            }
            Block::Xor(bs) => {
                let split = self.id("x");
                self.nodes.push(Node::xor(&split, self.label(r, "choice"), GatewayDirection::Split));
                self.link(pred, &split, guard);
                let mut exits = Vec::new();
                for (k, (b, ends)) in bs.into_iter().enumerate() {
                    let g = if r.random_bool(0.1) { format!("guard {k} & more") } else { format!("g{k}") };
                    let exit = self.emit(b, &split, Some(g), r);
                    if ends {
                        let end = self.id("end");
                        self.nodes.push(Node::end(&end, ""));
                        self.link(&exit, &end, None);
                    } else {
                        exits.push(exit);
                    }
                }
                if exits.len() == 1 {
                    return exits.pop().unwrap();
                }
                let join = self.id("x");
                self.nodes.push(Node::xor(&join, "", GatewayDirection::Join));
                for e in exits {
                    self.link(&e, &join, None);
                }
                join
            }
            Block::And(bs) => {
                let split = self.id("p");
                self.nodes.push(Node::and(&split, "", GatewayDirection::Split));
                self.link(pred, &split, guard);
                let exits: Vec<String> = bs.into_iter().map(|b| self.emit(b, &split, None, r)).collect();
                let join = self.id("p");
                self.nodes.push(Node::and(&join, "", GatewayDirection::Join));
                for e in exits {
                    self.link(&e, &join, None);
                }
                join
            }
        }
    }

    fn build(&mut self, block: Block, boundary: bool, r: &mut StdRng) -> Result<(), ()> {
        self.nodes.push(Node::start("start", self.label(r, "start")));
        let exit = self.emit(block, "start", None, r);
        let end = self.id("end");
        self.nodes.push(Node::end(&end, self.label(r, "done")));
        self.link(&exit, &end, None);
        if boundary {
            let tasks: Vec<String> = self.nodes.iter().filter(|n| n.is_task()).map(|n| n.id.clone()).collect();
            let host = tasks.choose(r).ok_or(())?.clone();
            let trigger = *[Trigger::Message, Trigger::Error, Trigger::Timer].choose(r).unwrap();
            let be = self.id("b");
            self.nodes.push(Node::boundary(&be, self.label(r, "oops"), trigger, host));
            let handler = self.id("t");
            self.nodes.push(Node::task(&handler, "handle", vec![]));
            let end = self.id("end");
            self.nodes.push(Node::end(&end, "handled"));
            self.link(&be, &handler, None);
            self.link(&handler, &end, None);
        }
        Ok(())
    }

    fn finish(self, r: &mut StdRng) -> ProcessModel {
        let mut nodes = self.nodes;
        let mut edges = self.edges;
        // declaration order must not matter
        let len = nodes.len();
        nodes.rotate_left(r.random_range(0..len.max(1)));
        edges.reverse();
        ProcessModel::new(format!("m{}", self.salt % 1000), nodes, edges).expect("valid by construction")
    }
}

/// Effects of `olc` plus a few that no OLC defines.
pub fn effect_pool(r: &mut StdRng, olc: &ObjectLifeCycle, noise: usize) -> Vec<Effect> {
    let mut pool: Vec<Effect> = olc.transitions.iter().map(OlcTransition::effect).collect();
    let states: Vec<&str> = olc.states.iter().map(|s| s.id.as_str()).collect();
    for _ in 0..noise {
        let (a, b) = (*states.choose(r).unwrap(), *states.choose(r).unwrap());
        if a != b {
            pool.push(Effect::new(&olc.object, a, b));
        }
        if r.random_bool(0.2) {
            pool.push(Effect::new("GHOST", "G_0", "G_1"));
        }
    }
    pool
}

// ---------------------------------------------------------------- traces

type Marking = BTreeMap<String, u32>;

/// Every complete run of the token game, exploring every interleaving of
/// every enabled node (silent ones included). Terminates on acyclic models.
pub fn oracle_traces(pm: &ProcessModel) -> BTreeSet<Vec<String>> {
    let start = pm
        .nodes()
        .find(|n| n.kind == NodeKind::StartEvent)
        .expect("model has a start event");
    let mut m = Marking::new();
    for e in pm.outgoing(&start.id) {
        *m.entry(e.id.clone()).or_default() += 1;
    }
    let mut out = BTreeSet::new();
    let mut seen = BTreeSet::new();
    play(pm, m, Vec::new(), &mut out, &mut seen);
    out
}

fn play(
    pm: &ProcessModel,
    m: Marking,
    trace: Vec<String>,
    out: &mut BTreeSet<Vec<String>>,
    seen: &mut BTreeSet<(Marking, Vec<String>)>,
) {
    if !seen.insert((m.clone(), trace.clone())) {
        return;
    }
    if m.is_empty() {
        out.insert(trace);
        return;
    }
    let take = |m: &Marking, e: &str| {
        let mut m = m.clone();
        let c = m.get_mut(e).unwrap();
        *c -= 1;
        if *c == 0 {
            m.remove(e);
        }
        m
    };
    let give = |mut m: Marking, es: &[&str]| {
        for e in es {
            *m.entry(e.to_string()).or_default() += 1;
        }
        m
    };
    for n in pm.nodes() {
        let inputs: Vec<&str> = pm.incoming(&n.id).map(|e| e.id.as_str()).collect();
        let outputs: Vec<&str> = pm.outgoing(&n.id).map(|e| e.id.as_str()).collect();
        let marked: Vec<&str> = inputs.iter().copied().filter(|e| m.contains_key(*e)).collect();
        match &n.kind {
            NodeKind::StartEvent | NodeKind::BoundaryEvent { .. } => {}
            NodeKind::EndEvent => {
                for e in &marked {
                    play(pm, take(&m, e), trace.clone(), out, seen);
                }
            }
            NodeKind::ExclusiveGateway { .. } => {
                for e in &marked {
                    for o in &outputs {
                        play(pm, give(take(&m, e), &[o]), trace.clone(), out, seen);
                    }
                }
            }
            NodeKind::ParallelGateway { .. } => {
                if !inputs.is_empty() && marked.len() == inputs.len() {
                    let mut next = m.clone();
                    for e in &inputs {
                        next = take(&next, e);
                    }
                    play(pm, give(next, &outputs), trace.clone(), out, seen);
                }
            }
            NodeKind::Task { .. } => {
                for e in &marked {
                    let mut t = trace.clone();
                    t.push(n.id.clone());
                    play(pm, give(take(&m, e), &outputs), t, out, seen);
                    for b in pm.boundary_events().filter(|b| matches!(&b.kind, NodeKind::BoundaryEvent { host, .. } if *host == n.id)) {
                        let b_out: Vec<&str> = pm.outgoing(&b.id).map(|x| x.id.as_str()).collect();
                        let mut t = trace.clone();
                        t.push(b.id.clone());
                        play(pm, give(take(&m, e), &b_out), t, out, seen);
                    }
                }
            }
        }
    }
}

// ---------------------------------------------------------------- compliance

/// Effect sequences of OLC paths, per component object.
fn valid_sequences(olc: &CompositeOlc, max_len: usize) -> BTreeMap<String, BTreeSet<Vec<Effect>>> {
    olc.components
        .iter()
        .map(|c| {
            let single = CompositeOlc::from(c.clone());
            let seqs = olc_paths(&single, max_len)
                .into_iter()
                .map(|p| p.transitions.iter().map(|id| c.transition(id).unwrap().effect()).collect())
                .collect();
            (c.object.clone(), seqs)
        })
        .collect()
}

#[derive(Debug, Default, PartialEq, Eq)]
pub struct OracleConformance {
    pub undefined: BTreeSet<(String, Effect)>,
    pub misordered: BTreeSet<(String, Effect)>,
}

/// Conformance by enumerating every trace and checking each object's
/// effect sequence against the OLC paths.
pub fn oracle_conformance(pm: &ProcessModel, olc: &CompositeOlc) -> OracleConformance {
    let mut result = OracleConformance::default();
    for t in pm.tasks() {
        for e in t.effects() {
            if !olc.defines(e) {
                result.undefined.insert((t.id.clone(), e.clone()));
            }
        }
    }
    let traces = oracle_traces(pm);
    let longest = traces
        .iter()
        .map(|t| t.iter().map(|s| pm.node(s).unwrap().effects().len()).sum::<usize>())
        .max()
        .unwrap_or(0);
    let valid = valid_sequences(olc, longest);
    for trace in &traces {
        let mut prefix: BTreeMap<&str, Vec<Effect>> = BTreeMap::new();
        let mut broken: BTreeSet<&str> = BTreeSet::new();
        for step in trace {
            let node = pm.node(step).unwrap();
            for e in node.effects() {
                let Some(seqs) = valid.get(&e.object) else { continue };
                if broken.contains(e.object.as_str()) {
                    continue;
                }
                let p = prefix.entry(&e.object).or_default();
                let mut longer = p.clone();
                longer.push(Effect::new(&e.object, &e.from, &e.to));
                if seqs.contains(&longer) {
                    *p = longer;
                    continue;
                }
                broken.insert(&e.object);
                if olc.defines(e) {
                    result.misordered.insert((step.clone(), e.clone()));
                }
            }
        }
    }
    result
}

#[derive(Debug, Default, PartialEq, Eq)]
pub struct OracleCoverage {
    pub uncovered_transitions: BTreeSet<(String, String)>,
    pub uncovered_states: BTreeSet<(String, String)>,
}

/// Coverage as the union over all traces of the effects tasks induce.
pub fn oracle_coverage(pm: &ProcessModel, olc: &CompositeOlc) -> OracleCoverage {
    let fired: BTreeSet<Effect> = oracle_traces(pm)
        .iter()
        .flatten()
        .flat_map(|s| pm.node(s).unwrap().effects().iter().cloned())
        .collect();
    let mut out = OracleCoverage::default();
    for c in &olc.components {
        let mut visited = BTreeSet::new();
        for t in &c.transitions {
            if fired.iter().any(|e| e.object == t.object && e.from == t.source && e.to == t.target) {
                visited.insert(t.source.clone());
                visited.insert(t.target.clone());
            } else {
                out.uncovered_transitions.insert((c.object.clone(), t.id.clone()));
            }
        }
        for s in &c.states {
            if !visited.contains(&s.id) {
                out.uncovered_states.insert((c.object.clone(), s.id.clone()));
            }
        }
    }
    out
}

// ---------------------------------------------------------------- consistency cases

/// A single-object OLC, a compliant base model and a diagram with one break
/// fragment placed on one of the model's runs.
pub struct Case {
    pub olc: ObjectLifeCycle,
    pub base: ProcessModel,
    pub sd: SequenceDiagram,
    pub initiator: Initiator,
}

/// Builds a base model as a prefix tree of OLC paths: shared prefixes are
/// shared tasks, branching points are XOR splits, every leaf gets an end.
pub fn compliant_case(r: &mut StdRng, max_states: usize, max_nodes: usize) -> Option<Case> {
    let olc = random_olc(r, "X", max_states, true);
    let mut paths: Vec<Vec<&OlcTransition>> = Vec::new();
    let mut stack: Vec<(String, Vec<&OlcTransition>)> = vec![(olc.initial.clone(), Vec::new())];
    while let Some((s, p)) = stack.pop() {
        let out: Vec<&OlcTransition> = olc.transitions.iter().filter(|t| t.source == s).collect();
        if olc.finals.contains(&s) && (out.is_empty() || r.random_bool(0.3)) {
            paths.push(p.clone());
        }
        for t in out {
            let mut q = p.clone();
            q.push(t);
            stack.push((t.target.clone(), q));
        }
        if paths.len() > 12 {
            return None;
        }
    }
    paths.retain(|p| !p.is_empty());
    paths.sort_by_key(|p| p.iter().map(|t| t.id.clone()).collect::<Vec<_>>());
    paths.dedup();
    if paths.is_empty() {
        return None;
    }

    // trie over transition ids
    #[derive(Default)]
    struct Trie<'a> {
        kids: BTreeMap<String, (&'a OlcTransition, Trie<'a>)>,
        leaf: bool,
    }
    let mut root = Trie::default();
    for p in &paths {
        let mut at = &mut root;
        for t in p {
            at = &mut at.kids.entry(t.id.clone()).or_insert_with(|| (*t, Trie::default())).1;
        }
        at.leaf = true;
    }

    let mut b = Builder::new(r.random(), 0.0);
    b.nodes.push(Node::start("start", "start"));
    fn grow(b: &mut Builder, r: &mut StdRng, node: &Trie, pred: &str, guard: Option<String>) {
        let branches = node.kids.len() + usize::from(node.leaf);
        let (from, mut guards): (String, Vec<Option<String>>) = if branches > 1 {
            let x = b.id("x");
            b.nodes.push(Node::xor(&x, "which way?", GatewayDirection::Split));
            b.link(pred, &x, guard);
            (x, (0..branches).map(|k| Some(format!("g{k}"))).collect())
        } else {
            (pred.to_string(), vec![guard])
        };
        if node.leaf {
            let end = b.id("end");
            b.nodes.push(Node::end(&end, ""));
            b.link(&from, &end, guards.remove(0));
        }
        for (t, child) in node.kids.values() {
            let mut at = from.clone();
            let mut g = guards.remove(0);
            if r.random_bool(0.15) {
                let idle = b.id("t");
                b.nodes.push(Node::task(&idle, "paperwork", vec![]));
                b.link(&at, &idle, g.take());
                at = idle;
            }
            let id = b.id("t");
            b.nodes.push(Node::task(&id, &t.name, vec![t.effect()]));
            b.link(&at, &id, g);
            grow(b, r, child, &id, None);
        }
    }
    grow(&mut b, r, &root, "start", None);
    if b.nodes.len() > max_nodes {
        return None;
    }
    let base = b.finish(r);

    // diagram along one path, fragment right before step j
    let path = paths.choose(r).unwrap();
    let j = r.random_range(0..path.len());
    let initiator = *Initiator::ALL.choose(r).unwrap();
    let mut messages: Vec<Message> = path
        .iter()
        .enumerate()
        .map(|(k, t)| Message {
            id: format!("m{k}"),
            name: t.name.clone(),
            from: "A".into(),
            to: "B".into(),
            effect: Some(t.effect().into()),
            self_message: false,
        })
        .collect();
    let steps = r.random_range(1..=2);
    let mut fragment = Vec::new();
    for k in 0..steps {
        let id = format!("exc{k}");
        let to = if k + 1 == steps && r.random_bool(0.3) { Some("X_failed".to_string()) } else { None };
        fragment.push(Message {
            id: id.clone(),
            name: format!("Handle {k}"),
            from: "B".into(),
            to: "A".into(),
            effect: Some(MessageEffect {
                object: "X".into(),
                from: None,
                to,
            }),
            self_message: false,
        });
    }
    let ids: Vec<String> = fragment.iter().map(|m| m.id.clone()).collect();
    messages.splice(j..j, fragment);
    if r.random_bool(0.3) {
        let at = r.random_range(0..=messages.len());
        messages.insert(
            at,
            Message {
                id: "ack".into(),
                name: "ack".into(),
                from: "A".into(),
                to: "B".into(),
                effect: None,
                self_message: false,
            },
        );
    }
    let sd = SequenceDiagram {
        id: "sd".into(),
        lifelines: vec!["A".into(), "B".into()],
        messages,
        fragments: vec![BreakCombinedFragment {
            id: "exc".into(),
            kind: FragmentKind::Break,
            initiator,
            messages: ids,
            guard: Some("something went wrong".into()),
        }],
    };
    Some(Case { olc, base, sd, initiator })
}

pub fn tuple(ids: &[&str]) -> CompositeState {
    CompositeState(ids.iter().map(|s| s.to_string()).collect())
}
