//! Navigation cost: keyboard + screen reader versus three-wheel H-nav.
//!
//! The keyboard model is a directed graph over the tree plus its root:
//! a forward edge (cost alpha) from each parent to its *first* child, cross
//! edges (gamma) between adjacent siblings, a backward edge (beta) from each
//! node to its parent, and an escape edge (beta) from every node to the root.
//!
//! The wheel model searches over [`HnavState`]s: each one-sibling rotation is
//! a cross edge (gamma), the automatic re-seating of lower wheels is a set of
//! zero-cost teleport edges, and moving the three-level window costs
//! `level_shift_cost`.
//!
//! Minimum costs are reported as integer edge counts so symbolic totals such
//! as `3α + 1β + 2γ` can be printed for any parameter choice.

use std::cmp::Ordering;
use std::collections::{BinaryHeap, HashMap, VecDeque};
use std::fmt;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::hnav::{HnavEngine, HnavState, WHEELS};
use crate::model::UiTree;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum CostError {
    #[error("unknown node id {0:?}")]
    UnknownNode(String),
    #[error("{0:?} cannot be reached from the start state")]
    Unreachable(String),
    #[error("invalid cost parameters: {0}")]
    Params(String),
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct CostParams {
    pub alpha: f64,
    pub beta: f64,
    pub gamma: f64,
    /// Price of moving the wheel window one level; defaults to gamma.
    pub level_shift_cost: f64,
}

impl CostParams {
    pub fn new(alpha: f64, beta: f64, gamma: f64) -> Result<Self, CostError> {
        Self::with_level_shift(alpha, beta, gamma, gamma)
    }

    pub fn with_level_shift(alpha: f64, beta: f64, gamma: f64, level_shift_cost: f64) -> Result<Self, CostError> {
        let p = CostParams {
            alpha,
            beta,
            gamma,
            level_shift_cost,
        };
        p.validate()?;
        Ok(p)
    }

    pub fn validate(&self) -> Result<(), CostError> {
        let all = [self.alpha, self.beta, self.gamma, self.level_shift_cost];
        if all.iter().any(|c| !c.is_finite() || *c < 0.0) {
            return Err(CostError::Params("costs must be finite and nonnegative".into()));
        }
        if all.iter().all(|&c| c == 0.0) {
            return Err(CostError::Params("costs cannot all be zero".into()));
        }
        Ok(())
    }

    pub fn unit() -> Self {
        CostParams {
            alpha: 1.0,
            beta: 1.0,
            gamma: 1.0,
            level_shift_cost: 1.0,
        }
    }

    pub fn cost_of(&self, kind: EdgeKind) -> f64 {
        match kind {
            EdgeKind::Forward => self.alpha,
            EdgeKind::Backward => self.beta,
            EdgeKind::Cross => self.gamma,
            EdgeKind::Teleport => 0.0,
            EdgeKind::LevelShift => self.level_shift_cost,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum EdgeKind {
    Forward,
    Backward,
    Cross,
    Teleport,
    LevelShift,
}

#[derive(Debug, Clone, Copy, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct EdgeCounts {
    pub forward: usize,
    pub backward: usize,
    pub cross: usize,
    pub teleport: usize,
    pub level_shift: usize,
}

impl EdgeCounts {
    pub fn add(&mut self, kind: EdgeKind, n: usize) {
        match kind {
            EdgeKind::Forward => self.forward += n,
            EdgeKind::Backward => self.backward += n,
            EdgeKind::Cross => self.cross += n,
            EdgeKind::Teleport => self.teleport += n,
            EdgeKind::LevelShift => self.level_shift += n,
        }
    }

    pub fn get(&self, kind: EdgeKind) -> usize {
        match kind {
            EdgeKind::Forward => self.forward,
            EdgeKind::Backward => self.backward,
            EdgeKind::Cross => self.cross,
            EdgeKind::Teleport => self.teleport,
            EdgeKind::LevelShift => self.level_shift,
        }
    }

    /// Weighted sum of the counts.
    pub fn total(&self, params: &CostParams) -> f64 {
        self.forward as f64 * params.alpha
            + self.backward as f64 * params.beta
            + self.cross as f64 * params.gamma
            + self.level_shift as f64 * params.level_shift_cost
    }

    /// Symbolic cost such as `3α + 1β + 2γ`; zero-cost teleports are left out.
    pub fn symbolic(&self) -> String {
        let terms: Vec<String> = [
            (self.forward, "α"),
            (self.backward, "β"),
            (self.cross, "γ"),
            (self.level_shift, "λ"),
        ]
        .iter()
        .filter(|(n, _)| *n > 0)
        .map(|(n, sym)| format!("{n}{sym}"))
        .collect();
        if terms.is_empty() {
            "0".to_string()
        } else {
            terms.join(" + ")
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct PathStep {
    pub kind: EdgeKind,
    pub from: String,
    pub to: String,
    /// Wheel that moved (cross) or was re-seated (teleport).
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub wheel: Option<u8>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CostReport {
    pub source: String,
    pub target: String,
    pub total: f64,
    pub counts: EdgeCounts,
    /// Focused node after each step, starting at the source.
    pub path: Vec<String>,
    pub steps: Vec<PathStep>,
}

impl CostReport {
    fn from_steps(source: &str, target: &str, steps: Vec<PathStep>, params: &CostParams) -> Self {
        let mut counts = EdgeCounts::default();
        let mut path = vec![source.to_string()];
        for s in &steps {
            counts.add(s.kind, 1);
            if s.kind != EdgeKind::Teleport {
                path.push(s.to.clone());
            }
        }
        Self {
            source: source.to_string(),
            target: target.to_string(),
            total: counts.total(params),
            counts,
            path,
            steps,
        }
    }

    pub fn symbolic(&self) -> String {
        self.counts.symbolic()
    }
}

impl fmt::Display for CostReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{} = {}", self.symbolic(), self.total)
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct GraphEdge {
    pub to: usize,
    pub kind: EdgeKind,
    /// Escape-to-root backward edge rather than child-to-parent.
    pub escape: bool,
    pub cost: f64,
}

/// Keyboard navigation graph. Vertex indices match the tree arena, with the
/// root at index 0.
#[derive(Debug, Clone)]
pub struct KeyboardGraph {
    ids: Vec<String>,
    out: Vec<Vec<GraphEdge>>,
}

impl KeyboardGraph {
    pub fn vertex_count(&self) -> usize {
        self.ids.len()
    }

    pub fn id(&self, v: usize) -> &str {
        &self.ids[v]
    }

    pub fn edges_from(&self, v: usize) -> &[GraphEdge] {
        &self.out[v]
    }

    pub fn edges(&self) -> impl Iterator<Item = (usize, &GraphEdge)> {
        self.out
            .iter()
            .enumerate()
            .flat_map(|(v, es)| es.iter().map(move |e| (v, e)))
    }

    /// Drops escape edges, leaving plain child-to-parent moves.
    pub fn without_escape(mut self) -> Self {
        for es in &mut self.out {
            es.retain(|e| !e.escape);
        }
        self
    }
}

pub fn build_keyboard_graph(tree: &UiTree, params: &CostParams) -> KeyboardGraph {
    let nodes = tree.nodes();
    let root = tree.root_index();
    let mut out: Vec<Vec<GraphEdge>> = vec![Vec::new(); nodes.len()];
    let edge = |to, kind, escape| GraphEdge {
        to,
        kind,
        escape,
        cost: params.cost_of(kind),
    };
    for (v, node) in nodes.iter().enumerate() {
        let kids = node.children();
        if let Some(&first) = kids.first() {
            out[v].push(edge(first, EdgeKind::Forward, false));
        }
        for pair in kids.windows(2) {
            out[pair[0]].push(edge(pair[1], EdgeKind::Cross, false));
            out[pair[1]].push(edge(pair[0], EdgeKind::Cross, false));
        }
        if let Some(parent) = node.parent() {
            out[v].push(edge(parent, EdgeKind::Backward, false));
            out[v].push(edge(root, EdgeKind::Backward, true));
        }
    }
    KeyboardGraph {
        ids: nodes.iter().map(|n| n.id().to_string()).collect(),
        out,
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
struct Queued<T> {
    cost: f64,
    tie: u64,
    item: T,
}

impl<T: PartialEq> Eq for Queued<T> {}

impl<T: PartialEq> Ord for Queued<T> {
    fn cmp(&self, other: &Self) -> Ordering {
        // Min-heap on (cost, tie).
        other
            .cost
            .total_cmp(&self.cost)
            .then_with(|| other.tie.cmp(&self.tie))
    }
}

impl<T: PartialEq> PartialOrd for Queued<T> {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

fn tight(edge_cost: f64, dist_from: f64, dist_to: f64) -> bool {
    let slack = edge_cost + dist_to - dist_from;
    slack.abs() <= 1e-9 * dist_from.abs().max(1.0)
}

/// Cheapest keyboard path. Among equal-cost paths the one with the fewest
/// edges wins, then the lexicographically smallest node-id sequence.
pub fn keyboard_min_cost(tree: &UiTree, src: &str, dst: &str, params: &CostParams) -> Result<CostReport, CostError> {
    params.validate()?;
    let graph = build_keyboard_graph(tree, params);
    keyboard_min_cost_on(&graph, tree, src, dst, params)
}

/// Same as [`keyboard_min_cost`] over a prebuilt (possibly pruned) graph.
pub fn keyboard_min_cost_on(
    graph: &KeyboardGraph,
    tree: &UiTree,
    src: &str,
    dst: &str,
    params: &CostParams,
) -> Result<CostReport, CostError> {
    let s = tree
        .index_of(src)
        .ok_or_else(|| CostError::UnknownNode(src.to_string()))?;
    let t = tree
        .index_of(dst)
        .filter(|&t| t != tree.root_index())
        .ok_or_else(|| CostError::UnknownNode(dst.to_string()))?;
    let n = graph.vertex_count();

    let mut reverse: Vec<Vec<(usize, f64)>> = vec![Vec::new(); n];
    for (v, e) in graph.edges() {
        reverse[e.to].push((v, e.cost));
    }

    // Distance to the target over reversed edges.
    let mut dist = vec![f64::INFINITY; n];
    let mut heap = BinaryHeap::new();
    dist[t] = 0.0;
    heap.push(Queued {
        cost: 0.0,
        tie: t as u64,
        item: t,
    });
    while let Some(Queued { cost, item: v, .. }) = heap.pop() {
        if cost > dist[v] {
            continue;
        }
        for &(u, w) in &reverse[v] {
            let c = cost + w;
            if c < dist[u] {
                dist[u] = c;
                heap.push(Queued {
                    cost: c,
                    tie: u as u64,
                    item: u,
                });
            }
        }
    }
    if !dist[s].is_finite() {
        return Err(CostError::Unreachable(dst.to_string()));
    }

    // Fewest edges to the target using only cost-optimal edges.
    let mut hops = vec![usize::MAX; n];
    hops[t] = 0;
    let mut queue = VecDeque::from([t]);
    while let Some(v) = queue.pop_front() {
        for &(u, w) in &reverse[v] {
            if hops[u] == usize::MAX && dist[u].is_finite() && tight(w, dist[u], dist[v]) {
                hops[u] = hops[v] + 1;
                queue.push_back(u);
            }
        }
    }

    let mut steps = Vec::new();
    let mut v = s;
    while v != t {
        let next = graph
            .edges_from(v)
            .iter()
            .filter(|e| hops[e.to] != usize::MAX && hops[e.to] + 1 == hops[v] && tight(e.cost, dist[v], dist[e.to]))
            .min_by(|a, b| {
                graph
                    .id(a.to)
                    .cmp(graph.id(b.to))
                    .then(a.kind.cmp(&b.kind))
                    .then(a.escape.cmp(&b.escape))
            })
            .expect("hop labels guarantee a successor");
        steps.push(PathStep {
            kind: next.kind,
            from: graph.id(v).to_string(),
            to: graph.id(next.to).to_string(),
            wheel: None,
        });
        v = next.to;
    }
    Ok(CostReport::from_steps(src, dst, steps, params))
}

/// Cheapest wheel-event sequence that puts some wheel's cursor on `dst`.
pub fn wheeler_min_cost(
    tree: &UiTree,
    start: &HnavState,
    dst: &str,
    params: &CostParams,
) -> Result<CostReport, CostError> {
    params.validate()?;
    if !tree.contains(dst) {
        return Err(CostError::UnknownNode(dst.to_string()));
    }
    let engine = HnavEngine::new(tree, false);
    let source = start.focus().unwrap_or_default().to_string();

    let mut best: HashMap<HnavState, (f64, usize)> = HashMap::new();
    let mut came_from: HashMap<HnavState, (HnavState, Vec<PathStep>)> = HashMap::new();
    let mut heap = BinaryHeap::new();
    let mut tie = 0u64;
    best.insert(start.clone(), (0.0, 0));
    heap.push(Queued {
        cost: 0.0,
        tie,
        item: (start.clone(), 0usize),
    });

    let mut goal = None;
    while let Some(Queued {
        cost,
        item: (state, depth),
        ..
    }) = heap.pop()
    {
        if best.get(&state).is_some_and(|&(c, d)| (c, d) < (cost, depth)) {
            continue;
        }
        if state.holds(dst) {
            goal = Some(state);
            break;
        }
        for (next, steps) in wheel_moves(&engine, &state) {
            let c = cost
                + steps
                    .iter()
                    .map(|s| params.cost_of(s.kind))
                    .sum::<f64>();
            let d = depth + 1;
            let improves = match best.get(&next) {
                None => true,
                Some(&(bc, bd)) => c < bc || (c == bc && d < bd),
            };
            if improves {
                best.insert(next.clone(), (c, d));
                came_from.insert(next.clone(), (state.clone(), steps));
                tie += 1;
                heap.push(Queued {
                    cost: c,
                    tie,
                    item: (next, d),
                });
            }
        }
    }

    let mut at = goal.ok_or_else(|| CostError::Unreachable(dst.to_string()))?;
    let mut chunks = Vec::new();
    while let Some((prev, steps)) = came_from.remove(&at) {
        chunks.push(steps);
        at = prev;
    }
    let steps: Vec<PathStep> = chunks.into_iter().rev().flatten().collect();
    Ok(CostReport::from_steps(&source, dst, steps, params))
}

/// Single-event successors of an H-nav state with the steps each costs.
fn wheel_moves(engine: &HnavEngine<'_>, state: &HnavState) -> Vec<(HnavState, Vec<PathStep>)> {
    let mut moves = Vec::new();
    for wheel in 1..=WHEELS as u8 {
        let Some(from) = state.cursor(wheel) else {
            continue;
        };
        for dir in [1, -1] {
            let (next, _) = engine.rotate(state, wheel, dir);
            if next == *state {
                continue;
            }
            let mut steps = vec![PathStep {
                kind: EdgeKind::Cross,
                from: from.to_string(),
                to: next.cursor(wheel).unwrap_or_default().to_string(),
                wheel: Some(wheel),
            }];
            for below in wheel + 1..=WHEELS as u8 {
                if let (Some(parent), Some(child)) = (next.cursor(below - 1), next.cursor(below)) {
                    steps.push(PathStep {
                        kind: EdgeKind::Teleport,
                        from: parent.to_string(),
                        to: child.to_string(),
                        wheel: Some(below),
                    });
                }
            }
            moves.push((next, steps));
        }
    }
    for down in [true, false] {
        let (next, _) = engine.shift_level(state, down);
        if next == *state {
            continue;
        }
        moves.push((
            next.clone(),
            vec![PathStep {
                kind: EdgeKind::LevelShift,
                from: state.focus().unwrap_or_default().to_string(),
                to: next.focus().unwrap_or_default().to_string(),
                wheel: None,
            }],
        ));
    }
    moves
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Comparison {
    pub keyboard: CostReport,
    pub wheeler: CostReport,
    /// keyboard / wheeler; infinite when only the wheel cost is zero and 1
    /// when both are.
    pub ratio: f64,
}

pub fn compare(
    tree: &UiTree,
    src_state: &HnavState,
    src_node: &str,
    dst: &str,
    params: &CostParams,
) -> Result<Comparison, CostError> {
    let keyboard = keyboard_min_cost(tree, src_node, dst, params)?;
    let wheeler = wheeler_min_cost(tree, src_state, dst, params)?;
    let ratio = match (keyboard.total, wheeler.total) {
        (k, w) if w == 0.0 && k == 0.0 => 1.0,
        (_, 0.0) => f64::INFINITY,
        (k, w) => k / w,
    };
    Ok(Comparison {
        keyboard,
        wheeler,
        ratio,
    })
}
