//! Brute-force oracles and random case generators shared by the integration
//! suites. The oracles rebuild parent/child tables from the tree's nested
//! form and never call into the engines they check.

#![allow(dead_code)]

use std::collections::{HashSet, VecDeque};

use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use wheeler_core::cost::{keyboard_min_cost, wheeler_min_cost, CostParams};
use wheeler_core::event::{InputEvent, InputKind, WheelTurn};
use wheeler_core::fixtures::{scene_from_centres, tree_from_parents};
use wheeler_core::flat::{Axis, FlatEngine, FlatState, Sign};
use wheeler_core::device::DeviceConfig;
use wheeler_core::hnav::{HnavEngine, HnavState};
use wheeler_core::model::{Scene, UiNode, UiTree};

pub fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

pub fn random_tree(rng: &mut impl Rng, max_nodes: usize, max_depth: usize) -> UiTree {
    let n = rng.gen_range(1..=max_nodes);
    let parents: Vec<usize> = (0..n).map(|_| rng.gen_range(0..1000)).collect();
    tree_from_parents(&parents, max_depth)
}

/// Plain parent/child tables; index 0 is the root.
#[derive(Debug, Clone)]
pub struct Shape {
    pub ids: Vec<String>,
    pub parent: Vec<usize>,
    pub children: Vec<Vec<usize>>,
    pub depth: Vec<usize>,
}

impl Shape {
    pub fn of(tree: &UiTree) -> Shape {
        let mut s = Shape {
            ids: vec!["ROOT".into()],
            parent: vec![0],
            children: vec![Vec::new()],
            depth: vec![0],
        };
        fn walk(s: &mut Shape, parent: usize, nodes: &[UiNode]) {
            for n in nodes {
                let v = s.ids.len();
                s.ids.push(n.id.clone());
                s.parent.push(parent);
                s.children.push(Vec::new());
                s.depth.push(s.depth[parent] + 1);
                s.children[parent].push(v);
                walk(s, v, &n.children);
            }
        }
        walk(&mut s, 0, &tree.to_nodes());
        s
    }

    pub fn index(&self, id: &str) -> usize {
        self.ids.iter().position(|i| i == id).expect("known id")
    }

    fn first(&self, v: usize) -> Option<usize> {
        self.children[v].first().copied()
    }

    fn siblings(&self, v: usize) -> &[usize] {
        &self.children[self.parent[v]]
    }
}

type Wheels = (usize, [Option<usize>; 3]);

fn oracle_moves(s: &Shape, (base, c): Wheels) -> Vec<Wheels> {
    let mut out = Vec::new();
    for k in 0..3 {
        let Some(v) = c[k] else { continue };
        let sibs = s.siblings(v);
        let pos = sibs.iter().position(|&x| x == v).unwrap();
        for next in [pos.checked_sub(1), Some(pos + 1).filter(|&p| p < sibs.len())]
            .into_iter()
            .flatten()
        {
            let mut n = c;
            n[k] = Some(sibs[next]);
            for j in k + 1..3 {
                n[j] = n[j - 1].and_then(|p| s.first(p));
            }
            out.push((base, n));
        }
    }
    if let Some(g) = c[2].and_then(|v| s.first(v)) {
        out.push((base + 1, [c[1], c[2], Some(g)]));
    }
    if let Some(c0) = c[0] {
        if base > 1 && s.parent[c0] != 0 {
            out.push((base - 1, [Some(s.parent[c0]), Some(c0), c[1]]));
        }
    }
    out
}

/// Fewest wheel events (rotation detents and level shifts) until some wheel
/// holds `dst`.
pub fn wheeler_bfs(tree: &UiTree, start: &HnavState, dst: &str) -> Option<usize> {
    let s = Shape::of(tree);
    let target = s.index(dst);
    let conv = |c: &Option<String>| c.as_deref().map(|id| s.index(id));
    let first: Wheels = (start.base_level, [conv(&start.cursors[0]), conv(&start.cursors[1]), conv(&start.cursors[2])]);
    let mut seen = HashSet::from([first]);
    let mut queue = VecDeque::from([(first, 0)]);
    while let Some((w, d)) = queue.pop_front() {
        if w.1.contains(&Some(target)) {
            return Some(d);
        }
        for n in oracle_moves(&s, w) {
            if seen.insert(n) {
                queue.push_back((n, d + 1));
            }
        }
    }
    None
}

fn keyboard_edges(s: &Shape, p: &CostParams) -> Vec<Vec<(usize, f64)>> {
    let n = s.ids.len();
    let mut out = vec![Vec::new(); n];
    for v in 0..n {
        if let Some(c) = s.first(v) {
            out[v].push((c, p.alpha));
        }
        if v != 0 {
            out[v].push((s.parent[v], p.beta));
            out[v].push((0, p.beta));
        }
        for pair in s.children[v].windows(2) {
            out[pair[0]].push((pair[1], p.gamma));
            out[pair[1]].push((pair[0], p.gamma));
        }
    }
    out
}

/// Cheapest keyboard path of at most `max_edges` edges, by enumerating every
/// simple path (cut off once it can no longer beat the best found).
pub fn keyboard_brute(tree: &UiTree, src: &str, dst: &str, p: &CostParams, max_edges: usize) -> Option<f64> {
    let s = Shape::of(tree);
    let edges = keyboard_edges(&s, p);
    let (from, to) = (s.index(src), s.index(dst));
    let mut best = f64::INFINITY;
    let mut on_path = vec![false; s.ids.len()];
    fn dfs(
        v: usize,
        to: usize,
        cost: f64,
        left: usize,
        edges: &[Vec<(usize, f64)>],
        on_path: &mut [bool],
        best: &mut f64,
    ) {
        if cost >= *best {
            return;
        }
        if v == to {
            *best = cost;
            return;
        }
        if left == 0 {
            return;
        }
        on_path[v] = true;
        for &(w, c) in &edges[v] {
            if !on_path[w] {
                dfs(w, to, cost + c, left - 1, edges, on_path, best);
            }
        }
        on_path[v] = false;
    }
    dfs(from, to, 0.0, max_edges, &edges, &mut on_path, &mut best);
    best.is_finite().then_some(best)
}

/// Closest element centre strictly ahead, by exhaustive scan with a total
/// order on (distance², offset, id).
pub fn teleport_brute(scene: &Scene, x: f64, y: f64, axis: Axis, sign: Sign) -> Option<String> {
    let f = if sign == Sign::Plus { 1.0 } else { -1.0 };
    let mut cands: Vec<(f64, f64, String)> = scene
        .elements
        .iter()
        .filter_map(|e| {
            let (ex, ey) = e.rect.center();
            let (along, across) = if axis == Axis::X { (ex - x, ey - y) } else { (ey - y, ex - x) };
            (along * f > 0.5).then(|| (along * along + across * across, across.abs(), e.id.clone()))
        })
        .collect();
    cands.sort_by(|a, b| a.0.total_cmp(&b.0).then(a.1.total_cmp(&b.1)).then(a.2.cmp(&b.2)));
    cands.into_iter().next().map(|c| c.2)
}

pub fn random_scene(rng: &mut impl Rng) -> Scene {
    let (w, h) = (rng.gen_range(200..1600), rng.gen_range(200..1000));
    let size = rng.gen_range(4..40);
    let n = rng.gen_range(0..30);
    // A coarse lattice makes equal distances and offsets common.
    let step = rng.gen_range(1..=20u32);
    let centres: Vec<(u32, u32)> = (0..n)
        .map(|_| (rng.gen_range(0..w / step) * step, rng.gen_range(0..h / step) * step))
        .collect();
    scene_from_centres(w, h, size, &centres)
}

pub fn random_input(rng: &mut impl Rng, at_ms: u64) -> InputEvent {
    let kind = match rng.gen_range(0..10) {
        0 | 1 => InputKind::rotate(rng.gen_range(0..=4), rng.gen_range(-4..=4)),
        2 => InputKind::SimultaneousRotate {
            rotations: (0..rng.gen_range(0..4))
                .map(|_| WheelTurn {
                    wheel: rng.gen_range(1..=3),
                    detents: rng.gen_range(-3..=3),
                })
                .collect(),
        },
        3 => InputKind::PrimaryPress,
        4 => InputKind::SecondaryPress,
        5 => InputKind::SecondaryHold {
            duration_ms: rng.gen_range(0..800),
        },
        6 => InputKind::CtrlPress,
        7 => [InputKind::CtrlPrimary, InputKind::CtrlSecondary].choose(rng).unwrap().clone(),
        _ => InputKind::CtrlBothButtons,
    };
    InputEvent::new(at_ms, kind)
}

#[derive(Debug, Default, Clone, Copy, PartialEq, Eq)]
pub struct Tally {
    pub cases: usize,
    pub mismatches: usize,
}

impl Tally {
    fn record(&mut self, ok: bool) {
        self.cases += 1;
        if !ok {
            self.mismatches += 1;
        }
    }
}

/// Unit-cost wheel search against BFS, from the initial state and from a
/// state focused on a random node.
pub fn wheeler_oracle(seed: u64, trees: usize) -> Tally {
    let mut rng = rng(seed);
    let mut t = Tally::default();
    for _ in 0..trees {
        let tree = random_tree(&mut rng, 40, 4);
        let ids: Vec<String> = tree.ids().map(str::to_string).collect();
        let engine = HnavEngine::new(&tree, false);
        let starts = [engine.init().unwrap(), engine.focusing(ids.choose(&mut rng).unwrap()).unwrap()];
        for start in &starts {
            for dst in ids.choose_multiple(&mut rng, 6) {
                let got = wheeler_min_cost(&tree, start, dst, &CostParams::unit()).map(|r| r.total);
                let want = wheeler_bfs(&tree, start, dst);
                let ok = match (got, want) {
                    (Ok(g), Some(w)) => g == w as f64,
                    _ => false,
                };
                t.record(ok);
            }
        }
    }
    t
}

/// Dijkstra keyboard cost against path enumeration. Paths the engine reports
/// as longer than `max_edges` can only be matched from above.
pub fn keyboard_oracle(seed: u64, trees: usize, max_edges: usize) -> Tally {
    let mut rng = rng(seed);
    let mut t = Tally::default();
    for _ in 0..trees {
        let tree = random_tree(&mut rng, 50, 5);
        let p = CostParams::new(
            rng.gen_range(1..=4) as f64,
            rng.gen_range(1..=4) as f64,
            rng.gen_range(1..=4) as f64,
        )
        .unwrap();
        let mut ids: Vec<String> = tree.ids().map(str::to_string).collect();
        let targets: Vec<String> = ids.choose_multiple(&mut rng, 4).cloned().collect();
        ids.push("ROOT".into());
        for dst in &targets {
            let src = ids.choose(&mut rng).unwrap();
            let got = keyboard_min_cost(&tree, src, dst, &p).unwrap();
            let want = keyboard_brute(&tree, src, dst, &p, max_edges);
            let hops = got.path.len() - 1;
            let ok = match want {
                Some(w) if hops <= max_edges => (w - got.total).abs() < 1e-9,
                Some(w) => w >= got.total - 1e-9,
                None => hops > max_edges,
            };
            t.record(ok);
        }
    }
    t
}

pub fn teleport_oracle(seed: u64, cases: usize) -> Tally {
    let mut rng = rng(seed);
    let mut t = Tally::default();
    let cfg = DeviceConfig::default();
    for _ in 0..cases {
        let scene = random_scene(&mut rng);
        let engine = FlatEngine::new(&scene, &cfg);
        let mut state = FlatState::new(&cfg);
        // Half the cursors sit exactly on an element centre.
        match scene.elements.choose(&mut rng).filter(|_| rng.gen_bool(0.5)) {
            Some(e) => (state.x, state.y) = e.rect.center(),
            None => {
                state.x = rng.gen_range(0..scene.width) as f64;
                state.y = rng.gen_range(0..scene.height) as f64;
            }
        }
        let axis = *[Axis::X, Axis::Y].choose(&mut rng).unwrap();
        let sign = *[Sign::Plus, Sign::Minus].choose(&mut rng).unwrap();
        let got = engine.teleport_target(&state, axis, sign).map(|e| e.id.clone());
        t.record(got == teleport_brute(&scene, state.x, state.y, axis, sign));
    }
    t
}

/// Longest run of +X teleports over random scenes, checked against the
/// element count. Returns the number of scenes that overran.
pub fn teleport_runs(seed: u64, scenes: usize) -> Tally {
    let mut rng = rng(seed);
    let mut t = Tally::default();
    let cfg = DeviceConfig::default();
    for _ in 0..scenes {
        let scene = random_scene(&mut rng);
        let engine = FlatEngine::new(&scene, &cfg);
        let mut s = FlatState::new(&cfg);
        let mut hops = 0;
        while engine.teleport_target(&s, Axis::X, Sign::Plus).is_some() && hops <= scene.elements.len() {
            s = engine.teleport(&s, Axis::X, Sign::Plus).0;
            hops += 1;
        }
        t.record(hops <= scene.elements.len());
    }
    t
}
