//! Reference trees and scenes used by tests, examples and the CLI.
//!
//! * `menu_tree`: three levels, `a.1 a.2` / `b.1..b.4` / `c.1..c.8`.
//! * `cost_tree`: the 7-to-17 cost example (`ROOT -> 8, 16`).
//! * `depth4_tree`: a four-level chain `n1 > n2 > n3 > n4` for level shifts.
//! * `grid_scene`: twelve 36 px targets in a 3-column, 4-row grid on 1366x768,
//!   with item B centred at (410, 77).

use crate::model::{Rect, Scene, ScreenElement, UiNode, UiTree};

pub const MENU_TREE: &str = include_str!("../fixtures/menu_tree.json");
pub const COST_TREE: &str = include_str!("../fixtures/cost_tree.json");
pub const DEPTH4_TREE: &str = include_str!("../fixtures/depth4_tree.json");
pub const GRID_SCENE: &str = include_str!("../fixtures/grid_scene.json");
pub const THREE_TURNS: &str = include_str!("../fixtures/three_turns.jsonl");

pub fn menu_tree() -> UiTree {
    UiTree::parse(MENU_TREE).expect("fixture parses")
}

pub fn cost_tree() -> UiTree {
    UiTree::parse(COST_TREE).expect("fixture parses")
}

pub fn depth4_tree() -> UiTree {
    UiTree::parse(DEPTH4_TREE).expect("fixture parses")
}

pub fn grid_scene() -> Scene {
    Scene::parse(GRID_SCENE).expect("fixture parses")
}

/// Tree built from parent choices: node `k` (1-based, id `n{k}`) hangs under
/// node `parents[k-1] % k`, where 0 means top level. Nodes that would sit
/// deeper than `max_depth` are attached to the deepest allowed ancestor.
pub fn tree_from_parents(parents: &[usize], max_depth: usize) -> UiTree {
    let max_depth = max_depth.max(1);
    let n = parents.len();
    let mut parent = vec![0usize; n + 1];
    let mut depth = vec![0usize; n + 1];
    for k in 1..=n {
        let mut p = parents[k - 1] % k;
        while depth[p] >= max_depth {
            p = parent[p];
        }
        parent[k] = p;
        depth[k] = depth[p] + 1;
    }
    let mut kids: Vec<Vec<usize>> = vec![Vec::new(); n + 1];
    for k in 1..=n {
        kids[parent[k]].push(k);
    }
    fn build(k: usize, kids: &[Vec<usize>]) -> UiNode {
        UiNode::new(format!("n{k}"), format!("item {k}"), "button")
            .with_children(kids[k].iter().map(|&c| build(c, kids)).collect())
    }
    UiTree::from_nodes(kids[0].iter().map(|&c| build(c, &kids)).collect()).expect("generated tree is valid")
}

/// Scene with one `size`-pixel element per centre, ids `e0, e1, ...`.
/// Centres are clamped so every element fits on screen.
pub fn scene_from_centres(width: u32, height: u32, size: u32, centres: &[(u32, u32)]) -> Scene {
    let half = size / 2;
    let elements = centres
        .iter()
        .enumerate()
        .map(|(i, &(cx, cy))| {
            let x = cx.clamp(half, width.saturating_sub(size - half)) - half;
            let y = cy.clamp(half, height.saturating_sub(size - half)) - half;
            ScreenElement {
                id: format!("e{i}"),
                name: String::new(),
                rect: Rect { x, y, w: size, h: size },
            }
        })
        .collect();
    Scene {
        width,
        height,
        elements,
    }
}
