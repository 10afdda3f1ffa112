//! UI trees and 2D scenes.
//!
//! A [`UiTree`] is the abstract accessibility hierarchy walked in H-nav mode.
//! It always carries a synthetic root (id [`ROOT_ID`]) whose children are the
//! level-1 items; the root itself is never a navigation target. A [`Scene`] is
//! a flat screen of named rectangles used by 2D-nav and T-nav.
//!
//! Both are immutable once parsed.

use std::collections::{HashMap, HashSet};

use serde::{Deserialize, Serialize};
use thiserror::Error;

/// Id of the synthetic root. Documents may not use it.
pub const ROOT_ID: &str = "ROOT";

const ROOT_IDX: usize = 0;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum ParseError {
    #[error("malformed JSON at line {line}, column {column}: {message}")]
    Json {
        line: usize,
        column: usize,
        message: String,
    },
    #[error("duplicate node id {id:?} at {path}")]
    DuplicateId { id: String, path: String },
    #[error("node id {ROOT_ID:?} is reserved (at {path})")]
    ReservedId { path: String },
    #[error("empty node id at {path}")]
    EmptyId { path: String },
    #[error("tree document has no top-level items")]
    EmptyTopLevel,
    #[error("screen size must be positive, got {width}x{height}")]
    BadScreen { width: i64, height: i64 },
    #[error("element {id:?} has nonpositive size {w}x{h}")]
    NonPositiveSize { id: String, w: i64, h: i64 },
    #[error("element {id:?} rect [{x}, {y}, {w}, {h}] is outside the {width}x{height} screen")]
    OutOfBounds {
        id: String,
        x: i64,
        y: i64,
        w: i64,
        h: i64,
        width: i64,
        height: i64,
    },
    #[error("duplicate element id {id:?}")]
    DuplicateElement { id: String },
}

impl From<serde_json::Error> for ParseError {
    fn from(err: serde_json::Error) -> Self {
        ParseError::Json {
            line: err.line(),
            column: err.column(),
            message: err.to_string(),
        }
    }
}

#[derive(Debug, Error, Clone, PartialEq, Eq)]
#[error("unknown node id {0:?}")]
pub struct NotFound(pub String);

/// Document form of a tree node, as it appears in tree JSON.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct UiNode {
    pub id: String,
    #[serde(default)]
    pub name: String,
    #[serde(default)]
    pub role: String,
    #[serde(default)]
    pub children: Vec<UiNode>,
}

impl UiNode {
    pub fn new(id: impl Into<String>, name: impl Into<String>, role: impl Into<String>) -> Self {
        Self {
            id: id.into(),
            name: name.into(),
            role: role.into(),
            children: Vec::new(),
        }
    }

    pub fn with_children(mut self, children: Vec<UiNode>) -> Self {
        self.children = children;
        self
    }
}

#[derive(Deserialize)]
#[serde(untagged)]
enum TreeDocument {
    Many(Vec<UiNode>),
    One(UiNode),
}

/// A node stored in the tree arena.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Node {
    id: String,
    name: String,
    role: String,
    parent: Option<usize>,
    children: Vec<usize>,
    level: usize,
}

impl Node {
    pub fn id(&self) -> &str {
        &self.id
    }

    pub fn name(&self) -> &str {
        &self.name
    }

    pub fn role(&self) -> &str {
        &self.role
    }

    /// Arena index of the parent; `None` only for the root.
    pub fn parent(&self) -> Option<usize> {
        self.parent
    }

    pub fn children(&self) -> &[usize] {
        &self.children
    }

    /// Distance from the root. Real nodes are at level 1 or deeper.
    pub fn level(&self) -> usize {
        self.level
    }

    /// What a screen reader says for this node: its name, or its role when
    /// the element is unlabeled.
    pub fn label(&self) -> &str {
        if !self.name.is_empty() {
            &self.name
        } else if !self.role.is_empty() {
            &self.role
        } else {
            &self.id
        }
    }
}

/// Validated UI hierarchy with a synthetic root.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct UiTree {
    nodes: Vec<Node>,
    index: HashMap<String, usize>,
    depth: usize,
}

impl UiTree {
    /// Parses a tree document: a single node object or an array of top-level
    /// nodes. Either way the nodes become the level-1 children of the root.
    pub fn parse(document: &str) -> Result<Self, ParseError> {
        let doc: TreeDocument = serde_json::from_str(document)?;
        let top = match doc {
            TreeDocument::Many(items) => items,
            TreeDocument::One(node) => vec![node],
        };
        Self::from_nodes(top)
    }

    pub fn from_nodes(top: Vec<UiNode>) -> Result<Self, ParseError> {
        if top.is_empty() {
            return Err(ParseError::EmptyTopLevel);
        }
        let mut tree = UiTree {
            nodes: vec![Node {
                id: ROOT_ID.to_string(),
                name: String::new(),
                role: "root".to_string(),
                parent: None,
                children: Vec::new(),
                level: 0,
            }],
            index: HashMap::new(),
            depth: 0,
        };
        // Explicit stack so deep documents cannot overflow.
        let mut stack: Vec<(UiNode, usize, String)> = top
            .into_iter()
            .enumerate()
            .rev()
            .map(|(i, n)| (n, ROOT_IDX, format!("$[{i}]")))
            .collect();
        while let Some((doc, parent, path)) = stack.pop() {
            if doc.id.is_empty() {
                return Err(ParseError::EmptyId { path });
            }
            if doc.id == ROOT_ID {
                return Err(ParseError::ReservedId { path });
            }
            if tree.index.contains_key(&doc.id) {
                return Err(ParseError::DuplicateId { id: doc.id, path });
            }
            let idx = tree.nodes.len();
            let level = tree.nodes[parent].level + 1;
            tree.depth = tree.depth.max(level);
            tree.index.insert(doc.id.clone(), idx);
            tree.nodes[parent].children.push(idx);
            tree.nodes.push(Node {
                id: doc.id,
                name: doc.name,
                role: doc.role,
                parent: Some(parent),
                children: Vec::new(),
                level,
            });
            for (i, child) in doc.children.into_iter().enumerate().rev() {
                stack.push((child, idx, format!("{path}.children[{i}]")));
            }
        }
        Ok(tree)
    }

    /// Converts back to document form (the list of level-1 items).
    pub fn to_nodes(&self) -> Vec<UiNode> {
        fn build(tree: &UiTree, idx: usize) -> UiNode {
            let n = &tree.nodes[idx];
            UiNode {
                id: n.id.clone(),
                name: n.name.clone(),
                role: n.role.clone(),
                children: n.children.iter().map(|&c| build(tree, c)).collect(),
            }
        }
        self.nodes[ROOT_IDX]
            .children
            .iter()
            .map(|&c| build(self, c))
            .collect()
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string(&self.to_nodes()).expect("tree serializes")
    }

    /// Maximum number of levels below the root.
    pub fn depth(&self) -> usize {
        self.depth
    }

    /// Number of real nodes (the root excluded).
    pub fn len(&self) -> usize {
        self.nodes.len() - 1
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }

    pub fn root_index(&self) -> usize {
        ROOT_IDX
    }

    /// Arena access, root included at index 0.
    pub fn nodes(&self) -> &[Node] {
        &self.nodes
    }

    pub fn index_of(&self, id: &str) -> Option<usize> {
        if id == ROOT_ID {
            Some(ROOT_IDX)
        } else {
            self.index.get(id).copied()
        }
    }

    pub fn contains(&self, id: &str) -> bool {
        self.index.contains_key(id)
    }

    pub fn node(&self, id: &str) -> Option<&Node> {
        self.index_of(id).map(|i| &self.nodes[i])
    }

    pub fn get(&self, idx: usize) -> &Node {
        &self.nodes[idx]
    }

    /// Ids of the real nodes in document (pre-)order.
    pub fn ids(&self) -> impl Iterator<Item = &str> {
        self.nodes[1..].iter().map(|n| n.id.as_str())
    }

    /// Ordered children of `parent`. [`ROOT_ID`] yields the level-1 items.
    pub fn level_slice(&self, parent: &str) -> Result<Vec<&str>, NotFound> {
        let idx = self
            .index_of(parent)
            .ok_or_else(|| NotFound(parent.to_string()))?;
        Ok(self.nodes[idx]
            .children
            .iter()
            .map(|&c| self.nodes[c].id.as_str())
            .collect())
    }

    pub fn first_child(&self, id: &str) -> Option<&str> {
        let idx = self.index_of(id)?;
        self.nodes[idx]
            .children
            .first()
            .map(|&c| self.nodes[c].id.as_str())
    }

    /// Parent id; level-1 nodes report [`ROOT_ID`], the root reports `None`.
    pub fn parent(&self, id: &str) -> Option<&str> {
        let idx = self.index_of(id)?;
        self.nodes[idx].parent.map(|p| self.nodes[p].id.as_str())
    }

    pub fn level(&self, id: &str) -> Option<usize> {
        self.node(id).map(|n| n.level)
    }

    /// The node's siblings (itself included) and its position among them.
    pub fn siblings(&self, id: &str) -> Option<(Vec<&str>, usize)> {
        let idx = self.index.get(id).copied()?;
        let parent = self.nodes[idx].parent?;
        let kids = &self.nodes[parent].children;
        let pos = kids.iter().position(|&c| c == idx)?;
        Some((
            kids.iter().map(|&c| self.nodes[c].id.as_str()).collect(),
            pos,
        ))
    }

    pub fn label(&self, id: &str) -> Option<&str> {
        self.node(id).map(Node::label)
    }
}

/// Pixel rectangle, origin top-left, y downward. Serialized as `[x, y, w, h]`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(from = "[u32; 4]", into = "[u32; 4]")]
pub struct Rect {
    pub x: u32,
    pub y: u32,
    pub w: u32,
    pub h: u32,
}

impl From<[u32; 4]> for Rect {
    fn from([x, y, w, h]: [u32; 4]) -> Self {
        Rect { x, y, w, h }
    }
}

impl From<Rect> for [u32; 4] {
    fn from(r: Rect) -> Self {
        [r.x, r.y, r.w, r.h]
    }
}

impl Rect {
    pub fn center(&self) -> (f64, f64) {
        (
            self.x as f64 + self.w as f64 / 2.0,
            self.y as f64 + self.h as f64 / 2.0,
        )
    }

    /// Half-open containment: left/top edges inside, right/bottom outside.
    pub fn contains(&self, px: f64, py: f64) -> bool {
        px >= self.x as f64
            && px < (self.x + self.w) as f64
            && py >= self.y as f64
            && py < (self.y + self.h) as f64
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct ScreenElement {
    pub id: String,
    #[serde(default)]
    pub name: String,
    pub rect: Rect,
}

impl ScreenElement {
    pub fn label(&self) -> &str {
        if self.name.is_empty() {
            &self.id
        } else {
            &self.name
        }
    }
}

#[derive(Deserialize)]
struct RawElement {
    id: String,
    #[serde(default)]
    name: String,
    rect: [i64; 4],
}

#[derive(Deserialize)]
struct RawScene {
    width: i64,
    height: i64,
    #[serde(default)]
    elements: Vec<RawElement>,
}

/// A screen of named rectangles.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct Scene {
    pub width: u32,
    pub height: u32,
    pub elements: Vec<ScreenElement>,
}

impl Scene {
    /// An element-free screen.
    pub fn blank(width: u32, height: u32) -> Self {
        assert!(width > 0 && height > 0, "screen must be non-empty");
        Scene {
            width,
            height,
            elements: Vec::new(),
        }
    }

    pub fn parse(document: &str) -> Result<Self, ParseError> {
        let raw: RawScene = serde_json::from_str(document)?;
        if raw.width <= 0 || raw.height <= 0 || raw.width > u32::MAX as i64 || raw.height > u32::MAX as i64 {
            return Err(ParseError::BadScreen {
                width: raw.width,
                height: raw.height,
            });
        }
        let mut seen = HashSet::new();
        let mut elements = Vec::with_capacity(raw.elements.len());
        for el in raw.elements {
            let [x, y, w, h] = el.rect;
            if w <= 0 || h <= 0 {
                return Err(ParseError::NonPositiveSize { id: el.id, w, h });
            }
            if x < 0 || y < 0 || x + w > raw.width || y + h > raw.height {
                return Err(ParseError::OutOfBounds {
                    id: el.id,
                    x,
                    y,
                    w,
                    h,
                    width: raw.width,
                    height: raw.height,
                });
            }
            if !seen.insert(el.id.clone()) {
                return Err(ParseError::DuplicateElement { id: el.id });
            }
            elements.push(ScreenElement {
                id: el.id,
                name: el.name,
                rect: Rect {
                    x: x as u32,
                    y: y as u32,
                    w: w as u32,
                    h: h as u32,
                },
            });
        }
        Ok(Scene {
            width: raw.width as u32,
            height: raw.height as u32,
            elements,
        })
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string(self).expect("scene serializes")
    }

    pub fn element(&self, id: &str) -> Option<&ScreenElement> {
        self.elements.iter().find(|e| e.id == id)
    }

    /// First element (in declaration order) whose rect holds the point.
    pub fn element_at(&self, x: f64, y: f64) -> Option<&ScreenElement> {
        self.elements.iter().find(|e| e.rect.contains(x, y))
    }
}

impl Default for Scene {
    fn default() -> Self {
        Scene::blank(1366, 768)
    }
}
