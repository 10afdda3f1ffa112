//! Three-cursor hierarchical navigation.
//!
//! Wheel k (1-based) owns a cursor at level `base_level + k - 1`. Cursor k+1
//! is always a child of cursor k, so turning a wheel re-seats every wheel
//! below it: on the first child of the new selection by default, or on the
//! child last visited there when sibling memory is enabled.

use std::collections::BTreeMap;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::event::{Boundary, Button, FeedbackEvent};
use crate::model::{UiTree, ROOT_ID};

pub const WHEELS: usize = 3;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum HnavError {
    #[error("tree has no navigable nodes")]
    EmptyTree,
    #[error("unknown node id {0:?}")]
    UnknownNode(String),
}

#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct HnavState {
    /// Tree level served by wheel 1.
    pub base_level: usize,
    pub cursors: [Option<String>; WHEELS],
    /// Parent id to last focused child; only filled with sibling memory on.
    #[serde(default, skip_serializing_if = "BTreeMap::is_empty")]
    pub memory: BTreeMap<String, String>,
}

impl Default for HnavState {
    fn default() -> Self {
        HnavState {
            base_level: 1,
            cursors: [None, None, None],
            memory: BTreeMap::new(),
        }
    }
}

impl HnavState {
    pub fn cursor(&self, wheel: u8) -> Option<&str> {
        self.cursors
            .get(wheel.checked_sub(1)? as usize)?
            .as_deref()
    }

    /// Cursor triple as string slices, for assertions and display.
    pub fn triple(&self) -> [Option<&str>; WHEELS] {
        [
            self.cursors[0].as_deref(),
            self.cursors[1].as_deref(),
            self.cursors[2].as_deref(),
        ]
    }

    /// Deepest non-empty cursor; the target of a click.
    pub fn focus(&self) -> Option<&str> {
        self.cursors.iter().rev().flatten().next().map(String::as_str)
    }

    /// True if any wheel's cursor sits on `id`.
    pub fn holds(&self, id: &str) -> bool {
        self.cursors.iter().flatten().any(|c| c == id)
    }
}

/// H-nav transitions over one tree.
#[derive(Debug, Clone, Copy)]
pub struct HnavEngine<'a> {
    tree: &'a UiTree,
    sibling_memory: bool,
}

impl<'a> HnavEngine<'a> {
    pub fn new(tree: &'a UiTree, sibling_memory: bool) -> Self {
        Self {
            tree,
            sibling_memory,
        }
    }

    pub fn tree(&self) -> &'a UiTree {
        self.tree
    }

    /// Wheels mapped to the top three levels, each on a first child.
    pub fn init(&self) -> Result<HnavState, HnavError> {
        let first = self
            .tree
            .first_child(ROOT_ID)
            .ok_or(HnavError::EmptyTree)?;
        let mut state = HnavState::default();
        state.cursors[0] = Some(first.to_string());
        self.reseat_below(&mut state, 0);
        Ok(state)
    }

    /// State whose deepest populated cursor chain passes through `id`, with
    /// `id` on the lowest wheel that can reach it from level 1.
    pub fn focusing(&self, id: &str) -> Result<HnavState, HnavError> {
        let level = self
            .tree
            .level(id)
            .filter(|&l| l > 0)
            .ok_or_else(|| HnavError::UnknownNode(id.to_string()))?;
        let base = level.saturating_sub(WHEELS - 1).max(1);
        let wheel = level - base;
        let mut state = HnavState {
            base_level: base,
            ..HnavState::default()
        };
        let mut node = id;
        for k in (0..=wheel).rev() {
            state.cursors[k] = Some(node.to_string());
            node = self.tree.parent(node).unwrap_or(ROOT_ID);
        }
        self.reseat_below(&mut state, wheel);
        Ok(state)
    }

    /// Turns one wheel by `detents` sibling steps, clamping at either end.
    pub fn rotate(
        &self,
        state: &HnavState,
        wheel: u8,
        detents: i32,
    ) -> (HnavState, Vec<FeedbackEvent>) {
        let mut out = Vec::new();
        let Some(k) = wheel_index(wheel) else {
            return (state.clone(), vec![FeedbackEvent::Beep]);
        };
        let Some(current) = state.cursors[k].as_deref() else {
            return (state.clone(), vec![FeedbackEvent::Beep]);
        };
        if detents == 0 {
            return (state.clone(), vec![FeedbackEvent::Beep]);
        }
        let Some((siblings, mut pos)) = self.tree.siblings(current) else {
            return (state.clone(), vec![FeedbackEvent::Beep]);
        };
        let start = pos;
        for _ in 0..detents.unsigned_abs() {
            let next = if detents > 0 {
                (pos + 1 < siblings.len()).then_some(pos + 1)
            } else {
                pos.checked_sub(1)
            };
            match next {
                Some(p) => {
                    pos = p;
                    out.push(FeedbackEvent::Haptic);
                    out.push(FeedbackEvent::speech(self.label(siblings[pos])));
                }
                None => {
                    let which = if detents > 0 {
                        Boundary::Last
                    } else {
                        Boundary::First
                    };
                    out.push(FeedbackEvent::boundary(which));
                    out.push(FeedbackEvent::Haptic);
                    break;
                }
            }
        }
        if pos == start {
            return (state.clone(), out);
        }
        let mut next = state.clone();
        next.cursors[k] = Some(siblings[pos].to_string());
        self.reseat_below(&mut next, k);
        (next, out)
    }

    /// Moves the three-level window one level down or up.
    pub fn shift_level(&self, state: &HnavState, down: bool) -> (HnavState, Vec<FeedbackEvent>) {
        let refused = || {
            (
                state.clone(),
                vec![FeedbackEvent::boundary(Boundary::Edge), FeedbackEvent::Beep],
            )
        };
        let mut next = state.clone();
        if down {
            let Some(c3) = state.cursors[2].as_deref() else {
                return refused();
            };
            let Some(grandchild) = self.tree.first_child(c3) else {
                return refused();
            };
            next.base_level += 1;
            next.cursors = [
                state.cursors[1].clone(),
                state.cursors[2].clone(),
                Some(grandchild.to_string()),
            ];
        } else {
            if state.base_level <= 1 {
                return refused();
            }
            let Some(parent) = state.cursors[0]
                .as_deref()
                .and_then(|c1| self.tree.parent(c1))
                .filter(|&p| p != ROOT_ID)
            else {
                return refused();
            };
            next.base_level -= 1;
            next.cursors = [
                Some(parent.to_string()),
                state.cursors[0].clone(),
                state.cursors[1].clone(),
            ];
        }
        self.remember(&mut next);
        let focus = next.focus().map(|f| self.label(f)).unwrap_or_default();
        let text = format!("Level {}, {}", next.base_level, focus);
        (next, vec![FeedbackEvent::speech(text)])
    }

    /// Click on the deepest populated cursor.
    pub fn activate(&self, state: &HnavState, button: Button) -> FeedbackEvent {
        match state.focus() {
            Some(target) => FeedbackEvent::Activation {
                target_id: Some(target.to_string()),
                button,
            },
            None => FeedbackEvent::Beep,
        }
    }

    fn label(&self, id: &str) -> String {
        self.tree.label(id).unwrap_or(id).to_string()
    }

    /// Recomputes cursors below wheel index `k` from cursor `k`.
    fn reseat_below(&self, state: &mut HnavState, k: usize) {
        for j in k + 1..WHEELS {
            let child = state.cursors[j - 1].as_deref().and_then(|parent| {
                let remembered = self
                    .sibling_memory
                    .then(|| state.memory.get(parent))
                    .flatten()
                    .filter(|c| self.tree.parent(c) == Some(parent))
                    .map(String::as_str);
                remembered.or_else(|| self.tree.first_child(parent))
            });
            state.cursors[j] = child.map(str::to_string);
        }
        self.remember(state);
    }

    fn remember(&self, state: &mut HnavState) {
        if !self.sibling_memory {
            return;
        }
        for c in state.cursors.iter().flatten() {
            if let Some(p) = self.tree.parent(c) {
                state.memory.insert(p.to_string(), c.clone());
            }
        }
    }
}

fn wheel_index(wheel: u8) -> Option<usize> {
    (1..=WHEELS as u8)
        .contains(&wheel)
        .then(|| wheel as usize - 1)
}
