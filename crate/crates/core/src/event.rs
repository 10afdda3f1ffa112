//! Device input events and the feedback the engine emits in response.

use serde::{Deserialize, Serialize};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum Mode {
    /// Hierarchical navigation over the UI tree.
    HNav,
    /// 2D cursor navigation over the screen (T-nav is a sub-mode of this).
    Flat,
}

impl Mode {
    pub fn toggled(self) -> Mode {
        match self {
            Mode::HNav => Mode::Flat,
            Mode::Flat => Mode::HNav,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Button {
    Primary,
    Secondary,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Boundary {
    /// First sibling reached.
    First,
    /// Last sibling reached.
    Last,
    /// Screen edge, or a level shift that cannot happen.
    Edge,
}

/// One wheel's contribution to a simultaneous rotation.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct WheelTurn {
    pub wheel: u8,
    pub detents: i32,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "kind")]
pub enum InputKind {
    WheelRotate {
        wheel: u8,
        detents: i32,
    },
    /// Several wheels turned at the same instant; applied as one step.
    SimultaneousRotate {
        rotations: Vec<WheelTurn>,
    },
    PrimaryPress,
    SecondaryPress,
    SecondaryHold {
        duration_ms: u64,
    },
    CtrlPress,
    CtrlPrimary,
    CtrlSecondary,
    CtrlBothButtons,
}

impl InputKind {
    pub fn rotate(wheel: u8, detents: i32) -> Self {
        InputKind::WheelRotate { wheel, detents }
    }

    /// Wheel rotations carried by this input, if any.
    pub fn turns(&self) -> Option<Vec<WheelTurn>> {
        match self {
            InputKind::WheelRotate { wheel, detents } => Some(vec![WheelTurn {
                wheel: *wheel,
                detents: *detents,
            }]),
            InputKind::SimultaneousRotate { rotations } => Some(rotations.clone()),
            _ => None,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct InputEvent {
    pub at_ms: u64,
    #[serde(flatten)]
    pub kind: InputKind,
}

impl InputEvent {
    pub fn new(at_ms: u64, kind: InputKind) -> Self {
        Self { at_ms, kind }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind")]
pub enum FeedbackEvent {
    Speech {
        text: String,
    },
    Beep,
    Haptic,
    BoundaryHit {
        which: Boundary,
    },
    LocationAnnouncement {
        x_pct: u8,
        y_pct: u8,
        text: String,
    },
    TwoTone {
        fx_hz: f64,
        fy_hz: f64,
    },
    Activation {
        /// `None` when a 2D-nav click lands on empty screen space.
        target_id: Option<String>,
        button: Button,
    },
    ModeChanged {
        mode: Mode,
        tnav: bool,
    },
    SpeedChanged {
        px_per_detent: u32,
    },
}

impl FeedbackEvent {
    pub fn speech(text: impl Into<String>) -> Self {
        FeedbackEvent::Speech { text: text.into() }
    }

    pub fn boundary(which: Boundary) -> Self {
        FeedbackEvent::BoundaryHit { which }
    }

    pub fn is_beep(&self) -> bool {
        matches!(self, FeedbackEvent::Beep)
    }
}
