//! Device state and the input dispatcher.
//!
//! [`dispatch`] maps every input of the device's input/outcome table onto
//! the engine for the current mode:
//!
//! | mode   | input                         | outcome                       |
//! |--------|-------------------------------|-------------------------------|
//! | H-nav  | wheel 1/2/3 scroll            | navigate that wheel's level   |
//! | H-nav  | Ctrl + Primary / Secondary    | level window down / up        |
//! | 2D-nav | wheel 1 / wheel 2             | move cursor along X / Y       |
//! | 2D-nav | wheel 3                       | adjust speed                  |
//! | 2D-nav | Secondary held >= hold time   | T-nav on/off                  |
//! | 2D-nav | Ctrl                          | announce cursor location      |
//! | both   | Primary / Secondary           | left / right click            |
//! | both   | Ctrl + both buttons           | switch mode                   |
//!
//! Anything else is a no-op answered with a single beep.

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::event::{Button, FeedbackEvent, InputEvent, InputKind, Mode, WheelTurn};
use crate::flat::{Axis, FlatEngine, FlatState, Sign};
use crate::hnav::{HnavEngine, HnavState};
use crate::model::{Scene, UiTree};

#[derive(Debug, Error, Clone, PartialEq)]
pub enum DeviceError {
    #[error("clock cannot go back from {now_ms} ms to {requested_ms} ms")]
    ClockRegression { now_ms: u64, requested_ms: u64 },
    #[error("invalid device config: {0}")]
    Config(String),
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default)]
pub struct DeviceConfig {
    pub detents_per_rev: u32,
    /// Rotation per detent. Informational; one detent is always one step.
    pub degrees_per_detent: f64,
    pub default_speed: u32,
    pub speed_min: u32,
    pub speed_max: u32,
    pub tnav_hold_ms: u64,
    pub sibling_memory: bool,
    pub tone_min: f64,
    pub tone_max: f64,
}

impl Default for DeviceConfig {
    fn default() -> Self {
        DeviceConfig {
            detents_per_rev: 12,
            degrees_per_detent: 30.0,
            default_speed: 7,
            speed_min: 1,
            speed_max: 50,
            tnav_hold_ms: 300,
            sibling_memory: false,
            tone_min: 200.0,
            tone_max: 1000.0,
        }
    }
}

impl DeviceConfig {
    pub fn validate(&self) -> Result<(), DeviceError> {
        let fail = |msg: &str| Err(DeviceError::Config(msg.to_string()));
        if self.detents_per_rev < 1 {
            return fail("detents_per_rev must be at least 1");
        }
        if !(0 < self.speed_min && self.speed_min <= self.default_speed && self.default_speed <= self.speed_max) {
            return fail("speeds must satisfy 0 < speed_min <= default_speed <= speed_max");
        }
        if self.tnav_hold_ms == 0 {
            return fail("tnav_hold_ms must be positive");
        }
        if !(self.tone_min.is_finite() && self.tone_max.is_finite() && 0.0 < self.tone_min && self.tone_min <= self.tone_max) {
            return fail("tone range must satisfy 0 < tone_min <= tone_max");
        }
        Ok(())
    }

    /// Parses a JSON config; missing fields take their defaults.
    pub fn from_json(text: &str) -> Result<Self, DeviceError> {
        let cfg: DeviceConfig =
            serde_json::from_str(text).map_err(|e| DeviceError::Config(e.to_string()))?;
        cfg.validate()?;
        Ok(cfg)
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct DeviceState {
    pub mode: Mode,
    /// Only ever true in [`Mode::Flat`].
    pub tnav_active: bool,
    pub hnav: HnavState,
    pub flat: FlatState,
    pub clock_ms: u64,
    pub config: DeviceConfig,
}

impl DeviceState {
    /// Fresh device in H-nav mode, wheels on the tree's first-child chain.
    pub fn new(config: DeviceConfig, tree: Option<&UiTree>) -> Result<Self, DeviceError> {
        config.validate()?;
        let hnav = tree
            .and_then(|t| HnavEngine::new(t, config.sibling_memory).init().ok())
            .unwrap_or_default();
        Ok(DeviceState {
            mode: Mode::HNav,
            tnav_active: false,
            hnav,
            flat: FlatState::new(&config),
            clock_ms: 0,
            config,
        })
    }

    /// Resets the H-nav cursors for a newly loaded tree.
    pub fn load_tree(&mut self, tree: &UiTree) {
        self.hnav = HnavEngine::new(tree, self.config.sibling_memory)
            .init()
            .unwrap_or_default();
    }

    /// Keeps the 2D cursor inside a newly loaded scene.
    pub fn load_scene(&mut self, scene: &Scene) {
        self.flat = self.flat.clone().clamped_to(scene);
    }

    pub fn advance_clock(&self, to_ms: u64) -> Result<DeviceState, DeviceError> {
        if to_ms < self.clock_ms {
            return Err(DeviceError::ClockRegression {
                now_ms: self.clock_ms,
                requested_ms: to_ms,
            });
        }
        let mut next = self.clone();
        next.clock_ms = to_ms;
        Ok(next)
    }

    /// Switches H-nav and 2D-nav. T-nav always starts off; each engine's
    /// own state is kept for the next visit.
    pub fn toggle_mode(&self) -> (DeviceState, Vec<FeedbackEvent>) {
        let mut next = self.clone();
        next.mode = self.mode.toggled();
        next.tnav_active = false;
        let text = match next.mode {
            Mode::HNav => "H-nav mode",
            Mode::Flat => "2D-nav mode",
        };
        (
            next.clone(),
            vec![
                FeedbackEvent::ModeChanged {
                    mode: next.mode,
                    tnav: false,
                },
                FeedbackEvent::speech(text),
            ],
        )
    }
}

/// Applies one input. Pure in `(state, input, tree, scene)`.
pub fn dispatch(
    state: &DeviceState,
    input: &InputEvent,
    tree: Option<&UiTree>,
    scene: &Scene,
) -> Result<(DeviceState, Vec<FeedbackEvent>), DeviceError> {
    let mut next = state.advance_clock(input.at_ms)?;
    let beep = |s: DeviceState| Ok((s, vec![FeedbackEvent::Beep]));
    let hold_ms = state.config.tnav_hold_ms;

    if input.kind == InputKind::CtrlBothButtons {
        let (toggled, fb) = next.toggle_mode();
        return Ok((toggled, fb));
    }

    match state.mode {
        Mode::HNav => {
            let Some(tree) = tree else {
                return beep(next);
            };
            let engine = HnavEngine::new(tree, state.config.sibling_memory);
            match &input.kind {
                InputKind::WheelRotate { .. } | InputKind::SimultaneousRotate { .. } => {
                    let Some(turns) = normalize_turns(&input.kind) else {
                        return beep(next);
                    };
                    let mut out = Vec::new();
                    for t in turns {
                        let (h, fb) = engine.rotate(&next.hnav, t.wheel, t.detents);
                        next.hnav = h;
                        out.extend(fb);
                    }
                    Ok((next, out))
                }
                InputKind::CtrlPrimary | InputKind::CtrlSecondary => {
                    let down = input.kind == InputKind::CtrlPrimary;
                    let (h, fb) = engine.shift_level(&next.hnav, down);
                    next.hnav = h;
                    Ok((next, fb))
                }
                InputKind::PrimaryPress => {
                    let fb = engine.activate(&next.hnav, Button::Primary);
                    Ok((next, vec![fb]))
                }
                InputKind::SecondaryPress => {
                    let fb = engine.activate(&next.hnav, Button::Secondary);
                    Ok((next, vec![fb]))
                }
                InputKind::SecondaryHold { duration_ms } if *duration_ms < hold_ms => {
                    let fb = engine.activate(&next.hnav, Button::Secondary);
                    Ok((next, vec![fb]))
                }
                _ => beep(next),
            }
        }
        Mode::Flat => {
            let engine = FlatEngine::new(scene, &state.config);
            match &input.kind {
                InputKind::WheelRotate { .. } | InputKind::SimultaneousRotate { .. } => {
                    let Some(turns) = normalize_turns(&input.kind) else {
                        return beep(next);
                    };
                    let mut out = Vec::new();
                    if let Some(speed) = turns.iter().find(|t| t.wheel == 3) {
                        let (f, fb) = engine.adjust_speed(&next.flat, speed.detents);
                        next.flat = f;
                        out.push(fb);
                    }
                    let motion: Vec<WheelTurn> = turns.into_iter().filter(|t| t.wheel != 3).collect();
                    if next.tnav_active {
                        for t in motion {
                            let axis = if t.wheel == 1 { Axis::X } else { Axis::Y };
                            let (f, fb) = engine.teleport(&next.flat, axis, Sign::of(t.detents as i64));
                            next.flat = f;
                            out.extend(fb);
                        }
                    } else if !motion.is_empty() {
                        let (f, fb) = engine.move_by(&next.flat, &motion);
                        next.flat = f;
                        out.extend(fb);
                    }
                    Ok((next, out))
                }
                InputKind::SecondaryHold { duration_ms } if *duration_ms >= hold_ms => {
                    next.tnav_active = !next.tnav_active;
                    let text = if next.tnav_active { "T-nav on" } else { "T-nav off" };
                    let fb = vec![
                        FeedbackEvent::ModeChanged {
                            mode: Mode::Flat,
                            tnav: next.tnav_active,
                        },
                        FeedbackEvent::speech(text),
                    ];
                    Ok((next, fb))
                }
                InputKind::CtrlPress => {
                    let fb = engine.probe(&next.flat);
                    Ok((next, vec![fb]))
                }
                InputKind::PrimaryPress => Ok((next.clone(), vec![click(&next.flat, scene, Button::Primary)])),
                InputKind::SecondaryPress | InputKind::SecondaryHold { .. } => {
                    Ok((next.clone(), vec![click(&next.flat, scene, Button::Secondary)]))
                }
                _ => beep(next),
            }
        }
    }
}

fn click(flat: &FlatState, scene: &Scene, button: Button) -> FeedbackEvent {
    FeedbackEvent::Activation {
        target_id: scene.element_at(flat.x, flat.y).map(|e| e.id.clone()),
        button,
    }
}

/// Sums detents per wheel, ordered by wheel. `None` for an invalid batch:
/// empty, a wheel outside 1..=3, a zero detent count, or a net zero turn.
fn normalize_turns(kind: &InputKind) -> Option<Vec<WheelTurn>> {
    let turns = kind.turns()?;
    if turns.is_empty() || turns.iter().any(|t| !(1..=3).contains(&t.wheel) || t.detents == 0) {
        return None;
    }
    let mut sums = [0i64; 3];
    for t in &turns {
        sums[t.wheel as usize - 1] += t.detents as i64;
    }
    let merged: Vec<WheelTurn> = sums
        .iter()
        .enumerate()
        .filter(|(_, &d)| d != 0)
        .map(|(i, &d)| WheelTurn {
            wheel: i as u8 + 1,
            detents: d.clamp(i32::MIN as i64, i32::MAX as i64) as i32,
        })
        .collect();
    (!merged.is_empty()).then_some(merged)
}
