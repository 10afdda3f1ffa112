//! 2D-nav cursor kinematics, location probing, hover readout and T-nav jumps.

use serde::{Deserialize, Serialize};

use crate::device::DeviceConfig;
use crate::event::{Boundary, FeedbackEvent, WheelTurn};
use crate::model::{Scene, ScreenElement};

/// Minimum forward offset of a teleport candidate's centre, in pixels.
pub const TELEPORT_EPSILON: f64 = 0.5;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum Axis {
    X,
    Y,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum Sign {
    #[serde(rename = "+")]
    Plus,
    #[serde(rename = "-")]
    Minus,
}

impl Sign {
    pub fn of(value: i64) -> Sign {
        if value < 0 {
            Sign::Minus
        } else {
            Sign::Plus
        }
    }

    fn factor(self) -> f64 {
        match self {
            Sign::Plus => 1.0,
            Sign::Minus => -1.0,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct FlatState {
    pub x: f64,
    pub y: f64,
    /// Pixels moved per detent.
    pub speed: u32,
    pub last_axis: Option<Axis>,
    pub last_sign: Option<Sign>,
    pub hovered: Option<String>,
}

impl FlatState {
    /// Cursor in the top-left corner at the configured default speed.
    pub fn new(config: &DeviceConfig) -> Self {
        FlatState {
            x: 0.0,
            y: 0.0,
            speed: config.default_speed,
            last_axis: None,
            last_sign: None,
            hovered: None,
        }
    }

    /// Pulls the cursor back inside a (possibly different) screen.
    pub fn clamped_to(mut self, scene: &Scene) -> Self {
        self.x = self.x.clamp(0.0, max_x(scene));
        self.y = self.y.clamp(0.0, max_y(scene));
        self.hovered = scene.element_at(self.x, self.y).map(|e| e.id.clone());
        self
    }
}

fn max_x(scene: &Scene) -> f64 {
    (scene.width - 1) as f64
}

fn max_y(scene: &Scene) -> f64 {
    (scene.height - 1) as f64
}

/// Position along an axis as a fraction of the screen extent, in `[0, 1]`.
fn fraction(pos: f64, extent: u32) -> f64 {
    if extent <= 1 {
        0.0
    } else {
        (pos / (extent - 1) as f64).clamp(0.0, 1.0)
    }
}

/// Integer percentage, rounding halves up.
pub fn percent(pos: f64, extent: u32) -> u8 {
    (100.0 * fraction(pos, extent) + 0.5).floor() as u8
}

pub fn announcement_text(x_pct: u8, y_pct: u8) -> String {
    format!("{x_pct}% from the left and {y_pct}% from the top")
}

#[derive(Debug, Clone, Copy)]
pub struct FlatEngine<'a> {
    scene: &'a Scene,
    config: &'a DeviceConfig,
}

impl<'a> FlatEngine<'a> {
    pub fn new(scene: &'a Scene, config: &'a DeviceConfig) -> Self {
        Self { scene, config }
    }

    /// Smooth motion: wheel 1 along X, wheel 2 along Y (positive is down).
    /// Detents on other wheels are ignored here.
    pub fn move_by(&self, state: &FlatState, turns: &[WheelTurn]) -> (FlatState, Vec<FeedbackEvent>) {
        let mut out = Vec::new();
        let (mut d1, mut d2) = (0i64, 0i64);
        for t in turns {
            match t.wheel {
                1 => d1 += t.detents as i64,
                2 => d2 += t.detents as i64,
                _ => {}
            }
        }
        let speed = state.speed as f64;
        let (dx, dy) = (d1 as f64 * speed, d2 as f64 * speed);
        let (want_x, want_y) = (state.x + dx, state.y + dy);
        let mut next = state.clone();
        next.x = want_x.clamp(0.0, max_x(self.scene));
        next.y = want_y.clamp(0.0, max_y(self.scene));
        if next.x != want_x || next.y != want_y {
            out.push(FeedbackEvent::boundary(Boundary::Edge));
        }
        if dx != 0.0 || dy != 0.0 {
            let (axis, delta) = if dx.abs() >= dy.abs() {
                (Axis::X, d1)
            } else {
                (Axis::Y, d2)
            };
            next.last_axis = Some(axis);
            next.last_sign = Some(Sign::of(delta));
        }
        out.push(self.tones(&next));
        out.extend(self.hover_check(&mut next));
        (next, out)
    }

    /// Two-tone cue, pitch rising linearly with x and y.
    pub fn tones(&self, state: &FlatState) -> FeedbackEvent {
        let span = self.config.tone_max - self.config.tone_min;
        FeedbackEvent::TwoTone {
            fx_hz: self.config.tone_min + fraction(state.x, self.scene.width) * span,
            fy_hz: self.config.tone_min + fraction(state.y, self.scene.height) * span,
        }
    }

    /// Wheel 3: one pixel per detent, clamped to the configured range.
    pub fn adjust_speed(&self, state: &FlatState, detents: i32) -> (FlatState, FeedbackEvent) {
        let speed = (state.speed as i64 + detents as i64).clamp(
            self.config.speed_min as i64,
            self.config.speed_max as i64,
        ) as u32;
        let mut next = state.clone();
        next.speed = speed;
        (
            next,
            FeedbackEvent::SpeedChanged {
                px_per_detent: speed,
            },
        )
    }

    pub fn probe(&self, state: &FlatState) -> FeedbackEvent {
        let x_pct = percent(state.x, self.scene.width);
        let y_pct = percent(state.y, self.scene.height);
        FeedbackEvent::LocationAnnouncement {
            x_pct,
            y_pct,
            text: announcement_text(x_pct, y_pct),
        }
    }

    /// Edge-triggered readout of the element under the cursor.
    pub fn hover_check(&self, state: &mut FlatState) -> Option<FeedbackEvent> {
        match self.scene.element_at(state.x, state.y) {
            Some(el) if state.hovered.as_deref() != Some(el.id.as_str()) => {
                state.hovered = Some(el.id.clone());
                Some(FeedbackEvent::speech(el.label()))
            }
            Some(_) => None,
            None => {
                state.hovered = None;
                None
            }
        }
    }

    /// Closest element strictly ahead of the cursor along `axis`/`sign`.
    pub fn teleport_target(&self, state: &FlatState, axis: Axis, sign: Sign) -> Option<&'a ScreenElement> {
        let (cx, cy) = (state.x, state.y);
        let mut best: Option<(f64, f64, &ScreenElement)> = None;
        for el in &self.scene.elements {
            let (ex, ey) = el.rect.center();
            let (along, across) = match axis {
                Axis::X => (ex - cx, ey - cy),
                Axis::Y => (ey - cy, ex - cx),
            };
            if along * sign.factor() <= TELEPORT_EPSILON {
                continue;
            }
            let dist2 = along * along + across * across;
            let perp = across.abs();
            let better = match best {
                None => true,
                Some((bd, bp, bel)) => {
                    dist2 < bd || (dist2 == bd && (perp < bp || (perp == bp && el.id < bel.id)))
                }
            };
            if better {
                best = Some((dist2, perp, el));
            }
        }
        best.map(|(_, _, el)| el)
    }

    pub fn teleport(&self, state: &FlatState, axis: Axis, sign: Sign) -> (FlatState, Vec<FeedbackEvent>) {
        let mut next = state.clone();
        next.last_axis = Some(axis);
        next.last_sign = Some(sign);
        match self.teleport_target(state, axis, sign) {
            Some(el) => {
                let (ex, ey) = el.rect.center();
                next.x = ex.clamp(0.0, max_x(self.scene));
                next.y = ey.clamp(0.0, max_y(self.scene));
                next.hovered = Some(el.id.clone());
                (
                    next,
                    vec![FeedbackEvent::Haptic, FeedbackEvent::speech(el.label())],
                )
            }
            None => (next, vec![FeedbackEvent::boundary(Boundary::Edge)]),
        }
    }
}
