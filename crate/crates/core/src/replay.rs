//! JSONL event logs and deterministic script replay.
//!
//! Every log line is one JSON object tagged by `"dir"`:
//!
//! * `"in"`: an [`InputEvent`] fed to the device,
//! * `"out"`: a [`FeedbackEvent`] it produced, stamped with the input's time,
//! * `"state"`: a full [`DeviceState`] snapshot,
//! * `"mark"`: a trial marker ([`Marker`]) used by the analytics.
//!
//! A replay writes the initial state, then for each input its `in` line, its
//! `out` lines in order and the resulting `state`. Markers pass through.

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::device::{dispatch, DeviceConfig, DeviceError, DeviceState};
use crate::event::{FeedbackEvent, InputEvent};
use crate::hnav::{HnavEngine, HnavError};
use crate::model::{Scene, UiTree};

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "kind")]
pub enum MarkerKind {
    TrialStart { target: String },
    TrialEnd,
    TrialTimeout,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Marker {
    pub at_ms: u64,
    #[serde(flatten)]
    pub kind: MarkerKind,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct OutRecord {
    pub at_ms: u64,
    #[serde(flatten)]
    pub event: FeedbackEvent,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct StateRecord {
    pub at_ms: u64,
    pub snapshot: DeviceState,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "dir")]
pub enum LogRecord {
    #[serde(rename = "in")]
    In(InputEvent),
    #[serde(rename = "out")]
    Out(OutRecord),
    #[serde(rename = "state")]
    State(StateRecord),
    #[serde(rename = "mark")]
    Mark(Marker),
}

impl LogRecord {
    pub fn at_ms(&self) -> u64 {
        match self {
            LogRecord::In(e) => e.at_ms,
            LogRecord::Out(o) => o.at_ms,
            LogRecord::State(s) => s.at_ms,
            LogRecord::Mark(m) => m.at_ms,
        }
    }

    pub fn to_line(&self) -> String {
        serde_json::to_string(self).expect("log records serialize")
    }
}

/// A line of a replay script.
#[derive(Debug, Clone, PartialEq)]
pub enum ScriptItem {
    Input(InputEvent),
    Mark(Marker),
}

#[derive(Debug, Error)]
pub enum ReplayError {
    #[error("line {line}: {message}")]
    Syntax { line: usize, message: String },
    #[error("line {line}: {source}")]
    Device {
        line: usize,
        #[source]
        source: DeviceError,
    },
    #[error(transparent)]
    Start(#[from] HnavError),
    #[error(transparent)]
    Config(DeviceError),
}

/// Parses a script: bare input or marker objects, or log lines (whose `in`
/// and `mark` records are kept and the rest skipped). Blank lines are ignored.
pub fn parse_script(text: &str) -> Result<Vec<ScriptItem>, ReplayError> {
    let mut items = Vec::new();
    for (i, raw) in text.lines().enumerate() {
        let line = i + 1;
        if raw.trim().is_empty() {
            continue;
        }
        let syntax = |e: serde_json::Error| ReplayError::Syntax {
            line,
            message: e.to_string(),
        };
        let value: serde_json::Value = serde_json::from_str(raw).map_err(syntax)?;
        if value.get("dir").is_some() {
            match serde_json::from_value::<LogRecord>(value).map_err(syntax)? {
                LogRecord::In(ev) => items.push(ScriptItem::Input(ev)),
                LogRecord::Mark(m) => items.push(ScriptItem::Mark(m)),
                LogRecord::Out(_) | LogRecord::State(_) => {}
            }
            continue;
        }
        let is_marker = value
            .get("kind")
            .and_then(|k| k.as_str())
            .is_some_and(|k| k.starts_with("Trial"));
        if is_marker {
            items.push(ScriptItem::Mark(serde_json::from_value(value).map_err(syntax)?));
        } else {
            items.push(ScriptItem::Input(serde_json::from_value(value).map_err(syntax)?));
        }
    }
    Ok(items)
}

/// Everything a replay needs besides the script.
#[derive(Debug, Clone)]
pub struct ReplaySetup<'a> {
    pub config: DeviceConfig,
    pub tree: Option<&'a UiTree>,
    pub scene: &'a Scene,
    /// Start H-nav with the wheels focused on this node instead of the
    /// first-child chain.
    pub focus: Option<&'a str>,
}

/// Replays `script` from a fresh device and returns the full log.
pub fn run_script(setup: &ReplaySetup<'_>, script: &[ScriptItem]) -> Result<Vec<LogRecord>, ReplayError> {
    let mut state = DeviceState::new(setup.config.clone(), setup.tree).map_err(ReplayError::Config)?;
    if let (Some(tree), Some(focus)) = (setup.tree, setup.focus) {
        state.hnav = HnavEngine::new(tree, setup.config.sibling_memory).focusing(focus)?;
    }
    state.load_scene(setup.scene);
    let mut log = vec![LogRecord::State(StateRecord {
        at_ms: state.clock_ms,
        snapshot: state.clone(),
    })];
    for (i, item) in script.iter().enumerate() {
        match item {
            ScriptItem::Mark(m) => log.push(LogRecord::Mark(m.clone())),
            ScriptItem::Input(ev) => {
                let (next, feedback) = dispatch(&state, ev, setup.tree, setup.scene)
                    .map_err(|source| ReplayError::Device { line: i + 1, source })?;
                log.push(LogRecord::In(ev.clone()));
                log.extend(feedback.into_iter().map(|event| {
                    LogRecord::Out(OutRecord {
                        at_ms: ev.at_ms,
                        event,
                    })
                }));
                log.push(LogRecord::State(StateRecord {
                    at_ms: next.clock_ms,
                    snapshot: next.clone(),
                }));
                state = next;
            }
        }
    }
    Ok(log)
}

/// Serializes a log, one record per line, newline-terminated.
pub fn write_log(records: &[LogRecord]) -> String {
    let mut out = String::new();
    for r in records {
        out.push_str(&r.to_line());
        out.push('\n');
    }
    out
}

/// Final device state recorded in a log, if any.
pub fn final_state(records: &[LogRecord]) -> Option<&DeviceState> {
    records.iter().rev().find_map(|r| match r {
        LogRecord::State(s) => Some(&s.snapshot),
        _ => None,
    })
}
