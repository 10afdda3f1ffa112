//! Session-log metrics and learning-curve fitting.
//!
//! A trial runs from a `TrialStart` marker to the next `TrialEnd` or
//! `TrialTimeout` marker. Trials longer than [`TRIAL_LIMIT_MS`] count as
//! timeouts even when closed by `TrialEnd`.

use serde::Serialize;
use thiserror::Error;

use crate::event::{FeedbackEvent, InputKind, Mode};
use crate::replay::{LogRecord, MarkerKind};

pub const TRIAL_LIMIT_MS: u64 = 180_000;

#[derive(Debug, Error, PartialEq)]
pub enum LogError {
    #[error("line {line}: {message}")]
    Syntax { line: usize, message: String },
    #[error("line {line}: timestamp {at_ms} is earlier than {previous_ms}")]
    NonMonotone { line: usize, at_ms: u64, previous_ms: u64 },
    #[error("line {line}: trial started while trial from line {open_line} is still open")]
    NestedTrial { line: usize, open_line: usize },
    #[error("line {line}: trial end without a start")]
    UnmatchedEnd { line: usize },
    #[error("line {line}: trial never ends")]
    UnterminatedTrial { line: usize },
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Trial {
    pub target: String,
    pub start_ms: u64,
    pub end_ms: u64,
    pub timed_out: bool,
    /// Record indices of the start and end markers.
    pub start: usize,
    pub end: usize,
}

#[derive(Debug, Clone, PartialEq, Default)]
pub struct SessionLog {
    pub records: Vec<LogRecord>,
    pub trials: Vec<Trial>,
}

impl SessionLog {
    /// Input and feedback records, the rest being bookkeeping.
    pub fn event_count(&self) -> usize {
        self.records.iter().filter(|r| is_event(r)).count()
    }
}

fn is_event(r: &LogRecord) -> bool {
    matches!(r, LogRecord::In(_) | LogRecord::Out(_))
}

pub fn parse_log(text: &str) -> Result<SessionLog, LogError> {
    let mut log = SessionLog::default();
    let mut previous: Option<u64> = None;
    let mut open: Option<(usize, usize, String, u64)> = None;
    for (i, raw) in text.lines().enumerate() {
        let line = i + 1;
        if raw.trim().is_empty() {
            continue;
        }
        let record: LogRecord = serde_json::from_str(raw).map_err(|e| LogError::Syntax {
            line,
            message: e.to_string(),
        })?;
        let at = record.at_ms();
        if let Some(p) = previous.filter(|&p| at < p) {
            return Err(LogError::NonMonotone {
                line,
                at_ms: at,
                previous_ms: p,
            });
        }
        previous = Some(at);
        let index = log.records.len();
        if let LogRecord::Mark(m) = &record {
            match &m.kind {
                MarkerKind::TrialStart { target } => {
                    if let Some((open_line, ..)) = open {
                        return Err(LogError::NestedTrial { line, open_line });
                    }
                    open = Some((line, index, target.clone(), at));
                }
                MarkerKind::TrialEnd | MarkerKind::TrialTimeout => {
                    let Some((_, start, target, start_ms)) = open.take() else {
                        return Err(LogError::UnmatchedEnd { line });
                    };
                    log.trials.push(Trial {
                        target,
                        start_ms,
                        end_ms: at,
                        timed_out: m.kind == MarkerKind::TrialTimeout || at - start_ms > TRIAL_LIMIT_MS,
                        start,
                        end: index,
                    });
                }
            }
        }
        log.records.push(record);
    }
    if let Some((line, ..)) = open {
        return Err(LogError::UnterminatedTrial { line });
    }
    Ok(log)
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct TrajectoryPoint {
    pub at_ms: u64,
    pub x: f64,
    pub y: f64,
    pub probe: bool,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct SessionMetrics {
    pub target: String,
    pub start_ms: u64,
    pub end_ms: u64,
    pub timed_out: bool,
    pub completion_s: Option<f64>,
    pub probe_count: usize,
    pub speed_change_count: usize,
    /// Pixels per detent, weighted by how long each setting was active.
    pub mean_speed: f64,
    pub event_count: usize,
    pub trajectory: Vec<TrajectoryPoint>,
}

/// What the log says about the device at a given record.
#[derive(Debug, Clone)]
struct Tracker {
    mode: Mode,
    speed: u32,
    pos: Option<(f64, f64)>,
}

impl Tracker {
    fn observe(&mut self, r: &LogRecord) {
        match r {
            LogRecord::State(s) => {
                self.mode = s.snapshot.mode;
                self.speed = s.snapshot.flat.speed;
                self.pos = Some((s.snapshot.flat.x, s.snapshot.flat.y));
            }
            LogRecord::Out(o) => match o.event {
                FeedbackEvent::ModeChanged { mode, .. } => self.mode = mode,
                FeedbackEvent::SpeedChanged { px_per_detent } => self.speed = px_per_detent,
                _ => {}
            },
            _ => {}
        }
    }
}

pub fn session_metrics(log: &SessionLog) -> Vec<SessionMetrics> {
    let mut tracker = Tracker {
        mode: Mode::HNav,
        speed: crate::device::DeviceConfig::default().default_speed,
        pos: None,
    };
    let mut out = Vec::with_capacity(log.trials.len());
    let mut cursor = 0;
    for trial in &log.trials {
        while cursor < trial.start {
            tracker.observe(&log.records[cursor]);
            cursor += 1;
        }
        let mut m = SessionMetrics {
            target: trial.target.clone(),
            start_ms: trial.start_ms,
            end_ms: trial.end_ms,
            timed_out: trial.timed_out,
            completion_s: (!trial.timed_out).then(|| (trial.end_ms - trial.start_ms) as f64 / 1000.0),
            probe_count: 0,
            speed_change_count: 0,
            mean_speed: 0.0,
            event_count: 0,
            trajectory: Vec::new(),
        };
        if let Some((x, y)) = tracker.pos {
            m.trajectory.push(TrajectoryPoint {
                at_ms: trial.start_ms,
                x,
                y,
                probe: false,
            });
        }
        let mut weighted = 0.0;
        let mut since = trial.start_ms;
        for r in &log.records[trial.start..=trial.end] {
            if is_event(r) {
                m.event_count += 1;
            }
            if let LogRecord::In(ev) = r {
                if ev.kind == InputKind::CtrlPress && tracker.mode == Mode::Flat {
                    m.probe_count += 1;
                    if let Some((x, y)) = tracker.pos {
                        match m.trajectory.last_mut() {
                            Some(p) if p.x == x && p.y == y => p.probe = true,
                            _ => m.trajectory.push(TrajectoryPoint {
                                at_ms: ev.at_ms,
                                x,
                                y,
                                probe: true,
                            }),
                        }
                    }
                }
            }
            let before = tracker.speed;
            tracker.observe(r);
            if tracker.speed != before {
                m.speed_change_count += 1;
                weighted += before as f64 * (r.at_ms() - since) as f64;
                since = r.at_ms();
            }
            if let (LogRecord::State(s), Some((x, y))) = (r, tracker.pos) {
                let moved = m.trajectory.last().is_none_or(|p| p.x != x || p.y != y);
                if moved {
                    m.trajectory.push(TrajectoryPoint {
                        at_ms: s.at_ms,
                        x,
                        y,
                        probe: false,
                    });
                }
            }
        }
        cursor = trial.end + 1;
        let span = trial.end_ms - trial.start_ms;
        m.mean_speed = if span == 0 {
            tracker.speed as f64
        } else {
            (weighted + tracker.speed as f64 * (trial.end_ms - since) as f64) / span as f64
        };
        out.push(m);
    }
    out
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct SessionSummary {
    pub trials: usize,
    pub timeouts: usize,
    /// Mean over trials that finished in time.
    pub mean_completion_s: Option<f64>,
    pub total_probes: usize,
    pub total_speed_changes: usize,
    pub mean_speed: Option<f64>,
}

pub fn summarize(metrics: &[SessionMetrics]) -> SessionSummary {
    let done: Vec<f64> = metrics.iter().filter_map(|m| m.completion_s).collect();
    let mean = |v: &[f64]| (!v.is_empty()).then(|| v.iter().sum::<f64>() / v.len() as f64);
    let speeds: Vec<f64> = metrics.iter().map(|m| m.mean_speed).collect();
    SessionSummary {
        trials: metrics.len(),
        timeouts: metrics.iter().filter(|m| m.timed_out).count(),
        mean_completion_s: mean(&done),
        total_probes: metrics.iter().map(|m| m.probe_count).sum(),
        total_speed_changes: metrics.iter().map(|m| m.speed_change_count).sum(),
        mean_speed: mean(&speeds),
    }
}

#[derive(Debug, Error, PartialEq)]
pub enum FitError {
    #[error("need at least 2 points, got {0}")]
    TooFewPoints(usize),
    #[error("point {index} is not strictly positive: ({x}, {y})")]
    NonPositive { index: usize, x: f64, y: f64 },
    #[error("all x values are equal")]
    Degenerate,
}

/// `y = a * x^b`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct PowerFit {
    pub a: f64,
    pub b: f64,
    pub r2: f64,
}

impl PowerFit {
    pub fn predict(&self, x: f64) -> f64 {
        self.a * x.powf(self.b)
    }
}

/// Least squares on `(ln x, ln y)`; `r2` is measured in log space.
pub fn fit_power_law(points: &[(f64, f64)]) -> Result<PowerFit, FitError> {
    if points.len() < 2 {
        return Err(FitError::TooFewPoints(points.len()));
    }
    if let Some((index, &(x, y))) = points
        .iter()
        .enumerate()
        .find(|(_, (x, y))| !(*x > 0.0 && *y > 0.0 && x.is_finite() && y.is_finite()))
    {
        return Err(FitError::NonPositive { index, x, y });
    }
    let n = points.len() as f64;
    let lx: Vec<f64> = points.iter().map(|p| p.0.ln()).collect();
    let ly: Vec<f64> = points.iter().map(|p| p.1.ln()).collect();
    let mx = lx.iter().sum::<f64>() / n;
    let my = ly.iter().sum::<f64>() / n;
    let sxx: f64 = lx.iter().map(|x| (x - mx).powi(2)).sum();
    if sxx == 0.0 {
        return Err(FitError::Degenerate);
    }
    let sxy: f64 = lx.iter().zip(&ly).map(|(x, y)| (x - mx) * (y - my)).sum();
    let b = sxy / sxx;
    let intercept = my - b * mx;
    let ss_tot: f64 = ly.iter().map(|y| (y - my).powi(2)).sum();
    let ss_res: f64 = lx
        .iter()
        .zip(&ly)
        .map(|(x, y)| (y - (intercept + b * x)).powi(2))
        .sum();
    // A flat line fits flat data perfectly.
    let r2 = if ss_tot <= f64::EPSILON * n { 1.0 } else { 1.0 - ss_res / ss_tot };
    Ok(PowerFit {
        a: intercept.exp(),
        b,
        r2,
    })
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Polyline {
    pub target: String,
    pub points: Vec<TrajectoryPoint>,
}

impl Polyline {
    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("polyline serializes")
    }

    pub fn to_csv(&self) -> String {
        let mut out = String::from("x,y,probe\n");
        for p in &self.points {
            out.push_str(&format!("{},{},{}\n", p.x, p.y, p.probe as u8));
        }
        out
    }
}

pub fn export_trajectory(metrics: &SessionMetrics) -> Polyline {
    Polyline {
        target: metrics.target.clone(),
        points: metrics.trajectory.clone(),
    }
}
