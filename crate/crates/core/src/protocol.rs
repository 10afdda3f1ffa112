//! Interactive session protocol: line-delimited JSON messages tagged by
//! `"type"`.
//!
//! Client to engine:
//!
//! ```text
//! {"type":"input","event":{"at_ms":0,"kind":"PrimaryPress"}}
//! {"type":"load","tree":[...]}      or  {"type":"load","scene":{...}}
//! {"type":"snapshot"}
//! ```
//!
//! Engine to client: `state`, `feedback` and `error` messages. Every input
//! gets exactly one `state` followed by one `feedback`, even when the device
//! rejects it (then an `error` comes first and the state is unchanged).

use serde::{Deserialize, Serialize};

use crate::device::{dispatch, DeviceConfig, DeviceError, DeviceState};
use crate::event::{FeedbackEvent, InputEvent};
use crate::model::{Scene, UiTree};

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "type", rename_all = "snake_case")]
pub enum ClientMessage {
    Input {
        event: InputEvent,
    },
    Load {
        #[serde(default, skip_serializing_if = "Option::is_none")]
        tree: Option<serde_json::Value>,
        #[serde(default, skip_serializing_if = "Option::is_none")]
        scene: Option<serde_json::Value>,
    },
    Snapshot,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "type", rename_all = "snake_case")]
pub enum ServerMessage {
    State { snapshot: DeviceState },
    Feedback { events: Vec<FeedbackEvent> },
    Error { message: String },
}

impl ServerMessage {
    pub fn to_line(&self) -> String {
        serde_json::to_string(self).expect("server messages serialize")
    }
}

/// One connected client's device.
#[derive(Debug, Clone)]
pub struct Session {
    tree: Option<UiTree>,
    scene: Scene,
    state: DeviceState,
}

impl Session {
    pub fn new(config: DeviceConfig) -> Result<Self, DeviceError> {
        let scene = Scene::default();
        let mut state = DeviceState::new(config, None)?;
        state.load_scene(&scene);
        Ok(Session {
            tree: None,
            scene,
            state,
        })
    }

    pub fn state(&self) -> &DeviceState {
        &self.state
    }

    pub fn tree(&self) -> Option<&UiTree> {
        self.tree.as_ref()
    }

    pub fn scene(&self) -> &Scene {
        &self.scene
    }

    /// Handles one raw line. Malformed lines produce a single error.
    pub fn handle_line(&mut self, line: &str) -> Vec<ServerMessage> {
        match serde_json::from_str::<ClientMessage>(line) {
            Ok(msg) => self.handle(msg),
            Err(e) => vec![error(format!("malformed message: {e}"))],
        }
    }

    pub fn handle(&mut self, msg: ClientMessage) -> Vec<ServerMessage> {
        match msg {
            ClientMessage::Input { event } => self.input(&event),
            ClientMessage::Load { tree, scene } => self.load(tree, scene),
            ClientMessage::Snapshot => vec![self.snapshot()],
        }
    }

    fn snapshot(&self) -> ServerMessage {
        ServerMessage::State {
            snapshot: self.state.clone(),
        }
    }

    fn input(&mut self, event: &InputEvent) -> Vec<ServerMessage> {
        match dispatch(&self.state, event, self.tree.as_ref(), &self.scene) {
            Ok((next, events)) => {
                self.state = next;
                vec![self.snapshot(), ServerMessage::Feedback { events }]
            }
            Err(e) => vec![
                error(e.to_string()),
                self.snapshot(),
                ServerMessage::Feedback { events: Vec::new() },
            ],
        }
    }

    fn load(&mut self, tree: Option<serde_json::Value>, scene: Option<serde_json::Value>) -> Vec<ServerMessage> {
        if tree.is_none() && scene.is_none() {
            return vec![error("load needs a tree or a scene".into())];
        }
        // Validate both before touching the session.
        let tree = match tree.map(|v| UiTree::parse(&v.to_string())).transpose() {
            Ok(t) => t,
            Err(e) => return vec![error(format!("tree: {e}"))],
        };
        let scene = match scene.map(|v| Scene::parse(&v.to_string())).transpose() {
            Ok(s) => s,
            Err(e) => return vec![error(format!("scene: {e}"))],
        };
        if let Some(t) = tree {
            self.state.load_tree(&t);
            self.tree = Some(t);
        }
        if let Some(s) = scene {
            self.state.load_scene(&s);
            self.scene = s;
        }
        vec![self.snapshot()]
    }
}

fn error(message: String) -> ServerMessage {
    ServerMessage::Error { message }
}
