//! Elicitation sessions: data, weights and an append-only event history.
//!
//! A session file stores the initial data, the history and the resulting
//! state. Loading replays the history and refuses files whose stored state
//! disagrees with the replay.

use std::collections::BTreeMap;
use std::path::Path;

use serde::{Deserialize, Serialize};

use sd_core::formats::{json_error, round_real, weights_to_json};
use sd_core::WeightVector;

use crate::data::{parse_data, pretty, Data, DataDoc, Format};
use crate::error::{Error, Result};
use crate::SCHEMA_VERSION;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "event", rename_all = "snake_case")]
pub enum Event {
    /// Supply a missing comparison `φ(x, y) = value`.
    Refine { x: String, y: String, value: f64 },
    SelectLevel { level: f64 },
    Bookmark { name: String, level: f64 },
}

#[derive(Debug, Clone, PartialEq)]
pub struct State {
    pub data: Data,
    pub selected_level: Option<f64>,
    pub bookmarks: BTreeMap<String, f64>,
}

impl State {
    fn initial(data: Data) -> Self {
        Self {
            data,
            selected_level: None,
            bookmarks: BTreeMap::new(),
        }
    }

    fn apply(&self, event: &Event) -> Result<State> {
        let mut next = self.clone();
        match event {
            Event::Refine { x, y, value } => {
                let Data::Partial(p) = &self.data else {
                    return Err(Error::WrongKind {
                        expected: "partial",
                        found: self.data.kind().name(),
                    });
                };
                next.data = Data::Partial(p.refine(x, y, *value)?);
            }
            Event::SelectLevel { level } => {
                check_level(*level)?;
                self.data.ladder_source()?;
                next.selected_level = Some(*level);
            }
            Event::Bookmark { name, level } => {
                check_level(*level)?;
                next.bookmarks.insert(name.clone(), *level);
            }
        }
        Ok(next)
    }
}

fn check_level(level: f64) -> Result<()> {
    if level.is_finite() && level >= 0.0 {
        Ok(())
    } else {
        Err(sd_core::Error::NegativeLevel(level).into())
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct Session {
    id: String,
    weights: WeightVector,
    /// Uniform weights are persisted as `null` and stay exact.
    uniform: bool,
    initial: Data,
    history: Vec<Event>,
    state: State,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
struct StateDoc {
    data: DataDoc,
    selected_level: Option<f64>,
    bookmarks: BTreeMap<String, f64>,
}

/// The persisted form.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
struct SessionDoc {
    schema_version: u32,
    id: String,
    weights: Option<BTreeMap<String, f64>>,
    initial: DataDoc,
    history: Vec<Event>,
    state: StateDoc,
}

impl Session {
    /// A fresh session with a random id, uniform weights when `weights` is
    /// `None`. Data and explicit weights are brought to their persisted
    /// precision so that a saved and reloaded session is indistinguishable
    /// from this one.
    pub fn new(data: Data, weights: Option<WeightVector>) -> Result<Self> {
        Self::with_id(uuid::Uuid::new_v4().to_string(), data, weights)
    }

    pub fn with_id(id: impl Into<String>, data: Data, weights: Option<WeightVector>) -> Result<Self> {
        let data = Data::from_doc(data.to_doc())?;
        let uniform = weights.is_none();
        let weights = match weights {
            None => WeightVector::uniform(data.base()),
            Some(w) if w.base() != data.base() => return Err(sd_core::Error::BaseMismatch.into()),
            Some(w) => {
                WeightVector::new(data.base(), w.values().iter().map(|&v| round_real(v)).collect())?
            }
        };
        Ok(Self {
            id: id.into(),
            weights,
            uniform,
            state: State::initial(data.clone()),
            initial: data,
            history: Vec::new(),
        })
    }

    pub fn id(&self) -> &str {
        &self.id
    }

    pub fn weights(&self) -> &WeightVector {
        &self.weights
    }

    pub fn initial(&self) -> &Data {
        &self.initial
    }

    pub fn history(&self) -> &[Event] {
        &self.history
    }

    pub fn state(&self) -> &State {
        &self.state
    }

    pub fn data(&self) -> &Data {
        &self.state.data
    }

    /// Validates and appends `event`. On error nothing changes.
    pub fn record(&mut self, event: Event) -> Result<()> {
        let event = match event {
            Event::Refine { x, y, value } => Event::Refine {
                x,
                y,
                value: round_real(value),
            },
            Event::SelectLevel { level } => Event::SelectLevel {
                level: round_real(level),
            },
            Event::Bookmark { name, level } => Event::Bookmark {
                name,
                level: round_real(level),
            },
        };
        self.state = self.state.apply(&event)?;
        self.history.push(event);
        Ok(())
    }

    pub fn refine(&mut self, x: &str, y: &str, value: f64) -> Result<()> {
        self.record(Event::Refine {
            x: x.into(),
            y: y.into(),
            value,
        })
    }

    pub fn select_level(&mut self, level: f64) -> Result<()> {
        self.record(Event::SelectLevel { level })
    }

    pub fn bookmark(&mut self, name: &str, level: f64) -> Result<()> {
        self.record(Event::Bookmark {
            name: name.into(),
            level,
        })
    }

    /// The state obtained by applying the whole history to the initial data.
    pub fn replay(&self) -> Result<State> {
        self.history
            .iter()
            .try_fold(State::initial(self.initial.clone()), |s, e| s.apply(e))
    }

    pub fn to_json(&self) -> String {
        pretty(&SessionDoc {
            schema_version: SCHEMA_VERSION,
            id: self.id.clone(),
            weights: (!self.uniform).then(|| weights_to_json(&self.weights)),
            initial: self.initial.to_doc(),
            history: self.history.clone(),
            state: StateDoc {
                data: self.state.data.to_doc(),
                selected_level: self.state.selected_level,
                bookmarks: self.state.bookmarks.clone(),
            },
        })
    }

    pub fn from_json(text: &str) -> Result<Self> {
        let version: VersionProbe = serde_json::from_str(text).map_err(json_error)?;
        if version.schema_version != SCHEMA_VERSION {
            return Err(Error::SchemaVersion(version.schema_version));
        }
        let doc: SessionDoc = serde_json::from_str(text).map_err(json_error)?;
        let initial = Data::from_doc(doc.initial)?;
        let uniform = doc.weights.is_none();
        let weights = match &doc.weights {
            None => WeightVector::uniform(initial.base()),
            Some(map) => {
                WeightVector::from_ids(initial.base(), map.iter().map(|(k, v)| (k.as_str(), *v)))?
            }
        };
        let stored = State {
            data: Data::from_doc(doc.state.data)?,
            selected_level: doc.state.selected_level,
            bookmarks: doc.state.bookmarks,
        };
        let session = Session {
            id: doc.id,
            weights,
            uniform,
            initial,
            history: doc.history,
            state: stored,
        };
        if session.replay()? != session.state {
            return Err(Error::ReplayMismatch);
        }
        Ok(session)
    }

    pub fn save(&self, path: &Path) -> Result<()> {
        std::fs::write(path, self.to_json()).map_err(|e| io_error(path, e))
    }
}

#[derive(Deserialize)]
struct VersionProbe {
    schema_version: u32,
}

pub(crate) fn io_error(path: &Path, e: std::io::Error) -> Error {
    Error::Io {
        path: path.display().to_string(),
        message: e.to_string(),
    }
}

/// Builds a session from any supported text: a session document is
/// restored, anything else starts a new session with uniform weights.
pub fn load_str(text: &str, format: Format, phi_star: Option<f64>) -> Result<Session> {
    let format = match format {
        Format::Auto => Format::detect(text)?,
        f => f,
    };
    if format == Format::Session {
        return Session::from_json(text);
    }
    Session::new(parse_data(text, format, phi_star)?, None)
}

pub fn load(path: &Path, format: Format) -> Result<Session> {
    let text = std::fs::read_to_string(path).map_err(|e| io_error(path, e))?;
    load_str(&text, format, None)
}

/// The missing comparison whose answer removes the most missing mass:
/// the absent pair with the largest `λ(x)·λ(y)`, ties going to the
/// lexicographically smallest pair. `None` once the matrix is complete.
pub fn suggest_next_pair(session: &Session) -> Result<Option<(String, String)>> {
    let Data::Partial(p) = session.data() else {
        return Err(Error::WrongKind {
            expected: "partial",
            found: session.data().kind().name(),
        });
    };
    let w = session.weights();
    let base = p.base();
    let key = |i: usize, j: usize| {
        let (a, b) = (base.id(i), base.id(j));
        if a <= b {
            (a.to_string(), b.to_string())
        } else {
            (b.to_string(), a.to_string())
        }
    };
    let mut best: Option<(f64, (String, String))> = None;
    for (i, j) in p.absent_pairs() {
        let score = w.get(i) * w.get(j);
        let pair = key(i, j);
        best = match best {
            Some((s, b)) if s > score + 1e-12 || ((s - score).abs() <= 1e-12 && b <= pair) => {
                Some((s, b))
            }
            _ => Some((score, pair)),
        };
    }
    Ok(best.map(|(_, pair)| pair))
}
