//! In-memory session store. Each session sits behind its own lock, so
//! mutations of one session are serialized while reads proceed in
//! parallel and different sessions never contend.

use std::collections::HashMap;
use std::sync::Arc;

use parking_lot::RwLock;

use crate::error::{Error, Result};
use crate::session::Session;

#[derive(Debug, Default)]
pub struct SessionStore {
    sessions: RwLock<HashMap<String, Arc<RwLock<Session>>>>,
}

impl SessionStore {
    pub fn new() -> Self {
        Self::default()
    }

    /// Stores `session` and returns its id.
    pub fn insert(&self, session: Session) -> String {
        let id = session.id().to_string();
        self.sessions
            .write()
            .insert(id.clone(), Arc::new(RwLock::new(session)));
        id
    }

    fn entry(&self, id: &str) -> Result<Arc<RwLock<Session>>> {
        self.sessions
            .read()
            .get(id)
            .cloned()
            .ok_or_else(|| Error::UnknownSession(id.to_string()))
    }

    pub fn read<T>(&self, id: &str, f: impl FnOnce(&Session) -> Result<T>) -> Result<T> {
        let entry = self.entry(id)?;
        let guard = entry.read();
        f(&guard)
    }

    /// Runs `f` with exclusive access. `f` sees a copy; the stored session
    /// is replaced only when `f` succeeds.
    pub fn update<T>(&self, id: &str, f: impl FnOnce(&mut Session) -> Result<T>) -> Result<T> {
        let entry = self.entry(id)?;
        let mut guard = entry.write();
        let mut draft = guard.clone();
        let out = f(&mut draft)?;
        *guard = draft;
        Ok(out)
    }

    pub fn len(&self) -> usize {
        self.sessions.read().len()
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }
}
