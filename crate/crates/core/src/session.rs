//! Bounded store of interactive mutation sessions, evicting the least
//! recently used session when full.

use std::collections::HashMap;

use serde_json::{json, Value};
use thiserror::Error;

use crate::quiver::{Quiver, QuiverError};

pub const DEFAULT_SESSION_CAPACITY: usize = 256;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum SessionError {
    #[error("no session {0:?}")]
    NotFound(String),
    #[error("session {0:?} has nothing to undo")]
    NothingToUndo(String),
    #[error(transparent)]
    Quiver(#[from] QuiverError),
}

#[derive(Debug, Clone)]
pub struct Session {
    pub id: String,
    pub quiver: Quiver,
    /// Earlier states, oldest first.
    pub history: Vec<Quiver>,
    /// Vertices mutated so far, aligned with `history`.
    pub mutations: Vec<usize>,
    last_used: u64,
}

impl Session {
    /// JSON view served by the HTTP API.
    pub fn state(&self) -> Value {
        json!({
            "session": self.id,
            "quiver": self.quiver,
            "n": self.quiver.n(),
            "arrow_count": self.quiver.arrow_count(),
            "degrees": self.quiver.degree_profile(),
            "history": self.mutations,
        })
    }
}

#[derive(Debug)]
pub struct SessionStore {
    capacity: usize,
    sessions: HashMap<String, Session>,
    clock: u64,
    next_id: u64,
}

impl Default for SessionStore {
    fn default() -> Self {
        Self::new(DEFAULT_SESSION_CAPACITY)
    }
}

impl SessionStore {
    pub fn new(capacity: usize) -> Self {
        Self { capacity: capacity.max(1), sessions: HashMap::new(), clock: 0, next_id: 1 }
    }

    pub fn len(&self) -> usize {
        self.sessions.len()
    }

    pub fn is_empty(&self) -> bool {
        self.sessions.is_empty()
    }

    fn tick(&mut self) -> u64 {
        self.clock += 1;
        self.clock
    }

    pub fn create(&mut self, quiver: Quiver) -> &Session {
        if self.sessions.len() >= self.capacity {
            if let Some(oldest) = self.sessions.values().min_by_key(|s| s.last_used).map(|s| s.id.clone()) {
                self.sessions.remove(&oldest);
            }
        }
        let id = format!("s{}", self.next_id);
        self.next_id += 1;
        let last_used = self.tick();
        let session = Session { id: id.clone(), quiver, history: Vec::new(), mutations: Vec::new(), last_used };
        self.sessions.entry(id).or_insert(session)
    }

    fn touch(&mut self, id: &str) -> Result<&mut Session, SessionError> {
        let now = self.tick();
        let s = self.sessions.get_mut(id).ok_or_else(|| SessionError::NotFound(id.to_string()))?;
        s.last_used = now;
        Ok(s)
    }

    pub fn get(&mut self, id: &str) -> Result<&Session, SessionError> {
        self.touch(id).map(|s| &*s)
    }

    pub fn mutate(&mut self, id: &str, vertex: usize) -> Result<&Session, SessionError> {
        let s = self.touch(id)?;
        let next = s.quiver.mutate(vertex)?;
        s.history.push(std::mem::replace(&mut s.quiver, next));
        s.mutations.push(vertex);
        Ok(s)
    }

    pub fn undo(&mut self, id: &str) -> Result<&Session, SessionError> {
        let s = self.touch(id)?;
        let prev = s.history.pop().ok_or_else(|| SessionError::NothingToUndo(id.to_string()))?;
        s.quiver = prev;
        s.mutations.pop();
        Ok(s)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn markov() -> Quiver {
        Quiver::from_arrows(3, &[(0, 1, 2), (1, 2, 2), (2, 0, 2)]).unwrap()
    }

    #[test]
    fn mutate_and_undo() {
        let mut store = SessionStore::new(4);
        let id = store.create(markov()).id.clone();
        let after = store.mutate(&id, 0).unwrap().quiver.clone();
        assert_eq!(after, markov().mutate(0).unwrap());
        assert_eq!(store.get(&id).unwrap().state()["history"], json!([0]));
        assert_eq!(store.undo(&id).unwrap().quiver, markov());
        assert!(matches!(store.undo(&id), Err(SessionError::NothingToUndo(_))));
        assert!(matches!(store.mutate(&id, 7), Err(SessionError::Quiver(_))));
        assert!(matches!(store.get("zz"), Err(SessionError::NotFound(_))));
    }

    #[test]
    fn evicts_least_recently_used() {
        let mut store = SessionStore::new(2);
        let a = store.create(markov()).id.clone();
        let b = store.create(markov()).id.clone();
        store.get(&a).unwrap();
        let c = store.create(markov()).id.clone();
        assert_eq!(store.len(), 2);
        assert!(store.get(&b).is_err());
        assert!(store.get(&a).is_ok() && store.get(&c).is_ok());
    }
}
