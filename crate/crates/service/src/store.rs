use std::num::NonZeroUsize;
use std::sync::{Arc, Mutex};
use std::time::SystemTime;

use lru::LruCache;
use ndviz_core::{ExploreOptions, Symbol, Visualization};

/// A precomputed run. Immutable once created.
#[derive(Debug)]
pub struct Session {
    pub id: String,
    pub word: Vec<Symbol>,
    pub options: ExploreOptions,
    pub visualization: Visualization,
    pub created_at: SystemTime,
}

/// In-memory sessions, least recently used evicted first.
#[derive(Debug)]
pub struct SessionStore {
    inner: Mutex<LruCache<String, Arc<Session>>>,
}

impl SessionStore {
    pub fn new(capacity: NonZeroUsize) -> Self {
        SessionStore {
            inner: Mutex::new(LruCache::new(capacity)),
        }
    }

    pub fn insert(&self, session: Session) -> Arc<Session> {
        let session = Arc::new(session);
        self.lock().put(session.id.clone(), session.clone());
        session
    }

    pub fn get(&self, id: &str) -> Option<Arc<Session>> {
        self.lock().get(id).cloned()
    }

    pub fn remove(&self, id: &str) -> bool {
        self.lock().pop(id).is_some()
    }

    pub fn len(&self) -> usize {
        self.lock().len()
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }

    fn lock(&self) -> std::sync::MutexGuard<'_, LruCache<String, Arc<Session>>> {
        // Entries are immutable, so a panic elsewhere cannot leave them torn.
        self.inner.lock().unwrap_or_else(|e| e.into_inner())
    }
}
