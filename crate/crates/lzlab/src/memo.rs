//! Concurrent compute-once memo table.

use std::collections::HashMap;
use std::hash::Hash;
use std::sync::{Arc, Mutex, OnceLock};

/// `Mutex<HashMap>` of `OnceLock` cells: the map lock is held only while
/// looking up the cell, and the (possibly expensive) computation runs inside
/// `OnceLock::get_or_init`, so each key is evaluated at most once even under
/// concurrent access.
pub struct Memo<K, V> {
    inner: Mutex<HashMap<K, Arc<OnceLock<V>>>>,
}

impl<K: Eq + Hash + Clone, V: Clone> Memo<K, V> {
    pub fn new() -> Self {
        Memo {
            inner: Mutex::new(HashMap::new()),
        }
    }

    pub fn get_or_compute(&self, key: K, compute: impl FnOnce() -> V) -> V {
        let cell = {
            let mut map = self.inner.lock().unwrap();
            Arc::clone(map.entry(key).or_default())
        };
        cell.get_or_init(compute).clone()
    }

    /// Pre-populate a key (used when reloading a persisted cache). A key that
    /// is already set keeps its existing value.
    pub fn preload(&self, key: K, value: V) {
        let cell = {
            let mut map = self.inner.lock().unwrap();
            Arc::clone(map.entry(key).or_default())
        };
        let _ = cell.set(value);
    }

    /// Snapshot of all fully computed entries.
    pub fn snapshot(&self) -> Vec<(K, V)> {
        let map = self.inner.lock().unwrap();
        map.iter()
            .filter_map(|(k, c)| c.get().map(|v| (k.clone(), v.clone())))
            .collect()
    }
}

impl<K: Eq + Hash + Clone, V: Clone> Default for Memo<K, V> {
    fn default() -> Self {
        Self::new()
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::sync::atomic::{AtomicUsize, Ordering};

    #[test]
    fn computes_each_key_at_most_once_under_contention() {
        let memo: Arc<Memo<u32, u64>> = Arc::new(Memo::new());
        let evals = Arc::new(AtomicUsize::new(0));
        let mut handles = Vec::new();
        for _ in 0..8 {
            let memo = Arc::clone(&memo);
            let evals = Arc::clone(&evals);
            handles.push(std::thread::spawn(move || {
                for round in 0..100u32 {
                    let key = round % 10;
                    let got = memo.get_or_compute(key, || {
                        evals.fetch_add(1, Ordering::SeqCst);
                        u64::from(key) * 3
                    });
                    assert_eq!(got, u64::from(key) * 3);
                }
            }));
        }
        for h in handles {
            h.join().unwrap();
        }
        assert_eq!(evals.load(Ordering::SeqCst), 10);
    }
}
