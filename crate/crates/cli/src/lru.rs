use std::collections::HashMap;
use std::hash::Hash;

/// Fixed-capacity map that drops the least recently used entry on overflow.
#[derive(Debug)]
pub struct Lru<K, V> {
    capacity: usize,
    tick: u64,
    entries: HashMap<K, (u64, V)>,
}

impl<K: Eq + Hash + Clone, V: Clone> Lru<K, V> {
    pub fn new(capacity: usize) -> Self {
        Self { capacity: capacity.max(1), tick: 0, entries: HashMap::new() }
    }

    pub fn len(&self) -> usize {
        self.entries.len()
    }

    pub fn is_empty(&self) -> bool {
        self.entries.is_empty()
    }

    /// Returns a clone of the value and marks it as used.
    pub fn get(&mut self, key: &K) -> Option<V> {
        self.tick += 1;
        let tick = self.tick;
        self.entries.get_mut(key).map(|(t, v)| {
            *t = tick;
            v.clone()
        })
    }

    /// Inserts and returns the evicted key, if any.
    pub fn insert(&mut self, key: K, value: V) -> Option<K> {
        self.tick += 1;
        let mut evicted = None;
        if !self.entries.contains_key(&key) && self.entries.len() >= self.capacity {
            let oldest = self.entries.iter().min_by_key(|(_, (t, _))| *t).map(|(k, _)| k.clone());
            if let Some(k) = oldest {
                self.entries.remove(&k);
                evicted = Some(k);
            }
        }
        self.entries.insert(key, (self.tick, value));
        evicted
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn evicts_least_recently_used() {
        let mut lru = Lru::new(2);
        assert_eq!(lru.insert("a", 1), None);
        assert_eq!(lru.insert("b", 2), None);
        assert_eq!(lru.get(&"a"), Some(1));
        assert_eq!(lru.insert("c", 3), Some("b"));
        assert_eq!(lru.get(&"b"), None);
        assert_eq!(lru.len(), 2);
    }

    #[test]
    fn reinsert_does_not_evict() {
        let mut lru = Lru::new(1);
        lru.insert(1, "x");
        assert_eq!(lru.insert(1, "y"), None);
        assert_eq!(lru.get(&1), Some("y"));
    }

    #[test]
    fn zero_capacity_holds_one() {
        let mut lru = Lru::new(0);
        lru.insert(1, 1);
        assert_eq!(lru.get(&1), Some(1));
    }
}
