use std::collections::btree_map;
use std::collections::BTreeMap;
use std::fmt;

/// A finite multiset, stored as a map from elements to strictly positive
/// multiplicities. Iteration follows the element order, which keeps every
/// derived output deterministic.
#[derive(Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Multiset<T: Ord> {
    counts: BTreeMap<T, usize>,
}

impl<T: Ord> Default for Multiset<T> {
    fn default() -> Self {
        Multiset { counts: BTreeMap::new() }
    }
}

impl<T: Ord + fmt::Debug> fmt::Debug for Multiset<T> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_map().entries(self.counts.iter()).finish()
    }
}

impl<T: Ord> Multiset<T> {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn singleton(x: T) -> Self {
        let mut m = Self::new();
        m.insert(x);
        m
    }

    pub fn insert(&mut self, x: T) {
        self.insert_n(x, 1);
    }

    pub fn insert_n(&mut self, x: T, n: usize) {
        if n > 0 {
            *self.counts.entry(x).or_insert(0) += n;
        }
    }

    /// Removes one copy of `x`; returns whether a copy was present.
    pub fn remove_one(&mut self, x: &T) -> bool {
        match self.counts.get_mut(x) {
            Some(c) if *c > 1 => {
                *c -= 1;
                true
            }
            Some(_) => {
                self.counts.remove(x);
                true
            }
            None => false,
        }
    }

    /// Multiplicity of `x` (zero when absent).
    pub fn count(&self, x: &T) -> usize {
        self.counts.get(x).copied().unwrap_or(0)
    }

    pub fn contains(&self, x: &T) -> bool {
        self.counts.contains_key(x)
    }

    /// Cardinality, counting multiplicity.
    pub fn len(&self) -> usize {
        self.counts.values().sum()
    }

    pub fn is_empty(&self) -> bool {
        self.counts.is_empty()
    }

    /// Number of distinct elements.
    pub fn support_len(&self) -> usize {
        self.counts.len()
    }

    /// Distinct elements with their multiplicities.
    pub fn iter(&self) -> btree_map::Iter<'_, T, usize> {
        self.counts.iter()
    }

    /// Distinct elements.
    pub fn support(&self) -> btree_map::Keys<'_, T, usize> {
        self.counts.keys()
    }

    /// Every element repeated by its multiplicity.
    pub fn expanded(&self) -> impl Iterator<Item = &T> {
        self.counts.iter().flat_map(|(x, &n)| std::iter::repeat_n(x, n))
    }

    /// Whether every element occurs exactly once.
    pub fn is_set(&self) -> bool {
        self.counts.values().all(|&n| n == 1)
    }

    /// Pointwise `self ≤ other`.
    pub fn is_submultiset(&self, other: &Self) -> bool {
        self.counts.iter().all(|(x, &n)| other.count(x) >= n)
    }
}

impl<T: Ord + Clone> Multiset<T> {
    /// `M(a ⊎ b, s) = M(a, s) + M(b, s)`
    pub fn union(&self, other: &Self) -> Self {
        let mut out = self.clone();
        for (x, &n) in other.iter() {
            out.insert_n(x.clone(), n);
        }
        out
    }

    /// `M(a ∩ b, s) = min(M(a, s), M(b, s))`
    pub fn intersect(&self, other: &Self) -> Self {
        let mut out = Self::new();
        for (x, &n) in self.iter() {
            out.insert_n(x.clone(), n.min(other.count(x)));
        }
        out
    }

    /// `M(a ∖ b, s) = max(M(a, s) − M(b, s), 0)`
    pub fn subtract(&self, other: &Self) -> Self {
        let mut out = Self::new();
        for (x, &n) in self.iter() {
            out.insert_n(x.clone(), n.saturating_sub(other.count(x)));
        }
        out
    }

    pub fn map<U: Ord>(&self, mut f: impl FnMut(&T) -> U) -> Multiset<U> {
        let mut out = Multiset::new();
        for (x, &n) in self.iter() {
            out.insert_n(f(x), n);
        }
        out
    }
}

impl<T: Ord> FromIterator<T> for Multiset<T> {
    fn from_iter<I: IntoIterator<Item = T>>(iter: I) -> Self {
        let mut m = Multiset::new();
        for x in iter {
            m.insert(x);
        }
        m
    }
}

impl<T: Ord> Extend<T> for Multiset<T> {
    fn extend<I: IntoIterator<Item = T>>(&mut self, iter: I) {
        for x in iter {
            self.insert(x);
        }
    }
}
