//! Finite partial maps `S ⇀ M` into a value lattice, under two orders.
//!
//! The straightforward order (`leq_partial`) requires domain containment and
//! pointwise ordering; it is antisymmetric, and the engine's solver uses it
//! for stabilization checks. The derived-total order (`leq_derived`) compares
//! maps through their lifts to total functions; it is reflexive and
//! transitive but not antisymmetric, and becomes a partial order only on the
//! quotient by [`PartialMap::eq_up`] (represented by [`EqUpClass`]).
//! `alpha`/`gamma` form the Galois connection between the two spaces.

use std::collections::{BTreeMap, BTreeSet};
use std::fmt::Debug;

use thiserror::Error;

use crate::lattice::Lattice;

#[derive(Debug, Error, PartialEq, Eq)]
pub enum PartialMapError {
    /// `meet_partial` was asked for but the value lattice defines no meet.
    #[error("the value lattice does not define a meet")]
    MeetUnsupported,
}

/// A finite partial function from keys into a value lattice. Each key is
/// bound at most once; the domain is exactly the set of bound keys.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash, Default)]
pub struct PartialMap<K: Ord + Clone + Debug, V: Clone + Eq + Debug> {
    entries: BTreeMap<K, V>,
}

impl<K: Ord + Clone + Debug, V: Clone + Eq + Debug> PartialMap<K, V> {
    /// The nowhere-defined map, the bottom of the straightforward lattice.
    pub fn empty() -> Self {
        PartialMap {
            entries: BTreeMap::new(),
        }
    }

    pub fn singleton(key: K, value: V) -> Self {
        PartialMap {
            entries: BTreeMap::from([(key, value)]),
        }
    }

    pub fn from_pairs(pairs: impl IntoIterator<Item = (K, V)>) -> Self {
        PartialMap {
            entries: pairs.into_iter().collect(),
        }
    }

    pub fn insert(&mut self, key: K, value: V) {
        self.entries.insert(key, value);
    }

    pub fn get(&self, key: &K) -> Option<&V> {
        self.entries.get(key)
    }

    pub fn dom(&self) -> impl Iterator<Item = &K> {
        self.entries.keys()
    }

    pub fn iter(&self) -> impl Iterator<Item = (&K, &V)> {
        self.entries.iter()
    }

    pub fn len(&self) -> usize {
        self.entries.len()
    }

    pub fn is_empty(&self) -> bool {
        self.entries.is_empty()
    }

    /// `↑f(s)`: the bound value at `key`, or the value lattice's bottom.
    pub fn lookup_lifted<L>(&self, key: &K, m: &L) -> V
    where
        L: Lattice<Value = V>,
    {
        self.entries
            .get(key)
            .cloned()
            .unwrap_or_else(|| m.bottom())
    }

    /// `↑f`: the total map over `universe` agreeing with `self` and bound to
    /// bottom elsewhere. Idempotent: lifting a lifted map changes nothing.
    pub fn lift<L>(&self, universe: &BTreeSet<K>, m: &L) -> Self
    where
        L: Lattice<Value = V>,
    {
        PartialMap {
            entries: universe
                .iter()
                .map(|k| (k.clone(), self.lookup_lifted(k, m)))
                .collect(),
        }
    }

    /// Straightforward order: `dom(self) ⊆ dom(other)` and pointwise `⊑_M`
    /// on `dom(self)`.
    pub fn leq_partial<L>(&self, other: &Self, m: &L) -> bool
    where
        L: Lattice<Value = V>,
    {
        self.entries
            .iter()
            .all(|(k, v)| other.entries.get(k).is_some_and(|w| m.leq(v, w)))
    }

    /// Least upper bound in the straightforward lattice: defined on
    /// `dom(self) ∪ dom(other)`, joining lifted values pointwise.
    pub fn join_partial<L>(&self, other: &Self, m: &L) -> Self
    where
        L: Lattice<Value = V>,
    {
        let mut entries = self.entries.clone();
        for (k, w) in &other.entries {
            match entries.get_mut(k) {
                Some(v) => *v = m.join(v, w),
                None => {
                    entries.insert(k.clone(), w.clone());
                }
            }
        }
        PartialMap { entries }
    }

    /// Greatest lower bound: pointwise meet over `dom(self) ∩ dom(other)`.
    pub fn meet_partial<L>(&self, other: &Self, m: &L) -> Result<Self, PartialMapError>
    where
        L: Lattice<Value = V>,
    {
        let mut entries = BTreeMap::new();
        for (k, v) in &self.entries {
            if let Some(w) = other.entries.get(k) {
                let met = m.meet(v, w).ok_or(PartialMapError::MeetUnsupported)?;
                entries.insert(k.clone(), met);
            }
        }
        Ok(PartialMap { entries })
    }

    /// Derived-total order: `∀ s ∈ dom(self), self(s) ⊑_M ↑other(s)`, i.e.
    /// the lifts compare pointwise. Not antisymmetric on raw maps.
    pub fn leq_derived<L>(&self, other: &Self, m: &L) -> bool
    where
        L: Lattice<Value = V>,
    {
        self.entries
            .iter()
            .all(|(k, v)| m.leq(v, &other.lookup_lifted(k, m)))
    }

    /// `=↑`: the lifts of the two maps are equal. Equivalent to
    /// `leq_derived` holding both ways.
    pub fn eq_up<L>(&self, other: &Self, m: &L) -> bool
    where
        L: Lattice<Value = V>,
    {
        self.canonical(m) == other.canonical(m)
    }

    /// Join in the derived-total space (`⋎`): pointwise join on the shared
    /// domain, and the sole bound value where only one side is defined.
    pub fn join_derived<L>(&self, other: &Self, m: &L) -> Self
    where
        L: Lattice<Value = V>,
    {
        let mut entries = self.entries.clone();
        for (k, w) in &other.entries {
            match entries.get_mut(k) {
                Some(v) => *v = m.join(v, w),
                None => {
                    entries.insert(k.clone(), w.clone());
                }
            }
        }
        PartialMap { entries }
    }

    /// Canonical member of this map's `=↑` class: every binding to the value
    /// lattice's bottom removed.
    pub fn canonical<L>(&self, m: &L) -> Self
    where
        L: Lattice<Value = V>,
    {
        let bottom = m.bottom();
        PartialMap {
            entries: self
                .entries
                .iter()
                .filter(|(_, v)| **v != bottom)
                .map(|(k, v)| (k.clone(), v.clone()))
                .collect(),
        }
    }
}

impl<K: Ord + Clone + Debug, V: Clone + Eq + Debug> FromIterator<(K, V)> for PartialMap<K, V> {
    fn from_iter<I: IntoIterator<Item = (K, V)>>(iter: I) -> Self {
        PartialMap::from_pairs(iter)
    }
}

/// An `=↑` equivalence class of partial maps, stored by its canonical
/// representative (no key bound to bottom). Two maps are in the same class
/// exactly when their lifts are equal.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct EqUpClass<K: Ord + Clone + Debug, V: Clone + Eq + Debug> {
    representative: PartialMap<K, V>,
}

impl<K: Ord + Clone + Debug, V: Clone + Eq + Debug> EqUpClass<K, V> {
    pub fn representative(&self) -> &PartialMap<K, V> {
        &self.representative
    }

    /// Class-level `⋎`.
    pub fn join<L>(&self, other: &Self, m: &L) -> Self
    where
        L: Lattice<Value = V>,
    {
        alpha(&self.representative.join_derived(&other.representative, m), m)
    }

    /// Class-level `≼`.
    pub fn leq<L>(&self, other: &Self, m: &L) -> bool
    where
        L: Lattice<Value = V>,
    {
        self.representative.leq_derived(&other.representative, m)
    }
}

/// `α(f) = ↑f`: the abstraction of a partial map into its `=↑` class.
pub fn alpha<K, V, L>(f: &PartialMap<K, V>, m: &L) -> EqUpClass<K, V>
where
    K: Ord + Clone + Debug,
    V: Clone + Eq + Debug,
    L: Lattice<Value = V>,
{
    EqUpClass {
        representative: f.canonical(m),
    }
}

/// `γ(c) = max_⊑ c`: the concretization of a class as its ⊑-greatest member,
/// the total map over `universe` lifting the representative.
pub fn gamma<K, V, L>(c: &EqUpClass<K, V>, universe: &BTreeSet<K>, m: &L) -> PartialMap<K, V>
where
    K: Ord + Clone + Debug,
    V: Clone + Eq + Debug,
    L: Lattice<Value = V>,
{
    c.representative.lift(universe, m)
}
