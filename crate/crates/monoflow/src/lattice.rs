//! Complete-lattice descriptors and the concrete base lattices used by the
//! bundled analyses.
//!
//! A lattice here is a runtime value (a descriptor bundling its data with
//! its operations), not a compile-time-only abstraction: the engine picks
//! lattices from configuration, so descriptors are constructed and passed
//! around like any other value. Lattice elements themselves are immutable
//! and compared structurally.

use std::collections::{BTreeMap, BTreeSet};
use std::fmt::Debug;

use thiserror::Error;

/// Errors raised by checked lattice operations.
#[derive(Debug, Error, PartialEq, Eq)]
pub enum LatticeError {
    /// A value mentions elements that are not part of the lattice universe.
    #[error("value is outside the lattice domain: {0}")]
    OutsideDomain(String),
}

/// A complete lattice of dataflow values.
///
/// `leq`, `join`, and `bottom` are mandatory. `meet` and `top` are optional
/// (only analyses that need them supply them), and `elements` is an optional
/// finite enumeration used by brute-force test oracles on small universes.
pub trait Lattice {
    type Value: Clone + Eq + Debug;

    /// The least element.
    fn bottom(&self) -> Self::Value;

    /// Partial order: `a` carries no more information than `b`.
    fn leq(&self, a: &Self::Value, b: &Self::Value) -> bool;

    /// Least upper bound of `a` and `b`.
    fn join(&self, a: &Self::Value, b: &Self::Value) -> Self::Value;

    /// Greatest lower bound, when the descriptor defines one.
    fn meet(&self, a: &Self::Value, b: &Self::Value) -> Option<Self::Value> {
        let _ = (a, b);
        None
    }

    /// The greatest element, when the descriptor defines one.
    fn top(&self) -> Option<Self::Value> {
        None
    }

    /// Finite enumeration of every element, when the universe is small
    /// enough to list.
    fn elements(&self) -> Option<Vec<Self::Value>> {
        None
    }

    /// Whether `v` is a valid element of this lattice.
    fn contains(&self, v: &Self::Value) -> bool {
        let _ = v;
        true
    }
}

/// `a ⊑ b` expressed through join: `a ⊔ b = b`.
///
/// Agrees with [`Lattice::leq`] on every lattice whose join really is the
/// least upper bound; the law suite samples that agreement.
pub fn leq_via_join<L: Lattice>(lattice: &L, a: &L::Value, b: &L::Value) -> bool {
    lattice.join(a, b) == *b
}

/// Finite powerset lattice: subsets of a fixed universe ordered by
/// inclusion, with union as join and intersection as meet.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PowersetLattice<T: Ord + Clone + Debug> {
    universe: BTreeSet<T>,
}

impl<T: Ord + Clone + Debug> PowersetLattice<T> {
    pub fn new(universe: impl IntoIterator<Item = T>) -> Self {
        Self {
            universe: universe.into_iter().collect(),
        }
    }

    pub fn universe(&self) -> &BTreeSet<T> {
        &self.universe
    }

    /// Union of `a` and `b`, rejecting inputs that stray outside the
    /// universe.
    pub fn checked_join(
        &self,
        a: &BTreeSet<T>,
        b: &BTreeSet<T>,
    ) -> Result<BTreeSet<T>, LatticeError> {
        for v in [a, b] {
            if !v.is_subset(&self.universe) {
                let strays: Vec<_> = v.difference(&self.universe).collect();
                return Err(LatticeError::OutsideDomain(format!("{strays:?}")));
            }
        }
        Ok(self.join(a, b))
    }
}

impl<T: Ord + Clone + Debug> Lattice for PowersetLattice<T> {
    type Value = BTreeSet<T>;

    fn bottom(&self) -> Self::Value {
        BTreeSet::new()
    }

    fn leq(&self, a: &Self::Value, b: &Self::Value) -> bool {
        a.is_subset(b)
    }

    fn join(&self, a: &Self::Value, b: &Self::Value) -> Self::Value {
        a.union(b).cloned().collect()
    }

    fn meet(&self, a: &Self::Value, b: &Self::Value) -> Option<Self::Value> {
        Some(a.intersection(b).cloned().collect())
    }

    fn top(&self) -> Option<Self::Value> {
        Some(self.universe.clone())
    }

    fn elements(&self) -> Option<Vec<Self::Value>> {
        // 2^|universe| values; only enumerable for test-sized universes.
        if self.universe.len() > 12 {
            return None;
        }
        let items: Vec<_> = self.universe.iter().cloned().collect();
        let mut out = Vec::with_capacity(1 << items.len());
        for mask in 0u32..(1 << items.len()) {
            out.push(
                items
                    .iter()
                    .enumerate()
                    .filter(|(i, _)| mask & (1 << i) != 0)
                    .map(|(_, v)| v.clone())
                    .collect(),
            );
        }
        Some(out)
    }

    fn contains(&self, v: &Self::Value) -> bool {
        v.is_subset(&self.universe)
    }
}

/// Element of the flat constant lattice: `⊥ ⊑ Const(n) ⊑ ⊤`, with distinct
/// constants incomparable.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum FlatValue {
    Bottom,
    Const(i64),
    Top,
}

impl std::fmt::Display for FlatValue {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            FlatValue::Bottom => write!(f, "⊥"),
            FlatValue::Const(n) => write!(f, "{n}"),
            FlatValue::Top => write!(f, "⊤"),
        }
    }
}

/// The flat lattice over integer constants. Height exactly 3: any strictly
/// ascending chain stabilizes within two steps.
#[derive(Debug, Clone, Copy, Default, PartialEq, Eq)]
pub struct FlatLattice;

impl Lattice for FlatLattice {
    type Value = FlatValue;

    fn bottom(&self) -> Self::Value {
        FlatValue::Bottom
    }

    fn leq(&self, a: &Self::Value, b: &Self::Value) -> bool {
        match (a, b) {
            (FlatValue::Bottom, _) => true,
            (_, FlatValue::Top) => true,
            (FlatValue::Const(x), FlatValue::Const(y)) => x == y,
            _ => false,
        }
    }

    fn join(&self, a: &Self::Value, b: &Self::Value) -> Self::Value {
        match (a, b) {
            (FlatValue::Bottom, x) | (x, FlatValue::Bottom) => *x,
            (FlatValue::Top, _) | (_, FlatValue::Top) => FlatValue::Top,
            (FlatValue::Const(x), FlatValue::Const(y)) => {
                if x == y {
                    FlatValue::Const(*x)
                } else {
                    FlatValue::Top
                }
            }
        }
    }

    fn meet(&self, a: &Self::Value, b: &Self::Value) -> Option<Self::Value> {
        Some(match (a, b) {
            (FlatValue::Top, x) | (x, FlatValue::Top) => *x,
            (FlatValue::Bottom, _) | (_, FlatValue::Bottom) => FlatValue::Bottom,
            (FlatValue::Const(x), FlatValue::Const(y)) => {
                if x == y {
                    FlatValue::Const(*x)
                } else {
                    FlatValue::Bottom
                }
            }
        })
    }

    fn top(&self) -> Option<Self::Value> {
        Some(FlatValue::Top)
    }
}

/// Pointwise lattice of total maps from a finite key set into a value
/// lattice.
#[derive(Debug, Clone)]
pub struct MapLattice<K: Ord + Clone + Debug, L: Lattice> {
    keys: BTreeSet<K>,
    value_lattice: L,
}

impl<K: Ord + Clone + Debug, L: Lattice> MapLattice<K, L> {
    pub fn new(keys: impl IntoIterator<Item = K>, value_lattice: L) -> Self {
        Self {
            keys: keys.into_iter().collect(),
            value_lattice,
        }
    }

    pub fn keys(&self) -> &BTreeSet<K> {
        &self.keys
    }

    pub fn value_lattice(&self) -> &L {
        &self.value_lattice
    }

    /// Total map binding every key to `v`.
    pub fn constant(&self, v: L::Value) -> BTreeMap<K, L::Value> {
        self.keys.iter().map(|k| (k.clone(), v.clone())).collect()
    }
}

impl<K: Ord + Clone + Debug, L: Lattice> Lattice for MapLattice<K, L> {
    type Value = BTreeMap<K, L::Value>;

    fn bottom(&self) -> Self::Value {
        self.constant(self.value_lattice.bottom())
    }

    fn leq(&self, a: &Self::Value, b: &Self::Value) -> bool {
        self.keys
            .iter()
            .all(|k| self.value_lattice.leq(&a[k], &b[k]))
    }

    fn join(&self, a: &Self::Value, b: &Self::Value) -> Self::Value {
        self.keys
            .iter()
            .map(|k| (k.clone(), self.value_lattice.join(&a[k], &b[k])))
            .collect()
    }

    fn meet(&self, a: &Self::Value, b: &Self::Value) -> Option<Self::Value> {
        self.keys
            .iter()
            .map(|k| Some((k.clone(), self.value_lattice.meet(&a[k], &b[k])?)))
            .collect()
    }

    fn top(&self) -> Option<Self::Value> {
        Some(self.constant(self.value_lattice.top()?))
    }

    fn elements(&self) -> Option<Vec<Self::Value>> {
        let inner = self.value_lattice.elements()?;
        if inner.len().checked_pow(self.keys.len() as u32)? > 4096 {
            return None;
        }
        let mut out = vec![BTreeMap::new()];
        for k in &self.keys {
            out = out
                .into_iter()
                .flat_map(|m| {
                    inner.iter().map(move |v| {
                        let mut m = m.clone();
                        m.insert(k.clone(), v.clone());
                        m
                    })
                })
                .collect();
        }
        Some(out)
    }

    fn contains(&self, v: &Self::Value) -> bool {
        v.len() == self.keys.len()
            && self
                .keys
                .iter()
                .all(|k| v.get(k).is_some_and(|x| self.value_lattice.contains(x)))
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn set(items: &[&str]) -> BTreeSet<String> {
        items.iter().map(|s| s.to_string()).collect()
    }

    /// Scan the full enumeration for the unique minimal upper bound.
    /// Independent of `join`; only uses `leq`.
    fn brute_force_lub<L: Lattice>(lat: &L, a: &L::Value, b: &L::Value) -> L::Value {
        let elems = lat.elements().expect("enumerable lattice");
        let uppers: Vec<_> = elems
            .iter()
            .filter(|c| lat.leq(a, c) && lat.leq(b, c))
            .collect();
        let lub = uppers
            .iter()
            .find(|c| uppers.iter().all(|u| lat.leq(c, u)))
            .expect("least upper bound exists");
        (*lub).clone()
    }

    #[test]
    fn powerset_join_examples() {
        let lat = PowersetLattice::new(["x", "y", "z"]);
        assert_eq!(
            lat.join(&BTreeSet::from(["x"]), &BTreeSet::from(["y"])),
            BTreeSet::from(["x", "y"])
        );
        let a = BTreeSet::from(["x", "z"]);
        assert_eq!(lat.join(&a, &lat.bottom()), a);
    }

    #[test]
    fn powerset_join_matches_brute_force_on_all_pairs() {
        let lat = PowersetLattice::new(["a", "b", "c"]);
        let elems = lat.elements().unwrap();
        assert_eq!(elems.len(), 8);
        for x in &elems {
            for y in &elems {
                assert_eq!(lat.join(x, y), brute_force_lub(&lat, x, y));
            }
        }
    }

    #[test]
    fn powerset_checked_join_rejects_outside_universe() {
        let lat = PowersetLattice::new(["x", "y"]);
        let err = lat
            .checked_join(&BTreeSet::from(["x"]), &BTreeSet::from(["q"]))
            .unwrap_err();
        assert!(matches!(err, LatticeError::OutsideDomain(_)));
        assert!(lat
            .checked_join(&BTreeSet::from(["x"]), &BTreeSet::from(["y"]))
            .is_ok());
    }

    #[test]
    fn flat_join_examples() {
        let lat = FlatLattice;
        assert_eq!(
            lat.join(&FlatValue::Bottom, &FlatValue::Const(3)),
            FlatValue::Const(3)
        );
        assert_eq!(
            lat.join(&FlatValue::Const(3), &FlatValue::Const(3)),
            FlatValue::Const(3)
        );
        // The only upper bound of two distinct constants is ⊤.
        assert_eq!(
            lat.join(&FlatValue::Const(3), &FlatValue::Const(4)),
            FlatValue::Top
        );
    }

    #[test]
    fn flat_chains_stabilize_within_two_steps() {
        let lat = FlatLattice;
        for start in [FlatValue::Bottom, FlatValue::Const(7), FlatValue::Top] {
            let mut cur = start;
            let mut strict_steps = 0;
            for next in [FlatValue::Const(1), FlatValue::Const(2), FlatValue::Top] {
                let joined = lat.join(&cur, &next);
                if joined != cur {
                    strict_steps += 1;
                }
                cur = joined;
            }
            assert!(strict_steps <= 2);
        }
    }

    #[test]
    fn leq_via_join_examples() {
        let lat = PowersetLattice::new(["x", "y"]);
        assert!(leq_via_join(
            &lat,
            &BTreeSet::from(["x"]),
            &BTreeSet::from(["x", "y"])
        ));
        assert!(!leq_via_join(
            &lat,
            &BTreeSet::from(["x"]),
            &BTreeSet::from(["y"])
        ));
    }

    #[test]
    fn map_lattice_pointwise_laws_on_enumeration() {
        let lat = MapLattice::new(["x", "y"], FlatLattice);
        let tops = lat.top().unwrap();
        let bots = lat.bottom();
        assert!(lat.leq(&bots, &tops));
        let mut a = lat.constant(FlatValue::Top);
        a.insert("x", FlatValue::Const(1));
        let mut b = lat.constant(FlatValue::Bottom);
        b.insert("x", FlatValue::Const(1));
        assert!(lat.leq(&b, &a));
        assert_eq!(lat.join(&a, &b), a);
        assert_eq!(lat.meet(&a, &b), Some(b.clone()));
        assert!(lat.contains(&a));
        let mut partial = a.clone();
        partial.remove("y");
        assert!(!lat.contains(&partial));
    }

    #[test]
    fn map_lattice_join_matches_brute_force() {
        // Key set {k}, inner lattice 𝒫({a,b}) keeps the enumeration small.
        let inner = PowersetLattice::new(["a", "b"]);
        let lat = MapLattice::new(["k"], inner);
        let elems = lat.elements().unwrap();
        assert_eq!(elems.len(), 4);
        for x in &elems {
            for y in &elems {
                assert_eq!(lat.join(x, y), brute_force_lub(&lat, x, y));
            }
        }
    }

    #[test]
    fn absorption_laws_hold_where_meet_is_defined() {
        let lat = PowersetLattice::new(["a", "b", "c"]);
        let elems = lat.elements().unwrap();
        for x in &elems {
            for y in &elems {
                let m = lat.meet(x, y).unwrap();
                assert_eq!(lat.join(x, &m), *x);
                let j = lat.join(x, y);
                assert_eq!(lat.meet(x, &j).unwrap(), *x);
            }
        }
    }

    #[test]
    fn ascending_chains_stabilize_within_height_bounds() {
        let mut state = 0xfeed_5eedu64;
        let mut next = || {
            state = state.wrapping_mul(6364136223846793005).wrapping_add(1);
            (state >> 33) as usize
        };

        // Powerset: at most |universe| strict steps.
        let powerset = PowersetLattice::new(["a", "b", "c", "d"]);
        let elems = powerset.elements().unwrap();
        for _ in 0..100 {
            let mut cur = powerset.bottom();
            let mut strict = 0;
            for _ in 0..32 {
                let joined = powerset.join(&cur, &elems[next() % elems.len()]);
                if joined != cur {
                    strict += 1;
                }
                cur = joined;
            }
            assert!(strict <= powerset.universe().len() + 1);
        }

        // Map lattice: at most |keys| × (flat height) strict steps.
        let map = MapLattice::new(["x", "y", "z"], FlatLattice);
        let consts = [
            FlatValue::Bottom,
            FlatValue::Const(1),
            FlatValue::Const(2),
            FlatValue::Top,
        ];
        for _ in 0..100 {
            let mut cur = map.bottom();
            let mut strict = 0;
            for _ in 0..32 {
                let step: BTreeMap<&str, FlatValue> = map
                    .keys()
                    .iter()
                    .map(|k| (*k, consts[next() % consts.len()]))
                    .collect();
                let joined = map.join(&cur, &step);
                if joined != cur {
                    strict += 1;
                }
                cur = joined;
            }
            assert!(strict <= map.keys().len() * 3);
        }
    }

    #[test]
    fn leq_agrees_with_join_characterization_sampled() {
        // Deterministic pseudo-random subsets of a 4-element universe.
        let lat = PowersetLattice::new(["a", "b", "c", "d"]);
        let elems = lat.elements().unwrap();
        let mut state = 0x9e3779b97f4a7c15u64;
        let mut next = || {
            state = state.wrapping_mul(6364136223846793005).wrapping_add(1);
            (state >> 33) as usize
        };
        for _ in 0..1000 {
            let a = &elems[next() % elems.len()];
            let b = &elems[next() % elems.len()];
            assert_eq!(lat.leq(a, b), leq_via_join(&lat, a, b));
        }
    }

    #[test]
    fn string_universe_powerset_ops() {
        let lat = PowersetLattice::new(set(&["p", "q"]));
        assert_eq!(lat.top().unwrap(), set(&["p", "q"]));
        assert_eq!(
            lat.meet(&set(&["p"]), &set(&["p", "q"])).unwrap(),
            set(&["p"])
        );
    }
}
