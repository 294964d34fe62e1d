use std::cell::{Ref, RefCell, RefMut};
use std::fmt;
use std::ops::{BitAnd, BitOr, Not, Sub};
use std::rc::Rc;

use super::bdd::{NodeId, Store, FALSE, TRUE};
use super::space::{Feature, FeatureSpace, PartialConfig, TotalConfig};
use crate::error::{Error, Result};

struct EngineInner {
    space: FeatureSpace,
    store: RefCell<Store>,
}

/// Owns the decision-diagram node store for one feature space.
///
/// An engine and every [`ConfigSet`] built from it are confined to a single
/// thread; independent engines can live on different threads.
#[derive(Clone)]
pub struct Engine(Rc<EngineInner>);

impl Engine {
    pub fn new(space: &FeatureSpace) -> Engine {
        Engine(Rc::new(EngineInner {
            space: space.clone(),
            store: RefCell::new(Store::new(space.len())),
        }))
    }

    pub fn space(&self) -> &FeatureSpace {
        &self.0.space
    }

    pub(crate) fn store(&self) -> Ref<'_, Store> {
        self.0.store.borrow()
    }

    pub(crate) fn store_mut(&self) -> RefMut<'_, Store> {
        self.0.store.borrow_mut()
    }

    pub(crate) fn wrap(&self, root: NodeId) -> ConfigSet {
        ConfigSet {
            engine: self.clone(),
            root,
        }
    }

    pub fn same(&self, other: &Engine) -> bool {
        Rc::ptr_eq(&self.0, &other.0)
    }

    /// Number of nodes allocated so far, terminals included.
    pub fn node_count(&self) -> usize {
        self.store().len()
    }

    pub fn empty(&self) -> ConfigSet {
        self.wrap(FALSE)
    }

    /// Every total configuration of the space.
    pub fn full(&self) -> ConfigSet {
        self.wrap(TRUE)
    }

    pub fn literal(&self, feature: Feature, value: bool) -> ConfigSet {
        let root = self.store_mut().literal(feature.index() as u32, value);
        self.wrap(root)
    }

    /// The cube of all total configurations agreeing with `p` on its support.
    ///
    /// Panics if `p` belongs to a different feature space.
    pub fn semantics(&self, p: &PartialConfig) -> ConfigSet {
        assert!(p.space() == self.space(), "partial configuration from a foreign space");
        let root = self.store_mut().cube(p.support_mask(), p.value_mask());
        self.wrap(root)
    }

    pub fn singleton(&self, config: &TotalConfig) -> ConfigSet {
        self.semantics(&PartialConfig::from_total(config))
    }

    /// Builds the set of the given configurations; duplicates are ignored.
    pub fn from_configs<'a, I>(&self, configs: I) -> ConfigSet
    where
        I: IntoIterator<Item = &'a TotalConfig>,
    {
        let width = self.space().len();
        let mut bits: Vec<u64> = configs.into_iter().map(|c| c.bits()).collect();
        bits.sort_unstable_by_key(|&b| super::space::lex_key(b, width));
        bits.dedup();
        let root = self.store_mut().build_members(&bits);
        self.wrap(root)
    }
}

impl fmt::Debug for Engine {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("Engine")
            .field("space", self.space())
            .field("nodes", &self.node_count())
            .finish()
    }
}

/// A set of total configurations in canonical form.
///
/// Two sets from the same engine are equal iff they denote the same set, and
/// equality is a constant-time root comparison.
#[derive(Clone)]
pub struct ConfigSet {
    engine: Engine,
    root: NodeId,
}

impl ConfigSet {
    pub fn engine(&self) -> &Engine {
        &self.engine
    }

    pub fn space(&self) -> &FeatureSpace {
        self.engine.space()
    }

    pub(crate) fn root(&self) -> NodeId {
        self.root
    }

    fn check(&self, other: &ConfigSet) -> Result<()> {
        if self.engine.same(&other.engine) {
            Ok(())
        } else {
            Err(Error::SpaceMismatch)
        }
    }

    pub fn union(&self, other: &ConfigSet) -> Result<ConfigSet> {
        self.check(other)?;
        let root = self.engine.store_mut().or(self.root, other.root);
        Ok(self.engine.wrap(root))
    }

    pub fn intersect(&self, other: &ConfigSet) -> Result<ConfigSet> {
        self.check(other)?;
        let root = self.engine.store_mut().and(self.root, other.root);
        Ok(self.engine.wrap(root))
    }

    pub fn difference(&self, other: &ConfigSet) -> Result<ConfigSet> {
        self.check(other)?;
        let root = self.engine.store_mut().diff(self.root, other.root);
        Ok(self.engine.wrap(root))
    }

    pub fn symmetric_difference(&self, other: &ConfigSet) -> Result<ConfigSet> {
        self.check(other)?;
        let root = self.engine.store_mut().xor(self.root, other.root);
        Ok(self.engine.wrap(root))
    }

    /// Complement within all total configurations of the space.
    pub fn complement(&self) -> ConfigSet {
        let root = self.engine.store_mut().not(self.root);
        self.engine.wrap(root)
    }

    pub fn is_subset(&self, other: &ConfigSet) -> Result<bool> {
        self.check(other)?;
        Ok(self.engine.store_mut().diff(self.root, other.root) == FALSE)
    }

    /// Whether the two sets share a configuration.
    pub fn intersects(&self, other: &ConfigSet) -> Result<bool> {
        self.check(other)?;
        Ok(self.engine.store_mut().and(self.root, other.root) != FALSE)
    }

    pub fn is_empty(&self) -> bool {
        self.root == FALSE
    }

    pub fn is_full(&self) -> bool {
        self.root == TRUE
    }

    pub fn count(&self) -> u128 {
        self.engine.store_mut().count(self.root)
    }

    pub fn contains(&self, config: &TotalConfig) -> bool {
        debug_assert!(config.space() == self.space());
        self.engine.store().contains(self.root, config.bits())
    }

    /// Whether the cube of `p` lies inside this set.
    pub fn contains_cube(&self, p: &PartialConfig) -> bool {
        let mut store = self.engine.store_mut();
        let cube = store.cube(p.support_mask(), p.value_mask());
        store.diff(cube, self.root) == FALSE
    }

    /// Whether the cube of `p` meets this set.
    pub fn meets_cube(&self, p: &PartialConfig) -> bool {
        let mut store = self.engine.store_mut();
        let cube = store.cube(p.support_mask(), p.value_mask());
        store.and(cube, self.root) != FALSE
    }

    /// Intersection with the cube of `p`.
    pub fn restrict_to(&self, p: &PartialConfig) -> ConfigSet {
        let mut store = self.engine.store_mut();
        let cube = store.cube(p.support_mask(), p.value_mask());
        let root = store.and(cube, self.root);
        drop(store);
        self.engine.wrap(root)
    }

    /// The lexicographically least member.
    pub fn min_config(&self) -> Option<TotalConfig> {
        let bits = self.engine.store().min_member(self.root)?;
        Some(TotalConfig::from_bits(self.space(), bits))
    }

    /// Visits members in lexicographic bit-string order (declaration order,
    /// false before true).
    pub fn for_each_config(&self, mut f: impl FnMut(TotalConfig)) {
        let space = self.space().clone();
        self.engine
            .store()
            .for_each_member(self.root, &mut |bits| f(TotalConfig::from_bits(&space, bits)));
    }

    /// All members in lexicographic bit-string order.
    pub fn configs(&self) -> Vec<TotalConfig> {
        let mut out = Vec::new();
        self.for_each_config(|c| out.push(c));
        out
    }

    /// Number of internal diagram nodes reachable from this set.
    pub fn size(&self) -> usize {
        self.engine.store().reachable(self.root).len()
    }
}

impl PartialEq for ConfigSet {
    fn eq(&self, other: &Self) -> bool {
        self.engine.same(&other.engine) && self.root == other.root
    }
}

impl Eq for ConfigSet {}

impl fmt::Debug for ConfigSet {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        const SHOWN: usize = 16;
        let mut shown = Vec::new();
        let mut total = 0usize;
        self.for_each_config(|c| {
            if shown.len() < SHOWN {
                shown.push(c.to_string());
            }
            total += 1;
        });
        if total > SHOWN {
            shown.push(format!("... ({total} total)"));
        }
        f.debug_set().entries(shown).finish()
    }
}

// Operator forms panic on engine mismatch; the named methods return errors.

impl BitOr for &ConfigSet {
    type Output = ConfigSet;
    fn bitor(self, rhs: &ConfigSet) -> ConfigSet {
        self.union(rhs).expect("config sets from different engines")
    }
}

impl BitAnd for &ConfigSet {
    type Output = ConfigSet;
    fn bitand(self, rhs: &ConfigSet) -> ConfigSet {
        self.intersect(rhs).expect("config sets from different engines")
    }
}

impl Sub for &ConfigSet {
    type Output = ConfigSet;
    fn sub(self, rhs: &ConfigSet) -> ConfigSet {
        self.difference(rhs).expect("config sets from different engines")
    }
}

impl Not for &ConfigSet {
    type Output = ConfigSet;
    fn not(self) -> ConfigSet {
        self.complement()
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn email() -> (Engine, ConfigSet, ConfigSet) {
        let space = FeatureSpace::new(["m", "s", "e", "c", "a", "r"]).unwrap();
        let engine = Engine::new(&space);
        let parse = |sel: &[&str]| TotalConfig::from_selected(&space, sel).unwrap();
        let valid: Vec<_> = [
            &["m"][..],
            &["m", "e", "c"],
            &["m", "e", "a"],
            &["m", "e", "r"],
            &["m", "s"],
            &["m", "s", "e", "c"],
            &["m", "s", "e", "a"],
            &["m", "s", "e", "r"],
        ]
        .iter()
        .map(|s| parse(s))
        .collect();
        let effect: Vec<_> = [
            &["m", "e", "a"][..],
            &["m", "e", "r"],
            &["m", "s", "e", "a"],
            &["m", "s", "e", "r"],
        ]
        .iter()
        .map(|s| parse(s))
        .collect();
        let v = engine.from_configs(&valid);
        let e = engine.from_configs(&effect);
        (engine, v, e)
    }

    #[test]
    fn semantics_counts() {
        let (engine, _, _) = email();
        let space = engine.space().clone();
        let ec = PartialConfig::from_named(&space, &[("e", true), ("c", false)]).unwrap();
        assert_eq!(engine.semantics(&ec).count(), 16);
        assert_eq!(engine.semantics(&PartialConfig::empty(&space)).count(), 64);
        let mea = TotalConfig::from_selected(&space, &["m", "e", "a"]).unwrap();
        let point = engine.semantics(&PartialConfig::from_total(&mea));
        assert_eq!(point.configs(), vec![mea]);
    }

    #[test]
    fn email_set_operations() {
        let (engine, v, e) = email();
        assert_eq!(v.count(), 8);
        assert_eq!(e.count(), 4);
        let target = &v.complement() | &e;
        assert_eq!(target.count(), 60);
        assert!(e.is_subset(&v).unwrap());
        assert!((&v | &!&v).is_full());
        assert!((&v - &v).is_empty());
        assert!(engine.empty().is_subset(&e).unwrap());
    }

    #[test]
    fn mismatched_engines_error() {
        let (_, v, _) = email();
        let (_, w, _) = email();
        assert_eq!(v.union(&w).unwrap_err(), Error::SpaceMismatch);
        assert_ne!(v, w);
    }

    #[test]
    fn enumeration_is_sorted_and_complete() {
        let (_, v, _) = email();
        let configs = v.configs();
        assert_eq!(configs.len() as u128, v.count());
        assert!(configs.windows(2).all(|w| w[0] < w[1]));
        assert!(configs.iter().all(|c| v.contains(c)));
        assert_eq!(configs[0].to_string(), "m");
        assert_eq!(v.min_config().unwrap().to_string(), "m");
    }
}
