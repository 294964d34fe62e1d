//! Minimum switches: the nearest member of a set reachable from a given
//! configuration by flipping features, with weight one per flipped feature.
//!
//! Both searches are shortest-path computations over the decision diagram.
//! Taking the branch of variable `v` that disagrees with the origin costs one;
//! variables skipped by an edge are free and keep their origin value.

use std::collections::HashMap;

use super::bdd::{NodeId, Store, FALSE, TRUE};
use super::set::ConfigSet;
use super::space::{Feature, TotalConfig};

const INF: u32 = u32::MAX / 4;

/// Result of [`ConfigSet::min_switch`].
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Switch {
    /// Hamming distance between origin and witness.
    pub distance: u32,
    pub witness: TotalConfig,
}

fn bit(bits: u64, var: u32) -> bool {
    bits & (1u64 << var) != 0
}

/// Cheapest completion from `id` down to the true terminal.
fn suffix_cost(store: &Store, id: NodeId, origin: u64, memo: &mut HashMap<NodeId, u32>) -> u32 {
    match id {
        FALSE => INF,
        TRUE => 0,
        _ => {
            if let Some(&c) = memo.get(&id) {
                return c;
            }
            let n = store.node(id);
            let o = bit(origin, n.var);
            let lo = suffix_cost(store, n.lo, origin, memo).saturating_add(o as u32);
            let hi = suffix_cost(store, n.hi, origin, memo).saturating_add(!o as u32);
            let c = lo.min(hi).min(INF);
            memo.insert(id, c);
            c
        }
    }
}

impl ConfigSet {
    /// Nearest member that differs from `origin` on at least one feature of
    /// `required`. Returns `None` when no member qualifies, which includes
    /// an empty `required`.
    ///
    /// Ties between equally distant witnesses prefer keeping the origin value
    /// at the earliest feature.
    pub fn min_switch(&self, origin: &TotalConfig, required: &[Feature]) -> Option<Switch> {
        debug_assert!(origin.space() == self.space());
        let mut store = self.engine().store_mut();
        let mut differs = FALSE;
        for &f in required {
            let lit = store.literal(f.index() as u32, !origin.get(f));
            differs = store.or(differs, lit);
        }
        let restricted = store.and(self.root(), differs);
        if restricted == FALSE {
            return None;
        }
        let origin_bits = origin.bits();
        let mut memo = HashMap::new();
        let distance = suffix_cost(&store, restricted, origin_bits, &mut memo);

        let mut bits = origin_bits;
        let mut id = restricted;
        while id > TRUE {
            let n = store.node(id);
            let o = bit(origin_bits, n.var);
            let (same, other) = if o { (n.hi, n.lo) } else { (n.lo, n.hi) };
            let keep = suffix_cost(&store, same, origin_bits, &mut memo);
            let flip = suffix_cost(&store, other, origin_bits, &mut memo).saturating_add(1);
            if keep <= flip {
                id = same;
            } else {
                bits ^= 1u64 << n.var;
                id = other;
            }
        }
        Some(Switch {
            distance,
            witness: TotalConfig::from_bits(self.space(), bits),
        })
    }

    /// For every feature `x`, the least Hamming distance from `origin` to a
    /// member that differs from `origin` on `x`, or `None` if there is none.
    ///
    /// Equivalent to calling [`ConfigSet::min_switch`] with `required = {x}`
    /// for every `x`, in a single pass over the diagram.
    pub fn switch_distances(&self, origin: &TotalConfig) -> Vec<Option<u32>> {
        let store = self.engine().store();
        let width = store.num_vars() as usize;
        let root = self.root();
        let mut dist = vec![INF; width];
        if root != FALSE {
            let origin_bits = origin.bits();
            let mut suffix = HashMap::new();
            let root_cost = suffix_cost(&store, root, origin_bits, &mut suffix);
            for d in dist.iter_mut().take(store.var(root) as usize) {
                *d = (*d).min(root_cost + 1);
            }
            let nodes = store.reachable(root);
            let mut prefix: HashMap<NodeId, u32> = HashMap::new();
            prefix.insert(root, 0);
            for &id in &nodes {
                let Some(&p) = prefix.get(&id) else { continue };
                let n = store.node(id);
                let o = bit(origin_bits, n.var);
                for (value, child) in [(false, n.lo), (true, n.hi)] {
                    if child == FALSE {
                        continue;
                    }
                    let step = p + (value != o) as u32;
                    if child > TRUE {
                        let e = prefix.entry(child).or_insert(INF);
                        *e = (*e).min(step);
                    }
                    let through = step + suffix_cost(&store, child, origin_bits, &mut suffix);
                    if value != o {
                        let d = &mut dist[n.var as usize];
                        *d = (*d).min(through);
                    }
                    for x in (n.var + 1)..store.var(child) {
                        let d = &mut dist[x as usize];
                        *d = (*d).min(through + 1);
                    }
                }
            }
        }
        dist.into_iter().map(|d| (d < INF).then_some(d)).collect()
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::configspace::{Engine, FeatureSpace};

    fn brute(set: &ConfigSet, origin: &TotalConfig, required: u64) -> Option<u32> {
        set.configs()
            .iter()
            .filter(|w| (w.bits() ^ origin.bits()) & required != 0)
            .map(|w| w.distance(origin))
            .min()
    }

    #[test]
    fn email_switch_for_caesar() {
        let space = FeatureSpace::new(["m", "s", "e", "c", "a", "r"]).unwrap();
        let engine = Engine::new(&space);
        let cfg = |s: &[&str]| TotalConfig::from_selected(&space, s).unwrap();
        let non_effect = engine.from_configs(&[
            cfg(&["m"]),
            cfg(&["m", "e", "c"]),
            cfg(&["m", "s"]),
            cfg(&["m", "s", "e", "c"]),
        ]);
        let mea = cfg(&["m", "e", "a"]);
        let c = space.feature("c").unwrap();
        let s = non_effect.min_switch(&mea, &[c]).unwrap();
        assert_eq!(s.distance, 2);
        assert_eq!(s.witness, cfg(&["m", "e", "c"]));
        let dists = non_effect.switch_distances(&mea);
        assert_eq!(dists[c.index()], Some(2));
    }

    #[test]
    fn origin_alone_never_qualifies() {
        let space = FeatureSpace::new(["x", "y"]).unwrap();
        let engine = Engine::new(&space);
        let origin = TotalConfig::from_bits(&space, 0b01);
        let only = engine.singleton(&origin);
        let x = space.feature("x").unwrap();
        assert_eq!(only.min_switch(&origin, &[x]), None);
        assert_eq!(only.min_switch(&origin, &[]), None);
        assert_eq!(only.switch_distances(&origin), vec![None, None]);
    }

    #[test]
    fn matches_brute_force_on_random_sets() {
        use rand::{Rng, SeedableRng};
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(7);
        for n in 1..=8usize {
            let names: Vec<String> = (0..n).map(|i| format!("f{i}")).collect();
            let space = FeatureSpace::new(names).unwrap();
            let engine = Engine::new(&space);
            for _ in 0..20 {
                let members: Vec<TotalConfig> = (0..(1u64 << n))
                    .filter(|_| rng.gen_bool(0.3))
                    .map(|b| TotalConfig::from_bits(&space, b))
                    .collect();
                let set = engine.from_configs(&members);
                let origin = TotalConfig::from_bits(&space, rng.gen::<u64>());
                let dists = set.switch_distances(&origin);
                for f in space.features() {
                    let expected = brute(&set, &origin, f.bit());
                    assert_eq!(dists[f.index()], expected);
                    let got = set.min_switch(&origin, &[f]);
                    assert_eq!(got.as_ref().map(|s| s.distance), expected);
                    if let Some(s) = got {
                        assert!(set.contains(&s.witness));
                        assert_ne!(s.witness.get(f), origin.get(f));
                        assert_eq!(s.witness.distance(&origin), s.distance);
                    }
                }
                let required = rng.gen::<u64>() & space.mask();
                let feats: Vec<Feature> = space.features().filter(|f| required & f.bit() != 0).collect();
                assert_eq!(
                    set.min_switch(&origin, &feats).map(|s| s.distance),
                    brute(&set, &origin, required)
                );
            }
        }
    }
}
