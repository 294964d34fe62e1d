//! Prime implicants of a set of configurations.
//!
//! `primeImplicants` recurses over the decision diagram. For a node testing
//! `x` with cofactors `f0`, `f1`:
//!
//! ```text
//! P(f) = P(f0 & f1)
//!      ∪ { !x & p : p ∈ P(f0) \ P(f0 & f1) }
//!      ∪ {  x & p : p ∈ P(f1) \ P(f0 & f1) }
//! ```
//!
//! A prime of `f0` that is not a prime of `f0 & f1` is not an implicant of
//! `f1`, so the literal on `x` cannot be dropped. Results are memoized per
//! node.

use std::collections::{HashMap, HashSet};
use std::rc::Rc;

use crate::configspace::{ConfigSet, NodeId, PartialConfig, Store, FALSE, TRUE};
use crate::error::{Error, Result};

/// Largest space accepted by [`prime_implicants_brute`].
pub const BRUTE_LIMIT: usize = 16;

/// A cube as `(support, values)` masks.
type Cube = (u64, u64);

/// Whether the cube of `p` lies inside `t`.
pub fn is_implicant(p: &PartialConfig, t: &ConfigSet) -> bool {
    t.contains_cube(p)
}

/// Whether `p` is an implicant of `t` and no single expansion of `p` is.
pub fn is_prime(p: &PartialConfig, t: &ConfigSet) -> bool {
    is_implicant(p, t)
        && p.support().all(|x| {
            let wider = p.expand(x).expect("feature taken from the support");
            !is_implicant(&wider, t)
        })
}

/// All prime implicants of `t`, sorted by support size and then by literal
/// sequence. The empty set has no implicants.
pub fn prime_implicants(t: &ConfigSet) -> Vec<PartialConfig> {
    let engine = t.engine();
    let cubes = {
        let mut store = engine.store_mut();
        let mut memo = HashMap::new();
        primes_of(&mut store, t.root(), &mut memo)
    };
    let space = t.space();
    let mut out: Vec<PartialConfig> = cubes
        .iter()
        .map(|&(s, v)| PartialConfig::from_masks(space, s, v))
        .collect();
    out.sort();
    out
}

fn primes_of(store: &mut Store, id: NodeId, memo: &mut HashMap<NodeId, Rc<Vec<Cube>>>) -> Rc<Vec<Cube>> {
    if id == FALSE {
        return Rc::new(Vec::new());
    }
    if id == TRUE {
        return Rc::new(vec![(0, 0)]);
    }
    if let Some(p) = memo.get(&id) {
        return Rc::clone(p);
    }
    let n = store.node(id);
    let both = store.and(n.lo, n.hi);
    let shared = primes_of(store, both, memo);
    let low = primes_of(store, n.lo, memo);
    let high = primes_of(store, n.hi, memo);

    let shared_set: HashSet<Cube> = shared.iter().copied().collect();
    let bit = 1u64 << n.var;
    let mut result: Vec<Cube> = shared.to_vec();
    result.extend(
        low.iter()
            .filter(|c| !shared_set.contains(c))
            .map(|&(s, v)| (s | bit, v)),
    );
    result.extend(
        high.iter()
            .filter(|c| !shared_set.contains(c))
            .map(|&(s, v)| (s | bit, v | bit)),
    );
    let result = Rc::new(result);
    memo.insert(id, Rc::clone(&result));
    result
}

/// Reference enumeration over all `3^|F|` partial configurations.
///
/// Membership of every total configuration is read once; implicant status of
/// a partial configuration is then derived from its two cofactors on a free
/// variable. Limited to spaces of at most [`BRUTE_LIMIT`] features.
pub fn prime_implicants_brute(t: &ConfigSet) -> Result<Vec<PartialConfig>> {
    let space = t.space();
    let n = space.len();
    if n > BRUTE_LIMIT {
        return Err(Error::OracleTooLarge {
            features: n,
            limit: BRUTE_LIMIT,
        });
    }
    let members: HashSet<u64> = t.configs().iter().map(|c| c.bits()).collect();
    let implicant = ternary_table(n, |bits| members.contains(&bits), |a, b| a && b);
    let mut out = Vec::new();
    for_each_ternary(n, |code, support, values| {
        if !implicant[code] {
            return;
        }
        let prime = (0..n)
            .filter(|&i| support & (1 << i) != 0)
            .all(|i| !implicant[code + (2 - ((values >> i) & 1) as usize) * POW3[i]]);
        if prime {
            out.push(PartialConfig::from_masks(space, support, values));
        }
    });
    out.sort();
    Ok(out)
}

pub(crate) const POW3: [usize; 17] = {
    let mut p = [1usize; 17];
    let mut i = 1;
    while i < 17 {
        p[i] = p[i - 1] * 3;
        i += 1;
    }
    p
};

/// Table over ternary codes (digit 0 = false, 1 = true, 2 = free, feature `i`
/// at weight `3^i`). Fully specified codes take `leaf(bits)`; a code with a
/// free digit combines its two cofactors with `join`.
pub(crate) fn ternary_table<T: Copy + Default>(n: usize, leaf: impl Fn(u64) -> T, join: impl Fn(T, T) -> T) -> Vec<T> {
    let size = POW3[n];
    let mut table = vec![T::default(); size];
    for code in 0..size {
        let mut rest = code;
        let mut bits = 0u64;
        let mut free = None;
        for i in 0..n {
            match rest % 3 {
                0 => {}
                1 => bits |= 1 << i,
                _ => {
                    free = Some(i);
                    break;
                }
            }
            rest /= 3;
        }
        table[code] = match free {
            None => leaf(bits),
            Some(i) => {
                let base = code - 2 * POW3[i];
                join(table[base], table[base + POW3[i]])
            }
        };
    }
    table
}

/// Calls `f(code, support, values)` for every ternary code of width `n`.
pub(crate) fn for_each_ternary(n: usize, mut f: impl FnMut(usize, u64, u64)) {
    for code in 0..POW3[n] {
        let mut rest = code;
        let (mut support, mut values) = (0u64, 0u64);
        for i in 0..n {
            match rest % 3 {
                0 => support |= 1 << i,
                1 => {
                    support |= 1 << i;
                    values |= 1 << i;
                }
                _ => {}
            }
            rest /= 3;
        }
        f(code, support, values);
    }
}
