#![allow(dead_code)]

use std::path::PathBuf;

use feature_causes::configspace::{ConfigSet, Engine, FeatureSpace, PartialConfig, TotalConfig};
use feature_causes::{AnalysisSession, Formula, Rational};
use num_bigint::BigInt;
use num_traits::Zero;
use rand::Rng;
use rand_chacha::ChaCha8Rng;

pub fn fixture(name: &str) -> String {
    let path = PathBuf::from(env!("CARGO_MANIFEST_DIR"))
        .join("../../fixtures")
        .join(name);
    std::fs::read_to_string(&path).unwrap_or_else(|e| panic!("{}: {e}", path.display()))
}

pub fn rng(seed: u64) -> ChaCha8Rng {
    use rand::SeedableRng;
    ChaCha8Rng::seed_from_u64(seed)
}

pub fn space(n: usize) -> FeatureSpace {
    FeatureSpace::new((0..n).map(|i| format!("f{i}"))).unwrap()
}

/// Members of a set as a membership table indexed by bits.
pub fn table(set: &ConfigSet) -> Vec<bool> {
    let mut t = vec![false; 1 << set.space().len()];
    for c in set.configs() {
        t[c.bits() as usize] = true;
    }
    t
}

pub fn set_from_table(engine: &Engine, t: &[bool]) -> ConfigSet {
    let configs: Vec<TotalConfig> = (0..t.len() as u64)
        .filter(|&b| t[b as usize])
        .map(|b| TotalConfig::from_bits(engine.space(), b))
        .collect();
    engine.from_configs(&configs)
}

pub fn random_subset(engine: &Engine, rng: &mut ChaCha8Rng, density: f64) -> ConfigSet {
    let n = engine.space().len();
    let t: Vec<bool> = (0..1usize << n).map(|_| rng.gen_bool(density)).collect();
    set_from_table(engine, &t)
}

pub fn random_formula(space: &FeatureSpace, rng: &mut ChaCha8Rng, depth: u32) -> Formula {
    if depth == 0 || rng.gen_bool(0.25) {
        let f = space.features().nth(rng.gen_range(0..space.len())).unwrap();
        return Formula::Lit(f, rng.gen_bool(0.5));
    }
    let k = rng.gen_range(2..=3);
    let children: Vec<Formula> = (0..k).map(|_| random_formula(space, rng, depth - 1)).collect();
    match rng.gen_range(0..3) {
        0 => Formula::and(children),
        1 => Formula::or(children),
        _ => Formula::and(children).negate(),
    }
}

/// A random session over at most `max_n` features. Valid sets come from
/// random subsets or random formulas; effects are random subsets of them.
pub fn random_session(rng: &mut ChaCha8Rng, max_n: usize) -> AnalysisSession {
    loop {
        let n = rng.gen_range(1..=max_n);
        let space = space(n);
        let engine = Engine::new(&space);
        let valid = if rng.gen_bool(0.5) {
            let d = rng.gen_range(0.2..0.95);
            random_subset(&engine, rng, d)
        } else {
            random_formula(&space, rng, 3).to_set(&engine)
        };
        if valid.is_empty() {
            continue;
        }
        let effect = match rng.gen_range(0..4) {
            0 => &random_formula(&space, rng, 3).to_set(&engine) & &valid,
            _ => {
                let d = rng.gen_range(0.1..0.9);
                &random_subset(&engine, rng, d) & &valid
            }
        };
        return AnalysisSession::new(valid, effect).unwrap();
    }
}

pub fn random_partial(space: &FeatureSpace, rng: &mut ChaCha8Rng) -> PartialConfig {
    let support = rng.gen::<u64>() & space.mask();
    let values = rng.gen::<u64>() & support;
    PartialConfig::from_masks(space, support, values)
}

/// Sufficiency by enumeration of the cube.
pub fn brute_sufficient(p: &PartialConfig, valid: &[bool], effect: &[bool]) -> bool {
    let mut any = false;
    for bits in 0..valid.len() as u64 {
        let c = TotalConfig::from_bits(p.space(), bits);
        if p.matches(&c) && valid[bits as usize] {
            if !effect[bits as usize] {
                return false;
            }
            any = true;
        }
    }
    any
}

/// Responsibility by enumeration: gate from the given causes, distance from
/// scanning every valid non-effect configuration.
pub fn brute_responsibility(
    support: u64,
    eta: &TotalConfig,
    causes: &[PartialConfig],
    gate: impl Fn(&PartialConfig) -> bool,
    valid: &[bool],
    effect: &[bool],
) -> Rational {
    let gated = causes.iter().any(|g| g.matches(eta) && gate(g));
    if !gated {
        return Rational::zero();
    }
    let best = (0..valid.len() as u64)
        .filter(|&w| valid[w as usize] && !effect[w as usize])
        .filter(|&w| (w ^ eta.bits()) & support != 0)
        .map(|w| (w ^ eta.bits()).count_ones())
        .min()
        .expect("gated instances have a witness");
    Rational::new(BigInt::from(1), BigInt::from(best))
}

/// Smallest number of causes covering the effect, by subset enumeration.
/// `None` when there are too many causes to enumerate.
pub fn brute_min_cover(s: &AnalysisSession) -> Option<usize> {
    let causes = s.causes().as_slice();
    if causes.len() > 16 {
        return None;
    }
    let effect = table(s.effect());
    let words = effect.len().div_ceil(64);
    let bitset = |pred: &dyn Fn(usize) -> bool| {
        let mut w = vec![0u64; words];
        for b in (0..effect.len()).filter(|&b| pred(b)) {
            w[b / 64] |= 1 << (b % 64);
        }
        w
    };
    let target = bitset(&|b| effect[b]);
    let cubes: Vec<Vec<u64>> = causes
        .iter()
        .map(|g| bitset(&|b| effect[b] && g.matches(&TotalConfig::from_bits(s.space(), b as u64))))
        .collect();
    (0u32..(1 << causes.len()))
        .filter(|mask| {
            let mut covered = vec![0u64; words];
            for (i, cube) in cubes.iter().enumerate() {
                if mask & (1 << i) != 0 {
                    covered.iter_mut().zip(cube).for_each(|(c, w)| *c |= w);
                }
            }
            covered == target
        })
        .map(|mask| mask.count_ones() as usize)
        .min()
}

/// Every partial configuration over `n` features as `(support, values)`,
/// with counts of valid and of valid non-effect members of its cube.
pub fn cube_counts(n: usize, valid: &[bool], effect: &[bool]) -> Vec<(u64, u64, u32, u32)> {
    // Code digits: 0 false, 1 true, 2 free; digit i has weight 3^i.
    let pow: Vec<usize> = (0..=n).map(|i| 3usize.pow(i as u32)).collect();
    let mut counts = vec![(0u32, 0u32); pow[n]];
    let mut out = Vec::with_capacity(pow[n]);
    for code in 0..pow[n] {
        let (mut support, mut values, mut free) = (0u64, 0u64, None);
        let mut rest = code;
        for i in 0..n {
            match rest % 3 {
                0 => support |= 1 << i,
                1 => {
                    support |= 1 << i;
                    values |= 1 << i;
                }
                _ => free = free.or(Some(i)),
            }
            rest /= 3;
        }
        counts[code] = match free {
            None => {
                let b = values as usize;
                (valid[b] as u32, (valid[b] && !effect[b]) as u32)
            }
            Some(i) => {
                let lo = counts[code - 2 * pow[i]];
                let hi = counts[code - pow[i]];
                (lo.0 + hi.0, lo.1 + hi.1)
            }
        };
        out.push((support, values, counts[code].0, counts[code].1));
    }
    out
}
