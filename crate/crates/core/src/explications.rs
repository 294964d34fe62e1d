//! Concise representations of cause sets: the characteristic DNF, its
//! distributive-law simplification, most general causes and cause–effect
//! covers.

use std::collections::HashMap;

use crate::causes::{AnalysisSession, CauseSet};
use crate::configspace::{ConfigSet, PartialConfig};
use crate::error::{Error, Result};
use crate::formula::{Formula, Literal};

/// Most candidate causes the exact cover search accepts.
pub const EXACT_COVER_LIMIT: usize = 24;

/// Disjunction over the causes of the conjunction of their literals.
pub fn characteristic_formula(causes: &CauseSet) -> Formula {
    Formula::or(causes.iter().map(Formula::cube))
}

/// Factors common literals out of a DNF, repeatedly taking the literal that
/// occurs in the most cubes (ties: lowest feature index, positive first).
///
/// The result denotes the same set, and [`dls_expand`] recovers the input
/// cubes exactly. Returns the input unchanged if it is not a DNF.
pub fn dls_simplify(dnf: &Formula) -> Formula {
    match dnf.dnf_cubes() {
        Some(mut cubes) => {
            let mut seen = std::collections::HashSet::new();
            cubes.retain(|c| seen.insert(c.clone()));
            factor(cubes)
        }
        None => dnf.clone(),
    }
}

fn factor(cubes: Vec<Vec<Literal>>) -> Formula {
    let mut occurrences: HashMap<Literal, usize> = HashMap::new();
    for cube in &cubes {
        for &lit in cube {
            *occurrences.entry(lit).or_default() += 1;
        }
    }
    let pick = occurrences
        .into_iter()
        .filter(|&(_, n)| n >= 2)
        .max_by(|(a, na), (b, nb)| na.cmp(nb).then_with(|| (b.0, !b.1).cmp(&(a.0, !a.1))));
    let Some((lit, _)) = pick else {
        return Formula::or(cubes.iter().map(|c| Formula::from_literals(c)));
    };
    let (with, without): (Vec<_>, Vec<_>) = cubes.into_iter().partition(|c| c.contains(&lit));
    let reduced: Vec<Vec<Literal>> = with
        .into_iter()
        .map(|c| c.into_iter().filter(|&l| l != lit).collect())
        .collect();
    let factored = Formula::and([Formula::Lit(lit.0, lit.1), factor(reduced)]);
    if without.is_empty() {
        factored
    } else {
        Formula::or([factored, factor(without)])
    }
}

/// Redistributes conjunctions over disjunctions, producing a DNF.
pub fn dls_expand(formula: &Formula) -> Formula {
    let cubes = expand_cubes(&formula.nnf());
    Formula::or(cubes.iter().map(|c| Formula::from_literals(c)))
}

fn expand_cubes(f: &Formula) -> Vec<Vec<Literal>> {
    match f {
        Formula::True => vec![Vec::new()],
        Formula::False => Vec::new(),
        Formula::Lit(x, v) => vec![vec![(*x, *v)]],
        Formula::Or(cs) => cs.iter().flat_map(expand_cubes).collect(),
        Formula::And(cs) => cs.iter().fold(vec![Vec::new()], |acc, c| {
            let right = expand_cubes(c);
            let mut out = Vec::with_capacity(acc.len() * right.len());
            for l in &acc {
                for r in &right {
                    let mut merged: Vec<Literal> = l.iter().chain(r).copied().collect();
                    merged.sort_by_key(|&(x, v)| (x, !v));
                    merged.dedup();
                    out.push(merged);
                }
            }
            out
        }),
        Formula::Not(_) => unreachable!("input is in negation-normal form"),
    }
}

/// `p ⊴ q`: every effect instance covered by `p` is covered by `q`.
pub fn at_least_as_general(p: &PartialConfig, q: &PartialConfig, session: &AnalysisSession) -> bool {
    let effect = session.effect();
    let p_cov = effect.restrict_to(p);
    let q_cov = effect.restrict_to(q);
    p_cov.is_subset(&q_cov).expect("same engine")
}

/// The ⊴-maximal causes. Among maximal causes covering identical effect
/// instances only the first in canonical order (smallest support) is kept.
pub fn most_general_causes(session: &AnalysisSession) -> &CauseSet {
    session.most_general_cell().get_or_init(|| {
        let causes = session.causes();
        let effect = session.effect();
        let mut reps: Vec<(PartialConfig, ConfigSet)> = Vec::new();
        for cause in causes {
            let cov = effect.restrict_to(cause);
            if !reps.iter().any(|(_, c)| *c == cov) {
                reps.push((cause.clone(), cov));
            }
        }
        reps.iter()
            .filter(|(_, cov)| {
                !reps
                    .iter()
                    .any(|(_, other)| other != cov && cov.is_subset(other).expect("same engine"))
            })
            .map(|(p, _)| p.clone())
            .collect()
    })
}

/// Whether the cubes of `cover` jointly contain every effect instance.
pub fn is_cover(cover: &CauseSet, session: &AnalysisSession) -> bool {
    let covered = cover.semantics(session.engine());
    session.effect().is_subset(&covered).expect("same engine")
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum CoverStrategy {
    /// Repeatedly take the cause covering the most uncovered effect instances.
    Greedy,
    /// Minimum cardinality by branch and bound.
    Exact,
}

/// A cause–effect cover drawn from the causes of the session.
///
/// The exact search runs over the most general causes, which suffices for
/// minimum cardinality since any cover can swap each member for a ⊴-maximal
/// cause dominating it.
pub fn cause_effect_cover(session: &AnalysisSession, strategy: CoverStrategy) -> Result<CauseSet> {
    if session.effect().is_empty() {
        return Ok(CauseSet::default());
    }
    match strategy {
        CoverStrategy::Greedy => Ok(greedy_cover(session.causes().as_slice(), session.effect())),
        CoverStrategy::Exact => exact_cover(session),
    }
}

fn greedy_cover(candidates: &[PartialConfig], effect: &ConfigSet) -> CauseSet {
    let mut uncovered = effect.clone();
    let mut chosen = Vec::new();
    while !uncovered.is_empty() {
        let mut best: Option<(usize, u128)> = None;
        for (i, c) in candidates.iter().enumerate() {
            let gain = uncovered.restrict_to(c).count();
            if gain > 0 && best.is_none_or(|(_, g)| gain > g) {
                best = Some((i, gain));
            }
        }
        let Some((i, _)) = best else { break };
        let pick = &candidates[i];
        uncovered = &uncovered - &effect.engine().semantics(pick);
        chosen.push(pick.clone());
    }
    CauseSet::new(chosen)
}

fn exact_cover(session: &AnalysisSession) -> Result<CauseSet> {
    let candidates = most_general_causes(session).as_slice();
    if candidates.len() > EXACT_COVER_LIMIT {
        return Err(Error::CoverTooLarge {
            candidates: candidates.len(),
            limit: EXACT_COVER_LIMIT,
        });
    }
    let engine = session.engine();
    // Partition E by which candidates cover each instance.
    let mut regions: Vec<(ConfigSet, u32)> = vec![(session.effect().clone(), 0)];
    for (i, c) in candidates.iter().enumerate() {
        let cube = engine.semantics(c);
        let mut next = Vec::with_capacity(regions.len() * 2);
        for (region, mask) in regions {
            let inside = &region & &cube;
            let outside = &region - &cube;
            if !inside.is_empty() {
                next.push((inside, mask | 1 << i));
            }
            if !outside.is_empty() {
                next.push((outside, mask));
            }
        }
        regions = next;
    }
    let mut masks: Vec<u32> = regions.into_iter().map(|(_, m)| m).collect();
    masks.sort_unstable();
    masks.dedup();
    debug_assert!(masks.iter().all(|&m| m != 0));

    let greedy = greedy_cover(candidates, session.effect());
    let mut best: u32 = candidates
        .iter()
        .enumerate()
        .filter(|(_, c)| greedy.contains(c))
        .fold(0, |acc, (i, _)| acc | 1 << i);
    search(&masks, 0, &mut best);
    Ok(candidates
        .iter()
        .enumerate()
        .filter(|(i, _)| best & (1 << i) != 0)
        .map(|(_, c)| c.clone())
        .collect())
}

/// Hitting-set search: choose a smallest set of candidate bits meeting
/// every mask. `best` holds the smallest solution found so far.
fn search(masks: &[u32], chosen: u32, best: &mut u32) {
    let open = masks.iter().filter(|&&m| m & chosen == 0);
    let Some(&branch) = open.min_by_key(|m| m.count_ones()) else {
        if chosen.count_ones() < best.count_ones() {
            *best = chosen;
        }
        return;
    };
    if chosen.count_ones() + 1 >= best.count_ones() {
        return;
    }
    let mut rest = branch;
    while rest != 0 {
        let bit = rest & rest.wrapping_neg();
        rest &= rest - 1;
        search(masks, chosen | bit, best);
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::configspace::{Engine, FeatureSpace, TotalConfig};

    fn email() -> AnalysisSession {
        let space = FeatureSpace::new(["m", "s", "e", "c", "a", "r"]).unwrap();
        let engine = Engine::new(&space);
        let cfg = |s: &str| TotalConfig::from_selected(&space, &s.split(' ').collect::<Vec<_>>()).unwrap();
        let valid: Vec<_> = ["m", "m e c", "m e a", "m e r", "m s", "m s e c", "m s e a", "m s e r"]
            .iter()
            .map(|s| cfg(s))
            .collect();
        let effect: Vec<_> = ["m e a", "m e r", "m s e a", "m s e r"]
            .iter()
            .map(|s| cfg(s))
            .collect();
        AnalysisSession::new(engine.from_configs(&valid), engine.from_configs(&effect)).unwrap()
    }

    #[test]
    fn email_explications() {
        let s = email();
        let space = s.space().clone();
        let chi = characteristic_formula(s.causes());
        assert_eq!(chi.display(&space).to_string(), "a | r | e & !c");
        let dls = dls_simplify(&chi);
        assert_eq!(dls, chi);
        let mg: Vec<String> = most_general_causes(&s).iter().map(|p| p.to_string()).collect();
        assert_eq!(mg, vec!["e & !c"]);
        let exact = cause_effect_cover(&s, CoverStrategy::Exact).unwrap();
        assert_eq!(exact.len(), 1);
        assert!(is_cover(&exact, &s));
        let greedy = cause_effect_cover(&s, CoverStrategy::Greedy).unwrap();
        assert!(is_cover(&greedy, &s));
        let ar = CauseSet::new(vec![
            PartialConfig::from_named(&space, &[("a", true)]).unwrap(),
            PartialConfig::from_named(&space, &[("r", true)]).unwrap(),
        ]);
        assert!(is_cover(&ar, &s));
        let a_only = CauseSet::new(vec![PartialConfig::from_named(&space, &[("a", true)]).unwrap()]);
        assert!(!is_cover(&a_only, &s));
    }

    #[test]
    fn generality_relation() {
        let s = email();
        let space = s.space().clone();
        let a = PartialConfig::from_named(&space, &[("a", true)]).unwrap();
        let ec = PartialConfig::from_named(&space, &[("e", true), ("c", false)]).unwrap();
        assert!(at_least_as_general(&a, &ec, &s));
        assert!(!at_least_as_general(&ec, &a, &s));
        assert!(at_least_as_general(&a, &a, &s));
        let nothing = PartialConfig::from_named(&space, &[("m", false)]).unwrap();
        assert!(at_least_as_general(&nothing, &a, &s));
    }

    #[test]
    fn two_cube_factoring() {
        let space = FeatureSpace::new(["x", "y", "z"]).unwrap();
        let v = |n: &str| Formula::var(space.feature(n).unwrap());
        let dnf = Formula::or([Formula::and([v("x"), v("y")]), Formula::and([v("x"), v("z")])]);
        let dls = dls_simplify(&dnf);
        assert_eq!(dls.display(&space).to_string(), "x & (y | z)");
        assert_eq!(dnf.length(), 7);
        assert_eq!(dls.length(), 5);
        assert_eq!(dls_expand(&dls), dnf);
        assert_eq!(dls_expand(&dnf), dnf);
    }

    #[test]
    fn empty_effect_has_empty_cover() {
        let s = email();
        let none = AnalysisSession::new(s.valid().clone(), s.engine().empty()).unwrap();
        assert!(cause_effect_cover(&none, CoverStrategy::Exact).unwrap().is_empty());
        assert!(cause_effect_cover(&none, CoverStrategy::Greedy).unwrap().is_empty());
        assert!(most_general_causes(&none).is_empty());
        assert_eq!(characteristic_formula(none.causes()), Formula::False);
    }
}
