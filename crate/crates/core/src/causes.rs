//! Feature causes of an effect set with respect to the valid configurations.

use std::cell::OnceCell;
use std::collections::HashSet;
use std::fmt;

use crate::configspace::{ConfigSet, Engine, Feature, FeatureSpace, PartialConfig, TotalConfig};
use crate::error::{Error, Result};
use crate::primes::{for_each_ternary, prime_implicants, ternary_table, POW3};

/// Largest space accepted by the enumerating oracles.
pub const NAIVE_LIMIT: usize = 12;

/// Deduplicated partial configurations in canonical order (support size,
/// then literal sequence).
#[derive(Clone, PartialEq, Eq, Default)]
pub struct CauseSet {
    items: Vec<PartialConfig>,
}

impl CauseSet {
    pub fn new(mut items: Vec<PartialConfig>) -> CauseSet {
        items.sort();
        items.dedup();
        CauseSet { items }
    }

    pub fn len(&self) -> usize {
        self.items.len()
    }

    pub fn is_empty(&self) -> bool {
        self.items.is_empty()
    }

    pub fn iter(&self) -> std::slice::Iter<'_, PartialConfig> {
        self.items.iter()
    }

    pub fn as_slice(&self) -> &[PartialConfig] {
        &self.items
    }

    pub fn contains(&self, p: &PartialConfig) -> bool {
        self.items.binary_search(p).is_ok()
    }

    /// Smallest support size, `None` when empty.
    pub fn min_support(&self) -> Option<usize> {
        self.items.first().map(PartialConfig::support_len)
    }

    /// Union of the cubes of all members.
    pub fn semantics(&self, engine: &Engine) -> ConfigSet {
        self.items
            .iter()
            .fold(engine.empty(), |acc, p| &acc | &engine.semantics(p))
    }
}

impl<'a> IntoIterator for &'a CauseSet {
    type Item = &'a PartialConfig;
    type IntoIter = std::slice::Iter<'a, PartialConfig>;
    fn into_iter(self) -> Self::IntoIter {
        self.items.iter()
    }
}

impl FromIterator<PartialConfig> for CauseSet {
    fn from_iter<I: IntoIterator<Item = PartialConfig>>(iter: I) -> Self {
        CauseSet::new(iter.into_iter().collect())
    }
}

impl fmt::Debug for CauseSet {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_set().entries(self.items.iter().map(|p| p.to_string())).finish()
    }
}

/// Valid configurations `V`, effect set `E ⊆ V`, and lazily computed causes.
pub struct AnalysisSession {
    valid: ConfigSet,
    effect: ConfigSet,
    non_effect: ConfigSet,
    causes: OnceCell<CauseSet>,
    most_general: OnceCell<CauseSet>,
}

impl AnalysisSession {
    /// Fails if `V` is empty, if the sets come from different engines, or if
    /// `E` is not a subset of `V`.
    pub fn new(valid: ConfigSet, effect: ConfigSet) -> Result<AnalysisSession> {
        if valid.is_empty() {
            return Err(Error::EmptyValid);
        }
        if !effect.is_subset(&valid)? {
            return Err(Error::EffectNotInValid);
        }
        let non_effect = &valid - &effect;
        Ok(AnalysisSession {
            valid,
            effect,
            non_effect,
            causes: OnceCell::new(),
            most_general: OnceCell::new(),
        })
    }

    /// Session for the negated effect, `V \ E`.
    pub fn negated(&self) -> AnalysisSession {
        AnalysisSession::new(self.valid.clone(), self.non_effect.clone()).expect("V \\ E is a subset of V")
    }

    pub fn engine(&self) -> &Engine {
        self.valid.engine()
    }

    pub fn space(&self) -> &FeatureSpace {
        self.valid.space()
    }

    pub fn valid(&self) -> &ConfigSet {
        &self.valid
    }

    pub fn effect(&self) -> &ConfigSet {
        &self.effect
    }

    /// `V \ E`.
    pub fn non_effect(&self) -> &ConfigSet {
        &self.non_effect
    }

    fn check_space(&self, p: &PartialConfig) -> Result<()> {
        if p.space() == self.space() {
            Ok(())
        } else {
            Err(Error::SpaceMismatch)
        }
    }

    /// FC1: `∅ ≠ ⟦p⟧ ∩ V ⊆ E`.
    pub fn is_sufficient(&self, p: &PartialConfig) -> bool {
        self.valid.meets_cube(p) && !self.non_effect.meets_cube(p)
    }

    /// FC1 together with FC2: every single expansion of `p` covers some valid
    /// configuration outside `E`.
    pub fn is_cause(&self, p: &PartialConfig) -> bool {
        self.is_sufficient(p)
            && p.support().all(|x| {
                let wider = p.expand(x).expect("feature taken from the support");
                self.non_effect.meets_cube(&wider)
            })
    }

    /// All feature causes: primes of `(Θ \ V) ∪ E` whose cube meets `E`.
    pub fn causes(&self) -> &CauseSet {
        self.causes.get_or_init(|| {
            if self.effect.is_empty() {
                return CauseSet::default();
            }
            let target = &self.valid.complement() | &self.effect;
            prime_implicants(&target)
                .into_iter()
                .filter(|p| self.effect.meets_cube(p))
                .collect()
        })
    }

    pub(crate) fn most_general_cell(&self) -> &OnceCell<CauseSet> {
        &self.most_general
    }

    /// Reference enumeration of all `3^|F|` partial configurations, keeping
    /// those passing FC1 and FC2. Counts of valid and non-effect members of
    /// each cube are tabulated from the cofactors, independent of the prime
    /// computation. Limited to [`NAIVE_LIMIT`] features.
    pub fn causes_naive(&self) -> Result<CauseSet> {
        let space = self.space();
        let n = space.len();
        if n > NAIVE_LIMIT {
            return Err(Error::OracleTooLarge {
                features: n,
                limit: NAIVE_LIMIT,
            });
        }
        let valid: HashSet<u64> = self.valid.configs().iter().map(|c| c.bits()).collect();
        let effect: HashSet<u64> = self.effect.configs().iter().map(|c| c.bits()).collect();
        let counts = ternary_table(
            n,
            |bits| {
                let v = valid.contains(&bits) as u32;
                let bad = (v == 1 && !effect.contains(&bits)) as u32;
                (v, bad)
            },
            |a, b| (a.0 + b.0, a.1 + b.1),
        );
        let mut out = Vec::new();
        for_each_ternary(n, |code, support, values| {
            let (v, bad) = counts[code];
            if v == 0 || bad != 0 {
                return;
            }
            let counterfactual = (0..n)
                .filter(|&i| support & (1 << i) != 0)
                .all(|i| counts[code + (2 - ((values >> i) & 1) as usize) * POW3[i]].1 > 0);
            if counterfactual {
                out.push(PartialConfig::from_masks(space, support, values));
            }
        });
        Ok(CauseSet::new(out))
    }

    /// Lexicographically least configuration in `⟦p⟨x⟩⟧ ∩ (V \ E)`.
    pub fn counterfactual_witness(&self, p: &PartialConfig, x: Feature) -> Result<TotalConfig> {
        self.check_space(p)?;
        let wider = p.expand(x)?;
        if !self.is_cause(p) {
            return Err(Error::NotACause(p.to_string()));
        }
        Ok(self
            .non_effect
            .restrict_to(&wider)
            .min_config()
            .expect("FC2 guarantees a witness"))
    }
}

impl fmt::Debug for AnalysisSession {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("AnalysisSession")
            .field("space", self.space())
            .field("valid", &self.valid.count())
            .field("effect", &self.effect.count())
            .finish()
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    pub(crate) fn email() -> AnalysisSession {
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

    fn lit(s: &AnalysisSession, lits: &[(&str, bool)]) -> PartialConfig {
        PartialConfig::from_named(s.space(), lits).unwrap()
    }

    #[test]
    fn email_sufficiency_and_causes() {
        let s = email();
        assert!(s.is_sufficient(&lit(&s, &[("e", true), ("c", false)])));
        assert!(!s.is_sufficient(&lit(&s, &[("s", true)])));
        assert!(!s.is_sufficient(&lit(&s, &[("m", false)])));
        assert!(s.is_cause(&lit(&s, &[("a", true)])));
        assert!(s.is_cause(&lit(&s, &[("r", true)])));
        assert!(s.is_cause(&lit(&s, &[("e", true), ("c", false)])));
        assert!(!s.is_cause(&lit(&s, &[("e", true)])));
        assert!(!s.is_cause(&lit(&s, &[("a", true), ("s", true)])));
        let rendered: Vec<String> = s.causes().iter().map(|p| p.to_string()).collect();
        assert_eq!(rendered, vec!["a", "r", "e & !c"]);
        assert_eq!(&s.causes_naive().unwrap(), s.causes());
    }

    #[test]
    fn email_witnesses() {
        let s = email();
        let ec = lit(&s, &[("e", true), ("c", false)]);
        let c = s.space().feature("c").unwrap();
        assert_eq!(s.counterfactual_witness(&ec, c).unwrap().to_string(), "m e c");
        let a = lit(&s, &[("a", true)]);
        let fa = s.space().feature("a").unwrap();
        assert_eq!(s.counterfactual_witness(&a, fa).unwrap().to_string(), "m");
        let e = lit(&s, &[("e", true)]);
        let fe = s.space().feature("e").unwrap();
        assert!(matches!(s.counterfactual_witness(&e, fe), Err(Error::NotACause(_))));
        assert!(matches!(s.counterfactual_witness(&a, c), Err(Error::NotInSupport(_))));
    }

    #[test]
    fn degenerate_effects() {
        let s = email();
        let none = AnalysisSession::new(s.valid().clone(), s.engine().empty()).unwrap();
        assert!(none.causes().is_empty());
        assert!(none.causes_naive().unwrap().is_empty());
        let all = AnalysisSession::new(s.valid().clone(), s.valid().clone()).unwrap();
        let causes: Vec<String> = all.causes().iter().map(|p| p.to_string()).collect();
        assert_eq!(causes, vec!["true"]);
        assert_eq!(&all.causes_naive().unwrap(), all.causes());
    }

    #[test]
    fn construction_errors() {
        let s = email();
        let engine = s.engine();
        assert_eq!(
            AnalysisSession::new(engine.empty(), engine.empty()).unwrap_err(),
            Error::EmptyValid
        );
        assert_eq!(
            AnalysisSession::new(s.effect().clone(), s.valid().clone()).unwrap_err(),
            Error::EffectNotInValid
        );
    }

    #[test]
    fn negated_session_swaps_effect() {
        let s = email();
        let neg = s.negated();
        assert_eq!(neg.effect(), s.non_effect());
        assert_eq!(&neg.causes_naive().unwrap(), neg.causes());
    }
}
