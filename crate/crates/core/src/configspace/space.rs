use std::cmp::Ordering;
use std::collections::HashMap;
use std::fmt;
use std::hash::{Hash, Hasher};
use std::sync::Arc;

use crate::error::{Error, Result};

/// Largest number of features a space may declare. Assignments are packed
/// into a single `u64`.
pub const MAX_FEATURES: usize = 64;

/// Position of a feature inside its [`FeatureSpace`].
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Feature(u8);

impl Feature {
    pub fn index(self) -> usize {
        self.0 as usize
    }

    pub(crate) fn bit(self) -> u64 {
        1u64 << self.0
    }

    pub(crate) fn from_index(index: usize) -> Feature {
        debug_assert!(index < MAX_FEATURES);
        Feature(index as u8)
    }
}

struct SpaceInner {
    names: Vec<String>,
    index: HashMap<String, usize>,
}

/// Ordered universe of named Boolean features.
///
/// Cloning is cheap; clones share the same name table.
#[derive(Clone)]
pub struct FeatureSpace(Arc<SpaceInner>);

fn valid_identifier(name: &str) -> bool {
    let mut chars = name.chars();
    match chars.next() {
        Some(c) if c.is_ascii_alphabetic() || c == '_' => {}
        _ => return false,
    }
    chars.all(|c| c.is_ascii_alphanumeric() || c == '_')
}

impl FeatureSpace {
    pub fn new<I, S>(names: I) -> Result<FeatureSpace>
    where
        I: IntoIterator<Item = S>,
        S: Into<String>,
    {
        let mut list = Vec::new();
        let mut index = HashMap::new();
        for name in names {
            let name = name.into();
            if !valid_identifier(&name) {
                return Err(Error::InvalidFeatureName(name));
            }
            if index.insert(name.clone(), list.len()).is_some() {
                return Err(Error::DuplicateFeature(name));
            }
            list.push(name);
        }
        if list.is_empty() {
            return Err(Error::EmptySpace);
        }
        if list.len() > MAX_FEATURES {
            return Err(Error::TooManyFeatures(list.len()));
        }
        Ok(FeatureSpace(Arc::new(SpaceInner { names: list, index })))
    }

    pub fn len(&self) -> usize {
        self.0.names.len()
    }

    pub fn is_empty(&self) -> bool {
        false
    }

    pub fn names(&self) -> &[String] {
        &self.0.names
    }

    pub fn name(&self, feature: Feature) -> &str {
        &self.0.names[feature.index()]
    }

    pub fn feature(&self, name: &str) -> Result<Feature> {
        self.lookup(name).ok_or_else(|| Error::UnknownFeature(name.to_string()))
    }

    pub fn lookup(&self, name: &str) -> Option<Feature> {
        self.0.index.get(name).map(|&i| Feature::from_index(i))
    }

    pub fn features(&self) -> impl Iterator<Item = Feature> + '_ {
        (0..self.len()).map(Feature::from_index)
    }

    /// Bit mask with one bit per declared feature.
    pub fn mask(&self) -> u64 {
        if self.len() == 64 {
            u64::MAX
        } else {
            (1u64 << self.len()) - 1
        }
    }

    /// Number of total configurations, `2^|F|`.
    pub fn total_count(&self) -> u128 {
        1u128 << self.len()
    }
}

impl PartialEq for FeatureSpace {
    fn eq(&self, other: &Self) -> bool {
        Arc::ptr_eq(&self.0, &other.0) || self.0.names == other.0.names
    }
}

impl Eq for FeatureSpace {}

impl fmt::Debug for FeatureSpace {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_list().entries(self.names()).finish()
    }
}

/// A total configuration: one Boolean per feature.
#[derive(Clone)]
pub struct TotalConfig {
    space: FeatureSpace,
    bits: u64,
}

impl TotalConfig {
    pub fn from_bits(space: &FeatureSpace, bits: u64) -> TotalConfig {
        TotalConfig {
            space: space.clone(),
            bits: bits & space.mask(),
        }
    }

    /// Configuration selecting exactly the named features.
    pub fn from_selected<S: AsRef<str>>(space: &FeatureSpace, selected: &[S]) -> Result<TotalConfig> {
        let mut bits = 0;
        for name in selected {
            bits |= space.feature(name.as_ref())?.bit();
        }
        Ok(TotalConfig::from_bits(space, bits))
    }

    pub fn space(&self) -> &FeatureSpace {
        &self.space
    }

    pub fn bits(&self) -> u64 {
        self.bits
    }

    pub fn get(&self, feature: Feature) -> bool {
        self.bits & feature.bit() != 0
    }

    pub fn with(&self, feature: Feature, value: bool) -> TotalConfig {
        let bits = if value {
            self.bits | feature.bit()
        } else {
            self.bits & !feature.bit()
        };
        TotalConfig::from_bits(&self.space, bits)
    }

    /// Flips exactly the features in `mask`.
    pub fn flip_mask(&self, mask: u64) -> TotalConfig {
        TotalConfig::from_bits(&self.space, self.bits ^ mask)
    }

    pub fn selected(&self) -> impl Iterator<Item = Feature> + '_ {
        self.space.features().filter(move |&f| self.get(f))
    }

    pub fn count_selected(&self) -> u32 {
        self.bits.count_ones()
    }

    /// Hamming distance to another configuration of the same space.
    pub fn distance(&self, other: &TotalConfig) -> u32 {
        (self.bits ^ other.bits).count_ones()
    }

    /// Sort key: the assignment read as a bit string in declaration order.
    pub(crate) fn lex_key(&self) -> u64 {
        lex_key(self.bits, self.space.len())
    }
}

pub(crate) fn lex_key(bits: u64, width: usize) -> u64 {
    bits.reverse_bits() >> (64 - width)
}

impl PartialEq for TotalConfig {
    fn eq(&self, other: &Self) -> bool {
        self.bits == other.bits && self.space == other.space
    }
}

impl Eq for TotalConfig {}

impl Hash for TotalConfig {
    fn hash<H: Hasher>(&self, state: &mut H) {
        self.bits.hash(state);
    }
}

impl PartialOrd for TotalConfig {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl Ord for TotalConfig {
    fn cmp(&self, other: &Self) -> Ordering {
        self.lex_key().cmp(&other.lex_key())
    }
}

/// Renders the selected features separated by spaces, `-` when none is selected.
impl fmt::Display for TotalConfig {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.bits == 0 {
            return f.write_str("-");
        }
        let mut first = true;
        for feature in self.selected() {
            if !first {
                f.write_str(" ")?;
            }
            first = false;
            f.write_str(self.space.name(feature))?;
        }
        Ok(())
    }
}

impl fmt::Debug for TotalConfig {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "TotalConfig({self})")
    }
}

/// A partial configuration, defined exactly on its support.
///
/// The empty support is legal and denotes every total configuration.
#[derive(Clone)]
pub struct PartialConfig {
    space: FeatureSpace,
    support: u64,
    values: u64,
}

impl PartialConfig {
    /// The empty-support partial configuration.
    pub fn empty(space: &FeatureSpace) -> PartialConfig {
        PartialConfig {
            space: space.clone(),
            support: 0,
            values: 0,
        }
    }

    pub fn from_masks(space: &FeatureSpace, support: u64, values: u64) -> PartialConfig {
        let support = support & space.mask();
        PartialConfig {
            space: space.clone(),
            support,
            values: values & support,
        }
    }

    pub fn from_literals<I>(space: &FeatureSpace, literals: I) -> PartialConfig
    where
        I: IntoIterator<Item = (Feature, bool)>,
    {
        literals
            .into_iter()
            .fold(PartialConfig::empty(space), |p, (f, v)| p.with(f, v))
    }

    /// Builds a partial configuration from `(name, value)` pairs.
    pub fn from_named<S: AsRef<str>>(space: &FeatureSpace, literals: &[(S, bool)]) -> Result<PartialConfig> {
        let mut p = PartialConfig::empty(space);
        for (name, value) in literals {
            p = p.with(space.feature(name.as_ref())?, *value);
        }
        Ok(p)
    }

    pub fn from_total(config: &TotalConfig) -> PartialConfig {
        PartialConfig::from_masks(config.space(), config.space().mask(), config.bits())
    }

    pub fn space(&self) -> &FeatureSpace {
        &self.space
    }

    pub fn support_mask(&self) -> u64 {
        self.support
    }

    pub fn value_mask(&self) -> u64 {
        self.values
    }

    pub fn support_len(&self) -> usize {
        self.support.count_ones() as usize
    }

    pub fn is_empty(&self) -> bool {
        self.support == 0
    }

    pub fn get(&self, feature: Feature) -> Option<bool> {
        (self.support & feature.bit() != 0).then(|| self.values & feature.bit() != 0)
    }

    pub fn contains(&self, feature: Feature) -> bool {
        self.support & feature.bit() != 0
    }

    /// Returns a copy with `feature` constrained to `value`.
    pub fn with(&self, feature: Feature, value: bool) -> PartialConfig {
        let bit = feature.bit();
        PartialConfig {
            space: self.space.clone(),
            support: self.support | bit,
            values: if value { self.values | bit } else { self.values & !bit },
        }
    }

    /// The `feature`-expansion: the same literals with `feature` dropped.
    pub fn expand(&self, feature: Feature) -> Result<PartialConfig> {
        if !self.contains(feature) {
            return Err(Error::NotInSupport(self.space.name(feature).to_string()));
        }
        let bit = feature.bit();
        Ok(PartialConfig {
            space: self.space.clone(),
            support: self.support & !bit,
            values: self.values & !bit,
        })
    }

    /// Literals in declaration order.
    pub fn literals(&self) -> impl Iterator<Item = (Feature, bool)> + '_ {
        self.space.features().filter_map(move |f| self.get(f).map(|v| (f, v)))
    }

    pub fn support(&self) -> impl Iterator<Item = Feature> + '_ {
        self.space.features().filter(move |&f| self.contains(f))
    }

    /// Whether the total configuration lies in the cube of this partial one.
    pub fn matches(&self, config: &TotalConfig) -> bool {
        (config.bits() ^ self.values) & self.support == 0
    }

    /// Whether every literal of `self` also occurs in `other`, i.e. the cube
    /// of `other` is contained in the cube of `self`.
    pub fn is_sub_of(&self, other: &PartialConfig) -> bool {
        self.support & !other.support == 0 && (self.values ^ other.values) & self.support == 0
    }

    pub fn is_total(&self) -> bool {
        self.support == self.space.mask()
    }
}

impl PartialEq for PartialConfig {
    fn eq(&self, other: &Self) -> bool {
        self.support == other.support && self.values == other.values && self.space == other.space
    }
}

impl Eq for PartialConfig {}

impl Hash for PartialConfig {
    fn hash<H: Hasher>(&self, state: &mut H) {
        self.support.hash(state);
        self.values.hash(state);
    }
}

impl PartialOrd for PartialConfig {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

/// Support size first, then the literal sequence in declaration order, where
/// a literal on an earlier feature sorts first and a positive literal sorts
/// before a negative one on the same feature.
impl Ord for PartialConfig {
    fn cmp(&self, other: &Self) -> Ordering {
        self.support_len().cmp(&other.support_len()).then_with(|| {
            let a = self.literals().map(|(f, v)| (f, !v));
            let b = other.literals().map(|(f, v)| (f, !v));
            a.cmp(b)
        })
    }
}

/// Renders the literal conjunction in declaration order, e.g. `e & !c`;
/// the empty support renders as `true`.
impl fmt::Display for PartialConfig {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.support == 0 {
            return f.write_str("true");
        }
        let mut first = true;
        for (feature, value) in self.literals() {
            if !first {
                f.write_str(" & ")?;
            }
            first = false;
            if !value {
                f.write_str("!")?;
            }
            f.write_str(self.space.name(feature))?;
        }
        Ok(())
    }
}

impl fmt::Debug for PartialConfig {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "PartialConfig({self})")
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn email() -> FeatureSpace {
        FeatureSpace::new(["m", "s", "e", "c", "a", "r"]).unwrap()
    }

    #[test]
    fn rejects_bad_identifiers() {
        assert_eq!(
            FeatureSpace::new(["1x"]).unwrap_err(),
            Error::InvalidFeatureName("1x".into())
        );
        assert!(matches!(FeatureSpace::new(["a", "a"]), Err(Error::DuplicateFeature(_))));
        assert_eq!(FeatureSpace::new(Vec::<String>::new()).unwrap_err(), Error::EmptySpace);
        assert!(FeatureSpace::new(["_ok9"]).is_ok());
    }

    #[test]
    fn caps_at_64_features() {
        let names: Vec<String> = (0..65).map(|i| format!("f{i}")).collect();
        assert_eq!(
            FeatureSpace::new(names.clone()).unwrap_err(),
            Error::TooManyFeatures(65)
        );
        let space = FeatureSpace::new(names[..64].to_vec()).unwrap();
        assert_eq!(space.mask(), u64::MAX);
        assert_eq!(space.total_count(), 1u128 << 64);
    }

    #[test]
    fn expand_drops_the_literal() {
        let space = email();
        let ec = PartialConfig::from_named(&space, &[("e", true), ("c", false)]).unwrap();
        let e = space.feature("e").unwrap();
        let c_only = ec.expand(e).unwrap();
        assert_eq!(c_only.to_string(), "!c");
        assert_eq!(c_only.with(e, true), ec);
        let a = PartialConfig::from_named(&space, &[("a", true)]).unwrap();
        assert!(a.expand(space.feature("a").unwrap()).unwrap().is_empty());
        assert_eq!(a.expand(e).unwrap_err(), Error::NotInSupport("e".into()));
    }

    #[test]
    fn display_and_order() {
        let space = email();
        let mea = TotalConfig::from_selected(&space, &["m", "e", "a"]).unwrap();
        assert_eq!(mea.to_string(), "m e a");
        assert_eq!(TotalConfig::from_bits(&space, 0).to_string(), "-");
        let a = PartialConfig::from_named(&space, &[("a", true)]).unwrap();
        let r = PartialConfig::from_named(&space, &[("r", true)]).unwrap();
        let ec = PartialConfig::from_named(&space, &[("e", true), ("c", false)]).unwrap();
        let mut v = vec![ec.clone(), r.clone(), a.clone()];
        v.sort();
        assert_eq!(v, vec![a, r, ec]);
        assert_eq!(PartialConfig::empty(&space).to_string(), "true");
    }

    #[test]
    fn total_order_is_lexicographic_bit_string() {
        let space = email();
        let m = TotalConfig::from_selected(&space, &["m"]).unwrap();
        let mec = TotalConfig::from_selected(&space, &["m", "e", "c"]).unwrap();
        let ms = TotalConfig::from_selected(&space, &["m", "s"]).unwrap();
        assert!(m < mec && mec < ms);
    }
}
