//! Switches, responsibility and blame, in exact rational arithmetic.

use std::collections::BTreeMap;

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};

use crate::causes::AnalysisSession;
use crate::configspace::{ConfigSet, Feature, PartialConfig, TotalConfig};
use crate::error::{Error, Result};

pub type Rational = BigRational;

/// Flips exactly the features in `y`.
pub fn switch(y: &[Feature], theta: &TotalConfig) -> TotalConfig {
    let mask = y.iter().fold(0u64, |m, f| m | 1u64 << f.index());
    theta.flip_mask(mask)
}

/// A probability distribution over valid configurations.
#[derive(Debug, Clone)]
pub struct Distribution {
    kind: Kind,
}

#[derive(Debug, Clone)]
enum Kind {
    Uniform { support: ConfigSet, mass: Rational },
    Table(BTreeMap<TotalConfig, Rational>),
}

impl Distribution {
    /// Mass `1/|E|` on every effect instance.
    pub fn uniform_over_effects(s: &AnalysisSession) -> Result<Distribution> {
        if s.effect().is_empty() {
            return Err(Error::EmptyEffect);
        }
        Ok(Distribution::uniform(s.effect()))
    }

    /// Mass `1/|V|` on every valid configuration.
    pub fn uniform_over_valid(s: &AnalysisSession) -> Distribution {
        Distribution::uniform(s.valid())
    }

    fn uniform(support: &ConfigSet) -> Distribution {
        let mass = Rational::new(BigInt::one(), BigInt::from(support.count()));
        Distribution {
            kind: Kind::Uniform {
                support: support.clone(),
                mass,
            },
        }
    }

    /// Explicit weights. Rejects negative weights, repeated configurations,
    /// configurations outside `V` and totals other than one.
    pub fn from_weights<I>(weights: I, s: &AnalysisSession) -> Result<Distribution>
    where
        I: IntoIterator<Item = (TotalConfig, Rational)>,
    {
        let mut table = BTreeMap::new();
        let mut total = Rational::zero();
        for (config, w) in weights {
            if config.space() != s.space() {
                return Err(Error::SpaceMismatch);
            }
            if w.is_negative() {
                return Err(Error::InvalidDistribution(format!("negative weight for `{config}`")));
            }
            if !s.valid().contains(&config) {
                return Err(Error::InvalidDistribution(format!(
                    "`{config}` is not a valid configuration"
                )));
            }
            total += &w;
            if table.insert(config.clone(), w).is_some() {
                return Err(Error::InvalidDistribution(format!("`{config}` is listed twice")));
            }
        }
        if !total.is_one() {
            return Err(Error::InvalidDistribution(format!("weights sum to {total}, not 1")));
        }
        Ok(Distribution {
            kind: Kind::Table(table),
        })
    }

    pub fn weight(&self, theta: &TotalConfig) -> Rational {
        match &self.kind {
            Kind::Uniform { support, mass } => {
                if support.contains(theta) {
                    mass.clone()
                } else {
                    Rational::zero()
                }
            }
            Kind::Table(t) => t.get(theta).cloned().unwrap_or_else(Rational::zero),
        }
    }

    fn check(&self, s: &AnalysisSession) -> Result<()> {
        let ok = match &self.kind {
            Kind::Uniform { support, .. } => support.engine().same(s.engine()),
            Kind::Table(t) => t.keys().next().is_none_or(|c| c.space() == s.space()),
        };
        if ok {
            Ok(())
        } else {
            Err(Error::SpaceMismatch)
        }
    }
}

/// Responsibility data for one effect instance, shared by every query on it.
struct Instance {
    /// Union of the supports of causes covering the instance.
    gate: u64,
    distances: Vec<Option<u32>>,
}

impl Instance {
    fn new(eta: &TotalConfig, s: &AnalysisSession) -> Instance {
        let gate = s
            .causes()
            .iter()
            .filter(|g| g.matches(eta))
            .fold(0u64, |m, g| m | g.support_mask());
        Instance {
            gate,
            distances: s.non_effect().switch_distances(eta),
        }
    }

    /// Switch distance for `x`, or `None` when the gate excludes it.
    fn feature(&self, x: Feature) -> Option<u32> {
        if self.gate & (1u64 << x.index()) == 0 {
            return None;
        }
        Some(self.distances[x.index()].expect("a cause containing x has a counterfactual witness"))
    }

    fn interaction(&self, p: &PartialConfig, eta: &TotalConfig, s: &AnalysisSession) -> Option<u32> {
        if p.is_empty() {
            return None;
        }
        let gated = s.causes().iter().any(|g| g.matches(eta) && p.is_sub_of(g));
        if !gated {
            return None;
        }
        p.support()
            .map(|x| self.distances[x.index()].expect("support lies inside a cause"))
            .min()
    }
}

fn check_instance(eta: &TotalConfig, s: &AnalysisSession) -> Result<()> {
    if eta.space() != s.space() {
        return Err(Error::SpaceMismatch);
    }
    if !s.effect().contains(eta) {
        return Err(Error::NotAnEffectInstance(eta.to_string()));
    }
    Ok(())
}

fn unit_fraction(d: Option<u32>) -> Rational {
    match d {
        Some(d) => Rational::new(BigInt::one(), BigInt::from(d)),
        None => Rational::zero(),
    }
}

/// Degree of responsibility of `x` for the effect at `eta`: zero unless `x`
/// occurs in a cause covering `eta`, otherwise the reciprocal of the fewest
/// switches, `x` included, that reach a valid non-effect configuration.
pub fn responsibility(x: Feature, eta: &TotalConfig, s: &AnalysisSession) -> Result<Rational> {
    check_instance(eta, s)?;
    Ok(unit_fraction(Instance::new(eta, s).feature(x)))
}

/// Responsibility of every feature at `eta`, indexed by feature.
pub fn responsibility_profile(eta: &TotalConfig, s: &AnalysisSession) -> Result<Vec<Rational>> {
    check_instance(eta, s)?;
    let inst = Instance::new(eta, s);
    Ok(s.space().features().map(|x| unit_fraction(inst.feature(x))).collect())
}

/// Responsibility of a partial configuration: zero unless some cause covering
/// `eta` extends `p`, otherwise the reciprocal of the fewest switches that
/// touch the support of `p` and leave the effect.
pub fn interaction_responsibility(p: &PartialConfig, eta: &TotalConfig, s: &AnalysisSession) -> Result<Rational> {
    check_instance(eta, s)?;
    if p.space() != s.space() {
        return Err(Error::SpaceMismatch);
    }
    Ok(unit_fraction(Instance::new(eta, s).interaction(p, eta, s)))
}

/// Accumulates `Σ π(η) / d(η)`, keeping uniform mass factored out.
struct Sum {
    uniform: Option<Rational>,
    counts: BTreeMap<u32, u64>,
    exact: Rational,
}

impl Sum {
    fn new(dist: &Distribution) -> Sum {
        Sum {
            uniform: match &dist.kind {
                Kind::Uniform { mass, .. } => Some(mass.clone()),
                Kind::Table(_) => None,
            },
            counts: BTreeMap::new(),
            exact: Rational::zero(),
        }
    }

    fn add(&mut self, weight: &Rational, d: Option<u32>) {
        let Some(d) = d else { return };
        if self.uniform.is_some() {
            *self.counts.entry(d).or_default() += 1;
        } else {
            self.exact += weight / Rational::from_integer(BigInt::from(d));
        }
    }

    fn finish(self) -> Rational {
        match self.uniform {
            Some(mass) => {
                let total = self.counts.into_iter().fold(Rational::zero(), |acc, (d, n)| {
                    acc + Rational::new(BigInt::from(n), BigInt::from(d))
                });
                total * mass
            }
            None => self.exact,
        }
    }
}

/// Effect instances carrying mass, with their weights.
fn weighted_effects(dist: &Distribution, s: &AnalysisSession) -> Vec<(TotalConfig, Rational)> {
    match &dist.kind {
        Kind::Uniform { support, mass } => (support & s.effect())
            .configs()
            .into_iter()
            .map(|c| (c, mass.clone()))
            .collect(),
        Kind::Table(t) => t
            .iter()
            .filter(|(c, w)| !w.is_zero() && s.effect().contains(c))
            .map(|(c, w)| (c.clone(), w.clone()))
            .collect(),
    }
}

/// Expected responsibility of `x` under `dist`.
pub fn blame(x: Feature, dist: &Distribution, s: &AnalysisSession) -> Result<Rational> {
    Ok(blame_all(dist, s)?.swap_remove(x.index()))
}

/// Blame of every feature, indexed by feature.
pub fn blame_all(dist: &Distribution, s: &AnalysisSession) -> Result<Vec<Rational>> {
    dist.check(s)?;
    let mut sums: Vec<Sum> = s.space().features().map(|_| Sum::new(dist)).collect();
    for (eta, w) in weighted_effects(dist, s) {
        let inst = Instance::new(&eta, s);
        for x in s.space().features() {
            sums[x.index()].add(&w, inst.feature(x));
        }
    }
    Ok(sums.into_iter().map(Sum::finish).collect())
}

/// Expected responsibility of the partial configuration `p` under `dist`.
pub fn interaction_blame(p: &PartialConfig, dist: &Distribution, s: &AnalysisSession) -> Result<Rational> {
    Ok(interaction_blame_many(std::slice::from_ref(p), dist, s)?.swap_remove(0))
}

/// [`interaction_blame`] for several partial configurations in one pass.
pub fn interaction_blame_many(ps: &[PartialConfig], dist: &Distribution, s: &AnalysisSession) -> Result<Vec<Rational>> {
    dist.check(s)?;
    if ps.iter().any(|p| p.space() != s.space()) {
        return Err(Error::SpaceMismatch);
    }
    let mut sums: Vec<Sum> = ps.iter().map(|_| Sum::new(dist)).collect();
    for (eta, w) in weighted_effects(dist, s) {
        let inst = Instance::new(&eta, s);
        for (sum, p) in sums.iter_mut().zip(ps) {
            sum.add(&w, inst.interaction(p, &eta, s));
        }
    }
    Ok(sums.into_iter().map(Sum::finish).collect())
}

/// Renders a rational as `p/q`, or `p` for integers.
pub fn format_exact(r: &Rational) -> String {
    if r.is_integer() {
        r.numer().to_string()
    } else {
        format!("{}/{}", r.numer(), r.denom())
    }
}

/// Decimal rendering rounded half away from zero to `digits` significant
/// digits, trailing zeros removed.
pub fn format_decimal(r: &Rational, digits: usize) -> String {
    let digits = digits.max(1) as i64;
    if r.is_zero() {
        return "0".to_string();
    }
    let sign = if r.is_negative() { "-" } else { "" };
    let r = r.abs();
    let ten = BigInt::from(10);
    // Exponent e with 10^e <= r < 10^(e+1).
    let mut e: i64 = r.numer().to_string().len() as i64 - r.denom().to_string().len() as i64;
    let pow = |k: i64| -> Rational {
        if k >= 0 {
            Rational::from_integer(num_traits::pow(ten.clone(), k as usize))
        } else {
            Rational::new(BigInt::one(), num_traits::pow(ten.clone(), (-k) as usize))
        }
    };
    while r < pow(e) {
        e -= 1;
    }
    while r >= pow(e + 1) {
        e += 1;
    }
    let shift = digits - 1 - e;
    let scaled = &r * pow(shift);
    let half = Rational::new(BigInt::one(), BigInt::from(2));
    let mut mantissa = (scaled + half).floor().to_integer();
    let mut shift = shift;
    if mantissa == num_traits::pow(ten.clone(), digits as usize) {
        mantissa = mantissa.div_floor(&ten);
        shift -= 1;
    }
    let mut text = mantissa.to_string();
    if shift <= 0 {
        text.extend(std::iter::repeat_n('0', (-shift) as usize));
        return format!("{sign}{text}");
    }
    let shift = shift as usize;
    if text.len() <= shift {
        text = format!("{}{}", "0".repeat(shift - text.len() + 1), text);
    }
    let point = text.len() - shift;
    let (int, frac) = text.split_at(point);
    let frac = frac.trim_end_matches('0');
    if frac.is_empty() {
        format!("{sign}{int}")
    } else {
        format!("{sign}{int}.{frac}")
    }
}
