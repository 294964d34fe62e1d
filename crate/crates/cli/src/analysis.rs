//! One analysis per effect: builds the session and computes every requested
//! section into plain data.

use std::sync::Arc;
use std::time::{Duration, Instant};

use anyhow::{bail, Context};
use feature_causes::accountability::{blame_all, interaction_blame_many, responsibility_profile, Distribution};
use feature_causes::explications::{
    cause_effect_cover, characteristic_formula, dls_simplify, is_cover, most_general_causes, CoverStrategy,
};
use feature_causes::ingest::{
    effect_set, load_measurements, parse_configs, parse_expression, parse_model, parse_weights, EffectSpec, Threshold,
};
use feature_causes::interactions::{interaction_necessity, tway_witnesses};
use feature_causes::{AnalysisSession, CauseSet, Error, FeatureSpace, PartialConfig, Rational};

use crate::{CoverChoice, Failure};

#[derive(Clone, Copy, Debug)]
pub struct Sections {
    pub causes: bool,
    pub explicate: bool,
    pub account: bool,
    pub interactions: bool,
}

impl Sections {
    pub const CAUSES: Sections = Sections {
        causes: true,
        explicate: false,
        account: false,
        interactions: false,
    };
    pub const EXPLICATE: Sections = Sections {
        explicate: true,
        ..Sections::CAUSES
    };
    pub const ACCOUNT: Sections = Sections {
        account: true,
        ..Sections::CAUSES
    };
    pub const INTERACTIONS: Sections = Sections {
        interactions: true,
        ..Sections::CAUSES
    };
    pub const ALL: Sections = Sections {
        causes: true,
        explicate: true,
        account: true,
        interactions: true,
    };
}

pub enum EffectSource {
    Expression(String),
    List { name: String, text: String },
    Threshold { table: Arc<String>, threshold: Threshold },
}

impl EffectSource {
    fn label(&self) -> String {
        match self {
            EffectSource::Expression(e) => e.trim().to_string(),
            EffectSource::List { name, .. } => format!("list {name}"),
            EffectSource::Threshold { threshold, .. } => threshold.to_string(),
        }
    }
}

pub enum DistSpec {
    UniformEffects,
    UniformValid,
    Weights { name: String, text: String },
}

impl DistSpec {
    fn label(&self) -> &str {
        match self {
            DistSpec::UniformEffects => "uniform-effects",
            DistSpec::UniformValid => "uniform-valid",
            DistSpec::Weights { name, .. } => name,
        }
    }
}

pub struct Request {
    pub model_text: String,
    pub sections: Sections,
    pub negate: bool,
    pub cover: Option<CoverChoice>,
    pub dist: DistSpec,
    pub per_instance: bool,
    pub pairs: Vec<String>,
    pub features: Option<Vec<String>>,
}

impl Request {
    pub fn validate(&self, space: &FeatureSpace) -> anyhow::Result<()> {
        for p in &self.pairs {
            parse_pair(p, space)?;
        }
        for f in self.features.iter().flatten() {
            space.feature(f).with_context(|| "in --features")?;
        }
        Ok(())
    }
}

/// `f=1,g=0` (also `f`, `!f`, `f=true`) as a partial configuration.
pub fn parse_pair(spec: &str, space: &FeatureSpace) -> anyhow::Result<PartialConfig> {
    let mut literals: Vec<(&str, bool)> = Vec::new();
    for part in spec.split(',').map(str::trim) {
        let (name, value) = match part.split_once('=') {
            Some((n, v)) => match v.trim() {
                "1" | "true" => (n.trim(), true),
                "0" | "false" => (n.trim(), false),
                other => bail!("in --pairs `{spec}`: value `{other}` is not 0 or 1"),
            },
            None => match part.strip_prefix('!') {
                Some(n) => (n.trim(), false),
                None => (part, true),
            },
        };
        if name.is_empty() {
            bail!("in --pairs `{spec}`: missing feature name");
        }
        if literals.iter().any(|(n, _)| *n == name) {
            bail!("in --pairs `{spec}`: feature `{name}` given twice");
        }
        literals.push((name, value));
    }
    PartialConfig::from_named(space, &literals).with_context(|| format!("in --pairs `{spec}`"))
}

pub struct Explication {
    pub chi: String,
    pub chi_length: usize,
    pub dls: String,
    pub dls_length: usize,
    pub most_general: Vec<String>,
    pub most_general_dls: String,
    pub greedy: Option<Vec<String>>,
    pub exact: Option<ExactCover>,
}

pub enum ExactCover {
    Found(Vec<String>),
    TooLarge { candidates: usize, limit: usize },
}

pub struct Account {
    pub distribution: String,
    /// Feature name and blame.
    pub blame: Vec<(String, Rational)>,
    pub cause_blame: Vec<(String, Rational)>,
    pub pairs: Vec<(String, Rational)>,
    pub per_instance: Option<PerInstance>,
}

/// Responsibility of the reported features at every effect instance.
pub struct PerInstance {
    pub features: Vec<String>,
    pub rows: Vec<(String, Vec<Rational>)>,
}

pub struct Interactions {
    pub degree: Option<usize>,
    pub witnesses: Vec<String>,
    pub necessary: bool,
}

pub struct Analysis {
    pub effect: String,
    pub negated: bool,
    pub features: usize,
    pub valid: u128,
    pub effect_count: u128,
    pub warnings: Vec<String>,
    pub causes: Option<Vec<String>>,
    pub explication: Option<Explication>,
    pub account: Option<Account>,
    pub interactions: Option<Interactions>,
    pub elapsed: Duration,
}

fn names(set: &CauseSet) -> Vec<String> {
    set.iter().map(|c| c.to_string()).collect()
}

fn build_session(request: &Request, source: &EffectSource) -> anyhow::Result<(AnalysisSession, Vec<String>)> {
    let model = parse_model(&request.model_text).context("in model")?;
    let (spec, table) = match source {
        EffectSource::Expression(e) => (
            EffectSpec::Expression(parse_expression(e, &model.space).context("in --effect-expr")?),
            None,
        ),
        EffectSource::List { name, text } => (
            EffectSpec::ConfigList(parse_configs(text, &model.space).with_context(|| format!("in {name}"))?),
            None,
        ),
        EffectSource::Threshold { table, threshold } => (
            EffectSpec::Threshold(threshold.clone()),
            Some(load_measurements(table, &model.space).context("in measurements")?),
        ),
    };
    let effect = effect_set(&spec, table.as_ref(), &model.valid)?;
    let mut session = AnalysisSession::new(model.valid, effect.set)?;
    if request.negate {
        session = session.negated();
    }
    Ok((session, effect.warnings))
}

pub fn analyse(request: &Request, source: &EffectSource) -> Result<Analysis, Failure> {
    let start = Instant::now();
    let (s, warnings) = build_session(request, source).with_context(|| format!("effect `{}`", source.label()))?;
    let space = s.space().clone();

    check_causes(&s)?;
    let causes = names(s.causes());

    let explication = request.sections.explicate.then(|| explicate(request, &s)).transpose()?;
    let account = request.sections.account.then(|| account(request, &s)).transpose()?;
    let interactions = request.sections.interactions.then(|| {
        let (degree, witnesses) = match tway_witnesses(&s) {
            Ok((t, w)) => (Some(t), names(&w)),
            Err(_) => (None, Vec::new()),
        };
        Interactions {
            degree,
            witnesses,
            necessary: interaction_necessity(&s),
        }
    });

    Ok(Analysis {
        effect: source.label(),
        negated: request.negate,
        features: space.len(),
        valid: s.valid().count(),
        effect_count: s.effect().count(),
        warnings,
        causes: request.sections.causes.then_some(causes),
        explication,
        account,
        interactions,
        elapsed: start.elapsed(),
    })
}

/// Every cause is sufficient, and together they cover the effect.
fn check_causes(s: &AnalysisSession) -> Result<(), Failure> {
    if let Some(bad) = s.causes().iter().find(|g| !s.is_sufficient(g)) {
        return Err(Failure::Invariant(format!("cause `{bad}` is not sufficient")));
    }
    if !is_cover(s.causes(), s) {
        return Err(Failure::Invariant("causes do not cover the effect".into()));
    }
    Ok(())
}

fn explicate(request: &Request, s: &AnalysisSession) -> Result<Explication, Failure> {
    let chi = characteristic_formula(s.causes());
    let dls = dls_simplify(&chi);
    let mg = most_general_causes(s);
    let mg_dls = dls_simplify(&characteristic_formula(mg));
    let checked = |cover: CauseSet, what: &str| {
        if is_cover(&cover, s) {
            Ok(names(&cover))
        } else {
            Err(Failure::Invariant(format!("{what} cover misses effect instances")))
        }
    };
    let greedy = match request.cover {
        None | Some(CoverChoice::Greedy) => Some(checked(cause_effect_cover(s, CoverStrategy::Greedy)?, "greedy")?),
        Some(CoverChoice::Exact) => None,
    };
    let exact = match request.cover {
        None | Some(CoverChoice::Exact) => Some(match cause_effect_cover(s, CoverStrategy::Exact) {
            Ok(c) => ExactCover::Found(checked(c, "exact")?),
            Err(Error::CoverTooLarge { candidates, limit }) => ExactCover::TooLarge { candidates, limit },
            Err(e) => return Err(e.into()),
        }),
        Some(CoverChoice::Greedy) => None,
    };
    let space = s.space();
    Ok(Explication {
        chi: chi.display(space).to_string(),
        chi_length: chi.length(),
        dls: dls.display(space).to_string(),
        dls_length: dls.length(),
        most_general: names(mg),
        most_general_dls: mg_dls.display(space).to_string(),
        greedy,
        exact,
    })
}

fn account(request: &Request, s: &AnalysisSession) -> Result<Account, Failure> {
    let space = s.space();
    let selected: Vec<_> = match &request.features {
        Some(list) => list.iter().map(|n| space.feature(n)).collect::<Result<_, _>>()?,
        None => space.features().collect(),
    };
    let pairs: Vec<(String, PartialConfig)> = request
        .pairs
        .iter()
        .map(|p| Ok((p.clone(), parse_pair(p, space)?)))
        .collect::<anyhow::Result<_>>()?;
    let mut out = Account {
        distribution: request.dist.label().to_string(),
        blame: Vec::new(),
        cause_blame: Vec::new(),
        pairs: Vec::new(),
        per_instance: None,
    };
    if s.effect().is_empty() {
        return Ok(out);
    }
    let dist = match &request.dist {
        DistSpec::UniformEffects => Distribution::uniform_over_effects(s)?,
        DistSpec::UniformValid => Distribution::uniform_over_valid(s),
        DistSpec::Weights { name, text } => {
            let weights = parse_weights(text, space).with_context(|| format!("in {name}"))?;
            Distribution::from_weights(weights, s).with_context(|| format!("in {name}"))?
        }
    };
    let blame = blame_all(&dist, s)?;
    out.blame = selected
        .iter()
        .map(|&f| (space.name(f).to_string(), blame[f.index()].clone()))
        .collect();
    let causes = s.causes().as_slice();
    let cause_blame = interaction_blame_many(causes, &dist, s)?;
    out.cause_blame = causes.iter().map(|c| c.to_string()).zip(cause_blame).collect();
    let queried: Vec<PartialConfig> = pairs.iter().map(|(_, p)| p.clone()).collect();
    let pair_blame = interaction_blame_many(&queried, &dist, s)?;
    out.pairs = pairs.into_iter().map(|(n, _)| n).zip(pair_blame).collect();
    if request.per_instance {
        let features = selected.iter().map(|&f| space.name(f).to_string()).collect();
        let mut rows = Vec::new();
        for eta in s.effect().configs() {
            let profile = responsibility_profile(&eta, s)?;
            let row = selected.iter().map(|f| profile[f.index()].clone()).collect();
            rows.push((eta.to_string(), row));
        }
        out.per_instance = Some(PerInstance { features, rows });
    }
    for (_, r) in out.blame.iter().chain(&out.cause_blame).chain(&out.pairs) {
        if *r < Rational::from_integer(0.into()) || *r > Rational::from_integer(1.into()) {
            return Err(Failure::Invariant(format!("blame {r} outside [0, 1]")));
        }
    }
    Ok(out)
}
