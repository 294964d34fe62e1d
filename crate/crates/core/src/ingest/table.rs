//! Measurement tables, thresholds, weight tables and effect sets.

use std::collections::BTreeMap;
use std::fmt;
use std::str::FromStr;

use num_bigint::BigInt;
use num_traits::Zero;

use crate::accountability::Rational;
use crate::configspace::{ConfigSet, FeatureSpace, TotalConfig};
use crate::error::{Error, Result};
use crate::formula::Formula;
use crate::ingest::configs::parse_configs;
use crate::ingest::decimal::Decimal;

/// Per-configuration metric values.
#[derive(Debug, Clone)]
pub struct MeasurementTable {
    space: FeatureSpace,
    metrics: Vec<String>,
    rows: BTreeMap<TotalConfig, Vec<Decimal>>,
}

impl MeasurementTable {
    pub fn space(&self) -> &FeatureSpace {
        &self.space
    }

    pub fn metrics(&self) -> &[String] {
        &self.metrics
    }

    pub fn len(&self) -> usize {
        self.rows.len()
    }

    pub fn is_empty(&self) -> bool {
        self.rows.is_empty()
    }

    pub fn value(&self, config: &TotalConfig, metric: &str) -> Option<Decimal> {
        let i = self.metrics.iter().position(|m| m == metric)?;
        self.rows.get(config).map(|r| r[i])
    }

    /// Rows in lexicographic configuration order.
    pub fn rows(&self) -> impl Iterator<Item = (&TotalConfig, &[Decimal])> {
        self.rows.iter().map(|(c, v)| (c, v.as_slice()))
    }
}

fn reader(text: &str) -> csv::Reader<&[u8]> {
    csv::ReaderBuilder::new()
        .trim(csv::Trim::All)
        .from_reader(text.as_bytes())
}

fn csv_error(e: csv::Error) -> Error {
    Error::Table(e.to_string())
}

/// Maps every feature of `space` to its column, rejecting missing and
/// repeated feature columns.
fn feature_columns(header: &csv::StringRecord, space: &FeatureSpace) -> Result<Vec<usize>> {
    let mut columns = vec![None; space.len()];
    for (i, name) in header.iter().enumerate() {
        if let Some(f) = space.lookup(name) {
            if columns[f.index()].replace(i).is_some() {
                return Err(Error::Table(format!("feature column `{name}` appears twice")));
            }
        }
    }
    columns
        .into_iter()
        .zip(space.names())
        .map(|(c, name)| c.ok_or_else(|| Error::Table(format!("missing feature column `{name}`"))))
        .collect()
}

fn read_config(record: &csv::StringRecord, columns: &[usize], space: &FeatureSpace, row: usize) -> Result<TotalConfig> {
    let mut bits = 0u64;
    for (f, &col) in space.features().zip(columns) {
        match record.get(col) {
            Some("1") => bits |= 1u64 << f.index(),
            Some("0") => {}
            other => {
                return Err(Error::Table(format!(
                    "row {row}: feature `{}` must be 0 or 1, found `{}`",
                    space.name(f),
                    other.unwrap_or("")
                )))
            }
        }
    }
    Ok(TotalConfig::from_bits(space, bits))
}

/// Loads a measurement CSV: a 0/1 column for every feature, in any order,
/// and every other column a metric.
pub fn load_measurements(text: &str, space: &FeatureSpace) -> Result<MeasurementTable> {
    let mut rdr = reader(text);
    let header = rdr.headers().map_err(csv_error)?.clone();
    let columns = feature_columns(&header, space)?;
    let metric_cols: Vec<usize> = (0..header.len()).filter(|i| !columns.contains(i)).collect();
    let metrics: Vec<String> = metric_cols.iter().map(|&i| header[i].to_string()).collect();
    let mut rows = BTreeMap::new();
    for (n, record) in rdr.records().enumerate() {
        let record = record.map_err(csv_error)?;
        let row = n + 2;
        let config = read_config(&record, &columns, space, row)?;
        let values = metric_cols
            .iter()
            .map(|&i| record.get(i).unwrap_or("").parse::<Decimal>())
            .collect::<Result<Vec<_>>>()?;
        if rows.insert(config.clone(), values).is_some() {
            return Err(Error::Table(format!(
                "row {row}: configuration `{config}` appears twice"
            )));
        }
    }
    Ok(MeasurementTable {
        space: space.clone(),
        metrics,
        rows,
    })
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Relation {
    Lt,
    Le,
    Gt,
    Ge,
    Eq,
    Ne,
}

impl Relation {
    pub fn holds(self, a: Decimal, b: Decimal) -> bool {
        match self {
            Relation::Lt => a < b,
            Relation::Le => a <= b,
            Relation::Gt => a > b,
            Relation::Ge => a >= b,
            Relation::Eq => a == b,
            Relation::Ne => a != b,
        }
    }

    fn symbol(self) -> &'static str {
        match self {
            Relation::Lt => "<",
            Relation::Le => "<=",
            Relation::Gt => ">",
            Relation::Ge => ">=",
            Relation::Eq => "=",
            Relation::Ne => "!=",
        }
    }
}

/// `metric REL value`, selecting configurations whose metric satisfies the
/// relation.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Threshold {
    pub metric: String,
    pub relation: Relation,
    pub value: Decimal,
}

impl FromStr for Threshold {
    type Err = Error;

    /// Relations: `<`, `<=`, `>`, `>=`, `=`, `==`, `!=`, and `≤`, `≥`, `≠`.
    fn from_str(text: &str) -> Result<Threshold> {
        let syntax = |column: usize, message: &str| Error::Syntax {
            line: 1,
            column,
            message: message.to_string(),
        };
        let s = text.trim_start();
        let lead = text.len() - s.len();
        let end = s
            .find(|c: char| !(c.is_ascii_alphanumeric() || c == '_'))
            .unwrap_or(s.len());
        if end == 0 {
            return Err(syntax(lead + 1, "expected a metric name"));
        }
        let metric = s[..end].to_string();
        let rest = s[end..].trim_start();
        let rel_col = text.len() - rest.len() + 1;
        const RELATIONS: [(&str, Relation); 10] = [
            ("<=", Relation::Le),
            (">=", Relation::Ge),
            ("==", Relation::Eq),
            ("!=", Relation::Ne),
            ("≤", Relation::Le),
            ("≥", Relation::Ge),
            ("≠", Relation::Ne),
            ("<", Relation::Lt),
            (">", Relation::Gt),
            ("=", Relation::Eq),
        ];
        let Some((sym, relation)) = RELATIONS.iter().find(|(sym, _)| rest.starts_with(sym)) else {
            return Err(syntax(rel_col, "expected one of < <= > >= = !="));
        };
        let value = rest[sym.len()..].parse::<Decimal>()?;
        Ok(Threshold {
            metric,
            relation: *relation,
            value,
        })
    }
}

impl fmt::Display for Threshold {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{} {} {}", self.metric, self.relation.symbol(), self.value)
    }
}

/// How the effect set is given.
#[derive(Debug, Clone)]
pub enum EffectSpec {
    Expression(Formula),
    ConfigList(Vec<TotalConfig>),
    Threshold(Threshold),
}

/// An effect set together with diagnostics worth reporting.
#[derive(Debug, Clone)]
pub struct Effect {
    pub set: ConfigSet,
    pub warnings: Vec<String>,
}

/// Builds `E ⊆ V` from a specification. Threshold specifications need a
/// table with exactly one row for every valid configuration and no others.
pub fn effect_set(spec: &EffectSpec, table: Option<&MeasurementTable>, valid: &ConfigSet) -> Result<Effect> {
    let engine = valid.engine();
    match spec {
        EffectSpec::Expression(f) => Ok(Effect {
            set: &f.to_set(engine) & valid,
            warnings: Vec::new(),
        }),
        EffectSpec::ConfigList(configs) => {
            let mut warnings = Vec::new();
            for c in configs {
                if !valid.contains(c) {
                    warnings.push(format!("listed configuration `{c}` is not valid and was ignored"));
                }
            }
            Ok(Effect {
                set: &engine.from_configs(configs) & valid,
                warnings,
            })
        }
        EffectSpec::Threshold(t) => {
            let table = table.ok_or_else(|| Error::Table("threshold effects need a measurement table".into()))?;
            if table.space() != valid.space() {
                return Err(Error::SpaceMismatch);
            }
            let metric = table
                .metrics()
                .iter()
                .position(|m| *m == t.metric)
                .ok_or_else(|| Error::UnknownMetric(t.metric.clone()))?;
            let mut selected = Vec::new();
            for (config, values) in table.rows() {
                if !valid.contains(config) {
                    return Err(Error::Table(format!("configuration `{config}` is not valid")));
                }
                if t.relation.holds(values[metric], t.value) {
                    selected.push(config.clone());
                }
            }
            if (table.len() as u128) < valid.count() {
                let missing = valid
                    .configs()
                    .into_iter()
                    .find(|c| !table.rows.contains_key(c))
                    .expect("fewer rows than valid configurations");
                return Err(Error::TableIncomplete(missing.to_string()));
            }
            Ok(Effect {
                set: engine.from_configs(&selected),
                warnings: Vec::new(),
            })
        }
    }
}

/// Parses `p/q`, an integer, or a decimal as an exact rational.
pub fn parse_rational(text: &str) -> Result<Rational> {
    let t = text.trim();
    if let Some((p, q)) = t.split_once('/') {
        let bad = || Error::InvalidDecimal(text.to_string());
        let p: BigInt = p.trim().parse().map_err(|_| bad())?;
        let q: BigInt = q.trim().parse().map_err(|_| bad())?;
        if q.is_zero() {
            return Err(bad());
        }
        return Ok(Rational::new(p, q));
    }
    Ok(t.parse::<Decimal>()?.to_rational())
}

/// Parses a weight table: a `weight` column plus either a `config` column in
/// configuration-list notation or a 0/1 column per feature.
pub fn parse_weights(text: &str, space: &FeatureSpace) -> Result<Vec<(TotalConfig, Rational)>> {
    let mut rdr = reader(text);
    let header = rdr.headers().map_err(csv_error)?.clone();
    let weight_col = header
        .iter()
        .position(|h| h == "weight")
        .ok_or_else(|| Error::Table("missing `weight` column".into()))?;
    let config_col = header.iter().position(|h| h == "config");
    let columns = match config_col {
        Some(_) => Vec::new(),
        None => feature_columns(&header, space)?,
    };
    let mut out = Vec::new();
    for (n, record) in rdr.records().enumerate() {
        let record = record.map_err(csv_error)?;
        let row = n + 2;
        let config = match config_col {
            Some(i) => {
                let cell = record.get(i).unwrap_or("");
                let mut parsed = parse_configs(cell, space)?;
                if parsed.len() != 1 {
                    return Err(Error::Table(format!("row {row}: expected one configuration")));
                }
                parsed.pop().expect("length checked")
            }
            None => read_config(&record, &columns, space, row)?,
        };
        out.push((config, parse_rational(record.get(weight_col).unwrap_or(""))?));
    }
    Ok(out)
}
