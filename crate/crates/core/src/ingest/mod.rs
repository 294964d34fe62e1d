//! Parsing of models, expressions, configuration lists and tables.

mod configs;
mod decimal;
mod expr;
mod table;

pub use configs::{parse_config_list, parse_configs, render_config_list};
pub use decimal::Decimal;
pub use expr::{parse_expression, parse_model, Model};
pub use table::{
    effect_set, load_measurements, parse_rational, parse_weights, Effect, EffectSpec, MeasurementTable, Relation,
    Threshold,
};
