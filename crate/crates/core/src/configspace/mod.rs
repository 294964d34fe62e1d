//! Feature universes, partial and total configurations, and canonical sets of
//! configurations.

mod bdd;
mod set;
mod space;
mod switch;

pub(crate) use bdd::{NodeId, Store, FALSE, TRUE};
pub use set::{ConfigSet, Engine};
pub use space::{Feature, FeatureSpace, PartialConfig, TotalConfig, MAX_FEATURES};
pub use switch::Switch;
