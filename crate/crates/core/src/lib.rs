//! Feature causes of effects in configurable systems.
//!
//! An [`AnalysisSession`] pairs the valid configurations `V` with an effect
//! set `E ⊆ V`. Its causes are the minimal partial configurations whose valid
//! completions all exhibit the effect. On top of them sit concise
//! explications, responsibility and blame of features, and interaction
//! witnesses.
//!
//! ```
//! use feature_causes::ingest::{parse_expression, parse_model};
//! use feature_causes::AnalysisSession;
//!
//! let model = parse_model("features: x y z\nvalid: x -> y").unwrap();
//! let effect = parse_expression("y & z", &model.space).unwrap().to_set(&model.engine);
//! let session = AnalysisSession::new(model.valid.clone(), &effect & &model.valid).unwrap();
//! let causes: Vec<String> = session.causes().iter().map(|c| c.to_string()).collect();
//! // `x` forces `y`, so `x & z` suffices as well.
//! assert_eq!(causes, ["x & z", "y & z"]);
//! ```

pub mod accountability;
pub mod causes;
pub mod configspace;
mod error;
pub mod explications;
pub mod formula;
pub mod ingest;
pub mod interactions;
pub mod primes;

pub use accountability::{Distribution, Rational};
pub use causes::{AnalysisSession, CauseSet};
pub use configspace::{ConfigSet, Engine, Feature, FeatureSpace, PartialConfig, TotalConfig};
pub use error::{Error, Result};
pub use formula::Formula;
