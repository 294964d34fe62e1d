//! Interaction witnesses and interaction necessity.

use crate::causes::{AnalysisSession, CauseSet, NAIVE_LIMIT};
use crate::configspace::PartialConfig;
use crate::error::{Error, Result};

/// Smallest support size among the causes, `None` without causes.
pub fn min_support_size(s: &AnalysisSession) -> Option<usize> {
    s.causes().min_support()
}

/// The interaction degree `t` and all causes of support size `t`, which are
/// exactly the `t`-way interaction witnesses.
pub fn tway_witnesses(s: &AnalysisSession) -> Result<(usize, CauseSet)> {
    let t = min_support_size(s).ok_or(Error::NoCauses)?;
    let witnesses = s.causes().iter().filter(|g| g.support_len() == t).cloned().collect();
    Ok((t, witnesses))
}

/// Direct check: `omega` is sufficient, and no partial configuration with one
/// feature fewer in its support is sufficient. Limited to [`NAIVE_LIMIT`]
/// features.
pub fn is_tway_witness(omega: &PartialConfig, s: &AnalysisSession) -> Result<bool> {
    let n = s.space().len();
    if n > NAIVE_LIMIT {
        return Err(Error::OracleTooLarge {
            features: n,
            limit: NAIVE_LIMIT,
        });
    }
    if omega.space() != s.space() {
        return Err(Error::SpaceMismatch);
    }
    if !s.is_sufficient(omega) {
        return Ok(false);
    }
    let t = omega.support_len();
    if t == 0 {
        return Ok(true);
    }
    let k = (t - 1) as u32;
    for support in (0u64..1 << n).filter(|m| m.count_ones() == k) {
        // Enumerate every value assignment on `support` as a submask.
        let mut values = support;
        loop {
            if s.is_sufficient(&PartialConfig::from_masks(s.space(), support, values)) {
                return Ok(false);
            }
            if values == 0 {
                break;
            }
            values = (values - 1) & support;
        }
    }
    Ok(true)
}

/// Whether every cause involves at least two features.
pub fn interaction_necessity(s: &AnalysisSession) -> bool {
    min_support_size(s).is_some_and(|t| t >= 2)
}
