//! Achievable-rate layer: instantaneous SINR, Monte Carlo ergodic rates,
//! closed-form asymptotics and bounds, and the comparison against a
//! classical antenna-array receiver.

pub mod bounds;
pub mod closed_form;
pub mod comparison;
pub mod monte_carlo;
pub mod sinr;

use serde::{Deserialize, Serialize};
use std::fmt;

use crate::channel::FadingModel;

pub use bounds::{lb_bound, zeta_bound};
pub use closed_form::{closed_form_rate, mmimo_baseline_rate, power_scaling_limit, rate_gaps, saturation_cap, GapReport};
pub use comparison::{comparison_suite, snr_ratio_per_sensor, ComparisonFactors, RadioBaseline, RadioBaselineConfig};
pub use monte_carlo::{ergodic_rate_mc, LargeScale, McScenario, RateEstimate, UserDrop};
pub use sinr::{combiner_matrix, sinr, sinr_all};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "UPPERCASE")]
pub enum CombinerKind {
    Mrc,
    Zf,
}

impl CombinerKind {
    pub fn label(self) -> &'static str {
        match self {
            CombinerKind::Mrc => "MRC",
            CombinerKind::Zf => "ZF",
        }
    }
}

/// Combiner and fading model pair, e.g. `MRC_UFC`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct RateCase {
    pub combiner: CombinerKind,
    pub model: FadingModel,
}

impl RateCase {
    pub const MRC_UFC: RateCase = RateCase { combiner: CombinerKind::Mrc, model: FadingModel::Ufc };
    pub const MRC_CFC: RateCase = RateCase { combiner: CombinerKind::Mrc, model: FadingModel::Cfc };
    pub const ZF_UFC: RateCase = RateCase { combiner: CombinerKind::Zf, model: FadingModel::Ufc };
    pub const ZF_CFC: RateCase = RateCase { combiner: CombinerKind::Zf, model: FadingModel::Cfc };
    pub const ALL: [RateCase; 4] = [Self::MRC_UFC, Self::MRC_CFC, Self::ZF_UFC, Self::ZF_CFC];
}

impl fmt::Display for RateCase {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}_{}", self.combiner.label(), self.model.label())
    }
}

impl std::str::FromStr for RateCase {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        RateCase::ALL
            .into_iter()
            .find(|c| c.to_string().eq_ignore_ascii_case(s))
            .ok_or_else(|| format!("unknown case `{s}` (expected one of MRC_UFC, MRC_CFC, ZF_UFC, ZF_CFC)"))
    }
}
