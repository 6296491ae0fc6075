//! Numeric normality certifiers.
//!
//! Normality is an asymptotic property, so every certifier reports a finite
//! sample supremum together with its growth along a ladder of boundary margins
//! ε. A [`Verdict`] classifies that growth.

mod ball;
pub(crate) mod certify;
pub(crate) mod ladder;
mod levi;
mod orbit;

pub use ball::{
    ball_normal_ratio, disc_family_probe, kobayashi_normality_check, kobayashi_ratio, sample_discs,
    VectorSamples,
};
pub use certify::{
    lehto_virtanen_check, lipschitz_ratio, marty_sup, mu_local_boundedness, yosida_bound,
    yosida_family_scan,
};
pub use ladder::{classify, LadderConfig};
pub use levi::{levi_form, mu, sharp, LeviEval};
pub use orbit::{ball_orbit, translate_orbit};

use crate::point::CPoint;

/// A sampled supremum.
#[derive(Debug, Clone, PartialEq)]
pub struct SupEstimate {
    pub sup_value: f64,
    pub argmax_point: CPoint,
    /// Number of objective evaluations behind `sup_value`.
    pub samples: usize,
    /// `(parameter, sup)` pairs: ε for ladder scans, sample or family size
    /// otherwise. The sups are running maxima and therefore nondecreasing.
    pub growth_series: Vec<(f64, f64)>,
}

impl SupEstimate {
    /// Sups of successive prefixes of `values` at sizes ⌈N/2^k⌉ (k ≤ 4), in
    /// increasing size.
    pub(crate) fn from_values(values: &[f64], points: &[CPoint], evals: usize) -> Self {
        assert!(!values.is_empty() && values.len() == points.len());
        let mut best = 0;
        for (i, v) in values.iter().enumerate() {
            if *v > values[best] {
                best = i;
            }
        }
        let n = values.len();
        let mut sizes: Vec<usize> = (0..5).map(|k| n.div_ceil(1 << k)).collect();
        sizes.reverse();
        sizes.dedup();
        let growth_series = sizes
            .into_iter()
            .map(|m| {
                (
                    m as f64,
                    values[..m]
                        .iter()
                        .cloned()
                        .fold(f64::NEG_INFINITY, f64::max),
                )
            })
            .collect();
        SupEstimate {
            sup_value: values[best],
            argmax_point: points[best].clone(),
            samples: evals,
            growth_series,
        }
    }
}

/// Outcome of a trend test on a growth series.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Classification {
    Bounded,
    UnboundedTrend,
    Inconclusive,
}

impl Classification {
    pub fn as_str(self) -> &'static str {
        match self {
            Classification::Bounded => "BOUNDED",
            Classification::UnboundedTrend => "UNBOUNDED_TREND",
            Classification::Inconclusive => "INCONCLUSIVE",
        }
    }
}

impl std::fmt::Display for Classification {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(self.as_str())
    }
}

/// A classified supremum.
#[derive(Debug, Clone, PartialEq)]
pub struct Verdict {
    /// Name of the bounded quantity, for reports.
    pub quantity: String,
    pub classification: Classification,
    pub estimate: SupEstimate,
    /// Growth factor that consecutive sups must reach for an unbounded trend.
    pub threshold: f64,
    /// Smallest ratio between consecutive entries of the growth series.
    pub trend_ratio: f64,
}
