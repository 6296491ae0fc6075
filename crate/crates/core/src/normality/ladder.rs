//! Ladder scans: sups over nested discs or balls of radius 1 − ε.

use rayon::prelude::*;

use super::{Classification, SupEstimate};
use crate::error::{Error, Result};
use crate::point::CPoint;
use crate::sampling::{
    ball_points, disc_points, hyperbolic_radii, refine_max, DirectionSet, DEFAULT_DIRECTIONS,
};

/// Grid and trend parameters shared by the ladder-based certifiers.
#[derive(Debug, Clone, PartialEq)]
pub struct LadderConfig {
    /// Boundary margins, strictly decreasing in (0, 1).
    pub ladder: Vec<f64>,
    /// Radii per grid, spaced evenly in hyperbolic distance.
    pub radii: usize,
    /// Angles per radius on the disc.
    pub angles: usize,
    /// Unit phases per direction on the ball.
    pub phases: usize,
    /// Sampled sphere directions on the ball (coordinate axes are added).
    pub directions: usize,
    pub growth_factor: f64,
    /// Relative spread allowed over the last three rungs for BOUNDED.
    pub stabilization: f64,
    /// Grid maxima polished by local search on each rung.
    pub refine_starts: usize,
    pub refine_evals: usize,
    pub seed: u64,
}

impl Default for LadderConfig {
    fn default() -> Self {
        LadderConfig {
            ladder: vec![0.2, 0.1, 0.05, 0.02, 0.01],
            radii: 64,
            angles: 128,
            phases: 8,
            directions: DEFAULT_DIRECTIONS,
            growth_factor: 1.5,
            stabilization: 0.1,
            refine_starts: 4,
            refine_evals: 400,
            seed: 0,
        }
    }
}

impl LadderConfig {
    pub fn validate(&self) -> Result<()> {
        if self.ladder.is_empty() {
            return Err(Error::Empty("epsilon ladder"));
        }
        if self.ladder.iter().any(|e| !(*e > 0.0 && *e < 1.0)) {
            return Err(Error::InvalidArgument(
                "ladder margins must lie in (0, 1)".into(),
            ));
        }
        if self.ladder.windows(2).any(|w| w[1] >= w[0]) {
            return Err(Error::InvalidArgument(
                "ladder must be strictly decreasing".into(),
            ));
        }
        if self.radii < 2 || self.angles == 0 || self.phases == 0 {
            return Err(Error::InvalidArgument(
                "grid needs ≥ 2 radii and ≥ 1 angle".into(),
            ));
        }
        if self.growth_factor.is_nan()
            || self.growth_factor <= 1.0
            || self.stabilization.is_nan()
            || self.stabilization < 0.0
        {
            return Err(Error::InvalidArgument(
                "growth factor must exceed 1 and stabilization be ≥ 0".into(),
            ));
        }
        Ok(())
    }

    /// Grid radii up to the innermost margin, with every rung radius included.
    fn radii_nodes(&self) -> Vec<f64> {
        let r_max = 1.0 - self.ladder[self.ladder.len() - 1];
        let mut r = hyperbolic_radii(r_max, self.radii);
        r.extend(self.ladder.iter().map(|e| 1.0 - e));
        r.sort_by(f64::total_cmp);
        r.dedup_by(|a, b| (*a - *b).abs() <= 1e-15);
        r
    }

    pub(crate) fn disc_grid(&self) -> Vec<CPoint> {
        disc_points(&self.radii_nodes(), self.angles)
            .into_iter()
            .map(|z| CPoint::new(vec![z]))
            .collect()
    }

    pub(crate) fn ball_grid(&self, n: usize) -> Vec<CPoint> {
        let dirs = DirectionSet::sampled(n, self.directions, self.seed);
        ball_points(&self.radii_nodes(), self.phases, &dirs)
    }
}

/// Classifies a series of rung sups: UNBOUNDED_TREND when every consecutive
/// ratio reaches `growth`, BOUNDED when the last three sups agree within
/// `stabilization` relative to the last. Returns the classification and the
/// smallest consecutive ratio.
pub fn classify(sups: &[f64], growth: f64, stabilization: f64) -> (Classification, f64) {
    let ratio = |a: f64, b: f64| {
        if a > 0.0 {
            b / a
        } else if b > 0.0 {
            f64::INFINITY
        } else {
            1.0
        }
    };
    let trend = sups
        .windows(2)
        .map(|w| ratio(w[0], w[1]))
        .fold(f64::INFINITY, f64::min);
    let trend = if trend.is_infinite() && sups.len() < 2 {
        1.0
    } else {
        trend
    };
    let tail = &sups[sups.len().saturating_sub(3)..];
    let hi = tail.iter().cloned().fold(0.0, f64::max);
    let lo = tail.iter().cloned().fold(f64::INFINITY, f64::min);
    let class = if sups.len() >= 2 && trend >= growth * (1.0 - 1e-9) {
        Classification::UnboundedTrend
    } else if hi == 0.0 || (hi - lo) <= stabilization * hi {
        Classification::Bounded
    } else {
        Classification::Inconclusive
    };
    (class, trend)
}

/// Sup of `q` over each rung ‖z‖ ≤ 1 − ε of the grid, polished by compass
/// search from the best grid points. Any grid failure aborts the scan. The
/// returned growth series holds cumulative maxima per ε.
pub(crate) fn ladder_scan<Q>(q: &Q, grid: &[CPoint], cfg: &LadderConfig) -> Result<SupEstimate>
where
    Q: Fn(&CPoint) -> Result<f64> + Sync,
{
    let values: Vec<f64> = grid.par_iter().map(q).collect::<Result<_>>()?;
    let norms: Vec<f64> = grid.iter().map(CPoint::norm).collect();
    let objective = |x: &[f64]| {
        q(&CPoint::from_interleaved(x))
            .ok()
            .filter(|v| v.is_finite())
    };

    let mut best_val = f64::NEG_INFINITY;
    let mut best_pt = grid[0].clone();
    let mut evals = grid.len();
    let mut series = Vec::with_capacity(cfg.ladder.len());
    for &eps in &cfg.ladder {
        let r = 1.0 - eps;
        let mut inside: Vec<usize> = (0..grid.len())
            .filter(|&i| norms[i] <= r * (1.0 + 1e-15))
            .collect();
        // Stable sort: equal values keep grid order.
        inside.sort_by(|&a, &b| values[b].total_cmp(&values[a]));
        if let Some(&i) = inside.first() {
            if values[i] > best_val {
                best_val = values[i];
                best_pt = grid[i].clone();
            }
        }
        let starts: Vec<usize> = inside.into_iter().take(cfg.refine_starts).collect();
        let polished: Vec<(Vec<f64>, f64)> = starts
            .par_iter()
            .map(|&i| {
                let step = 0.05 * (1.0 - norms[i] * norms[i]) + 1e-12;
                refine_max(objective, &grid[i].to_real(), r, step, cfg.refine_evals)
            })
            .collect();
        evals += starts.len() * cfg.refine_evals;
        for (x, v) in polished {
            if v > best_val {
                best_val = v;
                best_pt = CPoint::from_interleaved(&x);
            }
        }
        series.push((eps, best_val));
    }
    Ok(SupEstimate {
        sup_value: best_val,
        argmax_point: best_pt,
        samples: evals,
        growth_series: series,
    })
}
