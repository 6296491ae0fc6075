//! Restrictions to complex lines through the origin: line tests for functions
//! and families on the ball, and the Hartogs convergence test for power
//! series.

use rayon::prelude::*;

use crate::error::{Error, Result};
use crate::expr::HoloExpr;
use crate::metric::DiscMap;
use crate::normality::certify::{verdict_from, weighted_sharp, yosida_family_scan};
use crate::normality::ladder::ladder_scan;
use crate::normality::{
    lehto_virtanen_check, Classification, LadderConfig, LeviEval, SupEstimate, Verdict,
};
use crate::point::CPoint;
use crate::sampling::{ball_points, uniform_radii, DirectionSet};
use crate::series::{PowerSeries, DEFAULT_WINDOW};

/// Default lower bound on certified radii of convergence.
pub const DEFAULT_RMIN: f64 = 0.05;
/// Smallest series degree accepted by [`hartogs_test`].
pub const MIN_HARTOGS_DEGREE: u32 = 16;

const LINE_QUANTITY: &str = "line (1-|l|^2) g#";

/// The restriction λ ↦ f(λc) for a unit vector c.
pub fn restrict_function(f: &HoloExpr, c: &CPoint) -> Result<HoloExpr> {
    if c.dim() != f.arity() {
        return Err(Error::ArityMismatch {
            expected: f.arity(),
            found: c.dim(),
        });
    }
    if (c.norm() - 1.0).abs() > 1e-12 {
        return Err(Error::InvalidArgument(format!(
            "line direction must be a unit vector, got norm {}",
            c.norm()
        )));
    }
    f.substitute(&DiscMap::affine(CPoint::zeros(c.dim()), c.clone()).to_exprs())
}

/// Verdict for one line.
#[derive(Debug, Clone, PartialEq)]
pub struct LineReport {
    pub direction: CPoint,
    pub verdict: Verdict,
}

/// Aggregate of a line test together with the per-line reports.
#[derive(Debug, Clone, PartialEq)]
pub struct LineScanReport {
    pub verdict: Verdict,
    pub lines: Vec<LineReport>,
}

/// The family test: the line-wise aggregate and the same test run directly
/// on ball grids, side by side.
#[derive(Debug, Clone, PartialEq)]
pub struct FamilyLineReport {
    pub lines: LineScanReport,
    pub ball: Verdict,
}

fn combine(a: Classification, b: Classification) -> Classification {
    use Classification::*;
    match (a, b) {
        (UnboundedTrend, _) | (_, UnboundedTrend) => UnboundedTrend,
        (Bounded, Bounded) => Bounded,
        _ => Inconclusive,
    }
}

/// Any unbounded line makes the aggregate unbounded; it is bounded only when
/// every line is. The aggregate estimate is the line-wise maximum per ε.
fn aggregate(quantity: &str, lines: Vec<LineReport>, cfg: &LadderConfig) -> LineScanReport {
    let mut best = 0;
    for (i, l) in lines.iter().enumerate() {
        if l.verdict.estimate.sup_value > lines[best].verdict.estimate.sup_value {
            best = i;
        }
    }
    let series: Vec<(f64, f64)> = cfg
        .ladder
        .iter()
        .enumerate()
        .map(|(k, &eps)| {
            let s = lines
                .iter()
                .map(|l| l.verdict.estimate.growth_series[k].1)
                .fold(0.0, f64::max);
            (eps, s)
        })
        .collect();
    let classification = lines
        .iter()
        .map(|l| l.verdict.classification)
        .fold(Classification::Bounded, combine);
    let trend_ratio = lines
        .iter()
        .map(|l| l.verdict.trend_ratio)
        .fold(0.0, f64::max);
    let top = &lines[best];
    let verdict = Verdict {
        quantity: quantity.to_string(),
        classification,
        estimate: SupEstimate {
            sup_value: top.verdict.estimate.sup_value,
            argmax_point: top.direction.scale(top.verdict.estimate.argmax_point[0]),
            samples: lines.iter().map(|l| l.verdict.estimate.samples).sum(),
            growth_series: series,
        },
        threshold: cfg.growth_factor,
        trend_ratio,
    };
    LineScanReport { verdict, lines }
}

fn check_directions(n: usize, dirs: &DirectionSet) -> Result<()> {
    if dirs.is_empty() {
        return Err(Error::Empty("direction set"));
    }
    if dirs.dim() != n {
        return Err(Error::ArityMismatch {
            expected: n,
            found: dirs.dim(),
        });
    }
    Ok(())
}

/// Lehto–Virtanen test of every restriction f(λc), c ∈ D.
pub fn alexander_function_test(
    f: &HoloExpr,
    dirs: &DirectionSet,
    cfg: &LadderConfig,
) -> Result<LineScanReport> {
    check_directions(f.arity(), dirs)?;
    cfg.validate()?;
    let lines = dirs
        .directions()
        .par_iter()
        .map(|c| {
            let g = restrict_function(f, c)?;
            let mut verdict = lehto_virtanen_check(&g, cfg)?;
            verdict.quantity = LINE_QUANTITY.to_string();
            Ok(LineReport {
                direction: c.clone(),
                verdict,
            })
        })
        .collect::<Result<Vec<_>>>()?;
    Ok(aggregate(LINE_QUANTITY, lines, cfg))
}

/// Growth of the family sup over prefixes of the family, from grid maxima
/// of each member on the innermost rung.
fn prefix_verdict(
    quantity: &str,
    member_sup: impl Fn(&HoloExpr) -> Result<(f64, CPoint)> + Sync,
    family: &[HoloExpr],
    cfg: &LadderConfig,
) -> Result<Verdict> {
    let sups: Vec<(f64, CPoint)> = family.par_iter().map(&member_sup).collect::<Result<_>>()?;
    let (values, points): (Vec<f64>, Vec<CPoint>) = sups.into_iter().unzip();
    let est = SupEstimate::from_values(&values, &points, values.len());
    Ok(verdict_from(quantity, est, cfg))
}

fn grid_max(q: impl Fn(&CPoint) -> Result<f64>, grid: &[CPoint]) -> Result<(f64, CPoint)> {
    let mut best = (f64::NEG_INFINITY, 0);
    for (i, z) in grid.iter().enumerate() {
        let v = q(z)?;
        if v > best.0 {
            best = (v, i);
        }
    }
    Ok((best.0, grid[best.1].clone()))
}

/// One line of the family test: the ε-ladder of the family sup, classified
/// jointly with its growth over family prefixes. A singleton family gives
/// exactly the function test of its member.
fn family_line(family: &[HoloExpr], c: &CPoint, cfg: &LadderConfig) -> Result<LineReport> {
    let restricted: Vec<HoloExpr> = family
        .iter()
        .map(|f| restrict_function(f, c))
        .collect::<Result<_>>()?;
    let est = yosida_family_scan(&restricted, cfg)?;
    let mut verdict = verdict_from(LINE_QUANTITY, est, cfg);
    if restricted.len() > 1 {
        let grid = cfg.disc_grid();
        let prefix = prefix_verdict(
            "",
            |g| grid_max(|z| weighted_sharp(g, z), &grid),
            &restricted,
            cfg,
        )?;
        verdict.classification = combine(verdict.classification, prefix.classification);
        verdict.trend_ratio = verdict.trend_ratio.max(prefix.trend_ratio);
    }
    Ok(LineReport {
        direction: c.clone(),
        verdict,
    })
}

/// Line test for a family: on each line, the sup of (1 − |λ|²)g^♯ over the
/// restricted family. The same quantity, (1 − ‖z‖²)f^♯(z), is also tested on
/// the ball grid of the ladder.
pub fn alexander_family_test(
    family: &[HoloExpr],
    dirs: &DirectionSet,
    cfg: &LadderConfig,
) -> Result<FamilyLineReport> {
    let Some(first) = family.first() else {
        return Err(Error::Empty("family"));
    };
    let n = first.arity();
    for f in family {
        if f.arity() != n {
            return Err(Error::ArityMismatch {
                expected: n,
                found: f.arity(),
            });
        }
    }
    check_directions(n, dirs)?;
    cfg.validate()?;
    let lines = dirs
        .directions()
        .par_iter()
        .map(|c| family_line(family, c, cfg))
        .collect::<Result<Vec<_>>>()?;
    let lines = aggregate(LINE_QUANTITY, lines, cfg);

    let grid = cfg.ball_grid(n);
    let weighted = |f: &HoloExpr, z: &CPoint| -> Result<f64> {
        Ok((1.0 - z.norm_sq()) * LeviEval::at(f, z)?.sharp())
    };
    let q = |z: &CPoint| -> Result<f64> {
        family
            .iter()
            .try_fold(0.0f64, |m, f| Ok(m.max(weighted(f, z)?)))
    };
    let est = ladder_scan(&q, &grid, cfg)?;
    let mut ball = verdict_from("ball (1-|z|^2) f#", est, cfg);
    if family.len() > 1 {
        let prefix = prefix_verdict("", |f| grid_max(|z| weighted(f, z), &grid), family, cfg)?;
        ball.classification = combine(ball.classification, prefix.classification);
        ball.trend_ratio = ball.trend_ratio.max(prefix.trend_ratio);
    }
    Ok(FamilyLineReport { lines, ball })
}

/// Outcome of the Hartogs test.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Convergence {
    Convergent,
    Divergent,
    Inconclusive,
}

impl Convergence {
    pub fn as_str(self) -> &'static str {
        match self {
            Convergence::Convergent => "CONVERGENT",
            Convergence::Divergent => "DIVERGENT",
            Convergence::Inconclusive => "INCONCLUSIVE",
        }
    }
}

impl std::fmt::Display for Convergence {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(self.as_str())
    }
}

/// Root-test radii of one restricted series, from all coefficients and from
/// the first half.
#[derive(Debug, Clone, PartialEq)]
pub struct HartogsLine {
    pub direction: CPoint,
    pub radius: f64,
    pub radius_half: f64,
}

#[derive(Debug, Clone, PartialEq)]
pub struct HartogsReport {
    pub convergence: Convergence,
    pub r_min: f64,
    /// Smallest full-degree radius over the directions, and where.
    pub min_radius: f64,
    pub min_direction: CPoint,
    pub min_radius_half: f64,
    pub lines: Vec<HartogsLine>,
    /// Radius of the ball on which the partial sums were sampled.
    pub marty_radius: f64,
    /// Sup of f_m^♯ over the partial sums f_m, growth indexed by the number
    /// of partial sums.
    pub partial_sum_marty: SupEstimate,
}

/// Hartogs test: every restriction of F to a line through 0 is a one-variable
/// series whose radius is estimated by the root test at full degree and at
/// half degree.
///
/// CONVERGENT when both minimum radii reach `r_min`; DIVERGENT when some
/// line's radius is below `r_min` and shrinks as the degree doubles;
/// INCONCLUSIVE otherwise.
pub fn hartogs_test(f: &PowerSeries, dirs: &DirectionSet, r_min: f64) -> Result<HartogsReport> {
    if f.max_degree() < MIN_HARTOGS_DEGREE {
        return Err(Error::InvalidArgument(format!(
            "series degree {} is below the minimum {MIN_HARTOGS_DEGREE}",
            f.max_degree()
        )));
    }
    if r_min.is_nan() || r_min <= 0.0 {
        return Err(Error::InvalidArgument(format!(
            "R_min must be positive, got {r_min}"
        )));
    }
    check_directions(f.arity(), dirs)?;
    let half = f.max_degree() as usize / 2;
    let lines = dirs
        .directions()
        .par_iter()
        .map(|c| {
            let u = f.restrict_to_line(c)?;
            Ok(HartogsLine {
                direction: c.clone(),
                radius: u.radius_estimate(DEFAULT_WINDOW)?,
                radius_half: u.truncated(half).radius_estimate(DEFAULT_WINDOW)?,
            })
        })
        .collect::<Result<Vec<_>>>()?;

    let mut arg = 0;
    for (i, l) in lines.iter().enumerate() {
        if l.radius < lines[arg].radius {
            arg = i;
        }
    }
    let min_radius = lines[arg].radius;
    let min_radius_half = lines
        .iter()
        .map(|l| l.radius_half)
        .fold(f64::INFINITY, f64::min);
    let convergence = if min_radius >= r_min && min_radius_half >= r_min {
        Convergence::Convergent
    } else if lines
        .iter()
        .any(|l| l.radius < r_min && l.radius < l.radius_half)
    {
        Convergence::Divergent
    } else {
        Convergence::Inconclusive
    };

    let marty_radius = if min_radius.is_finite() {
        (min_radius / 2.0).min(1.0)
    } else {
        1.0
    };
    let partial_sum_marty = partial_sum_marty(f, dirs, marty_radius)?;
    Ok(HartogsReport {
        convergence,
        r_min,
        min_radius,
        min_direction: lines[arg].direction.clone(),
        min_radius_half,
        lines,
        marty_radius,
        partial_sum_marty,
    })
}

/// Sup of f_m^♯ over all partial sums on a polar grid of the ball of the
/// given radius.
fn partial_sum_marty(f: &PowerSeries, dirs: &DirectionSet, radius: f64) -> Result<SupEstimate> {
    let grid = ball_points(&uniform_radii(radius, 8), 4, dirs);
    let per_point: Vec<Vec<f64>> = grid
        .par_iter()
        .map(|z| {
            let jets = f.partial_sum_jets(z)?;
            Ok(jets
                .iter()
                .map(|j| j.gradient_norm_sq().sqrt() / (1.0 + j.value.norm_sqr()))
                .collect())
        })
        .collect::<Result<_>>()?;
    let m = f.max_degree() as usize + 1;
    let mut values = vec![f64::NEG_INFINITY; m];
    let mut points = vec![grid[0].clone(); m];
    for (z, row) in grid.iter().zip(&per_point) {
        for (k, &v) in row.iter().enumerate() {
            if v > values[k] {
                values[k] = v;
                points[k] = z.clone();
            }
        }
    }
    Ok(SupEstimate::from_values(&values, &points, grid.len() * m))
}
