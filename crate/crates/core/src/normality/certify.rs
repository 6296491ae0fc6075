//! Certifiers on the unit disc and Marty-type sups on compact grids.

use rand::Rng;

use super::ladder::{classify, ladder_scan};
use super::levi::{mu, LeviEval};
use super::{LadderConfig, SupEstimate, Verdict};
use crate::error::{Error, Result};
use crate::expr::HoloExpr;
use crate::metric::{chordal_distance, poincare_distance, ExtCNum};
use crate::point::{CNum, CPoint};
use crate::sampling::{in_ball, rng};

fn require_arity(family: &[HoloExpr], n: usize) -> Result<()> {
    for f in family {
        if f.arity() != n {
            return Err(Error::ArityMismatch {
                expected: n,
                found: f.arity(),
            });
        }
    }
    Ok(())
}

/// (1 − |z|²)·μ(f)(z)/2, the Yosida quantity, pole-safe.
pub(crate) fn weighted_sharp(f: &HoloExpr, z: &CPoint) -> Result<f64> {
    let w = z[0];
    Ok((1.0 - w.norm_sqr()) * 0.5 * mu(f, w)?)
}

/// Ladder scan of max over the family of (1 − |z|²)·f^♯(z) on the disc.
/// The growth series holds one cumulative sup per ε.
pub fn yosida_family_scan(family: &[HoloExpr], cfg: &LadderConfig) -> Result<SupEstimate> {
    if family.is_empty() {
        return Err(Error::Empty("family"));
    }
    require_arity(family, 1)?;
    cfg.validate()?;
    let q = |z: &CPoint| -> Result<f64> {
        let mut m: f64 = 0.0;
        for f in family {
            m = m.max(weighted_sharp(f, z)?);
        }
        Ok(m)
    };
    ladder_scan(&q, &cfg.disc_grid(), cfg)
}

pub(crate) fn verdict_from(quantity: &str, estimate: SupEstimate, cfg: &LadderConfig) -> Verdict {
    let sups: Vec<f64> = estimate.growth_series.iter().map(|p| p.1).collect();
    let (classification, trend_ratio) = classify(&sups, cfg.growth_factor, cfg.stabilization);
    Verdict {
        quantity: quantity.to_string(),
        classification,
        estimate,
        threshold: cfg.growth_factor,
        trend_ratio,
    }
}

/// Yosida's class-(A) test: sup of (1 − |z|²)|f′|/(1 + |f|²) over |z| ≤ 1 − ε
/// for each ε in the ladder.
pub fn yosida_bound(f: &HoloExpr, cfg: &LadderConfig) -> Result<Verdict> {
    let est = yosida_family_scan(std::slice::from_ref(f), cfg)?;
    Ok(verdict_from("yosida (1-|z|^2) f#", est, cfg))
}

/// The Lehto–Virtanen normal-function test. Same quantity as
/// [`yosida_bound`], reported under its own label.
pub fn lehto_virtanen_check(f: &HoloExpr, cfg: &LadderConfig) -> Result<Verdict> {
    let est = yosida_family_scan(std::slice::from_ref(f), cfg)?;
    Ok(verdict_from("lehto-virtanen (1-|z|^2) f#", est, cfg))
}

fn family_grid_sup(
    family: &[HoloExpr],
    points: &[CPoint],
    q: impl Fn(&HoloExpr, &CPoint) -> Result<f64>,
) -> Result<SupEstimate> {
    if family.is_empty() {
        return Err(Error::Empty("family"));
    }
    if points.is_empty() {
        return Err(Error::Empty("grid"));
    }
    // One value per member: its sup over the grid, so the growth series runs
    // over family prefixes.
    let mut values = Vec::with_capacity(family.len());
    let mut argmax = Vec::with_capacity(family.len());
    for f in family {
        let mut best = (f64::NEG_INFINITY, 0);
        for (i, z) in points.iter().enumerate() {
            let v = q(f, z)?;
            if v > best.0 {
                best = (v, i);
            }
        }
        values.push(best.0);
        argmax.push(points[best.1].clone());
    }
    Ok(SupEstimate::from_values(
        &values,
        &argmax,
        family.len() * points.len(),
    ))
}

/// Sup of f^♯ over the family and the grid.
pub fn marty_sup(family: &[HoloExpr], points: &[CPoint]) -> Result<SupEstimate> {
    if let Some(z) = points.first() {
        require_arity(family, z.dim())?;
    }
    family_grid_sup(family, points, |f, z| Ok(LeviEval::at(f, z)?.sharp()))
}

/// Sup of μ(f) over the family and a grid in the disc.
pub fn mu_local_boundedness(family: &[HoloExpr], points: &[CNum]) -> Result<SupEstimate> {
    require_arity(family, 1)?;
    let pts: Vec<CPoint> = points.iter().map(|z| CPoint::new(vec![*z])).collect();
    family_grid_sup(family, &pts, |f, z| mu(f, z[0]))
}

fn sphere_value(f: &HoloExpr, z: CNum) -> Result<ExtCNum> {
    let pj = f.eval_projective(&CPoint::new(vec![z]))?;
    Ok(pj.value().map_or(ExtCNum::Infinity, ExtCNum::Finite))
}

/// Largest Lipschitz ratio d(f(a), f(b))/ρ(a, b) over seeded pairs in
/// |z| ≤ 0.95, with d chordal and ρ Poincaré. Half the pairs are
/// independent, half are infinitesimally close.
pub fn lipschitz_ratio(f: &HoloExpr, pair_samples: usize, seed: u64) -> Result<SupEstimate> {
    require_arity(std::slice::from_ref(f), 1)?;
    if pair_samples == 0 {
        return Err(Error::Empty("pair samples"));
    }
    const R: f64 = 0.95;
    let mut r = rng(seed);
    let mut values = Vec::with_capacity(pair_samples);
    let mut points = Vec::with_capacity(pair_samples);
    for k in 0..pair_samples {
        let a = in_ball(&mut r, 1, R)[0];
        let b = if k % 2 == 0 {
            in_ball(&mut r, 1, R)[0]
        } else {
            let d = CNum::from_polar(
                1e-5 * (R - a.norm()).max(1e-3),
                r.random_range(0.0..std::f64::consts::TAU),
            );
            let b = a + d;
            if b.norm() <= R {
                b
            } else {
                a - d
            }
        };
        if a == b {
            continue;
        }
        let rho = poincare_distance(a, b)?;
        let d = chordal_distance(sphere_value(f, a)?, sphere_value(f, b)?);
        values.push(d / rho);
        points.push(CPoint::new(vec![a, b]));
    }
    Ok(SupEstimate::from_values(&values, &points, 2 * pair_samples))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::normality::Classification;
    use crate::sampling::{disc_points, uniform_radii};

    fn e(s: &str) -> HoloExpr {
        HoloExpr::parse(s, 1).unwrap()
    }

    fn half_disc() -> Vec<CPoint> {
        disc_points(&uniform_radii(0.5, 17), 64)
            .into_iter()
            .map(|z| CPoint::new(vec![z]))
            .collect()
    }

    #[test]
    fn marty_examples() {
        let s = marty_sup(&[e("z1")], &half_disc()).unwrap();
        assert_eq!(s.sup_value, 1.0);
        assert_eq!(s.argmax_point, CPoint::zeros(1));
        let fam: Vec<HoloExpr> = (1..=7).map(|j| e(&format!("{j}*z1"))).collect();
        let s = marty_sup(&fam, &half_disc()).unwrap();
        assert_eq!(s.sup_value, 7.0);
        assert!(s.growth_series.windows(2).all(|w| w[0].1 <= w[1].1));
        assert!(matches!(marty_sup(&[], &half_disc()), Err(Error::Empty(_))));
        assert!(matches!(marty_sup(&[e("z1")], &[]), Err(Error::Empty(_))));
    }

    #[test]
    fn mu_boundedness_examples() {
        let pts = disc_points(&uniform_radii(0.5, 9), 32);
        let s = mu_local_boundedness(&[e("z1"), e("z1^2"), e("z1^3")], &pts).unwrap();
        assert!(s.sup_value.is_finite() && s.sup_value >= 2.0);
        let fam: Vec<HoloExpr> = (1..=5).map(|j| e(&format!("{j}*z1"))).collect();
        assert_eq!(mu_local_boundedness(&fam, &pts).unwrap().sup_value, 10.0);
        assert_eq!(
            mu_local_boundedness(&[e("4")], &pts).unwrap().sup_value,
            0.0
        );
        assert!(mu_local_boundedness(&[], &pts).is_err());
    }

    #[test]
    fn yosida_examples() {
        let cfg = LadderConfig::default();
        let v = yosida_bound(&e("z1"), &cfg).unwrap();
        assert_eq!(v.classification, Classification::Bounded);
        assert!((v.estimate.sup_value - 1.0).abs() < 1e-15);
        let c = yosida_bound(&e("2-i"), &cfg).unwrap();
        assert_eq!(c.classification, Classification::Bounded);
        assert_eq!(c.estimate.sup_value, 0.0);
        let s = lehto_virtanen_check(&e("sin(1/(1-z1))"), &cfg).unwrap();
        assert_eq!(s.classification, Classification::UnboundedTrend);
        assert!(s.trend_ratio >= 1.5);
        assert_ne!(s.quantity, yosida_bound(&e("z1"), &cfg).unwrap().quantity);
        let empty = LadderConfig {
            ladder: vec![],
            ..cfg
        };
        assert!(matches!(
            yosida_bound(&e("z1"), &empty),
            Err(Error::Empty(_))
        ));
    }

    #[test]
    fn yosida_handles_poles_inside_the_disc() {
        // A Möbius map is univalent onto the sphere, hence normal.
        let v = yosida_bound(&e("1/(z1 - 0.3)"), &LadderConfig::default()).unwrap();
        assert_eq!(v.classification, Classification::Bounded);
        assert!(v.estimate.sup_value.is_finite());
    }

    #[test]
    fn lipschitz_examples() {
        assert_eq!(lipschitz_ratio(&e("3"), 500, 1).unwrap().sup_value, 0.0);
        let a = lipschitz_ratio(&e("z1"), 2000, 1).unwrap().sup_value;
        let b = lipschitz_ratio(&e("z1"), 8000, 2).unwrap().sup_value;
        assert!(a.is_finite() && (a - b).abs() <= 0.05 * b);
        // μ/√2 bounds the ratio, with max μ = 2 for f = z.
        assert!(b <= 2.0 / std::f64::consts::SQRT_2 * (1.0 + 1e-6));
        let f = e("exp(2*z1) + 1/(z1-0.5)");
        let s = lipschitz_ratio(&f, 4000, 3).unwrap();
        let mu_max = mu_local_boundedness(&[f], &disc_points(&uniform_radii(0.95, 200), 256))
            .unwrap()
            .sup_value;
        assert!(s.sup_value <= mu_max / std::f64::consts::SQRT_2 * 1.02);
    }
}
