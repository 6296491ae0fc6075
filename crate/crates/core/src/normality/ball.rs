//! Normality on the unit ball: the Bergman and Kobayashi ratios and the
//! analytic-disc probe.

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use super::certify::{verdict_from, yosida_family_scan};
use super::ladder::ladder_scan;
use super::levi::LeviEval;
use super::{LadderConfig, SupEstimate, Verdict};
use crate::error::{Error, Result};
use crate::expr::HoloExpr;
use crate::metric::{bergman_norm_sq, kobayashi_closed_form_ball, BallDomain, DiscMap};
use crate::point::CPoint;

/// Tangent vectors used at each base point.
#[derive(Debug, Clone, PartialEq)]
pub enum VectorSamples {
    /// The exact supremum over all v, available because the Levi form has
    /// rank one.
    Extremal,
    /// The maximum over the given nonzero vectors.
    Sampled(Vec<CPoint>),
}

impl VectorSamples {
    fn check(&self, n: usize) -> Result<()> {
        if let VectorSamples::Sampled(vs) = self {
            if vs.is_empty() {
                return Err(Error::Empty("vector samples"));
            }
            for v in vs {
                if v.dim() != n {
                    return Err(Error::ArityMismatch {
                        expected: n,
                        found: v.dim(),
                    });
                }
                if v.norm_sq() == 0.0 {
                    return Err(Error::InvalidArgument(
                        "zero tangent vector in samples".into(),
                    ));
                }
            }
        }
        Ok(())
    }
}

/// sup over v of L_z(log(1 + |f|²), v)/F_K(z, v)² at one point.
fn kobayashi_point(f: &HoloExpr, z: &CPoint, vs: &VectorSamples) -> Result<f64> {
    let data = LeviEval::at(f, z)?;
    match vs {
        VectorSamples::Extremal => {
            kobayashi_closed_form_ball(z, z)?; // domain check
            Ok(data.kobayashi_ratio_sup())
        }
        VectorSamples::Sampled(v) => v.iter().try_fold(0.0f64, |m, v| {
            let k = kobayashi_closed_form_ball(z, v)?;
            Ok(m.max(data.form(v) / (k * k)))
        }),
    }
}

fn bergman_point(f: &HoloExpr, z: &CPoint, vs: &VectorSamples) -> Result<f64> {
    let n = z.dim();
    match vs {
        // The Bergman metric of the unit ball is (n + 1) times F_K².
        VectorSamples::Extremal => Ok(kobayashi_point(f, z, vs)? / (n + 1) as f64),
        VectorSamples::Sampled(v) => {
            let data = LeviEval::at(f, z)?;
            let ball = BallDomain::unit(n);
            v.iter().try_fold(0.0f64, |m, v| {
                Ok(m.max(data.form(v) / bergman_norm_sq(&ball, z, v)?))
            })
        }
    }
}

fn point_sup(
    f: &HoloExpr,
    z_samples: &[CPoint],
    vs: &VectorSamples,
    q: fn(&HoloExpr, &CPoint, &VectorSamples) -> Result<f64>,
) -> Result<SupEstimate> {
    if z_samples.is_empty() {
        return Err(Error::Empty("point samples"));
    }
    for z in z_samples {
        if z.dim() != f.arity() {
            return Err(Error::ArityMismatch {
                expected: f.arity(),
                found: z.dim(),
            });
        }
    }
    vs.check(f.arity())?;
    let values: Vec<f64> = z_samples
        .iter()
        .map(|z| q(f, z, vs))
        .collect::<Result<_>>()?;
    let per_point = match vs {
        VectorSamples::Extremal => 1,
        VectorSamples::Sampled(v) => v.len(),
    };
    Ok(SupEstimate::from_values(
        &values,
        z_samples,
        values.len() * per_point,
    ))
}

/// Sup over the samples of L_z(log(1 + |f|²), v)/ds²(z, v) for the Bergman
/// metric ds² of the unit ball.
pub fn ball_normal_ratio(
    f: &HoloExpr,
    z_samples: &[CPoint],
    v_samples: &VectorSamples,
) -> Result<SupEstimate> {
    point_sup(f, z_samples, v_samples, bergman_point)
}

/// Sup over the samples of L_z(log(1 + |f|²), v)/F_K(z, v)².
pub fn kobayashi_ratio(
    f: &HoloExpr,
    z_samples: &[CPoint],
    v_samples: &VectorSamples,
) -> Result<SupEstimate> {
    point_sup(f, z_samples, v_samples, kobayashi_point)
}

/// Ladder test of L/F_K² on the balls ‖z‖ ≤ 1 − ε.
pub fn kobayashi_normality_check(
    f: &HoloExpr,
    cfg: &LadderConfig,
    v_samples: &VectorSamples,
) -> Result<Verdict> {
    cfg.validate()?;
    let n = f.arity();
    v_samples.check(n)?;
    let q = |z: &CPoint| kobayashi_point(f, z, v_samples);
    let est = ladder_scan(&q, &cfg.ball_grid(n), cfg)?;
    Ok(verdict_from("kobayashi L/F_K^2", est, cfg))
}

/// `count` seeded random discs of the given degree inside 𝔹ⁿ.
pub fn sample_discs(n: usize, count: usize, degree: usize, seed: u64) -> Vec<DiscMap> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    (0..count)
        .map(|_| DiscMap::random(n, degree, &mut rng))
        .collect()
}

/// Sup over the discs φ and the disc ladder grid of (1 − |λ|²)·g^♯(λ) with
/// g = f ∘ φ. The growth series runs over disc-count prefixes; the argmax is
/// the image point φ(λ*).
pub fn disc_family_probe(
    f: &HoloExpr,
    discs: &[DiscMap],
    cfg: &LadderConfig,
) -> Result<SupEstimate> {
    if discs.is_empty() {
        return Err(Error::Empty("disc family"));
    }
    let mut values = Vec::with_capacity(discs.len());
    let mut points = Vec::with_capacity(discs.len());
    let mut evals = 0;
    for disc in discs {
        if disc.dim() != f.arity() {
            return Err(Error::ArityMismatch {
                expected: f.arity(),
                found: disc.dim(),
            });
        }
        disc.verify()?;
        let g = f.substitute(&disc.to_exprs())?;
        let est = yosida_family_scan(std::slice::from_ref(&g), cfg)?;
        values.push(est.sup_value);
        points.push(disc.eval(est.argmax_point[0]));
        evals += est.samples;
    }
    Ok(SupEstimate::from_values(&values, &points, evals))
}
