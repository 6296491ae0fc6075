//! Seeded direction sets, polar grids on the disc and the ball, and a
//! derivative-free local maximiser used to sharpen grid sups.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::StandardNormal;

use crate::error::{Error, Result};
use crate::point::{CNum, CPoint};

pub const DEFAULT_DIRECTIONS: usize = 128;

pub fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

/// Uniform sample on the unit sphere of ℂⁿ.
pub fn unit_sphere(rng: &mut impl Rng, n: usize) -> CPoint {
    loop {
        let p = CPoint::new(
            (0..n)
                .map(|_| CNum::new(rng.sample(StandardNormal), rng.sample(StandardNormal)))
                .collect(),
        );
        if let Some(u) = p.normalized() {
            return u;
        }
    }
}

/// Uniform sample in the ball of ℂⁿ with the given radius.
pub fn in_ball(rng: &mut impl Rng, n: usize, radius: f64) -> CPoint {
    let u: f64 = rng.random();
    unit_sphere(rng, n).scale_real(radius * u.powf(1.0 / (2 * n) as f64))
}

/// Unit directions in ℂⁿ: the n coordinate axes followed by `count` seeded
/// uniform samples from the unit sphere.
#[derive(Debug, Clone, PartialEq)]
pub struct DirectionSet {
    directions: Vec<CPoint>,
    seed: u64,
    count: usize,
}

impl DirectionSet {
    pub fn sampled(n: usize, count: usize, seed: u64) -> Self {
        let mut directions: Vec<CPoint> = (0..n).map(|k| CPoint::basis(n, k)).collect();
        let mut r = rng(seed);
        directions.extend((0..count).map(|_| unit_sphere(&mut r, n)));
        DirectionSet {
            directions,
            seed,
            count,
        }
    }

    /// An explicit set; every direction must be a unit vector of one dimension.
    pub fn from_directions(directions: Vec<CPoint>) -> Result<Self> {
        let first = directions.first().ok_or(Error::Empty("direction set"))?;
        let n = first.dim();
        for c in &directions {
            if c.dim() != n {
                return Err(Error::ArityMismatch {
                    expected: n,
                    found: c.dim(),
                });
            }
            if (c.norm() - 1.0).abs() > 1e-12 {
                return Err(Error::InvalidArgument(format!(
                    "direction {c} is not a unit vector"
                )));
            }
        }
        let count = directions.len();
        Ok(DirectionSet {
            directions,
            seed: 0,
            count,
        })
    }

    pub fn directions(&self) -> &[CPoint] {
        &self.directions
    }

    pub fn seed(&self) -> u64 {
        self.seed
    }

    /// Number of sampled (non-axis) directions requested.
    pub fn count(&self) -> usize {
        self.count
    }

    pub fn dim(&self) -> usize {
        self.directions[0].dim()
    }

    pub fn len(&self) -> usize {
        self.directions.len()
    }

    pub fn is_empty(&self) -> bool {
        self.directions.is_empty()
    }

    pub fn with_extra(mut self, extra: impl IntoIterator<Item = CPoint>) -> Self {
        self.directions.extend(extra);
        self
    }
}

/// `count` radii from 0 to `max_radius`, equally spaced in hyperbolic
/// distance, with both endpoints exact.
pub fn hyperbolic_radii(max_radius: f64, count: usize) -> Vec<f64> {
    assert!(count >= 2 && max_radius > 0.0 && max_radius < 1.0);
    let t = max_radius.atanh();
    let mut r: Vec<f64> = (0..count)
        .map(|j| (t * j as f64 / (count - 1) as f64).tanh())
        .collect();
    r[count - 1] = max_radius;
    r
}

/// `count` radii equally spaced on `[0, max_radius]`.
pub fn uniform_radii(max_radius: f64, count: usize) -> Vec<f64> {
    assert!(count >= 2 && max_radius > 0.0);
    (0..count)
        .map(|j| max_radius * j as f64 / (count - 1) as f64)
        .collect()
}

/// Polar grid points `r·e^{iθ}` in the disc; the origin appears once.
pub fn disc_points(radii: &[f64], angles: usize) -> Vec<CNum> {
    let mut pts = Vec::with_capacity(radii.len() * angles);
    for &r in radii {
        if r == 0.0 {
            pts.push(CNum::new(0.0, 0.0));
            continue;
        }
        for k in 0..angles {
            pts.push(CNum::from_polar(
                r,
                std::f64::consts::TAU * k as f64 / angles as f64,
            ));
        }
    }
    pts
}

/// Points `r·e^{iθ}·c` for every radius, phase and direction; the origin
/// appears once.
pub fn ball_points(radii: &[f64], phases: usize, directions: &DirectionSet) -> Vec<CPoint> {
    let n = directions.dim();
    let mut pts = Vec::new();
    for &r in radii {
        if r == 0.0 {
            pts.push(CPoint::zeros(n));
            continue;
        }
        for c in directions.directions() {
            for k in 0..phases {
                let w = CNum::from_polar(r, std::f64::consts::TAU * k as f64 / phases as f64);
                pts.push(c.scale(w));
            }
        }
    }
    pts
}

/// Compass search maximising `objective` over the closed Euclidean ball of
/// the given radius in ℝᵈ. Points where the objective fails count as −∞.
/// Returns the best point and value found, never worse than the start.
pub fn refine_max(
    objective: impl Fn(&[f64]) -> Option<f64>,
    start: &[f64],
    radius: f64,
    initial_step: f64,
    max_evals: usize,
) -> (Vec<f64>, f64) {
    let project = |x: &mut Vec<f64>| {
        let norm = x.iter().map(|v| v * v).sum::<f64>().sqrt();
        if norm > radius {
            x.iter_mut().for_each(|v| *v *= radius / norm);
        }
    };
    let mut best = start.to_vec();
    project(&mut best);
    let mut best_val = objective(&best).unwrap_or(f64::NEG_INFINITY);
    let mut step = initial_step;
    let mut evals = 1;
    while step > 1e-13 && evals < max_evals {
        let mut improved = false;
        'axes: for axis in 0..best.len() {
            for sign in [1.0, -1.0] {
                let mut x = best.clone();
                x[axis] += sign * step;
                project(&mut x);
                evals += 1;
                if let Some(v) = objective(&x) {
                    if v > best_val {
                        best = x;
                        best_val = v;
                        improved = true;
                        break 'axes;
                    }
                }
                if evals >= max_evals {
                    break 'axes;
                }
            }
        }
        if improved {
            step *= 1.5;
        } else {
            step *= 0.5;
        }
    }
    (best, best_val)
}
