//! Upper bounds for the Kobayashi metric of the unit ball from explicit
//! analytic discs.
//!
//! F_K(z, v) is the infimum of α over holomorphic discs φ: 𝔻 → 𝔹ⁿ with
//! φ(0) = z and φ′(0) = v/α, so every disc that provably stays inside the
//! ball gives an upper bound. Two families are searched:
//!
//! * polynomial discs `z + t·λ·v̂ + λ²·q` around z;
//! * transported discs `φ_z(t·λ·u + λ²·q)`, where φ_z is the ball involution
//!   exchanging z and 0 and u is the unit vector with dφ_z(0)·u ∥ v.
//!
//! For each perturbation q the largest admissible t is found by bisection;
//! perturbations are drawn by a seeded (1+1) evolution strategy, so a larger
//! budget only ever adds candidates.

use rand::Rng;
use rand_distr::StandardNormal;

use super::ball::{ball_automorphism, BallAutomorphism};
use crate::error::{Error, Result};
use crate::expr::HoloExpr;
use crate::point::{CNum, CPoint};
use crate::sampling::{in_ball, rng, unit_sphere};

/// Boundary circle |λ| = 1 − 1e-6 on which containment is checked.
pub const CONTAINMENT_RADIUS: f64 = 1.0 - 1e-6;
/// Images must satisfy ‖φ(λ)‖ ≤ 1 − margin.
pub const CONTAINMENT_MARGIN: f64 = 1e-9;
pub const CONTAINMENT_SAMPLES: usize = 256;

/// A vector-valued polynomial φ(λ) = Σ a_j λ^j.
#[derive(Debug, Clone, PartialEq)]
pub struct DiscMap {
    coefficients: Vec<CPoint>,
}

fn boundary_samples() -> impl Iterator<Item = CNum> {
    (0..CONTAINMENT_SAMPLES).map(|k| {
        CNum::from_polar(
            CONTAINMENT_RADIUS,
            std::f64::consts::TAU * k as f64 / CONTAINMENT_SAMPLES as f64,
        )
    })
}

impl DiscMap {
    pub fn new(coefficients: Vec<CPoint>) -> Result<Self> {
        let first = coefficients
            .first()
            .ok_or(Error::Empty("disc coefficients"))?;
        let n = first.dim();
        if let Some(bad) = coefficients.iter().find(|c| c.dim() != n) {
            return Err(Error::ArityMismatch {
                expected: n,
                found: bad.dim(),
            });
        }
        Ok(DiscMap { coefficients })
    }

    /// The affine disc λ ↦ center + λ·w.
    pub fn affine(center: CPoint, w: CPoint) -> Self {
        DiscMap {
            coefficients: vec![center, w],
        }
    }

    pub fn coefficients(&self) -> &[CPoint] {
        &self.coefficients
    }

    pub fn degree(&self) -> usize {
        self.coefficients.len() - 1
    }

    pub fn dim(&self) -> usize {
        self.coefficients[0].dim()
    }

    pub fn center(&self) -> &CPoint {
        &self.coefficients[0]
    }

    /// φ′(0).
    pub fn velocity(&self) -> CPoint {
        self.coefficients
            .get(1)
            .cloned()
            .unwrap_or_else(|| CPoint::zeros(self.dim()))
    }

    pub fn eval(&self, lambda: CNum) -> CPoint {
        let n = self.dim();
        let mut acc = vec![CNum::new(0.0, 0.0); n];
        for a in self.coefficients.iter().rev() {
            for k in 0..n {
                acc[k] = acc[k] * lambda + a[k];
            }
        }
        CPoint::new(acc)
    }

    /// Whether ‖φ(λ)‖ ≤ 1 − margin on the containment circle.
    pub fn is_contained(&self) -> bool {
        boundary_samples().all(|l| self.eval(l).norm() <= 1.0 - CONTAINMENT_MARGIN)
    }

    pub fn verify(&self) -> Result<()> {
        if self.is_contained() {
            Ok(())
        } else {
            Err(Error::Containment(format!(
                "degree-{} disc centred at {} exceeds radius {}",
                self.degree(),
                self.center(),
                1.0 - CONTAINMENT_MARGIN
            )))
        }
    }

    /// Coordinate functions λ ↦ φ_k(λ) as one-variable expressions; zero
    /// coefficients are omitted.
    pub fn to_exprs(&self) -> Vec<HoloExpr> {
        let zero = CNum::new(0.0, 0.0);
        (0..self.dim())
            .map(|k| {
                let mut acc: Option<HoloExpr> = None;
                for (j, a) in self.coefficients.iter().enumerate() {
                    let c = a[k];
                    if c == zero {
                        continue;
                    }
                    let term = match j {
                        0 => HoloExpr::constant(c, 1),
                        1 => HoloExpr::constant(c, 1) * HoloExpr::var(0, 1),
                        _ => HoloExpr::constant(c, 1) * HoloExpr::var(0, 1).powu(j as u32),
                    };
                    acc = Some(match acc {
                        None => term,
                        Some(s) => s + term,
                    });
                }
                acc.unwrap_or_else(|| HoloExpr::real(0.0, 1))
            })
            .collect()
    }

    /// A seeded random disc of the given degree that passes the containment
    /// check: centre uniform in the ball of radius 0.9, higher coefficients
    /// Gaussian, scaled to a random fraction of the largest admissible size.
    pub fn random(n: usize, degree: usize, rng: &mut impl Rng) -> DiscMap {
        assert!(degree >= 1);
        loop {
            let center = in_ball(rng, n, 0.9);
            let shape: Vec<CPoint> = (0..degree)
                .map(|_| {
                    CPoint::new(
                        (0..n)
                            .map(|_| {
                                CNum::new(rng.sample(StandardNormal), rng.sample(StandardNormal))
                            })
                            .collect(),
                    )
                })
                .collect();
            let build = |t: f64| {
                let mut coefficients = vec![center.clone()];
                coefficients.extend(shape.iter().map(|s| s.scale_real(t)));
                DiscMap { coefficients }
            };
            let Some(t_max) = max_feasible(|t| build(t).is_contained(), 0.0, 4.0) else {
                continue;
            };
            let frac: f64 = rng.random_range(0.5..1.0);
            let disc = build(t_max * frac);
            if disc.velocity().norm() > 0.0 && disc.is_contained() {
                return disc;
            }
        }
    }
}

/// A disc used by the Kobayashi search.
#[derive(Debug, Clone, PartialEq)]
pub enum AnalyticDisc {
    Polynomial(DiscMap),
    /// λ ↦ φ_a(p(λ)) with p(0) = 0 and p(𝔻) inside the ball.
    Transported {
        automorphism: BallAutomorphism,
        inner: DiscMap,
    },
}

impl AnalyticDisc {
    pub fn eval(&self, lambda: CNum) -> CPoint {
        match self {
            AnalyticDisc::Polynomial(d) => d.eval(lambda),
            AnalyticDisc::Transported {
                automorphism,
                inner,
            } => automorphism.apply(&inner.eval(lambda)),
        }
    }

    pub fn is_contained(&self) -> bool {
        match self {
            AnalyticDisc::Polynomial(d) => d.is_contained(),
            AnalyticDisc::Transported {
                automorphism,
                inner,
            } => boundary_samples().all(|l| {
                let p = inner.eval(l);
                p.norm() < 1.0 && automorphism.apply(&p).norm() <= 1.0 - CONTAINMENT_MARGIN
            }),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum DiscFamily {
    Polynomial,
    Transported,
}

#[derive(Debug, Clone, PartialEq)]
pub struct KobayashiBound {
    /// The smallest α found; an upper bound for F_K(z, v).
    pub value: f64,
    pub family: DiscFamily,
    pub disc: AnalyticDisc,
    /// Number of perturbations tried per family.
    pub candidates: usize,
}

/// Configuration of the disc search.
#[derive(Debug, Clone, PartialEq)]
pub struct KobayashiSearch {
    pub budget: usize,
    pub seed: u64,
    pub polynomial: bool,
    pub transported: bool,
}

impl KobayashiSearch {
    pub fn new(budget: usize, seed: u64) -> Self {
        KobayashiSearch {
            budget,
            seed,
            polynomial: true,
            transported: true,
        }
    }

    /// Restrict the search to polynomial discs around z.
    pub fn polynomial_only(mut self) -> Self {
        self.transported = false;
        self
    }

    pub fn run(&self, z: &CPoint, v: &CPoint) -> Result<KobayashiBound> {
        let n = z.dim();
        if v.dim() != n {
            return Err(Error::ArityMismatch {
                expected: n,
                found: v.dim(),
            });
        }
        if z.norm_sq() >= 1.0 {
            return Err(Error::OutsideDomain(format!(
                "‖z‖ = {} is not below 1",
                z.norm()
            )));
        }
        let v_hat = v
            .normalized()
            .ok_or_else(|| Error::InvalidArgument("tangent vector must be nonzero".into()))?;
        if self.budget < 1 {
            return Err(Error::InvalidArgument("budget must be at least 1".into()));
        }
        if !self.polynomial && !self.transported {
            return Err(Error::InvalidArgument("no disc family enabled".into()));
        }

        let mut best: Option<KobayashiBound> = None;
        let mut consider = |b: KobayashiBound| {
            if best.as_ref().is_none_or(|cur| b.value < cur.value) {
                best = Some(b);
            }
        };

        if self.polynomial {
            let sigma = 0.5 * (1.0 - z.norm());
            let make = |t: f64, q: &CPoint| DiscMap {
                coefficients: vec![z.clone(), v_hat.scale_real(t), q.clone()],
            };
            if let Some((t, q)) = evolve(n, self.budget, self.seed, sigma, |t, q| {
                make(t, q).is_contained()
            }) {
                consider(KobayashiBound {
                    value: v.norm() / (CONTAINMENT_RADIUS * t),
                    family: DiscFamily::Polynomial,
                    disc: AnalyticDisc::Polynomial(make(t, &q)),
                    candidates: self.budget,
                });
            }
        }

        if self.transported {
            let automorphism = ball_automorphism(z)?;
            // dφ_z(0)⁻¹ = dφ_z(z) because φ_z is an involution.
            let w = automorphism.push_forward(z, v)?;
            let u = w.normalized().ok_or_else(|| {
                Error::InvalidArgument("tangent vector vanishes under the automorphism".into())
            })?;
            let make = |t: f64, q: &CPoint| AnalyticDisc::Transported {
                automorphism: automorphism.clone(),
                inner: DiscMap {
                    coefficients: vec![CPoint::zeros(n), u.scale_real(t), q.clone()],
                },
            };
            if let Some((t, q)) = evolve(
                n,
                self.budget,
                self.seed ^ 0x9e37_79b9_7f4a_7c15,
                0.25,
                |t, q| make(t, q).is_contained(),
            ) {
                consider(KobayashiBound {
                    value: w.norm() / (CONTAINMENT_RADIUS * t),
                    family: DiscFamily::Transported,
                    disc: make(t, &q),
                    candidates: self.budget,
                });
            }
        }

        best.ok_or_else(|| Error::Containment("no admissible disc found".into()))
    }
}

/// Upper bound for the Kobayashi metric of 𝔹ⁿ at (z, v) from a seeded disc
/// search with `budget` perturbations per family.
pub fn kobayashi_upper(z: &CPoint, v: &CPoint, budget: usize, seed: u64) -> Result<f64> {
    Ok(KobayashiSearch::new(budget, seed).run(z, v)?.value)
}

/// Largest t in [lo, hi] with `feasible(t)`, assuming the feasible set is an
/// interval containing `lo`. `None` when `lo` itself is infeasible.
fn max_feasible(feasible: impl Fn(f64) -> bool, lo: f64, hi: f64) -> Option<f64> {
    if !feasible(lo) {
        return None;
    }
    if feasible(hi) {
        return Some(hi);
    }
    let (mut lo, mut hi) = (lo, hi);
    for _ in 0..48 {
        let mid = 0.5 * (lo + hi);
        if feasible(mid) {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    Some(lo)
}

/// (1+1) evolution strategy over the quadratic coefficient q, maximising the
/// admissible first-order scale t. Candidate k depends only on candidates
/// before it, so the best t is nondecreasing in the budget.
fn evolve(
    n: usize,
    budget: usize,
    seed: u64,
    sigma0: f64,
    feasible: impl Fn(f64, &CPoint) -> bool,
) -> Option<(f64, CPoint)> {
    const T_MAX: f64 = 2.0;
    let mut best_q = CPoint::zeros(n);
    let mut best_t = max_feasible(|t| feasible(t, &best_q), 0.0, T_MAX)?;
    let mut sigma = sigma0;
    let mut r = rng(seed);
    for _ in 1..budget {
        let dir = unit_sphere(&mut r, n);
        let len: f64 = r.sample::<f64, _>(StandardNormal).abs();
        let q = best_q.add(&dir.scale_real(sigma * len));
        // A candidate can only win if it admits the current best scale.
        if feasible(best_t, &q) {
            if let Some(t) = max_feasible(|t| feasible(t, &q), best_t, T_MAX) {
                if t > best_t {
                    best_t = t;
                    best_q = q;
                    sigma *= 1.5;
                    continue;
                }
            }
        }
        sigma *= 0.9;
        sigma = sigma.max(1e-6);
    }
    Some((best_t, best_q))
}
