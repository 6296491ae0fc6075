use crate::error::{Error, Result};
use crate::expr::HoloExpr;
use crate::point::{CNum, CPoint};

/// The ball 𝔹_r = {z ∈ ℂⁿ : ‖z‖ < r}.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct BallDomain {
    pub n: usize,
    pub radius: f64,
}

impl BallDomain {
    pub fn new(n: usize, radius: f64) -> Result<Self> {
        if n == 0 || !(radius > 0.0 && radius.is_finite()) {
            return Err(Error::InvalidArgument(format!(
                "ball needs n ≥ 1 and a finite positive radius, got n = {n}, r = {radius}"
            )));
        }
        Ok(BallDomain { n, radius })
    }

    pub fn unit(n: usize) -> Self {
        BallDomain { n, radius: 1.0 }
    }

    /// r² − ‖z‖², checked positive.
    fn gap(&self, z: &CPoint) -> Result<f64> {
        if z.dim() != self.n {
            return Err(Error::ArityMismatch {
                expected: self.n,
                found: z.dim(),
            });
        }
        let s = self.radius * self.radius - z.norm_sq();
        if s > 0.0 {
            Ok(s)
        } else {
            Err(Error::OutsideDomain(format!(
                "‖z‖ = {} is not below the radius {}",
                z.norm(),
                self.radius
            )))
        }
    }
}

/// Bergman kernel on the diagonal, n!·r²/(πⁿ(r² − ‖z‖²)^{n+1}); for r = 1 this
/// is n!/πⁿ · (1 − ‖z‖²)^{−(n+1)}.
pub fn bergman_kernel_ball(ball: &BallDomain, z: &CPoint) -> Result<f64> {
    let s = ball.gap(z)?;
    let n = ball.n as i32;
    let factorial: f64 = (1..=ball.n).map(|k| k as f64).product();
    Ok(factorial * ball.radius.powi(2) / (std::f64::consts::PI.powi(n) * s.powi(n + 1)))
}

/// A Hermitian metric tensor g_{μν} sampled at a point.
#[derive(Debug, Clone, PartialEq)]
pub struct MetricSample {
    pub point: CPoint,
    /// Row-major n×n entries g_{μν}.
    pub tensor: Vec<CNum>,
}

impl MetricSample {
    pub fn dim(&self) -> usize {
        self.point.dim()
    }

    pub fn entry(&self, mu: usize, nu: usize) -> CNum {
        self.tensor[mu * self.dim() + nu]
    }

    /// Σ g_{μν} v_μ v̄_ν.
    pub fn norm_sq(&self, v: &CPoint) -> f64 {
        let n = self.dim();
        let mut acc = CNum::new(0.0, 0.0);
        for mu in 0..n {
            for nu in 0..n {
                acc += self.entry(mu, nu) * v[mu] * v[nu].conj();
            }
        }
        acc.re
    }

    pub fn is_hermitian(&self, tol: f64) -> bool {
        let n = self.dim();
        (0..n).all(|mu| {
            (0..n).all(|nu| (self.entry(mu, nu) - self.entry(nu, mu).conj()).norm() <= tol)
        })
    }
}

/// g_{μν} = (n+1)[δ_{μν}/(r² − ‖z‖²) + z̄_μ z_ν/(r² − ‖z‖²)²].
pub fn bergman_tensor_ball(ball: &BallDomain, z: &CPoint) -> Result<MetricSample> {
    let s = ball.gap(z)?;
    let n = ball.n;
    let k = (n + 1) as f64;
    let mut tensor = Vec::with_capacity(n * n);
    for mu in 0..n {
        for nu in 0..n {
            let delta = if mu == nu { 1.0 / s } else { 0.0 };
            tensor.push(k * (delta + z[mu].conj() * z[nu] / (s * s)));
        }
    }
    Ok(MetricSample {
        point: z.clone(),
        tensor,
    })
}

/// Bergman length² of v at z: (n+1)[‖v‖²/(r² − ‖z‖²) + |⟨v,z⟩|²/(r² − ‖z‖²)²].
pub fn bergman_norm_sq(ball: &BallDomain, z: &CPoint, v: &CPoint) -> Result<f64> {
    let s = ball.gap(z)?;
    if v.dim() != ball.n {
        return Err(Error::ArityMismatch {
            expected: ball.n,
            found: v.dim(),
        });
    }
    Ok((ball.n + 1) as f64 * (v.norm_sq() / s + v.inner(z).norm_sqr() / (s * s)))
}

/// Kobayashi metric of the unit ball, normalised by F_K(0, v) = ‖v‖.
pub fn kobayashi_closed_form_ball(z: &CPoint, v: &CPoint) -> Result<f64> {
    let ball = BallDomain::unit(z.dim());
    let s = ball.gap(z)?;
    if v.dim() != z.dim() {
        return Err(Error::ArityMismatch {
            expected: z.dim(),
            found: v.dim(),
        });
    }
    Ok((v.norm_sq() / s + v.inner(z).norm_sqr() / (s * s)).sqrt())
}

/// The involutive automorphism of 𝔹ⁿ exchanging a and 0:
/// φ_a(z) = (a − P_a z − s_a Q_a z)/(1 − ⟨z, a⟩).
#[derive(Debug, Clone, PartialEq)]
pub struct BallAutomorphism {
    a: CPoint,
    s: f64,
}

pub fn ball_automorphism(a: &CPoint) -> Result<BallAutomorphism> {
    let r2 = a.norm_sq();
    if r2 >= 1.0 {
        return Err(Error::OutsideDomain(format!(
            "‖a‖ = {} is not below 1",
            a.norm()
        )));
    }
    Ok(BallAutomorphism {
        a: a.clone(),
        s: (1.0 - r2).sqrt(),
    })
}

impl BallAutomorphism {
    pub fn center(&self) -> &CPoint {
        &self.a
    }

    pub fn dim(&self) -> usize {
        self.a.dim()
    }

    pub fn apply(&self, z: &CPoint) -> CPoint {
        let a = &self.a;
        let za = z.inner(a);
        let r2 = a.norm_sq();
        let proj = if r2 > 0.0 {
            a.scale(za / r2)
        } else {
            CPoint::zeros(a.dim())
        };
        let q = z.sub(&proj);
        let num = a.sub(&proj).sub(&q.scale_real(self.s));
        num.scale(1.0 / (1.0 - za))
    }

    /// Coordinate functions as expressions in n variables.
    pub fn exprs(&self) -> Vec<HoloExpr> {
        let n = self.dim();
        let a = &self.a;
        let r2 = a.norm_sq();
        let one = CNum::new(1.0, 0.0);
        let mut den = HoloExpr::constant(one, n);
        for j in 0..n {
            if a[j] != CNum::new(0.0, 0.0) {
                den = den - HoloExpr::constant(a[j].conj(), n) * HoloExpr::var(j, n);
            }
        }
        (0..n)
            .map(|k| {
                // numerator_k = a_k − s z_k + Σ_j (s − 1) a_k ā_j / ‖a‖² · z_j
                let mut num =
                    HoloExpr::constant(a[k], n) - HoloExpr::real(self.s, n) * HoloExpr::var(k, n);
                if r2 > 0.0 {
                    for j in 0..n {
                        let c = a[k] * a[j].conj() * ((self.s - 1.0) / r2);
                        if c != CNum::new(0.0, 0.0) {
                            num = num + HoloExpr::constant(c, n) * HoloExpr::var(j, n);
                        }
                    }
                }
                num / den.clone()
            })
            .collect()
    }

    /// Complex Jacobian ∂φ_k/∂z_j at z, from the expression jets.
    pub fn jacobian(&self, z: &CPoint) -> Result<Vec<Vec<CNum>>> {
        self.exprs()
            .iter()
            .map(|e| Ok(e.eval_jet(z)?.gradient.to_vec()))
            .collect()
    }

    /// dφ(z)·v.
    pub fn push_forward(&self, z: &CPoint, v: &CPoint) -> Result<CPoint> {
        let jac = self.jacobian(z)?;
        Ok(CPoint::new(
            jac.iter()
                .map(|row| row.iter().zip(v.coords()).map(|(j, x)| j * x).sum())
                .collect(),
        ))
    }

    /// The fixed point a(1 − s_a)/‖a‖² on the segment [0, a] (0 when a = 0).
    pub fn fixed_point(&self) -> CPoint {
        let r2 = self.a.norm_sq();
        if r2 == 0.0 {
            CPoint::zeros(self.dim())
        } else {
            self.a.scale_real((1.0 - self.s) / r2)
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::metric::disc::{disc_automorphism, poincare_tensor};
    use crate::sampling::{in_ball, rng, unit_sphere};
    use rand::Rng;

    #[test]
    fn kernel_values_at_origin() {
        let k1 = bergman_kernel_ball(&BallDomain::unit(1), &CPoint::zeros(1)).unwrap();
        assert!((k1 - 1.0 / std::f64::consts::PI).abs() < 1e-16);
        let k2 = bergman_kernel_ball(&BallDomain::unit(2), &CPoint::zeros(2)).unwrap();
        assert!((k2 - 2.0 / std::f64::consts::PI.powi(2)).abs() < 1e-16);
        let mut r = rng(1);
        for _ in 0..50 {
            let z = in_ball(&mut r, 1, 0.99);
            let k = bergman_kernel_ball(&BallDomain::unit(1), &z).unwrap();
            let s = 1.0 - z.norm_sq();
            assert!((k * s * s - 1.0 / std::f64::consts::PI).abs() < 1e-13);
        }
        assert!(
            bergman_kernel_ball(&BallDomain::unit(2), &CPoint::from_real(&[0.8, 0.6])).is_err()
        );
    }

    #[test]
    fn tensor_examples() {
        let g = bergman_tensor_ball(&BallDomain::unit(1), &CPoint::zeros(1)).unwrap();
        assert_eq!(
            g.norm_sq(&CPoint::from_real(&[1.0])),
            poincare_tensor(CNum::new(0.0, 0.0)).unwrap()
        );
        let g = bergman_tensor_ball(&BallDomain::unit(2), &CPoint::zeros(2)).unwrap();
        assert_eq!(
            g.tensor,
            vec![
                CNum::new(3.0, 0.0),
                CNum::new(0.0, 0.0),
                CNum::new(0.0, 0.0),
                CNum::new(3.0, 0.0)
            ]
        );
        let mut r = rng(2);
        for n in 1..=3 {
            let ball = BallDomain::new(n, 1.5).unwrap();
            for _ in 0..50 {
                let z = in_ball(&mut r, n, 1.49);
                let v = unit_sphere(&mut r, n).scale_real(r.random_range(0.1..3.0));
                let g = bergman_tensor_ball(&ball, &z).unwrap();
                assert!(g.is_hermitian(1e-12));
                let direct = bergman_norm_sq(&ball, &z, &v).unwrap();
                assert!(direct > 0.0);
                assert!((g.norm_sq(&v) - direct).abs() <= 1e-12 * direct);
            }
        }
    }

    #[test]
    fn kobayashi_closed_form_examples() {
        let v = CPoint::new(vec![CNum::new(0.3, -0.4), CNum::new(1.2, 0.0)]);
        assert!(
            (kobayashi_closed_form_ball(&CPoint::zeros(2), &v).unwrap() - v.norm()).abs() < 1e-15
        );
        for x in [-0.9, -0.2, 0.0, 0.5, 0.99] {
            let f =
                kobayashi_closed_form_ball(&CPoint::from_real(&[x]), &CPoint::from_real(&[1.0]))
                    .unwrap();
            assert!((f - 1.0 / (1.0 - x * x)).abs() <= 1e-12 * f);
        }
        let mut r = rng(9);
        for n in 1..=3 {
            for _ in 0..50 {
                let z = in_ball(&mut r, n, 0.999);
                let v = unit_sphere(&mut r, n);
                let ratio = kobayashi_closed_form_ball(&z, &v).unwrap()
                    / bergman_norm_sq(&BallDomain::unit(n), &z, &v)
                        .unwrap()
                        .sqrt();
                assert!((ratio - 1.0 / ((n + 1) as f64).sqrt()).abs() < 1e-12);
            }
        }
    }

    #[test]
    fn automorphism_basics() {
        let phi = ball_automorphism(&CPoint::zeros(2)).unwrap();
        let z = CPoint::new(vec![CNum::new(0.1, 0.2), CNum::new(-0.3, 0.4)]);
        assert_eq!(phi.apply(&z), z.scale_real(-1.0));
        assert!(ball_automorphism(&CPoint::from_real(&[0.6, 0.8])).is_err());

        let mut r = rng(4);
        for _ in 0..100 {
            let n = r.random_range(1..=3);
            let a = in_ball(&mut r, n, 0.95);
            let z = in_ball(&mut r, n, 0.999);
            let phi = ball_automorphism(&a).unwrap();
            assert!(phi.apply(&a).norm() < 1e-14);
            assert!(phi.apply(&CPoint::zeros(n)).sub(&a).norm() < 1e-15);
            assert!(phi.apply(&phi.apply(&z)).sub(&z).norm() < 1e-10);
            assert!(phi.apply(&z).norm() < 1.0);
            let exprs = phi.exprs();
            let image = phi.apply(&z);
            for (k, e) in exprs.iter().enumerate() {
                assert!((e.eval(&z).unwrap() - image[k]).norm() < 1e-13);
            }
            let fixed = phi.fixed_point();
            assert!(phi.apply(&fixed).sub(&fixed).norm() < 1e-13);
        }
    }

    #[test]
    fn one_dimensional_automorphism_is_the_disc_map() {
        let mut r = rng(6);
        for _ in 0..50 {
            let a = in_ball(&mut r, 1, 0.9);
            let z = in_ball(&mut r, 1, 0.99);
            let ball = ball_automorphism(&a).unwrap().apply(&z);
            let disc = disc_automorphism(a[0], 0.0).unwrap().apply(z[0]);
            assert!((ball[0] - disc).norm() < 1e-14);
        }
    }

    #[test]
    fn bergman_norm_is_automorphism_invariant() {
        let mut r = rng(8);
        for _ in 0..100 {
            let n = r.random_range(1..=3);
            let ball = BallDomain::unit(n);
            let a = in_ball(&mut r, n, 0.9);
            let z = in_ball(&mut r, n, 0.9);
            let v = unit_sphere(&mut r, n);
            let phi = ball_automorphism(&a).unwrap();
            let w = phi.push_forward(&z, &v).unwrap();
            let lhs = bergman_norm_sq(&ball, &z, &v).unwrap();
            let rhs = bergman_norm_sq(&ball, &phi.apply(&z), &w).unwrap();
            assert!((lhs - rhs).abs() <= 1e-8 * lhs);
            let kl = kobayashi_closed_form_ball(&z, &v).unwrap();
            let kr = kobayashi_closed_form_ball(&phi.apply(&z), &w).unwrap();
            assert!((kl - kr).abs() <= 1e-8 * kl);
        }
    }
}
