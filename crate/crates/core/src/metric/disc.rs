use crate::error::{Error, Result};
use crate::expr::HoloExpr;
use crate::point::CNum;

/// A point of the Riemann sphere ℂ∞.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum ExtCNum {
    Finite(CNum),
    Infinity,
}

impl From<CNum> for ExtCNum {
    fn from(z: CNum) -> Self {
        ExtCNum::Finite(z)
    }
}

/// Chordal distance on ℂ∞; bounded by 2.
pub fn chordal_distance(a: ExtCNum, b: ExtCNum) -> f64 {
    // hypot keeps sqrt(1 + |z|²) finite for huge |z|.
    match (a, b) {
        (ExtCNum::Finite(x), ExtCNum::Finite(y)) => {
            2.0 * (x - y).norm() / (1f64.hypot(x.norm()) * 1f64.hypot(y.norm()))
        }
        (ExtCNum::Finite(z), ExtCNum::Infinity) | (ExtCNum::Infinity, ExtCNum::Finite(z)) => {
            2.0 / 1f64.hypot(z.norm())
        }
        (ExtCNum::Infinity, ExtCNum::Infinity) => 0.0,
    }
}

fn check_disc(z: CNum, what: &str) -> Result<()> {
    if z.norm() < 1.0 {
        Ok(())
    } else {
        Err(Error::OutsideDomain(format!(
            "{what} = {z} is not in the unit disc"
        )))
    }
}

/// Coefficient of dz dz̄ of the Poincaré metric, 2/(1−|z|²)².
pub fn poincare_tensor(z: CNum) -> Result<f64> {
    check_disc(z, "z")?;
    let s = 1.0 - z.norm_sqr();
    Ok(2.0 / (s * s))
}

/// Poincaré distance √2·artanh|(z₁−z₂)/(1−z̄₂z₁)|, whose infinitesimal form is
/// √(poincare_tensor).
pub fn poincare_distance(z1: CNum, z2: CNum) -> Result<f64> {
    check_disc(z1, "z1")?;
    check_disc(z2, "z2")?;
    let q = (z1 - z2) / (1.0 - z2.conj() * z1);
    Ok(std::f64::consts::SQRT_2 * q.norm().min(1.0).atanh())
}

/// The disc automorphism z ↦ e^{iθ}(a − z)/(1 − āz).
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct DiscAutomorphism {
    a: CNum,
    theta: f64,
}

pub fn disc_automorphism(a: CNum, theta: f64) -> Result<DiscAutomorphism> {
    check_disc(a, "a")?;
    Ok(DiscAutomorphism { a, theta })
}

impl DiscAutomorphism {
    pub fn a(&self) -> CNum {
        self.a
    }

    pub fn theta(&self) -> f64 {
        self.theta
    }

    fn rotation(&self) -> CNum {
        CNum::from_polar(1.0, self.theta)
    }

    pub fn apply(&self, z: CNum) -> CNum {
        self.rotation() * (self.a - z) / (1.0 - self.a.conj() * z)
    }

    /// φ′(z) = e^{iθ}(|a|² − 1)/(1 − āz)².
    pub fn derivative(&self, z: CNum) -> CNum {
        let d = 1.0 - self.a.conj() * z;
        self.rotation() * (self.a.norm_sqr() - 1.0) / (d * d)
    }

    /// The map as a one-variable expression.
    pub fn to_expr(&self) -> HoloExpr {
        let z = HoloExpr::var(0, 1);
        let c = |w: CNum| HoloExpr::constant(w, 1);
        c(self.rotation()) * (c(self.a) - z.clone())
            / (c(CNum::new(1.0, 0.0)) - c(self.a.conj()) * z)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::point::CPoint;
    use crate::sampling::rng;
    use rand::Rng;

    fn c(re: f64, im: f64) -> CNum {
        CNum::new(re, im)
    }

    #[test]
    fn chordal_examples() {
        assert_eq!(chordal_distance(c(0.0, 0.0).into(), ExtCNum::Infinity), 2.0);
        assert_eq!(
            chordal_distance(c(0.3, 2.0).into(), c(0.3, 2.0).into()),
            0.0
        );
        assert!((chordal_distance(c(1.0, 0.0).into(), c(-1.0, 0.0).into()) - 2.0).abs() < 1e-15);
        assert_eq!(chordal_distance(ExtCNum::Infinity, ExtCNum::Infinity), 0.0);
        // approaching infinity
        let far = chordal_distance(c(1e200, 0.0).into(), ExtCNum::Infinity);
        assert!(far < 1e-199);
    }

    #[test]
    fn chordal_triangle_inequality() {
        let mut r = rng(11);
        let pick = |r: &mut rand_chacha::ChaCha8Rng| -> ExtCNum {
            if r.random::<f64>() < 0.05 {
                ExtCNum::Infinity
            } else {
                let s = 10f64.powf(r.random_range(-3.0..3.0));
                c(s * r.random_range(-1.0..1.0), s * r.random_range(-1.0..1.0)).into()
            }
        };
        for _ in 0..10_000 {
            let (a, b, d) = (pick(&mut r), pick(&mut r), pick(&mut r));
            let ab = chordal_distance(a, b);
            assert!(ab <= 2.0 + 1e-15);
            assert_eq!(ab, chordal_distance(b, a));
            assert!(ab <= chordal_distance(a, d) + chordal_distance(d, b) + 1e-12);
        }
    }

    #[test]
    fn poincare_tensor_examples() {
        assert_eq!(poincare_tensor(c(0.0, 0.0)).unwrap(), 2.0);
        let v = poincare_tensor(c(std::f64::consts::FRAC_1_SQRT_2, 0.0)).unwrap();
        assert!((v - 8.0).abs() < 1e-12);
        let mut last = 0.0;
        for k in 0..50 {
            let t = poincare_tensor(c(1.0 - 2f64.powi(-k), 0.0)).unwrap();
            assert!(t > last);
            last = t;
        }
        assert!(last > 1e29);
        assert!(poincare_tensor(c(1.0, 0.0)).is_err());
    }

    #[test]
    fn poincare_distance_examples_and_invariance() {
        assert_eq!(poincare_distance(c(0.2, 0.1), c(0.2, 0.1)).unwrap(), 0.0);
        let d = poincare_distance(c(0.0, 0.0), c(0.5, 0.0)).unwrap();
        assert!((d - std::f64::consts::SQRT_2 * 0.5f64.atanh()).abs() < 1e-15);
        let mut r = rng(3);
        for _ in 0..200 {
            let b = c(r.random_range(-0.6..0.6), r.random_range(-0.6..0.6));
            let a = c(r.random_range(-0.6..0.6), r.random_range(-0.6..0.6));
            let phi = disc_automorphism(b, r.random_range(0.0..6.0)).unwrap();
            let lhs = poincare_distance(c(0.0, 0.0), a).unwrap();
            let rhs = poincare_distance(phi.apply(c(0.0, 0.0)), phi.apply(a)).unwrap();
            assert!((lhs - rhs).abs() <= 1e-12 * lhs.max(1.0));
        }
        assert!(poincare_distance(c(1.0, 0.0), c(0.0, 0.0)).is_err());
    }

    #[test]
    fn automorphism_examples() {
        let phi = disc_automorphism(c(0.0, 0.0), 0.0).unwrap();
        assert_eq!(phi.apply(c(0.3, -0.4)), c(-0.3, 0.4));
        let mut r = rng(5);
        for _ in 0..100 {
            let a = c(r.random_range(-0.7..0.7), r.random_range(-0.7..0.7));
            let phi = disc_automorphism(a, r.random_range(0.0..6.3)).unwrap();
            assert!(phi.apply(a).norm() < 1e-15);
            let z = c(r.random_range(-0.7..0.7), r.random_range(-0.7..0.7));
            // |φ′(z)|/(1−|φ(z)|²) = 1/(1−|z|²)
            let lhs = phi.derivative(z).norm() / (1.0 - phi.apply(z).norm_sqr());
            let rhs = 1.0 / (1.0 - z.norm_sqr());
            assert!((lhs - rhs).abs() <= 1e-12 * rhs);
            assert!(phi.apply(z).norm() < 1.0);
            let inv = disc_automorphism(a, 0.0).unwrap();
            assert!((inv.apply(inv.apply(z)) - z).norm() < 1e-14);
            // the expression agrees with the closed form, derivative included
            let j = phi.to_expr().eval_jet(&CPoint::new(vec![z])).unwrap();
            assert!((j.value - phi.apply(z)).norm() < 1e-14);
            assert!((j.gradient[0] - phi.derivative(z)).norm() < 1e-12);
        }
        assert!(disc_automorphism(c(0.6, 0.8), 0.0).is_err());
    }
}
