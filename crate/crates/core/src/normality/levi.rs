//! Spherical derivative, μ and the Levi form of log(1 + |f|²).
//!
//! For holomorphic f the Levi form of log(1 + |f|²) is the rank-one Hermitian
//! form |Σ ∂f/∂z_k · v_k|² / (1 + |f|²)², so only first derivatives are needed.

use smallvec::SmallVec;

use crate::error::{Error, EvalError, Result};
use crate::expr::HoloExpr;
use crate::point::{CNum, CPoint};

/// Levi-form data of log(1 + |f|²) at a point.
#[derive(Debug, Clone, PartialEq)]
pub struct LeviEval {
    pub point: CPoint,
    /// |f(z)|.
    pub value: f64,
    pub gradient: SmallVec<[CNum; 4]>,
    /// 1/(1 + |f|²)².
    pub rank_one_scale: f64,
}

impl LeviEval {
    pub fn at(f: &HoloExpr, z: &CPoint) -> Result<Self> {
        let j = f.eval_jet(z)?;
        let w = 1.0 + j.value.norm_sqr();
        Ok(LeviEval {
            point: z.clone(),
            value: j.value.norm(),
            gradient: j.gradient,
            rank_one_scale: 1.0 / (w * w),
        })
    }

    /// L_z(log(1 + |f|²), v).
    pub fn form(&self, v: &CPoint) -> f64 {
        let d: CNum = self
            .gradient
            .iter()
            .zip(v.coords())
            .map(|(g, x)| g * x)
            .sum();
        d.norm_sqr() * self.rank_one_scale
    }

    /// sup over unit v of √L, attained at v = conj(∇f)/‖∇f‖.
    pub fn sharp(&self) -> f64 {
        let g: f64 = self.gradient.iter().map(|g| g.norm_sqr()).sum();
        g.sqrt() * self.rank_one_scale.sqrt()
    }

    /// The maximising unit direction conj(∇f)/‖∇f‖, if ∇f ≠ 0.
    pub fn extremal_direction(&self) -> Option<CPoint> {
        CPoint::new(self.gradient.iter().map(|g| g.conj()).collect()).normalized()
    }

    /// sup over v of L(z, v)/F_K(z, v)² for the unit ball's Kobayashi metric:
    /// (1 − ‖z‖²)(‖a‖² − |Σ z_k a_k|²) with a = ∇f/(1 + |f|²).
    pub fn kobayashi_ratio_sup(&self) -> f64 {
        let s = 1.0 - self.point.norm_sq();
        let scale = self.rank_one_scale.sqrt();
        let a2: f64 = self.gradient.iter().map(|g| g.norm_sqr()).sum::<f64>() * scale * scale;
        let za: CNum = self
            .gradient
            .iter()
            .zip(self.point.coords())
            .map(|(g, z)| g * z)
            .sum();
        let za2 = za.norm_sqr() * scale * scale;
        (s * (a2 - za2)).max(0.0)
    }
}

fn check_arity(f: &HoloExpr, n: usize) -> Result<()> {
    if f.arity() != n {
        return Err(Error::ArityMismatch {
            expected: n,
            found: f.arity(),
        });
    }
    Ok(())
}

/// μ(f)(z) = 2|f′(z)|/(1 + |f(z)|²), continued across poles through the
/// identity μ(f) = μ(1/f).
pub fn mu(f: &HoloExpr, z: CNum) -> Result<f64> {
    check_arity(f, 1)?;
    let p = CPoint::new(vec![z]);
    match f.eval_jet(&p) {
        Ok(j) if j.value.norm() < 1e100 => {
            Ok(2.0 * j.gradient[0].norm() / (1.0 + j.value.norm_sqr()))
        }
        Ok(_) | Err(Error::Eval(EvalError::Pole)) | Err(Error::Eval(EvalError::NonFinite)) => {
            // f = p/q: μ = 2|p′q − pq′|/(|p|² + |q|²), symmetric in p and q.
            let pj = f.eval_projective(&p)?;
            let (num, den) = (&pj.num, &pj.den);
            let w = num.gradient[0] * den.value - num.value * den.gradient[0];
            Ok(2.0 * w.norm() / (num.value.norm_sqr() + den.value.norm_sqr()))
        }
        Err(e) => Err(e),
    }
}

/// L_z(log(1 + |f|²), v) in closed form.
pub fn levi_form(f: &HoloExpr, z: &CPoint, v: &CPoint) -> Result<f64> {
    if v.dim() != z.dim() {
        return Err(Error::ArityMismatch {
            expected: z.dim(),
            found: v.dim(),
        });
    }
    Ok(LeviEval::at(f, z)?.form(v))
}

/// f^♯(z) = ‖∇f(z)‖/(1 + |f(z)|²).
pub fn sharp(f: &HoloExpr, z: &CPoint) -> Result<f64> {
    Ok(LeviEval::at(f, z)?.sharp())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::sampling::{in_ball, rng, unit_sphere};
    use rand::Rng;

    fn e(s: &str, n: usize) -> HoloExpr {
        HoloExpr::parse(s, n).unwrap()
    }

    #[test]
    fn mu_examples() {
        assert_eq!(mu(&e("z1", 1), CNum::new(0.0, 0.0)).unwrap(), 2.0);
        for z in [CNum::new(0.0, 0.0), CNum::new(0.5, -0.3)] {
            assert_eq!(mu(&e("5", 1), z).unwrap(), 0.0);
        }
        let recip = e("1/z1", 1);
        assert_eq!(mu(&recip, CNum::new(0.0, 0.0)).unwrap(), 2.0);
        for k in 1..12 {
            let z = CNum::new(10f64.powi(-k), 0.0);
            assert!((mu(&recip, z).unwrap() - 2.0).abs() < 1e-6 + 10f64.powi(-2 * k) * 4.0);
        }
        assert!(matches!(
            mu(&e("z1+z2", 2), CNum::new(0.0, 0.0)),
            Err(Error::ArityMismatch { .. })
        ));
    }

    #[test]
    fn mu_is_twice_sharp() {
        let f = e("(1+z1)/(2-z1) + exp(z1)", 1);
        let mut r = rng(1);
        for _ in 0..100 {
            let z = in_ball(&mut r, 1, 0.99);
            let m = mu(&f, z[0]).unwrap();
            let s = sharp(&f, &z).unwrap();
            assert!((m - 2.0 * s).abs() <= 1e-12 * m.max(1.0));
        }
    }

    #[test]
    fn levi_examples() {
        let z = CPoint::new(vec![CNum::new(0.2, 0.1), CNum::new(-0.3, 0.0)]);
        let v = CPoint::new(vec![CNum::new(1.0, 1.0), CNum::new(0.5, 0.0)]);
        assert_eq!(levi_form(&e("3+i", 2), &z, &v).unwrap(), 0.0);
        let one = CPoint::from_real(&[1.0]);
        assert_eq!(
            levi_form(&e("z1", 1), &CPoint::zeros(1), &one).unwrap(),
            1.0
        );
        assert_eq!(sharp(&e("z1", 1), &CPoint::zeros(1)).unwrap(), 1.0);
        assert_eq!(sharp(&e("exp(z1)", 2), &CPoint::zeros(2)).unwrap(), 0.5);
        assert!(levi_form(&e("1/z1", 1), &CPoint::zeros(1), &one).is_err());
    }

    #[test]
    fn sharp_dominates_sampled_directions_and_is_attained() {
        let f = e("z1*z2 + exp(z2) - z1^3", 2);
        let mut r = rng(2);
        let z = CPoint::new(vec![CNum::new(0.3, -0.2), CNum::new(0.1, 0.5)]);
        let data = LeviEval::at(&f, &z).unwrap();
        let s = data.sharp();
        let mut best: f64 = 0.0;
        for _ in 0..10_000 {
            let v = unit_sphere(&mut r, 2);
            let l = data.form(&v).sqrt();
            assert!(l <= s + 1e-10);
            best = best.max(l);
        }
        assert!(best > 0.9 * s);
        let v = data.extremal_direction().unwrap();
        assert!((data.form(&v).sqrt() - s).abs() < 1e-14);
    }

    #[test]
    fn scale_law() {
        let f = e("sin(z1) * (1 + z2)", 2);
        let mut r = rng(3);
        for _ in 0..100 {
            let z = in_ball(&mut r, 2, 0.9);
            let v = unit_sphere(&mut r, 2);
            let t = CNum::new(r.random_range(-3.0..3.0), r.random_range(-3.0..3.0));
            let a = levi_form(&f, &z, &v.scale(t)).unwrap();
            let b = t.norm_sqr() * levi_form(&f, &z, &v).unwrap();
            assert!((a - b).abs() <= 1e-12 * b.max(1e-300));
        }
    }

    #[test]
    fn kobayashi_ratio_sup_dominates_samples() {
        let f = e("z1*z2 + z2^2 - exp(z1)", 2);
        let mut r = rng(4);
        for _ in 0..50 {
            let z = in_ball(&mut r, 2, 0.95);
            let data = LeviEval::at(&f, &z).unwrap();
            let sup = data.kobayashi_ratio_sup();
            let mut best: f64 = 0.0;
            for _ in 0..2000 {
                let v = unit_sphere(&mut r, 2);
                let k = crate::metric::kobayashi_closed_form_ball(&z, &v).unwrap();
                let ratio = data.form(&v) / (k * k);
                assert!(ratio <= sup * (1.0 + 1e-12) + 1e-300);
                best = best.max(ratio);
            }
            assert!(best >= 0.95 * sup);
        }
    }
}
