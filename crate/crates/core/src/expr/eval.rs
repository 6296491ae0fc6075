use smallvec::{smallvec, SmallVec};

use super::{HoloExpr, Node};
use crate::error::{Error, EvalError, Result};
use crate::point::{CNum, CPoint};

/// Divisors below this magnitude raise [`EvalError::Pole`].
pub const POLE_THRESHOLD: f64 = 1e-300;

type Grad = SmallVec<[CNum; 4]>;

const ZERO: CNum = CNum::new(0.0, 0.0);
const ONE: CNum = CNum::new(1.0, 0.0);

/// Value and complex gradient `(∂f/∂z₁, …, ∂f/∂z_n)` at a point.
#[derive(Debug, Clone, PartialEq)]
pub struct Jet {
    pub value: CNum,
    pub gradient: SmallVec<[CNum; 4]>,
}

impl Jet {
    fn constant(c: CNum, n: usize) -> Self {
        Jet {
            value: c,
            gradient: smallvec![ZERO; n],
        }
    }

    fn variable(z: CNum, k: usize, n: usize) -> Self {
        let mut gradient: Grad = smallvec![ZERO; n];
        gradient[k] = ONE;
        Jet { value: z, gradient }
    }

    /// ⟨∇f, v⟩ without conjugation: the derivative of `t ↦ f(z + t·v)` at 0.
    pub fn directional(&self, v: &CPoint) -> CNum {
        self.gradient
            .iter()
            .zip(v.coords())
            .map(|(g, c)| g * c)
            .sum()
    }

    pub fn gradient_norm_sq(&self) -> f64 {
        self.gradient.iter().map(|g| g.norm_sqr()).sum()
    }

    fn map(&self, value: CNum, factor: CNum) -> Jet {
        Jet {
            value,
            gradient: self.gradient.iter().map(|g| g * factor).collect(),
        }
    }

    fn combine(&self, other: &Jet, value: CNum, a: CNum, b: CNum) -> Jet {
        Jet {
            value,
            gradient: self
                .gradient
                .iter()
                .zip(&other.gradient)
                .map(|(x, y)| x * a + y * b)
                .collect(),
        }
    }

    fn scaled(&self, s: f64) -> Jet {
        Jet {
            value: self.value * s,
            gradient: self.gradient.iter().map(|g| g * s).collect(),
        }
    }

    fn is_finite(&self) -> bool {
        self.value.is_finite() && self.gradient.iter().all(|g| g.is_finite())
    }
}

/// A meromorphic value carried as a ratio `num/den` of holomorphic jets.
///
/// Neither component is ever divided, so poles (`den = 0`) are ordinary
/// points. Both components are rescaled by powers of two to stay in range;
/// the ratio and the Wronskian-type quantities built from it are unaffected
/// up to a common positive factor.
#[derive(Debug, Clone, PartialEq)]
pub struct ProjectiveJet {
    pub num: Jet,
    pub den: Jet,
}

impl ProjectiveJet {
    fn from_jet(j: Jet) -> Self {
        let n = j.gradient.len();
        ProjectiveJet {
            num: j,
            den: Jet::constant(ONE, n),
        }
    }

    fn normalize(mut self) -> Self {
        let m = self.num.value.norm().max(self.den.value.norm());
        if m > 0.0 && m.is_finite() && !(1e-64..=1e64).contains(&m) {
            let s = 2f64.powi(-(m.log2().round() as i32));
            self.num = self.num.scaled(s);
            self.den = self.den.scaled(s);
        }
        self
    }

    /// The value `num/den`, or `None` at a pole.
    pub fn value(&self) -> Option<CNum> {
        (self.den.value.norm() >= POLE_THRESHOLD).then(|| cdiv(self.num.value, self.den.value))
    }

    /// The ordinary jet `num/den`; fails at a pole.
    fn to_jet(&self) -> Result<Jet, EvalError> {
        div_jets(&self.num, &self.den)
    }
}

/// Complex division with Smith's scaling, so divisors near the pole threshold
/// do not underflow in `|b|²`.
pub(crate) fn cdiv(a: CNum, b: CNum) -> CNum {
    if b.re.abs() >= b.im.abs() {
        let r = b.im / b.re;
        let d = b.re + b.im * r;
        CNum::new((a.re + a.im * r) / d, (a.im - a.re * r) / d)
    } else {
        let r = b.re / b.im;
        let d = b.re * r + b.im;
        CNum::new((a.re * r + a.im) / d, (a.im * r - a.re) / d)
    }
}

fn mul_jets(a: &Jet, b: &Jet) -> Jet {
    a.combine(b, a.value * b.value, b.value, a.value)
}

fn div_jets(a: &Jet, b: &Jet) -> Result<Jet, EvalError> {
    if b.value.norm() < POLE_THRESHOLD {
        return Err(EvalError::Pole);
    }
    let q = cdiv(a.value, b.value);
    let inv = cdiv(ONE, b.value);
    Ok(a.combine(b, q, inv, -q * inv))
}

fn pow_jet(a: &Jet, k: u32) -> Jet {
    if k == 0 {
        return Jet::constant(ONE, a.gradient.len());
    }
    let lower = a.value.powu(k - 1);
    a.map(lower * a.value, lower * k as f64)
}

impl HoloExpr {
    fn check_point(&self, z: &CPoint) -> Result<()> {
        if z.dim() != self.arity {
            return Err(Error::ArityMismatch {
                expected: self.arity,
                found: z.dim(),
            });
        }
        Ok(())
    }

    /// Value and exact first derivatives at `z`.
    pub fn eval_jet(&self, z: &CPoint) -> Result<Jet> {
        self.check_point(z)?;
        let j = jet(self.node(), z.coords())?;
        if !j.is_finite() {
            return Err(EvalError::NonFinite.into());
        }
        Ok(j)
    }

    /// Value only.
    pub fn eval(&self, z: &CPoint) -> Result<CNum> {
        self.check_point(z)?;
        let v = value(self.node(), z.coords())?;
        if !v.is_finite() {
            return Err(EvalError::NonFinite.into());
        }
        Ok(v)
    }

    /// Evaluate as a ratio of jets; poles are regular points of the result.
    pub fn eval_projective(&self, z: &CPoint) -> Result<ProjectiveJet> {
        self.check_point(z)?;
        let p = projective(self.node(), z.coords())?;
        if !(p.num.is_finite() && p.den.is_finite()) {
            return Err(EvalError::NonFinite.into());
        }
        if p.num.value == ZERO && p.den.value == ZERO {
            return Err(EvalError::Indeterminate.into());
        }
        Ok(p)
    }
}

fn value(node: &Node, z: &[CNum]) -> Result<CNum, EvalError> {
    Ok(match node {
        Node::Var(k) => z[*k],
        Node::Const(c) => *c,
        Node::Neg(a) => -value(a, z)?,
        Node::Add(a, b) => value(a, z)? + value(b, z)?,
        Node::Sub(a, b) => value(a, z)? - value(b, z)?,
        Node::Mul(a, b) => value(a, z)? * value(b, z)?,
        Node::Div(a, b) => {
            let den = value(b, z)?;
            if den.norm() < POLE_THRESHOLD {
                return Err(EvalError::Pole);
            }
            cdiv(value(a, z)?, den)
        }
        Node::Pow(a, k) => value(a, z)?.powu(*k),
        Node::Exp(a) => value(a, z)?.exp(),
        Node::Sin(a) => value(a, z)?.sin(),
        Node::Cos(a) => value(a, z)?.cos(),
    })
}

fn jet(node: &Node, z: &[CNum]) -> Result<Jet, EvalError> {
    let n = z.len();
    Ok(match node {
        Node::Var(k) => Jet::variable(z[*k], *k, n),
        Node::Const(c) => Jet::constant(*c, n),
        Node::Neg(a) => {
            let a = jet(a, z)?;
            a.map(-a.value, -ONE)
        }
        Node::Add(a, b) => {
            let (a, b) = (jet(a, z)?, jet(b, z)?);
            a.combine(&b, a.value + b.value, ONE, ONE)
        }
        Node::Sub(a, b) => {
            let (a, b) = (jet(a, z)?, jet(b, z)?);
            a.combine(&b, a.value - b.value, ONE, -ONE)
        }
        Node::Mul(a, b) => mul_jets(&jet(a, z)?, &jet(b, z)?),
        Node::Div(a, b) => {
            let b = jet(b, z)?;
            if b.value.norm() < POLE_THRESHOLD {
                return Err(EvalError::Pole);
            }
            div_jets(&jet(a, z)?, &b)?
        }
        Node::Pow(a, k) => pow_jet(&jet(a, z)?, *k),
        Node::Exp(a) => {
            let a = jet(a, z)?;
            let e = a.value.exp();
            a.map(e, e)
        }
        Node::Sin(a) => {
            let a = jet(a, z)?;
            a.map(a.value.sin(), a.value.cos())
        }
        Node::Cos(a) => {
            let a = jet(a, z)?;
            a.map(a.value.cos(), -a.value.sin())
        }
    })
}

fn projective(node: &Node, z: &[CNum]) -> Result<ProjectiveJet, EvalError> {
    let n = z.len();
    let p = match node {
        Node::Var(k) => ProjectiveJet::from_jet(Jet::variable(z[*k], *k, n)),
        Node::Const(c) => ProjectiveJet::from_jet(Jet::constant(*c, n)),
        Node::Neg(a) => {
            let a = projective(a, z)?;
            ProjectiveJet {
                num: a.num.map(-a.num.value, -ONE),
                den: a.den,
            }
        }
        Node::Add(a, b) | Node::Sub(a, b) => {
            let (a, b) = (projective(a, z)?, projective(b, z)?);
            let sign = if matches!(node, Node::Add(..)) {
                ONE
            } else {
                -ONE
            };
            let left = mul_jets(&a.num, &b.den);
            let right = mul_jets(&b.num, &a.den);
            ProjectiveJet {
                num: left.combine(&right, left.value + sign * right.value, ONE, sign),
                den: mul_jets(&a.den, &b.den),
            }
        }
        Node::Mul(a, b) => {
            let (a, b) = (projective(a, z)?, projective(b, z)?);
            ProjectiveJet {
                num: mul_jets(&a.num, &b.num),
                den: mul_jets(&a.den, &b.den),
            }
        }
        Node::Div(a, b) => {
            let (a, b) = (projective(a, z)?, projective(b, z)?);
            ProjectiveJet {
                num: mul_jets(&a.num, &b.den),
                den: mul_jets(&a.den, &b.num),
            }
        }
        Node::Pow(a, k) => {
            let a = projective(a, z)?;
            ProjectiveJet {
                num: pow_jet(&a.num, *k),
                den: pow_jet(&a.den, *k),
            }
        }
        // Entire functions of a pole are essential singularities: no clean
        // projective value exists there.
        Node::Exp(a) => {
            let a = projective(a, z)?.to_jet()?;
            let e = a.value.exp();
            ProjectiveJet::from_jet(a.map(e, e))
        }
        Node::Sin(a) => {
            let a = projective(a, z)?.to_jet()?;
            ProjectiveJet::from_jet(a.map(a.value.sin(), a.value.cos()))
        }
        Node::Cos(a) => {
            let a = projective(a, z)?.to_jet()?;
            ProjectiveJet::from_jet(a.map(a.value.cos(), -a.value.sin()))
        }
    };
    Ok(p.normalize())
}
