use std::fmt;
use std::ops::Index;

use num_complex::Complex64;

/// A complex scalar.
pub type CNum = Complex64;

/// A point (or tangent vector) of ℂⁿ.
#[derive(Debug, Clone, PartialEq)]
pub struct CPoint(Vec<CNum>);

impl CPoint {
    pub fn new(coords: Vec<CNum>) -> Self {
        assert!(!coords.is_empty(), "CPoint needs at least one coordinate");
        CPoint(coords)
    }

    pub fn from_real(coords: &[f64]) -> Self {
        CPoint::new(coords.iter().map(|&x| CNum::new(x, 0.0)).collect())
    }

    pub fn zeros(n: usize) -> Self {
        CPoint::new(vec![CNum::new(0.0, 0.0); n])
    }

    /// The k-th standard basis vector (0-based).
    pub fn basis(n: usize, k: usize) -> Self {
        let mut p = CPoint::zeros(n);
        p.0[k] = CNum::new(1.0, 0.0);
        p
    }

    pub fn dim(&self) -> usize {
        self.0.len()
    }

    pub fn coords(&self) -> &[CNum] {
        &self.0
    }

    pub fn into_coords(self) -> Vec<CNum> {
        self.0
    }

    pub fn norm_sq(&self) -> f64 {
        self.0.iter().map(|c| c.norm_sqr()).sum()
    }

    pub fn norm(&self) -> f64 {
        self.norm_sq().sqrt()
    }

    /// Hermitian product ⟨self, other⟩ = Σ selfₖ·conj(otherₖ).
    pub fn inner(&self, other: &CPoint) -> CNum {
        self.0.iter().zip(&other.0).map(|(a, b)| a * b.conj()).sum()
    }

    /// Bilinear contraction Σ selfₖ·otherₖ (no conjugation).
    pub fn dot(&self, other: &CPoint) -> CNum {
        self.0.iter().zip(&other.0).map(|(a, b)| a * b).sum()
    }

    pub fn scale(&self, s: CNum) -> CPoint {
        CPoint(self.0.iter().map(|c| c * s).collect())
    }

    pub fn scale_real(&self, s: f64) -> CPoint {
        CPoint(self.0.iter().map(|c| c * s).collect())
    }

    pub fn add(&self, other: &CPoint) -> CPoint {
        CPoint(self.0.iter().zip(&other.0).map(|(a, b)| a + b).collect())
    }

    pub fn sub(&self, other: &CPoint) -> CPoint {
        CPoint(self.0.iter().zip(&other.0).map(|(a, b)| a - b).collect())
    }

    pub fn conj(&self) -> CPoint {
        CPoint(self.0.iter().map(|c| c.conj()).collect())
    }

    /// Unit vector in the direction of `self`, or `None` for the zero vector.
    pub fn normalized(&self) -> Option<CPoint> {
        let n = self.norm();
        (n > 0.0).then(|| self.scale_real(1.0 / n))
    }

    /// Interleaved real coordinates (re₁, im₁, re₂, im₂, …).
    pub fn to_real(&self) -> Vec<f64> {
        self.0.iter().flat_map(|c| [c.re, c.im]).collect()
    }

    pub fn from_interleaved(x: &[f64]) -> CPoint {
        CPoint::new(x.chunks(2).map(|p| CNum::new(p[0], p[1])).collect())
    }
}

impl Index<usize> for CPoint {
    type Output = CNum;
    fn index(&self, k: usize) -> &CNum {
        &self.0[k]
    }
}

impl From<Vec<CNum>> for CPoint {
    fn from(v: Vec<CNum>) -> Self {
        CPoint::new(v)
    }
}

impl fmt::Display for CPoint {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "(")?;
        for (k, c) in self.0.iter().enumerate() {
            if k > 0 {
                write!(f, ", ")?;
            }
            write!(f, "{}", c)?;
        }
        write!(f, ")")
    }
}
