//! Sparse formal power series in n variables, their restrictions to complex
//! lines through the origin, and a root-test radius estimator.

use std::collections::BTreeMap;

use serde::{Deserialize, Serialize};
use smallvec::smallvec;

use crate::error::{Error, Result};
use crate::expr::{HoloExpr, Jet};
use crate::point::{CNum, CPoint};

pub const DEFAULT_MAX_DEGREE: u32 = 64;
pub const DEFAULT_WINDOW: f64 = 0.5;

/// Exponent vector α of a monomial z^α.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct MultiIndex(Vec<u32>);

impl MultiIndex {
    pub fn new(exponents: Vec<u32>) -> Self {
        MultiIndex(exponents)
    }

    pub fn exponents(&self) -> &[u32] {
        &self.0
    }

    pub fn arity(&self) -> usize {
        self.0.len()
    }

    pub fn degree(&self) -> u32 {
        self.0.iter().sum()
    }

    /// z^α.
    pub fn monomial(&self, z: &[CNum]) -> CNum {
        self.0
            .iter()
            .zip(z)
            .fold(CNum::new(1.0, 0.0), |acc, (&a, &zk)| acc * zk.powu(a))
    }
}

/// F = Σ c_α z^α over |α| ≤ max_degree, zero coefficients not stored.
#[derive(Debug, Clone, PartialEq)]
pub struct PowerSeries {
    arity: usize,
    max_degree: u32,
    terms: BTreeMap<MultiIndex, CNum>,
}

/// Coefficients b₀ … b_M of a one-variable series.
#[derive(Debug, Clone, PartialEq)]
pub struct UniSeries {
    coefficients: Vec<CNum>,
}

impl PowerSeries {
    pub fn new(arity: usize, max_degree: u32) -> Result<Self> {
        if arity == 0 {
            return Err(Error::Series("arity must be at least 1".into()));
        }
        Ok(PowerSeries {
            arity,
            max_degree,
            terms: BTreeMap::new(),
        })
    }

    /// Build from `(α, c_α)` pairs; repeated indices are rejected.
    pub fn from_terms(
        arity: usize,
        max_degree: u32,
        terms: impl IntoIterator<Item = (MultiIndex, CNum)>,
    ) -> Result<Self> {
        let mut s = PowerSeries::new(arity, max_degree)?;
        let mut seen = std::collections::BTreeSet::new();
        for (alpha, c) in terms {
            if !seen.insert(alpha.clone()) {
                return Err(Error::Series(format!(
                    "duplicate multi-index {:?}",
                    alpha.0
                )));
            }
            s.set(alpha, c)?;
        }
        Ok(s)
    }

    /// Set c_α, dropping it when zero.
    pub fn set(&mut self, alpha: MultiIndex, c: CNum) -> Result<()> {
        if alpha.arity() != self.arity {
            return Err(Error::ArityMismatch {
                expected: self.arity,
                found: alpha.arity(),
            });
        }
        if alpha.degree() > self.max_degree {
            return Err(Error::Series(format!(
                "multi-index {:?} has degree {} above max_degree {}",
                alpha.0,
                alpha.degree(),
                self.max_degree
            )));
        }
        if !c.is_finite() {
            return Err(Error::Series(format!(
                "non-finite coefficient at {:?}",
                alpha.0
            )));
        }
        if c == CNum::new(0.0, 0.0) {
            self.terms.remove(&alpha);
        } else {
            self.terms.insert(alpha, c);
        }
        Ok(())
    }

    pub fn arity(&self) -> usize {
        self.arity
    }

    pub fn max_degree(&self) -> u32 {
        self.max_degree
    }

    pub fn terms(&self) -> impl Iterator<Item = (&MultiIndex, &CNum)> {
        self.terms.iter()
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn coefficient(&self, alpha: &MultiIndex) -> CNum {
        self.terms.get(alpha).copied().unwrap_or_default()
    }

    /// The polynomial f_m = Σ_{|α| ≤ m} c_α z^α as an expression.
    pub fn partial_sum(&self, m: u32) -> Result<HoloExpr> {
        if m > self.max_degree {
            return Err(Error::InvalidArgument(format!(
                "partial sum degree {m} exceeds max_degree {}",
                self.max_degree
            )));
        }
        let n = self.arity;
        let mut acc: Option<HoloExpr> = None;
        let mut by_degree: Vec<_> = self.terms.iter().filter(|(a, _)| a.degree() <= m).collect();
        by_degree.sort_by_key(|(a, _)| a.degree());
        for (alpha, &c) in by_degree {
            let mut term = HoloExpr::constant(c, n);
            for (k, &e) in alpha.exponents().iter().enumerate() {
                match e {
                    0 => {}
                    1 => term = term * HoloExpr::var(k, n),
                    _ => term = term * HoloExpr::var(k, n).powu(e),
                }
            }
            acc = Some(match acc {
                None => term,
                Some(a) => a + term,
            });
        }
        Ok(acc.unwrap_or_else(|| HoloExpr::real(0.0, n)))
    }

    /// Jets of every partial sum f₀ … f_M at `z`, in one pass over the terms.
    pub fn partial_sum_jets(&self, z: &CPoint) -> Result<Vec<Jet>> {
        let n = self.arity;
        if z.dim() != n {
            return Err(Error::ArityMismatch {
                expected: n,
                found: z.dim(),
            });
        }
        let zero = CNum::new(0.0, 0.0);
        let levels = self.max_degree as usize + 1;
        let mut out: Vec<Jet> = (0..levels)
            .map(|_| Jet {
                value: zero,
                gradient: smallvec![zero; n],
            })
            .collect();
        let zc = z.coords();
        for (alpha, &c) in &self.terms {
            let d = alpha.degree() as usize;
            let slot = &mut out[d];
            slot.value += c * alpha.monomial(zc);
            for k in 0..n {
                let e = alpha.exponents()[k];
                if e == 0 {
                    continue;
                }
                let mut g = c * e as f64;
                for (j, &ej) in alpha.exponents().iter().enumerate() {
                    g *= zc[j].powu(if j == k { ej - 1 } else { ej });
                }
                slot.gradient[k] += g;
            }
        }
        for d in 1..levels {
            let (done, rest) = out.split_at_mut(d);
            let prev = &done[d - 1];
            rest[0].value += prev.value;
            for k in 0..n {
                rest[0].gradient[k] += prev.gradient[k];
            }
        }
        Ok(out)
    }

    /// Coefficients of λ ↦ F(λc): b_m = Σ_{|α|=m} c_α c^α.
    pub fn restrict_to_line(&self, c: &CPoint) -> Result<UniSeries> {
        if c.dim() != self.arity {
            return Err(Error::ArityMismatch {
                expected: self.arity,
                found: c.dim(),
            });
        }
        if (c.norm() - 1.0).abs() > 1e-12 {
            return Err(Error::InvalidArgument(format!(
                "line direction must be a unit vector, got norm {}",
                c.norm()
            )));
        }
        let mut b = vec![CNum::new(0.0, 0.0); self.max_degree as usize + 1];
        for (alpha, &coef) in &self.terms {
            b[alpha.degree() as usize] += coef * alpha.monomial(c.coords());
        }
        Ok(UniSeries { coefficients: b })
    }

    pub fn from_json(text: &str) -> Result<Self> {
        let raw: SeriesJson =
            serde_json::from_str(text).map_err(|e| Error::Series(e.to_string()))?;
        if raw.arity == 0 {
            return Err(Error::Series("arity must be at least 1".into()));
        }
        let terms = raw
            .terms
            .into_iter()
            .map(|t| {
                if t.alpha.len() != raw.arity {
                    return Err(Error::Series(format!(
                        "multi-index {:?} has length {}, expected arity {}",
                        t.alpha,
                        t.alpha.len(),
                        raw.arity
                    )));
                }
                Ok((MultiIndex(t.alpha), CNum::new(t.re, t.im)))
            })
            .collect::<Result<Vec<_>>>()?;
        PowerSeries::from_terms(raw.arity, raw.max_degree, terms)
    }

    pub fn to_json(&self) -> String {
        let raw = SeriesJson {
            arity: self.arity,
            max_degree: self.max_degree,
            terms: self
                .terms
                .iter()
                .map(|(a, c)| TermJson {
                    alpha: a.0.clone(),
                    re: c.re,
                    im: c.im,
                })
                .collect(),
        };
        serde_json::to_string(&raw).expect("series serializes")
    }
}

#[derive(Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct SeriesJson {
    arity: usize,
    max_degree: u32,
    terms: Vec<TermJson>,
}

#[derive(Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct TermJson {
    alpha: Vec<u32>,
    re: f64,
    #[serde(default)]
    im: f64,
}

impl UniSeries {
    pub fn new(coefficients: Vec<CNum>) -> Result<Self> {
        if coefficients.is_empty() {
            return Err(Error::Empty("series coefficients"));
        }
        Ok(UniSeries { coefficients })
    }

    pub fn coefficients(&self) -> &[CNum] {
        &self.coefficients
    }

    /// Highest stored index M.
    pub fn degree(&self) -> usize {
        self.coefficients.len() - 1
    }

    /// Σ_{m ≤ M} b_m λ^m by Horner's rule.
    pub fn eval(&self, lambda: CNum) -> CNum {
        self.coefficients
            .iter()
            .rev()
            .fold(CNum::new(0.0, 0.0), |acc, &b| acc * lambda + b)
    }

    /// The first `m + 1` coefficients.
    pub fn truncated(&self, m: usize) -> UniSeries {
        UniSeries {
            coefficients: self.coefficients[..=m.min(self.degree())].to_vec(),
        }
    }

    /// Root-test radius 1 / max{|b_m|^{1/m}} over the trailing `window`
    /// fraction of indices, skipping zero coefficients. All-zero windows give
    /// `+∞`.
    pub fn radius_estimate(&self, window: f64) -> Result<f64> {
        radius_estimate(self, window)
    }
}

/// See [`UniSeries::radius_estimate`].
pub fn radius_estimate(u: &UniSeries, window: f64) -> Result<f64> {
    if u.coefficients.len() < 4 {
        return Err(Error::InvalidArgument(format!(
            "radius estimation needs at least 4 coefficients, got {}",
            u.coefficients.len()
        )));
    }
    if !(window > 0.0 && window <= 1.0) {
        return Err(Error::InvalidArgument(format!(
            "window must lie in (0, 1], got {window}"
        )));
    }
    let top = u.degree();
    let start = top
        .saturating_sub((window * top as f64).ceil() as usize)
        .max(1);
    let root = (start..=top)
        .filter(|&m| u.coefficients[m] != CNum::new(0.0, 0.0))
        .map(|m| (u.coefficients[m].norm().ln() / m as f64).exp())
        .fold(0.0_f64, f64::max);
    Ok(if root == 0.0 {
        f64::INFINITY
    } else {
        1.0 / root
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn c(re: f64) -> CNum {
        CNum::new(re, 0.0)
    }

    fn uni(f: impl Fn(usize) -> f64, m: usize) -> UniSeries {
        UniSeries::new((0..=m).map(|k| c(f(k))).collect()).unwrap()
    }

    fn factorial(k: usize) -> f64 {
        (1..=k).map(|j| j as f64).product()
    }

    fn one_var(coefs: &[(u32, f64)], max_degree: u32) -> PowerSeries {
        PowerSeries::from_terms(
            1,
            max_degree,
            coefs.iter().map(|&(k, x)| (MultiIndex::new(vec![k]), c(x))),
        )
        .unwrap()
    }

    #[test]
    fn partial_sum_truncates() {
        let f = one_var(&[(0, 1.0), (1, 1.0), (2, 1.0)], 8);
        let p = f.partial_sum(1).unwrap();
        let z = CPoint::from_real(&[0.7]);
        assert_eq!(p.eval(&z).unwrap(), c(1.7));
    }

    #[test]
    fn empty_series_has_zero_partial_sums() {
        let f = PowerSeries::new(2, 8).unwrap();
        let p = f.partial_sum(5).unwrap();
        assert_eq!(p.eval(&CPoint::from_real(&[0.3, 0.2])).unwrap(), c(0.0));
    }

    #[test]
    fn factorial_partial_sum_coefficients() {
        let f = one_var(
            &(0..=10)
                .map(|k| (k, factorial(k as usize)))
                .collect::<Vec<_>>(),
            10,
        );
        let p = f.partial_sum(3).unwrap();
        let expected = HoloExpr::parse("1 + z1 + 2*z1^2 + 6*z1^3", 1).unwrap();
        for x in [-0.4, 0.1, 0.9] {
            let z = CPoint::from_real(&[x]);
            assert!((p.eval(&z).unwrap() - expected.eval(&z).unwrap()).norm() < 1e-14);
        }
    }

    #[test]
    fn partial_sum_out_of_range() {
        let f = PowerSeries::new(1, 4).unwrap();
        assert!(matches!(f.partial_sum(5), Err(Error::InvalidArgument(_))));
    }

    #[test]
    fn restriction_of_product_on_diagonal() {
        let f = PowerSeries::from_terms(2, 4, [(MultiIndex::new(vec![1, 1]), c(1.0))]).unwrap();
        let s = std::f64::consts::FRAC_1_SQRT_2;
        let b = f.restrict_to_line(&CPoint::from_real(&[s, s])).unwrap();
        assert!(b.coefficients()[0].norm() == 0.0 && b.coefficients()[1].norm() == 0.0);
        assert!((b.coefficients()[2] - c(0.5)).norm() < 1e-15);
    }

    #[test]
    fn line_inside_zero_set() {
        let f = PowerSeries::from_terms(2, 4, [(MultiIndex::new(vec![1, 0]), c(1.0))]).unwrap();
        let b = f.restrict_to_line(&CPoint::from_real(&[0.0, 1.0])).unwrap();
        assert!(b.coefficients().iter().all(|x| x.norm() == 0.0));
    }

    #[test]
    fn factorial_diagonal_restriction() {
        // Σ_{k≤6} k!(z1 z2)^k on the diagonal: b_{2k} = k!/2^k.
        let f = PowerSeries::from_terms(
            2,
            12,
            (0..=6u32).map(|k| (MultiIndex::new(vec![k, k]), c(factorial(k as usize)))),
        )
        .unwrap();
        let s = std::f64::consts::FRAC_1_SQRT_2;
        let b = f.restrict_to_line(&CPoint::from_real(&[s, s])).unwrap();
        for (m, bm) in b.coefficients().iter().enumerate() {
            let want = if m % 2 == 0 {
                factorial(m / 2) / 2f64.powi((m / 2) as i32)
            } else {
                0.0
            };
            assert!((bm - c(want)).norm() <= 1e-13 * want.max(1.0), "b_{m}");
        }
    }

    #[test]
    fn restriction_rejects_bad_directions() {
        let f = PowerSeries::new(2, 4).unwrap();
        assert!(matches!(
            f.restrict_to_line(&CPoint::from_real(&[1.0])),
            Err(Error::ArityMismatch { .. })
        ));
        assert!(matches!(
            f.restrict_to_line(&CPoint::from_real(&[1.0, 1.0])),
            Err(Error::InvalidArgument(_))
        ));
    }

    #[test]
    fn radius_of_geometric_series_is_one() {
        assert_eq!(uni(|_| 1.0, 40).radius_estimate(0.5).unwrap(), 1.0);
    }

    #[test]
    fn radius_of_exponential_and_factorial_series() {
        // (1/m!)^{1/m} peaks at m = 20 on the window 20…40: R = (20!)^{1/20} ≈ 8.3.
        let r = uni(|m| 1.0 / factorial(m), 40)
            .radius_estimate(0.5)
            .unwrap();
        assert!(r >= 2.0, "{r}");
        let r = uni(factorial, 40).radius_estimate(0.5).unwrap();
        assert!(r <= 0.1, "{r}");
    }

    #[test]
    fn radius_needs_four_coefficients_and_valid_window() {
        assert!(uni(|_| 1.0, 2).radius_estimate(0.5).is_err());
        assert!(uni(|_| 1.0, 8).radius_estimate(0.0).is_err());
        assert!(uni(|_| 1.0, 8).radius_estimate(1.5).is_err());
    }

    #[test]
    fn zero_window_is_infinite_radius_and_lacunary_terms_count() {
        let mut b = vec![c(0.0); 41];
        b[0] = c(1.0);
        assert_eq!(
            UniSeries::new(b.clone())
                .unwrap()
                .radius_estimate(0.5)
                .unwrap(),
            f64::INFINITY
        );
        b[32] = c(2f64.powi(32));
        let r = UniSeries::new(b).unwrap().radius_estimate(0.5).unwrap();
        assert!((r - 0.5).abs() < 1e-15);
    }

    #[test]
    fn json_round_trip_and_errors() {
        let text = r#"{"arity": 2, "max_degree": 3, "terms": [
            {"alpha": [1, 0], "re": 1.0, "im": 0.5}, {"alpha": [0, 2], "re": -2.0, "im": 0.0}]}"#;
        let f = PowerSeries::from_json(text).unwrap();
        assert_eq!(f.len(), 2);
        assert_eq!(PowerSeries::from_json(&f.to_json()).unwrap(), f);

        let dup = r#"{"arity": 1, "max_degree": 3, "terms": [
            {"alpha": [1], "re": 1.0, "im": 0.0}, {"alpha": [1], "re": 2.0, "im": 0.0}]}"#;
        assert!(
            matches!(PowerSeries::from_json(dup), Err(Error::Series(m)) if m.contains("duplicate"))
        );
        let too_high =
            r#"{"arity": 1, "max_degree": 1, "terms": [{"alpha": [2], "re": 1.0, "im": 0.0}]}"#;
        assert!(PowerSeries::from_json(too_high).is_err());
        let wrong_len =
            r#"{"arity": 2, "max_degree": 4, "terms": [{"alpha": [2], "re": 1.0, "im": 0.0}]}"#;
        assert!(PowerSeries::from_json(wrong_len).is_err());
        assert!(PowerSeries::from_json("{not json").is_err());
    }

    #[test]
    fn zero_coefficients_are_not_stored() {
        let f = one_var(&[(0, 0.0), (1, 2.0)], 4);
        assert_eq!(f.len(), 1);
    }

    #[test]
    fn partial_sum_jets_match_expressions() {
        let f = PowerSeries::from_terms(
            2,
            4,
            [
                (MultiIndex::new(vec![0, 0]), c(1.0)),
                (MultiIndex::new(vec![2, 1]), CNum::new(0.5, -1.0)),
                (MultiIndex::new(vec![1, 3]), c(-2.0)),
            ],
        )
        .unwrap();
        let z = CPoint::new(vec![CNum::new(0.3, 0.1), CNum::new(-0.2, 0.4)]);
        let jets = f.partial_sum_jets(&z).unwrap();
        for m in 0..=4 {
            let e = f.partial_sum(m).unwrap().eval_jet(&z).unwrap();
            assert!((jets[m as usize].value - e.value).norm() < 1e-15);
            for k in 0..2 {
                assert!((jets[m as usize].gradient[k] - e.gradient[k]).norm() < 1e-15);
            }
        }
    }
}
