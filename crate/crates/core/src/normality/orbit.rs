//! Families generated by automorphisms.

use crate::error::{Error, Result};
use crate::expr::HoloExpr;
use crate::metric::{ball_automorphism, disc_automorphism};
use crate::point::{CNum, CPoint};

/// Translates f(e^{iθ}(a − z)/(1 − āz)) for each (a, θ).
pub fn translate_orbit(f: &HoloExpr, params: &[(CNum, f64)]) -> Result<Vec<HoloExpr>> {
    if f.arity() != 1 {
        return Err(Error::ArityMismatch {
            expected: 1,
            found: f.arity(),
        });
    }
    params
        .iter()
        .map(|&(a, theta)| f.substitute(&[disc_automorphism(a, theta)?.to_expr()]))
        .collect()
}

/// Compositions f ∘ φ_a with the involutive ball automorphisms φ_a.
pub fn ball_orbit(f: &HoloExpr, params: &[CPoint]) -> Result<Vec<HoloExpr>> {
    params
        .iter()
        .map(|a| {
            if a.dim() != f.arity() {
                return Err(Error::ArityMismatch {
                    expected: f.arity(),
                    found: a.dim(),
                });
            }
            f.substitute(&ball_automorphism(a)?.exprs())
        })
        .collect()
}
