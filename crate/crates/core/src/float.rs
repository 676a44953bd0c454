//! Floating-point traces: truncated inner-product sums, a Gram matrix in
//! `f64` and its SVD pseudo-inverse. An independent path for comparison with
//! the exact engine, never authoritative.

use nalgebra::DMatrix;

use crate::class_vector::{ClassVector, HFunction};
use crate::error::{Error, Result};

/// Relative singular-value cutoff for the pseudo-inverse.
const PINV_EPS: f64 = 1e-12;

fn low_weight(vs: &[ClassVector]) -> i64 {
    vs.iter()
        .filter(|v| !v.is_zero())
        .map(|v| v.numerator().low())
        .min()
        .unwrap_or(0)
}

/// `⟨u, w⟩ = Σ_n q^{-n} u_n w_n` truncated to `n < lo + terms`.
fn truncated_inner(q: f64, lo: i64, u: &[f64], w: &[f64]) -> f64 {
    u.iter()
        .zip(w)
        .enumerate()
        .map(|(i, (a, b))| q.powi(-(lo + i as i64) as i32) * a * b)
        .sum()
}

/// `tr(P_V U(h))` in log-q units, `V` spanned by `generators`.
pub fn float_trace(generators: &[ClassVector], h: &HFunction, terms: usize) -> Result<f64> {
    if generators.is_empty() {
        return Ok(0.0);
    }
    let q = generators[0].q() as f64;
    let images: Vec<ClassVector> = generators.iter().map(|b| h.apply(b)).collect();
    let lo = low_weight(generators).min(low_weight(&images));
    let hi = lo + terms as i64;
    let gv: Vec<Vec<f64>> = generators.iter().map(|b| b.weight_values_f64(lo, hi)).collect();
    let iv: Vec<Vec<f64>> = images.iter().map(|b| b.weight_values_f64(lo, hi)).collect();
    let n = generators.len();
    let gram = DMatrix::from_fn(n, n, |i, j| truncated_inner(q, lo, &gv[i], &gv[j]));
    let a = DMatrix::from_fn(n, n, |j, i| truncated_inner(q, lo, &gv[j], &iv[i]));
    let scale = gram.amax().max(f64::MIN_POSITIVE);
    let pinv = gram
        .pseudo_inverse(PINV_EPS * scale)
        .map_err(|e| Error::Precondition(format!("pseudo-inverse failed: {e}")))?;
    Ok((pinv * a).trace())
}
