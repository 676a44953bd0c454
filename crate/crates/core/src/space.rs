//! The finite-dimensional O_S^×-invariant spaces `Q_{S,Λ}`, `Q_{S,Λ,0}` and
//! `Q̄_{S,Λ,0}`, and traces of `P·U(h)` on them.
//!
//! `Q̃_{S,Λ}` is computed in ball coordinates on the box `[-D, D]^S`: a
//! function `Σ b[m] ⊗ 1_{π^m O}` vanishes on `{|x| > Λ}` exactly when
//! `b[m] = 0` for every `m` of weight below `-k`, and the Fourier transform
//! maps ball coordinates monomially. The `Q`-spaces are the images under the
//! periodizations, and depth saturation certifies that the box is large
//! enough.

use std::collections::BTreeMap;

use num_bigint::BigInt;
use num_traits::{One, Zero};
use rayon::prelude::*;

use crate::class_vector::{ClassVector, HFunction, LaurentPoly};
use crate::error::{Error, Result};
use crate::linalg::{self, Matrix, SparseRow};
use crate::scalar::{int, pow_q, GradedScalar, Rational};
use crate::semilocal::{
    e_from_ebar, f_one, BallCoefficients, PlaceSet, SemiLocalFunction,
};
use crate::shell::ShellFunction;

/// How many extra depths are tried before saturation is declared failed.
pub const MAX_EXTRA_DEPTH: i64 = 6;

/// Numerators of `vectors` over a shared denominator, as dense rows.
pub fn numerator_rows(vectors: &[ClassVector]) -> Matrix {
    let mut den: Vec<u32> = Vec::new();
    for v in vectors {
        let mut merged = Vec::new();
        let mut rest = den.clone();
        for f in v.denominator() {
            if let Some(pos) = rest.iter().position(|g| g == f) {
                rest.remove(pos);
            }
            merged.push(*f);
        }
        merged.extend(rest);
        merged.sort_unstable();
        den = merged;
    }
    let nums: Vec<LaurentPoly> = vectors
        .iter()
        .map(|v| v.numerator_over(&den).expect("den contains every denominator"))
        .collect();
    let lo = nums.iter().filter(|n| !n.is_zero()).map(|n| n.low()).min().unwrap_or(0);
    let hi = nums.iter().filter(|n| !n.is_zero()).map(|n| n.high()).max().unwrap_or(-1);
    nums.iter()
        .map(|n| (lo..=hi).map(|e| n.coeff(e)).collect())
        .collect()
}

pub fn rank_of(vectors: &[ClassVector]) -> usize {
    if vectors.is_empty() {
        return 0;
    }
    linalg::rank(&numerator_rows(vectors))
}

/// A generating family of a subspace of the weighted L² model with its Gram
/// matrix (log-q degree 1) and the pseudo-inverse of the Gram matrix
/// (degree −1).
#[derive(Clone, Debug)]
pub struct SubspaceBasis {
    generators: Vec<ClassVector>,
    gram: Matrix,
    gram_pinv: Matrix,
    rank: usize,
}

impl SubspaceBasis {
    /// Keeps a maximal independent subfamily, so the Gram matrix is invertible.
    pub fn new(generators: Vec<ClassVector>) -> Result<Self> {
        let keep = if generators.is_empty() {
            Vec::new()
        } else {
            linalg::independent_rows(&numerator_rows(&generators))
        };
        let gens: Vec<ClassVector> = keep.into_iter().map(|i| generators[i].clone()).collect();
        Self::with_generators(gens)
    }

    /// Uses the family as given; dependent families are handled by the
    /// pseudo-inverse.
    pub fn with_generators(generators: Vec<ClassVector>) -> Result<Self> {
        let n = generators.len();
        let pairs: Vec<(usize, usize)> = (0..n).flat_map(|i| (i..n).map(move |j| (i, j))).collect();
        let values = pairs
            .par_iter()
            .map(|&(i, j)| generators[i].inner_product(&generators[j]))
            .collect::<Result<Vec<_>>>()?;
        let mut gram = linalg::zeros(n, n);
        for (&(i, j), v) in pairs.iter().zip(values) {
            gram[i][j] = v.value().clone();
            gram[j][i] = v.into_value();
        }
        let gram_pinv = linalg::pinv(&gram);
        let rank = if n == 0 { 0 } else { linalg::rank(&gram) };
        Ok(SubspaceBasis {
            generators,
            gram,
            gram_pinv,
            rank,
        })
    }

    pub fn generators(&self) -> &[ClassVector] {
        &self.generators
    }

    pub fn rank(&self) -> usize {
        self.rank
    }

    /// Gram matrix entries, each of log-q degree 1.
    pub fn gram(&self) -> &Matrix {
        &self.gram
    }

    /// Pseudo-inverse of the Gram matrix, entries of degree −1.
    pub fn gram_pinv(&self) -> &Matrix {
        &self.gram_pinv
    }

    /// `⟨b_i, v⟩` for every generator.
    pub fn pairings(&self, v: &ClassVector) -> Result<Vec<GradedScalar>> {
        self.generators
            .par_iter()
            .map(|b| b.inner_product(v))
            .collect()
    }

    /// Coefficients `c = G⁺ (⟨b_i, v⟩)` of the orthogonal projection of `v`.
    /// They have degree `degree(v)` where `v` of degree 0 is a plain vector.
    pub fn projection_coefficients(&self, v: &ClassVector) -> Result<Vec<Rational>> {
        let rhs: Vec<Rational> = self.pairings(v)?.into_iter().map(|g| g.into_value()).collect();
        Ok(self
            .gram_pinv
            .iter()
            .map(|row| row.iter().zip(&rhs).map(|(a, b)| a * b).sum())
            .collect())
    }

    pub fn project(&self, v: &ClassVector) -> Result<ClassVector> {
        let c = self.projection_coefficients(v)?;
        self.combine(&c)
    }

    pub fn combine(&self, c: &[Rational]) -> Result<ClassVector> {
        let q = self.generators.first().map_or(2, ClassVector::q);
        self.generators
            .iter()
            .zip(c)
            .try_fold(ClassVector::zero(q), |acc, (b, x)| acc.add(&b.scale(x)))
    }

    /// `tr(P_V U(h)) = tr(G⁺ A)`, `A_{ji} = ⟨b_j, U(h) b_i⟩`.
    pub fn project_trace(&self, h: &HFunction) -> Result<GradedScalar> {
        let n = self.generators.len();
        if n == 0 {
            return Ok(GradedScalar::zero(1));
        }
        let images: Vec<ClassVector> = self.generators.iter().map(|b| h.apply(b)).collect();
        let pairs: Vec<(usize, usize)> = (0..n).flat_map(|i| (0..n).map(move |j| (i, j))).collect();
        let entries = pairs
            .par_iter()
            .map(|&(j, i)| self.generators[j].inner_product(&images[i]))
            .collect::<Result<Vec<_>>>()?;
        let mut total = GradedScalar::zero(1);
        for (&(j, i), a) in pairs.iter().zip(entries) {
            let g = &self.gram_pinv[i][j];
            if g.is_zero() {
                continue;
            }
            // G⁺ has degree −1 and ⟨b, U b⟩ degree 2 (U carries one unit).
            let term = &GradedScalar::new(g.clone(), -1) * &GradedScalar::new(a.into_value(), 2);
            total = total.try_add(&term)?;
        }
        Ok(total)
    }
}

/// Dimensions observed at one depth.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct DepthDims {
    pub depth: i64,
    pub dim_q: usize,
    pub dim_q0: usize,
}

/// Result of solving the support and vanishing constraints on one box.
#[derive(Clone, Debug)]
struct BoxSolution {
    /// Ball coefficients of solutions whose E-images form a basis of the image.
    basis: Vec<BallCoefficients>,
    rank: usize,
}

fn ball_box(len: usize, depth: i64) -> Vec<Vec<i64>> {
    let mut out = Vec::new();
    let mut m = vec![-depth; len];
    loop {
        out.push(m.clone());
        let mut i = 0;
        loop {
            if i == len {
                return out;
            }
            if m[i] < depth {
                m[i] += 1;
                break;
            }
            m[i] = -depth;
            i += 1;
        }
    }
}

/// Self-dual volume of the ball product `π^m O`.
fn ball_product_volume(set: &PlaceSet, m: &[i64]) -> Rational {
    set.places()
        .iter()
        .zip(m)
        .map(|(p, &mv)| ShellFunction::ball_volume(p, mv))
        .product()
}

fn solve_box(set: &PlaceSet, k: i64, depth: i64, vanishing: bool) -> BoxSolution {
    let points = ball_box(set.len(), depth);
    let shift = -set.weight_of_orders();
    let mut rows: Vec<SparseRow> = Vec::new();
    let mut volumes = Vec::with_capacity(points.len());
    for (idx, m) in points.iter().enumerate() {
        let w = set.weight(m);
        let vol = ball_product_volume(set, m);
        // f vanishes above Λ: no ball of weight below -k
        if w < -k {
            rows.push(BTreeMap::from([(idx, Rational::one())]));
        }
        // f̂ has the ball -m-n with coefficient vol·b[m], of weight -w + shift
        if -w + shift < -k {
            rows.push(BTreeMap::from([(idx, vol.clone())]));
        }
        volumes.push(vol);
    }
    if vanishing {
        rows.push((0..points.len()).map(|i| (i, Rational::one())).collect());
        rows.push(volumes.iter().cloned().enumerate().collect());
    }
    let kernel = linalg::sparse_kernel(&rows, points.len());
    // E-image numerators, indexed by weight
    let lo = -k;
    let hi = k + shift;
    let width = (hi - lo + 1).max(0) as usize;
    let numerators: Matrix = kernel
        .par_iter()
        .map(|v| {
            let mut row = vec![Rational::zero(); width];
            for (idx, c) in v {
                let w = set.weight(&points[*idx]);
                debug_assert!((lo..=hi).contains(&w));
                row[(w - lo) as usize] += c;
            }
            row
        })
        .collect();
    let chosen = linalg::independent_rows(&numerators);
    let basis = chosen
        .iter()
        .map(|&i| {
            kernel[i]
                .iter()
                .map(|(idx, c)| (points[*idx].clone(), c.clone()))
                .collect()
        })
        .collect();
    BoxSolution {
        rank: chosen.len(),
        basis,
    }
}

/// Bases of `Q̃_{S,Λ}` and `Q̃_{S,Λ,0}` (modulo the kernel of `E_S`) for
/// `Λ = q^k`, with the saturation record.
#[derive(Clone, Debug)]
pub struct TildeQ {
    pub k: i64,
    pub depth: i64,
    pub q_functions: Vec<SemiLocalFunction>,
    pub q0_functions: Vec<SemiLocalFunction>,
    pub saturation: Vec<DepthDims>,
}

/// Smallest admissible depth for `Λ = q^k`.
pub fn min_depth(k: i64) -> i64 {
    k + 3
}

pub fn build_tilde_q(set: &PlaceSet, k: i64, depth: i64) -> Result<TildeQ> {
    if k < 0 {
        return Err(Error::Precondition(format!("k = {k} must be nonnegative")));
    }
    if depth < min_depth(k) {
        return Err(Error::DepthTooSmall {
            depth,
            detail: format!("need at least k + |n(∞)| + 1 = {}", min_depth(k)),
        });
    }
    let mut record: Vec<DepthDims> = Vec::new();
    let mut solutions: Vec<(BoxSolution, BoxSolution)> = Vec::new();
    for d in depth..=depth + MAX_EXTRA_DEPTH {
        let full = solve_box(set, k, d, false);
        let zero = solve_box(set, k, d, true);
        record.push(DepthDims {
            depth: d,
            dim_q: full.rank,
            dim_q0: zero.rank,
        });
        solutions.push((full, zero));
        let n = record.len();
        if n >= 3 {
            let a = &record[n - 3];
            let stable = record[n - 2..]
                .iter()
                .all(|r| r.dim_q == a.dim_q && r.dim_q0 == a.dim_q0);
            if stable {
                let (full, zero) = solutions.swap_remove(n - 3);
                return Ok(TildeQ {
                    k,
                    depth: a.depth,
                    q_functions: full.basis.iter().map(|b| SemiLocalFunction::from_balls(set, b)).collect(),
                    q0_functions: zero.basis.iter().map(|b| SemiLocalFunction::from_balls(set, b)).collect(),
                    saturation: record,
                });
            }
        }
    }
    Err(Error::DepthTooSmall {
        depth: depth + MAX_EXTRA_DEPTH,
        detail: format!("dimensions did not saturate: {record:?}"),
    })
}

/// Traces of `P·U(h)` on the three spaces.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Traces {
    pub q0: GradedScalar,
    pub qbar0: GradedScalar,
    pub q: GradedScalar,
}

/// The three `Q`-spaces for one `Λ = q^k`.
#[derive(Clone, Debug)]
pub struct Spaces {
    pub set: PlaceSet,
    pub k: i64,
    pub tilde: TildeQ,
    pub q: SubspaceBasis,
    pub q0: SubspaceBasis,
    pub qbar0: SubspaceBasis,
}

impl Spaces {
    pub fn build(set: &PlaceSet, k: i64, depth: i64) -> Result<Self> {
        let tilde = build_tilde_q(set, k, depth)?;
        let q = SubspaceBasis::new(tilde.q_functions.iter().map(|f| f.periodize_e(set)).collect())?;
        let q0 = SubspaceBasis::new(tilde.q0_functions.iter().map(|f| f.periodize_e(set)).collect())?;
        let qbar0 = SubspaceBasis::new(
            tilde
                .q0_functions
                .iter()
                .map(|f| f.periodize_ebar(set))
                .collect::<Result<Vec<_>>>()?,
        )?;
        Ok(Spaces {
            set: set.clone(),
            k,
            tilde,
            q,
            q0,
            qbar0,
        })
    }

    pub fn traces(&self, h: &HFunction) -> Result<Traces> {
        Ok(Traces {
            q0: self.q0.project_trace(h)?,
            qbar0: self.qbar0.project_trace(h)?,
            q: self.q.project_trace(h)?,
        })
    }

    /// `tr Q̄_{S,Λ,0} U(h)` on the span of `T(E_S(f))`, with T applied by
    /// explicit convolution with the counts `N_a`.
    pub fn qbar0_trace_via_t(&self, h: &HFunction) -> Result<GradedScalar> {
        let images = self
            .q0
            .generators()
            .iter()
            .map(|v| apply_t_explicit(&self.set, v, finite_window(self.k)))
            .collect::<Result<Vec<_>>>()?;
        SubspaceBasis::new(images)?.project_trace(h)
    }
}

/// Classes `[-k, k]` plus a margin, as a window of weights.
fn finite_window(k: i64) -> (i64, i64) {
    (-k - 2, k + 12)
}

/// Sequence `n -> v_n` (weight index) on `lo..hi`.
fn window_values(v: &ClassVector, lo: i64, hi: i64) -> Vec<Rational> {
    v.weight_values(lo, hi)
}

/// `Σ_{a>=0} c_a φ_{n-a}` on the window; exact because φ vanishes below `lo`.
fn convolve_window(coeffs: &[BigInt], values: &[Rational]) -> Vec<Rational> {
    (0..values.len())
        .map(|n| {
            (0..=n)
                .filter(|&a| !coeffs[a].is_zero())
                .map(|a| Rational::from_integer(coeffs[a].clone()) * &values[n - a])
                .sum()
        })
        .collect()
}

/// `T(φ)(d) = Σ_a N_a φ(d + a)`, evaluated term by term on a window and
/// required to vanish on its upper margin (the images used here are finite).
pub fn apply_t_explicit(set: &PlaceSet, phi: &ClassVector, window: (i64, i64)) -> Result<ClassVector> {
    let (lo, hi) = window;
    if phi.numerator().low() < lo {
        return Err(Error::Precondition("window starts above the support".into()));
    }
    let counts = set.monoid().counts_euler((hi - lo) as usize);
    let vals = convolve_window(&counts, &window_values(phi, lo, hi));
    let margin = 4usize;
    if vals[vals.len() - margin..].iter().any(|v| !v.is_zero()) {
        return Err(Error::Precondition(
            "T-image does not vanish on the window margin".into(),
        ));
    }
    let map: BTreeMap<i64, Rational> = vals
        .into_iter()
        .enumerate()
        .map(|(i, v)| (-(lo + i as i64), v))
        .collect();
    Ok(ClassVector::from_values(set.q(), &map))
}

/// Checks `T'(T(ψ)) = ψ` and `T'(ψ) = E` on a window, with `T'` given by the
/// Möbius sums `M_a = Σ_{deg r = a} μ(r)` and `T` by the counts `N_a`, both
/// taken from the Euler product. Returns whether both hold exactly.
pub fn check_inversion(set: &PlaceSet, ebar: &ClassVector, window: (i64, i64)) -> Result<bool> {
    let (lo, hi) = window;
    let n = (hi - lo) as usize;
    let mobius = set.monoid().mobius_sums_euler(n);
    let counts = set.monoid().counts_euler(n);
    let psi = window_values(ebar, lo, hi);
    let e = convolve_window(&mobius, &psi);
    let back = convolve_window(&counts, &e);
    let gf_e = window_values(&e_from_ebar(set, ebar), lo, hi);
    Ok(back == psi && e == gf_e)
}

/// Outcome of the eigenvalue check for `h = (q-1)·δ_e`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Lemma32 {
    pub e: i64,
    /// Coefficient of `E(f_{1,Λ})` in `P_Q U(h) E(f_{1,Λ})` modulo `Q_0`.
    pub lambda: GradedScalar,
    /// `vol(O_S^×)(1/|b|)(c_S − Λ²q_0|b|)/(c_S − Λ²q_0)` with `|b| = q^e`.
    pub expected: GradedScalar,
    /// `vol(O_S^×)·Σ_{A(c_S/(Λ|b|), Λ)} |a| / Σ_{A(c_S/Λ, Λ)} |a|`, the
    /// ratio the closed form is summed from.
    pub sum_formula: GradedScalar,
    /// Coefficient along `E(f_{0,Λ})`, `f_{0,Λ} = f̂_{1,Λ}`.
    pub along_f0: GradedScalar,
}

impl Lemma32 {
    /// Whether the range `A(c_S/(Λ|b|), Λ)` reaches down to at most one
    /// step past empty, which the closed form needs.
    pub fn closed_form_applies(set: &PlaceSet, k: i64, e: i64) -> bool {
        set.log_c_s() - k - e <= k + 1
    }
}

/// `Σ_{d=lo}^{hi} q^d`, zero for an empty range.
fn geometric(q: u64, lo: i64, hi: i64) -> Rational {
    (lo..=hi).map(|d| pow_q(q, d)).sum()
}

pub fn lemma32_sum_formula(set: &PlaceSet, k: i64, e: i64) -> Result<GradedScalar> {
    let q = set.q();
    let lc = set.log_c_s();
    let den = geometric(q, lc - k, k);
    if den.is_zero() {
        return Err(Error::Precondition(format!("A(c_S/Λ, Λ) is empty at k = {k}")));
    }
    Ok(unit_group_volume(set).scale(&(geometric(q, lc - k - e, k) / den)))
}

/// `vol(O_S^×)` in the measure on A_S^× for which each class has one unit:
/// `q − 1` units.
pub fn unit_group_volume(set: &PlaceSet) -> GradedScalar {
    GradedScalar::units(int(set.q() as i64 - 1))
}

pub fn lemma32_expected(set: &PlaceSet, k: i64, e: i64) -> Result<GradedScalar> {
    let q = set.q();
    let c = set.c_s();
    let lam2q = pow_q(q, 2 * k + 1);
    let b = pow_q(q, e);
    let den = &c - &lam2q;
    if den.is_zero() {
        return Err(Error::DivisionByZero);
    }
    let ratio = (&c - &lam2q * &b) / den / &b;
    Ok(unit_group_volume(set).scale(&ratio))
}

impl Spaces {
    pub fn f_one_vector(&self) -> ClassVector {
        f_one(&self.set, self.k).periodize_e(&self.set)
    }

    pub fn f_zero_vector(&self) -> ClassVector {
        f_one(&self.set, self.k).fourier().periodize_e(&self.set)
    }

    /// Decomposes `P_Q U(h) E(f_1)` in the basis `[Q_0 basis, E(f_1), E(f_0)]`.
    pub fn lemma32(&self, e: i64) -> Result<Lemma32> {
        if e > 0 {
            return Err(Error::Precondition(format!("need |b| <= 1, got class {e}")));
        }
        let q = self.set.q();
        let h = HFunction::delta(e, int(q as i64 - 1));
        let e1 = self.f_one_vector();
        let e0 = self.f_zero_vector();
        let mut gens: Vec<ClassVector> = self.q0.generators().to_vec();
        gens.push(e1.clone());
        gens.push(e0);
        let basis = SubspaceBasis::with_generators(gens)?;
        if basis.rank() != self.q.rank() || basis.rank() != basis.generators().len() {
            return Err(Error::Precondition(format!(
                "Q_0 + E(f_1) + E(f_0) has rank {} but Q has rank {}",
                basis.rank(),
                self.q.rank()
            )));
        }
        let image = self.q.project(&h.apply(&e1))?;
        let c = basis.projection_coefficients(&image)?;
        let n = c.len();
        Ok(Lemma32 {
            e,
            lambda: GradedScalar::units(c[n - 2].clone()),
            expected: lemma32_expected(&self.set, self.k, e)?,
            sum_formula: lemma32_sum_formula(&self.set, self.k, e)?,
            along_f0: GradedScalar::units(c[n - 1].clone()),
        })
    }

    /// `‖P_{Q_0} E(f_1)‖² / ‖E(f_1)‖²`: the squared norm of the normalized
    /// component `q̃_{1,Λ}` of `E(f̃_{1,Λ})` inside `Q_0`.
    pub fn lemma33_diagnostic(&self) -> Result<Rational> {
        let e1 = self.f_one_vector();
        if e1.is_zero() {
            return Err(Error::Precondition("f_1 vanishes for Λ below c_S".into()));
        }
        let inside = self.q0.project(&e1)?;
        Ok(inside.norm_squared()?.value() / e1.norm_squared()?.value())
    }
}

/// Pointwise membership in `Q̃_{S,Λ}` (or `Q̃_{S,Λ,0}` with `vanishing`).
pub fn check_membership(set: &PlaceSet, k: i64, functions: &[SemiLocalFunction], vanishing: bool) -> bool {
    functions.par_iter().all(|f| {
        let (a, b) = f.product_norm_support_check(set, k);
        let zero_ok = !vanishing || {
            let (f0, fh0) = f.functionals();
            f0.is_zero() && fh0.is_zero()
        };
        a && b && zero_ok
    })
}

/// `Ē(f)(d) = q^{-d} Ē(f̂)(-d)` on the classes `[-span, span]`.
pub fn check_duality(set: &PlaceSet, f: &SemiLocalFunction, span: i64) -> Result<bool> {
    let a = f.periodize_ebar(set)?;
    let b = f.fourier().periodize_ebar(set)?;
    let q = set.q();
    Ok((-span..=span).all(|d| a.value(d) == pow_q(q, -d) * b.value(-d)))
}

/// The involution `J: φ(d) ↦ q^{-d} φ(-d)` on finitely supported vectors.
pub fn reflect(v: &ClassVector) -> Result<ClassVector> {
    if !v.is_finite() {
        return Err(Error::Precondition("reflection needs finite support".into()));
    }
    let q = v.q();
    let map: BTreeMap<i64, Rational> = v
        .numerator()
        .terms()
        .map(|(n, c)| {
            let d = -n;
            (-d, pow_q(q, d) * c)
        })
        .collect();
    Ok(ClassVector::from_values(q, &map))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fq::Fq;

    fn set(spec: &str) -> PlaceSet {
        PlaceSet::parse(spec, &Fq::new(2).unwrap()).unwrap()
    }

    #[test]
    fn dimensions_small_k() {
        let s = set("inf [0,1]");
        for k in 0..3 {
            let t = build_tilde_q(&s, k, min_depth(k)).unwrap();
            let last = t.saturation.last().unwrap();
            assert_eq!(last.dim_q, (2 * k + 3) as usize);
            assert_eq!(last.dim_q0, (2 * k + 1) as usize);
            assert!(check_membership(&s, k, &t.q_functions, false));
            assert!(check_membership(&s, k, &t.q0_functions, true));
        }
    }

    #[test]
    fn depth_below_minimum_is_rejected() {
        let s = set("inf [0,1]");
        assert!(matches!(
            build_tilde_q(&s, 2, 3),
            Err(Error::DepthTooSmall { .. })
        ));
    }

    #[test]
    fn projection_trace_is_dimension() {
        let s = set("inf [0,1]");
        let sp = Spaces::build(&s, 1, min_depth(1)).unwrap();
        let id = HFunction::delta(0, int(1));
        let t = sp.traces(&id).unwrap();
        assert_eq!(t.q0, GradedScalar::units(int(3)));
        assert_eq!(t.qbar0, GradedScalar::units(int(3)));
        assert_eq!(t.q, GradedScalar::units(int(5)));
    }

    #[test]
    fn empty_basis_has_zero_trace() {
        let b = SubspaceBasis::new(Vec::new()).unwrap();
        assert_eq!(
            b.project_trace(&HFunction::delta(0, int(1))).unwrap(),
            GradedScalar::zero(1)
        );
    }

    #[test]
    fn reflection_is_an_involution() {
        let v = ClassVector::from_values(
            3,
            &BTreeMap::from([(-1, int(2)), (2, int(5))]),
        );
        assert_eq!(reflect(&reflect(&v).unwrap()).unwrap(), v);
        assert_eq!(reflect(&v).unwrap().value(1), int(2) / int(3));
    }
}
