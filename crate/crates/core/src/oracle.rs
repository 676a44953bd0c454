//! Slow, independent reimplementations used to cross-check the main path.
//!
//! Nothing here shares code with the closed forms it checks: principal
//! values come from coset enumeration in `F_{q_v}((π))`, counts of monic
//! polynomials from explicit enumeration and trial division, periodizations
//! from orbit sums over explicit group elements, and `Q̃` from pointwise
//! support constraints instead of ball coordinates.

use std::collections::BTreeMap;

use num_traits::Zero;

use crate::error::{Error, Result};
use crate::fq::{Fq, FqElement};
use crate::linalg;
use crate::place::Place;
use crate::poly::FqPoly;
use crate::scalar::{int, pow_q, to_f64, Rational};
use crate::semilocal::{PlaceSet, SemiLocalFunction};
use crate::shell::ShellFunction;

/// Units `u0 + π^M O` of `O_v` modulo `π^M`, as digit strings `a_0..a_{M-1}`.
fn unit_cosets(residue: &Fq, m: u32) -> Vec<Vec<FqElement>> {
    let mut out: Vec<Vec<FqElement>> = residue
        .elements()
        .filter(|a| *a != residue.zero())
        .map(|a| vec![a])
        .collect();
    for _ in 1..m {
        out = out
            .into_iter()
            .flat_map(|prefix| {
                residue.elements().map(move |a| {
                    let mut p = prefix.clone();
                    p.push(a);
                    p
                })
            })
            .collect();
    }
    out
}

/// Valuation of `π^j·u0 − 1` from the truncated digits, or `None` when the
/// truncation cannot decide it.
fn valuation_of_difference(residue: &Fq, j: i64, digits: &[FqElement]) -> Option<i64> {
    let lo = j.min(0);
    let hi = j + digits.len() as i64;
    for pos in lo..hi {
        let a = if pos >= j {
            digits[(pos - j) as usize]
        } else {
            residue.zero()
        };
        let b = if pos == 0 { residue.one() } else { residue.zero() };
        if residue.sub(a, b) != residue.zero() {
            return Some(pos);
        }
    }
    None
}

/// `(vol, |u - 1|)` for each coset of shell `j`, refined to depth `m`.
fn refined_cosets(place: &Place, j: i64, m: u32) -> Result<Vec<(Rational, Rational)>> {
    let qv = place.q_v();
    if qv > 16 {
        return Err(Error::UnsupportedFieldSize(qv as u32));
    }
    let residue = Fq::new(qv as u32)?;
    let cosets = unit_cosets(&residue, m);
    let vol = int(place.degree() as i64) / Rational::from_integer(cosets.len().into());
    cosets
        .iter()
        .map(|digits| {
            let v = valuation_of_difference(&residue, j, digits).ok_or_else(|| {
                Error::Precondition(format!("depth {m} cannot resolve shell {j}"))
            })?;
            Ok((vol.clone(), pow_q(qv, -v)))
        })
        .collect()
}

/// `∫′ h(u)/|u−1| d×u` by summing `h·vol/|u−1|` over cosets of
/// `1 + π^m O_v` in each shell. The shell `O_v^×` is dropped: on it `h` is a
/// multiple of `1_{O_v^×}`, which the normalization sends to zero.
pub fn principal_value_by_cosets(h: &ShellFunction, m: u32) -> Result<Rational> {
    if !h.tail_value().is_zero() {
        return Err(Error::NonCompactSupport);
    }
    let mut total = Rational::zero();
    for (i, value) in h.exceptional().iter().enumerate() {
        let j = h.j_min() + i as i64;
        if j == 0 || value.is_zero() {
            continue;
        }
        for (vol, modulus) in refined_cosets(h.place(), j, m)? {
            total += value * vol / modulus;
        }
    }
    Ok(total)
}

/// Same enumeration in `f64`.
pub fn principal_value_by_cosets_f64(h: &ShellFunction, m: u32) -> Result<f64> {
    if !h.tail_value().is_zero() {
        return Err(Error::NonCompactSupport);
    }
    let mut total = 0.0;
    for (i, value) in h.exceptional().iter().enumerate() {
        let j = h.j_min() + i as i64;
        if j == 0 || value.is_zero() {
            continue;
        }
        let value = to_f64(value);
        for (vol, modulus) in refined_cosets(h.place(), j, m)? {
            total += value * to_f64(&vol) / to_f64(&modulus);
        }
    }
    Ok(total)
}

/// Irreducibility by trial division with every monic polynomial of degree
/// at most half.
pub fn is_irreducible_by_trial(p: &FqPoly, field: &Fq) -> bool {
    let Some(n) = p.degree() else {
        return false;
    };
    if n == 0 {
        return false;
    }
    (1..=n / 2).all(|d| FqPoly::monic_of_degree(d, field).all(|r| !r.divides(p, field)))
}

pub fn count_irreducibles_by_trial(field: &Fq, degree: usize) -> usize {
    FqPoly::monic_of_degree(degree, field)
        .filter(|p| is_irreducible_by_trial(p, field))
        .count()
}

/// `μ(r)` by trial factorization.
pub fn mobius_by_trial(r: &FqPoly, field: &Fq) -> i64 {
    let mut rest = r.clone();
    let mut sign = 1;
    let mut d = 1;
    while rest.degree().unwrap_or(0) > 0 {
        let mut found = false;
        for p in FqPoly::monic_of_degree(d, field) {
            if !is_irreducible_by_trial(&p, field) || !p.divides(&rest, field) {
                continue;
            }
            rest = rest.div_rem(&p, field).expect("nonzero divisor").0;
            if p.divides(&rest, field) {
                return 0;
            }
            sign = -sign;
            found = true;
        }
        if !found {
            d += 1;
        }
    }
    sign
}

/// Monic polynomials of the given degree coprime to the finite places of S.
fn coprime_monics(set: &PlaceSet, degree: usize) -> Vec<FqPoly> {
    let field = set.field();
    let finite: Vec<&FqPoly> = set.places().iter().filter_map(Place::polynomial).collect();
    FqPoly::monic_of_degree(degree, field)
        .filter(|r| finite.iter().all(|p| !p.divides(r, field)))
        .collect()
}

/// `(N_a, M_a)` for `a < n` by enumerating and factoring.
pub fn sieve_counts(set: &PlaceSet, n: usize) -> (Vec<i64>, Vec<i64>) {
    let field = set.field();
    (0..n)
        .map(|a| {
            let rs = coprime_monics(set, a);
            let mu = rs.iter().map(|r| mobius_by_trial(r, field)).sum::<i64>();
            (rs.len() as i64, mu)
        })
        .unzip()
}

fn infinity_index(set: &PlaceSet) -> usize {
    set.places()
        .iter()
        .position(Place::is_infinity)
        .expect("validated place sets contain infinity")
}

/// Lower valuation bounds of `f` per place.
fn lower_bounds(set: &PlaceSet, f: &SemiLocalFunction) -> Option<Vec<i64>> {
    f.valuation_box(set.len())
        .map(|b| b.into_iter().map(|(lo, _)| lo).collect())
}

/// Exponent vectors `n_P ≥ lo_P` of the finite places with
/// `Σ n_P f_P ≤ budget`.
fn unit_exponents(set: &PlaceSet, lo: &[i64], budget: i64) -> Vec<Vec<i64>> {
    let inf = infinity_index(set);
    let finite: Vec<usize> = (0..set.len()).filter(|&i| i != inf).collect();
    let degs = set.degrees();
    let base: i64 = finite.iter().map(|&i| lo[i] * degs[i] as i64).sum();
    if base > budget {
        return Vec::new();
    }
    let mut out = Vec::new();
    let mut n: Vec<i64> = finite.iter().map(|&i| lo[i]).collect();
    loop {
        let used: i64 = finite
            .iter()
            .zip(&n)
            .map(|(&i, &x)| x * degs[i] as i64)
            .sum();
        if used <= budget {
            out.push(n.clone());
        }
        let mut c = 0;
        loop {
            if c == n.len() {
                return out;
            }
            let i = finite[c];
            n[c] += 1;
            let used: i64 = finite
                .iter()
                .zip(&n)
                .map(|(&i, &x)| x * degs[i] as i64)
                .sum();
            if used <= budget {
                break;
            }
            n[c] = lo[i];
            c += 1;
        }
    }
}

/// `Σ_γ f(γx)` at the class `d` over `γ = c·Π P^{n_P}·r`, where `r` is 1
/// or, with `with_monoid`, any monic polynomial coprime to S.
fn orbit_sum(set: &PlaceSet, f: &SemiLocalFunction, d: i64, with_monoid: bool) -> Rational {
    let Some(lo) = lower_bounds(set, f) else {
        return Rational::zero();
    };
    let inf = infinity_index(set);
    let inf_f = set.degrees()[inf] as i64;
    debug_assert_eq!(inf_f, 1);
    let rep = set.class_representative(d);
    // x carries valuation rep[inf] at infinity and 0 elsewhere
    let budget = rep[inf] - lo[inf];
    let mut total = Rational::zero();
    let degs = set.degrees();
    let base: i64 = (0..set.len())
        .filter(|&i| i != inf)
        .map(|i| lo[i] * degs[i] as i64)
        .sum();
    let max_deg = if with_monoid { (budget - base).max(0) } else { 0 };
    let inf_val = |n: &[i64], deg_r: i64| -> i64 {
        let degs = set.degrees();
        let finite_weight: i64 = (0..set.len())
            .filter(|&i| i != inf)
            .zip(n)
            .map(|(i, &x)| x * degs[i] as i64)
            .sum();
        rep[inf] - finite_weight - deg_r
    };
    for a in 0..=max_deg {
        let count = if with_monoid {
            coprime_monics(set, a as usize).len() as i64
        } else {
            1
        };
        if count == 0 {
            continue;
        }
        for n in unit_exponents(set, &lo, budget - a) {
            let mut j = Vec::with_capacity(set.len());
            let mut it = n.iter();
            for i in 0..set.len() {
                if i == inf {
                    j.push(inf_val(&n, a));
                } else {
                    j.push(*it.next().expect("one exponent per finite place"));
                }
            }
            let v = f.value(&j);
            if !v.is_zero() {
                total += v * int(count);
            }
        }
    }
    total * int(set.q() as i64 - 1)
}

/// `E_S(f)` on classes `lo..=hi` by summing over the S-units.
pub fn orbit_e(set: &PlaceSet, f: &SemiLocalFunction, lo: i64, hi: i64) -> BTreeMap<i64, Rational> {
    (lo..=hi).map(|d| (d, orbit_sum(set, f, d, false))).collect()
}

/// `Ē_S(f)` on classes `lo..=hi` by summing over the nonzero S-integers.
pub fn orbit_ebar(set: &PlaceSet, f: &SemiLocalFunction, lo: i64, hi: i64) -> BTreeMap<i64, Rational> {
    (lo..=hi).map(|d| (d, orbit_sum(set, f, d, true))).collect()
}

/// Indicator of `π^j O_v^×` for `j < top`, of `π^top O_v` at `j = top`.
fn grid_indicator(place: &Place, j: i64, top: i64) -> ShellFunction {
    if j == top {
        ShellFunction::ball(place.clone(), j)
    } else {
        ShellFunction::shell(place.clone(), j)
    }
}

/// Every grid point of `[lo, hi]^len`.
fn grid(len: usize, lo: i64, hi: i64) -> Vec<Vec<i64>> {
    let mut out = vec![Vec::new()];
    for _ in 0..len {
        out = out
            .into_iter()
            .flat_map(|p| {
                (lo..=hi).map(move |x| {
                    let mut p = p.clone();
                    p.push(x);
                    p
                })
            })
            .collect();
    }
    out
}

/// `Q̃_{S,Λ}` (or `Q̃_{S,Λ,0}`) on the grid `[-depth, depth]^S` by imposing
/// `f(x) = 0 = f̂(x)` for `|x| > q^k` pointwise. Unknowns are the values of
/// `f` on shells, the top index standing for the whole ball.
pub fn brute_force_tilde_q(
    set: &PlaceSet,
    k: i64,
    depth: i64,
    vanishing: bool,
) -> Vec<SemiLocalFunction> {
    let places = set.places();
    let points = grid(set.len(), -depth, depth);
    let pieces: Vec<Vec<ShellFunction>> = points
        .iter()
        .map(|j| {
            places
                .iter()
                .zip(j)
                .map(|(p, &x)| grid_indicator(p, x, depth))
                .collect()
        })
        .collect();
    let fouriers: Vec<Vec<ShellFunction>> = pieces
        .iter()
        .map(|fs| fs.iter().map(ShellFunction::fourier).collect())
        .collect();
    let eval = |fs: &[ShellFunction], j: &[i64]| -> Rational {
        fs.iter().zip(j).map(|(f, &x)| f.value(x)).product()
    };
    let mut rows: linalg::Matrix = Vec::new();
    let n = points.len();
    for j in &points {
        if set.weight(j) < -k {
            rows.push((0..n).map(|i| eval(&pieces[i], j)).collect());
        }
    }
    // f̂ of a piece is supported from -depth - 1 on and constant from depth + 2
    let wide = grid(set.len(), -depth - 3, depth + 3);
    for j in &wide {
        if set.weight(j) < -k {
            let row: Vec<Rational> = (0..n).map(|i| eval(&fouriers[i], j)).collect();
            if row.iter().any(|x| !x.is_zero()) {
                rows.push(row);
            }
        }
    }
    if vanishing {
        rows.push(
            pieces
                .iter()
                .map(|fs| fs.iter().map(|f| f.value_at_zero().clone()).product())
                .collect(),
        );
        rows.push(
            pieces
                .iter()
                .map(|fs| fs.iter().map(ShellFunction::additive_integral).product())
                .collect(),
        );
    }
    linalg::kernel(&rows, n)
        .into_iter()
        .map(|v| {
            v.iter()
                .zip(&pieces)
                .filter(|(c, _)| !c.is_zero())
                .fold(SemiLocalFunction::zero(), |acc, (c, fs)| {
                    acc.add(&SemiLocalFunction::pure(c.clone(), fs.clone()))
                })
        })
        .collect()
}
