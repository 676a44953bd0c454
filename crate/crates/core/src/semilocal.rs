//! The semi-local adele ring A_S = Π_{v∈S} k_v: place-set validation,
//! O_S^×-invariant functions as sums of tensor products of shell functions,
//! and the periodization maps into the class model.

use std::collections::BTreeMap;
use std::fmt;

use num_traits::{One, Zero};

use crate::class_vector::{ClassVector, LaurentPoly};
use crate::error::{Bullet, Error, Result};
use crate::fq::Fq;
use crate::monoid::{MonoidR, RationalGf};
use crate::place::Place;
use crate::scalar::{fmt_rational, int, parse_rational, pow_q, Rational};
use crate::shell::ShellFunction;

/// A validated "large enough" set of places.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PlaceSet {
    field: Fq,
    places: Vec<Place>,
    /// `c_S = q^{log_c}`.
    log_c: i64,
    monoid: MonoidR,
}

fn gcd(a: u32, b: u32) -> u32 {
    if b == 0 {
        a
    } else {
        gcd(b, a % b)
    }
}

/// Checks the largeness conditions and precomputes `c_S`, `q_0` and the
/// Möbius generating function of the quotient monoid.
pub fn validate_place_set(field: &Fq, places: &[Place]) -> Result<PlaceSet> {
    let mut sorted = places.to_vec();
    sorted.sort();
    if let Some(w) = sorted.windows(2).find(|w| w[0] == w[1]) {
        return Err(Error::InvalidPlace(format!("{} listed twice", w[0].spec())));
    }
    if let Some(p) = sorted.iter().find(|p| p.base_q() != field.q()) {
        return Err(Error::InvalidPlace(format!(
            "{} is a place over F_{}, not F_{}",
            p.spec(),
            p.base_q(),
            field.q()
        )));
    }
    if sorted.len() < 2 {
        return Err(Error::InvalidPlaceSet {
            bullet: Bullet::AtLeastTwoPlaces,
            detail: format!("S has {} place(s)", sorted.len()),
        });
    }
    if let Some(p) = enumerate_nonzero_order_outside(&sorted) {
        return Err(Error::InvalidPlaceSet {
            bullet: Bullet::CharacterOrders,
            detail: format!("{p} has n(v) = -2 but is not in S"),
        });
    }
    let g = sorted.iter().fold(0, |acc, p| gcd(acc, p.degree()));
    if g != 1 {
        return Err(Error::InvalidPlaceSet {
            bullet: Bullet::FullValueGroup,
            detail: format!("degrees in S have gcd {g}, so |.|_S misses part of q^Z"),
        });
    }
    // c_S = Π q_v^{1 + n(v)} = q^{Σ f_v (1 + n(v))}
    let log_c: i64 = sorted
        .iter()
        .map(|p| p.degree() as i64 * (1 + p.n()))
        .sum();
    if log_c < 0 {
        return Err(Error::InvalidPlaceSet {
            bullet: Bullet::ConductorBound,
            detail: format!("c_S = q^{log_c} < 1"),
        });
    }
    // Class number one: the representative set is {1}, nothing to check.
    let excluded = sorted
        .iter()
        .filter(|p| !p.is_infinity())
        .map(Place::degree)
        .collect();
    Ok(PlaceSet {
        field: field.clone(),
        places: sorted,
        log_c,
        monoid: MonoidR::new(field.q() as u64, excluded),
    })
}

/// Infinity is the only place with n(v) ≠ 0.
fn enumerate_nonzero_order_outside(sorted: &[Place]) -> Option<String> {
    (!sorted.iter().any(Place::is_infinity)).then(|| "∞".to_string())
}

impl PlaceSet {
    /// Parses whitespace-separated place specifiers such as `inf [0,1]`.
    pub fn parse(text: &str, field: &Fq) -> Result<Self> {
        let places = text
            .split_whitespace()
            .map(|s| Place::parse(s, field))
            .collect::<Result<Vec<_>>>()?;
        validate_place_set(field, &places)
    }

    pub fn field(&self) -> &Fq {
        &self.field
    }

    pub fn q(&self) -> u64 {
        self.field.q() as u64
    }

    /// Generator of the value group `|A_S^×| = q_0^Z`.
    pub fn q0(&self) -> u64 {
        self.q()
    }

    pub fn places(&self) -> &[Place] {
        &self.places
    }

    pub fn len(&self) -> usize {
        self.places.len()
    }

    pub fn is_empty(&self) -> bool {
        self.places.is_empty()
    }

    pub fn degrees(&self) -> Vec<u32> {
        self.places.iter().map(Place::degree).collect()
    }

    pub fn c_s(&self) -> Rational {
        pow_q(self.q(), self.log_c)
    }

    /// `log_q c_S`.
    pub fn log_c_s(&self) -> i64 {
        self.log_c
    }

    pub fn monoid(&self) -> &MonoidR {
        &self.monoid
    }

    pub fn mobius_gf(&self) -> RationalGf {
        self.monoid.mobius_gf()
    }

    pub fn index_of(&self, place: &Place) -> Option<usize> {
        self.places.iter().position(|p| p == place)
    }

    /// `Σ_v f_v j_v`; the class of an idele with valuations `j` is `-weight`.
    pub fn weight(&self, j: &[i64]) -> i64 {
        self.places
            .iter()
            .zip(j)
            .map(|(p, &jv)| p.degree() as i64 * jv)
            .sum()
    }

    /// `Σ_v f_v n(v)` (equals −2).
    pub fn weight_of_orders(&self) -> i64 {
        self.weight(&self.places.iter().map(Place::n).collect::<Vec<_>>())
    }

    /// Valuation vector of the chosen representative of class `d`: the
    /// uniformizer power `π_∞^{-d}` at infinity and 1 elsewhere.
    pub fn class_representative(&self, d: i64) -> Vec<i64> {
        self.places
            .iter()
            .map(|p| if p.is_infinity() { -d } else { 0 })
            .collect()
    }

    /// `A(q^lo, q^hi)`: representatives of the classes `lo <= d <= hi`.
    pub fn representatives(&self, lo: i64, hi: i64) -> Vec<(i64, Vec<i64>)> {
        (lo..=hi).map(|d| (d, self.class_representative(d))).collect()
    }
}

impl fmt::Display for PlaceSet {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let specs: Vec<String> = self.places.iter().map(Place::spec).collect();
        f.write_str(&specs.join(" "))
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Term {
    pub coeff: Rational,
    pub factors: Vec<ShellFunction>,
}

/// `Σ_i c_i ⊗_v f_{i,v}` with one factor per place of S, in the order of S.
#[derive(Clone, Debug, PartialEq, Eq, Default)]
pub struct SemiLocalFunction {
    terms: Vec<Term>,
}

/// Ball-coordinate form: `f = Σ_m b[m] ⊗_v 1_{π_v^{m_v} O_v}`.
pub type BallCoefficients = BTreeMap<Vec<i64>, Rational>;

impl SemiLocalFunction {
    pub fn zero() -> Self {
        SemiLocalFunction { terms: Vec::new() }
    }

    pub fn pure(coeff: Rational, factors: Vec<ShellFunction>) -> Self {
        SemiLocalFunction {
            terms: vec![Term { coeff, factors }],
        }
    }

    pub fn from_terms(terms: Vec<Term>) -> Self {
        SemiLocalFunction { terms }
    }

    pub fn terms(&self) -> &[Term] {
        &self.terms
    }

    /// Verifies that every term has one factor per place of `set`, in order.
    pub fn check_places(&self, set: &PlaceSet) -> Result<()> {
        for t in &self.terms {
            if t.factors.len() != set.len()
                || t.factors.iter().zip(set.places()).any(|(f, p)| f.place() != p)
            {
                return Err(Error::Precondition(format!(
                    "term does not match the places {set}"
                )));
            }
        }
        Ok(())
    }

    /// `1_{O_S^×}` translated to the shell vector `j`.
    pub fn unit_orbit(set: &PlaceSet, j: &[i64]) -> Self {
        SemiLocalFunction::pure(
            Rational::one(),
            set.places()
                .iter()
                .zip(j)
                .map(|(p, &jv)| ShellFunction::shell(p.clone(), jv))
                .collect(),
        )
    }

    /// `⊗_v 1_{π_v^{m_v} O_v}`.
    pub fn ball_product(set: &PlaceSet, m: &[i64]) -> Self {
        SemiLocalFunction::pure(
            Rational::one(),
            set.places()
                .iter()
                .zip(m)
                .map(|(p, &mv)| ShellFunction::ball(p.clone(), mv))
                .collect(),
        )
    }

    pub fn from_balls(set: &PlaceSet, balls: &BallCoefficients) -> Self {
        SemiLocalFunction {
            terms: balls
                .iter()
                .filter(|(_, c)| !c.is_zero())
                .map(|(m, c)| Term {
                    coeff: c.clone(),
                    factors: set
                        .places()
                        .iter()
                        .zip(m)
                        .map(|(p, &mv)| ShellFunction::ball(p.clone(), mv))
                        .collect(),
                })
                .collect(),
        }
    }

    /// Expands every term in ball coordinates; the result is canonical.
    pub fn ball_coefficients(&self) -> BallCoefficients {
        let mut out: BallCoefficients = BTreeMap::new();
        for t in &self.terms {
            let mut partial: Vec<(Vec<i64>, Rational)> = vec![(Vec::new(), t.coeff.clone())];
            for f in &t.factors {
                let balls = f.to_balls();
                let mut next = Vec::with_capacity(partial.len() * balls.len());
                for (m, c) in &partial {
                    for (mv, b) in &balls {
                        let mut m2 = m.clone();
                        m2.push(*mv);
                        next.push((m2, c * b));
                    }
                }
                partial = next;
            }
            for (m, c) in partial {
                *out.entry(m).or_insert_with(Rational::zero) += c;
            }
        }
        out.retain(|_, c| !c.is_zero());
        out
    }

    /// Rewrites as a sum of ball products without linear redundancy.
    pub fn canonical(&self, set: &PlaceSet) -> Self {
        SemiLocalFunction::from_balls(set, &self.ball_coefficients())
    }

    /// Equality as functions on A_S.
    pub fn same_function(&self, other: &Self) -> bool {
        self.sub(other).ball_coefficients().is_empty()
    }

    pub fn add(&self, other: &Self) -> Self {
        let mut terms = self.terms.clone();
        terms.extend(other.terms.iter().cloned());
        SemiLocalFunction { terms }
    }

    pub fn scale(&self, c: &Rational) -> Self {
        SemiLocalFunction {
            terms: self
                .terms
                .iter()
                .map(|t| Term {
                    coeff: &t.coeff * c,
                    factors: t.factors.clone(),
                })
                .collect(),
        }
    }

    pub fn sub(&self, other: &Self) -> Self {
        self.add(&other.scale(&-Rational::one()))
    }

    /// Value at an idele with valuation vector `j`.
    pub fn value(&self, j: &[i64]) -> Rational {
        self.terms
            .iter()
            .map(|t| {
                t.factors
                    .iter()
                    .zip(j)
                    .fold(t.coeff.clone(), |acc, (f, &jv)| acc * f.value(jv))
            })
            .sum()
    }

    /// `f(0)`.
    pub fn value_at_zero(&self) -> Rational {
        self.terms
            .iter()
            .map(|t| {
                t.factors
                    .iter()
                    .fold(t.coeff.clone(), |acc, f| acc * f.value_at_zero())
            })
            .sum()
    }

    /// Factorwise Fourier transform.
    pub fn fourier(&self) -> Self {
        SemiLocalFunction {
            terms: self
                .terms
                .iter()
                .map(|t| Term {
                    coeff: t.coeff.clone(),
                    factors: t.factors.iter().map(ShellFunction::fourier).collect(),
                })
                .collect(),
        }
    }

    /// `f̂(0) = ∫ f dx`.
    pub fn fourier_at_zero(&self) -> Rational {
        self.terms
            .iter()
            .map(|t| {
                t.factors
                    .iter()
                    .fold(t.coeff.clone(), |acc, f| acc * f.additive_integral())
            })
            .sum()
    }

    /// The functionals `l(f) = f(0)` and `l̂(f) = f̂(0)`.
    pub fn functionals(&self) -> (Rational, Rational) {
        (self.value_at_zero(), self.fourier_at_zero())
    }

    /// Per place, the range `[lo, hi]` outside of which the function is zero
    /// (below `lo`) or constant in that coordinate (at and above `hi`).
    pub fn valuation_box(&self, places: usize) -> Option<Vec<(i64, i64)>> {
        let mut out: Option<Vec<(i64, i64)>> = None;
        for t in &self.terms {
            if t.coeff.is_zero() || t.factors.iter().any(ShellFunction::is_zero) {
                continue;
            }
            let b: Vec<(i64, i64)> = t.factors.iter().map(|f| (f.j_min(), f.j_tail())).collect();
            out = Some(match out {
                None => b,
                Some(prev) => prev
                    .iter()
                    .zip(&b)
                    .map(|(&(a, c), &(x, y))| (a.min(x), c.max(y)))
                    .collect(),
            });
        }
        debug_assert!(out.as_ref().is_none_or(|b| b.len() == places));
        out
    }

    /// True iff `f(x) = 0` at every idele with `|x| > q^k`.
    ///
    /// Clamping a coordinate down to the box lowers the weight without
    /// changing the value, so checking the finite box is enough.
    pub fn vanishes_above(&self, set: &PlaceSet, k: i64) -> bool {
        let Some(bx) = self.valuation_box(set.len()) else {
            return true;
        };
        let mut j: Vec<i64> = bx.iter().map(|b| b.0).collect();
        loop {
            if set.weight(&j) < -k && !self.value(&j).is_zero() {
                return false;
            }
            let mut i = 0;
            loop {
                if i == j.len() {
                    return true;
                }
                if j[i] < bx[i].1 {
                    j[i] += 1;
                    break;
                }
                j[i] = bx[i].0;
                i += 1;
            }
        }
    }

    /// The two support predicates defining `Q̃_{S,Λ}` for `Λ = q^k`:
    /// vanishing of `f` and of `f̂` above `Λ`.
    pub fn product_norm_support_check(&self, set: &PlaceSet, k: i64) -> (bool, bool) {
        (
            self.vanishes_above(set, k),
            self.fourier().vanishes_above(set, k),
        )
    }

    /// Weighted `E_S(f)`: `(q-1)·Σ_{weight(j) = -d} f(j)` at class `d`.
    pub fn periodize_e(&self, set: &PlaceSet) -> ClassVector {
        ew_from_balls(set, &self.ball_coefficients())
    }

    /// Weighted `Ē_S(f)`, the periodization over `k_S^0`: `E_S(f)` convolved
    /// with the counts of monic polynomials coprime to S.
    pub fn periodize_ebar(&self, set: &PlaceSet) -> Result<ClassVector> {
        ebar_from_e(set, &self.periodize_e(set))
    }

    pub fn parse(text: &str, field: &Fq) -> Result<Self> {
        let mut terms = Vec::new();
        for (lineno, line) in text.lines().enumerate() {
            let line = line.trim();
            if line.is_empty() || line.starts_with('#') {
                continue;
            }
            let mut parts = line.split("::");
            let coeff = parts.next().unwrap_or_default();
            let coeff = parse_rational(coeff).map_err(|_| {
                Error::parse(format!("line {}", lineno + 1), format!("bad coefficient {coeff:?}"))
            })?;
            let factors = parts
                .map(|s| ShellFunction::parse(s, field))
                .collect::<Result<Vec<_>>>()?;
            if factors.is_empty() {
                return Err(Error::parse(
                    format!("line {}", lineno + 1),
                    "a term needs at least one factor",
                ));
            }
            if factors.len() != terms.first().map_or(factors.len(), |t: &Term| t.factors.len()) {
                return Err(Error::parse(
                    format!("line {}", lineno + 1),
                    "terms have different numbers of factors",
                ));
            }
            terms.push(Term { coeff, factors });
        }
        Ok(SemiLocalFunction { terms })
    }
}

/// Weighted `E_S` of `Σ_m b[m] ⊗_v 1_{π^{m_v} O_v}`. Each ball product
/// contributes `(q-1) x^{weight(m)} / Π_v (1 - x^{f_v})`.
pub fn ew_from_balls(set: &PlaceSet, balls: &BallCoefficients) -> ClassVector {
    let mut num: BTreeMap<i64, Rational> = BTreeMap::new();
    for (m, b) in balls {
        *num.entry(set.weight(m)).or_insert_with(Rational::zero) += b;
    }
    let q = set.q();
    let num = LaurentPoly::from_map(&num).scale(&int(q as i64 - 1));
    ClassVector::from_gf(q, num, set.degrees())
}

/// `Ē = Z·E` with `Z = Π_{P∈S}(1 - x^{deg P}) / (1 - qx)`.
pub fn ebar_from_e(set: &PlaceSet, e: &ClassVector) -> Result<ClassVector> {
    let q = set.q();
    let excluded = LaurentPoly::new(0, vec![Rational::one()]);
    let excluded = set
        .monoid()
        .excluded_degrees()
        .iter()
        .fold(excluded, |acc, &f| acc.mul(&LaurentPoly::one_minus_power(f)));
    let one_minus_qx = LaurentPoly::new(0, vec![Rational::one(), -int(q as i64)]);
    e.mul_poly(&excluded).div_poly(&one_minus_qx).ok_or_else(|| {
        Error::NotSquareIntegrable("f̂(0) ≠ 0, so the k_S^0-orbit sums grow like |x|^{-1}".into())
    })
}

/// `E = M·Ē` with `M = (1 - qx) / Π_{P∈S}(1 - x^{deg P})`.
pub fn e_from_ebar(set: &PlaceSet, ebar: &ClassVector) -> ClassVector {
    let q = set.q();
    let one_minus_qx = LaurentPoly::new(0, vec![Rational::one(), -int(q as i64)]);
    ebar.mul_poly(&one_minus_qx)
        .div_one_minus_powers(set.monoid().excluded_degrees())
}

/// `f_{1,Λ} = (q-1)^{-1} Σ_{a ∈ A(c_S/Λ, Λ)} 1_{a O_S^×}` for `Λ = q^k`.
pub fn f_one(set: &PlaceSet, k: i64) -> SemiLocalFunction {
    let inv = Rational::new(1.into(), (set.q() as i64 - 1).into());
    set.representatives(set.log_c_s() - k, k)
        .iter()
        .fold(SemiLocalFunction::zero(), |acc, (_, j)| {
            acc.add(&SemiLocalFunction::unit_orbit(set, j).scale(&inv))
        })
}

impl fmt::Display for SemiLocalFunction {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for (i, t) in self.terms.iter().enumerate() {
            if i > 0 {
                writeln!(f)?;
            }
            write!(f, "{}", fmt_rational(&t.coeff))?;
            for factor in &t.factors {
                write!(f, " :: {factor}")?;
            }
        }
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::place::enumerate_places;
    use crate::scalar::rat;

    fn setup(specs: &str) -> PlaceSet {
        let f = Fq::new(2).unwrap();
        PlaceSet::parse(specs, &f).unwrap()
    }

    #[test]
    fn place_set_validation() {
        let f = Fq::new(2).unwrap();
        let s = setup("inf [0,1]");
        assert_eq!(s.c_s(), int(1));
        assert_eq!(s.q0(), 2);
        assert_eq!(s.weight_of_orders(), -2);
        let err = PlaceSet::parse("[0,1] [1,1]", &f).unwrap_err();
        assert!(matches!(err, Error::InvalidPlaceSet { bullet: Bullet::CharacterOrders, .. }));
        let err = PlaceSet::parse("inf", &f).unwrap_err();
        assert!(matches!(err, Error::InvalidPlaceSet { bullet: Bullet::AtLeastTwoPlaces, .. }));
        assert!(PlaceSet::parse("inf inf", &f).is_err());
        assert_eq!(setup("inf [0,1] [1,1]").c_s(), int(2));
        let all = enumerate_places(&f, 2);
        assert_eq!(validate_place_set(&f, &all).unwrap().log_c_s(), 3);
    }

    #[test]
    fn functionals_of_generators() {
        let s = setup("inf [0,1]");
        let units = SemiLocalFunction::unit_orbit(&s, &[0, 0]);
        let (f0, fh0) = units.functionals();
        assert_eq!(f0, int(0));
        // (1 - 1/2)·2 at infinity times (1 - 1/2) at t
        assert_eq!(fh0, rat(1, 2));
        let balls = SemiLocalFunction::ball_product(&s, &[0, 0]);
        assert_eq!(balls.value_at_zero(), int(1));
    }

    #[test]
    fn ebar_of_unit_orbit() {
        let s = setup("inf [0,1]");
        let units = SemiLocalFunction::unit_orbit(&s, &[0, 0]);
        let e = units.periodize_e(&s);
        assert!(e.is_finite());
        assert_eq!(e.value(0), int(1));
        assert_eq!(e.value(1), int(0));
        // f̂(0) ≠ 0: the k_S^0-periodization is not square integrable
        assert!(matches!(
            units.periodize_ebar(&s),
            Err(Error::NotSquareIntegrable(_))
        ));
    }

    #[test]
    fn f_one_is_class_indicator() {
        let s = setup("inf [0,1]");
        for k in 0..4 {
            let e = f_one(&s, k).periodize_e(&s);
            for d in -k - 2..=k + 2 {
                let expect = if d.abs() <= k { int(1) } else { int(0) };
                assert_eq!(e.value(d), expect);
            }
        }
    }

    #[test]
    fn support_predicate() {
        let s = setup("inf [0,1]");
        let units = SemiLocalFunction::unit_orbit(&s, &[0, 0]);
        assert!(units.vanishes_above(&s, 0));
        // |a| = q^{k+1} exceeds Λ = q^k
        let far = SemiLocalFunction::unit_orbit(&s, &s.class_representative(3));
        assert!(!far.vanishes_above(&s, 2));
        assert!(far.vanishes_above(&s, 3));
        let balls = SemiLocalFunction::ball_product(&s, &[0, 0]);
        let (on_f, on_hat) = balls.product_norm_support_check(&s, 0);
        assert!(on_f);
        // f̂ = 2·1_{π_∞^2 O_∞} ⊗ 1_{O_t} lives on |x| <= q^{-2}
        assert!(on_hat);
        let small = SemiLocalFunction::ball_product(&s, &[3, 0]);
        assert_eq!(small.product_norm_support_check(&s, 0), (true, false));
        assert_eq!(small.product_norm_support_check(&s, 1), (true, true));
    }

    #[test]
    fn text_round_trip() {
        let s = setup("inf [0,1]");
        let f = SemiLocalFunction::unit_orbit(&s, &[1, -2])
            .scale(&rat(3, 4))
            .add(&SemiLocalFunction::ball_product(&s, &[0, 1]));
        let text = f.to_string();
        let back = SemiLocalFunction::parse(&text, s.field()).unwrap();
        assert_eq!(back, f);
        back.check_places(&s).unwrap();
        assert!(SemiLocalFunction::parse("1/2", s.field()).is_err());
        assert!(SemiLocalFunction::parse("x :: inf; 0; []; tail 1", s.field()).is_err());
    }
}
