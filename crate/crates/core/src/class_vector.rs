//! Functions on the graded class set, in the weighted L² model.
//!
//! A class is indexed by `d = log_q |x|`. Vectors are stored through their
//! generating function in the weight `n = -d`:
//! `Σ_n v(-n) x^n = num(x) / Π_i (1 - x^{den[i]})`,
//! where `num` is a Laurent polynomial. Such a vector vanishes for large
//! classes and has a quasi-polynomial tail towards small classes. The inner
//! product is `Σ_d q^d u(d) w(d)` in log-q units.

use std::collections::BTreeMap;
use std::fmt;

use num_integer::Integer;
use num_traits::{One, Zero};

use crate::error::{Error, Result};
use crate::scalar::{fmt_rational, int, pow_q, GradedScalar, Rational};

/// `Σ_i coeffs[i] x^{low + i}` with no zero coefficient at either end.
#[derive(Clone, Debug, PartialEq, Eq, Hash, Default)]
pub struct LaurentPoly {
    low: i64,
    coeffs: Vec<Rational>,
}

impl LaurentPoly {
    pub fn new(low: i64, coeffs: Vec<Rational>) -> Self {
        let mut p = LaurentPoly { low, coeffs };
        p.normalize();
        p
    }

    fn normalize(&mut self) {
        while self.coeffs.last().is_some_and(Zero::is_zero) {
            self.coeffs.pop();
        }
        let lead = self.coeffs.iter().take_while(|c| c.is_zero()).count();
        if lead > 0 {
            self.coeffs.drain(..lead);
            self.low += lead as i64;
        }
        if self.coeffs.is_empty() {
            self.low = 0;
        }
    }

    pub fn zero() -> Self {
        LaurentPoly::default()
    }

    pub fn monomial(n: i64, c: Rational) -> Self {
        LaurentPoly::new(n, vec![c])
    }

    pub fn from_map(map: &BTreeMap<i64, Rational>) -> Self {
        let Some((&lo, _)) = map.iter().next() else {
            return LaurentPoly::zero();
        };
        let hi = *map.keys().next_back().unwrap();
        let coeffs = (lo..=hi)
            .map(|n| map.get(&n).cloned().unwrap_or_else(Rational::zero))
            .collect();
        LaurentPoly::new(lo, coeffs)
    }

    /// `1 - x^f`.
    pub fn one_minus_power(f: u32) -> Self {
        let mut c = vec![Rational::zero(); f as usize + 1];
        c[0] = Rational::one();
        c[f as usize] = -Rational::one();
        LaurentPoly::new(0, c)
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    pub fn low(&self) -> i64 {
        self.low
    }

    /// Largest exponent (equals `low - 1` for the zero polynomial).
    pub fn high(&self) -> i64 {
        self.low + self.coeffs.len() as i64 - 1
    }

    pub fn coeff(&self, n: i64) -> Rational {
        if n < self.low || n > self.high() {
            Rational::zero()
        } else {
            self.coeffs[(n - self.low) as usize].clone()
        }
    }

    pub fn terms(&self) -> impl Iterator<Item = (i64, &Rational)> {
        self.coeffs
            .iter()
            .enumerate()
            .filter(|(_, c)| !c.is_zero())
            .map(move |(i, c)| (self.low + i as i64, c))
    }

    pub fn add(&self, other: &Self) -> Self {
        if self.is_zero() {
            return other.clone();
        }
        if other.is_zero() {
            return self.clone();
        }
        let lo = self.low.min(other.low);
        let hi = self.high().max(other.high());
        LaurentPoly::new(lo, (lo..=hi).map(|n| self.coeff(n) + other.coeff(n)).collect())
    }

    pub fn scale(&self, c: &Rational) -> Self {
        LaurentPoly::new(self.low, self.coeffs.iter().map(|x| x * c).collect())
    }

    pub fn mul(&self, other: &Self) -> Self {
        if self.is_zero() || other.is_zero() {
            return LaurentPoly::zero();
        }
        let mut out = vec![Rational::zero(); self.coeffs.len() + other.coeffs.len() - 1];
        for (i, a) in self.coeffs.iter().enumerate() {
            if a.is_zero() {
                continue;
            }
            for (j, b) in other.coeffs.iter().enumerate() {
                out[i + j] += a * b;
            }
        }
        LaurentPoly::new(self.low + other.low, out)
    }

    /// Exact division by a polynomial with nonzero constant term; `None` when
    /// the division leaves a remainder.
    pub fn div_exact(&self, divisor: &LaurentPoly) -> Option<Self> {
        if self.is_zero() {
            return Some(LaurentPoly::zero());
        }
        let d0 = divisor.coeff(divisor.low);
        debug_assert!(!divisor.is_zero());
        let dlen = divisor.coeffs.len();
        if self.coeffs.len() < dlen {
            return None;
        }
        let mut rem = self.coeffs.clone();
        let qlen = rem.len() - dlen + 1;
        let mut quot = vec![Rational::zero(); qlen];
        for i in 0..qlen {
            if rem[i].is_zero() {
                continue;
            }
            let c = &rem[i] / &d0;
            for (k, dk) in divisor.coeffs.iter().enumerate() {
                rem[i + k] -= &c * dk;
            }
            quot[i] = c;
        }
        rem.iter()
            .all(Zero::is_zero)
            .then(|| LaurentPoly::new(self.low - divisor.low, quot))
    }

    pub fn eval(&self, x: &Rational) -> Rational {
        let mut acc = Rational::zero();
        for c in self.coeffs.iter().rev() {
            acc = acc * x + c;
        }
        acc * pow_rational(x, self.low)
    }
}

fn pow_rational(x: &Rational, e: i64) -> Rational {
    let p = num_traits::pow(x.clone(), e.unsigned_abs() as usize);
    if e >= 0 {
        p
    } else {
        p.recip()
    }
}

/// A function on classes in the weighted model.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct ClassVector {
    q: u64,
    num: LaurentPoly,
    /// Sorted degrees f of the denominator factors `1 - x^f`.
    den: Vec<u32>,
}

impl ClassVector {
    pub fn from_gf(q: u64, num: LaurentPoly, mut den: Vec<u32>) -> Self {
        den.sort_unstable();
        let mut v = ClassVector { q, num, den };
        v.reduce();
        v
    }

    pub fn zero(q: u64) -> Self {
        ClassVector::from_gf(q, LaurentPoly::zero(), Vec::new())
    }

    /// A finitely supported vector from its values `d -> v(d)`.
    pub fn from_values(q: u64, values: &BTreeMap<i64, Rational>) -> Self {
        let by_weight: BTreeMap<i64, Rational> =
            values.iter().map(|(d, v)| (-d, v.clone())).collect();
        ClassVector::from_gf(q, LaurentPoly::from_map(&by_weight), Vec::new())
    }

    /// The unit vector at class `d`.
    pub fn unit(q: u64, d: i64) -> Self {
        ClassVector::from_gf(q, LaurentPoly::monomial(-d, Rational::one()), Vec::new())
    }

    /// Cancels denominator factors that divide the numerator.
    fn reduce(&mut self) {
        if self.num.is_zero() {
            self.den.clear();
            return;
        }
        let mut kept = Vec::with_capacity(self.den.len());
        for &f in self.den.iter().rev() {
            match self.num.div_exact(&LaurentPoly::one_minus_power(f)) {
                Some(n) => self.num = n,
                None => kept.push(f),
            }
        }
        kept.sort_unstable();
        self.den = kept;
    }

    pub fn q(&self) -> u64 {
        self.q
    }

    pub fn numerator(&self) -> &LaurentPoly {
        &self.num
    }

    pub fn denominator(&self) -> &[u32] {
        &self.den
    }

    pub fn is_zero(&self) -> bool {
        self.num.is_zero()
    }

    pub fn is_finite(&self) -> bool {
        self.den.is_empty()
    }

    /// Largest class carrying a nonzero value, if any.
    pub fn max_class(&self) -> Option<i64> {
        (!self.is_zero()).then(|| -self.num.low())
    }

    /// Values at weights `n` in `lo..hi` (class `-n`).
    pub fn weight_values(&self, lo: i64, hi: i64) -> Vec<Rational> {
        if hi <= lo {
            return Vec::new();
        }
        let start = lo.min(self.num.low());
        let len = (hi - start) as usize;
        let mut s: Vec<Rational> = (start..hi).map(|n| self.num.coeff(n)).collect();
        for &f in &self.den {
            let f = f as usize;
            for i in f..len {
                let prev = s[i - f].clone();
                s[i] += prev;
            }
        }
        s.split_off((lo - start) as usize)
    }

    /// Value at class `d`.
    pub fn value(&self, d: i64) -> Rational {
        self.weight_values(-d, -d + 1).pop().unwrap()
    }

    /// Values on the classes `lo..=hi`.
    pub fn class_values(&self, lo: i64, hi: i64) -> BTreeMap<i64, Rational> {
        if hi < lo {
            return BTreeMap::new();
        }
        let vals = self.weight_values(-hi, -lo + 1);
        (0..vals.len())
            .map(|i| (hi - i as i64, vals[i].clone()))
            .collect()
    }

    fn common_den(&self, other: &Self) -> Vec<u32> {
        let mut out = Vec::new();
        let (mut i, mut j) = (0, 0);
        while i < self.den.len() || j < other.den.len() {
            match (self.den.get(i), other.den.get(j)) {
                (Some(a), Some(b)) if a == b => {
                    out.push(*a);
                    i += 1;
                    j += 1;
                }
                (Some(a), Some(b)) if a < b => {
                    out.push(*a);
                    i += 1;
                }
                (Some(a), None) => {
                    out.push(*a);
                    i += 1;
                }
                (_, Some(b)) => {
                    out.push(*b);
                    j += 1;
                }
                (None, None) => unreachable!(),
            }
        }
        out
    }

    /// Numerator over a denominator that contains the own one as a sub-multiset.
    pub fn numerator_over(&self, den: &[u32]) -> Result<LaurentPoly> {
        let mut missing = den.to_vec();
        for f in &self.den {
            let pos = missing.iter().position(|g| g == f).ok_or_else(|| {
                Error::MalformedTail(format!("denominator {:?} does not contain {f}", den))
            })?;
            missing.remove(pos);
        }
        Ok(missing.iter().fold(self.num.clone(), |acc, &f| {
            acc.mul(&LaurentPoly::one_minus_power(f))
        }))
    }

    fn check_q(&self, other: &Self) -> Result<()> {
        if self.q == other.q {
            Ok(())
        } else {
            Err(Error::Precondition(format!(
                "class vectors over q = {} and q = {}",
                self.q, other.q
            )))
        }
    }

    pub fn add(&self, other: &Self) -> Result<Self> {
        self.check_q(other)?;
        let den = self.common_den(other);
        let num = self.numerator_over(&den)?.add(&other.numerator_over(&den)?);
        Ok(ClassVector::from_gf(self.q, num, den))
    }

    pub fn scale(&self, c: &Rational) -> Self {
        ClassVector::from_gf(self.q, self.num.scale(c), self.den.clone())
    }

    pub fn sub(&self, other: &Self) -> Result<Self> {
        self.add(&other.scale(&-Rational::one()))
    }

    /// Multiplies the generating function by a Laurent polynomial.
    pub fn mul_poly(&self, p: &LaurentPoly) -> Self {
        ClassVector::from_gf(self.q, self.num.mul(p), self.den.clone())
    }

    /// Divides the generating function exactly by `p`, which must have a
    /// nonzero constant term.
    pub fn div_poly(&self, p: &LaurentPoly) -> Option<Self> {
        let num = self.num.div_exact(p)?;
        Some(ClassVector::from_gf(self.q, num, self.den.clone()))
    }

    /// Multiplies the generating function by `1 / Π(1 - x^f)`.
    pub fn div_one_minus_powers(&self, degrees: &[u32]) -> Self {
        let mut den = self.den.clone();
        den.extend_from_slice(degrees);
        ClassVector::from_gf(self.q, self.num.clone(), den)
    }

    /// Rewrites over the denominator `(1 - x^L)^m`.
    fn over_power(&self, l: u32) -> (LaurentPoly, usize) {
        let num = self.den.iter().fold(self.num.clone(), |acc, &f| {
            let mut c = vec![Rational::zero(); (l - f) as usize + 1];
            for i in (0..=(l - f) as usize).step_by(f as usize) {
                c[i] = Rational::one();
            }
            acc.mul(&LaurentPoly::new(0, c))
        });
        (num, self.den.len())
    }

    /// `Σ_d q^d u(d) w(d)` in log-q units, with the tail summed in closed form.
    pub fn inner_product(&self, other: &Self) -> Result<GradedScalar> {
        self.check_q(other)?;
        let q = self.q;
        if self.is_zero() || other.is_zero() {
            return Ok(GradedScalar::units(Rational::zero()));
        }
        let s = self.num.low().max(other.num.low());
        if self.is_finite() || other.is_finite() {
            let hi = if self.is_finite() && other.is_finite() {
                self.num.high().min(other.num.high())
            } else if self.is_finite() {
                self.num.high()
            } else {
                other.num.high()
            };
            if hi < s {
                return Ok(GradedScalar::units(Rational::zero()));
            }
            let u = self.weight_values(s, hi + 1);
            let w = other.weight_values(s, hi + 1);
            let total: Rational = u
                .iter()
                .zip(&w)
                .enumerate()
                .map(|(i, (a, b))| a * b * pow_q(q, -(s + i as i64)))
                .sum();
            return Ok(GradedScalar::units(total));
        }
        let l = self
            .den
            .iter()
            .chain(&other.den)
            .fold(1u32, |acc, &f| acc.lcm(&f));
        let (nu, mu) = self.over_power(l);
        let (nw, mw) = other.over_power(l);
        let m = mu + mw - 1;
        // From n1 on, the termwise product is a quasi-polynomial of period l
        // and degree < m, hence its series is z^{n1} R(z) / (1 - z^l)^m.
        let n1 = nu.high().max(nw.high()).max(s);
        let end = n1 + (m as i64) * (l as i64);
        let u = self.weight_values(s, end);
        let w = other.weight_values(s, end);
        let c: Vec<Rational> = u.iter().zip(&w).map(|(a, b)| a * b).collect();
        let series = LaurentPoly::new(0, c);
        let den_power = (0..m).fold(LaurentPoly::monomial(0, Rational::one()), |acc, _| {
            acc.mul(&LaurentPoly::one_minus_power(l))
        });
        let prod = series.mul(&den_power);
        let cut = (end - s) as usize;
        let truncated = LaurentPoly::new(0, (0..cut as i64).map(|n| prod.coeff(n)).collect());
        let z = Rational::new(1.into(), q.into());
        let den_value = pow_rational(&(Rational::one() - pow_q(q, -(l as i64))), m as i64);
        let total = pow_q(q, -s) * truncated.eval(&z) / den_value;
        Ok(GradedScalar::units(total))
    }

    pub fn norm_squared(&self) -> Result<GradedScalar> {
        self.inner_product(self)
    }

    /// Floating-point values at weights `lo..hi`.
    pub fn weight_values_f64(&self, lo: i64, hi: i64) -> Vec<f64> {
        self.weight_values(lo, hi)
            .iter()
            .map(crate::scalar::to_f64)
            .collect()
    }
}

impl fmt::Display for ClassVector {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let terms: Vec<String> = self
            .num
            .terms()
            .map(|(n, c)| format!("{}·x^{}", fmt_rational(c), n))
            .collect();
        let num = if terms.is_empty() {
            "0".to_string()
        } else {
            terms.join(" + ")
        };
        if self.den.is_empty() {
            write!(f, "{num}")
        } else {
            let den: Vec<String> = self.den.iter().map(|d| format!("(1-x^{d})")).collect();
            write!(f, "({num}) / {}", den.join(""))
        }
    }
}

/// A finitely supported test function on classes; `h(e)` is its value on
/// the class `e = log_q |y|`.
#[derive(Clone, Debug, PartialEq, Eq, Default)]
pub struct HFunction {
    values: BTreeMap<i64, Rational>,
}

impl HFunction {
    pub fn new(values: BTreeMap<i64, Rational>) -> Self {
        HFunction {
            values: values.into_iter().filter(|(_, v)| !v.is_zero()).collect(),
        }
    }

    /// `c·δ_e`.
    pub fn delta(e: i64, c: Rational) -> Self {
        HFunction::new(BTreeMap::from([(e, c)]))
    }

    pub fn values(&self) -> &BTreeMap<i64, Rational> {
        &self.values
    }

    pub fn get(&self, e: i64) -> Rational {
        self.values.get(&e).cloned().unwrap_or_else(Rational::zero)
    }

    /// Value at the identity class.
    pub fn at_one(&self) -> Rational {
        self.get(0)
    }

    /// Largest |e| in the support (0 for the zero function).
    pub fn radius(&self) -> i64 {
        self.values.keys().map(|e| e.abs()).max().unwrap_or(0)
    }

    /// `h̆(e) = q^{e} h(-e)`, from `h̆(x) = |x| h(x^{-1})`.
    pub fn breve(&self, q: u64) -> Self {
        HFunction::new(
            self.values
                .iter()
                .map(|(e, v)| (-e, v * pow_q(q, -*e)))
                .collect(),
        )
    }

    /// `H(x) = Σ_e h(e) x^e`: the multiplier realizing U(h) on generating functions.
    pub fn multiplier(&self) -> LaurentPoly {
        LaurentPoly::from_map(&self.values)
    }

    /// `U(h)φ(d) = Σ_e h(e) φ(d + e)`; the result carries one log-q unit.
    pub fn apply(&self, phi: &ClassVector) -> ClassVector {
        phi.mul_poly(&self.multiplier())
    }
}

/// Convenience for tests and configs: `Σ c_e δ_e` from integer pairs.
pub fn h_from_pairs(pairs: &[(i64, i64)]) -> HFunction {
    HFunction::new(pairs.iter().map(|&(e, c)| (e, int(c))).collect())
}
