//! Exact rationals carrying a power of the formal unit `log q`.
//!
//! Multiplicative volumes, inner products and traces in this crate are all
//! homogeneous in `log q`. Rather than evaluating the logarithm, a
//! [`GradedScalar`] stores the rational coefficient together with the
//! exponent of the unit, so `(3, 1)` reads as `3 log q`.

use std::cmp::Ordering;
use std::fmt;
use std::ops::{Mul, Neg};

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};

use crate::error::{Error, Result};

pub type Rational = BigRational;

pub fn rat(num: i64, den: i64) -> Rational {
    Rational::new(BigInt::from(num), BigInt::from(den))
}

pub fn int(n: i64) -> Rational {
    Rational::from_integer(BigInt::from(n))
}

/// `base^exp` for any integer exponent.
pub fn pow_q(base: u64, exp: i64) -> Rational {
    let b = BigInt::from(base);
    let p = num_traits::pow(b, exp.unsigned_abs() as usize);
    if exp >= 0 {
        Rational::from_integer(p)
    } else {
        Rational::new(BigInt::one(), p)
    }
}

/// Formats as `num/den`, always with an explicit denominator.
pub fn fmt_rational(r: &Rational) -> String {
    format!("{}/{}", r.numer(), r.denom())
}

pub fn parse_rational(s: &str) -> Result<Rational> {
    let s = s.trim();
    let bad = || Error::parse(s.to_string(), "expected an integer or num/den");
    let (n, d) = match s.split_once('/') {
        Some((n, d)) => (n.trim(), d.trim()),
        None => (s, "1"),
    };
    let n: BigInt = n.parse().map_err(|_| bad())?;
    let d: BigInt = d.parse().map_err(|_| bad())?;
    if d.is_zero() {
        return Err(Error::parse(s.to_string(), "zero denominator"));
    }
    Ok(Rational::new(n, d))
}

pub fn to_f64(r: &Rational) -> f64 {
    r.to_f64().unwrap_or_else(|| {
        // Ratios of huge integers: scale down by bit length first.
        let nb = r.numer().bits() as i64;
        let db = r.denom().bits() as i64;
        let shift = (nb.max(db) - 900).max(0) as usize;
        let n = (r.numer() >> shift).to_f64().unwrap_or(f64::NAN);
        let d = (r.denom() >> shift).to_f64().unwrap_or(f64::NAN);
        n / d
    })
}

#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct GradedScalar {
    value: Rational,
    degree: i32,
}

impl GradedScalar {
    pub fn new(value: Rational, degree: i32) -> Self {
        GradedScalar { value, degree }
    }

    pub fn zero(degree: i32) -> Self {
        GradedScalar::new(Rational::zero(), degree)
    }

    /// A plain rational (degree 0).
    pub fn scalar(value: Rational) -> Self {
        GradedScalar::new(value, 0)
    }

    /// `value · log q`.
    pub fn units(value: Rational) -> Self {
        GradedScalar::new(value, 1)
    }

    pub fn value(&self) -> &Rational {
        &self.value
    }

    pub fn into_value(self) -> Rational {
        self.value
    }

    pub fn degree(&self) -> i32 {
        self.degree
    }

    pub fn is_zero(&self) -> bool {
        self.value.is_zero()
    }

    fn same_degree(&self, other: &Self) -> Result<()> {
        if self.degree == other.degree {
            Ok(())
        } else {
            Err(Error::DegreeMismatch {
                left: self.degree,
                right: other.degree,
            })
        }
    }

    pub fn try_add(&self, other: &Self) -> Result<Self> {
        self.same_degree(other)?;
        Ok(GradedScalar::new(&self.value + &other.value, self.degree))
    }

    pub fn try_sub(&self, other: &Self) -> Result<Self> {
        self.same_degree(other)?;
        Ok(GradedScalar::new(&self.value - &other.value, self.degree))
    }

    pub fn try_div(&self, other: &Self) -> Result<Self> {
        if other.value.is_zero() {
            return Err(Error::DivisionByZero);
        }
        Ok(GradedScalar::new(
            &self.value / &other.value,
            self.degree - other.degree,
        ))
    }

    pub fn inverse(&self) -> Result<Self> {
        if self.value.is_zero() {
            return Err(Error::DivisionByZero);
        }
        Ok(GradedScalar::new(self.value.recip(), -self.degree))
    }

    pub fn scale(&self, factor: &Rational) -> Self {
        GradedScalar::new(&self.value * factor, self.degree)
    }

    pub fn abs(&self) -> Self {
        GradedScalar::new(self.value.abs(), self.degree)
    }

    /// Ordering is only defined between equal degrees.
    pub fn try_cmp(&self, other: &Self) -> Result<Ordering> {
        self.same_degree(other)?;
        Ok(self.value.cmp(&other.value))
    }

    /// Numerical value after substituting `log q = ln(q)`.
    pub fn to_f64(&self, q: u64) -> f64 {
        to_f64(&self.value) * (q as f64).ln().powi(self.degree)
    }

    /// Sums a sequence of equal-degree scalars; the empty sum has `degree`.
    pub fn sum<'a>(degree: i32, items: impl IntoIterator<Item = &'a GradedScalar>) -> Result<Self> {
        items
            .into_iter()
            .try_fold(GradedScalar::zero(degree), |acc, x| acc.try_add(x))
    }
}

impl Mul for &GradedScalar {
    type Output = GradedScalar;

    fn mul(self, rhs: &GradedScalar) -> GradedScalar {
        GradedScalar::new(&self.value * &rhs.value, self.degree + rhs.degree)
    }
}

impl Mul for GradedScalar {
    type Output = GradedScalar;

    fn mul(self, rhs: GradedScalar) -> GradedScalar {
        &self * &rhs
    }
}

impl Neg for GradedScalar {
    type Output = GradedScalar;

    fn neg(self) -> GradedScalar {
        GradedScalar::new(-self.value, self.degree)
    }
}

impl PartialOrd for GradedScalar {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        self.try_cmp(other).ok()
    }
}

impl fmt::Display for GradedScalar {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self.degree {
            0 => write!(f, "{}", fmt_rational(&self.value)),
            1 => write!(f, "{} log q", fmt_rational(&self.value)),
            d => write!(f, "{} (log q)^{}", fmt_rational(&self.value), d),
        }
    }
}
