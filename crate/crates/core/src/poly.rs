//! Polynomials over F_q.

use std::fmt;

use crate::error::{Error, Result};
use crate::fq::{Fq, FqElement};

/// Coefficients low to high, with no trailing zeros (the zero polynomial is empty).
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Default)]
pub struct FqPoly {
    coeffs: Vec<FqElement>,
}

impl FqPoly {
    pub fn new(mut coeffs: Vec<FqElement>) -> Self {
        while coeffs.last().is_some_and(|c| c.0 == 0) {
            coeffs.pop();
        }
        FqPoly { coeffs }
    }

    pub fn from_u8(coeffs: &[u8]) -> Self {
        FqPoly::new(coeffs.iter().map(|&c| FqElement(c)).collect())
    }

    pub fn zero() -> Self {
        FqPoly { coeffs: Vec::new() }
    }

    pub fn one() -> Self {
        FqPoly::from_u8(&[1])
    }

    /// The monomial `t^n`.
    pub fn monomial(n: usize) -> Self {
        let mut c = vec![FqElement(0); n + 1];
        c[n] = FqElement(1);
        FqPoly { coeffs: c }
    }

    pub fn coeffs(&self) -> &[FqElement] {
        &self.coeffs
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    /// Degree, with `None` for the zero polynomial.
    pub fn degree(&self) -> Option<usize> {
        self.coeffs.len().checked_sub(1)
    }

    pub fn leading(&self) -> Option<FqElement> {
        self.coeffs.last().copied()
    }

    pub fn is_monic(&self) -> bool {
        self.leading() == Some(FqElement(1))
    }

    pub fn add(&self, other: &Self, f: &Fq) -> Self {
        let n = self.coeffs.len().max(other.coeffs.len());
        let get = |v: &[FqElement], i: usize| v.get(i).copied().unwrap_or_default();
        FqPoly::new(
            (0..n)
                .map(|i| f.add(get(&self.coeffs, i), get(&other.coeffs, i)))
                .collect(),
        )
    }

    pub fn sub(&self, other: &Self, f: &Fq) -> Self {
        self.add(&other.scale(f.neg(f.one()), f), f)
    }

    pub fn scale(&self, c: FqElement, f: &Fq) -> Self {
        FqPoly::new(self.coeffs.iter().map(|&a| f.mul(a, c)).collect())
    }

    pub fn mul(&self, other: &Self, f: &Fq) -> Self {
        if self.is_zero() || other.is_zero() {
            return FqPoly::zero();
        }
        let mut out = vec![FqElement(0); self.coeffs.len() + other.coeffs.len() - 1];
        for (i, &a) in self.coeffs.iter().enumerate() {
            if a.0 == 0 {
                continue;
            }
            for (j, &b) in other.coeffs.iter().enumerate() {
                out[i + j] = f.add(out[i + j], f.mul(a, b));
            }
        }
        FqPoly::new(out)
    }

    pub fn div_rem(&self, divisor: &Self, f: &Fq) -> Result<(Self, Self)> {
        let dd = divisor.degree().ok_or(Error::DivisionByZero)?;
        let lead_inv = f.inv(divisor.leading().unwrap())?;
        let mut rem = self.coeffs.clone();
        if rem.len() <= dd {
            return Ok((FqPoly::zero(), self.clone()));
        }
        let mut quot = vec![FqElement(0); rem.len() - dd];
        for i in (dd..rem.len()).rev() {
            let c = f.mul(rem[i], lead_inv);
            if c.0 == 0 {
                continue;
            }
            quot[i - dd] = c;
            for (k, &dk) in divisor.coeffs.iter().enumerate() {
                let idx = i - dd + k;
                rem[idx] = f.sub(rem[idx], f.mul(c, dk));
            }
        }
        Ok((FqPoly::new(quot), FqPoly::new(rem)))
    }

    pub fn rem(&self, divisor: &Self, f: &Fq) -> Result<Self> {
        Ok(self.div_rem(divisor, f)?.1)
    }

    pub fn divides(&self, other: &Self, f: &Fq) -> bool {
        matches!(other.rem(self, f), Ok(r) if r.is_zero())
    }

    /// Monic greatest common divisor (zero if both are zero).
    pub fn gcd(&self, other: &Self, f: &Fq) -> Self {
        let (mut a, mut b) = (self.clone(), other.clone());
        while !b.is_zero() {
            let r = a.rem(&b, f).expect("b is nonzero");
            a = b;
            b = r;
        }
        match a.leading() {
            Some(l) => a.scale(f.inv(l).unwrap(), f),
            None => a,
        }
    }

    /// Multiplicity of `p` as a factor of `self` (which must be nonzero).
    pub fn valuation(&self, p: &Self, f: &Fq) -> u32 {
        debug_assert!(!self.is_zero());
        let mut n = 0;
        let mut cur = self.clone();
        loop {
            match cur.div_rem(p, f) {
                Ok((quot, r)) if r.is_zero() => {
                    cur = quot;
                    n += 1;
                }
                _ => return n,
            }
        }
    }

    fn mul_mod(&self, other: &Self, m: &Self, f: &Fq) -> Self {
        self.mul(other, f).rem(m, f).expect("modulus is nonzero")
    }

    fn pow_mod(&self, mut e: u64, m: &Self, f: &Fq) -> Self {
        let mut base = self.rem(m, f).expect("modulus is nonzero");
        let mut acc = FqPoly::one().rem(m, f).expect("modulus is nonzero");
        while e > 0 {
            if e & 1 == 1 {
                acc = acc.mul_mod(&base, m, f);
            }
            base = base.mul_mod(&base, m, f);
            e >>= 1;
        }
        acc
    }

    /// `t^{q^i} mod self` for i = 0..=n.
    fn frobenius_orbit(&self, n: usize, f: &Fq) -> Vec<Self> {
        let mut out = vec![FqPoly::monomial(1).rem(self, f).unwrap()];
        for _ in 0..n {
            let next = out.last().unwrap().pow_mod(f.q() as u64, self, f);
            out.push(next);
        }
        out
    }

    /// Rabin's test: `self` of degree n is irreducible iff `t^{q^n} ≡ t` and
    /// `gcd(t^{q^{n/r}} − t, self) = 1` for each prime r dividing n.
    pub fn is_irreducible(&self, f: &Fq) -> bool {
        let n = match self.degree() {
            Some(0) | None => return false,
            Some(n) => n,
        };
        let orbit = self.frobenius_orbit(n, f);
        let t = FqPoly::monomial(1);
        if orbit[n] != t.rem(self, f).unwrap() {
            return false;
        }
        prime_divisors(n).into_iter().all(|r| {
            let g = orbit[n / r].sub(&t, f).gcd(self, f);
            g == FqPoly::one()
        })
    }

    /// All monic polynomials of the given degree, in lexicographic order of
    /// their coefficients read low to high.
    pub fn monic_of_degree(degree: usize, f: &Fq) -> impl Iterator<Item = FqPoly> {
        let q = f.q() as u64;
        let count = q.pow(degree as u32);
        (0..count).map(move |mut idx| {
            let mut c = Vec::with_capacity(degree + 1);
            for _ in 0..degree {
                c.push(FqElement((idx % q) as u8));
                idx /= q;
            }
            c.push(FqElement(1));
            FqPoly { coeffs: c }
        })
    }

    /// Text form `[c0,c1,...]`, coefficients low to high.
    pub fn spec(&self) -> String {
        let parts: Vec<String> = self.coeffs.iter().map(|c| c.0.to_string()).collect();
        format!("[{}]", parts.join(","))
    }
}

fn prime_divisors(mut n: usize) -> Vec<usize> {
    let mut out = Vec::new();
    let mut d = 2;
    while d * d <= n {
        if n.is_multiple_of(d) {
            out.push(d);
            while n.is_multiple_of(d) {
                n /= d;
            }
        }
        d += 1;
    }
    if n > 1 {
        out.push(n);
    }
    out
}

impl fmt::Display for FqPoly {
    fn fmt(&self, out: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            return write!(out, "0");
        }
        let mut first = true;
        for (i, c) in self.coeffs.iter().enumerate().rev() {
            if c.0 == 0 {
                continue;
            }
            if !first {
                write!(out, "+")?;
            }
            first = false;
            let coef = if c.0 == 1 && i > 0 {
                String::new()
            } else {
                c.0.to_string()
            };
            match i {
                0 => write!(out, "{}", c.0)?,
                1 => write!(out, "{coef}t")?,
                _ => write!(out, "{coef}t^{i}")?,
            }
        }
        Ok(())
    }
}
