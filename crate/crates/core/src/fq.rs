//! The constant field F_q (q = p^m <= 16) as lookup tables, and the
//! additive character used to certify the orders of the local characters.

use std::fmt;

use crate::error::{Error, Result};

/// An element of F_q, encoded as `Σ c_i p^i` where `c_i` are the coordinates
/// over F_p in the power basis of the field's defining polynomial.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Default)]
pub struct FqElement(pub u8);

impl fmt::Display for FqElement {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.0)
    }
}

/// A p-th root of unity `exp(2πi·exponent/order)`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub struct RootOfUnity {
    pub order: u32,
    pub exponent: u32,
}

impl RootOfUnity {
    pub fn one(order: u32) -> Self {
        RootOfUnity { order, exponent: 0 }
    }

    pub fn to_complex(self) -> (f64, f64) {
        let theta = 2.0 * std::f64::consts::PI * self.exponent as f64 / self.order as f64;
        (theta.cos(), theta.sin())
    }
}

impl std::ops::Mul for RootOfUnity {
    type Output = RootOfUnity;

    fn mul(self, other: RootOfUnity) -> RootOfUnity {
        debug_assert_eq!(self.order, other.order);
        RootOfUnity {
            order: self.order,
            exponent: (self.exponent + other.exponent) % self.order,
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Fq {
    p: u32,
    m: u32,
    q: u32,
    /// Defining polynomial over F_p, low to high, monic of degree m.
    modulus: Vec<u32>,
    add: Vec<u8>,
    mul: Vec<u8>,
    neg: Vec<u8>,
    inv: Vec<u8>,
    trace: Vec<u8>,
}

fn prime_power(q: u32) -> Option<(u32, u32)> {
    if q < 2 {
        return None;
    }
    let p = (2..=q).find(|d| q.is_multiple_of(*d))?;
    let mut m = 0;
    let mut r = q;
    while r.is_multiple_of(p) {
        r /= p;
        m += 1;
    }
    (r == 1).then_some((p, m))
}

fn digits(x: u32, p: u32, m: u32) -> Vec<u32> {
    let mut out = Vec::with_capacity(m as usize);
    let mut x = x;
    for _ in 0..m {
        out.push(x % p);
        x /= p;
    }
    out
}

fn undigits(d: &[u32], p: u32) -> u32 {
    d.iter().rev().fold(0, |acc, &c| acc * p + c)
}

/// Product of two F_p-polynomials reduced modulo a monic `modulus`.
fn mulmod_fp(a: &[u32], b: &[u32], modulus: &[u32], p: u32) -> Vec<u32> {
    let m = modulus.len() - 1;
    let mut prod = vec![0u32; a.len() + b.len()];
    for (i, &x) in a.iter().enumerate() {
        for (j, &y) in b.iter().enumerate() {
            prod[i + j] = (prod[i + j] + x * y) % p;
        }
    }
    for i in (m..prod.len()).rev() {
        let c = prod[i];
        if c == 0 {
            continue;
        }
        for k in 0..=m {
            let idx = i - m + k;
            prod[idx] = (prod[idx] + (p - c) * modulus[k]) % p;
        }
    }
    prod.truncate(m);
    prod.resize(m, 0);
    prod
}

/// A monic polynomial of degree m over F_p without factors of degree <= m/2.
fn find_modulus(p: u32, m: u32) -> Vec<u32> {
    if m == 1 {
        return vec![0, 1];
    }
    let count = p.pow(m);
    'cand: for tail in 0..count {
        let mut f = digits(tail, p, m);
        f.push(1);
        // trial division by every monic polynomial of degree 1..=m/2
        for d in 1..=m / 2 {
            for lower in 0..p.pow(d) {
                let mut g = digits(lower, p, d);
                g.push(1);
                if fp_divides(&g, &f, p) {
                    continue 'cand;
                }
            }
        }
        return f;
    }
    unreachable!("an irreducible polynomial of every degree exists")
}

fn fp_divides(g: &[u32], f: &[u32], p: u32) -> bool {
    let mut r = f.to_vec();
    let dg = g.len() - 1;
    while r.len() > dg {
        let c = *r.last().unwrap();
        let shift = r.len() - 1 - dg;
        if c != 0 {
            for (k, &gk) in g.iter().enumerate() {
                r[shift + k] = (r[shift + k] + (p - c) * gk) % p;
            }
        }
        r.pop();
    }
    r.iter().all(|&c| c == 0)
}

impl Fq {
    pub fn new(q: u32) -> Result<Self> {
        if q > 16 {
            return Err(Error::UnsupportedFieldSize(q));
        }
        let (p, m) = prime_power(q).ok_or(Error::UnsupportedFieldSize(q))?;
        let modulus = find_modulus(p, m);
        let n = q as usize;
        let mut add = vec![0u8; n * n];
        let mut mul = vec![0u8; n * n];
        for a in 0..q {
            let da = digits(a, p, m);
            for b in 0..q {
                let db = digits(b, p, m);
                let s: Vec<u32> = da.iter().zip(&db).map(|(x, y)| (x + y) % p).collect();
                add[(a * q + b) as usize] = undigits(&s, p) as u8;
                mul[(a * q + b) as usize] = undigits(&mulmod_fp(&da, &db, &modulus, p), p) as u8;
            }
        }
        let mut neg = vec![0u8; n];
        let mut inv = vec![0u8; n];
        for a in 0..n {
            neg[a] = (0..n).find(|&b| add[a * n + b] == 0).unwrap() as u8;
            if a != 0 {
                inv[a] = (1..n).find(|&b| mul[a * n + b] == 1).unwrap() as u8;
            }
        }
        let mut field = Fq {
            p,
            m,
            q,
            modulus,
            add,
            mul,
            neg,
            inv,
            trace: vec![0; n],
        };
        for a in 0..q {
            // Tr(a) = a + a^p + ... + a^{p^{m-1}}
            let mut acc = FqElement(0);
            let mut pw = FqElement(a as u8);
            for _ in 0..m {
                acc = field.add(acc, pw);
                pw = field.pow(pw, p as u64);
            }
            debug_assert!((acc.0 as u32) < p, "trace lands in the prime field");
            field.trace[a as usize] = acc.0;
        }
        Ok(field)
    }

    pub fn q(&self) -> u32 {
        self.q
    }

    pub fn characteristic(&self) -> u32 {
        self.p
    }

    pub fn extension_degree(&self) -> u32 {
        self.m
    }

    pub fn defining_polynomial(&self) -> &[u32] {
        &self.modulus
    }

    pub fn zero(&self) -> FqElement {
        FqElement(0)
    }

    pub fn one(&self) -> FqElement {
        FqElement(1)
    }

    pub fn elements(&self) -> impl Iterator<Item = FqElement> {
        (0..self.q as u8).map(FqElement)
    }

    #[inline]
    pub fn add(&self, a: FqElement, b: FqElement) -> FqElement {
        FqElement(self.add[a.0 as usize * self.q as usize + b.0 as usize])
    }

    #[inline]
    pub fn mul(&self, a: FqElement, b: FqElement) -> FqElement {
        FqElement(self.mul[a.0 as usize * self.q as usize + b.0 as usize])
    }

    #[inline]
    pub fn neg(&self, a: FqElement) -> FqElement {
        FqElement(self.neg[a.0 as usize])
    }

    #[inline]
    pub fn sub(&self, a: FqElement, b: FqElement) -> FqElement {
        self.add(a, self.neg(b))
    }

    pub fn inv(&self, a: FqElement) -> Result<FqElement> {
        if a.0 == 0 {
            Err(Error::DivisionByZero)
        } else {
            Ok(FqElement(self.inv[a.0 as usize]))
        }
    }

    pub fn pow(&self, a: FqElement, mut e: u64) -> FqElement {
        let mut base = a;
        let mut acc = self.one();
        while e > 0 {
            if e & 1 == 1 {
                acc = self.mul(acc, base);
            }
            base = self.mul(base, base);
            e >>= 1;
        }
        acc
    }

    /// Absolute trace to F_p, returned as an integer in `0..p`.
    pub fn trace_to_prime(&self, a: FqElement) -> u32 {
        self.trace[a.0 as usize] as u32
    }

    /// The base additive character `χ(a) = ζ_p^{Tr(a)}`.
    pub fn char_chi(&self, a: FqElement) -> RootOfUnity {
        RootOfUnity {
            order: self.p,
            exponent: self.trace_to_prime(a),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    const SIZES: [u32; 10] = [2, 3, 4, 5, 7, 8, 9, 11, 13, 16];

    #[test]
    fn rejects_non_prime_powers() {
        for q in [0, 1, 6, 10, 12, 15, 17, 32] {
            assert!(Fq::new(q).is_err(), "q = {q}");
        }
    }

    #[test]
    fn field_axioms_exhaustive() {
        for q in SIZES {
            let f = Fq::new(q).unwrap();
            let els: Vec<_> = f.elements().collect();
            for &a in &els {
                assert_eq!(f.add(a, f.zero()), a);
                assert_eq!(f.mul(a, f.one()), a);
                assert_eq!(f.add(a, f.neg(a)), f.zero());
                if a != f.zero() {
                    assert_eq!(f.mul(a, f.inv(a).unwrap()), f.one());
                }
                for &b in &els {
                    assert_eq!(f.add(a, b), f.add(b, a));
                    assert_eq!(f.mul(a, b), f.mul(b, a));
                    for &c in &els {
                        assert_eq!(f.mul(a, f.add(b, c)), f.add(f.mul(a, b), f.mul(a, c)));
                        assert_eq!(f.mul(f.mul(a, b), c), f.mul(a, f.mul(b, c)));
                        assert_eq!(f.add(f.add(a, b), c), f.add(a, f.add(b, c)));
                    }
                }
            }
            // no zero divisors
            for &a in &els[1..] {
                for &b in &els[1..] {
                    assert_ne!(f.mul(a, b), f.zero());
                }
            }
        }
    }

    #[test]
    fn character_values() {
        let f2 = Fq::new(2).unwrap();
        assert_eq!(f2.char_chi(FqElement(0)), RootOfUnity::one(2));
        assert_eq!(
            f2.char_chi(FqElement(1)),
            RootOfUnity {
                order: 2,
                exponent: 1
            }
        );
        for q in SIZES {
            let f = Fq::new(q).unwrap();
            let els: Vec<_> = f.elements().collect();
            assert_eq!(f.char_chi(f.zero()).exponent, 0);
            for &a in &els {
                for &b in &els {
                    assert_eq!(f.char_chi(f.add(a, b)), f.char_chi(a) * f.char_chi(b));
                }
            }
            // orthogonality: every value of the trace is taken equally often
            let mut counts = vec![0u32; f.characteristic() as usize];
            for &a in &els {
                counts[f.char_chi(a).exponent as usize] += 1;
            }
            assert!(counts.iter().all(|&c| c == q / f.characteristic()));
            let (re, im) = els
                .iter()
                .map(|&a| f.char_chi(a).to_complex())
                .fold((0.0, 0.0), |(x, y), (a, b)| (x + a, y + b));
            assert!(re.abs() < 1e-12 && im.abs() < 1e-12);
        }
    }
}
