//! The monoid R of monic polynomials coprime to the finite places of S, and
//! its per-degree counting and Möbius sums.
//!
//! `N_a` counts monic r of degree a coprime to S and `M_a = Σ_{deg r = a} μ(r)`.
//! Their generating functions are
//! `Z(x) = Π_{P∈S}(1 - x^{deg P}) / (1 - qx)` and `1/Z(x)`.

use num_bigint::BigInt;
use num_traits::{One, Zero};

/// A generating function `num(x) / Π_i (1 - x^{den[i]})` with integer numerator.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct RationalGf {
    pub num: Vec<BigInt>,
    pub den_degrees: Vec<u32>,
}

impl RationalGf {
    /// The first `n` power series coefficients.
    pub fn expand(&self, n: usize) -> Vec<BigInt> {
        let mut s = vec![BigInt::zero(); n];
        for (i, c) in self.num.iter().enumerate().take(n) {
            s[i] += c;
        }
        for &f in &self.den_degrees {
            let f = f as usize;
            for i in f..n {
                let prev = s[i - f].clone();
                s[i] += prev;
            }
        }
        s
    }
}

/// Multiplies integer polynomials.
fn poly_mul(a: &[BigInt], b: &[BigInt]) -> Vec<BigInt> {
    if a.is_empty() || b.is_empty() {
        return Vec::new();
    }
    let mut out = vec![BigInt::zero(); a.len() + b.len() - 1];
    for (i, x) in a.iter().enumerate() {
        for (j, y) in b.iter().enumerate() {
            out[i + j] += x * y;
        }
    }
    out
}

/// `1 - x^f`.
fn one_minus_power(f: u32) -> Vec<BigInt> {
    let mut p = vec![BigInt::zero(); f as usize + 1];
    p[0] = BigInt::one();
    p[f as usize] = -BigInt::one();
    p
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct MonoidR {
    q: u64,
    /// Degrees of the finite places of S.
    excluded_degrees: Vec<u32>,
}

impl MonoidR {
    pub fn new(q: u64, excluded_degrees: Vec<u32>) -> Self {
        MonoidR {
            q,
            excluded_degrees,
        }
    }

    pub fn q(&self) -> u64 {
        self.q
    }

    pub fn excluded_degrees(&self) -> &[u32] {
        &self.excluded_degrees
    }

    /// `(1 - qx) / Π_{P∈S}(1 - x^{deg P})`.
    pub fn mobius_gf(&self) -> RationalGf {
        RationalGf {
            num: vec![BigInt::one(), -BigInt::from(self.q)],
            den_degrees: self.excluded_degrees.clone(),
        }
    }

    /// `M_0, ..., M_{n-1}` from the generating function.
    pub fn mobius_sums(&self, n: usize) -> Vec<BigInt> {
        self.mobius_gf().expand(n)
    }

    /// `N_0, ..., N_{n-1}` from the generating function.
    pub fn counts(&self, n: usize) -> Vec<BigInt> {
        let num = self
            .excluded_degrees
            .iter()
            .fold(vec![BigInt::one()], |acc, &f| poly_mul(&acc, &one_minus_power(f)));
        // divide by (1 - qx): s_a = num_a + q s_{a-1}
        let mut out: Vec<BigInt> = Vec::with_capacity(n);
        for a in 0..n {
            let mut s = num.get(a).cloned().unwrap_or_default();
            if a > 0 {
                s += &out[a - 1] * BigInt::from(self.q);
            }
            out.push(s);
        }
        out
    }

    /// Number of monic irreducibles of each degree `0..n` (entry 0 unused),
    /// from `q^d = Σ_{e | d} e·I_e`.
    pub fn irreducible_counts(&self, n: usize) -> Vec<BigInt> {
        let mut out = vec![BigInt::zero(); n];
        for d in 1..n {
            let mut rest = num_traits::pow(BigInt::from(self.q), d);
            for e in 1..d {
                if d % e == 0 {
                    rest -= &out[e] * BigInt::from(e);
                }
            }
            out[d] = rest / BigInt::from(d);
        }
        out
    }

    /// Irreducibles outside S, counted per degree.
    fn outside_counts(&self, n: usize) -> Vec<BigInt> {
        let mut irr = self.irreducible_counts(n);
        for &f in &self.excluded_degrees {
            if (f as usize) < n {
                irr[f as usize] -= 1;
            }
        }
        irr
    }

    /// `Π_{P∉S} (1 - x^{deg P})^{sign}` truncated to `n` terms, with the
    /// irreducibles of each degree counted rather than listed.
    fn euler_product(&self, n: usize, inverse: bool) -> Vec<BigInt> {
        let mut series = vec![BigInt::zero(); n];
        if n == 0 {
            return series;
        }
        series[0] = BigInt::one();
        for (d, count) in self.outside_counts(n).iter().enumerate().skip(1) {
            // (1 - y)^{count} or (1 - y)^{-count} with y = x^d
            let mut factor = vec![BigInt::zero(); n];
            let mut binom = BigInt::one();
            let mut i = 0;
            while i * d < n {
                if binom.is_zero() {
                    break;
                }
                factor[i * d] = if inverse || i % 2 == 0 {
                    binom.clone()
                } else {
                    -binom.clone()
                };
                let step = if inverse {
                    count + BigInt::from(i)
                } else {
                    count - BigInt::from(i)
                };
                binom = binom * step / BigInt::from(i + 1);
                i += 1;
            }
            let mut prod = poly_mul(&series, &factor);
            prod.truncate(n);
            series = prod;
        }
        series
    }

    /// `M_a` from the Euler product over irreducibles outside S.
    pub fn mobius_sums_euler(&self, n: usize) -> Vec<BigInt> {
        self.euler_product(n, false)
    }

    /// `N_a` from the Euler product over irreducibles outside S.
    pub fn counts_euler(&self, n: usize) -> Vec<BigInt> {
        self.euler_product(n, true)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn ints(v: &[i64]) -> Vec<BigInt> {
        v.iter().map(|&x| BigInt::from(x)).collect()
    }

    #[test]
    fn mobius_sums_for_t_only() {
        let r = MonoidR::new(2, vec![1]);
        assert_eq!(r.mobius_sums(4), ints(&[1, -1, -1, -1]));
        let r3 = MonoidR::new(3, vec![1]);
        assert_eq!(r3.mobius_sums(3), ints(&[1, -2, -2]));
    }

    #[test]
    fn counts_and_mobius_are_inverse() {
        for (q, ex) in [(2, vec![1]), (2, vec![1, 1]), (3, vec![1, 2]), (4, vec![])] {
            let r = MonoidR::new(q, ex);
            let n = 12;
            let m = r.mobius_sums(n);
            let c = r.counts(n);
            for a in 0..n {
                let conv: BigInt = (0..=a).map(|i| &m[i] * &c[a - i]).sum();
                assert_eq!(conv, if a == 0 { BigInt::one() } else { BigInt::zero() });
            }
        }
    }

    #[test]
    fn counts_small() {
        // monic polynomials over F_2 with nonzero constant term
        let r = MonoidR::new(2, vec![1]);
        assert_eq!(r.counts(4), ints(&[1, 1, 2, 4]));
    }

    #[test]
    fn euler_product_agrees() {
        for (q, ex) in [(2, vec![1]), (2, vec![1, 1, 2]), (3, vec![1]), (5, vec![2])] {
            let r = MonoidR::new(q, ex);
            assert_eq!(r.mobius_sums_euler(15), r.mobius_sums(15));
            assert_eq!(r.counts_euler(15), r.counts(15));
        }
        assert_eq!(
            MonoidR::new(2, vec![]).irreducible_counts(6),
            ints(&[0, 2, 1, 2, 3, 6])
        );
    }
}
