//! O_v^×-invariant Schwartz–Bruhat functions on one completion k_v.
//!
//! Such a function depends on x only through v(x), vanishes below some
//! valuation and is constant on a small enough ball around 0. It is stored
//! as the values on the shells `π^j O_v^×` for `j_min <= j < j_tail`, plus
//! the common value on the ball `π^{j_tail} O_v`.

use std::collections::BTreeMap;
use std::fmt;

use num_traits::{One, Zero};

use crate::error::{Error, Result};
use crate::fq::Fq;
use crate::place::Place;
use crate::scalar::{fmt_rational, parse_rational, pow_q, GradedScalar, Rational};

/// Widest exceptional range accepted by the text parser.
pub const MAX_PARSE_SPAN: i64 = 4096;
/// Largest |j_min| accepted by the text parser.
pub const MAX_PARSE_VALUATION: i64 = 1 << 20;

#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct ShellFunction {
    place: Place,
    j_min: i64,
    values: Vec<Rational>,
    tail: Rational,
}

/// `q_v^{-j}`, the modulus of an element of valuation `j`.
pub fn modulus(place: &Place, j: i64) -> Rational {
    pow_q(place.q_v(), -j)
}

/// Multiplicative volume of a union of shells: `f_v` log-q units per shell.
pub fn mult_volume(place: &Place, shells: &[i64]) -> GradedScalar {
    let mut distinct = shells.to_vec();
    distinct.sort_unstable();
    distinct.dedup();
    GradedScalar::units(Rational::from_integer(
        (place.degree() as i64 * distinct.len() as i64).into(),
    ))
}

impl ShellFunction {
    /// Builds and canonicalizes: leading zero shells are dropped and trailing
    /// shells equal to the tail are absorbed into it.
    pub fn new(place: Place, j_min: i64, values: Vec<Rational>, tail: Rational) -> Self {
        let mut f = ShellFunction {
            place,
            j_min,
            values,
            tail,
        };
        f.canonicalize();
        f
    }

    fn canonicalize(&mut self) {
        while self.values.last().is_some_and(|v| *v == self.tail) {
            self.values.pop();
        }
        let lead = self.values.iter().take_while(|v| v.is_zero()).count();
        if lead > 0 {
            self.values.drain(..lead);
            self.j_min += lead as i64;
        }
        if self.values.is_empty() && self.tail.is_zero() {
            self.j_min = 0;
        }
    }

    pub fn zero(place: Place) -> Self {
        ShellFunction::new(place, 0, Vec::new(), Rational::zero())
    }

    /// Indicator of the ball `π^m O_v`.
    pub fn ball(place: Place, m: i64) -> Self {
        ShellFunction::new(place, m, Vec::new(), Rational::one())
    }

    /// Indicator of the shell `π^j O_v^×`.
    pub fn shell(place: Place, j: i64) -> Self {
        ShellFunction::new(place, j, vec![Rational::one()], Rational::zero())
    }

    /// `Σ b_m 1_{π^m O_v}`.
    pub fn from_balls(place: Place, balls: &BTreeMap<i64, Rational>) -> Self {
        let nonzero: Vec<(&i64, &Rational)> = balls.iter().filter(|(_, b)| !b.is_zero()).collect();
        let (Some(first), Some(last)) = (nonzero.first(), nonzero.last()) else {
            return ShellFunction::zero(place);
        };
        let (lo, hi) = (*first.0, *last.0);
        let mut values = Vec::with_capacity((hi - lo) as usize);
        let mut acc = Rational::zero();
        for j in lo..hi {
            if let Some(b) = balls.get(&j) {
                acc += b;
            }
            values.push(acc.clone());
        }
        acc += last.1;
        ShellFunction::new(place, lo, values, acc)
    }

    /// Coefficients `b_m` with `f = Σ b_m 1_{π^m O_v}`; zeros omitted.
    pub fn to_balls(&self) -> BTreeMap<i64, Rational> {
        let mut out = BTreeMap::new();
        let mut prev = Rational::zero();
        for (i, v) in self.values.iter().chain(std::iter::once(&self.tail)).enumerate() {
            let b = v - &prev;
            if !b.is_zero() {
                out.insert(self.j_min + i as i64, b);
            }
            prev = v.clone();
        }
        out
    }

    pub fn place(&self) -> &Place {
        &self.place
    }

    pub fn j_min(&self) -> i64 {
        self.j_min
    }

    /// First valuation from which the function is constant.
    pub fn j_tail(&self) -> i64 {
        self.j_min + self.values.len() as i64
    }

    pub fn exceptional(&self) -> &[Rational] {
        &self.values
    }

    pub fn tail_value(&self) -> &Rational {
        &self.tail
    }

    pub fn is_zero(&self) -> bool {
        self.values.is_empty() && self.tail.is_zero()
    }

    /// Value on the shell of valuation `j`.
    pub fn value(&self, j: i64) -> Rational {
        if self.is_zero() || j < self.j_min {
            Rational::zero()
        } else if j >= self.j_tail() {
            self.tail.clone()
        } else {
            self.values[(j - self.j_min) as usize].clone()
        }
    }

    pub fn value_at_zero(&self) -> &Rational {
        &self.tail
    }

    /// Lowest valuation with a nonzero value, if any.
    pub fn support_start(&self) -> Option<i64> {
        (!self.is_zero()).then_some(self.j_min)
    }

    fn same_place(&self, other: &Self) -> Result<()> {
        if self.place == other.place {
            Ok(())
        } else {
            Err(Error::Precondition(format!(
                "shell functions live at different places {} and {}",
                self.place, other.place
            )))
        }
    }

    fn combine(&self, other: &Self, op: impl Fn(&Rational, &Rational) -> Rational) -> Result<Self> {
        self.same_place(other)?;
        let lo = match (self.support_start(), other.support_start()) {
            (Some(a), Some(b)) => a.min(b),
            (Some(a), None) | (None, Some(a)) => a,
            (None, None) => 0,
        };
        let hi = self.j_tail().max(other.j_tail()).max(lo);
        let values = (lo..hi).map(|j| op(&self.value(j), &other.value(j))).collect();
        Ok(ShellFunction::new(
            self.place.clone(),
            lo,
            values,
            op(&self.tail, &other.tail),
        ))
    }

    pub fn add(&self, other: &Self) -> Result<Self> {
        self.combine(other, |a, b| a + b)
    }

    pub fn sub(&self, other: &Self) -> Result<Self> {
        self.combine(other, |a, b| a - b)
    }

    /// Pointwise product.
    pub fn mul(&self, other: &Self) -> Result<Self> {
        self.combine(other, |a, b| a * b)
    }

    pub fn scale(&self, c: &Rational) -> Self {
        ShellFunction::new(
            self.place.clone(),
            self.j_min,
            self.values.iter().map(|v| v * c).collect(),
            &self.tail * c,
        )
    }

    /// `q_v^{-n(v)/2}·q_v^{-m}`: the self-dual volume of `π^m O_v`.
    pub fn ball_volume(place: &Place, m: i64) -> Rational {
        pow_q(place.q_v(), -m - place.n() / 2)
    }

    /// Fourier transform under the self-dual additive measure.
    ///
    /// The ball `π^m O_v` goes to `q_v^{-m-n/2}` times the ball `π^{-m-n} O_v`.
    pub fn fourier(&self) -> Self {
        self.fourier_with_constant(&Rational::one())
    }

    /// The transform with its normalizing constant multiplied by `c`; only
    /// `c = 1` is self-dual. Used for fault injection.
    pub fn fourier_with_constant(&self, c: &Rational) -> Self {
        let n = self.place.n();
        let image: BTreeMap<i64, Rational> = self
            .to_balls()
            .into_iter()
            .map(|(m, b)| (-m - n, b * Self::ball_volume(&self.place, m) * c))
            .collect();
        ShellFunction::from_balls(self.place.clone(), &image)
    }

    /// `∫ f dx` under the self-dual measure.
    pub fn additive_integral(&self) -> Rational {
        self.to_balls()
            .iter()
            .map(|(m, b)| b * Self::ball_volume(&self.place, *m))
            .sum()
    }

    /// The normalized principal value `∫' h(u)/|u-1| d×u`, in log-q units.
    ///
    /// Shell `j < 0` has `|u-1| = q_v^{-j}`, shell `j > 0` has `|u-1| = 1`,
    /// and the unit shell is killed by the normalization.
    pub fn principal_value(&self) -> Result<GradedScalar> {
        if !self.tail.is_zero() {
            return Err(Error::NonCompactSupport);
        }
        let qv = self.place.q_v();
        let mut acc = Rational::zero();
        for (i, h) in self.values.iter().enumerate() {
            let j = self.j_min + i as i64;
            match j.cmp(&0) {
                std::cmp::Ordering::Less => acc += h * pow_q(qv, j),
                std::cmp::Ordering::Greater => acc += h,
                std::cmp::Ordering::Equal => {}
            }
        }
        Ok(GradedScalar::units(
            acc * Rational::from_integer(self.place.degree().into()),
        ))
    }

    /// Parses `place; j_min; [(j, n/d), ...]; tail n/d`. Shells between
    /// `j_min` and the largest listed `j` that are not listed are zero.
    pub fn parse(text: &str, field: &Fq) -> Result<Self> {
        let ctx = |m: &str| Error::parse("shell function", m.to_string());
        let parts: Vec<&str> = text.split(';').map(str::trim).collect();
        let [place, j_min, list, tail] = parts[..] else {
            return Err(ctx("expected four ';'-separated fields"));
        };
        let place = Place::parse(place, field)?;
        let j_min: i64 = j_min
            .parse()
            .map_err(|_| ctx(&format!("bad j_min {j_min:?}")))?;
        if j_min.abs() > MAX_PARSE_VALUATION {
            return Err(ctx(&format!("j_min {j_min} out of range")));
        }
        let tail = tail
            .strip_prefix("tail")
            .ok_or_else(|| ctx("last field must start with 'tail'"))?;
        let tail = parse_rational(tail)?;
        let entries = parse_pairs(list)?;
        let mut map = BTreeMap::new();
        for (j, v) in entries {
            if j < j_min {
                return Err(ctx(&format!("shell {j} lies below j_min {j_min}")));
            }
            if j - j_min >= MAX_PARSE_SPAN {
                return Err(ctx(&format!("shell {j} too far above j_min")));
            }
            if map.insert(j, v).is_some() {
                return Err(ctx(&format!("shell {j} listed twice")));
            }
        }
        let top = map.keys().next_back().map_or(j_min, |j| j + 1);
        let values = (j_min..top)
            .map(|j| map.get(&j).cloned().unwrap_or_else(Rational::zero))
            .collect();
        Ok(ShellFunction::new(place, j_min, values, tail))
    }
}

/// Parses `[(j, n/d), (j, n/d)]`.
fn parse_pairs(text: &str) -> Result<Vec<(i64, Rational)>> {
    let ctx = |m: String| Error::parse("shell list", m);
    let inner = text
        .trim()
        .strip_prefix('[')
        .and_then(|r| r.strip_suffix(']'))
        .ok_or_else(|| ctx(format!("{text:?} is not a bracketed list")))?
        .trim();
    let mut out = Vec::new();
    let mut rest = inner;
    while !rest.is_empty() {
        let body_start = rest
            .strip_prefix('(')
            .ok_or_else(|| ctx(format!("expected '(' at {rest:?}")))?;
        let close = body_start
            .find(')')
            .ok_or_else(|| ctx("unclosed '('".to_string()))?;
        let body = &body_start[..close];
        let (j, v) = body
            .split_once(',')
            .ok_or_else(|| ctx(format!("pair {body:?} needs a comma")))?;
        let j: i64 = j
            .trim()
            .parse()
            .map_err(|_| ctx(format!("bad valuation {j:?}")))?;
        out.push((j, parse_rational(v)?));
        rest = body_start[close + 1..].trim_start();
        if let Some(r) = rest.strip_prefix(',') {
            rest = r.trim_start();
            if rest.is_empty() {
                return Err(ctx("trailing comma".to_string()));
            }
        } else if !rest.is_empty() {
            return Err(ctx(format!("expected ',' at {rest:?}")));
        }
    }
    Ok(out)
}

impl fmt::Display for ShellFunction {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let pairs: Vec<String> = self
            .values
            .iter()
            .enumerate()
            .map(|(i, v)| format!("({}, {})", self.j_min + i as i64, fmt_rational(v)))
            .collect();
        write!(
            f,
            "{}; {}; [{}]; tail {}",
            self.place.spec(),
            self.j_min,
            pairs.join(", "),
            fmt_rational(&self.tail)
        )
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::place::enumerate_places;
    use crate::scalar::{int, rat};

    fn places(q: u32) -> (Fq, Vec<Place>) {
        let f = Fq::new(q).unwrap();
        let p = enumerate_places(&f, 2);
        (f, p)
    }

    #[test]
    fn modulus_values() {
        let (_, p) = places(2);
        assert_eq!(modulus(&p[1], 1), rat(1, 2));
        assert_eq!(modulus(&p[0], -3), int(8));
        assert_eq!(modulus(&p[3], 1), rat(1, 4));
    }

    #[test]
    fn fourier_of_unit_ball_and_units() {
        let (_, p) = places(2);
        let t = p[1].clone();
        assert_eq!(
            ShellFunction::ball(t.clone(), 0).fourier(),
            ShellFunction::ball(t.clone(), 0)
        );
        // 1_{O^×} -> 1_O - q_v^{-1} 1_{π^{-1}O}
        let expected = ShellFunction::ball(t.clone(), 0)
            .sub(&ShellFunction::ball(t.clone(), -1).scale(&rat(1, 2)))
            .unwrap();
        assert_eq!(ShellFunction::shell(t, 0).fourier(), expected);
    }

    #[test]
    fn additive_integrals() {
        let (_, p) = places(2);
        assert_eq!(ShellFunction::ball(p[1].clone(), 0).additive_integral(), int(1));
        assert_eq!(ShellFunction::ball(p[0].clone(), 0).additive_integral(), int(2));
        for place in &p {
            for j in -3..4 {
                let f = ShellFunction::shell(place.clone(), j);
                let qv = place.q_v();
                let expect = pow_q(qv, -j) * (int(1) - pow_q(qv, -1)) * pow_q(qv, -place.n() / 2);
                assert_eq!(f.additive_integral(), expect);
                assert_eq!(f.fourier().value_at_zero(), &expect);
            }
        }
    }

    #[test]
    fn multiplicative_volumes() {
        let (_, p) = places(2);
        assert_eq!(mult_volume(&p[1], &[0]), GradedScalar::units(int(1)));
        assert_eq!(mult_volume(&p[3], &[0]), GradedScalar::units(int(2)));
        assert_eq!(mult_volume(&p[1], &[5]), mult_volume(&p[1], &[0]));
    }

    #[test]
    fn principal_value_closed_form() {
        let (_, p) = places(2);
        let t = p[1].clone();
        assert!(ShellFunction::shell(t.clone(), 0).principal_value().unwrap().is_zero());
        assert_eq!(
            ShellFunction::shell(t.clone(), -1).principal_value().unwrap(),
            GradedScalar::units(rat(1, 2))
        );
        assert_eq!(
            ShellFunction::shell(p[3].clone(), 1).principal_value().unwrap(),
            GradedScalar::units(int(2))
        );
        assert_eq!(
            ShellFunction::ball(t, 0).principal_value(),
            Err(Error::NonCompactSupport)
        );
    }

    #[test]
    fn canonical_form_absorbs() {
        let (_, p) = places(2);
        let t = p[1].clone();
        let f = ShellFunction::new(t.clone(), -2, vec![int(0), int(3), int(1), int(1)], int(1));
        assert_eq!(f.j_min(), -1);
        assert_eq!(f.j_tail(), 0);
        assert_eq!(f.value(-1), int(3));
        assert_eq!(f.value(7), int(1));
        assert_eq!(f.value(-2), int(0));
        let z = ShellFunction::new(t.clone(), 4, vec![int(0)], int(0));
        assert_eq!(z, ShellFunction::zero(t));
    }

    #[test]
    fn text_round_trip() {
        let (f, p) = places(3);
        let g = ShellFunction::new(p[2].clone(), -1, vec![rat(1, 2), int(0), int(-4)], rat(2, 3));
        let text = g.to_string();
        assert_eq!(text, "[1,1]; -1; [(-1, 1/2), (0, 0/1), (1, -4/1)]; tail 2/3");
        assert_eq!(ShellFunction::parse(&text, &f).unwrap(), g);
        let sparse = ShellFunction::parse("inf; 0; [(2, 5)]; tail 0", &f).unwrap();
        assert_eq!(sparse.value(1), int(0));
        assert_eq!(sparse.value(2), int(5));
        for bad in [
            "inf; 0; [(2, 5)]",
            "inf; x; []; tail 0",
            "inf; 3; [(2, 5)]; tail 0",
            "inf; 0; [(1, 1), (1, 2)]; tail 0",
            "inf; 0; [(1, 1),]; tail 0",
            "inf; 0; [(1 1)]; tail 0",
            "inf; 0; []; 0",
            "inf; 0; [(9999, 1)]; tail 0",
        ] {
            assert!(ShellFunction::parse(bad, &f).is_err(), "{bad}");
        }
    }
}
