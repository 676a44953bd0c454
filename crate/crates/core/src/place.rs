//! Places of F_q(t): monic irreducibles and the degree valuation at infinity.

use std::cmp::Ordering;
use std::fmt;

use crate::error::{Error, Result};
use crate::fq::{Fq, FqElement};
use crate::poly::FqPoly;

#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub enum PlaceKind {
    Infinity,
    Finite(FqPoly),
}

#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Place {
    kind: PlaceKind,
    q: u32,
}

impl Place {
    pub fn infinity(q: u32) -> Self {
        Place {
            kind: PlaceKind::Infinity,
            q,
        }
    }

    /// A finite place; `p` must be monic and irreducible.
    pub fn finite(p: FqPoly, field: &Fq) -> Result<Self> {
        if !p.is_monic() {
            return Err(Error::InvalidPlace(format!("{} is not monic", p.spec())));
        }
        if !p.is_irreducible(field) {
            return Err(Error::InvalidPlace(format!(
                "{} is not irreducible over F_{}",
                p.spec(),
                field.q()
            )));
        }
        Ok(Place {
            kind: PlaceKind::Finite(p),
            q: field.q(),
        })
    }

    pub fn kind(&self) -> &PlaceKind {
        &self.kind
    }

    pub fn is_infinity(&self) -> bool {
        matches!(self.kind, PlaceKind::Infinity)
    }

    pub fn polynomial(&self) -> Option<&FqPoly> {
        match &self.kind {
            PlaceKind::Finite(p) => Some(p),
            PlaceKind::Infinity => None,
        }
    }

    /// Size of the constant field.
    pub fn base_q(&self) -> u32 {
        self.q
    }

    /// Residue degree f_v.
    pub fn degree(&self) -> u32 {
        match &self.kind {
            PlaceKind::Infinity => 1,
            PlaceKind::Finite(p) => p.degree().expect("irreducible is nonzero") as u32,
        }
    }

    /// Residue field size q_v = q^{f_v}.
    pub fn q_v(&self) -> u64 {
        (self.q as u64).pow(self.degree())
    }

    /// Order of the dt-character: 0 at finite places, −2 at infinity.
    pub fn n(&self) -> i64 {
        if self.is_infinity() {
            -2
        } else {
            0
        }
    }

    /// Text specifier: `inf` or the coefficient list `[c0,c1,...]`.
    pub fn spec(&self) -> String {
        match &self.kind {
            PlaceKind::Infinity => "inf".to_string(),
            PlaceKind::Finite(p) => p.spec(),
        }
    }

    pub fn parse(text: &str, field: &Fq) -> Result<Self> {
        let s = text.trim();
        if s == "inf" {
            return Ok(Place::infinity(field.q()));
        }
        let inner = s
            .strip_prefix('[')
            .and_then(|r| r.strip_suffix(']'))
            .ok_or_else(|| Error::InvalidPlace(format!("{s:?}: expected inf or [c0,c1,...]")))?;
        let mut coeffs = Vec::new();
        for part in inner.split(',') {
            let c: u32 = part
                .trim()
                .parse()
                .map_err(|_| Error::InvalidPlace(format!("{s:?}: bad coefficient {part:?}")))?;
            if c >= field.q() {
                return Err(Error::InvalidPlace(format!(
                    "{s:?}: coefficient {c} outside F_{}",
                    field.q()
                )));
            }
            coeffs.push(FqElement(c as u8));
        }
        if coeffs.last().is_some_and(|c| c.0 == 0) {
            return Err(Error::InvalidPlace(format!("{s:?}: leading coefficient is zero")));
        }
        Place::finite(FqPoly::new(coeffs), field)
    }

    fn sort_key(&self) -> (u8, u32, Vec<u8>) {
        match &self.kind {
            PlaceKind::Infinity => (0, 0, Vec::new()),
            PlaceKind::Finite(p) => (1, self.degree(), p.coeffs().iter().map(|c| c.0).collect()),
        }
    }
}

impl Ord for Place {
    fn cmp(&self, other: &Self) -> Ordering {
        self.q
            .cmp(&other.q)
            .then_with(|| self.sort_key().cmp(&other.sort_key()))
    }
}

impl PartialOrd for Place {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl fmt::Display for Place {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match &self.kind {
            PlaceKind::Infinity => write!(f, "∞"),
            PlaceKind::Finite(p) => write!(f, "{p}"),
        }
    }
}

/// Infinity followed by every monic irreducible of degree `1..=max_degree`,
/// ordered by degree and then coefficients.
pub fn enumerate_places(field: &Fq, max_degree: u32) -> Vec<Place> {
    let mut out = vec![Place::infinity(field.q())];
    for d in 1..=max_degree as usize {
        for p in FqPoly::monic_of_degree(d, field) {
            if p.is_irreducible(field) {
                out.push(Place {
                    kind: PlaceKind::Finite(p),
                    q: field.q(),
                });
            }
        }
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn small_enumeration() {
        let f = Fq::new(2).unwrap();
        let specs: Vec<String> = enumerate_places(&f, 2).iter().map(Place::spec).collect();
        assert_eq!(specs, ["inf", "[0,1]", "[1,1]", "[1,1,1]"]);
        let specs: Vec<String> = enumerate_places(&f, 1).iter().map(Place::spec).collect();
        assert_eq!(specs, ["inf", "[0,1]", "[1,1]"]);
    }

    #[test]
    fn place_data() {
        let f = Fq::new(2).unwrap();
        let ps = enumerate_places(&f, 2);
        assert_eq!(ps[0].n(), -2);
        assert_eq!(ps[0].degree(), 1);
        assert_eq!(ps[3].degree(), 2);
        assert_eq!(ps[3].q_v(), 4);
        assert_eq!(ps[3].n(), 0);
        let mut sorted = ps.clone();
        sorted.reverse();
        sorted.sort();
        assert_eq!(sorted, ps);
    }

    #[test]
    fn parse_round_trip_and_rejections() {
        let f = Fq::new(3).unwrap();
        for p in enumerate_places(&f, 2) {
            assert_eq!(Place::parse(&p.spec(), &f).unwrap(), p);
        }
        assert!(Place::parse("[1,0,1]", &f).is_ok()); // t^2+1 is irreducible over F_3
        assert!(Place::parse("[2,0,1]", &f).is_err()); // t^2+2 = (t+1)(t+2)
        assert!(Place::parse("[0,2]", &f).is_err());
        assert!(Place::parse("[0,3]", &f).is_err());
        assert!(Place::parse("[1,0]", &f).is_err());
        assert!(Place::parse("infinity", &f).is_err());
        assert!(Place::parse("[]", &f).is_err());
    }
}
