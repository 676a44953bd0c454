//! The explicit side of the trace formula: `2h(1)·log′_SΛ − ĥ(0) − ĥ(1)`
//! plus the local principal-value terms at the places of S, and the
//! vanishing of local terms outside S.
//!
//! Classes follow `d = log_q |x|`, so `u ∈ k_v^×` on shell `j` lies in class
//! `-f_v·j`, and the pullback of `h` to `k_v^×` is `j ↦ h(-f_v·j)`.

use std::collections::BTreeMap;

use num_traits::Zero;

use crate::class_vector::HFunction;
use crate::error::{Error, Result};
use crate::place::Place;
use crate::scalar::{int, pow_q, GradedScalar, Rational};
use crate::semilocal::PlaceSet;
use crate::shell::ShellFunction;

/// `log′Λ` for `Λ = q^k`: `2k + 1` classes of one unit each.
pub fn log_prime(k: i64) -> Result<GradedScalar> {
    if k < 0 {
        return Err(Error::Precondition(format!("Λ = q^{k} is below 1")));
    }
    Ok(GradedScalar::units(int(2 * k + 1)))
}

/// The same volume as `vol(O_S^×)/(q − 1) · #A(1/Λ, Λ)`, counting the
/// representatives `a` with `Λ^{-1} ≤ |a| ≤ Λ`.
pub fn log_prime_via_representatives(set: &PlaceSet, k: i64) -> Result<GradedScalar> {
    if k < 0 {
        return Err(Error::Precondition(format!("Λ = q^{k} is below 1")));
    }
    let count = set.representatives(-k, k).len() as i64;
    let per_class = crate::space::unit_group_volume(set).scale(&(int(1) / int(set.q() as i64 - 1)));
    Ok(per_class.scale(&int(count)))
}

/// `ĥ(0) = Σ h(e)` and `ĥ(1) = Σ h(e) q^{-e}`, one unit per class.
pub fn h_hats(h: &HFunction, q: u64) -> (GradedScalar, GradedScalar) {
    let h0: Rational = h.values().values().sum();
    let h1: Rational = h.values().iter().map(|(&e, v)| v * pow_q(q, -e)).sum();
    (GradedScalar::units(h0), GradedScalar::units(h1))
}

/// Restriction of `h` to `k_v^×`: shell `j` carries `h(-f_v·j)`. Classes not
/// divisible by `f_v` are never hit.
pub fn pullback(h: &HFunction, place: &Place) -> ShellFunction {
    let f = place.degree() as i64;
    let shells: BTreeMap<i64, Rational> = h
        .values()
        .iter()
        .filter(|(&e, v)| e % f == 0 && !v.is_zero())
        .map(|(&e, v)| (-e / f, v.clone()))
        .collect();
    let Some((&lo, _)) = shells.first_key_value() else {
        return ShellFunction::zero(place.clone());
    };
    let hi = *shells.last_key_value().map(|(j, _)| j).unwrap_or(&lo);
    let values = (lo..=hi)
        .map(|j| shells.get(&j).cloned().unwrap_or_else(Rational::zero))
        .collect();
    ShellFunction::new(place.clone(), lo, values, Rational::zero())
}

/// `∫′ h(u)/|u − 1| d×u` at `place`.
pub fn weil_local_term(h: &HFunction, place: &Place) -> Result<GradedScalar> {
    pullback(h, place).principal_value()
}

pub fn weil_local_terms(h: &HFunction, set: &PlaceSet) -> Result<BTreeMap<Place, GradedScalar>> {
    set.places()
        .iter()
        .map(|p| Ok((p.clone(), weil_local_term(h, p)?)))
        .collect()
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct RHSReport {
    /// `2h(1)·log′_SΛ`.
    pub term_main: GradedScalar,
    pub term_h0: GradedScalar,
    pub term_h1: GradedScalar,
    pub weil_terms: BTreeMap<Place, GradedScalar>,
    pub total: GradedScalar,
}

impl RHSReport {
    pub fn weil_sum(&self) -> Result<GradedScalar> {
        GradedScalar::sum(1, self.weil_terms.values())
    }

    /// Flat record of rationals, unit degree 1 implied.
    pub fn fields(&self) -> Vec<(String, Rational)> {
        let mut out = vec![
            ("rhs_main".to_string(), self.term_main.value().clone()),
            ("rhs_h0".to_string(), self.term_h0.value().clone()),
            ("rhs_h1".to_string(), self.term_h1.value().clone()),
        ];
        for (p, v) in &self.weil_terms {
            out.push((format!("weil[{}]", p.spec()), v.value().clone()));
        }
        out.push(("rhs_total".to_string(), self.total.value().clone()));
        out
    }
}

pub fn rhs_theorem31(k: i64, h: &HFunction, set: &PlaceSet) -> Result<RHSReport> {
    let term_main = log_prime(k)?.scale(&(int(2) * h.at_one()));
    let (term_h0, term_h1) = h_hats(h, set.q());
    let weil_terms = weil_local_terms(h, set)?;
    let weil = GradedScalar::sum(1, weil_terms.values())?;
    let total = term_main.try_sub(&term_h0)?.try_sub(&term_h1)?.try_add(&weil)?;
    Ok(RHSReport {
        term_main,
        term_h0,
        term_h1,
        weil_terms,
        total,
    })
}

/// `rhs(Λ, h̆) − rhs(Λ, h)`.
pub fn breve_defect(k: i64, h: &HFunction, set: &PlaceSet) -> Result<GradedScalar> {
    let a = rhs_theorem31(k, &h.breve(set.q()), set)?;
    let b = rhs_theorem31(k, h, set)?;
    a.total.try_sub(&b.total)
}

/// Local term at a place `w ∉ S` for `h` supported in `|e| ≤ r`, when
/// `q_w > q^r`. Returns whether it vanishes together with its value.
pub fn check_outside_vanishing(
    h: &HFunction,
    set: &PlaceSet,
    w: &Place,
    r: i64,
) -> Result<(bool, GradedScalar)> {
    if set.index_of(w).is_some() {
        return Err(Error::Precondition(format!("{} lies in S", w.spec())));
    }
    if r < 0 || h.radius() > r {
        return Err(Error::Precondition(format!(
            "h has radius {} beyond r = {r}",
            h.radius()
        )));
    }
    if Rational::from_integer(w.q_v().into()) <= pow_q(set.q(), r) {
        return Err(Error::Precondition(format!(
            "q_w = {} is not above q^r = {}",
            w.q_v(),
            pow_q(set.q(), r)
        )));
    }
    let value = weil_local_term(h, w)?;
    Ok((value.is_zero(), value))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fq::Fq;
    use crate::scalar::rat;

    fn field() -> Fq {
        Fq::new(2).unwrap()
    }

    fn set() -> PlaceSet {
        PlaceSet::parse("inf [0,1]", &field()).unwrap()
    }

    #[test]
    fn log_prime_counts_classes() {
        assert_eq!(log_prime(0).unwrap(), GradedScalar::units(int(1)));
        assert_eq!(log_prime(3).unwrap(), GradedScalar::units(int(7)));
        assert!(log_prime(-1).is_err());
        for k in 0..6 {
            assert_eq!(log_prime_via_representatives(&set(), k).unwrap(), log_prime(k).unwrap());
        }
    }

    #[test]
    fn hats() {
        let (a, b) = h_hats(&HFunction::delta(0, int(1)), 2);
        assert_eq!((a.value().clone(), b.value().clone()), (int(1), int(1)));
        let (a, b) = h_hats(&HFunction::delta(2, int(1)), 2);
        assert_eq!((a.value().clone(), b.value().clone()), (int(1), rat(1, 4)));
        let h = HFunction::new(BTreeMap::from([(-1, int(3)), (2, rat(1, 5))]));
        let (a, b) = h_hats(&h, 3);
        let (ba, bb) = h_hats(&h.breve(3), 3);
        assert_eq!((a, b), (bb, ba));
    }

    #[test]
    fn local_terms() {
        let f = field();
        let t = Place::parse("[0,1]", &f).unwrap();
        let quad = Place::parse("[1,1,1]", &f).unwrap();
        assert!(weil_local_term(&HFunction::delta(0, int(1)), &t).unwrap().is_zero());
        // class -1 is shell 1 at a degree-1 place, where |u - 1| = 1
        assert_eq!(
            weil_local_term(&HFunction::delta(-1, int(1)), &t).unwrap(),
            GradedScalar::units(int(1))
        );
        assert_eq!(
            weil_local_term(&HFunction::delta(1, int(1)), &t).unwrap(),
            GradedScalar::units(rat(1, 2))
        );
        // odd classes never meet a degree-2 place
        assert!(weil_local_term(&HFunction::delta(-1, int(1)), &quad).unwrap().is_zero());
        assert_eq!(
            weil_local_term(&HFunction::delta(2, int(1)), &quad).unwrap(),
            GradedScalar::units(rat(2, 4))
        );
    }

    #[test]
    fn assembly() {
        for k in 0..5 {
            let r = rhs_theorem31(k, &HFunction::delta(0, int(1)), &set()).unwrap();
            assert_eq!(r.total, GradedScalar::units(int(4 * k)));
            let sum = r
                .term_main
                .try_sub(&r.term_h0)
                .unwrap()
                .try_sub(&r.term_h1)
                .unwrap()
                .try_add(&r.weil_sum().unwrap())
                .unwrap();
            assert_eq!(sum, r.total);
        }
    }

    #[test]
    fn outside_vanishing() {
        let f = field();
        let quad = Place::parse("[1,1,1]", &f).unwrap();
        let h = HFunction::new(BTreeMap::from([(-1, int(2)), (0, int(5)), (1, rat(-1, 3))]));
        assert!(check_outside_vanishing(&h, &set(), &quad, 1).unwrap().0);
        let t1 = Place::parse("[1,1]", &f).unwrap();
        assert!(check_outside_vanishing(&h, &set(), &t1, 1).is_err());
        assert!(check_outside_vanishing(&h, &set(), &quad, 2).is_err());
    }
}
