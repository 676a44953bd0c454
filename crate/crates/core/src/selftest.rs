//! Built-in oracle suites, run by `sltrace selftest`.

use std::collections::BTreeMap;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::class_vector::{h_from_pairs, ClassVector, HFunction};
use crate::config::DepthPolicy;
use crate::error::Result;
use crate::experiment::{float_row, run_row};
use crate::fq::Fq;
use crate::oracle;
use crate::place::{enumerate_places, Place};
use crate::scalar::{rat, Rational};
use crate::semilocal::PlaceSet;
use crate::shell::ShellFunction;
use crate::space::{check_duality, min_depth, Lemma32, Spaces, SubspaceBasis};

const SEED: u64 = 0x5eed_1a7e;

#[derive(Clone, Copy, Debug, Default)]
pub struct SelftestOptions {
    /// Doubles the Fourier normalizing constant inside the involution suite.
    pub corrupt_fourier: bool,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SuiteResult {
    pub name: &'static str,
    pub passed: bool,
    pub detail: String,
}

fn suite(name: &'static str, run: impl FnOnce() -> Result<(bool, String)>) -> SuiteResult {
    match run() {
        Ok((passed, detail)) => SuiteResult { name, passed, detail },
        Err(e) => SuiteResult {
            name,
            passed: false,
            detail: format!("error: {e}"),
        },
    }
}

/// A random `O_v^×`-invariant function: shells in `[-4, 4]`, small rational
/// values, and a random tail when `allow_tail`.
pub fn random_shell(rng: &mut impl Rng, place: &Place, allow_tail: bool) -> ShellFunction {
    let j_min = rng.gen_range(-4..=4);
    let len = rng.gen_range(0..=5);
    let val = |rng: &mut dyn rand::RngCore| rat(rng.gen_range(-6..=6), rng.gen_range(1..=4));
    let values = (0..len).map(|_| val(rng)).collect();
    let tail = if allow_tail { val(rng) } else { Rational::from_integer(0.into()) };
    ShellFunction::new(place.clone(), j_min, values, tail)
}

fn small_places(field: &Fq) -> Vec<Place> {
    let mut places = vec![Place::infinity(field.q())];
    places.extend(enumerate_places(field, 2).into_iter().filter(|p| !p.is_infinity()));
    places
}

fn fourier_involution(opts: SelftestOptions) -> Result<(bool, String)> {
    let field = Fq::new(2)?;
    let c = if opts.corrupt_fourier { rat(2, 1) } else { rat(1, 1) };
    let mut rng = ChaCha8Rng::seed_from_u64(SEED);
    let mut failures = 0;
    let mut total = 0;
    for place in small_places(&field) {
        for _ in 0..200 {
            let f = random_shell(&mut rng, &place, true);
            let ff = f.fourier_with_constant(&c).fourier_with_constant(&c);
            let at_zero = f.fourier_with_constant(&c).value_at_zero().clone();
            total += 1;
            if ff != f || at_zero != f.additive_integral() {
                failures += 1;
            }
        }
    }
    Ok((failures == 0, format!("{failures}/{total} functions failed")))
}

fn principal_value_oracle() -> Result<(bool, String)> {
    let field = Fq::new(2)?;
    let mut rng = ChaCha8Rng::seed_from_u64(SEED + 1);
    let mut worst = 0usize;
    for place in small_places(&field) {
        for _ in 0..50 {
            let h = random_shell(&mut rng, &place, false);
            let closed = h.principal_value()?;
            if closed.value() != &oracle::principal_value_by_cosets(&h, 2)? {
                worst += 1;
            }
        }
    }
    Ok((worst == 0, format!("{worst} mismatches")))
}

fn place_sets() -> Result<Vec<PlaceSet>> {
    let field = Fq::new(2)?;
    ["inf [0,1]", "inf [0,1] [1,1]"]
        .iter()
        .map(|s| PlaceSet::parse(s, &field))
        .collect()
}

fn orbit_sums() -> Result<(bool, String)> {
    let mut checked = 0;
    for set in place_sets()? {
        for k in 0..=2 {
            let spaces = Spaces::build(&set, k, min_depth(k))?;
            for f in &spaces.tilde.q0_functions {
                let e = f.periodize_e(&set);
                let eb = f.periodize_ebar(&set)?;
                let (lo, hi) = (-k - 3, k + 3);
                let ok = oracle::orbit_e(&set, f, lo, hi).iter().all(|(d, v)| &e.value(*d) == v)
                    && oracle::orbit_ebar(&set, f, lo, hi).iter().all(|(d, v)| &eb.value(*d) == v);
                if !ok {
                    return Ok((false, format!("mismatch for {set} at k = {k}")));
                }
                checked += 1;
            }
        }
    }
    Ok((true, format!("{checked} functions")))
}

fn duality() -> Result<(bool, String)> {
    for set in place_sets()? {
        for k in 0..=3 {
            let spaces = Spaces::build(&set, k, min_depth(k))?;
            for f in &spaces.tilde.q0_functions {
                if !check_duality(&set, f, k + 6)? {
                    return Ok((false, format!("{set}, k = {k}")));
                }
            }
        }
    }
    Ok((true, "all basis functions".into()))
}

fn mobius_round_trip() -> Result<(bool, String)> {
    for set in place_sets()? {
        let (n, m) = oracle::sieve_counts(&set, 9);
        let gf_n = set.monoid().counts(9);
        let gf_m = set.monoid().mobius_sums(9);
        let same = n.iter().zip(&gf_n).all(|(a, b)| num_bigint::BigInt::from(*a) == *b)
            && m.iter().zip(&gf_m).all(|(a, b)| num_bigint::BigInt::from(*a) == *b)
            && set.monoid().counts_euler(9) == gf_n
            && set.monoid().mobius_sums_euler(9) == gf_m;
        if !same {
            return Ok((false, format!("{set}")));
        }
        for k in 0..=2 {
            let spaces = Spaces::build(&set, k, min_depth(k))?;
            for g in spaces.qbar0.generators() {
                if !crate::space::check_inversion(&set, g, (-k - 2, k + 14))? {
                    return Ok((false, format!("T′T ≠ 1 for {set}, k = {k}")));
                }
            }
        }
    }
    Ok((true, "sieve, generating function and Euler product agree".into()))
}

fn lemma32() -> Result<(bool, String)> {
    let set = &place_sets()?[0];
    for k in 0..=3 {
        let spaces = Spaces::build(set, k, min_depth(k))?;
        for e in [0, -1, -2] {
            let l = spaces.lemma32(e)?;
            let closed_ok = !Lemma32::closed_form_applies(set, k, e) || l.lambda == l.expected;
            if l.lambda != l.sum_formula || !closed_ok || !l.along_f0.is_zero() {
                return Ok((false, format!("k = {k}, e = {e}: {l:?}")));
            }
        }
    }
    Ok((true, "k ≤ 3, e ∈ {0, -1, -2}".into()))
}

fn basis_independence() -> Result<(bool, String)> {
    let mut rng = ChaCha8Rng::seed_from_u64(SEED + 2);
    let h = h_from_pairs(&[(-1, 2), (0, 1), (2, -3)]);
    for set in place_sets()? {
        let spaces = Spaces::build(&set, 2, min_depth(2))?;
        let base = spaces.q0.project_trace(&h)?;
        let gens = spaces.q0.generators();
        // random combinations plus the originals: a dependent family
        let mut family: Vec<ClassVector> = gens.to_vec();
        for _ in 0..3 {
            let mut v = ClassVector::zero(set.q());
            for g in gens {
                v = v.add(&g.scale(&rat(rng.gen_range(-3..=3), rng.gen_range(1..=3))))?;
            }
            family.push(v);
        }
        let pinv = SubspaceBasis::with_generators(family.clone())?.project_trace(&h)?;
        family.reverse();
        let reordered = SubspaceBasis::new(family)?.project_trace(&h)?;
        if pinv != base || reordered != base {
            return Ok((false, format!("{set}: {base} vs {pinv} vs {reordered}")));
        }
    }
    Ok((true, "subset, reordering and pseudo-inverse agree".into()))
}

fn float_vs_exact() -> Result<(bool, String)> {
    let set = &place_sets()?[0];
    let h = HFunction::new(BTreeMap::from([(-1, rat(1, 2)), (0, rat(1, 1)), (1, rat(3, 1))]));
    let mut worst = 0.0f64;
    for k in 0..=3 {
        let exact = run_row(set, &h, k, DepthPolicy::Auto)?;
        let float = float_row(set, &h, k, DepthPolicy::Auto, 400)?;
        for (a, b) in [
            (&exact.tr_q0, float.tr_q0),
            (&exact.tr_qbar0, float.tr_qbar0),
            (&exact.tr_q, float.tr_q),
        ] {
            worst = worst.max((a.to_f64(set.q()) - b).abs());
        }
    }
    Ok((worst <= 1e-9, format!("max deviation {worst:.3e}")))
}

pub fn run_selftest(opts: SelftestOptions) -> Vec<SuiteResult> {
    vec![
        suite("shell_fourier_involution", || fourier_involution(opts)),
        suite("principal_value_refinement", principal_value_oracle),
        suite("orbit_sums", orbit_sums),
        suite("duality", duality),
        suite("mobius_round_trip", mobius_round_trip),
        suite("lemma32_eigenvalue", lemma32),
        suite("basis_independence", basis_independence),
        suite("float_vs_exact", float_vs_exact),
    ]
}
