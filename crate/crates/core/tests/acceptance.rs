//! Acceptance criteria P1–P10. Each test prints one `P<n> PASS|FAIL` line
//! (visible with `--nocapture`) and fails when the criterion does.
//!
//! Run: `cargo test -p sltrace-core --test acceptance -- --nocapture --test-threads 1`

use std::collections::BTreeMap;
use std::sync::OnceLock;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;

use sltrace::class_vector::{h_from_pairs, HFunction};
use sltrace::experiment::trace_row;
use sltrace::fq::Fq;
use sltrace::oracle;
use sltrace::place::{enumerate_places, Place};
use sltrace::report::TraceRow;
use sltrace::scalar::{rat, to_f64, GradedScalar};
use sltrace::selftest::random_shell;
use sltrace::semilocal::PlaceSet;
use sltrace::space::{check_duality, check_inversion, min_depth, Lemma32, Spaces};
use sltrace::weil::check_outside_vanishing;

/// Float oracle tolerance for P1.
const P1_TOL: f64 = 1e-9;
/// Largest `k` for the exact criteria.
const K_MAX: i64 = 8;
/// Decay window for P5–P7: non-increasing on `[DECAY_FROM, K_MAX]` and
/// `|gap(K_MAX)| <= |gap(DECAY_FROM)| / DECAY_FACTOR`.
const DECAY_FROM: i64 = 4;
const DECAY_FACTOR: i64 = 4;

fn verdict(id: &str, ok: bool, detail: String) {
    println!("{id} {} {detail}", if ok { "PASS" } else { "FAIL" });
    assert!(ok, "{id}: {detail}");
}

fn two_places() -> PlaceSet {
    PlaceSet::parse("inf [0,1]", &Fq::new(2).unwrap()).unwrap()
}

fn three_places() -> PlaceSet {
    PlaceSet::parse("inf [0,1] [1,1]", &Fq::new(2).unwrap()).unwrap()
}

fn build_all(set: &PlaceSet) -> Vec<Spaces> {
    (0..=K_MAX)
        .into_par_iter()
        .map(|k| Spaces::build(set, k, min_depth(k)).unwrap())
        .collect()
}

fn spaces2() -> &'static [Spaces] {
    static CELL: OnceLock<Vec<Spaces>> = OnceLock::new();
    CELL.get_or_init(|| build_all(&two_places()))
}

fn spaces3() -> &'static [Spaces] {
    static CELL: OnceLock<Vec<Spaces>> = OnceLock::new();
    CELL.get_or_init(|| build_all(&three_places()))
}

/// The fixed test functions for P5 and P6.
fn test_hs() -> Vec<(&'static str, HFunction)> {
    vec![
        ("d0", h_from_pairs(&[(0, 1)])),
        ("d1", h_from_pairs(&[(1, 1)])),
        ("d-1", h_from_pairs(&[(-1, 1)])),
        ("d-1+d1", h_from_pairs(&[(-1, 1), (1, 1)])),
        (
            "mix",
            HFunction::new(BTreeMap::from([(-1, rat(1, 2)), (0, rat(1, 1)), (1, rat(3, 1))])),
        ),
    ]
}

fn rows(spaces: &[Spaces], h: &HFunction) -> Vec<TraceRow> {
    spaces.par_iter().map(|s| trace_row(s, h).unwrap()).collect()
}

/// Decay criterion on `gaps[k]`, `k = 0..=K_MAX`.
fn decays(gaps: &[GradedScalar]) -> bool {
    let abs: Vec<GradedScalar> = gaps.iter().map(GradedScalar::abs).collect();
    let window = &abs[DECAY_FROM as usize..=K_MAX as usize];
    let monotone = window
        .windows(2)
        .all(|w| w[1].try_cmp(&w[0]).unwrap().is_le());
    let bound = window[0].scale(&rat(1, DECAY_FACTOR));
    monotone && window.last().unwrap().try_cmp(&bound).unwrap().is_le()
}

fn show(gaps: &[GradedScalar]) -> String {
    let v: Vec<String> = gaps.iter().map(|g| g.value().to_string()).collect();
    format!("[{}]", v.join(", "))
}

fn decay_criterion(id: &str, spaces: &[Spaces], hs: &[(&str, HFunction)], gap: fn(&TraceRow) -> GradedScalar) {
    let mut failed = Vec::new();
    let mut detail = Vec::new();
    for (name, h) in hs {
        let gaps: Vec<GradedScalar> = rows(spaces, h).iter().map(gap).collect();
        if !decays(&gaps) {
            failed.push(*name);
        }
        detail.push(format!("{name}: {}", show(&gaps)));
    }
    verdict(
        id,
        failed.is_empty(),
        format!("non-decaying: {failed:?}; gaps k=0..{K_MAX}: {}", detail.join("; ")),
    );
}

fn places_to_degree_two(q: u32) -> Vec<Place> {
    let field = Fq::new(q).unwrap();
    let mut v = vec![Place::infinity(q)];
    v.extend(enumerate_places(&field, 2).into_iter().filter(|p| !p.is_infinity()));
    v
}

#[test]
fn p1_principal_value() {
    let mut rng = ChaCha8Rng::seed_from_u64(1);
    let mut exact_bad = 0;
    let mut worst = 0.0f64;
    let mut n = 0;
    for place in places_to_degree_two(2) {
        for _ in 0..50 {
            let h = random_shell(&mut rng, &place, false);
            let closed = h.principal_value().unwrap();
            if closed.value() != &oracle::principal_value_by_cosets(&h, 2).unwrap() {
                exact_bad += 1;
            }
            let approx = oracle::principal_value_by_cosets_f64(&h, 2).unwrap();
            worst = worst.max((to_f64(closed.value()) - approx).abs());
            n += 1;
        }
    }
    verdict(
        "P1",
        exact_bad == 0 && worst <= P1_TOL,
        format!("{n} functions; exact mismatches {exact_bad}; max float deviation {worst:.3e} (tol {P1_TOL:e})"),
    );
}

#[test]
fn p2_fourier_involution() {
    let mut rng = ChaCha8Rng::seed_from_u64(2);
    let mut bad = 0;
    let mut n = 0;
    for place in places_to_degree_two(2) {
        for _ in 0..200 {
            let f = random_shell(&mut rng, &place, true);
            let fh = f.fourier();
            if fh.fourier() != f || fh.value_at_zero() != &f.additive_integral() {
                bad += 1;
            }
            n += 1;
        }
    }
    verdict("P2", bad == 0, format!("{bad}/{n} failures"));
}

#[test]
fn p3_duality() {
    let set = two_places();
    let mut checked = 0;
    let mut bad = Vec::new();
    for s in spaces2() {
        for f in &s.tilde.q0_functions {
            if !check_duality(&set, f, s.k + 6).unwrap() {
                bad.push(s.k);
            }
            checked += 1;
        }
    }
    verdict("P3", bad.is_empty(), format!("{checked} basis functions, k <= {K_MAX}; failing k: {bad:?}"));
}

#[test]
fn p4_lemma32_eigenvalue() {
    let set = two_places();
    let mut closed_bad = Vec::new();
    let mut sum_bad = Vec::new();
    let mut off_axis = Vec::new();
    for s in spaces2() {
        for e in [0, -1, -2] {
            let l = s.lemma32(e).unwrap();
            if l.lambda != l.expected {
                closed_bad.push(format!(
                    "(k={}, e={e}: got {}, closed form {}, closed form valid: {})",
                    s.k,
                    l.lambda.value(),
                    l.expected.value(),
                    Lemma32::closed_form_applies(&set, s.k, e)
                ));
            }
            if l.lambda != l.sum_formula {
                sum_bad.push((s.k, e));
            }
            if !l.along_f0.is_zero() {
                off_axis.push((s.k, e));
            }
        }
    }
    verdict(
        "P4",
        closed_bad.is_empty(),
        format!(
            "closed-form mismatches: [{}]; sum-form mismatches: {sum_bad:?}; nonzero E(f_0) components: {off_axis:?}",
            closed_bad.join(" ")
        ),
    );
}

#[test]
fn p5_lemma35_gap() {
    decay_criterion("P5", spaces2(), &test_hs(), |r| r.gap_lemma35.clone());
}

#[test]
fn p6_theorem31_gap() {
    decay_criterion("P6", spaces2(), &test_hs(), |r| r.gap_thm31.clone());
}

#[test]
fn p7_semilocal_identity() {
    let class_zero = [h_from_pairs(&[(0, 1)]), HFunction::new(BTreeMap::from([(0, rat(-7, 3))]))];
    let mut exact_bad = Vec::new();
    for (label, spaces) in [("{inf,t}", spaces2()), ("{inf,t,t+1}", spaces3())] {
        for h in &class_zero {
            for r in rows(spaces, h) {
                if !r.gap_identity.is_zero() {
                    exact_bad.push(format!("{label} k={}", r.k));
                }
            }
        }
    }
    println!(
        "  P7(a) {} class-0 support: nonzero gaps {exact_bad:?}",
        if exact_bad.is_empty() { "PASS" } else { "FAIL" }
    );
    // |e| <= 1 needs every place with q_v <= q in S: inf, t, t+1 for q = 2
    let radius_one: Vec<(&str, HFunction)> = test_hs().into_iter().skip(1).collect();
    let mut failed = Vec::new();
    let mut detail = Vec::new();
    let mut global = Vec::new();
    for (name, h) in &radius_one {
        let rs = rows(spaces3(), h);
        let gaps: Vec<GradedScalar> = rs.iter().map(|r| r.gap_identity.clone()).collect();
        if !decays(&gaps) {
            failed.push(*name);
        }
        detail.push(format!("{name}: {}", show(&gaps)));
        let vs_rhs: Vec<GradedScalar> = rs.iter().map(|r| r.tr_qbar0.try_sub(&r.rhs.total).unwrap()).collect();
        global.push(format!("{name}: {}", show(&vs_rhs)));
    }
    println!(
        "  P7(b) {} radius-1 support on {{inf,t,t+1}}: non-decaying {failed:?}; gaps: {}; trQbar0 - rhs: {}",
        if failed.is_empty() { "PASS" } else { "FAIL" },
        detail.join("; "),
        global.join("; ")
    );
    verdict(
        "P7",
        exact_bad.is_empty() && failed.is_empty(),
        format!("(a) {} (b) {}", exact_bad.is_empty(), failed.is_empty()),
    );
}

#[test]
fn p8_inversion() {
    let h = test_hs().pop().unwrap().1;
    let mut bad_inverse = Vec::new();
    let mut bad_trace = Vec::new();
    let mut vectors = 0;
    for (label, spaces) in [("{inf,t}", spaces2()), ("{inf,t,t+1}", spaces3())] {
        for s in spaces {
            for g in s.qbar0.generators() {
                vectors += 1;
                if !check_inversion(&s.set, g, (-s.k - 2, s.k + 14)).unwrap() {
                    bad_inverse.push(format!("{label} k={}", s.k));
                }
            }
            let direct = s.qbar0.project_trace(&h).unwrap();
            if s.qbar0_trace_via_t(&h).unwrap() != direct {
                bad_trace.push(format!("{label} k={}", s.k));
            }
        }
    }
    verdict(
        "P8",
        bad_inverse.is_empty() && bad_trace.is_empty(),
        format!("{vectors} vectors; T'T != id at {bad_inverse:?}; trace mismatch at {bad_trace:?}"),
    );
}

#[test]
fn p9_dimension_saturation() {
    let mut problems = Vec::new();
    let mut dims = Vec::new();
    for s in spaces2() {
        let rec = &s.tilde.saturation;
        let at = rec.iter().position(|r| r.depth == s.tilde.depth).unwrap();
        let run = &rec[at..];
        let stable = run.len() >= 3 && run[..3].iter().all(|r| r.dim_q == run[0].dim_q && r.dim_q0 == run[0].dim_q0);
        if !stable || run[0].dim_q0 != s.q0.rank() {
            problems.push(format!("k={} not stable: {rec:?}", s.k));
        }
        dims.push((s.q.rank(), s.q0.rank(), s.qbar0.rank()));
    }
    for (k, w) in dims.windows(2).enumerate() {
        if w[1].1 != w[0].1 + 2 {
            problems.push(format!("dim Q0 grows {} -> {} at k={}", w[0].1, w[1].1, k + 1));
        }
    }
    // recorded values: dim Q0 = dim Q̄0 = 2k + 1, dim Q = 2k + 3, no exceptional k
    for (k, d) in dims.iter().enumerate() {
        if *d != (2 * k + 3, 2 * k + 1, 2 * k + 1) {
            problems.push(format!("k={k}: regression {d:?}"));
        }
    }
    verdict("P9", problems.is_empty(), format!("(dimQ, dimQ0, dimQbar0) for k=0..{K_MAX}: {dims:?}; {problems:?}"));
}

#[test]
fn p10_vanishing_outside_s() {
    let mut rng = ChaCha8Rng::seed_from_u64(10);
    let mut bad = Vec::new();
    let mut checked = 0;
    for q in [2u32, 3] {
        let field = Fq::new(q).unwrap();
        let set = PlaceSet::parse("inf [0,1]", &field).unwrap();
        let mut hs: Vec<HFunction> = (-1..=1).map(|e| h_from_pairs(&[(e, 1)])).collect();
        for _ in 0..20 {
            let m = (-1..=1)
                .map(|e| (e, rat(rng.gen_range(-9..=9), rng.gen_range(1..=5))))
                .collect();
            hs.push(HFunction::new(m));
        }
        for w in enumerate_places(&field, 2).into_iter().filter(|p| p.degree() == 2) {
            for h in &hs {
                let (zero, value) = check_outside_vanishing(h, &set, &w, 1).unwrap();
                checked += 1;
                if !zero {
                    bad.push(format!("q={q} w={} value {}", w.spec(), value.value()));
                }
            }
        }
    }
    verdict("P10", bad.is_empty(), format!("{checked} (w, h) pairs; nonzero: {bad:?}"));
}
