//! Running a configuration over `k_min..=k_max`.
//!
//! Rows are computed concurrently and returned in order of `k`, so exact
//! output does not depend on the thread count.

use std::time::Instant;

use rayon::prelude::*;

use crate::class_vector::HFunction;
use crate::config::{DepthPolicy, ExperimentConfig, Mode};
use crate::error::{Error, Result};
use crate::float::float_trace;
use crate::place::enumerate_places;
use crate::report::{FloatRow, TraceRow};
use crate::scalar::pow_q;
use crate::semilocal::PlaceSet;
use crate::space::Spaces;
use crate::weil::rhs_theorem31;

#[derive(Clone, Debug)]
pub struct Experiment {
    pub rows: Vec<TraceRow>,
    pub warnings: Vec<String>,
}

/// Places with `q_v ≤ q^r` missing from S, where `r` is the radius of `h`.
/// The semi-local identity is only claimed when there are none.
pub fn identity_warnings(set: &PlaceSet, h: &HFunction) -> Vec<String> {
    let r = h.radius();
    if r == 0 {
        return Vec::new();
    }
    enumerate_places(set.field(), r as u32)
        .into_iter()
        .filter(|p| set.index_of(p).is_none())
        .map(|p| {
            format!(
                "h has radius {r} but S lacks {} (q_v = {} ≤ q^{r}); the identity gap need not vanish",
                p.spec(),
                p.q_v()
            )
        })
        .collect()
}

pub fn run_row(set: &PlaceSet, h: &HFunction, k: i64, depth: DepthPolicy) -> Result<TraceRow> {
    let start = Instant::now();
    let spaces = Spaces::build(set, k, depth.start(k))?;
    let mut row = trace_row(&spaces, h)?;
    row.elapsed = start.elapsed();
    Ok(row)
}

/// One report row from already built spaces.
pub fn trace_row(spaces: &Spaces, h: &HFunction) -> Result<TraceRow> {
    let start = Instant::now();
    let (set, k) = (&spaces.set, spaces.k);
    let traces = spaces.traces(h)?;
    let rhs = rhs_theorem31(k, h, set)?;
    let gap_identity = traces.q0.try_sub(&traces.qbar0)?;
    let gap_thm31 = traces.q0.try_sub(&rhs.total)?;
    let gap_lemma35 = traces
        .q
        .try_sub(&traces.q0)?
        .try_sub(&rhs.term_h0.try_add(&rhs.term_h1)?)?;
    Ok(TraceRow {
        k,
        lambda: pow_q(set.q(), k),
        depth: spaces.tilde.depth,
        dim_q: spaces.q.rank(),
        dim_q0: spaces.q0.rank(),
        dim_qbar0: spaces.qbar0.rank(),
        tr_q0: traces.q0,
        tr_qbar0: traces.qbar0,
        tr_q: traces.q,
        rhs,
        gap_identity,
        gap_thm31,
        gap_lemma35,
        elapsed: start.elapsed(),
    })
}

pub fn run_experiment(cfg: &ExperimentConfig) -> Result<Experiment> {
    let set = cfg.place_set()?;
    let h = cfg.h_function();
    let rows = (cfg.k_min..=cfg.k_max)
        .into_par_iter()
        .map(|k| run_row(&set, &h, k, cfg.depth))
        .collect::<Result<Vec<_>>>()?;
    Ok(Experiment {
        rows,
        warnings: identity_warnings(&set, &h),
    })
}

pub fn float_row(set: &PlaceSet, h: &HFunction, k: i64, depth: DepthPolicy, terms: usize) -> Result<FloatRow> {
    let spaces = Spaces::build(set, k, depth.start(k))?;
    let ln_q = (set.q() as f64).ln();
    Ok(FloatRow {
        k,
        tr_q0: float_trace(spaces.q0.generators(), h, terms)? * ln_q,
        tr_qbar0: float_trace(spaces.qbar0.generators(), h, terms)? * ln_q,
        tr_q: float_trace(spaces.q.generators(), h, terms)? * ln_q,
    })
}

pub fn run_float(cfg: &ExperimentConfig) -> Result<Vec<FloatRow>> {
    let Mode::Float { terms } = cfg.mode else {
        return Err(Error::Precondition("config is not in float mode".into()));
    };
    let set = cfg.place_set()?;
    let h = cfg.h_function();
    (cfg.k_min..=cfg.k_max)
        .into_par_iter()
        .map(|k| float_row(&set, &h, k, cfg.depth, terms))
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::class_vector::h_from_pairs;
    use crate::fq::Fq;

    #[test]
    fn warns_when_small_places_are_missing() {
        let f = Fq::new(2).unwrap();
        let s = PlaceSet::parse("inf [0,1]", &f).unwrap();
        assert!(identity_warnings(&s, &h_from_pairs(&[(0, 1)])).is_empty());
        assert_eq!(identity_warnings(&s, &h_from_pairs(&[(1, 1)])).len(), 1);
        let s3 = PlaceSet::parse("inf [0,1] [1,1]", &f).unwrap();
        assert!(identity_warnings(&s3, &h_from_pairs(&[(-1, 1), (1, 1)])).is_empty());
    }

    #[test]
    fn rows_are_ordered() {
        let cfg = ExperimentConfig {
            k_max: 3,
            ..Default::default()
        };
        let ex = run_experiment(&cfg).unwrap();
        let ks: Vec<i64> = ex.rows.iter().map(|r| r.k).collect();
        assert_eq!(ks, vec![0, 1, 2, 3]);
        assert!(ex.rows.iter().all(|r| r.gap_identity.is_zero()));
    }
}
