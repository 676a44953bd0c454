//! Per-`k` report rows and their CSV / JSON renderings.

use std::io::{self, Write};
use std::time::Duration;

use serde_json::{json, Map, Value};

use crate::scalar::{fmt_rational, GradedScalar, Rational};
use crate::weil::RHSReport;

pub const CSV_COLUMNS: [&str; 14] = [
    "k",
    "Lambda",
    "dimQ0",
    "dimQbar0",
    "trQ0",
    "trQbar0",
    "trQfull",
    "rhs_main",
    "rhs_h0",
    "rhs_h1",
    "rhs_weil",
    "gap_identity",
    "gap_thm31",
    "gap_lemma35",
];

#[derive(Clone, Debug)]
pub struct TraceRow {
    pub k: i64,
    /// `Λ = q^k`.
    pub lambda: Rational,
    /// Depth at which the dimensions saturated.
    pub depth: i64,
    pub dim_q: usize,
    pub dim_q0: usize,
    pub dim_qbar0: usize,
    pub tr_q0: GradedScalar,
    pub tr_qbar0: GradedScalar,
    pub tr_q: GradedScalar,
    pub rhs: RHSReport,
    /// `tr Q_0 U(h) − tr Q̄_0 U(h)`.
    pub gap_identity: GradedScalar,
    /// `tr Q_0 U(h) − rhs`.
    pub gap_thm31: GradedScalar,
    /// `tr (Q − Q_0) U(h) − ĥ(0) − ĥ(1)`.
    pub gap_lemma35: GradedScalar,
    /// Wall time; not part of any serialization.
    pub elapsed: Duration,
}

impl TraceRow {
    pub fn rhs_weil(&self) -> Rational {
        self.rhs.weil_terms.values().map(|v| v.value()).sum()
    }

    pub fn csv_record(&self) -> Vec<String> {
        let r = |g: &GradedScalar| fmt_rational(g.value());
        vec![
            self.k.to_string(),
            self.lambda.to_string(),
            self.dim_q0.to_string(),
            self.dim_qbar0.to_string(),
            r(&self.tr_q0),
            r(&self.tr_qbar0),
            r(&self.tr_q),
            r(&self.rhs.term_main),
            r(&self.rhs.term_h0),
            r(&self.rhs.term_h1),
            fmt_rational(&self.rhs_weil()),
            r(&self.gap_identity),
            r(&self.gap_thm31),
            r(&self.gap_lemma35),
        ]
    }

    pub fn to_json(&self) -> Value {
        let mut m = Map::new();
        for (key, val) in CSV_COLUMNS.iter().zip(self.csv_record()) {
            m.insert((*key).to_string(), Value::String(val));
        }
        m.insert("dimQ".into(), json!(self.dim_q));
        m.insert("depth".into(), json!(self.depth));
        let weil: Map<String, Value> = self
            .rhs
            .weil_terms
            .iter()
            .map(|(p, v)| (p.spec(), Value::String(fmt_rational(v.value()))))
            .collect();
        m.insert("weil".into(), Value::Object(weil));
        m.insert("rhs_total".into(), Value::String(fmt_rational(self.rhs.total.value())));
        Value::Object(m)
    }
}

pub fn write_csv<W: Write>(mut out: W, rows: &[TraceRow]) -> io::Result<()> {
    writeln!(out, "{}", CSV_COLUMNS.join(","))?;
    for row in rows {
        writeln!(out, "{}", row.csv_record().join(","))?;
    }
    Ok(())
}

pub fn write_json<W: Write>(mut out: W, rows: &[TraceRow]) -> io::Result<()> {
    let v = Value::Array(rows.iter().map(TraceRow::to_json).collect());
    serde_json::to_writer_pretty(&mut out, &v)?;
    writeln!(out)
}

/// Float-mode traces, already multiplied by `ln q`.
#[derive(Clone, Debug, PartialEq)]
pub struct FloatRow {
    pub k: i64,
    pub tr_q0: f64,
    pub tr_qbar0: f64,
    pub tr_q: f64,
}

pub const FLOAT_COLUMNS: [&str; 4] = ["k", "trQ0", "trQbar0", "trQfull"];

pub fn write_float_csv<W: Write>(mut out: W, rows: &[FloatRow]) -> io::Result<()> {
    writeln!(out, "{}", FLOAT_COLUMNS.join(","))?;
    for r in rows {
        writeln!(out, "{},{:.15e},{:.15e},{:.15e}", r.k, r.tr_q0, r.tr_qbar0, r.tr_q)?;
    }
    Ok(())
}

pub fn write_float_json<W: Write>(mut out: W, rows: &[FloatRow]) -> io::Result<()> {
    let v: Vec<Value> = rows
        .iter()
        .map(|r| json!({"k": r.k, "trQ0": r.tr_q0, "trQbar0": r.tr_qbar0, "trQfull": r.tr_q}))
        .collect();
    serde_json::to_writer_pretty(&mut out, &v)?;
    writeln!(out)
}
