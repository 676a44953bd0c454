//! Line-based experiment configuration.
//!
//! ```text
//! # comment
//! q = 2
//! S = inf [0,1]
//! h[0] = 1
//! h[-1] = 1/2
//! k_min = 0
//! k_max = 6
//! depth = auto
//! format = csv
//! mode = exact
//! ```

use std::collections::BTreeMap;
use std::fmt;
use std::str::FromStr;

use num_traits::Zero;

use crate::class_vector::HFunction;
use crate::error::{Error, Result};
use crate::fq::Fq;
use crate::scalar::{fmt_rational, parse_rational, Rational};
use crate::semilocal::PlaceSet;
use crate::space::min_depth;

/// Largest `k` a config may request.
pub const MAX_K: i64 = 64;
/// Largest `|e|` accepted in `h[e]`.
pub const MAX_H_CLASS: i64 = 64;
pub const DEFAULT_FLOAT_TERMS: usize = 400;

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum DepthPolicy {
    /// Start saturation at the smallest admissible depth.
    Auto,
    /// Start saturation at this depth; smaller than admissible is an error.
    Start(i64),
}

impl DepthPolicy {
    pub fn start(self, k: i64) -> i64 {
        match self {
            DepthPolicy::Auto => min_depth(k),
            DepthPolicy::Start(d) => d,
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum OutputFormat {
    Csv,
    Json,
}

impl FromStr for OutputFormat {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "csv" => Ok(OutputFormat::Csv),
            "json" => Ok(OutputFormat::Json),
            _ => Err(Error::parse("format", format!("expected csv or json, got {s:?}"))),
        }
    }
}

impl fmt::Display for OutputFormat {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            OutputFormat::Csv => "csv",
            OutputFormat::Json => "json",
        })
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Mode {
    Exact,
    /// Truncated `f64` sums with this many terms.
    Float { terms: usize },
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ExperimentConfig {
    pub q: u32,
    /// Place specifiers as written: `inf`, `[c0,c1,...]`.
    pub places: Vec<String>,
    pub h: BTreeMap<i64, Rational>,
    pub k_min: i64,
    pub k_max: i64,
    pub depth: DepthPolicy,
    pub format: OutputFormat,
    pub mode: Mode,
}

impl Default for ExperimentConfig {
    fn default() -> Self {
        ExperimentConfig {
            q: 2,
            places: vec!["inf".into(), "[0,1]".into()],
            h: BTreeMap::from([(0, Rational::from_integer(1.into()))]),
            k_min: 0,
            k_max: 4,
            depth: DepthPolicy::Auto,
            format: OutputFormat::Csv,
            mode: Mode::Exact,
        }
    }
}

fn parse_int(key: &str, value: &str) -> Result<i64> {
    value
        .parse()
        .map_err(|_| Error::parse("config", format!("{key}: expected an integer, got {value:?}")))
}

impl ExperimentConfig {
    pub fn parse(text: &str) -> Result<Self> {
        let mut cfg = ExperimentConfig {
            h: BTreeMap::new(),
            ..Default::default()
        };
        let mut seen: Vec<String> = Vec::new();
        let mut float_terms: Option<usize> = None;
        let mut float_mode = false;
        for (lineno, raw) in text.lines().enumerate() {
            let line = raw.split('#').next().unwrap_or("").trim();
            if line.is_empty() {
                continue;
            }
            let err = |m: String| Error::parse("config", format!("line {}: {m}", lineno + 1));
            let (key, value) = line
                .split_once('=')
                .ok_or_else(|| err("expected 'key = value'".into()))?;
            let key = key.trim();
            let value = value.trim();
            if seen.iter().any(|k| k == key) {
                return Err(err(format!("duplicate key {key}")));
            }
            seen.push(key.to_string());
            if let Some(e) = key.strip_prefix("h[").and_then(|r| r.strip_suffix(']')) {
                let e = parse_int("h", e.trim()).map_err(|e| err(e.to_string()))?;
                if e.abs() > MAX_H_CLASS {
                    return Err(err(format!("class {e} beyond ±{MAX_H_CLASS}")));
                }
                let v = parse_rational(value).map_err(|e| err(e.to_string()))?;
                if !v.is_zero() {
                    cfg.h.insert(e, v);
                }
                continue;
            }
            match key {
                "q" => {
                    let q = parse_int(key, value)?;
                    cfg.q = u32::try_from(q).map_err(|_| err(format!("q = {q} out of range")))?;
                }
                "S" => cfg.places = value.split_whitespace().map(String::from).collect(),
                "k_min" => cfg.k_min = parse_int(key, value)?,
                "k_max" => cfg.k_max = parse_int(key, value)?,
                "depth" => {
                    cfg.depth = if value == "auto" {
                        DepthPolicy::Auto
                    } else {
                        DepthPolicy::Start(parse_int(key, value)?)
                    }
                }
                "format" => cfg.format = value.parse()?,
                "mode" => match value {
                    "exact" => float_mode = false,
                    "float" => float_mode = true,
                    _ => return Err(err(format!("mode must be exact or float, got {value:?}"))),
                },
                "float_terms" => {
                    let n = parse_int(key, value)?;
                    if !(1..=100_000).contains(&n) {
                        return Err(err(format!("float_terms = {n} out of range")));
                    }
                    float_terms = Some(n as usize);
                }
                _ => return Err(err(format!("unknown key {key:?}"))),
            }
        }
        if float_mode {
            cfg.mode = Mode::Float {
                terms: float_terms.unwrap_or(DEFAULT_FLOAT_TERMS),
            };
        } else if float_terms.is_some() {
            return Err(Error::parse("config", "float_terms needs mode = float"));
        }
        cfg.check_ranges()?;
        Ok(cfg)
    }

    fn check_ranges(&self) -> Result<()> {
        let err = |m: String| Error::parse("config", m);
        if self.k_min < 0 {
            return Err(err(format!("k_min = {} must be nonnegative", self.k_min)));
        }
        if self.k_max < self.k_min || self.k_max > MAX_K {
            return Err(err(format!(
                "k_max = {} must lie in [k_min, {MAX_K}]",
                self.k_max
            )));
        }
        if self.places.is_empty() {
            return Err(err("S is empty".into()));
        }
        Ok(())
    }

    /// Builds the field and validated place set.
    pub fn place_set(&self) -> Result<PlaceSet> {
        let field = Fq::new(self.q)?;
        PlaceSet::parse(&self.places.join(" "), &field)
    }

    pub fn h_function(&self) -> HFunction {
        HFunction::new(self.h.clone())
    }

    pub fn to_text(&self) -> String {
        let mut out = String::new();
        out.push_str(&format!("q = {}\n", self.q));
        out.push_str(&format!("S = {}\n", self.places.join(" ")));
        for (e, v) in &self.h {
            out.push_str(&format!("h[{e}] = {}\n", fmt_rational(v)));
        }
        out.push_str(&format!("k_min = {}\nk_max = {}\n", self.k_min, self.k_max));
        match self.depth {
            DepthPolicy::Auto => out.push_str("depth = auto\n"),
            DepthPolicy::Start(d) => out.push_str(&format!("depth = {d}\n")),
        }
        out.push_str(&format!("format = {}\n", self.format));
        match self.mode {
            Mode::Exact => out.push_str("mode = exact\n"),
            Mode::Float { terms } => out.push_str(&format!("mode = float\nfloat_terms = {terms}\n")),
        }
        out
    }
}
