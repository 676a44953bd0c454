//! Exact semi-local trace computations over the rational function field F_q(t).

pub mod class_vector;
pub mod config;
pub mod error;
pub mod experiment;
pub mod float;
pub mod fq;
pub mod linalg;
pub mod monoid;
pub mod oracle;
pub mod place;
pub mod poly;
pub mod report;
pub mod scalar;
pub mod selftest;
pub mod semilocal;
pub mod shell;
pub mod space;
pub mod weil;

pub use error::{Error, Result};
