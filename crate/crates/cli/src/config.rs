//! Run configuration, parameter ranges and the config hash stamped on every
//! output.

use num_rational::BigRational;
use serde::Serialize;
use sha2::{Digest, Sha256};
use steklov_lab::precision::parse_ratio;

use crate::Failure;

/// A decimal given on the command line, kept exact next to its float.
#[derive(Debug, Clone, PartialEq)]
pub struct Decimal {
    pub text: String,
    pub value: f64,
    pub exact: BigRational,
}

impl Decimal {
    pub fn parse(text: &str) -> Result<Self, String> {
        let exact = parse_ratio(text).ok_or_else(|| format!("`{text}` is not a decimal number"))?;
        let value: f64 = text.parse().map_err(|_| format!("`{text}` is not a decimal number"))?;
        Ok(Decimal { text: text.to_string(), value, exact })
    }
}

impl Serialize for Decimal {
    fn serialize<S: serde::Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        s.serialize_str(&self.text)
    }
}

/// Everything that determines a run's results. The output directory and
/// thread count are left out: they never change what is computed.
#[derive(Debug, Clone, Default, Serialize)]
pub struct RunConfig {
    pub command: &'static str,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub surface: Option<String>,
    /// SHA-256 of the surface file contents.
    #[serde(skip_serializing_if = "Option::is_none")]
    pub surface_sha256: Option<String>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub resolution: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub k: Option<usize>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub with_levelset: Option<bool>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub eps: Option<Decimal>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub eps_prime: Option<Decimal>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub c1: Option<Decimal>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub c2: Option<Decimal>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub budget: Option<usize>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub grid: Option<String>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub precision: Option<u32>,
    pub version: &'static str,
}

impl RunConfig {
    pub fn new(command: &'static str) -> Self {
        RunConfig { command, version: env!("CARGO_PKG_VERSION"), ..Default::default() }
    }

    pub fn to_json(&self) -> serde_json::Value {
        serde_json::to_value(self).expect("config serializes")
    }

    /// SHA-256 of the compact JSON form.
    pub fn hash(&self) -> String {
        sha256_hex(self.to_json().to_string().as_bytes())
    }
}

pub fn sha256_hex(bytes: &[u8]) -> String {
    hex::encode(Sha256::digest(bytes))
}

pub const MAX_BUDGET: usize = 16;
pub const MAX_K: usize = 64;
pub const MAX_PRECISION: u32 = 2000;

fn bad(msg: String) -> Failure {
    Failure::Input(msg)
}

pub fn check_resolution(r: f64) -> Result<f64, Failure> {
    if r.is_finite() && r > 0.0 && r <= 1.0 {
        Ok(r)
    } else {
        Err(bad(format!("--resolution {r} must lie in (0, 1]")))
    }
}

pub fn check_k(k: usize) -> Result<usize, Failure> {
    if (1..=MAX_K).contains(&k) {
        Ok(k)
    } else {
        Err(bad(format!("-k {k} must lie in 1..={MAX_K}")))
    }
}

pub fn check_eps(e: &Decimal) -> Result<(), Failure> {
    if e.value > 0.0 && e.value < 0.5 {
        Ok(())
    } else {
        Err(bad(format!("--eps {} must lie in (0, 1/2)", e.text)))
    }
}

pub fn check_eps_prime(e: &Decimal) -> Result<(), Failure> {
    if e.value >= 0.0 && e.value < 1.0 {
        Ok(())
    } else {
        Err(bad(format!("--eps-prime {} must lie in [0, 1)", e.text)))
    }
}

pub fn check_c1(c1: &Decimal) -> Result<(), Failure> {
    if c1.value > 0.0 && c1.value < 1.0 {
        Ok(())
    } else {
        Err(bad(format!("--c1 {} must lie in (0, 1)", c1.text)))
    }
}

pub fn check_c1_c2(c1: &Decimal, c2: &Decimal) -> Result<(), Failure> {
    check_c1(c1)?;
    if c2.exact > c1.exact {
        Ok(())
    } else {
        Err(bad(format!("--c2 {} must exceed --c1 {}", c2.text, c1.text)))
    }
}

pub fn check_budget(b: usize) -> Result<usize, Failure> {
    if (1..=MAX_BUDGET).contains(&b) {
        Ok(b)
    } else {
        Err(bad(format!("--budget {b} must lie in 1..={MAX_BUDGET}")))
    }
}

pub fn check_precision(p: u32) -> Result<u32, Failure> {
    if (1..=MAX_PRECISION).contains(&p) {
        Ok(p)
    } else {
        Err(bad(format!("--precision {p} must lie in 1..={MAX_PRECISION}")))
    }
}
