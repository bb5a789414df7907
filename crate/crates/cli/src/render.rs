//! Output formats for exact values.

use serde_json::{json, Value};
use strata_core::exact_arith::MAX_DECIMAL_DIGITS;
use strata_core::PiValue;

use crate::CliError;

pub const DEFAULT_DIGITS: usize = 50;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Default, clap::ValueEnum)]
pub enum Format {
    /// `num/den * pi^e`
    #[default]
    Exact,
    /// Fixed-point decimal with `--digits` fractional digits
    Decimal,
    /// One JSON document per command
    Json,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct Renderer {
    pub format: Format,
    pub digits: usize,
}

impl Default for Renderer {
    fn default() -> Self {
        Self {
            format: Format::Exact,
            digits: DEFAULT_DIGITS,
        }
    }
}

impl Renderer {
    pub fn new(format: Format, digits: usize) -> Result<Self, CliError> {
        if digits > MAX_DECIMAL_DIGITS {
            return Err(CliError::Invalid(format!(
                "--digits {digits} exceeds the maximum of {MAX_DECIMAL_DIGITS}"
            )));
        }
        Ok(Self { format, digits })
    }

    /// Text form of a value for the exact and decimal formats.
    pub fn value(&self, v: &PiValue) -> String {
        match self.format {
            Format::Decimal => v.to_decimal(self.digits),
            _ => v.to_string(),
        }
    }
}

/// `{num, den, pi_exp}` of a monomial; zero is reported with `zero_exp`.
pub fn monomial_json(v: &PiValue, zero_exp: i64) -> Value {
    match v.as_monomial() {
        Some((q, e)) => json!({
            "num": q.numer().to_string(),
            "den": q.denom().to_string(),
            "pi_exp": e,
        }),
        None if v.is_zero() => json!({ "num": "0", "den": "1", "pi_exp": zero_exp }),
        None => json!({ "exact": v.to_string() }),
    }
}

pub fn to_json_text(v: &Value) -> String {
    let mut s = serde_json::to_string_pretty(v).expect("json value serializes");
    s.push('\n');
    s
}
