use std::fmt;

use serde::Serialize;

use crate::error::{Error, Result};

/// Units accepted in measure literals.
pub const UNITS: &[&str] = &["second", "USD", "FRF", "in", "cm", "m", "km", "g", "kg", "lb"];

#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize)]
#[serde(transparent)]
pub struct Unit(String);

impl Unit {
    pub fn new(name: &str) -> Result<Self> {
        if UNITS.contains(&name) {
            Ok(Unit(name.to_string()))
        } else {
            Err(Error::UnknownUnit(name.to_string()))
        }
    }

    pub fn as_str(&self) -> &str {
        &self.0
    }

    pub fn is_time(&self) -> bool {
        self.0 == "second"
    }

    pub fn is_currency(&self) -> bool {
        matches!(self.0.as_str(), "USD" | "FRF")
    }
}

impl fmt::Display for Unit {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.0)
    }
}

/// A number with a unit. The number keeps its source spelling so that
/// `3.1536e+07` is written back exactly as read; equality compares that
/// spelling.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Measure {
    unit: Unit,
    #[serde(rename = "value")]
    text: String,
    #[serde(skip)]
    value: f64,
}

impl Measure {
    pub fn new(unit: &str, number: &str) -> Result<Self> {
        let unit = Unit::new(unit)?;
        let value = parse_number(number)?;
        Ok(Measure { unit, text: number.to_string(), value })
    }

    pub fn unit(&self) -> &Unit {
        &self.unit
    }

    pub fn value(&self) -> f64 {
        self.value
    }

    /// The number exactly as written.
    pub fn number_text(&self) -> &str {
        &self.text
    }

    /// True when unit and numeric value agree, whatever the spelling.
    pub fn same_quantity(&self, unit: &str, value: f64) -> bool {
        self.unit.as_str() == unit && self.value == value
    }
}

/// Canonical form: `NUMBER:<unit>:<number>`.
impl fmt::Display for Measure {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "NUMBER:{}:{}", self.unit, self.text)
    }
}

fn parse_number(text: &str) -> Result<f64> {
    let malformed = || Error::MalformedNumber(text.to_string());
    if text.is_empty() || !number_prefix_len(text).is_some_and(|n| n == text.len()) {
        return Err(malformed());
    }
    let value: f64 = text.parse().map_err(|_| malformed())?;
    if value.is_finite() {
        Ok(value)
    } else {
        Err(malformed())
    }
}

/// Length of the longest prefix of `s` shaped like a decimal or scientific
/// number (`-1`, `.25`, `3.1536e+07`), if any digits are present.
fn number_prefix_len(s: &str) -> Option<usize> {
    let b = s.as_bytes();
    let mut i = 0;
    if i < b.len() && (b[i] == b'+' || b[i] == b'-') {
        i += 1;
    }
    let int_start = i;
    while i < b.len() && b[i].is_ascii_digit() {
        i += 1;
    }
    let mut digits = i - int_start;
    if i < b.len() && b[i] == b'.' {
        let frac_start = i + 1;
        let mut j = frac_start;
        while j < b.len() && b[j].is_ascii_digit() {
            j += 1;
        }
        digits += j - frac_start;
        if digits > 0 {
            i = j;
        }
    }
    if digits == 0 {
        return None;
    }
    if i < b.len() && (b[i] == b'e' || b[i] == b'E') {
        let mut j = i + 1;
        if j < b.len() && (b[j] == b'+' || b[j] == b'-') {
            j += 1;
        }
        let exp_start = j;
        while j < b.len() && b[j].is_ascii_digit() {
            j += 1;
        }
        if j > exp_start {
            i = j;
        }
    }
    Some(i)
}

/// True when `token` should be read as a measure rather than a symbol.
pub(crate) fn looks_like_measure(token: &str) -> bool {
    if token.starts_with("NUMBER:") {
        return true;
    }
    match number_prefix_len(token) {
        Some(n) => {
            let suffix = &token[n..];
            // `.25in` and `-3second` are measures; `3d-printer` is a symbol.
            token.starts_with(['.', '+', '-']) || UNITS.contains(&suffix)
        }
        None => false,
    }
}

/// Parses `NUMBER:<unit>:<number>` or `<number><unit>` (e.g. `.25in`).
pub fn parse_measure(token: &str) -> Result<Measure> {
    if let Some(rest) = token.strip_prefix("NUMBER:") {
        let (unit, number) = rest.split_once(':').ok_or_else(|| Error::MalformedNumber(token.to_string()))?;
        return Measure::new(unit, number);
    }
    let n = number_prefix_len(token).ok_or_else(|| Error::MalformedNumber(token.to_string()))?;
    let (number, unit) = token.split_at(n);
    if unit.is_empty() {
        return Err(Error::UnknownUnit(String::new()));
    }
    Measure::new(unit, number)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn prefixed_forms() {
        let m = parse_measure("NUMBER:second:3600").unwrap();
        assert!(m.same_quantity("second", 3600.0));
        let m = parse_measure("NUMBER:USD:0.33").unwrap();
        assert!(m.same_quantity("USD", 0.33));
        let m = parse_measure("NUMBER:second:3.1536e+07").unwrap();
        assert!(m.same_quantity("second", 3.1536e7));
        assert_eq!(m.to_string(), "NUMBER:second:3.1536e+07");
    }

    #[test]
    fn suffix_form() {
        let m = parse_measure(".25in").unwrap();
        assert!(m.same_quantity("in", 0.25));
        assert_eq!(m.to_string(), "NUMBER:in:.25");
        assert_eq!(parse_measure(&m.to_string()).unwrap(), m);
    }

    #[test]
    fn bad_tokens() {
        assert_eq!(parse_measure("NUMBER:parsec:1"), Err(Error::UnknownUnit("parsec".into())));
        assert_eq!(parse_measure(".25furlong"), Err(Error::UnknownUnit("furlong".into())));
        assert!(matches!(parse_measure("NUMBER:second:1.2.3"), Err(Error::MalformedNumber(_))));
        assert!(matches!(parse_measure("NUMBER:second:"), Err(Error::MalformedNumber(_))));
        assert!(matches!(parse_measure("NUMBER:second"), Err(Error::MalformedNumber(_))));
        assert!(matches!(parse_measure("NUMBER:second:1e999"), Err(Error::MalformedNumber(_))));
        assert!(matches!(parse_measure("in"), Err(Error::MalformedNumber(_))));
    }

    #[test]
    fn measure_detection() {
        assert!(looks_like_measure(".25in"));
        assert!(looks_like_measure("NUMBER:x:y"));
        assert!(looks_like_measure("12kg"));
        assert!(!looks_like_measure("3d-printer"));
        assert!(!looks_like_measure("event01-of"));
        assert!(!looks_like_measure("1st"));
    }

    #[test]
    fn spelling_is_kept() {
        let a = parse_measure("NUMBER:second:3600").unwrap();
        let b = parse_measure("NUMBER:second:3.6e3").unwrap();
        assert_ne!(a, b);
        assert_eq!(a.value(), b.value());
    }
}
