//! Parsing and formatting of `<number><unit>` quantities.
//!
//! Only the closed set of dimensions needed by trap configs and pulse
//! programs is supported. Values are returned in SI base units. Frequencies
//! stay in ordinary Hz here; conversion to rad/s happens at the call site
//! that needs it.

use std::f64::consts::PI;
use std::fmt;

use serde::{Deserialize, Serialize};
use thiserror::Error;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Dimension {
    Dimensionless,
    Frequency,
    Time,
    MagneticField,
    Gradient,
    Curvature,
    Length,
    Angle,
}

impl Dimension {
    /// SI unit symbol used by [`format_quantity`].
    pub fn si_unit(self) -> &'static str {
        match self {
            Dimension::Dimensionless => "",
            Dimension::Frequency => "Hz",
            Dimension::Time => "s",
            Dimension::MagneticField => "T",
            Dimension::Gradient => "T/m",
            Dimension::Curvature => "T/m^2",
            Dimension::Length => "m",
            Dimension::Angle => "rad",
        }
    }
}

impl fmt::Display for Dimension {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let name = match self {
            Dimension::Dimensionless => "dimensionless",
            Dimension::Frequency => "frequency",
            Dimension::Time => "time",
            Dimension::MagneticField => "magnetic field",
            Dimension::Gradient => "field gradient",
            Dimension::Curvature => "field curvature",
            Dimension::Length => "length",
            Dimension::Angle => "angle",
        };
        f.write_str(name)
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum UnitError {
    #[error("unknown unit `{0}`")]
    UnknownUnit(String),
    #[error("malformed number `{0}`")]
    MalformedNumber(String),
}

const UNITS: &[(&str, f64, Dimension)] = &[
    ("Hz", 1.0, Dimension::Frequency),
    ("kHz", 1e3, Dimension::Frequency),
    ("MHz", 1e6, Dimension::Frequency),
    ("GHz", 1e9, Dimension::Frequency),
    ("s", 1.0, Dimension::Time),
    ("ms", 1e-3, Dimension::Time),
    ("us", 1e-6, Dimension::Time),
    ("T", 1.0, Dimension::MagneticField),
    ("mT", 1e-3, Dimension::MagneticField),
    ("uT", 1e-6, Dimension::MagneticField),
    ("T/m", 1.0, Dimension::Gradient),
    ("T/m^2", 1.0, Dimension::Curvature),
    ("m", 1.0, Dimension::Length),
    ("um", 1e-6, Dimension::Length),
    ("nm", 1e-9, Dimension::Length),
    ("rad", 1.0, Dimension::Angle),
    ("deg", PI / 180.0, Dimension::Angle),
    ("pi", PI, Dimension::Angle),
];

/// Length in bytes of the leading decimal number in `text` (sign, digits,
/// fraction, exponent). Returns 0 if there is none.
pub(crate) fn number_prefix_len(text: &str) -> usize {
    let b = text.as_bytes();
    let mut i = 0;
    if i < b.len() && (b[i] == b'+' || b[i] == b'-') {
        i += 1;
    }
    let digits_start = i;
    while i < b.len() && b[i].is_ascii_digit() {
        i += 1;
    }
    let mut n_digits = i - digits_start;
    if i < b.len() && b[i] == b'.' {
        i += 1;
        let frac_start = i;
        while i < b.len() && b[i].is_ascii_digit() {
            i += 1;
        }
        n_digits += i - frac_start;
    }
    if n_digits == 0 {
        return 0;
    }
    // Exponent only if it is followed by at least one digit.
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
    i
}

/// Parse `"<number><unit>"` into an SI value and its dimension.
///
/// A bare number is dimensionless. The `pi` suffix denotes multiples of π
/// radians.
pub fn parse_quantity(text: &str) -> Result<(f64, Dimension), UnitError> {
    let text = text.trim();
    let split = number_prefix_len(text);
    let (num, unit) = text.split_at(split);
    if split == 0 {
        // Either garbage or a unit without a number; report the number part.
        let bad_len = text
            .char_indices()
            .find(|(_, c)| c.is_ascii_alphabetic() && *c != 'e' && *c != 'E')
            .map(|(i, _)| i)
            .unwrap_or(text.len());
        let bad = if bad_len == 0 { text } else { &text[..bad_len] };
        return Err(UnitError::MalformedNumber(bad.to_string()));
    }
    let value: f64 = num
        .parse()
        .map_err(|_| UnitError::MalformedNumber(num.to_string()))?;
    if !value.is_finite() {
        return Err(UnitError::MalformedNumber(num.to_string()));
    }
    if unit.is_empty() {
        return Ok((value, Dimension::Dimensionless));
    }
    UNITS
        .iter()
        .find(|(sym, _, _)| *sym == unit)
        .map(|&(_, scale, dim)| (value * scale, dim))
        .ok_or_else(|| UnitError::UnknownUnit(unit.to_string()))
}

/// Format an SI value with the dimension's base unit. Uses the shortest
/// representation that parses back to the identical `f64`.
pub fn format_quantity(value: f64, dim: Dimension) -> String {
    format!("{:e}{}", value, dim.si_unit())
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    #[test]
    fn unit_scaling() {
        assert_eq!(parse_quantity("100kHz").unwrap(), (1.0e5, Dimension::Frequency));
        assert_eq!(parse_quantity("10T/m").unwrap(), (10.0, Dimension::Gradient));
        let (v, d) = parse_quantity("0.5pi").unwrap();
        assert_eq!(d, Dimension::Angle);
        assert!((v - std::f64::consts::FRAC_PI_2).abs() < 1e-15);
        assert_eq!(parse_quantity("-19.3Hz").unwrap(), (-19.3, Dimension::Frequency));
        assert_eq!(parse_quantity("1e-3s").unwrap(), (1e-3, Dimension::Time));
        assert_eq!(parse_quantity("5us").unwrap().1, Dimension::Time);
        assert_eq!(parse_quantity("0").unwrap(), (0.0, Dimension::Dimensionless));
        assert_eq!(parse_quantity("180deg").unwrap().0, PI);
    }

    #[test]
    fn errors_carry_offending_text() {
        assert_eq!(
            parse_quantity("3furlong"),
            Err(UnitError::UnknownUnit("furlong".into()))
        );
        assert_eq!(parse_quantity("kHz"), Err(UnitError::MalformedNumber("kHz".into())));
        assert_eq!(parse_quantity("..5Hz"), Err(UnitError::MalformedNumber("..5".into())));
        assert!(matches!(parse_quantity("1.2.3T"), Err(UnitError::UnknownUnit(u)) if u == ".3T"));
    }

    #[test]
    fn exponent_needs_digits() {
        // "2e" is not an exponent; the unit would be "e".
        assert_eq!(parse_quantity("2e"), Err(UnitError::UnknownUnit("e".into())));
    }

    fn any_dim() -> impl Strategy<Value = Dimension> {
        prop_oneof![
            Just(Dimension::Dimensionless),
            Just(Dimension::Frequency),
            Just(Dimension::Time),
            Just(Dimension::MagneticField),
            Just(Dimension::Gradient),
            Just(Dimension::Curvature),
            Just(Dimension::Length),
            Just(Dimension::Angle),
        ]
    }

    proptest! {
        #[test]
        fn format_parse_round_trip(v in -1e12f64..1e12, exp in -20i32..20, dim in any_dim()) {
            let x = v * 10f64.powi(exp);
            let (back, d) = parse_quantity(&format_quantity(x, dim)).unwrap();
            prop_assert_eq!(d, dim);
            prop_assert!((back - x).abs() <= 1e-12 * x.abs());
        }
    }
}
