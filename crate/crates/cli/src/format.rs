//! Numeric output at twelve significant digits.

use std::collections::BTreeMap;

use cvwerner::MeasureReport;
use serde::Serialize;

pub const SIG_DIGITS: usize = 12;

/// Formats `x` with [`SIG_DIGITS`] significant digits, trailing zeros
/// removed. Plain decimal notation for exponents in `[-5, 12)`, scientific
/// otherwise. Parsing the output and formatting again gives the same text.
pub fn fmt_sig(x: f64) -> String {
    if x == 0.0 {
        return "0".to_string();
    }
    if !x.is_finite() {
        return x.to_string();
    }
    let sci = format!("{:.*e}", SIG_DIGITS - 1, x);
    let (mantissa, exp) = sci.split_once('e').expect("scientific format");
    let exp: i32 = exp.parse().expect("integer exponent");
    let negative = mantissa.starts_with('-');
    let digits: String = mantissa.chars().filter(char::is_ascii_digit).collect();
    let digits = digits.trim_end_matches('0');
    let digits = if digits.is_empty() { "0" } else { digits };
    let sign = if negative { "-" } else { "" };
    if !(-5..12).contains(&exp) {
        let (head, tail) = digits.split_at(1);
        return if tail.is_empty() {
            format!("{sign}{head}e{exp}")
        } else {
            format!("{sign}{head}.{tail}e{exp}")
        };
    }
    if exp < 0 {
        let zeros = "0".repeat((-exp - 1) as usize);
        return format!("{sign}0.{zeros}{digits}");
    }
    let int_len = exp as usize + 1;
    if digits.len() <= int_len {
        format!("{sign}{digits}{}", "0".repeat(int_len - digits.len()))
    } else {
        let (int, frac) = digits.split_at(int_len);
        format!("{sign}{int}.{frac}")
    }
}

/// `x` rounded to [`SIG_DIGITS`] significant digits.
pub fn round_sig(x: f64) -> f64 {
    fmt_sig(x).parse().unwrap_or(x)
}

/// Unit label of a result column; `None` for dimensionless quantities.
pub fn unit(column: &str) -> Option<&'static str> {
    match column {
        "discord"
        | "gaussian_discord"
        | "conditional_entropy"
        | "std_error"
        | "delta0"
        | "gap"
        | "gap_normalized"
        | "delta0_approx"
        | "gap_approx"
        | "s_b"
        | "s_global"
        | "s_reduced"
        | "h_eig"
        | "U"
        | "L"
        | "clipped"
        | "mid" => Some("nats"),
        _ => None,
    }
}

/// Header text of a column: the name followed by its unit, if any.
pub fn header(column: &str) -> String {
    match unit(column) {
        Some(u) => format!("{column} ({u})"),
        None => column.to_string(),
    }
}

#[derive(Serialize)]
struct RoundedReport<'a> {
    measure: String,
    inputs: BTreeMap<&'a str, f64>,
    results: BTreeMap<&'a str, f64>,
    units: &'static str,
    #[serde(skip_serializing_if = "Option::is_none")]
    region: Option<String>,
    #[serde(skip_serializing_if = "Option::is_none")]
    cutoff: Option<usize>,
    error_budget: BTreeMap<&'static str, f64>,
    wall_time_s: f64,
}

fn rounded_map(m: &BTreeMap<String, f64>) -> BTreeMap<&str, f64> {
    m.iter().map(|(k, &v)| (k.as_str(), round_sig(v))).collect()
}

/// Pretty JSON of a report with every number at twelve significant digits.
pub fn report_json(report: &MeasureReport) -> String {
    let b = report.error_budget;
    let rounded = RoundedReport {
        measure: report.measure.to_string(),
        inputs: rounded_map(&report.inputs),
        results: rounded_map(&report.results),
        units: "nats",
        region: report.region.map(|r| r.to_string()),
        cutoff: report.cutoff,
        error_budget: BTreeMap::from([
            ("truncation_tail", round_sig(b.truncation_tail)),
            ("quadrature", round_sig(b.quadrature)),
            ("series_tail", round_sig(b.series_tail)),
        ]),
        wall_time_s: round_sig(report.wall_time_s),
    };
    serde_json::to_string_pretty(&rounded).expect("report serializes")
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn twelve_digits() {
        assert_eq!(fmt_sig(0.224717318687), "0.224717318687");
        assert_eq!(fmt_sig(0.2247173186871234), "0.224717318687");
        assert_eq!(fmt_sig(0.1 + 0.2), "0.3");
        assert_eq!(fmt_sig(-1.5), "-1.5");
        assert_eq!(fmt_sig(100.0), "100");
        assert_eq!(fmt_sig(9.9999999999999), "10");
        assert_eq!(fmt_sig(1.23e-7), "1.23e-7");
        assert_eq!(fmt_sig(-2.5e15), "-2.5e15");
        assert_eq!(fmt_sig(0.000012345), "0.000012345");
        assert_eq!(fmt_sig(0.0), "0");
    }

    #[test]
    fn formatting_is_idempotent() {
        let mut x = 1.234_567_890_123_456e-9;
        for _ in 0..60 {
            let s = fmt_sig(x);
            assert_eq!(fmt_sig(s.parse().unwrap()), s);
            x *= -3.7;
        }
    }
}
